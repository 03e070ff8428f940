//! Acceptance gate: every release criterion at its stated tolerance
//! and full scale, one pass/fail line per criterion. The computations
//! are the same public residual functions the `ncq suite` command
//! runs, so a green gate and a green CLI report certify identically.

use ncq::suite::{
    adjoint_law_residual, algebra_laws_residual, covariance_residual, crossed_product_residual,
    factorization_residual, hermitian_quantization_residual, isometry_residual,
    left_right_coincidence_residual, left_right_separation, nilpotent_bch_residual,
    nilpotent_cocycle_residual, nilpotent_midpoint_residual, nilpotent_symmetry_residual,
    plancherel_inversion_residual, quadrature_halving, rn_report_residual, schatten_violation,
    standard_systems, symmetry_construction_failures, symmetry_existence_failures,
    weyl_matrix_elements_residual, weyl_tau_change_residual, weyl_unitarity_residual,
    wigner_calculus_residual, wigner_orthogonality_residual, DEFAULT_SEED,
};
use ncq::suite::orbit_spectra_residual;
use ncq_core::groups::{make_group, CATALOG_SPECS};
use ncq_core::nilpotent::CoordinateTau;

fn report(criterion: &str, residual: f64, tolerance: f64) {
    let passed = residual <= tolerance;
    println!(
        "{criterion}: {} (residual {residual:.2e}, tolerance {tolerance:.1e})",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(
        passed,
        "{criterion}: residual {residual:.2e} exceeds {tolerance:.1e}"
    );
}

#[test]
fn criterion_01_plancherel_and_inversion() {
    let mut worst = 0.0f64;
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec).unwrap();
        let r = plancherel_inversion_residual(&group, &dual, DEFAULT_SEED, 100).unwrap();
        worst = worst.max(r);
    }
    report("criterion 01 plancherel and inversion", worst, 1e-12);
}

#[test]
fn criterion_02_quantization_isometry() {
    let mut worst = 0.0f64;
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec).unwrap();
        let r = isometry_residual(&group, &dual, DEFAULT_SEED, 20).unwrap();
        worst = worst.max(r);
    }
    report("criterion 02 quantization isometry", worst, 1e-11);
}

#[test]
fn criterion_03_symbol_algebra_laws() {
    let mut worst = 0.0f64;
    for spec in ["dihedral:4", "symmetric:3"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(algebra_laws_residual(&group, &dual, DEFAULT_SEED).unwrap());
        worst = worst.max(wigner_calculus_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    report("criterion 03 symbol algebra laws", worst, 1e-10);
}

#[test]
fn criterion_04_adjoint_and_symmetry() {
    let mut worst = 0.0f64;
    for spec in ["symmetric:3", "dihedral:4"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(adjoint_law_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    let existence = symmetry_existence_failures().unwrap();
    let construction = symmetry_construction_failures().unwrap();
    assert_eq!(existence, 0.0, "symmetry existence table has failures");
    assert_eq!(construction, 0.0, "symmetry construction has failures");
    worst = worst.max(hermitian_quantization_residual(DEFAULT_SEED).unwrap());
    report("criterion 04 adjoint and symmetry", worst, 1e-12);
}

#[test]
fn criterion_05_weyl_wigner_layer() {
    let mut worst = 0.0f64;
    for spec in ["symmetric:3", "dihedral:4", "quaternion8", "cyclic:4"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(weyl_unitarity_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    for spec in ["dihedral:4", "symmetric:3"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(weyl_tau_change_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    {
        let (group, dual) = make_group("symmetric:3").unwrap();
        worst = worst.max(weyl_matrix_elements_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    for spec in ["symmetric:3", "quaternion8"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(wigner_orthogonality_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    report("criterion 05 weyl and wigner layer", worst, 1e-11);
}

#[test]
fn criterion_06_schatten_bounds() {
    let mut worst = 0.0f64;
    for spec in ["symmetric:3", "dihedral:4"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(schatten_violation(&group, &dual, DEFAULT_SEED, 50).unwrap());
    }
    report("criterion 06 schatten bounds", worst, 1e-10);
}

#[test]
fn criterion_07_crossed_product() {
    let mut worst = 0.0f64;
    {
        let (group, dual) = make_group("symmetric:3").unwrap();
        worst = worst.max(crossed_product_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    for spec in ["symmetric:3", "cyclic:8"] {
        let (group, dual) = make_group(spec).unwrap();
        worst = worst.max(factorization_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    report("criterion 07 crossed product", worst, 1e-10);
}

#[test]
fn criterion_08_covariant_families() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let systems = standard_systems(&group).unwrap();
    let covariance = covariance_residual(&group, &dual, &systems, DEFAULT_SEED).unwrap();
    let spectra = orbit_spectra_residual(&group, &dual, &systems, DEFAULT_SEED).unwrap();
    let passed = covariance <= 1e-12 && spectra <= 1e-8;
    println!(
        "criterion 08 covariant families: {} (covariance {covariance:.2e} <= 1.0e-12, orbit spectra {spectra:.2e} <= 1.0e-8)",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "covariance {covariance:.2e}, spectra {spectra:.2e}");
}

#[test]
fn criterion_09_nilpotent_layer() {
    let bch = nilpotent_bch_residual(DEFAULT_SEED, 1000);
    assert!(bch <= 1e-12, "group axiom residual {bch:.2e} exceeds 1e-12");

    let halving = nilpotent_symmetry_residual(DEFAULT_SEED, 200);
    assert_eq!(halving, 0.0, "coordinate halving law must be exact");

    let midpoint = nilpotent_midpoint_residual(DEFAULT_SEED, 100).unwrap();
    assert!(midpoint <= 1e-14, "midpoint law residual {midpoint:.2e}");

    let cocycle = nilpotent_cocycle_residual(DEFAULT_SEED, 10, 10);
    assert!(cocycle <= 1e-12, "cocycle residual {cocycle:.2e}");

    let multiplier = rn_report_residual(CoordinateTau::Zero, 64, 8.0).unwrap();
    assert!(multiplier <= 1e-8, "flat multiplier residual {multiplier:.2e}");

    let hermitian = rn_report_residual(CoordinateTau::Half, 32, 6.0).unwrap();
    assert!(hermitian <= 1e-8, "symmetric kernel residual {hermitian:.2e}");

    let (coarsest, ratios) = quadrature_halving().unwrap();
    assert!(
        coarsest > 1.0,
        "coarse quadrature error {coarsest:.2e} leaves no room to converge"
    );
    for ratio in &ratios {
        assert!(
            (0.4..=0.55).contains(ratio),
            "quadrature error ratio {ratio:.3} is not a halving"
        );
    }

    let worst = bch
        .max(halving)
        .max(midpoint)
        .max(cocycle)
        .max(multiplier)
        .max(hermitian);
    report("criterion 09 nilpotent layer", worst, 1e-8);
}

#[test]
fn criterion_10_left_right_witness() {
    let (s3, s3_dual) = make_group("symmetric:3").unwrap();
    let separation = left_right_separation(&s3, &s3_dual).unwrap();
    assert!(
        separation > 0.1,
        "two-sided separation {separation:.3} is below the witness threshold"
    );

    let mut worst = 0.0f64;
    let mut abelian_count = 0usize;
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec).unwrap();
        if !group.is_abelian() {
            continue;
        }
        abelian_count += 1;
        worst = worst.max(left_right_coincidence_residual(&group, &dual, DEFAULT_SEED).unwrap());
    }
    assert_eq!(abelian_count, 9, "the catalog carries nine commutative groups");
    report("criterion 10 left-right witness", worst, 1e-13);
}
