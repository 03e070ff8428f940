use num_complex::Complex64;

use ncq_core::groups::{make_group, tau_tilde, FiniteGroup, TauMap, UnitaryDual};
use ncq_core::harmonic::{inner_b2_symbol, inner_l2, norm_b2_symbol, FourierField, GroupFunction, Symbol};
use ncq_core::la::{dagger, max_abs_diff};
use ncq_core::quantize::{op_from_symbol, wigner, Side};
use ncq_core::symbolalg::{
    adjoint_symbol, compose, convert_tau, involute, is_symmetry_function,
    symmetry_central_extension, symmetry_odd_power, symmetry_product, symmetry_search,
};

fn symbol_sub(a: &Symbol, b: &Symbol) -> Symbol {
    Symbol {
        mats: a
            .mats
            .iter()
            .zip(&b.mats)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(ma, mb)| ma - mb).collect())
            .collect(),
    }
}

fn symbol_scale(a: &Symbol, c: Complex64) -> Symbol {
    Symbol {
        mats: a
            .mats
            .iter()
            .map(|row| row.iter().map(|m| m * c).collect())
            .collect(),
    }
}

fn symbol_distance(dual: &UnitaryDual, a: &Symbol, b: &Symbol) -> f64 {
    norm_b2_symbol(dual, &symbol_sub(a, b))
}

fn hermitian_residual(m: &ncq_core::la::CMat) -> f64 {
    max_abs_diff(m, &dagger(m))
}

fn identity_symbol(group: &FiniteGroup, dual: &UnitaryDual) -> Symbol {
    Symbol::x_independent(group, &FourierField::identity(dual))
}

#[test]
fn identity_symbol_is_neutral_for_composition() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let id = identity_symbol(&group, &dual);
    for (_, tau) in TauMap::sample_set(&group, 11) {
        let a = Symbol::random(&group, &dual, 7);
        let left = compose(&group, &dual, &tau, &id, &a).unwrap();
        let right = compose(&group, &dual, &tau, &a, &id).unwrap();
        assert!(symbol_distance(&dual, &left, &a) <= 1e-11);
        assert!(symbol_distance(&dual, &right, &a) <= 1e-11);
    }
}

#[test]
fn composition_matches_the_operator_product() {
    for spec in ["dihedral:4", "symmetric:3"] {
        let (group, dual) = make_group(spec).unwrap();
        for (_, tau) in TauMap::sample_set(&group, 23) {
            let a = Symbol::random(&group, &dual, 1);
            let b = Symbol::random(&group, &dual, 2);
            let ab = compose(&group, &dual, &tau, &a, &b).unwrap();
            let op_ab = op_from_symbol(&group, &dual, Side::Right, &tau, &ab).unwrap();
            let product = op_from_symbol(&group, &dual, Side::Right, &tau, &a)
                .unwrap()
                .compose(&op_from_symbol(&group, &dual, Side::Right, &tau, &b).unwrap());
            assert!(max_abs_diff(&op_ab.mat, &product.mat) <= 1e-11);
        }
    }
}

#[test]
fn wigner_symbols_compose_by_pairing() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let n = group.order();
    let u1 = GroupFunction::random(n, 31);
    let v1 = GroupFunction::random(n, 32);
    let u2 = GroupFunction::random(n, 33);
    let v2 = GroupFunction::random(n, 34);
    for (_, tau) in TauMap::sample_set(&group, 35) {
        let w1 = wigner(&group, &dual, &tau, &u1, &v1).unwrap();
        let w2 = wigner(&group, &dual, &tau, &u2, &v2).unwrap();
        let composed = compose(&group, &dual, &tau, &w1, &w2).unwrap();
        let expected = symbol_scale(
            &wigner(&group, &dual, &tau, &u2, &v1).unwrap(),
            inner_l2(&v2, &u1),
        );
        assert!(symbol_distance(&dual, &composed, &expected) <= 1e-10);
    }
}

#[test]
fn involution_is_an_anti_automorphism() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let n = group.order();
    for (_, tau) in TauMap::sample_set(&group, 41) {
        let a = Symbol::random(&group, &dual, 3);
        let b = Symbol::random(&group, &dual, 4);
        let lhs = involute(&group, &dual, &tau, &compose(&group, &dual, &tau, &a, &b).unwrap())
            .unwrap();
        let rhs = compose(
            &group,
            &dual,
            &tau,
            &involute(&group, &dual, &tau, &b).unwrap(),
            &involute(&group, &dual, &tau, &a).unwrap(),
        )
        .unwrap();
        assert!(symbol_distance(&dual, &lhs, &rhs) <= 1e-10);

        let twice = involute(&group, &dual, &tau, &involute(&group, &dual, &tau, &a).unwrap())
            .unwrap();
        assert!(symbol_distance(&dual, &twice, &a) <= 1e-10);

        let u = GroupFunction::random(n, 43);
        let v = GroupFunction::random(n, 44);
        let flipped = involute(&group, &dual, &tau, &wigner(&group, &dual, &tau, &u, &v).unwrap())
            .unwrap();
        let swapped = wigner(&group, &dual, &tau, &v, &u).unwrap();
        assert!(symbol_distance(&dual, &flipped, &swapped) <= 1e-10);
    }
}

#[test]
fn star_algebra_laws_hold_for_random_triples() {
    for spec in ["cyclic:5", "symmetric:3", "quaternion8"] {
        let (group, dual) = make_group(spec).unwrap();
        let tau = TauMap::random(&group, 51);
        for trial in 0..20u64 {
            let a = Symbol::random(&group, &dual, 100 + trial);
            let b = Symbol::random(&group, &dual, 200 + trial);
            let c = Symbol::random(&group, &dual, 300 + trial);
            let ab_c = compose(
                &group,
                &dual,
                &tau,
                &compose(&group, &dual, &tau, &a, &b).unwrap(),
                &c,
            )
            .unwrap();
            let a_bc = compose(
                &group,
                &dual,
                &tau,
                &a,
                &compose(&group, &dual, &tau, &b, &c).unwrap(),
            )
            .unwrap();
            assert!(symbol_distance(&dual, &ab_c, &a_bc) <= 1e-10);
        }
    }
}

#[test]
fn weighted_pairings_respect_the_involution() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::random(&group, 61);
    let a = Symbol::random(&group, &dual, 5);
    let b = Symbol::random(&group, &dual, 6);
    let c = Symbol::random(&group, &dual, 7);
    let ab = compose(&group, &dual, &tau, &a, &b).unwrap();
    let a_star = involute(&group, &dual, &tau, &a).unwrap();
    let b_star = involute(&group, &dual, &tau, &b).unwrap();

    // moving a factor across the pairing conjugates it on its own side
    let lhs = inner_b2_symbol(&dual, &ab, &c);
    let via_left = inner_b2_symbol(
        &dual,
        &b,
        &compose(&group, &dual, &tau, &a_star, &c).unwrap(),
    );
    let via_right = inner_b2_symbol(
        &dual,
        &a,
        &compose(&group, &dual, &tau, &c, &b_star).unwrap(),
    );
    assert!((lhs - via_left).norm() <= 1e-10);
    assert!((lhs - via_right).norm() <= 1e-10);

    // the swapped variant <a, b* # c> forces the factors to commute,
    // so it must break down on a noncommutative group
    let swapped = inner_b2_symbol(
        &dual,
        &a,
        &compose(&group, &dual, &tau, &b_star, &c).unwrap(),
    );
    assert!((lhs - swapped).norm() > 1e-3);

    // the involution is an isometry that reverses the pairing
    let plain = inner_b2_symbol(&dual, &a, &b);
    let involuted = inner_b2_symbol(&dual, &b_star, &a_star);
    assert!((plain - involuted).norm() <= 1e-10);
}

#[test]
fn ordering_conversion_round_trips_and_matches_operators() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let taus = TauMap::sample_set(&group, 71);
    let a = Symbol::random(&group, &dual, 8);
    for (_, tau) in &taus {
        let same = convert_tau(&group, &dual, tau, tau, &a).unwrap();
        assert!(symbol_distance(&dual, &same, &a) <= 1e-12);
    }
    for (_, tau) in &taus {
        for (_, tau_prime) in &taus {
            let converted = convert_tau(&group, &dual, tau, tau_prime, &a).unwrap();
            let back = convert_tau(&group, &dual, tau_prime, tau, &converted).unwrap();
            assert!(symbol_distance(&dual, &back, &a) <= 1e-11);

            let direct = op_from_symbol(&group, &dual, Side::Right, tau_prime, &a).unwrap();
            let routed = op_from_symbol(&group, &dual, Side::Right, tau, &converted).unwrap();
            assert!(max_abs_diff(&direct.mat, &routed.mat) <= 1e-12);
        }
    }
}

#[test]
fn adjoint_law_produces_the_matrix_adjoint() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    for (_, tau) in TauMap::sample_set(&group, 81) {
        let a = Symbol::random(&group, &dual, 9);
        let (tilde, star) = adjoint_symbol(&group, &tau, &a);
        let direct = op_from_symbol(&group, &dual, Side::Right, &tau, &a)
            .unwrap()
            .adjoint();
        let routed = op_from_symbol(&group, &dual, Side::Right, &tilde, &star).unwrap();
        assert!(max_abs_diff(&direct.mat, &routed.mat) <= 1e-12);
    }

    let e = TauMap::constant_e(&group);
    let (tilde, _) = adjoint_symbol(&group, &e, &Symbol::zero(&group, &dual));
    assert_eq!(tilde, TauMap::identity(&group));

    let id_sym = identity_symbol(&group, &dual);
    let tau = TauMap::random(&group, 82);
    let (tilde, star) = adjoint_symbol(&group, &tau, &id_sym);
    let lhs = op_from_symbol(&group, &dual, Side::Right, &tau, &id_sym).unwrap();
    let rhs = op_from_symbol(&group, &dual, Side::Right, &tilde, &star).unwrap();
    let eye = ncq_core::quantize::HSOperator::identity(group.order());
    assert!(max_abs_diff(&lhs.mat, &eye.mat) <= 1e-12);
    assert!(max_abs_diff(&rhs.mat, &eye.mat) <= 1e-12);
}

#[test]
fn symmetry_search_settles_small_groups() {
    let (z1, _) = make_group("cyclic:1").unwrap();
    let found = symmetry_search(&z1, Side::Right, 10).unwrap();
    assert!(found.exists);
    assert_eq!(found.count, 1);
    assert!(!found.truncated);
    assert_eq!(found.witnesses[0].values(), &[0]);

    let (z2, _) = make_group("cyclic:2").unwrap();
    let found = symmetry_search(&z2, Side::Right, 10).unwrap();
    assert!(!found.exists);
    assert_eq!(found.count, 0);
    assert!(found.witnesses.is_empty());

    let (z3, _) = make_group("cyclic:3").unwrap();
    let found = symmetry_search(&z3, Side::Right, 100).unwrap();
    assert!(found.exists);
    assert_eq!(found.count, 9);
    assert!(!found.truncated);
    let squaring = TauMap::from_values(&z3, vec![0, 2, 1]).unwrap();
    assert!(found.witnesses.contains(&squaring));
    for w in &found.witnesses {
        assert!(is_symmetry_function(&z3, Side::Right, w));
    }

    // even order always fails through some element of order two
    for spec in ["cyclic:4", "cyclic:8", "dihedral:4", "symmetric:3", "quaternion8"] {
        let (group, _) = make_group(spec).unwrap();
        for side in [Side::Right, Side::Left] {
            let found = symmetry_search(&group, side, 1).unwrap();
            assert!(!found.exists, "{spec} should admit no symmetry function");
        }
    }
}

#[test]
fn symmetry_search_truncates_and_caps_feasible_orders() {
    let (z5, _) = make_group("cyclic:5").unwrap();
    let found = symmetry_search(&z5, Side::Right, 10).unwrap();
    assert!(found.exists);
    assert_eq!(found.count, 125);
    assert!(found.truncated);
    assert_eq!(found.witnesses.len(), 10);

    let none = symmetry_search(&z5, Side::Left, 0).unwrap();
    assert!(none.exists);
    assert!(none.witnesses.is_empty());
    assert!(none.truncated);

    // infeasibility is decided without enumeration, so big even groups
    // still answer
    let (s4, _) = make_group("symmetric:4").unwrap();
    assert!(!symmetry_search(&s4, Side::Right, 1).unwrap().exists);

    // feasible enumeration above order 12 is refused
    let (z15, _) = make_group("cyclic:15").unwrap();
    assert!(symmetry_search(&z15, Side::Right, 1).is_err());
}

#[test]
fn odd_power_construction_is_two_sided_and_found_by_search() {
    let (z5, _) = make_group("cyclic:5").unwrap();
    let sigma = symmetry_odd_power(&z5).unwrap();
    assert_eq!(sigma.values(), &[0, 3, 1, 4, 2]);
    assert!(is_symmetry_function(&z5, Side::Right, &sigma));
    assert!(is_symmetry_function(&z5, Side::Left, &sigma));
    let everything = symmetry_search(&z5, Side::Right, 125).unwrap();
    assert!(everything.witnesses.contains(&sigma));

    for spec in ["cyclic:3", "cyclic:9", "cyclic:15", "heisenberg:3", "product:cyclic:3,cyclic:5"] {
        let (group, _) = make_group(spec).unwrap();
        let sigma = symmetry_odd_power(&group).unwrap();
        assert!(is_symmetry_function(&group, Side::Right, &sigma));
        assert!(is_symmetry_function(&group, Side::Left, &sigma));
    }

    let (z4, _) = make_group("cyclic:4").unwrap();
    assert!(symmetry_odd_power(&z4).is_err());
}

#[test]
fn product_construction_yields_a_search_witness() {
    let (z3, _) = make_group("cyclic:3").unwrap();
    let (nine, _) = make_group("product:cyclic:3,cyclic:3").unwrap();
    let factor = symmetry_odd_power(&z3).unwrap();
    for side in [Side::Right, Side::Left] {
        let sigma = symmetry_product(&nine, &z3, &factor, &z3, &factor, side).unwrap();
        assert!(is_symmetry_function(&nine, side, &sigma));
        let everything = symmetry_search(&nine, side, 60_000).unwrap();
        assert!(!everything.truncated);
        assert!(everything.witnesses.contains(&sigma));
    }

    let bad = TauMap::constant_e(&z3);
    assert!(symmetry_product(&nine, &z3, &bad, &z3, &factor, Side::Right).is_err());
}

#[test]
fn central_extension_construction_covers_the_heisenberg_group() {
    let (ext, _) = make_group("heisenberg:3").unwrap();
    let (base, _) = make_group("product:cyclic:3,cyclic:3").unwrap();
    let (fiber, _) = make_group("cyclic:3").unwrap();
    let pairing = |h1: usize, h2: usize| (h1 / 3) * (h2 % 3) % 3;
    let sigma_base = symmetry_odd_power(&base).unwrap();
    let sigma_fiber = symmetry_odd_power(&fiber).unwrap();
    for side in [Side::Right, Side::Left] {
        let sigma = symmetry_central_extension(
            &ext,
            &base,
            &fiber,
            &pairing,
            &sigma_base,
            &sigma_fiber,
            side,
        )
        .unwrap();
        assert!(is_symmetry_function(&ext, side, &sigma));
    }

    let skewed = |h1: usize, h2: usize| ((h1 / 3) * (h2 % 3) + 1) % 3;
    assert!(symmetry_central_extension(
        &ext,
        &base,
        &fiber,
        &skewed,
        &sigma_base,
        &sigma_fiber,
        Side::Right,
    )
    .is_err());

    let (wrong_fiber, _) = make_group("symmetric:3").unwrap();
    assert!(symmetry_central_extension(
        &ext,
        &base,
        &wrong_fiber,
        &pairing,
        &sigma_base,
        &TauMap::constant_e(&wrong_fiber),
        Side::Right,
    )
    .is_err());
}

#[test]
fn hermitian_symbols_quantize_to_hermitian_operators_at_a_symmetry() {
    for spec in ["cyclic:3", "cyclic:5", "cyclic:9", "product:cyclic:3,cyclic:3", "heisenberg:3"] {
        let (group, dual) = make_group(spec).unwrap();
        let sigma = symmetry_odd_power(&group).unwrap();
        assert_eq!(tau_tilde(&group, &sigma), sigma);
        for seed in [1u64, 2, 3] {
            let a = Symbol::random_hermitian(&group, &dual, seed);
            for side in [Side::Right, Side::Left] {
                let op = op_from_symbol(&group, &dual, side, &sigma, &a).unwrap();
                assert!(hermitian_residual(&op.mat) <= 1e-12);
            }
        }
    }

    // one-sided witnesses from the search work on their own side
    let (z5, dual) = make_group("cyclic:5").unwrap();
    let found = symmetry_search(&z5, Side::Right, 5).unwrap();
    for sigma in &found.witnesses {
        let a = Symbol::random_hermitian(&z5, &dual, 17);
        let op = op_from_symbol(&z5, &dual, Side::Right, sigma, &a).unwrap();
        assert!(hermitian_residual(&op.mat) <= 1e-12);
    }
}
