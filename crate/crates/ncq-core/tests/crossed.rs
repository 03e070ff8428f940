use num_complex::Complex64;

use ncq_core::crossed::{
    conv_op, convolve, crossed_from_json, crossed_to_json, left_translation, localized_symbol,
    mult_op, nu_transport, omega_symbol_from_json, omega_symbol_to_json, op_omega,
    product_symbol, product_symbol_op, restrict_to_orbit, schrodinger, schrodinger_inverse,
    spectrum, system_from_json, system_to_json, theta_action, twisted_convolve, twisted_involute,
    CrossedElement, DynamicalSystem, FactoredQuantization, OmegaSymbol,
};
use ncq_core::groups::{make_group, FiniteGroup, TauMap};
use ncq_core::harmonic::{ift_second, FourierField, GroupFunction, TwoVarFunction};
use ncq_core::la::{hausdorff, hs_norm, max_abs_diff, CMat};
use ncq_core::quantize::{op_from_symbol, right_translation, HSOperator, Side};
use ncq_core::symbolalg::symmetry_odd_power;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_tau_fixing_e(group: &FiniteGroup, seed: u64) -> TauMap {
    let mut values: Vec<usize> = TauMap::random(group, seed).values().to_vec();
    values[group.identity()] = group.identity();
    TauMap::from_values(group, values).unwrap()
}

#[test]
fn scalar_elements_convolve_like_the_group_algebra() {
    let (group, _) = make_group("symmetric:3").unwrap();
    let n = group.order();
    let f = GroupFunction::random(n, 1);
    let g = GroupFunction::random(n, 2);
    let expected = convolve(&group, &f, &g);
    for (_, tau) in TauMap::sample_set(&group, 3) {
        let product = twisted_convolve(
            &group,
            &tau,
            &CrossedElement::scalar(&group, &f),
            &CrossedElement::scalar(&group, &g),
        )
        .unwrap();
        assert!(product.constant_in_q);
        product.validate().unwrap();
        for q in 0..n {
            for x in 0..n {
                assert!((product.value(q, x) - expected.values[x]).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn coefficient_projections_multiply_pointwise() {
    let (group, _) = make_group("dihedral:4").unwrap();
    let n = group.order();
    let e = group.identity();
    let f = GroupFunction::random(n, 4);
    let g = GroupFunction::random(n, 5);
    let project = |h: &GroupFunction| {
        CrossedElement::new(TwoVarFunction {
            values: CMat::from_fn(n, n, |q, x| if x == e { h.values[q] } else { c(0.0, 0.0) }),
        })
    };
    for tau in [TauMap::constant_e(&group), random_tau_fixing_e(&group, 6)] {
        let product = twisted_convolve(&group, &tau, &project(&f), &project(&g)).unwrap();
        for q in 0..n {
            for x in 0..n {
                let expected = if x == e {
                    f.values[q] * g.values[q]
                } else {
                    c(0.0, 0.0)
                };
                assert!((product.value(q, x) - expected).norm() <= 1e-13);
            }
        }
    }
}

#[test]
fn twisted_convolution_is_associative() {
    let (group, _) = make_group("symmetric:3").unwrap();
    let n = group.order();
    let tau = TauMap::random(&group, 7);
    for trial in 0..10u64 {
        let a = CrossedElement::random(n, 10 + trial);
        let b = CrossedElement::random(n, 20 + trial);
        let c = CrossedElement::random(n, 30 + trial);
        let left = twisted_convolve(
            &group,
            &tau,
            &twisted_convolve(&group, &tau, &a, &b).unwrap(),
            &c,
        )
        .unwrap();
        let right = twisted_convolve(
            &group,
            &tau,
            &a,
            &twisted_convolve(&group, &tau, &b, &c).unwrap(),
        )
        .unwrap();
        assert!(max_abs_diff(&left.phi.values, &right.phi.values) <= 1e-11);
    }
}

#[test]
fn twisted_involution_is_involutive_and_antimultiplicative() {
    let (group, _) = make_group("symmetric:3").unwrap();
    let n = group.order();
    let tau = TauMap::random(&group, 8);
    let a = CrossedElement::random(n, 40);
    let b = CrossedElement::random(n, 41);

    let twice = twisted_involute(&group, &tau, &twisted_involute(&group, &tau, &a));
    assert_eq!(twice.phi.values, a.phi.values);

    let lhs = twisted_involute(&group, &tau, &twisted_convolve(&group, &tau, &a, &b).unwrap());
    let rhs = twisted_convolve(
        &group,
        &tau,
        &twisted_involute(&group, &tau, &b),
        &twisted_involute(&group, &tau, &a),
    )
    .unwrap();
    assert!(max_abs_diff(&lhs.phi.values, &rhs.phi.values) <= 1e-11);

    // at a two-sided symmetry function the coefficient shift cancels
    let (odd, _) = make_group("cyclic:9").unwrap();
    let sigma = symmetry_odd_power(&odd).unwrap();
    let m = odd.order();
    let f = CrossedElement::random(m, 42);
    let inv = twisted_involute(&odd, &sigma, &f);
    for q in 0..m {
        for x in 0..m {
            assert_eq!(inv.value(q, x), f.value(q, odd.inv(x)).conj());
        }
    }
}

#[test]
fn schrodinger_is_a_star_homomorphism() {
    for spec in ["cyclic:5", "symmetric:3"] {
        let (group, _) = make_group(spec).unwrap();
        let n = group.order();
        for (_, tau) in TauMap::sample_set(&group, 9) {
            for trial in 0..20u64 {
                let a = CrossedElement::random(n, 100 + trial);
                let b = CrossedElement::random(n, 200 + trial);
                let sch_ab = schrodinger(
                    &group,
                    &tau,
                    &twisted_convolve(&group, &tau, &a, &b).unwrap(),
                );
                let product = schrodinger(&group, &tau, &a).compose(&schrodinger(&group, &tau, &b));
                assert!(hs_norm(&(&sch_ab.mat - &product.mat)) <= 1e-10);

                let sch_star = schrodinger(&group, &tau, &twisted_involute(&group, &tau, &a));
                let adjoint = schrodinger(&group, &tau, &a).adjoint();
                assert!(hs_norm(&(&sch_star.mat - &adjoint.mat)) <= 1e-10);
            }
        }
    }
}

#[test]
fn schrodinger_collapses_distinguished_elements() {
    let (group, _) = make_group("dihedral:4").unwrap();
    let n = group.order();
    let e = group.identity();

    let f = GroupFunction::random(n, 50);
    let projected = CrossedElement::new(TwoVarFunction {
        values: CMat::from_fn(n, n, |q, x| if x == e { f.values[q] } else { c(0.0, 0.0) }),
    });
    for tau in [TauMap::constant_e(&group), random_tau_fixing_e(&group, 51)] {
        let op = schrodinger(&group, &tau, &projected);
        assert_eq!(op.mat, mult_op(&f).mat);
    }

    for z in group.elements() {
        let shifted = CrossedElement::scalar(&group, &GroupFunction::delta(n, z));
        for (_, tau) in TauMap::sample_set(&group, 52) {
            let op = schrodinger(&group, &tau, &shifted);
            assert_eq!(op.mat, left_translation(&group, z).mat);
        }
    }
}

#[test]
fn schrodinger_is_a_linear_bijection() {
    let (group, _) = make_group("symmetric:3").unwrap();
    let n = group.order();
    let tau = TauMap::random(&group, 60);

    let f = CrossedElement::random(n, 61);
    let back = schrodinger_inverse(&group, &tau, &schrodinger(&group, &tau, &f)).unwrap();
    assert_eq!(back.phi.values, f.phi.values);

    // surjectivity onto the full matrix algebra: any matrix pulls back
    let target = HSOperator {
        mat: TwoVarFunction::random(n, 62).values,
    };
    let pulled = schrodinger_inverse(&group, &tau, &target).unwrap();
    assert_eq!(schrodinger(&group, &tau, &pulled).mat, target.mat);
}

#[test]
fn schrodinger_matches_quantization_through_the_partial_transform() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    for (_, tau) in TauMap::sample_set(&group, 70) {
        let a = ncq_core::harmonic::Symbol::random(&group, &dual, 71);
        let phi = CrossedElement::new(ift_second(&group, &dual, &a).unwrap());
        let through_sch = schrodinger(&group, &tau, &phi);
        let direct = op_from_symbol(&group, &dual, Side::Left, &tau, &a).unwrap();
        assert!(max_abs_diff(&through_sch.mat, &direct.mat) <= 1e-12);
    }
}

#[test]
fn nu_transport_moves_the_ordering_parameter() {
    let (group, _) = make_group("dihedral:4").unwrap();
    let n = group.order();
    let taus: Vec<TauMap> = TauMap::sample_set(&group, 80)
        .into_iter()
        .map(|(_, t)| t)
        .collect();
    let f = CrossedElement::random(n, 81);

    for tau in &taus {
        let same = nu_transport(&group, tau, tau, &f);
        assert_eq!(same.phi.values, f.phi.values);
    }

    for tau in &taus {
        for tau_prime in &taus {
            let moved = nu_transport(&group, tau, tau_prime, &f);
            assert_eq!(
                schrodinger(&group, tau, &moved).mat,
                schrodinger(&group, tau_prime, &f).mat
            );
            let back = nu_transport(&group, tau_prime, tau, &moved);
            assert_eq!(back.phi.values, f.phi.values);
        }
    }

    // transports compose along chains of parameters
    let chained = nu_transport(
        &group,
        &taus[0],
        &taus[1],
        &nu_transport(&group, &taus[1], &taus[2], &f),
    );
    let direct = nu_transport(&group, &taus[0], &taus[2], &f);
    assert_eq!(chained.phi.values, direct.phi.values);
}

#[test]
fn multiplication_and_convolution_operators_interact_correctly() {
    let (group, _) = make_group("symmetric:3").unwrap();
    let n = group.order();
    let e = group.identity();
    let delta_e = GroupFunction::delta(n, e);

    for side in [Side::Left, Side::Right] {
        assert_eq!(conv_op(&group, side, &delta_e).mat, HSOperator::identity(n).mat);
    }
    for z in group.elements() {
        assert_eq!(
            conv_op(&group, Side::Left, &GroupFunction::delta(n, z)).mat,
            left_translation(&group, z).mat
        );
    }

    let f = GroupFunction::random(n, 90);
    let g = GroupFunction::random(n, 91);
    let cl = conv_op(&group, Side::Left, &f);
    let cr = conv_op(&group, Side::Right, &g);

    for x in group.elements() {
        let r = right_translation(&group, x);
        assert!(max_abs_diff(&cl.compose(&r).mat, &r.compose(&cl).mat) <= 1e-13);
    }
    assert!(max_abs_diff(&cl.compose(&cr).mat, &cr.compose(&cl).mat) <= 1e-13);

    let composed_left = conv_op(&group, Side::Left, &f)
        .compose(&conv_op(&group, Side::Left, &g));
    assert!(
        max_abs_diff(&composed_left.mat, &conv_op(&group, Side::Left, &convolve(&group, &f, &g)).mat)
            <= 1e-12
    );
    let composed_right = conv_op(&group, Side::Right, &f)
        .compose(&conv_op(&group, Side::Right, &g));
    assert!(
        max_abs_diff(&composed_right.mat, &conv_op(&group, Side::Right, &convolve(&group, &g, &f)).mat)
            <= 1e-12
    );

    // covariant pair: conjugating a multiplication by a left
    // translation translates the coefficient
    for x in group.elements() {
        let l = left_translation(&group, x);
        let conjugated = l.compose(&mult_op(&f)).compose(&l.adjoint());
        assert_eq!(conjugated.mat, mult_op(&theta_action(&group, x, &f)).mat);
    }
}

#[test]
fn product_symbols_factor_into_mult_and_conv() {
    let all = [
        FactoredQuantization::LeftConstE,
        FactoredQuantization::LeftIdentity,
        FactoredQuantization::RightConstE,
        FactoredQuantization::RightIdentity,
    ];

    // x-independent symbols: multiplication drops out, and on an
    // Abelian group all four agree with the one multiplier operator
    let (cyc, cdual) = make_group("cyclic:8").unwrap();
    let ones = GroupFunction::constant(cyc.order(), c(1.0, 0.0));
    let beta = FourierField::random(&cdual, 100);
    let mut built = Vec::new();
    for which in all {
        built.push(product_symbol_op(&cyc, &cdual, which, &ones, &beta).unwrap());
    }
    for op in &built[1..] {
        assert!(max_abs_diff(&op.mat, &built[0].mat) <= 1e-12);
    }
    let direct = op_from_symbol(
        &cyc,
        &cdual,
        Side::Right,
        &TauMap::constant_e(&cyc),
        &product_symbol(&cyc, &ones, &beta),
    )
    .unwrap();
    assert!(max_abs_diff(&built[0].mat, &direct.mat) <= 1e-12);

    // fiberwise-identity symbols leave only the multiplication
    let (group, dual) = make_group("symmetric:3").unwrap();
    let g = GroupFunction::random(group.order(), 101);
    let id_field = FourierField::identity(&dual);
    for which in all {
        let op = product_symbol_op(&group, &dual, which, &g, &id_field).unwrap();
        assert!(max_abs_diff(&op.mat, &mult_op(&g).mat) <= 1e-12);
    }

    // random product symbols: factorization equals direct quantization
    let beta = FourierField::random(&dual, 102);
    let a = product_symbol(&group, &g, &beta);
    for which in all {
        let factored = product_symbol_op(&group, &dual, which, &g, &beta).unwrap();
        let direct =
            op_from_symbol(&group, &dual, which.side(), &which.tau(&group), &a).unwrap();
        assert!(max_abs_diff(&factored.mat, &direct.mat) <= 1e-11);
    }
}

fn three_systems(group: &FiniteGroup, normal: &[usize]) -> Vec<DynamicalSystem> {
    vec![
        DynamicalSystem::translation(group),
        DynamicalSystem::quotient(group, normal).unwrap(),
        DynamicalSystem::seeded_conjugation(group, 7),
    ]
}

#[test]
fn covariant_families_respect_the_action() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let even = [0usize, 3, 4];
    let tau = TauMap::random(&group, 110);
    for system in three_systems(&group, &even) {
        let h = OmegaSymbol::random(system.omega_size(), &dual, 111);
        for w in 0..system.omega_size() {
            let base = op_omega(&group, &dual, &tau, &system, w, &h).unwrap();
            for z in group.elements() {
                let r = right_translation(&group, z);
                let conjugated = r.compose(&base).compose(&r.adjoint());
                let moved =
                    op_omega(&group, &dual, &tau, &system, system.apply(z, w), &h).unwrap();
                assert!(max_abs_diff(&conjugated.mat, &moved.mat) <= 1e-12);
            }
        }
    }
}

#[test]
fn translation_system_recovers_plain_quantization() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let system = DynamicalSystem::translation(&group);
    let h = OmegaSymbol::random(system.omega_size(), &dual, 120);
    let localized = localized_symbol(&group, &system, group.identity(), &h).unwrap();
    assert_eq!(localized.mats, h.mats);

    // a one-point set forces an x-independent symbol
    let single = DynamicalSystem::new(&group, 1, vec![vec![0]; group.order()]).unwrap();
    let h1 = OmegaSymbol::random(1, &dual, 121);
    let a = localized_symbol(&group, &single, 0, &h1).unwrap();
    for x in group.elements() {
        assert_eq!(a.mats[x], h1.mats[0]);
    }

    assert!(op_omega(&group, &dual, &TauMap::constant_e(&group), &single, 3, &h1).is_err());
}

#[test]
fn orbits_partition_the_point_set() {
    let (z3, _) = make_group("cyclic:3").unwrap();
    let translation = DynamicalSystem::translation(&z3);
    assert_eq!(translation.orbits(), vec![vec![0, 1, 2]]);

    let identity_action = DynamicalSystem::new(&z3, 4, vec![vec![0, 1, 2, 3]; 3]).unwrap();
    assert_eq!(
        identity_action.orbits(),
        vec![vec![0], vec![1], vec![2], vec![3]]
    );

    let (s3, _) = make_group("symmetric:3").unwrap();
    let quotient = DynamicalSystem::quotient(&s3, &[0, 3, 4]).unwrap();
    assert_eq!(quotient.omega_size(), 2);
    assert_eq!(quotient.orbits(), vec![vec![0, 1]]);
}

#[test]
fn spectra_are_constant_along_orbits() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let even = [0usize, 3, 4];
    let tau = TauMap::random(&group, 130);
    for (k, system) in three_systems(&group, &even).into_iter().enumerate() {
        let h = OmegaSymbol::random(system.omega_size(), &dual, 131 + k as u64);
        for orbit in system.orbits() {
            let reference = spectrum(&op_omega(&group, &dual, &tau, &system, orbit[0], &h).unwrap())
                .unwrap();
            for &w in &orbit[1..] {
                let other =
                    spectrum(&op_omega(&group, &dual, &tau, &system, w, &h).unwrap()).unwrap();
                assert!(hausdorff(&reference, &other) <= 1e-8);
            }
        }
    }
}

#[test]
fn orbit_restriction_commutes_with_quantization() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::random(&group, 140);
    // a disconnected system: translation plus two fixed points
    let n = group.order();
    let action: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let mut row: Vec<usize> = (0..n).map(|w| group.mul(x, w)).collect();
            row.push(n);
            row.push(n + 1);
            row
        })
        .collect();
    let system = DynamicalSystem::new(&group, n + 2, action).unwrap();
    let h = OmegaSymbol::random(system.omega_size(), &dual, 141);
    for w in 0..system.omega_size() {
        let (sub, h_sub, w_sub) = restrict_to_orbit(&group, &system, w, &h).unwrap();
        let full = op_omega(&group, &dual, &tau, &system, w, &h).unwrap();
        let restricted = op_omega(&group, &dual, &tau, &sub, w_sub, &h_sub).unwrap();
        assert_eq!(full.mat, restricted.mat);
    }
}

#[test]
fn dynamical_system_validation_rejects_bad_tables() {
    let (z3, _) = make_group("cyclic:3").unwrap();
    // not a permutation
    assert!(DynamicalSystem::new(&z3, 2, vec![vec![0, 0]; 3]).is_err());
    // identity does not act trivially
    assert!(DynamicalSystem::new(&z3, 2, vec![vec![1, 0]; 3]).is_err());
    // rows are permutations but composition breaks the group law
    let bad = vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2]];
    assert!(DynamicalSystem::new(&z3, 3, bad).is_err());

    let (s3, _) = make_group("symmetric:3").unwrap();
    // a non-normal subgroup is rejected
    assert!(DynamicalSystem::quotient(&s3, &[0, 1]).is_err());
    assert!(DynamicalSystem::quotient(&s3, &[0, 3, 4]).is_ok());
}

#[test]
fn json_round_trips_preserve_everything() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    for system in three_systems(&group, &[0, 3, 4]) {
        let text = system_to_json(&system).unwrap();
        let back = system_from_json(&group, &text).unwrap();
        assert_eq!(back, system);
    }

    let h = OmegaSymbol::random(4, &dual, 150);
    let text = omega_symbol_to_json(&dual, &h).unwrap();
    let back = omega_symbol_from_json(&dual, 4, &text).unwrap();
    assert_eq!(back, h);

    let f = CrossedElement::random(group.order(), 151);
    let text = crossed_to_json(&f).unwrap();
    let back = crossed_from_json(&text).unwrap();
    assert_eq!(back, f);

    let mut lying = CrossedElement::random(group.order(), 152);
    lying.constant_in_q = true;
    let text = crossed_to_json(&lying).unwrap();
    assert!(crossed_from_json(&text).is_err());
}
