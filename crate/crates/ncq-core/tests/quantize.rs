use num_complex::Complex64;

use ncq_core::groups::{make_group, TauMap};
use ncq_core::harmonic::{
    fourier, ift_second, inner_b2_dual_symbol, inner_b2_symbol, inner_l2, norm_b2_dual_symbol,
    norm_b2_symbol, norm_l2, symbol_to_dual, FourierField, GroupFunction, Symbol, TwoVarFunction,
};
use ncq_core::la::{dagger, eye, hs_inner, kron, max_abs, max_abs_diff, op_norm, CMat, CVec};
use ncq_core::quantize::{
    apply_cv, cv_point, embed_conj_tensor, fourier_wigner, kernel_from_symbol, op_from_json,
    op_from_symbol, op_to_json, po, rank_one, right_translation, schatten_norm, symbol_from_op,
    weyl, wigner, CvDirection, HSOperator, Side,
};

fn symbol_from_field(group_order: usize, phi: &FourierField) -> Symbol {
    Symbol {
        mats: (0..group_order).map(|_| phi.mats.clone()).collect(),
    }
}

#[test]
fn cv_collapses_as_expected_for_distinguished_taus() {
    let (group, _) = make_group("cyclic:4").unwrap();
    let e = TauMap::constant_e(&group);
    let id = TauMap::identity(&group);
    for x in group.elements() {
        for y in group.elements() {
            let w = group.mul(group.inv(y), x);
            assert_eq!(cv_point(&group, Side::Right, &e, CvDirection::Forward, x, y), (x, w));
            assert_eq!(cv_point(&group, Side::Right, &id, CvDirection::Forward, x, y), (y, w));
        }
    }
}

#[test]
fn cv_is_a_bijection_for_random_tau_on_both_sides() {
    let (group, _) = make_group("symmetric:3").unwrap();
    for seed in [1u64, 2, 3] {
        let tau = TauMap::random(&group, seed);
        for side in [Side::Right, Side::Left] {
            for x in group.elements() {
                for y in group.elements() {
                    let (u, w) = cv_point(&group, side, &tau, CvDirection::Forward, x, y);
                    assert_eq!(
                        cv_point(&group, side, &tau, CvDirection::Inverse, u, w),
                        (x, y)
                    );
                    let (a, b) = cv_point(&group, side, &tau, CvDirection::Inverse, x, y);
                    assert_eq!(
                        cv_point(&group, side, &tau, CvDirection::Forward, a, b),
                        (x, y)
                    );
                }
            }
        }
    }
}

#[test]
fn apply_cv_is_unitary_and_invertible() {
    let (group, _) = make_group("dihedral:4").unwrap();
    let tau = TauMap::random(&group, 11);
    let f = TwoVarFunction::random(group.order(), 12);
    let norm0 = f.values.norm();
    for side in [Side::Right, Side::Left] {
        let g = apply_cv(&group, side, &tau, CvDirection::Forward, &f);
        assert!((g.values.norm() - norm0).abs() <= 1e-13);
        let back = apply_cv(&group, side, &tau, CvDirection::Inverse, &g);
        assert!(max_abs_diff(&back.values, &f.values) <= 1e-15);
    }
    // a delta moves to the forward image of its support
    let mut d = TwoVarFunction::zero(group.order());
    d.values[(3, 5)] = Complex64::new(1.0, 0.0);
    let moved = apply_cv(&group, Side::Right, &tau, CvDirection::Inverse, &d);
    let (u, w) = cv_point(&group, Side::Right, &tau, CvDirection::Forward, 3, 5);
    assert_eq!(moved.values[(u, w)], Complex64::new(1.0, 0.0));
}

#[test]
fn identity_symbol_quantizes_to_the_identity_operator() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let a = symbol_from_field(group.order(), &FourierField::identity(&dual));
    for side in [Side::Right, Side::Left] {
        for (_, tau) in TauMap::sample_set(&group, 5) {
            let k = kernel_from_symbol(&group, &dual, side, &tau, &a).unwrap();
            assert!(max_abs_diff(&k, &eye(group.order())) <= 1e-13);
        }
    }
}

#[test]
fn scalar_x_symbol_with_constant_e_tau_is_a_multiplication_operator() {
    let (group, dual) = make_group("dihedral:5").unwrap();
    let g = GroupFunction::random(group.order(), 31);
    let a = Symbol {
        mats: (0..group.order())
            .map(|x| {
                dual.irreps()
                    .iter()
                    .map(|r| CMat::identity(r.dim, r.dim) * g.values[x])
                    .collect()
            })
            .collect(),
    };
    let tau = TauMap::constant_e(&group);
    for side in [Side::Right, Side::Left] {
        let k = kernel_from_symbol(&group, &dual, side, &tau, &a).unwrap();
        let diag = CMat::from_fn(group.order(), group.order(), |x, y| {
            if x == y {
                g.values[x]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(max_abs_diff(&k, &diag) <= 1e-12);
    }
}

#[test]
fn evaluation_symbol_gives_a_translation_kernel() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let z0 = 3usize;
    let a = Symbol {
        mats: (0..group.order())
            .map(|_| dual.irreps().iter().map(|r| dagger(r.mat(z0))).collect())
            .collect(),
    };
    for (_, tau) in TauMap::sample_set(&group, 13) {
        let k = kernel_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
        for x in group.elements() {
            for y in group.elements() {
                let expect = if group.mul(group.inv(y), x) == z0 { 1.0 } else { 0.0 };
                assert!((k[(x, y)] - Complex64::new(expect, 0.0)).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn kernel_agrees_with_the_transform_then_cv_route() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let a = Symbol::random(&group, &dual, 41);
    for side in [Side::Right, Side::Left] {
        for (_, tau) in TauMap::sample_set(&group, 17) {
            let direct = kernel_from_symbol(&group, &dual, side, &tau, &a).unwrap();
            let f = ift_second(&group, &dual, &a).unwrap();
            let routed = apply_cv(&group, side, &tau, CvDirection::Forward, &f);
            assert!(max_abs_diff(&direct, &routed.values) <= 1e-12);
        }
    }
}

#[test]
fn quantization_is_a_phase_space_isometry_and_is_invertible() {
    for spec in ["cyclic:8", "symmetric:3", "quaternion8"] {
        let (group, dual) = make_group(spec).unwrap();
        for side in [Side::Right, Side::Left] {
            for (name, tau) in TauMap::sample_set(&group, 23) {
                let a = Symbol::random(&group, &dual, 59);
                let op = op_from_symbol(&group, &dual, side, &tau, &a).unwrap();
                let lhs = op.hs_norm();
                let rhs = norm_b2_symbol(&dual, &a);
                assert!(
                    (lhs - rhs).abs() / rhs <= 1e-11,
                    "{spec} {name}: {lhs} vs {rhs}"
                );
                let back = symbol_from_op(&group, &dual, side, &tau, &op).unwrap();
                for x in group.elements() {
                    for i in 0..dual.len() {
                        assert!(max_abs_diff(&a.mats[x][i], &back.mats[x][i]) <= 1e-11);
                    }
                }
            }
        }
    }
}

#[test]
fn trace_pairing_matches_the_weighted_symbol_pairing() {
    let (group, dual) = make_group("dihedral:6").unwrap();
    let tau = TauMap::random(&group, 3);
    let a = Symbol::random(&group, &dual, 61);
    let b = Symbol::random(&group, &dual, 62);
    for side in [Side::Right, Side::Left] {
        let ta = op_from_symbol(&group, &dual, side, &tau, &a).unwrap();
        let tb = op_from_symbol(&group, &dual, side, &tau, &b).unwrap();
        let lhs = hs_inner(&ta.mat, &tb.mat);
        let rhs = inner_b2_symbol(&dual, &a, &b);
        assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0));
    }
}

#[test]
fn x_independent_symbols_reduce_to_fourier_multipliers() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let beta = FourierField::random(&dual, 71);
    let a = symbol_from_field(group.order(), &beta);
    let u = GroupFunction::random(group.order(), 72);
    for (_, tau) in TauMap::sample_set(&group, 29) {
        let op = op_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
        let lhs = fourier(&group, &dual, &op.apply(&u)).unwrap();
        let uhat = fourier(&group, &dual, &u).unwrap();
        for i in 0..dual.len() {
            let expect = &beta.mats[i] * &uhat.mats[i];
            assert!(max_abs_diff(&lhs.mats[i], &expect) <= 1e-12);
        }
    }
}

#[test]
fn left_and_right_calculi_agree_exactly_when_the_group_commutes() {
    for spec in ["cyclic:8", "cyclic:9", "product:cyclic:2,cyclic:2"] {
        let (group, dual) = make_group(spec).unwrap();
        assert!(group.is_abelian());
        let tau = TauMap::random(&group, 5);
        let a = Symbol::random(&group, &dual, 83);
        let right = op_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
        let left = op_from_symbol(&group, &dual, Side::Left, &tau, &a).unwrap();
        assert!(max_abs_diff(&right.mat, &left.mat) <= 1e-13, "{spec}");
    }
    // and a seeded counterexample on the smallest noncommutative group
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::constant_e(&group);
    let a = Symbol::random(&group, &dual, 83);
    let right = op_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
    let left = op_from_symbol(&group, &dual, Side::Left, &tau, &a).unwrap();
    assert!(max_abs_diff(&right.mat, &left.mat) > 0.1);
}

#[test]
fn weyl_operators_are_unitary_and_extend_right_translation() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let trivial = dual
        .irreps()
        .iter()
        .position(|r| r.dim == 1 && (0..group.order()).all(|x| (r.mat(x)[(0, 0)].re - 1.0).abs() < 1e-14))
        .unwrap();
    for (_, tau) in TauMap::sample_set(&group, 37) {
        for side in [Side::Right, Side::Left] {
            for xi in 0..dual.len() {
                for x in group.elements() {
                    let w = weyl(&group, &dual, side, &tau, xi, x).unwrap();
                    let d = w.mat.nrows();
                    assert!(
                        max_abs_diff(&(&w.mat * dagger(&w.mat)), &CMat::identity(d, d)) <= 1e-12
                    );
                }
            }
        }
        // the trivial fiber is translation by the inverse point
        for x in group.elements() {
            let w = weyl(&group, &dual, Side::Right, &tau, trivial, x).unwrap();
            let r = right_translation(&group, group.inv(x));
            assert!(max_abs_diff(&w.mat, &r.mat) <= 1e-14);
        }
    }
}

#[test]
fn changing_tau_multiplies_the_weyl_operator_by_a_fiber_phase() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let tau1 = TauMap::random(&group, 91);
    let tau2 = TauMap::random(&group, 92);
    for xi in 0..dual.len() {
        let rep = dual.irrep(xi);
        for x in group.elements() {
            let w1 = weyl(&group, &dual, Side::Right, &tau1, xi, x).unwrap();
            let w2 = weyl(&group, &dual, Side::Right, &tau2, xi, x).unwrap();
            let shift = group.mul(tau2.apply(x), group.inv(tau1.apply(x)));
            let factor = kron(&eye(group.order()), rep.mat(shift));
            assert!(max_abs_diff(&w2.mat, &(&factor * &w1.mat)) <= 1e-12);
        }
    }
}

#[test]
fn weyl_adjoint_translates_forward_with_the_conjugate_phase() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::random(&group, 93);
    for xi in 0..dual.len() {
        let rep = dual.irrep(xi);
        let d = rep.dim;
        for x in group.elements() {
            let w = weyl(&group, &dual, Side::Right, &tau, xi, x).unwrap();
            let adj = dagger(&w.mat);
            // [W* Theta](y) = xi(y x tau(x)^-1) Theta(y x)
            let mut expect = CMat::zeros(group.order() * d, group.order() * d);
            for y in group.elements() {
                let block = rep.mat(group.mul(group.mul(y, x), group.inv(tau.apply(x))));
                let src = group.mul(y, x);
                for i in 0..d {
                    for j in 0..d {
                        expect[(y * d + i, src * d + j)] = block[(i, j)];
                    }
                }
            }
            assert!(max_abs_diff(&adj, &expect) <= 1e-13);
        }
    }
}

#[test]
fn coefficient_transform_of_identity_deltas_concentrates_at_the_identity() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let tau = TauMap::constant_e(&group);
    let d = GroupFunction::delta(group.order(), 0);
    let w = fourier_wigner(&group, &dual, &tau, &d, &d).unwrap();
    for (i, rep) in dual.irreps().iter().enumerate() {
        for x in group.elements() {
            let expect = if x == 0 {
                CMat::identity(rep.dim, rep.dim)
            } else {
                CMat::zeros(rep.dim, rep.dim)
            };
            assert!(max_abs_diff(&w.mats[i][x], &expect) <= 1e-14);
        }
    }
}

#[test]
fn coefficient_transform_is_isometric_with_orthogonality_relations() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    for (_, tau) in TauMap::sample_set(&group, 43) {
        let u = GroupFunction::random(group.order(), 101);
        let v = GroupFunction::random(group.order(), 102);
        let u2 = GroupFunction::random(group.order(), 103);
        let v2 = GroupFunction::random(group.order(), 104);
        let w = fourier_wigner(&group, &dual, &tau, &u, &v).unwrap();
        let norm = norm_b2_dual_symbol(&dual, &w);
        let expect = norm_l2(&u) * norm_l2(&v);
        assert!((norm - expect).abs() / expect <= 1e-12);

        let w2 = fourier_wigner(&group, &dual, &tau, &u2, &v2).unwrap();
        let lhs = inner_b2_dual_symbol(&dual, &w, &w2);
        let rhs = inner_l2(&u2, &u) * inner_l2(&v, &v2);
        assert!((lhs - rhs).norm() <= 1e-11);

        let vv = wigner(&group, &dual, &tau, &u, &v).unwrap();
        let vv2 = wigner(&group, &dual, &tau, &u2, &v2).unwrap();
        let lhs_v = inner_b2_symbol(&dual, &vv, &vv2);
        assert!((lhs_v - rhs).norm() <= 1e-11);

        // fiberwise operator norm bound
        for row in &w.mats {
            for m in row {
                assert!(op_norm(m).unwrap() <= expect + 1e-10);
            }
        }
    }
}

#[test]
fn coefficient_transform_matches_the_weyl_matrix_elements() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::random(&group, 47);
    let u = GroupFunction::random(group.order(), 105);
    let v = GroupFunction::random(group.order(), 106);
    let w = fourier_wigner(&group, &dual, &tau, &u, &v).unwrap();
    for (xi, rep) in dual.irreps().iter().enumerate() {
        let d = rep.dim;
        for x in group.elements() {
            let wop = weyl(&group, &dual, Side::Right, &tau, xi, x).unwrap();
            for i in 0..d {
                for j in 0..d {
                    let phi = CVec::from_fn(d, |k, _| {
                        if k == j {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    });
                    let psi = CVec::from_fn(d, |k, _| {
                        if k == i {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    });
                    let lhs = w.mats[xi][x][(i, j)];
                    let left = &wop.mat * embed_conj_tensor(&u, &phi);
                    let right = embed_conj_tensor(&v, &psi);
                    let mut rhs = Complex64::new(0.0, 0.0);
                    for k in 0..left.len() {
                        rhs += left[k] * right[k].conj();
                    }
                    assert!((lhs - rhs).norm() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn wigner_quantizes_to_the_rank_one_operator() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    for (_, tau) in TauMap::sample_set(&group, 53) {
        let u = GroupFunction::random(group.order(), 107);
        let v = GroupFunction::random(group.order(), 108);
        let vv = wigner(&group, &dual, &tau, &u, &v).unwrap();
        let op = op_from_symbol(&group, &dual, Side::Right, &tau, &vv).unwrap();
        let lam = rank_one(&u, &v);
        assert!(max_abs_diff(&op.mat, &lam.mat) <= 1e-12);

        // <Op(a) u, v> = <a, wigner(u, v)> for random symbols
        let a = Symbol::random(&group, &dual, 109);
        let t = op_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
        let lhs = inner_l2(&t.apply(&u), &v);
        let rhs = inner_b2_symbol(&dual, &a, &vv);
        assert!((lhs - rhs).norm() <= 1e-11);
    }
    // zero in either slot gives the zero symbol
    let tau = TauMap::identity(&group);
    let z = GroupFunction::zero(group.order());
    let u = GroupFunction::random(group.order(), 110);
    let vv = wigner(&group, &dual, &tau, &z, &u).unwrap();
    for row in &vv.mats {
        for m in row {
            assert!(max_abs(m) == 0.0);
        }
    }
}

#[test]
fn wigner_is_the_flip_of_the_coefficient_transform() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::random(&group, 57);
    let u = GroupFunction::random(group.order(), 111);
    let v = GroupFunction::random(group.order(), 112);
    let w = fourier_wigner(&group, &dual, &tau, &u, &v).unwrap();
    let vv = wigner(&group, &dual, &tau, &u, &v).unwrap();
    let flipped = symbol_to_dual(&group, &dual, &vv).unwrap();
    for i in 0..dual.len() {
        for x in group.elements() {
            assert!(max_abs_diff(&flipped.mats[i][x], &w.mats[i][x]) <= 1e-12);
        }
    }
}

#[test]
fn flipped_quantization_matches_and_pairs_correctly() {
    let (group, dual) = make_group("dihedral:4").unwrap();
    let tau = TauMap::random(&group, 67);
    let a = Symbol::random(&group, &dual, 113);
    let b = symbol_to_dual(&group, &dual, &a).unwrap();
    let direct = op_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
    let routed = po(&group, &dual, &tau, &b).unwrap();
    assert!(max_abs_diff(&direct.mat, &routed.mat) <= 1e-12);

    let u = GroupFunction::random(group.order(), 114);
    let v = GroupFunction::random(group.order(), 115);
    let lhs = inner_l2(&routed.apply(&u), &v);
    let w = fourier_wigner(&group, &dual, &tau, &u, &v).unwrap();
    let rhs = inner_b2_dual_symbol(&dual, &b, &w);
    assert!((lhs - rhs).norm() <= 1e-11);
}

#[test]
fn rank_one_behaves_as_projection_and_adjoint() {
    let (group, _) = make_group("cyclic:5").unwrap();
    let mut u = GroupFunction::random(group.order(), 116);
    let nu = norm_l2(&u);
    for z in u.values.iter_mut() {
        *z /= Complex64::new(nu, 0.0);
    }
    let p = rank_one(&u, &u);
    assert!(max_abs_diff(&p.compose(&p).mat, &p.mat) <= 1e-13);
    let v = GroupFunction::random(group.order(), 117);
    let luv = rank_one(&u, &v);
    let lvu = rank_one(&v, &u);
    assert!(max_abs_diff(&luv.adjoint().mat, &lvu.mat) <= 1e-15);
    // all Schatten norms of a unit rank-one operator equal one
    for q in [1.0, 2.0, 4.0, f64::INFINITY] {
        assert!((schatten_norm(&p, q).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn schatten_norms_reduce_to_known_values() {
    let id = HSOperator::identity(4);
    assert!((schatten_norm(&id, 2.0).unwrap() - 2.0).abs() <= 1e-13);
    let (group, _) = make_group("cyclic:8").unwrap();
    let t = rank_one(
        &GroupFunction::random(group.order(), 118),
        &GroupFunction::random(group.order(), 119),
    );
    assert!((schatten_norm(&t, 2.0).unwrap() - t.hs_norm()).abs() <= 1e-13);
    assert!(schatten_norm(&t, 0.3).is_err());
}

#[test]
fn operator_json_round_trips() {
    let (group, dual) = make_group("symmetric:3").unwrap();
    let tau = TauMap::identity(&group);
    let a = Symbol::random(&group, &dual, 120);
    let op = op_from_symbol(&group, &dual, Side::Right, &tau, &a).unwrap();
    let text = op_to_json(&op).unwrap();
    let op2 = op_from_json(&text).unwrap();
    assert_eq!(op.mat, op2.mat);
}
