use ncq_core::groups::{
    cyclic, direct_product, dual_from_json, dual_to_json, group_from_json, group_to_json,
    heisenberg_mod_p, make_group, schur_orthogonality_residual, tau_tilde,
    two_cocycle_extension, validate_dual, validate_group, TauMap, CATALOG_SPECS,
};

#[test]
fn catalog_groups_and_duals_are_sound() {
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec).unwrap();
        assert!(group.order() <= 27, "{spec}");
        let gr = validate_group(&group);
        assert!(gr.all_passed(), "{spec}: {:?}", gr.checks);
        let dr = validate_dual(&group, &dual);
        assert!(dr.all_passed(), "{spec}: {:?}", dr.checks);
    }
}

#[test]
fn catalog_schur_orthogonality() {
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec).unwrap();
        let r = schur_orthogonality_residual(&group, &dual);
        assert!(r <= 1e-10, "{spec}: residual {r}");
    }
}

#[test]
fn heisenberg_three_has_expected_dual_shape() {
    let (group, dual) = heisenberg_mod_p(3).unwrap();
    assert_eq!(group.order(), 27);
    let dims: Vec<usize> = dual.dims().collect();
    assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 9);
    assert_eq!(dims.iter().filter(|&&d| d == 3).count(), 2);
    assert_eq!(dual.dim_square_sum(), 27);
    // weights are dim/order
    for (i, rep) in dual.irreps().iter().enumerate() {
        assert_eq!(dual.weight(i), rep.dim as f64 / 27.0);
    }
}

#[test]
fn duals_are_sorted_by_dim_then_label() {
    for spec in CATALOG_SPECS {
        let (_, dual) = make_group(spec).unwrap();
        let keys: Vec<(usize, String)> = dual
            .irreps()
            .iter()
            .map(|r| (r.dim, r.label.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted, "{spec}");
    }
}

#[test]
fn tau_tilde_is_an_involution_with_known_fixed_points() {
    let (group, _) = make_group("dihedral:4").unwrap();
    for (_, tau) in TauMap::sample_set(&group, 7) {
        let tt = tau_tilde(&group, &tau);
        assert_eq!(tau_tilde(&group, &tt), tau);
    }
    let e = TauMap::constant_e(&group);
    let id = TauMap::identity(&group);
    assert_eq!(tau_tilde(&group, &e), id);
    assert_eq!(tau_tilde(&group, &id), e);
}

#[test]
fn random_tau_is_seed_deterministic() {
    let (group, _) = make_group("symmetric:3").unwrap();
    assert_eq!(TauMap::random(&group, 42), TauMap::random(&group, 42));
    // overwhelmingly likely to differ for |G|! style spaces; pinned by seed
    assert_ne!(TauMap::random(&group, 42), TauMap::random(&group, 43));
}

#[test]
fn group_and_dual_round_trip_through_json() {
    let (group, dual) = make_group("dihedral:5").unwrap();
    let gj = group_to_json(&group).unwrap();
    let g2 = group_from_json(&gj).unwrap();
    assert_eq!(group.order(), g2.order());
    for x in group.elements() {
        assert_eq!(group.label(x), g2.label(x));
        for y in group.elements() {
            assert_eq!(group.mul(x, y), g2.mul(x, y));
        }
    }
    let dj = dual_to_json(&dual).unwrap();
    let d2 = dual_from_json(group.order(), &dj).unwrap();
    assert_eq!(dual.len(), d2.len());
    for (a, b) in dual.irreps().iter().zip(d2.irreps()) {
        assert_eq!(a.label, b.label);
        assert_eq!(a.dim, b.dim);
        for x in group.elements() {
            assert_eq!(a.mat(x), b.mat(x));
        }
    }
}

#[test]
fn heisenberg_is_a_central_extension_of_the_plane_by_the_line() {
    let (z3a, d3a) = cyclic(3).unwrap();
    let (z3b, d3b) = cyclic(3).unwrap();
    let (plane, _) = direct_product(&z3a, &d3a, &z3b, &d3b).unwrap();
    let (line, _) = cyclic(3).unwrap();
    // w((a,b),(a',b')) = a b' in Z_3, written on product indices a*3+b
    let ext = two_cocycle_extension(&plane, &line, &|x, y| (x / 3) * (y % 3) % 3).unwrap();
    let (heis, _) = heisenberg_mod_p(3).unwrap();
    assert_eq!(ext.order(), heis.order());
    for x in heis.elements() {
        for y in heis.elements() {
            assert_eq!(ext.mul(x, y), heis.mul(x, y));
        }
    }
}

#[test]
fn make_group_rejects_bad_specs() {
    for bad in [
        "cyclic:0",
        "dihedral:2",
        "symmetric:5",
        "heisenberg:4",
        "heisenberg:17",
        "product:cyclic:2",
        "nosuch:3",
        "quaternion:9",
    ] {
        assert!(make_group(bad).is_err(), "{bad} should be rejected");
    }
}
