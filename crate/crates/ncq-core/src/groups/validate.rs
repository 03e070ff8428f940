//! Structure checks for groups and duals. Every check reports its
//! worst-case residual next to the tolerance it was judged against, so
//! a failing report localizes the defect.

use super::{FiniteGroup, UnitaryDual};
use crate::la::{dagger, eye, max_abs_diff, CMat, C64};

/// One named check with its measured residual.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

/// The outcome of a validation run.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(CheckItem {
            name: name.to_string(),
            passed: residual <= tolerance,
            residual,
            tolerance,
        });
    }
}

/// Exhaustive table checks: associativity, identity at index 0, and
/// two-sided inverses. Residuals count violations.
pub fn validate_group(group: &FiniteGroup) -> CheckReport {
    let mut report = CheckReport { checks: Vec::new() };
    let n = group.order();

    let mut identity_bad = 0usize;
    for x in 0..n {
        if group.mul(0, x) != x || group.mul(x, 0) != x {
            identity_bad += 1;
        }
    }
    report.push("identity", identity_bad as f64, 0.0);

    let mut inverse_bad = 0usize;
    for x in 0..n {
        let xi = group.inv(x);
        if group.mul(x, xi) != 0 || group.mul(xi, x) != 0 {
            inverse_bad += 1;
        }
    }
    report.push("inverses", inverse_bad as f64, 0.0);

    let mut assoc_bad = 0usize;
    for x in 0..n {
        for y in 0..n {
            let xy = group.mul(x, y);
            for z in 0..n {
                if group.mul(xy, z) != group.mul(x, group.mul(y, z)) {
                    assoc_bad += 1;
                }
            }
        }
    }
    report.push("associativity", assoc_bad as f64, 0.0);

    report
}

/// Analytic checks on a proposed dual: each representation is a
/// unitary homomorphism and is irreducible, the squared dimensions
/// fill the group order, characters are orthonormal, and the stored
/// weights equal dim/|G|.
pub fn validate_dual(group: &FiniteGroup, dual: &UnitaryDual) -> CheckReport {
    let mut report = CheckReport { checks: Vec::new() };
    let n = group.order();

    let mut hom = 0.0f64;
    let mut unitary = 0.0f64;
    let mut irred = 0.0f64;
    for rep in dual.irreps() {
        let id = eye(rep.dim);
        let mut char_sq = 0.0f64;
        for x in 0..n {
            let mx = rep.mat(x);
            unitary = unitary.max(max_abs_diff(&(mx * dagger(mx)), &id));
            let chi = rep.character(x);
            char_sq += chi.norm_sqr();
            for y in 0..n {
                hom = hom.max(max_abs_diff(&(mx * rep.mat(y)), rep.mat(group.mul(x, y))));
            }
        }
        // (1/|G|) sum_x |chi(x)|^2 = 1 exactly when irreducible
        irred = irred.max((char_sq / n as f64 - 1.0).abs());
    }
    report.push("homomorphism", hom, 1e-12);
    report.push("unitarity", unitary, 1e-12);
    report.push("irreducibility", irred, 1e-10);

    let deficit = (dual.dim_square_sum() as i64 - n as i64).unsigned_abs();
    report.push("completeness", deficit as f64, 0.0);

    let mut char_orth = 0.0f64;
    for (i, a) in dual.irreps().iter().enumerate() {
        for (j, b) in dual.irreps().iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for x in 0..n {
                acc += a.character(x) * b.character(x).conj();
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            char_orth = char_orth.max((acc / n as f64 - expect).norm());
        }
    }
    report.push("character_orthogonality", char_orth, 1e-10);

    let mut weight_bad = 0.0f64;
    for (i, rep) in dual.irreps().iter().enumerate() {
        weight_bad = weight_bad.max((dual.weight(i) - rep.dim as f64 / n as f64).abs());
    }
    report.push("weights", weight_bad, 0.0);

    report
}

/// Worst deviation from the matrix-coefficient orthogonality relations:
/// (1/|G|) sum_x xi(x)_{ij} conj(eta(x)_{kl}) must equal
/// delta_{xi,eta} delta_{ik} delta_{jl} / dim(xi).
pub fn schur_orthogonality_residual(group: &FiniteGroup, dual: &UnitaryDual) -> f64 {
    let n = group.order();
    let mut worst = 0.0f64;
    for (a, ra) in dual.irreps().iter().enumerate() {
        for (b, rb) in dual.irreps().iter().enumerate() {
            let mut acc: Vec<CMat> = Vec::with_capacity(ra.dim * ra.dim);
            for i in 0..ra.dim {
                for j in 0..ra.dim {
                    let mut m = CMat::zeros(rb.dim, rb.dim);
                    for x in 0..n {
                        let va = ra.mat(x)[(i, j)];
                        let mb = rb.mat(x);
                        for k in 0..rb.dim {
                            for l in 0..rb.dim {
                                m[(k, l)] += va * mb[(k, l)].conj();
                            }
                        }
                    }
                    acc.push(m * C64::new(1.0 / n as f64, 0.0));
                }
            }
            for i in 0..ra.dim {
                for j in 0..ra.dim {
                    let m = &acc[i * ra.dim + j];
                    for k in 0..rb.dim {
                        for l in 0..rb.dim {
                            let expect = if a == b && i == k && j == l {
                                1.0 / ra.dim as f64
                            } else {
                                0.0
                            };
                            worst = worst.max((m[(k, l)] - C64::new(expect, 0.0)).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}
