//! Finite groups, their unitary duals and tau-maps.
//!
//! A group is stored as its full multiplication table over element
//! indices `0..order`, with index 0 always the identity. The unitary
//! dual is a complete list of inequivalent unitary irreducible
//! representations stored as explicit complex matrices, one per group
//! element, together with the Plancherel weight `d / |G|` per irrep.
//!
//! Haar measure is the counting measure with weight 1 per element, so
//! integrals over the group are plain sums and the Plancherel identity
//! holds without any extra normalization. Sums over elements always run
//! in ascending index order, and sums over the dual in ascending irrep
//! order; this fixed order makes every derived quantity reproducible
//! bit for bit.

mod catalog;
mod io;
mod tau;
mod validate;

pub use catalog::{
    cyclic, dihedral, direct_product, heisenberg_mod_p, make_group, quaternion8, symmetric,
    two_cocycle_extension, CATALOG_SPECS,
};
pub use io::{dual_from_json, dual_to_json, group_from_json, group_to_json};
pub use tau::{tau_tilde, TauMap};
pub use validate::{schur_orthogonality_residual, validate_dual, validate_group, CheckItem, CheckReport};

use crate::error::CoreError;
use crate::la::CMat;

/// A finite group given by its multiplication table.
///
/// Invariants established at construction: `mul` is `order*order`
/// entries of valid indices, element 0 is a two-sided identity, and
/// every element has a two-sided inverse. Associativity is not forced
/// here (it is exhaustively checkable via `validate_group`); all
/// catalog constructors produce associative tables by building them
/// from actual group operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a square multiplication table. Rejects
    /// tables where 0 is not a two-sided identity or where some
    /// element has no two-sided inverse.
    pub fn from_mul_table(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, CoreError> {
        let order = table.len();
        if order == 0 {
            return Err(CoreError::BadInput("empty multiplication table".into()));
        }
        if labels.len() != order {
            return Err(CoreError::BadInput(format!(
                "expected {order} labels, got {}",
                labels.len()
            )));
        }
        let mut mul = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(CoreError::BadInput("multiplication table is not square".into()));
            }
            for &v in row {
                if v >= order {
                    return Err(CoreError::BadInput(format!(
                        "table entry {v} out of range for order {order}"
                    )));
                }
                mul.push(v);
            }
        }
        for x in 0..order {
            if mul[x] != x || mul[x * order] != x {
                return Err(CoreError::BadInput(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if mul[x * order + y] == 0 && mul[y * order + x] == 0 {
                    inv[x] = y;
                    break;
                }
            }
            if inv[x] == usize::MAX {
                return Err(CoreError::BadInput(format!(
                    "element {x} has no two-sided inverse"
                )));
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The identity element; index 0 by construction.
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        for x in 0..self.order {
            for y in 0..x {
                if self.mul(x, y) != self.mul(y, x) {
                    return false;
                }
            }
        }
        true
    }

    /// x y x^{-1}
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.inv(x))
    }

    /// x^k for k >= 0.
    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }
}

/// A unitary irreducible representation as explicit matrices.
#[derive(Debug, Clone)]
pub struct UnitaryIrrep {
    pub label: String,
    pub dim: usize,
    /// One `dim x dim` unitary per group element, indexed like the group.
    pub matrices: Vec<CMat>,
}

impl UnitaryIrrep {
    pub fn mat(&self, x: usize) -> &CMat {
        &self.matrices[x]
    }

    pub fn character(&self, x: usize) -> crate::la::C64 {
        crate::la::trace(&self.matrices[x])
    }
}

/// The complete unitary dual with Plancherel weights.
///
/// Irreps are kept sorted by `(dim, label)`; the weight of irrep `xi`
/// is `dim_xi / |G|`, matching the counting Haar measure.
#[derive(Debug, Clone)]
pub struct UnitaryDual {
    irreps: Vec<UnitaryIrrep>,
    weights: Vec<f64>,
}

impl UnitaryDual {
    pub fn new(group_order: usize, mut irreps: Vec<UnitaryIrrep>) -> Self {
        irreps.sort_by(|a, b| (a.dim, a.label.as_str()).cmp(&(b.dim, b.label.as_str())));
        let weights = irreps
            .iter()
            .map(|r| r.dim as f64 / group_order as f64)
            .collect();
        UnitaryDual { irreps, weights }
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn irrep(&self, i: usize) -> &UnitaryIrrep {
        &self.irreps[i]
    }

    pub fn irreps(&self) -> &[UnitaryIrrep] {
        &self.irreps
    }

    /// Plancherel weight d_xi / |G|.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.irreps.iter().map(|r| r.dim)
    }

    /// Sum of squared dimensions; equals |G| for a complete dual.
    pub fn dim_square_sum(&self) -> usize {
        self.irreps.iter().map(|r| r.dim * r.dim).sum()
    }
}
