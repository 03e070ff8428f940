//! JSON round-tripping for groups and duals. Complex numbers are
//! stored as [re, im] pairs; a dim x dim matrix is a row-major array
//! of such pairs, and an irrep stores one matrix per group element in
//! element order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FiniteGroup, UnitaryDual, UnitaryIrrep};
use crate::error::CoreError;
use crate::la::CMat;

#[derive(Serialize, Deserialize)]
struct GroupDto {
    order: usize,
    mul: Vec<Vec<usize>>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct IrrepDto {
    label: String,
    dim: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize, Deserialize)]
struct DualDto {
    irreps: Vec<IrrepDto>,
}

/// Serializes the multiplication table, labels, and order.
pub fn group_to_json(group: &FiniteGroup) -> Result<String, CoreError> {
    let n = group.order();
    let dto = GroupDto {
        order: n,
        mul: (0..n)
            .map(|x| (0..n).map(|y| group.mul(x, y)).collect())
            .collect(),
        labels: group.labels().to_vec(),
    };
    Ok(serde_json::to_string_pretty(&dto)?)
}

/// Reads a group back, re-running the table validation.
pub fn group_from_json(text: &str) -> Result<FiniteGroup, CoreError> {
    let dto: GroupDto = serde_json::from_str(text)?;
    if dto.mul.len() != dto.order {
        return Err(CoreError::BadInput(format!(
            "declared order {} but table has {} rows",
            dto.order,
            dto.mul.len()
        )));
    }
    FiniteGroup::from_mul_table(dto.mul, dto.labels)
}

fn matrix_to_pairs(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn matrix_from_pairs(dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<CMat, CoreError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CoreError::Shape(format!("expected a {dim}x{dim} matrix")));
    }
    Ok(CMat::from_fn(dim, dim, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}

/// Serializes every irrep with one matrix per group element.
pub fn dual_to_json(dual: &UnitaryDual) -> Result<String, CoreError> {
    let dto = DualDto {
        irreps: dual
            .irreps()
            .iter()
            .map(|rep| IrrepDto {
                label: rep.label.clone(),
                dim: rep.dim,
                matrices: rep.matrices.iter().map(matrix_to_pairs).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&dto)?)
}

/// Reads a dual back for a group of the given order; irreps are
/// re-sorted by (dim, label) and weights recomputed as dim/order.
pub fn dual_from_json(group_order: usize, text: &str) -> Result<UnitaryDual, CoreError> {
    let dto: DualDto = serde_json::from_str(text)?;
    let mut irreps = Vec::with_capacity(dto.irreps.len());
    for rep in dto.irreps {
        if rep.matrices.len() != group_order {
            return Err(CoreError::BadInput(format!(
                "irrep {} has {} matrices for a group of order {}",
                rep.label,
                rep.matrices.len(),
                group_order
            )));
        }
        let matrices = rep
            .matrices
            .iter()
            .map(|m| matrix_from_pairs(rep.dim, m))
            .collect::<Result<Vec<_>, _>>()?;
        irreps.push(UnitaryIrrep {
            label: rep.label,
            dim: rep.dim,
            matrices,
        });
    }
    Ok(UnitaryDual::new(group_order, irreps))
}
