//! Scalar-symbol pseudo-differential calculus on simply connected
//! nilpotent Lie groups, realized numerically in exponential
//! coordinates of the first kind.
//!
//! A group element is stored as its logarithm, a coordinate vector in
//! R^n, so log is the identity on storage and exp is free; every
//! product goes through the truncated Baker-Campbell-Hausdorff series,
//! which is the exact group law for nilpotency step <= 4. Symbols are
//! complex functions s(x, xi) sampled on a uniform box grid in the
//! group, paired with a Fourier-compatible grid in the dual of the Lie
//! algebra: the dual step is pi / half_width, so discrete plane waves
//! are exactly orthogonal and the unit symbol quantizes to the
//! identity. The inverse transform carries the (2 pi)^{-n} factor.
//! Kernels are left-endpoint Riemann sums over the dual grid; box
//! truncation and the first-order quadrature term dominate the error.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::CoreError;
use crate::groups::cyclic;
use crate::harmonic::{c64_from_value, c64_value, fourier, GroupFunction};
use crate::la::{CMat, C64};
use crate::quantize::Side;

/// Ordering maps on a nilpotent group, given directly in exponential
/// coordinates. `Zero` sends every point to the identity, `Identity`
/// is the identity map, and `Half` halves the coordinates, which is
/// the canonical symmetry function exp(log(x)/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateTau {
    Zero,
    Identity,
    Half,
}

impl CoordinateTau {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            CoordinateTau::Zero => vec![0.0; x.len()],
            CoordinateTau::Identity => x.to_vec(),
            CoordinateTau::Half => x.iter().map(|c| 0.5 * c).collect(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CoordinateTau::Zero => "zero",
            CoordinateTau::Identity => "id",
            CoordinateTau::Half => "half",
        }
    }

    pub fn parse(text: &str) -> Result<Self, CoreError> {
        match text {
            "zero" | "0" | "e" => Ok(CoordinateTau::Zero),
            "id" | "identity" => Ok(CoordinateTau::Identity),
            "half" | "sigma" | "sigma-half" => Ok(CoordinateTau::Half),
            other => Err(CoreError::BadInput(format!(
                "unknown coordinate map '{other}', expected zero | id | half"
            ))),
        }
    }

    pub fn all() -> [CoordinateTau; 3] {
        [
            CoordinateTau::Zero,
            CoordinateTau::Identity,
            CoordinateTau::Half,
        ]
    }
}

/// A finite-dimensional nilpotent Lie algebra given by structure
/// constants: [e_i, e_j] = sum_k c^k_{ij} e_k. Validated on
/// construction: antisymmetry holds by construction, the Jacobi
/// identity holds to 1e-12, and the lower central series vanishes
/// within the declared step, which must be at most 4.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentAlgebra {
    dim: usize,
    step: usize,
    /// Flat table, entry (i, j, k) at index (i * dim + j) * dim + k.
    table: Vec<f64>,
}

impl NilpotentAlgebra {
    /// Builds an algebra from bracket entries (i, j, coefficients of
    /// [e_i, e_j]). The opposite orientation is filled in by
    /// antisymmetry; listing both orientations or a repeated pair is
    /// rejected, as is a self-bracket entry.
    pub fn new(
        dim: usize,
        step: usize,
        brackets: &[(usize, usize, Vec<f64>)],
    ) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::BadInput("algebra dimension must be positive".into()));
        }
        if step == 0 || step > 4 {
            return Err(CoreError::BadInput(format!(
                "nilpotency step {step} outside the supported range 1..=4"
            )));
        }
        let mut table = vec![0.0; dim * dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(CoreError::BadInput(format!(
                    "bracket pair ({i}, {j}) out of range for dimension {dim}"
                )));
            }
            if i == j {
                return Err(CoreError::BadInput(format!(
                    "self bracket ({i}, {i}) is zero and may not be listed"
                )));
            }
            if coeffs.len() != dim {
                return Err(CoreError::Shape(format!(
                    "bracket ({i}, {j}): {} coefficients, expected {dim}",
                    coeffs.len()
                )));
            }
            if seen[i * dim + j] || seen[j * dim + i] {
                return Err(CoreError::BadInput(format!(
                    "bracket pair ({i}, {j}) listed twice"
                )));
            }
            seen[i * dim + j] = true;
            for k in 0..dim {
                table[(i * dim + j) * dim + k] = coeffs[k];
                table[(j * dim + i) * dim + k] = -coeffs[k];
            }
        }
        let algebra = Self { dim, step, table };
        algebra.check_jacobi()?;
        algebra.check_series()?;
        Ok(algebra)
    }

    /// The abelian algebra: all brackets vanish.
    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, 1, &[]).expect("abelian table is valid")
    }

    /// Heisenberg algebra of dimension 2k + 1: [e_i, e_{k+i}] = e_{2k}
    /// for i in 0..k, the last coordinate being central.
    pub fn heisenberg(k: usize) -> Self {
        let dim = 2 * k + 1;
        let mut center = vec![0.0; dim];
        center[dim - 1] = 1.0;
        let brackets: Vec<(usize, usize, Vec<f64>)> =
            (0..k).map(|i| (i, k + i, center.clone())).collect();
        Self::new(dim, 2, &brackets).expect("Heisenberg table is valid")
    }

    /// Engel algebra, dimension 4, step 3: [e_0, e_1] = e_2,
    /// [e_0, e_2] = e_3.
    pub fn engel() -> Self {
        let e2 = vec![0.0, 0.0, 1.0, 0.0];
        let e3 = vec![0.0, 0.0, 0.0, 1.0];
        Self::new(4, 3, &[(0, 1, e2), (0, 2, e3)]).expect("Engel table is valid")
    }

    /// Filiform algebra of the given step s <= 4, dimension s + 1:
    /// [e_0, e_j] = e_{j+1} for j in 1..s.
    pub fn filiform(step: usize) -> Result<Self, CoreError> {
        let dim = step + 1;
        let mut brackets = Vec::new();
        for j in 1..step {
            let mut coeffs = vec![0.0; dim];
            coeffs[j + 1] = 1.0;
            brackets.push((0, j, coeffs));
        }
        Self::new(dim, step, &brackets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> usize {
        self.step
    }

    fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.table[(i * self.dim + j) * self.dim + k]
    }

    /// Bilinear bracket of two coordinate vectors. The table is
    /// antisymmetric, so each unordered index pair contributes through
    /// the difference x_i y_j - x_j y_i; the bracket of two parallel
    /// vectors is therefore an exact floating-point zero.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let f = x[i] * y[j] - x[j] * y[i];
                if f == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += f * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// Group product in exponential coordinates: the
    /// Baker-Campbell-Hausdorff series truncated at total degree 4,
    /// which is exact for the supported nilpotency steps.
    pub fn bch(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let xy = self.bracket(x, y);
        let xxy = self.bracket(x, &xy);
        let yyx = self.bracket(y, &self.bracket(y, x));
        let yxxy = self.bracket(y, &xxy);
        (0..self.dim)
            .map(|k| {
                x[k] + y[k] + 0.5 * xy[k] + (xxy[k] + yyx[k]) / 12.0 - yxxy[k] / 24.0
            })
            .collect()
    }

    pub fn mul(&self, x: &GroupPoint, y: &GroupPoint) -> GroupPoint {
        GroupPoint::new(self.bch(&x.coords, &y.coords))
    }

    fn check_jacobi(&self) -> Result<(), CoreError> {
        let n = self.dim;
        let basis = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (ei, ej, ek) = (basis(i), basis(j), basis(k));
                    let mut total = self.bracket(&self.bracket(&ei, &ej), &ek);
                    for (t, v) in self
                        .bracket(&self.bracket(&ej, &ek), &ei)
                        .into_iter()
                        .zip(self.bracket(&self.bracket(&ek, &ei), &ej))
                        .map(|(a, b)| a + b)
                        .enumerate()
                    {
                        total[t] += v;
                    }
                    for t in total {
                        worst = worst.max(t.abs());
                    }
                }
            }
        }
        if worst > 1e-12 {
            return Err(CoreError::Validation(format!(
                "structure constants violate the Jacobi identity, residual {worst:.3e}"
            )));
        }
        Ok(())
    }

    /// Requires the lower central series to vanish within the declared
    /// step. Spans are decided by Gram-Schmidt with a fixed 1e-9
    /// residual threshold.
    fn check_series(&self) -> Result<(), CoreError> {
        let n = self.dim;
        let mut layer: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        for _ in 0..self.step {
            let mut next: Vec<Vec<f64>> = Vec::new();
            for i in 0..n {
                let mut ei = vec![0.0; n];
                ei[i] = 1.0;
                for b in &layer {
                    let v = self.bracket(&ei, b);
                    orthonormal_extend(&mut next, &v);
                }
            }
            if next.is_empty() {
                return Ok(());
            }
            layer = next;
        }
        Err(CoreError::Validation(format!(
            "lower central series does not vanish within step {}",
            self.step
        )))
    }

    pub fn to_json(&self) -> Result<String, CoreError> {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let coeffs: Vec<f64> = (0..self.dim).map(|k| self.c(i, j, k)).collect();
                if coeffs.iter().any(|c| *c != 0.0) {
                    let mut entry = Map::new();
                    entry.insert("i".into(), Value::from(i));
                    entry.insert("j".into(), Value::from(j));
                    entry.insert(
                        "coeffs".into(),
                        Value::Array(coeffs.into_iter().map(Value::from).collect()),
                    );
                    brackets.push(Value::Object(entry));
                }
            }
        }
        let mut root = Map::new();
        root.insert("dim".into(), Value::from(self.dim));
        root.insert("step".into(), Value::from(self.step));
        root.insert("brackets".into(), Value::Array(brackets));
        Ok(serde_json::to_string(&Value::Object(root))?)
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let root: Value = serde_json::from_str(text)?;
        let dim = usize_field(&root, "dim")?;
        let step = usize_field(&root, "step")?;
        let entries = root
            .get("brackets")
            .and_then(Value::as_array)
            .ok_or_else(|| CoreError::BadInput("algebra file lacks a brackets array".into()))?;
        let mut brackets = Vec::new();
        for entry in entries {
            let i = usize_field(entry, "i")?;
            let j = usize_field(entry, "j")?;
            let coeffs = entry
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| CoreError::BadInput("bracket entry lacks coeffs".into()))?
                .iter()
                .map(|v| {
                    v.as_f64()
                        .ok_or_else(|| CoreError::BadInput("bracket coefficient is not a number".into()))
                })
                .collect::<Result<Vec<f64>, CoreError>>()?;
            brackets.push((i, j, coeffs));
        }
        Self::new(dim, step, &brackets)
    }
}

fn usize_field(v: &Value, name: &str) -> Result<usize, CoreError> {
    v.get(name)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| CoreError::BadInput(format!("missing or invalid field '{name}'")))
}

/// Extends an orthonormal family by one vector if it adds a direction;
/// returns whether the family grew.
fn orthonormal_extend(basis: &mut Vec<Vec<f64>>, v: &[f64]) -> bool {
    let mut w = v.to_vec();
    for b in basis.iter() {
        let p: f64 = b.iter().zip(&w).map(|(a, c)| a * c).sum();
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi -= p * bi;
        }
    }
    let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm > 1e-9 {
        for wi in w.iter_mut() {
            *wi /= norm;
        }
        basis.push(w);
        true
    } else {
        false
    }
}

/// A group element of a simply connected nilpotent Lie group, stored
/// as its exponential coordinates of the first kind: the vector is
/// both the point exp(X) and its logarithm X.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    pub coords: Vec<f64>,
}

impl GroupPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Group inverse: exp(X)^{-1} = exp(-X) in any Lie group.
    pub fn inverse(&self) -> Self {
        Self::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// The canonical symmetry function sigma(x) = exp(log(x) / 2). It
/// satisfies sigma(x^{-1}) x = sigma(x) = x sigma(x^{-1}) because all
/// three points lie on the one-parameter subgroup through x.
pub fn sigma_half(x: &GroupPoint) -> GroupPoint {
    GroupPoint::new(x.coords.iter().map(|c| 0.5 * c).collect())
}

/// The unipotent 3 x 3 matrix realization of a Heisenberg group
/// point: exp of the strictly upper triangular matrix with the three
/// coordinates at (0,1), (1,2), (0,2).
pub fn heisenberg_matrix(x: &GroupPoint) -> Result<Matrix3<f64>, CoreError> {
    if x.dim() != 3 {
        return Err(CoreError::BadInput(format!(
            "matrix realization needs 3 coordinates, got {}",
            x.dim()
        )));
    }
    let (a, b, c) = (x.coords[0], x.coords[1], x.coords[2]);
    Ok(Matrix3::new(
        1.0,
        a,
        c + 0.5 * a * b,
        0.0,
        1.0,
        b,
        0.0,
        0.0,
        1.0,
    ))
}

/// Logarithm of a unipotent upper triangular 3 x 3 matrix, returned
/// as exponential coordinates.
pub fn heisenberg_matrix_log(m: &Matrix3<f64>) -> GroupPoint {
    let a = m[(0, 1)];
    let b = m[(1, 2)];
    GroupPoint::new(vec![a, b, m[(0, 2)] - 0.5 * a * b])
}

/// The midpoint map obtained by integrating the one-parameter
/// subgroup s -> exp(s log x) as a matrix-valued integral in the
/// Heisenberg realization: for A = log x it equals
/// I + A/2 + A^2/6, since A^3 = 0. Only the three-dimensional
/// Heisenberg table is accepted.
pub fn sigma_midpoint_matrix(
    algebra: &NilpotentAlgebra,
    x: &GroupPoint,
) -> Result<GroupPoint, CoreError> {
    if *algebra != NilpotentAlgebra::heisenberg(1) {
        return Err(CoreError::BadInput(
            "the matrix midpoint is implemented for the 3-dimensional Heisenberg realization only"
                .into(),
        ));
    }
    if x.dim() != 3 {
        return Err(CoreError::Shape(format!(
            "point has {} coordinates, expected 3",
            x.dim()
        )));
    }
    let a = Matrix3::new(
        0.0,
        x.coords[0],
        x.coords[2],
        0.0,
        0.0,
        x.coords[1],
        0.0,
        0.0,
        0.0,
    );
    let u = Matrix3::identity() + a * 0.5 + a * a * (1.0 / 6.0);
    Ok(heisenberg_matrix_log(&u))
}

/// A uniform box grid in the algebra coordinates, paired with its
/// Fourier-compatible dual grid. Each axis carries `points` samples
/// at spacing 2 * half_width / points starting at -half_width; the
/// dual axis carries `points` samples at spacing pi / half_width
/// starting at -dual_half_width. The product of the two steps is
/// 2 pi / points, so discrete plane waves are exactly orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    points: usize,
    half_width: f64,
}

/// Largest flattened grid size accepted, guarding against accidental
/// huge allocations.
const MAX_GRID_CELLS: usize = 1 << 20;

impl Grid {
    pub fn new(dim: usize, points: usize, half_width: f64) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::BadInput("grid dimension must be positive".into()));
        }
        if points < 2 {
            return Err(CoreError::BadInput("grid needs at least 2 points per axis".into()));
        }
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(CoreError::BadInput("grid half width must be positive".into()));
        }
        let mut len = 1usize;
        for _ in 0..dim {
            len = len
                .checked_mul(points)
                .filter(|l| *l <= MAX_GRID_CELLS)
                .ok_or_else(|| {
                    CoreError::BadInput(format!(
                        "grid with {points}^{dim} cells exceeds the supported size"
                    ))
                })?;
        }
        Ok(Self {
            dim,
            points,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Number of grid cells, points^dim.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn dual_step(&self) -> f64 {
        PI / self.half_width
    }

    pub fn dual_half_width(&self) -> f64 {
        self.dual_step() * self.points as f64 / 2.0
    }

    /// Per-axis indices of a flattened cell, axis 0 most significant.
    fn axis_indices(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dim];
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            idx[a] = rest % self.points;
            rest /= self.points;
        }
        idx
    }

    pub fn x_point(&self, flat: usize) -> Vec<f64> {
        let h = self.step();
        self.axis_indices(flat)
            .into_iter()
            .map(|k| -self.half_width + k as f64 * h)
            .collect()
    }

    pub fn xi_point(&self, flat: usize) -> Vec<f64> {
        let h = self.dual_step();
        let lw = self.dual_half_width();
        self.axis_indices(flat)
            .into_iter()
            .map(|k| -lw + k as f64 * h)
            .collect()
    }

    fn volume_weight(&self) -> f64 {
        self.step().powi(self.dim as i32)
    }

    fn dual_volume_weight(&self) -> f64 {
        (self.dual_step() / (2.0 * PI)).powi(self.dim as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierDirection {
    Forward,
    Inverse,
}

/// Riemann-sum Fourier transform between the grid and its dual grid.
/// Forward maps samples u(x) to sum_x exp(-i <x, xi>) u(x) h^n; the
/// inverse maps samples v(xi) to sum_xi exp(i <x, xi>) v(xi) times
/// (dual step / 2 pi)^n.
pub fn grid_fourier(
    grid: &Grid,
    direction: FourierDirection,
    values: &[C64],
) -> Result<Vec<C64>, CoreError> {
    let m = grid.len();
    if values.len() != m {
        return Err(CoreError::Shape(format!(
            "sampled function has {} values, grid has {m} cells",
            values.len()
        )));
    }
    let xs: Vec<Vec<f64>> = (0..m).map(|k| grid.x_point(k)).collect();
    let xis: Vec<Vec<f64>> = (0..m).map(|k| grid.xi_point(k)).collect();
    let mut out = vec![C64::new(0.0, 0.0); m];
    match direction {
        FourierDirection::Forward => {
            let w = grid.volume_weight();
            for (j, o) in out.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (k, v) in values.iter().enumerate() {
                    acc += C64::from_polar(1.0, -dot(&xs[k], &xis[j])) * v;
                }
                *o = acc * w;
            }
        }
        FourierDirection::Inverse => {
            let w = grid.dual_volume_weight();
            for (k, o) in out.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    acc += C64::from_polar(1.0, dot(&xs[k], &xis[j])) * v;
                }
                *o = acc * w;
            }
        }
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|c| -c).collect()
}

/// Largest symbol table accepted (grid cells squared).
const MAX_SYMBOL_CELLS: usize = 1 << 22;

/// A scalar symbol s(x, xi) sampled on grid x dual grid, stored row
/// major with the x cell most significant. Off-grid x arguments are
/// evaluated by multilinear interpolation, clamped to the box, which
/// is exact for functions affine in each coordinate; xi arguments are
/// always grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSymbol {
    grid: Grid,
    values: Vec<C64>,
}

impl ScalarSymbol {
    pub fn from_values(grid: &Grid, values: Vec<C64>) -> Result<Self, CoreError> {
        let want = symbol_len(grid)?;
        if values.len() != want {
            return Err(CoreError::Shape(format!(
                "symbol has {} values, expected {want}",
                values.len()
            )));
        }
        Ok(Self {
            grid: *grid,
            values,
        })
    }

    pub fn sample<F: Fn(&[f64], &[f64]) -> C64>(grid: &Grid, f: F) -> Result<Self, CoreError> {
        let m = grid.len();
        let _ = symbol_len(grid)?;
        let mut values = Vec::with_capacity(m * m);
        for x_flat in 0..m {
            let x = grid.x_point(x_flat);
            for xi_flat in 0..m {
                values.push(f(&x, &grid.xi_point(xi_flat)));
            }
        }
        Ok(Self {
            grid: *grid,
            values,
        })
    }

    pub fn constant(grid: &Grid, z: C64) -> Result<Self, CoreError> {
        Self::sample(grid, |_, _| z)
    }

    /// An x-independent symbol from dual-grid samples.
    pub fn multiplier(grid: &Grid, m: &[C64]) -> Result<Self, CoreError> {
        if m.len() != grid.len() {
            return Err(CoreError::Shape(format!(
                "multiplier has {} values, dual grid has {}",
                m.len(),
                grid.len()
            )));
        }
        let want = symbol_len(grid)?;
        let mut values = Vec::with_capacity(want);
        for _ in 0..grid.len() {
            values.extend_from_slice(m);
        }
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, x_flat: usize, xi_flat: usize) -> C64 {
        self.values[x_flat * self.grid.len() + xi_flat]
    }

    /// Interpolation stencil for an off-grid x argument: flattened
    /// cell indices with convex weights. Arguments outside the box
    /// clamp to the boundary cell.
    pub fn interp_stencil(&self, x: &[f64]) -> Vec<(usize, f64)> {
        let g = &self.grid;
        assert_eq!(x.len(), g.dim);
        let h = g.step();
        let np = g.points;
        let mut base = vec![0usize; g.dim];
        let mut frac = vec![0.0f64; g.dim];
        for a in 0..g.dim {
            let t = (x[a] + g.half_width) / h;
            let i0 = t.floor().clamp(0.0, (np - 2) as f64);
            base[a] = i0 as usize;
            frac[a] = (t - i0).clamp(0.0, 1.0);
        }
        let corners = 1usize << g.dim;
        let mut out = Vec::with_capacity(corners);
        for corner in 0..corners {
            let mut weight = 1.0;
            let mut flat = 0usize;
            for a in 0..g.dim {
                let bit = (corner >> a) & 1;
                weight *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
                flat = flat * np + base[a] + bit;
            }
            if weight != 0.0 {
                out.push((flat, weight));
            }
        }
        out
    }

    pub fn stencil_value(&self, stencil: &[(usize, f64)], xi_flat: usize) -> C64 {
        let m = self.grid.len();
        let mut acc = C64::new(0.0, 0.0);
        for (flat, weight) in stencil {
            acc += self.values[flat * m + xi_flat] * *weight;
        }
        acc
    }

    pub fn eval_interp(&self, x: &[f64], xi_flat: usize) -> C64 {
        self.stencil_value(&self.interp_stencil(x), xi_flat)
    }

    pub fn to_json(&self) -> Result<String, CoreError> {
        let mut root = grid_map(&self.grid);
        root.insert(
            "values".into(),
            Value::Array(self.values.iter().copied().map(c64_value).collect()),
        );
        Ok(serde_json::to_string(&Value::Object(root))?)
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let root: Value = serde_json::from_str(text)?;
        let grid = grid_from_map(&root)?;
        let values = values_field(&root)?;
        Self::from_values(&grid, values)
    }
}

fn symbol_len(grid: &Grid) -> Result<usize, CoreError> {
    grid.len()
        .checked_mul(grid.len())
        .filter(|l| *l <= MAX_SYMBOL_CELLS)
        .ok_or_else(|| {
            CoreError::BadInput(format!(
                "symbol table on {} grid cells exceeds the supported size",
                grid.len()
            ))
        })
}

fn grid_map(grid: &Grid) -> Map<String, Value> {
    let mut root = Map::new();
    root.insert("dim".into(), Value::from(grid.dim));
    root.insert("points".into(), Value::from(grid.points));
    root.insert("half_width".into(), Value::from(grid.half_width));
    root
}

fn grid_from_map(root: &Value) -> Result<Grid, CoreError> {
    let dim = usize_field(root, "dim")?;
    let points = usize_field(root, "points")?;
    let half_width = root
        .get("half_width")
        .and_then(Value::as_f64)
        .ok_or_else(|| CoreError::BadInput("missing or invalid field 'half_width'".into()))?;
    Grid::new(dim, points, half_width)
}

fn values_field(root: &Value) -> Result<Vec<C64>, CoreError> {
    root.get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::BadInput("file lacks a values array".into()))?
        .iter()
        .map(c64_from_value)
        .collect()
}

/// Serializes a sampled function on the grid together with the grid
/// descriptors.
pub fn function_to_json(grid: &Grid, values: &[C64]) -> Result<String, CoreError> {
    if values.len() != grid.len() {
        return Err(CoreError::Shape(format!(
            "sampled function has {} values, grid has {}",
            values.len(),
            grid.len()
        )));
    }
    let mut root = grid_map(grid);
    root.insert(
        "values".into(),
        Value::Array(values.iter().copied().map(c64_value).collect()),
    );
    Ok(serde_json::to_string(&Value::Object(root))?)
}

pub fn function_from_json(text: &str) -> Result<(Grid, Vec<C64>), CoreError> {
    let root: Value = serde_json::from_str(text)?;
    let grid = grid_from_map(&root)?;
    let values = values_field(&root)?;
    if values.len() != grid.len() {
        return Err(CoreError::Shape(format!(
            "sampled function has {} values, grid has {}",
            values.len(),
            grid.len()
        )));
    }
    Ok((grid, values))
}

/// Integral kernel of the scalar quantization on the grid. For the
/// left calculus K(x, y) integrates exp(i <log(x y^{-1}), xi>)
/// s(tau(x y^{-1})^{-1} x, xi) over the dual grid; the right calculus
/// uses w = y^{-1} x and the base point x tau(w)^{-1}. The dual
/// measure carries (2 pi)^{-n}.
pub fn scalar_kernel(
    algebra: &NilpotentAlgebra,
    tau: CoordinateTau,
    side: Side,
    s: &ScalarSymbol,
) -> Result<CMat, CoreError> {
    let grid = s.grid();
    if algebra.dim() != grid.dim() {
        return Err(CoreError::Shape(format!(
            "algebra dimension {} does not match grid dimension {}",
            algebra.dim(),
            grid.dim()
        )));
    }
    let m = grid.len();
    let xs: Vec<Vec<f64>> = (0..m).map(|k| grid.x_point(k)).collect();
    let xis: Vec<Vec<f64>> = (0..m).map(|k| grid.xi_point(k)).collect();
    let weight = grid.dual_volume_weight();
    let mut kernel = CMat::zeros(m, m);
    for x in 0..m {
        for y in 0..m {
            let w = match side {
                Side::Left => algebra.bch(&xs[x], &neg(&xs[y])),
                Side::Right => algebra.bch(&neg(&xs[y]), &xs[x]),
            };
            let tw = tau.apply(&w);
            let base = match side {
                Side::Left => algebra.bch(&neg(&tw), &xs[x]),
                Side::Right => algebra.bch(&xs[x], &neg(&tw)),
            };
            let stencil = s.interp_stencil(&base);
            let mut acc = C64::new(0.0, 0.0);
            for (j, xi) in xis.iter().enumerate() {
                acc += C64::from_polar(1.0, dot(&w, xi)) * s.stencil_value(&stencil, j);
            }
            kernel[(x, y)] = acc * weight;
        }
    }
    Ok(kernel)
}

/// Applies an integral kernel to grid samples with the volume weight
/// of the x grid.
pub fn apply_kernel(grid: &Grid, kernel: &CMat, u: &[C64]) -> Result<Vec<C64>, CoreError> {
    let m = grid.len();
    if kernel.nrows() != m || kernel.ncols() != m {
        return Err(CoreError::Shape(format!(
            "kernel is {} x {}, grid has {m} cells",
            kernel.nrows(),
            kernel.ncols()
        )));
    }
    if u.len() != m {
        return Err(CoreError::Shape(format!(
            "sampled function has {} values, grid has {m} cells",
            u.len()
        )));
    }
    let w = grid.volume_weight();
    let mut out = vec![C64::new(0.0, 0.0); m];
    for (x, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (y, v) in u.iter().enumerate() {
            acc += kernel[(x, y)] * v;
        }
        *o = acc * w;
    }
    Ok(out)
}

/// Quantization of a scalar symbol applied to grid samples.
pub fn scalar_op(
    algebra: &NilpotentAlgebra,
    tau: CoordinateTau,
    side: Side,
    s: &ScalarSymbol,
    u: &[C64],
) -> Result<Vec<C64>, CoreError> {
    let kernel = scalar_kernel(algebra, tau, side, s)?;
    apply_kernel(s.grid(), &kernel, u)
}

/// Phase factor of the left Weyl system: the operator W(x, xi) sends
/// u(z) to exp(i <log(tau(x)^{-1} z), xi>) u(x^{-1} z); this returns
/// the phase at z.
pub fn weyl_phase(
    algebra: &NilpotentAlgebra,
    tau: CoordinateTau,
    x: &[f64],
    xi: &[f64],
    z: &[f64],
) -> C64 {
    let p = algebra.bch(&neg(&tau.apply(x)), z);
    C64::from_polar(1.0, dot(&p, xi))
}

/// Multiplication cocycle of the Weyl system:
/// W(x, xi) W(y, eta) = Upsilon[(x, xi), (y, eta); z] W(xy, xi + eta)
/// pointwise in z. The exponent pairs log(tau(x)^{-1} z) -
/// log(tau(xy)^{-1} z) with xi and log(tau(xy)^{-1} z) -
/// log(tau(y^{-1}) x^{-1} z) with eta. For the supported coordinate
/// maps tau(y^{-1}) equals tau(y)^{-1}, so the third base point is
/// the one the composition law requires.
pub fn upsilon(
    algebra: &NilpotentAlgebra,
    tau: CoordinateTau,
    x: &[f64],
    xi: &[f64],
    y: &[f64],
    eta: &[f64],
    z: &[f64],
) -> C64 {
    let a = algebra.bch(&neg(&tau.apply(x)), z);
    let xy = algebra.bch(x, y);
    let b = algebra.bch(&neg(&tau.apply(&xy)), z);
    let c = algebra.bch(&tau.apply(&neg(y)), &algebra.bch(&neg(x), z));
    let mut theta = 0.0;
    for k in 0..algebra.dim() {
        theta += (a[k] - b[k]) * xi[k] - (b[k] - c[k]) * eta[k];
    }
    C64::from_polar(1.0, theta)
}

/// Residuals of the Weyl-system composition law on seeded samples.
#[derive(Debug, Clone)]
pub struct CocycleReport {
    pub algebra_dim: usize,
    pub tau: String,
    pub pairs: usize,
    pub z_samples: usize,
    pub max_modulus_residual: f64,
    pub max_composition_residual: f64,
    pub max_normalization_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CocycleReport {
    pub fn to_json(&self) -> Result<String, CoreError> {
        let mut root = Map::new();
        root.insert("algebra_dim".into(), Value::from(self.algebra_dim));
        root.insert("tau".into(), Value::from(self.tau.clone()));
        root.insert("pairs".into(), Value::from(self.pairs));
        root.insert("z_samples".into(), Value::from(self.z_samples));
        root.insert(
            "max_modulus_residual".into(),
            Value::from(self.max_modulus_residual),
        );
        root.insert(
            "max_composition_residual".into(),
            Value::from(self.max_composition_residual),
        );
        root.insert(
            "max_normalization_residual".into(),
            Value::from(self.max_normalization_residual),
        );
        root.insert("tolerance".into(), Value::from(self.tolerance));
        root.insert("pass".into(), Value::from(self.pass));
        Ok(serde_json::to_string(&Value::Object(root))?)
    }
}

fn random_coords<R: Rng>(dim: usize, scale: f64, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Samples random Weyl-system pairs and z points and checks that the
/// phases are unimodular, that the trivial pair yields the constant 1,
/// and that the composition law holds pointwise.
pub fn cocycle_report(
    algebra: &NilpotentAlgebra,
    tau: CoordinateTau,
    pairs: usize,
    z_samples: usize,
    seed: u64,
    tolerance: f64,
) -> CocycleReport {
    let n = algebra.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_modulus = 0.0f64;
    let mut max_composition = 0.0f64;
    let mut max_normalization = 0.0f64;
    let zero = vec![0.0; n];
    for _ in 0..pairs {
        let x = random_coords(n, 1.5, &mut rng);
        let xi = random_coords(n, 2.0, &mut rng);
        let y = random_coords(n, 1.5, &mut rng);
        let eta = random_coords(n, 2.0, &mut rng);
        let xy = algebra.bch(&x, &y);
        let xi_eta: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a + b).collect();
        for _ in 0..z_samples {
            let z = random_coords(n, 1.5, &mut rng);
            let ups = upsilon(algebra, tau, &x, &xi, &y, &eta, &z);
            max_modulus = max_modulus.max((ups.norm() - 1.0).abs());
            let lhs = weyl_phase(algebra, tau, &x, &xi, &z)
                * weyl_phase(algebra, tau, &y, &eta, &algebra.bch(&neg(&x), &z));
            let rhs = ups * weyl_phase(algebra, tau, &xy, &xi_eta, &z);
            max_composition = max_composition.max((lhs - rhs).norm());
            let unit = upsilon(algebra, tau, &zero, &xi, &zero, &eta, &z);
            max_normalization = max_normalization.max((unit - C64::new(1.0, 0.0)).norm());
        }
    }
    CocycleReport {
        algebra_dim: n,
        tau: tau.label().to_string(),
        pairs,
        z_samples,
        max_modulus_residual: max_modulus,
        max_composition_residual: max_composition,
        max_normalization_residual: max_normalization,
        tolerance,
        pass: max_modulus <= tolerance
            && max_composition <= tolerance
            && max_normalization <= tolerance,
    }
}

/// Residuals of the group axioms under the truncated BCH law on
/// seeded coordinate triples.
#[derive(Debug, Clone)]
pub struct BchAxioms {
    pub triples: usize,
    pub max_associativity_residual: f64,
    pub max_inverse_residual: f64,
    pub max_identity_residual: f64,
}

pub fn bch_axiom_residuals(algebra: &NilpotentAlgebra, triples: usize, seed: u64) -> BchAxioms {
    let n = algebra.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc = 0.0f64;
    let mut inverse = 0.0f64;
    let mut identity = 0.0f64;
    let zero = vec![0.0; n];
    for _ in 0..triples {
        let x = random_coords(n, 1.0, &mut rng);
        let y = random_coords(n, 1.0, &mut rng);
        let z = random_coords(n, 1.0, &mut rng);
        let left = algebra.bch(&algebra.bch(&x, &y), &z);
        let right = algebra.bch(&x, &algebra.bch(&y, &z));
        for k in 0..n {
            assoc = assoc.max((left[k] - right[k]).abs());
        }
        for v in algebra.bch(&x, &neg(&x)) {
            inverse = inverse.max(v.abs());
        }
        let le = algebra.bch(&zero, &x);
        let re = algebra.bch(&x, &zero);
        for k in 0..n {
            identity = identity.max((le[k] - x[k]).abs().max((re[k] - x[k]).abs()));
        }
    }
    BchAxioms {
        triples,
        max_associativity_residual: assoc,
        max_inverse_residual: inverse,
        max_identity_residual: identity,
    }
}

/// One named residual in an abelian-specialization report.
#[derive(Debug, Clone)]
pub struct RnCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Report of the abelian specialization: on R^n grids the scalar
/// calculus must reproduce the classical quantizations and the grid
/// transform must agree with the exact cyclic-group transform under
/// the standard index identification.
#[derive(Debug, Clone)]
pub struct RnReport {
    pub dim: usize,
    pub points: usize,
    pub half_width: f64,
    pub tau: String,
    pub checks: Vec<RnCheck>,
    pub pass: bool,
}

impl RnReport {
    pub fn to_json(&self) -> Result<String, CoreError> {
        let mut root = Map::new();
        root.insert("dim".into(), Value::from(self.dim));
        root.insert("points".into(), Value::from(self.points));
        root.insert("half_width".into(), Value::from(self.half_width));
        root.insert("tau".into(), Value::from(self.tau.clone()));
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), Value::from(c.name.clone()));
                m.insert("residual".into(), Value::from(c.residual));
                m.insert("tolerance".into(), Value::from(c.tolerance));
                m.insert("pass".into(), Value::from(c.pass));
                Value::Object(m)
            })
            .collect();
        root.insert("checks".into(), Value::Array(checks));
        root.insert("pass".into(), Value::from(self.pass));
        Ok(serde_json::to_string(&Value::Object(root))?)
    }
}

fn smooth_sample(grid: &Grid) -> Vec<C64> {
    (0..grid.len())
        .map(|k| {
            let x = grid.x_point(k);
            let q = dot(&x, &x);
            C64::new(
                (-0.5 * q).exp() * (1.0 + 0.3 * x[0].sin()),
                0.2 * (-q / 3.0).exp() * x[0].cos(),
            )
        })
        .collect()
}

fn sup_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Verifies the abelian specialization on an R^n grid: the classical
/// tau-kernel built with plain vector arithmetic, the left/right
/// coincidence, the Fourier-multiplier route, the exact cyclic-group
/// transform identification, and for the symmetric map the Hermitian
/// kernel of a real symbol. Requires an even point count.
pub fn rn_consistency(
    n: usize,
    tau: CoordinateTau,
    points: usize,
    half_width: f64,
    tolerance: f64,
) -> Result<RnReport, CoreError> {
    if points % 2 != 0 {
        return Err(CoreError::BadInput(
            "the transform identification requires an even point count".into(),
        ));
    }
    let algebra = NilpotentAlgebra::abelian(n);
    let grid = Grid::new(n, points, half_width)?;
    let m = grid.len();
    let mut checks: Vec<RnCheck> = Vec::new();
    let mut push = |name: &str, residual: f64, tol: f64| {
        checks.push(RnCheck {
            name: name.to_string(),
            residual,
            tolerance: tol,
            pass: residual <= tol,
        });
    };

    let u = smooth_sample(&grid);

    // Round trip of the grid transform.
    let forward = grid_fourier(&grid, FourierDirection::Forward, &u)?;
    let back = grid_fourier(&grid, FourierDirection::Inverse, &forward)?;
    push("round-trip", sup_distance(&back, &u), tolerance);

    // Multiplier two-path identity: quantizing an x-independent
    // symbol equals conjugating a diagonal by the grid transform.
    let mult: Vec<C64> = (0..m)
        .map(|j| {
            let xi = grid.xi_point(j);
            C64::new((-0.5 * dot(&xi, &xi)).exp() * (1.0 + 0.3 * xi[0].cos()), 0.0)
        })
        .collect();
    let symbol = ScalarSymbol::multiplier(&grid, &mult)?;
    let via_kernel = scalar_op(&algebra, tau, Side::Left, &symbol, &u)?;
    let diag: Vec<C64> = forward.iter().zip(&mult).map(|(v, w)| v * w).collect();
    let via_fourier = grid_fourier(&grid, FourierDirection::Inverse, &diag)?;
    push(
        "multiplier-two-path",
        sup_distance(&via_kernel, &via_fourier),
        tolerance,
    );

    // Classical kernel: on an abelian algebra the base point is
    // x - t (x - y) with t in {0, 1, 1/2}; the oracle evaluates the
    // symbol closure directly, so the symbol is affine in x to keep
    // the sampled route exact.
    let sfun = |x: &[f64], xi: &[f64]| {
        C64::new(0.4 + 0.7 * x[0], 0.0)
            * C64::new(
                (-0.25 * dot(xi, xi)).exp(),
                0.2 * (-0.25 * dot(xi, xi)).exp() * xi[0].sin(),
            )
    };
    let sampled = ScalarSymbol::sample(&grid, sfun)?;
    let kernel = scalar_kernel(&algebra, tau, Side::Left, &sampled)?;
    let t = match tau {
        CoordinateTau::Zero => 0.0,
        CoordinateTau::Identity => 1.0,
        CoordinateTau::Half => 0.5,
    };
    let weight = grid.dual_volume_weight();
    let mut classical = CMat::zeros(m, m);
    for x_flat in 0..m {
        let x = grid.x_point(x_flat);
        for y_flat in 0..m {
            let y = grid.x_point(y_flat);
            let w: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            let base: Vec<f64> = x.iter().zip(&w).map(|(a, d)| a - t * d).collect();
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..m {
                let xi = grid.xi_point(j);
                acc += C64::from_polar(1.0, dot(&w, &xi)) * sfun(&base, &xi);
            }
            classical[(x_flat, y_flat)] = acc * weight;
        }
    }
    push(
        "classical-kernel",
        crate::la::max_abs_diff(&kernel, &classical),
        tolerance,
    );

    // Left and right kernels coincide on an abelian group.
    let right = scalar_kernel(&algebra, tau, Side::Right, &sampled)?;
    push(
        "left-right-agree",
        crate::la::max_abs_diff(&kernel, &right),
        tolerance,
    );

    // Real symbols quantize to Hermitian kernels at the symmetric map.
    if tau == CoordinateTau::Half {
        let real = ScalarSymbol::sample(&grid, |x, xi| {
            C64::new(x[0] * xi[0] + (-0.25 * (dot(x, x) + dot(xi, xi))).exp(), 0.0)
        })?;
        let k = scalar_kernel(&algebra, tau, Side::Left, &real)?;
        push(
            "hermitian-kernel",
            crate::la::max_abs_diff(&k, &crate::la::dagger(&k)),
            tolerance,
        );
    }

    // The grid transform agrees with the exact cyclic-group transform
    // under the index identification m = (j + N/2) mod N and the
    // scale h (-1)^{N/2} (-1)^j.
    let line = Grid::new(1, points, half_width)?;
    let u1 = smooth_sample(&line);
    let grid_side = grid_fourier(&line, FourierDirection::Forward, &u1)?;
    let (group, dual) = cyclic(points)?;
    let hat = fourier(
        &group,
        &dual,
        &GroupFunction {
            values: u1.clone(),
        },
    )?;
    let h = line.step();
    let sign0 = if (points / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut ident = 0.0f64;
    for j in 0..points {
        let mrep = (j + points / 2) % points;
        let signj = if j % 2 == 0 { 1.0 } else { -1.0 };
        let expected = hat.mats[mrep][(0, 0)] * (h * sign0 * signj);
        ident = ident.max((grid_side[j] - expected).norm());
    }
    push("fourier-identification", ident, tolerance);

    let pass = checks.iter().all(|c| c.pass);
    Ok(RnReport {
        dim: n,
        points,
        half_width,
        tau: tau.label().to_string(),
        checks,
        pass,
    })
}
