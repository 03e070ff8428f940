//! The quantization engine: phase-space changes of variables, integral
//! kernels, the operator maps for both translation sides, Weyl
//! systems, the two Wigner-type transforms, and the flipped-phase-space
//! operator map.
//!
//! On a finite group with counting measure, an integral operator and
//! its kernel are the same |G| x |G| matrix, so every operator here is
//! materialized densely.
//!
//! The two calculi and their kernels:
//! * right: K(x,y) = sum_xi w_xi Tr[a(x tau(y^-1 x)^-1, xi) xi(y^-1 x)]
//! * left:  K(x,y) = sum_xi w_xi Tr[xi(x y^-1) a(tau(x y^-1)^-1 x, xi)]
//!
//! Both factor as kernel = (inverse transform in the second slot)
//! composed with the matching change of variables, which is how the
//! inverse map back from operators to symbols is built.

use serde_json::{Map, Value};

use crate::error::CoreError;
use crate::groups::{FiniteGroup, TauMap, UnitaryDual};
use crate::harmonic::{
    dual_to_symbol, ft_second, matrix_from_value, matrix_value, DualSymbol, GroupFunction,
    Symbol, TwoVarFunction,
};
use crate::la::{dagger, schatten_norm as mat_schatten_norm, CMat, CVec, C64};

/// Which translation side the calculus uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// Transform direction for the change of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvDirection {
    Forward,
    Inverse,
}

/// An integral kernel on G x G; with counting measure this is also the
/// matrix of the operator it integrates to.
pub type KernelMatrix = CMat;

/// A dense operator on L^2(G).
#[derive(Debug, Clone, PartialEq)]
pub struct HSOperator {
    pub mat: CMat,
}

impl HSOperator {
    pub fn identity(order: usize) -> Self {
        Self {
            mat: CMat::identity(order, order),
        }
    }

    pub fn order(&self) -> usize {
        self.mat.nrows()
    }

    pub fn apply(&self, u: &GroupFunction) -> GroupFunction {
        let n = self.order();
        let values = (0..n)
            .map(|x| {
                let mut acc = C64::new(0.0, 0.0);
                for y in 0..n {
                    acc += self.mat[(x, y)] * u.values[y];
                }
                acc
            })
            .collect();
        GroupFunction { values }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: dagger(&self.mat),
        }
    }

    pub fn hs_norm(&self) -> f64 {
        crate::la::hs_norm(&self.mat)
    }
}

/// Schatten-p norm of the operator; p may be `f64::INFINITY` for the
/// operator norm. Errors on p < 1.
pub fn schatten_norm(op: &HSOperator, p: f64) -> Result<f64, CoreError> {
    if p.is_nan() || p < 1.0 {
        return Err(CoreError::BadInput(format!("Schatten exponent {p} < 1")));
    }
    let sp = if p.is_infinite() { None } else { Some(p) };
    mat_schatten_norm(&op.mat, sp)
}

/// The phase-space change of variables at one point.
///
/// Right side: (x, y) -> (x tau(y^-1 x)^-1, y^-1 x), inverse
/// (u, w) -> (u tau(w), u tau(w) w^-1). Left side:
/// (x, y) -> (tau(x y^-1)^-1 x, x y^-1), inverse
/// (u, w) -> (tau(w) u, w^-1 tau(w) u). Both are bijections of G x G.
pub fn cv_point(
    group: &FiniteGroup,
    side: Side,
    tau: &TauMap,
    direction: CvDirection,
    x: usize,
    y: usize,
) -> (usize, usize) {
    match (side, direction) {
        (Side::Right, CvDirection::Forward) => {
            let w = group.mul(group.inv(y), x);
            (group.mul(x, group.inv(tau.apply(w))), w)
        }
        (Side::Right, CvDirection::Inverse) => {
            let u = group.mul(x, tau.apply(y));
            (u, group.mul(u, group.inv(y)))
        }
        (Side::Left, CvDirection::Forward) => {
            let w = group.mul(x, group.inv(y));
            (group.mul(group.inv(tau.apply(w)), x), w)
        }
        (Side::Left, CvDirection::Inverse) => {
            let u = group.mul(tau.apply(y), x);
            (u, group.mul(group.inv(y), u))
        }
    }
}

/// Pullback along the change of variables: forward sends F to
/// F o cv, inverse sends F to F o cv^-1. Unitary on L^2(G x G).
pub fn apply_cv(
    group: &FiniteGroup,
    side: Side,
    tau: &TauMap,
    direction: CvDirection,
    f: &TwoVarFunction,
) -> TwoVarFunction {
    let n = group.order();
    let mut values = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let (u, w) = cv_point(group, side, tau, direction, x, y);
            values[(x, y)] = f.values[(u, w)];
        }
    }
    TwoVarFunction { values }
}

fn check_symbol(group: &FiniteGroup, dual: &UnitaryDual, a: &Symbol) -> Result<(), CoreError> {
    if a.mats.len() != group.order() {
        return Err(CoreError::Shape(format!(
            "symbol covers {} elements, group has {}",
            a.mats.len(),
            group.order()
        )));
    }
    for row in &a.mats {
        if row.len() != dual.len() {
            return Err(CoreError::Shape(format!(
                "symbol covers {} irreps, dual has {}",
                row.len(),
                dual.len()
            )));
        }
        for (rep, m) in dual.irreps().iter().zip(row) {
            if m.nrows() != rep.dim || m.ncols() != rep.dim {
                return Err(CoreError::Shape(format!(
                    "fiber {} is {}x{}, expected {}x{}",
                    rep.label,
                    m.nrows(),
                    m.ncols(),
                    rep.dim,
                    rep.dim
                )));
            }
        }
    }
    Ok(())
}

/// Builds the integral kernel of the operator with symbol `a`.
pub fn kernel_from_symbol(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    side: Side,
    tau: &TauMap,
    a: &Symbol,
) -> Result<KernelMatrix, CoreError> {
    check_symbol(group, dual, a)?;
    let n = group.order();
    let mut k = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            // both sides read a at the first cv output and pair the
            // displacement with the irrep; the trace is cyclic, so the
            // printed operator orders coincide entrywise
            let (p, w) = cv_point(group, side, tau, CvDirection::Forward, x, y);
            let mut acc = C64::new(0.0, 0.0);
            for (i, rep) in dual.irreps().iter().enumerate() {
                acc += (&a.mats[p][i] * rep.mat(w)).trace() * dual.weight(i);
            }
            k[(x, y)] = acc;
        }
    }
    Ok(k)
}

/// The operator with symbol `a`: the integrated form of its kernel.
pub fn op_from_symbol(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    side: Side,
    tau: &TauMap,
    a: &Symbol,
) -> Result<HSOperator, CoreError> {
    Ok(HSOperator {
        mat: kernel_from_symbol(group, dual, side, tau, a)?,
    })
}

/// Recovers the symbol of an operator: the inverse of
/// [`op_from_symbol`] at fixed side and tau. Undoes the change of
/// variables, then transforms the displacement slot forward.
pub fn symbol_from_op(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    side: Side,
    tau: &TauMap,
    op: &HSOperator,
) -> Result<Symbol, CoreError> {
    if op.order() != group.order() {
        return Err(CoreError::Shape(format!(
            "operator order {} does not match group order {}",
            op.order(),
            group.order()
        )));
    }
    let kernel = TwoVarFunction {
        values: op.mat.clone(),
    };
    let f = apply_cv(group, side, tau, CvDirection::Inverse, &kernel);
    ft_second(group, dual, &f)
}

/// A Weyl-system element: a unitary on L^2(G) tensor H_xi, stored as a
/// (|G| d) x (|G| d) matrix in the basis indexed y d + i.
#[derive(Debug, Clone)]
pub struct WeylOperator {
    pub mat: CMat,
    pub xi: usize,
    pub x: usize,
    pub side: Side,
    pub dim: usize,
}

/// Builds the Weyl-system unitary for the irrep of index `xi` at the
/// point `x`.
///
/// Right side: [W Theta](y) = xi(tau(x)) xi(y)* Theta(y x^-1).
/// Left side:  [W Theta](y) = xi(tau(x)^-1 y)* Theta(x^-1 y).
pub fn weyl(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    side: Side,
    tau: &TauMap,
    xi: usize,
    x: usize,
) -> Result<WeylOperator, CoreError> {
    if xi >= dual.len() {
        return Err(CoreError::BadInput(format!(
            "irrep index {xi} out of range ({} irreps)",
            dual.len()
        )));
    }
    let rep = dual.irrep(xi);
    let n = group.order();
    let d = rep.dim;
    let mut mat = CMat::zeros(n * d, n * d);
    for y in 0..n {
        let (block, src) = match side {
            Side::Right => (
                rep.mat(tau.apply(x)) * dagger(rep.mat(y)),
                group.mul(y, group.inv(x)),
            ),
            Side::Left => (
                dagger(rep.mat(group.mul(group.inv(tau.apply(x)), y))),
                group.mul(group.inv(x), y),
            ),
        };
        for i in 0..d {
            for j in 0..d {
                mat[(y * d + i, src * d + j)] = block[(i, j)];
            }
        }
    }
    Ok(WeylOperator {
        mat,
        xi,
        x,
        side,
        dim: d,
    })
}

/// Embeds conj(u) tensor phi as a vector in the y d + i basis.
pub fn embed_conj_tensor(u: &GroupFunction, phi: &CVec) -> CVec {
    let n = u.len();
    let d = phi.len();
    CVec::from_fn(n * d, |k, _| u.values[k / d].conj() * phi[k % d])
}

/// The matrix-valued coefficient transform of the pair (u, v):
/// a flipped-phase-space symbol with fibers
/// W(xi, x) = sum_z v(z) conj(u(z x^-1)) xi(z tau(x)^-1)*.
pub fn fourier_wigner(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    u: &GroupFunction,
    v: &GroupFunction,
) -> Result<DualSymbol, CoreError> {
    if u.len() != group.order() || v.len() != group.order() {
        return Err(CoreError::Shape("function length != group order".into()));
    }
    let n = group.order();
    let mats = dual
        .irreps()
        .iter()
        .map(|rep| {
            (0..n)
                .map(|x| {
                    let mut acc = CMat::zeros(rep.dim, rep.dim);
                    let xinv = group.inv(x);
                    let tx_inv = group.inv(tau.apply(x));
                    for z in 0..n {
                        let coeff = v.values[z] * u.values[group.mul(z, xinv)].conj();
                        acc += dagger(rep.mat(group.mul(z, tx_inv))) * coeff;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(DualSymbol { mats })
}

/// The symbol-side transform of the pair (u, v):
/// V(x, xi) = sum_z conj(u(x tau(z) z^-1)) v(x tau(z)) xi(z)*.
/// Quantizing it on the right side gives the rank-one operator
/// w -> <w, u> v exactly.
pub fn wigner(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    u: &GroupFunction,
    v: &GroupFunction,
) -> Result<Symbol, CoreError> {
    if u.len() != group.order() || v.len() != group.order() {
        return Err(CoreError::Shape("function length != group order".into()));
    }
    let n = group.order();
    let mats = (0..n)
        .map(|x| {
            dual.irreps()
                .iter()
                .map(|rep| {
                    let mut acc = CMat::zeros(rep.dim, rep.dim);
                    for z in 0..n {
                        let xt = group.mul(x, tau.apply(z));
                        let coeff = u.values[group.mul(xt, group.inv(z))].conj() * v.values[xt];
                        acc += dagger(rep.mat(z)) * coeff;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(Symbol { mats })
}

/// Quantization from the flipped phase space: transforms the symbol
/// back to G x dual and applies the right-side operator map. Satisfies
/// <op u, v> = <b, fourier_wigner(u, v)> in the weighted inner product.
pub fn po(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    b: &DualSymbol,
) -> Result<HSOperator, CoreError> {
    let a = dual_to_symbol(group, dual, b)?;
    op_from_symbol(group, dual, Side::Right, tau, &a)
}

/// The rank-one operator w -> <w, u> v, with matrix v(x) conj(u(y)).
pub fn rank_one(u: &GroupFunction, v: &GroupFunction) -> HSOperator {
    let n = u.len();
    HSOperator {
        mat: CMat::from_fn(n, n, |x, y| v.values[x] * u.values[y].conj()),
    }
}

/// Operator as JSON: {"order": n, "matrix": [[[re, im]]]}.
pub fn op_to_json(op: &HSOperator) -> Result<String, CoreError> {
    let mut map = Map::new();
    map.insert("order".into(), op.order().into());
    map.insert("matrix".into(), matrix_value(&op.mat));
    Ok(serde_json::to_string_pretty(&Value::Object(map))?)
}

pub fn op_from_json(text: &str) -> Result<HSOperator, CoreError> {
    let value: Value = serde_json::from_str(text)?;
    let map = value
        .as_object()
        .ok_or_else(|| CoreError::BadInput("operator JSON must be an object".into()))?;
    let order = map
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| CoreError::BadInput("missing integer order".into()))? as usize;
    let mat = map
        .get("matrix")
        .ok_or_else(|| CoreError::BadInput("missing matrix".into()))?;
    Ok(HSOperator {
        mat: matrix_from_value(order, mat)?,
    })
}

/// The right-regular-translation unitary [R(z) u](x) = u(x z).
pub fn right_translation(group: &FiniteGroup, z: usize) -> HSOperator {
    let n = group.order();
    let mut mat = CMat::zeros(n, n);
    for x in 0..n {
        mat[(x, group.mul(x, z))] = C64::new(1.0, 0.0);
    }
    HSOperator { mat }
}
