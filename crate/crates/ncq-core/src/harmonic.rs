//! Function spaces and the Fourier transform.
//!
//! Conventions, fixed once for the whole crate:
//! * counting measure on the group; no 1/|G| factor in L^2,
//! * dual weights w = dim/|G| carried by [`UnitaryDual`],
//! * forward transform u^(xi) = sum_x u(x) xi(x)*,
//! * inverse transform u(x) = sum_xi w_xi Tr(xi(x) u^(xi)),
//! * inner products linear in the first argument,
//! * sums run in ascending element index, then ascending irrep index,
//!   so results are bit-reproducible.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::CoreError;
use crate::groups::{FiniteGroup, UnitaryDual};
use crate::la::{dagger, hs_inner, schatten_norm, CMat, C64};

/// A complex-valued function on the group, indexed by element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    pub values: Vec<C64>,
}

impl GroupFunction {
    pub fn zero(order: usize) -> Self {
        Self {
            values: vec![C64::new(0.0, 0.0); order],
        }
    }

    /// The delta function supported at `z`.
    pub fn delta(order: usize, z: usize) -> Self {
        let mut f = Self::zero(order);
        f.values[z] = C64::new(1.0, 0.0);
        f
    }

    pub fn constant(order: usize, value: C64) -> Self {
        Self {
            values: vec![value; order],
        }
    }

    /// Seeded random entries, uniform on the unit square in C.
    pub fn random(order: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            values: (0..order).map(|_| random_c64(&mut rng)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One matrix per irrep: an element of the direct sum over the dual.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    pub mats: Vec<CMat>,
}

impl FourierField {
    /// The identity in every fiber.
    pub fn identity(dual: &UnitaryDual) -> Self {
        Self {
            mats: dual.irreps().iter().map(|r| CMat::identity(r.dim, r.dim)).collect(),
        }
    }

    pub fn zero(dual: &UnitaryDual) -> Self {
        Self {
            mats: dual.irreps().iter().map(|r| CMat::zeros(r.dim, r.dim)).collect(),
        }
    }

    pub fn random(dual: &UnitaryDual, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            mats: dual
                .irreps()
                .iter()
                .map(|r| random_matrix(&mut rng, r.dim))
                .collect(),
        }
    }
}

/// A matrix-valued symbol a(x, xi), indexed element first.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    /// mats[x][xi]
    pub mats: Vec<Vec<CMat>>,
}

impl Symbol {
    pub fn zero(group: &FiniteGroup, dual: &UnitaryDual) -> Self {
        Self {
            mats: (0..group.order())
                .map(|_| dual.irreps().iter().map(|r| CMat::zeros(r.dim, r.dim)).collect())
                .collect(),
        }
    }

    pub fn random(group: &FiniteGroup, dual: &UnitaryDual, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            mats: (0..group.order())
                .map(|_| {
                    dual.irreps()
                        .iter()
                        .map(|r| random_matrix(&mut rng, r.dim))
                        .collect()
                })
                .collect(),
        }
    }

    /// Symbol whose fibers do not depend on the group variable: every row
    /// of `mats` is a copy of `field`.
    pub fn x_independent(group: &FiniteGroup, field: &FourierField) -> Self {
        Self {
            mats: (0..group.order()).map(|_| field.mats.clone()).collect(),
        }
    }

    /// Random symbol with every fiber Hermitian.
    pub fn random_hermitian(group: &FiniteGroup, dual: &UnitaryDual, seed: u64) -> Self {
        let mut sym = Self::random(group, dual, seed);
        for row in &mut sym.mats {
            for m in row {
                let h = (&*m + dagger(m)) * C64::new(0.5, 0.0);
                *m = h;
            }
        }
        sym
    }

    pub fn mat(&self, x: usize, xi: usize) -> &CMat {
        &self.mats[x][xi]
    }
}

/// A matrix-valued symbol on the flipped phase space, indexed irrep
/// first: mats[xi][x].
#[derive(Debug, Clone, PartialEq)]
pub struct DualSymbol {
    pub mats: Vec<Vec<CMat>>,
}

impl DualSymbol {
    pub fn zero(group: &FiniteGroup, dual: &UnitaryDual) -> Self {
        Self {
            mats: dual
                .irreps()
                .iter()
                .map(|r| (0..group.order()).map(|_| CMat::zeros(r.dim, r.dim)).collect())
                .collect(),
        }
    }

    pub fn random(group: &FiniteGroup, dual: &UnitaryDual, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            mats: dual
                .irreps()
                .iter()
                .map(|r| {
                    (0..group.order())
                        .map(|_| random_matrix(&mut rng, r.dim))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn mat(&self, xi: usize, x: usize) -> &CMat {
        &self.mats[xi][x]
    }
}

/// A scalar function on G x G, stored as a matrix with rows indexed by
/// the first variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoVarFunction {
    pub values: CMat,
}

impl TwoVarFunction {
    pub fn zero(order: usize) -> Self {
        Self {
            values: CMat::zeros(order, order),
        }
    }

    pub fn random(order: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            values: CMat::from_fn(order, order, |_, _| random_c64(&mut rng)),
        }
    }

    /// The rank-one function (q, x) -> f(q) g(x).
    pub fn outer(f: &GroupFunction, g: &GroupFunction) -> Self {
        Self {
            values: CMat::from_fn(f.len(), g.len(), |q, x| f.values[q] * g.values[x]),
        }
    }
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    let re = rng.gen_range(-1.0..1.0);
    let im = rng.gen_range(-1.0..1.0);
    Complex64::new(re, im)
}

pub(crate) fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMat {
    // row-major draw order so the stream is layout-independent
    let entries: Vec<C64> = (0..dim * dim).map(|_| random_c64(rng)).collect();
    CMat::from_row_slice(dim, dim, &entries)
}

fn check_len(name: &str, got: usize, want: usize) -> Result<(), CoreError> {
    if got != want {
        return Err(CoreError::Shape(format!("{name}: length {got}, expected {want}")));
    }
    Ok(())
}

/// Forward transform: u^(xi) = sum_x u(x) xi(x)*.
pub fn fourier(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    u: &GroupFunction,
) -> Result<FourierField, CoreError> {
    check_len("group function", u.len(), group.order())?;
    let mats = dual
        .irreps()
        .iter()
        .map(|rep| {
            let mut acc = CMat::zeros(rep.dim, rep.dim);
            for x in 0..group.order() {
                acc += dagger(rep.mat(x)) * u.values[x];
            }
            acc
        })
        .collect();
    Ok(FourierField { mats })
}

/// Inverse transform: u(x) = sum_xi w_xi Tr(xi(x) phi(xi)).
pub fn inverse_fourier(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    phi: &FourierField,
) -> Result<GroupFunction, CoreError> {
    check_len("field", phi.mats.len(), dual.len())?;
    for (rep, m) in dual.irreps().iter().zip(&phi.mats) {
        if m.nrows() != rep.dim || m.ncols() != rep.dim {
            return Err(CoreError::Shape(format!(
                "field fiber {} is {}x{}, expected {}x{}",
                rep.label,
                m.nrows(),
                m.ncols(),
                rep.dim,
                rep.dim
            )));
        }
    }
    let values = (0..group.order())
        .map(|x| {
            let mut acc = C64::new(0.0, 0.0);
            for (i, rep) in dual.irreps().iter().enumerate() {
                acc += (rep.mat(x) * &phi.mats[i]).trace() * dual.weight(i);
            }
            acc
        })
        .collect();
    Ok(GroupFunction { values })
}

/// Which slot of a two-variable object a partial transform acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    First,
    Second,
}

/// Transform direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Carrier for partial-transform inputs and outputs. A two-variable
/// function transformed in the first slot is indexed irrep-then-element
/// (a [`DualSymbol`]); transformed in the second slot it is indexed
/// element-then-irrep (a [`Symbol`]).
#[derive(Debug, Clone, PartialEq)]
pub enum SlotData {
    TwoVar(TwoVarFunction),
    FirstTransformed(DualSymbol),
    SecondTransformed(Symbol),
}

/// Applies the transform along one slot, identity on the other.
/// Valid moves: forward takes `TwoVar` to the transformed layout for
/// the chosen axis; inverse takes that layout back. Anything else is a
/// shape error.
pub fn partial_fourier(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    axis: Axis,
    direction: Direction,
    input: SlotData,
) -> Result<SlotData, CoreError> {
    match (axis, direction, input) {
        (Axis::First, Direction::Forward, SlotData::TwoVar(f)) => Ok(SlotData::FirstTransformed(
            ft_first(group, dual, &f)?,
        )),
        (Axis::First, Direction::Inverse, SlotData::FirstTransformed(a)) => {
            Ok(SlotData::TwoVar(ift_first(group, dual, &a)?))
        }
        (Axis::Second, Direction::Forward, SlotData::TwoVar(f)) => Ok(SlotData::SecondTransformed(
            ft_second(group, dual, &f)?,
        )),
        (Axis::Second, Direction::Inverse, SlotData::SecondTransformed(a)) => {
            Ok(SlotData::TwoVar(ift_second(group, dual, &a)?))
        }
        _ => Err(CoreError::Shape(
            "axis/direction do not match the input layout".into(),
        )),
    }
}

/// F (x) id: F(xi, x) = sum_q f(q, x) xi(q)*.
pub fn ft_first(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    f: &TwoVarFunction,
) -> Result<DualSymbol, CoreError> {
    check_len("two-variable rows", f.values.nrows(), group.order())?;
    check_len("two-variable cols", f.values.ncols(), group.order())?;
    let n = group.order();
    let mats = dual
        .irreps()
        .iter()
        .map(|rep| {
            (0..n)
                .map(|x| {
                    let mut acc = CMat::zeros(rep.dim, rep.dim);
                    for q in 0..n {
                        acc += dagger(rep.mat(q)) * f.values[(q, x)];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(DualSymbol { mats })
}

/// Inverse of [`ft_first`]: f(q, x) = sum_xi w_xi Tr(xi(q) F(xi, x)).
pub fn ift_first(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    a: &DualSymbol,
) -> Result<TwoVarFunction, CoreError> {
    check_len("dual symbol", a.mats.len(), dual.len())?;
    let n = group.order();
    let mut values = CMat::zeros(n, n);
    for q in 0..n {
        for x in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (i, rep) in dual.irreps().iter().enumerate() {
                acc += (rep.mat(q) * &a.mats[i][x]).trace() * dual.weight(i);
            }
            values[(q, x)] = acc;
        }
    }
    Ok(TwoVarFunction { values })
}

/// id (x) F: A(q, xi) = sum_x f(q, x) xi(x)*.
pub fn ft_second(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    f: &TwoVarFunction,
) -> Result<Symbol, CoreError> {
    check_len("two-variable rows", f.values.nrows(), group.order())?;
    check_len("two-variable cols", f.values.ncols(), group.order())?;
    let n = group.order();
    let mats = (0..n)
        .map(|q| {
            dual.irreps()
                .iter()
                .map(|rep| {
                    let mut acc = CMat::zeros(rep.dim, rep.dim);
                    for x in 0..n {
                        acc += dagger(rep.mat(x)) * f.values[(q, x)];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(Symbol { mats })
}

/// Inverse of [`ft_second`]: f(q, x) = sum_xi w_xi Tr(xi(x) A(q, xi)).
pub fn ift_second(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    a: &Symbol,
) -> Result<TwoVarFunction, CoreError> {
    check_len("symbol", a.mats.len(), group.order())?;
    let n = group.order();
    let mut values = CMat::zeros(n, n);
    for q in 0..n {
        for x in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (i, rep) in dual.irreps().iter().enumerate() {
                acc += (rep.mat(x) * &a.mats[q][i]).trace() * dual.weight(i);
            }
            values[(q, x)] = acc;
        }
    }
    Ok(TwoVarFunction { values })
}

/// Transforms a symbol a(x, xi) to the flipped phase space: forward in
/// the first slot, inverse in the second.
pub fn symbol_to_dual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    a: &Symbol,
) -> Result<DualSymbol, CoreError> {
    let f = ift_second(group, dual, a)?;
    ft_first(group, dual, &f)
}

/// Transforms a dual symbol b(xi, x) back: inverse in the first slot,
/// forward in the second. Inverse of [`symbol_to_dual`].
pub fn dual_to_symbol(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    b: &DualSymbol,
) -> Result<Symbol, CoreError> {
    let f = ift_first(group, dual, b)?;
    ft_second(group, dual, &f)
}

/// <u, v> = sum_x u(x) conj(v(x)).
pub fn inner_l2(u: &GroupFunction, v: &GroupFunction) -> C64 {
    u.values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| a * b.conj())
        .sum()
}

pub fn norm_l2(u: &GroupFunction) -> f64 {
    u.values.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// <phi, psi> = sum_xi w_xi Tr(phi(xi) psi(xi)*).
pub fn inner_b2_field(dual: &UnitaryDual, phi: &FourierField, psi: &FourierField) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..dual.len() {
        acc += hs_inner(&phi.mats[i], &psi.mats[i]) * dual.weight(i);
    }
    acc
}

pub fn norm_b2_field(dual: &UnitaryDual, phi: &FourierField) -> f64 {
    inner_b2_field(dual, phi, phi).re.max(0.0).sqrt()
}

/// <a, b> = sum_x sum_xi w_xi Tr(a(x,xi) b(x,xi)*).
pub fn inner_b2_symbol(dual: &UnitaryDual, a: &Symbol, b: &Symbol) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for x in 0..a.mats.len() {
        for i in 0..dual.len() {
            acc += hs_inner(&a.mats[x][i], &b.mats[x][i]) * dual.weight(i);
        }
    }
    acc
}

pub fn norm_b2_symbol(dual: &UnitaryDual, a: &Symbol) -> f64 {
    inner_b2_symbol(dual, a, a).re.max(0.0).sqrt()
}

/// Same weighting on the flipped phase space.
pub fn inner_b2_dual_symbol(dual: &UnitaryDual, a: &DualSymbol, b: &DualSymbol) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..dual.len() {
        for x in 0..a.mats[i].len() {
            acc += hs_inner(&a.mats[i][x], &b.mats[i][x]) * dual.weight(i);
        }
    }
    acc
}

pub fn norm_b2_dual_symbol(dual: &UnitaryDual, a: &DualSymbol) -> f64 {
    inner_b2_dual_symbol(dual, a, a).re.max(0.0).sqrt()
}

fn schatten_p(p: f64) -> Result<Option<f64>, CoreError> {
    if p.is_nan() || p < 1.0 {
        return Err(CoreError::BadInput(format!("Schatten exponent {p} < 1")));
    }
    Ok(if p.is_infinite() { None } else { Some(p) })
}

/// Weighted Schatten-p norm over the dual: p = infinity gives the sup
/// of the fiber operator norms, finite p gives
/// (sum_xi w_xi ||phi(xi)||_p^p)^(1/p).
pub fn norm_bp_field(dual: &UnitaryDual, phi: &FourierField, p: f64) -> Result<f64, CoreError> {
    let sp = schatten_p(p)?;
    match sp {
        None => {
            let mut worst = 0.0f64;
            for m in &phi.mats {
                worst = worst.max(schatten_norm(m, None)?);
            }
            Ok(worst)
        }
        Some(p) => {
            let mut acc = 0.0;
            for (i, m) in phi.mats.iter().enumerate() {
                acc += dual.weight(i) * schatten_norm(m, Some(p))?.powf(p);
            }
            Ok(acc.powf(1.0 / p))
        }
    }
}

/// Mixed norm on the flipped phase space with equal exponents:
/// (sum_x sum_xi w_xi ||b(xi,x)||_p^p)^(1/p); p = infinity gives the
/// overall sup of fiber operator norms.
pub fn norm_bpp_dual_symbol(
    dual: &UnitaryDual,
    b: &DualSymbol,
    p: f64,
) -> Result<f64, CoreError> {
    let sp = schatten_p(p)?;
    match sp {
        None => {
            let mut worst = 0.0f64;
            for row in &b.mats {
                for m in row {
                    worst = worst.max(schatten_norm(m, None)?);
                }
            }
            Ok(worst)
        }
        Some(p) => {
            let mut acc = 0.0;
            for (i, row) in b.mats.iter().enumerate() {
                for m in row {
                    acc += dual.weight(i) * schatten_norm(m, Some(p))?.powf(p);
                }
            }
            Ok(acc.powf(1.0 / p))
        }
    }
}

pub(crate) fn c64_value(z: C64) -> Value {
    Value::Array(vec![z.re.into(), z.im.into()])
}

pub(crate) fn c64_from_value(v: &Value) -> Result<C64, CoreError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| CoreError::BadInput("complex entry must be [re, im]".into()))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| CoreError::BadInput("non-numeric real part".into()))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| CoreError::BadInput("non-numeric imaginary part".into()))?;
    Ok(Complex64::new(re, im))
}

pub(crate) fn matrix_value(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| c64_value(m[(r, c)])).collect()))
            .collect(),
    )
}

pub(crate) fn matrix_from_value(dim: usize, v: &Value) -> Result<CMat, CoreError> {
    let rows = v
        .as_array()
        .filter(|a| a.len() == dim)
        .ok_or_else(|| CoreError::Shape(format!("expected {dim} matrix rows")))?;
    let mut m = CMat::zeros(dim, dim);
    for (r, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .filter(|a| a.len() == dim)
            .ok_or_else(|| CoreError::Shape(format!("expected {dim} matrix columns")))?;
        for (c, entry) in cols.iter().enumerate() {
            m[(r, c)] = c64_from_value(entry)?;
        }
    }
    Ok(m)
}

/// Field as JSON keyed by irrep label.
pub fn field_to_json(dual: &UnitaryDual, phi: &FourierField) -> Result<String, CoreError> {
    let mut map = Map::new();
    for (i, rep) in dual.irreps().iter().enumerate() {
        map.insert(rep.label.clone(), matrix_value(&phi.mats[i]));
    }
    Ok(serde_json::to_string_pretty(&Value::Object(map))?)
}

pub fn field_from_json(dual: &UnitaryDual, text: &str) -> Result<FourierField, CoreError> {
    let value: Value = serde_json::from_str(text)?;
    let map = value
        .as_object()
        .ok_or_else(|| CoreError::BadInput("field JSON must be an object".into()))?;
    let mats = dual
        .irreps()
        .iter()
        .map(|rep| {
            let entry = map
                .get(&rep.label)
                .ok_or_else(|| CoreError::BadInput(format!("missing irrep {}", rep.label)))?;
            matrix_from_value(rep.dim, entry)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FourierField { mats })
}

/// Symbol as JSON keyed by element index (decimal string), then irrep
/// label.
pub fn symbol_to_json(dual: &UnitaryDual, a: &Symbol) -> Result<String, CoreError> {
    let mut outer = Map::new();
    for (x, row) in a.mats.iter().enumerate() {
        let mut inner = Map::new();
        for (i, rep) in dual.irreps().iter().enumerate() {
            inner.insert(rep.label.clone(), matrix_value(&row[i]));
        }
        outer.insert(x.to_string(), Value::Object(inner));
    }
    Ok(serde_json::to_string_pretty(&Value::Object(outer))?)
}

pub fn symbol_from_json(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    text: &str,
) -> Result<Symbol, CoreError> {
    let value: Value = serde_json::from_str(text)?;
    let outer = value
        .as_object()
        .ok_or_else(|| CoreError::BadInput("symbol JSON must be an object".into()))?;
    let mats = (0..group.order())
        .map(|x| {
            let inner = outer
                .get(&x.to_string())
                .and_then(Value::as_object)
                .ok_or_else(|| CoreError::BadInput(format!("missing element {x}")))?;
            dual.irreps()
                .iter()
                .map(|rep| {
                    let entry = inner.get(&rep.label).ok_or_else(|| {
                        CoreError::BadInput(format!("element {x} missing irrep {}", rep.label))
                    })?;
                    matrix_from_value(rep.dim, entry)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Symbol { mats })
}
