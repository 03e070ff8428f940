//! Twisted convolution algebras, their Schroedinger representation,
//! and covariant operator families over finite dynamical systems.
//!
//! Elements are functions of two group variables, written F(q, x): q
//! is the coefficient variable, x the convolution variable. The group
//! acts on coefficients by left translation, (theta_y f)(q) =
//! f(y^-1 q). The Schroedinger representation turns a twisted element
//! into a dense operator on L^2(G); on a finite group it is a linear
//! bijection onto the full matrix algebra, so every operator statement
//! can be checked exactly.

use serde_json::{Map, Value};

use crate::error::CoreError;
use crate::groups::{FiniteGroup, TauMap, UnitaryDual};
use crate::harmonic::{
    c64_from_value, c64_value, inverse_fourier, FourierField, GroupFunction, Symbol,
    TwoVarFunction,
};
use crate::la::{CMat, C64};
use crate::quantize::{op_from_symbol, HSOperator, Side};

/// An element of the twisted convolution algebra: a function F(q, x)
/// of a coefficient variable q and a convolution variable x, stored
/// with rows indexed by q and columns by x.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedElement {
    pub phi: TwoVarFunction,
    /// Marks elements of the scalar subalgebra, which do not depend
    /// on the coefficient variable.
    pub constant_in_q: bool,
}

impl CrossedElement {
    pub fn new(phi: TwoVarFunction) -> Self {
        Self {
            phi,
            constant_in_q: false,
        }
    }

    /// Embeds a one-variable function as a coefficient-independent
    /// element: F(q, x) = f(x).
    pub fn scalar(group: &FiniteGroup, f: &GroupFunction) -> Self {
        let n = group.order();
        Self {
            phi: TwoVarFunction {
                values: CMat::from_fn(n, n, |_, x| f.values[x]),
            },
            constant_in_q: true,
        }
    }

    pub fn random(order: usize, seed: u64) -> Self {
        Self::new(TwoVarFunction::random(order, seed))
    }

    pub fn order(&self) -> usize {
        self.phi.values.nrows()
    }

    pub fn value(&self, q: usize, x: usize) -> C64 {
        self.phi.values[(q, x)]
    }

    /// Whether the stored table really is coefficient-independent.
    pub fn is_constant_in_q(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (1..n).all(|q| self.phi.values[(q, x)] == self.phi.values[(0, x)]))
    }

    /// Checks the subalgebra flag against the table.
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.constant_in_q && !self.is_constant_in_q() {
            return Err(CoreError::Validation(
                "element is flagged coefficient-independent but varies in q".into(),
            ));
        }
        Ok(())
    }
}

/// The left translation action on coefficients:
/// (theta_y f)(q) = f(y^-1 q).
pub fn theta_action(group: &FiniteGroup, y: usize, f: &GroupFunction) -> GroupFunction {
    GroupFunction {
        values: group
            .elements()
            .map(|q| f.values[group.mul(group.inv(y), q)])
            .collect(),
    }
}

/// The twisted product,
/// (F *tau* H)(q, x) =
///   sum_y F(tau(y)^-1 tau(x) q, y) H(tau(y^-1 x)^-1 y^-1 tau(x) q, y^-1 x).
/// Coefficient-independent inputs reduce to plain group convolution.
pub fn twisted_convolve(
    group: &FiniteGroup,
    tau: &TauMap,
    f: &CrossedElement,
    h: &CrossedElement,
) -> Result<CrossedElement, CoreError> {
    let n = group.order();
    if f.order() != n || h.order() != n {
        return Err(CoreError::Shape(
            "twisted factors do not match the group order".into(),
        ));
    }
    let mut values = CMat::zeros(n, n);
    for q in 0..n {
        for x in 0..n {
            let tx_q = group.mul(tau.apply(x), q);
            let mut acc = C64::new(0.0, 0.0);
            for y in 0..n {
                let w = group.mul(group.inv(y), x);
                let first = group.mul(group.inv(tau.apply(y)), tx_q);
                let second = group.mul(group.inv(tau.apply(w)), group.mul(group.inv(y), tx_q));
                acc += f.phi.values[(first, y)] * h.phi.values[(second, w)];
            }
            values[(q, x)] = acc;
        }
    }
    Ok(CrossedElement {
        phi: TwoVarFunction { values },
        constant_in_q: f.constant_in_q && h.constant_in_q,
    })
}

/// The twisted involution,
/// F^*(q, x) = conj(F(tau(x^-1)^-1 x^-1 tau(x) q, x^-1)).
/// At a left symmetry function the coefficient argument collapses to
/// q, leaving conj(F(q, x^-1)).
pub fn twisted_involute(group: &FiniteGroup, tau: &TauMap, f: &CrossedElement) -> CrossedElement {
    let n = group.order();
    let values = CMat::from_fn(n, n, |q, x| {
        let xi = group.inv(x);
        let shift = group.mul(
            group.inv(tau.apply(xi)),
            group.mul(xi, group.mul(tau.apply(x), q)),
        );
        f.phi.values[(shift, xi)].conj()
    });
    CrossedElement {
        phi: TwoVarFunction { values },
        constant_in_q: f.constant_in_q,
    }
}

/// The Schroedinger representation: the operator with kernel
/// K(x, y) = F(tau(x y^-1)^-1 x, x y^-1). A *-homomorphism from the
/// twisted algebra onto the full matrix algebra.
pub fn schrodinger(group: &FiniteGroup, tau: &TauMap, f: &CrossedElement) -> HSOperator {
    let n = group.order();
    HSOperator {
        mat: CMat::from_fn(n, n, |x, y| {
            let w = group.mul(x, group.inv(y));
            f.phi.values[(group.mul(group.inv(tau.apply(w)), x), w)]
        }),
    }
}

/// Inverts the Schroedinger representation:
/// F(q, w) = K(tau(w) q, w^-1 tau(w) q). Together with [`schrodinger`]
/// this exhibits the representation as a linear bijection.
pub fn schrodinger_inverse(
    group: &FiniteGroup,
    tau: &TauMap,
    op: &HSOperator,
) -> Result<CrossedElement, CoreError> {
    let n = group.order();
    if op.order() != n {
        return Err(CoreError::Shape(format!(
            "operator order {} does not match group order {n}",
            op.order()
        )));
    }
    let values = CMat::from_fn(n, n, |q, w| {
        let x = group.mul(tau.apply(w), q);
        op.mat[(x, group.mul(group.inv(w), x))]
    });
    Ok(CrossedElement::new(TwoVarFunction { values }))
}

/// Changes the ordering parameter without changing the represented
/// operator: schrodinger(tau, transport(tau, tau', F)) equals
/// schrodinger(tau', F). The transports compose along parameter
/// chains and invert by swapping arguments.
pub fn nu_transport(
    group: &FiniteGroup,
    tau: &TauMap,
    tau_prime: &TauMap,
    f: &CrossedElement,
) -> CrossedElement {
    let n = group.order();
    let values = CMat::from_fn(n, n, |q, x| {
        let shift = group.mul(
            group.inv(tau_prime.apply(x)),
            group.mul(tau.apply(x), q),
        );
        f.phi.values[(shift, x)]
    });
    CrossedElement {
        phi: TwoVarFunction { values },
        constant_in_q: f.constant_in_q,
    }
}

/// The multiplication operator diag(f).
pub fn mult_op(f: &GroupFunction) -> HSOperator {
    let n = f.len();
    HSOperator {
        mat: CMat::from_fn(n, n, |x, y| {
            if x == y {
                f.values[x]
            } else {
                C64::new(0.0, 0.0)
            }
        }),
    }
}

/// The unitary left translation, (L(y) v)(x) = v(y^-1 x).
pub fn left_translation(group: &FiniteGroup, y: usize) -> HSOperator {
    let n = group.order();
    let mut mat = CMat::zeros(n, n);
    for x in 0..n {
        mat[(x, group.mul(group.inv(y), x))] = C64::new(1.0, 0.0);
    }
    HSOperator { mat }
}

/// Group convolution, (f * g)(x) = sum_y f(y) g(y^-1 x).
pub fn convolve(group: &FiniteGroup, f: &GroupFunction, g: &GroupFunction) -> GroupFunction {
    GroupFunction {
        values: group
            .elements()
            .map(|x| {
                let mut acc = C64::new(0.0, 0.0);
                for y in 0..group.order() {
                    acc += f.values[y] * g.values[group.mul(group.inv(y), x)];
                }
                acc
            })
            .collect(),
    }
}

/// Convolution operators: the left version maps v to f * v, with
/// matrix entry f(x y^-1); the right version maps v to v * f, with
/// matrix entry f(y^-1 x). Left convolutions commute with right
/// translations and with every right convolution.
pub fn conv_op(group: &FiniteGroup, side: Side, f: &GroupFunction) -> HSOperator {
    let n = group.order();
    HSOperator {
        mat: CMat::from_fn(n, n, |x, y| match side {
            Side::Left => f.values[group.mul(x, group.inv(y))],
            Side::Right => f.values[group.mul(group.inv(y), x)],
        }),
    }
}

/// The four product-symbol factorizations: which side the symbol
/// a(x, xi) = g(x) beta(xi) is quantized on, and which of the two
/// distinguished ordering parameters is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactoredQuantization {
    /// Left side, tau constant at the identity element.
    LeftConstE,
    /// Left side, tau the identity map.
    LeftIdentity,
    /// Right side, tau constant at the identity element.
    RightConstE,
    /// Right side, tau the identity map.
    RightIdentity,
}

impl FactoredQuantization {
    pub fn side(self) -> Side {
        match self {
            Self::LeftConstE | Self::LeftIdentity => Side::Left,
            Self::RightConstE | Self::RightIdentity => Side::Right,
        }
    }

    pub fn tau(self, group: &FiniteGroup) -> TauMap {
        match self {
            Self::LeftConstE | Self::RightConstE => TauMap::constant_e(group),
            Self::LeftIdentity | Self::RightIdentity => TauMap::identity(group),
        }
    }
}

/// Quantizes the product symbol a(x, xi) = g(x) beta(xi) through its
/// operator factorization: multiplication first at the constant-e
/// parameter, convolution first at the identity-map parameter, with
/// the convolution side matching the quantization side.
pub fn product_symbol_op(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    which: FactoredQuantization,
    g: &GroupFunction,
    beta: &FourierField,
) -> Result<HSOperator, CoreError> {
    if g.len() != group.order() {
        return Err(CoreError::Shape(
            "coefficient function does not match the group order".into(),
        ));
    }
    let f = inverse_fourier(group, dual, beta)?;
    let conv = conv_op(group, which.side(), &f);
    let mult = mult_op(g);
    Ok(match which {
        FactoredQuantization::LeftConstE | FactoredQuantization::RightConstE => {
            mult.compose(&conv)
        }
        FactoredQuantization::LeftIdentity | FactoredQuantization::RightIdentity => {
            conv.compose(&mult)
        }
    })
}

/// The symbol a(x, xi) = g(x) beta(xi) as a full table, for comparing
/// the factorizations against direct quantization.
pub fn product_symbol(group: &FiniteGroup, g: &GroupFunction, beta: &FourierField) -> Symbol {
    Symbol {
        mats: (0..group.order())
            .map(|x| beta.mats.iter().map(|m| m * g.values[x]).collect())
            .collect(),
    }
}

/// A finite dynamical system: a left action of the group on a finite
/// set by permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicalSystem {
    omega_size: usize,
    /// action[x][w] is the image of the point w under the element x.
    action: Vec<Vec<usize>>,
}

impl DynamicalSystem {
    /// Validates the action table: every row a permutation, the
    /// identity acting trivially, and composition matching the group
    /// law, rho_x o rho_y = rho_{xy}.
    pub fn new(
        group: &FiniteGroup,
        omega_size: usize,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, CoreError> {
        if action.len() != group.order() {
            return Err(CoreError::Shape(format!(
                "action table covers {} elements, group has {}",
                action.len(),
                group.order()
            )));
        }
        for (x, row) in action.iter().enumerate() {
            if row.len() != omega_size {
                return Err(CoreError::Shape(format!(
                    "action row {x} has length {}, point set has {omega_size}",
                    row.len()
                )));
            }
            let mut seen = vec![false; omega_size];
            for &w in row {
                if w >= omega_size {
                    return Err(CoreError::Validation(format!(
                        "action of element {x} sends a point to {w}, outside the set"
                    )));
                }
                if seen[w] {
                    return Err(CoreError::Validation(format!(
                        "action of element {x} is not a permutation"
                    )));
                }
                seen[w] = true;
            }
        }
        let sys = Self { omega_size, action };
        for w in 0..omega_size {
            if sys.apply(group.identity(), w) != w {
                return Err(CoreError::Validation(
                    "identity element does not act trivially".into(),
                ));
            }
        }
        for x in group.elements() {
            for y in group.elements() {
                let xy = group.mul(x, y);
                for w in 0..omega_size {
                    if sys.apply(x, sys.apply(y, w)) != sys.apply(xy, w) {
                        return Err(CoreError::Validation(format!(
                            "action is not a homomorphism at the pair ({x}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(sys)
    }

    /// The group acting on itself by left multiplication; the identity
    /// point has orbit map x -> x.
    pub fn translation(group: &FiniteGroup) -> Self {
        let n = group.order();
        Self {
            omega_size: n,
            action: (0..n)
                .map(|x| (0..n).map(|w| group.mul(x, w)).collect())
                .collect(),
        }
    }

    /// Left multiplication on the coset space G / H for a normal
    /// subgroup H given by its element list.
    pub fn quotient(group: &FiniteGroup, subgroup: &[usize]) -> Result<Self, CoreError> {
        let n = group.order();
        let mut in_h = vec![false; n];
        for &h in subgroup {
            if h >= n {
                return Err(CoreError::BadInput(format!("element {h} outside the group")));
            }
            in_h[h] = true;
        }
        if !in_h[group.identity()] {
            return Err(CoreError::BadInput("subgroup misses the identity".into()));
        }
        for &a in subgroup {
            if !in_h[group.inv(a)] {
                return Err(CoreError::Validation("subgroup is not inverse-closed".into()));
            }
            for &b in subgroup {
                if !in_h[group.mul(a, b)] {
                    return Err(CoreError::Validation("subgroup is not closed".into()));
                }
            }
            for g in group.elements() {
                if !in_h[group.mul(group.mul(g, a), group.inv(g))] {
                    return Err(CoreError::Validation("subgroup is not normal".into()));
                }
            }
        }
        // enumerate cosets by smallest representative
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] == usize::MAX {
                let idx = reps.len();
                reps.push(g);
                for &h in subgroup {
                    coset_of[group.mul(g, h)] = idx;
                }
            }
        }
        let m = reps.len();
        let action = (0..n)
            .map(|x| (0..m).map(|w| coset_of[group.mul(x, reps[w])]).collect())
            .collect();
        Self::new(group, m, action)
    }

    /// The translation system relabeled through a seeded permutation
    /// of the point set: conjugating a valid action by any bijection
    /// yields another valid action.
    pub fn seeded_conjugation(group: &FiniteGroup, seed: u64) -> Self {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = group.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        perm.shuffle(&mut rng);
        let mut inv_perm = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv_perm[p] = i;
        }
        Self {
            omega_size: n,
            action: (0..n)
                .map(|x| (0..n).map(|w| perm[group.mul(x, inv_perm[w])]).collect())
                .collect(),
        }
    }

    pub fn omega_size(&self) -> usize {
        self.omega_size
    }

    /// The image of the point w under the element x.
    pub fn apply(&self, x: usize, w: usize) -> usize {
        self.action[x][w]
    }

    /// The orbit partition, each orbit sorted ascending, orbits
    /// ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.omega_size];
        let mut parts = Vec::new();
        for start in 0..self.omega_size {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<usize> = self
                .action
                .iter()
                .map(|row| row[start])
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            orbit.sort_unstable();
            for &w in &orbit {
                seen[w] = true;
            }
            parts.push(orbit);
        }
        parts
    }
}

/// A symbol over the point set: one fiber matrix per (point, irrep).
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSymbol {
    /// mats[w][xi]
    pub mats: Vec<Vec<CMat>>,
}

impl OmegaSymbol {
    pub fn random(omega_size: usize, dual: &UnitaryDual, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self {
            mats: (0..omega_size)
                .map(|_| {
                    dual.irreps()
                        .iter()
                        .map(|r| crate::harmonic::random_matrix(&mut rng, r.dim))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn omega_size(&self) -> usize {
        self.mats.len()
    }
}

/// Pins the symbol to the trajectory of one point:
/// a(x, xi) = h(rho_x(w), xi).
pub fn localized_symbol(
    group: &FiniteGroup,
    system: &DynamicalSystem,
    w: usize,
    h: &OmegaSymbol,
) -> Result<Symbol, CoreError> {
    if w >= system.omega_size() {
        return Err(CoreError::BadInput(format!(
            "point {w} outside the set of size {}",
            system.omega_size()
        )));
    }
    if h.omega_size() != system.omega_size() {
        return Err(CoreError::Shape(
            "symbol table does not cover the point set".into(),
        ));
    }
    Ok(Symbol {
        mats: (0..group.order())
            .map(|x| h.mats[system.apply(x, w)].clone())
            .collect(),
    })
}

/// The covariant family member at the point w: the left quantization
/// of the localized symbol. Conjugating by a right translation moves
/// the base point along its orbit.
pub fn op_omega(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    system: &DynamicalSystem,
    w: usize,
    h: &OmegaSymbol,
) -> Result<HSOperator, CoreError> {
    let a = localized_symbol(group, system, w, h)?;
    op_from_symbol(group, dual, Side::Left, tau, &a)
}

/// Restricts a system and a symbol to the orbit of one point. Returns
/// the restricted system, the restricted symbol, and the index of the
/// base point inside the orbit.
pub fn restrict_to_orbit(
    group: &FiniteGroup,
    system: &DynamicalSystem,
    w: usize,
    h: &OmegaSymbol,
) -> Result<(DynamicalSystem, OmegaSymbol, usize), CoreError> {
    if w >= system.omega_size() {
        return Err(CoreError::BadInput(format!(
            "point {w} outside the set of size {}",
            system.omega_size()
        )));
    }
    let orbit = system
        .orbits()
        .into_iter()
        .find(|orbit| orbit.contains(&w))
        .expect("every point lies in an orbit");
    let mut position = vec![usize::MAX; system.omega_size()];
    for (i, &p) in orbit.iter().enumerate() {
        position[p] = i;
    }
    let action = (0..group.order())
        .map(|x| orbit.iter().map(|&p| position[system.apply(x, p)]).collect())
        .collect();
    let sub = DynamicalSystem::new(group, orbit.len(), action)?;
    let mats = orbit.iter().map(|&p| h.mats[p].clone()).collect();
    Ok((sub, OmegaSymbol { mats }, position[w]))
}

/// The eigenvalue list of a dense operator, sorted by real then
/// imaginary part.
pub fn spectrum(op: &HSOperator) -> Result<Vec<C64>, CoreError> {
    crate::la::eigenvalues(&op.mat)
}

/// System as JSON: {"omega": m, "action": {"x": [permutation]}}.
pub fn system_to_json(system: &DynamicalSystem) -> Result<String, CoreError> {
    let mut action = Map::new();
    for (x, row) in system.action.iter().enumerate() {
        action.insert(
            x.to_string(),
            Value::Array(row.iter().map(|&w| Value::from(w)).collect()),
        );
    }
    let mut root = Map::new();
    root.insert("omega".into(), Value::from(system.omega_size));
    root.insert("action".into(), Value::Object(action));
    Ok(serde_json::to_string_pretty(&Value::Object(root))?)
}

/// Parses and fully re-validates a system against the group.
pub fn system_from_json(group: &FiniteGroup, text: &str) -> Result<DynamicalSystem, CoreError> {
    let root: Value = serde_json::from_str(text)?;
    let omega = root
        .get("omega")
        .and_then(Value::as_u64)
        .ok_or_else(|| CoreError::BadInput("missing omega size".into()))? as usize;
    let table = root
        .get("action")
        .and_then(Value::as_object)
        .ok_or_else(|| CoreError::BadInput("missing action table".into()))?;
    let mut action = vec![Vec::new(); group.order()];
    for (key, row) in table {
        let x: usize = key
            .parse()
            .map_err(|_| CoreError::BadInput(format!("bad element index {key:?}")))?;
        if x >= group.order() {
            return Err(CoreError::BadInput(format!(
                "element index {x} outside the group"
            )));
        }
        let row = row
            .as_array()
            .ok_or_else(|| CoreError::BadInput("action row is not an array".into()))?;
        action[x] = row
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|w| w as usize)
                    .ok_or_else(|| CoreError::BadInput("action entry is not an integer".into()))
            })
            .collect::<Result<_, _>>()?;
    }
    DynamicalSystem::new(group, omega, action)
}

/// Symbol over a point set as JSON: fibers keyed by point index then
/// irrep label.
pub fn omega_symbol_to_json(
    dual: &UnitaryDual,
    h: &OmegaSymbol,
) -> Result<String, CoreError> {
    let mut root = Map::new();
    for (w, row) in h.mats.iter().enumerate() {
        let mut by_label = Map::new();
        for (rep, m) in dual.irreps().iter().zip(row) {
            by_label.insert(rep.label.clone(), crate::harmonic::matrix_value(m));
        }
        root.insert(w.to_string(), Value::Object(by_label));
    }
    Ok(serde_json::to_string_pretty(&Value::Object(root))?)
}

/// Parses a point-set symbol, requiring every point below the stated
/// size and every irrep label to be covered.
pub fn omega_symbol_from_json(
    dual: &UnitaryDual,
    omega_size: usize,
    text: &str,
) -> Result<OmegaSymbol, CoreError> {
    let root: Value = serde_json::from_str(text)?;
    let table = root
        .as_object()
        .ok_or_else(|| CoreError::BadInput("symbol file is not an object".into()))?;
    let mut mats = Vec::with_capacity(omega_size);
    for w in 0..omega_size {
        let row = table
            .get(&w.to_string())
            .and_then(Value::as_object)
            .ok_or_else(|| CoreError::BadInput(format!("missing point {w}")))?;
        let mut fibers = Vec::with_capacity(dual.len());
        for rep in dual.irreps() {
            let value = row.get(&rep.label).ok_or_else(|| {
                CoreError::BadInput(format!("point {w} misses irrep {:?}", rep.label))
            })?;
            let m = crate::harmonic::matrix_from_value(rep.dim, value)?;
            fibers.push(m);
        }
        mats.push(fibers);
    }
    Ok(OmegaSymbol { mats })
}

/// Crossed element as JSON: {"order": n, "values": [[ [re, im] ]]},
/// rows indexed by the coefficient variable.
pub fn crossed_to_json(f: &CrossedElement) -> Result<String, CoreError> {
    let n = f.order();
    let rows: Vec<Value> = (0..n)
        .map(|q| {
            Value::Array(
                (0..n)
                    .map(|x| c64_value(f.phi.values[(q, x)]))
                    .collect(),
            )
        })
        .collect();
    let mut root = Map::new();
    root.insert("order".into(), Value::from(n));
    root.insert("constant_in_q".into(), Value::from(f.constant_in_q));
    root.insert("values".into(), Value::Array(rows));
    Ok(serde_json::to_string_pretty(&Value::Object(root))?)
}

pub fn crossed_from_json(text: &str) -> Result<CrossedElement, CoreError> {
    let root: Value = serde_json::from_str(text)?;
    let n = root
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| CoreError::BadInput("missing order".into()))? as usize;
    let flag = root
        .get("constant_in_q")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let rows = root
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::BadInput("missing values".into()))?;
    if rows.len() != n {
        return Err(CoreError::BadInput("row count does not match order".into()));
    }
    let mut values = CMat::zeros(n, n);
    for (q, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CoreError::BadInput("row is not an array".into()))?;
        if row.len() != n {
            return Err(CoreError::BadInput("column count does not match order".into()));
        }
        for (x, v) in row.iter().enumerate() {
            values[(q, x)] = c64_from_value(v)?;
        }
    }
    let out = CrossedElement {
        phi: TwoVarFunction { values },
        constant_in_q: flag,
    };
    out.validate()?;
    Ok(out)
}
