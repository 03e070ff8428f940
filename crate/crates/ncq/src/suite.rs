//! The invariant battery behind `ncq suite run`.
//!
//! Every check reduces to a single worst-case number. Upper-bound
//! checks pass when that number stays at or below the tolerance,
//! separation checks pass when it stays at or above. Counting checks
//! report a failure count and pass only at zero. A check whose
//! computation errors out is recorded as failed with the error text,
//! so a malformed input fails by name instead of aborting the run.

use std::fmt::Write as _;
use std::time::Instant;

use ncq_core::crossed::{
    conv_op, convolve, left_translation, mult_op, nu_transport, op_omega, product_symbol,
    product_symbol_op, schrodinger, schrodinger_inverse, spectrum, theta_action, twisted_convolve,
    twisted_involute, CrossedElement, DynamicalSystem, FactoredQuantization, OmegaSymbol,
};
use ncq_core::groups::{
    dual_from_json, group_from_json, make_group, validate_dual, validate_group, FiniteGroup,
    TauMap, UnitaryDual, CATALOG_SPECS,
};
use ncq_core::harmonic::{
    fourier, ift_second, inner_b2_dual_symbol, inner_b2_symbol, inner_l2, inverse_fourier,
    norm_b2_dual_symbol, norm_b2_field, norm_b2_symbol, norm_bpp_dual_symbol, norm_l2, DualSymbol,
    FourierField, GroupFunction, Symbol,
};
use ncq_core::la::{eye, hausdorff, kron, max_abs_diff, op_norm, CMat, CVec, C64};
use ncq_core::nilpotent::{
    bch_axiom_residuals, cocycle_report, rn_consistency, scalar_kernel, sigma_half,
    sigma_midpoint_matrix, CoordinateTau, Grid, GroupPoint, NilpotentAlgebra, ScalarSymbol,
};
use ncq_core::quantize::{
    embed_conj_tensor, fourier_wigner, op_from_symbol, po, rank_one, right_translation,
    schatten_norm, weyl, wigner, HSOperator, Side,
};
use ncq_core::symbolalg::{
    adjoint_symbol, compose, involute, is_symmetry_function, symmetry_central_extension,
    symmetry_odd_power, symmetry_product, symmetry_search,
};
use ncq_core::CoreError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

/// Seed used when the command line does not supply one.
pub const DEFAULT_SEED: u64 = 7;

/// Direction of the pass criterion for one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compare {
    /// Passes when the residual is at most the tolerance.
    AtMost,
    /// Passes when the residual is at least the tolerance.
    AtLeast,
}

/// One row of the suite report.
#[derive(Debug, Clone)]
pub struct SuiteCheck {
    pub scope: String,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub compare: Compare,
    pub passed: bool,
    pub elapsed_ms: f64,
    pub note: Option<String>,
}

/// The full battery result. The global pass flag is true exactly when
/// every check passed.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub scope: String,
    pub seed: u64,
    pub tolerance_override: Option<f64>,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.compare == Compare::AtMost)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }

    /// Deterministic JSON document. Timing is reported only in the
    /// rendered table, so identical inputs give identical bytes.
    pub fn to_json(&self) -> Result<String, CoreError> {
        let mut root = Map::new();
        root.insert("scope".into(), Value::from(self.scope.as_str()));
        root.insert("seed".into(), Value::from(self.seed));
        root.insert(
            "tolerance_override".into(),
            match self.tolerance_override {
                Some(t) => Value::from(t),
                None => Value::Null,
            },
        );
        root.insert("pass".into(), Value::from(self.pass()));
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut row = Map::new();
                row.insert("scope".into(), Value::from(c.scope.as_str()));
                row.insert("name".into(), Value::from(c.name.as_str()));
                row.insert(
                    "residual".into(),
                    if c.residual.is_finite() {
                        Value::from(c.residual)
                    } else {
                        Value::Null
                    },
                );
                row.insert("tolerance".into(), Value::from(c.tolerance));
                row.insert(
                    "compare".into(),
                    Value::from(match c.compare {
                        Compare::AtMost => "atMost",
                        Compare::AtLeast => "atLeast",
                    }),
                );
                row.insert("passed".into(), Value::from(c.passed));
                if let Some(note) = &c.note {
                    row.insert("error".into(), Value::from(note.as_str()));
                }
                Value::Object(row)
            })
            .collect();
        root.insert("checks".into(), Value::Array(checks));
        Ok(serde_json::to_string_pretty(&Value::Object(root))?)
    }

    /// Human-readable table with per-check timing.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<26} {:<34} {:>12} {:>10} {:>9}  status",
            "scope", "check", "residual", "tolerance", "time"
        );
        for c in &self.checks {
            let rel = match c.compare {
                Compare::AtMost => "<=",
                Compare::AtLeast => ">=",
            };
            let _ = writeln!(
                out,
                "{:<26} {:<34} {:>12} {} {:>7} {:>8.1}ms  {}",
                c.scope,
                c.name,
                format_residual(c.residual),
                rel,
                format_residual(c.tolerance),
                c.elapsed_ms,
                if c.passed { "pass" } else { "FAIL" }
            );
            if let Some(note) = &c.note {
                let _ = writeln!(out, "    error: {note}");
            }
        }
        let _ = writeln!(
            out,
            "suite: {} ({} checks, seed {})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.seed
        );
        out
    }
}

fn format_residual(x: f64) -> String {
    if !x.is_finite() {
        "inf".to_string()
    } else if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.2e}")
    }
}

/// Deterministic per-check seed derivation: the run seed is folded
/// into an FNV-1a hash of the check tag.
pub fn subseed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Collects checks for one scope, applying the tolerance override to
/// upper-bound checks only. Separation thresholds are part of the
/// statement being tested and stay fixed.
struct Battery {
    scope: String,
    tol_override: Option<f64>,
    checks: Vec<SuiteCheck>,
}

impl Battery {
    fn new(scope: &str, tol_override: Option<f64>) -> Self {
        Self {
            scope: scope.to_string(),
            tol_override,
            checks: Vec::new(),
        }
    }

    fn at_most<F>(&mut self, name: &str, default_tol: f64, f: F)
    where
        F: FnOnce() -> Result<f64, CoreError>,
    {
        let started = Instant::now();
        let outcome = f();
        let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        let tolerance = self.tol_override.unwrap_or(default_tol);
        let (residual, note) = match outcome {
            Ok(r) => (r, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        self.checks.push(SuiteCheck {
            scope: self.scope.clone(),
            name: name.to_string(),
            residual,
            tolerance,
            compare: Compare::AtMost,
            passed: note.is_none() && residual <= tolerance,
            elapsed_ms,
            note,
        });
    }

    fn at_least<F>(&mut self, name: &str, threshold: f64, f: F)
    where
        F: FnOnce() -> Result<f64, CoreError>,
    {
        let started = Instant::now();
        let outcome = f();
        let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        let (residual, note) = match outcome {
            Ok(r) => (r, None),
            Err(e) => (0.0, Some(e.to_string())),
        };
        self.checks.push(SuiteCheck {
            scope: self.scope.clone(),
            name: name.to_string(),
            residual,
            tolerance: threshold,
            compare: Compare::AtLeast,
            passed: note.is_none() && residual >= threshold,
            elapsed_ms,
            note,
        });
    }
}

/// Resolves a group argument: either a catalog family string or
/// `file:<path>` pointing to a JSON document with `group` and `dual`
/// members in the library's interchange format.
pub fn resolve_group(spec: &str) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let root: Value = serde_json::from_str(&text)?;
        let group_part = root
            .get("group")
            .ok_or_else(|| CoreError::BadInput(format!("{path} has no \"group\" member")))?;
        let dual_part = root
            .get("dual")
            .ok_or_else(|| CoreError::BadInput(format!("{path} has no \"dual\" member")))?;
        let group = group_from_json(&serde_json::to_string(group_part)?)?;
        let dual = dual_from_json(group.order(), &serde_json::to_string(dual_part)?)?;
        Ok((group, dual))
    } else {
        make_group(spec)
    }
}

fn sup_values(values: &[C64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn sup_value_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn symbol_sup_diff(a: &Symbol, b: &Symbol) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rb) in a.mats.iter().zip(&b.mats) {
        for (ma, mb) in ra.iter().zip(rb) {
            worst = worst.max(max_abs_diff(ma, mb));
        }
    }
    worst
}

fn symbol_scale(a: &Symbol, factor: C64) -> Symbol {
    Symbol {
        mats: a
            .mats
            .iter()
            .map(|row| row.iter().map(|m| m * factor).collect())
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Per-group residuals
// ---------------------------------------------------------------------------

/// Worst residual of group and dual validation.
pub fn dual_validation_residual(group: &FiniteGroup, dual: &UnitaryDual) -> f64 {
    let mut worst = 0.0f64;
    for item in validate_group(group)
        .checks
        .iter()
        .chain(&validate_dual(group, dual).checks)
    {
        worst = worst.max(item.residual);
    }
    worst
}

/// Relative defect of the norm identity and of transform inversion
/// over `count` seeded functions.
pub fn plancherel_inversion_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
    count: usize,
) -> Result<f64, CoreError> {
    let n = group.order();
    let base = subseed(seed, "plancherel");
    let mut worst = 0.0f64;
    for k in 0..count {
        let u = GroupFunction::random(n, base.wrapping_add(k as u64));
        let uhat = fourier(group, dual, &u)?;
        let lhs = norm_l2(&u).powi(2);
        let rhs = norm_b2_field(dual, &uhat).powi(2);
        worst = worst.max((lhs - rhs).abs() / lhs);
        let back = inverse_fourier(group, dual, &uhat)?;
        worst = worst.max(sup_value_diff(&u.values, &back.values) / sup_values(&u.values));
    }
    Ok(worst)
}

/// Relative defect of the norm equality between an operator and its
/// symbol, over seeded symbols, the standard ordering sample, and both
/// translation sides.
pub fn isometry_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
    symbols: usize,
) -> Result<f64, CoreError> {
    let taus = TauMap::sample_set(group, subseed(seed, "isometry-tau"));
    let base = subseed(seed, "isometry-symbol");
    let mut worst = 0.0f64;
    for k in 0..symbols {
        let a = Symbol::random(group, dual, base.wrapping_add(k as u64));
        let expected = norm_b2_symbol(dual, &a);
        for (_, tau) in &taus {
            for side in [Side::Right, Side::Left] {
                let op = op_from_symbol(group, dual, side, tau, &a)?;
                worst = worst.max((op.hs_norm() - expected).abs() / expected);
            }
        }
    }
    Ok(worst)
}

/// An x-independent symbol must act fiberwise as multiplication on the
/// transform side, for every ordering map in the sample.
pub fn multiplier_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let taus = TauMap::sample_set(group, subseed(seed, "multiplier-tau"));
    let base = subseed(seed, "multiplier");
    let mut worst = 0.0f64;
    for t in 0..3u64 {
        let beta = FourierField::random(dual, base.wrapping_add(t));
        let a = Symbol::x_independent(group, &beta);
        let u = GroupFunction::random(n, base.wrapping_add(100 + t));
        let uhat = fourier(group, dual, &u)?;
        for (_, tau) in &taus {
            let op = op_from_symbol(group, dual, Side::Right, tau, &a)?;
            let lhs = fourier(group, dual, &op.apply(&u))?;
            for i in 0..dual.len() {
                worst = worst.max(max_abs_diff(&lhs.mats[i], &(&beta.mats[i] * &uhat.mats[i])));
            }
        }
    }
    Ok(worst)
}

/// On a commutative group the two translation sides give the same
/// operator for every symbol and ordering map.
pub fn left_right_coincidence_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let taus = TauMap::sample_set(group, subseed(seed, "left-right-tau"));
    let base = subseed(seed, "left-right");
    let mut worst = 0.0f64;
    for k in 0..3u64 {
        let a = Symbol::random(group, dual, base.wrapping_add(k));
        for (_, tau) in &taus {
            let right = op_from_symbol(group, dual, Side::Right, tau, &a)?;
            let left = op_from_symbol(group, dual, Side::Left, tau, &a)?;
            worst = worst.max(max_abs_diff(&right.mat, &left.mat));
        }
    }
    Ok(worst)
}

/// Separation between the two sides for the frozen witness symbol on a
/// noncommutative group. The witness seed is a fixture, not a run
/// parameter, so the same symbol is checked on every run.
pub fn left_right_separation(group: &FiniteGroup, dual: &UnitaryDual) -> Result<f64, CoreError> {
    let tau = TauMap::constant_e(group);
    let a = Symbol::random(group, dual, 83);
    let right = op_from_symbol(group, dual, Side::Right, &tau, &a)?;
    let left = op_from_symbol(group, dual, Side::Left, &tau, &a)?;
    Ok(max_abs_diff(&right.mat, &left.mat))
}

// ---------------------------------------------------------------------------
// Symbol algebra residuals
// ---------------------------------------------------------------------------

/// Composition realizes the operator product, involution realizes the
/// operator adjoint, composition is associative, and the weighted
/// pairing moves factors across itself through the involution.
pub fn algebra_laws_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let taus = TauMap::sample_set(group, subseed(seed, "algebra-tau"));
    let base = subseed(seed, "algebra");
    let mut worst = 0.0f64;
    for (t, (_, tau)) in taus.iter().enumerate() {
        let a = Symbol::random(group, dual, base.wrapping_add(3 * t as u64));
        let b = Symbol::random(group, dual, base.wrapping_add(3 * t as u64 + 1));
        let c = Symbol::random(group, dual, base.wrapping_add(3 * t as u64 + 2));

        let ab = compose(group, dual, tau, &a, &b)?;
        let op_a = op_from_symbol(group, dual, Side::Right, tau, &a)?;
        let op_b = op_from_symbol(group, dual, Side::Right, tau, &b)?;
        let op_ab = op_from_symbol(group, dual, Side::Right, tau, &ab)?;
        worst = worst.max(max_abs_diff(&op_ab.mat, &op_a.compose(&op_b).mat));

        let a_star = involute(group, dual, tau, &a)?;
        let op_a_star = op_from_symbol(group, dual, Side::Right, tau, &a_star)?;
        worst = worst.max(max_abs_diff(&op_a_star.mat, &op_a.adjoint().mat));

        let twice = involute(group, dual, tau, &a_star)?;
        worst = worst.max(symbol_sup_diff(&twice, &a));

        let b_star = involute(group, dual, tau, &b)?;
        let anti_lhs = involute(group, dual, tau, &ab)?;
        let anti_rhs = compose(group, dual, tau, &b_star, &a_star)?;
        worst = worst.max(symbol_sup_diff(&anti_lhs, &anti_rhs));

        let ab_c = compose(group, dual, tau, &ab, &c)?;
        let a_bc = compose(group, dual, tau, &a, &compose(group, dual, tau, &b, &c)?)?;
        worst = worst.max(symbol_sup_diff(&ab_c, &a_bc));

        let pairing = inner_b2_symbol(dual, &ab, &c);
        let via_left = inner_b2_symbol(dual, &b, &compose(group, dual, tau, &a_star, &c)?);
        let via_right = inner_b2_symbol(dual, &a, &compose(group, dual, tau, &c, &b_star)?);
        worst = worst.max((pairing - via_left).norm());
        worst = worst.max((pairing - via_right).norm());
        let plain = inner_b2_symbol(dual, &a, &b);
        let reversed = inner_b2_symbol(dual, &b_star, &a_star);
        worst = worst.max((plain - reversed).norm());
    }
    Ok(worst)
}

/// Transition symbols compose through the pairing of their legs,
/// involute by swapping the legs, quantize to rank-one operators, and
/// implement the quantization pairing.
pub fn wigner_calculus_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let taus = TauMap::sample_set(group, subseed(seed, "wigner-tau"));
    let base = subseed(seed, "wigner");
    let u1 = GroupFunction::random(n, base);
    let v1 = GroupFunction::random(n, base.wrapping_add(1));
    let u2 = GroupFunction::random(n, base.wrapping_add(2));
    let v2 = GroupFunction::random(n, base.wrapping_add(3));
    let mut worst = 0.0f64;
    for (_, tau) in &taus {
        let w1 = wigner(group, dual, tau, &u1, &v1)?;
        let w2 = wigner(group, dual, tau, &u2, &v2)?;
        let composed = compose(group, dual, tau, &w1, &w2)?;
        let expected = symbol_scale(&wigner(group, dual, tau, &u2, &v1)?, inner_l2(&v2, &u1));
        worst = worst.max(symbol_sup_diff(&composed, &expected));

        let flipped = involute(group, dual, tau, &w1)?;
        let swapped = wigner(group, dual, tau, &v1, &u1)?;
        worst = worst.max(symbol_sup_diff(&flipped, &swapped));

        let op = op_from_symbol(group, dual, Side::Right, tau, &w1)?;
        worst = worst.max(max_abs_diff(&op.mat, &rank_one(&u1, &v1).mat));

        let a = Symbol::random(group, dual, base.wrapping_add(4));
        let t = op_from_symbol(group, dual, Side::Right, tau, &a)?;
        let lhs = inner_l2(&t.apply(&u1), &v1);
        let rhs = inner_b2_symbol(dual, &a, &w1);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// The adjoint of an operator is the quantization of the involuted
/// symbol under the companion ordering map.
pub fn adjoint_law_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let taus = TauMap::sample_set(group, subseed(seed, "adjoint-tau"));
    let base = subseed(seed, "adjoint");
    let mut worst = 0.0f64;
    for (t, (_, tau)) in taus.iter().enumerate() {
        let a = Symbol::random(group, dual, base.wrapping_add(t as u64));
        let (tilde, star) = adjoint_symbol(group, tau, &a);
        let direct = op_from_symbol(group, dual, Side::Right, tau, &a)?.adjoint();
        let routed = op_from_symbol(group, dual, Side::Right, &tilde, &star)?;
        worst = worst.max(max_abs_diff(&direct.mat, &routed.mat));
    }
    Ok(worst)
}

/// Counts misclassifications of symmetry-function existence on the
/// small catalog groups: exhaustive search up to order 10 must find
/// witnesses exactly on the odd orders, and every witness must verify.
pub fn symmetry_existence_failures() -> Result<f64, CoreError> {
    let mut failures = 0.0f64;
    for spec in CATALOG_SPECS {
        let (group, _) = make_group(spec)?;
        let n = group.order();
        if n > 10 {
            continue;
        }
        let odd = n % 2 == 1;
        for side in [Side::Right, Side::Left] {
            let found = symmetry_search(&group, side, 8)?;
            if found.exists != odd {
                failures += 1.0;
            }
            for w in &found.witnesses {
                if !is_symmetry_function(&group, side, w) {
                    failures += 1.0;
                }
            }
        }
    }
    Ok(failures)
}

/// Counts failures of the explicit constructions: the power map on
/// every odd-order catalog group, the componentwise map on a direct
/// product, and the lifted map on the mod-3 Heisenberg central
/// extension. Even orders must be rejected.
pub fn symmetry_construction_failures() -> Result<f64, CoreError> {
    let mut failures = 0.0f64;
    for spec in CATALOG_SPECS {
        let (group, _) = make_group(spec)?;
        let odd = group.order() % 2 == 1;
        match symmetry_odd_power(&group) {
            Ok(sigma) => {
                if !odd {
                    failures += 1.0;
                }
                for side in [Side::Right, Side::Left] {
                    if !is_symmetry_function(&group, side, &sigma) {
                        failures += 1.0;
                    }
                }
            }
            Err(_) => {
                if odd {
                    failures += 1.0;
                }
            }
        }
    }

    let (p15, _) = make_group("product:cyclic:3,cyclic:5")?;
    let (z3, _) = make_group("cyclic:3")?;
    let (z5, _) = make_group("cyclic:5")?;
    let s3 = symmetry_odd_power(&z3)?;
    let s5 = symmetry_odd_power(&z5)?;
    for side in [Side::Right, Side::Left] {
        let sigma = symmetry_product(&p15, &z3, &s3, &z5, &s5, side)?;
        if !is_symmetry_function(&p15, side, &sigma) {
            failures += 1.0;
        }
    }

    let (ext, _) = make_group("heisenberg:3")?;
    let (base, _) = make_group("product:cyclic:3,cyclic:3")?;
    let (fiber, _) = make_group("cyclic:3")?;
    let pairing = |h1: usize, h2: usize| (h1 / 3) * (h2 % 3) % 3;
    let sigma_base = symmetry_odd_power(&base)?;
    let sigma_fiber = symmetry_odd_power(&fiber)?;
    for side in [Side::Right, Side::Left] {
        let sigma = symmetry_central_extension(
            &ext,
            &base,
            &fiber,
            &pairing,
            &sigma_base,
            &sigma_fiber,
            side,
        )?;
        if !is_symmetry_function(&ext, side, &sigma) {
            failures += 1.0;
        }
    }
    Ok(failures)
}

/// At a symmetry function, pointwise Hermitian symbols quantize to
/// Hermitian operators on both sides.
pub fn hermitian_quantization_residual(seed: u64) -> Result<f64, CoreError> {
    let base = subseed(seed, "hermitian");
    let mut worst = 0.0f64;
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec)?;
        if group.order() % 2 == 0 {
            continue;
        }
        let sigma = symmetry_odd_power(&group)?;
        for k in 0..3u64 {
            let a = Symbol::random_hermitian(&group, &dual, base.wrapping_add(k));
            for side in [Side::Right, Side::Left] {
                let op = op_from_symbol(&group, &dual, side, &sigma, &a)?;
                worst = worst.max(max_abs_diff(&op.mat, &op.adjoint().mat));
            }
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Phase-space layer residuals
// ---------------------------------------------------------------------------

/// Every phase-space unitary times its adjoint is the identity, and
/// the trivial fiber reduces to translation by the inverse point.
pub fn weyl_unitarity_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let taus = TauMap::sample_set(group, subseed(seed, "weyl-tau"));
    let mut worst = 0.0f64;
    for (_, tau) in &taus {
        for side in [Side::Right, Side::Left] {
            for xi in 0..dual.len() {
                for x in group.elements() {
                    let w = weyl(group, dual, side, tau, xi, x)?;
                    let d = w.mat.nrows();
                    let product = &w.mat * ncq_core::la::dagger(&w.mat);
                    worst = worst.max(max_abs_diff(&product, &CMat::identity(d, d)));
                }
            }
        }
    }
    if let Some(trivial) = dual.irreps().iter().position(|r| {
        r.dim == 1 && (0..n).all(|x| (r.mat(x)[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14)
    }) {
        let (_, tau) = &taus[0];
        for x in group.elements() {
            let w = weyl(group, dual, Side::Right, tau, trivial, x)?;
            let r = right_translation(group, group.inv(x));
            worst = worst.max(max_abs_diff(&w.mat, &r.mat));
        }
    }
    Ok(worst)
}

/// Changing the ordering map multiplies the phase-space unitary by a
/// fiber representation factor of the pointwise quotient.
pub fn weyl_tau_change_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let base = subseed(seed, "weyl-shift");
    let tau1 = TauMap::random(group, base);
    let tau2 = TauMap::random(group, base.wrapping_add(1));
    let mut worst = 0.0f64;
    for xi in 0..dual.len() {
        let rep = dual.irrep(xi);
        for x in group.elements() {
            let w1 = weyl(group, dual, Side::Right, &tau1, xi, x)?;
            let w2 = weyl(group, dual, Side::Right, &tau2, xi, x)?;
            let shift = group.mul(tau2.apply(x), group.inv(tau1.apply(x)));
            let factor = kron(&eye(group.order()), rep.mat(shift));
            worst = worst.max(max_abs_diff(&w2.mat, &(&factor * &w1.mat)));
        }
    }
    Ok(worst)
}

/// Matrix elements of the phase-space unitaries against elementary
/// tensors recover the coefficient transform entrywise.
pub fn weyl_matrix_elements_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let base = subseed(seed, "weyl-elements");
    let tau = TauMap::random(group, base);
    let u = GroupFunction::random(n, base.wrapping_add(1));
    let v = GroupFunction::random(n, base.wrapping_add(2));
    let w = fourier_wigner(group, dual, &tau, &u, &v)?;
    let mut worst = 0.0f64;
    for (xi, rep) in dual.irreps().iter().enumerate() {
        let d = rep.dim;
        for x in group.elements() {
            let wop = weyl(group, dual, Side::Right, &tau, xi, x)?;
            for i in 0..d {
                for j in 0..d {
                    let phi = CVec::from_fn(d, |k, _| {
                        if k == j {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    });
                    let psi = CVec::from_fn(d, |k, _| {
                        if k == i {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    });
                    let left = &wop.mat * embed_conj_tensor(&u, &phi);
                    let right = embed_conj_tensor(&v, &psi);
                    let mut pairing = C64::new(0.0, 0.0);
                    for k in 0..left.len() {
                        pairing += left[k] * right[k].conj();
                    }
                    worst = worst.max((w.mats[xi][x][(i, j)] - pairing).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// The coefficient transform is isometric, satisfies the orthogonality
/// relations in both phase-space pictures, and obeys the fiberwise
/// operator norm bound.
pub fn wigner_orthogonality_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let taus = TauMap::sample_set(group, subseed(seed, "orthogonality-tau"));
    let base = subseed(seed, "orthogonality");
    let u = GroupFunction::random(n, base);
    let v = GroupFunction::random(n, base.wrapping_add(1));
    let u2 = GroupFunction::random(n, base.wrapping_add(2));
    let v2 = GroupFunction::random(n, base.wrapping_add(3));
    let mut worst = 0.0f64;
    for (_, tau) in &taus {
        let w = fourier_wigner(group, dual, tau, &u, &v)?;
        let expected = norm_l2(&u) * norm_l2(&v);
        worst = worst.max((norm_b2_dual_symbol(dual, &w) - expected).abs() / expected);

        let w2 = fourier_wigner(group, dual, tau, &u2, &v2)?;
        let rhs = inner_l2(&u2, &u) * inner_l2(&v, &v2);
        worst = worst.max((inner_b2_dual_symbol(dual, &w, &w2) - rhs).norm());

        let vv = wigner(group, dual, tau, &u, &v)?;
        let vv2 = wigner(group, dual, tau, &u2, &v2)?;
        worst = worst.max((inner_b2_symbol(dual, &vv, &vv2) - rhs).norm());

        for row in &w.mats {
            for m in row {
                worst = worst.max((op_norm(m)? - expected).max(0.0));
            }
        }
    }
    Ok(worst)
}

/// Largest violation of the operator and Schatten norm bounds by the
/// flipped-phase-space quantization over seeded fields. The conjugate
/// exponent of 1 is taken as the operator norm.
pub fn schatten_violation(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
    fields: usize,
) -> Result<f64, CoreError> {
    let taus = TauMap::sample_set(group, subseed(seed, "schatten-tau"));
    let base = subseed(seed, "schatten");
    let mut worst = 0.0f64;
    for k in 0..fields {
        let b = DualSymbol::random(group, dual, base.wrapping_add(k as u64));
        let (_, tau) = &taus[k % taus.len()];
        let op = po(group, dual, tau, &b)?;
        for p in [1.0, 4.0 / 3.0, 2.0] {
            let bound = norm_bpp_dual_symbol(dual, &b, p)?;
            let conjugate = if p == 1.0 {
                f64::INFINITY
            } else {
                p / (p - 1.0)
            };
            let value = schatten_norm(&op, conjugate)?;
            worst = worst.max(value - bound);
        }
    }
    Ok(worst.max(0.0))
}

// ---------------------------------------------------------------------------
// Crossed product residuals
// ---------------------------------------------------------------------------

/// Twisted convolution is associative, the involution is involutive
/// and antimultiplicative, the representation is a bijective
/// *-homomorphism matching the left quantization through the partial
/// transform, and the transport maps between ordering parameters
/// compose and invert.
pub fn crossed_product_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let base = subseed(seed, "crossed");
    let tau = TauMap::random(group, base);
    let tau2 = TauMap::random(group, base.wrapping_add(1));
    let tau3 = TauMap::random(group, base.wrapping_add(2));
    let mut worst = 0.0f64;

    for trial in 0..5u64 {
        let a = CrossedElement::random(n, base.wrapping_add(10 + trial));
        let b = CrossedElement::random(n, base.wrapping_add(20 + trial));
        let c = CrossedElement::random(n, base.wrapping_add(30 + trial));
        let left = twisted_convolve(group, &tau, &twisted_convolve(group, &tau, &a, &b)?, &c)?;
        let right = twisted_convolve(group, &tau, &a, &twisted_convolve(group, &tau, &b, &c)?)?;
        worst = worst.max(max_abs_diff(&left.phi.values, &right.phi.values));
    }

    let a = CrossedElement::random(n, base.wrapping_add(40));
    let b = CrossedElement::random(n, base.wrapping_add(41));
    let twice = twisted_involute(group, &tau, &twisted_involute(group, &tau, &a));
    worst = worst.max(max_abs_diff(&twice.phi.values, &a.phi.values));
    let anti_lhs = twisted_involute(group, &tau, &twisted_convolve(group, &tau, &a, &b)?);
    let anti_rhs = twisted_convolve(
        group,
        &tau,
        &twisted_involute(group, &tau, &b),
        &twisted_involute(group, &tau, &a),
    )?;
    worst = worst.max(max_abs_diff(&anti_lhs.phi.values, &anti_rhs.phi.values));

    let hom_lhs = schrodinger(group, &tau, &twisted_convolve(group, &tau, &a, &b)?);
    let hom_rhs = schrodinger(group, &tau, &a).compose(&schrodinger(group, &tau, &b));
    worst = worst.max(max_abs_diff(&hom_lhs.mat, &hom_rhs.mat));
    let star_lhs = schrodinger(group, &tau, &twisted_involute(group, &tau, &a));
    worst = worst.max(max_abs_diff(
        &star_lhs.mat,
        &schrodinger(group, &tau, &a).adjoint().mat,
    ));

    let back = schrodinger_inverse(group, &tau, &schrodinger(group, &tau, &a))?;
    worst = worst.max(max_abs_diff(&back.phi.values, &a.phi.values));
    let target = HSOperator {
        mat: ncq_core::harmonic::TwoVarFunction::random(n, base.wrapping_add(42)).values,
    };
    let pulled = schrodinger_inverse(group, &tau, &target)?;
    worst = worst.max(max_abs_diff(
        &schrodinger(group, &tau, &pulled).mat,
        &target.mat,
    ));

    let sym = Symbol::random(group, dual, base.wrapping_add(43));
    let phi = CrossedElement::new(ift_second(group, dual, &sym)?);
    let through = schrodinger(group, &tau, &phi);
    let direct = op_from_symbol(group, dual, Side::Left, &tau, &sym)?;
    worst = worst.max(max_abs_diff(&through.mat, &direct.mat));

    let same = nu_transport(group, &tau, &tau, &a);
    worst = worst.max(max_abs_diff(&same.phi.values, &a.phi.values));
    let moved = nu_transport(group, &tau, &tau2, &a);
    worst = worst.max(max_abs_diff(
        &schrodinger(group, &tau, &moved).mat,
        &schrodinger(group, &tau2, &a).mat,
    ));
    let back2 = nu_transport(group, &tau2, &tau, &moved);
    worst = worst.max(max_abs_diff(&back2.phi.values, &a.phi.values));
    let chained = nu_transport(group, &tau3, &tau, &moved);
    let direct3 = nu_transport(group, &tau3, &tau2, &a);
    worst = worst.max(max_abs_diff(&chained.phi.values, &direct3.phi.values));

    Ok(worst)
}

/// Convolution and multiplication operators satisfy their identity,
/// translation, homomorphism, and covariance relations, and the four
/// factored quantizations of separable symbols match the direct ones.
pub fn factorization_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
) -> Result<f64, CoreError> {
    let n = group.order();
    let e = group.identity();
    let base = subseed(seed, "factorization");
    let mut worst = 0.0f64;

    let delta_e = GroupFunction::delta(n, e);
    for side in [Side::Left, Side::Right] {
        worst = worst.max(max_abs_diff(
            &conv_op(group, side, &delta_e).mat,
            &HSOperator::identity(n).mat,
        ));
    }
    for z in group.elements() {
        worst = worst.max(max_abs_diff(
            &conv_op(group, Side::Left, &GroupFunction::delta(n, z)).mat,
            &left_translation(group, z).mat,
        ));
    }

    let f = GroupFunction::random(n, base);
    let g = GroupFunction::random(n, base.wrapping_add(1));
    let cl = conv_op(group, Side::Left, &f);
    let cr = conv_op(group, Side::Right, &g);
    for x in group.elements() {
        let r = right_translation(group, x);
        worst = worst.max(max_abs_diff(&cl.compose(&r).mat, &r.compose(&cl).mat));
    }
    worst = worst.max(max_abs_diff(&cl.compose(&cr).mat, &cr.compose(&cl).mat));
    worst = worst.max(max_abs_diff(
        &conv_op(group, Side::Left, &f)
            .compose(&conv_op(group, Side::Left, &g))
            .mat,
        &conv_op(group, Side::Left, &convolve(group, &f, &g)).mat,
    ));
    worst = worst.max(max_abs_diff(
        &conv_op(group, Side::Right, &f)
            .compose(&conv_op(group, Side::Right, &g))
            .mat,
        &conv_op(group, Side::Right, &convolve(group, &g, &f)).mat,
    ));
    for x in group.elements() {
        let l = left_translation(group, x);
        let conjugated = l.compose(&mult_op(&f)).compose(&l.adjoint());
        worst = worst.max(max_abs_diff(
            &conjugated.mat,
            &mult_op(&theta_action(group, x, &f)).mat,
        ));
    }

    let all = [
        FactoredQuantization::LeftConstE,
        FactoredQuantization::LeftIdentity,
        FactoredQuantization::RightConstE,
        FactoredQuantization::RightIdentity,
    ];
    let beta = FourierField::random(dual, base.wrapping_add(2));
    let id_field = FourierField::identity(dual);
    for which in all {
        let op = product_symbol_op(group, dual, which, &g, &id_field)?;
        worst = worst.max(max_abs_diff(&op.mat, &mult_op(&g).mat));

        let a = product_symbol(group, &g, &beta);
        let factored = product_symbol_op(group, dual, which, &g, &beta)?;
        let direct = op_from_symbol(group, dual, which.side(), &which.tau(group), &a)?;
        worst = worst.max(max_abs_diff(&factored.mat, &direct.mat));
    }
    if group.is_abelian() {
        let ones = GroupFunction::constant(n, C64::new(1.0, 0.0));
        let built: Vec<HSOperator> = all
            .iter()
            .map(|&which| product_symbol_op(group, dual, which, &ones, &beta))
            .collect::<Result<_, _>>()?;
        for op in &built[1..] {
            worst = worst.max(max_abs_diff(&op.mat, &built[0].mat));
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Covariant family residuals
// ---------------------------------------------------------------------------

/// The three standard dynamical systems on the order-six symmetric
/// group: plain translation, the two-point quotient by the even
/// permutations, and a seeded conjugation action.
pub fn standard_systems(group: &FiniteGroup) -> Result<Vec<DynamicalSystem>, CoreError> {
    let even = [0usize, 3, 4];
    Ok(vec![
        DynamicalSystem::translation(group),
        DynamicalSystem::quotient(group, &even)?,
        DynamicalSystem::seeded_conjugation(group, 7),
    ])
}

/// Conjugating a family member by a point translation lands on the
/// member at the transported point, for every point and group element.
pub fn covariance_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    systems: &[DynamicalSystem],
    seed: u64,
) -> Result<f64, CoreError> {
    let base = subseed(seed, "covariance");
    let tau = TauMap::random(group, base);
    let mut worst = 0.0f64;
    for (k, system) in systems.iter().enumerate() {
        let h = OmegaSymbol::random(system.omega_size(), dual, base.wrapping_add(1 + k as u64));
        for w in 0..system.omega_size() {
            let at_w = op_omega(group, dual, &tau, system, w, &h)?;
            for z in group.elements() {
                let r = right_translation(group, z);
                let conjugated = r.compose(&at_w).compose(&r.adjoint());
                let moved = op_omega(group, dual, &tau, system, system.apply(z, w), &h)?;
                worst = worst.max(max_abs_diff(&conjugated.mat, &moved.mat));
            }
        }
    }
    Ok(worst)
}

/// Spectra are constant along each orbit of the point action, measured
/// in Hausdorff distance against the orbit's first point.
pub fn orbit_spectra_residual(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    systems: &[DynamicalSystem],
    seed: u64,
) -> Result<f64, CoreError> {
    let base = subseed(seed, "spectra");
    let tau = TauMap::random(group, base);
    let mut worst = 0.0f64;
    for (k, system) in systems.iter().enumerate() {
        let h = OmegaSymbol::random(system.omega_size(), dual, base.wrapping_add(1 + k as u64));
        for orbit in system.orbits() {
            let reference = spectrum(&op_omega(group, dual, &tau, system, orbit[0], &h)?)?;
            for &w in &orbit[1..] {
                let other = spectrum(&op_omega(group, dual, &tau, system, w, &h)?)?;
                worst = worst.max(hausdorff(&reference, &other));
            }
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Nilpotent residuals
// ---------------------------------------------------------------------------

/// The catalog of nilpotent tables exercised by the battery.
pub fn nilpotent_catalog() -> Vec<(&'static str, NilpotentAlgebra)> {
    vec![
        ("heisenberg-3", NilpotentAlgebra::heisenberg(1)),
        ("heisenberg-5", NilpotentAlgebra::heisenberg(2)),
        ("engel", NilpotentAlgebra::engel()),
        ("filiform-5", NilpotentAlgebra::filiform(4).expect("step four table")),
    ]
}

/// Worst group-axiom residual of the truncated product over seeded
/// triples on every catalog table.
pub fn nilpotent_bch_residual(seed: u64, triples: usize) -> f64 {
    let base = subseed(seed, "bch");
    let mut worst = 0.0f64;
    for (k, (_, algebra)) in nilpotent_catalog().into_iter().enumerate() {
        let axioms = bch_axiom_residuals(&algebra, triples, base.wrapping_add(k as u64));
        worst = worst
            .max(axioms.max_associativity_residual)
            .max(axioms.max_inverse_residual)
            .max(axioms.max_identity_residual);
    }
    worst
}

/// The halving map satisfies its two-sided defining law with residual
/// exactly zero: halving, negation, and the vanishing bracket terms
/// are all exact in floating point.
pub fn nilpotent_symmetry_residual(seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, "halving"));
    let mut worst = 0.0f64;
    for (_, algebra) in nilpotent_catalog() {
        let n = algebra.dim();
        for _ in 0..samples {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sigma = sigma_half(&GroupPoint::new(x.clone()));
            let minus: Vec<f64> = x.iter().map(|c| -c).collect();
            let sigma_inv = sigma_half(&GroupPoint::new(minus));
            let left = algebra.bch(&sigma_inv.coords, &x);
            let right = algebra.bch(&x, &sigma_inv.coords);
            for k in 0..n {
                worst = worst.max((left[k] - sigma.coords[k]).abs());
                worst = worst.max((right[k] - sigma.coords[k]).abs());
            }
        }
    }
    worst
}

/// The matrix-integral midpoint satisfies the same two-sided law up to
/// roundoff on the three-dimensional Heisenberg realization.
pub fn nilpotent_midpoint_residual(seed: u64, samples: usize) -> Result<f64, CoreError> {
    let algebra = NilpotentAlgebra::heisenberg(1);
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, "midpoint"));
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let point = GroupPoint::new(x.clone());
        let sigma = sigma_midpoint_matrix(&algebra, &point)?;
        let sigma_inv = sigma_midpoint_matrix(&algebra, &point.inverse())?;
        let left = algebra.bch(&sigma_inv.coords, &x);
        let right = algebra.bch(&x, &sigma_inv.coords);
        for k in 0..3 {
            worst = worst.max((left[k] - sigma.coords[k]).abs());
            worst = worst.max((right[k] - sigma.coords[k]).abs());
        }
    }
    Ok(worst)
}

/// Worst residual of the phase cocycle reports over the step-two and
/// step-three tables and all three coordinate ordering maps. Each
/// report samples `pairs` times `z_samples` composition points.
pub fn nilpotent_cocycle_residual(seed: u64, pairs: usize, z_samples: usize) -> f64 {
    let base = subseed(seed, "cocycle");
    let algebras = [NilpotentAlgebra::heisenberg(1), NilpotentAlgebra::engel()];
    let mut worst = 0.0f64;
    for (i, algebra) in algebras.iter().enumerate() {
        for (j, tau) in CoordinateTau::all().into_iter().enumerate() {
            let report = cocycle_report(
                algebra,
                tau,
                pairs,
                z_samples,
                base.wrapping_add((3 * i + j) as u64),
                1e-12,
            );
            worst = worst
                .max(report.max_modulus_residual)
                .max(report.max_composition_residual)
                .max(report.max_normalization_residual);
        }
    }
    worst
}

/// Worst residual over every item of the flat-space consistency report
/// at the given ordering map and grid.
pub fn rn_report_residual(
    tau: CoordinateTau,
    points: usize,
    half_width: f64,
) -> Result<f64, CoreError> {
    let report = rn_consistency(1, tau, points, half_width, 1e-8)?;
    Ok(report
        .checks
        .iter()
        .map(|c| c.residual)
        .fold(0.0, f64::max))
}

/// Quadrature errors of the kernel against the closed-form reference
/// on three grids that share the spatial step while the dual step
/// halves. Returns the coarsest error and the two successive ratios.
pub fn quadrature_halving() -> Result<(f64, Vec<f64>), CoreError> {
    let algebra = NilpotentAlgebra::abelian(1);
    let x0 = -0.5625;
    let y0 = -0.1875;
    let mut errors = Vec::new();
    for (points, half_width) in [(16usize, 1.5), (32, 3.0), (64, 6.0)] {
        let grid = Grid::new(1, points, half_width)?;
        let h = grid.step();
        let kx = ((x0 + half_width) / h).round() as usize;
        let ky = ((y0 + half_width) / h).round() as usize;
        let mult: Vec<C64> = (0..points).map(|j| C64::new(grid.xi_point(j)[0], 0.0)).collect();
        let symbol = ScalarSymbol::multiplier(&grid, &mult)?;
        let kernel = scalar_kernel(&algebra, CoordinateTau::Zero, Side::Left, &symbol)?;
        let w = x0 - y0;
        let lam = grid.dual_half_width();
        let reference = C64::new(
            0.0,
            ((w * lam).sin() / (w * w) - lam * (w * lam).cos() / w) / std::f64::consts::PI,
        );
        errors.push((kernel[(kx, ky)] - reference).norm());
    }
    let ratios = vec![errors[1] / errors[0], errors[2] / errors[1]];
    Ok((errors[0], ratios))
}

// ---------------------------------------------------------------------------
// Batteries
// ---------------------------------------------------------------------------

/// The per-group battery: validation, transform identities,
/// quantization isometry, the multiplier reduction, and on commutative
/// groups the coincidence of the two sides.
pub fn group_battery(
    label: &str,
    group: &FiniteGroup,
    dual: &UnitaryDual,
    seed: u64,
    tol_override: Option<f64>,
) -> Vec<SuiteCheck> {
    let mut battery = Battery::new(&format!("group:{label}"), tol_override);
    battery.at_most("dual-validation", 1e-10, || {
        Ok(dual_validation_residual(group, dual))
    });
    battery.at_most("plancherel-inversion", 1e-12, || {
        plancherel_inversion_residual(group, dual, seed, 100)
    });
    battery.at_most("quantization-isometry", 1e-11, || {
        isometry_residual(group, dual, seed, 20)
    });
    battery.at_most("fourier-multiplier", 1e-12, || {
        multiplier_residual(group, dual, seed)
    });
    if group.is_abelian() {
        battery.at_most("left-right-coincidence", 1e-13, || {
            left_right_coincidence_residual(group, dual, seed)
        });
    }
    battery.checks
}

/// The cross-cutting battery on fixed small groups: symbol algebra
/// laws, phase-space identities, norm bounds, crossed products,
/// covariant families, and the side-separation witness.
pub fn global_battery(seed: u64, tol_override: Option<f64>) -> Vec<SuiteCheck> {
    let mut battery = Battery::new("global", tol_override);

    for spec in ["dihedral:4", "symmetric:3"] {
        battery.at_most(&format!("algebra-laws:{spec}"), 1e-10, || {
            let (group, dual) = make_group(spec)?;
            algebra_laws_residual(&group, &dual, seed)
        });
    }
    for spec in ["symmetric:3", "dihedral:4"] {
        battery.at_most(&format!("wigner-calculus:{spec}"), 1e-10, || {
            let (group, dual) = make_group(spec)?;
            wigner_calculus_residual(&group, &dual, seed)
        });
        battery.at_most(&format!("adjoint-law:{spec}"), 1e-12, || {
            let (group, dual) = make_group(spec)?;
            adjoint_law_residual(&group, &dual, seed)
        });
    }
    battery.at_most("symmetry-existence", 0.0, symmetry_existence_failures);
    battery.at_most("symmetry-construction", 0.0, symmetry_construction_failures);
    battery.at_most("hermitian-quantization", 1e-12, || {
        hermitian_quantization_residual(seed)
    });
    for spec in ["symmetric:3", "dihedral:4", "quaternion8", "cyclic:4"] {
        battery.at_most(&format!("weyl-unitarity:{spec}"), 1e-11, || {
            let (group, dual) = make_group(spec)?;
            weyl_unitarity_residual(&group, &dual, seed)
        });
    }
    for spec in ["dihedral:4", "symmetric:3"] {
        battery.at_most(&format!("weyl-tau-change:{spec}"), 1e-11, || {
            let (group, dual) = make_group(spec)?;
            weyl_tau_change_residual(&group, &dual, seed)
        });
    }
    battery.at_most("weyl-matrix-elements:symmetric:3", 1e-11, || {
        let (group, dual) = make_group("symmetric:3")?;
        weyl_matrix_elements_residual(&group, &dual, seed)
    });
    for spec in ["symmetric:3", "quaternion8"] {
        battery.at_most(&format!("wigner-orthogonality:{spec}"), 1e-11, || {
            let (group, dual) = make_group(spec)?;
            wigner_orthogonality_residual(&group, &dual, seed)
        });
    }
    for spec in ["symmetric:3", "dihedral:4"] {
        battery.at_most(&format!("schatten-bounds:{spec}"), 1e-10, || {
            let (group, dual) = make_group(spec)?;
            schatten_violation(&group, &dual, seed, 50)
        });
    }
    battery.at_most("crossed-product:symmetric:3", 1e-10, || {
        let (group, dual) = make_group("symmetric:3")?;
        crossed_product_residual(&group, &dual, seed)
    });
    for spec in ["symmetric:3", "cyclic:8"] {
        battery.at_most(&format!("product-factorization:{spec}"), 1e-10, || {
            let (group, dual) = make_group(spec)?;
            factorization_residual(&group, &dual, seed)
        });
    }
    battery.at_most("covariance:symmetric:3", 1e-12, || {
        let (group, dual) = make_group("symmetric:3")?;
        let systems = standard_systems(&group)?;
        covariance_residual(&group, &dual, &systems, seed)
    });
    battery.at_most("orbit-spectra:symmetric:3", 1e-8, || {
        let (group, dual) = make_group("symmetric:3")?;
        let systems = standard_systems(&group)?;
        orbit_spectra_residual(&group, &dual, &systems, seed)
    });
    battery.at_least("left-right-witness:symmetric:3", 0.1, || {
        let (group, dual) = make_group("symmetric:3")?;
        left_right_separation(&group, &dual)
    });
    battery.checks
}

/// The scalar-calculus battery on the nilpotent tables.
pub fn nilpotent_battery(seed: u64, tol_override: Option<f64>) -> Vec<SuiteCheck> {
    let mut battery = Battery::new("nilpotent", tol_override);
    battery.at_most("bch-axioms", 1e-12, || {
        Ok(nilpotent_bch_residual(seed, 1000))
    });
    battery.at_most("symmetry-law", 0.0, || {
        Ok(nilpotent_symmetry_residual(seed, 200))
    });
    battery.at_most("midpoint-law", 1e-14, || {
        nilpotent_midpoint_residual(seed, 100)
    });
    battery.at_most("cocycle-identity", 1e-12, || {
        Ok(nilpotent_cocycle_residual(seed, 10, 10))
    });
    battery.at_most("rn-consistency", 1e-8, || {
        rn_report_residual(CoordinateTau::Zero, 64, 8.0)
    });
    battery.at_most("weyl-hermitian", 1e-8, || {
        rn_report_residual(CoordinateTau::Half, 32, 6.0)
    });
    battery.at_most("quadrature-halving", 0.06, || {
        let (first, ratios) = quadrature_halving()?;
        if first <= 1.0 {
            return Err(CoreError::Validation(format!(
                "coarse quadrature error {first} is too small to resolve the halving"
            )));
        }
        Ok(ratios.iter().map(|r| (r - 0.5).abs()).fold(0.0, f64::max))
    });
    battery.checks
}

/// The full battery: every catalog group, the cross-cutting checks,
/// and the nilpotent layer.
pub fn run_all(seed: u64, tol_override: Option<f64>) -> Result<SuiteReport, CoreError> {
    let mut checks = Vec::new();
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec)?;
        checks.extend(group_battery(spec, &group, &dual, seed, tol_override));
    }
    checks.extend(global_battery(seed, tol_override));
    checks.extend(nilpotent_battery(seed, tol_override));
    Ok(SuiteReport {
        scope: "all".into(),
        seed,
        tolerance_override: tol_override,
        checks,
    })
}

/// The per-group battery for one resolved group argument.
pub fn run_group(spec: &str, seed: u64, tol_override: Option<f64>) -> Result<SuiteReport, CoreError> {
    let (group, dual) = resolve_group(spec)?;
    Ok(SuiteReport {
        scope: format!("group:{spec}"),
        seed,
        tolerance_override: tol_override,
        checks: group_battery(spec, &group, &dual, seed, tol_override),
    })
}
