//! The *-algebra of symbols and its symmetry functions.
//!
//! Composition and involution are kernel operations: the kernel of a
//! product symbol is the matrix product of the kernels, the kernel of
//! the involute is the conjugate transpose. Everything in the algebra
//! half of this module is stated for the right calculus; the left
//! calculus enters only through symmetry functions, whose defining
//! relation depends on the side.
//!
//! A symmetry function is a map sigma : G -> G with
//! sigma(x) = sigma(x^-1) x (right side) or sigma(x) = x sigma(x^-1)
//! (left side) for every x. Quantizing at such a parameter sends
//! symbols with Hermitian fibers to self-adjoint operators. On a
//! finite group one exists if and only if the order is odd: any
//! element of order two makes the relation unsolvable, and for odd
//! order sigma(x) = x^{(|G|+1)/2} works on both sides.

use crate::error::CoreError;
use crate::groups::{tau_tilde, FiniteGroup, TauMap, UnitaryDual};
use crate::harmonic::{ft_second, ift_second, Symbol, TwoVarFunction};
use crate::la::{dagger, CMat};
use crate::quantize::{op_from_symbol, symbol_from_op, Side};

/// The product symbol: `compose(tau, a, b)` is the symbol of
/// Op(a) Op(b) in the right calculus at the same parameter.
pub fn compose(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    a: &Symbol,
    b: &Symbol,
) -> Result<Symbol, CoreError> {
    let ka = op_from_symbol(group, dual, Side::Right, tau, a)?;
    let kb = op_from_symbol(group, dual, Side::Right, tau, b)?;
    symbol_from_op(group, dual, Side::Right, tau, &ka.compose(&kb))
}

/// The involute: the symbol of Op(a)* in the same calculus at the same
/// parameter. An involutive anti-automorphism of the product above.
pub fn involute(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    a: &Symbol,
) -> Result<Symbol, CoreError> {
    let op = op_from_symbol(group, dual, Side::Right, tau, a)?;
    symbol_from_op(group, dual, Side::Right, tau, &op.adjoint())
}

/// Re-expresses a symbol in a different operator ordering: the result
/// `b` satisfies Op^{tau'}(a) = Op^{tau}(b) on the right side.
///
/// The symbol is pulled back to the kernel-side coordinates, shifted
/// along (x, y) -> (x tau(y) tau'(y)^-1, y), and pushed forward again.
pub fn convert_tau(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    tau: &TauMap,
    tau_prime: &TauMap,
    a: &Symbol,
) -> Result<Symbol, CoreError> {
    let f = ift_second(group, dual, a)?;
    let n = group.order();
    let mut values = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let shifted = group.mul(
                group.mul(x, tau.apply(y)),
                group.inv(tau_prime.apply(y)),
            );
            values[(x, y)] = f.values[(shifted, y)];
        }
    }
    ft_second(group, dual, &TwoVarFunction { values })
}

/// The adjoint law at the symbol level: returns the companion
/// parameter tau~ and the fiberwise adjoint symbol, which satisfy
/// Op^{tau}(a)* = Op^{tau~}(a*) on the right side.
pub fn adjoint_symbol(group: &FiniteGroup, tau: &TauMap, a: &Symbol) -> (TauMap, Symbol) {
    let star = Symbol {
        mats: a
            .mats
            .iter()
            .map(|row| row.iter().map(dagger).collect())
            .collect(),
    };
    (tau_tilde(group, tau), star)
}

/// Tests the defining relation of a symmetry function at every element.
pub fn is_symmetry_function(group: &FiniteGroup, side: Side, sigma: &TauMap) -> bool {
    group.elements().all(|x| {
        let partner = sigma.apply(group.inv(x));
        let expected = match side {
            Side::Right => group.mul(partner, x),
            Side::Left => group.mul(x, partner),
        };
        sigma.apply(x) == expected
    })
}

/// Outcome of an exhaustive symmetry-function search.
#[derive(Debug, Clone)]
pub struct SymmetrySearchResult {
    /// Whether any symmetry function exists on this group.
    pub exists: bool,
    /// Witnesses in ascending value-table order, at most `limit` many.
    pub witnesses: Vec<TauMap>,
    /// Exact number of symmetry functions on the group.
    pub count: u128,
    /// True when `witnesses` holds fewer than `count` maps.
    pub truncated: bool,
}

/// Enumerates every symmetry function on the group for the chosen
/// side, listing at most `limit` witnesses.
///
/// The relation pairs x with x^-1: the value at one representative of
/// each pair is free, the value at the partner is forced, and a free
/// slot also sits at the identity. Any element of order two makes the
/// search infeasible, which settles all groups of even order at once;
/// otherwise the total count is |G|^(number of free slots). The
/// enumeration itself is only attempted for |G| <= 12.
pub fn symmetry_search(
    group: &FiniteGroup,
    side: Side,
    limit: usize,
) -> Result<SymmetrySearchResult, CoreError> {
    let n = group.order();
    for x in 1..n {
        if group.inv(x) == x {
            return Ok(SymmetrySearchResult {
                exists: false,
                witnesses: Vec::new(),
                count: 0,
                truncated: false,
            });
        }
    }
    if n > 12 {
        return Err(CoreError::BadInput(format!(
            "exhaustive symmetry search is capped at order 12, got {n}"
        )));
    }
    let mut free = vec![0usize];
    for x in 1..n {
        if x < group.inv(x) {
            free.push(x);
        }
    }
    let count = (n as u128).pow(free.len() as u32);
    let take = count.min(limit as u128) as usize;
    let mut witnesses = Vec::with_capacity(take);
    for index in 0..take as u128 {
        // digits of the index in base n, most significant digit on the
        // first free slot, so witnesses come out in ascending order
        let mut values = vec![0usize; n];
        let mut rem = index;
        for &x in free.iter().rev() {
            let digit = (rem % n as u128) as usize;
            rem /= n as u128;
            values[x] = digit;
            if x != 0 {
                let xi = group.inv(x);
                values[xi] = match side {
                    Side::Right => group.mul(digit, xi),
                    Side::Left => group.mul(xi, digit),
                };
            }
        }
        let map = TauMap::from_values(group, values)?;
        debug_assert!(is_symmetry_function(group, side, &map));
        witnesses.push(map);
    }
    Ok(SymmetrySearchResult {
        exists: true,
        truncated: (take as u128) < count,
        witnesses,
        count,
    })
}

fn verified(group: &FiniteGroup, side: Side, sigma: TauMap, what: &str) -> Result<TauMap, CoreError> {
    if is_symmetry_function(group, side, &sigma) {
        Ok(sigma)
    } else {
        Err(CoreError::Validation(format!(
            "{what} construction produced a map that fails the symmetry relation"
        )))
    }
}

/// sigma(x) = x^{(|G|+1)/2} on a group of odd order: a symmetry
/// function for both sides at once, since powers of x commute.
pub fn symmetry_odd_power(group: &FiniteGroup) -> Result<TauMap, CoreError> {
    if group.order() % 2 == 0 {
        return Err(CoreError::BadInput(format!(
            "odd-power construction needs odd order, got {}",
            group.order()
        )));
    }
    let k = (group.order() + 1) / 2;
    let values = group.elements().map(|x| group.pow(x, k)).collect();
    let sigma = TauMap::from_values(group, values)?;
    let sigma = verified(group, Side::Right, sigma, "odd-power")?;
    verified(group, Side::Left, sigma, "odd-power")
}

/// Componentwise symmetry function on a direct product whose element
/// index is the usual mixed radix i1 * |G2| + i2.
pub fn symmetry_product(
    product: &FiniteGroup,
    g1: &FiniteGroup,
    sigma1: &TauMap,
    g2: &FiniteGroup,
    sigma2: &TauMap,
    side: Side,
) -> Result<TauMap, CoreError> {
    if product.order() != g1.order() * g2.order() {
        return Err(CoreError::Shape(format!(
            "product group has order {}, factors give {} * {}",
            product.order(),
            g1.order(),
            g2.order()
        )));
    }
    if !is_symmetry_function(g1, side, sigma1) || !is_symmetry_function(g2, side, sigma2) {
        return Err(CoreError::BadInput(
            "factor map fails the symmetry relation on its factor".into(),
        ));
    }
    let n2 = g2.order();
    let values = (0..product.order())
        .map(|x| sigma1.apply(x / n2) * n2 + sigma2.apply(x % n2))
        .collect();
    let sigma = TauMap::from_values(product, values)?;
    verified(product, side, sigma, "product")
}

/// Symmetry function on a central extension of `base` by the Abelian
/// group `fiber` along the normalized 2-cocycle `cocycle`, with element
/// index h * |fiber| + n and composition law
/// (h1, n1)(h2, n2) = (h1 h2, n1 n2 cocycle(h1, h2)).
///
/// The right-side map is
/// sigma(h, n) = (sigma_B(h), sigma_F[cocycle(sigma_B(h^-1), h) n]);
/// the left-side map replaces the cocycle factor by
/// cocycle(h, sigma_B(h^-1)). Both are verified exhaustively on the
/// extension before being returned.
pub fn symmetry_central_extension(
    ext: &FiniteGroup,
    base: &FiniteGroup,
    fiber: &FiniteGroup,
    cocycle: &dyn Fn(usize, usize) -> usize,
    sigma_base: &TauMap,
    sigma_fiber: &TauMap,
    side: Side,
) -> Result<TauMap, CoreError> {
    let nh = base.order();
    let nn = fiber.order();
    if ext.order() != nh * nn {
        return Err(CoreError::Shape(format!(
            "extension has order {}, base and fiber give {nh} * {nn}",
            ext.order()
        )));
    }
    if !fiber.is_abelian() {
        return Err(CoreError::BadInput("fiber group is not Abelian".into()));
    }
    for h in 0..nh {
        if cocycle(h, base.identity()) != fiber.identity()
            || cocycle(base.identity(), h) != fiber.identity()
        {
            return Err(CoreError::BadInput("cocycle is not normalized".into()));
        }
    }
    for h1 in 0..nh {
        for n1 in 0..nn {
            for h2 in 0..nh {
                for n2 in 0..nn {
                    let w = cocycle(h1, h2);
                    if w >= nn {
                        return Err(CoreError::BadInput(format!(
                            "cocycle value {w} outside the fiber"
                        )));
                    }
                    let expect = base.mul(h1, h2) * nn + fiber.mul(fiber.mul(n1, n2), w);
                    if ext.mul(h1 * nn + n1, h2 * nn + n2) != expect {
                        return Err(CoreError::Validation(
                            "extension law does not match the cocycle and index convention"
                                .into(),
                        ));
                    }
                }
            }
        }
    }
    if !is_symmetry_function(base, side, sigma_base) {
        return Err(CoreError::BadInput(
            "base map fails the symmetry relation".into(),
        ));
    }
    if !is_symmetry_function(fiber, side, sigma_fiber) {
        return Err(CoreError::BadInput(
            "fiber map fails the symmetry relation".into(),
        ));
    }
    let values = (0..ext.order())
        .map(|x| {
            let (h, n) = (x / nn, x % nn);
            let sh = sigma_base.apply(h);
            let partner = sigma_base.apply(base.inv(h));
            let twist = match side {
                Side::Right => cocycle(partner, h),
                Side::Left => cocycle(h, partner),
            };
            sh * nn + sigma_fiber.apply(fiber.mul(twist, n))
        })
        .collect();
    let sigma = TauMap::from_values(ext, values)?;
    verified(ext, side, sigma, "central-extension")
}
