//! Catalog constructors: each family builds its multiplication table
//! from the actual group operation and supplies its complete dual by
//! an explicit, per-family construction (no general character-table
//! algorithm). Element order within a family is fixed once and for
//! all, so every matrix produced here is bit-reproducible.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{FiniteGroup, UnitaryDual, UnitaryIrrep};
use crate::error::CoreError;
use crate::la::{kron, CMat, C64};

/// The groups exercised by the invariant suite: all orders <= 27,
/// mixing abelian/nonabelian, even/odd order, and product forms.
pub const CATALOG_SPECS: &[&str] = &[
    "cyclic:1",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:5",
    "cyclic:8",
    "cyclic:9",
    "product:cyclic:2,cyclic:2",
    "product:cyclic:3,cyclic:5",
    "symmetric:3",
    "dihedral:4",
    "dihedral:5",
    "dihedral:6",
    "quaternion8",
    "product:cyclic:2,symmetric:3",
    "symmetric:4",
    "heisenberg:3",
];

fn phase(theta: f64) -> C64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Parses a family spec like `cyclic:4`, `dihedral:5`, `quaternion8`,
/// `symmetric:3`, `heisenberg:3`, or `product:cyclic:2,symmetric:3`.
pub fn make_group(spec: &str) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    let spec = spec.trim();
    if spec == "quaternion8" || spec == "quaternion:8" {
        return quaternion8();
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let (a, b) = rest.split_once(',').ok_or_else(|| {
            CoreError::BadFamily(format!("product needs two comma-separated factors: {spec}"))
        })?;
        if b.contains("product:") || a.contains("product:") {
            return Err(CoreError::BadFamily(
                "nested products are not supported; build them pairwise".into(),
            ));
        }
        let (g1, d1) = make_group(a)?;
        let (g2, d2) = make_group(b)?;
        return direct_product(&g1, &d1, &g2, &d2);
    }
    let (family, param) = spec
        .split_once(':')
        .ok_or_else(|| CoreError::BadFamily(format!("unknown group spec: {spec}")))?;
    let n: usize = param
        .parse()
        .map_err(|_| CoreError::BadFamily(format!("bad parameter in: {spec}")))?;
    match family {
        "cyclic" => cyclic(n),
        "dihedral" => dihedral(n),
        "symmetric" => symmetric(n),
        "heisenberg" => heisenberg_mod_p(n),
        _ => Err(CoreError::BadFamily(format!("unknown family: {family}"))),
    }
}

/// Z_n with characters chi_k(g^j) = exp(2 pi i jk / n).
pub fn cyclic(n: usize) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    if n == 0 {
        return Err(CoreError::BadFamily("cyclic order must be positive".into()));
    }
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let labels: Vec<String> = (0..n).map(|j| format!("g{j}")).collect();
    let group = FiniteGroup::from_mul_table(table, labels)?;
    let irreps = (0..n)
        .map(|k| UnitaryIrrep {
            label: format!("chi{k:02}"),
            dim: 1,
            matrices: (0..n)
                .map(|j| {
                    CMat::from_element(1, 1, phase(2.0 * PI * (j * k % n) as f64 / n as f64))
                })
                .collect(),
        })
        .collect();
    Ok((group, UnitaryDual::new(n, irreps)))
}

/// Dihedral group of order 2n, n >= 3. Elements 0..n are the rotations
/// r^j, elements n..2n are the reflections s r^j, with s r s = r^{-1}.
pub fn dihedral(n: usize) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    if n < 3 {
        return Err(CoreError::BadFamily(
            "dihedral parameter must be >= 3 (smaller cases are cyclic or Klein)".into(),
        ));
    }
    let order = 2 * n;
    let idx = |refl: bool, j: usize| if refl { n + j % n } else { j % n };
    let mut table = vec![vec![0usize; order]; order];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = idx(false, i + j);
            // r^i (s r^j) = s r^{j-i}
            table[i][n + j] = idx(true, n + j - i);
            table[n + i][j] = idx(true, i + j);
            // (s r^i)(s r^j) = r^{j-i}
            table[n + i][n + j] = idx(false, n + j - i);
        }
    }
    let mut labels: Vec<String> = (0..n).map(|j| format!("r{j}")).collect();
    labels.extend((0..n).map(|j| format!("sr{j}")));
    let group = FiniteGroup::from_mul_table(table, labels)?;

    let mut irreps = Vec::new();
    let one = |v: f64| CMat::from_element(1, 1, Complex64::new(v, 0.0));
    irreps.push(UnitaryIrrep {
        label: "triv".into(),
        dim: 1,
        matrices: (0..order).map(|_| one(1.0)).collect(),
    });
    irreps.push(UnitaryIrrep {
        label: "sgn".into(),
        dim: 1,
        matrices: (0..order).map(|x| one(if x < n { 1.0 } else { -1.0 })).collect(),
    });
    if n % 2 == 0 {
        let alt = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
        irreps.push(UnitaryIrrep {
            label: "alt+".into(),
            dim: 1,
            matrices: (0..order).map(|x| one(alt(x % n))).collect(),
        });
        irreps.push(UnitaryIrrep {
            label: "alt-".into(),
            dim: 1,
            matrices: (0..order)
                .map(|x| one(if x < n { alt(x) } else { -alt(x % n) }))
                .collect(),
        });
    }
    let top = if n % 2 == 0 { n / 2 } else { (n + 1) / 2 };
    for h in 1..top {
        let w = |j: usize, sign: f64| phase(sign * 2.0 * PI * (h * j % n) as f64 / n as f64);
        let matrices = (0..order)
            .map(|x| {
                let j = x % n;
                if x < n {
                    CMat::from_fn(2, 2, |r, c| match (r, c) {
                        (0, 0) => w(j, 1.0),
                        (1, 1) => w(j, -1.0),
                        _ => C64::new(0.0, 0.0),
                    })
                } else {
                    CMat::from_fn(2, 2, |r, c| match (r, c) {
                        (0, 1) => w(j, -1.0),
                        (1, 0) => w(j, 1.0),
                        _ => C64::new(0.0, 0.0),
                    })
                }
            })
            .collect();
        irreps.push(UnitaryIrrep {
            label: format!("rho{h:02}"),
            dim: 2,
            matrices,
        });
    }
    Ok((group, UnitaryDual::new(order, irreps)))
}

/// The quaternion group {1,-1,i,-i,j,-j,k,-k} in that element order.
pub fn quaternion8() -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    // basis products: bt[b1][b2] = (negative sign, resulting basis unit)
    // for b in {0:1, 1:i, 2:j, 3:k}
    const BT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let enc = |neg: bool, b: usize| 2 * b + usize::from(neg);
    let mut table = vec![vec![0usize; 8]; 8];
    for x in 0..8 {
        for y in 0..8 {
            let (b1, s1) = (x / 2, x % 2 == 1);
            let (b2, s2) = (y / 2, y % 2 == 1);
            let (neg, b) = BT[b1][b2];
            table[x][y] = enc(s1 ^ s2 ^ neg, b);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let group = FiniteGroup::from_mul_table(table, labels)?;

    let one = |v: f64| CMat::from_element(1, 1, Complex64::new(v, 0.0));
    let sign_char = |label: &str, plus: [usize; 2]| UnitaryIrrep {
        label: label.into(),
        dim: 1,
        matrices: (0..8)
            .map(|x| one(if x / 2 == 0 || x / 2 == plus[0] || x / 2 == plus[1] { 1.0 } else { -1.0 }))
            .collect(),
    };
    let im = Complex64::new(0.0, 1.0);
    let zero = Complex64::new(0.0, 0.0);
    let unit = |b: usize| -> CMat {
        match b {
            0 => CMat::identity(2, 2),
            1 => CMat::from_row_slice(2, 2, &[im, zero, zero, -im]),
            2 => CMat::from_row_slice(2, 2, &[zero, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), zero]),
            _ => CMat::from_row_slice(2, 2, &[zero, im, im, zero]),
        }
    };
    let spin = UnitaryIrrep {
        label: "spin".into(),
        dim: 2,
        matrices: (0..8)
            .map(|x| {
                let m = unit(x / 2);
                if x % 2 == 1 {
                    -m
                } else {
                    m
                }
            })
            .collect(),
    };
    let irreps = vec![
        UnitaryIrrep {
            label: "triv".into(),
            dim: 1,
            matrices: (0..8).map(|_| one(1.0)).collect(),
        },
        sign_char("chi_i", [1, 1]),
        sign_char("chi_j", [2, 2]),
        sign_char("chi_k", [3, 3]),
        spin,
    ];
    Ok((group, UnitaryDual::new(8, irreps)))
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    rec(&mut Vec::new(), &mut items, &mut out);
    out
}

fn parity(p: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Restriction of the permutation representation to the orthogonal
/// complement of the constant vector, in the Helmert orthonormal
/// basis. Exactly unitary and irreducible for n >= 3 (and equal to the
/// sign character for n = 2).
fn standard_matrix(perm: &[usize]) -> CMat {
    let n = perm.len();
    let d = n - 1;
    // helmert column k (1-based): 1/sqrt(k(k+1)) on the first k slots,
    // -k/sqrt(k(k+1)) on slot k, zero below
    let b = |row: usize, col: usize| -> f64 {
        let k = col + 1;
        let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
        if row < k {
            norm
        } else if row == k {
            -(k as f64) * norm
        } else {
            0.0
        }
    };
    CMat::from_fn(d, d, |r, c| {
        // (B^T P B)[r][c] = sum_v B[perm(v)][r] * B[v][c]
        let mut acc = 0.0;
        for v in 0..n {
            acc += b(perm[v], r) * b(v, c);
        }
        Complex64::new(acc, 0.0)
    })
}

/// S_n for n <= 4, elements in lexicographic one-line order, product
/// (p q)(t) = p[q[t]].
pub fn symmetric(n: usize) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    if n == 0 || n > 4 {
        return Err(CoreError::BadFamily(
            "symmetric parameter must be between 1 and 4".into(),
        ));
    }
    let perms = permutations_lex(n);
    let order = perms.len();
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let mut table = vec![vec![0usize; order]; order];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            let composed: Vec<usize> = (0..n).map(|t| p[q[t]]).collect();
            table[i][j] = index_of(&composed);
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
        .collect();
    let group = FiniteGroup::from_mul_table(table, labels)?;

    let one = |v: f64| CMat::from_element(1, 1, Complex64::new(v, 0.0));
    let mut irreps = vec![UnitaryIrrep {
        label: "triv".into(),
        dim: 1,
        matrices: (0..order).map(|_| one(1.0)).collect(),
    }];
    if n >= 2 {
        irreps.push(UnitaryIrrep {
            label: "sgn".into(),
            dim: 1,
            matrices: perms.iter().map(|p| one(parity(p))).collect(),
        });
    }
    if n >= 3 {
        irreps.push(UnitaryIrrep {
            label: "std".into(),
            dim: n - 1,
            matrices: perms.iter().map(|p| standard_matrix(p)).collect(),
        });
    }
    if n == 4 {
        irreps.push(UnitaryIrrep {
            label: "sgnstd".into(),
            dim: 3,
            matrices: perms
                .iter()
                .map(|p| standard_matrix(p) * Complex64::new(parity(p), 0.0))
                .collect(),
        });
        // the 2-dimensional irrep factors through S4 -> S3 acting on the
        // three pair-partitions {01|23, 02|13, 03|12}
        let partitions: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
        let partition_index = |pairs: [[usize; 2]; 2]| -> usize {
            for (i, q) in partitions.iter().enumerate() {
                let same = |a: [usize; 2], b: [usize; 2]| {
                    (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
                };
                let q0 = [q[0], q[1]];
                let q1 = [q[2], q[3]];
                if (same(pairs[0], q0) && same(pairs[1], q1))
                    || (same(pairs[0], q1) && same(pairs[1], q0))
                {
                    return i;
                }
            }
            unreachable!("every pairing of four points is one of the three partitions");
        };
        let s3_perms = permutations_lex(3);
        let quot_mats: Vec<CMat> = perms
            .iter()
            .map(|p| {
                let mut action = [0usize; 3];
                for (i, q) in partitions.iter().enumerate() {
                    action[i] = partition_index([[p[q[0]], p[q[1]]], [p[q[2]], p[q[3]]]]);
                }
                let s3p: Vec<usize> = action.to_vec();
                debug_assert!(s3_perms.contains(&s3p));
                standard_matrix(&s3p)
            })
            .collect();
        irreps.push(UnitaryIrrep {
            label: "quot".into(),
            dim: 2,
            matrices: quot_mats,
        });
    }
    Ok((group, UnitaryDual::new(order, irreps)))
}

const ODD_PRIMES: &[usize] = &[3, 5, 7, 11, 13];

/// The finite Heisenberg group mod p (order p^3), elements (a,b,c)
/// indexed a p^2 + b p + c with product
/// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b') mod p.
///
/// Dual: p^2 characters of the abelianization plus, for k = 1..p-1,
/// the p-dimensional irrep acting on functions over Z_p by
/// [pi_k(a,b,c) phi](t) = exp(2 pi i k(c+tb)/p) phi(t+a).
pub fn heisenberg_mod_p(p: usize) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    if !ODD_PRIMES.contains(&p) {
        return Err(CoreError::BadFamily(
            "heisenberg parameter must be an odd prime <= 13".into(),
        ));
    }
    let order = p * p * p;
    let dec = |x: usize| (x / (p * p), (x / p) % p, x % p);
    let enc = |a: usize, b: usize, c: usize| (a % p) * p * p + (b % p) * p + (c % p);
    let mut table = vec![vec![0usize; order]; order];
    for x in 0..order {
        let (a, b, c) = dec(x);
        for y in 0..order {
            let (a2, b2, c2) = dec(y);
            table[x][y] = enc(a + a2, b + b2, c + c2 + a * b2);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (a, b, c) = dec(x);
            format!("({a},{b},{c})")
        })
        .collect();
    let group = FiniteGroup::from_mul_table(table, labels)?;

    let mut irreps = Vec::new();
    for m in 0..p {
        for nn in 0..p {
            irreps.push(UnitaryIrrep {
                label: format!("chi{m:02}_{nn:02}"),
                dim: 1,
                matrices: (0..order)
                    .map(|x| {
                        let (a, b, _) = dec(x);
                        CMat::from_element(
                            1,
                            1,
                            phase(2.0 * PI * ((m * a + nn * b) % p) as f64 / p as f64),
                        )
                    })
                    .collect(),
            });
        }
    }
    for k in 1..p {
        let matrices = (0..order)
            .map(|x| {
                let (a, b, c) = dec(x);
                CMat::from_fn(p, p, |t, t2| {
                    if t2 == (t + a) % p {
                        phase(2.0 * PI * ((k * (c + t * b)) % p) as f64 / p as f64)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        irreps.push(UnitaryIrrep {
            label: format!("pi{k:02}"),
            dim: p,
            matrices,
        });
    }
    Ok((group, UnitaryDual::new(order, irreps)))
}

/// Elementwise direct product with the tensor-product dual.
pub fn direct_product(
    g1: &FiniteGroup,
    d1: &UnitaryDual,
    g2: &FiniteGroup,
    d2: &UnitaryDual,
) -> Result<(FiniteGroup, UnitaryDual), CoreError> {
    let n1 = g1.order();
    let n2 = g2.order();
    let order = n1 * n2;
    let enc = |x1: usize, x2: usize| x1 * n2 + x2;
    let mut table = vec![vec![0usize; order]; order];
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            for y1 in 0..n1 {
                for y2 in 0..n2 {
                    table[enc(x1, x2)][enc(y1, y2)] = enc(g1.mul(x1, y1), g2.mul(x2, y2));
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(order);
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            labels.push(format!("{}|{}", g1.label(x1), g2.label(x2)));
        }
    }
    let group = FiniteGroup::from_mul_table(table, labels)?;

    let mut irreps = Vec::new();
    for r1 in d1.irreps() {
        for r2 in d2.irreps() {
            let matrices = (0..order)
                .map(|x| kron(&r1.matrices[x / n2], &r2.matrices[x % n2]))
                .collect();
            irreps.push(UnitaryIrrep {
                label: format!("{}x{}", r1.label, r2.label),
                dim: r1.dim * r2.dim,
                matrices,
            });
        }
    }
    Ok((group, UnitaryDual::new(order, irreps)))
}

/// Central extension of `h` by abelian `n` along a normalized 2-cocycle
/// `w : H x H -> N`. Elements (h, n) are indexed h |N| + n and multiply
/// as (h1,n1)(h2,n2) = (h1 h2, n1 n2 w(h1,h2)).
///
/// Rejects non-abelian `n`, non-normalized cocycles, and cocycles
/// violating w(h1,h2) w(h1 h2,h3) = w(h2,h3) w(h1, h2 h3).
pub fn two_cocycle_extension(
    h: &FiniteGroup,
    n: &FiniteGroup,
    w: &dyn Fn(usize, usize) -> usize,
) -> Result<FiniteGroup, CoreError> {
    if !n.is_abelian() {
        return Err(CoreError::BadFamily(
            "central extension fiber must be abelian".into(),
        ));
    }
    for x in h.elements() {
        if w(x, 0) != 0 || w(0, x) != 0 {
            return Err(CoreError::BadFamily("cocycle is not normalized".into()));
        }
    }
    for h1 in h.elements() {
        for h2 in h.elements() {
            for h3 in h.elements() {
                let lhs = n.mul(w(h1, h2), w(h.mul(h1, h2), h3));
                let rhs = n.mul(w(h2, h3), w(h1, h.mul(h2, h3)));
                if lhs != rhs {
                    return Err(CoreError::BadFamily(format!(
                        "cocycle identity fails at ({h1},{h2},{h3})"
                    )));
                }
            }
        }
    }
    let nn = n.order();
    let order = h.order() * nn;
    let enc = |hx: usize, nx: usize| hx * nn + nx;
    let mut table = vec![vec![0usize; order]; order];
    for h1 in h.elements() {
        for n1 in n.elements() {
            for h2 in h.elements() {
                for n2 in n.elements() {
                    table[enc(h1, n1)][enc(h2, n2)] =
                        enc(h.mul(h1, h2), n.mul(n.mul(n1, n2), w(h1, h2)));
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(order);
    for hx in h.elements() {
        for nx in n.elements() {
            labels.push(format!("({},{})", h.label(hx), n.label(nx)));
        }
    }
    FiniteGroup::from_mul_table(table, labels)
}
