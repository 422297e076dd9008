//! Test-side oracles, written independently of the library code they check.
#![allow(dead_code)]

use msdiag::curve_map::{Orientation, Piece, ScarSlot, TracedCurve};
use msdiag::linalg::IntMatrix;
use msdiag::TracedMulticurve;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    match n {
        0 => BigInt::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut total = BigInt::zero();
            for c in 0..n {
                if a[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][c] * det_cofactor(&minor);
                if c % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// Determinant by Gaussian elimination over the rationals, kept as
/// numerator/denominator pairs. Used where cofactor expansion is too slow.
pub fn det_rational(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut num: Vec<Vec<BigInt>> = a.to_vec();
    let mut den: Vec<Vec<BigInt>> = vec![vec![BigInt::one(); n]; n];
    let mut sign = BigInt::one();
    let mut acc_num = BigInt::one();
    let mut acc_den = BigInt::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !num[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            num.swap(p, col);
            den.swap(p, col);
            sign = -sign;
        }
        let (pn, pd) = (num[col][col].clone(), den[col][col].clone());
        acc_num *= &pn;
        acc_den *= &pd;
        for r in col + 1..n {
            if num[r][col].is_zero() {
                continue;
            }
            // factor = a[r][col] / a[col][col]
            let fn_ = &num[r][col] * &pd;
            let fd = &den[r][col] * &pn;
            for c in col..n {
                // a[r][c] -= factor * a[col][c]
                let sn = &fn_ * &num[col][c];
                let sd = &fd * &den[col][c];
                let nn = &num[r][c] * &sd - &sn * &den[r][c];
                let nd = &den[r][c] * &sd;
                let g = nn.gcd(&nd);
                let g = if g.is_zero() { BigInt::one() } else { g };
                num[r][c] = nn / &g;
                den[r][c] = nd / &g;
            }
        }
    }
    let (q, r) = (sign * acc_num).div_rem(&acc_den);
    assert!(r.is_zero(), "integer matrix has integer determinant");
    q
}

pub fn is_unimodular_oracle(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && det_rational(&to_rows(m)).abs().is_one()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_k` = gcd of all k x k minors; the invariant factors are
/// `d_k / d_{k-1}`. Only for small matrices.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = to_rows(m);
    let mut divisors = vec![BigInt::one()];
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect())
                    .collect();
                g = g.gcd(&det_cofactor(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

/// Random unimodular matrix and its inverse, built from elementary moves.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, moves: usize) -> (IntMatrix, IntMatrix) {
    let mut u = vec![vec![BigInt::zero(); n]; n];
    let mut inv = u.clone();
    for i in 0..n {
        u[i][i] = BigInt::one();
        inv[i][i] = BigInt::one();
    }
    if n == 0 {
        return (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0));
    }
    for _ in 0..moves {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        match rng.random_range(0..3) {
            0 if i != j => {
                // row_i += c row_j on u; col_j -= c col_i on inv
                let c = BigInt::from(rng.random_range(-3i64..=3));
                let rj = u[j].clone();
                for (x, y) in u[i].iter_mut().zip(&rj) {
                    *x += &c * y;
                }
                for row in inv.iter_mut() {
                    let v = &c * &row[i];
                    row[j] -= v;
                }
            }
            1 => {
                u.swap(i, j);
                for row in inv.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                for x in u[i].iter_mut() {
                    *x = -x.clone();
                }
                for row in inv.iter_mut() {
                    row[i] = -row[i].clone();
                }
            }
        }
    }
    let flat =
        |m: Vec<Vec<BigInt>>| IntMatrix::new(n, n, m.into_iter().flatten().collect()).unwrap();
    (flat(u), flat(inv))
}

/// A random orientable trace: pieces get random genus and boundary, curve
/// sides land on random pieces, signs follow a random flip bit per piece.
pub fn random_trace<R: Rng>(rng: &mut R, max_pieces: usize, max_curves: usize) -> TracedMulticurve {
    let p = rng.random_range(1..=max_pieces);
    let m = rng.random_range(0..=max_curves);
    let mut scars = vec![0u32; p];
    let mut sides = Vec::with_capacity(2 * m);
    for _ in 0..2 * m {
        let piece = rng.random_range(0..p);
        sides.push(ScarSlot::new(piece, scars[piece]));
        scars[piece] += 1;
    }
    sides.shuffle(rng);
    let flips: Vec<bool> = (0..p).map(|_| rng.random_bool(0.5)).collect();
    let curves = sides
        .chunks(2)
        .map(|c| {
            let orient = if flips[c[0].piece] == flips[c[1].piece] {
                Orientation::Positive
            } else {
                Orientation::Negative
            };
            TracedCurve::new(c[0], c[1], orient)
        })
        .collect();
    let pieces = (0..p)
        .map(|i| Piece::new(rng.random_range(0..=2), scars[i], rng.random_range(0..=2)))
        .collect();
    TracedMulticurve::new(pieces, curves)
}

/// Connected components of the piece graph of a trace.
pub fn piece_components(t: &TracedMulticurve) -> Vec<Vec<usize>> {
    let n = t.pieces.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(p) = stack.pop() {
            comp.push(p);
            for c in &t.curves {
                for (a, b) in [
                    (c.sides[0].piece, c.sides[1].piece),
                    (c.sides[1].piece, c.sides[0].piece),
                ] {
                    if a == p && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Random line-level damage to a diagram file.
pub fn mutate(rng: &mut StdRng, text: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let tokens = [
        "[page]",
        "[surface]",
        "[system x]",
        "[suture]",
        "piece",
        "curve",
        "class=",
        "piece-data=",
        "=",
        "|",
        ".",
        ":",
        ",",
        "-",
        "+",
        "#",
        "a0",
        "b9",
        "d3",
        "99999999999999999999",
        "-1",
        "genus=1001",
        "[",
        "]",
        "empty",
        "pair 0 0",
        "component genus=0 boundary=0",
        "\u{0}",
        "é",
        " ",
    ];
    for _ in 0..rng.random_range(1..=4) {
        if lines.is_empty() {
            lines.push(String::new());
        }
        let i = rng.random_range(0..lines.len());
        match rng.random_range(0..7) {
            0 => {
                lines.remove(i);
            }
            1 => {
                let l = lines[i].clone();
                lines.insert(i, l);
            }
            2 => {
                let j = rng.random_range(0..lines.len());
                lines.swap(i, j);
            }
            3 => {
                let t = tokens[rng.random_range(0..tokens.len())];
                let l = &mut lines[i];
                let mut at = rng.random_range(0..=l.len());
                while !l.is_char_boundary(at) {
                    at -= 1;
                }
                l.insert_str(at, t);
            }
            4 => {
                let l = &mut lines[i];
                if !l.is_empty() {
                    let mut at = rng.random_range(0..l.len());
                    while !l.is_char_boundary(at) {
                        at -= 1;
                    }
                    l.remove(at);
                }
            }
            5 => {
                // bump a digit
                let l = &mut lines[i];
                if let Some(pos) = l.find(|c: char| c.is_ascii_digit()) {
                    let d = rng.random_range(0..10u8);
                    l.replace_range(pos..pos + 1, &d.to_string());
                }
            }
            _ => lines.truncate(i),
        }
    }
    lines.join("\n")
}
