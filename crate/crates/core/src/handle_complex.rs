//! Cellular chain complexes with integer boundary matrices, their homology,
//! and the handle complex of the manifolds `X_n`.
//!
//! # Text format
//!
//! ```text
//! # torus
//! dims 1 2 1
//! labels 1 a b
//! boundary 1
//! 0 0
//! boundary 2
//! 0
//! 0
//! ```
//!
//! `boundary d` is followed by the `dims[d-1] x dims[d]` matrix of `d_d`,
//! row-major, whitespace separated (line breaks are not significant). Column
//! `j` is the boundary of the `j`-th cell of degree `d`. `labels` lines are
//! optional.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{smith_normal_form, AbelianGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("{boundaries} boundary maps for {degrees} degrees (need one per degree above 0)")]
    BoundaryCount { degrees: usize, boundaries: usize },
    #[error("boundary {degree} is {found:?}, expected {expected:?}")]
    Shape {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("composite of boundaries {degree} and {} is nonzero", .degree - 1)]
    NotAComplex { degree: usize },
    #[error("labels for degree {degree}: {found} names for {expected} cells")]
    LabelCount {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    // boundaries[d - 1] is the boundary map out of degree d
    boundaries: Vec<IntMatrix>,
    labels: Option<Vec<Vec<String>>>,
}

impl ChainComplex {
    /// `boundaries[i]` maps degree `i + 1` to degree `i`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        let expected_maps = dims.len().saturating_sub(1);
        if boundaries.len() != expected_maps {
            return Err(ComplexError::BoundaryCount {
                degrees: dims.len(),
                boundaries: boundaries.len(),
            });
        }
        for (i, m) in boundaries.iter().enumerate() {
            let expected = (dims[i], dims[i + 1]);
            if m.shape() != expected {
                return Err(ComplexError::Shape {
                    degree: i + 1,
                    expected,
                    found: m.shape(),
                });
            }
        }
        Ok(ChainComplex {
            dims,
            boundaries,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, ComplexError> {
        if labels.len() != self.dims.len() {
            return Err(ComplexError::LabelCount {
                degree: labels.len(),
                expected: self.dims.len(),
                found: labels.len(),
            });
        }
        for (degree, (names, &n)) in labels.iter().zip(&self.dims).enumerate() {
            if names.len() != n {
                return Err(ComplexError::LabelCount {
                    degree,
                    expected: n,
                    found: names.len(),
                });
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    /// The boundary map out of degree `d` (`1 <= d <= top`).
    pub fn boundary(&self, d: usize) -> Option<&IntMatrix> {
        d.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Every composite of consecutive boundaries vanishes.
    pub fn verify(&self) -> bool {
        self.first_nonzero_composite().is_none()
    }

    fn first_nonzero_composite(&self) -> Option<usize> {
        (1..self.boundaries.len()).find_map(|i| {
            let comp = self.boundaries[i - 1]
                .mul(&self.boundaries[i])
                .expect("shapes checked at construction");
            (!comp.is_zero()).then_some(i + 1)
        })
    }

    /// `H_d = ker d_d / im d_{d+1}` for every degree.
    pub fn homology(&self) -> Result<Vec<AbelianGroup>, ComplexError> {
        if let Some(degree) = self.first_nonzero_composite() {
            return Err(ComplexError::NotAComplex { degree });
        }
        let snfs: Vec<_> = self.boundaries.iter().map(smith_normal_form).collect();
        let ranks: Vec<usize> = snfs.iter().map(|s| s.rank()).collect();
        let mut out = Vec::with_capacity(self.dims.len());
        for d in 0..self.dims.len() {
            let rank_out = if d == 0 { 0 } else { ranks[d - 1] };
            let rank_in = ranks.get(d).copied().unwrap_or(0);
            let torsion = snfs
                .get(d)
                .map(|s| {
                    s.invariant_factors()
                        .into_iter()
                        .filter(|f| *f > BigInt::from(1))
                        .collect()
                })
                .unwrap_or_default();
            let free = self.dims[d] - rank_out - rank_in;
            out.push(AbelianGroup::new(free, torsion).expect("SNF factors form a chain"));
        }
        Ok(out)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        writeln!(out, "dims {}", dims.join(" ")).unwrap();
        if let Some(labels) = &self.labels {
            for (d, names) in labels.iter().enumerate() {
                if !names.is_empty() {
                    writeln!(out, "labels {d} {}", names.join(" ")).unwrap();
                }
            }
        }
        for (i, m) in self.boundaries.iter().enumerate() {
            writeln!(out, "boundary {}", i + 1).unwrap();
            for r in 0..m.rows() {
                let row: Vec<String> = m.row(r).iter().map(ToString::to_string).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, ComplexError> {
        ComplexParser::default().run(text)
    }
}

#[derive(Default)]
struct ComplexParser {
    dims: Option<(usize, Vec<usize>)>,
    labels: Vec<(usize, usize, Vec<String>)>,
    // (header line, degree, entries)
    blocks: Vec<(usize, usize, Vec<BigInt>)>,
}

impl ComplexParser {
    fn run(mut self, text: &str) -> Result<ChainComplex, ComplexError> {
        let err = |line: usize, message: String| ComplexError::Parse { line, message };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or("");
            match head {
                "dims" => {
                    if self.dims.is_some() {
                        return Err(err(line_no, "duplicate dims line".into()));
                    }
                    let dims = words
                        .map(|w| w.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| err(line_no, format!("bad dimension: {e}")))?;
                    self.dims = Some((line_no, dims));
                }
                "labels" => {
                    let degree = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| err(line_no, "labels needs a degree".into()))?;
                    self.labels
                        .push((line_no, degree, words.map(str::to_string).collect()));
                }
                "boundary" => {
                    let degree = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| err(line_no, "boundary needs a degree".into()))?;
                    if words.next().is_some() {
                        return Err(err(line_no, "trailing text after boundary header".into()));
                    }
                    self.blocks.push((line_no, degree, Vec::new()));
                }
                _ => {
                    let Some(block) = self.blocks.last_mut() else {
                        return Err(err(
                            line_no,
                            format!("unexpected {head:?} before any boundary block"),
                        ));
                    };
                    for w in line.split_whitespace() {
                        let v = w
                            .parse::<BigInt>()
                            .map_err(|_| err(line_no, format!("not an integer: {w:?}")))?;
                        block.2.push(v);
                    }
                }
            }
        }
        let (dims_line, dims) = self
            .dims
            .ok_or_else(|| err(0, "missing dims line".into()))?;
        let maps = dims.len().saturating_sub(1);
        let mut boundaries: Vec<Option<IntMatrix>> = vec![None; maps];
        for (line, degree, entries) in self.blocks {
            if degree == 0 || degree > maps {
                return Err(err(
                    line,
                    format!("boundary degree {degree} out of range 1..={maps}"),
                ));
            }
            if boundaries[degree - 1].is_some() {
                return Err(err(line, format!("duplicate boundary {degree}")));
            }
            let m = IntMatrix::new(dims[degree - 1], dims[degree], entries)
                .map_err(|e| err(line, e.to_string()))?;
            boundaries[degree - 1] = Some(m);
        }
        let boundaries: Vec<IntMatrix> = boundaries
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| err(dims_line, format!("missing boundary {}", i + 1))))
            .collect::<Result<_, _>>()?;
        let mut complex = ChainComplex::new(dims.clone(), boundaries)?;
        if !self.labels.is_empty() {
            let mut labels: Vec<Vec<String>> = dims.iter().map(|_| Vec::new()).collect();
            for (line, degree, names) in self.labels {
                let slot = labels
                    .get_mut(degree)
                    .ok_or_else(|| err(line, format!("labels degree {degree} out of range")))?;
                *slot = names;
            }
            complex = complex
                .with_labels(labels)
                .map_err(|e| err(dims_line, e.to_string()))?;
        }
        Ok(complex)
    }
}

fn matrix_from_columns(rows: usize, columns: &[Vec<(usize, BigInt)>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col {
            let cur = m.get(*r, c).clone();
            m.set(*r, c, cur + v);
        }
    }
    m
}

/// Cellular model of `X_n` through degree 3.
///
/// The torus is subdivided along the three parallel curves: vertices
/// `v1 v2 v3`, loops `a1 a2 a3` (the curves `alpha_i`), arcs `e1 e2 e3`
/// transverse to them, and the annuli `F1 F2 F3` with `dF_i = a_i - a_{i-1}`.
/// `F_i` is the projection of the sweep between `alpha_{i-1}` and
/// `alpha_i`, so `F1 + F2 + F3` is the fundamental class. The 2-handles give
/// `D_i` with `dD_i = a_i`, and the 3-handles give
/// `dB_i = D_{i-1} - D_i + F_i`, except that the extra `n - 1` turns of the
/// last sweep add `(n - 1)(F1 + F2 + F3)` to `dB_3`.
pub fn build_xn(n: u64) -> ChainComplex {
    let idx = |i: usize| i % 3;
    let one = BigInt::from(1);
    let neg = BigInt::from(-1);

    // degree 1: a1 a2 a3 e1 e2 e3 -> v1 v2 v3
    let mut d1 = vec![Vec::new(); 3];
    for i in 0..3 {
        d1.push(vec![(idx(i), one.clone()), (idx(i + 2), neg.clone())]);
    }
    // degree 2: F1 F2 F3 D1 D2 D3 -> a1 a2 a3 e1 e2 e3
    let mut d2 = Vec::new();
    for i in 0..3 {
        d2.push(vec![(idx(i), one.clone()), (idx(i + 2), neg.clone())]);
    }
    for i in 0..3 {
        d2.push(vec![(i, one.clone())]);
    }
    // degree 3: B1 B2 B3 -> F1 F2 F3 D1 D2 D3
    let mut d3 = Vec::new();
    for i in 0..3 {
        let mut col = vec![
            (3 + idx(i + 2), one.clone()),
            (3 + i, neg.clone()),
            (i, one.clone()),
        ];
        if i == 2 {
            let turns = BigInt::from(n) - BigInt::from(1u8);
            if !turns.is_zero() {
                col.extend((0..3).map(|f| (f, turns.clone())));
            }
        }
        d3.push(col);
    }

    let names = |ps: &[&str]| -> Vec<String> {
        ps.iter()
            .flat_map(|p| (1..=3).map(move |i| format!("{p}{i}")))
            .collect()
    };
    ChainComplex::new(
        vec![3, 6, 6, 3],
        vec![
            matrix_from_columns(3, &d1),
            matrix_from_columns(6, &d2),
            matrix_from_columns(6, &d3),
        ],
    )
    .and_then(|c| {
        c.with_labels(vec![
            names(&["v"]),
            names(&["a", "e"]),
            names(&["F", "D"]),
            names(&["B"]),
        ])
    })
    .expect("X_n complex is well formed")
}
