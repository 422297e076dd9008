//! Compact oriented surfaces and their first homology.
//!
//! The basis of `H_1` for a connected surface of genus `g` with `b` boundary
//! circles is fixed as
//!
//! ```text
//! a1, b1, a2, b2, ..., ag, bg, d1, ..., d(b-1)
//! ```
//!
//! where `ai`, `bi` are the symplectic pair of the i-th handle
//! (`<ai, bi> = +1`) and `dj` is the class of the j-th boundary circle. The
//! last boundary circle is `-(d1 + ... + d(b-1))` and gets no generator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{cokernel, AbelianGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("curve classes live on different surfaces ({0} vs {1})")]
    HostMismatch(Surface, Surface),
    #[error("class has {found} coefficients, surface {surface} needs {expected}")]
    CoefficientCount {
        surface: Surface,
        expected: usize,
        found: usize,
    },
    #[error("basis element {0} does not exist on {1}")]
    BasisOutOfRange(BasisElement, Surface),
    #[error("cannot parse surface list {0:?}")]
    BadSurfaceList(String),
}

/// A compact connected oriented surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surface {
    pub genus: u32,
    pub boundary: u32,
}

impl Surface {
    pub const SPHERE: Surface = Surface::new(0, 0);
    pub const DISK: Surface = Surface::new(0, 1);
    pub const TORUS: Surface = Surface::new(1, 0);

    pub const fn new(genus: u32, boundary: u32) -> Self {
        Surface { genus, boundary }
    }

    pub fn closed(genus: u32) -> Self {
        Surface::new(genus, 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.boundary)
    }

    pub fn is_sphere(&self) -> bool {
        *self == Self::SPHERE
    }

    /// Rank of `H_1`, i.e. the length of every [`CurveClass`] on this surface.
    pub fn h1_rank(&self) -> usize {
        2 * self.genus as usize + (self.boundary as usize).saturating_sub(1)
    }

    pub fn h1(&self) -> AbelianGroup {
        AbelianGroup::free(self.h1_rank())
    }

    pub fn basis(&self) -> Vec<BasisElement> {
        let mut out = Vec::with_capacity(self.h1_rank());
        for i in 1..=self.genus {
            out.push(BasisElement::A(i));
            out.push(BasisElement::B(i));
        }
        for j in 1..self.boundary {
            out.push(BasisElement::D(j));
        }
        out
    }

    /// Position of `e` within [`Surface::basis`].
    pub fn basis_index(&self, e: BasisElement) -> Result<usize, SurfaceError> {
        let idx = match e {
            BasisElement::A(i) if (1..=self.genus).contains(&i) => 2 * (i as usize - 1),
            BasisElement::B(i) if (1..=self.genus).contains(&i) => 2 * (i as usize - 1) + 1,
            BasisElement::D(j) if j >= 1 && j < self.boundary => {
                2 * self.genus as usize + j as usize - 1
            }
            _ => return Err(SurfaceError::BasisOutOfRange(e, *self)),
        };
        Ok(idx)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.genus, self.boundary)
    }
}

/// One of the named generators of `H_1`; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    A(u32),
    B(u32),
    D(u32),
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::A(i) => write!(f, "a{i}"),
            BasisElement::B(i) => write!(f, "b{i}"),
            BasisElement::D(i) => write!(f, "d{i}"),
        }
    }
}

impl FromStr for BasisElement {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let mut chars = s.chars();
        let kind = chars.next().ok_or(())?;
        let rest = chars.as_str();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(());
        }
        let i: u32 = rest.parse().map_err(|_| ())?;
        match kind {
            'a' => Ok(BasisElement::A(i)),
            'b' => Ok(BasisElement::B(i)),
            'd' => Ok(BasisElement::D(i)),
            _ => Err(()),
        }
    }
}

/// A possibly disconnected surface, compared as a multiset of components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SurfaceCollection {
    // kept sorted so that derived equality is multiset equality
    components: Vec<Surface>,
}

impl SurfaceCollection {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut components: Vec<Surface>) -> Self {
        components.sort();
        SurfaceCollection { components }
    }

    pub fn single(s: Surface) -> Self {
        SurfaceCollection {
            components: vec![s],
        }
    }

    pub fn components(&self) -> &[Surface] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_genus(&self) -> u64 {
        self.components.iter().map(|s| u64::from(s.genus)).sum()
    }

    pub fn total_boundary(&self) -> u64 {
        self.components.iter().map(|s| u64::from(s.boundary)).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.components
            .iter()
            .map(Surface::euler_characteristic)
            .sum()
    }

    pub fn sphere_count(&self) -> usize {
        self.components.iter().filter(|s| s.is_sphere()).count()
    }

    pub fn has_sphere(&self) -> bool {
        self.sphere_count() > 0
    }

    /// The same collection with every sphere component dropped.
    pub fn without_spheres(&self) -> SurfaceCollection {
        SurfaceCollection {
            components: self
                .components
                .iter()
                .copied()
                .filter(|s| !s.is_sphere())
                .collect(),
        }
    }

    /// Direct sum of the `H_1` of every component.
    pub fn h1(&self) -> AbelianGroup {
        AbelianGroup::free(self.components.iter().map(Surface::h1_rank).sum())
    }
}

impl fmt::Display for SurfaceCollection {
    /// Same syntax as [`FromStr`]: `empty` or `g:b,g:b,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|s| format!("{}:{}", s.genus, s.boundary))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for SurfaceCollection {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, SurfaceError> {
        let bad = || SurfaceError::BadSurfaceList(s.to_string());
        let trimmed = s.trim();
        if trimmed == "empty" {
            return Ok(Self::empty());
        }
        let mut out = Vec::new();
        for part in trimmed.split(',') {
            let (g, b) = part.trim().split_once(':').ok_or_else(bad)?;
            let g = g.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            out.push(Surface::new(g, b));
        }
        Ok(Self::new(out))
    }
}

/// An element of `H_1(host)` in the fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    host: Surface,
    coeffs: Vec<BigInt>,
}

impl CurveClass {
    pub fn new(host: Surface, coeffs: Vec<BigInt>) -> Result<Self, SurfaceError> {
        if coeffs.len() != host.h1_rank() {
            return Err(SurfaceError::CoefficientCount {
                surface: host,
                expected: host.h1_rank(),
                found: coeffs.len(),
            });
        }
        Ok(CurveClass { host, coeffs })
    }

    pub fn from_i64(host: Surface, coeffs: &[i64]) -> Result<Self, SurfaceError> {
        Self::new(host, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(host: Surface) -> Self {
        CurveClass {
            host,
            coeffs: vec![BigInt::zero(); host.h1_rank()],
        }
    }

    /// A single basis element.
    pub fn basis(host: Surface, e: BasisElement) -> Result<Self, SurfaceError> {
        Self::from_terms(host, &[(e, 1)])
    }

    /// Sum of `coeff * element` terms; repeated elements accumulate.
    pub fn from_terms(host: Surface, terms: &[(BasisElement, i64)]) -> Result<Self, SurfaceError> {
        let mut c = Self::zero(host);
        for &(e, k) in terms {
            let i = host.basis_index(e)?;
            c.coeffs[i] += k;
        }
        Ok(c)
    }

    pub fn host(&self) -> Surface {
        self.host
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> Vec<(BasisElement, BigInt)> {
        self.host
            .basis()
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.clone()))
            .collect()
    }

    /// `self + factor * other`
    pub fn add_multiple(
        &self,
        other: &CurveClass,
        factor: i64,
    ) -> Result<CurveClass, SurfaceError> {
        check_host(self, other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b * factor)
            .collect();
        Ok(CurveClass {
            host: self.host,
            coeffs,
        })
    }

    /// True when the class lies in the span of the boundary classes
    /// (what a separating curve must satisfy).
    pub fn is_boundary_parallel(&self) -> bool {
        self.coeffs[..2 * self.host.genus as usize]
            .iter()
            .all(Zero::is_zero)
    }
}

impl fmt::Display for CurveClass {
    /// Same syntax as the diagram file: `a1:1,b2:-3`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms.iter().map(|(e, c)| format!("{e}:{c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn check_host(x: &CurveClass, y: &CurveClass) -> Result<(), SurfaceError> {
    if x.host != y.host {
        return Err(SurfaceError::HostMismatch(x.host, y.host));
    }
    Ok(())
}

/// Algebraic intersection number `<x, y>`, with `<ai, bi> = 1`.
pub fn intersection_pairing(x: &CurveClass, y: &CurveClass) -> Result<BigInt, SurfaceError> {
    check_host(x, y)?;
    let mut total = BigInt::zero();
    for h in 0..x.host.genus as usize {
        let (a, b) = (2 * h, 2 * h + 1);
        total += &x.coeffs[a] * &y.coeffs[b] - &x.coeffs[b] * &y.coeffs[a];
    }
    Ok(total)
}

/// The `len(xs) x len(ys)` matrix of pairings `<xs[i], ys[j]>`.
pub fn pairing_matrix(xs: &[CurveClass], ys: &[CurveClass]) -> Result<IntMatrix, SurfaceError> {
    let mut entries = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            entries.push(intersection_pairing(x, y)?);
        }
    }
    Ok(IntMatrix::new(xs.len(), ys.len(), entries).expect("entry count matches shape"))
}

/// Columns are the coefficient vectors of `classes`.
pub fn class_matrix(surface: Surface, classes: &[CurveClass]) -> Result<IntMatrix, SurfaceError> {
    let rows = surface.h1_rank();
    let mut m = IntMatrix::zeros(rows, classes.len());
    for (c, class) in classes.iter().enumerate() {
        if class.host != surface {
            return Err(SurfaceError::HostMismatch(surface, class.host));
        }
        for (r, v) in class.coeffs.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    Ok(m)
}

/// `H_1(surface) / <classes>`.
pub fn quotient_homology(
    surface: Surface,
    classes: &[CurveClass],
) -> Result<AbelianGroup, SurfaceError> {
    Ok(cokernel(&class_matrix(surface, classes)?))
}

/// gcd of the coefficients is 1. The zero class is not primitive.
pub fn is_primitive(x: &CurveClass) -> bool {
    let g = x.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    g.abs().is_one()
}
