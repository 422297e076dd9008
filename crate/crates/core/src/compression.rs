//! Compression bodies seen through their cut systems.
//!
//! A cut system is checked geometrically through its trace (surgery along
//! all curves must give the negative boundary, or a single sphere when the
//! negative boundary is empty) and algebraically through the homology
//! classes of its curves.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::curve_map::{
    reconstruct_surface, surger_all, Piece, ScarSlot, TraceError, TracedCurve, TracedMulticurve,
};
use crate::linalg::{smith_normal_form, AbelianGroup};
use crate::surface::{
    pairing_matrix, quotient_homology, BasisElement, CurveClass, Surface, SurfaceCollection,
    SurfaceError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressionError {
    #[error("trace of cut system: {0}")]
    Trace(#[from] TraceError),
    #[error("trace reconstructs {found}, expected the single surface {expected}")]
    SurfaceMismatch {
        expected: Surface,
        found: SurfaceCollection,
    },
    #[error("trace has {curves} curves but {classes} classes were given")]
    ClassCount { curves: usize, classes: usize },
    #[error("{0}")]
    Surface(#[from] SurfaceError),
    #[error("{0} curve names for {1} curves")]
    NameCount(usize, usize),
    #[error("cannot slide curve {0} over itself")]
    SelfSlide(usize),
    #[error("curve index {index} out of range ({count} curves)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("page contains a sphere component")]
    SphereInPage,
    #[error("non-separating curves need genus >= {needed}, surface has {surface}")]
    NotEnoughGenus { needed: usize, surface: Surface },
}

/// Direction of a handleslide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = i64;

    fn try_from(v: i64) -> Result<Self, i64> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(other),
        }
    }
}

/// The boundary of a defining disk system, with one homology class per
/// curve of its trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutSystem {
    surface: Surface,
    trace: TracedMulticurve,
    classes: Vec<CurveClass>,
    curve_names: Vec<String>,
}

impl CutSystem {
    pub fn new(
        surface: Surface,
        trace: TracedMulticurve,
        classes: Vec<CurveClass>,
    ) -> Result<Self, CompressionError> {
        let found = reconstruct_surface(&trace)?;
        if found != SurfaceCollection::single(surface) {
            return Err(CompressionError::SurfaceMismatch {
                expected: surface,
                found,
            });
        }
        if classes.len() != trace.curve_count() {
            return Err(CompressionError::ClassCount {
                curves: trace.curve_count(),
                classes: classes.len(),
            });
        }
        if let Some(c) = classes.iter().find(|c| c.host() != surface) {
            return Err(SurfaceError::HostMismatch(surface, c.host()).into());
        }
        let curve_names = (1..=classes.len()).map(|i| format!("c{i}")).collect();
        Ok(CutSystem {
            surface,
            trace,
            classes,
            curve_names,
        })
    }

    /// Curves whose union does not separate: the complement is one piece of
    /// genus `g - m` carrying all `2m` scars.
    pub fn nonseparating(
        surface: Surface,
        classes: Vec<CurveClass>,
    ) -> Result<Self, CompressionError> {
        let m = classes.len();
        if m > surface.genus as usize {
            return Err(CompressionError::NotEnoughGenus { needed: m, surface });
        }
        let piece = Piece::new(surface.genus - m as u32, 2 * m as u32, surface.boundary);
        let curves = (0..m as u32)
            .map(|i| TracedCurve::glue(ScarSlot::new(0, 2 * i), ScarSlot::new(0, 2 * i + 1)))
            .collect();
        Self::new(surface, TracedMulticurve::new(vec![piece], curves), classes)
    }

    /// No curves at all.
    pub fn empty(surface: Surface) -> Self {
        CutSystem {
            surface,
            trace: TracedMulticurve::uncut(surface),
            classes: Vec::new(),
            curve_names: Vec::new(),
        }
    }

    pub fn with_curve_names(mut self, names: Vec<String>) -> Result<Self, CompressionError> {
        if names.len() != self.classes.len() {
            return Err(CompressionError::NameCount(names.len(), self.classes.len()));
        }
        self.curve_names = names;
        Ok(self)
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn trace(&self) -> &TracedMulticurve {
        &self.trace
    }

    pub fn classes(&self) -> &[CurveClass] {
        &self.classes
    }

    pub fn curve_names(&self) -> &[String] {
        &self.curve_names
    }

    pub fn curve_count(&self) -> usize {
        self.classes.len()
    }

    /// Handleslide acting on the classes; the trace is left as is since
    /// the complement of the slid system has the same surgery outcome.
    pub fn slide(&self, j: usize, l: usize, sign: Sign) -> Result<CutSystem, CompressionError> {
        let classes = handleslide(&self.classes, j, l, sign)?;
        Ok(CutSystem {
            classes,
            ..self.clone()
        })
    }
}

/// Why a cut system does not define a compression body onto the page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutFailure {
    SphereInPage,
    ComponentMismatch,
    ExcessSpheres,
    BoundaryMismatch,
    NotSingleSphere,
}

impl CutFailure {
    pub fn tag(self) -> &'static str {
        match self {
            CutFailure::SphereInPage => "SPHERE_IN_PAGE",
            CutFailure::ComponentMismatch => "COMPONENT_MISMATCH",
            CutFailure::ExcessSpheres => "EXCESS_SPHERES",
            CutFailure::BoundaryMismatch => "BOUNDARY_MISMATCH",
            CutFailure::NotSingleSphere => "NOT_SINGLE_SPHERE",
        }
    }
}

impl fmt::Display for CutFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutVerdict {
    Valid,
    Invalid(CutFailure),
}

impl CutVerdict {
    pub fn is_valid(self) -> bool {
        self == CutVerdict::Valid
    }
}

impl fmt::Display for CutVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutVerdict::Valid => f.write_str("VALID"),
            CutVerdict::Invalid(r) => write!(f, "INVALID {r}"),
        }
    }
}

/// Does surgery along `cs` produce `page` (or a single sphere for the empty
/// page)?
pub fn validate_cut_system(
    cs: &CutSystem,
    page: &SurfaceCollection,
) -> Result<CutVerdict, CompressionError> {
    use CutFailure::*;
    let surgered = surger_all(&cs.trace)?;
    let boundary = u64::from(cs.surface.boundary);
    let verdict = if page.is_empty() {
        if boundary != 0 {
            CutVerdict::Invalid(BoundaryMismatch)
        } else if surgered == SurfaceCollection::single(Surface::SPHERE) {
            CutVerdict::Valid
        } else {
            CutVerdict::Invalid(NotSingleSphere)
        }
    } else if page.has_sphere() {
        CutVerdict::Invalid(SphereInPage)
    } else if boundary != page.total_boundary() {
        CutVerdict::Invalid(BoundaryMismatch)
    } else if surgered == *page {
        CutVerdict::Valid
    } else if surgered.without_spheres() == *page {
        CutVerdict::Invalid(ExcessSpheres)
    } else {
        CutVerdict::Invalid(ComponentMismatch)
    };
    Ok(verdict)
}

/// A Heegaard diagram of a double compression body
/// `#(P x I) # (#^k S1 x S2)`, stabilized `stabilizations` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDiagram {
    pub surface: Surface,
    pub alpha: CutSystem,
    pub beta: CutSystem,
    pub page: SurfaceCollection,
    pub k: u32,
    pub stabilizations: u32,
}

/// Class of the `q`-th boundary circle (0-based) of `surface`.
fn boundary_circle_class(surface: Surface, q: u32) -> CurveClass {
    if q + 1 < surface.boundary {
        CurveClass::basis(surface, BasisElement::D(q + 1)).expect("d index in range")
    } else {
        let terms: Vec<(BasisElement, i64)> = (1..surface.boundary)
            .map(|j| (BasisElement::D(j), -1))
            .collect();
        CurveClass::from_terms(surface, &terms).expect("d indices in range")
    }
}

/// The trace shared by both systems of a standard diagram: page components
/// chained by tubes, with all handles hanging off the first component (a
/// sphere when the page is empty).
fn standard_trace(page: &SurfaceCollection, handles: u32) -> TracedMulticurve {
    let comps: Vec<Surface> = if page.is_empty() {
        vec![Surface::SPHERE]
    } else {
        page.components().to_vec()
    };
    let c = comps.len();
    let mut scars = vec![0u32; c];
    let next_slot = |p: usize, scars: &mut Vec<u32>| {
        let s = ScarSlot::new(p, scars[p]);
        scars[p] += 1;
        s
    };
    let mut curves = Vec::new();
    for j in 0..c.saturating_sub(1) {
        let left = next_slot(j, &mut scars);
        let right = next_slot(j + 1, &mut scars);
        curves.push(TracedCurve::glue(left, right));
    }
    for _ in 0..handles {
        let a = next_slot(0, &mut scars);
        let b = next_slot(0, &mut scars);
        curves.push(TracedCurve::glue(a, b));
    }
    let pieces = comps
        .iter()
        .zip(&scars)
        .map(|(s, &n)| Piece::new(s.genus, n, s.boundary))
        .collect();
    TracedMulticurve::new(pieces, curves)
}

/// The standard diagram of a double compression body over `page` with `k`
/// `S1 x S2` summands and `stabilizations` stabilizations.
///
/// Handle indices on the central surface: `1..=g(P)` belong to the page,
/// the next `k` carry the parallel pairs, the last `stabilizations` carry
/// the dual pairs `(ai, bi)`. Tubes between consecutive page components come
/// first in each system and are boundary-parallel classes.
pub fn standard_double_diagram(
    page: &SurfaceCollection,
    k: u32,
    stabilizations: u32,
) -> Result<DoubleDiagram, CompressionError> {
    if page.has_sphere() {
        return Err(CompressionError::SphereInPage);
    }
    let page_genus = page.total_genus() as u32;
    let surface = Surface::new(
        page_genus + k + stabilizations,
        page.total_boundary() as u32,
    );
    let trace = standard_trace(page, k + stabilizations);

    let mut tubes = Vec::new();
    let mut circles_left = 0u32;
    let comps = page.components();
    for comp in comps.iter().take(comps.len().saturating_sub(1)) {
        let mut class = CurveClass::zero(surface);
        for q in circles_left..circles_left + comp.boundary {
            class = class.add_multiple(&boundary_circle_class(surface, q), 1)?;
        }
        circles_left += comp.boundary;
        tubes.push(class);
    }

    let a = |i: u32| CurveClass::basis(surface, BasisElement::A(i)).expect("handle index in range");
    let b = |i: u32| CurveClass::basis(surface, BasisElement::B(i)).expect("handle index in range");
    let mut alpha = tubes.clone();
    let mut beta = tubes;
    for i in 0..k {
        alpha.push(a(page_genus + 1 + i));
        beta.push(a(page_genus + 1 + i));
    }
    for i in 0..stabilizations {
        let h = page_genus + k + 1 + i;
        alpha.push(a(h));
        beta.push(b(h));
    }
    Ok(DoubleDiagram {
        surface,
        alpha: CutSystem::new(surface, trace.clone(), alpha)?,
        beta: CutSystem::new(surface, trace, beta)?,
        page: page.clone(),
        k,
        stabilizations,
    })
}

/// Expected curve count of each system of a standard diagram: one curve
/// per tube, per `S1 x S2` handle and per stabilization, where the empty page
/// counts as one sphere component.
pub fn standard_curve_count(page: &SurfaceCollection, k: u32, stabilizations: u32) -> usize {
    page.len().max(1) + k as usize - 1 + stabilizations as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardnessFailure {
    CutSystemInvalid,
    SnfNotStandard,
    H1Mismatch,
    GenusLadderViolation,
}

impl StandardnessFailure {
    pub fn tag(self) -> &'static str {
        match self {
            StandardnessFailure::CutSystemInvalid => "CUT_SYSTEM_INVALID",
            StandardnessFailure::SnfNotStandard => "SNF_NOT_STANDARD",
            StandardnessFailure::H1Mismatch => "H1_MISMATCH",
            StandardnessFailure::GenusLadderViolation => "GENUS_LADDER_VIOLATION",
        }
    }
}

impl fmt::Display for StandardnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Outcome of [`homological_standardness`].
///
/// A passing report certifies necessary conditions only. It never claims
/// that the pair is handleslide equivalent to the standard diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardnessReport {
    pub passed: bool,
    pub detected_stabilizations: Option<u64>,
    /// `g(surface) - g(page) - s`, when `s` was detected and this is >= 0.
    pub derived_k: Option<u64>,
    pub failures: Vec<StandardnessFailure>,
    pub alpha: CutVerdict,
    pub beta: CutVerdict,
    pub pairing_snf: Vec<BigInt>,
    pub h1: AbelianGroup,
}

impl StandardnessReport {
    pub const CAVEAT: &'static str = "homological certificate: necessary conditions only";
}

/// Necessary conditions for `(surface; alpha, beta)` to be handleslide
/// equivalent to a standard double diagram over `page`.
pub fn homological_standardness(
    surface: Surface,
    alpha: &CutSystem,
    beta: &CutSystem,
    page: &SurfaceCollection,
) -> Result<StandardnessReport, CompressionError> {
    for cs in [alpha, beta] {
        if cs.surface != surface {
            return Err(SurfaceError::HostMismatch(surface, cs.surface).into());
        }
    }
    let mut failures = Vec::new();
    let va = validate_cut_system(alpha, page)?;
    let vb = validate_cut_system(beta, page)?;
    if !va.is_valid() || !vb.is_valid() {
        failures.push(StandardnessFailure::CutSystemInvalid);
    }

    let pairing = pairing_matrix(&alpha.classes, &beta.classes)?;
    let diag = smith_normal_form(&pairing).diagonal();
    let nonzero: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
    let s = if nonzero.iter().all(|d| d.is_one()) {
        Some(nonzero.len() as u64)
    } else {
        failures.push(StandardnessFailure::SnfNotStandard);
        None
    };

    let all_classes: Vec<CurveClass> = alpha.classes.iter().chain(&beta.classes).cloned().collect();
    let h1 = quotient_homology(surface, &all_classes)?;

    let mut derived_k = None;
    if let Some(s) = s {
        let k = i64::from(surface.genus) - page.total_genus() as i64 - s as i64;
        if k < 0 {
            failures.push(StandardnessFailure::GenusLadderViolation);
        } else {
            derived_k = Some(k as u64);
            let expected = page.h1().direct_sum(&AbelianGroup::free(k as usize));
            if h1 != expected {
                failures.push(StandardnessFailure::H1Mismatch);
            }
        }
    }

    Ok(StandardnessReport {
        passed: failures.is_empty(),
        detected_stabilizations: s,
        derived_k,
        failures,
        alpha: va,
        beta: vb,
        pairing_snf: diag.into_iter().map(|d| d.abs()).collect(),
        h1,
    })
}

/// `classes[j] += sign * classes[l]`.
pub fn handleslide(
    classes: &[CurveClass],
    j: usize,
    l: usize,
    sign: Sign,
) -> Result<Vec<CurveClass>, CompressionError> {
    for index in [j, l] {
        if index >= classes.len() {
            return Err(CompressionError::IndexOutOfRange {
                index,
                count: classes.len(),
            });
        }
    }
    if j == l {
        return Err(CompressionError::SelfSlide(j));
    }
    let mut out = classes.to_vec();
    out[j] = classes[j].add_multiple(&classes[l], sign.as_i64())?;
    Ok(out)
}
