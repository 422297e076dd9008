//! Multisection diagrams `(Sigma; alpha_1, ..., alpha_n)` of compact
//! 4-manifolds, their validation and the invariants readable from them.
//!
//! Sector `X_i` is bounded by the compression bodies of two cyclically
//! consecutive systems; the report lists pairs as `(alpha_i, alpha_{i+1})`
//! for `i = 1..n`, the last pair wrapping around.
//!
//! The smoothness condition on corners and strata has no diagram-level
//! content and is implied by the construction; it is not checked.
//!
//! `H_1(X)` is computed as `H_1(Sigma) / <all curves>`. That the central
//! surface carries all of `H_1(X)` for every multisection is standard
//! trisection lore rather than something this crate proves.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::compression::{
    homological_standardness, standard_double_diagram, validate_cut_system, CompressionError,
    CutFailure, CutSystem, CutVerdict, Sign, StandardnessFailure, StandardnessReport,
};
use crate::linalg::AbelianGroup;
use crate::surface::{quotient_homology, BasisElement, CurveClass, Surface, SurfaceCollection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultisectionError {
    #[error("a multisection needs at least 2 systems, got {0}")]
    TooFewSystems(usize),
    #[error("system {index} lives on {found}, diagram surface is {expected}")]
    SurfaceMismatch {
        index: usize,
        expected: Surface,
        found: Surface,
    },
    #[error("surface has {surface} boundary circles, page has {page}")]
    BoundaryCount { surface: u64, page: u64 },
    #[error("suture must be a bijection onto {0} page boundary circles")]
    BadSuture(usize),
    #[error("{0} names for {1} systems")]
    NameCount(usize, usize),
    #[error("duplicate system name {0:?}")]
    DuplicateName(String),
    #[error("system index {index} out of range ({count} systems)")]
    SystemOutOfRange { index: usize, count: usize },
    #[error("diagram does not validate: {0}")]
    InvalidDiagram(String),
    #[error("unrealizable request: {0}")]
    Unrealizable(String),
    #[error(transparent)]
    Compression(#[from] CompressionError),
}

/// `(Sigma; alpha_1, ..., alpha_n)` together with the page `P` and the
/// suture matching boundary circles of `Sigma` with those of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisectionDiagram {
    surface: Surface,
    systems: Vec<CutSystem>,
    names: Vec<String>,
    page: SurfaceCollection,
    suture: Vec<usize>,
}

impl MultisectionDiagram {
    /// `suture[i]` is the page boundary circle glued to boundary circle `i`
    /// of the surface.
    pub fn new(
        surface: Surface,
        systems: Vec<CutSystem>,
        page: SurfaceCollection,
        suture: Vec<usize>,
    ) -> Result<Self, MultisectionError> {
        if systems.len() < 2 {
            return Err(MultisectionError::TooFewSystems(systems.len()));
        }
        for (index, cs) in systems.iter().enumerate() {
            if cs.surface() != surface {
                return Err(MultisectionError::SurfaceMismatch {
                    index,
                    expected: surface,
                    found: cs.surface(),
                });
            }
        }
        let b = u64::from(surface.boundary);
        if b != page.total_boundary() {
            return Err(MultisectionError::BoundaryCount {
                surface: b,
                page: page.total_boundary(),
            });
        }
        let mut seen = vec![false; suture.len()];
        let bijective = suture.len() as u64 == b
            && suture
                .iter()
                .all(|&t| t < seen.len() && !std::mem::replace(&mut seen[t], true));
        if !bijective {
            return Err(MultisectionError::BadSuture(b as usize));
        }
        let names = (1..=systems.len()).map(|i| format!("alpha{i}")).collect();
        Ok(MultisectionDiagram {
            surface,
            systems,
            names,
            page,
            suture,
        })
    }

    /// Same as [`new`](Self::new) with the identity suture.
    pub fn with_identity_suture(
        surface: Surface,
        systems: Vec<CutSystem>,
        page: SurfaceCollection,
    ) -> Result<Self, MultisectionError> {
        let suture = (0..surface.boundary as usize).collect();
        Self::new(surface, systems, page, suture)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, MultisectionError> {
        if names.len() != self.systems.len() {
            return Err(MultisectionError::NameCount(
                names.len(),
                self.systems.len(),
            ));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(MultisectionError::DuplicateName(dup.clone()));
        }
        self.names = names;
        Ok(self)
    }

    /// The same curve data over a different page.
    pub fn with_page(&self, page: SurfaceCollection) -> Result<Self, MultisectionError> {
        let suture = (0..self.surface.boundary as usize).collect();
        let d = Self::new(self.surface, self.systems.clone(), page, suture)?;
        d.with_names(self.names.clone())
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn systems(&self) -> &[CutSystem] {
        &self.systems
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn page(&self) -> &SurfaceCollection {
        &self.page
    }

    pub fn suture(&self) -> &[usize] {
        &self.suture
    }

    pub fn sector_count(&self) -> usize {
        self.systems.len()
    }

    /// Handleslide of curve `j` over curve `l` inside one system.
    pub fn slide(
        &self,
        system: usize,
        j: usize,
        l: usize,
        sign: Sign,
    ) -> Result<Self, MultisectionError> {
        let count = self.systems.len();
        let cs = self
            .systems
            .get(system)
            .ok_or(MultisectionError::SystemOutOfRange {
                index: system,
                count,
            })?;
        let mut out = self.clone();
        out.systems[system] = cs.slide(j, l, sign)?;
        Ok(out)
    }

    /// Cyclic relabelling `alpha_i -> alpha_{i+by}`.
    pub fn rotated(&self, by: usize) -> Self {
        let mut out = self.clone();
        let n = out.systems.len();
        out.systems.rotate_left(by % n);
        out.names.rotate_left(by % n);
        out
    }

    fn all_classes(&self) -> Vec<CurveClass> {
        self.systems
            .iter()
            .flat_map(|cs| cs.classes().iter().cloned())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramFailure {
    SphereInPage,
    CutSystem {
        system: usize,
        reason: CutFailure,
    },
    Pair {
        first: usize,
        second: usize,
        reasons: Vec<StandardnessFailure>,
    },
}

impl DiagramFailure {
    pub fn tag(&self) -> &'static str {
        match self {
            DiagramFailure::SphereInPage => "SPHERE_IN_PAGE",
            DiagramFailure::CutSystem { .. } => "CUT_SYSTEM_INVALID",
            DiagramFailure::Pair { .. } => "PAIR_NOT_STANDARD",
        }
    }
}

impl fmt::Display for DiagramFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramFailure::SphereInPage => write!(f, "SPHERE_IN_PAGE page contains a 2-sphere"),
            DiagramFailure::CutSystem { system, reason } => {
                write!(f, "CUT_SYSTEM_INVALID system {} {reason}", system + 1)
            }
            DiagramFailure::Pair {
                first,
                second,
                reasons,
            } => {
                let tags: Vec<&str> = reasons.iter().map(|r| r.tag()).collect();
                write!(
                    f,
                    "PAIR_NOT_STANDARD ({},{}) {}",
                    first + 1,
                    second + 1,
                    tags.join(",")
                )
            }
        }
    }
}

/// Result of [`validate_diagram`]. Sub-results are empty when the page
/// check failed, since nothing else runs in that case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramReport {
    pub passed: bool,
    pub failures: Vec<DiagramFailure>,
    pub per_system: Vec<CutVerdict>,
    /// Entry `i` certifies the pair `(alpha_i, alpha_{i+1 mod n})`.
    pub per_pair: Vec<StandardnessReport>,
    /// 4-dimensional 1-handle count of each sector; absent when its pair
    /// failed.
    pub k: Vec<Option<u64>>,
    pub s: Vec<Option<u64>>,
    pub euler_characteristic: Option<i64>,
    pub h1: Option<AbelianGroup>,
}

/// Checks a diagram against the multisection conditions that have diagram
/// content: sphere-free page, every system a cut system for the page, every
/// consecutive pair homologically standard.
pub fn validate_diagram(d: &MultisectionDiagram) -> DiagramReport {
    if d.page.has_sphere() {
        return DiagramReport {
            passed: false,
            failures: vec![DiagramFailure::SphereInPage],
            per_system: Vec::new(),
            per_pair: Vec::new(),
            k: Vec::new(),
            s: Vec::new(),
            euler_characteristic: None,
            h1: None,
        };
    }
    let mut failures = Vec::new();
    let per_system: Vec<CutVerdict> = d
        .systems
        .iter()
        .map(|cs| validate_cut_system(cs, &d.page).expect("cut systems are well formed"))
        .collect();
    for (system, v) in per_system.iter().enumerate() {
        if let CutVerdict::Invalid(reason) = *v {
            failures.push(DiagramFailure::CutSystem { system, reason });
        }
    }

    let n = d.systems.len();
    let pair_count = if n == 2 { 1 } else { n };
    let mut per_pair: Vec<StandardnessReport> = (0..pair_count)
        .map(|i| {
            homological_standardness(d.surface, &d.systems[i], &d.systems[(i + 1) % n], &d.page)
                .expect("systems share the diagram surface")
        })
        .collect();
    if n == 2 {
        per_pair.push(per_pair[0].clone());
    }
    for (i, r) in per_pair.iter().enumerate().take(pair_count) {
        if !r.passed {
            failures.push(DiagramFailure::Pair {
                first: i,
                second: (i + 1) % n,
                reasons: r.failures.clone(),
            });
        }
    }
    let k: Vec<Option<u64>> = per_pair
        .iter()
        .map(|r| if r.passed { r.derived_k } else { None })
        .collect();
    let s = per_pair.iter().map(|r| r.detected_stabilizations).collect();

    let passed = failures.is_empty();
    let (euler_characteristic, h1) = if passed {
        let ks: Vec<u64> = k.iter().map(|x| x.expect("passing pairs have k")).collect();
        (Some(euler_from_sectors(d, &ks)), Some(h1_of(d)))
    } else {
        (None, None)
    };
    DiagramReport {
        passed,
        failures,
        per_system,
        per_pair,
        k,
        s,
        euler_characteristic,
        h1,
    }
}

/// `sum chi(X_i) - sum chi(C_i) + chi(Sigma)` with `chi(X_i) = chi(P) - k_i`
/// and `chi(C_i) = chi(Sigma) + m_i - [P empty]`, reading `chi(P)` as 1 for
/// the empty page.
fn euler_from_sectors(d: &MultisectionDiagram, k: &[u64]) -> i64 {
    let chi_sigma = d.surface.euler_characteristic();
    let (chi_page, capped) = if d.page.is_empty() {
        (1, 1)
    } else {
        (d.page.euler_characteristic(), 0)
    };
    let sectors: i64 = k.iter().map(|&ki| chi_page - ki as i64).sum();
    let bodies: i64 = d
        .systems
        .iter()
        .map(|cs| chi_sigma + cs.curve_count() as i64 - capped)
        .sum();
    sectors - bodies + chi_sigma
}

fn h1_of(d: &MultisectionDiagram) -> AbelianGroup {
    quotient_homology(d.surface, &d.all_classes()).expect("classes hosted on the diagram surface")
}

fn require_valid(d: &MultisectionDiagram) -> Result<DiagramReport, MultisectionError> {
    let r = validate_diagram(d);
    if r.passed {
        Ok(r)
    } else {
        let why: Vec<String> = r.failures.iter().map(ToString::to_string).collect();
        Err(MultisectionError::InvalidDiagram(why.join("; ")))
    }
}

pub fn euler_characteristic_of_x(d: &MultisectionDiagram) -> Result<i64, MultisectionError> {
    let r = require_valid(d)?;
    Ok(r.euler_characteristic.expect("valid diagrams carry chi"))
}

pub fn first_homology_of_x(d: &MultisectionDiagram) -> Result<AbelianGroup, MultisectionError> {
    require_valid(d)?;
    Ok(h1_of(d))
}

/// An `n`-sector diagram whose systems are all the same standard cut
/// system, so every sector has the same `k`.
pub fn build_standard_multisection(
    page: &SurfaceCollection,
    k: &[u32],
    n: usize,
) -> Result<MultisectionDiagram, MultisectionError> {
    if n < 2 {
        return Err(MultisectionError::TooFewSystems(n));
    }
    if k.len() != n {
        return Err(MultisectionError::Unrealizable(format!(
            "{} sector values for {n} sectors",
            k.len()
        )));
    }
    if k.iter().any(|&x| x != k[0]) {
        return Err(MultisectionError::Unrealizable(format!(
            "sector values {k:?} differ; only uniform k is generated"
        )));
    }
    if page.has_sphere() {
        return Err(MultisectionError::Unrealizable(
            "page contains a sphere".into(),
        ));
    }
    let dd = standard_double_diagram(page, k[0], 0)?;
    let systems = vec![dd.alpha.clone(); n];
    let d = MultisectionDiagram::with_identity_suture(dd.surface, systems, page.clone())?;
    require_valid(&d)?;
    Ok(d)
}

/// The torus with three parallel copies of `a` as its systems, over the
/// page a punctured solid torus would need: a single 2-sphere.
///
/// Returned for rejection only; the second component is that page.
pub fn xn_diagram() -> (MultisectionDiagram, SurfaceCollection) {
    let torus = Surface::TORUS;
    let a = CurveClass::basis(torus, BasisElement::A(1)).expect("torus has a1");
    let cs = CutSystem::nonseparating(torus, vec![a]).expect("genus 1 holds one curve");
    let page = SurfaceCollection::single(Surface::SPHERE);
    let d = MultisectionDiagram::with_identity_suture(torus, vec![cs; 3], page.clone())
        .expect("structurally well formed");
    (d, page)
}
