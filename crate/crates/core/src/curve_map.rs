//! Disjoint multicurves stored by their complement.
//!
//! Cutting a surface along a disjoint multicurve leaves a set of *pieces*.
//! Each piece remembers its genus, its true boundary circles and its *scar*
//! circles (the two copies of every cut curve). A curve is then just a pair
//! of scar slots glued back together, plus an orientation sign:
//! `Positive` means the gluing respects the orientations both pieces already
//! carry, `Negative` means the piece on the second side has to be flipped.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::surface::{Surface, SurfaceCollection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub genus: u32,
    pub scars: u32,
    pub boundary: u32,
}

impl Piece {
    pub const fn new(genus: u32, scars: u32, boundary: u32) -> Self {
        Piece {
            genus,
            scars,
            boundary,
        }
    }

    fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.scars) - i64::from(self.boundary)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScarSlot {
    pub piece: usize,
    pub slot: u32,
}

impl ScarSlot {
    pub const fn new(piece: usize, slot: u32) -> Self {
        ScarSlot { piece, slot }
    }
}

impl fmt::Display for ScarSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.piece, self.slot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn symbol(self) -> char {
        match self {
            Orientation::Positive => '+',
            Orientation::Negative => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TracedCurve {
    pub sides: [ScarSlot; 2],
    pub orient: Orientation,
}

impl TracedCurve {
    pub const fn new(side0: ScarSlot, side1: ScarSlot, orient: Orientation) -> Self {
        TracedCurve {
            sides: [side0, side1],
            orient,
        }
    }

    /// Positive gluing of two slots.
    pub const fn glue(side0: ScarSlot, side1: ScarSlot) -> Self {
        Self::new(side0, side1, Orientation::Positive)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceViolation {
    #[error("trace has no pieces")]
    NoPieces,
    #[error("curve {curve} side {side}: piece {piece} does not exist")]
    PieceOutOfRange {
        curve: usize,
        side: usize,
        piece: usize,
    },
    #[error("curve {curve} side {side}: piece {piece} has no scar slot {slot}")]
    SlotOutOfRange {
        curve: usize,
        side: usize,
        piece: usize,
        slot: u32,
    },
    #[error("scar slot used twice: {0}")]
    SlotUsedTwice(ScarSlot),
    #[error("scar slot {0} is not glued to anything")]
    SlotUnused(ScarSlot),
    #[error(
        "orientation signs are inconsistent around curve {curve} (surface would be non-orientable)"
    )]
    NonOrientable { curve: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("malformed trace: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Malformed(Vec<TraceViolation>),
    #[error("component {component} has an Euler characteristic that gives no integer genus")]
    EulerParity { component: usize },
    #[error("curve index {index} out of range ({count} curves)")]
    CurveOutOfRange { index: usize, count: usize },
}

/// A disjoint multicurve on a surface, encoded by the pieces of its
/// complement and the scar gluings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TracedMulticurve {
    pub pieces: Vec<Piece>,
    pub curves: Vec<TracedCurve>,
}

impl TracedMulticurve {
    pub fn new(pieces: Vec<Piece>, curves: Vec<TracedCurve>) -> Self {
        TracedMulticurve { pieces, curves }
    }

    /// The empty multicurve on `s`.
    pub fn uncut(s: Surface) -> Self {
        TracedMulticurve {
            pieces: vec![Piece::new(s.genus, 0, s.boundary)],
            curves: Vec::new(),
        }
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn validate(&self) -> Vec<TraceViolation> {
        validate_traced(self)
    }

    pub fn is_valid(&self) -> bool {
        validate_traced(self).is_empty()
    }

    fn ensure_valid(&self) -> Result<(), TraceError> {
        let v = validate_traced(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(TraceError::Malformed(v))
        }
    }
}

/// Reports every structural problem of `t`. An empty list means valid.
pub fn validate_traced(t: &TracedMulticurve) -> Vec<TraceViolation> {
    let mut out = Vec::new();
    if t.pieces.is_empty() {
        out.push(TraceViolation::NoPieces);
    }
    let mut used: Vec<Vec<u32>> = t.pieces.iter().map(|p| vec![0; p.scars as usize]).collect();
    let mut in_range = true;
    for (ci, c) in t.curves.iter().enumerate() {
        for (side, s) in c.sides.iter().enumerate() {
            let Some(p) = t.pieces.get(s.piece) else {
                out.push(TraceViolation::PieceOutOfRange {
                    curve: ci,
                    side,
                    piece: s.piece,
                });
                in_range = false;
                continue;
            };
            if s.slot >= p.scars {
                out.push(TraceViolation::SlotOutOfRange {
                    curve: ci,
                    side,
                    piece: s.piece,
                    slot: s.slot,
                });
                in_range = false;
                continue;
            }
            used[s.piece][s.slot as usize] += 1;
        }
    }
    for (pi, slots) in used.iter().enumerate() {
        for (si, &n) in slots.iter().enumerate() {
            let slot = ScarSlot::new(pi, si as u32);
            match n {
                0 => out.push(TraceViolation::SlotUnused(slot)),
                1 => {}
                _ => out.push(TraceViolation::SlotUsedTwice(slot)),
            }
        }
    }
    if in_range {
        if let Some(curve) = orientation_conflict(t) {
            out.push(TraceViolation::NonOrientable { curve });
        }
    }
    out
}

/// Tries to pick a flip bit per piece so that every curve's sign is
/// honoured; returns the first curve that cannot be satisfied.
fn orientation_conflict(t: &TracedMulticurve) -> Option<usize> {
    let n = t.pieces.len();
    let mut adj: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); n];
    for (ci, c) in t.curves.iter().enumerate() {
        let flip = c.orient == Orientation::Negative;
        let (p, q) = (c.sides[0].piece, c.sides[1].piece);
        adj[p].push((q, flip, ci));
        adj[q].push((p, flip, ci));
    }
    let mut flip: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if flip[start].is_some() {
            continue;
        }
        flip[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let fp = flip[p].expect("visited");
            for &(q, f, ci) in &adj[p] {
                let want = fp ^ f;
                match flip[q] {
                    None => {
                        flip[q] = Some(want);
                        queue.push_back(q);
                    }
                    Some(have) if have != want => return Some(ci),
                    Some(_) => {}
                }
            }
        }
    }
    None
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Glues the pieces back along the curves in `keep`, treating every other
/// scar as capped by a disk.
fn glue_components(t: &TracedMulticurve, keep: &[bool]) -> Result<SurfaceCollection, TraceError> {
    let n = t.pieces.len();
    let mut sets = DisjointSets::new(n);
    let mut glued_scars = vec![0i64; n];
    for (ci, c) in t.curves.iter().enumerate() {
        if !keep[ci] {
            continue;
        }
        sets.union(c.sides[0].piece, c.sides[1].piece);
        glued_scars[c.sides[0].piece] += 1;
        glued_scars[c.sides[1].piece] += 1;
    }
    // root -> (euler characteristic, boundary circles)
    let mut acc: Vec<Option<(i64, i64)>> = vec![None; n];
    for (pi, p) in t.pieces.iter().enumerate() {
        let capped = i64::from(p.scars) - glued_scars[pi];
        // gluing a scar to a scar keeps chi; capping a scar adds one
        let chi = p.euler_characteristic() + capped;
        let root = sets.find(pi);
        let e = acc[root].get_or_insert((0, 0));
        e.0 += chi;
        e.1 += i64::from(p.boundary);
    }
    let mut comps = Vec::new();
    for (component, (chi, boundary)) in acc.into_iter().flatten().enumerate() {
        let twice_genus = 2 - chi - boundary;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(TraceError::EulerParity { component });
        }
        comps.push(Surface::new((twice_genus / 2) as u32, boundary as u32));
    }
    Ok(SurfaceCollection::new(comps))
}

/// The surface the trace describes (all curves glued back).
pub fn reconstruct_surface(t: &TracedMulticurve) -> Result<SurfaceCollection, TraceError> {
    t.ensure_valid()?;
    glue_components(t, &vec![true; t.curves.len()])
}

/// Surgery along the curves listed in `which`: each is removed and both of
/// its scars are capped with disks.
pub fn surger(t: &TracedMulticurve, which: &[usize]) -> Result<SurfaceCollection, TraceError> {
    t.ensure_valid()?;
    let mut keep = vec![true; t.curves.len()];
    for &i in which {
        if i >= t.curves.len() {
            return Err(TraceError::CurveOutOfRange {
                index: i,
                count: t.curves.len(),
            });
        }
        keep[i] = false;
    }
    glue_components(t, &keep)
}

/// Surgery along every curve.
pub fn surger_all(t: &TracedMulticurve) -> Result<SurfaceCollection, TraceError> {
    let all: Vec<usize> = (0..t.curves.len()).collect();
    surger(t, &all)
}

/// The cut-open surface: each piece with its scars counted as boundary.
pub fn cut_pieces(t: &TracedMulticurve) -> Result<SurfaceCollection, TraceError> {
    t.ensure_valid()?;
    Ok(SurfaceCollection::new(
        t.pieces
            .iter()
            .map(|p| Surface::new(p.genus, p.scars + p.boundary))
            .collect(),
    ))
}
