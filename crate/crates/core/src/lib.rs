//! Exact combinatorial checks for multisection diagrams of 4-manifolds.
//!
//! Everything is computed over the integers with arbitrary precision. The
//! checks are homological: a passing diagram satisfies the necessary
//! conditions the algebra can see, which is not a proof that the handlebodies
//! glue up as claimed.

pub mod cli;
pub mod compression;
pub mod curve_map;
pub mod format;
pub mod handle_complex;
pub mod linalg;
pub mod multisection;
pub mod surface;

pub use compression::{
    homological_standardness, standard_double_diagram, validate_cut_system, CutSystem, CutVerdict,
    Sign, StandardnessReport,
};
pub use curve_map::{reconstruct_surface, surger, validate_traced, TracedMulticurve};
pub use format::{parse_diagram_file, serialize_diagram, ParseError, ParseErrorKind};
pub use handle_complex::{build_xn, ChainComplex};
pub use linalg::{cokernel, smith_normal_form, AbelianGroup, IntMatrix, SmithForm};
pub use multisection::{validate_diagram, DiagramReport, MultisectionDiagram};
pub use surface::{intersection_pairing, CurveClass, Surface, SurfaceCollection};
