//! Canonical forms, enumeration and counting for every basis family.

pub mod graph;
pub mod laprt;
pub mod leveled;
pub mod paprt;
pub mod tree;

pub use graph::{
    automorphism_order, automorphism_order_colored, canonical_labelling, canonicalize_graph, enumerate_dsgra,
    linear_extension_count, DiGraph,
};
pub use laprt::{enumerate_laprt, validate_laprt, LaNode, LaprtViolation};
pub use leveled::{enumerate_leveled, LeveledGraph, LeveledShape};
pub use paprt::{enumerate_paprt, validate_paprt, Paprt, PaprtViolation};
pub use tree::{coefficient_c, PlanarTree};
