//! Identifying codes in complementary prisms of cycles.
//!
//! Graph constructions and distance balls live in [`graph`], definitional
//! verification and the hitting-set reduction in [`idcode`], the cycle-prism
//! condition system, construction and exchange moves in [`cycle_prism`], the
//! exact minimum-code search in [`solver`], and the layout-tree class counting
//! in [`cliquewidth`].

pub mod bitset;
pub mod cliquewidth;
pub mod cycle_prism;
pub mod error;
pub mod graph;
pub mod idcode;
pub mod solver;
pub mod textio;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{Graph, PrismIndexing};
