//! Exact counting of list homomorphisms to a fixed target graph on instances
//! of bounded treewidth, together with a toolkit that builds and checks the
//! gadget reductions showing the counting base is optimal.

pub mod analysis;
pub mod checks;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod formats;
pub mod gadgets;
pub mod graph;
pub mod homcount;
pub mod random;
pub mod realization;
pub mod reductions;
pub mod structures;

pub use error::{Error, Result};
pub use graph::Graph;
