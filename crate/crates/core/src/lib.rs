//! Composable coresets for k-center and dual clustering in doubling metrics.
//!
//! The crate is organised bottom-up:
//!
//! * [`metric`] holds point storage, distance evaluation with exact work
//!   counting, and deterministic synthetic generators.
//! * [`graph`] builds threshold (disk) graphs and provides maximal independent
//!   sets, graph squaring and connected components.
//! * [`solvers`] contains the sequential k-center algorithms (farthest-first
//!   traversal, parametric pruning, the `O(nk/ε)` pruning variant) and the
//!   exhaustive oracle.
//! * [`coreset`] builds r-nets for dual clustering, k-center coresets and the
//!   radius/size trade-off table.
//! * [`distributed`] runs the composable pipelines on simulated machines and
//!   accounts for rounds and communicated items.

pub mod coreset;
pub mod distributed;
mod error;
pub mod graph;
pub mod metric;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use metric::{MetricSpace, MetricView, PointSet};
