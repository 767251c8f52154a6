//! Profiled community search: given a graph whose vertices carry
//! hierarchical label trees, find every maximal community around a query
//! vertex that is a connected k-core and whose members share a maximal
//! common label subtree.
//!
//! ```
//! use pcs::{fixture, query::{run, Algorithm}, CpIndex};
//!
//! let g = fixture::graph();
//! let idx = CpIndex::build(&g);
//! let r = run(Algorithm::AdvP, &g, &idx, fixture::vertex("D"), 2).unwrap();
//! assert_eq!(r.communities.len(), 2);
//! ```

pub mod bench;
pub mod codec;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod index;
pub mod kcore;
pub mod metrics;
pub mod query;
pub mod subtree;
pub mod synth;

pub use error::{PcsError, Result};
pub use graph::{close_under_parents, Csr, GpTree, LabelId, PTree, ProfiledGraph, VertexId};
pub use index::CpIndex;
pub use kcore::{core_decomposition, gkt_direct, k_core_component, ClTree};
pub use query::{Algorithm, Community, Counters, ResultSet};
