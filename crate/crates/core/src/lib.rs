//! Spectral analysis of graph modularity.
//!
//! The crate builds the modularity matrix `M = A - d dᵀ / vol G` together with
//! the classic and "average graph" Laplacians, computes their spectra with
//! residual certificates, enumerates signed nodal domains of eigenvectors and
//! checks the community-detection inequalities that relate `M`'s spectrum to
//! the best achievable modularity. Small graphs can be solved exactly by the
//! brute-force [`oracle`], which serves as ground truth for every bound.
//!
//! ```
//! use modspec::graph::parse_graph;
//! use modspec::spectral::algebraic_modularity;
//!
//! let g = parse_graph("1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4").unwrap();
//! let m = algebraic_modularity(&g).unwrap();
//! assert!(m.value > 0.0);
//! ```

pub mod bounds;
pub mod error;
pub mod generators;
pub mod graph;
pub mod modularity;
pub mod nodal;
pub mod oracle;
pub mod spectral;
pub mod tol;

pub use error::{Error, Result};
pub use graph::{Graph, Partition, VertexSet};
