//! Exact spanning-tree counts and the Ferrers bound for bipartite graphs.
//!
//! For a connected bipartite graph with parts of sizes `m` and `n`,
//!
//! ```text
//! τ(G) ≤ (1 / (m·n)) · ∏_v deg(v)
//! ```
//!
//! with equality exactly for Ferrers graphs. This crate computes both sides
//! exactly, along with the matrices and eigenvalue comparisons that explain
//! the gap, and can check every connected graph up to a given size.
//!
//! ```
//! use ferrers::format::parse_graph;
//! use ferrers::verify::verify_graph;
//!
//! let c6 = parse_graph("3 3\n0 1\n1 2\n2 0\n").unwrap();
//! let record = verify_graph(&c6).unwrap();
//! assert_eq!(record.tau.to_string(), "6");
//! assert!(record.inequality_ok && !record.equality);
//! ```
//!
//! Modules, roughly bottom to top: [`graph`] and [`format`], [`linalg`],
//! [`trees`], [`spectral`], [`verify`], [`cli`].

pub mod cli;
pub mod error;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod spectral;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
