//! Rainbow and k-rainbow paths in properly edge-colored complete graphs.
//!
//! * [`coloring`]: proper colorings of `K_n`, generators and the text format.
//! * [`paths`]: paths, color classes, rotations and maximality certificates.
//! * [`heuristics`]: greedy, rotation-extension maximalization, the k-ladder,
//!   the recursive segment builder and Hamiltonian cycle completion.
//! * [`exact`]: exhaustive oracles for small `n`.
//! * [`latin`]: Latin squares, transversals and the coloring correspondence.
//! * [`cli`]: the `rainbow` command-line tool.

pub mod bounds;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod latin;
pub mod paths;

pub use coloring::{ColorId, ColorMatrix, ColoredGraph};
pub use error::{Error, Result};
pub use exact::SearchLimits;
pub use heuristics::{Method, Move, SolveReport};
pub use latin::{LatinSquare, Transversal};
pub use paths::{MaximalityCertificate, Path, PathColorStats};
