//! Hard-thresholding of positive definite matrices: pattern and level
//! thresholding, exact positive definiteness tests, structural certificates
//! of preservation, explicit counterexamples, and condition analyzers for
//! chordal, tree and path patterns.
//!
//! Vertices and matrix indices are 0-based in the library API. Files and
//! command-line output use 1-based numbering.

pub mod analysis;
pub mod certificates;
pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod threshold;

pub use error::{Error, Result};
pub use graph::UndirectedGraph;
pub use matrix::SymmetricMatrix;
