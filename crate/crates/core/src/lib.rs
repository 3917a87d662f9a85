//! Finite groupoids, their actions on directed graphs, and the invariants
//! attached to them: crossed-product quotient graphs, intertwiner dimensions
//! of fiber path spaces, self-similar actions and graph K-theory.

pub mod chartab;
pub mod dr;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod ktheory;
pub mod group;
pub mod groupoid;
pub mod linalg;
pub mod oracle;
pub mod quotient;
pub mod random;
pub mod selfsim;

pub use error::{Error, Result, ValidationReport, Violation};
pub use graph::{DirectedGraph, GraphAction};
pub use group::FiniteGroup;
pub use groupoid::FiniteGroupoid;
