//! Exact combinatorics of quivers with potentials.
//!
//! Quiver mutation, potentials up to cyclic equivalence, truncated Jacobian
//! algebras, QP-mutation with reduction, the builders for weighted
//! projective line examples, and Coxeter word quivers.

pub mod constructions;
pub mod coxeter;
pub mod ids;
pub mod iso;
pub mod jacobian;
pub mod mutation_class;
pub mod parse;
pub mod path;
pub mod potential;
pub mod qp_mutation;
pub mod quiver;
pub mod scalar;
pub mod substitution;

pub use ids::{ArrowId, VertexId};
pub use quiver::{Arrow, ExchangeMatrix, Obstruction, Quiver, QuiverError};
pub use scalar::Scalar;
pub use potential::{CycleWord, Potential, Qp};
pub use substitution::Substitution;
