//! Reconstruction of multipartite density operators from tree-structured
//! sets of bipartite marginals.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: subsystem layouts, partial traces, embeddings and Hermitian
//!   matrix functions on dense complex matrices.
//! - [`states`]: density operators, entropic functionals and random ensembles
//!   (Hilbert-Schmidt states and block-structured quantum Markov chains).
//! - [`maxent`]: maximum von Neumann entropy estimation under expectation
//!   constraints, quantum Bayesian updating and the update-order diagram test.
//! - [`recovery`]: Petz recovery, the algebraic compatibility test for quantum
//!   Markov chains and best-pair selection for tripartite systems.
//! - [`tree`]: quantum trees, the quantum Chow-Liu learner, iterated Petz
//!   recovery along trees and the entropy-gap decomposition.
//!
//! All entropies are in nats. Operators are dense, row-major in their external
//! representation, with the first subsystem label as the most significant
//! index.

pub mod error;
pub mod maxent;
pub mod recovery;
pub mod states;
pub mod tensor;
pub mod tree;

pub use error::{Error, Result};
pub use maxent::{ConstraintSet, MaxEntConfig, MaxEntSolution, OperatorBasis};
pub use recovery::{CompatReport, PairSelection, Tolerances};
pub use states::{DensityOperator, MarginalSet, QmcSpec};
pub use tensor::{ComplexMatrix, HermitianEig, MatrixFunction, SubsystemLayout, C64};
pub use tree::{QuantumTree, WeightedEdgeList};
