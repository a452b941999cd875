//! Density operators, entropic functionals and random ensembles.

mod density;
mod entropy;
mod marginals;
mod sample;

pub use density::DensityOperator;
pub use entropy::{
    conditional_mutual_information, entropy_of, mutual_information, relative_entropy,
    von_neumann_entropy,
};
pub use marginals::{MarginalSet, DEFAULT_OVERLAP_TOLERANCE};
pub use sample::{
    ginibre, haar_unitary, random_qmc_spec, random_simplex, sample_density, sample_qmc, seeded_rng,
    BasisRotation, FactorKind, QmcBlock, QmcSpec, Rng64,
};
