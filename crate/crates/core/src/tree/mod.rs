//! Tree-structured marginal sets: the quantum Chow-Liu learner, recovery
//! of the joint along a Markov tree and the entropy deficit `ΔS`.

mod graph;
mod learn;
mod recover;
mod sample;

pub use graph::{
    chow_liu_tree, prufer_tree, spanning_trees, QuantumTree, WeightedEdgeList, WEIGHT_TIE_TOLERANCE,
};
pub use learn::{
    estimate_on_tree, learn_tree, LearnedTree, TreeEstimate, TreeEstimator, TreeGap, TreeSource,
};
pub use recover::{delta_s, tree_maxent, tree_recover, DeltaS, DeltaTerm, TreeRecovery, TreeStep};
pub use sample::{random_tree, sample_markov_tree, MarkovTreeSample, TreeKind};
