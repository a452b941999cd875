use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "markovrec",
    version,
    about = "Quantum Markov chain checks, Petz recovery, maximum-entropy estimation and Chow-Liu trees"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Trace-distance tolerance on the shared marginal.
    #[arg(long, global = true)]
    pub tol_marginal: Option<f64>,
    /// Tolerance on the normalised commutator of the compatibility test.
    #[arg(long, global = true)]
    pub tol_normality: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Destination of the produced operator file, or of the report.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Append a JSON block to the report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Dual solver stopping tolerance on max |gradient|.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub solver_tolerance: f64,
    #[arg(long, global = true, default_value_t = 10000)]
    pub max_iterations: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether two marginals extend to a quantum Markov chain.
    Check { first: PathBuf, second: PathBuf },
    /// Reconstruct the joint state from two overlapping marginals.
    Recover {
        first: PathBuf,
        second: PathBuf,
        /// Rotation parameter of the Petz map.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = RecoverMethod::Petz)]
        method: RecoverMethod,
    },
    /// Pick the two of three bipartite marginals that best reconstruct the joint.
    Select {
        /// One tripartite joint file or three pair files.
        #[arg(required = true, num_args = 1..=3)]
        files: Vec<PathBuf>,
    },
    /// Learn a Chow-Liu tree, or estimate on a given one.
    Tree {
        /// Joint operator file or tree description.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TreeMethod::Auto)]
        method: TreeMethod,
    },
    /// Compare sequential and joint maximum-entropy updates.
    Diagram {
        first: PathBuf,
        second: PathBuf,
        /// Trace distance below which two updates count as equal.
        #[arg(long, default_value_t = 1e-5)]
        tol_diagram: f64,
    },
    /// Frequency of compatibility failures on sampled joints.
    Counterexample(CounterexampleArgs),
    /// Generate fixture states.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecoverMethod {
    Petz,
    Maxent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeMethod {
    Petz,
    Maxent,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// Hilbert-Schmidt random states.
    Hs,
    /// Random quantum Markov chains.
    Qmc,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub ensemble: Option<Ensemble>,
    /// Dimensions of A, B, C.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Maximum number of blocks in the qmc ensemble.
    #[arg(long)]
    pub blocks: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Hs,
    Qmc,
    MarkovTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeFlavor {
    Classical,
    Quantum,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub kind: SampleKind,
    /// Factor dimensions (hs: one per label; qmc: A, B, C).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,
    /// Rank of the hs sample.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// Number of qubits on the markov tree.
    #[arg(long, default_value_t = 4)]
    pub vertices: usize,
    #[arg(long, value_enum, default_value_t = TreeFlavor::Quantum)]
    pub tree_kind: TreeFlavor,
    /// Also write pair marginals next to the output, as `<stem>_XY.json`.
    #[arg(long)]
    pub marginals: bool,
}
