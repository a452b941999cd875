use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use markovrec::maxent::{constraints_from_marginals, diagram_commutes, solve_maxent, MaxEntConfig};
use markovrec::recovery::{
    check_qmc_compatibility, petz_recover, select_best_pair, Candidate, EstimatorKind,
    SelectionCriterion, Tolerances, TriangleMarginals,
};
use markovrec::states::{random_qmc_spec, sample_density, sample_qmc, seeded_rng};
use markovrec::tensor::SubsystemLayout;
use markovrec::tree::{
    delta_s, estimate_on_tree, learn_tree, sample_markov_tree, DeltaS, TreeEstimate, TreeEstimator,
    TreeKind, TreeSource,
};
use markovrec::{CompatReport, DensityOperator, QuantumTree};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cli::{
    CounterexampleArgs, Ensemble, GlobalArgs, RecoverMethod, SampleArgs, SampleKind, TreeFlavor,
    TreeMethod,
};
use crate::error::{CliError, CliResult};
use crate::format::{find_key_line, OperatorFile};
use crate::report::Report;

/// Result of one command: the report, the exit status and possibly an
/// operator to write.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
    pub operator: Option<OperatorFile>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self {
            report,
            code: 0,
            operator: None,
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct Context {
    pub tolerances: Tolerances,
    pub maxent: MaxEntConfig,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl Context {
    pub fn from_args(g: &GlobalArgs) -> CliResult<Self> {
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            marginal: positive(
                "--tol-marginal",
                g.tol_marginal.unwrap_or(defaults.marginal),
            )?,
            normality: positive(
                "--tol-normality",
                g.tol_normality.unwrap_or(defaults.normality),
            )?,
        };
        if g.max_iterations == 0 {
            return Err(CliError::Usage("--max-iterations must be positive".into()));
        }
        let maxent = MaxEntConfig {
            tolerance: positive("--solver-tolerance", g.solver_tolerance)?,
            max_iterations: g.max_iterations,
            ..Default::default()
        };
        Ok(Self {
            tolerances,
            maxent,
            seed: g.seed,
            output: g.output.clone(),
        })
    }
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!(
            "{name} must be a positive number, got {x}"
        )))
    }
}

fn push_compat(r: &mut Report, c: &CompatReport) {
    r.push("verdict", c.verdict)
        .push(
            "marginal_consistency_residual",
            c.marginal_consistency_residual,
        )
        .push("normality_residual", c.normality_residual)
        .push("self_adjoint_residual", c.self_adjoint_residual)
        .push("rank_deficient", c.rank_deficient);
    if c.rank_deficient {
        r.warn("a marginal is singular; inverse powers were taken on its support");
    }
}

fn shared_label(a: &DensityOperator, b: &DensityOperator) -> String {
    a.layout().intersection(b.layout()).join(",")
}

pub fn check(ctx: &Context, first: &Path, second: &Path) -> CliResult<Outcome> {
    let (ab, bc) = (
        OperatorFile::read(first)?.state,
        OperatorFile::read(second)?.state,
    );
    let c = check_qmc_compatibility(&ab, &bc, &ctx.tolerances)?;
    let mut r = Report::new();
    r.push("shared", shared_label(&ab, &bc));
    push_compat(&mut r, &c);
    Ok(Outcome {
        code: if c.verdict { 0 } else { 1 },
        report: r,
        operator: None,
    })
}

pub fn recover(
    ctx: &Context,
    first: &Path,
    second: &Path,
    t: f64,
    method: RecoverMethod,
) -> CliResult<Outcome> {
    let (ab, bc) = (
        OperatorFile::read(first)?.state,
        OperatorFile::read(second)?.state,
    );
    if !t.is_finite() {
        return Err(CliError::Usage(format!("--t must be finite, got {t}")));
    }
    let mut r = Report::new();
    let file = match method {
        RecoverMethod::Petz => {
            let petz = petz_recover(&ab, &bc, t, &ctx.tolerances)?;
            let c = check_qmc_compatibility(&ab, &bc, &ctx.tolerances)?;
            r.push("method", "petz")
                .push("t", t)
                .push("raw_trace", petz.raw_trace);
            push_compat(&mut r, &c);
            if !c.verdict {
                r.warn(
                    "the pair fails the compatibility check; the output is not an exact extension",
                );
            }
            OperatorFile::new(petz.state)
                .with_metadata("method", "petz")
                .with_metadata("t", t)
                .with_metadata("raw_trace", petz.raw_trace)
        }
        RecoverMethod::Maxent => {
            let parent = ab.layout().union(bc.layout())?;
            let constraints = constraints_from_marginals(&parent, &[&ab, &bc])?;
            let s = solve_maxent(&constraints, &parent, &ctx.maxent)?;
            r.push("method", "maxent")
                .push("residual", s.residual)
                .push("iterations", s.iterations)
                .push("converged", s.converged)
                .push("log_partition", s.log_partition);
            OperatorFile::new(s.state)
                .with_metadata("method", "maxent")
                .with_metadata("residual", s.residual)
                .with_metadata("iterations", s.iterations)
                .with_metadata("converged", s.converged)
        }
    };
    r.push("labels", file.state.labels().to_vec());
    Ok(Outcome {
        report: r,
        code: 0,
        operator: Some(file),
    })
}

/// Orders the three pair files as `XY, YZ, XZ`, with labels taken in
/// order of first appearance.
fn triangle_from_pairs(files: &[PathBuf]) -> CliResult<TriangleMarginals> {
    let pairs = files
        .iter()
        .map(|p| OperatorFile::read(p).map(|f| f.state))
        .collect::<CliResult<Vec<_>>>()?;
    let mut labels: Vec<(String, usize)> = Vec::new();
    for (p, path) in pairs.iter().zip(files) {
        if p.layout().len() != 2 {
            return Err(CliError::input(
                path.display().to_string(),
                None,
                format!("{} is not a bipartite layout", p.layout()),
            ));
        }
        for (l, d) in p.labels().iter().zip(p.layout().dims()) {
            if !labels.iter().any(|(m, _)| m == l) {
                labels.push((l.clone(), *d));
            }
        }
    }
    if labels.len() != 3 {
        return Err(CliError::Usage(format!(
            "pair files must cover exactly three labels, found {}",
            labels.len()
        )));
    }
    let parent = SubsystemLayout::new(
        labels.iter().map(|(l, _)| l.clone()),
        labels.iter().map(|(_, d)| *d),
    )?;
    let find = |a: usize, b: usize| -> CliResult<DensityOperator> {
        let (x, y) = (&labels[a].0, &labels[b].0);
        let p = pairs
            .iter()
            .find(|p| p.layout().contains(x) && p.layout().contains(y))
            .ok_or_else(|| CliError::Usage(format!("no pair file covers {x} and {y}")))?;
        Ok(p.reordered(&parent.sub_layout(&[x, y])?)?)
    };
    Ok(TriangleMarginals::new(
        find(0, 1)?,
        find(1, 2)?,
        find(0, 2)?,
    )?)
}

pub fn select(ctx: &Context, files: &[PathBuf]) -> CliResult<Outcome> {
    let tri = match files.len() {
        1 => TriangleMarginals::from_joint(&OperatorFile::read(&files[0])?.state)?,
        3 => triangle_from_pairs(files)?,
        n => {
            return Err(CliError::Usage(format!(
                "select takes one joint file or three pair files, got {n}"
            )))
        }
    };
    let sel = select_best_pair(&tri, &ctx.tolerances, &ctx.maxent)?;
    let mut r = Report::new();
    let criterion = match sel.criterion {
        SelectionCriterion::MutualInformation => "mutual_information",
        SelectionCriterion::MinEntropy => {
            r.warn("not every pair passes the compatibility check; fell back to minimum-entropy selection");
            "min_entropy"
        }
    };
    let meaning = match sel.criterion {
        SelectionCriterion::MutualInformation => "kept_mutual_information_sum",
        SelectionCriterion::MinEntropy => "estimator_entropy",
    };
    r.push("criterion", criterion)
        .push("score", meaning)
        .push("discarded_pair", sel.discarded_pair.clone())
        .push("center", sel.center.clone());
    for (c, s) in Candidate::ALL.iter().zip(sel.scores) {
        r.push(
            format!("score_drop_{}", c.discarded_pair(tri.labels())),
            s.map_or(Value::Null, Value::from),
        );
    }
    let file = OperatorFile::new(sel.estimator.clone())
        .with_metadata("discarded_pair", sel.discarded_pair)
        .with_metadata("criterion", criterion);
    Ok(Outcome {
        report: r,
        code: 0,
        operator: Some(file),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDescription {
    #[serde(default)]
    edges: Option<Vec<[String; 2]>>,
    marginals: Vec<PathBuf>,
}

fn tree_method(m: TreeMethod) -> TreeEstimator {
    match m {
        TreeMethod::Petz => TreeEstimator::Petz,
        TreeMethod::Maxent => TreeEstimator::MaxEnt,
        TreeMethod::Auto => TreeEstimator::Auto,
    }
}

fn push_estimate(r: &mut Report, e: &TreeEstimate) {
    r.push(
        "estimator",
        if e.kind == EstimatorKind::Petz {
            "petz"
        } else {
            "maxent"
        },
    );
    if let Some(f) = &e.petz_failure {
        r.push("petz_failure", f.clone());
        r.warn(format!(
            "Petz recovery failed, using the maximum-entropy estimator: {f}"
        ));
    }
}

fn push_delta(r: &mut Report, ds: &DeltaS) {
    r.push("delta_s", ds.total)
        .push("delta_s_term_sum", ds.term_sum);
    for t in &ds.terms {
        r.push(format!("delta_term_{}_{}", t.leaf, t.anchor), t.cmi);
    }
}

fn edge_names(tree: &QuantumTree) -> Vec<String> {
    tree.edges()
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect()
}

pub fn tree(ctx: &Context, input: &Path, method: TreeMethod) -> CliResult<Outcome> {
    let origin = input.display().to_string();
    let text = std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(&origin, Some(e.line()), e.to_string()))?;
    let method = tree_method(method);
    let mut r = Report::new();
    if value.get("matrix").is_some() {
        let joint = OperatorFile::parse(&text, &origin)?.state;
        let learned = learn_tree(
            &TreeSource::Joint(joint),
            method,
            &ctx.tolerances,
            &ctx.maxent,
        )?;
        r.push("source", "joint")
            .push("edges", edge_names(&learned.tree));
        let labels = learned.tree.layout().labels();
        for &(i, j) in learned.tree.edge_indices() {
            r.push(
                format!("mi_{}-{}", labels[i], labels[j]),
                learned.weights.weight(i, j),
            );
        }
        push_estimate(&mut r, &learned.estimate);
        push_delta(&mut r, &learned.delta_s);
        if let Some(g) = &learned.gap {
            r.push("relative_entropy", g.relative_entropy)
                .push("gap_mutual_information_sum", g.mutual_information_sum)
                .push("gap_delta_s", g.delta_s)
                .push("gap_vertex_entropy_sum", g.vertex_entropy_sum)
                .push("gap_joint_entropy", g.joint_entropy)
                .push("gap_total", g.total);
        }
        return Ok(Outcome {
            report: r,
            code: 0,
            operator: Some(OperatorFile::new(learned.estimate.state)),
        });
    }

    let desc: TreeDescription = serde_json::from_str(&text)
        .map_err(|e| CliError::input(&origin, Some(e.line()), e.to_string()))?;
    let base = input.parent().unwrap_or(Path::new("."));
    let marginals = desc
        .marginals
        .iter()
        .map(|p| OperatorFile::read(&base.join(p)).map(|f| f.state))
        .collect::<CliResult<Vec<_>>>()?;
    let mut labels: Vec<(String, usize)> = Vec::new();
    for m in &marginals {
        for (l, d) in m.labels().iter().zip(m.layout().dims()) {
            if !labels.iter().any(|(x, _)| x == l) {
                labels.push((l.clone(), *d));
            }
        }
    }
    let layout = SubsystemLayout::new(
        labels.iter().map(|(l, _)| l.clone()),
        labels.iter().map(|(_, d)| *d),
    )
    .map_err(|e| CliError::input(&origin, find_key_line(&text, "marginals"), e.to_string()))?;
    let n = layout.len();
    let on_tree = match &desc.edges {
        Some(edges) => {
            let mut chosen = Vec::with_capacity(edges.len());
            for [a, b] in edges {
                let m = marginals
                    .iter()
                    .find(|m| {
                        m.layout().len() == 2 && m.layout().contains(a) && m.layout().contains(b)
                    })
                    .ok_or_else(|| {
                        CliError::input(
                            &origin,
                            find_key_line(&text, "edges"),
                            format!("no marginal for edge {a}-{b}"),
                        )
                    })?;
                chosen.push(m.clone());
            }
            Some(chosen)
        }
        None if marginals.len() == n * (n - 1) / 2 && n > 2 => None,
        None => Some(marginals.clone()),
    };
    match on_tree {
        None => {
            let learned = learn_tree(
                &TreeSource::Pairs {
                    layout,
                    pairs: marginals,
                },
                method,
                &ctx.tolerances,
                &ctx.maxent,
            )?;
            r.push("source", "pairs")
                .push("edges", edge_names(&learned.tree));
            let labels = learned.tree.layout().labels();
            for &(i, j) in learned.tree.edge_indices() {
                r.push(
                    format!("mi_{}-{}", labels[i], labels[j]),
                    learned.weights.weight(i, j),
                );
            }
            push_estimate(&mut r, &learned.estimate);
            push_delta(&mut r, &learned.delta_s);
            Ok(Outcome {
                report: r,
                code: 0,
                operator: Some(OperatorFile::new(learned.estimate.state)),
            })
        }
        Some(edge_marginals) => {
            let tree = QuantumTree::new(layout, edge_marginals)?;
            let estimate = estimate_on_tree(&tree, method, &ctx.tolerances, &ctx.maxent)?;
            let ds = delta_s(&tree, &estimate.state)?;
            r.push("source", "tree").push("edges", edge_names(&tree));
            let labels = tree.layout().labels();
            for &(i, j) in tree.edge_indices() {
                let m = tree.edge_marginal(i, j).expect("tree edge");
                let mi = markovrec::states::mutual_information(m, &[&labels[i]], &[&labels[j]])?;
                r.push(format!("mi_{}-{}", labels[i], labels[j]), mi);
            }
            push_estimate(&mut r, &estimate);
            push_delta(&mut r, &ds);
            Ok(Outcome {
                report: r,
                code: 0,
                operator: Some(OperatorFile::new(estimate.state)),
            })
        }
    }
}

pub fn diagram(ctx: &Context, first: &Path, second: &Path, tol: f64) -> CliResult<Outcome> {
    let tol = positive("--tol-diagram", tol)?;
    let (ab, bc) = (
        OperatorFile::read(first)?.state,
        OperatorFile::read(second)?.state,
    );
    let d = diagram_commutes(&ab, &bc, tol, &ctx.maxent)?;
    let mut r = Report::new();
    r.push("sigma_varrho_distance", d.sigma_varrho)
        .push("sigma_joint_distance", d.sigma_joint)
        .push("varrho_joint_distance", d.varrho_joint)
        .push("max_distance", d.max_distance())
        .push("commutes", d.commutes);
    Ok(Outcome {
        code: if d.commutes { 0 } else { 1 },
        report: r,
        operator: None,
    })
}

/// Parameters of a sampling experiment, from a JSON file and/or flags.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub sample_count: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default = "default_ensemble")]
    pub ensemble: Ensemble,
    #[serde(default = "default_blocks")]
    pub blocks: usize,
}

fn default_samples() -> usize {
    100
}
fn default_dims() -> Vec<usize> {
    vec![2, 2, 2]
}
fn default_ensemble() -> Ensemble {
    Ensemble::Hs
}
fn default_blocks() -> usize {
    2
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sample_count: default_samples(),
            dims: default_dims(),
            tolerances: BTreeMap::new(),
            output_path: None,
            ensemble: default_ensemble(),
            blocks: default_blocks(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(path.display().to_string(), Some(e.line()), e.to_string()))
    }

    /// Tolerances after applying the `marginal` and `normality` overrides.
    pub fn tolerances(&self, base: Tolerances) -> CliResult<Tolerances> {
        let mut t = base;
        for (k, v) in &self.tolerances {
            let v = positive(&format!("tolerance `{k}`"), *v)?;
            match k.as_str() {
                "marginal" => t.marginal = v,
                "normality" => t.normality = v,
                other => return Err(CliError::Usage(format!("unknown tolerance `{other}`"))),
            }
        }
        Ok(t)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.dims.len() != 3 || self.dims.contains(&0) {
            return Err(CliError::Usage(format!(
                "dims must be three positive integers, got {:?}",
                self.dims
            )));
        }
        if self.blocks == 0 {
            return Err(CliError::Usage("blocks must be positive".into()));
        }
        Ok(())
    }
}

pub fn counterexample(ctx: &Context, args: &CounterexampleArgs) -> CliResult<Outcome> {
    let mut cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = ctx.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.samples {
        cfg.sample_count = n;
    }
    if let Some(e) = args.ensemble {
        cfg.ensemble = e;
    }
    if let Some(d) = &args.dims {
        cfg.dims = d.clone();
    }
    if let Some(b) = args.blocks {
        cfg.blocks = b;
    }
    if ctx.output.is_some() {
        cfg.output_path = ctx.output.clone();
    }
    cfg.validate()?;
    let tol = cfg.tolerances(ctx.tolerances)?;
    let layout = SubsystemLayout::new(["A", "B", "C"], cfg.dims.clone())?;
    let mut failures = 0usize;
    let mut first_failure: Option<u64> = None;
    let mut per_sample = Vec::with_capacity(cfg.sample_count);
    for i in 0..cfg.sample_count {
        let seed = cfg.seed.wrapping_add(i as u64);
        let mut rng = seeded_rng(seed);
        let rho = match cfg.ensemble {
            Ensemble::Hs => sample_density(&layout, None, &mut rng)?,
            Ensemble::Qmc => sample_qmc(
                &random_qmc_spec(cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.blocks, &mut rng)?,
                &mut rng,
            )?,
        };
        let c =
            check_qmc_compatibility(&rho.reduce(&["A", "B"])?, &rho.reduce(&["B", "C"])?, &tol)?;
        if !c.verdict {
            failures += 1;
            first_failure.get_or_insert(seed);
        }
        per_sample.push(
            json!({"seed": seed, "verdict": c.verdict, "normality_residual": c.normality_residual}),
        );
    }
    let mut r = Report::new();
    let ensemble = match cfg.ensemble {
        Ensemble::Hs => "hs",
        Ensemble::Qmc => "qmc",
    };
    r.push("ensemble", ensemble)
        .push("dims", cfg.dims.clone())
        .push("seed", cfg.seed)
        .push("samples", cfg.sample_count)
        .push("failures", failures)
        .push(
            "failure_frequency",
            if cfg.sample_count == 0 {
                Value::Null
            } else {
                Value::from(failures as f64 / cfg.sample_count as f64)
            },
        )
        .push(
            "first_failing_seed",
            first_failure.map_or(Value::Null, Value::from),
        );
    r.detail("per_sample", Value::Array(per_sample));
    let mut out = Outcome::ok(r);
    if let Some(p) = cfg.output_path {
        out.report.push("report_path", p.display().to_string());
    }
    Ok(out)
}

fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'A' + i as u8) as char).to_string())
        .collect()
}

fn stem_path(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sample".into());
    output.with_file_name(format!("{stem}_{suffix}.json"))
}

pub fn sample(ctx: &Context, args: &SampleArgs) -> CliResult<Outcome> {
    let seed = ctx.seed.unwrap_or(0);
    let mut rng = seeded_rng(seed);
    let mut r = Report::new();
    r.push("seed", seed);
    let (state, pairs): (DensityOperator, Vec<(String, String)>) = match args.kind {
        SampleKind::Hs | SampleKind::Qmc => {
            let factors = match (&args.labels, &args.dims) {
                (Some(l), _) => l.len(),
                (None, Some(d)) if args.kind == SampleKind::Hs => d.len(),
                _ => 3,
            };
            let labels = args.labels.clone().unwrap_or_else(|| letters(factors));
            let state = if args.kind == SampleKind::Hs {
                let dims = args.dims.clone().unwrap_or_else(|| vec![2; labels.len()]);
                if dims.len() != labels.len() {
                    return Err(CliError::Usage(format!(
                        "{} labels but {} dims",
                        labels.len(),
                        dims.len()
                    )));
                }
                r.push("kind", "hs");
                sample_density(
                    &SubsystemLayout::new(labels.clone(), dims)?,
                    args.rank,
                    &mut rng,
                )?
            } else {
                let dims = args.dims.clone().unwrap_or_else(default_dims);
                if dims.len() != 3 || labels.len() != 3 {
                    return Err(CliError::Usage(
                        "qmc samples need three labels and three dims".into(),
                    ));
                }
                r.push("kind", "qmc").push("blocks", args.blocks);
                let rho = sample_qmc(
                    &random_qmc_spec(dims[0], dims[1], dims[2], args.blocks, &mut rng)?,
                    &mut rng,
                )?;
                let layout = SubsystemLayout::new(labels.clone(), rho.layout().dims().to_vec())?;
                DensityOperator::new(layout, rho.into_matrix())?
            };
            let l = state.labels().to_vec();
            let mut pairs = Vec::new();
            for i in 0..l.len() {
                for j in i + 1..l.len() {
                    pairs.push((l[i].clone(), l[j].clone()));
                }
            }
            (state, pairs)
        }
        SampleKind::MarkovTree => {
            if args.vertices < 2 || args.vertices > 6 {
                return Err(CliError::Usage(format!(
                    "--vertices must be between 2 and 6, got {}",
                    args.vertices
                )));
            }
            let labels: Vec<String> = match &args.labels {
                Some(l) => l.clone(),
                None => letters(args.vertices),
            };
            if labels.len() != args.vertices {
                return Err(CliError::Usage(format!(
                    "{} labels for {} vertices",
                    labels.len(),
                    args.vertices
                )));
            }
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let kind = match args.tree_kind {
                TreeFlavor::Classical => TreeKind::Classical,
                TreeFlavor::Quantum => TreeKind::Quantum,
            };
            let s = sample_markov_tree(&refs, kind, &mut rng)?;
            let edges: Vec<(String, String)> = s
                .edges
                .iter()
                .map(|&(i, j)| (labels[i].clone(), labels[j].clone()))
                .collect();
            r.push("kind", "markov-tree").push(
                "edges",
                edges
                    .iter()
                    .map(|(a, b)| format!("{a}-{b}"))
                    .collect::<Vec<_>>(),
            );
            (s.state, edges)
        }
    };
    r.push("labels", state.labels().to_vec())
        .push("dims", state.layout().dims().to_vec());
    if args.marginals {
        let Some(out) = &ctx.output else {
            return Err(CliError::Usage(
                "--marginals needs --output for the file stem".into(),
            ));
        };
        let mut names = Vec::new();
        for (a, b) in &pairs {
            let path = stem_path(out, &format!("{a}{b}"));
            OperatorFile::new(state.reduce(&[a, b])?).write(&path)?;
            names.push(
                path.file_name()
                    .expect("file name")
                    .to_string_lossy()
                    .into_owned(),
            );
        }
        r.push("marginal_files", names.clone());
        if args.kind == SampleKind::MarkovTree {
            let desc = json!({
                "edges": pairs.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
                "marginals": names,
            });
            let path = stem_path(out, "tree");
            std::fs::write(
                &path,
                serde_json::to_string_pretty(&desc).expect("json") + "\n",
            )
            .map_err(|e| CliError::io(&path, e))?;
            r.push(
                "tree_file",
                path.file_name()
                    .expect("file name")
                    .to_string_lossy()
                    .into_owned(),
            );
        }
    }
    Ok(Outcome {
        report: r,
        code: 0,
        operator: Some(OperatorFile::new(state)),
    })
}
