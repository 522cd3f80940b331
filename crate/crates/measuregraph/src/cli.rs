//! Command-line front end: generation, verification, analytics, and the
//! application pipelines as subcommands over a shared model-spec schema.
//!
//! Model specs come either from a JSON file (`--spec`) or from inline
//! shorthand flags like `--kappa poisson:30 --transform
//! bernoulli:powerlaw:1`. All stochastic subcommands require a seed and
//! write byte-identical output for identical invocations.

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::path::PathBuf;

use crate::analytics::{self, Direction, VertexMode};
use crate::applications::{bayes, neural, primes, spin};
use crate::distributions::{CountingDistribution, LabelDistribution, QuadratureRule};
use crate::error::{Error, Result};
use crate::estimation::{self, MhConfig, MonotoneHint};
use crate::graphs::{self, io as graph_io, ModelSpec, VertexModel};
use crate::label::Label;
use crate::rng;
use crate::transforms::{ArrowSet, GraphonKernel, KernelForm, RandomTransform, WeightFunction};

#[derive(Debug, Parser)]
#[command(name = "measuregraph", version, about = "Random graphs as product random measures: seeded samplers with closed-form analytics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample graphs from a model spec and write JSON or edge-list files.
    Generate(GenerateArgs),
    /// Monte-Carlo-versus-analytic concordance table for a model spec.
    Verify(VerifyArgs),
    /// Degree-distribution coefficients of a model.
    DegreeDist(DegreeDistArgs),
    /// Variance (ANOVA) decomposition of a kernel.
    Sobol(KernelArgs),
    /// Singular value decomposition of a kernel operator.
    Spectral(SpectralArgs),
    /// Prime graph densities and thresholds.
    Primes(PrimesArgs),
    /// Spin network partition functions.
    Spin(SpinArgs),
    /// Graphon estimation from observed graph files.
    Estimate(EstimateArgs),
    /// Bayesian-network structure search on CSV data.
    Bn(BnArgs),
    /// Feed-forward wiring sample and analytics.
    Nn(NnArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Model spec JSON file; overrides the inline flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Counting distribution, e.g. dirac:10, poisson:30, negbin:5:0.8,
    /// binomial:10:0.3, uniform:2:5, zeta:2, zipf:1.5:100.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Label distribution: leb, cube:d, uniform:n, zeta:s.
    #[arg(long, default_value = "leb")]
    pub nu: String,
    /// Edge transform, e.g. bernoulli:constant:0.3, poisson:powerlaw:1,
    /// binomial:4:constant:0.25, deterministic:exponential:2.
    #[arg(long)]
    pub transform: Option<String>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub self_edges: bool,
    /// Restrict edges to label-increasing pairs (DAG sampling).
    #[arg(long)]
    pub dag: bool,
}

impl SpecArgs {
    pub fn build(&self) -> Result<ModelSpec> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)?;
            let spec: ModelSpec =
                serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
            spec.validate(&QuadratureRule::default())?;
            return Ok(spec);
        }
        let kappa = parse_kappa(self.kappa.as_deref().ok_or_else(|| {
            Error::Schema("either --spec or --kappa/--transform are required".into())
        })?)?;
        let transform = parse_transform(self.transform.as_deref().ok_or_else(|| {
            Error::Schema("either --spec or --kappa/--transform are required".into())
        })?)?;
        let spec = ModelSpec {
            vertices: VertexModel::Sampled {
                kappa,
                nu: parse_nu(&self.nu)?,
            },
            transform,
            weight: WeightFunction::Identity,
            directed: self.directed || self.dag,
            self_edges: self.self_edges,
            ordered_dag: self.dag,
        };
        spec.validate(&QuadratureRule::default())?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub seed: u64,
    /// Number of replications; seeds derive as seed + i.
    #[arg(long, default_value_t = 1)]
    pub reps: u64,
    /// Output path; replication i writes <out>-i with --reps > 1.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = ["json", "edgelist"])]
    pub format: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    /// Maximum |z| before the command fails.
    #[arg(long, default_value_t = 4.0)]
    pub threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DegreeDistArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 32)]
    pub kmax: usize,
    #[arg(long, default_value = "out", value_parser = ["out", "in"])]
    pub direction: String,
    /// realized: degree of a graph vertex; random-label: fresh probe.
    #[arg(long, default_value = "realized", value_parser = ["realized", "random-label"])]
    pub mode: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Kernel shorthand: constant:p, powerlaw:b, exponential:b.
    #[arg(long)]
    pub kernel: String,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 8)]
    pub rank: usize,
}

#[derive(Debug, Args)]
pub struct PrimesArgs {
    #[arg(long, default_value = "zeta", value_parser = ["zeta", "uniform"])]
    pub nu: String,
    /// s grid lo:hi:step for the zeta law.
    #[arg(long, default_value = "1.1:4:0.01")]
    pub s_grid: String,
    /// Upper label bound for the uniform law.
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    /// Mean vertex count for degree/active-vertex columns.
    #[arg(long, default_value_t = 10.0)]
    pub c: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpinArgs {
    #[arg(long, default_value_t = 6)]
    pub sites: usize,
    /// Spins are uniform on {0..smax}.
    #[arg(long, default_value_t = 1)]
    pub smax: u64,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// beta grid lo:hi:step.
    #[arg(long, default_value = "0:2:0.1")]
    pub beta_grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Observed graph JSON files (module output format).
    #[arg(long, required = true, num_args = 1..)]
    pub graphs: Vec<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value_t = 300)]
    pub iters: usize,
    #[arg(long, default_value_t = 0.01)]
    pub sigma: f64,
    #[arg(long, default_value_t = true)]
    pub separable: bool,
    #[arg(long, default_value = "none", value_parser = ["increasing", "decreasing", "none"])]
    pub hint: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BnArgs {
    /// CSV data: rows are samples, columns are vertices.
    #[arg(long)]
    pub data: PathBuf,
    /// Edge probability of the DAG prior graphon.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    #[arg(long, default_value_t = 1)]
    pub rewire_n: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NnArgs {
    #[arg(long)]
    pub layers: usize,
    /// Comma-separated layer probabilities; uniform when omitted.
    #[arg(long)]
    pub probs: Option<String>,
    /// Comma-separated consecutive-layer connection probabilities, or one
    /// shared value.
    #[arg(long, default_value = "0.5")]
    pub p: String,
    #[arg(long, default_value = "poisson:20")]
    pub kappa: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_kappa(s: &str) -> Result<CountingDistribution> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Schema(format!("cannot parse counting distribution '{s}'"));
    let f = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let u = |t: &str| t.parse::<u64>().map_err(|_| bad());
    match parts.as_slice() {
        ["dirac", n] => CountingDistribution::dirac(u(n)?),
        ["poisson", c] => CountingDistribution::poisson(f(c)?),
        ["negbin", r, p] => CountingDistribution::negative_binomial(u(r)?, f(p)?),
        ["binomial", n, p] => CountingDistribution::binomial(u(n)?, f(p)?),
        ["uniform", m, n] => CountingDistribution::uniform_int(u(m)?, u(n)?),
        ["zeta", s] => CountingDistribution::zeta_dist(f(s)?),
        ["zipf", s, n] => CountingDistribution::zipf(f(s)?, u(n)?),
        _ => Err(bad()),
    }
}

pub fn parse_nu(s: &str) -> Result<LabelDistribution> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Schema(format!("cannot parse label distribution '{s}'"));
    match parts.as_slice() {
        ["leb"] => Ok(LabelDistribution::LebesgueUnit),
        ["cube", d] => Ok(LabelDistribution::LebesgueCube {
            dim: d.parse().map_err(|_| bad())?,
        }),
        ["uniform", n] => Ok(LabelDistribution::UniformInt {
            n: n.parse().map_err(|_| bad())?,
        }),
        ["zeta", sv] => Ok(LabelDistribution::Zeta {
            s: sv.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

pub fn parse_kernel(parts: &[&str]) -> Result<GraphonKernel> {
    let bad = || Error::Schema(format!("cannot parse kernel '{}'", parts.join(":")));
    let f = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let form = match parts {
        ["constant", p] => KernelForm::Constant { p: f(p)? },
        ["powerlaw", b] => KernelForm::PowerLaw { b: f(b)? },
        ["exponential", b] => KernelForm::Exponential { b: f(b)? },
        ["dot", a, d] => KernelForm::DotProduct {
            a: f(a)?,
            dim: d.parse().map_err(|_| bad())?,
        },
        ["primes"] => KernelForm::PrimeIndicator,
        _ => return Err(bad()),
    };
    Ok(GraphonKernel::new(form))
}

pub fn parse_transform(s: &str) -> Result<RandomTransform> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Schema(format!("cannot parse transform '{s}'"));
    match parts.as_slice() {
        ["bernoulli", rest @ ..] => Ok(RandomTransform::Bernoulli {
            kernel: parse_kernel(rest)?.with_zero_diagonal(),
        }),
        ["poisson", rest @ ..] => Ok(RandomTransform::Poisson {
            kernel: parse_kernel(rest)?.with_zero_diagonal(),
        }),
        ["deterministic", rest @ ..] => Ok(RandomTransform::Deterministic {
            kernel: parse_kernel(rest)?.with_zero_diagonal(),
        }),
        ["binomial", n, rest @ ..] => Ok(RandomTransform::Binomial {
            n: n.parse().map_err(|_| bad())?,
            kernel: parse_kernel(rest)?.with_zero_diagonal(),
        }),
        _ => Err(bad()),
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Schema(format!("grid '{s}' is not lo:hi:step")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Schema(format!("bad grid '{s}'")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Schema(format!("bad grid '{s}'")))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| Error::Schema(format!("bad grid '{s}'")))?;
    if step <= 0.0 || hi < lo {
        return Err(Error::Schema(format!("degenerate grid '{s}'")));
    }
    let mut v = Vec::new();
    let mut x = lo;
    while x <= hi + 1e-12 {
        v.push(x);
        x += step;
    }
    Ok(v)
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(format!("wrote {}", path.display()))
        }
        None => Ok(content.to_string()),
    }
}

/// Build the worker pool honoring the MEASUREGRAPH_THREADS cap.
fn pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MEASUREGRAPH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            builder = builder.num_threads(n.max(1));
        }
    }
    builder.build().expect("thread pool")
}

/// One verification row: analytic value vs Monte Carlo estimate.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct VerifyRow {
    pub quantity: String,
    pub analytic: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub z: f64,
}

/// The analytic-versus-Monte-Carlo concordance table for a spec.
pub fn verify_spec(spec: &ModelSpec, seed: u64, reps: u64) -> Result<Vec<VerifyRow>> {
    let rule = QuadratureRule::default();
    spec.validate(&rule)?;
    let digraphon = matches!(spec.transform, RandomTransform::Digraphon { .. });
    let stc = spec.stc().is_some();

    // Monte Carlo statistics per replication. Probe-degree and triangle
    // rows sample fresh edges from the probe label into each realization.
    let probes = [Label::Scalar(0.25), Label::Scalar(0.75)];
    let z_probe = Label::Scalar(0.5);
    let columns = pool().install(|| {
        (0..reps)
            .into_par_iter()
            .map(|i| {
                let s = rng::replication_seed(seed, i);
                let g = graphs::generate(spec, s)?;
                let mut row = vec![
                    g.active_edge_count() as f64,
                    g.total_weight(),
                ];
                if digraphon {
                    row.push(analytics::arrow_state_count(&g, ArrowSet::DIRECTED) as f64);
                    row.push(analytics::arrow_state_count(&g, ArrowSet::BIDIRECTED) as f64);
                } else if stc && !spec.directed {
                    row.push(g.active_vertex_count() as f64);
                    for (pi, p) in probes.iter().enumerate() {
                        row.push(probe_degree(spec, &g, p, rng::derive(s, 101 + pi as u64))?);
                    }
                    row.push(probe_triangle(spec, &g, &z_probe, rng::derive(s, 777))?);
                }
                Ok(row)
            })
            .collect::<Result<Vec<Vec<f64>>>>()
    })?;

    let mut rows = Vec::new();
    let report = analytics::edge_report(spec, &rule)?;
    let count_analytic = if spec.directed {
        report.edge_count.total
    } else {
        report.edge_count.normalized
    };
    let weight_analytic = if spec.directed {
        report.edge_weight.total
    } else {
        report.edge_weight.normalized
    };
    rows.push(make_row("edge_count", count_analytic, &columns, 0));
    rows.push(make_row("edge_weight", weight_analytic, &columns, 1));
    if digraphon {
        let d = analytics::digraphon_edge_mean(spec, ArrowSet::DIRECTED, &rule)?;
        rows.push(make_row("directed_pairs", d.total, &columns, 2));
        let b = analytics::digraphon_edge_mean(spec, ArrowSet::BIDIRECTED, &rule)?;
        rows.push(make_row("bidirected_pairs", b.total, &columns, 3));
    } else if stc && !spec.directed {
        rows.push(make_row(
            "active_vertices",
            analytics::mean_active_vertices(spec, &rule)?,
            &columns,
            2,
        ));
        for (pi, p) in probes.iter().enumerate() {
            let st = analytics::degree_stats(spec, p, Direction::Out, VertexMode::RandomLabel, &rule)?;
            rows.push(make_row(
                &format!("probe_degree_{}", p.value()),
                st.mean,
                &columns,
                3 + pi,
            ));
        }
        rows.push(make_row(
            "triangle_mean_0.5",
            analytics::triangle_mean(spec, &z_probe, &rule)?,
            &columns,
            5,
        ));
    }
    Ok(rows)
}

fn make_row(name: &str, analytic: f64, columns: &[Vec<f64>], idx: usize) -> VerifyRow {
    let n = columns.len() as f64;
    let mean = columns.iter().map(|r| r[idx]).sum::<f64>() / n;
    let var = columns.iter().map(|r| (r[idx] - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    let z = if stderr > 0.0 {
        (mean - analytic) / stderr
    } else if (mean - analytic).abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    };
    VerifyRow {
        quantity: name.to_string(),
        analytic,
        mc_mean: mean,
        mc_stderr: stderr,
        z,
    }
}

/// Degree of a fresh probe label against a realization: one edge draw per
/// realized vertex.
fn probe_degree(
    spec: &ModelSpec,
    g: &graphs::LabeledGraph,
    probe: &Label,
    seed: u64,
) -> Result<f64> {
    let mut r = rng::master(seed);
    let mut total = 0.0;
    for v in g.labels() {
        total += spec
            .weight
            .apply(spec.transform.sample_weight(probe, v, &mut r)?);
    }
    Ok(total)
}

/// Triangle statistic at a probe label: fresh probe edges, realized pair
/// weights.
fn probe_triangle(
    spec: &ModelSpec,
    g: &graphs::LabeledGraph,
    z: &Label,
    seed: u64,
) -> Result<f64> {
    let mut r = rng::master(seed);
    let k = g.n_vertices();
    // one fresh edge draw (z, v) per vertex, reused across pairs
    let mut probe_edges = Vec::with_capacity(k);
    for v in g.labels() {
        probe_edges.push(
            spec.weight
                .apply(spec.transform.sample_weight(z, v, &mut r)?),
        );
    }
    let mut total = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            total += g.weight(i, j) * probe_edges[j] * probe_edges[i];
        }
    }
    Ok(total)
}

pub fn format_verify_table(rows: &[VerifyRow]) -> String {
    let mut out = String::from("quantity\tanalytic\tmc_mean\tmc_stderr\tz\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{:.10}\t{:.10}\t{:.10}\t{:.4}\n",
            r.quantity, r.analytic, r.mc_mean, r.mc_stderr, r.z
        ));
    }
    out
}

pub fn execute(config: RunConfig) -> Result<String> {
    match config.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::DegreeDist(args) => cmd_degree_dist(args),
        Command::Sobol(args) => cmd_sobol(args),
        Command::Spectral(args) => cmd_spectral(args),
        Command::Primes(args) => cmd_primes(args),
        Command::Spin(args) => cmd_spin(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Bn(args) => cmd_bn(args),
        Command::Nn(args) => cmd_nn(args),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<String> {
    let spec = args.spec.build()?;
    let render = |g: &graphs::LabeledGraph| -> Result<String> {
        if args.format == "json" {
            graph_io::to_json(g)
        } else {
            Ok(graph_io::to_edge_list(g))
        }
    };
    let seeds: Vec<u64> = (0..args.reps)
        .map(|i| rng::replication_seed(args.seed, i))
        .collect();
    let rendered = pool().install(|| {
        seeds
            .par_iter()
            .map(|&s| {
                let g = graphs::generate(&spec, s)?;
                Ok((g.n_vertices(), g.active_edge_count(), g.total_weight(), render(&g)?))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summary = String::new();
    for (i, (nv, ne, tw, content)) in rendered.iter().enumerate() {
        match (&args.out, args.reps) {
            (Some(path), 1) => {
                std::fs::write(path, content)?;
            }
            (Some(path), _) => {
                let ext = if args.format == "json" { "json" } else { "txt" };
                let p = path.with_extension(format!("{i}.{ext}"));
                std::fs::write(p, content)?;
            }
            (None, _) => summary.push_str(content),
        }
        summary.push_str(&format!(
            "graph {i}: vertices={nv} active_edges={ne} total_weight={tw}\n"
        ));
    }
    Ok(summary)
}

fn cmd_verify(args: VerifyArgs) -> Result<String> {
    let spec = args.spec.build()?;
    let rows = verify_spec(&spec, args.seed, args.reps)?;
    let table = format_verify_table(&rows);
    write_or_print(&args.out, &table)?;
    let worst = rows
        .iter()
        .map(|r| r.z.abs())
        .fold(0.0f64, f64::max);
    if worst > args.threshold {
        let divergent: Vec<&str> = rows
            .iter()
            .filter(|r| r.z.abs() > args.threshold)
            .map(|r| r.quantity.as_str())
            .collect();
        return Err(Error::Numerical(format!(
            "Monte Carlo diverges from the closed forms (|z| > {}): {}\n{table}",
            args.threshold,
            divergent.join(", ")
        )));
    }
    Ok(table)
}

fn cmd_degree_dist(args: DegreeDistArgs) -> Result<String> {
    let spec = args.spec.build()?;
    let direction = if args.direction == "in" {
        Direction::In
    } else {
        Direction::Out
    };
    let mode = if args.mode == "random-label" {
        VertexMode::RandomLabel
    } else {
        VertexMode::Realized
    };
    let rule = QuadratureRule::default();
    let law = analytics::degree_distribution(&spec, direction, mode, &rule)?;
    let table = analytics::pgf_coefficients(|t| law.pgf(t), args.kmax);
    let payload = serde_json::json!({
        "mean": law.mean,
        "variance": law.variance,
        "direction": direction,
        "mode": mode,
        "probabilities": table.probs,
        "mass": table.mass,
        "deficit": table.deficit,
        "truncation_warning": table.truncation_warning,
    });
    let text = serde_json::to_string_pretty(&payload)?;
    write_or_print(&args.out, &text)
}

fn cmd_sobol(args: KernelArgs) -> Result<String> {
    let parts: Vec<&str> = args.kernel.split(':').collect();
    let kernel = parse_kernel(&parts)?;
    let rule = QuadratureRule::gauss_legendre(args.nodes);
    let d = crate::decomposition::sobol(
        |x, y| kernel.eval(&Label::Scalar(x), &Label::Scalar(y)),
        &LabelDistribution::LebesgueUnit,
        &rule,
    )?;
    let text = serde_json::to_string_pretty(&d)?;
    write_or_print(&args.out, &text)
}

fn cmd_spectral(args: SpectralArgs) -> Result<String> {
    let parts: Vec<&str> = args.kernel.kernel.split(':').collect();
    let kernel = parse_kernel(&parts)?;
    let rule = QuadratureRule::gauss_legendre(args.kernel.nodes);
    let d = crate::decomposition::spectral(
        |x, y| kernel.eval(&Label::Scalar(x), &Label::Scalar(y)),
        &LabelDistribution::LebesgueUnit,
        &rule,
        args.rank,
    )?;
    let text = serde_json::to_string_pretty(&d)?;
    write_or_print(&args.kernel.out, &text)
}

fn cmd_primes(args: PrimesArgs) -> Result<String> {
    let mut out = String::new();
    if args.nu == "zeta" {
        let grid = parse_grid(&args.s_grid)?;
        out.push_str("s\tprime_density\tedge_density\tmean_degree\tgc_threshold_c\n");
        let mut best_density = (f64::MIN, 0.0);
        let mut best_edge = (f64::MIN, 0.0);
        for &s in &grid {
            let m = primes::PrimeGraphModel {
                nu: primes::PrimeLabelLaw::Zeta { s },
                kappa: CountingDistribution::poisson(args.c)?,
            };
            let r = primes::prime_analytics(&m)?;
            if r.prime_density > best_density.0 {
                best_density = (r.prime_density, s);
            }
            if r.edge_density > best_edge.0 {
                best_edge = (r.edge_density, s);
            }
            out.push_str(&format!(
                "{s:.6}\t{:.10}\t{:.10}\t{:.10}\t{:.10}\n",
                r.prime_density, r.edge_density, r.mean_degree, r.gc_threshold_c
            ));
        }
        out.push_str(&format!(
            "# max prime_density {:.6} at s = {:.5}\n",
            best_density.0, best_density.1
        ));
        out.push_str(&format!(
            "# max edge_density {:.7} at s = {:.5}\n",
            best_edge.0, best_edge.1
        ));
    } else {
        let m = primes::PrimeGraphModel {
            nu: primes::PrimeLabelLaw::Uniform { n: args.n },
            kappa: CountingDistribution::poisson(args.c)?,
        };
        let r = primes::prime_analytics(&m)?;
        out.push_str(&serde_json::to_string_pretty(&r)?);
        out.push('\n');
    }
    write_or_print(&args.out, &out)
}

fn cmd_spin(args: SpinArgs) -> Result<String> {
    let net = spin::SpinNetwork::chain(
        args.sites,
        CountingDistribution::uniform_int(0, args.smax)?,
        args.coupling,
        args.radius,
    );
    let betas = parse_grid(&args.beta_grid)?;
    let report = spin::spin_report(&net, &betas)?;
    let text = serde_json::to_string_pretty(&report)?;
    write_or_print(&args.out, &text)
}

fn cmd_estimate(args: EstimateArgs) -> Result<String> {
    let mut graphs_in = Vec::new();
    for path in &args.graphs {
        let text = std::fs::read_to_string(path)?;
        graphs_in.push(graph_io::from_json(&text)?);
    }
    let obs = estimation::ObservedGraphSet::from_graphs(&graphs_in)?;
    let hint = match args.hint.as_str() {
        "increasing" => MonotoneHint::Increasing,
        "decreasing" => MonotoneHint::Decreasing,
        _ => MonotoneHint::None,
    };
    let config = MhConfig {
        order: args.order,
        iterations: args.iters,
        sigma: args.sigma,
        separable: args.separable,
        hint,
        assume_poisson: true,
    };
    let est = estimation::mh_estimate(&obs, &config, args.seed)?;
    // fitted graphon on a plotting grid
    let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
    let values: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| grid.iter().map(|&y| est.param.eval(x, y)).collect())
        .collect();
    let payload = serde_json::json!({
        "estimate": est.param,
        "beta11": est.beta11,
        "counting": est.counting,
        "reflected": est.reflected,
        "ambiguous": est.ambiguous,
        "trace": est.trace,
        "grid": grid,
        "fitted": values,
    });
    let text = serde_json::to_string_pretty(&payload)?;
    write_or_print(&args.out, &text)
}

fn cmd_bn(args: BnArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.data)?;
    let data = bayes::DataMatrix::from_csv(&text)?;
    let spec = ModelSpec {
        vertices: VertexModel::Sampled {
            kappa: CountingDistribution::dirac(data.n_cols() as u64)?,
            nu: LabelDistribution::LebesgueUnit,
        },
        transform: RandomTransform::Bernoulli {
            kernel: GraphonKernel::constant(args.p).with_zero_diagonal(),
        },
        weight: WeightFunction::Identity,
        directed: true,
        self_edges: false,
        ordered_dag: true,
    };
    let inf = bayes::bn_mh_infer(
        &spec, &data, args.iters, args.rewire_n, args.q, args.r, args.seed,
    )?;
    let adj: Vec<Vec<u8>> = (0..inf.best.n_vertices())
        .map(|i| {
            (0..inf.best.n_vertices())
                .map(|j| (inf.best.weight(i, j) > 0.0) as u8)
                .collect()
        })
        .collect();
    let payload = serde_json::json!({
        "best_adjacency": adj,
        "best_log_likelihood": inf.best_log_likelihood,
        "trace": inf.trace,
        "accepted": inf.accepted,
    });
    let text = serde_json::to_string_pretty(&payload)?;
    write_or_print(&args.out, &text)
}

fn cmd_nn(args: NnArgs) -> Result<String> {
    let kappa = parse_kappa(&args.kappa)?;
    let layer_probs = match &args.probs {
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Schema(format!("bad --probs: {e}")))?,
        None => vec![1.0 / args.layers as f64; args.layers],
    };
    let ps: Vec<f64> = args
        .p
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<f64>, _>>()
        .map_err(|e| Error::Schema(format!("bad --p: {e}")))?;
    let connection_probs = if ps.len() == 1 {
        vec![ps[0]; args.layers.saturating_sub(1)]
    } else {
        ps
    };
    let arch = neural::NnArchitecture {
        layers: args.layers,
        layer_probs,
        connection_probs,
        kappa,
    };
    let w = neural::nn_wire(&arch, args.seed)?;
    let payload = serde_json::json!({
        "expected_edges": w.expected_edges,
        "expected_out_degree": w.expected_out_degree,
        "expected_in_degree": w.expected_in_degree,
        "realized_edges": w.realized_edges,
        "bias_count": w.bias_count,
        "parameter_count": w.parameter_count,
        "graph": graph_io::GraphJson::from(&w.graph),
    });
    let text = serde_json::to_string_pretty(&payload)?;
    write_or_print(&args.out, &text)
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error display
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(config) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shorthands() {
        assert!(parse_kappa("dirac:10").is_ok());
        assert!(parse_kappa("poisson:30").is_ok());
        assert!(parse_kappa("negbin:5:0.8").is_ok());
        assert!(parse_kappa("nonsense").is_err());
        assert!(parse_nu("leb").is_ok());
        assert!(parse_nu("cube:3").is_ok());
        assert!(parse_transform("bernoulli:constant:0.3").is_ok());
        assert!(parse_transform("binomial:4:constant:0.25").is_ok());
        assert!(parse_transform("bogus:1").is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("1:2:0.5").unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
        assert!(parse_grid("2:1:0.5").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn verify_er_spec_concords() {
        let spec = ModelSpec::erdos_renyi(10, 0.3).unwrap();
        let rows = verify_spec(&spec, 7, 3000).unwrap();
        for r in &rows {
            assert!(r.z.abs() <= 4.5, "{}: z = {}", r.quantity, r.z);
        }
        // known analytic column
        assert!((rows[0].analytic - 13.5).abs() < 1e-9);
    }

    #[test]
    fn verify_zero_kernel_is_exact() {
        let spec = ModelSpec::erdos_renyi(6, 0.0).unwrap();
        let rows = verify_spec(&spec, 3, 200).unwrap();
        for r in &rows {
            assert!(r.analytic.abs() < 1e-12, "{}: {}", r.quantity, r.analytic);
            assert_eq!(r.mc_mean, 0.0, "{}", r.quantity);
            assert_eq!(r.z, 0.0, "{}", r.quantity);
        }
    }
}
