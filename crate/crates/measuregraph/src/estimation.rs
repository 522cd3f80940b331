//! Graphon identification from observed unlabeled adjacency matrices.
//!
//! Pipeline: estimate the counting law from the vertex counts, pin the
//! leading Legendre coefficient from the mean degree, then random-walk
//! Metropolis over the free coefficients scoring each candidate by the
//! degree-distribution pseudo-log-likelihood. Reflection symmetry
//! (x -> 1-x leaves integrals invariant) is resolved at the end from a
//! monotonicity hint.
//!
//! The likelihood uses the realized-vertex degree law: a sampled vertex
//! sees the size-biased count minus itself. For a Poisson count this is
//! exactly the plain formula; for Dirac(n) it is the exact
//! Binomial(n-1, .) version, which removes an O(1/n) bias in the pinned
//! coefficient.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::{degree_distribution, pgf_coefficients, Direction, VertexMode};
use crate::distributions::{classify_pt, CountingDistribution, LabelDistribution, PtFit, QuadratureRule};
use crate::error::{Error, Result};
use crate::graphs::{LabeledGraph, ModelSpec, VertexModel};
use crate::rng;
use crate::transforms::{GraphonKernel, KernelForm, RandomTransform, WeightFunction};

/// Observed 0/1 adjacency matrices, vertex labels unknown.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservedGraphSet {
    adjacency: Vec<Vec<u8>>,
    sizes: Vec<usize>,
}

impl ObservedGraphSet {
    pub fn from_matrices(mats: Vec<Vec<Vec<u8>>>) -> Result<Self> {
        let mut adjacency = Vec::new();
        let mut sizes = Vec::new();
        for (g, m) in mats.into_iter().enumerate() {
            let n = m.len();
            let mut flat = Vec::with_capacity(n * n);
            for row in &m {
                if row.len() != n {
                    return Err(Error::SizeMismatch(format!("graph {g} is not square")));
                }
                for &v in row {
                    if v > 1 {
                        return Err(Error::Schema(format!("graph {g} has entry {v} > 1")));
                    }
                    flat.push(v);
                }
            }
            adjacency.push(flat);
            sizes.push(n);
        }
        if adjacency.is_empty() {
            return Err(Error::InvalidModel("no observed graphs".into()));
        }
        Ok(ObservedGraphSet { adjacency, sizes })
    }

    pub fn from_graphs(graphs: &[LabeledGraph]) -> Result<Self> {
        let mats = graphs
            .iter()
            .map(|g| {
                let n = g.n_vertices();
                (0..n)
                    .map(|i| (0..n).map(|j| (g.weight(i, j) > 0.0) as u8).collect())
                    .collect()
            })
            .collect();
        Self::from_matrices(mats)
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn vertex_counts(&self) -> Vec<u64> {
        self.sizes.iter().map(|&n| n as u64).collect()
    }

    pub fn degree_vectors(&self) -> Vec<Vec<u64>> {
        self.adjacency
            .iter()
            .zip(&self.sizes)
            .map(|(a, &n)| {
                (0..n)
                    .map(|i| (0..n).map(|j| a[i * n + j] as u64).sum())
                    .collect()
            })
            .collect()
    }

    pub fn all_symmetric(&self) -> bool {
        self.adjacency.iter().zip(&self.sizes).all(|(a, &n)| {
            (0..n).all(|i| (i..n).all(|j| a[i * n + j] == a[j * n + i]))
        })
    }

    pub fn any_self_edges(&self) -> bool {
        self.adjacency
            .iter()
            .zip(&self.sizes)
            .any(|(a, &n)| (0..n).any(|i| a[i * n + i] == 1))
    }

    pub fn pooled_mean_degree(&self) -> f64 {
        let degs = self.degree_vectors();
        let total: u64 = degs.iter().flatten().sum();
        let count: usize = degs.iter().map(|d| d.len()).sum();
        total as f64 / count.max(1) as f64
    }

    pub fn max_degree(&self) -> u64 {
        self.degree_vectors()
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Histogram of all observed degrees up to the maximum.
    pub fn degree_histogram(&self) -> Vec<u64> {
        let max = self.max_degree() as usize;
        let mut hist = vec![0u64; max + 1];
        for d in self.degree_vectors().iter().flatten() {
            hist[*d as usize] += 1;
        }
        hist
    }
}

/// Counting-law fit from observed vertex counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountingFit {
    pub c: f64,
    pub delta2: f64,
    pub fit: PtFit,
}

/// Sample mean and Bessel-corrected variance, classified into the
/// Poisson-type family. A single observation is read as a Dirac count.
pub fn fit_counting(counts: &[u64], tol: f64) -> Result<CountingFit> {
    if counts.is_empty() {
        return Err(Error::InvalidModel("no vertex counts observed".into()));
    }
    let n = counts.len() as f64;
    let c = counts.iter().sum::<u64>() as f64 / n;
    if counts.len() == 1 {
        return Ok(CountingFit {
            c,
            delta2: 0.0,
            fit: PtFit {
                kind: crate::distributions::PtKind::Binomial,
                dist: CountingDistribution::dirac(counts[0])?,
                degenerate: true,
            },
        });
    }
    let delta2 = counts
        .iter()
        .map(|&k| (k as f64 - c).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok(CountingFit {
        c,
        delta2,
        fit: classify_pt(c, delta2, tol)?,
    })
}

/// Legendre-basis graphon parameterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GraphonParam {
    /// f(x,y) = g(x) g(y) with g = sum_i betas[i] phi_i.
    Separable { betas: Vec<f64> },
    /// f = sum_ij theta[i*order+j] phi_i(x) phi_j(y).
    Full { order: usize, theta: Vec<f64> },
}

impl GraphonParam {
    pub fn order(&self) -> usize {
        match self {
            GraphonParam::Separable { betas } => betas.len(),
            GraphonParam::Full { order, .. } => *order,
        }
    }

    pub fn eval_g(&self, x: f64) -> Option<f64> {
        match self {
            GraphonParam::Separable { betas } => Some(
                betas
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        b * crate::distributions::special::legendre_orthonormal(i + 1, x)
                    })
                    .sum(),
            ),
            GraphonParam::Full { .. } => None,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            GraphonParam::Separable { .. } => {
                self.eval_g(x).unwrap() * self.eval_g(y).unwrap()
            }
            GraphonParam::Full { order, theta } => {
                let mut acc = 0.0;
                for i in 0..*order {
                    let pi = crate::distributions::special::legendre_orthonormal(i + 1, x);
                    for j in 0..*order {
                        let pj = crate::distributions::special::legendre_orthonormal(j + 1, y);
                        acc += theta[i * order + j] * pi * pj;
                    }
                }
                acc
            }
        }
    }

    /// (nu x nu) f: the leading coefficient beta_11.
    pub fn beta11(&self) -> f64 {
        match self {
            GraphonParam::Separable { betas } => betas[0] * betas[0],
            GraphonParam::Full { theta, .. } => theta[0],
        }
    }

    /// The reflected candidate f(1-x, 1-y): odd-order coefficients flip.
    pub fn reflected(&self) -> Self {
        match self {
            GraphonParam::Separable { betas } => GraphonParam::Separable {
                betas: betas
                    .iter()
                    .enumerate()
                    .map(|(i, b)| if i % 2 == 1 { -b } else { *b })
                    .collect(),
            },
            GraphonParam::Full { order, theta } => {
                let mut t = theta.clone();
                for i in 0..*order {
                    for j in 0..*order {
                        if (i + j) % 2 == 1 {
                            t[i * order + j] = -t[i * order + j];
                        }
                    }
                }
                GraphonParam::Full {
                    order: *order,
                    theta: t,
                }
            }
        }
    }

    /// Kernel form for use in model specs.
    pub fn kernel(&self, zero_diagonal: bool) -> GraphonKernel {
        let order = self.order();
        let theta = match self {
            GraphonParam::Separable { betas } => {
                let mut t = vec![0.0; order * order];
                for i in 0..order {
                    for j in 0..order {
                        t[i * order + j] = betas[i] * betas[j];
                    }
                }
                t
            }
            GraphonParam::Full { theta, .. } => theta.clone(),
        };
        let mut k = GraphonKernel::new(KernelForm::Legendre {
            order,
            coeffs: theta,
        });
        if zero_diagonal {
            k = k.with_zero_diagonal();
        }
        k
    }

    /// Range check on a uniform validation grid plus the quadrature nodes.
    pub fn is_feasible(&self, rule: &QuadratureRule) -> bool {
        let mut points: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        points.extend(rule.nodes().iter().copied());
        for &x in &points {
            for &y in &points {
                let v = self.eval(x, y);
                if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                    return false;
                }
            }
        }
        true
    }

    /// Relative L2 error against a reference graphon.
    pub fn relative_l2_error<F>(&self, truth: F, rule: &QuadratureRule) -> f64
    where
        F: Fn(f64, f64) -> f64,
    {
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, wx) in rule.points() {
            for (y, wy) in rule.points() {
                let t = truth(x, y);
                let d = t - self.eval(x, y);
                num += wx * wy * d * d;
                den += wx * wy * t * t;
            }
        }
        num / den
    }
}

/// Degree-distribution pseudo-log-likelihood of a candidate graphon.
///
/// Infeasible candidates are rejected outright; degree probabilities come
/// from coefficient extraction of the realized-vertex degree pgf and are
/// floored at 1e-300 before the logarithm.
pub fn pseudo_log_likelihood(
    param: &GraphonParam,
    obs: &ObservedGraphSet,
    kappa: &CountingDistribution,
    rule: &QuadratureRule,
) -> Result<f64> {
    if !param.is_feasible(rule) {
        return Err(Error::Infeasible(
            "candidate graphon leaves [0,1] on the validation grid".into(),
        ));
    }
    let spec = ModelSpec {
        vertices: VertexModel::Sampled {
            kappa: kappa.clone(),
            nu: LabelDistribution::LebesgueUnit,
        },
        transform: RandomTransform::Bernoulli {
            kernel: param.kernel(true),
        },
        weight: WeightFunction::Identity,
        directed: false,
        self_edges: false,
        ordered_dag: false,
    };
    let law = degree_distribution(&spec, Direction::Out, VertexMode::Realized, rule)?;
    let hist = obs.degree_histogram();
    let table = pgf_coefficients(|t| law.pgf(t), hist.len().saturating_sub(1));
    let mut ll = 0.0;
    for (k, &count) in hist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let p = table.probs[k].max(1e-300);
        ll += count as f64 * p.ln();
    }
    Ok(ll)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneHint {
    Increasing,
    Decreasing,
    None,
}

/// Metropolis-Hastings configuration for the coefficient search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MhConfig {
    /// Number of Legendre basis functions m.
    pub order: usize,
    pub iterations: usize,
    /// Per-coordinate Gaussian proposal standard deviation.
    pub sigma: f64,
    pub separable: bool,
    pub hint: MonotoneHint,
    /// Force the counting family instead of trusting the moment fit
    /// (small samples classify erratically).
    pub assume_poisson: bool,
}

impl Default for MhConfig {
    fn default() -> Self {
        MhConfig {
            order: 3,
            iterations: 300,
            sigma: 0.01,
            separable: true,
            hint: MonotoneHint::None,
            assume_poisson: true,
        }
    }
}

/// One recorded chain of coefficient iterates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MhTrace {
    pub thetas: Vec<Vec<f64>>,
    pub log_likelihoods: Vec<f64>,
    pub accepted: Vec<bool>,
    pub best_index: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MhEstimate {
    pub param: GraphonParam,
    pub trace: MhTrace,
    pub counting: CountingFit,
    pub beta11: f64,
    /// Whether the reflection candidate was chosen at the end.
    pub reflected: bool,
    /// Set when no hint was given: the reflected candidate is equally
    /// likely.
    pub ambiguous: bool,
}

/// Random-walk Metropolis over the free coefficients with the leading one
/// pinned by the observed mean degree. The returned parameter maximizes
/// the recorded likelihood across all iterates.
pub fn mh_estimate(
    obs: &ObservedGraphSet,
    config: &MhConfig,
    seed: u64,
) -> Result<MhEstimate> {
    if config.order < 1 {
        return Err(Error::InvalidModel("basis order must be >= 1".into()));
    }
    let rule = QuadratureRule::default();
    let counting = fit_counting(&obs.vertex_counts(), 0.25)?;
    let kappa = if config.assume_poisson {
        CountingDistribution::poisson(counting.c)?
    } else {
        counting.fit.dist.clone()
    };
    // pin beta_11 = E Y / (mean neighbor count of a realized vertex)
    let neighbor_mean = kappa.factorial_moment(2) / kappa.mean();
    let beta11 = (obs.pooled_mean_degree() / neighbor_mean).clamp(0.0, 1.0);
    let mut theta = initial_param(config, beta11);
    let free = free_indices(config);

    let mut current_ll = pseudo_log_likelihood(&theta, obs, &kappa, &rule)?;
    let mut trace = MhTrace {
        thetas: vec![flatten(&theta)],
        log_likelihoods: vec![current_ll],
        accepted: vec![true],
        best_index: 0,
    };
    let mut best_ll = current_ll;
    let mut r = rng::master(seed);
    let mut consecutive_infeasible = 0usize;
    for _ in 0..config.iterations {
        let mut proposal = theta.clone();
        for &idx in &free {
            bump(&mut proposal, idx, gaussian(&mut r) * config.sigma);
        }
        let (next, ll, accepted) = match pseudo_log_likelihood(&proposal, obs, &kappa, &rule) {
            Err(Error::Infeasible(_)) => {
                consecutive_infeasible += 1;
                if consecutive_infeasible >= 100 {
                    return Err(Error::Stall(
                        "100 consecutive infeasible proposals".into(),
                    ));
                }
                (theta.clone(), current_ll, false)
            }
            Err(e) => return Err(e),
            Ok(ll) => {
                consecutive_infeasible = 0;
                // symmetric proposal: plain likelihood-ratio acceptance
                if (ll - current_ll) >= r.random::<f64>().ln() {
                    (proposal, ll, true)
                } else {
                    (theta.clone(), current_ll, false)
                }
            }
        };
        theta = next;
        current_ll = ll;
        trace.thetas.push(flatten(&theta));
        trace.log_likelihoods.push(current_ll);
        trace.accepted.push(accepted);
        if current_ll > best_ll {
            best_ll = current_ll;
            trace.best_index = trace.log_likelihoods.len() - 1;
        }
    }
    let best = unflatten(config, &trace.thetas[trace.best_index]);
    let resolution = resolve_symmetry(&best, config.hint);
    Ok(MhEstimate {
        param: resolution.chosen,
        trace,
        counting,
        beta11,
        reflected: resolution.reflected,
        ambiguous: resolution.ambiguous,
    })
}

fn initial_param(config: &MhConfig, beta11: f64) -> GraphonParam {
    if config.separable {
        let mut betas = vec![0.0; config.order];
        // positive square root: the trivial sign unidentifiability of
        // (beta) vs (-beta) is fixed here
        betas[0] = beta11.sqrt();
        GraphonParam::Separable { betas }
    } else {
        let mut theta = vec![0.0; config.order * config.order];
        theta[0] = beta11;
        GraphonParam::Full {
            order: config.order,
            theta,
        }
    }
}

fn free_indices(config: &MhConfig) -> Vec<usize> {
    if config.separable {
        (1..config.order).collect()
    } else {
        (1..config.order * config.order).collect()
    }
}

fn flatten(p: &GraphonParam) -> Vec<f64> {
    match p {
        GraphonParam::Separable { betas } => betas.clone(),
        GraphonParam::Full { theta, .. } => theta.clone(),
    }
}

fn unflatten(config: &MhConfig, v: &[f64]) -> GraphonParam {
    if config.separable {
        GraphonParam::Separable { betas: v.to_vec() }
    } else {
        GraphonParam::Full {
            order: config.order,
            theta: v.to_vec(),
        }
    }
}

fn bump(p: &mut GraphonParam, idx: usize, delta: f64) {
    match p {
        GraphonParam::Separable { betas } => betas[idx] += delta,
        GraphonParam::Full { theta, .. } => theta[idx] += delta,
    }
}

fn gaussian<R: Rng>(r: &mut R) -> f64 {
    use rand_distr::Distribution as _;
    rand_distr::StandardNormal.sample(r)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryResolution {
    pub chosen: GraphonParam,
    pub reflected: bool,
    pub ambiguous: bool,
}

/// Pick between f(x,y) and f(1-x,1-y) by the monotonicity of the diagonal
/// trace t -> f(t,t). With no hint the original is returned flagged
/// ambiguous; the reflected candidate is `param.reflected()`.
pub fn resolve_symmetry(param: &GraphonParam, hint: MonotoneHint) -> SymmetryResolution {
    if matches!(hint, MonotoneHint::None) {
        return SymmetryResolution {
            chosen: param.clone(),
            reflected: false,
            ambiguous: true,
        };
    }
    // linear trend of the diagonal trace
    let slope = |p: &GraphonParam| -> f64 {
        let n = 51;
        let mean_t = 0.5;
        let mut acc = 0.0;
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            acc += (t - mean_t) * p.eval(t, t);
        }
        acc
    };
    let s = slope(param);
    let want_increasing = matches!(hint, MonotoneHint::Increasing);
    if (s >= 0.0) == want_increasing {
        SymmetryResolution {
            chosen: param.clone(),
            reflected: false,
            ambiguous: false,
        }
    } else {
        SymmetryResolution {
            chosen: param.reflected(),
            reflected: true,
            ambiguous: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;
    use approx::assert_relative_eq;

    fn rule() -> QuadratureRule {
        QuadratureRule::default()
    }

    #[test]
    fn fit_counting_examples() {
        let f = fit_counting(&[31, 28, 33, 25, 35], 0.25).unwrap();
        assert_relative_eq!(f.c, 30.4, max_relative = 1e-12);

        let f = fit_counting(&[5, 5, 5, 5], 0.25).unwrap();
        assert_eq!(f.delta2, 0.0);
        assert!(f.fit.degenerate);

        let f = fit_counting(&[3], 0.25).unwrap();
        assert_eq!(f.fit.dist, CountingDistribution::dirac(3).unwrap());
        assert!(fit_counting(&[], 0.25).is_err());
    }

    #[test]
    fn pseudo_loglik_trivial_cases() {
        // all degrees 0 and f == 0: every vertex has P(Y=0) = 1
        let empty = ObservedGraphSet::from_matrices(vec![vec![vec![0, 0], vec![0, 0]]]).unwrap();
        let zero = GraphonParam::Separable {
            betas: vec![0.0, 0.0],
        };
        let kappa = CountingDistribution::poisson(2.0).unwrap();
        let ll = pseudo_log_likelihood(&zero, &empty, &kappa, &rule()).unwrap();
        assert!(ll.abs() < 1e-9, "{ll}");
    }

    #[test]
    fn pseudo_loglik_rejects_infeasible() {
        let obs = ObservedGraphSet::from_matrices(vec![vec![vec![0, 1], vec![1, 0]]]).unwrap();
        let bad = GraphonParam::Separable {
            betas: vec![1.5, 0.0],
        };
        let kappa = CountingDistribution::poisson(2.0).unwrap();
        assert!(matches!(
            pseudo_log_likelihood(&bad, &obs, &kappa, &rule()),
            Err(Error::Infeasible(_))
        ));
    }

    fn er_observations(n: u64, p: f64, graphs: u64, seed0: u64) -> ObservedGraphSet {
        let spec = ModelSpec::erdos_renyi(n, p).unwrap();
        let gs: Vec<LabeledGraph> = (0..graphs)
            .map(|i| generate(&spec, seed0 + i).unwrap())
            .collect();
        ObservedGraphSet::from_graphs(&gs).unwrap()
    }

    #[test]
    fn likelihood_peaks_near_truth_for_er() {
        // likelihood at the true p beats likelihood at p +- 0.2
        let obs = er_observations(30, 0.5, 10, 7);
        let kappa = CountingDistribution::dirac(30).unwrap();
        let ll = |p: f64| {
            pseudo_log_likelihood(
                &GraphonParam::Separable {
                    betas: vec![p.sqrt()],
                },
                &obs,
                &kappa,
                &rule(),
            )
            .unwrap()
        };
        assert!(ll(0.5) > ll(0.3));
        assert!(ll(0.5) > ll(0.7));
    }

    #[test]
    fn reflection_leaves_likelihood_invariant() {
        let obs = er_observations(20, 0.4, 3, 11);
        let kappa = CountingDistribution::poisson(20.0).unwrap();
        let mut r = rng::master(5);
        for _ in 0..10 {
            let betas: Vec<f64> = vec![
                0.5,
                0.2 * (r.random::<f64>() - 0.5),
                0.2 * (r.random::<f64>() - 0.5),
            ];
            let p = GraphonParam::Separable { betas };
            if !p.is_feasible(&rule()) {
                continue;
            }
            let a = pseudo_log_likelihood(&p, &obs, &kappa, &rule()).unwrap();
            let b = pseudo_log_likelihood(&p.reflected(), &obs, &kappa, &rule()).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_sigma_chain_stays_at_origin() {
        let obs = er_observations(15, 0.3, 3, 23);
        let config = MhConfig {
            sigma: 0.0,
            iterations: 20,
            ..MhConfig::default()
        };
        let est = mh_estimate(&obs, &config, 1).unwrap();
        let first = &est.trace.thetas[0];
        for t in &est.trace.thetas {
            assert_eq!(t, first);
        }
    }

    #[test]
    fn er_single_coefficient_recovers_p() {
        // m = 1: the pinned coefficient alone reproduces p; cross-check
        // against a direct likelihood grid scan
        let n = 12u64;
        let p = 0.45;
        let obs = er_observations(n, p, 30, 99);
        let config = MhConfig {
            order: 1,
            iterations: 10,
            assume_poisson: false,
            ..MhConfig::default()
        };
        let est = mh_estimate(&obs, &config, 3).unwrap();
        let fitted_p = est.param.eval(0.5, 0.5);
        assert!((fitted_p - p).abs() < 0.05, "fitted {fitted_p}");

        // grid-scan oracle over candidate constants
        let kappa = CountingDistribution::dirac(n).unwrap();
        let mut best = (f64::NEG_INFINITY, 0.0);
        for i in 1..100 {
            let q = i as f64 / 100.0;
            let ll = pseudo_log_likelihood(
                &GraphonParam::Separable {
                    betas: vec![q.sqrt()],
                },
                &obs,
                &kappa,
                &rule(),
            )
            .unwrap();
            if ll > best.0 {
                best = (ll, q);
            }
        }
        assert!((best.1 - fitted_p).abs() < 0.05, "scan {} vs {fitted_p}", best.1);
    }

    #[test]
    fn pinning_invariant_along_chain() {
        let obs = er_observations(25, 0.35, 5, 41);
        let config = MhConfig {
            iterations: 60,
            ..MhConfig::default()
        };
        let est = mh_estimate(&obs, &config, 9).unwrap();
        for t in &est.trace.thetas {
            // first coefficient never proposed
            assert_relative_eq!(t[0] * t[0], est.beta11, max_relative = 1e-12);
        }
        // best index really is the argmax
        let best = est.trace.log_likelihoods[est.trace.best_index];
        for ll in &est.trace.log_likelihoods {
            assert!(*ll <= best + 1e-12);
        }
    }

    #[test]
    fn feasibility_holds_for_accepted_states() {
        let obs = er_observations(25, 0.35, 5, 41);
        let config = MhConfig {
            iterations: 80,
            ..MhConfig::default()
        };
        let est = mh_estimate(&obs, &config, 17).unwrap();
        for t in &est.trace.thetas {
            let p = GraphonParam::Separable { betas: t.clone() };
            assert!(p.is_feasible(&rule()));
        }
    }

    #[test]
    fn symmetry_resolution() {
        // constant graphon: both candidates identical
        let c = GraphonParam::Separable {
            betas: vec![0.5, 0.0],
        };
        let r = resolve_symmetry(&c, MonotoneHint::Decreasing);
        assert!(!r.reflected);

        // increasing g: decreasing hint forces the reflection
        let inc = GraphonParam::Separable {
            betas: vec![0.5, 0.2],
        };
        let r = resolve_symmetry(&inc, MonotoneHint::Decreasing);
        assert!(r.reflected);
        let r2 = resolve_symmetry(&inc, MonotoneHint::Increasing);
        assert!(!r2.reflected);

        // strictly decreasing with decreasing hint: unchanged
        let dec = GraphonParam::Separable {
            betas: vec![0.5, -0.2],
        };
        let r3 = resolve_symmetry(&dec, MonotoneHint::Decreasing);
        assert!(!r3.reflected);

        // no hint: ambiguous flag
        assert!(resolve_symmetry(&inc, MonotoneHint::None).ambiguous);
    }

    #[test]
    fn reflected_eval_matches_definition() {
        let p = GraphonParam::Separable {
            betas: vec![0.4, 0.15, -0.05],
        };
        let q = p.reflected();
        for i in 0..10 {
            let x = i as f64 / 9.0;
            for j in 0..10 {
                let y = j as f64 / 9.0;
                assert_relative_eq!(
                    q.eval(x, y),
                    p.eval(1.0 - x, 1.0 - y),
                    max_relative = 1e-10
                );
            }
        }
    }
}
