//! Closed-form engine: everything the samplers are tested against.
//!
//! Means and variances of degrees, edge counts and weights, degree-law
//! pgfs with Cauchy coefficient extraction on the unit circle, the
//! giant-component margin, expected active vertices, and triangle means.
//!
//! Degree laws come in two vertex modes. `RandomLabel` is the law of
//! d(X) for a fresh probe X ~ nu, the textbook formula. `Realized`
//! conditions on the vertex being one of the graph's own points: the
//! neighbor count seen from a sampled vertex is the size-biased count
//! minus itself, whose pgf is psi'(t)/c, plus its own loop when
//! self-edges are on. For Poisson counts the two modes coincide; for
//! Dirac(n) with a zero diagonal the realized degree is Binomial(n-1, p)
//! rather than Binomial(n, p).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::distributions::{CountingDistribution, LabelDistribution, QuadratureRule};
use crate::error::{Error, Result};
use crate::graphs::{LabeledGraph, ModelSpec, VertexModel};
use crate::label::Label;
use crate::transforms::{ArrowSet, RandomTransform, WeightFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexMode {
    /// Degree of an independent probe label X ~ nu.
    RandomLabel,
    /// Degree of a vertex of the realized graph (size-biased count).
    Realized,
}

type KernelFn = Arc<dyn Fn(&Label, &Label) -> f64 + Send + Sync>;

/// Per-pair edge-value law reduced to the three shapes the degree
/// formulas need.
enum PairLaw {
    /// 0/1 edge with activity probability q(x,y).
    Bern(KernelFn),
    /// Poisson multiplicity with intensity f(x,y).
    Pois(KernelFn),
    /// Deterministic weight v(x,y).
    Det(KernelFn),
}

/// Flag-aware kernel closure for integrals. Atomic label spaces honor the
/// value-level zero-diagonal exactly (colliding atoms carry mass);
/// continuous ones strip it, since label collisions are null sets and the
/// quadrature grid must not see spurious zeros at coincident nodes.
fn graphon_fn(kernel: &crate::transforms::GraphonKernel, atomic: bool) -> KernelFn {
    let mut k = kernel.clone();
    if !atomic {
        k.zero_diagonal = false;
    }
    Arc::new(move |x, y| k.eval(x, y))
}

fn pair_law(spec: &ModelSpec, direction: Direction, targets: Option<ArrowSet>) -> Result<PairLaw> {
    let atomic = spec.nu().is_atomic();
    let flip = matches!(direction, Direction::In);
    let oriented = |f: KernelFn| -> KernelFn {
        if flip {
            Arc::new(move |x: &Label, y: &Label| f(y, x))
        } else {
            f
        }
    };
    match (&spec.transform, &spec.weight) {
        (RandomTransform::Bernoulli { kernel }, WeightFunction::Identity)
        | (RandomTransform::Bernoulli { kernel }, WeightFunction::Indicator) => {
            Ok(PairLaw::Bern(oriented(graphon_fn(kernel, atomic))))
        }
        (RandomTransform::Poisson { kernel }, WeightFunction::Identity) => {
            Ok(PairLaw::Pois(oriented(graphon_fn(kernel, atomic))))
        }
        (RandomTransform::Poisson { kernel }, WeightFunction::Indicator) => {
            let f = graphon_fn(kernel, atomic);
            Ok(PairLaw::Bern(oriented(Arc::new(move |x, y| {
                1.0 - (-f(x, y)).exp()
            }))))
        }
        (RandomTransform::Deterministic { kernel }, WeightFunction::Identity) => {
            Ok(PairLaw::Det(oriented(graphon_fn(kernel, atomic))))
        }
        (RandomTransform::Deterministic { kernel }, WeightFunction::Indicator) => {
            let f = graphon_fn(kernel, atomic);
            Ok(PairLaw::Bern(oriented(Arc::new(move |x, y| {
                if f(x, y) > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }))))
        }
        (RandomTransform::Digraphon { digraphon }, _) => {
            if atomic {
                return Err(Error::InvalidModel(
                    "digraphon degree analytics require a diffuse label law".into(),
                ));
            }
            let d = digraphon.clone();
            let a = targets.unwrap_or(ArrowSet::ANY_EDGE);
            let f: KernelFn = match direction {
                Direction::Out => Arc::new(move |x, y| d.mass(x, y, a)),
                Direction::In => Arc::new(move |x, y| d.mass(y, x, a)),
            };
            Ok(PairLaw::Bern(f))
        }
        (t, g) => Err(Error::InvalidModel(format!(
            "degree analytics not defined for transform {t:?} with weight {g:?}"
        ))),
    }
}

impl PairLaw {
    fn kernel(&self) -> &KernelFn {
        match self {
            PairLaw::Bern(f) | PairLaw::Pois(f) | PairLaw::Det(f) => f,
        }
    }

    /// First and second moments of the per-neighbor edge value at (x, y).
    fn pair_moments(&self, x: &Label, y: &Label) -> (f64, f64) {
        match self {
            PairLaw::Bern(f) => {
                let q = f(x, y);
                (q, q)
            }
            PairLaw::Pois(f) => {
                let l = f(x, y);
                (l, l * l + l)
            }
            PairLaw::Det(f) => {
                let v = f(x, y);
                (v, v * v)
            }
        }
    }

    /// Self-loop value at x: (mean, variance), zero when self-edges off.
    fn self_moments(&self, spec: &ModelSpec, x: &Label) -> (f64, f64) {
        if !spec.self_edges {
            return (0.0, 0.0);
        }
        match self {
            PairLaw::Bern(f) => {
                let q = f(x, x);
                (q, q * (1.0 - q))
            }
            PairLaw::Pois(f) => {
                let l = f(x, x);
                (l, l)
            }
            PairLaw::Det(f) => (f(x, x), 0.0),
        }
    }
}

/// Per-vertex degree statistics with the generating function that encodes
/// the full law: a pgf for integer-valued degrees, a Laplace transform for
/// real-valued (deterministic-weight) degrees.
pub struct DegreeStats {
    pub mean: f64,
    pub variance: f64,
    pub gen: GeneratingFn,
}

pub enum GeneratingFn {
    Pgf(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
    LaplaceTransform(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl GeneratingFn {
    pub fn pgf(&self, t: Complex64) -> Option<Complex64> {
        match self {
            GeneratingFn::Pgf(f) => Some(f(t)),
            GeneratingFn::LaplaceTransform(_) => None,
        }
    }

    /// E e^{-alpha d}; derived from the pgf at e^{-alpha} for lattice laws.
    pub fn laplace(&self, alpha: f64) -> f64 {
        match self {
            GeneratingFn::LaplaceTransform(f) => f(alpha),
            GeneratingFn::Pgf(f) => f(Complex64::new((-alpha).exp(), 0.0)).re,
        }
    }
}

fn base_pgf(
    kappa: &CountingDistribution,
    mode: VertexMode,
) -> Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync> {
    let k = kappa.clone();
    match mode {
        VertexMode::RandomLabel => Arc::new(move |t| k.pgf_complex(t)),
        VertexMode::Realized => {
            let c = kappa.mean();
            Arc::new(move |t| pgf_derivative_complex(&k, t) / c)
        }
    }
}

/// d/dt of the pgf, exact per family.
pub(crate) fn pgf_derivative_complex(d: &CountingDistribution, t: Complex64) -> Complex64 {
    use CountingDistribution::*;
    match *d {
        Dirac { n } => {
            if n == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                n as f64 * t.powu(n as u32 - 1)
            }
        }
        Poisson { c } => c * (c * (t - 1.0)).exp(),
        Binomial { n, p } => n as f64 * p * (1.0 - p + p * t).powu(n as u32 - 1),
        NegativeBinomial { r, p } => {
            let psi = ((1.0 - p) / (1.0 - p * t)).powu(r as u32);
            psi * r as f64 * p / (1.0 - p * t)
        }
        UniformInt { m, n } => {
            let k = (n - m + 1) as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for x in m.max(1)..=n {
                acc += x as f64 * t.powu(x as u32 - 1);
            }
            acc / k
        }
        Zeta { s } => {
            let z = crate::distributions::special::zeta(s).unwrap();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut tp = Complex64::new(1.0, 0.0);
            for x in 1..=(1u64 << 16) {
                let coef = (x as f64).powf(1.0 - s);
                acc += coef * tp;
                if coef * tp.norm() < 1e-18 {
                    break;
                }
                tp *= t;
            }
            acc / z
        }
        Zipf { s, n } => {
            let h = crate::distributions::counting::harmonic(n, s);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut tp = Complex64::new(1.0, 0.0);
            for x in 1..=n {
                acc += (x as f64).powf(1.0 - s) * tp;
                tp *= t;
            }
            acc / h
        }
    }
}

/// Moments of the neighbor count: (c, delta^2) for a probe label,
/// (E K(K-1)/c, its variance) for a realized vertex.
fn neighbor_count_moments(kappa: &CountingDistribution, mode: VertexMode) -> (f64, f64) {
    match mode {
        VertexMode::RandomLabel => (kappa.mean(), kappa.variance()),
        VertexMode::Realized => {
            let c = kappa.mean();
            let m = kappa.factorial_moment(2) / c;
            let second_fact = kappa.factorial_moment(3) / c;
            let var = second_fact + m - m * m;
            (m, var)
        }
    }
}

/// Degree statistics at a fixed label x.
pub fn degree_stats(
    spec: &ModelSpec,
    x: &Label,
    direction: Direction,
    mode: VertexMode,
    rule: &QuadratureRule,
) -> Result<DegreeStats> {
    let stc = spec
        .stc()
        .ok_or_else(|| Error::InvalidModel("degree analytics need sampled vertices".into()))?;
    let law = pair_law(spec, direction, None)?;
    let nu = spec.nu();
    let (m1, m2) = integrate_pair_moments(&law, &nu, x, rule);
    let (count_mean, count_var) = neighbor_count_moments(&stc.kappa, mode);
    let (s_mean, s_var) = match mode {
        VertexMode::RandomLabel => (0.0, 0.0),
        VertexMode::Realized => law.self_moments(spec, x),
    };
    let mean = count_mean * m1 + s_mean;
    let variance = count_mean * (m2 - m1 * m1) + count_var * m1 * m1 + s_var;
    let gen = degree_generating_fn(spec, &stc.kappa, &law, x, mode, rule);
    Ok(DegreeStats {
        mean,
        variance,
        gen,
    })
}

fn integrate_pair_moments(
    law: &PairLaw,
    nu: &LabelDistribution,
    x: &Label,
    rule: &QuadratureRule,
) -> (f64, f64) {
    let grid = nu.grid(rule);
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (y, w) in &grid.nodes {
        let (a, b) = law.pair_moments(x, y);
        m1 += w * a;
        m2 += w * b;
    }
    (m1, m2)
}

fn degree_generating_fn(
    spec: &ModelSpec,
    kappa: &CountingDistribution,
    law: &PairLaw,
    x: &Label,
    mode: VertexMode,
    rule: &QuadratureRule,
) -> GeneratingFn {
    let base = base_pgf(kappa, mode);
    let nu = spec.nu();
    let nodes = nu.grid(rule).nodes;
    let self_gate = spec.self_edges && matches!(mode, VertexMode::Realized);
    match law {
        PairLaw::Bern(f) => {
            let a: f64 = nodes.iter().map(|(y, w)| w * f(x, y)).sum();
            let s = if self_gate { f(x, x) } else { 0.0 };
            GeneratingFn::Pgf(Arc::new(move |t| {
                let inner = Complex64::new(1.0 - a, 0.0) + a * t;
                let self_factor = Complex64::new(1.0 - s, 0.0) + s * t;
                base(inner) * self_factor
            }))
        }
        PairLaw::Pois(f) => {
            let lambdas: Vec<(f64, f64)> = nodes.iter().map(|(y, w)| (f(x, y), *w)).collect();
            let s = if self_gate { f(x, x) } else { 0.0 };
            GeneratingFn::Pgf(Arc::new(move |t| {
                // one neighbor's weight pgf: nu(exp(f(x,.)(t-1)))
                let mut inner = Complex64::new(0.0, 0.0);
                for &(l, w) in &lambdas {
                    inner += w * (l * (t - 1.0)).exp();
                }
                base(inner) * (s * (t - 1.0)).exp()
            }))
        }
        PairLaw::Det(f) => {
            let values: Vec<(f64, f64)> = nodes.iter().map(|(y, w)| (f(x, y), *w)).collect();
            let kap = kappa.clone();
            let s = if self_gate { f(x, x) } else { 0.0 };
            let realized = matches!(mode, VertexMode::Realized);
            GeneratingFn::LaplaceTransform(Arc::new(move |alpha| {
                let inner: f64 = values.iter().map(|&(v, w)| w * (-alpha * v).exp()).sum();
                let outer = if realized {
                    pgf_derivative_complex(&kap, Complex64::new(inner, 0.0)).re / kap.mean()
                } else {
                    kap.pgf(inner.clamp(0.0, 1.0))
                };
                outer * (-alpha * s).exp()
            }))
        }
    }
}

/// The degree law of a random vertex: pgf, mean, and variance, all from
/// closed-form inner integrals (no numerical differencing).
pub struct DegreeLaw {
    pub mean: f64,
    pub variance: f64,
    pub direction: Direction,
    pub mode: VertexMode,
    pub tail_mass: f64,
    pgf: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
}

impl DegreeLaw {
    pub fn pgf(&self, t: Complex64) -> Complex64 {
        (self.pgf)(t)
    }

    pub fn pgf_real(&self, t: f64) -> f64 {
        (self.pgf)(Complex64::new(t, 0.0)).re
    }
}

/// Degree distribution of Y = d(X): outer integral over x of the
/// per-vertex pgfs, plus exact mean/variance by the law of total variance.
pub fn degree_distribution(
    spec: &ModelSpec,
    direction: Direction,
    mode: VertexMode,
    rule: &QuadratureRule,
) -> Result<DegreeLaw> {
    let stc = spec
        .stc()
        .ok_or_else(|| Error::InvalidModel("degree analytics need sampled vertices".into()))?;
    let law = pair_law(spec, direction, None)?;
    let nu = spec.nu();
    let grid = nu.grid(rule);
    let (count_mean, count_var) = neighbor_count_moments(&stc.kappa, mode);
    let mut mean = 0.0;
    let mut second = 0.0;
    let mut var_within = 0.0;
    for (x, w) in &grid.nodes {
        let (m1, m2) = integrate_pair_moments(&law, &nu, x, rule);
        let (s_mean, s_var) = match mode {
            VertexMode::RandomLabel => (0.0, 0.0),
            VertexMode::Realized => law.self_moments(spec, x),
        };
        let mx = count_mean * m1 + s_mean;
        let vx = count_mean * (m2 - m1 * m1) + count_var * m1 * m1 + s_var;
        mean += w * mx;
        second += w * mx * mx;
        var_within += w * vx;
    }
    let variance = var_within + second - mean * mean;

    let base = base_pgf(&stc.kappa, mode);
    let self_gate = spec.self_edges && matches!(mode, VertexMode::Realized);
    let pgf: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync> = match &law {
        PairLaw::Bern(f) => {
            let pre: Vec<(f64, f64, f64)> = grid
                .nodes
                .iter()
                .map(|(x, w)| {
                    let a: f64 = grid.nodes.iter().map(|(y, wy)| wy * f(x, y)).sum();
                    let s = if self_gate { f(x, x) } else { 0.0 };
                    (a, s, *w)
                })
                .collect();
            Arc::new(move |t| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(a, s, w) in &pre {
                    let inner = Complex64::new(1.0 - a, 0.0) + a * t;
                    let sf = Complex64::new(1.0 - s, 0.0) + s * t;
                    acc += w * base(inner) * sf;
                }
                acc
            })
        }
        PairLaw::Pois(f) => {
            let nodes = grid.nodes.clone();
            let lam: Vec<Vec<f64>> = nodes
                .iter()
                .map(|(x, _)| nodes.iter().map(|(y, _)| f(x, y)).collect())
                .collect();
            let selfs: Vec<f64> = nodes
                .iter()
                .map(|(x, _)| if self_gate { f(x, x) } else { 0.0 })
                .collect();
            let weights: Vec<f64> = nodes.iter().map(|(_, w)| *w).collect();
            Arc::new(move |t| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, &wx) in weights.iter().enumerate() {
                    let mut inner = Complex64::new(0.0, 0.0);
                    for (j, &wy) in weights.iter().enumerate() {
                        inner += wy * (lam[i][j] * (t - 1.0)).exp();
                    }
                    acc += wx * base(inner) * (selfs[i] * (t - 1.0)).exp();
                }
                acc
            })
        }
        PairLaw::Det(_) => {
            return Err(Error::InvalidModel(
                "deterministic-weight degrees have a Laplace transform, not a pgf; \
                 use degree_stats"
                    .into(),
            ))
        }
    };
    Ok(DegreeLaw {
        mean,
        variance,
        direction,
        mode,
        tail_mass: grid.tail_mass,
        pgf,
    })
}

/// Coefficients p[0..=k_max] of a pgf by the Cauchy integral over the unit
/// circle, evaluated as an M-point discrete Fourier sum with
/// M = max(256, next power of two above 4 k_max).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub probs: Vec<f64>,
    /// Sum of the extracted coefficients.
    pub mass: f64,
    /// 1 - mass when positive: probability sitting beyond k_max.
    pub deficit: f64,
    pub truncation_warning: bool,
}

pub fn pgf_coefficients<F>(pgf: F, k_max: usize) -> CoefficientTable
where
    F: Fn(Complex64) -> Complex64,
{
    pgf_coefficients_tol(pgf, k_max, 1e-6)
}

pub fn pgf_coefficients_tol<F>(pgf: F, k_max: usize, tail_tol: f64) -> CoefficientTable
where
    F: Fn(Complex64) -> Complex64,
{
    let mut m = 256usize;
    while m < 4 * (k_max + 1) {
        m *= 2;
    }
    let samples: Vec<Complex64> = (0..m)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            pgf(Complex64::from_polar(1.0, theta))
        })
        .collect();
    let mut probs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let theta = -2.0 * std::f64::consts::PI * (j * k % m) as f64 / m as f64;
            acc += s * Complex64::from_polar(1.0, theta);
        }
        probs.push((acc.re / m as f64).clamp(0.0, 1.0));
    }
    let mass: f64 = probs.iter().sum();
    let deficit = (1.0 - mass).max(0.0);
    CoefficientTable {
        probs,
        mass,
        deficit,
        truncation_warning: deficit > tail_tol,
    }
}

/// One mean split into its diagonal (self) and cross (external) parts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EdgeMoment {
    pub self_term: f64,
    pub external_term: f64,
    pub total: f64,
    /// Undirected convention: self plus half the external term.
    pub normalized: f64,
}

impl EdgeMoment {
    fn from_terms(self_term: f64, external_term: f64) -> Self {
        EdgeMoment {
            self_term,
            external_term,
            total: self_term + external_term,
            normalized: self_term + external_term / 2.0,
        }
    }
}

/// Mean active-edge count and mean edge weight of a model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnalyticsReport {
    pub edge_count: EdgeMoment,
    pub edge_weight: EdgeMoment,
    pub tail_mass: f64,
}

/// Transform copy whose value-level zero-diagonal is stripped, for cross
/// integrals over continuous label spaces.
fn cross_transform(spec: &ModelSpec) -> RandomTransform {
    let mut t = spec.transform.clone();
    if !spec.nu().is_atomic() {
        if let Some(k) = kernel_mut(&mut t) {
            k.zero_diagonal = false;
        }
    }
    t
}

fn kernel_mut(t: &mut RandomTransform) -> Option<&mut crate::transforms::GraphonKernel> {
    match t {
        RandomTransform::Deterministic { kernel }
        | RandomTransform::Bernoulli { kernel }
        | RandomTransform::Binomial { kernel, .. }
        | RandomTransform::Poisson { kernel } => Some(kernel),
        _ => None,
    }
}

/// Closed-form mean edge count (mass of the weight function's support) and
/// mean edge weight, split into self and external terms.
pub fn edge_report(spec: &ModelSpec, rule: &QuadratureRule) -> Result<AnalyticsReport> {
    if matches!(spec.transform, RandomTransform::Digraphon { .. }) {
        let r = digraphon_edge_mean(spec, ArrowSet::ANY_EDGE, rule)?;
        return Ok(AnalyticsReport {
            edge_count: r,
            edge_weight: r,
            tail_mass: 0.0,
        });
    }
    let diag_t = &spec.transform;
    let cross_t = cross_transform(spec);
    let g = &spec.weight;
    let gate = if spec.self_edges { 1.0 } else { 0.0 };
    match &spec.vertices {
        VertexModel::Sampled { kappa, nu } => {
            let c = kappa.mean();
            let fm2 = kappa.factorial_moment(2);
            let grid = nu.grid(rule);
            let mut count_self = 0.0;
            let mut weight_self = 0.0;
            let mut count_ext = 0.0;
            let mut weight_ext = 0.0;
            for (x, w) in &grid.nodes {
                count_self += w * g.support_mass_under(diag_t, x, x)?;
                weight_self += w * g.mean_under(diag_t, x, x)?;
                for (y, wy) in &grid.nodes {
                    count_ext += w * wy * g.support_mass_under(&cross_t, x, y)?;
                    weight_ext += w * wy * g.mean_under(&cross_t, x, y)?;
                }
            }
            Ok(AnalyticsReport {
                edge_count: EdgeMoment::from_terms(gate * c * count_self, fm2 * count_ext),
                edge_weight: EdgeMoment::from_terms(gate * c * weight_self, fm2 * weight_ext),
                tail_mass: grid.tail_mass,
            })
        }
        VertexModel::Fixed { .. } => {
            let faiw = spec.faiw().expect("fixed vertices");
            let n = faiw.len();
            let mut cs = 0.0;
            let mut ws = 0.0;
            let mut ce = 0.0;
            let mut we = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let z = faiw.z(i, j);
                    let (x, y) = (&faiw.atoms[i], &faiw.atoms[j]);
                    if i == j {
                        cs += z * g.support_mass_under(diag_t, x, y)?;
                        ws += z * g.mean_under(diag_t, x, y)?;
                    } else {
                        ce += z * g.support_mass_under(diag_t, x, y)?;
                        we += z * g.mean_under(diag_t, x, y)?;
                    }
                }
            }
            Ok(AnalyticsReport {
                edge_count: EdgeMoment::from_terms(gate * cs, ce),
                edge_weight: EdgeMoment::from_terms(gate * ws, we),
                tail_mass: 0.0,
            })
        }
    }
}

/// Digraphon mean: c nu(diagonal mass) + E K(K-1) (nu x nu)(pair mass),
/// for an arrow-state target set.
pub fn digraphon_edge_mean(
    spec: &ModelSpec,
    targets: ArrowSet,
    rule: &QuadratureRule,
) -> Result<EdgeMoment> {
    let digraphon = match &spec.transform {
        RandomTransform::Digraphon { digraphon } => digraphon,
        _ => return Err(Error::InvalidModel("not a digraphon model".into())),
    };
    let stc = spec
        .stc()
        .ok_or_else(|| Error::InvalidModel("digraphon models sample their vertices".into()))?;
    let c = stc.kappa.mean();
    let fm2 = stc.kappa.factorial_moment(2);
    let nu = spec.nu();
    let grid = nu.grid(rule);
    let gate = if spec.self_edges { 1.0 } else { 0.0 };
    let mut diag = 0.0;
    for (x, w) in &grid.nodes {
        diag += w * digraphon.mass(x, x, targets);
    }
    let mut cross = 0.0;
    for (x, wx) in &grid.nodes {
        for (y, wy) in &grid.nodes {
            // coincident grid nodes are still off-diagonal pairs: use the
            // Q components, not the diagonal R kernel
            cross += wx
                * wy
                * if x == y {
                    off_diagonal_digraphon_mass(digraphon, x, targets)
                } else {
                    digraphon.mass(x, y, targets)
                };
        }
    }
    Ok(EdgeMoment::from_terms(gate * c * diag, fm2 * cross))
}

fn off_diagonal_digraphon_mass(
    d: &crate::transforms::Digraphon,
    x: &Label,
    targets: ArrowSet,
) -> f64 {
    let mut m = 0.0;
    if targets.contains(false, false) {
        m += d.f00.eval(x, x);
    }
    if targets.contains(false, true) {
        m += d.f01.eval(x, x);
    }
    if targets.contains(true, false) {
        m += d.f10.eval(x, x);
    }
    if targets.contains(true, true) {
        m += d.f11.eval(x, x);
    }
    m
}

/// Ordered pairs of a realized digraphon graph whose arrow state lies in
/// the target set; the Monte Carlo counterpart of `digraphon_edge_mean`.
pub fn arrow_state_count(g: &LabeledGraph, targets: ArrowSet) -> u64 {
    let n = g.n_vertices();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = g.weight(i, j) > 0.0;
            let b = g.weight(j, i) > 0.0;
            if targets.contains(a, b) {
                count += 1;
            }
        }
        let s = g.weight(i, i) > 0.0;
        if targets.contains(s, s) {
            count += 1;
        }
    }
    count
}

/// Giant-component verdict from the random-label degree moments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GcVerdict {
    /// E Y^2 - 2 E Y.
    pub margin: f64,
    pub has_giant_component: bool,
}

pub fn giant_component(spec: &ModelSpec, rule: &QuadratureRule) -> Result<GcVerdict> {
    if spec.directed {
        return Err(Error::InvalidModel(
            "giant-component criterion applies to undirected models".into(),
        ));
    }
    let stc = spec
        .stc()
        .ok_or_else(|| Error::InvalidModel("giant-component needs sampled vertices".into()))?;
    if !matches!(spec.transform, RandomTransform::Bernoulli { .. }) {
        return Err(Error::InvalidModel(
            "giant-component criterion is stated for Bernoulli models".into(),
        ));
    }
    let law = pair_law(spec, Direction::Out, None)?;
    let nu = spec.nu();
    let grid = nu.grid(rule);
    let c = stc.kappa.mean();
    let fm2 = stc.kappa.factorial_moment(2);
    let mut int_a = 0.0;
    let mut int_a2 = 0.0;
    for (x, w) in &grid.nodes {
        let a: f64 = grid
            .nodes
            .iter()
            .map(|(y, wy)| wy * law.kernel()(x, y))
            .sum();
        int_a += w * a;
        int_a2 += w * a * a;
    }
    // E Y = c nu(a); E Y(Y-1) = E K(K-1) nu(a^2)
    let margin = fm2 * int_a2 - c * int_a;
    Ok(GcVerdict {
        margin,
        has_giant_component: margin > 0.0,
    })
}

/// Mean number of active vertices. A realized vertex is inactive exactly
/// when its loop is absent and none of its K-1 co-vertices links to it,
/// giving c * nu(1 - (1 - q(x,x)) psi'(1 - a(x))/c); for Poisson counts
/// psi'/c = psi and the zero-diagonal case reduces to c nu(1 - e^{-c a}).
pub fn mean_active_vertices(spec: &ModelSpec, rule: &QuadratureRule) -> Result<f64> {
    let stc = spec
        .stc()
        .ok_or_else(|| Error::InvalidModel("active-vertex mean needs sampled vertices".into()))?;
    let nu = spec.nu();
    let grid = nu.grid(rule);
    let c = stc.kappa.mean();
    let out = pair_law(spec, Direction::Out, None)?;
    let activity = activity_fn(&out);
    let in_activity = if spec.directed {
        Some(activity_fn(&pair_law(spec, Direction::In, None)?))
    } else {
        None
    };
    let mut total = 0.0;
    for (x, w) in &grid.nodes {
        let miss: f64 = grid
            .nodes
            .iter()
            .map(|(y, wy)| {
                let out_miss = 1.0 - activity(x, y);
                let in_miss = in_activity.as_ref().map(|f| 1.0 - f(x, y)).unwrap_or(1.0);
                wy * out_miss * in_miss
            })
            .sum();
        let q_self = if spec.self_edges { activity(x, x) } else { 0.0 };
        let survive = pgf_derivative_complex(&stc.kappa, Complex64::new(miss, 0.0)).re / c;
        total += w * (1.0 - (1.0 - q_self) * survive);
    }
    Ok(c * total)
}

fn activity_fn(law: &PairLaw) -> Box<dyn Fn(&Label, &Label) -> f64> {
    match law {
        PairLaw::Bern(f) => {
            let f = f.clone();
            Box::new(move |x, y| f(x, y))
        }
        PairLaw::Pois(f) => {
            let f = f.clone();
            Box::new(move |x, y| 1.0 - (-f(x, y)).exp())
        }
        PairLaw::Det(f) => {
            let f = f.clone();
            Box::new(move |x, y| if f(x, y) > 0.0 { 1.0 } else { 0.0 })
        }
    }
}

/// Mean weight kernel W(x,y) = E g(phi(x,y)) as a closure for the
/// decomposition and estimation layers; value-level diagonal handling
/// follows the label law's atomicity.
pub fn mean_weight_kernel(spec: &ModelSpec) -> Result<KernelFn> {
    if matches!(spec.transform, RandomTransform::Digraphon { .. }) {
        return Err(Error::InvalidModel(
            "digraphon models use arrow-set means".into(),
        ));
    }
    let t = cross_transform(spec);
    let g = spec.weight.clone();
    Ok(Arc::new(move |x, y| g.mean_under(&t, x, y).unwrap_or(0.0)))
}

/// Mean triangle weight at a probe label z:
/// E K(K-1) * double integral of W(x,y) W(y,z) W(z,x) over distinct labels.
pub fn triangle_mean(spec: &ModelSpec, z: &Label, rule: &QuadratureRule) -> Result<f64> {
    let stc = spec
        .stc()
        .ok_or_else(|| Error::InvalidModel("triangle mean needs sampled vertices".into()))?;
    let w = mean_weight_kernel(spec)?;
    let nu = spec.nu();
    let atomic = nu.is_atomic();
    let grid = nu.grid(rule);
    let fm2 = stc.kappa.factorial_moment(2);
    let mut acc = 0.0;
    for (x, wx) in &grid.nodes {
        if atomic && x == z {
            continue;
        }
        for (y, wy) in &grid.nodes {
            if atomic && (y == z || y == x) {
                continue;
            }
            acc += wx * wy * w(x, y) * w(y, z) * w(z, x);
        }
    }
    Ok(fm2 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{CountingDistribution, LabelDistribution};
    use crate::graphs::{generate, ModelSpec, VertexModel};
    use crate::transforms::{Digraphon, GraphonKernel, KernelForm, VertexFn};
    use approx::assert_relative_eq;

    fn rule() -> QuadratureRule {
        QuadratureRule::default()
    }

    fn bernoulli_spec(kappa: CountingDistribution, form: KernelForm, zero_diag: bool) -> ModelSpec {
        let mut kernel = GraphonKernel::new(form);
        if zero_diag {
            kernel = kernel.with_zero_diagonal();
        }
        ModelSpec {
            vertices: VertexModel::Sampled {
                kappa,
                nu: LabelDistribution::LebesgueUnit,
            },
            transform: RandomTransform::Bernoulli { kernel },
            weight: WeightFunction::Identity,
            directed: false,
            self_edges: !zero_diag,
            ordered_dag: false,
        }
    }

    #[test]
    fn er_realized_degree_is_binomial_n_minus_1() {
        let spec = bernoulli_spec(
            CountingDistribution::dirac(20).unwrap(),
            KernelForm::Constant { p: 0.3 },
            true,
        );
        let x = Label::Scalar(0.4);
        let st = degree_stats(&spec, &x, Direction::Out, VertexMode::Realized, &rule()).unwrap();
        assert_relative_eq!(st.mean, 19.0 * 0.3, max_relative = 1e-10);
        assert_relative_eq!(st.variance, 19.0 * 0.3 * 0.7, max_relative = 1e-10);
        let want = CountingDistribution::binomial(19, 0.3).unwrap();
        for k in [0.0, 0.3, 0.8, 1.0] {
            let got = st.gen.pgf(Complex64::new(k, 0.0)).unwrap().re;
            assert_relative_eq!(got, want.pgf(k), max_relative = 1e-10);
        }
    }

    #[test]
    fn er_random_label_degree_is_binomial_n() {
        let spec = bernoulli_spec(
            CountingDistribution::dirac(20).unwrap(),
            KernelForm::Constant { p: 0.3 },
            true,
        );
        let x = Label::Scalar(0.4);
        let st = degree_stats(&spec, &x, Direction::Out, VertexMode::RandomLabel, &rule()).unwrap();
        assert_relative_eq!(st.mean, 20.0 * 0.3, max_relative = 1e-10);
        assert_relative_eq!(st.variance, 20.0 * 0.3 * 0.7, max_relative = 1e-10);
    }

    #[test]
    fn power_law_degree_mean() {
        // E d(x) = c / ((1+b)(1+bx)^2), frozen at c=30, b=1, x=0.5
        let spec = bernoulli_spec(
            CountingDistribution::poisson(30.0).unwrap(),
            KernelForm::PowerLaw { b: 1.0 },
            true,
        );
        let st = degree_stats(
            &spec,
            &Label::Scalar(0.5),
            Direction::Out,
            VertexMode::RandomLabel,
            &rule(),
        )
        .unwrap();
        assert_relative_eq!(st.mean, 6.666_666_666_666_667, max_relative = 1e-10);
    }

    #[test]
    fn zero_kernel_degree() {
        let spec = bernoulli_spec(
            CountingDistribution::poisson(5.0).unwrap(),
            KernelForm::Constant { p: 0.0 },
            false,
        );
        let st = degree_stats(
            &spec,
            &Label::Scalar(0.2),
            Direction::Out,
            VertexMode::RandomLabel,
            &rule(),
        )
        .unwrap();
        assert_eq!(st.mean, 0.0);
        assert_eq!(st.variance, 0.0);
        let law =
            degree_distribution(&spec, Direction::Out, VertexMode::RandomLabel, &rule()).unwrap();
        assert_relative_eq!(law.pgf_real(0.0), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn er_degree_distribution_coefficients() {
        let spec = bernoulli_spec(
            CountingDistribution::dirac(20).unwrap(),
            KernelForm::Constant { p: 0.3 },
            true,
        );
        let law =
            degree_distribution(&spec, Direction::Out, VertexMode::Realized, &rule()).unwrap();
        let table = pgf_coefficients(|t| law.pgf(t), 19);
        let want = CountingDistribution::binomial(19, 0.3).unwrap();
        for (k, p) in table.probs.iter().enumerate() {
            assert!((p - want.pmf(k as u64)).abs() < 1e-10, "k={k}");
        }
        assert!(!table.truncation_warning);
    }

    #[test]
    fn poisson_separable_degree_pgf_matches_erf_closed_form() {
        // kappa = Poisson(30), Bernoulli power-law f = g(x)g(y), b = 1:
        // psi_Y(0.3) frozen from the erf closed form
        let spec = bernoulli_spec(
            CountingDistribution::poisson(30.0).unwrap(),
            KernelForm::PowerLaw { b: 1.0 },
            true,
        );
        let law =
            degree_distribution(&spec, Direction::Out, VertexMode::RandomLabel, &rule()).unwrap();
        assert_relative_eq!(
            law.pgf_real(0.3),
            0.018_829_120_035_691_7,
            max_relative = 1e-9
        );
        // mean: c (nu x nu) f = 30/4
        assert_relative_eq!(law.mean, 7.5, max_relative = 1e-10);
    }

    #[test]
    fn pgf_coefficient_examples() {
        // Poisson(2): p_k = 2^k e^{-2}/k!
        let pois = CountingDistribution::poisson(2.0).unwrap();
        let t = pgf_coefficients(|z| pois.pgf_complex(z), 12);
        assert_relative_eq!(t.probs[0], 0.135_335_283_236_612_7, max_relative = 1e-10);
        assert_relative_eq!(t.probs[7], 0.003_437_086_558_390_16, max_relative = 1e-8);

        // t^3: point mass at 3
        let t3 = pgf_coefficients(|z| z.powu(3), 5);
        assert_eq!(t3.probs[3], 1.0);
        assert!(t3.probs[0].abs() < 1e-12 && t3.probs[2].abs() < 1e-12);

        // Binomial(4, 0.5): p_2 = 0.375
        let b = CountingDistribution::binomial(4, 0.5).unwrap();
        let tb = pgf_coefficients(|z| b.pgf_complex(z), 4);
        assert_relative_eq!(tb.probs[2], 0.375, max_relative = 1e-10);
        assert!(tb.deficit < 1e-9);
    }

    #[test]
    fn truncation_warning_fires() {
        let pois = CountingDistribution::poisson(9.0).unwrap();
        let t = pgf_coefficients(|z| pois.pgf_complex(z), 3);
        assert!(t.truncation_warning);
        assert!(t.deficit > 0.9);
    }

    #[test]
    fn er_edge_report() {
        let spec = ModelSpec::erdos_renyi(10, 0.3).unwrap();
        let r = edge_report(&spec, &rule()).unwrap();
        // C(10,2) p = 13.5 for the normalized count
        assert_relative_eq!(r.edge_count.normalized, 13.5, max_relative = 1e-10);
        assert_eq!(r.edge_count.self_term, 0.0);
        assert_relative_eq!(
            r.edge_count.total,
            r.edge_count.self_term + r.edge_count.external_term,
            max_relative = 1e-12
        );
        // Bernoulli identity weight: count == weight
        assert_relative_eq!(
            r.edge_weight.normalized,
            r.edge_count.normalized,
            max_relative = 1e-12
        );
    }

    #[test]
    fn exponential_graphon_external_term() {
        let c = 7.0;
        let b = 2.0f64;
        let spec = bernoulli_spec(
            CountingDistribution::poisson(c).unwrap(),
            KernelForm::Exponential { b },
            true,
        );
        let r = edge_report(&spec, &rule()).unwrap();
        let fm2 = c * c;
        let expect = fm2 * ((1.0 - (-b).exp()) / b).powi(2);
        assert_relative_eq!(r.edge_count.external_term, expect, max_relative = 1e-10);
    }

    #[test]
    fn zero_weight_function_empty_support() {
        let mut spec = ModelSpec::erdos_renyi(10, 0.3).unwrap();
        spec.weight = WeightFunction::Zero;
        let r = edge_report(&spec, &rule()).unwrap();
        assert_eq!(r.edge_count.total, 0.0);
        assert_eq!(r.edge_weight.total, 0.0);
    }

    #[test]
    fn gc_thresholds() {
        // Poisson kappa, constant p: GC iff c > 1 and p > 1/c
        let gc = |c: f64, p: f64| {
            let spec = bernoulli_spec(
                CountingDistribution::poisson(c).unwrap(),
                KernelForm::Constant { p },
                true,
            );
            giant_component(&spec, &rule()).unwrap()
        };
        assert!(gc(4.0, 0.3).has_giant_component);
        assert!(!gc(4.0, 0.2).has_giant_component);
        assert!(!gc(0.8, 0.9).has_giant_component);

        // Dirac(n): GC iff p > 1/(n-1), n >= 3
        let gcd = |n: u64, p: f64| {
            let spec = bernoulli_spec(
                CountingDistribution::dirac(n).unwrap(),
                KernelForm::Constant { p },
                true,
            );
            giant_component(&spec, &rule()).unwrap()
        };
        assert!(gcd(5, 0.26).has_giant_component);
        assert!(!gcd(5, 0.24).has_giant_component);
        assert!(!gcd(2, 0.9).has_giant_component);
    }

    #[test]
    fn gc_margin_root_is_analytic() {
        // bisection on p for Poisson kappa locates 1/c within 1e-9
        let c = 3.7;
        let margin = |p: f64| {
            let spec = bernoulli_spec(
                CountingDistribution::poisson(c).unwrap(),
                KernelForm::Constant { p },
                true,
            );
            giant_component(&spec, &rule()).unwrap().margin
        };
        let (mut lo, mut hi) = (1e-6, 1.0);
        for _ in 0..60 {
            let mid = (lo + hi) / 2.0;
            if margin(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((hi - 1.0 / c).abs() < 1e-9, "root {hi}");
    }

    #[test]
    fn active_vertices_poisson_er() {
        // Poisson kappa with constant p, zero diagonal: c(1 - e^{-cp})
        let c = 6.0;
        let p = 0.4;
        let spec = bernoulli_spec(
            CountingDistribution::poisson(c).unwrap(),
            KernelForm::Constant { p },
            true,
        );
        let v = mean_active_vertices(&spec, &rule()).unwrap();
        assert_relative_eq!(v, c * (1.0 - (-c * p).exp()), max_relative = 1e-10);
        // p -> 0 gives 0
        let spec0 = bernoulli_spec(
            CountingDistribution::poisson(c).unwrap(),
            KernelForm::Constant { p: 0.0 },
            true,
        );
        assert!(mean_active_vertices(&spec0, &rule()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn active_vertices_exponential_graphon_ei_form() {
        // separable exponential graphon g(x) = e^{-bx}: nu e^{-c a(x)} has
        // an Ei closed form, frozen at b=2, c=10
        let b = 2.0f64;
        let c = 10.0f64;
        let g = move |x: f64| (-b * x).exp();
        let spec = ModelSpec {
            vertices: VertexModel::Sampled {
                kappa: CountingDistribution::poisson(c).unwrap(),
                nu: LabelDistribution::LebesgueUnit,
            },
            transform: RandomTransform::Bernoulli {
                kernel: GraphonKernel {
                    form: KernelForm::Custom(crate::transforms::CustomKernel(Arc::new(
                        move |x: &Label, y: &Label| {
                            let nug = (1.0 - (-b).exp()) / b;
                            g(x.value()) * g(y.value()) * nug / nug
                        },
                    ))),
                    symmetric: true,
                    zero_diagonal: true,
                },
            },
            weight: WeightFunction::Identity,
            directed: false,
            self_edges: false,
            ordered_dag: false,
        };
        let v = mean_active_vertices(&spec, &rule()).unwrap();
        // nu e^{-ca} frozen from (Ei(-c nu(g)) - Ei(-c e^{-b} nu(g)))/b
        let nu_e = 0.232_862_749_489_411;
        assert_relative_eq!(v, c * (1.0 - nu_e), max_relative = 1e-9);
    }

    #[test]
    fn triangle_examples() {
        // W == 0
        let zero = bernoulli_spec(
            CountingDistribution::poisson(4.0).unwrap(),
            KernelForm::Constant { p: 0.0 },
            true,
        );
        assert_eq!(
            triangle_mean(&zero, &Label::Scalar(0.5), &rule()).unwrap(),
            0.0
        );
        // constant p: (c^2 + d^2 - c) p^3
        let c = 5.0;
        let p = 0.4;
        let spec = bernoulli_spec(
            CountingDistribution::poisson(c).unwrap(),
            KernelForm::Constant { p },
            true,
        );
        let t = triangle_mean(&spec, &Label::Scalar(0.5), &rule()).unwrap();
        assert_relative_eq!(t, c * c * p * p * p, max_relative = 1e-10);
    }

    #[test]
    fn in_out_symmetry_for_symmetric_kernels() {
        let spec = bernoulli_spec(
            CountingDistribution::poisson(8.0).unwrap(),
            KernelForm::PowerLaw { b: 1.5 },
            true,
        );
        let x = Label::Scalar(0.3);
        let o = degree_stats(&spec, &x, Direction::Out, VertexMode::RandomLabel, &rule()).unwrap();
        let i = degree_stats(&spec, &x, Direction::In, VertexMode::RandomLabel, &rule()).unwrap();
        assert_eq!(o.mean, i.mean);
        assert_eq!(o.variance, i.variance);
    }

    fn digraphon_spec(c: f64) -> ModelSpec {
        ModelSpec {
            vertices: VertexModel::Sampled {
                kappa: CountingDistribution::poisson(c).unwrap(),
                nu: LabelDistribution::LebesgueUnit,
            },
            transform: RandomTransform::Digraphon {
                digraphon: Digraphon {
                    f00: GraphonKernel::constant(0.3),
                    f01: GraphonKernel::constant(0.25).asymmetric(),
                    f10: GraphonKernel::constant(0.25).asymmetric(),
                    f11: GraphonKernel::constant(0.2),
                    diag: VertexFn::Constant { v: 0.5 },
                },
            },
            weight: WeightFunction::Identity,
            directed: true,
            self_edges: true,
            ordered_dag: false,
        }
    }

    #[test]
    fn digraphon_mean_edges() {
        let c = 6.0;
        let spec = digraphon_spec(c);
        let m = digraphon_edge_mean(&spec, ArrowSet::ANY_EDGE, &rule()).unwrap();
        // c nu(g) + c^2 (f01 + f10 + f11)
        assert_relative_eq!(m.self_term, c * 0.5, max_relative = 1e-10);
        assert_relative_eq!(m.external_term, c * c * 0.7, max_relative = 1e-10);
        // bidirected only
        let b = digraphon_edge_mean(&spec, ArrowSet::BIDIRECTED, &rule()).unwrap();
        assert_relative_eq!(b.total, c * 0.5 + c * c * 0.2, max_relative = 1e-10);
    }

    #[test]
    fn degree_distribution_tv_against_sampled_graphs() {
        // realized-mode degree law vs empirical histogram, Poisson kappa
        let spec = bernoulli_spec(
            CountingDistribution::poisson(12.0).unwrap(),
            KernelForm::PowerLaw { b: 1.0 },
            true,
        );
        let law =
            degree_distribution(&spec, Direction::Out, VertexMode::Realized, &rule()).unwrap();
        let kmax = 40;
        let table = pgf_coefficients(|t| law.pgf(t), kmax);
        let mut hist = vec![0u64; kmax + 1];
        let mut total = 0u64;
        let mut seed = 0;
        while total < 100_000 {
            let g = generate(&spec, seed).unwrap();
            seed += 1;
            for i in 0..g.n_vertices() {
                let d = g.out_degree(i) as usize;
                if d <= kmax {
                    hist[d] += 1;
                }
                total += 1;
            }
        }
        let mut tv = 0.0;
        for k in 0..=kmax {
            tv += (hist[k] as f64 / total as f64 - table.probs[k]).abs();
        }
        assert!(tv / 2.0 <= 0.02, "TV {}", tv / 2.0);
    }

    #[test]
    fn poisson_transform_degree_tv() {
        // Poisson edge multiplicities: compound pgf vs sampled histogram
        let mut spec = bernoulli_spec(
            CountingDistribution::poisson(10.0).unwrap(),
            KernelForm::Exponential { b: 1.0 },
            true,
        );
        spec.transform = RandomTransform::Poisson {
            kernel: GraphonKernel::new(KernelForm::Exponential { b: 1.0 }).with_zero_diagonal(),
        };
        let law =
            degree_distribution(&spec, Direction::Out, VertexMode::Realized, &rule()).unwrap();
        let kmax = 50;
        let table = pgf_coefficients(|t| law.pgf(t), kmax);
        let mut hist = vec![0u64; kmax + 1];
        let mut total = 0u64;
        let mut seed = 0;
        while total < 60_000 {
            let g = generate(&spec, seed).unwrap();
            seed += 1;
            for i in 0..g.n_vertices() {
                let d = g.out_degree(i) as usize;
                if d <= kmax {
                    hist[d] += 1;
                }
                total += 1;
            }
        }
        let mut tv = 0.0;
        for k in 0..=kmax {
            tv += (hist[k] as f64 / total as f64 - table.probs[k]).abs();
        }
        assert!(tv / 2.0 <= 0.02, "TV {}", tv / 2.0);
    }

    #[test]
    fn degree_mean_matches_coefficients() {
        let spec = bernoulli_spec(
            CountingDistribution::poisson(6.0).unwrap(),
            KernelForm::Exponential { b: 1.0 },
            true,
        );
        let law =
            degree_distribution(&spec, Direction::Out, VertexMode::RandomLabel, &rule()).unwrap();
        let table = pgf_coefficients(|t| law.pgf(t), 60);
        let mean_from_probs: f64 = table
            .probs
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum();
        assert!(
            (mean_from_probs - law.mean).abs() <= 1e-6 + 60.0 * table.deficit,
            "{mean_from_probs} vs {}",
            law.mean
        );
    }
}
