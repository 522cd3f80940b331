//! Edge weight transformations.
//!
//! A deterministic kernel assigns each ordered label pair a weight; a
//! random transformation assigns it a weight *law* through its marginal
//! transition kernel. Mean-measure analytics only ever need that marginal,
//! which is why every transform here exposes closed-form means alongside
//! its seeded sampler.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::distributions::{LabelDistribution, QuadratureRule};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::rng;

/// Opaque user kernel; never serialized.
#[derive(Clone)]
pub struct CustomKernel(pub Arc<dyn Fn(&Label, &Label) -> f64 + Send + Sync>);

impl std::fmt::Debug for CustomKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("CustomKernel(..)")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelForm {
    /// f(x,y) = p.
    Constant { p: f64 },
    /// f(x,y) = (1+bx)^{-2} (1+by)^{-2} on [0,1].
    PowerLaw { b: f64 },
    /// f(x,y) = exp(-b(x+y)) on [0,1].
    Exponential { b: f64 },
    /// Stochastic block kernel: `boundaries` are the inner cut points of a
    /// partition of [0,1], probs[i][j] the block probabilities.
    Block {
        boundaries: Vec<f64>,
        probs: Vec<Vec<f64>>,
    },
    /// f(x,y) = <x^a, y^a> / dim on [0,1]^dim.
    DotProduct { a: f64, dim: usize },
    /// f(x,y) = sum_ij theta[i][j] phi_i(x) phi_j(y) in the orthonormal
    /// Legendre basis on [0,1]; coeffs are row-major order x order.
    Legendre { order: usize, coeffs: Vec<f64> },
    /// f(x,y) = x y / m with numeric labels; the soft fixed-degree kernel.
    SoftDegree { m: f64 },
    /// Indicator of (distinct) prime label pairs.
    PrimeIndicator,
    /// Layered feed-forward kernel on {1..n}: f(x,y) = 1(y = x+1) p[x-1].
    FeedForward { probs: Vec<f64> },
    #[serde(skip)]
    Custom(CustomKernel),
}

/// A (possibly asymmetric) deterministic kernel with range/diagonal flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphonKernel {
    pub form: KernelForm,
    /// Declares f(x,y) = f(y,x); checked on probes at validation.
    pub symmetric: bool,
    /// Forces f(x,x) = 0.
    pub zero_diagonal: bool,
}

impl GraphonKernel {
    pub fn new(form: KernelForm) -> Self {
        let symmetric = !matches!(form, KernelForm::FeedForward { .. });
        GraphonKernel {
            form,
            symmetric,
            zero_diagonal: false,
        }
    }

    pub fn constant(p: f64) -> Self {
        GraphonKernel::new(KernelForm::Constant { p })
    }

    pub fn with_zero_diagonal(mut self) -> Self {
        self.zero_diagonal = true;
        self
    }

    pub fn asymmetric(mut self) -> Self {
        self.symmetric = false;
        self
    }

    /// Kernel value; respects the zero-diagonal flag.
    pub fn eval(&self, x: &Label, y: &Label) -> f64 {
        if self.zero_diagonal && x == y {
            return 0.0;
        }
        self.eval_raw(x, y)
    }

    fn eval_raw(&self, x: &Label, y: &Label) -> f64 {
        match &self.form {
            KernelForm::Constant { p } => *p,
            KernelForm::PowerLaw { b } => {
                (1.0 + b * x.value()).powi(-2) * (1.0 + b * y.value()).powi(-2)
            }
            KernelForm::Exponential { b } => (-b * (x.value() + y.value())).exp(),
            KernelForm::Block { boundaries, probs } => {
                let i = block_index(boundaries, x.value());
                let j = block_index(boundaries, y.value());
                probs[i][j]
            }
            KernelForm::DotProduct { a, dim } => {
                let (u, v) = (x.coords(), y.coords());
                debug_assert_eq!(u.len(), *dim);
                u.iter()
                    .zip(v)
                    .map(|(p, q)| p.powf(*a) * q.powf(*a))
                    .sum::<f64>()
                    / *dim as f64
            }
            KernelForm::Legendre { order, coeffs } => {
                let mut acc = 0.0;
                for i in 0..*order {
                    let pi = crate::distributions::special::legendre_orthonormal(i + 1, x.value());
                    for j in 0..*order {
                        let pj =
                            crate::distributions::special::legendre_orthonormal(j + 1, y.value());
                        acc += coeffs[i * order + j] * pi * pj;
                    }
                }
                acc
            }
            KernelForm::SoftDegree { m } => x.value() * y.value() / m,
            KernelForm::PrimeIndicator => {
                let both = x
                    .as_index()
                    .zip(y.as_index())
                    .is_some_and(|(a, b)| {
                        crate::distributions::special::is_prime(a)
                            && crate::distributions::special::is_prime(b)
                    });
                if both {
                    1.0
                } else {
                    0.0
                }
            }
            KernelForm::FeedForward { probs } => {
                let (a, b) = (x.value() as i64, y.value() as i64);
                if b == a + 1 && (1..=probs.len() as i64).contains(&a) {
                    probs[(a - 1) as usize]
                } else {
                    0.0
                }
            }
            KernelForm::Custom(f) => (f.0)(x, y),
        }
    }

    /// Range/shape validation on the quadrature grid plus 1000 seeded
    /// random probes. `unit_range` additionally rejects values outside
    /// [0,1] by more than 1e-9.
    pub fn validate(
        &self,
        nu: &LabelDistribution,
        rule: &QuadratureRule,
        unit_range: bool,
    ) -> Result<()> {
        let grid = nu.grid(rule);
        let mut probes: Vec<Label> = grid.nodes.iter().map(|(x, _)| x.clone()).collect();
        let mut r = rng::master(0x6b65726e);
        for _ in 0..1000 {
            probes.push(nu.sample(&mut r));
        }
        // cap the pair grid so validation stays cheap on big discrete spaces
        let step = (probes.len() / 128).max(1);
        for (i, x) in probes.iter().step_by(step).enumerate() {
            for (j, y) in probes.iter().step_by(step).enumerate() {
                let v = self.eval(x, y);
                if !v.is_finite() || v < -1e-9 {
                    return Err(Error::InvalidKernel(format!(
                        "kernel value {v} at probe pair ({i},{j})"
                    )));
                }
                if unit_range && v > 1.0 + 1e-9 {
                    return Err(Error::InvalidKernel(format!(
                        "kernel value {v} > 1 at probe pair ({i},{j})"
                    )));
                }
                if self.symmetric {
                    let w = self.eval(y, x);
                    if (v - w).abs() > 1e-9 {
                        return Err(Error::InvalidKernel(format!(
                            "kernel marked symmetric but f(x,y)={v}, f(y,x)={w}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn block_index(boundaries: &[f64], x: f64) -> usize {
    boundaries.iter().take_while(|&&b| x >= b).count()
}

/// One-argument nonnegative function on labels (digraphon diagonal law,
/// spin external fields, separable factors).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexFn {
    Constant { v: f64 },
    /// (1+bx)^{-2}
    PowerLaw { b: f64 },
    /// exp(-bx)
    ExpNeg { b: f64 },
    #[serde(skip)]
    Custom(CustomVertexFn),
}

#[derive(Clone)]
pub struct CustomVertexFn(pub Arc<dyn Fn(&Label) -> f64 + Send + Sync>);

impl std::fmt::Debug for CustomVertexFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("CustomVertexFn(..)")
    }
}

impl VertexFn {
    pub fn eval(&self, x: &Label) -> f64 {
        match self {
            VertexFn::Constant { v } => *v,
            VertexFn::PowerLaw { b } => (1.0 + b * x.value()).powi(-2),
            VertexFn::ExpNeg { b } => (-b * x.value()).exp(),
            VertexFn::Custom(f) => (f.0)(x),
        }
    }
}

/// Arrow-state subsets for digraphon targets, one bit per state (a,b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSet(pub u8);

impl ArrowSet {
    pub const EMPTY: ArrowSet = ArrowSet(0);
    pub const ALL: ArrowSet = ArrowSet(0b1111);
    /// {(0,1), (1,0)}: singly directed edges.
    pub const DIRECTED: ArrowSet = ArrowSet(0b0110);
    /// {(1,1)}: bidirected edges.
    pub const BIDIRECTED: ArrowSet = ArrowSet(0b1000);
    /// Any edge at all: directed or bidirected.
    pub const ANY_EDGE: ArrowSet = ArrowSet(0b1110);

    pub fn contains(&self, a: bool, b: bool) -> bool {
        self.0 >> ((a as u8) * 2 + b as u8) & 1 == 1
    }

    pub fn insert(&mut self, a: bool, b: bool) {
        self.0 |= 1 << ((a as u8) * 2 + b as u8);
    }

    /// The mass P((x,y), A) is order-independent only when (0,1) and (1,0)
    /// are jointly in or out of A.
    pub fn is_order_symmetric(&self) -> bool {
        self.contains(false, true) == self.contains(true, false)
    }
}

/// Digraphon transformation: joint law of the ordered arrow pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Digraphon {
    pub f00: GraphonKernel,
    pub f01: GraphonKernel,
    pub f10: GraphonKernel,
    pub f11: GraphonKernel,
    /// Diagonal self-loop probability g(x).
    pub diag: VertexFn,
}

impl Digraphon {
    /// Checks f00+f01+f10+f11 = 1, symmetry of f00/f11, and the transpose
    /// relation f01(x,y) = f10(y,x), all on seeded probes.
    pub fn validate(&self, nu: &LabelDistribution, rule: &QuadratureRule) -> Result<()> {
        for k in [&self.f00, &self.f01, &self.f10, &self.f11] {
            k.validate(nu, rule, true)?;
        }
        let mut r = rng::master(0x646967);
        for _ in 0..300 {
            let x = nu.sample(&mut r);
            let y = nu.sample(&mut r);
            let parts = [
                self.f00.eval_raw(&x, &y),
                self.f01.eval_raw(&x, &y),
                self.f10.eval_raw(&x, &y),
                self.f11.eval_raw(&x, &y),
            ];
            let total: f64 = parts.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidKernel(format!(
                    "digraphon components sum to {total} != 1"
                )));
            }
            if (self.f00.eval_raw(&x, &y) - self.f00.eval_raw(&y, &x)).abs() > 1e-9
                || (self.f11.eval_raw(&x, &y) - self.f11.eval_raw(&y, &x)).abs() > 1e-9
            {
                return Err(Error::InvalidKernel("f00/f11 must be symmetric".into()));
            }
            if (self.f01.eval_raw(&x, &y) - self.f10.eval_raw(&y, &x)).abs() > 1e-9 {
                return Err(Error::InvalidKernel(
                    "digraphon needs f01(x,y) = f10(y,x)".into(),
                ));
            }
            let g = self.diag.eval(&x);
            if !((-1e-9..=1.0 + 1e-9).contains(&g)) {
                return Err(Error::InvalidKernel(format!("diagonal g(x) = {g}")));
            }
        }
        Ok(())
    }

    /// P((x,y), A) for a target arrow set. On the diagonal the pair is
    /// (1,1) with probability g(x) and (0,0) otherwise.
    pub fn mass(&self, x: &Label, y: &Label, targets: ArrowSet) -> f64 {
        if x == y {
            let g = self.diag.eval(x);
            let mut m = 0.0;
            if targets.contains(true, true) {
                m += g;
            }
            if targets.contains(false, false) {
                m += 1.0 - g;
            }
            return m;
        }
        let mut m = 0.0;
        if targets.contains(false, false) {
            m += self.f00.eval_raw(x, y);
        }
        if targets.contains(false, true) {
            m += self.f01.eval_raw(x, y);
        }
        if targets.contains(true, false) {
            m += self.f10.eval_raw(x, y);
        }
        if targets.contains(true, true) {
            m += self.f11.eval_raw(x, y);
        }
        m
    }

    /// Draw the ordered arrow pair (phi(x,y), phi(y,x)).
    pub fn sample_pair<R: Rng>(&self, x: &Label, y: &Label, rng: &mut R) -> (bool, bool) {
        if x == y {
            let hit = rng.random::<f64>() < self.diag.eval(x);
            return (hit, hit);
        }
        let u: f64 = rng.random();
        let p00 = self.f00.eval_raw(x, y);
        let p01 = self.f01.eval_raw(x, y);
        let p10 = self.f10.eval_raw(x, y);
        if u < p00 {
            (false, false)
        } else if u < p00 + p01 {
            (false, true)
        } else if u < p00 + p01 + p10 {
            (true, false)
        } else {
            (true, true)
        }
    }
}

/// A random edge transformation, given by its marginal transition kernel.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RandomTransform {
    /// phi(x,y) = f(x,y) with probability one.
    Deterministic { kernel: GraphonKernel },
    /// Q((x,y),.) = Bernoulli(f(x,y)); f must be a graphon.
    Bernoulli { kernel: GraphonKernel },
    /// Q((x,y),.) = Binomial(n, f(x,y)).
    Binomial { n: u64, kernel: GraphonKernel },
    /// Q((x,y),.) = Poisson(f(x,y)).
    Poisson { kernel: GraphonKernel },
    /// Four-component digraphon with diagonal law.
    Digraphon { digraphon: Digraphon },
    /// Joint multinomial over atom cells; marginal Binomial(n, p[x][y]).
    Multinomial { n: u64, probs: Vec<Vec<f64>> },
}

impl RandomTransform {
    pub fn kernel(&self) -> Option<&GraphonKernel> {
        match self {
            RandomTransform::Deterministic { kernel }
            | RandomTransform::Bernoulli { kernel }
            | RandomTransform::Binomial { kernel, .. }
            | RandomTransform::Poisson { kernel } => Some(kernel),
            _ => None,
        }
    }

    /// True when weights of (x,y) and (y,x) coincide by construction.
    pub fn is_symmetric(&self) -> bool {
        match self {
            RandomTransform::Digraphon { .. } => false,
            RandomTransform::Multinomial { probs, .. } => probs
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, p)| (p - probs[j][i]).abs() < 1e-12)),
            _ => self.kernel().map(|k| k.symmetric).unwrap_or(false),
        }
    }

    pub fn validate(&self, nu: &LabelDistribution, rule: &QuadratureRule) -> Result<()> {
        match self {
            RandomTransform::Deterministic { kernel } | RandomTransform::Poisson { kernel } => {
                kernel.validate(nu, rule, false)
            }
            RandomTransform::Bernoulli { kernel } | RandomTransform::Binomial { kernel, .. } => {
                kernel.validate(nu, rule, true)
            }
            RandomTransform::Digraphon { digraphon } => digraphon.validate(nu, rule),
            RandomTransform::Multinomial { n, probs } => {
                let total: f64 = probs.iter().flatten().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidKernel(format!(
                        "multinomial cell probabilities sum to {total}"
                    )));
                }
                if *n == 0 {
                    return Err(Error::InvalidKernel("multinomial needs n >= 1".into()));
                }
                Ok(())
            }
        }
    }

    /// Mean of Q((x,y),.): the expected edge weight of this ordered pair.
    pub fn mean(&self, x: &Label, y: &Label) -> Result<f64> {
        Ok(match self {
            RandomTransform::Deterministic { kernel }
            | RandomTransform::Bernoulli { kernel }
            | RandomTransform::Poisson { kernel } => kernel.eval(x, y),
            RandomTransform::Binomial { n, kernel } => *n as f64 * kernel.eval(x, y),
            RandomTransform::Multinomial { n, probs } => {
                *n as f64 * multinomial_cell(probs, x, y)?
            }
            RandomTransform::Digraphon { .. } => {
                return Err(Error::InvalidModel(
                    "digraphon mean needs a target arrow set; use digraphon mass".into(),
                ))
            }
        })
    }

    /// P(weight > 0) for the ordered pair: the active-edge probability.
    pub fn mass_positive(&self, x: &Label, y: &Label) -> Result<f64> {
        Ok(match self {
            RandomTransform::Deterministic { kernel } => {
                if kernel.eval(x, y) > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            RandomTransform::Bernoulli { kernel } => kernel.eval(x, y),
            RandomTransform::Binomial { n, kernel } => {
                1.0 - (1.0 - kernel.eval(x, y)).powi(*n as i32)
            }
            RandomTransform::Poisson { kernel } => 1.0 - (-kernel.eval(x, y)).exp(),
            RandomTransform::Multinomial { n, probs } => {
                1.0 - (1.0 - multinomial_cell(probs, x, y)?).powi(*n as i32)
            }
            RandomTransform::Digraphon { .. } => {
                return Err(Error::InvalidModel(
                    "digraphon activity needs a target arrow set".into(),
                ))
            }
        })
    }

    /// Seeded draw keyed by (seed, x, y); symmetric transforms draw the
    /// unordered pair once so that (x,y) and (y,x) agree exactly.
    pub fn sample_edge(&self, x: &Label, y: &Label, seed: u64) -> Result<f64> {
        let (kx, ky) = (x.key(), y.key());
        let key = if self.is_symmetric() && kx > ky {
            rng::pair_key(ky, kx)
        } else {
            rng::pair_key(kx, ky)
        };
        let mut r = rng::keyed(seed, key);
        self.sample_weight(x, y, &mut r)
    }

    /// Draw an edge weight from the marginal law with a caller stream.
    pub fn sample_weight<R: Rng>(&self, x: &Label, y: &Label, rng_: &mut R) -> Result<f64> {
        Ok(match self {
            RandomTransform::Deterministic { kernel } => kernel.eval(x, y),
            RandomTransform::Bernoulli { kernel } => {
                if rng_.random::<f64>() < kernel.eval(x, y) {
                    1.0
                } else {
                    0.0
                }
            }
            RandomTransform::Binomial { n, kernel } => {
                let p = kernel.eval(x, y);
                if p <= 0.0 {
                    0.0
                } else {
                    use rand_distr::Distribution as _;
                    rand_distr::Binomial::new(*n, p.min(1.0)).unwrap().sample(rng_) as f64
                }
            }
            RandomTransform::Poisson { kernel } => {
                let lambda = kernel.eval(x, y);
                if lambda <= 0.0 {
                    0.0
                } else {
                    use rand_distr::Distribution as _;
                    rand_distr::Poisson::new(lambda).unwrap().sample(rng_)
                }
            }
            RandomTransform::Multinomial { n, probs } => {
                let p = multinomial_cell(probs, x, y)?;
                if p <= 0.0 {
                    0.0
                } else {
                    use rand_distr::Distribution as _;
                    rand_distr::Binomial::new(*n, p.min(1.0)).unwrap().sample(rng_) as f64
                }
            }
            RandomTransform::Digraphon { .. } => {
                return Err(Error::InvalidModel(
                    "digraphon edges are sampled pairwise during generation".into(),
                ))
            }
        })
    }
}

fn multinomial_cell(probs: &[Vec<f64>], x: &Label, y: &Label) -> Result<f64> {
    let i = x
        .as_index()
        .ok_or_else(|| Error::InvalidModel("multinomial needs integer labels".into()))?;
    let j = y
        .as_index()
        .ok_or_else(|| Error::InvalidModel("multinomial needs integer labels".into()))?;
    let (i, j) = ((i - 1) as usize, (j - 1) as usize);
    if i >= probs.len() || j >= probs[i].len() {
        return Err(Error::SizeMismatch(format!(
            "multinomial cell ({i},{j}) outside the probability table"
        )));
    }
    Ok(probs[i][j])
}

/// Nonnegative test function applied to edge weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    /// g(w) = w.
    Identity,
    /// g(w) = 1(w > 0).
    Indicator,
    /// g(w) = k w for k > 0.
    Scaled { k: f64 },
    /// g = 0; empty support.
    Zero,
}

impl Default for WeightFunction {
    fn default() -> Self {
        WeightFunction::Identity
    }
}

impl WeightFunction {
    pub fn apply(&self, w: f64) -> f64 {
        match self {
            WeightFunction::Identity => w,
            WeightFunction::Indicator => {
                if w > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            WeightFunction::Scaled { k } => k * w,
            WeightFunction::Zero => 0.0,
        }
    }

    /// E g(phi(x,y)) under the transform's marginal law.
    pub fn mean_under(&self, t: &RandomTransform, x: &Label, y: &Label) -> Result<f64> {
        Ok(match self {
            WeightFunction::Identity => t.mean(x, y)?,
            WeightFunction::Indicator => t.mass_positive(x, y)?,
            WeightFunction::Scaled { k } => k * t.mean(x, y)?,
            WeightFunction::Zero => 0.0,
        })
    }

    /// P(phi(x,y) in supp g).
    pub fn support_mass_under(&self, t: &RandomTransform, x: &Label, y: &Label) -> Result<f64> {
        match self {
            WeightFunction::Zero => Ok(0.0),
            _ => t.mass_positive(x, y),
        }
    }
}
