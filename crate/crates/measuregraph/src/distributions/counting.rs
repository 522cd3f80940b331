//! Counting distributions: nonnegative-integer laws with a pgf calculus.
//!
//! These play two roles: the vertex-count law of a sampled point measure
//! and the per-atom weight laws of fixed-atom measures. Every law exposes
//! exact mean/variance, pgf evaluation on the closed unit disk, factorial
//! moments, pmf, and a seeded sampler.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Distribution as _;
use serde::{Deserialize, Serialize};

use crate::distributions::special::zeta;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountingDistribution {
    /// Point mass at n. n = 0 is admitted for empty-graph edge cases.
    Dirac { n: u64 },
    Poisson { c: f64 },
    /// pmf C(r+x-1, r-1) (1-p)^r p^x on x >= 0.
    NegativeBinomial { r: u64, p: f64 },
    Binomial { n: u64, p: f64 },
    /// Uniform on {m, ..., n}.
    UniformInt { m: u64, n: u64 },
    /// pmf x^{-s}/zeta(s) on x >= 1.
    Zeta { s: f64 },
    /// pmf x^{-s}/H_{n,s} on {1, ..., n}.
    Zipf { s: f64, n: u64 },
}

use CountingDistribution::*;

impl CountingDistribution {
    pub fn dirac(n: u64) -> Result<Self> {
        Ok(Dirac { n })
    }

    pub fn poisson(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "Poisson needs c in (0, inf), got {c}"
            )));
        }
        Ok(Poisson { c })
    }

    pub fn negative_binomial(r: u64, p: f64) -> Result<Self> {
        if r < 1 || !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "NegativeBinomial needs r >= 1, p in (0,1), got r={r}, p={p}"
            )));
        }
        Ok(NegativeBinomial { r, p })
    }

    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        if n < 1 || !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "Binomial needs n >= 1, p in (0,1), got n={n}, p={p}"
            )));
        }
        Ok(Binomial { n, p })
    }

    /// Bernoulli(p) as Binomial(1, p); used for atom weight laws. The
    /// degenerate ends collapse to point masses.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if p == 0.0 {
            Self::dirac(0)
        } else if p == 1.0 {
            Self::dirac(1)
        } else {
            Self::binomial(1, p)
        }
    }

    pub fn uniform_int(m: u64, n: u64) -> Result<Self> {
        if m > n || n < 1 {
            return Err(Error::InvalidDistribution(format!(
                "UniformInt needs 0 <= m <= n, n >= 1, got ({m},{n})"
            )));
        }
        Ok(UniformInt { m, n })
    }

    pub fn zeta_dist(s: f64) -> Result<Self> {
        if !(s > 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "Zeta needs s > 1, got {s}"
            )));
        }
        Ok(Zeta { s })
    }

    pub fn zipf(s: f64, n: u64) -> Result<Self> {
        if !(s >= 0.0) || n < 1 {
            return Err(Error::InvalidDistribution(format!(
                "Zipf needs s >= 0, n >= 1, got ({s},{n})"
            )));
        }
        Ok(Zipf { s, n })
    }

    /// Re-validates parameters, for deserialized values.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Dirac { n } => Self::dirac(n).map(|_| ()),
            Poisson { c } => Self::poisson(c).map(|_| ()),
            NegativeBinomial { r, p } => Self::negative_binomial(r, p).map(|_| ()),
            Binomial { n, p } => Self::binomial(n, p).map(|_| ()),
            UniformInt { m, n } => Self::uniform_int(m, n).map(|_| ()),
            Zeta { s } => Self::zeta_dist(s).map(|_| ()),
            Zipf { s, n } => Self::zipf(s, n).map(|_| ()),
        }
    }

    /// Mean c. Infinite for Zeta with s <= 2.
    pub fn mean(&self) -> f64 {
        match *self {
            Dirac { n } => n as f64,
            Poisson { c } => c,
            NegativeBinomial { r, p } => r as f64 * p / (1.0 - p),
            Binomial { n, p } => n as f64 * p,
            UniformInt { m, n } => (m + n) as f64 / 2.0,
            Zeta { s } => {
                if s > 2.0 {
                    zeta(s - 1.0).unwrap() / zeta(s).unwrap()
                } else {
                    f64::INFINITY
                }
            }
            Zipf { s, n } => harmonic(n, s - 1.0) / harmonic(n, s),
        }
    }

    /// Variance delta^2. Infinite for Zeta with s <= 3.
    pub fn variance(&self) -> f64 {
        match *self {
            Dirac { .. } => 0.0,
            Poisson { c } => c,
            NegativeBinomial { r, p } => r as f64 * p / (1.0 - p).powi(2),
            Binomial { n, p } => n as f64 * p * (1.0 - p),
            UniformInt { m, n } => {
                let k = (n - m + 1) as f64;
                (k * k - 1.0) / 12.0
            }
            Zeta { s } => {
                if s > 3.0 {
                    let z = zeta(s).unwrap();
                    zeta(s - 2.0).unwrap() / z - (zeta(s - 1.0).unwrap() / z).powi(2)
                } else {
                    f64::INFINITY
                }
            }
            Zipf { s, n } => {
                let h = harmonic(n, s);
                harmonic(n, s - 2.0) / h - (harmonic(n, s - 1.0) / h).powi(2)
            }
        }
    }

    /// (mean, variance) pair.
    pub fn moments(&self) -> (f64, f64) {
        (self.mean(), self.variance())
    }

    /// pgf psi(t) for real t in [0,1]; psi(1) = 1 exactly.
    pub fn pgf(&self, t: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&t), "pgf expects t in [0,1]");
        if t == 1.0 {
            return 1.0;
        }
        self.pgf_complex(Complex64::new(t, 0.0)).re
    }

    /// pgf on the closed unit disk, for Cauchy coefficient extraction.
    ///
    /// Zeta sums are truncated at 2^16 terms; at s near 1 this leaves a
    /// small polynomial tail on the unit circle.
    pub fn pgf_complex(&self, t: Complex64) -> Complex64 {
        match *self {
            Dirac { n } => t.powu(n as u32),
            Poisson { c } => (c * (t - 1.0)).exp(),
            NegativeBinomial { r, p } => ((1.0 - p) / (1.0 - p * t)).powu(r as u32),
            Binomial { n, p } => (1.0 - p + p * t).powu(n as u32),
            UniformInt { m, n } => {
                let k = (n - m + 1) as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                let mut tp = t.powu(m as u32);
                for _ in m..=n {
                    acc += tp;
                    tp *= t;
                }
                acc / k
            }
            Zeta { s } => {
                let z = zeta(s).unwrap();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut tp = t;
                for x in 1..=(1u64 << 16) {
                    let term = (x as f64).powf(-s) * tp.norm();
                    acc += (x as f64).powf(-s) * tp;
                    if term < 1e-18 {
                        break;
                    }
                    tp *= t;
                }
                acc / z
            }
            Zipf { s, n } => {
                let h = harmonic(n, s);
                let mut acc = Complex64::new(0.0, 0.0);
                let mut tp = t;
                for x in 1..=n {
                    acc += (x as f64).powf(-s) * tp;
                    tp *= t;
                }
                acc / h
            }
        }
    }

    /// k-th factorial moment E K(K-1)...(K-k+1) for k in {1,2,3}.
    pub fn factorial_moment(&self, k: u32) -> f64 {
        assert!((1..=3).contains(&k));
        match *self {
            Dirac { n } => {
                let n = n as f64;
                (0..k).map(|i| n - i as f64).product()
            }
            Poisson { c } => c.powi(k as i32),
            NegativeBinomial { r, p } => {
                let q = p / (1.0 - p);
                let r = r as f64;
                (0..k).map(|i| r + i as f64).product::<f64>() * q.powi(k as i32)
            }
            Binomial { n, p } => {
                let n = n as f64;
                (0..k).map(|i| n - i as f64).product::<f64>() * p.powi(k as i32)
            }
            // no short closed form worth carrying; sum the pmf
            UniformInt { .. } | Zeta { .. } | Zipf { .. } => self.factorial_moment_series(k),
        }
    }

    fn factorial_moment_series(&self, k: u32) -> f64 {
        let bound = self.support_bound().unwrap_or(1 << 22);
        let mut acc = 0.0;
        for x in 0..=bound {
            let p = self.pmf(x);
            if p == 0.0 && x > 4 && self.support_bound().is_none() {
                break;
            }
            let xf = x as f64;
            let fall: f64 = (0..k).map(|i| xf - i as f64).product();
            if x >= k as u64 {
                acc += fall * p;
            }
        }
        acc
    }

    /// Probability mass at x.
    pub fn pmf(&self, x: u64) -> f64 {
        match *self {
            Dirac { n } => {
                if x == n {
                    1.0
                } else {
                    0.0
                }
            }
            Poisson { c } => (-c + x as f64 * c.ln() - ln_factorial(x)).exp(),
            NegativeBinomial { r, p } => {
                let lc = ln_choose(r + x - 1, r - 1);
                (lc + r as f64 * (1.0 - p).ln() + x as f64 * p.ln()).exp()
            }
            Binomial { n, p } => {
                if x > n {
                    0.0
                } else {
                    (ln_choose(n, x) + x as f64 * p.ln() + (n - x) as f64 * (1.0 - p).ln()).exp()
                }
            }
            UniformInt { m, n } => {
                if (m..=n).contains(&x) {
                    1.0 / (n - m + 1) as f64
                } else {
                    0.0
                }
            }
            Zeta { s } => {
                if x >= 1 {
                    (x as f64).powf(-s) / zeta(s).unwrap()
                } else {
                    0.0
                }
            }
            Zipf { s, n } => {
                if (1..=n).contains(&x) {
                    (x as f64).powf(-s) / harmonic(n, s)
                } else {
                    0.0
                }
            }
        }
    }

    /// Largest support point when the support is finite.
    pub fn support_bound(&self) -> Option<u64> {
        match *self {
            Dirac { n } => Some(n),
            Binomial { n, .. } => Some(n),
            UniformInt { n, .. } => Some(n),
            Zipf { n, .. } => Some(n),
            Poisson { .. } | NegativeBinomial { .. } | Zeta { .. } => None,
        }
    }

    /// Seeded draw.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        match *self {
            Dirac { n } => n,
            Poisson { c } => rand_distr::Poisson::new(c).unwrap().sample(rng) as u64,
            NegativeBinomial { r, p } => {
                // Gamma-Poisson mixture
                let g = rand_distr::Gamma::new(r as f64, p / (1.0 - p)).unwrap();
                let lambda: f64 = g.sample(rng);
                if lambda <= 0.0 {
                    0
                } else {
                    rand_distr::Poisson::new(lambda).unwrap().sample(rng) as u64
                }
            }
            Binomial { n, p } => rand_distr::Binomial::new(n, p).unwrap().sample(rng),
            UniformInt { m, n } => rng.random_range(m..=n),
            Zeta { s } => sample_zeta(s, rng),
            Zipf { s, n } => sample_finite_power(s, n, rng),
        }
    }
}

/// Generalized harmonic number H_{n,s} = sum_{x=1..n} x^{-s}.
pub fn harmonic(n: u64, s: f64) -> f64 {
    (1..=n).map(|x| (x as f64).powf(-s)).sum()
}

fn ln_factorial(x: u64) -> f64 {
    (2..=x).map(|k| (k as f64).ln()).sum()
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Zeta(s) sampler: inverse-CDF over a prefix table covering most of the
/// mass, with an exact Pareto-envelope rejection step for the tail.
fn sample_zeta<R: Rng>(s: f64, rng: &mut R) -> u64 {
    const PREFIX: u64 = 1 << 12;
    let z = zeta(s).unwrap();
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for x in 1..=PREFIX {
        cum += (x as f64).powf(-s) / z;
        if u < cum {
            return x;
        }
    }
    sample_zeta_tail(s, PREFIX, rng)
}

/// Draw from the zeta(s) law conditioned on X > n0.
///
/// Candidates come from the continuous y^{-s} Pareto tail; a candidate k is
/// accepted with probability pmf(k) / (M * envelope(k)), where the envelope
/// ratio maximum M sits at k = n0 + 1.
fn sample_zeta_tail<R: Rng>(s: f64, n0: u64, rng: &mut R) -> u64 {
    let a = (n0 + 1) as f64;
    let ratio = |k: f64| -> f64 {
        // pmf proportional k^{-s}; envelope cell mass (k^{1-s}-(k+1)^{1-s})/(s-1)
        (s - 1.0) * k.powf(-s) / (k.powf(1.0 - s) - (k + 1.0).powf(1.0 - s))
    };
    let m = ratio(a);
    loop {
        let u: f64 = rng.random();
        let y = a * (1.0 - u).powf(-1.0 / (s - 1.0));
        if !y.is_finite() {
            continue;
        }
        let k = y.floor();
        let accept: f64 = rng.random();
        if accept * m <= ratio(k) {
            return k as u64;
        }
    }
}

/// Finite power-law (Zipf) sampling by inverse CDF.
fn sample_finite_power<R: Rng>(s: f64, n: u64, rng: &mut R) -> u64 {
    let h = harmonic(n, s);
    let u: f64 = rng.random::<f64>() * h;
    let mut cum = 0.0;
    for x in 1..=n {
        cum += (x as f64).powf(-s);
        if u < cum {
            return x;
        }
    }
    n
}
