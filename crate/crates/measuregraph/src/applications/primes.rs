//! Prime graphs: point measures on the integers whose edges join distinct
//! prime labels.
//!
//! For a zeta label law everything is closed-form in the zeta and prime
//! zeta functions; for a uniform law the prime counting function takes
//! over. Each quantity also has an independent truncated-summation route
//! used as a cross-check.

use serde::{Deserialize, Serialize};

use crate::distributions::special::{prime_count, prime_zeta, zeta};
use crate::distributions::{CountingDistribution, LabelDistribution};
use crate::error::{Error, Result};
use crate::graphs::{generate, LabeledGraph, ModelSpec, VertexModel};
use crate::transforms::{GraphonKernel, KernelForm, RandomTransform, WeightFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeLabelLaw {
    Zeta { s: f64 },
    Uniform { n: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeGraphModel {
    pub nu: PrimeLabelLaw,
    pub kappa: CountingDistribution,
}

/// Closed-form prime-graph quantities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeReport {
    /// nu(P): probability a label is prime.
    pub prime_density: f64,
    /// (nu x nu)(A): probability an ordered pair is a distinct prime pair.
    pub edge_density: f64,
    /// Mean degree of a random vertex, c * edge density.
    pub mean_degree: f64,
    /// Giant component requires c above this threshold (infinite when
    /// fewer than two primes are reachable).
    pub gc_threshold_c: f64,
    pub mean_active_vertices: f64,
    /// Truncation tail of the active-vertex sum (zeta law only).
    pub tail_bound: f64,
}

impl PrimeGraphModel {
    pub fn validate(&self) -> Result<()> {
        match self.nu {
            PrimeLabelLaw::Zeta { s } => {
                if s > 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution(format!(
                        "zeta label law needs s > 1, got {s}"
                    )))
                }
            }
            PrimeLabelLaw::Uniform { n } => {
                if n >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution("uniform law needs n >= 1".into()))
                }
            }
        }
    }
}

/// Model spec of the prime graph: indicator edges on distinct prime pairs.
pub fn prime_graph_spec(m: &PrimeGraphModel) -> Result<ModelSpec> {
    m.validate()?;
    let nu = match m.nu {
        PrimeLabelLaw::Zeta { s } => LabelDistribution::Zeta { s },
        PrimeLabelLaw::Uniform { n } => LabelDistribution::UniformInt { n },
    };
    Ok(ModelSpec {
        vertices: VertexModel::Sampled {
            kappa: m.kappa.clone(),
            nu,
        },
        transform: RandomTransform::Bernoulli {
            kernel: GraphonKernel::new(KernelForm::PrimeIndicator).with_zero_diagonal(),
        },
        weight: WeightFunction::Identity,
        directed: false,
        self_edges: false,
        ordered_dag: false,
    })
}

/// Sample one prime graph.
pub fn prime_graph_sample(m: &PrimeGraphModel, seed: u64) -> Result<LabeledGraph> {
    generate(&prime_graph_spec(m)?, seed)
}

/// Closed-form analytics for the model.
pub fn prime_analytics(m: &PrimeGraphModel) -> Result<PrimeReport> {
    m.validate()?;
    let c = m.kappa.mean();
    match m.nu {
        PrimeLabelLaw::Zeta { s } => {
            let z = zeta(s)?;
            let p1 = prime_zeta(s)?;
            let p2 = prime_zeta(2.0 * s)?;
            let p3 = prime_zeta(3.0 * s)?;
            let prime_density = p1 / z;
            let edge_density = (p1 * p1 - p2) / (z * z);
            let denom = p1 * p1 * p1 - 2.0 * p1 * p2 + p3;
            let gc_threshold_c = if denom > 0.0 {
                (p1 * p1 - p2) * z / denom
            } else {
                f64::INFINITY
            };
            // active vertices: sum over primes of nu{x}(1 - psi'(1-a(x))/c)
            // truncated when the remaining prime mass is negligible
            let mut active = 0.0;
            let mut covered = 0.0;
            let limit = 2_000_000u64;
            for x in crate::distributions::special::primes_up_to(limit) {
                let mass = (x as f64).powf(-s) / z;
                covered += mass;
                let a = (p1 - (x as f64).powf(-s)) / z;
                let survive = survive_prob(&m.kappa, 1.0 - a, c);
                active += mass * (1.0 - survive);
            }
            let tail_bound = (prime_density - covered).max(0.0) * c;
            Ok(PrimeReport {
                prime_density,
                edge_density,
                mean_degree: c * edge_density,
                gc_threshold_c,
                mean_active_vertices: c * active,
                tail_bound,
            })
        }
        PrimeLabelLaw::Uniform { n } => {
            let pi = prime_count(n) as f64;
            let nf = n as f64;
            let prime_density = pi / nf;
            let edge_density = pi * (pi - 1.0) / (nf * nf);
            let gc_threshold_c = if pi >= 2.0 {
                nf / (pi - 1.0)
            } else {
                f64::INFINITY
            };
            let a = (pi - 1.0) / nf;
            let survive = survive_prob(&m.kappa, 1.0 - a, c);
            let active = c * prime_density * (1.0 - survive);
            Ok(PrimeReport {
                prime_density,
                edge_density,
                mean_degree: c * edge_density,
                gc_threshold_c,
                mean_active_vertices: active,
                tail_bound: 0.0,
            })
        }
    }
}

/// psi'(t)/c: survival factor of a realized vertex with miss probability t.
fn survive_prob(kappa: &CountingDistribution, t: f64, c: f64) -> f64 {
    use num_complex::Complex64;
    crate::analytics::pgf_derivative_complex(kappa, Complex64::new(t, 0.0)).re / c
}

/// Locate the maximum of a unimodal function on (lo, hi) by golden-section
/// search with the given bracket tolerance.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let gr = (5.0f64.sqrt() + 1.0) / 2.0;
    let mut c = hi - (hi - lo) / gr;
    let mut d = lo + (hi - lo) / gr;
    while (hi - lo).abs() > tol {
        if f(c) > f(d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - (hi - lo) / gr;
        d = lo + (hi - lo) / gr;
    }
    let s = (lo + hi) / 2.0;
    (s, f(s))
}

/// Argmax and value of the zeta prime density s -> P(s)/zeta(s).
pub fn prime_density_maximum() -> (f64, f64) {
    golden_section_max(
        |s| prime_zeta(s).unwrap() / zeta(s).unwrap(),
        1.01,
        5.0,
        1e-6,
    )
}

/// Argmax and value of the zeta edge density (P(s)^2 - P(2s))/zeta(s)^2.
pub fn edge_density_maximum() -> (f64, f64) {
    golden_section_max(
        |s| {
            let z = zeta(s).unwrap();
            (prime_zeta(s).unwrap().powi(2) - prime_zeta(2.0 * s).unwrap()) / (z * z)
        },
        1.01,
        5.0,
        1e-6,
    )
}

/// Direct-summation route for the zeta prime density, as a cross-check of
/// the special-function route: both the prime sum and zeta prefix are
/// cut at the sieve limit and completed with their analytic tails.
pub fn prime_density_direct(s: f64, sieve_limit: u64) -> Result<f64> {
    let z = zeta(s)?;
    let p = crate::distributions::special::prime_zeta_recursive(s, sieve_limit)?;
    Ok(p / z)
}

pub fn edge_density_direct(s: f64, sieve_limit: u64) -> Result<f64> {
    let z = zeta(s)?;
    let p1 = crate::distributions::special::prime_zeta_recursive(s, sieve_limit)?;
    let p2 = crate::distributions::special::prime_zeta_recursive(2.0 * s, sieve_limit)?;
    Ok((p1 * p1 - p2) / (z * z))
}

/// Rows of the density-versus-s table behind the figures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityRow {
    pub s: f64,
    pub prime_density: f64,
    pub edge_density: f64,
    pub gc_threshold_c: f64,
}

pub fn density_table(s_values: &[f64]) -> Result<Vec<DensityRow>> {
    s_values
        .iter()
        .map(|&s| {
            let m = PrimeGraphModel {
                nu: PrimeLabelLaw::Zeta { s },
                kappa: CountingDistribution::poisson(1.0)?,
            };
            let r = prime_analytics(&m)?;
            Ok(DensityRow {
                s,
                prime_density: r.prime_density,
                edge_density: r.edge_density,
                gc_threshold_c: r.gc_threshold_c,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::special::is_prime;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_examples() {
        // n = 10: pi = 4, density 0.4, edge density 0.12
        let m = PrimeGraphModel {
            nu: PrimeLabelLaw::Uniform { n: 10 },
            kappa: CountingDistribution::poisson(5.0).unwrap(),
        };
        let r = prime_analytics(&m).unwrap();
        assert_relative_eq!(r.prime_density, 0.4, max_relative = 1e-12);
        assert_relative_eq!(r.edge_density, 0.12, max_relative = 1e-12);
        assert_relative_eq!(r.mean_degree, 0.6, max_relative = 1e-12);
        // GC threshold n/(pi-1) = 10/3
        assert_relative_eq!(r.gc_threshold_c, 10.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn zeta_density_maximum_frozen() {
        let (s, v) = prime_density_maximum();
        assert!((s - 1.491_067).abs() < 1e-3, "s = {s}");
        assert!((v - 0.325_236_1).abs() < 1e-4, "v = {v}");
    }

    #[test]
    fn zeta_edge_density_maximum_frozen() {
        let (s, v) = edge_density_maximum();
        assert!((s - 1.411_52).abs() < 1e-3, "s = {s}");
        assert!((v - 0.081_934_37).abs() < 1e-4, "v = {v}");
    }

    #[test]
    fn dual_route_agreement() {
        for s in [1.2, 1.5, 2.0, 3.0, 4.0] {
            let m = PrimeGraphModel {
                nu: PrimeLabelLaw::Zeta { s },
                kappa: CountingDistribution::poisson(3.0).unwrap(),
            };
            let r = prime_analytics(&m).unwrap();
            let d1 = prime_density_direct(s, 1_000_000).unwrap();
            let d2 = edge_density_direct(s, 1_000_000).unwrap();
            assert!((r.prime_density - d1).abs() < 1e-8, "s={s}");
            assert!((r.edge_density - d2).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn gc_threshold_finite_positive_on_range() {
        let mut s = 1.2;
        while s <= 4.0 {
            let m = PrimeGraphModel {
                nu: PrimeLabelLaw::Zeta { s },
                kappa: CountingDistribution::poisson(3.0).unwrap(),
            };
            let r = prime_analytics(&m).unwrap();
            assert!(r.gc_threshold_c.is_finite() && r.gc_threshold_c > 0.0, "s={s}");
            s += 0.2;
        }
    }

    #[test]
    fn empty_and_support_samples() {
        let m = PrimeGraphModel {
            nu: PrimeLabelLaw::Uniform { n: 10 },
            kappa: CountingDistribution::dirac(0).unwrap(),
        };
        let g = prime_graph_sample(&m, 1).unwrap();
        assert_eq!(g.n_vertices(), 0);

        let m = PrimeGraphModel {
            nu: PrimeLabelLaw::Uniform { n: 10 },
            kappa: CountingDistribution::dirac(4).unwrap(),
        };
        for seed in 0..100 {
            let g = prime_graph_sample(&m, seed).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    if g.weight(i, j) > 0.0 {
                        let a = g.labels()[i].as_index().unwrap();
                        let b = g.labels()[j].as_index().unwrap();
                        assert!(is_prime(a) && is_prime(b) && a != b);
                    }
                }
            }
        }
    }

    #[test]
    fn monte_carlo_edge_count_matches() {
        // mean ordered-pair edge count = E K(K-1) (nu x nu)(A)
        let m = PrimeGraphModel {
            nu: PrimeLabelLaw::Uniform { n: 10 },
            kappa: CountingDistribution::poisson(6.0).unwrap(),
        };
        let r = prime_analytics(&m).unwrap();
        let fm2 = 36.0;
        let expect = fm2 * r.edge_density / 2.0; // undirected count
        let reps = 10_000u64;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for seed in 0..reps {
            let e = prime_graph_sample(&m, seed).unwrap().active_edge_count() as f64;
            sum += e;
            sq += e * e;
        }
        let mean = sum / reps as f64;
        let var = sq / reps as f64 - mean * mean;
        let z = (mean - expect) / (var / reps as f64).sqrt();
        assert!(z.abs() < 4.0, "z = {z}, mean {mean}, expect {expect}");
    }

    #[test]
    fn active_vertices_uniform_monte_carlo() {
        let m = PrimeGraphModel {
            nu: PrimeLabelLaw::Uniform { n: 10 },
            kappa: CountingDistribution::poisson(8.0).unwrap(),
        };
        let r = prime_analytics(&m).unwrap();
        let reps = 10_000u64;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for seed in 0..reps {
            let v = prime_graph_sample(&m, seed).unwrap().active_vertex_count() as f64;
            sum += v;
            sq += v * v;
        }
        let mean = sum / reps as f64;
        let var = sq / reps as f64 - mean * mean;
        let z = (mean - r.mean_active_vertices) / (var / reps as f64).sqrt();
        assert!(z.abs() < 4.0, "z = {z}");
    }
}
