//! Label distributions: the probability measure behind vertex labels.
//!
//! Each distribution supplies seeded sampling, quadrature/summation nodes
//! for the analytic formulas, and exact set masses for traces.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::distributions::quadrature::{IntegrationResult, QuadratureRule};
use crate::distributions::special::zeta;
use crate::error::{Error, Result};
use crate::label::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelDistribution {
    /// Lebesgue measure on [0,1].
    LebesgueUnit,
    /// Lebesgue measure on [0,1]^dim, for dot-product kernels.
    LebesgueCube { dim: usize },
    /// Uniform on {1, ..., n}.
    UniformInt { n: u64 },
    /// Zeta(s) on the positive integers.
    Zeta { s: f64 },
    /// Empirical measure of an observed point list (uniform over points).
    Empirical { points: Vec<Label> },
}

/// Measurable subsets used for traces and restrictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelSet {
    Full,
    /// Closed interval of scalar labels.
    Interval { lo: f64, hi: f64 },
    /// Explicit set of integer labels.
    Ints { members: BTreeSet<u64> },
}

impl LabelSet {
    pub fn contains(&self, label: &Label) -> bool {
        match self {
            LabelSet::Full => true,
            LabelSet::Interval { lo, hi } => {
                let x = label.value();
                *lo <= x && x <= *hi
            }
            LabelSet::Ints { members } => label.as_index().is_some_and(|k| members.contains(&k)),
        }
    }
}

/// Quadrature/summation grid for one label distribution.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nodes: Vec<(Label, f64)>,
    /// Probability mass not covered by the nodes (discrete truncation).
    pub tail_mass: f64,
}

impl LabelDistribution {
    pub fn empirical(points: Vec<Label>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDistribution(
                "empirical measure needs at least one point".into(),
            ));
        }
        Ok(LabelDistribution::Empirical { points })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LabelDistribution::LebesgueUnit => Ok(()),
            LabelDistribution::LebesgueCube { dim } => {
                if *dim >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution("cube dim must be >= 1".into()))
                }
            }
            LabelDistribution::UniformInt { n } => {
                if *n >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution("uniform_int needs n >= 1".into()))
                }
            }
            LabelDistribution::Zeta { s } => {
                if *s > 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidDistribution(format!(
                        "zeta label law needs s > 1, got {s}"
                    )))
                }
            }
            LabelDistribution::Empirical { points } => {
                if points.is_empty() {
                    Err(Error::InvalidDistribution("empirical needs points".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// True when the measure has atoms.
    pub fn is_atomic(&self) -> bool {
        !matches!(
            self,
            LabelDistribution::LebesgueUnit | LabelDistribution::LebesgueCube { .. }
        )
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Label {
        match self {
            LabelDistribution::LebesgueUnit => Label::Scalar(rng.random()),
            LabelDistribution::LebesgueCube { dim } => {
                Label::Point((0..*dim).map(|_| rng.random()).collect())
            }
            LabelDistribution::UniformInt { n } => Label::Index(rng.random_range(1..=*n)),
            LabelDistribution::Zeta { s } => {
                let d = crate::distributions::CountingDistribution::zeta_dist(*s).unwrap();
                Label::Index(d.sample(rng))
            }
            LabelDistribution::Empirical { points } => {
                points[rng.random_range(0..points.len())].clone()
            }
        }
    }

    /// Integration grid. Discrete infinite supports are truncated at the
    /// rule's bound with the skipped mass reported.
    pub fn grid(&self, rule: &QuadratureRule) -> Grid {
        match self {
            LabelDistribution::LebesgueUnit => Grid {
                nodes: rule
                    .points()
                    .map(|(x, w)| (Label::Scalar(x), w))
                    .collect(),
                tail_mass: 0.0,
            },
            LabelDistribution::LebesgueCube { dim } => Grid {
                nodes: cube_nodes(*dim, rule),
                tail_mass: 0.0,
            },
            LabelDistribution::UniformInt { n } => {
                let w = 1.0 / *n as f64;
                Grid {
                    nodes: (1..=*n).map(|k| (Label::Index(k), w)).collect(),
                    tail_mass: 0.0,
                }
            }
            LabelDistribution::Zeta { s } => {
                let z = zeta(*s).unwrap();
                let cap = rule.truncation();
                let mut nodes = Vec::with_capacity(cap as usize);
                let mut mass = 0.0;
                for k in 1..=cap {
                    let w = (k as f64).powf(-s) / z;
                    mass += w;
                    nodes.push((Label::Index(k), w));
                }
                Grid {
                    nodes,
                    tail_mass: (1.0 - mass).max(0.0),
                }
            }
            LabelDistribution::Empirical { points } => {
                let w = 1.0 / points.len() as f64;
                Grid {
                    nodes: points.iter().map(|p| (p.clone(), w)).collect(),
                    tail_mass: 0.0,
                }
            }
        }
    }

    /// nu(f): integral of a scalar function against this measure.
    pub fn integrate<F: Fn(&Label) -> f64>(&self, f: F, rule: &QuadratureRule) -> IntegrationResult {
        let grid = self.grid(rule);
        let value = grid.nodes.iter().map(|(x, w)| w * f(x)).sum();
        IntegrationResult::truncated(value, grid.tail_mass)
    }

    /// (nu x nu)(f): double integral of a two-argument function.
    pub fn product_integrate<F: Fn(&Label, &Label) -> f64>(
        &self,
        f: F,
        rule: &QuadratureRule,
    ) -> IntegrationResult {
        let grid = self.grid(rule);
        let mut value = 0.0;
        for (x, wx) in &grid.nodes {
            for (y, wy) in &grid.nodes {
                value += wx * wy * f(x, y);
            }
        }
        let covered = 1.0 - grid.tail_mass;
        IntegrationResult::truncated(value, (1.0 - covered * covered).max(0.0))
    }

    /// Exact nu(A) for the supported set shapes.
    pub fn mass(&self, set: &LabelSet) -> Result<f64> {
        Ok(match (self, set) {
            (_, LabelSet::Full) => 1.0,
            (LabelDistribution::LebesgueUnit, LabelSet::Interval { lo, hi }) => {
                (hi.min(1.0) - lo.max(0.0)).max(0.0)
            }
            (LabelDistribution::UniformInt { n }, LabelSet::Ints { members }) => {
                members.iter().filter(|&&k| k >= 1 && k <= *n).count() as f64 / *n as f64
            }
            (LabelDistribution::UniformInt { n }, LabelSet::Interval { lo, hi }) => {
                int_range_count(*lo, *hi, 1, *n) as f64 / *n as f64
            }
            (LabelDistribution::Zeta { s }, LabelSet::Ints { members }) => {
                let z = zeta(*s)?;
                members.iter().map(|&k| (k as f64).powf(-*s)).sum::<f64>() / z
            }
            (LabelDistribution::Zeta { s }, LabelSet::Interval { lo, hi }) => {
                let z = zeta(*s)?;
                let lo = lo.ceil().max(1.0) as u64;
                let hi = hi.floor() as u64;
                (lo..=hi).map(|k| (k as f64).powf(-*s)).sum::<f64>() / z
            }
            (LabelDistribution::Empirical { points }, set) => {
                points.iter().filter(|p| set.contains(p)).count() as f64 / points.len() as f64
            }
            (nu, set) => {
                return Err(Error::InvalidModel(format!(
                    "unsupported set shape {set:?} for label law {nu:?}"
                )))
            }
        })
    }

    /// Grid of the restricted (trace) measure nu_A, normalized to mass one.
    pub fn restricted_grid(&self, set: &LabelSet, rule: &QuadratureRule) -> Result<Grid> {
        let a = self.mass(set)?;
        if a <= 0.0 {
            return Err(Error::EmptyTrace);
        }
        match (self, set) {
            (_, LabelSet::Full) => Ok(self.grid(rule)),
            (LabelDistribution::LebesgueUnit, LabelSet::Interval { lo, hi }) => {
                let lo = lo.max(0.0);
                let hi = hi.min(1.0);
                Ok(Grid {
                    nodes: rule
                        .points()
                        .map(|(x, w)| (Label::Scalar(lo + (hi - lo) * x), w))
                        .collect(),
                    tail_mass: 0.0,
                })
            }
            _ => {
                // atomic cases: filter and renormalize
                let grid = self.grid(rule);
                let mut nodes: Vec<(Label, f64)> = grid
                    .nodes
                    .into_iter()
                    .filter(|(x, _)| set.contains(x))
                    .collect();
                let covered: f64 = nodes.iter().map(|(_, w)| w).sum();
                if covered <= 0.0 {
                    return Err(Error::EmptyTrace);
                }
                for (_, w) in nodes.iter_mut() {
                    *w /= a;
                }
                Ok(Grid {
                    nodes,
                    tail_mass: (1.0 - covered / a).max(0.0),
                })
            }
        }
    }
}

fn int_range_count(lo: f64, hi: f64, min: u64, max: u64) -> u64 {
    let lo = lo.ceil().max(min as f64) as u64;
    let hi = hi.floor().min(max as f64) as u64;
    if hi >= lo {
        hi - lo + 1
    } else {
        0
    }
}

/// Tensor Gauss-Legendre nodes on [0,1]^dim, with the per-axis order shrunk
/// so the grid stays within ~4k points.
fn cube_nodes(dim: usize, rule: &QuadratureRule) -> Vec<(Label, f64)> {
    if dim == 1 {
        return rule
            .points()
            .map(|(x, w)| (Label::Scalar(x), w))
            .collect();
    }
    let mut q = rule.order().min(64);
    while (q as f64).powi(dim as i32) > 4096.0 && q > 2 {
        q -= 1;
    }
    let (nodes1, weights1) = crate::distributions::quadrature::gauss_legendre_unit(q);
    let mut out: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * q);
        for (prefix, w) in &out {
            for (i, &x) in nodes1.iter().enumerate() {
                let mut p = prefix.clone();
                p.push(x);
                next.push((p, w * weights1[i]));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(p, w)| (Label::Point(p), w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn rule() -> QuadratureRule {
        QuadratureRule::default()
    }

    #[test]
    fn integrates_constant_to_one() {
        let laws = [
            LabelDistribution::LebesgueUnit,
            LabelDistribution::LebesgueCube { dim: 3 },
            LabelDistribution::UniformInt { n: 17 },
            LabelDistribution::Zeta { s: 2.0 },
            LabelDistribution::empirical(vec![Label::Scalar(0.3), Label::Scalar(0.9)]).unwrap(),
        ];
        for nu in &laws {
            let r = nu.integrate(|_| 1.0, &rule());
            assert!(
                (r.value + r.tail_mass - 1.0).abs() < 1e-12,
                "{nu:?}: {} + tail {}",
                r.value,
                r.tail_mass
            );
        }
    }

    #[test]
    fn lebesgue_examples() {
        let nu = LabelDistribution::LebesgueUnit;
        assert_relative_eq!(
            nu.integrate(|x| x.value(), &rule()).value,
            0.5,
            max_relative = 1e-13
        );
        // nu(g) = 1/(1+b) for g = (1+bx)^{-2}, b = 1
        assert_relative_eq!(
            nu.integrate(|x| (1.0 + x.value()).powi(-2), &rule()).value,
            0.5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zeta_prime_indicator_matches_direct_sum() {
        // nu = Zeta(2), f = indicator of the primes.
        // Oracle: direct sum over primes <= 1e6 divided by zeta(2).
        let primes = crate::distributions::special::primes_up_to(1_000_000);
        let z2 = zeta(2.0).unwrap();
        let oracle: f64 = primes.iter().map(|&p| (p as f64).powi(-2)).sum::<f64>() / z2;
        let nu = LabelDistribution::Zeta { s: 2.0 };
        let r = nu.integrate(
            |x| {
                if crate::distributions::special::is_prime(x.as_index().unwrap()) {
                    1.0
                } else {
                    0.0
                }
            },
            &rule().with_truncation(100_000),
        );
        assert!((r.value - oracle).abs() < 1e-5, "{} vs {oracle}", r.value);
        // frozen reference value P(2)/zeta(2)
        assert_relative_eq!(oracle, 0.274_933_46, max_relative = 1e-6);
    }

    #[test]
    fn empirical_point_mass() {
        let nu = LabelDistribution::empirical(vec![Label::Scalar(0.5)]).unwrap();
        assert_eq!(
            nu.mass(&LabelSet::Interval { lo: 0.5, hi: 0.5 }).unwrap(),
            1.0
        );
        assert!(LabelDistribution::empirical(vec![]).is_err());
    }

    #[test]
    fn masses_are_exact() {
        let leb = LabelDistribution::LebesgueUnit;
        assert_eq!(
            leb.mass(&LabelSet::Interval { lo: 0.25, hi: 0.75 }).unwrap(),
            0.5
        );
        let uni = LabelDistribution::UniformInt { n: 10 };
        assert_eq!(
            uni.mass(&LabelSet::Ints {
                members: [2u64, 3, 5, 7].into_iter().collect()
            })
            .unwrap(),
            0.4
        );
        let z = LabelDistribution::Zeta { s: 2.0 };
        let m = z
            .mass(&LabelSet::Ints {
                members: [1u64].into_iter().collect(),
            })
            .unwrap();
        assert_relative_eq!(m, 1.0 / zeta(2.0).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn restricted_grid_normalizes() {
        let leb = LabelDistribution::LebesgueUnit;
        let g = leb
            .restricted_grid(&LabelSet::Interval { lo: 0.0, hi: 0.5 }, &rule())
            .unwrap();
        let total: f64 = g.nodes.iter().map(|(_, w)| w).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        for (x, _) in &g.nodes {
            assert!(x.value() <= 0.5);
        }
        assert!(matches!(
            leb.restricted_grid(&LabelSet::Interval { lo: 2.0, hi: 3.0 }, &rule()),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn samples_stay_in_support() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let uni = LabelDistribution::UniformInt { n: 6 };
        for _ in 0..500 {
            let k = uni.sample(&mut rng).as_index().unwrap();
            assert!((1..=6).contains(&k));
        }
        let leb = LabelDistribution::LebesgueUnit;
        for _ in 0..500 {
            let x = leb.sample(&mut rng).value();
            assert!((0.0..=1.0).contains(&x));
        }
        let cube = LabelDistribution::LebesgueCube { dim: 4 };
        let p = cube.sample(&mut rng);
        assert_eq!(p.coords().len(), 4);
    }

    #[test]
    fn cube_product_integral() {
        // (nu x nu) <x, y>/d on [0,1]^3 = (1/2)^2
        let nu = LabelDistribution::LebesgueCube { dim: 3 };
        let r = nu.product_integrate(
            |x, y| {
                let (a, b) = (x.coords(), y.coords());
                a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>() / 3.0
            },
            &rule(),
        );
        assert_relative_eq!(r.value, 0.25, max_relative = 1e-10);
    }
}
