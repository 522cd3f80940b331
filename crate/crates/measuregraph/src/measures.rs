//! Random measures over label spaces and their moment calculus.
//!
//! Two constructions carry the whole crate: a sampled point measure (a
//! random count of iid labels) and a fixed-atom measure with independent
//! integer weights. Each comes with seeded samplers and the closed-form
//! mean/variance/trace/product formulas the samplers are tested against.

use serde::{Deserialize, Serialize};

use crate::distributions::{
    CountingDistribution, IntegrationResult, LabelDistribution, LabelSet, QuadratureRule,
};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::rng;

/// Sampled random counting measure: K ~ kappa points drawn iid from nu.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StcMeasure {
    pub kappa: CountingDistribution,
    pub nu: LabelDistribution,
}

/// One realization of a point measure, reproducible from its seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRealization {
    pub labels: Vec<Label>,
    pub seed: u64,
}

/// Mean/variance/covariance of integrals against one realization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IntegralStats {
    pub mean: f64,
    pub variance: f64,
    pub covariance: Option<f64>,
    pub tail_mass: f64,
}

/// The two-term product-measure mean, with the diagonal exposed so callers
/// excluding self-edges pay nothing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProductMean {
    /// c * nu(f(x,x))
    pub diagonal: f64,
    /// E K(K-1) * (nu x nu)(f)
    pub off_diagonal: f64,
    pub tail_mass: f64,
}

impl ProductMean {
    pub fn total(&self) -> f64 {
        self.diagonal + self.off_diagonal
    }

    /// Halved off-diagonal term: the undirected (normalized) convention.
    pub fn normalized(&self) -> f64 {
        self.diagonal + self.off_diagonal / 2.0
    }
}

impl StcMeasure {
    pub fn new(kappa: CountingDistribution, nu: LabelDistribution) -> Result<Self> {
        kappa.validate()?;
        nu.validate()?;
        let c = kappa.mean();
        if !c.is_finite() {
            return Err(Error::InvalidDistribution(
                "point measure needs a finite mean count".into(),
            ));
        }
        if c <= 0.0 && !matches!(kappa, CountingDistribution::Dirac { n: 0 }) {
            return Err(Error::InvalidDistribution(
                "point measure needs mean count c > 0".into(),
            ));
        }
        Ok(StcMeasure { kappa, nu })
    }

    /// Draw K ~ kappa then K iid labels; deterministic in the seed.
    pub fn sample(&self, seed: u64) -> PointRealization {
        let mut r = rng::master(seed);
        let k = self.kappa.sample(&mut r);
        let labels = (0..k).map(|_| self.nu.sample(&mut r)).collect();
        PointRealization { labels, seed }
    }

    /// Mean and variance of Nf, and covariance of (Nf, Ng) when g is given:
    /// E Nf = c nu(f), Var Nf = c nu(f^2) + (d^2 - c) nu(f)^2,
    /// Cov = c nu(fg) + (d^2 - c) nu(f) nu(g).
    pub fn integral_stats<F, G>(
        &self,
        f: F,
        g: Option<G>,
        rule: &QuadratureRule,
    ) -> IntegralStats
    where
        F: Fn(&Label) -> f64,
        G: Fn(&Label) -> f64,
    {
        let (c, d2) = self.kappa.moments();
        let nf = self.nu.integrate(&f, rule);
        let nf2 = self.nu.integrate(|x| f(x) * f(x), rule);
        let mean = c * nf.value;
        let variance = c * nf2.value + (d2 - c) * nf.value * nf.value;
        let covariance = g.map(|g| {
            let ng = self.nu.integrate(&g, rule).value;
            let nfg = self.nu.integrate(|x| f(x) * g(x), rule).value;
            c * nfg + (d2 - c) * nf.value * ng
        });
        IntegralStats {
            mean,
            variance,
            covariance,
            tail_mass: nf.tail_mass,
        }
    }

    /// Restriction of the measure to a subset of positive mass.
    pub fn trace(&self, set: LabelSet) -> Result<TraceMeasure<'_>> {
        let a = self.nu.mass(&set)?;
        if a <= 0.0 {
            return Err(Error::EmptyTrace);
        }
        Ok(TraceMeasure {
            base: self,
            set,
            mass: a,
        })
    }

    /// Mean of the product measure against a two-argument function.
    ///
    /// `f` must be the honest kernel on label values. Value-level
    /// self-exclusion indicators (x != y) belong in `f` only on atomic
    /// label spaces, where colliding atoms carry mass; on continuous
    /// spaces they are almost-everywhere vacuous and would corrupt the
    /// quadrature grid's coincident node pairs.
    pub fn product_mean<F>(&self, f: F, rule: &QuadratureRule) -> ProductMean
    where
        F: Fn(&Label, &Label) -> f64,
    {
        let c = self.kappa.mean();
        let fm2 = self.kappa.factorial_moment(2);
        let diag = self.nu.integrate(|x| f(x, x), rule);
        let cross = self.nu.product_integrate(&f, rule);
        ProductMean {
            diagonal: c * diag.value,
            off_diagonal: fm2 * cross.value,
            tail_mass: diag.tail_mass.max(cross.tail_mass),
        }
    }
}

/// Trace (restriction) of a sampled measure to a subset A with nu(A) = a.
///
/// The restricted count has pgf psi_A(t) = psi(1 - a + a t); for a
/// Poisson-type base the trace stays in the family with rescaled
/// parameters.
#[derive(Debug, Clone)]
pub struct TraceMeasure<'a> {
    base: &'a StcMeasure,
    set: LabelSet,
    mass: f64,
}

impl TraceMeasure<'_> {
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn set(&self) -> &LabelSet {
        &self.set
    }

    /// pgf of the restricted count K_A.
    pub fn pgf(&self, t: f64) -> f64 {
        self.base.kappa.pgf(1.0 - self.mass + self.mass * t)
    }

    /// The rescaled family member for Poisson-type bases: Poisson(c) to
    /// Poisson(ac), Binomial(n,p) to Binomial(n,ap), NegBin(r,p) to
    /// NegBin(r, ap/(1-p+ap)).
    pub fn pt_rescaled(&self) -> Option<CountingDistribution> {
        let a = self.mass;
        match self.base.kappa {
            CountingDistribution::Poisson { c } => {
                CountingDistribution::poisson(c * a).ok()
            }
            CountingDistribution::Binomial { n, p } => {
                CountingDistribution::binomial(n, p * a).ok()
            }
            CountingDistribution::NegativeBinomial { r, p } => {
                CountingDistribution::negative_binomial(r, a * p / (1.0 - p + a * p)).ok()
            }
            _ => None,
        }
    }

    /// Mean and variance of the restricted integral N_A f:
    /// E = a c nu_A(f), Var = a c nu_A(f^2) + a^2 (d^2 - c) nu_A(f)^2.
    pub fn integral_stats<F>(&self, f: F, rule: &QuadratureRule) -> Result<IntegralStats>
    where
        F: Fn(&Label) -> f64,
    {
        let (c, d2) = self.base.kappa.moments();
        let a = self.mass;
        let grid = self.base.nu.restricted_grid(&self.set, rule)?;
        let nf: f64 = grid.nodes.iter().map(|(x, w)| w * f(x)).sum();
        let nf2: f64 = grid.nodes.iter().map(|(x, w)| w * f(x) * f(x)).sum();
        Ok(IntegralStats {
            mean: a * c * nf,
            variance: a * c * nf2 + a * a * (d2 - c) * nf * nf,
            covariance: None,
            tail_mass: grid.tail_mass,
        })
    }
}

/// Fixed atoms with independent nonnegative integer weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaiwMeasure {
    pub atoms: Vec<Label>,
    pub weight_laws: Vec<CountingDistribution>,
}

impl FaiwMeasure {
    pub fn new(atoms: Vec<Label>, weight_laws: Vec<CountingDistribution>) -> Result<Self> {
        if atoms.len() != weight_laws.len() {
            return Err(Error::SizeMismatch(format!(
                "{} atoms but {} weight laws",
                atoms.len(),
                weight_laws.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidModel("fixed-atom measure needs atoms".into()));
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                if atoms[i] == atoms[j] {
                    return Err(Error::InvalidModel(format!(
                        "atoms {i} and {j} coincide"
                    )));
                }
            }
        }
        for law in &weight_laws {
            law.validate()?;
        }
        Ok(FaiwMeasure { atoms, weight_laws })
    }

    /// Atoms 1..=n with a shared weight law.
    pub fn homogeneous(n: u64, law: CountingDistribution) -> Result<Self> {
        Self::new(
            (1..=n).map(Label::Index).collect(),
            vec![law; n as usize],
        )
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Independent weights per atom, reproducible by seed.
    pub fn sample(&self, seed: u64) -> Vec<u64> {
        let mut r = rng::master(seed);
        self.weight_laws.iter().map(|law| law.sample(&mut r)).collect()
    }

    /// E W_x W_y: c_x^2 + d_x^2 on the diagonal, c_x c_y elsewhere.
    pub fn z(&self, x: usize, y: usize) -> f64 {
        let (cx, dx) = self.weight_laws[x].moments();
        if x == y {
            cx * cx + dx
        } else {
            cx * self.weight_laws[y].mean()
        }
    }

    /// Exact product-measure mean sum_{x,y} Z_xy f(x,y).
    pub fn product_mean<F>(&self, f: F) -> f64
    where
        F: Fn(&Label, &Label) -> f64,
    {
        let n = self.atoms.len();
        let mut acc = 0.0;
        for x in 0..n {
            for y in 0..n {
                acc += self.z(x, y) * f(&self.atoms[x], &self.atoms[y]);
            }
        }
        acc
    }

    /// Normalized variant: diagonal plus half the off-diagonal sum.
    pub fn normalized_product_mean<F>(&self, f: F) -> f64
    where
        F: Fn(&Label, &Label) -> f64,
    {
        let n = self.atoms.len();
        let mut acc = 0.0;
        for x in 0..n {
            for y in 0..n {
                let term = self.z(x, y) * f(&self.atoms[x], &self.atoms[y]);
                acc += if x == y { term } else { term / 2.0 };
            }
        }
        acc
    }
}

/// Row/column rescaling of a square array: out[x][y] = w[x] w[y] b[x][y].
///
/// `b` is row-major n x n with n = w.len(). The all-ones weight vector is
/// the identity and the all-zeros vector annihilates the array.
pub fn w_transform(w: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = w.len();
    if b.len() != n * n {
        return Err(Error::SizeMismatch(format!(
            "weight vector of length {n} against array of {} entries",
            b.len()
        )));
    }
    let mut out = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            out[x * n + y] = w[x] * w[y] * b[x * n + y];
        }
    }
    Ok(out)
}

/// Empirical probability measure of an observed point list.
pub fn empirical_measure(points: Vec<Label>) -> Result<LabelDistribution> {
    LabelDistribution::empirical(points)
}

/// Convenience: integrate a label function against nu (Fubini's Nf view).
pub fn integrate<F>(nu: &LabelDistribution, f: F, rule: &QuadratureRule) -> IntegrationResult
where
    F: Fn(&Label) -> f64,
{
    nu.integrate(f, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rule() -> QuadratureRule {
        QuadratureRule::default()
    }

    fn leb() -> LabelDistribution {
        LabelDistribution::LebesgueUnit
    }

    #[test]
    fn dirac_sample_has_exact_count() {
        let m = StcMeasure::new(CountingDistribution::dirac(4).unwrap(), leb()).unwrap();
        let r = m.sample(1);
        assert_eq!(r.labels.len(), 4);
        for l in &r.labels {
            let v = l.value();
            assert!((0.0..=1.0).contains(&v));
        }
        // reproducibility
        assert_eq!(m.sample(1).labels, r.labels);
        assert_ne!(m.sample(2).labels, r.labels);
    }

    #[test]
    fn uniform_count_support() {
        let m = StcMeasure::new(
            CountingDistribution::uniform_int(2, 5).unwrap(),
            leb(),
        )
        .unwrap();
        for seed in 0..200 {
            let k = m.sample(seed).labels.len();
            assert!((2..=5).contains(&k));
        }
    }

    #[test]
    fn poisson_count_monte_carlo_mean() {
        let m = StcMeasure::new(CountingDistribution::poisson(30.0).unwrap(), leb()).unwrap();
        let reps = 100_000u64;
        let mut sum = 0.0;
        for seed in 0..reps {
            sum += m.sample(seed).labels.len() as f64;
        }
        let mean = sum / reps as f64;
        let tol = 4.0 * (30.0f64 / reps as f64).sqrt();
        assert!((mean - 30.0).abs() < tol, "mean {mean}");
    }

    #[test]
    fn integral_stats_examples() {
        // counts: kappa = Poisson(2), f = 1 -> mean 2, var 2
        let m = StcMeasure::new(CountingDistribution::poisson(2.0).unwrap(), leb()).unwrap();
        let s = m.integral_stats(|_| 1.0, None::<fn(&Label) -> f64>, &rule());
        assert_relative_eq!(s.mean, 2.0, max_relative = 1e-12);
        assert_relative_eq!(s.variance, 2.0, max_relative = 1e-12);

        // Dirac(n), f = 1 -> mean n, var 0
        let m = StcMeasure::new(CountingDistribution::dirac(7).unwrap(), leb()).unwrap();
        let s = m.integral_stats(|_| 1.0, None::<fn(&Label) -> f64>, &rule());
        assert_relative_eq!(s.mean, 7.0, max_relative = 1e-12);
        assert!(s.variance.abs() < 1e-12);

        // Poisson(3), f(x) = x -> mean 1.5, var 3 * (1/3) = 1
        let m = StcMeasure::new(CountingDistribution::poisson(3.0).unwrap(), leb()).unwrap();
        let s = m.integral_stats(|x| x.value(), None::<fn(&Label) -> f64>, &rule());
        assert_relative_eq!(s.mean, 1.5, max_relative = 1e-12);
        assert_relative_eq!(s.variance, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn trace_poisson_rescales() {
        let m = StcMeasure::new(CountingDistribution::poisson(6.0).unwrap(), leb()).unwrap();
        let tr = m.trace(LabelSet::Interval { lo: 0.0, hi: 0.5 }).unwrap();
        assert_eq!(tr.mass(), 0.5);
        let rescaled = tr.pt_rescaled().unwrap();
        assert_eq!(rescaled, CountingDistribution::poisson(3.0).unwrap());
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(tr.pgf(t), rescaled.pgf(t), max_relative = 1e-12);
        }
    }

    #[test]
    fn trace_binomial_rescales() {
        let m = StcMeasure::new(CountingDistribution::binomial(4, 0.6).unwrap(), leb()).unwrap();
        let tr = m.trace(LabelSet::Interval { lo: 0.25, hi: 0.75 }).unwrap();
        let rescaled = tr.pt_rescaled().unwrap();
        assert_eq!(rescaled, CountingDistribution::binomial(4, 0.3).unwrap());
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(tr.pgf(t), rescaled.pgf(t), max_relative = 1e-12);
        }
    }

    #[test]
    fn full_trace_is_identity() {
        let m = StcMeasure::new(CountingDistribution::zipf(1.5, 30).unwrap(), leb()).unwrap();
        let tr = m.trace(LabelSet::Full).unwrap();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(tr.pgf(t), m.kappa.pgf(t), max_relative = 1e-12);
        }
    }

    #[test]
    fn empty_trace_errors() {
        let m = StcMeasure::new(CountingDistribution::poisson(2.0).unwrap(), leb()).unwrap();
        assert!(matches!(
            m.trace(LabelSet::Interval { lo: 1.5, hi: 2.0 }),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn trace_stats_match_formula() {
        let m = StcMeasure::new(CountingDistribution::poisson(4.0).unwrap(), leb()).unwrap();
        let tr = m.trace(LabelSet::Interval { lo: 0.0, hi: 0.5 }).unwrap();
        let s = tr.integral_stats(|x| x.value(), &rule()).unwrap();
        // nu_A f = 0.25 on [0, 0.5]; mean = a c nu_A f = 0.5 * 4 * 0.25
        assert_relative_eq!(s.mean, 0.5, max_relative = 1e-10);
        // var = a c nu_A f^2 (Poisson kills the second term)
        // nu_A f^2 = mean of x^2 over [0,0.5] = 1/12
        assert_relative_eq!(s.variance, 0.5 * 4.0 / 12.0, max_relative = 1e-10);
    }

    #[test]
    fn product_mean_examples() {
        // f == 1 -> E K^2 = c^2 + d^2
        let m = StcMeasure::new(CountingDistribution::poisson(3.0).unwrap(), leb()).unwrap();
        let pm = m.product_mean(|_, _| 1.0, &rule());
        assert_relative_eq!(pm.total(), 12.0, max_relative = 1e-10);

        // power-law graphon: with self-exclusion only the off-diagonal term
        // survives, (c^2 + d^2 - c)/(1+b)^2
        let b = 1.0;
        let m = StcMeasure::new(CountingDistribution::poisson(5.0).unwrap(), leb()).unwrap();
        let pm = m.product_mean(
            |x, y| (1.0 + b * x.value()).powi(-2) * (1.0 + b * y.value()).powi(-2),
            &rule(),
        );
        let fm2 = 5.0f64 * 5.0 + 5.0 - 5.0; // c^2 + d^2 - c for Poisson
        assert_relative_eq!(
            pm.off_diagonal,
            fm2 / (1.0 + b).powi(2),
            max_relative = 1e-10
        );
    }

    #[test]
    fn dot_product_mean_decomposes() {
        // <x^a, y^a>/d with a=1, d=3: off-diagonal (c^2+d^2-c)/(a+1)^2,
        // diagonal c/(2a+1); both free of d.
        let c = 4.0;
        let m = StcMeasure::new(
            CountingDistribution::poisson(c).unwrap(),
            LabelDistribution::LebesgueCube { dim: 3 },
        )
        .unwrap();
        let pm = m.product_mean(
            |x, y| {
                x.coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(u, v)| u * v)
                    .sum::<f64>()
                    / 3.0
            },
            &rule(),
        );
        let fm2 = c * c;
        assert_relative_eq!(pm.off_diagonal, fm2 / 4.0, max_relative = 1e-9);
        assert_relative_eq!(pm.diagonal, c / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn faiw_unit_weights_reduce_to_plain_sum() {
        let m = FaiwMeasure::homogeneous(5, CountingDistribution::dirac(1).unwrap()).unwrap();
        let f = |x: &Label, y: &Label| (x.value() + 2.0 * y.value()).sqrt();
        let mut plain = 0.0;
        for x in 1..=5u64 {
            for y in 1..=5u64 {
                plain += f(&Label::Index(x), &Label::Index(y));
            }
        }
        assert_relative_eq!(m.product_mean(f), plain, max_relative = 1e-13);
        assert_eq!(m.sample(3), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn faiw_two_atom_hand_value() {
        // c = (1,2), d^2 = (0,0), f == 1 -> 1 + 4 + 2 + 2 = 9
        let m = FaiwMeasure::new(
            vec![Label::Index(1), Label::Index(2)],
            vec![
                CountingDistribution::dirac(1).unwrap(),
                CountingDistribution::dirac(2).unwrap(),
            ],
        )
        .unwrap();
        assert_relative_eq!(m.product_mean(|_, _| 1.0), 9.0, max_relative = 1e-13);
    }

    #[test]
    fn faiw_bernoulli_zeta_formula() {
        // Bernoulli(1/x^s) weights on atoms 1..N, f == 1:
        // truncation of zeta(s) - zeta(2s) + zeta(s)^2
        let s = 2.0;
        let n = 400u64;
        let laws: Vec<_> = (1..=n)
            .map(|x| CountingDistribution::bernoulli((x as f64).powf(-s)).unwrap())
            .collect();
        let m = FaiwMeasure::new((1..=n).map(Label::Index).collect(), laws).unwrap();
        let p: Vec<f64> = (1..=n).map(|x| (x as f64).powf(-s)).collect();
        let sp: f64 = p.iter().sum();
        let sp2: f64 = p.iter().map(|q| q * q).sum();
        let expect = sp - sp2 + sp * sp;
        assert_relative_eq!(m.product_mean(|_, _| 1.0), expect, max_relative = 1e-11);
    }

    #[test]
    fn faiw_monte_carlo_total() {
        // Bernoulli(1/x^2) totals: MC mean of sum W_x vs partial zeta sum
        let n = 1000u64;
        let laws: Vec<_> = (1..=n)
            .map(|x| CountingDistribution::bernoulli((x as f64).powi(-2)).unwrap())
            .collect();
        let m = FaiwMeasure::new((1..=n).map(Label::Index).collect(), laws).unwrap();
        let expect: f64 = (1..=n).map(|x| (x as f64).powi(-2)).sum();
        let var: f64 = (1..=n)
            .map(|x| {
                let p = (x as f64).powi(-2);
                p * (1.0 - p)
            })
            .sum();
        let reps = 10_000u64;
        let mut sum = 0.0;
        for seed in 0..reps {
            sum += m.sample(seed).iter().sum::<u64>() as f64;
        }
        let mean = sum / reps as f64;
        let tol = 4.0 * (var / reps as f64).sqrt();
        assert!((mean - expect).abs() < tol, "mean {mean} expect {expect}");
    }

    #[test]
    fn faiw_poisson_superposition() {
        // Poisson(c_x) weights: sum W_x ~ Poisson(sum c_x); check the
        // empirical pgf at a few points against the closed form.
        let cs = [0.5, 1.0, 1.5];
        let laws: Vec<_> = cs
            .iter()
            .map(|&c| CountingDistribution::poisson(c).unwrap())
            .collect();
        let m = FaiwMeasure::new(
            (1..=3).map(Label::Index).collect(),
            laws,
        )
        .unwrap();
        let total = CountingDistribution::poisson(3.0).unwrap();
        let reps = 40_000u64;
        for t in [0.3f64, 0.7] {
            let mut acc = 0.0;
            for seed in 0..reps {
                let s: u64 = m.sample(seed).iter().sum();
                acc += t.powi(s as i32);
            }
            let emp = acc / reps as f64;
            // bound Var(t^S) <= 1
            let tol = 4.0 * (1.0f64 / reps as f64).sqrt();
            assert!((emp - total.pgf(t)).abs() < tol, "t={t}: {emp}");
        }
    }

    #[test]
    fn w_transform_examples() {
        let b = vec![1.0, 1.0, 1.0, 1.0];
        assert_eq!(w_transform(&[1.0, 1.0], &b).unwrap(), b);
        assert_eq!(
            w_transform(&[0.0, 0.0], &b).unwrap(),
            vec![0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            w_transform(&[2.0, 3.0], &b).unwrap(),
            vec![4.0, 6.0, 6.0, 9.0]
        );
        assert!(w_transform(&[1.0], &b).is_err());
    }

    #[test]
    fn w_transform_multiplicative() {
        // T_{w*v} = T_w . T_v entrywise
        let w = [0.5, 2.0, 1.5];
        let v = [3.0, 0.0, 1.0];
        let b: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let wv: Vec<f64> = w.iter().zip(v).map(|(a, b)| a * b).collect();
        let lhs = w_transform(&wv, &b).unwrap();
        let rhs = w_transform(&w, &w_transform(&v, &b).unwrap()).unwrap();
        for (a, b) in lhs.iter().zip(&rhs) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn bootstrap_empirical_product_mean() {
        // n = 2 observed points, kappa = Dirac(2), f == 1:
        // E Mf = sum f(Xi,Xi) + (n-1)/n sum sum = 2 + (1/2) * 4 = 4
        let nu = empirical_measure(vec![Label::Scalar(0.2), Label::Scalar(0.9)]).unwrap();
        let m = StcMeasure::new(CountingDistribution::dirac(2).unwrap(), nu).unwrap();
        let pm = m.product_mean(|_, _| 1.0, &rule());
        assert_relative_eq!(pm.total(), 4.0, max_relative = 1e-12);
    }
}
