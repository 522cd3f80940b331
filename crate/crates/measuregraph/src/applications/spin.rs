//! Spin networks: fixed-atom graphs on a one-dimensional lattice whose
//! total interaction is a Gibbs energy.
//!
//! The Laplace transform of the graph weight, evaluated at beta, equals
//! the partition function of the Gibbs family with the same energy, so
//! the exact enumeration here computes both at once through two
//! independent code paths.

use serde::{Deserialize, Serialize};

use crate::distributions::CountingDistribution;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::measures::w_transform;
use crate::rng;
use crate::transforms::GraphonKernel;

/// Cap on exact enumeration: product of per-site state counts.
pub const ENUMERATION_BUDGET: u128 = 1 << 20;

/// A-local spin network on a 1-d lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinNetwork {
    /// Lattice site positions.
    pub sites: Vec<f64>,
    /// Per-site spin law; exact enumeration needs bounded support.
    pub spin_laws: Vec<CountingDistribution>,
    /// Interaction kernel f(x, y) on site positions.
    pub interaction: GraphonKernel,
    /// Interaction set A = {0 < |x - y| <= radius}, or with the diagonal
    /// included when `self_interaction` is set.
    pub radius: f64,
    pub self_interaction: bool,
    /// Optional external field k(x) per site.
    pub field: Option<Vec<f64>>,
}

impl SpinNetwork {
    /// Regular lattice 1..n with a shared spin law and constant coupling.
    pub fn chain(n: usize, law: CountingDistribution, coupling: f64, radius: f64) -> Self {
        SpinNetwork {
            sites: (1..=n).map(|i| i as f64).collect(),
            spin_laws: vec![law; n],
            interaction: GraphonKernel::constant(coupling),
            radius,
            self_interaction: false,
            field: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites.len() != self.spin_laws.len() {
            return Err(Error::SizeMismatch(format!(
                "{} sites vs {} spin laws",
                self.sites.len(),
                self.spin_laws.len()
            )));
        }
        if let Some(k) = &self.field {
            if k.len() != self.sites.len() {
                return Err(Error::SizeMismatch("field length mismatch".into()));
            }
        }
        Ok(())
    }

    fn in_range(&self, i: usize, j: usize) -> bool {
        let d = (self.sites[i] - self.sites[j]).abs();
        (d > 0.0 || self.self_interaction) && d <= self.radius
    }

    fn pair_label(&self, i: usize) -> Label {
        Label::Scalar(self.sites[i])
    }

    /// Total states in the configuration space, None when unbounded.
    pub fn state_space_size(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for law in &self.spin_laws {
            let b = law.support_bound()? as u128 + 1;
            total = total.checked_mul(b)?;
        }
        Some(total)
    }

    fn budget_check(&self) -> Result<Vec<u64>> {
        self.validate()?;
        let bounds: Option<Vec<u64>> = self
            .spin_laws
            .iter()
            .map(|l| l.support_bound())
            .collect();
        let bounds = bounds.ok_or_else(|| {
            Error::Budget(
                "spin laws with unbounded support cannot be enumerated; \
                 use Monte Carlo sampling instead"
                    .into(),
            )
        })?;
        match self.state_space_size() {
            Some(sz) if sz <= ENUMERATION_BUDGET => Ok(bounds),
            _ => Err(Error::Budget(format!(
                "configuration space exceeds the {ENUMERATION_BUDGET}-state budget; \
                 use Monte Carlo sampling instead"
            ))),
        }
    }

    /// Energy of one configuration: ordered-pair interaction sum over the
    /// A-local pairs, plus the field term when present.
    pub fn energy(&self, w: &[u64]) -> Result<f64> {
        self.validate()?;
        let n = self.sites.len();
        if w.len() != n {
            return Err(Error::SizeMismatch(format!(
                "{} spins for {} sites",
                w.len(),
                n
            )));
        }
        let mut e = 0.0;
        for i in 0..n {
            for j in 0..n {
                if self.in_range(i, j) {
                    e += (w[i] * w[j]) as f64
                        * self.interaction.eval(&self.pair_label(i), &self.pair_label(j));
                }
            }
        }
        if let Some(k) = &self.field {
            for i in 0..n {
                e += w[i] as f64 * k[i];
            }
        }
        Ok(e)
    }

    /// Mean energy: sum over A-local pairs of Z_xy f(x,y) plus the field.
    pub fn mean_energy(&self) -> Result<f64> {
        self.validate()?;
        let n = self.sites.len();
        let mut e = 0.0;
        for i in 0..n {
            for j in 0..n {
                if !self.in_range(i, j) {
                    continue;
                }
                let (ci, di) = self.spin_laws[i].moments();
                let z = if i == j {
                    ci * ci + di
                } else {
                    ci * self.spin_laws[j].mean()
                };
                e += z * self.interaction.eval(&self.pair_label(i), &self.pair_label(j));
            }
        }
        if let Some(k) = &self.field {
            for i in 0..n {
                e += self.spin_laws[i].mean() * k[i];
            }
        }
        Ok(e)
    }

    /// Draw a configuration from the independent prior.
    pub fn sample(&self, seed: u64) -> Vec<u64> {
        let mut r = rng::master(seed);
        self.spin_laws.iter().map(|l| l.sample(&mut r)).collect()
    }

    /// Partition function Z(beta) = sum_w P(w) e^{-beta E_w} by exact
    /// enumeration (the Gibbs-side path). Probabilities come from
    /// precomputed per-site pmf tables and energies from `energy`.
    pub fn partition_function(&self, beta: f64) -> Result<f64> {
        let bounds = self.budget_check()?;
        let pmf: Vec<Vec<f64>> = self
            .spin_laws
            .iter()
            .zip(&bounds)
            .map(|(l, &b)| (0..=b).map(|k| l.pmf(k)).collect())
            .collect();
        let mut total = 0.0;
        let mut w = vec![0u64; bounds.len()];
        loop {
            let mut prob = 1.0;
            for (i, &wi) in w.iter().enumerate() {
                prob *= pmf[i][wi as usize];
            }
            if prob > 0.0 {
                total += prob * (-beta * self.energy(&w)?).exp();
            }
            if !odometer(&mut w, &bounds) {
                break;
            }
        }
        Ok(total)
    }

    /// The same sum reached through the product-measure side: the graph
    /// weight Mf of each configuration is the entrywise norm of the
    /// W-transformed local potential array, and the Laplace transform of
    /// Mf at beta is averaged over the prior.
    pub fn laplace_transform(&self, beta: f64) -> Result<f64> {
        let bounds = self.budget_check()?;
        let n = self.sites.len();
        // local potential array B = f * 1_A
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if self.in_range(i, j) {
                    b[i * n + j] =
                        self.interaction.eval(&self.pair_label(i), &self.pair_label(j));
                }
            }
        }
        let mut total = 0.0;
        let mut w = vec![0u64; n];
        loop {
            let mut prob = 1.0;
            for (i, &wi) in w.iter().enumerate() {
                prob *= self.spin_laws[i].pmf(wi);
            }
            if prob > 0.0 {
                let wf: Vec<f64> = w.iter().map(|&v| v as f64).collect();
                let mut mf: f64 = w_transform(&wf, &b)?.iter().sum();
                if let Some(k) = &self.field {
                    mf += wf.iter().zip(k).map(|(a, b)| a * b).sum::<f64>();
                }
                total += prob * (-beta * mf).exp();
            }
            if !odometer(&mut w, &bounds) {
                break;
            }
        }
        Ok(total)
    }

    /// Gibbs probability of a configuration at inverse temperature beta.
    pub fn gibbs_probability(&self, beta: f64, w: &[u64]) -> Result<f64> {
        let z = self.partition_function(beta)?;
        let mut prob = 1.0;
        for (i, &wi) in w.iter().enumerate() {
            prob *= self.spin_laws[i].pmf(wi);
        }
        Ok(prob * (-beta * self.energy(w)?).exp() / z)
    }
}

fn odometer(w: &mut [u64], bounds: &[u64]) -> bool {
    for i in 0..w.len() {
        if w[i] < bounds[i] {
            w[i] += 1;
            return true;
        }
        w[i] = 0;
    }
    false
}

/// Summary of a spin network evaluation on a beta grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinReport {
    pub betas: Vec<f64>,
    pub partition: Vec<f64>,
    pub mean_energy: f64,
    pub state_space: u128,
}

pub fn spin_report(net: &SpinNetwork, betas: &[f64]) -> Result<SpinReport> {
    let partition = betas
        .iter()
        .map(|&b| net.partition_function(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpinReport {
        betas: betas.to_vec(),
        partition,
        mean_energy: net.mean_energy()?,
        state_space: net.state_space_size().unwrap_or(0),
    })
}
