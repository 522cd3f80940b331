//! Gauss-Legendre quadrature on [0,1] and truncation control for discrete
//! label distributions.

use serde::{Deserialize, Serialize};

/// Numerical integration rule shared by every analytic routine.
///
/// Continuous label distributions integrate with Gauss-Legendre nodes on
/// [0,1] (spectrally accurate for the smooth kernels in play); discrete
/// infinite distributions sum the first `truncation` atoms and report the
/// left-over mass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureRule {
    order: usize,
    truncation: u64,
    #[serde(skip)]
    nodes: Vec<f64>,
    #[serde(skip)]
    weights: Vec<f64>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::gauss_legendre(64)
    }
}

impl QuadratureRule {
    /// Rule with `order` Gauss-Legendre nodes and the default discrete
    /// truncation of 10_000 atoms.
    pub fn gauss_legendre(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre_unit(order);
        QuadratureRule {
            order,
            truncation: 10_000,
            nodes,
            weights,
        }
    }

    pub fn with_truncation(mut self, truncation: u64) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// Nodes and weights on [0,1]; weights sum to 1.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate a scalar function over [0,1].
    pub fn integrate_unit<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points().map(|(x, w)| w * f(x)).sum()
    }
}

// Rebuild skipped node arrays after deserialization.
impl QuadratureRule {
    pub fn rehydrate(&mut self) {
        if self.nodes.is_empty() {
            let (nodes, weights) = gauss_legendre_unit(self.order.max(2));
            self.nodes = nodes;
            self.weights = weights;
        }
    }
}

/// Gauss-Legendre nodes/weights transformed to [0,1].
///
/// Newton iteration on P_n with the Chebyshev initial guess; weights on
/// [-1,1] are 2/((1-x^2) P_n'(x)^2), halved by the affine map so they sum
/// to exactly 1.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_value_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_value_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut pm1 = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for m in 1..n {
        let next = ((2 * m + 1) as f64 * x * p - m as f64 * pm1) / (m + 1) as f64;
        pm1 = p;
        p = next;
    }
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// Result of integrating against a label distribution: value plus the mass
/// left out by discrete truncation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub value: f64,
    /// Unsummed probability mass (discrete infinite supports only).
    pub tail_mass: f64,
    /// Set when the tail mass exceeds the reporting tolerance.
    pub warning: bool,
}

impl IntegrationResult {
    pub fn exact(value: f64) -> Self {
        IntegrationResult {
            value,
            tail_mass: 0.0,
            warning: false,
        }
    }

    pub fn truncated(value: f64, tail_mass: f64) -> Self {
        IntegrationResult {
            value,
            tail_mass,
            warning: tail_mass > 1e-9,
        }
    }
}
