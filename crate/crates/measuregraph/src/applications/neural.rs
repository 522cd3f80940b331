//! Feed-forward wiring: a stochastic block model of neuron connectivity
//! where layer x only connects to layer x+1.

use serde::{Deserialize, Serialize};

use crate::distributions::CountingDistribution;
use crate::error::{Error, Result};
use crate::graphs::LabeledGraph;
use crate::label::Label;
use crate::rng;
use rand::Rng;

/// Architecture of the hidden layers: how many, how neurons spread over
/// them, and the consecutive-layer connection probabilities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NnArchitecture {
    /// Number of hidden layers n.
    pub layers: usize,
    /// nu{x} for x = 1..n; must sum to one.
    pub layer_probs: Vec<f64>,
    /// p(x, x+1) for x = 1..n-1.
    pub connection_probs: Vec<f64>,
    /// Law of the total hidden-neuron count.
    pub kappa: CountingDistribution,
}

impl NnArchitecture {
    pub fn uniform(layers: usize, p: f64, kappa: CountingDistribution) -> Self {
        NnArchitecture {
            layers,
            layer_probs: vec![1.0 / layers as f64; layers],
            connection_probs: vec![p; layers.saturating_sub(1)],
            kappa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers < 1 {
            return Err(Error::InvalidModel("need at least one hidden layer".into()));
        }
        if self.layer_probs.len() != self.layers {
            return Err(Error::SizeMismatch(format!(
                "{} layer probabilities for {} layers",
                self.layer_probs.len(),
                self.layers
            )));
        }
        if self.connection_probs.len() + 1 != self.layers {
            return Err(Error::SizeMismatch(format!(
                "{} connection probabilities for {} layers",
                self.connection_probs.len(),
                self.layers
            )));
        }
        let total: f64 = self.layer_probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidModel(format!(
                "layer probabilities sum to {total}"
            )));
        }
        if self
            .connection_probs
            .iter()
            .any(|p| !(0.0..=1.0).contains(p))
        {
            return Err(Error::InvalidModel(
                "connection probabilities must lie in [0,1]".into(),
            ));
        }
        Ok(())
    }

    /// Expected number of hidden-to-hidden connections:
    /// E K(K-1) * sum_x p(x,x+1) nu{x} nu{x+1}.
    pub fn expected_edges(&self) -> f64 {
        let fm2 = self.kappa.factorial_moment(2);
        let mut s = 0.0;
        for x in 0..self.layers - 1 {
            s += self.connection_probs[x] * self.layer_probs[x] * self.layer_probs[x + 1];
        }
        fm2 * s
    }

    /// Expected out-degree of a neuron in layer x (1-based).
    pub fn expected_out_degree(&self, x: usize) -> f64 {
        if x < self.layers {
            self.kappa.mean() * self.connection_probs[x - 1] * self.layer_probs[x]
        } else {
            0.0
        }
    }

    /// Expected in-degree of a neuron in layer x (1-based).
    pub fn expected_in_degree(&self, x: usize) -> f64 {
        if x > 1 {
            self.kappa.mean() * self.connection_probs[x - 2] * self.layer_probs[x - 2]
        } else {
            0.0
        }
    }
}

/// A sampled wiring with its analytic summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NnWiring {
    pub graph: LabeledGraph,
    pub expected_edges: f64,
    pub expected_out_degree: Vec<f64>,
    pub expected_in_degree: Vec<f64>,
    pub realized_edges: u64,
    /// Neurons in layers 2..n: one bias parameter each.
    pub bias_count: u64,
    /// realized_edges + bias_count.
    pub parameter_count: u64,
}

/// Sample the hidden wiring and report the paper's three analytic
/// quantities alongside it. Input/output-layer parameters are excluded.
pub fn nn_wire(arch: &NnArchitecture, seed: u64) -> Result<NnWiring> {
    arch.validate()?;
    let mut r = rng::master(seed);
    let k = arch.kappa.sample(&mut r);
    // layer assignment per neuron
    let mut cdf = Vec::with_capacity(arch.layers);
    let mut acc = 0.0;
    for p in &arch.layer_probs {
        acc += p;
        cdf.push(acc);
    }
    let labels: Vec<Label> = (0..k)
        .map(|_| {
            let u: f64 = r.random::<f64>() * acc;
            let layer = cdf.partition_point(|&c| c <= u).min(arch.layers - 1);
            Label::Index(layer as u64 + 1)
        })
        .collect();
    let n = labels.len();
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let li = labels[i].as_index().unwrap() as usize;
            let lj = labels[j].as_index().unwrap() as usize;
            if lj == li + 1 && r.random::<f64>() < arch.connection_probs[li - 1] {
                weights[i * n + j] = 1.0;
            }
        }
    }
    let graph = LabeledGraph::new(labels, weights, true, false)?;
    let realized_edges = graph.active_edge_count();
    let bias_count = graph
        .labels()
        .iter()
        .filter(|l| l.as_index().unwrap() > 1)
        .count() as u64;
    Ok(NnWiring {
        expected_edges: arch.expected_edges(),
        expected_out_degree: (1..=arch.layers).map(|x| arch.expected_out_degree(x)).collect(),
        expected_in_degree: (1..=arch.layers).map(|x| arch.expected_in_degree(x)).collect(),
        realized_edges,
        bias_count,
        parameter_count: realized_edges + bias_count,
        graph,
    })
}
