//! End-to-end graph samplers and the model spec they consume.

pub mod degree_sequence;
pub mod io;

pub use degree_sequence::{
    is_graphical, realize_degree_sequence, DegreeSequence, GraphicalityCriterion, RealizeMode,
};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{CountingDistribution, LabelDistribution, QuadratureRule};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::measures::{FaiwMeasure, StcMeasure};
use crate::rng;
use crate::transforms::{RandomTransform, WeightFunction};

/// Where a graph came from: enough to validate rewiring compatibility and
/// to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec_hash: String,
    pub seed: u64,
}

/// A realized weighted labeled graph with a dense adjacency array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledGraph {
    labels: Vec<Label>,
    /// Row-major K x K nonnegative weights.
    weights: Vec<f64>,
    pub directed: bool,
    pub self_edges: bool,
    pub provenance: Option<Provenance>,
}

impl LabeledGraph {
    pub fn new(
        labels: Vec<Label>,
        weights: Vec<f64>,
        directed: bool,
        self_edges: bool,
    ) -> Result<Self> {
        let n = labels.len();
        if weights.len() != n * n {
            return Err(Error::SizeMismatch(format!(
                "{} labels vs {} weight entries",
                n,
                weights.len()
            )));
        }
        let g = LabeledGraph {
            labels,
            weights,
            directed,
            self_edges,
            provenance: None,
        };
        g.check_invariants()?;
        Ok(g)
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.n_vertices();
        for i in 0..n {
            for j in 0..n {
                let w = self.weight(i, j);
                if w < 0.0 || !w.is_finite() {
                    return Err(Error::InvalidModel(format!("weight ({i},{j}) = {w}")));
                }
                if !self.directed && self.weight(j, i) != w {
                    return Err(Error::InvalidModel(format!(
                        "undirected graph with asymmetric weights at ({i},{j})"
                    )));
                }
            }
            if !self.self_edges && self.weight(i, i) != 0.0 {
                return Err(Error::InvalidModel(format!(
                    "self-edges disallowed but weight ({i},{i}) > 0"
                )));
            }
        }
        Ok(())
    }

    pub fn empty(directed: bool, self_edges: bool) -> Self {
        LabeledGraph {
            labels: Vec::new(),
            weights: Vec::new(),
            directed,
            self_edges,
            provenance: None,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.labels.len() + j]
    }

    pub(crate) fn set_weight(&mut self, i: usize, j: usize, w: f64) {
        let n = self.labels.len();
        self.weights[i * n + j] = w;
    }

    pub(crate) fn set_label(&mut self, i: usize, l: Label) {
        self.labels[i] = l;
    }

    /// Active edges with the undirected (normalized) convention: unordered
    /// pairs plus loops once; directed graphs count ordered pairs.
    pub fn active_edge_count(&self) -> u64 {
        let n = self.n_vertices();
        let mut count = 0;
        for i in 0..n {
            let start = if self.directed { 0 } else { i };
            for j in start..n {
                if i != j && self.weight(i, j) > 0.0 {
                    count += 1;
                }
            }
            if self.weight(i, i) > 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Total edge weight, same pairing convention as `active_edge_count`.
    pub fn total_weight(&self) -> f64 {
        let n = self.n_vertices();
        let mut total = 0.0;
        for i in 0..n {
            let start = if self.directed { 0 } else { i };
            for j in start..n {
                if i != j {
                    total += self.weight(i, j);
                }
            }
            total += self.weight(i, i);
        }
        total
    }

    /// Ordered-pair (double-counting) total, the raw product-measure view.
    pub fn ordered_total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn out_degree(&self, i: usize) -> f64 {
        (0..self.n_vertices()).map(|j| self.weight(i, j)).sum()
    }

    pub fn in_degree(&self, j: usize) -> f64 {
        (0..self.n_vertices()).map(|i| self.weight(i, j)).sum()
    }

    /// Vertices touching at least one positive-weight edge.
    pub fn active_vertex_count(&self) -> u64 {
        let n = self.n_vertices();
        (0..n)
            .filter(|&i| (0..n).any(|j| self.weight(i, j) > 0.0 || self.weight(j, i) > 0.0))
            .count() as u64
    }

    /// Topological order of the positive-weight digraph, if acyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n_vertices();
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && self.weight(i, j) > 0.0 {
                    indeg[j] += 1;
                }
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = stack.pop() {
            order.push(u);
            for v in 0..n {
                if v != u && self.weight(u, v) > 0.0 {
                    indeg[v] -= 1;
                    if indeg[v] == 0 {
                        stack.push(v);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

/// The vertex side of a model: a sampled point measure or fixed atoms with
/// random weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexModel {
    Sampled {
        kappa: CountingDistribution,
        nu: LabelDistribution,
    },
    Fixed {
        atoms: Vec<Label>,
        weight_laws: Vec<CountingDistribution>,
    },
}

/// The full generative unit: vertices, edge transformation, weight test
/// function, and structural flags. Every sampler and every analytic
/// routine consumes one of these.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub vertices: VertexModel,
    pub transform: RandomTransform,
    #[serde(default)]
    pub weight: WeightFunction,
    pub directed: bool,
    pub self_edges: bool,
    /// Restrict edges to label-increasing pairs: the DAG construction.
    #[serde(default)]
    pub ordered_dag: bool,
}

impl ModelSpec {
    /// Plain G(n, p): Dirac(n) vertices, constant Bernoulli kernel,
    /// undirected, no self-edges.
    pub fn erdos_renyi(n: u64, p: f64) -> Result<Self> {
        Ok(ModelSpec {
            vertices: VertexModel::Sampled {
                kappa: CountingDistribution::dirac(n)?,
                nu: LabelDistribution::LebesgueUnit,
            },
            transform: RandomTransform::Bernoulli {
                kernel: crate::transforms::GraphonKernel::constant(p).with_zero_diagonal(),
            },
            weight: WeightFunction::Identity,
            directed: false,
            self_edges: false,
            ordered_dag: false,
        })
    }

    pub fn validate(&self, rule: &QuadratureRule) -> Result<()> {
        match &self.vertices {
            VertexModel::Sampled { kappa, nu } => {
                StcMeasure::new(kappa.clone(), nu.clone())?;
                self.transform.validate(nu, rule)?;
            }
            VertexModel::Fixed { atoms, weight_laws } => {
                FaiwMeasure::new(atoms.clone(), weight_laws.clone())?;
            }
        }
        if !self.directed && !self.transform.is_symmetric() {
            return Err(Error::InvalidModel(
                "undirected graphs need a symmetric transform".into(),
            ));
        }
        if matches!(self.transform, RandomTransform::Digraphon { .. }) && !self.directed {
            return Err(Error::InvalidModel("digraphon graphs are directed".into()));
        }
        if self.ordered_dag {
            if !self.directed || self.self_edges {
                return Err(Error::InvalidModel(
                    "DAG models are directed without self-edges".into(),
                ));
            }
            if !matches!(self.transform, RandomTransform::Bernoulli { .. }) {
                return Err(Error::InvalidModel(
                    "DAG models use a Bernoulli transform".into(),
                ));
            }
        }
        if let WeightFunction::Scaled { k } = self.weight {
            if !(k > 0.0) {
                return Err(Error::InvalidModel("scaled weight needs k > 0".into()));
            }
        }
        Ok(())
    }

    pub fn stc(&self) -> Option<StcMeasure> {
        match &self.vertices {
            VertexModel::Sampled { kappa, nu } => {
                Some(StcMeasure::new(kappa.clone(), nu.clone()).expect("validated spec"))
            }
            VertexModel::Fixed { .. } => None,
        }
    }

    pub fn faiw(&self) -> Option<FaiwMeasure> {
        match &self.vertices {
            VertexModel::Fixed { atoms, weight_laws } => Some(
                FaiwMeasure::new(atoms.clone(), weight_laws.clone()).expect("validated spec"),
            ),
            VertexModel::Sampled { .. } => None,
        }
    }

    pub fn nu(&self) -> LabelDistribution {
        match &self.vertices {
            VertexModel::Sampled { nu, .. } => nu.clone(),
            VertexModel::Fixed { atoms, .. } => LabelDistribution::Empirical {
                points: atoms.clone(),
            },
        }
    }

    /// Stable content hash of the canonical JSON form.
    pub fn spec_hash(&self) -> String {
        let json = serde_json::to_string(self).unwrap_or_default();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in json.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

/// Sample a full graph: vertices first, then one weight per (ordered or
/// unordered) pair through the transform's marginal law. Deterministic in
/// the seed.
pub fn generate(spec: &ModelSpec, seed: u64) -> Result<LabeledGraph> {
    let mut r = rng::master(seed);
    let mut g = match &spec.vertices {
        VertexModel::Sampled { kappa, nu } => {
            let m = StcMeasure::new(kappa.clone(), nu.clone())?;
            let k = kappa.sample(&mut r);
            let labels: Vec<Label> = (0..k).map(|_| m.nu.sample(&mut r)).collect();
            fill_edges(spec, labels, None, &mut r)?
        }
        VertexModel::Fixed { atoms, weight_laws } => {
            let m = FaiwMeasure::new(atoms.clone(), weight_laws.clone())?;
            let w: Vec<u64> = weight_laws.iter().map(|law| law.sample(&mut r)).collect();
            fill_edges(spec, m.atoms.clone(), Some(&w), &mut r)?
        }
    };
    g.provenance = Some(Provenance {
        spec_hash: spec.spec_hash(),
        seed,
    });
    Ok(g)
}

/// Directed acyclic sampler: the DAG restriction of the spec's graphon.
pub fn generate_dag(spec: &ModelSpec, seed: u64) -> Result<LabeledGraph> {
    if !spec.ordered_dag {
        return Err(Error::InvalidModel(
            "generate_dag needs a spec with ordered_dag set".into(),
        ));
    }
    generate(spec, seed)
}

fn fill_edges<R: Rng>(
    spec: &ModelSpec,
    labels: Vec<Label>,
    atom_weights: Option<&[u64]>,
    r: &mut R,
) -> Result<LabeledGraph> {
    let k = labels.len();
    let mut g = LabeledGraph {
        labels,
        weights: vec![0.0; k * k],
        directed: spec.directed,
        self_edges: spec.self_edges,
        provenance: None,
    };
    match &spec.transform {
        RandomTransform::Digraphon { digraphon } => {
            for i in 0..k {
                for j in (i + 1)..k {
                    let (xi, xj) = (g.labels[i].clone(), g.labels[j].clone());
                    let (a, b) = digraphon.sample_pair(&xi, &xj, r);
                    g.set_weight(i, j, a as u8 as f64);
                    g.set_weight(j, i, b as u8 as f64);
                }
                if spec.self_edges {
                    let x = g.labels[i].clone();
                    let hit = r.random::<f64>() < digraphon.diag.eval(&x);
                    g.set_weight(i, i, hit as u8 as f64);
                }
            }
        }
        t => {
            for i in 0..k {
                for j in i..k {
                    if i == j {
                        if spec.self_edges && !spec.directed {
                            let x = g.labels[i].clone();
                            let w = scaled_weight(spec, t, &x, &x, atom_weights, i, i, r)?;
                            g.set_weight(i, i, w);
                        }
                        continue;
                    }
                    let (xi, xj) = (g.labels[i].clone(), g.labels[j].clone());
                    if spec.ordered_dag {
                        let (lo, hi, a, b) = if xi.cmp_scalar(&xj) == std::cmp::Ordering::Less {
                            (xi.clone(), xj.clone(), i, j)
                        } else {
                            (xj.clone(), xi.clone(), j, i)
                        };
                        let w = scaled_weight(spec, t, &lo, &hi, atom_weights, a, b, r)?;
                        g.set_weight(a, b, w);
                        continue;
                    }
                    let w = scaled_weight(spec, t, &xi, &xj, atom_weights, i, j, r)?;
                    g.set_weight(i, j, w);
                    if !spec.directed {
                        g.set_weight(j, i, w);
                    } else {
                        let w2 = scaled_weight(spec, t, &xj, &xi, atom_weights, j, i, r)?;
                        g.set_weight(j, i, w2);
                    }
                }
            }
            // directed graphs sample their diagonal once per vertex
            if spec.directed && spec.self_edges && !spec.ordered_dag {
                for i in 0..k {
                    let x = g.labels[i].clone();
                    let w = scaled_weight(spec, t, &x, &x, atom_weights, i, i, r)?;
                    g.set_weight(i, i, w);
                }
            }
        }
    }
    Ok(g)
}

fn scaled_weight<R: Rng>(
    spec: &ModelSpec,
    t: &RandomTransform,
    x: &Label,
    y: &Label,
    atom_weights: Option<&[u64]>,
    i: usize,
    j: usize,
    r: &mut R,
) -> Result<f64> {
    let phi = t.sample_weight(x, y, r)?;
    let mut w = spec.weight.apply(phi);
    if let Some(aw) = atom_weights {
        w *= (aw[i] * aw[j]) as f64;
    }
    Ok(w)
}

/// Which edges a rewiring step refreshes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewireMode {
    /// All edges with at least one endpoint in the rewired set (the
    /// default transform).
    Touching,
    /// Only edges with both endpoints in the rewired set.
    Block,
}

/// One rewiring step: resample `n` vertex labels and refresh the edges the
/// mode selects, freezing everything else. The mean adjacency array is
/// invariant under this map for a fixed spec.
pub fn rewire(
    g: &LabeledGraph,
    spec: &ModelSpec,
    n: usize,
    mode: RewireMode,
    seed: u64,
) -> Result<LabeledGraph> {
    let k = g.n_vertices();
    if n > k {
        return Err(Error::InvalidModel(format!(
            "cannot rewire {n} of {k} vertices"
        )));
    }
    match &g.provenance {
        Some(p) if p.spec_hash == spec.spec_hash() => {}
        _ => {
            return Err(Error::InvalidModel(
                "graph provenance does not match the rewiring spec".into(),
            ))
        }
    }
    let (nu, transform) = match (&spec.vertices, &spec.transform) {
        (VertexModel::Sampled { .. }, RandomTransform::Digraphon { .. }) => {
            return Err(Error::InvalidModel(
                "rewiring is defined for scalar edge transforms".into(),
            ));
        }
        (VertexModel::Sampled { nu, .. }, t) => (nu, t),
        (VertexModel::Fixed { .. }, _) => {
            return Err(Error::InvalidModel(
                "rewiring applies to sampled-vertex models".into(),
            ))
        }
    };
    let mut r = rng::master(seed);
    let mut idx: Vec<usize> = (0..k).collect();
    idx.shuffle(&mut r);
    let chosen: Vec<usize> = idx.into_iter().take(n).collect();
    let mut in_set = vec![false; k];
    for &i in &chosen {
        in_set[i] = true;
    }
    let mut out = g.clone();
    for &i in &chosen {
        out.set_label(i, nu.sample(&mut r));
    }
    for i in 0..k {
        for j in i..k {
            let touched = match mode {
                RewireMode::Touching => in_set[i] || in_set[j],
                RewireMode::Block => in_set[i] && in_set[j],
            };
            if !touched {
                continue;
            }
            if i == j {
                if spec.self_edges {
                    let x = out.labels[i].clone();
                    let w = transform.sample_weight(&x, &x, &mut r)?;
                    out.set_weight(i, i, spec.weight.apply(w));
                }
                continue;
            }
            let (xi, xj) = (out.labels[i].clone(), out.labels[j].clone());
            if spec.ordered_dag {
                let (lo, hi, a, b) = if xi.cmp_scalar(&xj) == std::cmp::Ordering::Less {
                    (xi.clone(), xj.clone(), i, j)
                } else {
                    (xj.clone(), xi.clone(), j, i)
                };
                let w = transform.sample_weight(&lo, &hi, &mut r)?;
                out.set_weight(a, b, spec.weight.apply(w));
                out.set_weight(b, a, 0.0);
                continue;
            }
            let w = transform.sample_weight(&xi, &xj, &mut r)?;
            out.set_weight(i, j, spec.weight.apply(w));
            if !spec.directed {
                out.set_weight(j, i, spec.weight.apply(w));
            } else {
                let w2 = transform.sample_weight(&xj, &xi, &mut r)?;
                out.set_weight(j, i, spec.weight.apply(w2));
            }
        }
    }
    Ok(out)
}

/// Soft fixed-degree multigraph: vertices labeled by the observed degrees,
/// Poisson edge weights with kernel x y / m. Expected vertex degrees equal
/// the labels and the expected (ordered) total weight equals m.
pub fn soft_fixed_degree(d: &DegreeSequence, seed: u64) -> Result<LabeledGraph> {
    let m = d.total();
    if m == 0 {
        return Err(Error::InvalidModel(
            "soft fixed-degree needs positive total degree".into(),
        ));
    }
    let n = d.len();
    let labels: Vec<Label> = d.degrees().iter().map(|&x| Label::Index(x)).collect();
    let mut r = rng::master(seed);
    let mut g = LabeledGraph {
        labels,
        weights: vec![0.0; n * n],
        directed: false,
        self_edges: true,
        provenance: None,
    };
    use rand_distr::Distribution as _;
    for i in 0..n {
        for j in i..n {
            let lambda = g.labels[i].value() * g.labels[j].value() / m as f64;
            let w = if lambda > 0.0 {
                rand_distr::Poisson::new(lambda).unwrap().sample(&mut r)
            } else {
                0.0
            };
            g.set_weight(i, j, w);
            g.set_weight(j, i, w);
        }
    }
    Ok(g)
}

/// How a fixed-edge multigraph distributes its balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedEdgeVariant {
    /// n balls over all ordered cells.
    Directed,
    /// n/2 balls over the (strict or full) upper triangle, mirrored.
    Undirected { loops: bool },
}

/// Multigraph with a fixed number of edges thrown multinomially over the
/// cells of a probability table. Atoms are 1..k.
pub fn fixed_edge_multigraph(
    n_edges: u64,
    probs: &[Vec<f64>],
    variant: FixedEdgeVariant,
    seed: u64,
) -> Result<LabeledGraph> {
    let k = probs.len();
    if probs.iter().any(|row| row.len() != k) {
        return Err(Error::SizeMismatch(
            "probability table must be square".into(),
        ));
    }
    let total: f64 = probs.iter().flatten().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidModel(format!(
            "cell probabilities sum to {total}"
        )));
    }
    let labels: Vec<Label> = (1..=k as u64).map(Label::Index).collect();
    let mut r = rng::master(seed);
    let mut weights = vec![0.0; k * k];
    match variant {
        FixedEdgeVariant::Directed => {
            let cells: Vec<(usize, usize, f64)> = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, probs[i][j]))
                .collect();
            throw_balls(n_edges, &cells, &mut weights, k, false, &mut r);
        }
        FixedEdgeVariant::Undirected { loops } => {
            if n_edges % 2 != 0 {
                return Err(Error::InvalidModel(
                    "undirected fixed-edge graphs need an even edge count".into(),
                ));
            }
            for i in 0..k {
                for j in 0..k {
                    if (probs[i][j] - probs[j][i]).abs() > 1e-9 {
                        return Err(Error::InvalidModel(
                            "undirected variant needs a symmetric probability table".into(),
                        ));
                    }
                }
                if !loops && probs[i][i] != 0.0 {
                    return Err(Error::InvalidModel(
                        "loop-free variant needs zero diagonal probabilities".into(),
                    ));
                }
            }
            let mut cells: Vec<(usize, usize, f64)> = Vec::new();
            for i in 0..k {
                let j0 = if loops { i } else { i + 1 };
                for j in j0..k {
                    let p = if i == j {
                        probs[i][i]
                    } else {
                        probs[i][j] + probs[j][i]
                    };
                    cells.push((i, j, p));
                }
            }
            throw_balls(n_edges / 2, &cells, &mut weights, k, true, &mut r);
        }
    }
    LabeledGraph::new(
        labels,
        weights,
        matches!(variant, FixedEdgeVariant::Directed),
        true,
    )
}

fn throw_balls<R: Rng>(
    n: u64,
    cells: &[(usize, usize, f64)],
    weights: &mut [f64],
    k: usize,
    mirror: bool,
    r: &mut R,
) {
    let mut cdf = Vec::with_capacity(cells.len());
    let mut acc = 0.0;
    for &(_, _, p) in cells {
        acc += p;
        cdf.push(acc);
    }
    for _ in 0..n {
        let u: f64 = r.random::<f64>() * acc;
        let t = cdf.partition_point(|&c| c <= u).min(cells.len() - 1);
        let (i, j, _) = cells[t];
        weights[i * k + j] += 1.0;
        if mirror && i != j {
            weights[j * k + i] += 1.0;
        }
    }
}

/// Result of Bernoulli-thinning a square array: iid vertex indicators
/// rescale rows and columns; `total` is the entrywise sum kept.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThinResult {
    pub kept: Vec<u64>,
    pub thinned: Vec<f64>,
    pub total: f64,
}

pub fn bernoulli_thin(a: &[f64], p: &[f64], seed: u64) -> Result<ThinResult> {
    let n = p.len();
    if a.len() != n * n {
        return Err(Error::SizeMismatch(format!(
            "{} probabilities against {} array entries",
            n,
            a.len()
        )));
    }
    let mut r = rng::master(seed);
    let kept: Vec<u64> = p.iter().map(|&q| (r.random::<f64>() < q) as u64).collect();
    let w: Vec<f64> = kept.iter().map(|&b| b as f64).collect();
    let thinned = crate::measures::w_transform(&w, a)?;
    let total = thinned.iter().sum();
    Ok(ThinResult {
        kept,
        thinned,
        total,
    })
}
