//! Degree sequences: graphicality tests and hard realizations.
//!
//! Three graphicality notions are supported. CM asks only for even total
//! degree (stub matching, loops and multi-edges fine, a loop adds two).
//! GR asks for a symmetric 0/1 matrix with the given row sums, diagonal
//! free, a loop adding one; the criterion is majorization by the conjugate
//! sequence. EG asks for a simple graph: even total plus the Erdos-Gallai
//! inequalities.

use rand::seq::SliceRandom;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::LabeledGraph;
use crate::label::Label;
use crate::rng;

/// Nonincreasing integer degree vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
}

impl DegreeSequence {
    /// Sorts the input nonincreasing.
    pub fn new(mut degrees: Vec<u64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence { degrees }
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Total degree m.
    pub fn total(&self) -> u64 {
        self.degrees.iter().sum()
    }

    /// Conjugate vector: D*_k = |{i : D_i >= k}| for k = 1..n.
    pub fn conjugate(&self) -> DegreeSequence {
        let n = self.degrees.len();
        let degrees = (1..=n as u64)
            .map(|k| self.degrees.iter().filter(|&&d| d >= k).count() as u64)
            .collect();
        DegreeSequence { degrees }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphicalityCriterion {
    /// Configuration model: total degree even.
    Cm,
    /// Gale-Ryser: symmetric 0/1 matrix, free diagonal.
    Gr,
    /// Erdos-Gallai: simple undirected graph.
    Eg,
}

/// Check graphicality under the named criterion.
pub fn is_graphical(d: &DegreeSequence, criterion: GraphicalityCriterion) -> bool {
    first_violation(d, criterion).is_none()
}

/// The first violated inequality, if any, as a human-readable witness.
pub fn first_violation(d: &DegreeSequence, criterion: GraphicalityCriterion) -> Option<String> {
    let deg = d.degrees();
    let n = deg.len();
    match criterion {
        GraphicalityCriterion::Cm => {
            if d.total() % 2 != 0 {
                Some(format!("total degree {} is odd", d.total()))
            } else {
                None
            }
        }
        GraphicalityCriterion::Gr => {
            let conj = d.conjugate();
            let mut lhs = 0u64;
            let mut rhs = 0u64;
            for k in 0..n {
                lhs += deg[k];
                rhs += conj.degrees()[k];
                if lhs > rhs {
                    return Some(format!(
                        "prefix sum {} exceeds conjugate prefix {} at k = {}",
                        lhs,
                        rhs,
                        k + 1
                    ));
                }
            }
            None
        }
        GraphicalityCriterion::Eg => {
            if d.total() % 2 != 0 {
                return Some(format!("total degree {} is odd", d.total()));
            }
            let mut lhs = 0u64;
            for k in 1..=n {
                lhs += deg[k - 1];
                let rhs = (k * (k - 1)) as u64
                    + deg[k..].iter().map(|&x| x.min(k as u64)).sum::<u64>();
                if lhs > rhs {
                    return Some(format!("sum of top {k} degrees {lhs} exceeds {rhs}"));
                }
            }
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealizeMode {
    /// Simple undirected graph by Havel-Hakimi (EG sequences).
    Simple,
    /// Symmetric 0/1 matrix with free diagonal via max-flow plus
    /// symmetrization (GR sequences); a loop adds one to its degree.
    BipartiteFlow,
    /// Stub-matching multigraph (CM sequences); a loop adds two.
    Configuration,
}

/// Build a graph with exactly the given degrees.
///
/// Vertex i carries label i+1; the order of `d` is preserved, not re-sorted,
/// so degrees line up with vertices.
pub fn realize_degree_sequence(
    d: &DegreeSequence,
    mode: RealizeMode,
    seed: u64,
) -> Result<LabeledGraph> {
    let criterion = match mode {
        RealizeMode::Simple => GraphicalityCriterion::Eg,
        RealizeMode::BipartiteFlow => GraphicalityCriterion::Gr,
        RealizeMode::Configuration => GraphicalityCriterion::Cm,
    };
    if let Some(witness) = first_violation(d, criterion) {
        return Err(Error::Infeasible(format!(
            "degree sequence not {criterion:?}-graphical: {witness}"
        )));
    }
    match mode {
        RealizeMode::Simple => havel_hakimi(d, seed),
        RealizeMode::Configuration => configuration_model(d, seed),
        RealizeMode::BipartiteFlow => bipartite_flow(d),
    }
}

fn index_labels(n: usize) -> Vec<Label> {
    (1..=n as u64).map(Label::Index).collect()
}

/// Havel-Hakimi: repeatedly connect the largest residual degree to the
/// next-largest ones. Ties are shuffled by seed so different seeds give
/// different (all exact-degree) realizations.
fn havel_hakimi(d: &DegreeSequence, seed: u64) -> Result<LabeledGraph> {
    let n = d.len();
    let mut resid: Vec<(u64, usize)> = d.degrees().iter().copied().zip(0..n).collect();
    let mut weights = vec![0.0; n * n];
    let mut r = rng::master(seed);
    loop {
        // shuffle then stable-sort: random order within equal degrees
        resid.shuffle(&mut r);
        resid.sort_by(|a, b| b.0.cmp(&a.0));
        let (dmax, v) = resid[0];
        if dmax == 0 {
            break;
        }
        if dmax as usize >= n {
            return Err(Error::Infeasible("degree exceeds vertex count".into()));
        }
        for t in 1..=dmax as usize {
            let (du, u) = resid[t];
            if du == 0 {
                return Err(Error::Infeasible(
                    "ran out of positive residual degrees".into(),
                ));
            }
            weights[v * n + u] = 1.0;
            weights[u * n + v] = 1.0;
            resid[t].0 -= 1;
        }
        resid[0].0 = 0;
    }
    LabeledGraph::new(index_labels(n), weights, false, false)
}

/// Stub matching: each vertex contributes d_i half-edges, a seeded shuffle
/// pairs them. Loops and multi-edges stand; a loop consumes two stubs.
fn configuration_model(d: &DegreeSequence, seed: u64) -> Result<LabeledGraph> {
    let n = d.len();
    let mut stubs: Vec<usize> = Vec::with_capacity(d.total() as usize);
    for (i, &deg) in d.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(i, deg as usize));
    }
    let mut r = rng::master(seed);
    stubs.shuffle(&mut r);
    let mut weights = vec![0.0; n * n];
    for pair in stubs.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        weights[a * n + b] += 1.0;
        if a != b {
            weights[b * n + a] += 1.0;
        }
    }
    LabeledGraph::new(index_labels(n), weights, false, true)
}

/// Gale-Ryser realization: Edmonds-Karp max-flow gives a 0/1 matrix with
/// row and column sums D, then balanced-cycle surgery makes it symmetric
/// without touching the sums.
fn bipartite_flow(d: &DegreeSequence) -> Result<LabeledGraph> {
    let n = d.len();
    let total = d.total();
    let mut a = max_flow_matrix(d)?;
    if a.iter().flatten().map(|&v| v as u64).sum::<u64>() != total {
        return Err(Error::Infeasible(
            "max-flow saturation failed for a GR-graphical sequence".into(),
        ));
    }
    symmetrize(&mut a);
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            weights[i * n + j] = a[i][j] as u64 as f64;
        }
    }
    LabeledGraph::new(index_labels(n), weights, false, true)
}

fn max_flow_matrix(d: &DegreeSequence) -> Result<Vec<Vec<bool>>> {
    let n = d.len();
    // nodes: 0 source, 1..=n rows, n+1..=2n cols, 2n+1 sink
    let nodes = 2 * n + 2;
    let sink = 2 * n + 1;
    let mut cap = vec![vec![0i64; nodes]; nodes];
    for i in 0..n {
        cap[0][1 + i] = d.degrees()[i] as i64;
        cap[n + 1 + i][sink] = d.degrees()[i] as i64;
        for j in 0..n {
            cap[1 + i][n + 1 + j] = 1;
        }
    }
    // Edmonds-Karp
    loop {
        let mut parent = vec![usize::MAX; nodes];
        parent[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for v in 0..nodes {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        // unit bottleneck is enough here, but push the true bottleneck
        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while v != 0 {
            let u = parent[v];
            bottleneck = bottleneck.min(cap[u][v]);
            v = u;
        }
        let mut v = sink;
        while v != 0 {
            let u = parent[v];
            cap[u][v] -= bottleneck;
            cap[v][u] += bottleneck;
            v = u;
        }
    }
    let mut a = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = cap[1 + i][n + 1 + j] == 0; // saturated unit edge
        }
    }
    Ok(a)
}

/// Make a row/column-balanced 0/1 matrix symmetric, preserving all row and
/// column sums. The asymmetric part is a balanced digraph, so it splits
/// into simple directed cycles; each cycle is replaced by symmetric pairs,
/// using a loop (or freeing one) to absorb odd length.
fn symmetrize(a: &mut [Vec<bool>]) {
    loop {
        let cycle = match find_asymmetric_cycle(a) {
            Some(c) => c,
            None => return,
        };
        let k = cycle.len();
        let edge = |t: usize| (cycle[t], cycle[(t + 1) % k]);
        if k % 2 == 0 {
            for t in 0..k {
                let (u, v) = edge(t);
                if t % 2 == 0 {
                    a[v][u] = true; // mirror the kept edge
                } else {
                    a[u][v] = false;
                }
            }
        } else if let Some(pos) = (0..k).position(|t| !a[cycle[t]][cycle[t]]) {
            // rotate so the loop-free vertex is last
            let mut c = cycle.clone();
            c.rotate_left((pos + 1) % k);
            let edge = |t: usize| (c[t], c[(t + 1) % k]);
            for t in 0..k - 1 {
                let (u, v) = edge(t);
                if t % 2 == 0 {
                    a[v][u] = true;
                } else {
                    a[u][v] = false;
                }
            }
            let (u, v) = edge(k - 1);
            a[u][v] = false;
            let w = c[k - 1];
            a[w][w] = true;
        } else {
            // every cycle vertex already loops: free the first loop
            let w = cycle[0];
            a[w][w] = false;
            for t in 0..k {
                let (u, v) = edge(t);
                if t == 0 || t == k - 1 || t % 2 == 0 {
                    a[v][u] = true; // keep + mirror
                } else {
                    a[u][v] = false;
                }
            }
        }
    }
}

fn find_asymmetric_cycle(a: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = a.len();
    let asym = |u: usize, v: usize| a[u][v] && !a[v][u];
    let start = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .find(|&(u, v)| u != v && asym(u, v))?;
    // walk out-edges until a vertex repeats; in a balanced digraph every
    // walk closes a cycle
    let mut path = vec![start.0];
    let mut seen = vec![usize::MAX; n];
    seen[start.0] = 0;
    let mut u = start.0;
    loop {
        let v = (0..n)
            .find(|&v| v != u && asym(u, v))
            .expect("balanced digraph vertex lost its out-edge");
        if seen[v] != usize::MAX {
            return Some(path[seen[v]..].to_vec());
        }
        seen[v] = path.len();
        path.push(v);
        u = v;
    }
}

/// Degree of vertex i under the convention of the given realization mode.
pub fn realized_degree(g: &LabeledGraph, i: usize, mode: RealizeMode) -> u64 {
    let n = g.n_vertices();
    let mut total = 0.0;
    for j in 0..n {
        if j != i {
            total += g.weight(i, j);
        }
    }
    let loop_factor = match mode {
        RealizeMode::Simple => 0.0,
        RealizeMode::BipartiteFlow => 1.0,
        RealizeMode::Configuration => 2.0,
    };
    (total + loop_factor * g.weight(i, i)).round() as u64
}
