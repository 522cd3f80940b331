//! Variance decomposition of mean weight kernels and the kernel-operator
//! singular value decomposition.
//!
//! The mean weight W(x,y) of a model splits into orthogonal components
//! W0 + W1(x) + W2(y) + W12(x,y) with a matching variance identity.
//! The normalized component variances are the sensitivity indices and
//! S1 + S2 + 2 S12 is the effective dimension. The first-order part
//! carries the normalized degree functions D_out = W0 + W1 and
//! D_in = W0 + W2.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::distributions::{LabelDistribution, QuadratureRule};
use crate::error::{Error, Result};
use crate::label::Label;

/// Orthogonal component functions of a kernel on the quadrature grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SobolDecomposition {
    /// Scalar grid points.
    pub grid: Vec<f64>,
    /// Node masses (sum to one up to discrete truncation).
    pub weights: Vec<f64>,
    pub w0: f64,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    /// Row-major residual W12 on grid x grid.
    pub w12: Vec<f64>,
    pub var_w1: f64,
    pub var_w2: f64,
    pub var_w12: f64,
    pub var_total: f64,
    /// Sensitivity indices; absent when the kernel is constant.
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub s12: Option<f64>,
    /// S1 + S2 + 2 S12, or 0 for constant kernels.
    pub effective_dimension: f64,
}

/// Normalized mean degree functions read off the first-order components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SobolDegrees {
    pub grid: Vec<f64>,
    /// D_out(x) = W0 + W1(x).
    pub d_out: Vec<f64>,
    /// D_in(x) = W0 + W2(x).
    pub d_in: Vec<f64>,
}

fn scalar_grid(nu: &LabelDistribution, rule: &QuadratureRule) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = nu.grid(rule);
    let mut xs = Vec::with_capacity(grid.nodes.len());
    let mut ws = Vec::with_capacity(grid.nodes.len());
    for (l, w) in &grid.nodes {
        match l {
            Label::Point(_) => {
                return Err(Error::InvalidModel(
                    "decompositions are defined on scalar label spaces".into(),
                ))
            }
            _ => xs.push(l.value()),
        }
        ws.push(*w);
    }
    Ok((xs, ws))
}

/// Functional-ANOVA decomposition of a two-argument kernel.
pub fn sobol<F>(w: F, nu: &LabelDistribution, rule: &QuadratureRule) -> Result<SobolDecomposition>
where
    F: Fn(f64, f64) -> f64,
{
    let (grid, weights) = scalar_grid(nu, rule)?;
    let n = grid.len();
    let mut w0 = 0.0;
    for (i, &wx) in weights.iter().enumerate() {
        for (j, &wy) in weights.iter().enumerate() {
            w0 += wx * wy * w(grid[i], grid[j]);
        }
    }
    let w1: Vec<f64> = (0..n)
        .map(|i| {
            let row: f64 = (0..n).map(|j| weights[j] * w(grid[i], grid[j])).sum();
            row - w0
        })
        .collect();
    let w2: Vec<f64> = (0..n)
        .map(|j| {
            let col: f64 = (0..n).map(|i| weights[i] * w(grid[i], grid[j])).sum();
            col - w0
        })
        .collect();
    let mut w12 = vec![0.0; n * n];
    let mut var_w12 = 0.0;
    let mut var_total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let resid = w(grid[i], grid[j]) - w0 - w1[i] - w2[j];
            w12[i * n + j] = resid;
            var_w12 += weights[i] * weights[j] * resid * resid;
            let centered = w(grid[i], grid[j]) - w0;
            var_total += weights[i] * weights[j] * centered * centered;
        }
    }
    let var_w1: f64 = (0..n).map(|i| weights[i] * w1[i] * w1[i]).sum();
    let var_w2: f64 = (0..n).map(|j| weights[j] * w2[j] * w2[j]).sum();
    let (s1, s2, s12, ed) = if var_total > 1e-14 {
        let s1 = var_w1 / var_total;
        let s2 = var_w2 / var_total;
        let s12 = var_w12 / var_total;
        (Some(s1), Some(s2), Some(s12), s1 + s2 + 2.0 * s12)
    } else {
        (None, None, None, 0.0)
    };
    Ok(SobolDecomposition {
        grid,
        weights,
        w0,
        w1,
        w2,
        w12,
        var_w1,
        var_w2,
        var_w12,
        var_total,
        s1,
        s2,
        s12,
        effective_dimension: ed,
    })
}

/// Normalized degree functions from a computed decomposition.
pub fn sobol_degrees(d: &SobolDecomposition) -> SobolDegrees {
    SobolDegrees {
        grid: d.grid.clone(),
        d_out: d.w1.iter().map(|v| d.w0 + v).collect(),
        d_in: d.w2.iter().map(|v| d.w0 + v).collect(),
    }
}

/// Kernel-operator SVD on the quadrature grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub grid: Vec<f64>,
    pub weights: Vec<f64>,
    /// Nonincreasing singular values.
    pub singular_values: Vec<f64>,
    /// Left singular functions sampled on the grid, one row per value.
    pub left: Vec<Vec<f64>>,
    /// Right singular functions sampled on the grid.
    pub right: Vec<Vec<f64>>,
    pub rank_clipped: bool,
}

impl SpectralDecomposition {
    /// Reconstruct the kernel value sum_n sigma_n f_n(x_i) g_n(x_j).
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        self.singular_values
            .iter()
            .enumerate()
            .map(|(n, s)| s * self.left[n][i] * self.right[n][j])
            .sum()
    }
}

/// Discretize the kernel operator with square-root-weight similarity
/// scaling (so the grid SVD approximates the L2(nu) one) and decompose.
pub fn spectral<F>(
    w: F,
    nu: &LabelDistribution,
    rule: &QuadratureRule,
    rank: usize,
) -> Result<SpectralDecomposition>
where
    F: Fn(f64, f64) -> f64,
{
    let (grid, weights) = scalar_grid(nu, rule)?;
    let n = grid.len();
    let sqw: Vec<f64> = weights.iter().map(|v| v.sqrt()).collect();
    let m = DMatrix::from_fn(n, n, |i, j| sqw[i] * w(grid[i], grid[j]) * sqw[j]);
    let svd = m.svd(true, true);
    let u = svd.u.as_ref().expect("left vectors requested");
    let vt = svd.v_t.as_ref().expect("right vectors requested");
    let rank_clipped = rank > n;
    let keep = rank.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut singular_values = Vec::with_capacity(keep);
    let mut left = Vec::with_capacity(keep);
    let mut right = Vec::with_capacity(keep);
    for &col in order.iter().take(keep) {
        singular_values.push(svd.singular_values[col]);
        let mut f: Vec<f64> = (0..n).map(|i| u[(i, col)] / sqw[i]).collect();
        let mut g: Vec<f64> = (0..n).map(|j| vt[(col, j)] / sqw[j]).collect();
        // sign convention: first nonnegligible entry of the left function
        // positive
        if let Some(first) = f.iter().find(|v| v.abs() > 1e-10) {
            if *first < 0.0 {
                for v in f.iter_mut() {
                    *v = -*v;
                }
                for v in g.iter_mut() {
                    *v = -*v;
                }
            }
        }
        left.push(f);
        right.push(g);
    }
    Ok(SpectralDecomposition {
        grid,
        weights,
        singular_values,
        left,
        right,
        rank_clipped,
    })
}
