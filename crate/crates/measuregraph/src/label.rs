//! Vertex label values.
//!
//! A label lives in the model's label space: a point of [0,1], a positive
//! integer, or a point of [0,1]^d for dot-product kernels. JSON keeps
//! integers and floats distinct so graph files round-trip bit-exactly.

use serde::{Deserialize, Serialize};

use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    /// Positive integer label (discrete label spaces).
    Index(u64),
    /// Scalar label in [0,1].
    Scalar(f64),
    /// Point of [0,1]^d.
    Point(Vec<f64>),
}

impl Label {
    /// Numeric value of a one-dimensional label.
    ///
    /// Panics on `Point` labels; kernels over [0,1]^d must use `coords`.
    pub fn value(&self) -> f64 {
        match self {
            Label::Index(k) => *k as f64,
            Label::Scalar(x) => *x,
            Label::Point(_) => panic!("scalar value requested for a vector label"),
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            Label::Point(v) => v,
            Label::Scalar(x) => std::slice::from_ref(x),
            Label::Index(_) => panic!("coords requested for an integer label"),
        }
    }

    pub fn as_index(&self) -> Option<u64> {
        match self {
            Label::Index(k) => Some(*k),
            _ => None,
        }
    }

    /// Stable 64-bit key for deterministic per-edge streams.
    pub fn key(&self) -> u64 {
        match self {
            Label::Index(k) => rng::derive(0x1d, *k),
            Label::Scalar(x) => rng::f64_key(*x),
            Label::Point(v) => {
                let mut acc = 0x9e37u64;
                for &x in v {
                    acc = rng::pair_key(acc, rng::f64_key(x));
                }
                acc
            }
        }
    }

    /// Total order used for DAG orientation; panics on vector labels.
    pub fn cmp_scalar(&self, other: &Label) -> std::cmp::Ordering {
        self.value().total_cmp(&other.value())
    }
}

impl From<f64> for Label {
    fn from(x: f64) -> Self {
        Label::Scalar(x)
    }
}

impl From<u64> for Label {
    fn from(k: u64) -> Self {
        Label::Index(k)
    }
}
