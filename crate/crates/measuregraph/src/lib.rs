//! Random graphs as product random measures.
//!
//! A random graph model here is a triple: a random measure over vertex
//! labels (a sampled point cloud or fixed atoms with random weights), an
//! edge transformation giving each ordered label pair a weight law, and a
//! nonnegative test function applied to edge weights. Every sampler in the
//! crate is paired with the closed-form mean/variance/distribution it must
//! reproduce, so the stochastic side is always testable against the
//! analytic side.
//!
//! The main pieces:
//!
//! - [`distributions`]: counting laws with pgf calculus, label measures
//!   with quadrature, special functions (zeta, prime zeta, erf, Ei).
//! - [`measures`]: sampled and fixed-atom random measures, traces,
//!   products, and their moment formulas.
//! - [`transforms`]: graphon kernels and random edge transformations
//!   (Bernoulli, binomial, Poisson, digraphon, multinomial).
//! - [`graphs`]: end-to-end graph samplers, DAGs, rewiring, degree
//!   sequences, serialization.
//! - [`analytics`]: mean edge counts/weights, degree laws, coefficient
//!   extraction on the unit circle, giant-component margin, active
//!   vertices, triangle means.
//! - [`decomposition`]: variance (ANOVA) decomposition of mean weight
//!   kernels and kernel-operator SVD.
//! - [`estimation`]: graphon identification from observed unlabeled
//!   adjacency matrices by Metropolis-Hastings over basis coefficients.
//! - [`applications`]: prime graphs, spin networks, Bayesian-network
//!   structure search, feed-forward wiring.
//!
//! Start from the runnable examples (`cargo run --example ...`); each
//! major capability has one. A thin `measuregraph` binary exposes the same
//! surface as subcommands for scripting.

pub mod analytics;
pub mod applications;
pub mod cli;
pub mod decomposition;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod graphs;
pub mod label;
pub mod measures;
pub mod rng;
pub mod transforms;

pub use error::{Error, Result};
pub use label::Label;
