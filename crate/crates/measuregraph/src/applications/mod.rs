//! Application pipelines built on the core machinery: prime graphs, spin
//! networks, Bayesian-network structure search, and feed-forward wiring.

pub mod bayes;
pub mod neural;
pub mod primes;
pub mod spin;

pub use bayes::{bn_build_kernels, bn_log_likelihood, bn_mh_infer, BayesNet, BnInference, DataMatrix};
pub use neural::{nn_wire, NnArchitecture, NnWiring};
pub use primes::{prime_analytics, prime_graph_spec, PrimeGraphModel, PrimeLabelLaw, PrimeReport};
pub use spin::{SpinNetwork, SpinReport};
