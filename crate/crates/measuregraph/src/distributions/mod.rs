//! Counting and label distributions, quadrature, and special functions.

pub mod counting;
pub mod label_dist;
pub mod quadrature;
pub mod special;

pub use counting::CountingDistribution;
pub use label_dist::{Grid, LabelDistribution, LabelSet};
pub use quadrature::{IntegrationResult, QuadratureRule};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Poisson-type family member identified by the sign of delta^2 - c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PtKind {
    Poisson,
    Binomial,
    NegativeBinomial,
}

/// Result of moment-matching a Poisson-type law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PtFit {
    pub kind: PtKind,
    /// Canonical parameters fitted by moment matching.
    pub dist: CountingDistribution,
    /// Set when the fit sits on the family boundary (delta^2 = 0 collapses
    /// the binomial branch onto a point mass).
    pub degenerate: bool,
}

/// Identify the Poisson-type distribution from (c, delta^2).
///
/// delta^2 = c within tol*c picks Poisson; below, binomial; above, negative
/// binomial. Integer parameters are rounded and the mean re-matched, so the
/// returned law always has mean exactly c up to rounding of n or r.
pub fn classify_pt(c: f64, delta2: f64, tol: f64) -> Result<PtFit> {
    if !(c > 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "classify_pt needs c > 0, got {c}"
        )));
    }
    if delta2 < 0.0 {
        return Err(Error::InvalidDistribution(format!(
            "classify_pt needs delta^2 >= 0, got {delta2}"
        )));
    }
    let gap = delta2 - c;
    if gap.abs() <= tol * c {
        return Ok(PtFit {
            kind: PtKind::Poisson,
            dist: CountingDistribution::poisson(c)?,
            degenerate: false,
        });
    }
    if gap < 0.0 {
        // binomial: n p = c, n p (1-p) = delta^2
        if delta2 == 0.0 {
            let n = c.round().max(1.0) as u64;
            return Ok(PtFit {
                kind: PtKind::Binomial,
                dist: CountingDistribution::dirac(n)?,
                degenerate: true,
            });
        }
        let n_real = c * c / (c - delta2);
        let n = n_real.round().max(1.0) as u64;
        let p = (c / n as f64).min(1.0 - 1e-12);
        Ok(PtFit {
            kind: PtKind::Binomial,
            dist: CountingDistribution::binomial(n, p)?,
            degenerate: false,
        })
    } else {
        // negative binomial: r p/(1-p) = c, r p/(1-p)^2 = delta^2
        let r_real = c * c / (delta2 - c);
        let r = r_real.round().max(1.0) as u64;
        let p = c / (r as f64 + c);
        Ok(PtFit {
            kind: PtKind::NegativeBinomial,
            dist: CountingDistribution::negative_binomial(r, p)?,
            degenerate: false,
        })
    }
}

/// Named special functions exposed to the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialFn {
    Zeta,
    PrimeZeta,
    PrimeCount,
    Erf,
    ExpintEi,
}

pub fn special_eval(name: SpecialFn, arg: f64) -> Result<f64> {
    match name {
        SpecialFn::Zeta => special::zeta(arg),
        SpecialFn::PrimeZeta => special::prime_zeta(arg),
        SpecialFn::PrimeCount => {
            if arg < 0.0 || arg.fract() != 0.0 {
                Err(Error::InvalidDistribution(
                    "prime_count needs a nonnegative integer".into(),
                ))
            } else {
                Ok(special::prime_count(arg as u64) as f64)
            }
        }
        SpecialFn::Erf => Ok(special::erf(arg)),
        SpecialFn::ExpintEi => special::expint_ei(arg),
    }
}
