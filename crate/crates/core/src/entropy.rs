//! Rényi, Tsallis and Shannon entropies and the entropic lower bounds that
//! follow from the majorization relations.
//!
//! All logarithmic quantities are computed in nats and divided by `ln 2` on
//! the way out when bits are requested. Tsallis entropies carry no logarithm
//! and are always reported unscaled.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::channels::{povm, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, spectral_norm_unchecked, ComplexMatrix};
use crate::majorization::{
    direct_sum_omega, pair_ck_sequence, tensor_omega, MajorizingVector, NormSequence,
};

/// Orders within this distance of 1 are evaluated as Shannon entropy.
pub const SHANNON_WINDOW: f64 = 1e-9;

/// Probabilities at or below this value contribute nothing.
pub const ZERO_PROBABILITY: f64 = 1e-15;

/// Completeness tolerance for POVMs passed to the Maassen-Uffink routines.
pub const POVM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogBase {
    #[serde(rename = "nats")]
    Natural,
    #[serde(rename = "bits")]
    Two,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Natural => "nats",
            LogBase::Two => "bits",
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "natural" | "nats" => Ok(LogBase::Natural),
            "2" | "bits" => Ok(LogBase::Two),
            other => Err(Error::InvalidInput(format!("unknown log base {other:?} (expected 2 or e)"))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyFamily {
    Renyi,
    Tsallis,
}

impl FromStr for EntropyFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "renyi" => Ok(EntropyFamily::Renyi),
            "tsallis" => Ok(EntropyFamily::Tsallis),
            other => Err(Error::InvalidInput(format!(
                "unknown entropy family {other:?} (expected renyi or tsallis)"
            ))),
        }
    }
}

impl fmt::Display for EntropyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyFamily::Renyi => "renyi",
            EntropyFamily::Tsallis => "tsallis",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyQuery {
    pub alpha: f64,
    pub family: EntropyFamily,
    pub log_base: LogBase,
}

impl EntropyQuery {
    pub fn new(alpha: f64, family: EntropyFamily, log_base: LogBase) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            family,
            log_base,
        })
    }

    /// `alpha <= 1`, counting the Shannon window as 1.
    pub fn at_most_one(&self) -> bool {
        self.alpha <= 1.0 + SHANNON_WINDOW
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("entropy order must be positive and finite, got {alpha}")));
    }
    Ok(())
}

fn is_shannon(alpha: f64) -> bool {
    (alpha - 1.0).abs() <= SHANNON_WINDOW
}

fn power_sum(p: &[f64], alpha: f64) -> f64 {
    p.iter().filter(|&&x| x > ZERO_PROBABILITY).map(|&x| x.powf(alpha)).sum()
}

fn shannon_nats(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > ZERO_PROBABILITY)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// Shannon entropy `-sum p ln p`, converted to `base`.
pub fn shannon(p: &[f64], base: LogBase) -> f64 {
    base.from_nats(shannon_nats(p).max(0.0))
}

/// Rényi entropy `ln(sum p^alpha) / (1 - alpha)` in `base`.
pub fn renyi(p: &[f64], alpha: f64, base: LogBase) -> Result<f64> {
    check_alpha(alpha)?;
    if is_shannon(alpha) {
        return Ok(shannon(p, base));
    }
    let nats = power_sum(p, alpha).ln() / (1.0 - alpha);
    Ok(base.from_nats(nats.max(0.0)))
}

/// Tsallis entropy `(sum p^alpha - 1) / (1 - alpha)`; Shannon in nats at `alpha = 1`.
pub fn tsallis(p: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if is_shannon(alpha) {
        return Ok(shannon_nats(p).max(0.0));
    }
    Ok(((power_sum(p, alpha) - 1.0) / (1.0 - alpha)).max(0.0))
}

/// Lower bound on `H_alpha(p) + H_alpha(q)` for `alpha > 1` from the
/// direct-sum relation: `2/(1 - alpha) * ln(1/2 + 1/2 sum omega^alpha)`.
pub fn renyi_direct_sum_alpha_gt1(omega: &[f64], alpha: f64, base: LogBase) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha <= 1.0 + SHANNON_WINDOW {
        return Err(Error::InvalidInput(format!("this bound needs alpha > 1, got {alpha}")));
    }
    let nats = 2.0 / (1.0 - alpha) * (0.5 + 0.5 * power_sum(omega, alpha)).ln();
    Ok(base.from_nats(nats.max(0.0)))
}

fn check_povm(elements: &[ComplexMatrix], name: &str) -> Result<Vec<ComplexMatrix>> {
    let first = elements
        .first()
        .ok_or_else(|| Error::InvalidInput(format!("POVM {name} is empty")))?;
    let d = first.rows();
    let mut total = ComplexMatrix::zeros(d, d);
    let mut roots = Vec::with_capacity(elements.len());
    for e in elements {
        if e.shape() != (d, d) {
            return Err(Error::shape(format!("{d}x{d} POVM elements"), format!("{}x{}", e.rows(), e.cols())));
        }
        roots.push(psd_sqrt(e)?);
        total = &total + e;
    }
    let deviation = total.max_abs_diff(&ComplexMatrix::identity(d));
    if deviation > POVM_TOL {
        return Err(Error::InvalidInput(format!(
            "POVM {name} does not resolve the identity (deviation {deviation:e})"
        )));
    }
    Ok(roots)
}

/// `max_ij ||P_i^(1/2) Q_j^(1/2)||`.
pub fn mu_fbar(p: &[ComplexMatrix], q: &[ComplexMatrix]) -> Result<f64> {
    let rp = check_povm(p, "P")?;
    let rq = check_povm(q, "Q")?;
    if rp[0].rows() != rq[0].rows() {
        return Err(Error::shape(format!("dimension {}", rp[0].rows()), format!("dimension {}", rq[0].rows())));
    }
    Ok(rp
        .iter()
        .flat_map(|a| rq.iter().map(move |b| spectral_norm_unchecked(&(a * b))))
        .fold(0.0, f64::max))
}

/// Maassen-Uffink type bound `-2 log fbar` on `H_1(P) + H_1(Q)`, also valid
/// for equal orders `alpha <= 1`.
pub fn mu_bound(p: &[ComplexMatrix], q: &[ComplexMatrix], base: LogBase) -> Result<f64> {
    let f = mu_fbar(p, q)?;
    if f <= 0.0 {
        return Err(Error::InvalidInput("degenerate POVM pair with zero overlap".into()));
    }
    Ok(base.from_nats((-2.0 * f.ln()).max(0.0)))
}

/// The same bound for conjugate orders `1/alpha + 1/beta = 2`, bounding
/// `H_alpha(P) + H_beta(Q)`.
pub fn mu_bound_conjugate(
    p: &[ComplexMatrix],
    q: &[ComplexMatrix],
    alpha: f64,
    beta: f64,
    base: LogBase,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    if (1.0 / alpha + 1.0 / beta - 2.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "orders {alpha} and {beta} are not conjugate (1/alpha + 1/beta != 2)"
        )));
    }
    mu_bound(p, q, base)
}

/// Every entropic lower bound for one pair of operations and one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub query: EntropyQuery,
    pub c_sequence: NormSequence,
    pub omega: MajorizingVector,
    pub omega_prime: MajorizingVector,
    /// `H_alpha(omega)`, only for `alpha <= 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renyi_direct_sum: Option<f64>,
    /// Direct-sum bound for `alpha > 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renyi_direct_sum_alpha_gt1: Option<f64>,
    /// `H_alpha(omega')`, any `alpha`.
    pub renyi_tensor: f64,
    /// `T_alpha(omega)`, any `alpha`; unscaled.
    pub tsallis_direct_sum: f64,
    pub mu_bound: f64,
    pub best_applicable: f64,
    pub units: LogBase,
}

/// Computes the norm sequence, both majorizing vectors and every bound.
///
/// `best_applicable` is the largest bound valid for the query: for Rényi
/// with `alpha <= 1` the direct-sum, tensor and Maassen-Uffink bounds; for
/// Rényi with `alpha > 1` the tensor and `alpha > 1` direct-sum bounds; for
/// Tsallis the direct-sum bound.
pub fn bound_report(ka: &KrausSet, kb: &KrausSet, query: EntropyQuery) -> Result<BoundReport> {
    check_alpha(query.alpha)?;
    let c_sequence = pair_ck_sequence(ka, kb)?;
    let omega = direct_sum_omega(&c_sequence);
    let omega_prime = tensor_omega(&c_sequence);
    let (alpha, base) = (query.alpha, query.log_base);

    let renyi_tensor = renyi(&omega_prime.entries, alpha, base)?;
    let tsallis_direct_sum = tsallis(&omega.entries, alpha)?;
    let mu = mu_bound(&povm(ka), &povm(kb), base)?;
    let (renyi_direct_sum, renyi_direct_sum_alpha_gt1) = if query.at_most_one() {
        (Some(renyi(&omega.entries, alpha, base)?), None)
    } else {
        (None, Some(renyi_direct_sum_alpha_gt1(&omega.entries, alpha, base)?))
    };

    let best_applicable = match query.family {
        EntropyFamily::Tsallis => tsallis_direct_sum,
        EntropyFamily::Renyi if query.at_most_one() => renyi_tensor
            .max(renyi_direct_sum.unwrap_or(0.0))
            .max(mu),
        EntropyFamily::Renyi => renyi_tensor.max(renyi_direct_sum_alpha_gt1.unwrap_or(0.0)),
    };

    Ok(BoundReport {
        query,
        c_sequence,
        omega,
        omega_prime,
        renyi_direct_sum,
        renyi_direct_sum_alpha_gt1,
        renyi_tensor,
        tsallis_direct_sum,
        mu_bound: mu,
        best_applicable,
        units: base,
    })
}
