//! Log-moments of CPT entries and the normal model of `ln p` they imply.
//!
//! Picking a state by choosing every variable's outcome uniformly at random
//! makes each factor `p_i` of the state probability a uniformly drawn CPT cell
//! of variable `i` (uniform parent configuration, uniform outcome). The sum of
//! the logs of those factors is approximately normal; this module computes
//! the per-variable moments, the Liapounov ratio that licenses the normal
//! approximation, and the resulting density and mass-contribution curves.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Network;
use crate::normal::{std_pdf, UpperTruncatedNormal};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentsError {
    #[error("probability {q} has undefined log-moments (needs 0 < q < 1)")]
    DegenerateProbability { q: f64 },
    #[error("variable `{var}` has a zero entry (column {column}, outcome {outcome}); log-moments are undefined")]
    ZeroEntry {
        var: String,
        column: usize,
        outcome: usize,
    },
    #[error("Liapounov ratio is undefined: every variable has zero log-variance")]
    UndefinedRatio,
    #[error("no moments supplied")]
    Empty,
    #[error("normal model has zero variance (point mass at ln p = {xi})")]
    PointMass { xi: f64 },
}

/// Mean, variance and third absolute central moment of `ln p_i` (nats).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMoments {
    pub mu: f64,
    pub sigma2: f64,
    pub omega3: f64,
}

impl LogMoments {
    /// Moments of a uniformly chosen element of `logs`.
    pub fn of_uniform(logs: &[f64]) -> Result<Self, MomentsError> {
        let first = *logs.first().ok_or(MomentsError::Empty)?;
        if logs.iter().all(|&x| x == first) {
            return Ok(Self {
                mu: first,
                sigma2: 0.0,
                omega3: 0.0,
            });
        }
        let n = logs.len() as f64;
        let mu = logs.iter().copied().collect::<CompensatedSum>().value() / n;
        let mut sq = CompensatedSum::new();
        let mut cube = CompensatedSum::new();
        for &x in logs {
            let d = (x - mu).abs();
            sq.add(d * d);
            cube.add(d * d * d);
        }
        Ok(Self {
            mu,
            sigma2: sq.value() / n,
            omega3: cube.value() / n,
        })
    }
}

/// Closed-form log-moments of a two-outcome distribution `(q, 1 - q)`.
pub fn binary_log_moments(q: f64) -> Result<LogMoments, MomentsError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(MomentsError::DegenerateProbability { q });
    }
    let r = 1.0 - q;
    let odds = (q / r).ln();
    Ok(LogMoments {
        mu: 0.5 * (q * r).ln(),
        sigma2: 0.25 * odds * odds,
        omega3: 0.125 * odds.abs().powi(3),
    })
}

/// Log-moments of variable `i` under a uniform draw over all its CPT cells.
pub fn variable_log_moments(net: &Network, i: usize) -> Result<LogMoments, MomentsError> {
    let var = net.variable(i);
    let k = var.outcome_count();
    if let Some(pos) = var.cells().iter().position(|&q| q == 0.0) {
        return Err(MomentsError::ZeroEntry {
            var: var.name().to_string(),
            column: pos / k,
            outcome: pos % k,
        });
    }
    LogMoments::of_uniform(var.log_cells())
}

pub fn network_log_moments(net: &Network) -> Result<Vec<LogMoments>, MomentsError> {
    (0..net.len()).map(|i| variable_log_moments(net, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiapounovReport {
    pub sigma2: Vec<f64>,
    pub omega3: Vec<f64>,
    /// `sum(omega3) / sum(sigma2)^(3/2)` at the given number of variables.
    pub ratio: f64,
    /// Set when some variable has more than two outcomes. The vanishing-ratio
    /// argument is only established for binary variables, so the value is
    /// advisory in that case.
    pub multi_valued: bool,
}

pub fn liapounov_ratio(moments: &[LogMoments]) -> Result<LiapounovReport, MomentsError> {
    if moments.is_empty() {
        return Err(MomentsError::Empty);
    }
    let s2: CompensatedSum = moments.iter().map(|m| m.sigma2).collect();
    let w3: CompensatedSum = moments.iter().map(|m| m.omega3).collect();
    let s2 = s2.value();
    if s2 <= 0.0 {
        return Err(MomentsError::UndefinedRatio);
    }
    Ok(LiapounovReport {
        sigma2: moments.iter().map(|m| m.sigma2).collect(),
        omega3: moments.iter().map(|m| m.omega3).collect(),
        ratio: w3.value() / (s2 * s2.sqrt()),
        multi_valued: false,
    })
}

/// Liapounov report for a whole network, flagging multi-valued variables.
pub fn network_liapounov(net: &Network) -> Result<LiapounovReport, MomentsError> {
    let mut report = liapounov_ratio(&network_log_moments(net)?)?;
    report.multi_valued = net.variables().iter().any(|v| v.outcome_count() > 2);
    Ok(report)
}

/// Normal model of `ln p` with mean `xi` and variance `phi2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModel {
    pub xi: f64,
    pub phi2: f64,
    /// Support restricted to `ln p <= 0`.
    pub truncated_at_zero: bool,
}

impl NormalModel {
    pub fn new(xi: f64, phi2: f64) -> Self {
        Self {
            xi,
            phi2,
            truncated_at_zero: true,
        }
    }

    pub fn sd(&self) -> f64 {
        self.phi2.sqrt()
    }

    pub fn is_degenerate(&self) -> bool {
        self.phi2 <= 0.0
    }

    fn require_spread(&self) -> Result<(), MomentsError> {
        if self.is_degenerate() {
            Err(MomentsError::PointMass { xi: self.xi })
        } else {
            Ok(())
        }
    }

    /// Law of `ln p` for a uniformly chosen state.
    pub fn state_law(&self) -> Result<UpperTruncatedNormal, MomentsError> {
        self.require_spread()?;
        Ok(UpperTruncatedNormal::new(self.xi, self.sd()))
    }

    /// Law of `ln p` weighted by `p`: the same shape shifted up by `phi2`.
    pub fn contribution_law(&self) -> Result<UpperTruncatedNormal, MomentsError> {
        self.require_spread()?;
        Ok(UpperTruncatedNormal::new(self.xi + self.phi2, self.sd()))
    }

    /// Density of `ln p` over uniformly chosen states (per nat).
    pub fn density_log(&self, lnp: f64) -> Result<f64, MomentsError> {
        let law = self.state_law()?;
        Ok(if self.truncated_at_zero {
            law.pdf(lnp)
        } else {
            std_pdf((lnp - law.mean) / law.sd) / law.sd
        })
    }

    /// Share of total probability mass carried by states at `ln p` (per nat).
    pub fn contribution_log(&self, lnp: f64) -> Result<f64, MomentsError> {
        let law = self.contribution_law()?;
        Ok(if self.truncated_at_zero {
            law.pdf(lnp)
        } else {
            std_pdf((lnp - law.mean) / law.sd) / law.sd
        })
    }

    /// Where the contribution curve peaks: `min(xi + phi2, 0)`.
    pub fn contribution_mode(&self) -> f64 {
        (self.xi + self.phi2).min(0.0)
    }

    pub fn skewness(&self) -> Result<f64, MomentsError> {
        skewness(self)
    }
}

/// Mean and variance of `ln p` implied by summing per-variable log-moments.
pub fn theoretical_normal(net: &Network) -> Result<NormalModel, MomentsError> {
    let moments = network_log_moments(net)?;
    let xi: CompensatedSum = moments.iter().map(|m| m.mu).collect();
    let phi2: CompensatedSum = moments.iter().map(|m| m.sigma2).collect();
    Ok(NormalModel::new(xi.value(), phi2.value()))
}

/// Skewness of the (untruncated) lognormal law of `p`.
pub fn skewness(nm: &NormalModel) -> Result<f64, MomentsError> {
    nm.require_spread()?;
    let e = nm.phi2.exp_m1();
    Ok((e + 3.0) * e.sqrt())
}
