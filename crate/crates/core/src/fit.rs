//! Moment fit of the lognormal model and the mass-threshold inversion.
//!
//! Given a normal model of `ln p`, states below a threshold `t` carry the
//! fraction `F((ln t))` of the total mass, where `F` is the CDF of the mass
//! contribution law (the state law shifted up by `phi2`, truncated at 0).
//! Inverting `F` gives `t` for a target residual mass `f`; the state law then
//! tells what fraction `l` of all states lies below `t`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moments::{MomentsError, NormalModel};
use crate::normal::std_cdf;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 2 finite log-probabilities, got {found}")]
    TooFewValues { found: usize },
    #[error("weights must be nonnegative, finite, match the values, and not all be zero")]
    InvalidWeights,
    #[error("fraction {0} is outside (0, 1)")]
    InvalidFraction(f64),
    #[error(transparent)]
    Moments(#[from] MomentsError),
}

/// Weighted moment fit: `xi` is the weighted mean of `ln p`, `phi2` the
/// weighted (population) variance. Non-finite values (zero-probability
/// states) are skipped with their weights. All-equal values give `phi2 = 0`,
/// which callers detect with [`NormalModel::is_degenerate`].
pub fn fit_normal(lnp: &[f64], weights: &[f64]) -> Result<NormalModel, FitError> {
    if lnp.len() != weights.len() {
        return Err(FitError::InvalidWeights);
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(FitError::InvalidWeights);
    }
    let kept: Vec<(f64, f64)> = lnp
        .iter()
        .zip(weights)
        .filter(|(x, _)| x.is_finite())
        .map(|(&x, &w)| (x, w))
        .collect();
    if kept.len() < 2 {
        return Err(FitError::TooFewValues { found: kept.len() });
    }
    let wsum: CompensatedSum = kept.iter().map(|&(_, w)| w).collect();
    let wsum = wsum.value();
    if wsum <= 0.0 {
        return Err(FitError::InvalidWeights);
    }
    let first = kept[0].0;
    if kept.iter().all(|&(x, _)| x == first) {
        return Ok(NormalModel::new(first, 0.0));
    }
    let mean: CompensatedSum = kept.iter().map(|&(x, w)| w * x).collect();
    let xi = mean.value() / wsum;
    let var: CompensatedSum = kept.iter().map(|&(x, w)| w * (x - xi) * (x - xi)).collect();
    Ok(NormalModel::new(xi, var.value() / wsum))
}

/// Fit with one unit weight per state: the law of `ln p` over states.
pub fn fit_uniform(lnp: &[f64]) -> Result<NormalModel, FitError> {
    fit_normal(lnp, &vec![1.0; lnp.len()])
}

/// Fit with each state weighted by its probability. This estimates the mass
/// contribution curve, not the state law.
pub fn fit_mass_weighted(lnp: &[f64]) -> Result<NormalModel, FitError> {
    let w: Vec<f64> = lnp.iter().map(|l| l.exp()).collect();
    fit_normal(lnp, &w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Target mass carried by states below `t`.
    pub f: f64,
    pub t: f64,
    pub ln_t: f64,
    /// Fraction of states below `t`, from the truncated state law.
    pub l: f64,
    /// Same with the untruncated normal law of `ln p`.
    pub l_untruncated: f64,
    /// `1 - l`, computed directly so it keeps precision when `l` rounds to 1.
    pub upper_fraction: f64,
    pub iterations: u32,
    /// `contribution_cdf(ln_t) - f`.
    pub residual: f64,
}

/// Mass carried by states with `ln p <= ln_t` under the model.
pub fn contribution_cdf(nm: &NormalModel, ln_t: f64) -> Result<f64, FitError> {
    Ok(nm.contribution_law()?.cdf(ln_t))
}

/// Solves for the threshold `t` below which states carry mass fraction `f`.
pub fn mass_threshold(nm: &NormalModel, f: f64) -> Result<ThresholdResult, FitError> {
    if !(f > 0.0 && f < 1.0) {
        return Err(FitError::InvalidFraction(f));
    }
    let contribution = nm.contribution_law()?;
    let states = nm.state_law()?;
    let (ln_t, iterations) = contribution.quantile_with_iterations(f);
    Ok(ThresholdResult {
        f,
        t: ln_t.exp(),
        ln_t,
        l: states.cdf(ln_t),
        upper_fraction: states.sf(ln_t),
        l_untruncated: std_cdf((ln_t - nm.xi) / nm.sd()),
        iterations,
        residual: contribution.cdf(ln_t) - f,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankEstimate {
    pub epsilon: f64,
    /// Estimated number of top states covering mass `1 - epsilon`; infinite
    /// when it exceeds the f64 range, see `log10_states`.
    pub states: f64,
    pub log10_states: f64,
    pub ln_state_count: f64,
    pub threshold: ThresholdResult,
}

/// Estimates how many of the most probable states must be listed before the
/// remaining ones carry less than `epsilon` of the mass.
pub fn epsilon_rank_estimate(
    nm: &NormalModel,
    epsilon: f64,
    ln_state_count: f64,
) -> Result<RankEstimate, FitError> {
    let threshold = mass_threshold(nm, epsilon)?;
    let ln_states = threshold.upper_fraction.ln() + ln_state_count;
    Ok(RankEstimate {
        epsilon,
        states: ln_states.exp(),
        log10_states: ln_states * std::f64::consts::LOG10_E,
        ln_state_count,
        threshold,
    })
}
