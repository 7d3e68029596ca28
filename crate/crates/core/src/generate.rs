//! Seeded model generators.
//!
//! Three families: `identical` (every CPT column is a shuffle of one
//! probability vector), `identically_distributed` (each entry drawn uniformly
//! from a per-outcome interval) and `dirichlet` (columns from a symmetric
//! Dirichlet law; an extension for robustness corpora, outside the
//! identical and identically distributed regimes). Structure is parentless unless `max_in_degree > 0`.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, Network, VariableSpec, NORMALIZATION_TOLERANCE};

const MAX_REDRAWS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    Invalid(String),
    #[error("infeasible intervals: {0}")]
    Infeasible(String),
    #[error("no valid column after {0} redraws")]
    RedrawLimit(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Identical { probs: Vec<f64> },
    /// One `[lo, hi]` interval per outcome. The last outcome takes the
    /// remainder; its interval (if given) is a constraint, not a draw.
    IdenticallyDistributed { intervals: Vec<(f64, f64)> },
    Dirichlet { concentration: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub max_in_degree: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::Invalid("n must be at least 1".into()));
        }
        if self.k < 2 {
            return Err(GenError::Invalid("k must be at least 2".into()));
        }
        match &self.family {
            Family::Identical { probs } => {
                if probs.len() != self.k {
                    return Err(GenError::Invalid(format!(
                        "{} probabilities given for k = {}",
                        probs.len(),
                        self.k
                    )));
                }
                if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(GenError::Invalid("probabilities must lie in [0, 1]".into()));
                }
                let s: f64 = probs.iter().sum();
                if (s - 1.0).abs() > NORMALIZATION_TOLERANCE {
                    return Err(GenError::Invalid(format!("probabilities sum to {s}")));
                }
            }
            Family::IdenticallyDistributed { intervals } => {
                if intervals.len() != self.k && intervals.len() + 1 != self.k {
                    return Err(GenError::Invalid(format!(
                        "{} intervals given for k = {}; need k or k - 1",
                        intervals.len(),
                        self.k
                    )));
                }
                for &(lo, hi) in intervals {
                    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                        return Err(GenError::Invalid(format!(
                            "interval [{lo}, {hi}] is not inside [0, 1]"
                        )));
                    }
                }
                let (lo_last, hi_last) = last_interval(intervals, self.k);
                let drawn = &intervals[..self.k - 1];
                let lo_sum: f64 = drawn.iter().map(|i| i.0).sum();
                let hi_sum: f64 = drawn.iter().map(|i| i.1).sum();
                if 1.0 - hi_sum > hi_last || 1.0 - lo_sum < lo_last {
                    return Err(GenError::Infeasible(format!(
                        "the remainder ranges over [{}, {}], outside [{lo_last}, {hi_last}]",
                        1.0 - hi_sum,
                        1.0 - lo_sum
                    )));
                }
            }
            Family::Dirichlet { concentration } => {
                if !(concentration.is_finite() && *concentration > 0.0) {
                    return Err(GenError::Invalid(format!(
                        "concentration {concentration} must be positive"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn last_interval(intervals: &[(f64, f64)], k: usize) -> (f64, f64) {
    if intervals.len() == k {
        intervals[k - 1]
    } else {
        (0.0, 1.0)
    }
}

/// Builds the network described by `spec`. Equal specs give bit-identical
/// networks.
pub fn generate(spec: &GenSpec) -> Result<Network, GenError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let outcomes: Vec<String> = (0..spec.k).map(|o| format!("s{o}")).collect();
    let gamma = match spec.family {
        Family::Dirichlet { concentration } => {
            Some(Gamma::new(concentration, 1.0).map_err(|e| GenError::Invalid(e.to_string()))?)
        }
        _ => None,
    };

    let mut specs: Vec<VariableSpec> = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let parents = draw_parents(&mut rng, i, spec.max_in_degree);
        let columns_needed: usize = parents.iter().map(|&p| specs[p].outcomes.len()).product();
        let mut columns = Vec::with_capacity(columns_needed);
        for _ in 0..columns_needed {
            let col = match &spec.family {
                Family::Identical { probs } => {
                    let mut col = probs.clone();
                    col.shuffle(&mut rng);
                    col
                }
                Family::IdenticallyDistributed { intervals } => {
                    interval_column(&mut rng, intervals, spec.k)?
                }
                Family::Dirichlet { .. } => {
                    dirichlet_column(&mut rng, gamma.as_ref().expect("set above"), spec.k)?
                }
            };
            columns.push(col);
        }
        specs.push(VariableSpec::new(
            format!("X{}", i + 1),
            outcomes.clone(),
            parents,
            columns,
        ));
    }
    Ok(Network::new(Some(spec_name(spec)), specs)?)
}

fn spec_name(spec: &GenSpec) -> String {
    let family = match spec.family {
        Family::Identical { .. } => "identical",
        Family::IdenticallyDistributed { .. } => "identically_distributed",
        Family::Dirichlet { .. } => "dirichlet",
    };
    format!("{family}-n{}-k{}-seed{}", spec.n, spec.k, spec.seed)
}

fn draw_parents(rng: &mut ChaCha8Rng, i: usize, max_in_degree: usize) -> Vec<usize> {
    let cap = max_in_degree.min(i);
    if cap == 0 {
        return Vec::new();
    }
    let count = rng.random_range(0..=cap);
    let mut parents = index::sample(rng, i, count).into_vec();
    parents.sort_unstable();
    parents
}

fn interval_column(
    rng: &mut ChaCha8Rng,
    intervals: &[(f64, f64)],
    k: usize,
) -> Result<Vec<f64>, GenError> {
    let (lo_last, hi_last) = last_interval(intervals, k);
    let mut col = vec![0.0; k];
    for _ in 0..MAX_REDRAWS {
        for (slot, &(lo, hi)) in col.iter_mut().zip(&intervals[..k - 1]) {
            *slot = if lo == hi { lo } else { rng.random_range(lo..=hi) };
        }
        let rest = 1.0 - col[..k - 1].iter().sum::<f64>();
        if (0.0..=1.0).contains(&rest) && (lo_last..=hi_last).contains(&rest) {
            col[k - 1] = rest;
            return Ok(col);
        }
    }
    Err(GenError::RedrawLimit(MAX_REDRAWS))
}

fn dirichlet_column(rng: &mut ChaCha8Rng, gamma: &Gamma<f64>, k: usize) -> Result<Vec<f64>, GenError> {
    for _ in 0..MAX_REDRAWS {
        let mut col: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
        let total: f64 = col.iter().sum();
        if total > 0.0 && total.is_finite() {
            col.iter_mut().for_each(|x| *x /= total);
            return Ok(col);
        }
    }
    Err(GenError::RedrawLimit(MAX_REDRAWS))
}

/// A reproducible mixed corpus for property tests: `n` in 2..=12, `k` in
/// 2..=4, in-degree in 0..=3, families in rotation.
pub fn corpus(seed: u64, count: usize) -> Vec<(GenSpec, Network)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Gamma::new(1.0, 1.0).expect("valid shape");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(2..=12);
        let k = rng.random_range(2..=4);
        let max_in_degree = rng.random_range(0..=3);
        let spec_seed = rng.random::<u64>();
        let family = match out.len() % 3 {
            0 => {
                let v = dirichlet_column(&mut rng, &unit, k).expect("unit gamma");
                Family::Identical { probs: v }
            }
            1 => {
                let center = dirichlet_column(&mut rng, &unit, k).expect("unit gamma");
                let width = rng.random_range(0.0..0.1);
                let mut intervals: Vec<(f64, f64)> = center[..k - 1]
                    .iter()
                    .map(|&c| ((c - width).max(0.0), (c + width).min(1.0)))
                    .collect();
                if k == 2 {
                    intervals.push((1.0 - intervals[0].1, 1.0 - intervals[0].0));
                }
                Family::IdenticallyDistributed { intervals }
            }
            _ => Family::Dirichlet {
                concentration: rng.random_range(0.2..3.0),
            },
        };
        let spec = GenSpec {
            family,
            n,
            k,
            max_in_degree,
            seed: spec_seed,
        };
        // a rare draw can land just outside tolerance or the redraw limit
        if let Ok(net) = generate(&spec) {
            out.push((spec, net));
        }
    }
    out
}
