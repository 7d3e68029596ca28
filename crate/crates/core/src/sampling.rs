//! Monte-Carlo counterpart of enumeration: draw states uniformly (every
//! variable's outcome picked with equal probability, so every state is equally
//! likely to be drawn) and summarise the resulting `ln p` values.
//!
//! Draws are generated in chunks of [`SAMPLE_CHUNK`]. Chunk `c` uses a
//! ChaCha8 stream seeded with the run seed and stream id `c`, so results are
//! reproducible from the seed and independent of the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{BinAccumulator, EnumError, Histogram, HistogramSpec};
use crate::model::{Assignment, Network};
use crate::moments::NormalModel;
use crate::normal::{std_cdf, UpperTruncatedNormal};
use crate::par::{self, Exec};
use crate::sum::CompensatedSum;

pub const SAMPLE_CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("sample size must be at least 2, got {0}")]
    TooFewDraws(usize),
    #[error("all {0} draws hit zero-probability states")]
    NoData(usize),
    #[error(transparent)]
    Histogram(#[from] EnumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub seed: u64,
    pub exec: Exec,
}

impl SampleOptions {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            exec: Exec::Parallel,
        }
    }
}

/// Picks one outcome per variable uniformly at random.
pub fn draw_state<R: Rng + ?Sized>(net: &Network, rng: &mut R) -> Assignment {
    Assignment::new(
        net.variables()
            .iter()
            .map(|v| rng.random_range(0..v.outcome_count()))
            .collect(),
    )
}

/// RNG for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Natural-log probabilities of `m` uniformly drawn states, in draw order.
pub fn sample_log_probs(net: &Network, m: usize, opts: &SampleOptions) -> Vec<f64> {
    let mut out = vec![0.0f64; m];
    par::for_each_chunk_mut(opts.exec, &mut out, SAMPLE_CHUNK, |c, slice| {
        let mut rng = chunk_rng(opts.seed, c as u64);
        let mut outcomes = vec![0usize; net.len()];
        for slot in slice.iter_mut() {
            for (o, v) in outcomes.iter_mut().zip(net.variables()) {
                *o = rng.random_range(0..v.outcome_count());
            }
            *slot = net.log_prob_unchecked(&outcomes);
        }
    });
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub m: usize,
    pub seed: u64,
    /// Draws that landed on zero-probability states.
    pub zero_count: usize,
    pub mean: f64,
    pub variance: f64,
    /// Counts are draws per bin; `mass` estimates the bin's share of the
    /// total probability (`state_count / m` times the sampled probabilities).
    pub histogram: Histogram,
    pub reference: NormalModel,
    /// No reference was given; `reference` is the sample's own moment fit.
    pub reference_fitted: bool,
    /// Kolmogorov-Smirnov distance to the reference with each distinct
    /// observed value standing for the interval between the midpoints to its
    /// neighbours. `None` when the reference or the sample is degenerate.
    pub ks: Option<f64>,
    /// Plain Kolmogorov-Smirnov distance against the continuous reference.
    pub ks_raw: Option<f64>,
    pub degenerate_reference: bool,
}

pub fn sample_summary(
    net: &Network,
    m: usize,
    spec: &HistogramSpec,
    reference: Option<&NormalModel>,
    opts: &SampleOptions,
) -> Result<SampleSummary, SampleError> {
    if m < 2 {
        return Err(SampleError::TooFewDraws(m));
    }
    spec.validate()?;
    let lnp = sample_log_probs(net, m, opts);
    let mut finite: Vec<f64> = lnp.iter().copied().filter(|l| l.is_finite()).collect();
    let zero_count = m - finite.len();
    if finite.is_empty() {
        return Err(SampleError::NoData(m));
    }

    let n = finite.len() as f64;
    let mean = finite.iter().copied().collect::<CompensatedSum>().value() / n;
    let variance = finite
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value()
        / n;

    let (min, max) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (lo, hi) = spec.resolve(min * std::f64::consts::LOG10_E, max * std::f64::consts::LOG10_E);
    // each draw stands for state_count / m states; kept in log space so
    // that oversized networks do not overflow
    let ln_scale = net.ln_state_count() - (m as f64).ln();
    let mut acc = BinAccumulator::new(lo, hi, spec.bin_width);
    for &l in &finite {
        acc.add(l * std::f64::consts::LOG10_E, (ln_scale + l).exp());
    }

    par::sort_by(opts.exec, &mut finite, |a, b| a.total_cmp(b));
    let reference_fitted = reference.is_none();
    let own = NormalModel::new(mean, variance);
    let reference = reference.unwrap_or(&own);
    let degenerate_reference = reference.is_degenerate();
    let (ks, ks_raw) = if degenerate_reference || finite[0] == finite[finite.len() - 1] {
        (None, None)
    } else {
        let cdf = reference_cdf(reference);
        (
            Some(ks_grouped(&finite, &cdf)),
            Some(ks_statistic(&finite, &cdf)),
        )
    };

    Ok(SampleSummary {
        m,
        seed: opts.seed,
        zero_count,
        mean,
        variance,
        histogram: acc.finish(),
        reference: *reference,
        reference_fitted,
        ks,
        ks_raw,
        degenerate_reference,
    })
}

fn reference_cdf(nm: &NormalModel) -> impl Fn(f64) -> f64 {
    let law = UpperTruncatedNormal::new(nm.xi, nm.sd());
    let truncated = nm.truncated_at_zero;
    move |x| {
        if truncated {
            law.cdf(x)
        } else {
            std_cdf((x - law.mean) / law.sd)
        }
    }
}

/// One-sample Kolmogorov-Smirnov statistic of ascending `sorted` against a
/// continuous CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

pub const TIE_TOLERANCE: f64 = 1e-9;

/// Kolmogorov-Smirnov distance for data on a lattice (or with many ties).
///
/// The empirical CDF after each distinct value is compared with the
/// reference at the midpoint to the next distinct value, and the empty CDF
/// below the first value with the reference at the midpoint below it. For
/// data without ties this differs from [`ks_statistic`] by `O(1/n)`; for
/// lattice data it removes the half-jump that a continuous CDF can never
/// match.
///
/// Values within [`TIE_TOLERANCE`] (relative) of the first value of a group
/// join that group: log-probabilities summed in different orders land a few
/// ulps apart on the same lattice point.
pub fn ks_grouped(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        match distinct.last_mut() {
            Some((v, last)) if x - *v <= TIE_TOLERANCE * v.abs().max(1.0) => *last = i + 1,
            _ => distinct.push((x, i + 1)),
        }
    }
    if distinct.len() < 2 {
        return 0.0;
    }
    let first_gap = distinct[1].0 - distinct[0].0;
    let mut d = cdf(distinct[0].0 - 0.5 * first_gap).abs();
    for w in distinct.windows(2) {
        let (v, upto) = w[0];
        let mid = 0.5 * (v + w[1].0);
        d = d.max((upto as f64 / n - cdf(mid)).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{StateIndex, VariableSpec};

    fn labels(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("s{i}")).collect()
    }

    fn independent(n: usize, col: &[f64]) -> Network {
        let specs = (0..n)
            .map(|i| VariableSpec::new(format!("x{i}"), labels(col.len()), vec![], vec![col.to_vec()]))
            .collect();
        Network::new(None, specs).unwrap()
    }

    #[test]
    fn two_binary_uniform_frequencies() {
        let net = independent(2, &[0.2, 0.8]);
        let mut rng = chunk_rng(7, 0);
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            let a = draw_state(&net, &mut rng);
            counts[net.assignment_to_index(&a).unwrap().0 as usize] += 1;
        }
        let sd = (draws as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * 0.25).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn single_variable_outcomes_uniform() {
        let net = independent(1, &[0.1, 0.2, 0.7]);
        let mut rng = chunk_rng(11, 3);
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            counts[draw_state(&net, &mut rng).outcomes()[0]] += 1;
        }
        let sd = (30_000.0f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 3.0 * sd);
        }
    }

    #[test]
    fn draws_are_deterministic_and_thread_independent() {
        let net = independent(6, &[0.3, 0.7]);
        let a = sample_log_probs(
            &net,
            20_000,
            &SampleOptions {
                seed: 5,
                exec: Exec::Sequential,
            },
        );
        let b = sample_log_probs(&net, 20_000, &SampleOptions::seeded(5));
        assert_eq!(a, b);
        let c = sample_log_probs(&net, 20_000, &SampleOptions::seeded(6));
        assert_ne!(a, c);
        // every value is some state's exact log-probability
        let exact: Vec<f64> = (0..net.state_count().unwrap())
            .map(|i| {
                net.state_log_prob(&net.index_to_assignment(StateIndex(i)).unwrap())
                    .unwrap()
            })
            .collect();
        assert!(a.iter().all(|x| exact.contains(x)));
    }

    #[test]
    fn uniform_network_is_degenerate() {
        let net = independent(4, &[0.5, 0.5]);
        let reference = NormalModel::new(16f64.recip().ln(), 0.0);
        let s = sample_summary(
            &net,
            1000,
            &HistogramSpec::default(),
            Some(&reference),
            &SampleOptions::seeded(1),
        )
        .unwrap();
        assert_eq!(s.variance, 0.0);
        assert!(s.degenerate_reference);
        assert!(s.ks.is_none());
        assert!((s.mean - reference.xi).abs() < 1e-12);
    }

    #[test]
    fn rejects_tiny_samples() {
        let net = independent(2, &[0.5, 0.5]);
        let nm = NormalModel::new(-1.0, 1.0);
        assert_eq!(
            sample_summary(&net, 1, &HistogramSpec::default(), Some(&nm), &SampleOptions::seeded(1))
                .unwrap_err(),
            SampleError::TooFewDraws(1)
        );
    }

    #[test]
    fn missing_reference_uses_own_fit() {
        let net = independent(6, &[0.2, 0.3, 0.5]);
        let s = sample_summary(&net, 5000, &HistogramSpec::default(), None, &SampleOptions::seeded(3))
            .unwrap();
        assert!(s.reference_fitted);
        assert_eq!(s.reference.xi, s.mean);
        assert_eq!(s.reference.phi2, s.variance);
        assert!(s.ks.is_some());
    }

    #[test]
    fn ks_matches_textbook_cases() {
        // uniform(0,1) reference; sample 0.1, 0.5, 0.9 -> D = max(1/3-0.1, 0.9-2/3, ...) = 0.2333
        let d = ks_statistic(&[0.1, 0.5, 0.9], |x: f64| x.clamp(0.0, 1.0));
        assert!((d - (0.9 - 2.0 / 3.0)).abs() < 1e-15);
        // evenly spread sample has a small grouped distance
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_grouped(&xs, |x: f64| x.clamp(0.0, 1.0)) < 2e-3);
        assert!(ks_statistic(&xs, |x: f64| x.clamp(0.0, 1.0)) <= 5e-4 + 1e-12);
    }

    #[test]
    fn ks_grouped_on_lattice() {
        // fair coin on {0, 1} vs uniform(-0.5, 1.5): midpoint 0.5 has CDF 0.5
        let xs = [0.0, 0.0, 1.0, 1.0];
        let cdf = |x: f64| ((x + 0.5) / 2.0).clamp(0.0, 1.0);
        assert!(ks_grouped(&xs, cdf) < 1e-15);
        // same lattice with rounding noise
        let noisy: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| x + (i % 3) as f64 * 4.0 * f64::EPSILON)
            .collect();
        assert!(ks_grouped(&noisy, cdf) < 1e-15);
        assert!(ks_statistic(&xs, cdf) >= 0.25);
    }
}
