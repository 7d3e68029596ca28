//! Exact enumeration of every state: log-probability histogram, mass
//! histogram, coverage curve, and the top-k oracle.
//!
//! States are processed in fixed chunks of [`CHUNK_STATES`] consecutive
//! indices. Chunk results are merged in index order, so the profile is
//! bit-identical whatever the worker count.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Assignment, Network, StateIndex};
use crate::par::{self, Exec};
use crate::sum::CompensatedSum;

pub const DEFAULT_STATE_CAP: u64 = 1 << 24;
pub const DEFAULT_BIN_WIDTH: f64 = 0.5;
pub const CHUNK_STATES: usize = 1 << 14;

/// Ranks up to this value are all kept in the coverage table; beyond it ranks
/// are sampled geometrically.
const DENSE_COVERAGE_RANKS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumError {
    #[error("network has {} states; enumeration cap is {cap}", fmt_states(*.state_count, *.ln_state_count))]
    CapExceeded {
        /// `None` when the count exceeds `u64::MAX`.
        state_count: Option<u64>,
        ln_state_count: f64,
        cap: u64,
    },
    #[error("invalid histogram spec: {0}")]
    InvalidSpec(String),
    #[error("{count} state(s) have probability zero and the zero policy rejects them")]
    ZeroStates { count: u64 },
    #[error("mass fraction {0} is outside (0, 1]")]
    InvalidFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPolicy {
    /// Count zero-probability states separately; never bin them.
    #[default]
    Count,
    Reject,
}

/// Binning of `log10 p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bin_width: f64,
    /// `None` picks bin-aligned bounds from the data.
    pub range: Option<(f64, f64)>,
    pub zero_policy: ZeroPolicy,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self {
            bin_width: DEFAULT_BIN_WIDTH,
            range: None,
            zero_policy: ZeroPolicy::Count,
        }
    }
}

impl HistogramSpec {
    pub fn with_range(bin_width: f64, lo: f64, hi: f64) -> Self {
        Self {
            bin_width,
            range: Some((lo, hi)),
            zero_policy: ZeroPolicy::Count,
        }
    }

    pub fn validate(&self) -> Result<(), EnumError> {
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(EnumError::InvalidSpec(format!(
                "bin width {} must be positive",
                self.bin_width
            )));
        }
        if let Some((lo, hi)) = self.range {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(EnumError::InvalidSpec(format!(
                    "range ({lo}, {hi}) must satisfy min < max"
                )));
            }
        }
        Ok(())
    }

    /// Concrete `(lo, hi)` for data spanning `[min10, max10]` in log10 units.
    pub fn resolve(&self, min10: f64, max10: f64) -> (f64, f64) {
        if let Some(r) = self.range {
            return r;
        }
        let w = self.bin_width;
        let lo = (min10 / w).floor() * w;
        let mut hi = (max10 / w).ceil() * w;
        if hi <= lo {
            hi = lo + w;
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub count: u64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo_log10: f64,
    pub hi_log10: f64,
    pub count: u64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub bins: Vec<HistogramBin>,
    /// Positive values below the range.
    pub underflow: Tally,
    /// Values above the range.
    pub overflow: Tally,
}

/// Accumulates a histogram of `log10 p` with compensated per-bin mass.
#[derive(Debug, Clone)]
pub(crate) struct BinAccumulator {
    lo: f64,
    hi: f64,
    width: f64,
    counts: Vec<u64>,
    mass: Vec<CompensatedSum>,
    under: (u64, CompensatedSum),
    over: (u64, CompensatedSum),
}

impl BinAccumulator {
    pub(crate) fn new(lo: f64, hi: f64, width: f64) -> Self {
        let nbins = (((hi - lo) / width).round() as usize).max(1);
        Self {
            lo,
            hi,
            width,
            counts: vec![0; nbins],
            mass: vec![CompensatedSum::new(); nbins],
            under: (0, CompensatedSum::new()),
            over: (0, CompensatedSum::new()),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, log10: f64, p: f64) {
        if log10 < self.lo {
            self.under.0 += 1;
            self.under.1.add(p);
        } else if log10 > self.hi {
            self.over.0 += 1;
            self.over.1.add(p);
        } else {
            // the top edge belongs to the last bin
            let i = (((log10 - self.lo) / self.width) as usize).min(self.counts.len() - 1);
            self.counts[i] += 1;
            self.mass[i].add(p);
        }
    }

    pub(crate) fn merge(&mut self, other: &BinAccumulator) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.mass.iter_mut().zip(&other.mass) {
            a.merge(b);
        }
        self.under.0 += other.under.0;
        self.under.1.merge(&other.under.1);
        self.over.0 += other.over.0;
        self.over.1.merge(&other.over.1);
    }

    pub(crate) fn finish(self) -> Histogram {
        let bins = self
            .counts
            .iter()
            .zip(&self.mass)
            .enumerate()
            .map(|(i, (&count, m))| HistogramBin {
                lo_log10: self.lo + i as f64 * self.width,
                hi_log10: self.lo + (i + 1) as f64 * self.width,
                count,
                mass: m.value(),
            })
            .collect();
        Histogram {
            bin_width: self.width,
            bins,
            underflow: Tally {
                count: self.under.0,
                mass: self.under.1.value(),
            },
            overflow: Tally {
                count: self.over.0,
                mass: self.over.1.value(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    pub rank: u64,
    pub state_prob: f64,
    pub cumulative_mass: f64,
}

/// States whose probability lies in `(10^-(decade+1), 10^-decade]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecadeRow {
    pub decade: u32,
    pub count: u64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassProfile {
    pub state_count: u64,
    pub positive_count: u64,
    pub zero_state_count: u64,
    pub total_mass: f64,
    pub max_prob: f64,
    pub min_positive_prob: f64,
    /// `log10(max_prob / min_positive_prob)`.
    pub spread_orders: f64,
    pub histogram: Histogram,
    pub decades: Vec<DecadeRow>,
    /// Cumulative mass at selected ranks (all ranks up to 100, then
    /// geometrically spaced, always including the last positive state).
    pub coverage: Vec<CoveragePoint>,
    /// Cumulative mass after every rank, `cumulative[r - 1]` for rank `r`.
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl MassProfile {
    /// Full cumulative coverage curve over positive states.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn coverage_at_rank(&self, rank: u64) -> Option<f64> {
        if rank == 0 {
            return Some(0.0);
        }
        self.cumulative.get(rank as usize - 1).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumOptions {
    pub cap: u64,
    pub exec: Exec,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_STATE_CAP,
            exec: Exec::Parallel,
        }
    }
}

fn fmt_states(count: Option<u64>, ln: f64) -> String {
    match count {
        Some(n) => n.to_string(),
        None => format!("about 10^{:.1}", ln / std::f64::consts::LN_10),
    }
}

fn check_cap(net: &Network, cap: u64) -> Result<usize, EnumError> {
    match net.state_count() {
        Some(n) if n <= cap && n <= usize::MAX as u64 => Ok(n as usize),
        state_count => Err(EnumError::CapExceeded {
            state_count,
            ln_state_count: net.ln_state_count(),
            cap,
        }),
    }
}

/// Natural-log probability of every state, indexed by [`StateIndex`].
pub fn log_probs(net: &Network, opts: &EnumOptions) -> Result<Vec<f64>, EnumError> {
    let n = check_cap(net, opts.cap)?;
    let mut out = vec![0.0f64; n];
    par::for_each_chunk_mut(opts.exec, &mut out, CHUNK_STATES, |c, slice| {
        net.fill_log_probs((c * CHUNK_STATES) as u64, slice);
    });
    Ok(out)
}

#[derive(Clone)]
struct ChunkStats {
    mass: CompensatedSum,
    zeros: u64,
    min: f64,
    max: f64,
}

fn chunk_stats(lnp: &[f64]) -> ChunkStats {
    let mut s = ChunkStats {
        mass: CompensatedSum::new(),
        zeros: 0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    for &l in lnp {
        if l == f64::NEG_INFINITY {
            s.zeros += 1;
            continue;
        }
        s.mass.add(l.exp());
        s.min = s.min.min(l);
        s.max = s.max.max(l);
    }
    s
}

const MAX_DECADES: usize = 400;

fn decade_of(lnp: f64) -> usize {
    let d = (-lnp * std::f64::consts::LOG10_E).floor();
    if d <= 0.0 {
        0
    } else {
        (d as usize).min(MAX_DECADES - 1)
    }
}

/// Enumerates every state and summarises the joint distribution.
pub fn enumerate_profile(
    net: &Network,
    spec: &HistogramSpec,
    opts: &EnumOptions,
) -> Result<MassProfile, EnumError> {
    spec.validate()?;
    let lnp = log_probs(net, opts)?;
    profile_from_log_probs(&lnp, spec, opts.exec)
}

/// Builds a profile from per-state natural-log probabilities (`-inf` marks a
/// zero-probability state).
pub fn profile_from_log_probs(
    lnp: &[f64],
    spec: &HistogramSpec,
    exec: Exec,
) -> Result<MassProfile, EnumError> {
    spec.validate()?;
    let chunks = lnp.len().div_ceil(CHUNK_STATES);
    let chunk = |c: usize| &lnp[c * CHUNK_STATES..((c + 1) * CHUNK_STATES).min(lnp.len())];

    let stats = par::map_indexed(exec, chunks, |c| chunk_stats(chunk(c)));
    let mut total = CompensatedSum::new();
    let mut zeros = 0u64;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for s in &stats {
        total.merge(&s.mass);
        zeros += s.zeros;
        min = min.min(s.min);
        max = max.max(s.max);
    }
    if zeros > 0 && spec.zero_policy == ZeroPolicy::Reject {
        return Err(EnumError::ZeroStates { count: zeros });
    }
    let positive = lnp.len() as u64 - zeros;

    let (lo, hi) = spec.resolve(min * std::f64::consts::LOG10_E, max * std::f64::consts::LOG10_E);
    let partial = par::map_indexed(exec, chunks, |c| {
        let mut acc = BinAccumulator::new(lo, hi, spec.bin_width);
        let mut dec_counts = vec![0u64; MAX_DECADES];
        let mut dec_mass = vec![CompensatedSum::new(); MAX_DECADES];
        for &l in chunk(c) {
            if l == f64::NEG_INFINITY {
                continue;
            }
            let p = l.exp();
            acc.add(l * std::f64::consts::LOG10_E, p);
            let d = decade_of(l);
            dec_counts[d] += 1;
            dec_mass[d].add(p);
        }
        (acc, dec_counts, dec_mass)
    });
    let mut hist = BinAccumulator::new(lo, hi, spec.bin_width);
    let mut dec_counts = vec![0u64; MAX_DECADES];
    let mut dec_mass = vec![CompensatedSum::new(); MAX_DECADES];
    for (acc, dc, dm) in &partial {
        hist.merge(acc);
        for d in 0..MAX_DECADES {
            dec_counts[d] += dc[d];
            dec_mass[d].merge(&dm[d]);
        }
    }
    let decades = (0..MAX_DECADES)
        .filter(|&d| dec_counts[d] > 0)
        .map(|d| DecadeRow {
            decade: d as u32,
            count: dec_counts[d],
            mass: dec_mass[d].value(),
        })
        .collect();

    let mut sorted: Vec<f64> = lnp
        .iter()
        .copied()
        .filter(|&l| l > f64::NEG_INFINITY)
        .collect();
    par::sort_by(exec, &mut sorted, |a, b| b.total_cmp(a));
    let mut cumulative = Vec::with_capacity(sorted.len());
    let mut run = CompensatedSum::new();
    let mut last = 0.0f64;
    for &l in &sorted {
        run.add(l.exp());
        // the compensated value can wobble by an ulp; keep the curve monotone
        last = last.max(run.value());
        cumulative.push(last);
    }
    let coverage = coverage_ranks(positive)
        .into_iter()
        .map(|r| CoveragePoint {
            rank: r,
            state_prob: sorted[r as usize - 1].exp(),
            cumulative_mass: cumulative[r as usize - 1],
        })
        .collect();

    Ok(MassProfile {
        state_count: lnp.len() as u64,
        positive_count: positive,
        zero_state_count: zeros,
        total_mass: total.value(),
        max_prob: max.exp(),
        min_positive_prob: min.exp(),
        spread_orders: (max - min) * std::f64::consts::LOG10_E,
        histogram: hist.finish(),
        decades,
        coverage,
        cumulative,
    })
}

fn coverage_ranks(positive: u64) -> Vec<u64> {
    let mut ranks: Vec<u64> = (1..=positive.min(DENSE_COVERAGE_RANKS)).collect();
    let mut r = DENSE_COVERAGE_RANKS as f64;
    loop {
        r *= 1.1;
        let ri = r.round() as u64;
        if ri >= positive {
            break;
        }
        if ranks.last().is_some_and(|&l| l < ri) {
            ranks.push(ri);
        }
    }
    if ranks.last().is_some_and(|&l| l < positive) {
        ranks.push(positive);
    }
    ranks
}

/// Smallest number of top states whose cumulative mass reaches `f`. For
/// `f = 1` this is the number of positive-probability states.
pub fn coverage_at_mass(profile: &MassProfile, f: f64) -> Result<u64, EnumError> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(EnumError::InvalidFraction(f));
    }
    if f == 1.0 {
        return Ok(profile.positive_count);
    }
    let k = profile.cumulative.partition_point(|&c| c < f);
    Ok(((k + 1) as u64).min(profile.positive_count))
}

/// A state together with its probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedState {
    pub index: StateIndex,
    pub assignment: Assignment,
    pub log_prob: f64,
    pub prob: f64,
}

/// Descending log-probability, ties by ascending state index.
#[inline]
pub(crate) fn rank_order(a: (f64, u64), b: (f64, u64)) -> std::cmp::Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

/// The `k` most probable positive-probability states, brute force.
pub fn top_k_exact(
    net: &Network,
    k: usize,
    opts: &EnumOptions,
) -> Result<Vec<RankedState>, EnumError> {
    let lnp = log_probs(net, opts)?;
    let mut candidates: Vec<(f64, u64)> = lnp
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > f64::NEG_INFINITY)
        .map(|(i, &l)| (l, i as u64))
        .collect();
    let k = k.min(candidates.len());
    if k == 0 {
        return Ok(Vec::new());
    }
    if k < candidates.len() {
        candidates.select_nth_unstable_by(k - 1, |a, b| rank_order(*a, *b));
        candidates.truncate(k);
    }
    par::sort_by(opts.exec, &mut candidates, |a, b| rank_order(*a, *b));
    Ok(candidates
        .into_iter()
        .map(|(l, i)| RankedState {
            index: StateIndex(i),
            assignment: net
                .index_to_assignment(StateIndex(i))
                .expect("index below state count"),
            log_prob: l,
            prob: l.exp(),
        })
        .collect())
}
