//! Profiling the joint probability distribution of discrete Bayesian
//! networks.
//!
//! The probability of a state is a product of CPT entries, so its logarithm
//! is a sum, and for a state picked uniformly at random that sum tends to a
//! normal law. This crate computes the moments behind that prediction,
//! measures the real distribution by exact enumeration or sampling, fits and
//! inverts the lognormal model to get mass thresholds, and searches the most
//! probable states best-first with residual-mass stopping rules.

pub mod enumeration;
pub mod fit;
pub mod format;
pub mod generate;
pub mod model;
pub mod moments;
pub mod normal;
pub mod par;
pub mod sampling;
pub mod search;
pub mod sum;

pub use enumeration::{
    coverage_at_mass, enumerate_profile, top_k_exact, EnumError, EnumOptions, HistogramSpec,
    MassProfile, RankedState, ZeroPolicy,
};
pub use fit::{epsilon_rank_estimate, fit_normal, mass_threshold, FitError, ThresholdResult};
pub use format::{parse_bif, parse_native, write_native, ParseDiagnostic, ParseError};
pub use generate::{corpus, generate, Family, GenError, GenSpec};
pub use model::{Assignment, ModelError, Network, StateIndex, Variable, VariableSpec};
pub use moments::{
    binary_log_moments, liapounov_ratio, skewness, theoretical_normal, variable_log_moments,
    LiapounovReport, LogMoments, MomentsError, NormalModel,
};
pub use par::Exec;
pub use sampling::{draw_state, sample_summary, SampleError, SampleOptions, SampleSummary};
pub use search::{search_top_states, verify_against_enumeration, SearchError, SearchOptions, SearchResult, StopRule};
