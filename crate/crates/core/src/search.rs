//! Best-first enumeration of the most probable states.
//!
//! The search walks the probability tree one variable at a time. A partial
//! state is scored by its exact prefix log-probability plus, for every
//! variable not yet assigned, that variable's largest log CPT entry. The
//! score never underestimates any completion, so complete states leave the
//! frontier in exactly descending probability order, and the search can stop
//! as soon as a rule is met without touching the rest of the state space.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{self, EnumOptions, RankedState};
use crate::model::{Network, StateIndex};
use crate::sum::CompensatedSum;

pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid stop rule: {0}")]
    InvalidRule(String),
    #[error("state space exceeds 2^64 states; search needs indexable states")]
    NotIndexable,
}

/// When to stop emitting states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum StopRule {
    /// Emit this many states.
    MaxStates(usize),
    /// Emit until the mass not yet emitted is at most epsilon.
    ResidualMass(f64),
    /// Emit every state with probability at least t.
    ProbabilityFloor(f64),
}

impl StopRule {
    pub fn validate(&self) -> Result<(), SearchError> {
        match *self {
            StopRule::MaxStates(0) => Err(SearchError::InvalidRule("k must be at least 1".into())),
            StopRule::ResidualMass(e) if !(e > 0.0 && e < 1.0) => Err(SearchError::InvalidRule(
                format!("epsilon {e} is outside (0, 1)"),
            )),
            StopRule::ProbabilityFloor(t) if !(t > 0.0 && t <= 1.0) => Err(
                SearchError::InvalidRule(format!("floor {t} is outside (0, 1]")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Largest frontier allowed before the search gives up and reports a
    /// truncated result.
    pub node_cap: usize,
    /// Assign variables with the most extreme CPT entries first (subject to
    /// parents preceding children). Changes the summation order of log
    /// factors, so exact ties may be resolved differently at the last ulp.
    pub reorder: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            node_cap: DEFAULT_NODE_CAP,
            reorder: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub rule: StopRule,
    pub states: Vec<RankedState>,
    pub accounted_mass: f64,
    /// `1 - accounted_mass`: an upper bound on the mass of all states not
    /// emitted.
    pub residual_bound: f64,
    pub nodes_expanded: u64,
    pub nodes_generated: u64,
    pub max_frontier: usize,
    /// The node cap was hit before the rule was satisfied.
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    bound: f64,
    /// State index of the completion that sets every unassigned variable to
    /// its first outcome: the smallest index below this node.
    min_index: u64,
    depth: u32,
    log_prob: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: higher bound first, then the smaller index range
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.min_index.cmp(&self.min_index))
            .then_with(|| self.depth.cmp(&other.depth))
    }
}

/// Variables in assignment order, with each one's largest log CPT entry.
struct Plan {
    order: Vec<usize>,
    maxes: Vec<f64>,
    strides: Vec<u64>,
}

impl Plan {
    fn new(net: &Network, reorder: bool) -> Self {
        let n = net.len();
        let order: Vec<usize> = if reorder {
            greedy_order(net)
        } else {
            (0..n).collect()
        };
        let maxes = order
            .iter()
            .map(|&v| net.variable(v).max_log_entry())
            .collect();
        let strides = (0..n).map(|i| net.suffix_states(i + 1)).collect();
        Self {
            order,
            maxes,
            strides,
        }
    }

    /// Optimistic log-probability of any completion of a prefix at `depth`.
    /// The maxima are added one at a time in the same order a completion
    /// adds its own entries, so rounding can never push a completion above
    /// this value.
    fn bound(&self, depth: usize, log_prob: f64) -> f64 {
        self.maxes[depth..].iter().fold(log_prob, |acc, &m| acc + m)
    }
}

/// Topological order that, among ready variables, takes the one whose CPT
/// has the largest entry first (earliest declaration breaks ties).
fn greedy_order(net: &Network) -> Vec<usize> {
    let n = net.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| !placed[i] && net.variable(i).parents().iter().all(|&p| placed[p]))
            .max_by(|&a, &b| {
                net.variable(a)
                    .max_log_entry()
                    .total_cmp(&net.variable(b).max_log_entry())
                    .then(b.cmp(&a))
            })
            .expect("parents precede children, so some variable is ready");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Emits states in descending probability order (ties by ascending state
/// index) until `rule` is met.
pub fn search_top_states(
    net: &Network,
    rule: StopRule,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    rule.validate()?;
    if !net.is_indexable() {
        return Err(SearchError::NotIndexable);
    }
    let plan = Plan::new(net, opts.reorder);
    let n = net.len();
    let mut frontier = BinaryHeap::new();
    frontier.push(Node {
        bound: plan.bound(0, 0.0),
        min_index: 0,
        depth: 0,
        log_prob: 0.0,
    });

    let mut states = Vec::new();
    let mut accounted = CompensatedSum::new();
    let mut outcomes = vec![0usize; n];
    let mut expanded = 0u64;
    let mut generated = 1u64;
    let mut max_frontier = 1usize;
    let mut truncated = false;

    let floor_ln = match rule {
        StopRule::ProbabilityFloor(t) => Some(t),
        _ => None,
    };

    loop {
        let done = match rule {
            StopRule::MaxStates(k) => states.len() >= k,
            StopRule::ResidualMass(eps) => 1.0 - accounted.value() <= eps,
            StopRule::ProbabilityFloor(_) => false,
        };
        if done {
            break;
        }
        let Some(node) = frontier.pop() else {
            break;
        };
        if let Some(t) = floor_ln {
            if node.bound.exp() < t {
                break;
            }
        }
        let depth = node.depth as usize;
        if depth == n {
            let p = node.log_prob.exp();
            if floor_ln.is_some_and(|t| p < t) {
                continue;
            }
            net.decode_into(node.min_index, &mut outcomes);
            let log_prob = if opts.reorder {
                net.log_prob_unchecked(&outcomes)
            } else {
                node.log_prob
            };
            let prob = log_prob.exp();
            accounted.add(prob);
            states.push(RankedState {
                index: StateIndex(node.min_index),
                assignment: outcomes.clone().into(),
                log_prob,
                prob,
            });
            continue;
        }

        let var_idx = plan.order[depth];
        let var = net.variable(var_idx);
        if frontier.len() + var.outcome_count() > opts.node_cap {
            frontier.push(node);
            truncated = true;
            break;
        }
        expanded += 1;
        net.decode_into(node.min_index, &mut outcomes);
        for o in 0..var.outcome_count() {
            let le = var.log_entry(&outcomes, o);
            if le == f64::NEG_INFINITY {
                continue;
            }
            let log_prob = node.log_prob + le;
            frontier.push(Node {
                bound: plan.bound(depth + 1, log_prob),
                min_index: node.min_index + o as u64 * plan.strides[var_idx],
                depth: node.depth + 1,
                log_prob,
            });
            generated += 1;
        }
        max_frontier = max_frontier.max(frontier.len());
    }

    let accounted_mass = accounted.value();
    Ok(SearchResult {
        rule,
        states,
        accounted_mass,
        residual_bound: 1.0 - accounted_mass,
        nodes_expanded: expanded,
        nodes_generated: generated,
        max_frontier,
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rule: StopRule,
    pub passed: bool,
    pub emitted: usize,
    pub expected: usize,
    pub failures: Vec<String>,
}

/// Runs the search and checks order, membership and mass against brute-force
/// enumeration.
pub fn verify_against_enumeration(
    net: &Network,
    rule: StopRule,
    search: &SearchOptions,
    enumeration: &EnumOptions,
) -> VerificationReport {
    let mut failures = Vec::new();
    let report = |failures: Vec<String>, emitted, expected| VerificationReport {
        rule,
        passed: failures.is_empty(),
        emitted,
        expected,
        failures,
    };

    let found = match search_top_states(net, rule, search) {
        Ok(r) => r,
        Err(e) => return report(vec![e.to_string()], 0, 0),
    };
    let all = match enumeration::top_k_exact(net, usize::MAX, enumeration) {
        Ok(v) => v,
        Err(e) => return report(vec![e.to_string()], found.states.len(), 0),
    };

    let expected_len = match rule {
        StopRule::MaxStates(k) => k.min(all.len()),
        StopRule::ResidualMass(eps) => {
            let mut acc = CompensatedSum::new();
            let mut len = 0;
            while len < all.len() && 1.0 - acc.value() > eps {
                acc.add(all[len].prob);
                len += 1;
            }
            len
        }
        StopRule::ProbabilityFloor(t) => all.iter().take_while(|s| s.prob >= t).count(),
    };
    let expected = &all[..expected_len];

    if found.truncated {
        failures.push("search was truncated by the node cap".into());
    }
    if found.states.len() != expected.len() {
        failures.push(format!(
            "emitted {} states, enumeration expects {}",
            found.states.len(),
            expected.len()
        ));
    }
    for (r, (got, want)) in found.states.iter().zip(expected).enumerate() {
        if got.index != want.index {
            failures.push(format!(
                "rank {}: state {} emitted, enumeration has {}",
                r + 1,
                got.index.0,
                want.index.0
            ));
            break;
        }
        if (got.prob - want.prob).abs() > 1e-12 {
            failures.push(format!(
                "rank {}: probability {} vs {}",
                r + 1,
                got.prob,
                want.prob
            ));
            break;
        }
    }
    if found
        .states
        .windows(2)
        .any(|w| w[1].log_prob > w[0].log_prob)
    {
        failures.push("emitted probabilities are not nonincreasing".into());
    }
    let want_mass: CompensatedSum = expected.iter().map(|s| s.prob).collect();
    if (found.accounted_mass - want_mass.value()).abs() > 1e-12 {
        failures.push(format!(
            "accounted mass {} vs enumeration {}",
            found.accounted_mass,
            want_mass.value()
        ));
    }
    if let StopRule::ResidualMass(eps) = rule {
        if !found.truncated && found.residual_bound > eps && found.states.len() < all.len() {
            failures.push(format!(
                "stopped with residual {} above epsilon {eps}",
                found.residual_bound
            ));
        }
    }
    let emitted = found.states.len();
    report(failures, emitted, expected_len)
}
