//! Discrete factored models: variables, CPTs, and exact state indexing.
//!
//! A [`Network`] holds its variables in topological order. Each CPT is stored
//! densely, one column per parent configuration, with the parent
//! configuration index taken as a mixed-radix number over the parents'
//! outcomes in declaration order (first parent most significant). States are
//! indexed the same way over all variables, so index 0 is the all-first-outcome
//! state and the last variable varies fastest.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest deviation of a CPT column sum from 1 that is accepted (and then
/// renormalized).
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("network has no variables")]
    Empty,
    #[error("variable `{var}` has {count} outcome(s); at least 2 are required")]
    TooFewOutcomes { var: String, count: usize },
    #[error("variable `{var}` declares outcome `{outcome}` twice")]
    DuplicateOutcome { var: String, outcome: String },
    #[error("variable name `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("variable `{var}` lists parent #{parent} which is not declared before it")]
    ParentOrder { var: String, parent: usize },
    #[error("variable `{var}` lists parent `{parent}` twice")]
    DuplicateParent { var: String, parent: String },
    #[error("variable `{var}` has {found} CPT column(s); its parents require {expected}")]
    ColumnCount {
        var: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{var}` column {column} has {found} entries; expected {expected}")]
    ColumnLength {
        var: String,
        column: usize,
        expected: usize,
        found: usize,
    },
    #[error("variable `{var}` column {column} entry {outcome} is {value}, not a probability")]
    InvalidProbability {
        var: String,
        column: usize,
        outcome: usize,
        value: f64,
    },
    #[error("variable `{var}` column {column} sums to {sum}, not 1")]
    NotNormalized { var: String, column: usize, sum: f64 },
    #[error("state space exceeds 2^64 states; indexing is unavailable")]
    StateCountOverflow,
    #[error("assignment has {found} outcome(s); network has {expected} variable(s)")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("outcome {outcome} out of range for variable `{var}` with {count} outcomes")]
    OutcomeOutOfRange {
        var: String,
        outcome: usize,
        count: usize,
    },
    #[error("state index {index} out of range (network has {state_count} states)")]
    IndexOutOfRange { index: u64, state_count: u64 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("subset is not closed under parents: `{var}` needs `{parent}`")]
    NotAncestral { var: String, parent: String },
}

/// Input description of a variable, validated by [`Network::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct VariableSpec {
    pub name: String,
    pub outcomes: Vec<String>,
    /// Indices of earlier variables.
    pub parents: Vec<usize>,
    /// One probability vector per parent configuration.
    pub columns: Vec<Vec<f64>>,
    pub properties: Vec<String>,
}

impl VariableSpec {
    pub fn new(
        name: impl Into<String>,
        outcomes: Vec<String>,
        parents: Vec<usize>,
        columns: Vec<Vec<f64>>,
    ) -> Self {
        Self {
            name: name.into(),
            outcomes,
            parents,
            columns,
            properties: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    name: String,
    outcomes: Vec<String>,
    parents: Vec<usize>,
    /// Column-major: column `j` is `cpt[j * k..(j + 1) * k]`.
    cpt: Vec<f64>,
    log_cpt: Vec<f64>,
    /// Mixed-radix weight of each parent in the column index.
    parent_strides: Vec<usize>,
    properties: Vec<String>,
}

impl Variable {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn column_count(&self) -> usize {
        self.cpt.len() / self.outcomes.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let k = self.outcomes.len();
        &self.cpt[j * k..(j + 1) * k]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.cpt.chunks_exact(self.outcomes.len())
    }

    /// Every CPT cell, column by column.
    pub fn cells(&self) -> &[f64] {
        &self.cpt
    }

    pub fn log_cells(&self) -> &[f64] {
        &self.log_cpt
    }

    pub fn properties(&self) -> &[String] {
        &self.properties
    }

    /// Largest natural-log CPT entry of this variable.
    pub fn max_log_entry(&self) -> f64 {
        self.log_cpt
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Column index selected by the parents' outcomes in a full assignment.
    #[inline]
    pub fn column_index(&self, outcomes: &[usize]) -> usize {
        self.parents
            .iter()
            .zip(&self.parent_strides)
            .map(|(&p, &s)| outcomes[p] * s)
            .sum()
    }

    #[inline]
    pub(crate) fn log_entry(&self, outcomes: &[usize], own: usize) -> f64 {
        self.log_cpt[self.column_index(outcomes) * self.outcomes.len() + own]
    }

    #[inline]
    pub(crate) fn entry(&self, outcomes: &[usize], own: usize) -> f64 {
        self.cpt[self.column_index(outcomes) * self.outcomes.len() + own]
    }
}

/// One outcome index per variable, in network order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(outcomes: Vec<usize>) -> Self {
        Self(outcomes)
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// Position of a state in the lexicographic (mixed-radix) order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct StateIndex(pub u64);

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    name: Option<String>,
    variables: Vec<Variable>,
    /// `None` once the product of cardinalities no longer fits a `u64`.
    state_count: Option<u64>,
    /// `strides[i]` = number of states per outcome of variable `i`.
    /// Only meaningful when `state_count` is `Some`.
    strides: Vec<u64>,
    properties: Vec<String>,
}

impl Network {
    /// Validates and builds a network. Columns whose sums are off by at most
    /// [`NORMALIZATION_TOLERANCE`] are rescaled; larger deviations are errors.
    pub fn new(name: Option<String>, specs: Vec<VariableSpec>) -> Result<Self, ModelError> {
        Self::with_properties(name, specs, Vec::new())
    }

    pub fn with_properties(
        name: Option<String>,
        specs: Vec<VariableSpec>,
        properties: Vec<String>,
    ) -> Result<Self, ModelError> {
        if specs.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut variables: Vec<Variable> = Vec::with_capacity(specs.len());
        for (i, spec) in specs.into_iter().enumerate() {
            let var = build_variable(i, spec, &variables)?;
            variables.push(var);
        }

        let mut strides = vec![0u64; variables.len()];
        let mut count = Some(1u64);
        for i in (0..variables.len()).rev() {
            strides[i] = count.unwrap_or(0);
            count = count.and_then(|c| c.checked_mul(variables[i].outcome_count() as u64));
        }
        if count.is_none() {
            strides.iter_mut().for_each(|s| *s = 0);
        }

        Ok(Self {
            name,
            variables,
            state_count: count,
            strides,
            properties,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn properties(&self) -> &[String] {
        &self.properties
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &Variable {
        &self.variables[i]
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Size of the joint state space, or `None` when it exceeds `u64::MAX`.
    /// Such networks still support moments and sampling, but not indexing.
    pub fn state_count(&self) -> Option<u64> {
        self.state_count
    }

    pub fn is_indexable(&self) -> bool {
        self.state_count.is_some()
    }

    /// Natural log of the joint state count; finite for any size.
    pub fn ln_state_count(&self) -> f64 {
        self.variables
            .iter()
            .map(|v| (v.outcome_count() as f64).ln())
            .sum()
    }

    fn indexed_count(&self) -> Result<u64, ModelError> {
        self.state_count.ok_or(ModelError::StateCountOverflow)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    fn check(&self, a: &Assignment) -> Result<(), ModelError> {
        if a.0.len() != self.variables.len() {
            return Err(ModelError::DimensionMismatch {
                expected: self.variables.len(),
                found: a.0.len(),
            });
        }
        for (v, &o) in self.variables.iter().zip(&a.0) {
            if o >= v.outcome_count() {
                return Err(ModelError::OutcomeOutOfRange {
                    var: v.name.clone(),
                    outcome: o,
                    count: v.outcome_count(),
                });
            }
        }
        Ok(())
    }

    /// Natural log of the state's probability; `-inf` iff some factor is 0.
    pub fn state_log_prob(&self, a: &Assignment) -> Result<f64, ModelError> {
        self.check(a)?;
        Ok(self.log_prob_unchecked(&a.0))
    }

    /// Product of the state's CPT entries.
    pub fn state_prob(&self, a: &Assignment) -> Result<f64, ModelError> {
        self.check(a)?;
        Ok(self
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| v.entry(&a.0, a.0[i]))
            .product())
    }

    /// Sums log factors in variable order. Every code path that needs the
    /// log-probability of a complete state gets these exact bits.
    #[inline]
    pub(crate) fn log_prob_unchecked(&self, outcomes: &[usize]) -> f64 {
        let mut acc = 0.0;
        for (i, v) in self.variables.iter().enumerate() {
            acc += v.log_entry(outcomes, outcomes[i]);
        }
        acc
    }

    pub fn index_to_assignment(&self, idx: StateIndex) -> Result<Assignment, ModelError> {
        let state_count = self.indexed_count()?;
        if idx.0 >= state_count {
            return Err(ModelError::IndexOutOfRange {
                index: idx.0,
                state_count,
            });
        }
        let mut out = vec![0usize; self.variables.len()];
        self.decode_into(idx.0, &mut out);
        Ok(Assignment(out))
    }

    pub(crate) fn decode_into(&self, mut idx: u64, out: &mut [usize]) {
        for (i, &s) in self.strides.iter().enumerate() {
            out[i] = (idx / s) as usize;
            idx %= s;
        }
    }

    pub fn assignment_to_index(&self, a: &Assignment) -> Result<StateIndex, ModelError> {
        self.check(a)?;
        self.indexed_count()?;
        Ok(StateIndex(
            a.0.iter()
                .zip(&self.strides)
                .map(|(&o, &s)| o as u64 * s)
                .sum(),
        ))
    }

    /// Number of states sharing the first `depth` outcomes. Callers must
    /// check [`Network::is_indexable`] first.
    pub(crate) fn suffix_states(&self, depth: usize) -> u64 {
        if depth == 0 {
            self.state_count.unwrap_or(0)
        } else {
            self.strides[depth - 1]
        }
    }

    /// Visits the log-probabilities of states `start..start + out.len()`,
    /// writing them into `out`. Prefix sums are reused between neighbouring
    /// states; each value is bit-identical to [`Network::state_log_prob`].
    pub(crate) fn fill_log_probs(&self, start: u64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        let n = self.variables.len();
        let mut outcomes = vec![0usize; n];
        self.decode_into(start, &mut outcomes);
        let mut prefix = vec![0.0f64; n + 1];
        let mut dirty = 0usize;
        for slot in out.iter_mut() {
            for d in dirty..n {
                prefix[d + 1] = prefix[d] + self.variables[d].log_entry(&outcomes, outcomes[d]);
            }
            *slot = prefix[n];
            // odometer step; `dirty` becomes the leftmost changed position
            let mut d = n;
            while d > 0 {
                d -= 1;
                outcomes[d] += 1;
                if outcomes[d] < self.variables[d].outcome_count() {
                    break;
                }
                outcomes[d] = 0;
            }
            dirty = d;
        }
    }

    /// Restricts the network to the named variables. The subset must contain
    /// every parent of every member, so the restricted joint is the exact
    /// marginal of the full one.
    pub fn subnetwork(&self, names: &[&str]) -> Result<Network, ModelError> {
        let mut keep = vec![false; self.variables.len()];
        for name in names {
            let i = self
                .index_of(name)
                .ok_or_else(|| ModelError::UnknownVariable(name.to_string()))?;
            keep[i] = true;
        }
        let mut remap = vec![usize::MAX; self.variables.len()];
        let mut specs = Vec::new();
        for (i, v) in self.variables.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let mut parents = Vec::with_capacity(v.parents.len());
            for &p in &v.parents {
                if !keep[p] {
                    return Err(ModelError::NotAncestral {
                        var: v.name.clone(),
                        parent: self.variables[p].name.clone(),
                    });
                }
                parents.push(remap[p]);
            }
            remap[i] = specs.len();
            specs.push(VariableSpec {
                name: v.name.clone(),
                outcomes: v.outcomes.clone(),
                parents,
                columns: v.columns().map(<[f64]>::to_vec).collect(),
                properties: v.properties.clone(),
            });
        }
        Network::with_properties(self.name.clone(), specs, self.properties.clone())
    }
}

fn build_variable(
    index: usize,
    spec: VariableSpec,
    earlier: &[Variable],
) -> Result<Variable, ModelError> {
    let VariableSpec {
        name,
        outcomes,
        parents,
        columns,
        properties,
    } = spec;
    if earlier.iter().any(|v| v.name == name) {
        return Err(ModelError::DuplicateVariable(name));
    }
    let k = outcomes.len();
    if k < 2 {
        return Err(ModelError::TooFewOutcomes {
            var: name,
            count: k,
        });
    }
    for (j, o) in outcomes.iter().enumerate() {
        if outcomes[..j].contains(o) {
            return Err(ModelError::DuplicateOutcome {
                var: name,
                outcome: o.clone(),
            });
        }
    }
    for (j, &p) in parents.iter().enumerate() {
        if p >= index {
            return Err(ModelError::ParentOrder { var: name, parent: p });
        }
        if parents[..j].contains(&p) {
            return Err(ModelError::DuplicateParent {
                var: name,
                parent: earlier[p].name.clone(),
            });
        }
    }

    let mut parent_strides = vec![1usize; parents.len()];
    let mut expected = 1usize;
    for j in (0..parents.len()).rev() {
        parent_strides[j] = expected;
        expected = expected
            .checked_mul(earlier[parents[j]].outcome_count())
            .ok_or(ModelError::StateCountOverflow)?;
    }
    if columns.len() != expected {
        return Err(ModelError::ColumnCount {
            var: name,
            expected,
            found: columns.len(),
        });
    }

    let mut cpt = Vec::with_capacity(expected * k);
    for (c, mut col) in columns.into_iter().enumerate() {
        if col.len() != k {
            return Err(ModelError::ColumnLength {
                var: name,
                column: c,
                expected: k,
                found: col.len(),
            });
        }
        for (o, &q) in col.iter().enumerate() {
            if !(0.0..=1.0).contains(&q) {
                return Err(ModelError::InvalidProbability {
                    var: name,
                    column: c,
                    outcome: o,
                    value: q,
                });
            }
        }
        normalize_column(&name, c, &mut col)?;
        cpt.extend_from_slice(&col);
    }
    let log_cpt = cpt.iter().map(|q| q.ln()).collect();

    Ok(Variable {
        name,
        outcomes,
        parents,
        cpt,
        log_cpt,
        parent_strides,
        properties,
    })
}

/// Rescales a column whose sum is within tolerance of 1. Columns already
/// within summation rounding of 1 are left untouched, so a normalized network
/// is a fixed point of this step.
fn normalize_column(var: &str, column: usize, col: &mut [f64]) -> Result<(), ModelError> {
    let total = crate::sum::sum(col);
    let err = (total - 1.0).abs();
    if err.is_nan() || err > NORMALIZATION_TOLERANCE {
        return Err(ModelError::NotNormalized {
            var: var.to_string(),
            column,
            sum: total,
        });
    }
    if err > col.len() as f64 * f64::EPSILON {
        for q in col.iter_mut() {
            *q /= total;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("s{i}")).collect()
    }

    fn coins(n: usize) -> Network {
        let specs = (0..n)
            .map(|i| VariableSpec::new(format!("c{i}"), names(2), vec![], vec![vec![0.5, 0.5]]))
            .collect();
        Network::new(None, specs).unwrap()
    }

    fn independent(n: usize, col: &[f64]) -> Network {
        let specs = (0..n)
            .map(|i| VariableSpec::new(format!("x{i}"), names(col.len()), vec![], vec![col.to_vec()]))
            .collect();
        Network::new(None, specs).unwrap()
    }

    /// disease -> test
    fn screening() -> Network {
        let specs = vec![
            VariableSpec::new("disease", names(2), vec![], vec![vec![0.01, 0.99]]),
            VariableSpec::new(
                "test",
                names(2),
                vec![0],
                vec![vec![0.95, 0.05], vec![0.1, 0.9]],
            ),
        ];
        Network::new(None, specs).unwrap()
    }

    #[test]
    fn fair_coins() {
        let net = coins(2);
        for idx in 0..4 {
            let a = net.index_to_assignment(StateIndex(idx)).unwrap();
            assert!((net.state_log_prob(&a).unwrap() - 0.25f64.ln()).abs() < 1e-15);
            assert_eq!(net.state_prob(&a).unwrap(), 0.25);
        }
    }

    #[test]
    fn ten_high_outcomes() {
        let net = independent(10, &[0.9, 0.1]);
        let a = Assignment::new(vec![0; 10]);
        assert!((net.state_log_prob(&a).unwrap() - (-1.053_605_156_578_263)).abs() < 1e-12);
        assert!((net.state_prob(&a).unwrap() - 0.348_678_440_1).abs() < 1e-15);
    }

    #[test]
    fn zero_entry_gives_neg_infinity() {
        let specs = vec![
            VariableSpec::new("a", names(2), vec![], vec![vec![0.0, 1.0]]),
            VariableSpec::new("b", names(2), vec![0], vec![vec![0.5, 0.5], vec![1.0, 0.0]]),
        ];
        let net = Network::new(None, specs).unwrap();
        let a = Assignment::new(vec![0, 1]);
        assert_eq!(net.state_log_prob(&a).unwrap(), f64::NEG_INFINITY);
        assert_eq!(net.state_prob(&a).unwrap(), 0.0);
        let b = Assignment::new(vec![1, 1]);
        assert_eq!(net.state_prob(&b).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let net = coins(3);
        assert!(matches!(
            net.state_log_prob(&Assignment::new(vec![0, 1])),
            Err(ModelError::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            net.state_prob(&Assignment::new(vec![0, 2, 0])),
            Err(ModelError::OutcomeOutOfRange { .. })
        ));
    }

    #[test]
    fn indexing() {
        let net = coins(2);
        assert_eq!(
            net.index_to_assignment(StateIndex(0)).unwrap().outcomes(),
            &[0, 0]
        );
        assert_eq!(
            net.index_to_assignment(StateIndex(3)).unwrap().outcomes(),
            &[1, 1]
        );
        assert_eq!(
            net.index_to_assignment(StateIndex(1)).unwrap().outcomes(),
            &[0, 1]
        );
        assert!(matches!(
            net.index_to_assignment(StateIndex(4)),
            Err(ModelError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn round_trip_all_states_mixed_radix() {
        let specs = vec![
            VariableSpec::new("a", names(3), vec![], vec![vec![0.2, 0.3, 0.5]]),
            VariableSpec::new("b", names(2), vec![], vec![vec![0.4, 0.6]]),
            VariableSpec::new(
                "c",
                names(4),
                vec![0, 1],
                (0..6).map(|_| vec![0.25; 4]).collect(),
            ),
        ];
        let net = Network::new(None, specs).unwrap();
        assert_eq!(net.state_count(), Some(24));
        let mut prev: Option<Assignment> = None;
        for idx in 0..net.state_count().unwrap() {
            let a = net.index_to_assignment(StateIndex(idx)).unwrap();
            assert_eq!(net.assignment_to_index(&a).unwrap(), StateIndex(idx));
            if let Some(p) = prev {
                assert!(p < a, "lexicographic order");
            }
            prev = Some(a);
        }
    }

    #[test]
    fn fill_log_probs_matches_direct() {
        let net = screening();
        let mut out = vec![0.0; 3];
        net.fill_log_probs(1, &mut out);
        for (j, &v) in out.iter().enumerate() {
            let a = net.index_to_assignment(StateIndex(1 + j as u64)).unwrap();
            assert_eq!(v.to_bits(), net.state_log_prob(&a).unwrap().to_bits());
        }
    }

    #[test]
    fn total_mass_is_one() {
        let net = screening();
        let total: f64 = (0..net.state_count().unwrap())
            .map(|i| {
                net.state_prob(&net.index_to_assignment(StateIndex(i)).unwrap())
                    .unwrap()
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_columns() {
        let bad = vec![VariableSpec::new("a", names(2), vec![], vec![vec![0.3, 0.5]])];
        assert!(matches!(
            Network::new(None, bad),
            Err(ModelError::NotNormalized { column: 0, .. })
        ));
        let arity = vec![
            VariableSpec::new("a", names(2), vec![], vec![vec![0.5, 0.5]]),
            VariableSpec::new("b", names(2), vec![0], vec![vec![0.5, 0.5]]),
        ];
        assert!(matches!(
            Network::new(None, arity),
            Err(ModelError::ColumnCount {
                expected: 2,
                found: 1,
                ..
            })
        ));
        let negative = vec![VariableSpec::new("a", names(2), vec![], vec![vec![-0.5, 1.5]])];
        assert!(matches!(
            Network::new(None, negative),
            Err(ModelError::InvalidProbability { .. })
        ));
        let order = vec![VariableSpec::new("a", names(2), vec![0], vec![vec![0.5, 0.5]; 2])];
        assert!(matches!(
            Network::new(None, order),
            Err(ModelError::ParentOrder { .. })
        ));
        let single = vec![VariableSpec::new("a", names(1), vec![], vec![vec![1.0]])];
        assert!(matches!(
            Network::new(None, single),
            Err(ModelError::TooFewOutcomes { .. })
        ));
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let specs = vec![VariableSpec::new(
            "a",
            names(2),
            vec![],
            vec![vec![0.3 + 4e-13, 0.7]],
        )];
        let net = Network::new(None, specs).unwrap();
        let col = net.variable(0).column(0);
        assert!((col[0] + col[1] - 1.0).abs() <= 2.0 * f64::EPSILON);
        // already-normalized networks are a fixed point
        let again = Network::new(
            None,
            vec![VariableSpec::new("a", names(2), vec![], vec![col.to_vec()])],
        )
        .unwrap();
        assert_eq!(again.variable(0).column(0), col);
    }

    #[test]
    fn oversized_networks_build_but_refuse_indexing() {
        let specs = (0..65)
            .map(|i| VariableSpec::new(format!("c{i}"), names(2), vec![], vec![vec![0.5, 0.5]]))
            .collect();
        let net = Network::new(None, specs).unwrap();
        assert_eq!(net.state_count(), None);
        assert!(!net.is_indexable());
        assert!((net.ln_state_count() - 65.0 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(
            net.index_to_assignment(StateIndex(0)).unwrap_err(),
            ModelError::StateCountOverflow
        );
        assert_eq!(
            net.assignment_to_index(&Assignment(vec![0; 65])).unwrap_err(),
            ModelError::StateCountOverflow
        );
        assert!((net.state_log_prob(&Assignment(vec![1; 65])).unwrap() + 65.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn subnetwork_requires_parents() {
        let net = screening();
        assert!(matches!(
            net.subnetwork(&["test"]),
            Err(ModelError::NotAncestral { .. })
        ));
        let sub = net.subnetwork(&["disease"]).unwrap();
        assert_eq!(sub.state_count(), Some(2));
    }
}
