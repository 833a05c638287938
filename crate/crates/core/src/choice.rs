//! Reconstruction of the binary choice as a staged extremum search on a
//! chain of states: rank functions per intent bit, their mixed evaluation,
//! the exact and greedy stage walks, and the full eight-row result table.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{FinitePoset, PosetMap};

/// The boolean intent behind each of the three state variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntentTriple {
    pub b1: bool,
    pub b2: bool,
    pub b3: bool,
}

impl IntentTriple {
    pub fn new(b1: bool, b2: bool, b3: bool) -> Self {
        Self { b1, b2, b3 }
    }

    pub fn bits(&self) -> Vec<bool> {
        vec![self.b1, self.b2, self.b3]
    }

    /// All eight intents in binary order.
    pub fn all() -> Vec<Self> {
        (0..8)
            .map(|k| Self::new(k & 4 != 0, k & 2 != 0, k & 1 != 0))
            .collect()
    }
}

/// A linearly ordered set of states `x1 < x2 < ... < xm`.
#[derive(Debug, Clone)]
pub struct StateChain {
    poset: Arc<FinitePoset>,
}

impl StateChain {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidElements(
                "chain needs at least one state".into(),
            ));
        }
        let names: Vec<String> = (1..=len).map(|i| format!("x{i}")).collect();
        Ok(Self {
            poset: Arc::new(FinitePoset::chain(&names)?),
        })
    }

    /// The standard three-state chain.
    pub fn standard() -> Self {
        Self::new(3).expect("three states")
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn state_name(&self, i: usize) -> &str {
        self.poset.name(i)
    }
}

/// The pure evaluation for `(x_i, b)`: 1 above state `i`, `b` at it, 0 below.
/// Always monotone; a rank-`i` function in the layered sense.
pub fn theta(i: usize, b: bool, chain: &StateChain) -> Result<PosetMap> {
    let m = chain.len();
    if i == 0 || i > m {
        return Err(Error::IndexOutOfRange { index: i, len: m });
    }
    let values: Vec<usize> = (1..=m)
        .map(|k| match k.cmp(&i) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => usize::from(b),
            std::cmp::Ordering::Less => 0,
        })
        .collect();
    PosetMap::new(chain.poset().clone(), FinitePoset::bool_chain(), values)
}

/// Mixes the pure evaluations through the dissociation fold:
/// `psi = dis(theta1, dis(theta2, ... theta_m))` with `dis(a, b) = a AND NOT b`.
pub fn mixed_evaluation(intents: &[bool], chain: &StateChain) -> Result<PosetMap> {
    if intents.len() != chain.len() {
        return Err(Error::LengthMismatch {
            expected: chain.len(),
            got: intents.len(),
        });
    }
    let thetas: Vec<PosetMap> = (1..=chain.len())
        .map(|i| theta(i, intents[i - 1], chain))
        .collect::<Result<_>>()?;
    let m = chain.len();
    let values: Vec<usize> = (0..m)
        .map(|x| {
            let mut acc = thetas.last().unwrap().value(x);
            for t in thetas.iter().rev().skip(1) {
                acc = t.value(x) & (1 - acc);
            }
            acc
        })
        .collect();
    PosetMap::new(chain.poset().clone(), FinitePoset::bool_chain(), values)
}

/// Three-state mixed evaluation of one intent triple.
pub fn mix_evaluation(t: IntentTriple) -> PosetMap {
    mixed_evaluation(&t.bits(), &StateChain::standard()).expect("three intents on three states")
}

/// One full run of a staged walk: the state reached after every stage, the
/// chosen state, and the intent bit it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceTrace {
    pub intent: Vec<bool>,
    pub stage_states: Vec<usize>,
    pub chosen: usize,
    pub chosen_value: bool,
}

impl ChoiceTrace {
    fn finish(intent: Vec<bool>, stage_states: Vec<usize>) -> Self {
        let chosen = *stage_states.last().expect("at least one stage");
        let chosen_value = intent[chosen];
        Self {
            intent,
            stage_states,
            chosen,
            chosen_value,
        }
    }
}

/// Nearest state attaining the global extreme of `values`, by step distance
/// from `from`; staying counts as distance zero and lower states break ties.
fn nearest_global_extremum(values: &[usize], from: usize, maximize: bool) -> usize {
    let target = if maximize {
        *values.iter().max().unwrap()
    } else {
        *values.iter().min().unwrap()
    };
    (0..values.len())
        .filter(|&s| values[s] == target)
        .min_by_key(|&s| (s.abs_diff(from), s))
        .expect("extreme value is attained")
}

/// Greedy walk: step to an adjacent state only while the value strictly
/// improves in the required direction; a plateau stops the walk. When both
/// neighbors improve, the lower state wins.
fn greedy_extremum(values: &[usize], from: usize, maximize: bool) -> usize {
    let better = |a: usize, b: usize| if maximize { a > b } else { a < b };
    let mut cur = from;
    loop {
        let mut candidates = Vec::new();
        if cur > 0 && better(values[cur - 1], values[cur]) {
            candidates.push(cur - 1);
        }
        if cur + 1 < values.len() && better(values[cur + 1], values[cur]) {
            candidates.push(cur + 1);
        }
        match candidates.first() {
            Some(&next) => cur = next,
            None => return cur,
        }
    }
}

fn staged_walk(
    intents: &[bool],
    chain: &StateChain,
    step: impl Fn(&[usize], usize, bool) -> usize,
) -> Result<ChoiceTrace> {
    if intents.len() != chain.len() {
        return Err(Error::LengthMismatch {
            expected: chain.len(),
            got: intents.len(),
        });
    }
    let mut cur = 0; // the walk starts at the lowest state
    let mut stage_states = Vec::with_capacity(chain.len());
    for (i, &b) in intents.iter().enumerate() {
        let values: Vec<usize> = theta(i + 1, b, chain)?.values().to_vec();
        // Odd stages maximize, even stages minimize, following the position
        // of each rank function in the mixed form.
        let maximize = i % 2 == 0;
        cur = step(&values, cur, maximize);
        stage_states.push(cur);
    }
    Ok(ChoiceTrace::finish(intents.to_vec(), stage_states))
}

/// The exact algorithm: each stage jumps to the nearest global extreme of
/// its rank function. The chosen state always lies in the arg max of the
/// mixed evaluation.
pub fn run_exact(t: IntentTriple) -> ChoiceTrace {
    staged_walk(&t.bits(), &StateChain::standard(), nearest_global_extremum)
        .expect("three intents on three states")
}

/// The approximate algorithm: each stage walks greedily to the nearest
/// adjacent extreme in the required direction.
pub fn run_approx(t: IntentTriple) -> ChoiceTrace {
    staged_walk(&t.bits(), &StateChain::standard(), greedy_extremum)
        .expect("three intents on three states")
}

/// The greedy walk on a chain of any length; identical to [`run_approx`]
/// for three states.
pub fn run_generalized(intents: &[bool], chain: &StateChain) -> Result<ChoiceTrace> {
    staged_walk(intents, chain, greedy_extremum)
}

/// One row of the eight-intent result table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceRow {
    pub intent: IntentTriple,
    pub exact_state: usize,
    pub exact_value: bool,
    pub approx_state: usize,
    pub approx_value: bool,
}

/// Runs both algorithms over all eight intents, in binary order.
pub fn choice_table() -> Vec<ChoiceRow> {
    IntentTriple::all()
        .into_iter()
        .map(|t| {
            let exact = run_exact(t);
            let approx = run_approx(t);
            ChoiceRow {
                intent: t,
                exact_state: exact.chosen,
                exact_value: exact.chosen_value,
                approx_state: approx.chosen,
                approx_value: approx.chosen_value,
            }
        })
        .collect()
}

/// The expected table: `(exact state, exact value, approx state, approx value)`
/// per intent in binary order, states 0-based.
pub const EXPECTED_TABLE: [(usize, bool, usize, bool); 8] = [
    (1, false, 1, false), // 000
    (2, true, 2, true),   // 001
    (0, false, 0, false), // 010
    (2, true, 0, false),  // 011: the one row where the algorithms differ
    (0, true, 0, true),   // 100
    (2, true, 0, true),   // 101
    (0, true, 0, true),   // 110
    (2, true, 0, true),   // 111
];
