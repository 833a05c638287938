//! Boolean specialization: truth tables, monotonicity, and implicative
//! normal forms `((P_k -> P_{k-1}) -> ...) -> P_0` with monotone components.
//!
//! Synthesis runs the dual decomposition over the boolean cube, specialized
//! to bitmask arithmetic so that tables up to the arity limit stay cheap.
//! The generic construction in [`mod@crate::decompose`] produces identical
//! components; the test suite pins that equivalence.

use crate::error::{Error, Result};

/// Hard cap on table size: `2^16` entries.
pub const DEFAULT_ARITY_LIMIT: usize = 16;

/// A boolean function given by its value on every point.
///
/// Bit `i` is the value at the point whose coordinates spell `i` in binary
/// with the first variable as the most significant bit, so index 0 is the
/// all-zeros point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<Self> {
        Self::with_limit(arity, bits, DEFAULT_ARITY_LIMIT)
    }

    pub fn with_limit(arity: usize, bits: Vec<bool>, limit: usize) -> Result<Self> {
        if arity > limit {
            return Err(Error::ArityLimit { arity, limit });
        }
        if bits.len() != 1 << arity {
            return Err(Error::LengthMismatch {
                expected: 1 << arity,
                got: bits.len(),
            });
        }
        Ok(Self { arity, bits })
    }

    /// Parses a bit string, leftmost character = value at the all-zeros point.
    pub fn from_bit_string(arity: usize, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidTable(format!(
                    "unexpected character `{other}`"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Self::new(arity, bits)
    }

    /// Constant function of the given arity.
    pub fn constant(arity: usize, value: bool) -> Self {
        Self {
            arity,
            bits: vec![value; 1 << arity],
        }
    }

    /// Projection onto variable `var` (1-based, `x1` most significant).
    pub fn projection(arity: usize, var: usize) -> Result<Self> {
        if var == 0 || var > arity {
            return Err(Error::IndexOutOfRange {
                index: var,
                len: arity,
            });
        }
        let bit = arity - var;
        Ok(Self {
            arity,
            bits: (0..1usize << arity).map(|m| m >> bit & 1 == 1).collect(),
        })
    }

    /// Table of function index `idx` (its bits in point order), little-endian
    /// in the point index.
    pub fn from_function_index(arity: usize, idx: u64) -> Result<Self> {
        if arity > 5 {
            return Err(Error::ArityLimit { arity, limit: 5 });
        }
        let bits = (0..1usize << arity).map(|m| idx >> m & 1 == 1).collect();
        Self::new(arity, bits)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn value_at_mask(&self, mask: usize) -> bool {
        self.bits[mask]
    }

    /// Value at an explicit point `(x1, ..., xn)`.
    pub fn value_at(&self, point: &[bool]) -> Result<bool> {
        Ok(self.bits[self.mask_of(point)?])
    }

    fn mask_of(&self, point: &[bool]) -> Result<usize> {
        if point.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        Ok(point.iter().fold(0, |acc, &b| acc << 1 | usize::from(b)))
    }

    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// True iff raising any single variable never lowers the value.
    pub fn is_monotone(&self) -> bool {
        let size = 1usize << self.arity;
        (0..size).all(|m| {
            (0..self.arity).all(|j| m >> j & 1 == 1 || self.bits[m] <= self.bits[m | 1 << j])
        })
    }
}

/// An implicative normal form: components outermost antecedent first, so
/// evaluation folds `acc <- acc -> P_i` from `P_{k-1}` down to `P_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicativeNormalForm {
    components: Vec<TruthTable>,
    arity: usize,
}

impl ImplicativeNormalForm {
    pub fn new(components: Vec<TruthTable>) -> Result<Self> {
        let arity = components
            .first()
            .ok_or_else(|| Error::InvalidTable("form needs at least one component".into()))?
            .arity();
        if components.iter().any(|c| c.arity() != arity) {
            return Err(Error::ArityMismatch);
        }
        Ok(Self { components, arity })
    }

    /// `P_k, ..., P_0`.
    pub fn components(&self) -> &[TruthTable] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of implications, `k`.
    pub fn implication_count(&self) -> usize {
        self.components.len() - 1
    }

    pub fn evaluate_mask(&self, mask: usize) -> bool {
        let mut acc = self.components[0].value_at_mask(mask);
        for p in &self.components[1..] {
            acc = !acc || p.value_at_mask(mask);
        }
        acc
    }

    /// Recomputes the whole table the form denotes.
    pub fn to_truth_table(&self) -> TruthTable {
        TruthTable {
            arity: self.arity,
            bits: (0..1usize << self.arity)
                .map(|m| self.evaluate_mask(m))
                .collect(),
        }
    }

    /// Human-readable chain like `((P2 -> P1) -> P0)`.
    pub fn chain_notation(&self) -> String {
        let k = self.components.len() - 1;
        let mut s = format!("P{k}");
        for i in (0..k).rev() {
            s = format!("({s} -> P{i})");
        }
        s
    }
}

/// Evaluates the form at an explicit point, left fold from the outermost
/// antecedent.
pub fn inf_evaluate(form: &ImplicativeNormalForm, point: &[bool]) -> Result<bool> {
    if point.len() != form.arity() {
        return Err(Error::LengthMismatch {
            expected: form.arity(),
            got: point.len(),
        });
    }
    let mask = point.iter().fold(0, |acc, &b| acc << 1 | usize::from(b));
    Ok(form.evaluate_mask(mask))
}

/// OR of `g` over all supersets of each mask.
fn superset_or(bits: &mut [bool], arity: usize) {
    for j in 0..arity {
        for m in 0..bits.len() {
            if m >> j & 1 == 0 {
                bits[m] = bits[m] || bits[m | 1 << j];
            }
        }
    }
}

/// AND of `g` over all supersets of each mask.
fn superset_and(bits: &mut [bool], arity: usize) {
    for j in 0..arity {
        for m in 0..bits.len() {
            if m >> j & 1 == 0 {
                bits[m] = bits[m] && bits[m | 1 << j];
            }
        }
    }
}

/// Synthesizes an implicative normal form for `f` with monotone components
/// and at most `arity` implications.
///
/// This is the dual-system decomposition over the cube: each round combines
/// by AND over up-sets inside the region that still has a defect (a point
/// valued 1 with a superset valued 0 above it), then rewrites the residual
/// through the dissociation witness. Trailing constant-true components are
/// trimmed, so monotone inputs come back as a single component.
pub fn inf_synthesize(f: &TruthTable) -> ImplicativeNormalForm {
    let n = f.arity();
    let size = 1usize << n;
    let mut residual = f.bits().to_vec();
    let mut components: Vec<Vec<bool>> = Vec::new();
    loop {
        // Defective edges: value drops when one variable is raised.
        let mut region: Vec<bool> = (0..size)
            .map(|m| (0..n).any(|j| m >> j & 1 == 0 && residual[m] && !residual[m | 1 << j]))
            .collect();
        if region.iter().all(|&r| !r) {
            components.push(residual);
            break;
        }
        superset_or(&mut region, n);
        let mut combined = residual.clone();
        superset_and(&mut combined, n);
        let phi: Vec<bool> = (0..size)
            .map(|m| if region[m] { combined[m] } else { residual[m] })
            .collect();
        // Witness: constantly true where the component already agrees,
        // false where the implication has to pull the value down.
        let next: Vec<bool> = (0..size).map(|m| phi[m] == residual[m]).collect();
        components.push(phi);
        residual = next;
        assert!(components.len() <= n + 1, "synthesis failed to converge");
    }
    while components.len() > 1 && components.last().unwrap().iter().all(|&b| b) {
        components.pop();
    }
    components.reverse();
    ImplicativeNormalForm::new(
        components
            .into_iter()
            .map(|bits| TruthTable { arity: n, bits })
            .collect(),
    )
    .expect("components share the arity")
}

/// Outcome of checking every function of one arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveSummary {
    pub arity: usize,
    pub functions_checked: u64,
    /// Function indices whose synthesis violated a requirement.
    pub failures: Vec<u64>,
}

fn check_function(arity: usize, idx: u64) -> bool {
    let f = TruthTable::from_function_index(arity, idx).expect("arity below limit");
    let form = inf_synthesize(&f);
    form.to_truth_table() == f
        && form.components().iter().all(TruthTable::is_monotone)
        && form.implication_count() <= arity
}

/// Checks every boolean function of arity `n <= 4`: the synthesized form
/// must reproduce the table, with monotone components and at most `n`
/// implications. Sequential reference path.
pub fn exhaustive_verify_seq(n: usize) -> Result<ExhaustiveSummary> {
    if n > 4 {
        return Err(Error::ArityLimit { arity: n, limit: 4 });
    }
    let total = 1u64 << (1 << n);
    let failures = (0..total).filter(|&idx| !check_function(n, idx)).collect();
    Ok(ExhaustiveSummary {
        arity: n,
        functions_checked: total,
        failures,
    })
}

/// Parallel implementation of [`exhaustive_verify_seq`]; identical output.
#[cfg(feature = "parallel")]
pub fn exhaustive_verify_par(n: usize) -> Result<ExhaustiveSummary> {
    use rayon::prelude::*;
    if n > 4 {
        return Err(Error::ArityLimit { arity: n, limit: 4 });
    }
    let total = 1u64 << (1 << n);
    let mut failures: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&idx| !check_function(n, idx))
        .collect();
    failures.sort_unstable();
    Ok(ExhaustiveSummary {
        arity: n,
        functions_checked: total,
        failures,
    })
}

/// Checks every boolean function of arity `n <= 4`; see
/// [`exhaustive_verify_seq`].
pub fn exhaustive_verify(n: usize) -> Result<ExhaustiveSummary> {
    #[cfg(feature = "parallel")]
    {
        exhaustive_verify_par(n)
    }
    #[cfg(not(feature = "parallel"))]
    {
        exhaustive_verify_seq(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn imp(a: bool, b: bool) -> bool {
        !a || b
    }

    #[test]
    fn standard_monotone_functions() {
        let and = TruthTable::new(2, vec![false, false, false, true]).unwrap();
        let or = TruthTable::new(2, vec![false, true, true, true]).unwrap();
        assert!(and.is_monotone());
        assert!(or.is_monotone());
        assert!(TruthTable::constant(3, false).is_monotone());
        assert!(TruthTable::constant(3, true).is_monotone());
        for v in 1..=3 {
            assert!(TruthTable::projection(3, v).unwrap().is_monotone());
        }
        let not = TruthTable::new(1, vec![true, false]).unwrap();
        assert!(!not.is_monotone());
    }

    /// `(x3 -> x2) -> x1` over the standard point order.
    fn nested_implication_table() -> TruthTable {
        let bits: Vec<bool> = (0..8usize)
            .map(|m| {
                let (x1, x2, x3) = (m & 4 != 0, m & 2 != 0, m & 1 != 0);
                imp(imp(x3, x2), x1)
            })
            .collect();
        TruthTable::new(3, bits).unwrap()
    }

    #[test]
    fn nested_implication_is_not_monotone_and_has_known_column() {
        let t = nested_implication_table();
        assert!(!t.is_monotone());
        assert_eq!(t.to_bit_string(), "01001111");
    }

    #[test]
    fn constant_true_synthesizes_to_a_single_component() {
        for n in 0..=3 {
            let form = inf_synthesize(&TruthTable::constant(n, true));
            assert_eq!(form.components().len(), 1);
            assert!(form.components()[0].bits().iter().all(|&b| b));
        }
    }

    #[test]
    fn monotone_inputs_come_back_unchanged() {
        let or = TruthTable::new(2, vec![false, true, true, true]).unwrap();
        let form = inf_synthesize(&or);
        assert_eq!(form.components(), &[or]);
    }

    #[test]
    fn synthesis_reproduces_the_nested_implication_column() {
        let t = nested_implication_table();
        let form = inf_synthesize(&t);
        assert_eq!(form.to_truth_table(), t);
        assert!(form.components().iter().all(TruthTable::is_monotone));
        assert!(form.implication_count() <= 3);
    }

    #[test]
    fn xor_has_a_short_monotone_form() {
        use itertools::Itertools;
        let xor = TruthTable::new(2, vec![false, true, true, false]).unwrap();
        // Independent existence check before trusting synthesis: brute-force
        // all chains of length <= 3 over the monotone two-variable functions.
        let monotone: Vec<TruthTable> = (0..16u64)
            .map(|i| TruthTable::from_function_index(2, i).unwrap())
            .filter(TruthTable::is_monotone)
            .collect();
        assert_eq!(monotone.len(), 6);
        let mut found = false;
        'outer: for len in 1..=3usize {
            for pick in std::iter::repeat_n(0..monotone.len(), len).multi_cartesian_product() {
                let comps: Vec<TruthTable> = pick.iter().map(|&i| monotone[i].clone()).collect();
                let form = ImplicativeNormalForm::new(comps).unwrap();
                if form.to_truth_table() == xor {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found, "no monotone chain evaluates to xor");

        let form = inf_synthesize(&xor);
        assert!(form.implication_count() <= 2);
        assert!(form.components().iter().all(TruthTable::is_monotone));
        assert_eq!(form.to_truth_table(), xor);
    }

    #[test]
    fn evaluation_convention_examples() {
        // [P1 = x2, P0 = x1] at (1, 0): (0 -> 1) = 1.
        let form = ImplicativeNormalForm::new(vec![
            TruthTable::projection(2, 2).unwrap(),
            TruthTable::projection(2, 1).unwrap(),
        ])
        .unwrap();
        assert!(inf_evaluate(&form, &[true, false]).unwrap());

        // [x3, x2, x1] reproduces (x3 -> x2) -> x1 at every point.
        let form = ImplicativeNormalForm::new(vec![
            TruthTable::projection(3, 3).unwrap(),
            TruthTable::projection(3, 2).unwrap(),
            TruthTable::projection(3, 1).unwrap(),
        ])
        .unwrap();
        assert_eq!(form.to_truth_table(), nested_implication_table());
        assert!(!inf_evaluate(&form, &[false, true, true]).unwrap());

        let err = inf_evaluate(&form, &[true, false]).unwrap_err();
        assert_eq!(
            err,
            crate::error::Error::LengthMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn exhaustive_small_arities_have_no_failures() {
        for n in 0..=3 {
            let summary = exhaustive_verify_seq(n).unwrap();
            assert_eq!(summary.functions_checked, 1 << (1 << n));
            assert!(
                summary.failures.is_empty(),
                "arity {n}: {:?}",
                summary.failures
            );
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree() {
        for n in 0..=3 {
            assert_eq!(
                exhaustive_verify_par(n).unwrap(),
                exhaustive_verify_seq(n).unwrap()
            );
        }
    }

    #[test]
    fn synthesis_matches_the_generic_decomposition() {
        use crate::algebra::OperationSystem;
        use crate::decompose::{decompose, Strategy};
        use crate::order::{FinitePoset, PosetMap};
        use std::sync::Arc;

        let cube = Arc::new(FinitePoset::boolean_cube(3).unwrap());
        let sys = OperationSystem::boolean_dual();
        for idx in 0..256u64 {
            let f = TruthTable::from_function_index(3, idx).unwrap();
            let psi = PosetMap::new(
                cube.clone(),
                sys.codomain().clone(),
                f.bits().iter().map(|&b| usize::from(b)).collect(),
            )
            .unwrap();
            let (generic, report) = decompose(&psi, &sys, Strategy::DownsetCombine, None).unwrap();
            assert!(report.verified, "f={idx}: {:?}", report.failures);
            let fast = inf_synthesize(&f);
            // The fast path trims trailing constant-true components; the
            // generic form keeps them. Compare after the same trim.
            let mut generic_components: Vec<Vec<bool>> = generic
                .components()
                .iter()
                .map(|c| c.values().iter().map(|&v| v == 1).collect())
                .collect();
            while generic_components.len() > 1
                && generic_components.last().unwrap().iter().all(|&b| b)
            {
                generic_components.pop();
            }
            generic_components.reverse();
            let fast_components: Vec<Vec<bool>> = fast
                .components()
                .iter()
                .map(|c| c.bits().to_vec())
                .collect();
            assert_eq!(fast_components, generic_components, "f={idx}");
        }
    }

    proptest! {
        #[test]
        fn synthesis_round_trips(arity in 0usize..=4, idx in 0u64..) {
            let idx = idx & ((1u128 << (1 << arity)) - 1) as u64;
            let f = TruthTable::from_function_index(arity, idx).unwrap();
            let form = inf_synthesize(&f);
            prop_assert_eq!(form.to_truth_table(), f);
            prop_assert!(form.implication_count() <= arity);
            for c in form.components() {
                prop_assert!(c.is_monotone());
            }
        }
    }
}
