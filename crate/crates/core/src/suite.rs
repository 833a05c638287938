//! Seeded randomized verification suites: decomposition round-trips over
//! random posets and random axiom-passing operation systems, and the cube
//! embedding check over random posets.
//!
//! Instances derive their own generator from the master seed and the
//! instance index, so results are identical however the work is scheduled.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_axioms, OperationSystem, Polarity, SystemTag};
use crate::decompose::{decompose, pad_to_universal, verify_form, Strategy};
use crate::error::Result;
use crate::order::{FinitePoset, PosetMap};

fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5851_f42d_4c95_7f2du64.wrapping_mul(index + 1))
}

/// A random poset on `2..=max_elems` elements: edges are drawn between
/// index-ordered pairs, so the closure is always acyclic.
pub fn random_poset(rng: &mut ChaCha8Rng, max_elems: usize) -> FinitePoset {
    let n = rng.random_range(2..=max_elems);
    let density: f64 = rng.random_range(0.1..0.6);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    FinitePoset::from_pairs(n, &pairs).expect("upward edges cannot cycle")
}

/// A random operation system over a chain codomain that satisfies the
/// axiom systems of both combining flavors by construction:
///
/// - the null operation is constantly the bottom (top for dual),
/// - each dissociation row fixes the null column to the identity and covers
///   every value the reversibility axiom demands,
/// - the binary combine is a monotone table dominating both arguments that
///   keeps the bottom idempotent,
/// - the lattice combine is the chain join (meet for dual).
pub fn random_chain_system(
    rng: &mut ChaCha8Rng,
    codomain: Arc<FinitePoset>,
    polarity: Polarity,
) -> OperationSystem {
    let n = codomain.len();
    // Build primal tables against chain ranks, then conjugate through the
    // order reversal for dual systems.
    let mut dissociate = vec![0usize; n * n];
    for row in 0..n {
        dissociate[row * n] = row;
        let mut slots: Vec<usize> = (1..n).collect();
        for i in (1..slots.len()).rev() {
            slots.swap(i, rng.random_range(0..=i));
        }
        for (value, &slot) in (0..row).zip(slots.iter()) {
            dissociate[row * n + slot] = value;
        }
        for &slot in slots.iter().skip(row) {
            dissociate[row * n + slot] = rng.random_range(0..n);
        }
    }
    let mut combine = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let mut low = a.max(b);
            if a > 0 {
                low = low.max(combine[(a - 1) * n + b]);
            }
            if b > 0 {
                low = low.max(combine[a * n + b - 1]);
            }
            combine[a * n + b] = if a == 0 && b == 0 {
                0
            } else {
                rng.random_range(low..n)
            };
        }
    }
    let null_op = vec![0usize; n];
    let (dissociate, combine, null_op) = match polarity {
        Polarity::Primal => (dissociate, combine, null_op),
        Polarity::Dual => {
            let eta = |i: usize| n - 1 - i;
            let conj2 = |t: &[usize]| -> Vec<usize> {
                (0..n * n)
                    .map(|i| eta(t[eta(i / n) * n + eta(i % n)]))
                    .collect()
            };
            let conj1 = |t: &[usize]| -> Vec<usize> { (0..n).map(|i| eta(t[eta(i)])).collect() };
            (conj2(&dissociate), conj2(&combine), conj1(&null_op))
        }
    };
    OperationSystem::new(codomain, polarity, dissociate, Some(combine), true, null_op)
        .expect("generated tables are total")
}

/// What one decomposition instance must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFailure {
    pub index: u64,
    pub reason: String,
}

/// Aggregate outcome of a randomized batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub instances: u64,
    pub failures: Vec<InstanceFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn run_decomposition_instance(seed: u64, index: u64) -> Option<InstanceFailure> {
    let fail = |reason: String| Some(InstanceFailure { index, reason });
    let mut rng = instance_rng(seed, index);
    let domain = Arc::new(random_poset(&mut rng, 7));
    let codomain_len = if rng.random_bool(0.5) {
        2
    } else {
        rng.random_range(3..=5)
    };
    let names: Vec<String> = (0..codomain_len).map(|i| format!("l{i}")).collect();
    let codomain = Arc::new(FinitePoset::chain(&names).expect("chain"));
    let polarity = if rng.random_bool(0.5) {
        Polarity::Primal
    } else {
        Polarity::Dual
    };
    let sys = Arc::new(random_chain_system(&mut rng, codomain.clone(), polarity));
    let tags = match polarity {
        Polarity::Primal => [SystemTag::A, SystemTag::B],
        Polarity::Dual => [SystemTag::ADual, SystemTag::BDual],
    };
    for tag in tags {
        match check_axioms(&sys, tag, None) {
            Ok(report) if report.passed => {}
            Ok(report) => {
                return fail(format!(
                    "generated system fails {tag}: {:?}",
                    report.violations[0]
                ))
            }
            Err(e) => return fail(format!("axiom check errored: {e}")),
        }
    }
    let values: Vec<usize> = (0..domain.len())
        .map(|_| rng.random_range(0..codomain_len))
        .collect();
    let psi = match PosetMap::new(domain.clone(), codomain.clone(), values) {
        Ok(m) => m,
        Err(e) => return fail(format!("map construction: {e}")),
    };
    let strategy = Strategy::from_tag((index % 3) as u8 + 1).unwrap();
    let (form, report) = match decompose(&psi, &sys, strategy, None) {
        Ok(r) => r,
        Err(e) => return fail(format!("strategy {}: {e}", strategy.tag())),
    };
    if !report.verified {
        return fail(format!(
            "strategy {} verification: {:?}",
            strategy.tag(),
            report.failures
        ));
    }
    if report.dissociation_count > report.max_chain_length {
        return fail(format!(
            "strategy {}: {} dissociations over bound {}",
            strategy.tag(),
            report.dissociation_count,
            report.max_chain_length
        ));
    }
    if strategy != Strategy::LayerRanked {
        let shrinks = report.inversion_regions.windows(2).all(|w| w[1] < w[0]);
        if !shrinks {
            return fail(format!(
                "strategy {}: inversion regions {:?} do not shrink",
                strategy.tag(),
                report.inversion_regions
            ));
        }
        if *report.residual_inversions.last().unwrap() != 0 {
            return fail("construction stopped before the residual was monotone".into());
        }
        // The padded variant must verify too, support chain included.
        match pad_to_universal(&form, report.max_chain_length) {
            Ok(padded) => {
                let padded_report = verify_form(&padded, &psi);
                if !padded_report.verified {
                    return fail(format!("padded form: {:?}", padded_report.failures));
                }
            }
            Err(e) => return fail(format!("padding: {e}")),
        }
    }
    None
}

/// Runs `instances` random decomposition round-trips. Sequential path.
pub fn decomposition_suite_seq(instances: u64, seed: u64) -> SuiteReport {
    let failures = (0..instances)
        .filter_map(|i| run_decomposition_instance(seed, i))
        .collect();
    SuiteReport {
        instances,
        failures,
    }
}

/// Parallel implementation of [`decomposition_suite_seq`]; identical output.
#[cfg(feature = "parallel")]
pub fn decomposition_suite_par(instances: u64, seed: u64) -> SuiteReport {
    use rayon::prelude::*;
    let mut failures: Vec<InstanceFailure> = (0..instances)
        .into_par_iter()
        .filter_map(|i| run_decomposition_instance(seed, i))
        .collect();
    failures.sort_by_key(|f| f.index);
    SuiteReport {
        instances,
        failures,
    }
}

/// Runs `instances` random decomposition round-trips; see
/// [`decomposition_suite_seq`].
pub fn decomposition_suite(instances: u64, seed: u64) -> SuiteReport {
    #[cfg(feature = "parallel")]
    {
        decomposition_suite_par(instances, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        decomposition_suite_seq(instances, seed)
    }
}

fn run_embedding_instance(seed: u64, index: u64, max_elems: usize) -> Option<InstanceFailure> {
    let mut rng = instance_rng(seed, index.wrapping_add(0x0e5d));
    let poset = random_poset(&mut rng, max_elems);
    let vecs = poset.embed_into_cube();
    for a in 0..poset.len() {
        for b in 0..poset.len() {
            let below = vecs[a].iter().zip(&vecs[b]).all(|(&x, &y)| !x || y);
            if below != poset.le(a, b) {
                return Some(InstanceFailure {
                    index,
                    reason: format!(
                        "embedding disagrees with the order at (`{}`, `{}`)",
                        poset.name(a),
                        poset.name(b)
                    ),
                });
            }
        }
    }
    None
}

/// Checks the cube embedding on random posets of up to `max_elems` elements.
pub fn embedding_suite(instances: u64, max_elems: usize, seed: u64) -> SuiteReport {
    let failures = (0..instances)
        .filter_map(|i| run_embedding_instance(seed, i, max_elems))
        .collect();
    SuiteReport {
        instances,
        failures,
    }
}

/// Convenience wrapper returning an error message when a batch fails.
pub fn expect_clean(report: &SuiteReport) -> Result<()> {
    if report.passed() {
        Ok(())
    } else {
        let first = &report.failures[0];
        Err(crate::error::Error::InvalidTable(format!(
            "{} of {} instances failed; first: #{}: {}",
            report.failures.len(),
            report.instances,
            first.index,
            first.reason
        )))
    }
}
