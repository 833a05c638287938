//! Lefebvre's real-valued choice function, ensembles of boolean-parameter
//! subjects with their marginals, the product (pure) ensembles, the golden
//! section construction, and seeded Monte Carlo estimation.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Absolute tolerance for exact arithmetic paths.
pub const EXACT_TOL: f64 = 1e-12;

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || v.is_nan() {
        return Err(Error::Domain {
            name,
            value: v,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

/// The readiness to choose the positive pole: `x1 + (1 - x1 - x2 + x1*x2) * x3`.
///
/// This is the multilinear extension of `(x3 -> x2) -> x1` and the unique
/// function satisfying the four choice axioms L1-L4.
pub fn f_real(x1: f64, x2: f64, x3: f64) -> Result<f64> {
    check_unit("x1", x1)?;
    check_unit("x2", x2)?;
    check_unit("x3", x3)?;
    Ok(x1 + (1.0 - x1 - x2 + x1 * x2) * x3)
}

/// One violated axiom instance found by [`check_choice_axioms`].
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub at: (f64, f64, f64),
    pub detail: String,
}

/// Grid report for the four choice axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceAxiomReport {
    pub grid_step: f64,
    pub passed: bool,
    pub violations: Vec<AxiomViolation>,
}

/// Checks a candidate choice function on a grid: L1 `f(0,0,t) = t`,
/// L2 `f(0,1,t) = 0`, L3 `f(1,u,v) = 1` exactly (tolerance 1e-12), and L4
/// (affinity in each argument) by three-point collinearity.
pub fn check_choice_axioms<F>(f: F, grid_step: f64) -> Result<ChoiceAxiomReport>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(Error::Domain {
            name: "grid_step",
            value: grid_step,
            domain: "(0, 1)",
        });
    }
    let steps = (1.0 / grid_step).round() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| {
            if k == steps {
                1.0
            } else {
                k as f64 * grid_step
            }
        })
        .collect();
    let mut violations = Vec::new();
    let mut push = |axiom: &'static str, at: (f64, f64, f64), got: f64, want: f64| {
        if (got - want).abs() > EXACT_TOL {
            violations.push(AxiomViolation {
                axiom,
                at,
                detail: format!("got {got}, want {want}"),
            });
        }
    };
    for &t in &grid {
        push("L1", (0.0, 0.0, t), f(0.0, 0.0, t), t);
        push("L2", (0.0, 1.0, t), f(0.0, 1.0, t), 0.0);
    }
    for &u in &grid {
        for &v in &grid {
            push("L3", (1.0, u, v), f(1.0, u, v), 1.0);
        }
    }
    // L4: with two coordinates fixed, all grid points must be collinear with
    // the first two. Cross-multiplied to avoid dividing by the step.
    let mut check_affine = |var: usize, a: f64, b: f64| {
        let eval = |t: f64| match var {
            0 => f(t, a, b),
            1 => f(a, t, b),
            _ => f(a, b, t),
        };
        let (t0, t1) = (grid[0], grid[1]);
        let (f0, f1) = (eval(t0), eval(t1));
        for &t in &grid[2..] {
            let lhs = (eval(t) - f0) * (t1 - t0);
            let rhs = (f1 - f0) * (t - t0);
            if (lhs - rhs).abs() > EXACT_TOL {
                let at = match var {
                    0 => (t, a, b),
                    1 => (a, t, b),
                    _ => (a, b, t),
                };
                violations.push(AxiomViolation {
                    axiom: "L4",
                    at,
                    detail: format!("not affine in argument {}", var + 1),
                });
            }
        }
    };
    for var in 0..3 {
        for &a in &grid {
            for &b in &grid {
                check_affine(var, a, b);
            }
        }
    }
    Ok(ChoiceAxiomReport {
        grid_step,
        passed: violations.is_empty(),
        violations,
    })
}

/// A distribution over the eight boolean triples `(n1, n2, n3)`, indexed by
/// the decimal value of the triple.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleCharacteristic {
    p: [f64; 8],
}

impl EnsembleCharacteristic {
    pub fn new(p: [f64; 8]) -> Result<Self> {
        if let Some(bad) = p.iter().find(|&&v| !(0.0..=1.0).contains(&v) || v.is_nan()) {
            return Err(Error::InvalidCharacteristic(format!(
                "probability {bad} outside [0, 1]"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidCharacteristic(format!(
                "probabilities must sum to 1, got {sum}"
            )));
        }
        Ok(Self { p })
    }

    pub fn probabilities(&self) -> &[f64; 8] {
        &self.p
    }

    /// Triples on which the distribution puts mass above the tolerance.
    pub fn support(&self) -> Vec<usize> {
        (0..8).filter(|&k| self.p[k] > EXACT_TOL).collect()
    }
}

/// `(n3 -> n2) -> n1` on one triple, `k` its decimal encoding.
pub fn subject_behavior(k: usize) -> bool {
    let (n1, n2, n3) = (k & 4 != 0, k & 2 != 0, k & 1 != 0);
    let imp = |a: bool, b: bool| !a || b;
    imp(imp(n3, n2), n1)
}

/// Ensemble averages of the three parameters and of the behavior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marginals {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub z: f64,
}

/// Marginals of a characteristic: `x_i` sums the mass where `n_i = 1` and
/// `z` the mass where the behavior is positive.
pub fn marginals(p: &EnsembleCharacteristic) -> Marginals {
    let p = p.probabilities();
    Marginals {
        x1: p[4] + p[5] + p[6] + p[7],
        x2: p[2] + p[3] + p[6] + p[7],
        x3: p[1] + p[3] + p[5] + p[7],
        z: p[1] + p[4] + p[5] + p[6] + p[7],
    }
}

/// The product characteristic of three independent boolean parameters with
/// the given means. Its `z`-marginal equals [`f_real`] of the means.
pub fn pl_characteristic(x1: f64, x2: f64, x3: f64) -> Result<EnsembleCharacteristic> {
    check_unit("x1", x1)?;
    check_unit("x2", x2)?;
    check_unit("x3", x3)?;
    let mut p = [0.0; 8];
    for (k, slot) in p.iter_mut().enumerate() {
        let factor = |x: f64, bit: bool| if bit { x } else { 1.0 - x };
        *slot = factor(x1, k & 4 != 0) * factor(x2, k & 2 != 0) * factor(x3, k & 1 != 0);
    }
    EnsembleCharacteristic::new(p)
}

/// Outcome of scanning every characteristic with fixed marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionScanReport {
    pub marginals: (f64, f64, f64),
    pub f_value: f64,
    /// Vertices of the feasible polytope that were enumerated.
    pub vertices: usize,
    pub samples: usize,
    /// Largest `|z - f|` found and the characteristic achieving it.
    pub worst_deviation: f64,
    pub worst: EnsembleCharacteristic,
    /// True when no characteristic with these marginals separates `z` from `f`.
    pub holds_for_all: bool,
}

/// Enumerates the polytope of characteristics with marginals
/// `(x1, x2, x3)` and reports the worst deviation of the ensemble average
/// `z` from `f_real`.
///
/// `z` is linear in the characteristic, so the extremes sit on vertices;
/// the polytope has four equality constraints and every vertex is a basic
/// solution over at most four support coordinates. Seeded random interior
/// points are thrown in as a cross-check.
pub fn equality_region_scan(
    x1: f64,
    x2: f64,
    x3: f64,
    samples: usize,
    seed: u64,
) -> Result<RegionScanReport> {
    let f = f_real(x1, x2, x3)?;
    let rows: [[f64; 8]; 4] = [
        [1.0; 8],
        [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
        [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0],
        [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
    ];
    let rhs = Vector4::new(1.0, x1, x2, x3);
    let mut vertices: Vec<[f64; 8]> = Vec::new();
    // All 4-column bases of the 4x8 constraint matrix.
    for c0 in 0..8 {
        for c1 in (c0 + 1)..8 {
            for c2 in (c1 + 1)..8 {
                for c3 in (c2 + 1)..8 {
                    let cols = [c0, c1, c2, c3];
                    let a = Matrix4::from_fn(|r, c| rows[r][cols[c]]);
                    let Some(sol) = a.lu().solve(&rhs) else {
                        continue;
                    };
                    if sol.iter().any(|&v| v < -1e-9 || !v.is_finite()) {
                        continue;
                    }
                    let mut p = [0.0f64; 8];
                    for (i, &c) in cols.iter().enumerate() {
                        p[c] = sol[i].max(0.0);
                    }
                    if vertices
                        .iter()
                        .all(|q| q.iter().zip(&p).any(|(a, b)| (a - b).abs() > 1e-9))
                    {
                        vertices.push(p);
                    }
                }
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::InfeasibleMarginals { x1, x2, x3 });
    }
    let deviation = |p: &[f64; 8]| {
        let z = p[1] + p[4] + p[5] + p[6] + p[7];
        (z - f).abs()
    };
    let mut worst = vertices[0];
    for v in &vertices {
        if deviation(v) > deviation(&worst) {
            worst = *v;
        }
    }
    // Random convex combinations of the vertices; they can only confirm the
    // vertex extreme.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut weights: Vec<f64> = (0..vertices.len())
            .map(|_| -rng.random::<f64>().ln())
            .collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let mut p = [0.0f64; 8];
        for (w, v) in weights.iter().zip(&vertices) {
            for k in 0..8 {
                p[k] += w * v[k];
            }
        }
        if deviation(&p) > deviation(&worst) {
            worst = p;
        }
    }
    let worst_deviation = deviation(&worst);
    // Rescale away the collected rounding before constructing the result.
    let total: f64 = worst.iter().sum();
    let mut normalized = worst;
    normalized.iter_mut().for_each(|v| *v /= total);
    Ok(RegionScanReport {
        marginals: (x1, x2, x3),
        f_value: f,
        vertices: vertices.len(),
        samples,
        worst_deviation,
        worst: EnsembleCharacteristic::new(normalized)?,
        holds_for_all: worst_deviation <= EXACT_TOL,
    })
}

/// How the third parameter is drawn once the first two are known, for
/// subjects pinned to the fixed-point condition `(n3 -> n2) -> n1 = n3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThirdParameterRule {
    /// Both solutions exist; take 1 with the stated probability.
    Either {
        probability_of_one: f64,
    },
    Fixed(bool),
}

/// The realist ensemble: the first two parameters are independent with mean
/// `1 - x3`, and the third follows the solution table of the fixed-point
/// condition.
#[derive(Debug, Clone, PartialEq)]
pub struct RealistEnsembleSpec {
    pub x3: f64,
    /// Rule for `n3` per `(n1, n2)` value, in the order (0,0), (0,1), (1,0), (1,1).
    pub conditional: [ThirdParameterRule; 4],
}

impl RealistEnsembleSpec {
    pub fn new(x3: f64) -> Result<Self> {
        if !(x3 > 0.0 && x3 < 1.0) {
            return Err(Error::Domain {
                name: "x3",
                value: x3,
                domain: "(0, 1)",
            });
        }
        Ok(Self {
            x3,
            conditional: [
                ThirdParameterRule::Either {
                    probability_of_one: x3,
                },
                ThirdParameterRule::Fixed(false),
                ThirdParameterRule::Fixed(true),
                ThirdParameterRule::Fixed(true),
            ],
        })
    }

    /// The induced characteristic; support sits inside the truth area
    /// `{000, 001, 010, 101, 111}` of the fixed-point condition.
    pub fn characteristic(&self) -> EnsembleCharacteristic {
        let x3 = self.x3;
        let mut p = [0.0; 8];
        p[0] = x3 * x3 * (1.0 - x3);
        p[1] = x3 * x3 * x3;
        p[2] = x3 * (1.0 - x3);
        p[5] = (1.0 - x3) * x3;
        p[7] = (1.0 - x3) * (1.0 - x3);
        EnsembleCharacteristic::new(p).expect("masses expand to a square of a sum")
    }
}

/// Builds the realist characteristic for the given `x3`.
pub fn golden_ensemble(x3: f64) -> Result<EnsembleCharacteristic> {
    Ok(RealistEnsembleSpec::new(x3)?.characteristic())
}

/// Triples satisfying the fixed-point condition `(n3 -> n2) -> n1 = n3`.
pub fn realist_truth_area() -> Vec<usize> {
    (0..8)
        .filter(|&k| subject_behavior(k) == (k & 1 != 0))
        .collect()
}

/// The root of `x^3 - 2x + 1` in `(0, 1)`, by bisection; equals
/// `(sqrt(5) - 1) / 2`.
pub fn golden_section_root() -> f64 {
    let g = |x: f64| x * x * x - 2.0 * x + 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    debug_assert!(g(lo) > 0.0 && g(hi) <= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

const SAMPLE_CHUNK: u64 = 1 << 16;

fn chunk_counts(p: &[f64; 8], seed: u64, chunk: u64, len: u64) -> [u64; 8] {
    // One independent generator per chunk keeps the aggregate identical
    // however the chunks are scheduled.
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(chunk + 1)));
    let mut counts = [0u64; 8];
    for _ in 0..len {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut picked = 7;
        for (k, &mass) in p.iter().enumerate() {
            acc += mass;
            if u < acc {
                picked = k;
                break;
            }
        }
        counts[picked] += 1;
    }
    counts
}

fn counts_to_marginals(counts: [u64; 8], n: u64) -> Marginals {
    let share = |ks: &[usize]| ks.iter().map(|&k| counts[k]).sum::<u64>() as f64 / n as f64;
    Marginals {
        x1: share(&[4, 5, 6, 7]),
        x2: share(&[2, 3, 6, 7]),
        x3: share(&[1, 3, 5, 7]),
        z: share(&[1, 4, 5, 6, 7]),
    }
}

fn sample_chunks(n: u64) -> Vec<(u64, u64)> {
    (0..n.div_ceil(SAMPLE_CHUNK))
        .map(|c| (c, SAMPLE_CHUNK.min(n - c * SAMPLE_CHUNK)))
        .collect()
}

/// Draws `n` triples from the characteristic with a seeded generator and
/// returns the empirical marginals. Sequential reference path; the parallel
/// variant aggregates the same per-chunk counts and is bit-identical.
pub fn sample_ensemble_seq(p: &EnsembleCharacteristic, n: u64, seed: u64) -> Marginals {
    assert!(n >= 1, "need at least one draw");
    let mut counts = [0u64; 8];
    for (chunk, len) in sample_chunks(n) {
        let c = chunk_counts(p.probabilities(), seed, chunk, len);
        for k in 0..8 {
            counts[k] += c[k];
        }
    }
    counts_to_marginals(counts, n)
}

/// Parallel implementation of [`sample_ensemble_seq`]; identical output.
#[cfg(feature = "parallel")]
pub fn sample_ensemble_par(p: &EnsembleCharacteristic, n: u64, seed: u64) -> Marginals {
    use rayon::prelude::*;
    assert!(n >= 1, "need at least one draw");
    let counts = sample_chunks(n)
        .into_par_iter()
        .map(|(chunk, len)| chunk_counts(p.probabilities(), seed, chunk, len))
        .reduce(
            || [0u64; 8],
            |mut acc, c| {
                for k in 0..8 {
                    acc[k] += c[k];
                }
                acc
            },
        );
    counts_to_marginals(counts, n)
}

/// Draws `n` triples from the characteristic; see [`sample_ensemble_seq`].
pub fn sample_ensemble(p: &EnsembleCharacteristic, n: u64, seed: u64) -> Marginals {
    #[cfg(feature = "parallel")]
    {
        sample_ensemble_par(p, n, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sample_ensemble_seq(p, n, seed)
    }
}
