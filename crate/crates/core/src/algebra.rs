//! Ordered operation systems over a finite codomain: dissociation, combining
//! and null operations, exhaustive axiom checking for the systems `A`, `B`
//! and their duals, dual isomorphisms, and the search over all boolean
//! interpretations of the dissociation operation.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::order::FinitePoset;

/// Whether a system is read against the codomain order or its reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Primal,
    Dual,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Primal => "primal",
            Polarity::Dual => "dual",
        })
    }
}

/// The four axiom systems a model can be checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemTag {
    A,
    B,
    ADual,
    BDual,
}

impl SystemTag {
    pub fn polarity(self) -> Polarity {
        match self {
            SystemTag::A | SystemTag::B => Polarity::Primal,
            SystemTag::ADual | SystemTag::BDual => Polarity::Dual,
        }
    }

    /// Parses `A`, `B`, `A*`, `B*`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" => Some(SystemTag::A),
            "B" => Some(SystemTag::B),
            "A*" => Some(SystemTag::ADual),
            "B*" => Some(SystemTag::BDual),
            _ => None,
        }
    }
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemTag::A => "A",
            SystemTag::B => "B",
            SystemTag::ADual => "A*",
            SystemTag::BDual => "B*",
        })
    }
}

/// Default cap on `|L|` for the subset enumeration of the combining axiom.
pub const DEFAULT_SUBSET_LIMIT: usize = 12;

/// Operation tables over a finite codomain poset.
///
/// `dissociate` is the binary dissociation table, `null_op` the unary null
/// table. Combining is available either as an explicit binary table or, when
/// `combine_join` is set, as the pairwise lattice join (primal) or meet
/// (dual) of the codomain, which the constructor verifies to exist.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationSystem {
    codomain: Arc<FinitePoset>,
    polarity: Polarity,
    dissociate: Vec<usize>,
    combine_binary: Option<Vec<usize>>,
    combine_join: bool,
    combine_table: Option<Vec<usize>>,
    null_op: Vec<usize>,
}

impl OperationSystem {
    pub fn new(
        codomain: Arc<FinitePoset>,
        polarity: Polarity,
        dissociate: Vec<usize>,
        combine_binary: Option<Vec<usize>>,
        combine_join: bool,
        null_op: Vec<usize>,
    ) -> Result<Self> {
        let n = codomain.len();
        let check_table = |t: &[usize], arity: usize, what: &str| -> Result<()> {
            let want = n.pow(arity as u32);
            if t.len() != want {
                return Err(Error::InvalidTable(format!(
                    "{what} table has {} entries, expected {want}",
                    t.len()
                )));
            }
            if t.iter().any(|&v| v >= n) {
                return Err(Error::InvalidTable(format!(
                    "{what} table value out of range"
                )));
            }
            Ok(())
        };
        check_table(&dissociate, 2, "dissociate")?;
        check_table(&null_op, 1, "null")?;
        if let Some(cb) = &combine_binary {
            check_table(cb, 2, "combine")?;
        }
        let combine_table = if combine_join {
            Some(Self::bound_table(&codomain, polarity)?)
        } else {
            None
        };
        Ok(Self {
            codomain,
            polarity,
            dissociate,
            combine_binary,
            combine_join,
            combine_table,
            null_op,
        })
    }

    /// Pairwise least upper bounds (primal) or greatest lower bounds (dual).
    fn bound_table(codomain: &FinitePoset, polarity: Polarity) -> Result<Vec<usize>> {
        let n = codomain.len();
        let above = |x: usize, y: usize| match polarity {
            Polarity::Primal => codomain.le(y, x),
            Polarity::Dual => codomain.le(x, y),
        };
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let bounds: Vec<usize> = (0..n).filter(|&u| above(u, a) && above(u, b)).collect();
                let lub = bounds
                    .iter()
                    .copied()
                    .find(|&u| bounds.iter().all(|&v| above(v, u)));
                match lub {
                    Some(u) => table[a * n + b] = u,
                    None => {
                        return Err(Error::InvalidTable(format!(
                            "codomain has no pairwise {} for `{}`, `{}`",
                            match polarity {
                                Polarity::Primal => "join",
                                Polarity::Dual => "meet",
                            },
                            codomain.name(a),
                            codomain.name(b)
                        )))
                    }
                }
            }
        }
        Ok(table)
    }

    /// The canonical boolean primal system: `dissociate(a,b) = a AND NOT b`,
    /// combining by OR, null constantly 0.
    pub fn boolean_primal() -> Arc<Self> {
        let l = FinitePoset::bool_chain();
        Arc::new(
            Self::new(
                l,
                Polarity::Primal,
                vec![0, 0, 1, 0],       // a & !b over (a,b) in row-major order
                Some(vec![0, 1, 1, 1]), // or
                true,
                vec![0, 0],
            )
            .expect("canonical tables are valid"),
        )
    }

    /// The canonical boolean dual system: `dissociate(a,b) = b -> a`,
    /// combining by AND, null constantly 1.
    pub fn boolean_dual() -> Arc<Self> {
        let l = FinitePoset::bool_chain();
        Arc::new(
            Self::new(
                l,
                Polarity::Dual,
                vec![1, 0, 1, 1],       // b -> a
                Some(vec![0, 0, 0, 1]), // and
                true,
                vec![1, 1],
            )
            .expect("canonical tables are valid"),
        )
    }

    pub fn codomain(&self) -> &Arc<FinitePoset> {
        &self.codomain
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn has_combine_binary(&self) -> bool {
        self.combine_binary.is_some()
    }

    pub fn has_combine_join(&self) -> bool {
        self.combine_join
    }

    pub fn dissociate(&self, a: usize, b: usize) -> usize {
        self.dissociate[a * self.codomain.len() + b]
    }

    pub fn dissociate_table(&self) -> &[usize] {
        &self.dissociate
    }

    pub fn null(&self, l: usize) -> usize {
        self.null_op[l]
    }

    pub fn null_table(&self) -> &[usize] {
        &self.null_op
    }

    pub fn combine_binary(&self, a: usize, b: usize) -> Option<usize> {
        self.combine_binary
            .as_ref()
            .map(|t| t[a * self.codomain.len() + b])
    }

    pub fn combine_binary_table(&self) -> Option<&[usize]> {
        self.combine_binary.as_deref()
    }

    /// Join (primal) / meet (dual) from the cached lattice table.
    pub fn combine_pairwise(&self, a: usize, b: usize) -> Option<usize> {
        self.combine_table
            .as_ref()
            .map(|t| t[a * self.codomain.len() + b])
    }

    /// If the null operation is constant, its value.
    pub fn constant_null(&self) -> Option<usize> {
        let v = self.null_op[0];
        self.null_op.iter().all(|&u| u == v).then_some(v)
    }

    /// `a <= b` in the order the system is read against (reversed for dual).
    pub fn le(&self, a: usize, b: usize) -> bool {
        match self.polarity {
            Polarity::Primal => self.codomain.le(a, b),
            Polarity::Dual => self.codomain.le(b, a),
        }
    }
}

/// A single axiom violation: the axiom label and the offending tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

/// Result of an exhaustive axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub system: SystemTag,
    pub passed: bool,
    pub violations: Vec<Violation>,
    /// Axioms that hold for every finite model and are not enumerated.
    pub notes: Vec<String>,
}

fn star(tag: SystemTag) -> &'static str {
    match tag.polarity() {
        Polarity::Primal => "",
        Polarity::Dual => "*",
    }
}

/// Exhaustively checks the operation system against one axiom system.
///
/// The combining axiom of `A`/`A*` ranges over all nonempty subset pairs
/// `L' ⊆ L''` of the codomain and is refused above `subset_limit` elements.
/// The chain-condition axiom holds for every finite poset and is reported as
/// a note. Dissociation axioms follow the operational convention: the null
/// argument and the existential witness sit in the second position, with the
/// comparisons mirrored for dual systems.
pub fn check_axioms(
    sys: &OperationSystem,
    tag: SystemTag,
    subset_limit: Option<usize>,
) -> Result<AxiomReport> {
    if tag.polarity() != sys.polarity() {
        return Err(Error::AxiomPrecondition {
            system: tag.to_string(),
            detail: format!("system polarity is {}", sys.polarity()),
        });
    }
    let n = sys.codomain().len();
    let s = star(tag);
    let name = |i: usize| sys.codomain().name(i).to_string();
    let mut violations = Vec::new();
    let notes = vec![format!(
        "{tag}1 (no infinite {} chains) holds for every finite poset",
        match tag.polarity() {
            Polarity::Primal => "decreasing",
            Polarity::Dual => "increasing",
        }
    )];

    match tag {
        SystemTag::A | SystemTag::ADual => {
            if !sys.has_combine_join() {
                return Err(Error::AxiomPrecondition {
                    system: tag.to_string(),
                    detail: "combining over subsets requires the lattice flag".into(),
                });
            }
            let limit = subset_limit.unwrap_or(DEFAULT_SUBSET_LIMIT);
            if n > limit {
                return Err(Error::SubsetExplosion { size: n, limit });
            }
            // Fold of the cached pairwise bound over a mask, lowest index first.
            let mut bound = vec![0usize; 1 << n];
            for mask in 1usize..1 << n {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                bound[mask] = if rest == 0 {
                    low
                } else {
                    sys.combine_pairwise(bound[rest], low).unwrap()
                };
            }
            let subset_name = |mask: usize| {
                (0..n)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(name)
                    .collect::<Vec<_>>()
                    .join(",")
            };
            for mask in 1usize..1 << n {
                for x in 0..n {
                    if mask >> x & 1 == 1 && !sys.le(x, bound[mask]) {
                        violations.push(Violation {
                            axiom: format!("{tag}2"),
                            detail: format!(
                                "`{}` not under combine({{{}}}) = `{}`",
                                name(x),
                                subset_name(mask),
                                name(bound[mask])
                            ),
                        });
                    }
                }
                // Supersets: mask | s for submasks s of the complement.
                let comp = !mask & ((1 << n) - 1);
                let mut si = comp;
                loop {
                    let sup = mask | si;
                    if !sys.le(bound[mask], bound[sup]) {
                        violations.push(Violation {
                            axiom: format!("{tag}2"),
                            detail: format!(
                                "combine({{{}}}) = `{}` not under combine({{{}}}) = `{}`",
                                subset_name(mask),
                                name(bound[mask]),
                                subset_name(sup),
                                name(bound[sup])
                            ),
                        });
                    }
                    if si == 0 {
                        break;
                    }
                    si = (si - 1) & comp;
                }
            }
        }
        SystemTag::B | SystemTag::BDual => {
            let Some(table) = sys.combine_binary_table() else {
                return Err(Error::AxiomPrecondition {
                    system: tag.to_string(),
                    detail: "no binary combine table".into(),
                });
            };
            for a in 0..n {
                for b in 0..n {
                    let c = table[a * n + b];
                    if !sys.le(a, c) || !sys.le(b, c) {
                        violations.push(Violation {
                            axiom: format!("B{s}2"),
                            detail: format!(
                                "combine(`{}`, `{}`) = `{}` does not dominate both",
                                name(a),
                                name(b),
                                name(c)
                            ),
                        });
                    }
                }
            }
        }
    }

    let base = match tag {
        SystemTag::A | SystemTag::ADual => "A",
        SystemTag::B | SystemTag::BDual => "B",
    };
    // Axiom 3: dissociating the null image is the identity; null is monotone.
    for l in 0..n {
        let o = sys.null(l);
        if sys.dissociate(l, o) != l {
            violations.push(Violation {
                axiom: format!("{base}{s}3"),
                detail: format!(
                    "dissociate(`{}`, null = `{}`) = `{}` != `{}`",
                    name(l),
                    name(o),
                    name(sys.dissociate(l, o)),
                    name(l)
                ),
            });
        }
        for l2 in 0..n {
            if sys.le(l, l2) && !sys.le(sys.null(l), sys.null(l2)) {
                violations.push(Violation {
                    axiom: format!("{base}{s}3"),
                    detail: format!("null not monotone on `{}` <= `{}`", name(l), name(l2)),
                });
            }
        }
    }
    // Axiom 4: reversibility witness above the null image.
    for l in 0..n {
        for l2 in 0..n {
            if sys.le(l, l2) {
                let found = (0..n).any(|w| sys.dissociate(l2, w) == l && sys.le(sys.null(l2), w));
                if !found {
                    violations.push(Violation {
                        axiom: format!("{base}{s}4"),
                        detail: format!(
                            "no witness w with dissociate(`{}`, w) = `{}` above null",
                            name(l2),
                            name(l)
                        ),
                    });
                }
            }
        }
    }

    Ok(AxiomReport {
        system: tag,
        passed: violations.is_empty(),
        violations,
        notes,
    })
}

/// Finds the lexicographically first order-reversing bijection of the poset
/// onto itself under the canonical enumeration, if one exists.
pub fn find_dual_isomorphism(l: &FinitePoset) -> Option<Vec<usize>> {
    let n = l.len();
    (0..n)
        .permutations(n)
        .find(|eta| (0..n).all(|a| (0..n).all(|b| l.le(a, b) == l.le(eta[b], eta[a]))))
}

fn validate_dual_iso(l: &FinitePoset, eta: &[usize]) -> Result<Vec<usize>> {
    let n = l.len();
    if eta.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: eta.len(),
        });
    }
    let mut inverse = vec![usize::MAX; n];
    for (i, &v) in eta.iter().enumerate() {
        if v >= n || inverse[v] != usize::MAX {
            return Err(Error::NotDualIsomorphism("not a bijection".into()));
        }
        inverse[v] = i;
    }
    for a in 0..n {
        for b in 0..n {
            if l.le(a, b) != l.le(eta[b], eta[a]) {
                return Err(Error::NotDualIsomorphism(format!(
                    "order not reversed at (`{}`, `{}`)",
                    l.name(a),
                    l.name(b)
                )));
            }
        }
    }
    Ok(inverse)
}

/// Checks that every dual operation is the eta-conjugate of its primal
/// counterpart: unary `op*(l) = eta_inv(op(eta(l)))`, binary argumentwise.
///
/// Both systems must live over the same codomain and `eta` must be a dual
/// isomorphism. Comparing a binary table against a missing one fails with
/// [`Error::ArityMismatch`].
pub fn check_dual_identity(
    primal: &OperationSystem,
    dual: &OperationSystem,
    eta: &[usize],
) -> Result<bool> {
    if primal.codomain() != dual.codomain() {
        return Err(Error::PosetMismatch(
            "systems live over different codomains".into(),
        ));
    }
    let inv = validate_dual_iso(primal.codomain(), eta)?;
    let n = primal.codomain().len();
    let conj2 = |f: &dyn Fn(usize, usize) -> usize, a: usize, b: usize| inv[f(eta[a], eta[b])];
    for l in 0..n {
        if dual.null(l) != inv[primal.null(eta[l])] {
            return Ok(false);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if dual.dissociate(a, b) != conj2(&|x, y| primal.dissociate(x, y), a, b) {
                return Ok(false);
            }
        }
    }
    match (
        primal.combine_binary_table().is_some(),
        dual.combine_binary_table().is_some(),
    ) {
        (true, true) => {
            for a in 0..n {
                for b in 0..n {
                    if dual.combine_binary(a, b).unwrap()
                        != conj2(&|x, y| primal.combine_binary(x, y).unwrap(), a, b)
                    {
                        return Ok(false);
                    }
                }
            }
        }
        (false, false) => {}
        _ => return Err(Error::ArityMismatch),
    }
    if primal.has_combine_join() != dual.has_combine_join() {
        return Err(Error::ArityMismatch);
    }
    if primal.has_combine_join() {
        for a in 0..n {
            for b in 0..n {
                if dual.combine_pairwise(a, b).unwrap()
                    != conj2(&|x, y| primal.combine_pairwise(x, y).unwrap(), a, b)
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One candidate boolean reading of the dissociation and null operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BooleanInterpretation {
    /// `dissociate[2a + b]` for boolean arguments.
    pub dissociate: [bool; 4],
    /// `null[l]`.
    pub null: [bool; 2],
}

impl BooleanInterpretation {
    pub fn dissociate_eval(&self, a: bool, b: bool) -> bool {
        self.dissociate[2 * usize::from(a) + usize::from(b)]
    }

    /// `a AND NOT b`.
    pub const AND_NOT: Self = Self {
        dissociate: [false, false, true, false],
        null: [false, false],
    };
    /// `a XOR b`.
    pub const XOR: Self = Self {
        dissociate: [false, true, true, false],
        null: [false, false],
    };
    /// `b -> a`.
    pub const IMPLIED_BY: Self = Self {
        dissociate: [true, false, true, true],
        null: [true, true],
    };
    /// `a <-> b`.
    pub const IFF: Self = Self {
        dissociate: [true, false, false, true],
        null: [true, true],
    };
}

/// Enumerates all 16 binary and 4 unary tables over the two-point chain and
/// keeps the pairs satisfying the dissociation axioms of the given polarity.
///
/// With `require_shape_monotone` the dissociation table must additionally be
/// monotone in its first argument and antitone in its second (mirrored for
/// dual polarity), which cuts the result down to a single interpretation.
pub fn search_boolean_interpretations(
    polarity: Polarity,
    require_shape_monotone: bool,
) -> Vec<BooleanInterpretation> {
    let chain = FinitePoset::bool_chain();
    let mut found = Vec::new();
    for dis_bits in 0u8..16 {
        for null_bits in 0u8..4 {
            let dissociate = vec![
                usize::from(dis_bits & 1 != 0),
                usize::from(dis_bits & 2 != 0),
                usize::from(dis_bits & 4 != 0),
                usize::from(dis_bits & 8 != 0),
            ];
            let null_op = vec![
                usize::from(null_bits & 1 != 0),
                usize::from(null_bits & 2 != 0),
            ];
            let sys = OperationSystem::new(
                chain.clone(),
                polarity,
                dissociate.clone(),
                Some(match polarity {
                    Polarity::Primal => vec![0, 1, 1, 1],
                    Polarity::Dual => vec![0, 0, 0, 1],
                }),
                false,
                null_op.clone(),
            )
            .expect("two-point tables are total");
            let tag = match polarity {
                Polarity::Primal => SystemTag::B,
                Polarity::Dual => SystemTag::BDual,
            };
            let report = check_axioms(&sys, tag, None).expect("combine table present");
            let dissociation_ok = report
                .violations
                .iter()
                .all(|v| !v.axiom.ends_with('3') && !v.axiom.ends_with('4'));
            if !dissociation_ok {
                continue;
            }
            if require_shape_monotone {
                // Monotone in the first argument, antitone in the second,
                // w.r.t. the order the system is read against. Reversing
                // both sides cancels, so the check is polarity-independent.
                let d = |a: usize, b: usize| dissociate[2 * a + b];
                let shape_ok =
                    (0..2).all(|b| d(0, b) <= d(1, b)) && (0..2).all(|a| d(a, 1) <= d(a, 0));
                if !shape_ok {
                    continue;
                }
            }
            found.push(BooleanInterpretation {
                dissociate: [
                    dissociate[0] == 1,
                    dissociate[1] == 1,
                    dissociate[2] == 1,
                    dissociate[3] == 1,
                ],
                null: [null_op[0] == 1, null_op[1] == 1],
            });
        }
    }
    found
}
