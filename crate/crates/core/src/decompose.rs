//! Constructive decomposition of an arbitrary evaluation mapping into an
//! approximating form: a nested dissociation of monotone components.
//!
//! Three strategies are available, selected by [`Strategy`]:
//!
//! 1. combine over down-set images (needs the lattice combine),
//! 2. layered rank functions (needs a greatest codomain element and a
//!    constant null),
//! 3. iterated binary combine over an enumeration of each down-set.
//!
//! Dual systems run the same constructions against the reversed domain and
//! codomain orders; the component assignments carry over unchanged.

use std::sync::Arc;

use crate::algebra::{check_axioms, OperationSystem, Polarity, SystemTag};
use crate::error::{Error, Result};
use crate::order::{FinitePoset, PosetMap};

/// Which construction produced (or should produce) a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Combine the image of each down-set in one step (tag 1).
    DownsetCombine,
    /// One rank function per antichain layer (tag 2).
    LayerRanked,
    /// Fold a binary combine over each down-set (tag 3).
    IteratedCombine,
}

impl Strategy {
    /// Numeric tag used on the command line.
    pub fn tag(self) -> u8 {
        match self {
            Strategy::DownsetCombine => 1,
            Strategy::LayerRanked => 2,
            Strategy::IteratedCombine => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(Strategy::DownsetCombine),
            2 => Some(Strategy::LayerRanked),
            3 => Some(Strategy::IteratedCombine),
            _ => None,
        }
    }
}

/// A nested dissociation expression with monotone components.
///
/// The value at `x` is the right fold
/// `dissociate(c1(x), dissociate(c2(x), ... dissociate(ck(x), c{k+1}(x))))`,
/// read against the system's own polarity.
#[derive(Debug, Clone)]
pub struct ApproximatingForm {
    components: Vec<PosetMap>,
    system: Arc<OperationSystem>,
    strategy: Strategy,
}

impl ApproximatingForm {
    pub fn new(
        components: Vec<PosetMap>,
        system: Arc<OperationSystem>,
        strategy: Strategy,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidElements(
                "form needs at least one component".into(),
            ));
        }
        let domain = components[0].domain().clone();
        for c in &components {
            if c.domain() != &domain || c.codomain() != system.codomain() {
                return Err(Error::PosetMismatch(
                    "components must share the domain and the system codomain".into(),
                ));
            }
        }
        Ok(Self {
            components,
            system,
            strategy,
        })
    }

    pub fn components(&self) -> &[PosetMap] {
        &self.components
    }

    pub fn system(&self) -> &Arc<OperationSystem> {
        &self.system
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn polarity(&self) -> Polarity {
        self.system.polarity()
    }

    pub fn domain(&self) -> &Arc<FinitePoset> {
        self.components[0].domain()
    }

    pub fn dissociation_count(&self) -> usize {
        self.components.len() - 1
    }

    /// Value of the form at domain element `x`.
    pub fn evaluate(&self, x: usize) -> usize {
        let mut acc = self.components.last().unwrap().value(x);
        for c in self.components.iter().rev().skip(1) {
            acc = self.system.dissociate(c.value(x), acc);
        }
        acc
    }

    pub fn evaluate_all(&self) -> Vec<usize> {
        (0..self.domain().len()).map(|x| self.evaluate(x)).collect()
    }
}

/// Value of `form` at the element named `x`.
pub fn evaluate_form(form: &ApproximatingForm, x: &str) -> Result<usize> {
    Ok(form.evaluate(form.domain().index_of(x)?))
}

/// Construction and verification diagnostics for one decomposition.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionReport {
    pub dissociation_count: usize,
    /// Longest-chain step count of the domain; the bound on dissociations.
    pub max_chain_length: usize,
    /// `|n(psi_i)|` for each residual produced during construction.
    pub residual_inversions: Vec<usize>,
    /// Per step, how many elements have an inversion inside their down-set.
    /// Strictly decreasing for strategies 1 and 3.
    pub inversion_regions: Vec<usize>,
    /// Support `S(c) = {x | c(x) strictly above its null image}` per component.
    pub support_chain: Vec<Vec<usize>>,
    pub verified: bool,
    pub failures: Vec<String>,
}

/// Domain and codomain as the construction reads them: reversed for dual
/// systems, untouched otherwise. Tables are shared either way.
struct View {
    m: Arc<FinitePoset>,
    l: Arc<FinitePoset>,
    sys: Arc<OperationSystem>,
}

impl View {
    fn new(domain: &Arc<FinitePoset>, sys: &Arc<OperationSystem>) -> Self {
        match sys.polarity() {
            Polarity::Primal => Self {
                m: domain.clone(),
                l: sys.codomain().clone(),
                sys: sys.clone(),
            },
            Polarity::Dual => Self {
                m: Arc::new(domain.dual()),
                l: Arc::new(sys.codomain().dual()),
                sys: sys.clone(),
            },
        }
    }

    fn combine(&self, values: &[usize], strategy: Strategy) -> Result<usize> {
        let table = match strategy {
            Strategy::DownsetCombine => {
                self.sys
                    .combine_pairwise(0, 0)
                    .ok_or_else(|| Error::AxiomPrecondition {
                        system: "A".into(),
                        detail: "strategy 1 needs the lattice combine".into(),
                    })?;
                |s: &OperationSystem, a: usize, b: usize| s.combine_pairwise(a, b).unwrap()
            }
            Strategy::IteratedCombine => {
                self.sys
                    .combine_binary(0, 0)
                    .ok_or_else(|| Error::AxiomPrecondition {
                        system: "B".into(),
                        detail: "strategy 3 needs a binary combine table".into(),
                    })?;
                |s: &OperationSystem, a: usize, b: usize| s.combine_binary(a, b).unwrap()
            }
            Strategy::LayerRanked => unreachable!("layer strategy never combines"),
        };
        let mut acc = *values.last().expect("down-sets are never empty");
        for &v in values.iter().rev().skip(1) {
            acc = table(&self.sys, v, acc);
        }
        Ok(acc)
    }

    /// First codomain element in canonical order that dissociates `have`
    /// back to `want` and dominates the null image of `have`.
    fn witness(&self, have: usize, want: usize, at: usize) -> Result<usize> {
        let o = self.sys.null(have);
        (0..self.l.len())
            .find(|&z| self.sys.dissociate(have, z) == want && self.l.le(o, z))
            .ok_or_else(|| Error::WitnessNotFound {
                at: self.m.name(at).to_string(),
                have: self.l.name(have).to_string(),
                want: self.l.name(want).to_string(),
            })
    }

    fn inversions(&self, values: &[usize]) -> Vec<(usize, usize)> {
        let n = self.m.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.m.le(a, b) && !self.l.le(values[a], values[b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Support of a component under the typed reading: values strictly above
    /// their own null image.
    fn support(&self, values: &[usize]) -> Vec<usize> {
        (0..values.len())
            .filter(|&x| {
                let v = values[x];
                let o = self.sys.null(v);
                self.l.le(o, v) && o != v
            })
            .collect()
    }
}

fn precondition_tag(strategy: Strategy, polarity: Polarity) -> SystemTag {
    match (strategy, polarity) {
        (Strategy::DownsetCombine, Polarity::Primal) => SystemTag::A,
        (Strategy::DownsetCombine, Polarity::Dual) => SystemTag::ADual,
        (Strategy::IteratedCombine, Polarity::Primal) => SystemTag::B,
        (Strategy::IteratedCombine, Polarity::Dual) => SystemTag::BDual,
        // The layer strategy only exercises dissociation and null, which the
        // binary-combine check covers when a combine table exists; otherwise
        // the caller gets the lattice check. Both share axioms 3 and 4.
        (Strategy::LayerRanked, p) => {
            if p == Polarity::Primal {
                SystemTag::B
            } else {
                SystemTag::BDual
            }
        }
    }
}

fn check_precondition(
    sys: &OperationSystem,
    strategy: Strategy,
    subset_limit: Option<usize>,
) -> Result<()> {
    let mut tag = precondition_tag(strategy, sys.polarity());
    if strategy == Strategy::LayerRanked && !sys.has_combine_binary() {
        tag = match sys.polarity() {
            Polarity::Primal => SystemTag::A,
            Polarity::Dual => SystemTag::ADual,
        };
    }
    let report = check_axioms(sys, tag, subset_limit)?;
    let relevant = |axiom: &str| {
        strategy != Strategy::LayerRanked || axiom.ends_with('3') || axiom.ends_with('4')
    };
    let bad: Vec<&str> = report
        .violations
        .iter()
        .filter(|v| relevant(&v.axiom))
        .map(|v| v.axiom.as_str())
        .collect();
    if !bad.is_empty() {
        return Err(Error::AxiomPrecondition {
            system: tag.to_string(),
            detail: format!("violated: {}", bad.join(", ")),
        });
    }
    Ok(())
}

/// Decomposes `psi` into an approximating form with monotone components.
///
/// The system's axioms are model-checked first; `subset_limit` caps the
/// subset enumeration for the lattice-combine check. The returned report
/// carries construction diagnostics and the full verification verdict.
/// Witnesses are always the first qualifying codomain element in canonical
/// order, so results are deterministic.
pub fn decompose(
    psi: &PosetMap,
    sys: &Arc<OperationSystem>,
    strategy: Strategy,
    subset_limit: Option<usize>,
) -> Result<(ApproximatingForm, DecompositionReport)> {
    if psi.codomain() != sys.codomain() {
        return Err(Error::PosetMismatch(
            "map codomain differs from the system codomain".into(),
        ));
    }
    check_precondition(sys, strategy, subset_limit)?;
    let view = View::new(psi.domain(), sys);
    let (raw, residual_inversions, inversion_regions) = match strategy {
        Strategy::LayerRanked => build_layered(&view, psi.values())?,
        _ => build_iterative(&view, psi.values(), strategy)?,
    };
    let components = raw
        .into_iter()
        .map(|values| PosetMap::new(psi.domain().clone(), sys.codomain().clone(), values))
        .collect::<Result<Vec<_>>>()?;
    let form = ApproximatingForm::new(components, sys.clone(), strategy)?;
    let mut report = verify_form(&form, psi);
    report.residual_inversions = residual_inversions;
    report.inversion_regions = inversion_regions;
    Ok((form, report))
}

type Built = (Vec<Vec<usize>>, Vec<usize>, Vec<usize>);

fn build_iterative(view: &View, psi: &[usize], strategy: Strategy) -> Result<Built> {
    let n = view.m.len();
    let downsets: Vec<Vec<usize>> = (0..n).map(|x| view.m.down_set(x)).collect();
    let mut residual = psi.to_vec();
    let mut components = Vec::new();
    let mut residual_inversions = Vec::new();
    let mut inversion_regions = Vec::new();
    loop {
        let inv = view.inversions(&residual);
        residual_inversions.push(inv.len());
        if inv.is_empty() {
            components.push(residual);
            break;
        }
        // x is in the region iff some inverted pair sits inside its down-set,
        // i.e. the pair's upper element is below x.
        let region: Vec<bool> = (0..n)
            .map(|x| inv.iter().any(|&(_, b)| view.m.le(b, x)))
            .collect();
        inversion_regions.push(region.iter().filter(|&&r| r).count());
        let mut phi = Vec::with_capacity(n);
        for x in 0..n {
            if region[x] {
                let values: Vec<usize> = downsets[x].iter().map(|&y| residual[y]).collect();
                phi.push(view.combine(&values, strategy)?);
            } else {
                phi.push(residual[x]);
            }
        }
        let mut next = Vec::with_capacity(n);
        for x in 0..n {
            if phi[x] == residual[x] {
                next.push(view.sys.null(residual[x]));
            } else {
                next.push(view.witness(phi[x], residual[x], x)?);
            }
        }
        components.push(phi);
        residual = next;
        assert!(components.len() <= n + 1, "construction failed to converge");
    }
    Ok((components, residual_inversions, inversion_regions))
}

fn build_layered(view: &View, psi: &[usize]) -> Result<Built> {
    let top = view
        .l
        .greatest()
        .ok_or(Error::NoExtremeElement(match view.sys.polarity() {
            Polarity::Primal => "greatest",
            Polarity::Dual => "least",
        }))?;
    let c = view.sys.constant_null().ok_or(Error::NonConstantNull)?;
    let n = view.m.len();
    let layer_of = view.m.layer_index();
    let layer_count = layer_of.iter().max().map_or(0, |&j| j + 1);
    let mut residual = psi.to_vec();
    let mut components = Vec::new();
    let mut residual_inversions = Vec::new();
    let mut inversion_regions = Vec::new();
    for i in 0..layer_count {
        // Inversions of the residual over the remaining region.
        let inv: usize = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| layer_of[a] >= i && layer_of[b] >= i)
            .filter(|&(a, b)| view.m.le(a, b) && !view.l.le(residual[a], residual[b]))
            .count();
        residual_inversions.push(inv);
        inversion_regions.push((0..n).filter(|&x| layer_of[x] > i).count());
        let comp: Vec<usize> = (0..n)
            .map(|x| match layer_of[x].cmp(&i) {
                std::cmp::Ordering::Less => c,
                std::cmp::Ordering::Equal => residual[x],
                std::cmp::Ordering::Greater => top,
            })
            .collect();
        components.push(comp);
        if i + 1 < layer_count {
            for x in 0..n {
                if layer_of[x] > i {
                    residual[x] = view.witness(top, residual[x], x)?;
                }
            }
        }
    }
    Ok((components, residual_inversions, inversion_regions))
}

/// A monotone map that is constantly null below its rank layer and maximal
/// above it.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFunction {
    pub rank: usize,
    pub map: PosetMap,
}

impl ThetaFunction {
    /// Validates `map` as a rank-`rank` function (1-based) for the system.
    pub fn new(map: PosetMap, sys: &OperationSystem, rank: usize) -> Result<Self> {
        if Self::is_rank(&map, sys, rank)? {
            Ok(Self { rank, map })
        } else {
            Err(Error::IndexOutOfRange {
                index: rank,
                len: map.domain().layer_decompose().layers.len(),
            })
        }
    }

    /// Whether `map` satisfies the rank-`rank` shape for the system.
    pub fn is_rank(map: &PosetMap, sys: &OperationSystem, rank: usize) -> Result<bool> {
        let c = sys.constant_null().ok_or(Error::NonConstantNull)?;
        let (m, l) = match sys.polarity() {
            Polarity::Primal => (map.domain().clone(), sys.codomain().clone()),
            Polarity::Dual => (
                Arc::new(map.domain().dual()),
                Arc::new(sys.codomain().dual()),
            ),
        };
        let layer_of = m.layer_index();
        let layer_count = layer_of.iter().max().map_or(0, |&j| j + 1);
        if rank == 0 || rank > layer_count {
            return Err(Error::IndexOutOfRange {
                index: rank,
                len: layer_count,
            });
        }
        let maximal = l.maximal_elements();
        // Monotonicity is self-dual: reversing both orders cancels.
        if !map.is_monotone() {
            return Ok(false);
        }
        Ok((0..m.len()).all(|x| {
            let j = layer_of[x] + 1;
            if j < rank {
                map.value(x) == c
            } else if j > rank {
                maximal.contains(&map.value(x))
            } else {
                true
            }
        }))
    }
}

/// Checks a form against the map it is supposed to represent.
///
/// Failures are reported, not thrown: pointwise equality, monotonicity of
/// every component, the dissociation bound, the support-chain inclusion,
/// and (for layered forms) the rank shape of each component.
pub fn verify_form(form: &ApproximatingForm, psi: &PosetMap) -> DecompositionReport {
    let mut failures = Vec::new();
    if psi.domain() != form.domain() || psi.codomain() != form.system().codomain() {
        failures.push("form and map live over different posets".to_string());
        return DecompositionReport {
            verified: false,
            failures,
            ..Default::default()
        };
    }
    let view = View::new(psi.domain(), form.system());
    let d = view.m.layer_decompose().max_chain_length;

    for (x, (&want, got)) in psi.values().iter().zip(form.evaluate_all()).enumerate() {
        if want != got {
            failures.push(format!(
                "value mismatch at `{}`: form gives `{}`, map has `{}`",
                psi.domain().name(x),
                psi.codomain().name(got),
                psi.codomain().name(want)
            ));
        }
    }
    for (i, comp) in form.components().iter().enumerate() {
        if !view.inversions(comp.values()).is_empty() {
            failures.push(format!("component {} is not monotone", i + 1));
        }
    }
    let count = form.dissociation_count();
    if count > d {
        failures.push(format!("{count} dissociations exceed the chain bound {d}"));
    }
    let support_chain: Vec<Vec<usize>> = form
        .components()
        .iter()
        .map(|c| view.support(c.values()))
        .collect();
    for w in support_chain.windows(2) {
        if !w[1].iter().all(|x| w[0].contains(x)) {
            failures.push("support chain is not decreasing".to_string());
        }
    }
    if form.strategy() == Strategy::LayerRanked {
        for (i, comp) in form.components().iter().enumerate() {
            match ThetaFunction::is_rank(comp, form.system(), i + 1) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("component {} is not of rank {}", i + 1, i + 1)),
                Err(e) => failures.push(format!("component {}: {e}", i + 1)),
            }
        }
        let layers = view.m.layer_decompose().layers.len();
        if form.components().len() != layers {
            failures.push(format!(
                "layered form has {} components for {layers} layers",
                form.components().len()
            ));
        }
    }
    DecompositionReport {
        dissociation_count: count,
        max_chain_length: d,
        residual_inversions: Vec::new(),
        inversion_regions: Vec::new(),
        support_chain,
        verified: failures.is_empty(),
        failures,
    }
}

/// Extends a form to exactly `d + 1` components by appending null images of
/// the previous component; the value is unchanged pointwise.
pub fn pad_to_universal(form: &ApproximatingForm, d: usize) -> Result<ApproximatingForm> {
    if form.components().len() > d + 1 {
        return Err(Error::TooManyComponents {
            len: form.components().len(),
            target: d + 1,
        });
    }
    let mut components = form.components().to_vec();
    while components.len() < d + 1 {
        let prev = components.last().unwrap();
        let values: Vec<usize> = prev
            .values()
            .iter()
            .map(|&v| form.system().null(v))
            .collect();
        components.push(PosetMap::new(
            prev.domain().clone(),
            prev.codomain().clone(),
            values,
        )?);
    }
    ApproximatingForm::new(components, form.system().clone(), form.strategy())
}
