//! Finite posets and their structural queries: down-sets, layer splitting,
//! monotonicity analysis, dualization, and the embedding into the boolean
//! cube via principal down-sets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite partially ordered set.
///
/// Elements are addressed by index into the canonical enumeration, which is
/// the construction order. The relation is stored as a dense `n x n` matrix
/// and is always reflexive, antisymmetric and transitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    le: Vec<bool>, // row-major: le[a * n + b] <=> a <= b
}

impl FinitePoset {
    /// Builds a poset from element names and a generating set of pairs.
    ///
    /// The pairs may be covering pairs or any generating relation; the
    /// reflexive-transitive closure is computed here. Fails with
    /// [`Error::Cycle`] if the closure violates antisymmetry.
    pub fn from_named_pairs<S: AsRef<str>>(names: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(Error::InvalidElements("element list is empty".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidElements("empty element name".into()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidElements(format!(
                    "duplicate element `{name}`"
                )));
            }
        }
        let look = |s: &S| -> Result<usize> {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
        };
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx_pairs.push((look(a)?, look(b)?));
        }
        Self::from_index_pairs(names, index, &idx_pairs)
    }

    /// Same as [`FinitePoset::from_named_pairs`] but with index pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let index = names.iter().cloned().zip(0..n).collect();
        Self::from_index_pairs(names, index, pairs)
    }

    fn from_index_pairs(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let n = names.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            le[a * n + b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for a in 0..n {
                if le[a * n + k] {
                    for b in 0..n {
                        if le[k * n + b] {
                            le[a * n + b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if le[a * n + b] && le[b * n + a] {
                    return Err(Error::Cycle {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    });
                }
            }
        }
        Ok(Self { names, index, le })
    }

    /// A linear order `e0 < e1 < ... < e{n-1}` with the given names.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (1..names.len()).map(|i| (i - 1, i)).collect();
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(Error::InvalidElements("element list is empty".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidElements("empty element name".into()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidElements(format!(
                    "duplicate element `{name}`"
                )));
            }
        }
        Self::from_index_pairs(names, index, &pairs)
    }

    /// The two-point chain `0 < 1`.
    pub fn bool_chain() -> Arc<Self> {
        Arc::new(Self::chain(&["0", "1"]).expect("two-point chain"))
    }

    /// The boolean cube over `n` variables, ordered bitwise.
    ///
    /// Element `i` is named by the bits of `i` with the first variable as the
    /// most significant character, e.g. `n = 2` gives `00, 01, 10, 11`.
    pub fn boolean_cube(n: usize) -> Result<Self> {
        assert!(n < usize::BITS as usize, "cube dimension too large");
        let size = 1usize << n;
        let names: Vec<String> = (0..size)
            .map(|m| {
                if n == 0 {
                    "()".to_string()
                } else {
                    (0..n)
                        .map(|j| if m >> (n - 1 - j) & 1 == 1 { '1' } else { '0' })
                        .collect()
                }
            })
            .collect();
        let mut pairs = Vec::new();
        for m in 0..size {
            for j in 0..n {
                if m >> j & 1 == 0 {
                    pairs.push((m, m | (1 << j)));
                }
            }
        }
        let index = names.iter().cloned().zip(0..size).collect();
        Self::from_index_pairs(names, index, &pairs)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Canonical enumeration of element names.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Whether `a <= b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len() + b]
    }

    /// Whether `a < b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    /// All ordered pairs `(a, b)` with `a <= b`, in canonical order.
    pub fn le_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.le(a, b))
            .collect()
    }

    /// `{y | y <= x}` in canonical order. Always contains `x`.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        self.check_index(x);
        (0..self.len()).filter(|&y| self.le(y, x)).collect()
    }

    /// `{y | x <= y}` in canonical order; the dual of [`FinitePoset::down_set`].
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        self.check_index(x);
        (0..self.len()).filter(|&y| self.le(x, y)).collect()
    }

    /// Down-set of a named element.
    pub fn down_set_of(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self.down_set(self.index_of(name)?))
    }

    fn check_index(&self, x: usize) {
        assert!(x < self.len(), "element index {x} out of range");
    }

    /// Indices of the minimal elements.
    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| !self.lt(y, x)))
            .collect()
    }

    /// Indices of the maximal elements.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| !self.lt(x, y)))
            .collect()
    }

    /// The greatest element, if the poset has one.
    pub fn greatest(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| self.le(y, x)))
    }

    /// The least element, if the poset has one.
    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| self.le(x, y)))
    }

    /// Splits the poset into antichain layers by repeatedly removing minimal
    /// elements: layer 1 holds the minimal elements, layer `j + 1` the
    /// minimal elements of what remains.
    pub fn layer_decompose(&self) -> LayerDecomposition {
        let n = self.len();
        let mut assigned = vec![false; n];
        let mut layers = Vec::new();
        let mut remaining = n;
        while remaining > 0 {
            let layer: Vec<usize> = (0..n)
                .filter(|&x| !assigned[x])
                .filter(|&x| (0..n).all(|y| assigned[y] || !self.lt(y, x)))
                .collect();
            debug_assert!(
                !layer.is_empty(),
                "finite poset always has minimal elements"
            );
            for &x in &layer {
                assigned[x] = true;
            }
            remaining -= layer.len();
            layers.push(layer);
        }
        let max_chain_length = layers.len() - 1;
        LayerDecomposition {
            layers,
            max_chain_length,
        }
    }

    /// Layer index (0-based) of every element.
    pub fn layer_index(&self) -> Vec<usize> {
        let dec = self.layer_decompose();
        let mut idx = vec![0; self.len()];
        for (j, layer) in dec.layers.iter().enumerate() {
            for &x in layer {
                idx[x] = j;
            }
        }
        idx
    }

    /// The same elements with the relation reversed. An involution.
    pub fn dual(&self) -> FinitePoset {
        let n = self.len();
        let mut le = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                le[a * n + b] = self.le(b, a);
            }
        }
        FinitePoset {
            names: self.names.clone(),
            index: self.index.clone(),
            le,
        }
    }

    /// Order embedding into the boolean cube of dimension `|self|`.
    ///
    /// Element `x` maps to the characteristic bit vector of its down-set over
    /// the canonical enumeration, so `a <= b` iff `vec(a)` is bitwise below
    /// `vec(b)`.
    pub fn embed_into_cube(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n)
            .map(|x| (0..n).map(|j| self.le(j, x)).collect())
            .collect()
    }
}

/// Result of [`FinitePoset::layer_decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition {
    /// Pairwise disjoint antichains covering all elements.
    pub layers: Vec<Vec<usize>>,
    /// Steps in a longest chain: number of layers minus one.
    pub max_chain_length: usize,
}

/// A total map between two finite posets, stored by codomain index per
/// domain element in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct PosetMap {
    domain: Arc<FinitePoset>,
    codomain: Arc<FinitePoset>,
    values: Vec<usize>,
}

impl PosetMap {
    pub fn new(
        domain: Arc<FinitePoset>,
        codomain: Arc<FinitePoset>,
        values: Vec<usize>,
    ) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                got: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::UnknownElement(format!("#{v}")));
        }
        Ok(Self {
            domain,
            codomain,
            values,
        })
    }

    /// Builds a map from `(domain element, codomain element)` name pairs.
    /// The association must be total.
    pub fn from_named(
        domain: Arc<FinitePoset>,
        codomain: Arc<FinitePoset>,
        assoc: &[(String, String)],
    ) -> Result<Self> {
        let mut values = vec![usize::MAX; domain.len()];
        for (from, to) in assoc {
            let i = domain.index_of(from)?;
            let v = codomain.index_of(to)?;
            values[i] = v;
        }
        if let Some(missing) = values.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidElements(format!(
                "map is not total: no image for `{}`",
                domain.name(missing)
            )));
        }
        PosetMap::new(domain, codomain, values)
    }

    pub fn domain(&self) -> &Arc<FinitePoset> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinitePoset> {
        &self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn value_of(&self, name: &str) -> Result<usize> {
        Ok(self.values[self.domain.index_of(name)?])
    }

    /// The non-monotonicity domain: all pairs `(a, b)` with `a <= b` in the
    /// domain whose images are not related by `f(a) <= f(b)`. Empty iff the
    /// map is monotone. Pairs come out in canonical order.
    pub fn non_monotonicity_domain(&self) -> Vec<(usize, usize)> {
        let n = self.domain.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.domain.le(a, b) && !self.codomain.le(self.values[a], self.values[b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_monotone(&self) -> bool {
        self.non_monotonicity_domain().is_empty()
    }

    /// The same assignment read against the dualized domain and codomain.
    pub fn dualized(
        &self,
        dual_domain: Arc<FinitePoset>,
        dual_codomain: Arc<FinitePoset>,
    ) -> Result<Self> {
        PosetMap::new(dual_domain, dual_codomain, self.values.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three_chain() -> FinitePoset {
        FinitePoset::from_named_pairs(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn closure_of_chain_has_six_pairs() {
        let p = three_chain();
        assert_eq!(p.le_pairs().len(), 6);
        assert!(p.le(0, 2), "closure must add a <= c");
    }

    #[test]
    fn antichain_is_reflexive_only() {
        let p = FinitePoset::from_named_pairs::<&str>(&["a", "b"], &[]).unwrap();
        assert_eq!(p.le_pairs(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err =
            FinitePoset::from_named_pairs(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }));
    }

    #[test]
    fn unknown_element_in_pair_is_rejected() {
        let err = FinitePoset::from_named_pairs(&["a", "b"], &[("a", "z")]).unwrap_err();
        assert_eq!(err, Error::UnknownElement("z".into()));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = FinitePoset::from_named_pairs::<&str>(&["a", "a"], &[]).unwrap_err();
        assert!(matches!(err, Error::InvalidElements(_)));
    }

    #[test]
    fn down_set_on_chain_and_antichain() {
        let p = three_chain();
        assert_eq!(p.down_set(1), vec![0, 1]);
        assert_eq!(p.up_set(1), vec![1, 2]);
        let q = FinitePoset::from_named_pairs::<&str>(&["a", "b"], &[]).unwrap();
        assert_eq!(q.down_set(0), vec![0]);
        assert_eq!(q.up_set(0), vec![0]);
    }

    #[test]
    fn down_set_of_cube_top_is_everything() {
        let cube = FinitePoset::boolean_cube(2).unwrap();
        let top = cube.index_of("11").unwrap();
        assert_eq!(cube.down_set(top), vec![0, 1, 2, 3]);
    }

    #[test]
    fn layers_of_chain_antichain_cube() {
        let p = three_chain().layer_decompose();
        assert_eq!(p.layers, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(p.max_chain_length, 2);

        let q = FinitePoset::from_named_pairs::<&str>(&["a", "b"], &[])
            .unwrap()
            .layer_decompose();
        assert_eq!(q.layers, vec![vec![0, 1]]);
        assert_eq!(q.max_chain_length, 0);

        // Cube layers are the Hamming-weight levels.
        let cube = FinitePoset::boolean_cube(3).unwrap();
        let dec = cube.layer_decompose();
        assert_eq!(dec.max_chain_length, 3);
        assert_eq!(dec.layers.len(), 4);
        for (w, layer) in dec.layers.iter().enumerate() {
            for &x in layer {
                assert_eq!(x.count_ones() as usize, w);
            }
        }
    }

    #[test]
    fn monotone_identity_has_empty_domain() {
        let p = Arc::new(three_chain());
        let f = PosetMap::new(p.clone(), p.clone(), vec![0, 1, 2]).unwrap();
        assert!(f.is_monotone());
    }

    #[test]
    fn single_inversion_is_reported() {
        let m = Arc::new(FinitePoset::chain(&["a", "b"]).unwrap());
        let l = FinitePoset::bool_chain();
        let f = PosetMap::new(m, l, vec![1, 0]).unwrap();
        assert_eq!(f.non_monotonicity_domain(), vec![(0, 1)]);
    }

    #[test]
    fn dualize_reverses_chain_and_fixes_antichain() {
        let p = three_chain();
        let d = p.dual();
        assert!(d.le(2, 0) && !d.le(0, 2));
        assert_eq!(d.dual(), p);

        let q = FinitePoset::from_named_pairs::<&str>(&["a", "b"], &[]).unwrap();
        assert_eq!(q.dual(), q);
    }

    #[test]
    fn cube_dual_is_isomorphic_via_complement() {
        // Bitwise complement maps the reversed square back onto the square.
        let cube = FinitePoset::boolean_cube(2).unwrap();
        let dual = cube.dual();
        let n = cube.len();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(dual.le(a, b), cube.le(n - 1 - a, n - 1 - b));
            }
        }
    }

    #[test]
    fn embedding_of_small_posets() {
        let two = Arc::new(FinitePoset::chain(&["a", "b"]).unwrap());
        assert_eq!(
            two.embed_into_cube(),
            vec![vec![true, false], vec![true, true]]
        );
        let anti = FinitePoset::from_named_pairs::<&str>(&["a", "b"], &[]).unwrap();
        assert_eq!(
            anti.embed_into_cube(),
            vec![vec![true, false], vec![false, true]]
        );
    }

    /// Strategy: random generating relation on up to 7 points.
    fn arb_poset(max: usize) -> impl Strategy<Value = FinitePoset> {
        (
            2..=max,
            proptest::collection::vec((0usize..max, 0usize..max), 0..12),
        )
            .prop_map(|(n, raw)| {
                // Orient all pairs upward so the closure stays acyclic.
                let pairs: Vec<(usize, usize)> = raw
                    .into_iter()
                    .map(|(a, b)| (a % n, b % n))
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                FinitePoset::from_pairs(n, &pairs).expect("oriented pairs cannot cycle")
            })
    }

    proptest! {
        #[test]
        fn down_set_membership_matches_le(p in arb_poset(7)) {
            for x in 0..p.len() {
                let d = p.down_set(x);
                prop_assert!(d.contains(&x));
                for y in 0..p.len() {
                    prop_assert_eq!(d.contains(&y), p.le(y, x));
                }
            }
        }

        #[test]
        fn layers_cover_and_are_antichains(p in arb_poset(7)) {
            let dec = p.layer_decompose();
            let total: usize = dec.layers.iter().map(|l| l.len()).sum();
            prop_assert_eq!(total, p.len());
            for layer in &dec.layers {
                for &a in layer {
                    for &b in layer {
                        prop_assert!(!p.lt(a, b));
                    }
                }
            }
            // Every element of layer j+1 sits above something in layer j.
            for j in 1..dec.layers.len() {
                for &y in &dec.layers[j] {
                    prop_assert!(dec.layers[j - 1].iter().any(|&x| p.lt(x, y)));
                }
            }
        }

        #[test]
        fn dual_is_involution_and_swaps_extremes(p in arb_poset(7)) {
            let d = p.dual();
            prop_assert_eq!(&d.dual(), &p);
            prop_assert_eq!(d.minimal_elements(), p.maximal_elements());
        }

        #[test]
        fn embedding_is_an_order_embedding(p in arb_poset(7)) {
            let vecs = p.embed_into_cube();
            for a in 0..p.len() {
                for b in 0..p.len() {
                    let below = vecs[a].iter().zip(&vecs[b]).all(|(&x, &y)| !x || y);
                    prop_assert_eq!(below, p.le(a, b));
                }
            }
        }

        #[test]
        fn non_monotonicity_matches_double_loop(p in arb_poset(6), seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let l = FinitePoset::bool_chain();
            let p = Arc::new(p);
            let values: Vec<usize> = (0..p.len()).map(|_| rng.random_range(0..2)).collect();
            let f = PosetMap::new(p.clone(), l.clone(), values.clone()).unwrap();
            let mut expect = Vec::new();
            for a in 0..p.len() {
                for b in 0..p.len() {
                    if p.le(a, b) && !(values[a] <= values[b]) {
                        expect.push((a, b));
                    }
                }
            }
            prop_assert_eq!(f.non_monotonicity_domain(), expect);
        }
    }
}
