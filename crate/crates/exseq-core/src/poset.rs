//! Exceptional sets and sequences, the generating relation `F`, its hull
//! `P`, linear extensions, and the strong/effective criteria.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::cohomology::{is_acyclic, is_effective, is_immaculate};
use crate::error::{Error, Result};
use crate::variety::{LineBundle, VarietySpec};

/// Ordered index pairs over a ground set of size `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, adj: vec![vec![false; n]; n] }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        (0..n).for_each(|k| r.adj[k][k] = true);
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::diagonal(n);
        pairs.into_iter().for_each(|(a, b)| r.insert(a, b));
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.adj[a][b] = true;
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| self.adj[a][b]).map(move |b| (a, b)))
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|(a, b)| a != b)
    }

    /// Off-diagonal pairs as 1-based positions.
    pub fn one_based(&self) -> BTreeSet<(usize, usize)> {
        self.off_diagonal().map(|(a, b)| (a + 1, b + 1)).collect()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs().all(|(a, b)| other.contains(a, b))
    }

    /// Pairs of `self` not in `other`.
    pub fn difference(&self, other: &Relation) -> Relation {
        let mut r = Relation::empty(self.n);
        self.pairs().filter(|&(a, b)| !other.contains(a, b)).for_each(|(a, b)| r.insert(a, b));
        r
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn transitive_hull(&self) -> Relation {
        let mut r = self.clone();
        (0..self.n).for_each(|k| r.adj[k][k] = true);
        for k in 0..self.n {
            for a in 0..self.n {
                if r.adj[a][k] {
                    for b in 0..self.n {
                        if r.adj[k][b] {
                            r.adj[a][b] = true;
                        }
                    }
                }
            }
        }
        r
    }

    /// A directed cycle through distinct elements, if any.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done.
        fn visit(r: &Relation, u: usize, state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            state[u] = 1;
            stack.push(u);
            for v in (0..r.n).filter(|&v| v != u && r.adj[u][v]) {
                match state[v] {
                    1 => {
                        let start = stack.iter().position(|&x| x == v).expect("on stack");
                        return Some(stack[start..].to_vec());
                    }
                    0 => {
                        if let Some(c) = visit(r, v, state, stack) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
            }
            stack.pop();
            state[u] = 2;
            None
        }
        let mut state = vec![0u8; self.n];
        (0..self.n).find_map(|u| if state[u] == 0 { visit(self, u, &mut state, &mut Vec::new()) } else { None })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.off_diagonal().all(|(a, b)| !self.adj[b][a])
    }

    pub fn is_partial_order(&self) -> bool {
        (0..self.n).all(|k| self.adj[k][k]) && self.is_antisymmetric() && self.transitive_hull() == *self
    }

    /// Whether a total order (given as a permutation of positions) contains
    /// every off-diagonal pair.
    pub fn respected_by(&self, order: &[usize]) -> bool {
        let mut rank = vec![0; self.n];
        order.iter().enumerate().for_each(|(pos, &e)| rank[e] = pos);
        self.off_diagonal().all(|(a, b)| rank[a] < rank[b])
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.off_diagonal()).finish()
    }
}

impl Serialize for Relation {
    /// Off-diagonal pairs of 0-based positions; the diagonal is implicit.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.off_diagonal().map(|(a, b)| [a, b]))
    }
}

/// Adds `forced` to a partial order and closes transitively.
pub fn extend_partial_order(rel: &Relation, forced: (usize, usize)) -> Result<Relation> {
    let (x, y) = forced;
    if x != y && rel.contains(y, x) {
        return Err(Error::ReversedPair(x, y));
    }
    let mut r = rel.clone();
    r.insert(x, y);
    let hull = r.transitive_hull();
    match hull.find_cycle() {
        Some(c) => Err(Error::Cycle(c)),
        None => Ok(hull),
    }
}

fn check_distinct(bundles: &[LineBundle]) -> Result<()> {
    let mut seen = BTreeSet::new();
    match bundles.iter().find(|b| !seen.insert(**b)) {
        Some(&dup) => Err(Error::Duplicate(dup)),
        None => Ok(()),
    }
}

/// `bundles[a] − bundles[b] ∈ Imm` for all `a < b`.
pub fn is_exceptional_sequence(spec: &VarietySpec, bundles: &[LineBundle]) -> Result<bool> {
    check_distinct(bundles)?;
    Ok(bundles
        .iter()
        .enumerate()
        .all(|(a, &x)| bundles[a + 1..].iter().all(|&y| is_immaculate(spec, x - y))))
}

/// An ordered exceptional sequence, verified on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExceptionalSequence {
    #[serde(skip)]
    spec: VarietySpec,
    bundles: Vec<LineBundle>,
}

impl ExceptionalSequence {
    pub fn new(spec: VarietySpec, bundles: Vec<LineBundle>) -> Result<Self> {
        if !is_exceptional_sequence(&spec, &bundles)? {
            let (a, b) = first_violation(&spec, &bundles).expect("some pair violates");
            return Err(Error::NotExceptional(format!("{} before {}", bundles[a], bundles[b])));
        }
        Ok(ExceptionalSequence { spec, bundles })
    }

    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn bundles(&self) -> &[LineBundle] {
        &self.bundles
    }

    pub fn into_bundles(self) -> Vec<LineBundle> {
        self.bundles
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn to_set(&self) -> ExceptionalSet {
        ExceptionalSet {
            spec: self.spec.clone(),
            bundles: self.bundles.clone(),
            certificate: (0..self.bundles.len()).collect(),
        }
    }
}

fn first_violation(spec: &VarietySpec, bundles: &[LineBundle]) -> Option<(usize, usize)> {
    (0..bundles.len())
        .flat_map(|a| (a + 1..bundles.len()).map(move |b| (a, b)))
        .find(|&(a, b)| !is_immaculate(spec, bundles[a] - bundles[b]))
}

/// A set of line bundles admitting an exceptional order. Positions refer to
/// `bundles` in the order supplied; `certificate` is one exceptional order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExceptionalSet {
    #[serde(skip)]
    spec: VarietySpec,
    bundles: Vec<LineBundle>,
    #[serde(skip)]
    certificate: Vec<usize>,
}

impl ExceptionalSet {
    pub fn new(spec: VarietySpec, bundles: Vec<LineBundle>) -> Result<Self> {
        check_distinct(&bundles)?;
        for (a, &x) in bundles.iter().enumerate() {
            for &y in &bundles[a + 1..] {
                if !is_immaculate(&spec, x - y) && !is_immaculate(&spec, y - x) {
                    return Err(Error::NotExceptional(format!("{x} and {y} have Ext both ways")));
                }
            }
        }
        let f = f_definition(&spec, &bundles);
        if let Some(cycle) = f.find_cycle() {
            return Err(Error::Cycle(cycle));
        }
        let certificate = first_linear_extension(&f, &bundles);
        Ok(ExceptionalSet { spec, bundles, certificate })
    }

    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn bundles(&self) -> &[LineBundle] {
        &self.bundles
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn certificate(&self) -> ExceptionalSequence {
        let bundles = self.certificate.iter().map(|&k| self.bundles[k]).collect();
        ExceptionalSequence::new(self.spec.clone(), bundles).expect("certificate verified at construction")
    }

    /// Bundles sorted by the vertical-lex key.
    pub fn sorted_bundles(&self) -> Vec<LineBundle> {
        let mut b = self.bundles.clone();
        b.sort_by_key(|l| l.vertical_key());
        b
    }

    /// `B − A`, checked to lie in `Imm ∪ {O} ∪ −Imm`.
    pub fn delta(&self, a: usize, b: usize) -> Result<LineBundle> {
        let d = self.bundles[b] - self.bundles[a];
        if d == LineBundle::ZERO || is_immaculate(&self.spec, d) || is_immaculate(&self.spec, -d) {
            Ok(d)
        } else {
            Err(Error::NotExceptional(format!("difference {d} outside Imm ∪ O ∪ −Imm")))
        }
    }

    /// `F`, computed from the definition and from the difference
    /// characterisation; the two must agree.
    pub fn f_relation(&self) -> Result<Relation> {
        let def = f_definition(&self.spec, &self.bundles);
        let lemma = f_lemma(&self.spec, &self.bundles);
        if def != lemma {
            return Err(Error::Internal(format!("F characterisations differ: {def:?} vs {lemma:?}")));
        }
        Ok(def)
    }

    /// `P = ⟨F⟩`, checked antisymmetric.
    pub fn poset(&self) -> Result<Relation> {
        let p = self.f_relation()?.transitive_hull();
        match p.find_cycle() {
            Some(c) => Err(Error::Cycle(c)),
            None => Ok(p),
        }
    }

    /// `δ⁻¹({O} ∪ (Eff ∩ −Imm))`.
    pub fn eff_relation(&self) -> Relation {
        let n = self.len();
        let mut r = Relation::diagonal(n);
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                let d = self.bundles[b] - self.bundles[a];
                if is_effective(&self.spec, d) && is_immaculate(&self.spec, -d) {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    /// `δ(F) ⊆ Acyc`.
    pub fn is_strongly_exceptional(&self) -> Result<bool> {
        Ok(self.f_relation()?.pairs().all(|(a, b)| is_acyclic(&self.spec, self.bundles[b] - self.bundles[a])))
    }

    /// `Eff(σ) = F(σ)`.
    pub fn is_effective(&self) -> Result<bool> {
        Ok(self.eff_relation() == self.f_relation()?)
    }

    /// `F ∖ Eff` as 1-based position pairs.
    pub fn proper_f(&self) -> Result<BTreeSet<(usize, usize)>> {
        Ok(self.f_relation()?.difference(&self.eff_relation()).one_based())
    }

    pub fn is_maximal(&self) -> bool {
        self.len() == self.spec.rank_k0()
    }

    /// Linear extensions of `P` in lexicographic order (candidates ranked by
    /// the vertical-lex key), each re-verified, stopping after `limit`.
    pub fn exceptional_orders(&self, limit: usize) -> Result<OrderEnumeration> {
        let p = self.poset()?;
        let mut rank: Vec<usize> = (0..self.len()).collect();
        rank.sort_by_key(|&k| self.bundles[k].vertical_key());
        let mut out = OrderEnumeration { orders: Vec::new(), truncated: false };
        let mut placed = vec![false; self.len()];
        let mut prefix = Vec::with_capacity(self.len());
        self.extend_orders(&p, &rank, &mut placed, &mut prefix, limit, &mut out)?;
        Ok(out)
    }

    fn extend_orders(
        &self,
        p: &Relation,
        rank: &[usize],
        placed: &mut [bool],
        prefix: &mut Vec<usize>,
        limit: usize,
        out: &mut OrderEnumeration,
    ) -> Result<()> {
        if prefix.len() == self.len() {
            if out.orders.len() == limit {
                out.truncated = true;
                return Ok(());
            }
            let bundles = prefix.iter().map(|&k| self.bundles[k]).collect();
            out.orders.push(ExceptionalSequence::new(self.spec.clone(), bundles)?);
            return Ok(());
        }
        for &c in rank {
            if placed[c] || (0..self.len()).any(|a| a != c && !placed[a] && p.contains(a, c)) {
                continue;
            }
            placed[c] = true;
            prefix.push(c);
            self.extend_orders(p, rank, placed, prefix, limit, out)?;
            prefix.pop();
            placed[c] = false;
            if out.truncated {
                break;
            }
        }
        Ok(())
    }
}

/// Result of [`ExceptionalSet::exceptional_orders`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderEnumeration {
    pub orders: Vec<ExceptionalSequence>,
    pub truncated: bool,
}

/// `(A, B) ∈ F ⟺ B − A ∉ Imm`.
fn f_definition(spec: &VarietySpec, bundles: &[LineBundle]) -> Relation {
    let n = bundles.len();
    let mut r = Relation::diagonal(n);
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            if !is_immaculate(spec, bundles[b] - bundles[a]) {
                r.insert(a, b);
            }
        }
    }
    r
}

/// `(A, B) ∈ F ⟺ B − A = 0, or −(B − A) ∈ Imm and B − A ∉ Imm`.
fn f_lemma(spec: &VarietySpec, bundles: &[LineBundle]) -> Relation {
    let n = bundles.len();
    let mut r = Relation::diagonal(n);
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            let d = bundles[b] - bundles[a];
            if is_immaculate(spec, -d) && !is_immaculate(spec, d) {
                r.insert(a, b);
            }
        }
    }
    r
}

fn first_linear_extension(f: &Relation, bundles: &[LineBundle]) -> Vec<usize> {
    let n = bundles.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&c| !placed[c] && (0..n).all(|a| a == c || placed[a] || !f.contains(a, c)))
            .min_by_key(|&c| bundles[c].vertical_key())
            .expect("acyclic relation has a minimal element");
        placed[next] = true;
        order.push(next);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lbs(v: &[(i64, i64)]) -> Vec<LineBundle> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn x2() -> VarietySpec {
        VarietySpec::cotangent(2).unwrap()
    }

    const CLASS2_FIRST: [(i64, i64); 6] = [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (1, 3)];
    const CLASS3_FOURTH: [(i64, i64); 6] = [(0, 0), (1, 0), (-1, 1), (2, 0), (0, 1), (1, 1)];

    #[test]
    fn sequence_examples() {
        let t = VarietySpec::toric(3, 2, &[0, -1]).unwrap();
        let beilinson: Vec<LineBundle> = (0..=3).map(|i| LineBundle::new(i, 0)).collect();
        assert!(is_exceptional_sequence(&t, &beilinson).unwrap());
        assert!(is_exceptional_sequence(&x2(), &lbs(&CLASS2_FIRST)).unwrap());
        assert_eq!(
            is_exceptional_sequence(&x2(), &lbs(&[(0, 0), (0, 0)])),
            Err(Error::Duplicate(LineBundle::ZERO))
        );
        assert!(ExceptionalSequence::new(x2(), lbs(&[(1, 0), (0, 0)])).is_err());
    }

    #[test]
    fn delta_examples() {
        let s = ExceptionalSet::new(x2(), lbs(&CLASS2_FIRST)).unwrap();
        assert_eq!(s.delta(0, 0).unwrap(), LineBundle::ZERO);
        assert_eq!(s.delta(0, 5).unwrap(), LineBundle::new(1, 3));
        assert!(is_immaculate(&x2(), LineBundle::new(-1, -3)));
        assert_eq!(s.delta(1, 2).unwrap(), LineBundle::new(1, 0));
    }

    #[test]
    fn f_relation_examples() {
        let s = ExceptionalSet::new(x2(), lbs(&CLASS3_FOURTH)).unwrap();
        let f = s.f_relation().unwrap();
        assert!(f.contains(0, 1) && f.contains(4, 5));
        let single = ExceptionalSet::new(x2(), lbs(&[(3, 3)])).unwrap();
        assert_eq!(single.f_relation().unwrap(), Relation::diagonal(1));
        let c2 = ExceptionalSet::new(x2(), lbs(&CLASS2_FIRST)).unwrap();
        assert!(c2.proper_f().unwrap().is_empty());
    }

    #[test]
    fn hull_examples() {
        assert_eq!(Relation::empty(3).transitive_hull(), Relation::diagonal(3));
        let chain = Relation::from_pairs(3, [(0, 1), (1, 2)]).transitive_hull();
        assert!(chain.contains(0, 2));
        let s = ExceptionalSet::new(x2(), lbs(&CLASS3_FOURTH)).unwrap();
        let p = s.poset().unwrap();
        assert!(s.eff_relation().is_subset(&p) && s.f_relation().unwrap().is_subset(&p));
        // P is the intersection of all exceptional orders.
        let orders = permutation_orders(&s);
        for a in 0..6 {
            for b in (0..6).filter(|&b| b != a) {
                let everywhere = orders.iter().all(|o| o.iter().position(|&x| x == a) < o.iter().position(|&x| x == b));
                assert_eq!(p.contains(a, b), everywhere, "({a},{b})");
            }
        }
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        permutations(n - 1)
            .into_iter()
            .flat_map(|p| (0..n).map(move |k| {
                let mut q = p.clone();
                q.insert(k, n - 1);
                q
            }))
            .collect()
    }

    fn permutation_orders(s: &ExceptionalSet) -> Vec<Vec<usize>> {
        permutations(s.len())
            .into_iter()
            .filter(|o| {
                let b: Vec<LineBundle> = o.iter().map(|&k| s.bundles()[k]).collect();
                is_exceptional_sequence(s.spec(), &b).unwrap()
            })
            .collect()
    }

    #[test]
    fn extension_examples() {
        let r = extend_partial_order(&Relation::diagonal(2), (0, 1)).unwrap();
        assert!(r.contains(0, 1) && r.is_partial_order());
        assert_eq!(extend_partial_order(&r, (1, 0)), Err(Error::ReversedPair(1, 0)));
    }

    #[test]
    fn linear_extensions_equal_exceptional_permutations() {
        for seq in [&CLASS2_FIRST[..], &CLASS3_FOURTH[..]] {
            let s = ExceptionalSet::new(x2(), lbs(seq)).unwrap();
            let ext = s.exceptional_orders(10_000).unwrap();
            assert!(!ext.truncated);
            let from_ext: BTreeSet<Vec<LineBundle>> = ext.orders.iter().map(|o| o.bundles().to_vec()).collect();
            let brute: BTreeSet<Vec<LineBundle>> = permutation_orders(&s)
                .into_iter()
                .map(|o| o.iter().map(|&k| s.bundles()[k]).collect())
                .collect();
            assert_eq!(from_ext, brute);
        }
    }

    #[test]
    fn total_order_has_one_extension_and_truncation_flags() {
        let t = VarietySpec::toric(2, 1, &[0, 0]).unwrap();
        let chain = ExceptionalSet::new(t, lbs(&[(0, 0), (1, 0), (2, 0)])).unwrap();
        assert_eq!(chain.exceptional_orders(10).unwrap().orders.len(), 1);
        let s = ExceptionalSet::new(x2(), lbs(&CLASS2_FIRST)).unwrap();
        let all = s.exceptional_orders(10_000).unwrap().orders.len();
        assert!(all > 1);
        let cut = s.exceptional_orders(1).unwrap();
        assert!(cut.truncated && cut.orders.len() == 1);
    }

    #[test]
    fn class_one_orders_include_both_lex_orders() {
        let s = ExceptionalSet::new(x2(), lbs(&[(0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (3, 1)])).unwrap();
        let orders = s.exceptional_orders(10_000).unwrap().orders;
        let mut vertical = s.bundles().to_vec();
        vertical.sort_by_key(|l| l.vertical_key());
        let mut horizontal = s.bundles().to_vec();
        horizontal.sort_by_key(|l| l.horizontal_key());
        assert!(orders.iter().any(|o| o.bundles() == vertical.as_slice()));
        assert!(orders.iter().any(|o| o.bundles() == horizontal.as_slice()));
    }

    #[test]
    fn strong_and_effective_examples() {
        let c2 = ExceptionalSet::new(x2(), lbs(&CLASS2_FIRST)).unwrap();
        assert!(c2.is_strongly_exceptional().unwrap() && c2.is_effective().unwrap());
        let f2 = VarietySpec::toric(1, 1, &[0, -2]).unwrap();
        let fig = ExceptionalSet::new(f2, lbs(&[(0, 0), (-2, 1), (-1, 1), (-1, 2)])).unwrap();
        assert!(fig.is_maximal());
        assert!(fig.is_effective().unwrap());
        assert!(!fig.is_strongly_exceptional().unwrap());
        let single = ExceptionalSet::new(x2(), lbs(&[(0, 0)])).unwrap();
        assert!(single.is_strongly_exceptional().unwrap());
    }

    #[test]
    fn maximality() {
        assert!(ExceptionalSet::new(x2(), lbs(&CLASS2_FIRST)).unwrap().is_maximal());
        let short = ExceptionalSet::new(x2(), lbs(&[(0, 0), (1, 0), (2, 0)])).unwrap();
        assert!(!short.is_maximal());
    }

    #[test]
    fn cycles_are_reported() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let c = r.find_cycle().unwrap();
        assert_eq!(c.len(), 3);
        assert!(Relation::from_pairs(3, [(0, 1), (1, 2)]).find_cycle().is_none());
    }

    proptest! {
        #[test]
        fn extension_stays_antisymmetric(
            edges in proptest::collection::vec((0usize..7, 0usize..7), 0..12),
            forced in (0usize..7, 0usize..7),
        ) {
            // Orient edges forward to obtain a partial order.
            let base = Relation::from_pairs(7, edges.into_iter().map(|(a, b)| (a.min(b), a.max(b)))).transitive_hull();
            prop_assume!(base.is_partial_order());
            match extend_partial_order(&base, forced) {
                Ok(r) => {
                    prop_assert!(r.is_partial_order());
                    prop_assert!(base.is_subset(&r) && r.contains(forced.0, forced.1));
                }
                Err(e) => prop_assert_eq!(e, Error::ReversedPair(forced.0, forced.1)),
            }
        }

        #[test]
        fn random_order_exceptional_iff_contains_f(perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
            for seq in [&CLASS2_FIRST[..], &CLASS3_FOURTH[..]] {
                let s = ExceptionalSet::new(x2(), lbs(seq)).unwrap();
                let f = s.f_relation().unwrap();
                let b: Vec<LineBundle> = perm.iter().map(|&k| s.bundles()[k]).collect();
                prop_assert_eq!(is_exceptional_sequence(s.spec(), &b).unwrap(), f.respected_by(&perm));
            }
        }
    }
}
