//! Deciding whether a bipartite monoid is a quotient, by searching its
//! construction sequences.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::monoid::{canonical_key, kernel, meximal_set, reduce, submonoid, BipartiteMonoid};
use crate::transition::{pair_product, OptionSet, TransitionPair, MAX_ORDER};

/// Isomorphism-invariant summary used to skip most canonical-key lookups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Fingerprint {
    size: usize,
    p_len: usize,
    kernel_len: usize,
    /// Sorted `(x ∈ P, x² ∈ P, index, period)` over all elements.
    elements: Vec<(bool, bool, u8, u8)>,
}

fn fingerprint(b: &BipartiteMonoid) -> Fingerprint {
    let m = b.monoid();
    let mut elements: Vec<(bool, bool, u8, u8)> = (0..b.size())
        .map(|x| {
            let (i, p) = m.index_period(x);
            (b.in_p(x), b.in_p(m.mul(x, x)), i.min(255) as u8, p.min(255) as u8)
        })
        .collect();
    elements.sort_unstable();
    Fingerprint { size: b.size(), p_len: b.p_len(), kernel_len: kernel(m).len(), elements }
}

/// Canonical keys of the quotients found so far.
#[derive(Clone, Debug, Default)]
pub struct KnownQuotients {
    keys: FxHashSet<Vec<u8>>,
    prints: FxHashSet<Fingerprint>,
}

impl KnownQuotients {
    /// Just the trivial quotient.
    pub fn new() -> Self {
        let mut k = KnownQuotients::default();
        k.insert(&BipartiteMonoid::trivial());
        k
    }

    pub fn insert(&mut self, b: &BipartiteMonoid) {
        self.prints.insert(fingerprint(b));
        self.keys.insert(canonical_key(b));
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Whether the reduced `b` is a known quotient.
    pub fn contains(&self, b: &BipartiteMonoid) -> bool {
        self.prints.contains(&fingerprint(b)) && self.keys.contains(&canonical_key(b))
    }

    pub fn contains_key(&self, key: &[u8]) -> bool {
        self.keys.contains(key)
    }

    pub fn contains_reduction(&self, b: &BipartiteMonoid) -> bool {
        self.contains(&reduce(b).reduced)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Search nodes per candidate before giving up.
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientVerdict {
    Quotient {
        sequence: Vec<usize>,
    },
    NotQuotient,
    /// The search hit its node limit.
    Unknown,
}

impl QuotientVerdict {
    pub fn is_quotient(&self) -> bool {
        matches!(self, QuotientVerdict::Quotient { .. })
    }
}

pub fn is_quotient(b: &BipartiteMonoid, known: &KnownQuotients) -> QuotientVerdict {
    is_quotient_with(b, known, SearchLimits::default())
}

/// Depth-first search over construction sequences. Each step adds a
/// generator `x ∉ S`, requires the new slice to reduce to a known quotient
/// (unless it is everything), and extends the partial minimex algebra,
/// rejecting as soon as any pair breaks parity. The partial algebra is
/// closed and generated by pairs whose options lie in earlier slices, so
/// once the slice is everything it is complete and well-founded too.
pub fn is_quotient_with(
    b: &BipartiteMonoid,
    known: &KnownQuotients,
    limits: SearchLimits,
) -> QuotientVerdict {
    let n = b.size();
    if n > MAX_ORDER {
        return QuotientVerdict::Unknown;
    }
    if b.in_p(b.identity()) {
        return QuotientVerdict::NotQuotient;
    }
    if n == 1 {
        return QuotientVerdict::Quotient { sequence: vec![] };
    }
    let mut s = Searcher::new(b, known, limits);
    let start = Partial::start(b);
    match s.dfs(&start, &mut Vec::new()) {
        Some(seq) => QuotientVerdict::Quotient { sequence: seq },
        None if s.exhausted => QuotientVerdict::Unknown,
        None => QuotientVerdict::NotQuotient,
    }
}

/// Whether the minimex algebra along `sequence` satisfies parity; for a
/// construction sequence this is validity.
pub fn minimex_parity_along(b: &BipartiteMonoid, sequence: &[usize]) -> bool {
    let ctx = Ctx::new(b);
    let mut cur = Partial::start(b);
    for &x in sequence {
        match cur.extend(&ctx, x) {
            Some(next) => cur = next,
            None => return false,
        }
    }
    true
}

struct Ctx<'a> {
    b: &'a BipartiteMonoid,
    mx: Vec<OptionSet>,
    pmask: OptionSet,
}

impl<'a> Ctx<'a> {
    fn new(b: &'a BipartiteMonoid) -> Self {
        Ctx {
            b,
            mx: (0..b.size()).map(|x| meximal_set(b, x).into_iter().collect()).collect(),
            pmask: OptionSet::of_bits(b.pset_bits()),
        }
    }

    fn parity(&self, p: &TransitionPair) -> bool {
        self.b.in_p(p.value) == (!p.options.is_empty() && !p.options.intersects(self.pmask))
    }
}

#[derive(Clone)]
struct Partial {
    slice: OptionSet,
    pairs: Vec<TransitionPair>,
    gens: Vec<TransitionPair>,
}

impl Partial {
    fn start(b: &BipartiteMonoid) -> Self {
        let id = TransitionPair::identity(b);
        Partial { slice: OptionSet::from_iter([b.identity()]), pairs: vec![id], gens: vec![] }
    }

    /// Adjoins `(x, M_x ∩ S)`; `None` when some new pair breaks parity.
    fn extend(&self, ctx: &Ctx, x: usize) -> Option<Partial> {
        let b = ctx.b;
        let g = TransitionPair { value: x, options: OptionSet(ctx.mx[x].0 & self.slice.0) };
        if !ctx.parity(&g) {
            return None;
        }
        let mut seen: FxHashSet<TransitionPair> = self.pairs.iter().copied().collect();
        let mut pairs = self.pairs.clone();
        let mut frontier = self.pairs.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in frontier {
                let q = pair_product(b, p, g);
                if seen.insert(q) {
                    if !ctx.parity(&q) {
                        return None;
                    }
                    next.push(q);
                }
            }
            pairs.extend_from_slice(&next);
            frontier = next;
        }
        let mut slice = self.slice;
        for p in &pairs {
            slice.insert(p.value);
        }
        let mut gens = self.gens.clone();
        gens.push(g);
        gens.sort_unstable();
        Some(Partial { slice, pairs, gens })
    }
}

struct Searcher<'a> {
    ctx: Ctx<'a>,
    known: &'a KnownQuotients,
    full: OptionSet,
    slice_ok: FxHashMap<u64, bool>,
    visited: FxHashSet<Vec<TransitionPair>>,
    nodes: usize,
    limits: SearchLimits,
    exhausted: bool,
}

impl<'a> Searcher<'a> {
    fn new(b: &'a BipartiteMonoid, known: &'a KnownQuotients, limits: SearchLimits) -> Self {
        Searcher {
            ctx: Ctx::new(b),
            known,
            full: OptionSet::from_iter(0..b.size()),
            slice_ok: FxHashMap::default(),
            visited: FxHashSet::default(),
            nodes: 0,
            limits,
            exhausted: false,
        }
    }

    fn slice_known(&mut self, slice: OptionSet) -> bool {
        if let Some(&v) = self.slice_ok.get(&slice.0) {
            return v;
        }
        let elems: Vec<usize> = slice.iter().collect();
        let sub = submonoid(self.ctx.b, &elems).sub;
        let v = self.known.contains_reduction(&sub);
        self.slice_ok.insert(slice.0, v);
        v
    }

    fn dfs(&mut self, cur: &Partial, seq: &mut Vec<usize>) -> Option<Vec<usize>> {
        let b = self.ctx.b;
        for x in 0..b.size() {
            if cur.slice.contains(x) {
                continue;
            }
            // the first generator has options inside {1}, so it must be in P
            if seq.is_empty() && !b.in_p(x) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limits.max_nodes {
                self.exhausted = true;
                return None;
            }
            let Some(next) = cur.extend(&self.ctx, x) else { continue };
            seq.push(x);
            if next.slice == self.full {
                return Some(seq.clone());
            }
            if self.visited.insert(next.gens.clone()) && self.slice_known(next.slice) {
                if let Some(found) = self.dfs(&next, seq) {
                    return Some(found);
                }
                if self.exhausted {
                    return None;
                }
            }
            seq.pop();
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_r, make_tn, t_z, T_A};
    use crate::monoid::Monoid;

    fn known_through_t2() -> KnownQuotients {
        let mut k = KnownQuotients::new();
        k.insert(&make_tn(1).bm);
        k.insert(&make_tn(2).bm);
        k
    }

    #[test]
    fn trivial_and_t1() {
        let k = KnownQuotients::new();
        assert!(is_quotient(&BipartiteMonoid::trivial(), &k).is_quotient());
        assert_eq!(is_quotient(&make_tn(1).bm, &k), QuotientVerdict::Quotient { sequence: vec![1] });
    }

    #[test]
    fn t2_sequence() {
        let mut k = KnownQuotients::new();
        k.insert(&make_tn(1).bm);
        assert_eq!(
            is_quotient(&make_tn(2).bm, &k),
            QuotientVerdict::Quotient { sequence: vec![T_A, t_z(2)] }
        );
        assert!(minimex_parity_along(&make_tn(2).bm, &[T_A, t_z(2)]));
    }

    #[test]
    fn r8_and_t3() {
        let k = known_through_t2();
        assert!(is_quotient(&make_r(2).bm, &k).is_quotient());
        assert!(is_quotient(&make_tn(3).bm, &k).is_quotient());
    }

    #[test]
    fn semilattice_is_not() {
        let m = Monoid::from_rows(vec![vec![0, 1], vec![1, 1]], 0, vec![1]).unwrap();
        let b = BipartiteMonoid::new(m, [1]).unwrap();
        assert_eq!(is_quotient(&b, &KnownQuotients::new()), QuotientVerdict::NotQuotient);
    }

    #[test]
    fn known_lookup_is_up_to_iso() {
        let k = known_through_t2();
        let t2 = make_tn(2).bm;
        let perm = vec![3, 5, 0, 1, 2, 4];
        assert!(k.contains(&t2.relabel(&perm)));
        assert!(!k.contains(&make_r(2).bm));
    }
}
