//! Transition algebras: sets of pairs `(x, E)` closed under
//! `(x,E)(y,F) = (xy, xF ∪ yE)`, their validity conditions, minimex
//! algebras, and realization by games.

mod realize;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monoid::{meximal_set, BipartiteMonoid, DecodeError, MonoidJson};

pub use realize::{realize_games, Realization, RealizeError};

/// Largest monoid on which option sets fit in one word.
pub const MAX_ORDER: usize = 64;

/// A set of elements of a monoid with at most [`MAX_ORDER`] elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OptionSet(pub u64);

impl OptionSet {
    pub const EMPTY: OptionSet = OptionSet(0);

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < MAX_ORDER);
        self.0 |= 1 << x;
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, o: OptionSet) -> OptionSet {
        OptionSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersects(self, o: OptionSet) -> bool {
        self.0 & o.0 != 0
    }

    #[inline]
    pub fn is_subset(self, o: OptionSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// `x·E`.
    pub fn translate(self, b: &BipartiteMonoid, x: usize) -> OptionSet {
        let mut out = OptionSet::EMPTY;
        for y in self.iter() {
            out.insert(b.mul(x, y));
        }
        out
    }

    pub fn of_bits(bits: &[bool]) -> OptionSet {
        let mut s = OptionSet::EMPTY;
        for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            s.insert(i);
        }
        s
    }
}

impl FromIterator<usize> for OptionSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = OptionSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for OptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionPair {
    pub value: usize,
    pub options: OptionSet,
}

impl TransitionPair {
    pub fn identity(b: &BipartiteMonoid) -> Self {
        TransitionPair { value: b.identity(), options: OptionSet::EMPTY }
    }
}

impl fmt::Display for TransitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opts: Vec<String> = self.options.iter().map(|x| x.to_string()).collect();
        write!(f, "({}, {{{}}})", self.value, opts.join(","))
    }
}

pub fn pair_product(b: &BipartiteMonoid, p: TransitionPair, q: TransitionPair) -> TransitionPair {
    TransitionPair {
        value: b.mul(p.value, q.value),
        options: q.options.translate(b, p.value).union(p.options.translate(b, q.value)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionAlgebra {
    pub base: BipartiteMonoid,
    pub pairs: BTreeSet<TransitionPair>,
    pub generator_pairs: Vec<TransitionPair>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransitionError {
    #[error("monoid has {0} elements; option sets support at most {MAX_ORDER}")]
    TooLarge(usize),
    #[error("closure exceeded {0} pairs")]
    CapExceeded(usize),
    #[error("element {0} is out of range")]
    OutOfRange(usize),
}

pub const DEFAULT_PAIR_CAP: usize = 1 << 22;

pub fn generate_algebra(
    base: &BipartiteMonoid,
    gens: &[TransitionPair],
) -> Result<TransitionAlgebra, TransitionError> {
    generate_algebra_capped(base, gens, DEFAULT_PAIR_CAP)
}

/// Least closed set containing `gens` and `(1,∅)`.
pub fn generate_algebra_capped(
    base: &BipartiteMonoid,
    gens: &[TransitionPair],
    cap: usize,
) -> Result<TransitionAlgebra, TransitionError> {
    check_pairs(base, gens)?;
    let pairs = closure(base, gens, cap)?;
    Ok(TransitionAlgebra {
        base: base.clone(),
        pairs: pairs.into_iter().collect(),
        generator_pairs: gens.to_vec(),
    })
}

fn check_pairs(base: &BipartiteMonoid, pairs: &[TransitionPair]) -> Result<(), TransitionError> {
    let n = base.size();
    if n > MAX_ORDER {
        return Err(TransitionError::TooLarge(n));
    }
    for p in pairs {
        if p.value >= n {
            return Err(TransitionError::OutOfRange(p.value));
        }
        if let Some(x) = p.options.iter().find(|&x| x >= n) {
            return Err(TransitionError::OutOfRange(x));
        }
    }
    Ok(())
}

fn closure(
    base: &BipartiteMonoid,
    gens: &[TransitionPair],
    cap: usize,
) -> Result<HashSet<TransitionPair>, TransitionError> {
    let id = TransitionPair::identity(base);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for &g in gens {
            let q = pair_product(base, p, g);
            if seen.insert(q) {
                if seen.len() > cap {
                    return Err(TransitionError::CapExceeded(cap));
                }
                queue.push_back(q);
            }
        }
    }
    Ok(seen)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    Parity(TransitionPair),
    Missing(usize),
    NotClosed { left: TransitionPair, right: TransitionPair },
    NoRankZeroSeed,
    Unranked(usize),
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Parity(p) => write!(f, "parity fails at {p}"),
            Counterexample::Missing(x) => write!(f, "no pair has value {x}"),
            Counterexample::NotClosed { left, right } => {
                write!(f, "product of {left} and {right} is missing")
            }
            Counterexample::NoRankZeroSeed => write!(f, "identity has no pair (1, {{}})"),
            Counterexample::Unranked(x) => write!(f, "{x} receives no rank"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub parity_ok: bool,
    pub completeness_ok: bool,
    pub closure_ok: bool,
    pub wellfounded_ok: bool,
    /// Least rank of each element, where one exists.
    pub rank: Vec<Option<usize>>,
    pub counterexamples: Vec<Counterexample>,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.parity_ok && self.completeness_ok && self.closure_ok && self.wellfounded_ok
    }
}

/// Per-kind limit on reported counterexamples.
const MAX_REPORTED: usize = 16;

/// `x ∈ P ⇔ E ≠ ∅ and E ∩ P = ∅`.
pub fn parity_holds(b: &BipartiteMonoid, p: TransitionPair, pmask: OptionSet) -> bool {
    b.in_p(p.value) == (!p.options.is_empty() && !p.options.intersects(pmask))
}

/// Checks parity, completeness, closure and well-foundedness independently.
///
/// Well-foundedness is decided by the least fixed point `S₀ = {x : (x,∅) ∈ T}`,
/// `S_{k+1} = S_k ∪ {x : some (x,E) has E ⊆ S_k}`: a rank function exists iff
/// this saturates `Q` with the identity in `S₀`, and the stage at which `x`
/// enters is its least possible rank.
pub fn validate(t: &TransitionAlgebra) -> ValidityReport {
    let b = &t.base;
    let n = b.size();
    let pmask = OptionSet::of_bits(b.pset_bits());
    let mut cex = Vec::new();

    let mut parity_ok = true;
    for &p in &t.pairs {
        if !parity_holds(b, p, pmask) {
            if parity_ok || cex.len() < MAX_REPORTED {
                cex.push(Counterexample::Parity(p));
            }
            parity_ok = false;
        }
    }

    let mut present = vec![false; n];
    for p in &t.pairs {
        present[p.value] = true;
    }
    let missing: Vec<usize> = (0..n).filter(|&x| !present[x]).collect();
    cex.extend(missing.iter().take(MAX_REPORTED).map(|&x| Counterexample::Missing(x)));

    let closure_ok = check_closed(t, &mut cex);

    let mut rank: Vec<Option<usize>> = vec![None; n];
    let seed = t.pairs.contains(&TransitionPair::identity(b));
    if seed {
        let mut level = 0;
        loop {
            let known = OptionSet::from_iter((0..n).filter(|&x| rank[x].is_some()));
            let fresh: Vec<usize> = t
                .pairs
                .iter()
                .filter(|p| rank[p.value].is_none() && p.options.is_subset(known))
                .map(|p| p.value)
                .collect();
            if fresh.is_empty() {
                break;
            }
            for x in fresh {
                rank[x] = Some(level);
            }
            level += 1;
        }
    } else {
        cex.push(Counterexample::NoRankZeroSeed);
    }
    let unranked: Vec<usize> = (0..n).filter(|&x| rank[x].is_none()).collect();
    if seed {
        cex.extend(unranked.iter().take(MAX_REPORTED).map(|&x| Counterexample::Unranked(x)));
    }

    ValidityReport {
        parity_ok,
        completeness_ok: missing.is_empty(),
        closure_ok,
        wellfounded_ok: seed && unranked.is_empty(),
        rank,
        counterexamples: cex,
    }
}

fn check_closed(t: &TransitionAlgebra, cex: &mut Vec<Counterexample>) -> bool {
    let b = &t.base;
    // quick path: the stored set is exactly the closure of its generators
    if !t.generator_pairs.is_empty() && check_pairs(b, &t.generator_pairs).is_ok() {
        if let Ok(c) = closure(b, &t.generator_pairs, t.pairs.len() + 1) {
            if c.len() == t.pairs.len() && c.iter().all(|p| t.pairs.contains(p)) {
                return true;
            }
        }
    }
    let set: HashSet<TransitionPair> = t.pairs.iter().copied().collect();
    let mut ok = true;
    for &p in &t.pairs {
        for &q in t.pairs.range(p..) {
            if !set.contains(&pair_product(b, p, q)) {
                if cex.len() < 4 * MAX_REPORTED {
                    cex.push(Counterexample::NotClosed { left: p, right: q });
                }
                ok = false;
            }
        }
    }
    ok
}

/// Generator pairs `(x_i, M_{x_i} ∩ S_{i-1})` of the minimex algebra for a
/// generator sequence, with meximal sets taken in all of `b`.
pub fn minimex_generators(b: &BipartiteMonoid, sequence: &[usize]) -> Vec<TransitionPair> {
    let mut out = Vec::with_capacity(sequence.len());
    for (i, &x) in sequence.iter().enumerate() {
        let slice = b.monoid().closure(sequence[..i].iter().copied());
        let e = meximal_set(b, x).into_iter().filter(|&y| slice[y]).collect();
        out.push(TransitionPair { value: x, options: e });
    }
    out
}

pub fn minimex_algebra_for(
    b: &BipartiteMonoid,
    sequence: &[usize],
) -> Result<TransitionAlgebra, TransitionError> {
    generate_algebra(b, &minimex_generators(b, sequence))
}

pub fn minimex_algebra(
    scheme: &crate::classifier::ConstructionScheme,
) -> Result<TransitionAlgebra, TransitionError> {
    minimex_algebra_for(&scheme.bm, &scheme.sequence)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub x: usize,
    #[serde(rename = "E")]
    pub e: Vec<usize>,
}

/// `{ "monoid": <monoid>, "pairs": [{"x","E"}], "generators": [...] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub monoid: MonoidJson,
    #[serde(default)]
    pub pairs: Vec<PairJson>,
    #[serde(default)]
    pub generators: Vec<PairJson>,
}

#[derive(Debug, Error)]
pub enum TransitionJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Monoid(#[from] DecodeError),
    #[error("{0}")]
    Pairs(#[from] TransitionError),
}

fn to_pair(p: &PairJson, n: usize) -> Result<TransitionPair, TransitionError> {
    if n > MAX_ORDER {
        return Err(TransitionError::TooLarge(n));
    }
    if p.x >= n {
        return Err(TransitionError::OutOfRange(p.x));
    }
    if let Some(&y) = p.e.iter().find(|&&y| y >= n) {
        return Err(TransitionError::OutOfRange(y));
    }
    Ok(TransitionPair { value: p.x, options: p.e.iter().copied().collect() })
}

fn from_pair(p: &TransitionPair) -> PairJson {
    PairJson { x: p.value, e: p.options.iter().collect() }
}

impl TransitionJson {
    pub fn from_algebra(t: &TransitionAlgebra) -> Self {
        TransitionJson {
            monoid: MonoidJson::from_bm(&t.base),
            pairs: t.pairs.iter().map(from_pair).collect(),
            generators: t.generator_pairs.iter().map(from_pair).collect(),
        }
    }

    /// Decodes an algebra. With no explicit pairs, the pairs are generated
    /// from the generator list.
    pub fn into_algebra(self) -> Result<TransitionAlgebra, TransitionJsonError> {
        let base = self.monoid.into_bm()?;
        let n = base.size();
        let gens = self.generators.iter().map(|p| to_pair(p, n)).collect::<Result<Vec<_>, _>>()?;
        if self.pairs.is_empty() {
            return Ok(generate_algebra(&base, &gens)?);
        }
        let pairs = self.pairs.iter().map(|p| to_pair(p, n)).collect::<Result<_, _>>()?;
        Ok(TransitionAlgebra { base, pairs, generator_pairs: gens })
    }

    pub fn parse(text: &str) -> Result<TransitionAlgebra, TransitionJsonError> {
        let j: TransitionJson = serde_json::from_str(text)?;
        j.into_algebra()
    }
}
