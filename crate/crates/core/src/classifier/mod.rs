//! Enumeration of misère quotients by construction schemes.
//!
//! A bipartite monoid is a quotient iff some construction sequence yields a
//! valid minimex algebra. The census grows one order at a time: every
//! bipartite monoid reachable from the trivial one by adjoining single
//! generators, with each intermediate stage reducing to a quotient already
//! found, is kept in a worklist (up to isomorphism); the reduced ones of
//! each order are tested with a search over construction sequences.
//!
//! Steps that no birthday-ordered generator list can produce are dropped:
//! the first slice is `Z2 = {1, a}`, the second reduces to `T2`, and slice
//! reductions never shrink. Without this the worklist fills with monoids
//! that reduce to `T1` and grows by an order of magnitude per level.

mod census;
mod extend;
mod search;

use std::fmt;

use thiserror::Error;

use crate::monoid::{meximal_set, submonoid, BipartiteMonoid};
use crate::transition::{OptionSet, MAX_ORDER};

pub use census::{
    enumerate_quotients, enumerate_quotients_with, Census, CensusEntry, CensusJson, EnumerateOptions,
    LevelStats,
};
pub use extend::{monoid_extensions, MAX_EXTENSION_ORDER};
pub use search::{is_quotient, is_quotient_with, KnownQuotients, QuotientVerdict, SearchLimits};

/// A bipartite monoid with a generator sequence whose proper initial slices
/// reduce to known quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionScheme {
    pub bm: BipartiteMonoid,
    pub sequence: Vec<usize>,
    /// `slices[i]` is the sorted element set of `S_i = ⟨x_1..x_i⟩`.
    pub slices: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("element {0} is out of range")]
    OutOfRange(usize),
    #[error("x_{0} already lies in the submonoid generated by the earlier terms")]
    Redundant(usize),
    #[error("the sequence does not generate the monoid")]
    NotGenerating,
    #[error("slice {0} does not reduce to a known quotient")]
    UnknownSlice(usize),
}

impl ConstructionScheme {
    /// The trivial scheme `({1}, ∅)`.
    pub fn trivial() -> Self {
        ConstructionScheme { bm: BipartiteMonoid::trivial(), sequence: vec![], slices: vec![vec![0]] }
    }

    /// Checks that the sequence generates `bm` with no redundant term.
    /// Whether the slices reduce to quotients is checked separately.
    pub fn new(bm: BipartiteMonoid, sequence: Vec<usize>) -> Result<Self, SchemeError> {
        let n = bm.size();
        let mut slices = Vec::with_capacity(sequence.len() + 1);
        let mut cur = bm.monoid().closure(std::iter::empty());
        slices.push(members(&cur));
        for (i, &x) in sequence.iter().enumerate() {
            if x >= n {
                return Err(SchemeError::OutOfRange(x));
            }
            if cur[x] {
                return Err(SchemeError::Redundant(i + 1));
            }
            cur = bm.monoid().closure(sequence[..=i].iter().copied());
            slices.push(members(&cur));
        }
        if !cur.iter().all(|&b| b) {
            return Err(SchemeError::NotGenerating);
        }
        let bm = bm.with_generators(sequence.clone());
        Ok(ConstructionScheme { bm, sequence, slices })
    }

    /// Checks that every proper slice reduces to a known quotient.
    pub fn check_slices(&self, known: &KnownQuotients) -> Result<(), SchemeError> {
        let k = self.sequence.len();
        for i in 0..k {
            let sub = submonoid(&self.bm, &self.sequence[..i]).sub;
            if !known.contains_reduction(&sub) {
                return Err(SchemeError::UnknownSlice(i));
            }
        }
        Ok(())
    }
}

fn members(bits: &[bool]) -> Vec<usize> {
    bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

impl fmt::Display for ConstructionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.sequence.iter().map(|x| x.to_string()).collect();
        write!(f, "order {} with sequence ({})", self.bm.size(), seq.join(", "))
    }
}

/// The minimex pair `(t, M_t ∩ Q)` of a new generator satisfies parity.
pub(crate) fn generator_parity(b: &BipartiteMonoid, below: OptionSet, x: usize) -> bool {
    let e: OptionSet = meximal_set(b, x).into_iter().filter(|&y| below.contains(y)).collect();
    let pmask = OptionSet::of_bits(b.pset_bits());
    if b.in_p(x) {
        !e.is_empty()
    } else {
        e.intersects(pmask)
    }
}

/// Every simple extension of `scheme` of order at most `max_order`: each
/// monoid `⟨Q ∪ {t}⟩` with `t ∉ Q`, paired with each `P⁺ ⊇ P` that adds only
/// new elements.
pub fn simple_extensions(scheme: &ConstructionScheme, max_order: usize) -> Vec<ConstructionScheme> {
    let q = scheme.bm.size();
    let mut out = Vec::new();
    let cap = max_order.min(MAX_ORDER);
    monoid_extensions(scheme.bm.monoid(), &scheme.sequence, cap, &mut |m| {
        for bm in p_choices(&scheme.bm, m) {
            let mut sequence = scheme.sequence.clone();
            sequence.push(q);
            out.push(ConstructionScheme::new(bm, sequence).expect("extension is generated"));
        }
    });
    out
}

/// `(Q⁺, P ∪ S)` for every `S` of new elements.
pub(crate) fn p_choices(base: &BipartiteMonoid, m: crate::monoid::Monoid) -> Vec<BipartiteMonoid> {
    let q = base.size();
    let extra = m.size() - q;
    let mut out = Vec::with_capacity(1 << extra);
    for bits in 0u64..(1u64 << extra) {
        let mut pset = base.pset_bits().to_vec();
        pset.extend((0..extra).map(|i| bits >> i & 1 == 1));
        out.push(BipartiteMonoid::from_bits(m.clone(), pset));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_tn, t_z, T_A};

    #[test]
    fn scheme_checks() {
        let t2 = make_tn(2).bm;
        let s = ConstructionScheme::new(t2.clone(), vec![T_A, t_z(2)]).unwrap();
        assert_eq!(s.slices.len(), 3);
        assert_eq!(s.slices[1], vec![0, 1]);
        assert_eq!(s.slices[2].len(), 6);
        assert_eq!(ConstructionScheme::new(t2.clone(), vec![T_A, 0]).unwrap_err(), SchemeError::Redundant(2));
        assert_eq!(ConstructionScheme::new(t2, vec![T_A]).unwrap_err(), SchemeError::NotGenerating);
    }

    #[test]
    fn trivial_extensions() {
        let t = ConstructionScheme::trivial();
        assert!(simple_extensions(&t, 1).is_empty());
        let exts = simple_extensions(&t, 2);
        // Z2 and the two-element semilattice, each with P⁺ = ∅ or {t}
        assert_eq!(exts.len(), 4);
        assert!(exts.iter().all(|e| e.sequence == vec![1]));
    }
}
