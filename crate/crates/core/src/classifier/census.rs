use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::extend::monoid_extensions;
use super::search::{is_quotient_with, minimex_parity_along, KnownQuotients, QuotientVerdict, SearchLimits};
use super::{generator_parity, p_choices, ConstructionScheme};
use crate::monoid::{canonical_form, reduce, BipartiteMonoid, MonoidJson};
use crate::transition::{OptionSet, MAX_ORDER};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub key: Vec<u8>,
    /// Canonically relabelled representative, identity first.
    pub bm: BipartiteMonoid,
    /// A construction sequence with a valid minimex algebra.
    pub sequence: Vec<usize>,
}

impl CensusEntry {
    pub fn key_hex(&self) -> String {
        self.key.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn scheme(&self) -> ConstructionScheme {
        ConstructionScheme::new(self.bm.clone(), self.sequence.clone())
            .expect("census sequences generate their monoid")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub order: usize,
    /// Distinct candidates of this order reached by simple extensions.
    pub candidates: usize,
    /// Reduced candidates put to the quotient test.
    pub tested: usize,
    /// Candidates kept for further extension.
    pub worklist: usize,
    pub millis: u128,
}

#[derive(Clone, Debug, Default)]
pub struct Census {
    pub max_order: usize,
    pub classes: BTreeMap<usize, Vec<CensusEntry>>,
    pub counts: BTreeMap<usize, usize>,
    /// False when some search limit was hit; counts are then lower bounds.
    pub complete: bool,
    pub stats: Vec<LevelStats>,
}

impl Census {
    pub fn count(&self, order: usize) -> usize {
        self.counts.get(&order).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CensusEntry> {
        self.classes.values().flatten()
    }

    pub fn known(&self) -> KnownQuotients {
        let mut k = KnownQuotients::new();
        for e in self.entries() {
            k.insert(&e.bm);
        }
        k
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub limits: SearchLimits,
    /// Cap on the worklist at any one order.
    pub max_worklist: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { limits: SearchLimits::default(), max_worklist: 5_000_000 }
    }
}

pub fn enumerate_quotients(n: usize) -> Census {
    enumerate_quotients_with(n, EnumerateOptions::default(), &mut |_| {})
}

#[derive(Clone)]
struct Item {
    key: Vec<u8>,
    bm: BipartiteMonoid,
    sequence: Vec<usize>,
    /// Order of the reduction.
    reduced_order: usize,
}

/// Runs the census through order `n`, calling `on_level` after each order
/// with the census so far.
pub fn enumerate_quotients_with(
    n: usize,
    opts: EnumerateOptions,
    on_level: &mut dyn FnMut(&Census),
) -> Census {
    let n = n.min(MAX_ORDER);
    let mut census = Census { max_order: n, complete: true, ..Census::default() };
    let mut known = KnownQuotients::new();
    // buckets[s]: distinct candidates of order s, in discovery order
    let mut buckets: Vec<Vec<Item>> = vec![Vec::new(); n + 1];
    let mut seen: Vec<FxHashSet<Vec<u8>>> = vec![FxHashSet::default(); n + 1];
    let trivial = BipartiteMonoid::trivial();
    let mut level: Vec<Item> = vec![Item { key: vec![], bm: trivial, sequence: vec![], reduced_order: 1 }];

    for s in 1..=n {
        let started = Instant::now();
        let mut stats = LevelStats { order: s, ..LevelStats::default() };
        if s > 1 {
            let cands = std::mem::take(&mut buckets[s]);
            seen[s] = FxHashSet::default();
            stats.candidates = cands.len();
            let tests: Vec<&Item> =
                cands.iter().filter(|c| c.reduced_order == s && !c.bm.in_p(c.bm.identity())).collect();
            stats.tested = tests.len();
            let verdicts: Vec<QuotientVerdict> = tests
                .par_iter()
                .map(|c| {
                    if minimex_parity_along(&c.bm, &c.sequence) {
                        QuotientVerdict::Quotient { sequence: c.sequence.clone() }
                    } else {
                        is_quotient_with(&c.bm, &known, opts.limits)
                    }
                })
                .collect();
            let mut found = Vec::new();
            for (c, v) in tests.iter().zip(verdicts) {
                match v {
                    QuotientVerdict::Quotient { sequence } => found.push(entry(c, &sequence)),
                    QuotientVerdict::Unknown => census.complete = false,
                    QuotientVerdict::NotQuotient => {}
                }
            }
            found.sort_by(|a, b| a.key.cmp(&b.key));
            for e in &found {
                known.insert(&e.bm);
            }
            census.counts.insert(s, found.len());
            census.classes.insert(s, found);
            level = cands
                .into_iter()
                .filter(|c| {
                    if c.reduced_order == s {
                        known.contains_key(&c.key)
                    } else {
                        known.contains_reduction(&c.bm)
                    }
                })
                .collect();
        }
        if level.len() > opts.max_worklist {
            census.complete = false;
            level.truncate(opts.max_worklist);
        }
        stats.worklist = level.len();
        if s < n {
            let produced: Vec<Vec<Item>> = level.par_iter().map(|w| extend_item(w, n, s, &known)).collect();
            for item in produced.into_iter().flatten() {
                let size = item.bm.size();
                if seen[size].insert(item.key.clone()) {
                    buckets[size].push(item);
                }
            }
        }
        stats.millis = started.elapsed().as_millis();
        census.stats.push(stats);
        if s > 1 {
            on_level(&census);
        }
    }
    census
}

fn entry(c: &Item, sequence: &[usize]) -> CensusEntry {
    let form = canonical_form(&c.bm);
    // put the identity first, keep the canonical order otherwise
    let id_pos = form.labeling[c.bm.identity()];
    let perm: Vec<usize> = form
        .labeling
        .iter()
        .map(|&l| {
            if l == id_pos {
                0
            } else if l < id_pos {
                l + 1
            } else {
                l
            }
        })
        .collect();
    let bm = c.bm.relabel(&perm);
    let sequence: Vec<usize> = sequence.iter().map(|&x| perm[x]).collect();
    let bm = bm.with_generators(sequence.clone());
    CensusEntry { key: c.key.clone(), bm, sequence }
}

/// Every quotient has a construction sequence read off from a generator
/// list of games ordered by birthday, with `∗` first and then a game of least
/// birthday whose value is not in `{1, a}`. Such a game acts like `∗2`, and
/// since `∗ + ∗ = 0` the first slice is `{1, a} ≅ Z2` and the second reduces
/// to `T2`. Slice reductions are quotients of ever larger game sets, so their
/// orders never decrease. Steps breaking these rules can be dropped.
fn slice_order_allowed(parent: &Item, child: &BipartiteMonoid, reduced: usize) -> bool {
    match parent.bm.size() {
        1 => {
            let t = child.size() - 1;
            child.size() == 2 && child.in_p(t) && child.mul(t, t) == child.identity()
        }
        2 => reduced == 6,
        _ => reduced >= parent.reduced_order,
    }
}

/// Simple extensions of one worklist item, filtered by the new generator's
/// parity and, where the census already covers it, by the reduction.
fn extend_item(w: &Item, n: usize, done: usize, known: &KnownQuotients) -> Vec<Item> {
    let q = w.bm.size();
    let below = OptionSet::from_iter(0..q);
    let mut out = Vec::new();
    monoid_extensions(w.bm.monoid(), &w.sequence, n, &mut |m| {
        for bm in p_choices(&w.bm, m) {
            if !generator_parity(&bm, below, q) {
                continue;
            }
            let red = reduce(&bm).reduced;
            let r = red.size();
            if !slice_order_allowed(w, &bm, r) || (r <= done && !known.contains(&red)) {
                continue;
            }
            let mut sequence = w.sequence.clone();
            sequence.push(q);
            let bm = bm.with_generators(sequence.clone());
            let key = crate::monoid::canonical_key(&bm);
            out.push(Item { key, bm, sequence, reduced_order: r });
        }
    });
    out
}

/// `{ "counts": {"2": 1, ...}, "classes": { "12": [ {"key", "monoid"} ] } }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CensusJson {
    pub counts: BTreeMap<String, usize>,
    pub classes: BTreeMap<String, Vec<CensusClassJson>>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub complete: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CensusClassJson {
    pub key: String,
    pub monoid: MonoidJson,
    #[serde(default)]
    pub sequence: Vec<usize>,
}

impl CensusJson {
    pub fn from_census(c: &Census) -> Self {
        CensusJson {
            counts: c.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            classes: c
                .classes
                .iter()
                .map(|(k, v)| {
                    let list = v
                        .iter()
                        .map(|e| CensusClassJson {
                            key: e.key_hex(),
                            monoid: MonoidJson::from_bm(&e.bm),
                            sequence: e.sequence.clone(),
                        })
                        .collect();
                    (k.to_string(), list)
                })
                .collect(),
            complete: c.complete,
        }
    }
}
