//! Finite commutative monoids stored as dense multiplication tables, and the
//! bipartite monoids `(Q, P)` built on top of them.

mod canon;
mod json;
mod presentation;
mod reduce;

use std::fmt;

use thiserror::Error;

pub use canon::{canonical_form, canonical_key, isomorphic, CanonicalForm};
pub use json::{DecodeError, MonoidJson, RawMonoid};
pub use presentation::{
    build_from_presentation, parse_presentation, parse_presentations, Presentation, PresentationError, Word,
};
pub use reduce::{
    indistinguishable, is_normal, is_regular, kernel, meximal_set, p_signature, reduce, submonoid,
    KernelInfo, Reduction, Submonoid,
};

/// A finite commutative monoid on `0..size`.
///
/// The table is stored row-major; `mul(x, y)` is a single lookup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monoid {
    size: usize,
    identity: usize,
    table: Vec<usize>,
    generators: Vec<usize>,
}

/// A commutative monoid together with its P-portion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteMonoid {
    monoid: Monoid,
    pset: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("table violates the monoid axioms: {}", summarize(.0))]
    Axioms(Vec<AxiomViolation>),
    #[error("P contains {0}, which is not an element")]
    PsetOutOfRange(usize),
}

fn summarize(v: &[AxiomViolation]) -> String {
    let mut s = v.iter().take(3).map(|x| x.to_string()).collect::<Vec<_>>().join("; ");
    if v.len() > 3 {
        s.push_str(&format!("; and {} more", v.len() - 3));
    }
    s
}

/// One failed monoid axiom, naming the offending elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The table is not `size × size`.
    Shape {
        row: Option<usize>,
        expected: usize,
        found: usize,
    },
    /// A table entry names a nonexistent element.
    OutOfRange {
        x: usize,
        y: usize,
        value: usize,
    },
    IdentityOutOfRange {
        identity: usize,
    },
    GeneratorOutOfRange {
        generator: usize,
    },
    NotCommutative {
        x: usize,
        y: usize,
    },
    NotAssociative {
        x: usize,
        y: usize,
        z: usize,
    },
    IdentityLaw {
        x: usize,
    },
    /// The listed generators do not generate the whole table.
    GeneratorsIncomplete {
        missing: Vec<usize>,
    },
}

impl AxiomViolation {
    /// Malformed-table violations, as opposed to algebraic ones.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            AxiomViolation::Shape { .. }
                | AxiomViolation::OutOfRange { .. }
                | AxiomViolation::IdentityOutOfRange { .. }
                | AxiomViolation::GeneratorOutOfRange { .. }
        )
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Shape { row: None, expected, found } => {
                write!(f, "table has {found} rows, expected {expected}")
            }
            AxiomViolation::Shape { row: Some(r), expected, found } => {
                write!(f, "row {r} has {found} entries, expected {expected}")
            }
            AxiomViolation::OutOfRange { x, y, value } => {
                write!(f, "table[{x}][{y}] = {value} is out of range")
            }
            AxiomViolation::IdentityOutOfRange { identity } => {
                write!(f, "identity {identity} is out of range")
            }
            AxiomViolation::GeneratorOutOfRange { generator } => {
                write!(f, "generator {generator} is out of range")
            }
            AxiomViolation::NotCommutative { x, y } => write!(f, "{x}*{y} != {y}*{x}"),
            AxiomViolation::NotAssociative { x, y, z } => {
                write!(f, "({x}*{y})*{z} != {x}*({y}*{z})")
            }
            AxiomViolation::IdentityLaw { x } => write!(f, "identity law fails at {x}"),
            AxiomViolation::GeneratorsIncomplete { missing } => {
                write!(f, "generators miss {} element(s), first {}", missing.len(), missing[0])
            }
        }
    }
}

/// Checks every monoid axiom on a raw table. An empty report means the table
/// is a valid commutative monoid.
///
/// Shape and range problems are reported first; the algebraic laws are only
/// checked on a well-formed table.
pub fn check_axioms(raw: &RawMonoid) -> Vec<AxiomViolation> {
    let n = raw.size;
    let mut out = Vec::new();
    if raw.table.len() != n {
        out.push(AxiomViolation::Shape { row: None, expected: n, found: raw.table.len() });
        return out;
    }
    for (r, row) in raw.table.iter().enumerate() {
        if row.len() != n {
            out.push(AxiomViolation::Shape { row: Some(r), expected: n, found: row.len() });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (x, row) in raw.table.iter().enumerate() {
        for (y, &v) in row.iter().enumerate() {
            if v >= n {
                out.push(AxiomViolation::OutOfRange { x, y, value: v });
            }
        }
    }
    if raw.identity >= n {
        out.push(AxiomViolation::IdentityOutOfRange { identity: raw.identity });
    }
    for &g in &raw.generators {
        if g >= n {
            out.push(AxiomViolation::GeneratorOutOfRange { generator: g });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let t = &raw.table;
    for x in 0..n {
        for y in x + 1..n {
            if t[x][y] != t[y][x] {
                out.push(AxiomViolation::NotCommutative { x, y });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = t[x][y];
            for z in 0..n {
                if t[xy][z] != t[x][t[y][z]] {
                    out.push(AxiomViolation::NotAssociative { x, y, z });
                }
            }
        }
    }
    let e = raw.identity;
    for x in 0..n {
        if t[e][x] != x || t[x][e] != x {
            out.push(AxiomViolation::IdentityLaw { x });
        }
    }
    if !raw.generators.is_empty() {
        let reach = closure_rows(t, e, raw.generators.iter().copied());
        let missing: Vec<usize> = (0..n).filter(|&x| !reach[x]).collect();
        if !missing.is_empty() {
            out.push(AxiomViolation::GeneratorsIncomplete { missing });
        }
    }
    out
}

fn closure_rows(t: &[Vec<usize>], identity: usize, seed: impl Iterator<Item = usize>) -> Vec<bool> {
    let n = t.len();
    let gens: Vec<usize> = seed.collect();
    let mut seen = vec![false; n];
    seen[identity] = true;
    let mut stack = vec![identity];
    while let Some(x) = stack.pop() {
        for &g in &gens {
            let y = t[x][g];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

impl Monoid {
    /// Builds a monoid from table rows, rejecting anything `check_axioms`
    /// complains about.
    pub fn from_rows(
        table: Vec<Vec<usize>>,
        identity: usize,
        generators: Vec<usize>,
    ) -> Result<Self, MonoidError> {
        let raw = RawMonoid { size: table.len(), identity, table, generators };
        let report = check_axioms(&raw);
        if !report.is_empty() {
            return Err(MonoidError::Axioms(report));
        }
        let size = raw.size;
        let flat = raw.table.into_iter().flatten().collect();
        Ok(Self::from_flat(size, identity, flat, raw.generators))
    }

    /// Trusted constructor for tables produced inside the crate.
    pub(crate) fn from_flat(size: usize, identity: usize, table: Vec<usize>, generators: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), size * size);
        Monoid { size, identity, table, generators }
    }

    pub fn trivial() -> Self {
        Monoid { size: 1, identity: 0, table: vec![0], generators: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.size..(x + 1) * self.size]
    }

    pub(crate) fn flat_table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// `(index, period)` of the power sequence `x, x², …`: the smallest
    /// `i ≥ 1` and `p ≥ 1` with `x^{i+p} = x^i`.
    pub fn index_period(&self, x: usize) -> (usize, usize) {
        let mut seen = vec![0usize; self.size];
        let mut cur = x;
        let mut k = 1;
        loop {
            if seen[cur] != 0 {
                return (seen[cur], k - seen[cur]);
            }
            seen[cur] = k;
            cur = self.mul(cur, x);
            k += 1;
        }
    }

    /// Membership vector of the submonoid generated by `seed`.
    pub fn closure(&self, seed: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let gens: Vec<usize> = seed.into_iter().collect();
        let mut seen = vec![false; self.size];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    /// Same table with a different generator list.
    pub fn with_generators(mut self, generators: Vec<usize>) -> Self {
        self.generators = generators;
        self
    }

    /// A greedy generating set: scan elements in order and keep each one not
    /// already generated by the previous picks.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut reach = self.closure(std::iter::empty());
        for x in 0..self.size {
            if !reach[x] {
                gens.push(x);
                reach = self.closure(gens.iter().copied());
            }
        }
        gens
    }

    pub fn to_raw(&self) -> RawMonoid {
        RawMonoid {
            size: self.size,
            identity: self.identity,
            table: self.rows(),
            generators: self.generators.clone(),
        }
    }

    /// Relabels elements through the bijection `perm` (old index → new index).
    pub fn relabel(&self, perm: &[usize]) -> Monoid {
        let n = self.size;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        Monoid {
            size: n,
            identity: perm[self.identity],
            table,
            generators: self.generators.iter().map(|&g| perm[g]).collect(),
        }
    }
}

impl BipartiteMonoid {
    pub fn new(monoid: Monoid, pset: impl IntoIterator<Item = usize>) -> Result<Self, MonoidError> {
        let mut bits = vec![false; monoid.size()];
        for p in pset {
            if p >= monoid.size() {
                return Err(MonoidError::PsetOutOfRange(p));
            }
            bits[p] = true;
        }
        Ok(BipartiteMonoid { monoid, pset: bits })
    }

    pub(crate) fn from_bits(monoid: Monoid, pset: Vec<bool>) -> Self {
        debug_assert_eq!(pset.len(), monoid.size());
        BipartiteMonoid { monoid, pset }
    }

    /// The trivial bipartite monoid `({1}, ∅)`.
    pub fn trivial() -> Self {
        BipartiteMonoid { monoid: Monoid::trivial(), pset: vec![false] }
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn into_monoid(self) -> Monoid {
        self.monoid
    }

    pub fn size(&self) -> usize {
        self.monoid.size
    }

    pub fn identity(&self) -> usize {
        self.monoid.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.monoid.mul(x, y)
    }

    #[inline]
    pub fn in_p(&self, x: usize) -> bool {
        self.pset[x]
    }

    pub fn pset_bits(&self) -> &[bool] {
        &self.pset
    }

    pub fn p_elements(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.pset[x]).collect()
    }

    pub fn p_len(&self) -> usize {
        self.pset.iter().filter(|&&b| b).count()
    }

    /// The quotient-candidate condition: the identity is not a P-position.
    pub fn identity_outside_p(&self) -> bool {
        !self.pset[self.identity()]
    }

    pub fn relabel(&self, perm: &[usize]) -> BipartiteMonoid {
        let mut pset = vec![false; self.size()];
        for x in 0..self.size() {
            pset[perm[x]] = self.pset[x];
        }
        BipartiteMonoid { monoid: self.monoid.relabel(perm), pset }
    }

    pub fn with_generators(self, generators: Vec<usize>) -> Self {
        BipartiteMonoid { monoid: self.monoid.with_generators(generators), pset: self.pset }
    }

    /// True when every pair of distinct elements is distinguishable.
    pub fn is_reduced(&self) -> bool {
        let mut sigs: Vec<Vec<bool>> = (0..self.size()).map(|x| p_signature(self, x)).collect();
        sigs.sort();
        sigs.dedup();
        sigs.len() == self.size()
    }
}
