//! The families `T_n` and `R_{2^n+4}`, tame extensions, and the `|P| = 2`
//! classification.

use std::fmt;

use crate::monoid::{isomorphic, kernel, BipartiteMonoid, Monoid};

/// A bipartite monoid with Grundy labels on (at least) its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrundyLabeledBM {
    pub bm: BipartiteMonoid,
    pub labels: Vec<Option<u32>>,
}

impl GrundyLabeledBM {
    /// Kernel element carrying Grundy label `g`.
    pub fn kernel_element(&self, g: u32) -> Option<usize> {
        let k = kernel(self.bm.monoid());
        k.kernel.into_iter().find(|&x| self.labels[x] == Some(g))
    }

    /// Checks the labelling invariants: a XOR-bijection `K → 0..|K|` with
    /// the kernel identity at 0, multiplicative wherever defined.
    pub fn labels_consistent(&self) -> bool {
        let b = &self.bm;
        let k = kernel(b.monoid());
        if self.labels[k.kernel_identity] != Some(0) {
            return false;
        }
        let mut seen = vec![false; k.len()];
        for &x in &k.kernel {
            match self.labels[x] {
                Some(l) if (l as usize) < k.len() && !seen[l as usize] => seen[l as usize] = true,
                _ => return false,
            }
        }
        for x in 0..b.size() {
            for y in 0..b.size() {
                if let (Some(lx), Some(ly), Some(lxy)) =
                    (self.labels[x], self.labels[y], self.labels[b.mul(x, y)])
                {
                    if lxy != lx ^ ly {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Element layout of `T_n` (and the `T_n` part of `R`) for `n ≥ 2`:
/// `0 = 1`, `1 = a`, `2 + i = z_i`.
pub const T_ONE: usize = 0;
pub const T_A: usize = 1;

pub fn t_z(i: usize) -> usize {
    2 + i
}

/// `T_n`. `n = 0` is trivial, `n = 1` is `({1,a},{a})`, and for `n ≥ 2` the
/// elements are `1, a, z_0..z_{2^n-1}` with `P = {a, z_0}`.
pub fn make_tn(n: u32) -> GrundyLabeledBM {
    match n {
        0 => GrundyLabeledBM { bm: BipartiteMonoid::trivial(), labels: vec![Some(0)] },
        1 => {
            let m = Monoid::from_flat(2, 0, vec![0, 1, 1, 0], vec![1]);
            GrundyLabeledBM {
                bm: BipartiteMonoid::from_bits(m, vec![false, true]),
                labels: vec![Some(0), Some(1)],
            }
        }
        _ => {
            let (m, labels) = t_table(n, 0);
            let mut pset = vec![false; m.size()];
            pset[T_A] = true;
            pset[t_z(0)] = true;
            GrundyLabeledBM { bm: BipartiteMonoid::from_bits(m, pset), labels }
        }
    }
}

/// Table of `T_n` with `extra` spare rows appended for `R`.
fn t_table(n: u32, extra: usize) -> (Monoid, Vec<Option<u32>>) {
    let k = 1usize << n;
    let size = k + 2 + extra;
    let mut t = vec![0; size * size];
    let z = t_z;
    let mut set = |x: usize, y: usize, v: usize| {
        t[x * size + y] = v;
        t[y * size + x] = v;
    };
    set(T_ONE, T_ONE, T_ONE);
    set(T_ONE, T_A, T_A);
    set(T_A, T_A, T_ONE);
    for i in 0..k {
        set(T_ONE, z(i), z(i));
        set(T_A, z(i), z(i ^ 1));
        for j in 0..k {
            set(z(i), z(j), z(i ^ j));
        }
    }
    let mut labels = vec![None; size];
    labels[T_ONE] = Some(0);
    labels[T_A] = Some(1);
    for i in 0..k {
        labels[z(i)] = Some(i as u32);
    }
    let gens = std::iter::once(T_A).chain((1..n).map(|b| z(1 << b))).collect();
    (Monoid::from_flat(size, 0, t, gens), labels)
}

/// Indices of `t` and `at` in `make_r(n)`.
pub fn r_t(n: u32) -> usize {
    (1usize << n) + 2
}

pub fn r_at(n: u32) -> usize {
    (1usize << n) + 3
}

/// `R_{2^n+4} = T_n ∪ {t, at}` with `t² = z`, `t z_i = z_i`, `t·at = z_1`.
pub fn make_r(n: u32) -> GrundyLabeledBM {
    assert!(n >= 2, "R family starts at n = 2");
    let (m, mut labels) = t_table(n, 2);
    let size = m.size();
    let mut t = m.flat_table().to_vec();
    let (tt, at) = (r_t(n), r_at(n));
    let mut set = |x: usize, y: usize, v: usize| {
        t[x * size + y] = v;
        t[y * size + x] = v;
    };
    set(T_ONE, tt, tt);
    set(T_ONE, at, at);
    set(T_A, tt, at);
    set(T_A, at, tt);
    set(tt, tt, t_z(0));
    set(at, at, t_z(0));
    set(tt, at, t_z(1));
    for i in 0..(1usize << n) {
        set(tt, t_z(i), t_z(i));
        set(at, t_z(i), t_z(i ^ 1));
    }
    labels[tt] = Some(0);
    labels[at] = Some(1);
    let mut gens = m.generators().to_vec();
    gens.push(tt);
    let mut pset = vec![false; size];
    pset[T_A] = true;
    pset[t_z(0)] = true;
    GrundyLabeledBM { bm: BipartiteMonoid::from_bits(Monoid::from_flat(size, 0, t, gens), pset), labels }
}

/// `T(Q,P)`: adjoin a mirror `K̄` of the kernel with `x·ȳ = (xy)‾` and
/// `x̄·ȳ = xy`; `P` is unchanged. Mirror elements follow the originals, in
/// kernel order.
pub fn tame_extend(b: &BipartiteMonoid) -> BipartiteMonoid {
    tame_extend_with_map(b).0
}

/// Also returns `bar[i]`, the mirror of the `i`-th kernel element.
fn tame_extend_with_map(b: &BipartiteMonoid) -> (BipartiteMonoid, Vec<usize>, Vec<usize>) {
    let k = kernel(b.monoid());
    let q = b.size();
    let size = q + k.len();
    let mut bar = vec![usize::MAX; q];
    for (i, &x) in k.kernel.iter().enumerate() {
        bar[x] = q + i;
    }
    let orig = |y: usize| if y >= q { k.kernel[y - q] } else { y };
    let mut t = vec![0; size * size];
    for x in 0..size {
        for y in 0..size {
            let (bx, by) = (x >= q, y >= q);
            let prod = b.mul(orig(x), orig(y));
            t[x * size + y] = if bx != by { bar[prod] } else { prod };
        }
    }
    let mut gens = b.monoid().generators().to_vec();
    gens.push(bar[k.kernel_identity]);
    let mut pset = b.pset_bits().to_vec();
    pset.resize(size, false);
    let out = BipartiteMonoid::from_bits(Monoid::from_flat(size, b.identity(), t, gens), pset);
    let bars = k.kernel.iter().map(|&x| bar[x]).collect();
    (out, bars, k.kernel)
}

/// Tame extension carrying labels: `label(x̄) = label(x) XOR |K|`.
pub fn tame_extend_labeled(b: &GrundyLabeledBM) -> GrundyLabeledBM {
    let (bm, bars, ker) = tame_extend_with_map(&b.bm);
    let shift = ker.len() as u32;
    let mut labels = b.labels.clone();
    labels.resize(bm.size(), None);
    for (&x, &xb) in ker.iter().zip(&bars) {
        labels[xb] = b.labels[x].map(|l| l ^ shift);
    }
    GrundyLabeledBM { bm, labels }
}

/// Index of `z̄` in `tame_extend(b)`.
pub fn tame_bar_identity(b: &BipartiteMonoid) -> usize {
    let k = kernel(b.monoid());
    let pos = k.kernel.iter().position(|&x| x == k.kernel_identity).expect("z lies in K");
    b.size() + pos
}

pub fn tame_power(b: &BipartiteMonoid, k: usize) -> BipartiteMonoid {
    let mut cur = b.clone();
    for _ in 0..k {
        cur = tame_extend(&cur);
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    T,
    R,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyIndex {
    Finite(u32),
    /// Symbolic only; never materialized.
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyLabel {
    pub family: Family,
    pub index: Option<FamilyIndex>,
}

impl FamilyLabel {
    pub const NOT_APPLICABLE: FamilyLabel = FamilyLabel { family: Family::NotApplicable, index: None };

    pub fn order(&self) -> Option<usize> {
        match (self.family, self.index) {
            (Family::T, Some(FamilyIndex::Finite(n))) => Some((1usize << n) + 2),
            (Family::R, Some(FamilyIndex::Finite(n))) => Some((1usize << n) + 4),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::T => "T",
            Family::R => "R",
            Family::NotApplicable => return write!(f, "not applicable"),
        };
        match self.index {
            Some(FamilyIndex::Finite(n)) => {
                write!(f, "{name} family, n={n} (order {})", self.order().unwrap_or(0))
            }
            Some(FamilyIndex::Infinite) => write!(f, "{name} family, n=inf"),
            None => write!(f, "{name} family"),
        }
    }
}

/// Outcome of `classify_p2`, with the anomaly flag for a reduced input that
/// has `|P| = 2` yet matches neither family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P2Classification {
    pub label: FamilyLabel,
    pub anomaly: bool,
}

pub fn classify_p2(b: &BipartiteMonoid) -> FamilyLabel {
    classify_p2_checked(b).label
}

pub fn classify_p2_checked(b: &BipartiteMonoid) -> P2Classification {
    if b.p_len() != 2 {
        return P2Classification { label: FamilyLabel::NOT_APPLICABLE, anomaly: false };
    }
    let size = b.size();
    for n in 2..=20u32 {
        let k = 1usize << n;
        if k + 2 > size {
            break;
        }
        if k + 2 == size && isomorphic(b, &make_tn(n).bm).is_some() {
            let index = Some(FamilyIndex::Finite(n));
            return P2Classification { label: FamilyLabel { family: Family::T, index }, anomaly: false };
        }
        if k + 4 == size && isomorphic(b, &make_r(n).bm).is_some() {
            let index = Some(FamilyIndex::Finite(n));
            return P2Classification { label: FamilyLabel { family: Family::R, index }, anomaly: false };
        }
    }
    P2Classification { label: FamilyLabel::NOT_APPLICABLE, anomaly: true }
}
