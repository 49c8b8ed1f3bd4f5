use std::collections::HashMap;

use super::{BipartiteMonoid, Monoid};

/// The P-signature of `x`: bit `z` is set iff `xz ∈ P`.
pub fn p_signature(b: &BipartiteMonoid, x: usize) -> Vec<bool> {
    b.monoid().row(x).iter().map(|&xz| b.in_p(xz)).collect()
}

pub fn indistinguishable(b: &BipartiteMonoid, x: usize, y: usize) -> bool {
    (0..b.size()).all(|z| b.in_p(b.mul(x, z)) == b.in_p(b.mul(y, z)))
}

/// A reduced quotient together with the projection onto it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: BipartiteMonoid,
    /// `projection[x]` is the class of `x` in `reduced`.
    pub projection: Vec<usize>,
}

/// Quotients by indistinguishability.
///
/// Indistinguishability is a congruence and the quotient is already reduced,
/// so one pass suffices. The identity's class gets index 0 and the remaining
/// classes are numbered by first occurrence.
pub fn reduce(b: &BipartiteMonoid) -> Reduction {
    let n = b.size();
    let e = b.identity();
    let mut class_of: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut projection = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let order = std::iter::once(e).chain((0..n).filter(|&x| x != e));
    for x in order {
        let sig = p_signature(b, x);
        let next = reps.len();
        let c = *class_of.entry(sig).or_insert(next);
        if c == next {
            reps.push(x);
        }
        projection[x] = c;
    }
    let k = reps.len();
    let mut table = vec![0; k * k];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            table[i * k + j] = projection[b.mul(x, y)];
        }
    }
    let mut gens = Vec::new();
    for &g in b.monoid().generators() {
        let c = projection[g];
        if c != 0 && !gens.contains(&c) {
            gens.push(c);
        }
    }
    let pset = reps.iter().map(|&x| b.in_p(x)).collect();
    Reduction { reduced: BipartiteMonoid::from_bits(Monoid::from_flat(k, 0, table, gens), pset), projection }
}

/// The minimal ideal of a finite commutative monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelInfo {
    /// Sorted element indices.
    pub kernel: Vec<usize>,
    pub kernel_identity: usize,
    /// Every kernel element squares to the kernel identity.
    pub group_exponent2: bool,
}

impl KernelInfo {
    pub fn contains(&self, x: usize) -> bool {
        self.kernel.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Intersects all principal ideals `xQ`.
pub fn kernel(m: &Monoid) -> KernelInfo {
    let n = m.size();
    let mut inter = vec![true; n];
    for x in 0..n {
        let mut ideal = vec![false; n];
        for &y in m.row(x) {
            ideal[y] = true;
        }
        for (keep, hit) in inter.iter_mut().zip(ideal) {
            *keep &= hit;
        }
    }
    let kernel: Vec<usize> = (0..n).filter(|&x| inter[x]).collect();
    let kernel_identity = *kernel
        .iter()
        .find(|&&k| m.is_idempotent(k))
        .expect("the kernel of a finite monoid contains an idempotent");
    let group_exponent2 = kernel.iter().all(|&k| m.mul(k, k) == kernel_identity);
    KernelInfo { kernel, kernel_identity, group_exponent2 }
}

/// `M_x = { y : no z has xz ∈ P and yz ∈ P }`.
pub fn meximal_set(b: &BipartiteMonoid, x: usize) -> Vec<usize> {
    let n = b.size();
    let witnesses: Vec<usize> = (0..n).filter(|&z| b.in_p(b.mul(x, z))).collect();
    (0..n).filter(|&y| witnesses.iter().all(|&z| !b.in_p(b.mul(y, z)))).collect()
}

/// A sub-bipartite monoid with its embedding into the parent.
#[derive(Clone, Debug)]
pub struct Submonoid {
    pub sub: BipartiteMonoid,
    /// `inclusion[i]` is the parent element for sub element `i`.
    pub inclusion: Vec<usize>,
}

/// The submonoid generated by `seed`, with `P` induced from the parent. The
/// identity becomes element 0 and the rest keep their parent order.
pub fn submonoid(b: &BipartiteMonoid, seed: &[usize]) -> Submonoid {
    let reach = b.monoid().closure(seed.iter().copied());
    let e = b.identity();
    let inclusion: Vec<usize> =
        std::iter::once(e).chain((0..b.size()).filter(|&x| x != e && reach[x])).collect();
    let mut back = vec![usize::MAX; b.size()];
    for (i, &x) in inclusion.iter().enumerate() {
        back[x] = i;
    }
    let k = inclusion.len();
    let mut table = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            table[i * k + j] = back[b.mul(inclusion[i], inclusion[j])];
        }
    }
    let mut gens = Vec::new();
    for &s in seed {
        let i = back[s];
        if i != 0 && !gens.contains(&i) {
            gens.push(i);
        }
    }
    let pset = inclusion.iter().map(|&x| b.in_p(x)).collect();
    Submonoid { sub: BipartiteMonoid::from_bits(Monoid::from_flat(k, 0, table, gens), pset), inclusion }
}

/// `|K ∩ P| = 1`.
pub fn is_regular(b: &BipartiteMonoid) -> bool {
    let k = kernel(b.monoid());
    k.kernel.iter().filter(|&&x| b.in_p(x)).count() == 1
}

/// `K ∩ P = {z}`.
pub fn is_normal(b: &BipartiteMonoid) -> bool {
    let k = kernel(b.monoid());
    let hits: Vec<usize> = k.kernel.iter().copied().filter(|&x| b.in_p(x)).collect();
    hits == [k.kernel_identity]
}
