//! Canonical labelling of bipartite monoids.
//!
//! The search is individualization-refinement: colour elements by invariants,
//! refine with the ternary product relation (the colour of `u` absorbs the
//! multiset of `(colour v, colour uv)`), and branch on the smallest
//! non-singleton cell until every cell is a singleton. Each leaf gives a
//! labelling; the canonical one has the lexicographically least certificate
//! (P bits, then the relabelled table).
//!
//! Automorphisms found along the way prune the tree twice: children lying in
//! one orbit of the path stabilizer are explored once, and a leaf equivalent
//! to an earlier one sends the search straight back to their common ancestor.
//! Without this the elementary abelian kernels of the catalog families make
//! the tree factorial in the kernel size.

use std::cmp::Ordering;

use super::BipartiteMonoid;

/// Canonical key plus the labelling (element → canonical position) that
/// produced it.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: Vec<u8>,
    pub labeling: Vec<usize>,
}

pub fn canonical_key(b: &BipartiteMonoid) -> Vec<u8> {
    canonical_form(b).key
}

pub fn canonical_form(b: &BipartiteMonoid) -> CanonicalForm {
    let n = b.size();
    let ctx = Ctx { n, table: b.monoid().flat_table(), p: b.pset_bits() };
    let mut search = Search { ctx: &ctx, first: None, best: None, autos: Vec::new() };
    let colors = ctx.initial_colors(b.identity());
    let mut path = Vec::new();
    search.dfs(colors, &mut path);
    let best = search.best.expect("search reaches at least one leaf");
    CanonicalForm { key: encode(n, &best.cert), labeling: best.labeling }
}

/// An isomorphism `b1 → b2` (as `φ[x]`), if one exists.
pub fn isomorphic(b1: &BipartiteMonoid, b2: &BipartiteMonoid) -> Option<Vec<usize>> {
    if b1.size() != b2.size() || b1.p_len() != b2.p_len() {
        return None;
    }
    let c1 = canonical_form(b1);
    let c2 = canonical_form(b2);
    if c1.key != c2.key {
        return None;
    }
    let mut inv2 = vec![0; b2.size()];
    for (x, &l) in c2.labeling.iter().enumerate() {
        inv2[l] = x;
    }
    Some(c1.labeling.iter().map(|&l| inv2[l]).collect())
}

fn encode(n: usize, cert: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + cert.len() * 2);
    out.extend_from_slice(&(n as u32).to_be_bytes());
    let wide = n > 256;
    for &c in cert {
        if wide {
            out.extend_from_slice(&(c as u16).to_be_bytes());
        } else {
            out.push(c as u8);
        }
    }
    out
}

struct Ctx<'a> {
    n: usize,
    table: &'a [usize],
    p: &'a [bool],
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn combine(a: u64, b: u64) -> u64 {
    mix(a.rotate_left(23) ^ mix(b))
}

const SALT: u64 = 0x5bd1_e995_7f3a_2c41;

fn count_distinct(colors: &[u64]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

impl Ctx<'_> {
    fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    fn initial_colors(&self, identity: usize) -> Vec<u64> {
        let n = self.n;
        let mut colors = Vec::with_capacity(n);
        for u in 0..n {
            let row = &self.table[u * n..(u + 1) * n];
            let mut ideal = vec![false; n];
            for &v in row {
                ideal[v] = true;
            }
            let ideal_size = ideal.iter().filter(|&&b| b).count() as u64;
            let p_hits = row.iter().filter(|&&v| self.p[v]).count() as u64;
            let (index, period) = {
                let mut seen = vec![0u64; n];
                let mut cur = u;
                let mut k = 1u64;
                loop {
                    if seen[cur] != 0 {
                        break (seen[cur], k - seen[cur]);
                    }
                    seen[cur] = k;
                    cur = self.mul(cur, u);
                    k += 1;
                }
            };
            let sq = self.mul(u, u);
            let mut h = combine(u64::from(u == identity), u64::from(self.p[u]));
            h = combine(h, u64::from(sq == u));
            h = combine(h, u64::from(self.p[sq]));
            h = combine(h, index);
            h = combine(h, period);
            h = combine(h, ideal_size);
            h = combine(h, p_hits);
            colors.push(h);
        }
        colors
    }

    /// Refines to the coarsest stable colouring below `colors`.
    fn refine(&self, colors: &mut Vec<u64>) {
        let n = self.n;
        let mut cells = count_distinct(colors);
        let mut next = vec![0u64; n];
        loop {
            for (u, slot) in next.iter_mut().enumerate() {
                let row = &self.table[u * n..(u + 1) * n];
                let mut acc = 0u64;
                for (v, &uv) in row.iter().enumerate() {
                    acc = acc.wrapping_add(mix(colors[v] ^ colors[uv].rotate_left(17) ^ SALT));
                }
                *slot = combine(colors[u], acc);
            }
            std::mem::swap(colors, &mut next);
            let c = count_distinct(colors);
            if c == cells || c == n {
                return;
            }
            cells = c;
        }
    }

    /// Element → rank of its colour; only meaningful for a discrete colouring.
    fn labeling(&self, colors: &[u64]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_unstable_by_key(|&u| colors[u]);
        let mut lab = vec![0; self.n];
        for (i, &u) in order.iter().enumerate() {
            lab[u] = i;
        }
        lab
    }

    fn certificate(&self, lab: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut inv = vec![0; n];
        for (u, &l) in lab.iter().enumerate() {
            inv[l] = u;
        }
        let mut cert = Vec::with_capacity(n + n * n);
        cert.extend(inv.iter().map(|&u| u32::from(self.p[u])));
        for &u in &inv {
            for &v in &inv {
                cert.push(lab[self.mul(u, v)] as u32);
            }
        }
        cert
    }

    /// Smallest non-singleton cell, ties broken by colour value.
    fn target_cell(&self, colors: &[u64]) -> Option<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_unstable_by_key(|&u| (colors[u], u));
        let mut best: Option<(usize, u64, usize)> = None; // (len, colour, start)
        let mut i = 0;
        while i < order.len() {
            let c = colors[order[i]];
            let mut j = i + 1;
            while j < order.len() && colors[order[j]] == c {
                j += 1;
            }
            let len = j - i;
            if len > 1 && best.is_none_or(|(bl, bc, _)| (len, c) < (bl, bc)) {
                best = Some((len, c, i));
            }
            i = j;
        }
        best.map(|(len, _, start)| order[start..start + len].to_vec())
    }
}

struct Leaf {
    cert: Vec<u32>,
    labeling: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    ctx: &'a Ctx<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Search<'_> {
    /// Returns `Some(level)` to unwind the search to the node at `level`.
    fn dfs(&mut self, mut colors: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        self.ctx.refine(&mut colors);
        let Some(cell) = self.ctx.target_cell(&colors) else {
            return self.leaf(&colors, path);
        };
        let depth = path.len();
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits: Vec<usize> = (0..self.ctx.n).collect();
        let mut autos_seen = 0;
        for &v in &cell {
            if autos_seen < self.autos.len() {
                for a in &self.autos[autos_seen..] {
                    if path.iter().all(|&p| a[p] == p) {
                        for x in 0..self.ctx.n {
                            let (rx, ry) = (find(&mut orbits, x), find(&mut orbits, a[x]));
                            if rx != ry {
                                orbits[rx.max(ry)] = rx.min(ry);
                            }
                        }
                    }
                }
                autos_seen = self.autos.len();
            }
            let rv = find(&mut orbits, v);
            if explored.iter().any(|&w| find(&mut orbits, w) == rv) {
                continue;
            }
            explored.push(v);
            let mut child = colors.clone();
            child[v] = combine(child[v], SALT);
            path.push(v);
            let jump = self.dfs(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colors: &[u64], path: &[usize]) -> Option<usize> {
        let labeling = self.ctx.labeling(colors);
        let cert = self.ctx.certificate(&labeling);
        let leaf = Leaf { cert, labeling, path: path.to_vec() };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                cert: leaf.cert.clone(),
                labeling: leaf.labeling.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.cert == leaf.cert {
            return self.record(Which::First, &leaf);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.cert.cmp(&best.cert) {
            Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => self.record(Which::Best, &leaf),
            Ordering::Greater => None,
        }
    }

    /// Stores the automorphism between `leaf` and an equivalent earlier leaf
    /// and decides whether the rest of the current branch is redundant.
    fn record(&mut self, which: Which, leaf: &Leaf) -> Option<usize> {
        let other = match which {
            Which::First => self.first.as_ref(),
            Which::Best => self.best.as_ref(),
        }
        .expect("earlier leaf exists");
        let n = self.ctx.n;
        let mut inv = vec![0; n];
        for (u, &l) in leaf.labeling.iter().enumerate() {
            inv[l] = u;
        }
        // sigma maps the earlier leaf's world onto the current one
        let sigma: Vec<usize> = other.labeling.iter().map(|&l| inv[l]).collect();
        let maps_path = other.path.len() == leaf.path.len()
            && other.path.iter().zip(&leaf.path).all(|(&a, &b)| sigma[a] == b);
        let fork = common_prefix(&other.path, &leaf.path);
        if sigma.iter().enumerate().any(|(x, &y)| x != y) {
            self.autos.push(sigma);
        }
        maps_path.then_some(fork)
    }
}

enum Which {
    First,
    Best,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::Monoid;

    fn xor_group(bits: u32, p: &[usize]) -> BipartiteMonoid {
        let n = 1usize << bits;
        let t = (0..n).map(|x| (0..n).map(|y| x ^ y).collect()).collect();
        BipartiteMonoid::new(Monoid::from_rows(t, 0, vec![]).unwrap(), p.iter().copied()).unwrap()
    }

    #[test]
    fn relabelled_t1_matches() {
        let a = xor_group(1, &[1]);
        let b = a.relabel(&[1, 0]);
        assert_eq!(canonical_key(&a), canonical_key(&b));
        let phi = isomorphic(&a, &b).unwrap();
        assert_eq!(phi, vec![1, 0]);
    }

    #[test]
    fn p_distinguishes() {
        let a = xor_group(2, &[1]);
        let b = xor_group(2, &[1, 2]);
        assert_ne!(canonical_key(&a), canonical_key(&b));
        assert!(isomorphic(&a, &b).is_none());
    }

    #[test]
    fn large_elementary_abelian_group_is_fast() {
        let a = xor_group(7, &[0]);
        // a linear bijection of Z2^7
        let lin: Vec<usize> = (0..128usize).map(|x| x ^ ((x & 1) << 3)).collect();
        let b = a.relabel(&lin);
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }
}
