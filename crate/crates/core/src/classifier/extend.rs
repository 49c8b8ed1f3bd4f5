//! Monoid extensions by one generator.
//!
//! `Q⁺ = ⟨Q ∪ {t}⟩` is a quotient of `Q × ℕ` that keeps `Q` intact, so it is
//! determined by its right Cayley graph over the generators of `Q` plus `t`.
//! We search such graphs Sims-style: the nodes of `Q` and their `Q`-edges
//! are fixed, `1·t` is a fresh node, and each remaining edge in a fixed scan
//! order is sent to an existing node or to a new one. Relations of `Q`
//! (from its Cayley graph) and `gt = tg` are traced at every node, filling
//! edges they force and rejecting contradictions. New nodes are numbered in
//! order of creation, so each extension appears once up to isomorphism fixing
//! `Q` and `t`.

use crate::monoid::Monoid;

const UNDEF: u8 = u8::MAX;

/// Largest extension the search supports.
pub const MAX_EXTENSION_ORDER: usize = 64;

struct Graph {
    q: usize,
    letters: usize,
    count: usize,
    edges: Vec<u8>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph { q: self.q, letters: self.letters, count: self.count, edges: self.edges.clone() }
    }
}

impl Graph {
    #[inline]
    fn get(&self, p: usize, c: usize) -> u8 {
        self.edges[p * self.letters + c]
    }

    #[inline]
    fn set(&mut self, p: usize, c: usize, v: usize) {
        self.edges[p * self.letters + c] = v as u8;
    }

    /// Follows `w` from `p`; returns the node reached and how many letters
    /// were consumed.
    #[inline]
    fn trace(&self, mut p: usize, w: &[u8]) -> (usize, usize) {
        for (i, &c) in w.iter().enumerate() {
            let nx = self.get(p, c as usize);
            if nx == UNDEF {
                return (p, i);
            }
            p = nx as usize;
        }
        (p, w.len())
    }
}

struct Search<'a> {
    max_nodes: usize,
    /// Relations traced at the nodes of `Q`.
    commute: Vec<(Vec<u8>, Vec<u8>)>,
    /// Relations traced at new nodes.
    all: Vec<(Vec<u8>, Vec<u8>)>,
    identity: usize,
    gens: &'a [usize],
    emit: &'a mut dyn FnMut(Monoid),
}

impl Search<'_> {
    fn propagate(&self, g: &mut Graph) -> bool {
        loop {
            let mut changed = false;
            for p in 0..g.count {
                let rels = if p < g.q { &self.commute } else { &self.all };
                for (u, v) in rels {
                    let (a, i) = g.trace(p, u);
                    let (b, j) = g.trace(p, v);
                    let (du, dv) = (i == u.len(), j == v.len());
                    if du && dv {
                        if a != b {
                            return false;
                        }
                    } else if du && j + 1 == v.len() {
                        g.set(b, v[j] as usize, a);
                        changed = true;
                    } else if dv && i + 1 == u.len() {
                        g.set(a, u[i] as usize, b);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn next_undefined(&self, g: &Graph) -> Option<(usize, usize)> {
        let t = g.letters - 1;
        for p in g.q..g.count {
            for c in 0..g.letters {
                if g.get(p, c) == UNDEF {
                    return Some((p, c));
                }
            }
        }
        (0..g.q).find(|&p| g.get(p, t) == UNDEF).map(|p| (p, t))
    }

    fn dfs(&mut self, mut g: Graph) {
        if !self.propagate(&mut g) {
            return;
        }
        let Some((p, c)) = self.next_undefined(&g) else {
            let m = self.build(&g);
            (self.emit)(m);
            return;
        };
        for target in 0..g.count {
            let mut h = g.clone();
            h.set(p, c, target);
            self.dfs(h);
        }
        if g.count < self.max_nodes {
            let mut h = g;
            h.set(p, c, h.count);
            h.count += 1;
            self.dfs(h);
        }
    }

    fn build(&self, g: &Graph) -> Monoid {
        let n = g.count;
        let mut word: Vec<Option<Vec<u8>>> = vec![None; n];
        word[self.identity] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([self.identity]);
        while let Some(p) = queue.pop_front() {
            for c in 0..g.letters {
                let nx = g.get(p, c) as usize;
                if word[nx].is_none() {
                    let mut w = word[p].clone().expect("visited");
                    w.push(c as u8);
                    word[nx] = Some(w);
                    queue.push_back(nx);
                }
            }
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = g.trace(a, word[b].as_ref().expect("all nodes reachable")).0;
            }
        }
        let mut gens = self.gens.to_vec();
        gens.push(g.q);
        Monoid::from_flat(n, self.identity, table, gens)
    }
}

/// Calls `emit` with every extension `⟨Q ∪ {t}⟩` of order at most
/// `max_order`, where `Q` is generated by `gens`. Elements of `Q` keep their
/// indices and `t` is element `|Q|`.
pub fn monoid_extensions(q: &Monoid, gens: &[usize], max_order: usize, emit: &mut dyn FnMut(Monoid)) {
    let qn = q.size();
    let max_nodes = max_order.min(MAX_EXTENSION_ORDER);
    if max_nodes <= qn {
        return;
    }
    let r = gens.len();
    let letters = r + 1;
    let e = q.identity();

    // normal-form words along a BFS tree
    let mut word: Vec<Option<Vec<u8>>> = vec![None; qn];
    let mut tree = vec![false; qn * r];
    word[e] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([e]);
    while let Some(u) = queue.pop_front() {
        for (j, &gj) in gens.iter().enumerate() {
            let v = q.mul(u, gj);
            if word[v].is_none() {
                let mut w = word[u].clone().expect("visited");
                w.push(j as u8);
                word[v] = Some(w);
                tree[u * r + j] = true;
                queue.push_back(v);
            }
        }
    }
    assert!(word.iter().all(Option::is_some), "generators must generate the monoid");
    let word: Vec<Vec<u8>> = word.into_iter().map(Option::unwrap).collect();

    let t = r as u8;
    let commute: Vec<(Vec<u8>, Vec<u8>)> = (0..r as u8).map(|j| (vec![j, t], vec![t, j])).collect();
    let mut all = commute.clone();
    for u in 0..qn {
        for (j, &gj) in gens.iter().enumerate() {
            if !tree[u * r + j] {
                let mut lhs = word[u].clone();
                lhs.push(j as u8);
                all.push((lhs, word[q.mul(u, gj)].clone()));
            }
        }
    }

    let mut g = Graph { q: qn, letters, count: qn + 1, edges: vec![UNDEF; max_nodes * letters] };
    for u in 0..qn {
        for (j, &gj) in gens.iter().enumerate() {
            g.set(u, j, q.mul(u, gj));
        }
    }
    g.set(e, r, qn);
    let mut search = Search { max_nodes, commute, all, identity: e, gens, emit };
    search.dfs(g);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::check_axioms;

    fn collect(q: &Monoid, max: usize) -> Vec<Monoid> {
        let mut out = Vec::new();
        monoid_extensions(q, &q.greedy_generators(), max, &mut |m| out.push(m));
        out
    }

    /// Number of monogenic monoids of order at most `n`: index i ≥ 0 and
    /// period p ≥ 1 with i + p ≤ n.
    fn monogenic(n: usize) -> usize {
        (1..=n).sum()
    }

    #[test]
    fn from_trivial_are_monogenic() {
        let triv = Monoid::trivial();
        for n in 2..=7 {
            // orders 2..=n; order k has k index/period splits
            let want = monogenic(n) - 1;
            assert_eq!(collect(&triv, n).len(), want, "n = {n}");
        }
        assert_eq!(collect(&triv, 2).len(), 2);
    }

    #[test]
    fn extensions_are_monoids_containing_q() {
        let z2 = Monoid::from_rows(vec![vec![0, 1], vec![1, 0]], 0, vec![1]).unwrap();
        let exts = collect(&z2, 6);
        assert!(!exts.is_empty());
        for m in &exts {
            assert!(check_axioms(&m.to_raw()).is_empty());
            for x in 0..2 {
                for y in 0..2 {
                    assert_eq!(m.mul(x, y), z2.mul(x, y));
                }
            }
            assert!(m.closure([1, 2]).iter().all(|&b| b));
        }
        // Z2 x Z2 is among them
        assert!(exts.iter().any(|m| m.size() == 4 && (0..4).all(|x| m.mul(x, x) == 0)));
    }

    #[test]
    fn too_small_cap() {
        assert!(collect(&Monoid::trivial(), 1).is_empty());
    }
}
