//! Commutative presentations in the text form
//!
//! ```text
//! gens: a,b,c
//! rels: a2=1, b4=b2, b2c=b3, c2=1
//! P: a, b2, ac
//! ```
//!
//! and their completion to a multiplication table by coset enumeration on
//! the right Cayley graph.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use super::{BipartiteMonoid, Monoid};

/// Exponent vector over the generators; all zeros is the identity.
pub type Word = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relations: Vec<(Word, Word)>,
    pub pset_words: Vec<Word>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown symbol {symbol:?}")]
    UnknownSymbol { symbol: String },
    #[error("invalid generator name {name:?}")]
    BadName { name: String },
    #[error("more than {cap} elements generated")]
    CapExceeded { cap: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Syntax { line, message: message.into() }
}

impl Presentation {
    /// Checks names and word lengths.
    pub fn validate(&self) -> Result<(), PresentationError> {
        validate_names(&self.generator_names)?;
        let k = self.generator_names.len();
        let words = self.relations.iter().flat_map(|(l, r)| [l, r]).chain(&self.pset_words);
        for w in words {
            if w.len() != k {
                return Err(PresentationError::UnknownSymbol {
                    symbol: format!("word of length {} over {k} generators", w.len()),
                });
            }
        }
        Ok(())
    }

    pub fn word_to_string(&self, w: &[u32]) -> String {
        let mut s = String::new();
        for (name, &e) in self.generator_names.iter().zip(w) {
            if e == 0 {
                continue;
            }
            s.push_str(name);
            if e > 1 {
                s.push_str(&e.to_string());
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.generator_names.join(","))?;
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(l, r)| format!("{}={}", self.word_to_string(l), self.word_to_string(r)))
            .collect();
        writeln!(f, "rels: {}", rels.join(", "))?;
        let ps: Vec<String> = self.pset_words.iter().map(|w| self.word_to_string(w)).collect();
        writeln!(f, "P: {}", ps.join(", "))
    }
}

/// Names are runs of ASCII letters or `_`, and no name is a prefix of
/// another, so juxtaposed words tokenize uniquely.
fn validate_names(names: &[String]) -> Result<(), PresentationError> {
    for (i, n) in names.iter().enumerate() {
        let ok = !n.is_empty() && n.chars().all(|c| c.is_ascii_alphabetic() || c == '_');
        if !ok {
            return Err(PresentationError::BadName { name: n.clone() });
        }
        for (j, m) in names.iter().enumerate() {
            if i != j && m.starts_with(n.as_str()) {
                return Err(PresentationError::BadName { name: m.clone() });
            }
        }
    }
    Ok(())
}

fn parse_word(names: &[String], text: &str, line: usize) -> Result<Word, PresentationError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(syntax(line, "empty word"));
    }
    let mut w = vec![0u32; names.len()];
    if s == "1" {
        return Ok(w);
    }
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &s[i..];
        let hit = names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len());
        let Some((g, name)) = hit else {
            let sym: String = rest.chars().take_while(|c| !c.is_ascii_digit()).collect();
            let sym = if sym.is_empty() { rest.to_string() } else { sym };
            return Err(PresentationError::UnknownSymbol { symbol: sym });
        };
        i += name.len();
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let e: u32 = if start == i {
            1
        } else {
            s[start..i].parse().map_err(|_| syntax(line, format!("bad exponent in {s:?}")))?
        };
        w[g] = w[g].checked_add(e).ok_or_else(|| syntax(line, "exponent overflow"))?;
    }
    Ok(w)
}

fn split_list(body: &str) -> impl Iterator<Item = &str> {
    body.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Parses one block.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut all = parse_presentations(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(syntax(1, "no presentation found")),
        _ => Err(syntax(1, "expected a single presentation")),
    }
}

/// Parses blank-line separated blocks. Lines starting with `#` are ignored.
pub fn parse_presentations(text: &str) -> Result<Vec<Presentation>, PresentationError> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !block.is_empty() {
                out.push(parse_block(&block)?);
                block.clear();
            }
            continue;
        }
        block.push((i + 1, line));
    }
    if !block.is_empty() {
        out.push(parse_block(&block)?);
    }
    Ok(out)
}

fn parse_block(lines: &[(usize, &str)]) -> Result<Presentation, PresentationError> {
    let mut gens: Option<Vec<String>> = None;
    let mut rels: Option<(usize, &str)> = None;
    let mut ps: Option<(usize, &str)> = None;
    for &(no, line) in lines {
        let Some((key, body)) = line.split_once(':') else {
            return Err(syntax(no, "expected `key: value`"));
        };
        let slot = match key.trim() {
            "gens" => {
                if gens.is_some() {
                    return Err(syntax(no, "duplicate gens line"));
                }
                let names: Vec<String> = split_list(body).map(str::to_string).collect();
                validate_names(&names)?;
                gens = Some(names);
                continue;
            }
            "rels" => &mut rels,
            "P" => &mut ps,
            other => return Err(syntax(no, format!("unknown key {other:?}"))),
        };
        if slot.is_some() {
            return Err(syntax(no, format!("duplicate {} line", key.trim())));
        }
        *slot = Some((no, body));
    }
    let names = gens.ok_or_else(|| syntax(lines[0].0, "missing gens line"))?;
    let mut relations = Vec::new();
    if let Some((no, body)) = rels {
        for eq in split_list(body) {
            let Some((l, r)) = eq.split_once('=') else {
                return Err(syntax(no, format!("relation {eq:?} has no `=`")));
            };
            relations.push((parse_word(&names, l, no)?, parse_word(&names, r, no)?));
        }
    }
    let mut pset_words = Vec::new();
    if let Some((no, body)) = ps {
        for w in split_list(body) {
            pset_words.push(parse_word(&names, w, no)?);
        }
    }
    Ok(Presentation { generator_names: names, relations, pset_words })
}

const UNDEF: usize = usize::MAX;

/// Word graph under coset enumeration; merged nodes forward through `parent`.
struct Enumerator {
    k: usize,
    edges: Vec<usize>,
    parent: Vec<usize>,
    alive: usize,
    work_cap: usize,
}

impl Enumerator {
    fn add_node(&mut self) -> Result<usize, ()> {
        self.alive += 1;
        if self.alive > self.work_cap {
            return Err(());
        }
        let id = self.parent.len();
        self.parent.push(id);
        self.edges.extend(std::iter::repeat_n(UNDEF, self.k));
        Ok(id)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn trace(&mut self, from: usize, word: &[usize]) -> Result<usize, ()> {
        let mut cur = self.find(from);
        for &g in word {
            let e = self.edges[cur * self.k + g];
            cur = if e == UNDEF {
                let n = self.add_node()?;
                self.edges[cur * self.k + g] = n;
                n
            } else {
                self.find(e)
            };
        }
        Ok(cur)
    }

    fn coincide(&mut self, a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, kill) = (x.min(y), x.max(y));
            self.parent[kill] = keep;
            self.alive -= 1;
            for g in 0..self.k {
                let ek = self.edges[kill * self.k + g];
                if ek == UNDEF {
                    continue;
                }
                let ep = self.edges[keep * self.k + g];
                if ep == UNDEF {
                    self.edges[keep * self.k + g] = ek;
                } else {
                    queue.push((ep, ek));
                }
            }
        }
    }
}

fn expand(w: &[u32]) -> Vec<usize> {
    w.iter().enumerate().flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize)).collect()
}

/// Completes the presentation to a table. Element 0 is the identity and the
/// other elements follow breadth-first order in the generators.
pub fn build_from_presentation(
    p: &Presentation,
    size_cap: usize,
) -> Result<BipartiteMonoid, PresentationError> {
    p.validate()?;
    let k = p.generator_names.len();
    let cap_err = PresentationError::CapExceeded { cap: size_cap };
    let mut rels: Vec<(Vec<usize>, Vec<usize>)> =
        p.relations.iter().map(|(l, r)| (expand(l), expand(r))).collect();
    for i in 0..k {
        for j in i + 1..k {
            rels.push((vec![i, j], vec![j, i]));
        }
    }
    let work_cap = size_cap.saturating_mul(64).clamp(1024, 1 << 22);
    let mut en = Enumerator { k, edges: Vec::new(), parent: Vec::new(), alive: 0, work_cap };
    en.add_node().map_err(|_| cap_err.clone())?;
    let mut i = 0;
    while i < en.parent.len() {
        if en.find(i) != i {
            i += 1;
            continue;
        }
        for (u, v) in &rels {
            let a = en.trace(i, u).map_err(|_| cap_err.clone())?;
            let b = en.trace(i, v).map_err(|_| cap_err.clone())?;
            en.coincide(a, b);
            if en.find(i) != i {
                break;
            }
        }
        if en.find(i) == i {
            for g in 0..k {
                if en.edges[i * k + g] == UNDEF {
                    let n = en.add_node().map_err(|_| cap_err.clone())?;
                    en.edges[i * k + g] = n;
                }
            }
        }
        i += 1;
    }

    // breadth-first renumbering from the identity
    let root = en.find(0);
    let mut index = vec![UNDEF; en.parent.len()];
    let mut order = vec![root];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    index[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for g in 0..k {
            let y = en.find(en.edges[x * k + g]);
            if index[y] == UNDEF {
                index[y] = order.len();
                let mut w = words[index[x]].clone();
                w.push(g);
                words.push(w);
                order.push(y);
                queue.push_back(y);
                if order.len() > size_cap {
                    return Err(cap_err);
                }
            }
        }
    }
    let n = order.len();
    let mut table = vec![0; n * n];
    for (xi, &x) in order.iter().enumerate() {
        for (yi, w) in words.iter().enumerate() {
            let mut cur = x;
            for &g in w {
                cur = en.find(en.edges[cur * k + g]);
            }
            table[xi * n + yi] = index[cur];
        }
    }
    let mut gens = Vec::new();
    for g in 0..k {
        let e = index[en.find(en.edges[root * k + g])];
        if e != 0 && !gens.contains(&e) {
            gens.push(e);
        }
    }
    let gen_elem: Vec<usize> = (0..k).map(|g| index[en.find(en.edges[root * k + g])]).collect();
    let mut pset = vec![false; n];
    for w in &p.pset_words {
        let mut cur = 0usize;
        for g in expand(w) {
            cur = table[cur * n + gen_elem[g]];
        }
        pset[cur] = true;
    }
    Ok(BipartiteMonoid::from_bits(Monoid::from_flat(n, 0, table, gens), pset))
}
