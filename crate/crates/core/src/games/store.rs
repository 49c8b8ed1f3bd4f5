use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Handle into a [`GameStore`]. Options always have smaller ids than the
/// games they belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameId(pub u32);

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// Append-only, structurally deduplicated table of impartial games.
#[derive(Clone, Debug)]
pub struct GameStore {
    options: Vec<Vec<GameId>>,
    birthday: Vec<u32>,
    index: HashMap<Vec<GameId>, GameId>,
    sums: HashMap<(GameId, GameId), GameId>,
}

impl Default for GameStore {
    fn default() -> Self {
        Self::new()
    }
}

impl GameStore {
    pub fn new() -> Self {
        let mut s = GameStore {
            options: Vec::new(),
            birthday: Vec::new(),
            index: HashMap::new(),
            sums: HashMap::new(),
        };
        s.insert(Vec::new());
        s
    }

    pub const ZERO: GameId = GameId(0);

    /// The game whose options are `opts`; equal option sets give equal ids.
    pub fn insert(&mut self, mut opts: Vec<GameId>) -> GameId {
        opts.sort_unstable();
        opts.dedup();
        if let Some(&g) = self.index.get(&opts) {
            return g;
        }
        assert!(opts.iter().all(|o| (o.0 as usize) < self.options.len()), "options must already be stored");
        let id = GameId(self.options.len() as u32);
        let b = opts.iter().map(|o| self.birthday[o.0 as usize] + 1).max().unwrap_or(0);
        self.options.push(opts.clone());
        self.birthday.push(b);
        self.index.insert(opts, id);
        id
    }

    pub fn options(&self, g: GameId) -> &[GameId] {
        &self.options[g.0 as usize]
    }

    pub fn birthday(&self, g: GameId) -> u32 {
        self.birthday[g.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GameId> {
        (0..self.options.len() as u32).map(GameId)
    }

    /// The nimber `∗k`.
    pub fn nimber(&mut self, k: u32) -> GameId {
        let mut opts = Vec::new();
        for _ in 0..k {
            let next = self.insert(opts.clone());
            opts.push(next);
        }
        self.insert(opts)
    }

    /// Disjunctive sum as a single game tree.
    pub fn sum(&mut self, g: GameId, h: GameId) -> GameId {
        if g == Self::ZERO {
            return h;
        }
        if h == Self::ZERO {
            return g;
        }
        let key = (g.min(h), g.max(h));
        if let Some(&s) = self.sums.get(&key) {
            return s;
        }
        let mut opts = Vec::new();
        for go in self.options(g).to_vec() {
            opts.push(self.sum(go, h));
        }
        for ho in self.options(h).to_vec() {
            opts.push(self.sum(g, ho));
        }
        let s = self.insert(opts);
        self.sums.insert(key, s);
        s
    }

    pub fn sum_all(&mut self, parts: &[GameId]) -> GameId {
        parts.iter().fold(Self::ZERO, |acc, &p| self.sum(acc, p))
    }

    /// All games reachable from `roots`, including the roots, ascending.
    pub fn hereditary_closure(&self, roots: &[GameId]) -> Vec<GameId> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<GameId> = roots.to_vec();
        while let Some(g) = stack.pop() {
            if std::mem::replace(&mut seen[g.0 as usize], true) {
                continue;
            }
            stack.extend_from_slice(self.options(g));
        }
        self.ids().filter(|g| seen[g.0 as usize]).collect()
    }

    /// Grundy values of every stored game, computed in id order.
    pub fn grundy_all(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(self.len());
        for opts in &self.options {
            let vals: Vec<u32> = opts.iter().map(|o| out[o.0 as usize]).collect();
            out.push(mex(&vals));
        }
        out
    }

    pub fn grundy(&self, g: GameId) -> u32 {
        // only the hereditary closure matters
        let mut memo: HashMap<GameId, u32> = HashMap::new();
        for h in self.hereditary_closure(&[g]) {
            let vals: Vec<u32> = self.options(h).iter().map(|o| memo[o]).collect();
            memo.insert(h, mex(&vals));
        }
        memo[&g]
    }
}

/// Minimum excluded non-negative integer.
pub fn mex(vals: &[u32]) -> u32 {
    let mut seen = vec![false; vals.len() + 1];
    for &v in vals {
        if (v as usize) < seen.len() {
            seen[v as usize] = true;
        }
    }
    seen.iter().position(|&s| !s).unwrap_or(vals.len()) as u32
}

/// A disjunctive sum, kept sorted with zero components dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(Vec<GameId>);

impl Position {
    pub fn new(mut parts: Vec<GameId>) -> Self {
        parts.retain(|&g| g != GameStore::ZERO);
        parts.sort_unstable();
        Position(parts)
    }

    pub fn zero() -> Self {
        Position(Vec::new())
    }

    pub fn components(&self) -> &[GameId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every position reachable in one move.
    pub fn options(&self, store: &GameStore) -> Vec<Position> {
        let mut out = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            if i > 0 && self.0[i - 1] == c {
                continue;
            }
            for &o in store.options(c) {
                let mut next = self.0.clone();
                next.remove(i);
                if o != GameStore::ZERO {
                    let at = next.partition_point(|&x| x < o);
                    next.insert(at, o);
                }
                out.push(Position(next));
            }
        }
        out
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == g).count();
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{run}*{g}")?;
            } else {
                write!(f, "{g}")?;
            }
            i += run;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositionParseError {
    #[error("empty term in position")]
    EmptyTerm,
    #[error("bad term {0:?}; expected `g<id>` or `<k>*g<id>`")]
    BadTerm(String),
    #[error("position has more than {0} components")]
    TooLarge(usize),
}

/// Upper bound on components accepted from text.
pub const MAX_TEXT_COMPONENTS: usize = 4096;

/// Parses `2*g3+g7` into `(multiplicity, file id)` terms. `0` is the empty
/// sum.
pub fn parse_position(text: &str) -> Result<Vec<(u32, u64)>, PositionParseError> {
    let mut out = Vec::new();
    let mut total: u64 = 0;
    let text = text.trim();
    if text == "0" {
        return Ok(out);
    }
    for term in text.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(PositionParseError::EmptyTerm);
        }
        let bad = || PositionParseError::BadTerm(term.to_string());
        let (count, game) = match term.split_once('*') {
            Some((k, g)) => (k.trim().parse::<u32>().map_err(|_| bad())?, g.trim()),
            None => (1, term),
        };
        let id = game.strip_prefix('g').ok_or_else(bad)?;
        if id.is_empty() || !id.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let id: u64 = id.parse().map_err(|_| bad())?;
        total += u64::from(count);
        if total > MAX_TEXT_COMPONENTS as u64 {
            return Err(PositionParseError::TooLarge(MAX_TEXT_COMPONENTS));
        }
        out.push((count, id));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameJsonEntry {
    pub id: u64,
    pub options: Vec<u64>,
}

/// `{"games": [{"id", "options"}]}`, ids topologically ordered. Extra
/// top-level fields (such as the pair map written by `realize`) are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GamesJson {
    pub games: Vec<GameJsonEntry>,
}

#[derive(Debug, Error)]
pub enum GamesJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("game id {0} appears twice")]
    Duplicate(u64),
    #[error("game {game} refers to {option}, which is not defined earlier")]
    Forward { game: u64, option: u64 },
}

impl GamesJson {
    pub fn parse(text: &str) -> Result<Self, GamesJsonError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Loads into `store`, returning file id → store id.
    pub fn load(&self, store: &mut GameStore) -> Result<HashMap<u64, GameId>, GamesJsonError> {
        let mut map = HashMap::new();
        for e in &self.games {
            if map.contains_key(&e.id) {
                return Err(GamesJsonError::Duplicate(e.id));
            }
            let mut opts = Vec::with_capacity(e.options.len());
            for o in &e.options {
                match map.get(o) {
                    Some(&g) => opts.push(g),
                    None => return Err(GamesJsonError::Forward { game: e.id, option: *o }),
                }
            }
            map.insert(e.id, store.insert(opts));
        }
        Ok(map)
    }

    /// The hereditary closure of `roots`, with store ids as file ids.
    pub fn export(store: &GameStore, roots: &[GameId]) -> Self {
        let games = store
            .hereditary_closure(roots)
            .into_iter()
            .map(|g| GameJsonEntry {
                id: u64::from(g.0),
                options: store.options(g).iter().map(|o| u64::from(o.0)).collect(),
            })
            .collect();
        GamesJson { games }
    }
}
