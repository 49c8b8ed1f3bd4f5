use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{validate, Counterexample, TransitionAlgebra, TransitionPair};
use crate::games::{GameId, GameStore};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("transition algebra is not valid: {}", .0.first().map(|c| c.to_string()).unwrap_or_default())]
    Invalid(Vec<Counterexample>),
}

/// Games witnessing a valid algebra: one game per element and one per pair.
#[derive(Clone, Debug)]
pub struct Realization {
    pub store: GameStore,
    /// `H_x` for each element.
    pub element_games: Vec<GameId>,
    /// `H_(x,E) = {H_y : y ∈ E}` for every pair.
    pub pair_games: BTreeMap<TransitionPair, GameId>,
}

impl Realization {
    /// `Φ` on realized games: each game maps to the value of the pair (or
    /// element) it was built for.
    pub fn labeling(&self) -> HashMap<GameId, usize> {
        let mut phi = HashMap::new();
        for (x, &g) in self.element_games.iter().enumerate() {
            phi.insert(g, x);
        }
        for (p, &g) in &self.pair_games {
            phi.insert(g, p.value);
        }
        phi
    }

    pub fn roots(&self) -> Vec<GameId> {
        let mut r: Vec<GameId> = self.pair_games.values().copied().collect();
        r.sort();
        r.dedup();
        r
    }
}

pub fn realize_games(t: &TransitionAlgebra) -> Result<Realization, RealizeError> {
    let report = validate(t);
    if !report.valid() {
        return Err(RealizeError::Invalid(report.counterexamples));
    }
    let rank: Vec<usize> = report.rank.iter().map(|r| r.expect("total rank")).collect();
    let n = t.base.size();

    // witness per element: least option bitmask among pairs whose options
    // all have strictly smaller rank; the identity uses (1, ∅)
    let mut witness: Vec<Option<TransitionPair>> = vec![None; n];
    for &p in &t.pairs {
        let lower = p.options.iter().all(|y| rank[y] < rank[p.value]);
        let ok = lower || (p.value == t.base.identity() && p.options.is_empty());
        if ok && witness[p.value].is_none_or(|w| p.options < w.options) {
            witness[p.value] = Some(p);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (rank[x], x));
    let mut store = GameStore::new();
    let mut element_games = vec![GameStore::ZERO; n];
    for x in order {
        let w = witness[x].expect("fixed point gives a witness");
        let opts = w.options.iter().map(|y| element_games[y]).collect();
        element_games[x] = store.insert(opts);
    }
    let pair_games = t
        .pairs
        .iter()
        .map(|&p| {
            let opts = p.options.iter().map(|y| element_games[y]).collect();
            (p, store.insert(opts))
        })
        .collect();
    Ok(Realization { store, element_games, pair_games })
}
