use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::store::{GameId, GameStore, Position};
use crate::monoid::BipartiteMonoid;
use crate::transition::{OptionSet, TransitionPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    P,
    N,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// Memoized outcome recursion over positions of one store.
pub struct Oracle<'a> {
    store: &'a GameStore,
    misere: HashMap<Position, Outcome>,
    normal: HashMap<Position, Outcome>,
}

impl<'a> Oracle<'a> {
    pub fn new(store: &'a GameStore) -> Self {
        Oracle { store, misere: HashMap::new(), normal: HashMap::new() }
    }

    /// N iff there is no move (the previous player moved last and loses) or
    /// some option is P.
    pub fn outcome_misere(&mut self, p: &Position) -> Outcome {
        if let Some(&o) = self.misere.get(p) {
            return o;
        }
        let opts = p.options(self.store);
        let o = if opts.is_empty() || opts.iter().any(|q| self.outcome_misere(q) == Outcome::P) {
            Outcome::N
        } else {
            Outcome::P
        };
        self.misere.insert(p.clone(), o);
        o
    }

    /// N iff some option is P; a position without moves is P.
    pub fn outcome_normal(&mut self, p: &Position) -> Outcome {
        if let Some(&o) = self.normal.get(p) {
            return o;
        }
        let opts = p.options(self.store);
        let o =
            if opts.iter().any(|q| self.outcome_normal(q) == Outcome::P) { Outcome::N } else { Outcome::P };
        self.normal.insert(p.clone(), o);
        o
    }

    pub fn memo_len(&self) -> usize {
        self.misere.len() + self.normal.len()
    }
}

/// The misère recursion with no memo table, as a reference to compare the
/// memoized oracle against.
pub fn outcome_misere_naive(store: &GameStore, p: &Position) -> Outcome {
    let opts = p.options(store);
    if opts.is_empty() || opts.iter().any(|q| outcome_misere_naive(store, q) == Outcome::P) {
        Outcome::N
    } else {
        Outcome::P
    }
}

pub fn outcome_normal_naive(store: &GameStore, p: &Position) -> Outcome {
    let opts = p.options(store);
    if opts.iter().any(|q| outcome_normal_naive(store, q) == Outcome::P) {
        Outcome::N
    } else {
        Outcome::P
    }
}

/// Grundy value of a sum by recursion on the sum itself.
pub fn grundy_of_position(store: &GameStore, p: &Position, memo: &mut HashMap<Position, u32>) -> u32 {
    if let Some(&g) = memo.get(p) {
        return g;
    }
    let vals: Vec<u32> = p.options(store).iter().map(|q| grundy_of_position(store, q, memo)).collect();
    let g = super::store::mex(&vals);
    memo.insert(p.clone(), g);
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionCaps {
    /// Largest number of (nonzero) components.
    pub max_components: usize,
    /// Drop closure games born after this day.
    pub max_birthday: Option<u32>,
    /// Abort when more positions than this would be produced.
    pub max_positions: usize,
}

impl PositionCaps {
    pub fn components(max_components: usize) -> Self {
        PositionCaps { max_components, max_birthday: None, max_positions: 5_000_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("more than {0} positions within caps")]
    TooMany(usize),
    #[error("no value supplied for game {0}")]
    Unlabeled(GameId),
}

/// Nonzero games in the hereditary closure of `gens`, within the birthday
/// cap.
pub fn closure_games(store: &GameStore, gens: &[GameId], caps: &PositionCaps) -> Vec<GameId> {
    store
        .hereditary_closure(gens)
        .into_iter()
        .filter(|&g| g != GameStore::ZERO)
        .filter(|&g| caps.max_birthday.is_none_or(|b| store.birthday(g) <= b))
        .collect()
}

/// Every sum of closure games with at most `max_components` parts, the
/// empty sum included.
pub fn closure_positions(
    store: &GameStore,
    gens: &[GameId],
    caps: &PositionCaps,
) -> Result<Vec<Position>, ClosureError> {
    let games = closure_games(store, gens, caps);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    multisets(&games, 0, caps.max_components, &mut cur, &mut out, caps.max_positions)?;
    Ok(out)
}

fn multisets(
    games: &[GameId],
    from: usize,
    left: usize,
    cur: &mut Vec<GameId>,
    out: &mut Vec<Position>,
    cap: usize,
) -> Result<(), ClosureError> {
    if out.len() >= cap {
        return Err(ClosureError::TooMany(cap));
    }
    out.push(Position::new(cur.clone()));
    if left == 0 {
        return Ok(());
    }
    for i in from..games.len() {
        cur.push(games[i]);
        multisets(games, i, left - 1, cur, out, cap)?;
        cur.pop();
    }
    Ok(())
}

/// `Φ(Y)` for a position, multiplying component values.
pub fn phi_of(
    phi: &HashMap<GameId, usize>,
    m: &BipartiteMonoid,
    p: &Position,
) -> Result<usize, ClosureError> {
    let mut acc = m.identity();
    for &c in p.components() {
        let v = *phi.get(&c).ok_or(ClosureError::Unlabeled(c))?;
        acc = m.mul(acc, v);
    }
    Ok(acc)
}

/// The pairs `(Φ(Y), Φ″Y)` induced on `positions`.
pub fn transition_of_positions(
    store: &GameStore,
    positions: &[Position],
    phi: &HashMap<GameId, usize>,
    m: &BipartiteMonoid,
) -> Result<BTreeSet<TransitionPair>, ClosureError> {
    let mut out = BTreeSet::new();
    for p in positions {
        let x = phi_of(phi, m, p)?;
        let mut e = OptionSet::EMPTY;
        for q in p.options(store) {
            e.insert(phi_of(phi, m, &q)?);
        }
        out.insert(TransitionPair { value: x, options: e });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PretensionViolation {
    pub position: Position,
    pub image: usize,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct PretensionReport {
    pub checked: usize,
    pub violations: Vec<PretensionViolation>,
}

impl PretensionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every position within caps, `Φ(Y) ∈ P` must agree with the misère
/// oracle.
pub fn check_pretension_parity(
    store: &GameStore,
    gens: &[GameId],
    phi: &HashMap<GameId, usize>,
    b: &BipartiteMonoid,
    caps: &PositionCaps,
) -> Result<PretensionReport, ClosureError> {
    let positions = closure_positions(store, gens, caps)?;
    let mut oracle = Oracle::new(store);
    let mut report = PretensionReport::default();
    for p in positions {
        let image = phi_of(phi, b, &p)?;
        let outcome = oracle.outcome_misere(&p);
        report.checked += 1;
        if b.in_p(image) != (outcome == Outcome::P) {
            report.violations.push(PretensionViolation { position: p, image, outcome });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_tn;

    #[test]
    fn small_outcomes() {
        let mut s = GameStore::new();
        let star = s.nimber(1);
        let star2 = s.nimber(2);
        let mut o = Oracle::new(&s);
        assert_eq!(o.outcome_misere(&Position::zero()), Outcome::N);
        assert_eq!(o.outcome_misere(&Position::new(vec![star])), Outcome::P);
        assert_eq!(o.outcome_misere(&Position::new(vec![star, star])), Outcome::N);
        assert_eq!(o.outcome_misere(&Position::new(vec![star2, star2])), Outcome::P);
        assert_eq!(o.outcome_normal(&Position::zero()), Outcome::P);
        assert_eq!(o.outcome_normal(&Position::new(vec![star, star])), Outcome::P);
    }

    #[test]
    fn closure_counts() {
        let mut s = GameStore::new();
        let star = s.nimber(1);
        let star2 = s.nimber(2);
        let caps = |k| PositionCaps::components(k);
        assert_eq!(closure_positions(&s, &[star], &caps(2)).unwrap().len(), 3);
        assert_eq!(closure_positions(&s, &[star, star2], &caps(3)).unwrap().len(), 10);
        let tight = PositionCaps { max_positions: 4, ..caps(3) };
        assert!(closure_positions(&s, &[star, star2], &tight).is_err());
    }

    #[test]
    fn t1_and_t2_pretensions() {
        let mut s = GameStore::new();
        let star = s.nimber(1);
        let star2 = s.nimber(2);
        let t1 = make_tn(1).bm;
        let good = HashMap::from([(star, 1)]);
        let caps = PositionCaps::components(4);
        assert!(check_pretension_parity(&s, &[star], &good, &t1, &caps).unwrap().ok());
        let bad = HashMap::from([(star, 0)]);
        let r = check_pretension_parity(&s, &[star], &bad, &t1, &caps).unwrap();
        assert!(r.violations.iter().any(|v| v.position == Position::new(vec![star])));

        let t2 = make_tn(2).bm;
        let b = crate::catalog::t_z(2);
        let phi = HashMap::from([(star, crate::catalog::T_A), (star2, b)]);
        assert!(check_pretension_parity(&s, &[star, star2], &phi, &t2, &caps).unwrap().ok());
        let pairs =
            transition_of_positions(&s, &closure_positions(&s, &[star, star2], &caps).unwrap(), &phi, &t2)
                .unwrap();
        let want = TransitionPair { value: b, options: OptionSet::from_iter([0, crate::catalog::T_A]) };
        assert!(pairs.contains(&want));
    }
}
