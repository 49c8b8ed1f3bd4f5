//! Octal and hexadecimal heap games.
//!
//! Digit `d_i` governs removing `i` tokens from a heap of size `n ≥ i`:
//! bit 1 allows it when nothing remains (`n = i`), bit 2 when one nonempty
//! heap remains, bit 4 when the remainder is split into two nonempty heaps,
//! and bit 8 (hexadecimal codes) into three. The whole-heap digit `d_0`
//! removes nothing, so only its splitting bits 4 and 8 mean anything.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::store::{mex, GameId, GameStore};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OctalCode {
    pub whole_heap_digit: u8,
    /// `digits[i - 1]` is `d_i`.
    pub digits: Vec<u8>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OctalError {
    #[error("empty code")]
    Empty,
    #[error("expected '.' after the whole-heap digit")]
    MissingPoint,
    #[error("invalid digit {0:?}")]
    BadDigit(char),
    #[error("whole-heap digit {0} may only use bits 4 and 8")]
    BadWholeHeapDigit(u8),
    #[error("last digit must be nonzero")]
    TrailingZero,
    #[error("more than {0} digits")]
    TooLong(usize),
}

/// Longest code accepted by the parser.
pub const MAX_DIGITS: usize = 64;

impl FromStr for OctalCode {
    type Err = OctalError;

    fn from_str(s: &str) -> Result<Self, OctalError> {
        let s = s.trim();
        let mut chars = s.chars();
        let d0 = chars.next().ok_or(OctalError::Empty)?;
        let digit = |c: char| c.to_digit(16).map(|d| d as u8).ok_or(OctalError::BadDigit(c));
        let whole_heap_digit = digit(d0)?;
        if whole_heap_digit & 3 != 0 {
            return Err(OctalError::BadWholeHeapDigit(whole_heap_digit));
        }
        if chars.next() != Some('.') {
            return Err(OctalError::MissingPoint);
        }
        let digits = chars.map(digit).collect::<Result<Vec<u8>, _>>()?;
        if digits.len() > MAX_DIGITS {
            return Err(OctalError::TooLong(MAX_DIGITS));
        }
        match digits.last() {
            Some(0) => Err(OctalError::TrailingZero),
            None if whole_heap_digit == 0 => Err(OctalError::Empty),
            _ => Ok(OctalCode { whole_heap_digit, digits }),
        }
    }
}

impl fmt::Display for OctalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:X}.", self.whole_heap_digit)?;
        for d in &self.digits {
            write!(f, "{d:X}")?;
        }
        Ok(())
    }
}

impl OctalCode {
    /// Position of the last nonzero digit (`d` in the almost-tame window).
    pub fn last_digit_position(&self) -> usize {
        self.digits.len()
    }

    fn digit(&self, i: usize) -> u8 {
        if i == 0 {
            self.whole_heap_digit
        } else {
            self.digits.get(i - 1).copied().unwrap_or(0)
        }
    }
}

/// Every option of a heap of size `n`, as a sorted list of nonempty heaps.
pub fn octal_moves(code: &OctalCode, n: u32) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    for i in 0..=n.min(code.digits.len() as u32) {
        let d = code.digit(i as usize);
        let r = n - i;
        if d & 1 != 0 && r == 0 && i > 0 {
            out.insert(vec![]);
        }
        if d & 2 != 0 && r >= 1 && i > 0 {
            out.insert(vec![r]);
        }
        if d & 4 != 0 {
            for a in 1..=r / 2 {
                out.insert(vec![a, r - a]);
            }
        }
        if d & 8 != 0 {
            for a in 1..=r / 3 {
                for b in a..=(r - a) / 2 {
                    out.insert(vec![a, b, r - a - b]);
                }
            }
        }
    }
    out
}

/// Heap games `H_0..=H_n` in `store`.
pub fn octal_heap_games(code: &OctalCode, n: u32, store: &mut GameStore) -> Vec<GameId> {
    let mut heaps = vec![GameStore::ZERO];
    for m in 1..=n {
        let opts = octal_moves(code, m)
            .into_iter()
            .map(|parts| {
                let games: Vec<GameId> = parts.iter().map(|&p| heaps[p as usize]).collect();
                store.sum_all(&games)
            })
            .collect();
        heaps.push(store.insert(opts));
    }
    heaps
}

pub fn octal_heap_game(code: &OctalCode, n: u32, store: &mut GameStore) -> GameId {
    octal_heap_games(code, n, store)[n as usize]
}

/// Grundy values of heaps `0..=n`, by mex over XORs of option parts.
pub fn grundy_sequence(code: &OctalCode, n: u32) -> Vec<u32> {
    let mut g = vec![0u32];
    for m in 1..=n {
        let vals: Vec<u32> = octal_moves(code, m)
            .iter()
            .map(|parts| parts.iter().fold(0, |acc, &p| acc ^ g[p as usize]))
            .collect();
        g.push(mex(&vals));
    }
    g
}
