//! Misère quotients of impartial games: reduced bipartite monoids, the
//! catalog families `T_n` and `R_{2^n+4}`, transition algebras, the
//! classification search, and a brute-force game oracle to check them all
//! against.

// multiplication tables read best with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod classifier;
pub mod games;
pub mod monoid;
pub mod transition;
