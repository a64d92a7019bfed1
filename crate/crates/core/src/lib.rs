//! Provenance games.
//!
//! Query evaluation for non-recursive Datalog with negation is cast as a
//! two-player win-move game. Solving the game labels every position won, lost
//! or drawn; the subgraph of good moves reachable from a position (its *game
//! provenance*) explains the value. For positive queries that subgraph reads
//! out as an `N[X]` provenance polynomial, and for missing answers its leaves
//! name the absent input facts.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, the command line and
//! export formats live in the `provgame-cli` crate.
//!
//! Layout:
//! - [`game`]: generic finite games, the round-based solver, edge labels, Γ.
//! - [`wfs`]: alternating-fixpoint solver for `win(X) :- move(X,Y), not win(Y)`.
//! - [`datalog`]: surface syntax, validation, grounding, reference evaluators.
//! - [`poly`]: canonical polynomials and the `N[X]`, `B[X]`, `Trio(X)` semirings.
//! - [`query_game`]: construction of the query evaluation game.
//! - [`explain`]: operator DAGs, polynomial read-out, why / why-not reports.

#![no_std]

extern crate alloc;

pub mod datalog;
mod error;
pub mod explain;
pub mod game;
pub mod poly;
pub mod query_game;
#[cfg(test)]
mod testgen;
pub mod wfs;

pub use error::{Error, ErrorKind, Result};
