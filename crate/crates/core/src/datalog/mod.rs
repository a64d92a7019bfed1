//! Non-recursive Datalog with negation: syntax, validation, grounding and
//! two reference evaluators.

mod ast;
mod eval;
mod parse;

pub use ast::{
    active_domain, ActiveDomain, Atom, Database, GroundAtom, Literal, Program, Rule, Term, Tuples,
};
pub use eval::{
    evaluate_semiring, evaluate_stratified, ground, instantiate, GroundRule, Substitution,
};
pub use parse::{parse_database, parse_ground_atom, parse_program};
