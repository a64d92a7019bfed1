//! Well-founded model of `win(X) :- move(X,Y), not win(Y)` by the alternating
//! fixpoint, computed directly on the move relation.
//!
//! This is an independent route to game values: true atoms are won
//! positions, false atoms lost ones, undefined atoms drawn ones.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::game::{GameGraph, NodeValue, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThreeValued {
    True,
    False,
    Undef,
}

impl ThreeValued {
    /// The game value this truth value corresponds to.
    pub fn as_node_value(self) -> NodeValue {
        match self {
            ThreeValued::True => NodeValue::Won,
            ThreeValued::False => NodeValue::Lost,
            ThreeValued::Undef => NodeValue::Drawn,
        }
    }
}

impl fmt::Display for ThreeValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreeValued::True => "true",
            ThreeValued::False => "false",
            ThreeValued::Undef => "undef",
        })
    }
}

/// One step of the alternating fixpoint: an underestimate of the true atoms
/// and the overestimate derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub under: BTreeSet<usize>,
    pub over: BTreeSet<usize>,
}

/// `T(S) = { x | exists (x,y) in M with y not in S }`
fn consequence<P: Position>(g: &GameGraph<P>, assumed: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..g.len())
        .filter(|&x| g.followers_at(x).iter().any(|y| !assumed.contains(y)))
        .collect()
}

/// Runs the alternating fixpoint and returns every step, starting from
/// `U_0 = {}`. The last step holds the limits `U^w` and `O^w`.
pub fn alternating_fixpoint_steps<P: Position>(g: &GameGraph<P>) -> Vec<Step> {
    let mut under = BTreeSet::new();
    let mut steps = Vec::new();
    loop {
        let over = consequence(g, &under);
        let next = consequence(g, &over);
        let done = next == under;
        steps.push(Step { under, over });
        if done {
            break;
        }
        under = next;
    }
    steps
}

/// Three-valued well-founded model of `win/1` over the positions of `g`.
pub fn alternating_fixpoint<P: Position>(g: &GameGraph<P>) -> BTreeMap<P, ThreeValued> {
    let steps = alternating_fixpoint_steps(g);
    let last = steps.last().expect("at least one step");
    g.positions()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let v = if last.under.contains(&i) {
                ThreeValued::True
            } else if last.over.contains(&i) {
                ThreeValued::Undef
            } else {
                ThreeValued::False
            };
            (p.clone(), v)
        })
        .collect()
}
