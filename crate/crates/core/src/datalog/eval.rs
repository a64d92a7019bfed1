use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::{active_domain, ActiveDomain, Atom, Database, GroundAtom, Program, Rule, Term};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Variable assignment, by variable name.
pub type Substitution = BTreeMap<String, String>;

/// Applies `subst` to `atom`. Unbound variables are a caller bug.
pub fn instantiate(atom: &Atom, subst: &Substitution) -> GroundAtom {
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Const(c) => c.clone(),
            Term::Var(v) => subst
                .get(v)
                .unwrap_or_else(|| panic!("variable {v} is unbound"))
                .clone(),
        })
        .collect();
    GroundAtom::new(atom.predicate.clone(), args)
}

/// One instance of a rule: its variables (sorted by name) bound to constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundRule<'a> {
    pub rule: &'a Rule,
    pub variables: Vec<String>,
    pub binding: Vec<String>,
}

impl<'a> GroundRule<'a> {
    pub fn substitution(&self) -> Substitution {
        self.variables
            .iter()
            .cloned()
            .zip(self.binding.iter().cloned())
            .collect()
    }

    pub fn head(&self) -> GroundAtom {
        instantiate(&self.rule.head, &self.substitution())
    }

    /// Goals in body order as `(negated, atom)`.
    pub fn goals(&self) -> Vec<(bool, GroundAtom)> {
        let subst = self.substitution();
        self.rule
            .body
            .iter()
            .map(|l| (l.negated, instantiate(&l.atom, &subst)))
            .collect()
    }
}

/// Instantiates every rule over every assignment of its variables to the
/// active domain. A rule with `k` variables yields `|adom|^k` instances, in
/// rule order and then lexicographic binding order.
pub fn ground<'a>(program: &'a Program, adom: &ActiveDomain) -> Vec<GroundRule<'a>> {
    let mut out = Vec::new();
    for rule in program.rules() {
        let variables = rule.variables();
        for binding in adom.tuples(variables.len()) {
            out.push(GroundRule {
                rule,
                variables: variables.clone(),
                binding,
            });
        }
    }
    out
}

type Relation<T> = BTreeMap<Vec<String>, T>;

fn unify(atom: &Atom, tuple: &[String], subst: &mut Substitution) -> bool {
    for (term, value) in atom.args.iter().zip(tuple) {
        match term {
            Term::Const(c) if c != value => return false,
            Term::Const(_) => {}
            Term::Var(v) => match subst.get(v) {
                Some(bound) if bound != value => return false,
                Some(_) => {}
                None => {
                    subst.insert(v.clone(), value.clone());
                }
            },
        }
    }
    true
}

/// Calls `emit` once per total assignment of the rule's variables that
/// satisfies every positive goal, with the matched tuples' payloads in goal
/// order. Variables not bound by a positive goal range over `adom`.
fn for_each_match<'r, T>(
    rule: &Rule,
    adom: &ActiveDomain,
    relations: &'r BTreeMap<String, Relation<T>>,
    emit: &mut dyn FnMut(&Substitution, &[&'r T]),
) {
    let positive: Vec<&Atom> = rule
        .body
        .iter()
        .filter(|l| !l.negated)
        .map(|l| &l.atom)
        .collect();
    let variables = rule.variables();

    #[allow(clippy::too_many_arguments)]
    fn step<'r, T>(
        i: usize,
        goals: &[&Atom],
        variables: &[String],
        adom: &ActiveDomain,
        relations: &'r BTreeMap<String, Relation<T>>,
        subst: &Substitution,
        payloads: &mut Vec<&'r T>,
        emit: &mut dyn FnMut(&Substitution, &[&'r T]),
    ) {
        if i == goals.len() {
            let free: Vec<&String> = variables
                .iter()
                .filter(|v| !subst.contains_key(*v))
                .collect();
            for values in adom.tuples(free.len()) {
                let mut full = subst.clone();
                for (v, c) in free.iter().zip(values) {
                    full.insert((*v).clone(), c);
                }
                emit(&full, payloads);
            }
            return;
        }
        let Some(rel) = relations.get(&goals[i].predicate) else {
            return;
        };
        for (tuple, payload) in rel {
            let mut next = subst.clone();
            if unify(goals[i], tuple, &mut next) {
                payloads.push(payload);
                step(
                    i + 1,
                    goals,
                    variables,
                    adom,
                    relations,
                    &next,
                    payloads,
                    emit,
                );
                payloads.pop();
            }
        }
    }

    step(
        0,
        &positive,
        &variables,
        adom,
        relations,
        &Substitution::new(),
        &mut Vec::new(),
        emit,
    );
}

fn edb_relations<T>(db: &Database, payload: impl Fn(&str) -> T) -> BTreeMap<String, Relation<T>> {
    let mut rels: BTreeMap<String, Relation<T>> = BTreeMap::new();
    for (fact, ann) in db.facts() {
        rels.entry(fact.predicate.clone())
            .or_default()
            .insert(fact.args.clone(), payload(ann));
    }
    rels
}

/// Stratified bottom-up evaluation. Predicates are computed in dependency
/// order, so every negated goal is checked against a complete relation.
/// Returns the derived IDB atoms.
pub fn evaluate_stratified(program: &Program, db: &Database) -> BTreeSet<GroundAtom> {
    let adom = active_domain(program, db);
    let mut rels = edb_relations(db, |_| ());
    let mut out = BTreeSet::new();
    for predicate in program.evaluation_order() {
        let mut derived: Relation<()> = BTreeMap::new();
        for rule in program.rules_for(predicate) {
            for_each_match(rule, &adom, &rels, &mut |subst, _| {
                let blocked = rule.body.iter().filter(|l| l.negated).any(|l| {
                    let atom = instantiate(&l.atom, subst);
                    rels.get(&atom.predicate)
                        .is_some_and(|r| r.contains_key(&atom.args))
                });
                if !blocked {
                    derived.insert(instantiate(&rule.head, subst).args, ());
                }
            });
        }
        for args in derived.keys() {
            out.insert(GroundAtom::new(predicate.clone(), args.clone()));
        }
        rels.insert(predicate.clone(), derived);
    }
    out
}

/// `N[X]` annotation of every derived IDB atom of a positive program. Each
/// matching rule instance contributes the product of its goals' annotations
/// and alternative instances are summed.
pub fn evaluate_semiring(
    program: &Program,
    db: &Database,
) -> Result<BTreeMap<GroundAtom, Polynomial>> {
    if let Some(rule) = program.rules().iter().find(|r| !r.is_positive()) {
        return Err(Error::NegationUnsupported(rule.to_string()));
    }
    let adom = active_domain(program, db);
    let mut rels = edb_relations(db, |a| Polynomial::var(a));
    let mut out = BTreeMap::new();
    for predicate in program.evaluation_order() {
        let mut derived: Relation<Polynomial> = BTreeMap::new();
        for rule in program.rules_for(predicate) {
            for_each_match(rule, &adom, &rels, &mut |subst, payloads| {
                let product = payloads.iter().fold(Polynomial::one(), |acc, p| acc.mul(p));
                let head = instantiate(&rule.head, subst).args;
                let slot = derived.entry(head).or_insert_with(Polynomial::zero);
                *slot = slot.add(&product);
            });
        }
        for (args, poly) in &derived {
            out.insert(
                GroundAtom::new(predicate.clone(), args.clone()),
                poly.clone(),
            );
        }
        rels.insert(predicate.clone(), derived);
    }
    Ok(out)
}
