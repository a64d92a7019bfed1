use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    /// Classifies an identifier by the surface-syntax rule: names starting
    /// with an uppercase letter or `_` are variables, everything else is a
    /// constant.
    pub fn from_ident(name: &str) -> Term {
        match name.chars().next() {
            Some(c) if c.is_uppercase() || c == '_' => Term::Var(name.to_string()),
            _ => Term::Const(name.to_string()),
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(s) | Term::Var(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> + '_ {
        self.args.iter().filter_map(Term::as_var)
    }

    /// The atom as a ground atom, if it has no variables.
    pub fn to_ground(&self) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| t.as_const().map(str::to_string))
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom::new(self.predicate.clone(), args))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        write_joined(f, &self.args)?;
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub negated: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            negated: false,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            negated: true,
            atom,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// A rule `head :- body`. Indices start at 1 and follow program order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub index: usize,
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Rule {
            index: 0,
            head,
            body,
        }
    }

    /// Every variable of the rule, sorted by name. Ground rule nodes list
    /// their constants in this order.
    pub fn variables(&self) -> Vec<String> {
        let mut vars: BTreeSet<&str> = self.head.variables().collect();
        for lit in &self.body {
            vars.extend(lit.atom.variables());
        }
        vars.into_iter().map(str::to_string).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.body.iter().all(|l| !l.negated)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            write_joined(f, &self.body)?;
        }
        f.write_str(".")
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// A ground atom such as `hop(a,b)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<String>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        write_joined(f, &self.args)?;
        f.write_str(")")
    }
}

/// A validated non-recursive Datalog program with negation.
///
/// Predicates heading at least one rule are IDB, all others EDB. Arities are
/// consistent and the predicate dependency graph is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    rules: Vec<Rule>,
    arities: BTreeMap<String, usize>,
    idb: BTreeSet<String>,
    order: Vec<String>,
}

impl Program {
    /// Validates `rules` and numbers them 1.. in the given order.
    pub fn new(mut rules: Vec<Rule>) -> Result<Self> {
        let mut arities = BTreeMap::new();
        for (i, rule) in rules.iter_mut().enumerate() {
            rule.index = i + 1;
        }
        for rule in &rules {
            for atom in core::iter::once(&rule.head).chain(rule.body.iter().map(|l| &l.atom)) {
                check_arity(&mut arities, &atom.predicate, atom.arity())?;
            }
        }
        let idb: BTreeSet<String> = rules.iter().map(|r| r.head.predicate.clone()).collect();
        let order = dependency_order(&rules, &idb)?;
        Ok(Program {
            rules,
            arities,
            idb,
            order,
        })
    }

    pub fn empty() -> Self {
        Program::new(Vec::new()).expect("empty program is valid")
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rule by its 1-based index.
    pub fn rule(&self, index: usize) -> Option<&Rule> {
        index.checked_sub(1).and_then(|i| self.rules.get(i))
    }

    pub fn rules_for<'a>(&'a self, predicate: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules
            .iter()
            .filter(move |r| r.head.predicate == predicate)
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.arities.get(predicate).copied()
    }

    /// Every predicate mentioned by the program with its arity.
    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.arities
    }

    pub fn is_idb(&self, predicate: &str) -> bool {
        self.idb.contains(predicate)
    }

    pub fn idb_predicates(&self) -> &BTreeSet<String> {
        &self.idb
    }

    pub fn edb_predicates(&self) -> impl Iterator<Item = &str> + '_ {
        self.arities
            .keys()
            .filter(|p| !self.idb.contains(*p))
            .map(String::as_str)
    }

    /// IDB predicates ordered so that every predicate comes after the ones
    /// its rules depend on.
    pub fn evaluation_order(&self) -> &[String] {
        &self.order
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(Rule::is_positive)
    }

    /// Constants occurring anywhere in the rules.
    pub fn constants(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            for atom in core::iter::once(&rule.head).chain(rule.body.iter().map(|l| &l.atom)) {
                out.extend(atom.args.iter().filter_map(Term::as_const));
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

fn check_arity(arities: &mut BTreeMap<String, usize>, predicate: &str, found: usize) -> Result<()> {
    match arities.get(predicate) {
        Some(&expected) if expected != found => Err(Error::ArityMismatch {
            predicate: predicate.to_string(),
            expected,
            found,
        }),
        Some(_) => Ok(()),
        None => {
            arities.insert(predicate.to_string(), found);
            Ok(())
        }
    }
}

/// Topological order of the IDB predicates, or the first dependency cycle.
fn dependency_order(rules: &[Rule], idb: &BTreeSet<String>) -> Result<Vec<String>> {
    let mut deps: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for p in idb {
        deps.insert(p, BTreeSet::new());
    }
    for rule in rules {
        let entry = deps
            .get_mut(rule.head.predicate.as_str())
            .expect("head is idb");
        for lit in &rule.body {
            if idb.contains(&lit.atom.predicate) {
                entry.insert(&lit.atom.predicate);
            }
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit<'a>(
        p: &'a str,
        deps: &BTreeMap<&'a str, BTreeSet<&'a str>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        path: &mut Vec<&'a str>,
        order: &mut Vec<String>,
    ) -> Result<()> {
        match marks[p] {
            Mark::Done => return Ok(()),
            Mark::Active => {
                let start = path.iter().position(|&q| q == p).expect("on path");
                let mut cycle: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
                cycle.push(p.to_string());
                return Err(Error::Recursion { cycle });
            }
            Mark::Fresh => {}
        }
        marks.insert(p, Mark::Active);
        path.push(p);
        for &q in &deps[p] {
            visit(q, deps, marks, path, order)?;
        }
        path.pop();
        marks.insert(p, Mark::Done);
        order.push(p.to_string());
        Ok(())
    }

    let mut marks: BTreeMap<&str, Mark> = deps.keys().map(|&p| (p, Mark::Fresh)).collect();
    let mut order = Vec::new();
    for &p in deps.keys() {
        visit(p, &deps, &mut marks, &mut Vec::new(), &mut order)?;
    }
    Ok(order)
}

/// Ground EDB facts, each carrying a provenance annotation variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Database {
    facts: BTreeMap<GroundAtom, String>,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a fact. Without an explicit annotation the fact's own text is
    /// used as its variable name.
    pub fn insert(&mut self, fact: GroundAtom, annotation: Option<String>) -> Result<()> {
        if self.facts.contains_key(&fact) {
            return Err(Error::DuplicateFact(fact.to_string()));
        }
        let annotation = annotation.unwrap_or_else(|| fact.to_string());
        self.facts.insert(fact, annotation);
        Ok(())
    }

    pub fn contains(&self, fact: &GroundAtom) -> bool {
        self.facts.contains_key(fact)
    }

    pub fn annotation(&self, fact: &GroundAtom) -> Option<&str> {
        self.facts.get(fact).map(String::as_str)
    }

    pub fn facts(&self) -> impl Iterator<Item = (&GroundAtom, &str)> + '_ {
        self.facts.iter().map(|(f, a)| (f, a.as_str()))
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn constants(&self) -> BTreeSet<&str> {
        self.facts
            .keys()
            .flat_map(|f| f.args.iter().map(String::as_str))
            .collect()
    }

    /// Checks the database against a program: no facts for IDB predicates,
    /// consistent arities. Returns every predicate (program and database)
    /// with its arity.
    pub fn check_against(&self, program: &Program) -> Result<BTreeMap<String, usize>> {
        let mut arities = program.predicates().clone();
        for fact in self.facts.keys() {
            if program.is_idb(&fact.predicate) {
                return Err(Error::PredicateConflict(fact.predicate.clone()));
            }
            check_arity(&mut arities, &fact.predicate, fact.arity())?;
        }
        Ok(arities)
    }
}

impl fmt::Display for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (fact, ann) in &self.facts {
            let text = fact.to_string();
            if *ann == text {
                writeln!(f, "{text}.")?;
            } else {
                writeln!(f, "{text} @{ann}.")?;
            }
        }
        Ok(())
    }
}

/// Constants of program and database, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActiveDomain(Vec<String>);

impl ActiveDomain {
    pub fn new(constants: impl IntoIterator<Item = String>) -> Self {
        let set: BTreeSet<String> = constants.into_iter().collect();
        ActiveDomain(set.into_iter().collect())
    }

    pub fn constants(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every tuple of the given length over the domain, in lexicographic order.
    pub fn tuples(&self, arity: usize) -> Tuples<'_> {
        Tuples::new(&self.0, arity)
    }
}

pub fn active_domain(program: &Program, db: &Database) -> ActiveDomain {
    ActiveDomain::new(
        program
            .constants()
            .into_iter()
            .chain(db.constants())
            .map(str::to_string),
    )
}

/// Odometer over `domain^arity`.
#[derive(Debug, Clone)]
pub struct Tuples<'a> {
    domain: &'a [String],
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Tuples<'a> {
    fn new(domain: &'a [String], arity: usize) -> Self {
        Tuples {
            domain,
            digits: alloc::vec![0; arity],
            done: domain.is_empty() && arity > 0,
        }
    }
}

impl Iterator for Tuples<'_> {
    type Item = Vec<String>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self
            .digits
            .iter()
            .map(|&d| self.domain[d].clone())
            .collect();
        // advance, rightmost digit fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.domain.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}
