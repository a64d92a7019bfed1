//! Reading provenance out of a solved query game.
//!
//! For a derived atom of a positive program, Γ of its relation node becomes
//! an operator DAG: won inner nodes add, lost inner nodes multiply and fact
//! leaves carry their annotation variable. Evaluating that DAG gives the
//! provenance polynomial. For anything else the leaves of Γ are reported
//! instead: fact leaves are input facts that are used, bare relation leaves
//! are facts that are missing.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::datalog::{Database, GroundAtom, Program};
use crate::error::{Error, Result};
use crate::game::{NodeValue, ProvenanceSubgraph};
use crate::poly::{Polynomial, Semiring};
use crate::query_game::{
    solve_query_game, BuildVariant, GameNodeId, Node, NodeKind, NodeOrigin, SolvedQueryGame,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpLabel {
    Plus,
    Times,
    Leaf(String),
}

impl OpLabel {
    pub fn symbol(&self) -> &str {
        match self {
            OpLabel::Plus => "+",
            OpLabel::Times => "*",
            OpLabel::Leaf(v) => v,
        }
    }
}

/// Γ with every node relabeled by an operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDag {
    root: GameNodeId,
    labels: BTreeMap<GameNodeId, OpLabel>,
    children: BTreeMap<GameNodeId, Vec<GameNodeId>>,
}

impl OpDag {
    pub fn root(&self) -> &GameNodeId {
        &self.root
    }

    pub fn label(&self, id: &GameNodeId) -> Option<&OpLabel> {
        self.labels.get(id)
    }

    pub fn labels(&self) -> &BTreeMap<GameNodeId, OpLabel> {
        &self.labels
    }

    pub fn children(&self, id: &GameNodeId) -> &[GameNodeId] {
        self.children.get(id).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Relabels Γ of a won relation node: `Plus` on inner won nodes, `Times` on
/// inner lost nodes, `Leaf` on fact nodes. Only defined for positive
/// provenance; a negated goal or a missing fact inside Γ is an error.
pub fn omega(gamma: &ProvenanceSubgraph<GameNodeId>, db: &Database) -> Result<OpDag> {
    let root = gamma.root().clone();
    if root.kind() != NodeKind::Rel {
        return Err(Error::UnknownPosition(format!(
            "{root} is not a relation node"
        )));
    }
    if gamma.root_value() != NodeValue::Won {
        return Err(Error::NotDerived(atom_text(&root)));
    }
    let mut labels = BTreeMap::new();
    let mut children = BTreeMap::new();
    for (id, value, _) in gamma.nodes() {
        if id.is_negated_goal() {
            return Err(Error::NegationUnsupported(format!(
                "provenance of {root} passes through negated goal {id}"
            )));
        }
        let kids: Vec<GameNodeId> = gamma.followers(id).iter().map(|(c, _)| c.clone()).collect();
        let label = match (id.node(), kids.is_empty(), value) {
            (Node::Fact(fact), _, _) => {
                let ann = db
                    .annotation(fact)
                    .map_or_else(|| fact.to_string(), str::to_string);
                OpLabel::Leaf(ann)
            }
            (Node::Rel(atom), true, _) => {
                return Err(Error::NegationUnsupported(format!(
                    "provenance of {root} depends on the missing fact {atom}"
                )));
            }
            // a rule without body: the empty product
            (_, true, _) => OpLabel::Times,
            (_, false, NodeValue::Won) => OpLabel::Plus,
            (_, false, NodeValue::Lost) => OpLabel::Times,
            (_, false, NodeValue::Drawn) => {
                return Err(Error::DrawnPosition(id.to_string()));
            }
        };
        labels.insert(id.clone(), label);
        children.insert(id.clone(), kids);
    }
    Ok(OpDag {
        root,
        labels,
        children,
    })
}

fn atom_text(id: &GameNodeId) -> String {
    id.atom()
        .map_or_else(|| id.to_string(), ToString::to_string)
}

/// Evaluates the DAG bottom-up in `semiring`. Shared nodes are evaluated
/// once; every edge contributes its child once.
pub fn eval_dag(dag: &OpDag, semiring: Semiring) -> Polynomial {
    let mut memo: BTreeMap<&GameNodeId, Polynomial> = BTreeMap::new();
    // explicit post-order keeps deep chains off the call stack
    let mut stack = alloc::vec![(&dag.root, false)];
    while let Some((id, expanded)) = stack.pop() {
        if memo.contains_key(id) {
            continue;
        }
        let kids = dag.children(id);
        if !expanded {
            stack.push((id, true));
            stack.extend(
                kids.iter()
                    .filter(|k| !memo.contains_key(k))
                    .map(|k| (k, false)),
            );
            continue;
        }
        let values = kids.iter().map(|k| &memo[k]);
        let value = match &dag.labels[id] {
            OpLabel::Leaf(v) => semiring.normalize(Polynomial::var(v.clone())),
            OpLabel::Plus => semiring.sum(values),
            OpLabel::Times => semiring.product(values),
        };
        memo.insert(id, value);
    }
    memo.remove(&dag.root).unwrap_or_else(Polynomial::zero)
}

fn require_idb(program: &Program, atom: &GroundAtom) -> Result<()> {
    if program.is_idb(&atom.predicate) {
        Ok(())
    } else {
        Err(Error::NotIdb(atom.predicate.clone()))
    }
}

/// The provenance polynomial of a derived atom of a positive program, read
/// from the game. `TrioX` reads from the Trio variant of the game, the other
/// semirings from the full game.
pub fn provenance_polynomial(
    program: &Program,
    db: &Database,
    atom: &GroundAtom,
    semiring: Semiring,
) -> Result<Polynomial> {
    require_idb(program, atom)?;
    if let Some(rule) = program.rules().iter().find(|r| !r.is_positive()) {
        return Err(Error::NegationUnsupported(format!(
            "polynomials need a positive program; rule {rule} has a negated goal"
        )));
    }
    let variant = match semiring {
        Semiring::TrioX => BuildVariant::Trio,
        Semiring::NX | Semiring::BX => BuildVariant::Full,
    };
    let game = solve_query_game(program, db, variant)?;
    polynomial_from_game(&game, db, atom, semiring)
}

/// [`provenance_polynomial`] over an already solved game.
pub fn polynomial_from_game(
    game: &SolvedQueryGame,
    db: &Database,
    atom: &GroundAtom,
    semiring: Semiring,
) -> Result<Polynomial> {
    let gamma = game.provenance(&GameNodeId::rel(atom.clone()))?;
    Ok(eval_dag(&omega(&gamma, db)?, semiring))
}

/// Leaves of a provenance graph, split into facts of the database that are
/// used and atoms whose absence is used.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WhyLeaves {
    pub present: BTreeSet<GroundAtom>,
    pub absent: BTreeSet<GroundAtom>,
}

pub fn why_leaves(gamma: &ProvenanceSubgraph<GameNodeId>) -> WhyLeaves {
    let mut out = WhyLeaves::default();
    for sink in gamma.sinks() {
        match sink.node() {
            Node::Fact(a) => {
                out.present.insert(a.clone());
            }
            Node::Rel(a) => {
                out.absent.insert(a.clone());
            }
            _ => {}
        }
    }
    out
}

/// A goal of a rule instance that refutes the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedGoal {
    /// Body positions (1-based) of the goal.
    pub positions: Vec<usize>,
    pub negated: bool,
    pub atom: GroundAtom,
    /// Missing atoms the failure rests on.
    pub missing: BTreeSet<GroundAtom>,
    /// Database facts the failure rests on.
    pub blocking: BTreeSet<GroundAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedInstantiation {
    pub rule: usize,
    /// `(variable, constant)` in variable-name order.
    pub binding: Vec<(String, String)>,
    pub failed_goals: Vec<FailedGoal>,
}

/// Why an atom is not derived: every rule instance that could derive it,
/// with the goals that fail and the facts those failures come down to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhyNotReport {
    pub atom: GroundAtom,
    pub instantiations: Vec<FailedInstantiation>,
}

impl WhyNotReport {
    pub fn is_empty(&self) -> bool {
        self.instantiations.is_empty()
    }

    /// Union of the missing atoms over all instantiations.
    pub fn missing(&self) -> BTreeSet<GroundAtom> {
        self.goals()
            .flat_map(|g| g.missing.iter().cloned())
            .collect()
    }

    pub fn blocking(&self) -> BTreeSet<GroundAtom> {
        self.goals()
            .flat_map(|g| g.blocking.iter().cloned())
            .collect()
    }

    fn goals(&self) -> impl Iterator<Item = &FailedGoal> + '_ {
        self.instantiations.iter().flat_map(|i| &i.failed_goals)
    }
}

/// A successful rule instance for a derived atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: usize,
    pub binding: Vec<(String, String)>,
    pub leaves: WhyLeaves,
}

/// Why an atom is derived: the rule instances that derive it, each with the
/// facts it uses and the absent atoms it relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhyReport {
    pub atom: GroundAtom,
    pub derivations: Vec<Derivation>,
    pub leaves: WhyLeaves,
}

fn named_binding(program: &Program, id: &GameNodeId) -> (usize, Vec<(String, String)>) {
    let Node::Rule { rule, binding } = id.node() else {
        unreachable!("rule node expected, got {id}")
    };
    let vars = program
        .rule(*rule)
        .map(|r| r.variables())
        .unwrap_or_default();
    (
        *rule,
        vars.into_iter().zip(binding.iter().cloned()).collect(),
    )
}

fn rel_root(
    game: &SolvedQueryGame,
    program: &Program,
    atom: &GroundAtom,
) -> Result<(GameNodeId, NodeValue)> {
    require_idb(program, atom)?;
    let root = GameNodeId::rel(atom.clone());
    let value = game.solved().value(&root)?;
    Ok((root, value))
}

/// Explains a derived atom from a solved game.
pub fn why_report(
    game: &SolvedQueryGame,
    program: &Program,
    atom: &GroundAtom,
) -> Result<WhyReport> {
    let (root, value) = rel_root(game, program, atom)?;
    if value != NodeValue::Won {
        return Err(Error::NotDerived(atom.to_string()));
    }
    let gamma = game.provenance(&root)?;
    let mut derivations = Vec::new();
    for (rule_node, _) in gamma.followers(&root) {
        if rule_node.kind() != NodeKind::Rule {
            continue;
        }
        let (rule, binding) = named_binding(program, rule_node);
        derivations.push(Derivation {
            rule,
            binding,
            leaves: why_leaves(&game.provenance(rule_node)?),
        });
    }
    Ok(WhyReport {
        atom: atom.clone(),
        derivations,
        leaves: why_leaves(&gamma),
    })
}

/// Explains a non-derived atom from a solved full-variant game.
pub fn why_not_from_game(
    game: &SolvedQueryGame,
    program: &Program,
    atom: &GroundAtom,
) -> Result<WhyNotReport> {
    let (root, value) = rel_root(game, program, atom)?;
    if value != NodeValue::Lost {
        return Err(Error::IsDerived(atom.to_string()));
    }
    let solved = game.solved();
    let mut instantiations = Vec::new();
    for rule_node in solved.graph().followers(&root)? {
        let (rule, binding) = named_binding(program, rule_node);
        let mut failed_goals = Vec::new();
        // the good moves of a won rule node are exactly its refuting goals
        for (goal, _) in solved.optimal_moves(rule_node)?.good {
            let leaves = why_leaves(&game.provenance(&goal)?);
            let positions = match game.origin(&goal) {
                Some(NodeOrigin::Goals { positions, .. }) => positions.clone(),
                _ => Vec::new(),
            };
            failed_goals.push(FailedGoal {
                positions,
                negated: goal.is_negated_goal(),
                atom: goal.atom().cloned().expect("goal has an atom"),
                missing: leaves.absent,
                blocking: leaves.present,
            });
        }
        failed_goals.sort_by(|a, b| a.positions.cmp(&b.positions));
        instantiations.push(FailedInstantiation {
            rule,
            binding,
            failed_goals,
        });
    }
    Ok(WhyNotReport {
        atom: atom.clone(),
        instantiations,
    })
}

/// Builds and solves the full game, then explains why `atom` is not derived.
pub fn why_not_report(program: &Program, db: &Database, atom: &GroundAtom) -> Result<WhyNotReport> {
    let game = solve_query_game(program, db, BuildVariant::Full)?;
    why_not_from_game(&game, program, atom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datalog::{evaluate_semiring, parse_database, parse_ground_atom, parse_program};
    use crate::poly::parse;

    const ABC: &str = "A(X) :- B(X,Y), not C(Y).";
    const ABC_DB: &str = "B(a,b). B(b,a). C(a).";
    const HOP: &str = "3Hop(X,Y) :- hop(X,Z1), hop(Z1,Z2), hop(Z2,Y).";
    const HOP_DB: &str = "hop(a,a) @p. hop(a,b) @q. hop(b,a) @r. hop(b,c) @s.";

    fn atom(s: &str) -> GroundAtom {
        parse_ground_atom(s).unwrap()
    }

    fn atoms(list: &[&str]) -> BTreeSet<GroundAtom> {
        list.iter().map(|s| atom(s)).collect()
    }

    fn setup(p: &str, d: &str, v: BuildVariant) -> (Program, Database, SolvedQueryGame) {
        let p = parse_program(p).unwrap();
        let d = parse_database(d).unwrap();
        let g = solve_query_game(&p, &d, v).unwrap();
        (p, d, g)
    }

    #[test]
    fn three_hop_polynomials() {
        let p = parse_program(HOP).unwrap();
        let d = parse_database(HOP_DB).unwrap();
        let a = atom("3Hop(a,a)");
        let nx = provenance_polynomial(&p, &d, &a, Semiring::NX).unwrap();
        assert_eq!(nx.to_string(), "p^3 + 2*p*q*r");
        let trio = provenance_polynomial(&p, &d, &a, Semiring::TrioX).unwrap();
        assert_eq!(trio.to_string(), "p + 2*p*q*r");
        let bx = provenance_polynomial(&p, &d, &a, Semiring::BX).unwrap();
        assert_eq!(bx.to_string(), "p + p*q*r");
    }

    #[test]
    fn three_hop_dag_shape() {
        let (_, d, g) = setup(HOP, HOP_DB, BuildVariant::Full);
        let gamma = g.provenance(&GameNodeId::rel(atom("3Hop(a,a)"))).unwrap();
        assert_eq!(gamma.node_count(), 1 + 3 + 7 + 3 + 3 + 3);
        assert_eq!(gamma.edge_count(), 25);
        let dag = omega(&gamma, &d).unwrap();
        assert_eq!(dag.label(dag.root()), Some(&OpLabel::Plus));
        let rules = dag.children(dag.root());
        assert_eq!(rules.len(), 3);
        for r in rules {
            assert_eq!(dag.label(r), Some(&OpLabel::Times));
            assert_eq!(dag.children(r).len(), 3);
        }
        let leaves: BTreeSet<_> = dag
            .labels()
            .values()
            .filter_map(|l| match l {
                OpLabel::Leaf(v) => Some(v.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(leaves, ["p", "q", "r"].into_iter().collect());
        assert_eq!(eval_dag(&dag, Semiring::NX), parse("p^3 + 2*p*q*r"));
    }

    #[test]
    fn trio_dag_reads_p_plus_2pqr() {
        let (_, d, g) = setup(HOP, HOP_DB, BuildVariant::Trio);
        let gamma = g.provenance(&GameNodeId::rel(atom("3Hop(a,a)"))).unwrap();
        let dag = omega(&gamma, &d).unwrap();
        // the product of distinct goals is already exponent free
        assert_eq!(eval_dag(&dag, Semiring::NX).to_string(), "p + 2*p*q*r");
        assert_eq!(eval_dag(&dag, Semiring::TrioX).to_string(), "p + 2*p*q*r");
    }

    #[test]
    fn copy_rule_chain() {
        let (_, d, g) = setup("R(X) :- E(X).", "E(a) @p.", BuildVariant::Full);
        let gamma = g.provenance(&GameNodeId::rel(atom("R(a)"))).unwrap();
        let dag = omega(&gamma, &d).unwrap();
        assert_eq!(dag.len(), 6);
        for s in [Semiring::NX, Semiring::BX, Semiring::TrioX] {
            assert_eq!(eval_dag(&dag, s), parse("p"));
        }
    }

    #[test]
    fn bodyless_rule_is_one() {
        let (p, d, _) = setup("R(a). S(X) :- R(X), E(X).", "E(a) @p.", BuildVariant::Full);
        let poly = provenance_polynomial(&p, &d, &atom("R(a)"), Semiring::NX).unwrap();
        assert_eq!(poly, Polynomial::one());
        let poly = provenance_polynomial(&p, &d, &atom("S(a)"), Semiring::NX).unwrap();
        assert_eq!(poly, parse("p"));
    }

    #[test]
    fn omega_rejects_negation() {
        let (_, d, g) = setup(ABC, ABC_DB, BuildVariant::Full);
        let gamma = g.provenance(&GameNodeId::rel(atom("A(a)"))).unwrap();
        assert!(matches!(
            omega(&gamma, &d),
            Err(Error::NegationUnsupported(_))
        ));
    }

    #[test]
    fn polynomial_errors() {
        let p = parse_program(HOP).unwrap();
        let d = parse_database(HOP_DB).unwrap();
        assert_eq!(
            provenance_polynomial(&p, &d, &atom("3Hop(c,a)"), Semiring::NX),
            Err(Error::NotDerived("3Hop(c,a)".into()))
        );
        assert!(matches!(
            provenance_polynomial(&p, &d, &atom("hop(a,a)"), Semiring::NX),
            Err(Error::NotIdb(_))
        ));
        let p = parse_program(ABC).unwrap();
        let d = parse_database(ABC_DB).unwrap();
        assert!(matches!(
            provenance_polynomial(&p, &d, &atom("A(a)"), Semiring::NX),
            Err(Error::NegationUnsupported(_))
        ));
    }

    #[test]
    fn abc_why_leaves() {
        let (_, _, g) = setup(ABC, ABC_DB, BuildVariant::Full);
        let w = why_leaves(&g.provenance(&GameNodeId::rel(atom("A(a)"))).unwrap());
        assert_eq!(w.present, atoms(&["B(a,b)"]));
        assert_eq!(w.absent, atoms(&["C(b)"]));
        let w = why_leaves(&g.provenance(&GameNodeId::neg(atom("A(b)"))).unwrap());
        assert_eq!(w.present, atoms(&["C(a)"]));
        assert_eq!(w.absent, atoms(&["B(b,b)"]));
    }

    #[test]
    fn three_hop_why_not_leaves() {
        let (_, _, g) = setup(HOP, HOP_DB, BuildVariant::Full);
        let w = why_leaves(&g.provenance(&GameNodeId::neg(atom("3Hop(c,a)"))).unwrap());
        assert!(w.present.is_empty());
        assert!(w
            .absent
            .is_superset(&atoms(&["hop(c,a)", "hop(c,b)", "hop(c,c)"])));
    }

    #[test]
    fn negation_dependency() {
        let p = "A(X) :- B(X,Y), not C(Y).\nC(Y) :- E(Y,Z).";
        let (_, _, g) = setup(p, "B(a,a).", BuildVariant::Full);
        let w = why_leaves(&g.provenance(&GameNodeId::rel(atom("A(a)"))).unwrap());
        assert_eq!(w.present, atoms(&["B(a,a)"]));
        assert_eq!(w.absent, atoms(&["E(a,a)"]));
    }

    #[test]
    fn abc_why_not_report() {
        let (p, _, g) = setup(ABC, ABC_DB, BuildVariant::Full);
        let r = why_not_from_game(&g, &p, &atom("A(b)")).unwrap();
        assert_eq!(r.instantiations.len(), 2);
        let first = &r.instantiations[0];
        assert_eq!(
            first.binding,
            [("X".into(), "b".into()), ("Y".into(), "a".into())]
        );
        assert_eq!(first.failed_goals.len(), 1);
        let goal = &first.failed_goals[0];
        assert!(goal.negated);
        assert_eq!(goal.atom, atom("C(a)"));
        assert_eq!(goal.positions, [2]);
        assert_eq!(goal.blocking, atoms(&["C(a)"]));
        assert!(goal.missing.is_empty());
        let second = &r.instantiations[1];
        assert_eq!(second.binding[1], ("Y".into(), "b".into()));
        assert_eq!(second.failed_goals.len(), 1);
        assert_eq!(second.failed_goals[0].atom, atom("B(b,b)"));
        assert_eq!(second.failed_goals[0].missing, atoms(&["B(b,b)"]));
        assert_eq!(
            why_not_from_game(&g, &p, &atom("A(a)")),
            Err(Error::IsDerived("A(a)".into()))
        );
    }

    #[test]
    fn three_hop_why_not_report() {
        let p = parse_program(HOP).unwrap();
        let d = parse_database(HOP_DB).unwrap();
        let r = why_not_report(&p, &d, &atom("3Hop(c,a)")).unwrap();
        assert_eq!(r.instantiations.len(), 9);
        let aa = r
            .instantiations
            .iter()
            .find(|i| i.binding[2].1 == "a" && i.binding[3].1 == "a")
            .unwrap();
        let g1 = &aa.failed_goals[0];
        assert_eq!(g1.positions, [1]);
        assert_eq!(g1.missing, atoms(&["hop(c,a)"]));
        assert!(r.blocking().is_empty());
    }

    #[test]
    fn why_not_single_instantiation() {
        let p = parse_program("P(X) :- E(X,X).").unwrap();
        let d = Database::new();
        // c comes from nowhere, so put it in the program
        let p2 = parse_program("P(X) :- E(X,X).\nQ(c) :- E(c,c).").unwrap();
        assert!(matches!(
            why_not_report(&p, &d, &atom("P(c)")),
            Err(Error::UnknownPosition(_))
        ));
        let r = why_not_report(&p2, &d, &atom("P(c)")).unwrap();
        assert_eq!(r.instantiations.len(), 1);
        assert_eq!(r.missing(), atoms(&["E(c,c)"]));
    }

    #[test]
    fn abc_why_report() {
        let (p, _, g) = setup(ABC, ABC_DB, BuildVariant::Full);
        let r = why_report(&g, &p, &atom("A(a)")).unwrap();
        assert_eq!(r.derivations.len(), 1);
        assert_eq!(r.derivations[0].binding[1], ("Y".into(), "b".into()));
        assert_eq!(r.derivations[0].leaves.present, atoms(&["B(a,b)"]));
        assert_eq!(r.derivations[0].leaves.absent, atoms(&["C(b)"]));
        assert_eq!(
            why_report(&g, &p, &atom("A(b)")),
            Err(Error::NotDerived("A(b)".into()))
        );
    }

    mod props {
        use super::*;
        use crate::testgen::{random_instance, Shape};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(120))]

            #[test]
            fn game_polynomial_equals_oracle(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::positive());
                let oracle = evaluate_semiring(&p, &d).unwrap();
                let game = solve_query_game(&p, &d, BuildVariant::Full).unwrap();
                prop_assert_eq!(game.solved().audit(), Ok(()));
                for (a, expected) in &oracle {
                    let got = polynomial_from_game(&game, &d, a, Semiring::NX).unwrap();
                    prop_assert_eq!(&got, expected, "atom {}\n{}\n{}", a, p, d);
                }
                // and nothing else is won
                let won = game.true_atoms().into_iter().filter(|a| p.is_idb(&a.predicate)).count();
                prop_assert_eq!(won, oracle.len());
            }

            #[test]
            fn positive_leaf_purity(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::positive());
                let game = solve_query_game(&p, &d, BuildVariant::Full).unwrap();
                for (id, v, _) in game.solved().iter() {
                    if id.kind() != NodeKind::Rel || !p.is_idb(&id.atom().unwrap().predicate) {
                        continue;
                    }
                    let w = why_leaves(&game.provenance(id).unwrap());
                    match v {
                        NodeValue::Won => prop_assert!(w.absent.is_empty()),
                        _ => prop_assert!(w.present.is_empty()),
                    }
                }
            }

            #[test]
            fn semiring_images_per_variant(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::positive());
                for variant in [BuildVariant::Full, BuildVariant::Trio] {
                    let game = solve_query_game(&p, &d, variant).unwrap();
                    for a in game.true_atoms().into_iter().filter(|a| p.is_idb(&a.predicate)) {
                        let gamma = game.provenance(&GameNodeId::rel(a)).unwrap();
                        let dag = omega(&gamma, &d).unwrap();
                        let nx = eval_dag(&dag, Semiring::NX);
                        prop_assert_eq!(eval_dag(&dag, Semiring::BX), nx.cap_all());
                        prop_assert_eq!(eval_dag(&dag, Semiring::TrioX), nx.cap_exponents());
                    }
                }
            }

            #[test]
            fn trio_equals_capped_oracle_on_edb_bodies(seed in any::<u64>()) {
                let shape = Shape { idb_in_bodies: false, ..Shape::positive() };
                let (p, d) = random_instance(seed, shape);
                let oracle = evaluate_semiring(&p, &d).unwrap();
                let game = solve_query_game(&p, &d, BuildVariant::Trio).unwrap();
                for (a, expected) in &oracle {
                    let got = polynomial_from_game(&game, &d, a, Semiring::TrioX).unwrap();
                    prop_assert_eq!(got, expected.cap_exponents());
                }
            }

            #[test]
            fn why_not_report_invariants(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::default());
                let game = solve_query_game(&p, &d, BuildVariant::Full).unwrap();
                for (id, v, _) in game.solved().iter() {
                    let Some(a) = id.atom() else { continue };
                    if id.kind() != NodeKind::Rel || !p.is_idb(&a.predicate) || v != NodeValue::Lost {
                        continue;
                    }
                    let r = why_not_from_game(&game, &p, a).unwrap();
                    for inst in &r.instantiations {
                        prop_assert!(!inst.failed_goals.is_empty());
                    }
                    for m in r.missing() {
                        prop_assert!(!d.contains(&m));
                    }
                    for b in r.blocking() {
                        prop_assert!(d.contains(&b));
                    }
                }
            }
        }
    }
}
