//! The query evaluation game `G_{Q,D}`.
//!
//! Positions are Skolem-style node identifiers for relation atoms, negated
//! relation atoms, ground rule instances, goals and database facts:
//!
//! ```text
//! neg:R(c)      -> rel:R(c)                    every predicate, every adom tuple
//! rel:H(θ)      -> rule:r<i>(θ)                every ground instance of rule i
//! rule:r<i>(θ)  -> goal:g<i>_<j>(args)         every goal j of the instance
//! goal (pos)    -> neg:A(args)
//! goal (neg)    -> rel:A(args)                 players swap roles
//! rel:R(c)      -> fact:r_R(c)                 every database fact; a sink
//! ```
//!
//! A relation node is won iff its atom is in the stratified model.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::datalog::{active_domain, ground, Database, GroundAtom, Program};
use crate::error::{Error, Result};
use crate::game::{GameGraph, GameGraphBuilder, NodeValue, ProvenanceSubgraph, SolvedGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Rel,
    Neg,
    Rule,
    Goal,
    Fact,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Rel => "rel",
            NodeKind::Neg => "neg",
            NodeKind::Rule => "rule",
            NodeKind::Goal => "goal",
            NodeKind::Fact => "fact",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which goal of a rule a goal node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoalSlot {
    /// 1-based position in the rule body.
    Position(usize),
    /// Position erased; goals with the same sign, predicate and arguments in
    /// one rule instance share the node.
    Collapsed,
}

/// Structured content of a node identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Rel(GroundAtom),
    Neg(GroundAtom),
    Rule {
        rule: usize,
        binding: Vec<String>,
    },
    Goal {
        rule: usize,
        slot: GoalSlot,
        negated: bool,
        atom: GroundAtom,
    },
    Fact(GroundAtom),
}

/// A game position. Compares, orders and hashes by its canonical text.
#[derive(Debug, Clone)]
pub struct GameNodeId {
    node: Node,
    text: String,
}

impl GameNodeId {
    pub fn new(node: Node) -> Self {
        let text = canonical_text(&node);
        GameNodeId { node, text }
    }

    pub fn rel(atom: GroundAtom) -> Self {
        Self::new(Node::Rel(atom))
    }

    pub fn neg(atom: GroundAtom) -> Self {
        Self::new(Node::Neg(atom))
    }

    pub fn fact(atom: GroundAtom) -> Self {
        Self::new(Node::Fact(atom))
    }

    pub fn rule(rule: usize, binding: Vec<String>) -> Self {
        Self::new(Node::Rule { rule, binding })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn kind(&self) -> NodeKind {
        match self.node {
            Node::Rel(_) => NodeKind::Rel,
            Node::Neg(_) => NodeKind::Neg,
            Node::Rule { .. } => NodeKind::Rule,
            Node::Goal { .. } => NodeKind::Goal,
            Node::Fact(_) => NodeKind::Fact,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// The atom of a relation, negated relation, goal or fact node.
    pub fn atom(&self) -> Option<&GroundAtom> {
        match &self.node {
            Node::Rel(a) | Node::Neg(a) | Node::Fact(a) | Node::Goal { atom: a, .. } => Some(a),
            Node::Rule { .. } => None,
        }
    }

    pub fn is_negated_goal(&self) -> bool {
        matches!(self.node, Node::Goal { negated: true, .. })
    }
}

fn canonical_text(node: &Node) -> String {
    let args = |a: &[String]| a.join(",");
    match node {
        Node::Rel(a) => format!("rel:{a}"),
        Node::Neg(a) => format!("neg:{a}"),
        Node::Fact(a) => format!("fact:r_{a}"),
        Node::Rule { rule, binding } => format!("rule:r{rule}({})", args(binding)),
        Node::Goal {
            rule,
            slot: GoalSlot::Position(j),
            atom,
            ..
        } => format!("goal:g{rule}_{j}({})", args(&atom.args)),
        Node::Goal {
            rule,
            slot: GoalSlot::Collapsed,
            negated,
            atom,
        } => {
            let sign = if *negated { "!" } else { "" };
            format!(
                "goal:g{rule}[{sign}{}]({})",
                atom.predicate,
                args(&atom.args)
            )
        }
    }
}

impl PartialEq for GameNodeId {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for GameNodeId {}

impl PartialOrd for GameNodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GameNodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text.cmp(&other.text)
    }
}

impl Hash for GameNodeId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl fmt::Display for GameNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuildVariant {
    #[default]
    Full,
    /// Goal nodes without positions; reads out `Trio(X)` polynomials.
    Trio,
}

impl BuildVariant {
    pub fn name(self) -> &'static str {
        match self {
            BuildVariant::Full => "full",
            BuildVariant::Trio => "trio",
        }
    }
}

impl core::str::FromStr for BuildVariant {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "full" => Ok(BuildVariant::Full),
            "trio" => Ok(BuildVariant::Trio),
            other => Err(format!("unknown variant `{other}` (expected full or trio)")),
        }
    }
}

/// The program element a node was generated from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeOrigin {
    /// Relation and negated relation nodes.
    Predicate {
        name: String,
        idb: bool,
    },
    Rule(usize),
    /// Goal nodes; more than one body position only in the Trio variant.
    Goals {
        rule: usize,
        positions: Vec<usize>,
    },
    Fact {
        annotation: String,
    },
}

/// The schema-level move types. The first six are the arrows of the game
/// diagram; `RelToFact` ends a play in a database fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    RelToRule,
    RuleToGoal,
    GoalToNeg,
    NegToRel,
    RuleToNegGoal,
    NegGoalToRel,
    RelToFact,
}

impl MoveKind {
    pub fn of(src: &GameNodeId, dst: &GameNodeId) -> Option<MoveKind> {
        use NodeKind::*;
        Some(match (src.kind(), dst.kind()) {
            (Rel, Rule) => MoveKind::RelToRule,
            (Rule, Goal) if dst.is_negated_goal() => MoveKind::RuleToNegGoal,
            (Rule, Goal) => MoveKind::RuleToGoal,
            (Goal, Neg) if !src.is_negated_goal() => MoveKind::GoalToNeg,
            (Goal, Rel) if src.is_negated_goal() => MoveKind::NegGoalToRel,
            (Neg, Rel) => MoveKind::NegToRel,
            (Rel, Fact) => MoveKind::RelToFact,
            _ => return None,
        })
    }
}

/// The claim a player makes by playing `src -> dst`.
pub fn move_claim(src: &GameNodeId, dst: &GameNodeId) -> Option<String> {
    let atom = |n: &GameNodeId| n.atom().map(ToString::to_string).unwrap_or_default();
    Some(match MoveKind::of(src, dst)? {
        MoveKind::RelToRule => {
            let Node::Rule { rule, .. } = dst.node() else {
                unreachable!()
            };
            format!(
                "{} is true: it's the head of this instance of r{rule}.",
                atom(src)
            )
        }
        MoveKind::RuleToGoal => {
            format!("Positive goal {} in your rule body fails!", atom(dst))
        }
        MoveKind::GoalToNeg => {
            let a = atom(dst);
            format!("No! Its negation ¬{a} fails and {a} is true.")
        }
        MoveKind::NegToRel => format!("No: atom {} fails!", atom(dst)),
        MoveKind::RuleToNegGoal => {
            format!("Negative goal ¬{} in the rule body fails.", atom(dst))
        }
        MoveKind::NegGoalToRel => {
            let a = atom(dst);
            format!("No: ¬{a} succeeds, but {a} fails.")
        }
        MoveKind::RelToFact => format!("{} is true: it's a fact in the database.", atom(src)),
    })
}

/// The game graph of a program and database, with back-references.
#[derive(Debug, Clone)]
pub struct TypedGameGraph {
    graph: GameGraph<GameNodeId>,
    origins: BTreeMap<GameNodeId, NodeOrigin>,
    variant: BuildVariant,
}

impl TypedGameGraph {
    pub fn graph(&self) -> &GameGraph<GameNodeId> {
        &self.graph
    }

    pub fn origins(&self) -> &BTreeMap<GameNodeId, NodeOrigin> {
        &self.origins
    }

    pub fn origin(&self, id: &GameNodeId) -> Option<&NodeOrigin> {
        self.origins.get(id)
    }

    pub fn variant(&self) -> BuildVariant {
        self.variant
    }

    /// Solves the game. A drawn position means the graph has a cycle, which
    /// cannot happen for a validated program.
    pub fn solve(self) -> Result<SolvedQueryGame> {
        let solved = crate::game::solve(self.graph);
        if let Some((p, _, _)) = solved.iter().find(|(_, v, _)| *v == NodeValue::Drawn) {
            return Err(Error::DrawnPosition(p.to_string()));
        }
        Ok(SolvedQueryGame {
            solved,
            origins: self.origins,
            variant: self.variant,
        })
    }
}

/// Builds `G_{Q,D}` over the active domain of `program` and `db`.
pub fn build_game(
    program: &Program,
    db: &Database,
    variant: BuildVariant,
) -> Result<TypedGameGraph> {
    let arities = db.check_against(program)?;
    let adom = active_domain(program, db);
    let mut builder = GameGraphBuilder::new();
    let mut origins = BTreeMap::new();
    let predicate_origin = |name: &str| NodeOrigin::Predicate {
        name: name.to_string(),
        idb: program.is_idb(name),
    };

    for (predicate, &arity) in &arities {
        for args in adom.tuples(arity) {
            let atom = GroundAtom::new(predicate.clone(), args);
            let neg = GameNodeId::neg(atom.clone());
            let rel = GameNodeId::rel(atom);
            origins.insert(neg.clone(), predicate_origin(predicate));
            origins.insert(rel.clone(), predicate_origin(predicate));
            builder.add_move(neg, rel);
        }
    }

    for instance in ground(program, &adom) {
        let index = instance.rule.index;
        let rule = GameNodeId::rule(index, instance.binding.clone());
        origins.insert(rule.clone(), NodeOrigin::Rule(index));
        builder.add_move(GameNodeId::rel(instance.head()), rule.clone());
        for (j, (negated, atom)) in instance.goals().into_iter().enumerate() {
            let slot = match variant {
                BuildVariant::Full => GoalSlot::Position(j + 1),
                BuildVariant::Trio => GoalSlot::Collapsed,
            };
            let goal = GameNodeId::new(Node::Goal {
                rule: index,
                slot,
                negated,
                atom: atom.clone(),
            });
            match origins
                .entry(goal.clone())
                .or_insert_with(|| NodeOrigin::Goals {
                    rule: index,
                    positions: Vec::new(),
                }) {
                NodeOrigin::Goals { positions, .. } if !positions.contains(&(j + 1)) => {
                    positions.push(j + 1)
                }
                _ => {}
            }
            builder.add_move(rule.clone(), goal.clone());
            let target = if negated {
                GameNodeId::rel(atom)
            } else {
                GameNodeId::neg(atom)
            };
            builder.add_move(goal, target);
        }
    }

    for (fact, annotation) in db.facts() {
        let node = GameNodeId::fact(fact.clone());
        origins.insert(
            node.clone(),
            NodeOrigin::Fact {
                annotation: annotation.to_string(),
            },
        );
        builder.add_move(GameNodeId::rel(fact.clone()), node);
    }

    Ok(TypedGameGraph {
        graph: builder.build(),
        origins,
        variant,
    })
}

/// Builds and solves the game.
pub fn solve_query_game(
    program: &Program,
    db: &Database,
    variant: BuildVariant,
) -> Result<SolvedQueryGame> {
    build_game(program, db, variant)?.solve()
}

/// A solved query evaluation game.
#[derive(Debug, Clone)]
pub struct SolvedQueryGame {
    solved: SolvedGame<GameNodeId>,
    origins: BTreeMap<GameNodeId, NodeOrigin>,
    variant: BuildVariant,
}

impl SolvedQueryGame {
    pub fn solved(&self) -> &SolvedGame<GameNodeId> {
        &self.solved
    }

    pub fn graph(&self) -> &GameGraph<GameNodeId> {
        self.solved.graph()
    }

    pub fn origin(&self, id: &GameNodeId) -> Option<&NodeOrigin> {
        self.origins.get(id)
    }

    pub fn variant(&self) -> BuildVariant {
        self.variant
    }

    /// Annotation variable of a fact node.
    pub fn annotation(&self, id: &GameNodeId) -> Option<&str> {
        match self.origins.get(id) {
            Some(NodeOrigin::Fact { annotation }) => Some(annotation),
            _ => None,
        }
    }

    /// Value of the relation node of `atom`.
    pub fn value_of(&self, atom: &GroundAtom) -> Result<NodeValue> {
        self.solved.value(&GameNodeId::rel(atom.clone()))
    }

    /// Atoms whose relation node is won.
    pub fn true_atoms(&self) -> BTreeSet<GroundAtom> {
        self.solved
            .iter()
            .filter(|(p, v, _)| p.kind() == NodeKind::Rel && *v == NodeValue::Won)
            .filter_map(|(p, _, _)| p.atom().cloned())
            .collect()
    }

    pub fn provenance(&self, id: &GameNodeId) -> Result<ProvenanceSubgraph<GameNodeId>> {
        self.solved.provenance(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datalog::{evaluate_stratified, parse_database, parse_ground_atom, parse_program};
    use crate::game::EdgeLabel;
    use alloc::vec;

    const ABC: &str = "A(X) :- B(X,Y), not C(Y).";
    const ABC_DB: &str = "B(a,b). B(b,a). C(a).";
    const HOP: &str = "3Hop(X,Y) :- hop(X,Z1), hop(Z1,Z2), hop(Z2,Y).";
    const HOP_DB: &str = "hop(a,a) @p. hop(a,b) @q. hop(b,a) @r. hop(b,c) @s.";

    fn atom(s: &str) -> GroundAtom {
        parse_ground_atom(s).unwrap()
    }

    fn id(s: &str) -> GameNodeId {
        let (kind, rest) = s.split_once(':').unwrap();
        match kind {
            "rel" => GameNodeId::rel(atom(rest)),
            "neg" => GameNodeId::neg(atom(rest)),
            "fact" => GameNodeId::fact(atom(rest.strip_prefix("r_").unwrap())),
            _ => panic!("use GameNodeId::new for {s}"),
        }
    }

    fn abc(variant: BuildVariant) -> TypedGameGraph {
        let p = parse_program(ABC).unwrap();
        let d = parse_database(ABC_DB).unwrap();
        build_game(&p, &d, variant).unwrap()
    }

    #[test]
    fn abc_has_29_nodes() {
        let g = abc(BuildVariant::Full);
        assert_eq!(g.graph().len(), 29);
        let count = |k: NodeKind| {
            g.graph()
                .positions()
                .iter()
                .filter(|p| p.kind() == k)
                .count()
        };
        assert_eq!(count(NodeKind::Rel), 8);
        assert_eq!(count(NodeKind::Neg), 8);
        assert_eq!(count(NodeKind::Rule), 4);
        assert_eq!(count(NodeKind::Goal), 6);
        assert_eq!(count(NodeKind::Fact), 3);
        let names: Vec<_> = g
            .graph()
            .positions()
            .iter()
            .filter(|p| p.kind() == NodeKind::Goal)
            .map(GameNodeId::as_str)
            .collect();
        assert_eq!(
            names,
            [
                "goal:g1_1(a,a)",
                "goal:g1_1(a,b)",
                "goal:g1_1(b,a)",
                "goal:g1_1(b,b)",
                "goal:g1_2(a)",
                "goal:g1_2(b)"
            ]
        );
    }

    #[test]
    fn canonical_ids() {
        let g = abc(BuildVariant::Full);
        let p = g.graph();
        assert!(p.contains_move(&id("neg:A(a)"), &id("rel:A(a)")));
        let r = GameNodeId::rule(1, vec!["a".into(), "b".into()]);
        assert_eq!(r.as_str(), "rule:r1(a,b)");
        assert!(p.contains_move(&id("rel:A(a)"), &r));
        assert!(p.contains_move(&id("rel:B(a,b)"), &id("fact:r_B(a,b)")));
        let goal = |text: &str| {
            p.positions()
                .iter()
                .find(|q| q.as_str() == text)
                .unwrap()
                .clone()
        };
        assert!(p.contains_move(&r, &goal("goal:g1_1(a,b)")));
        assert!(p.contains_move(&r, &goal("goal:g1_2(b)")));
        assert!(p.contains_move(&goal("goal:g1_1(a,b)"), &id("neg:B(a,b)")));
        assert!(p.contains_move(&goal("goal:g1_2(b)"), &id("rel:C(b)")));
        assert_eq!(p.move_count(), 8 + 4 + 8 + 8 - 2 + 3);
    }

    #[test]
    fn abc_values() {
        let sg = abc(BuildVariant::Full).solve().unwrap();
        let v = |s: &str| sg.value_of(&atom(s)).unwrap();
        assert_eq!(v("A(a)"), NodeValue::Won);
        assert_eq!(v("A(b)"), NodeValue::Lost);
        assert_eq!(v("B(a,b)"), NodeValue::Won);
        assert_eq!(v("B(b,b)"), NodeValue::Lost);
        assert_eq!(v("C(a)"), NodeValue::Won);
        assert_eq!(v("C(b)"), NodeValue::Lost);
        assert_eq!(sg.solved().count(NodeValue::Drawn), 0);
        assert_eq!(sg.solved().audit(), Ok(()));
    }

    #[test]
    fn three_hop_rule_binding_order() {
        let p = parse_program(HOP).unwrap();
        let d = parse_database(HOP_DB).unwrap();
        let g = build_game(&p, &d, BuildVariant::Full).unwrap();
        let r = GameNodeId::rule(1, ["a", "a", "b", "a"].map(String::from).to_vec());
        assert!(g.graph().contains_move(&id("rel:3Hop(a,a)"), &r));
        assert_eq!(g.origin(&r), Some(&NodeOrigin::Rule(1)));
        let sg = g.solve().unwrap();
        assert_eq!(sg.value_of(&atom("3Hop(c,a)")).unwrap(), NodeValue::Lost);
        assert_eq!(sg.value_of(&atom("3Hop(a,a)")).unwrap(), NodeValue::Won);
    }

    #[test]
    fn empty_inputs_build_empty_graph() {
        let g = build_game(&Program::empty(), &Database::new(), BuildVariant::Full).unwrap();
        assert!(g.graph().is_empty());
    }

    #[test]
    fn facts_for_idb_are_rejected() {
        let p = parse_program(ABC).unwrap();
        let d = parse_database("A(a).").unwrap();
        assert!(matches!(
            build_game(&p, &d, BuildVariant::Full),
            Err(Error::PredicateConflict(_))
        ));
        let d = parse_database("B(a).").unwrap();
        assert!(matches!(
            build_game(&p, &d, BuildVariant::Full),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn claims() {
        let r = GameNodeId::rule(1, vec!["a".into(), "b".into()]);
        assert_eq!(
            move_claim(&id("rel:A(a)"), &r).unwrap(),
            "A(a) is true: it's the head of this instance of r1."
        );
        let pos = GameNodeId::new(Node::Goal {
            rule: 1,
            slot: GoalSlot::Position(1),
            negated: false,
            atom: atom("B(a,b)"),
        });
        assert_eq!(
            move_claim(&r, &pos).unwrap(),
            "Positive goal B(a,b) in your rule body fails!"
        );
        assert_eq!(
            move_claim(&pos, &id("neg:B(a,b)")).unwrap(),
            "No! Its negation ¬B(a,b) fails and B(a,b) is true."
        );
        assert_eq!(
            move_claim(&id("neg:B(a,b)"), &id("rel:B(a,b)")).unwrap(),
            "No: atom B(a,b) fails!"
        );
        let neg = GameNodeId::new(Node::Goal {
            rule: 1,
            slot: GoalSlot::Position(2),
            negated: true,
            atom: atom("C(b)"),
        });
        assert_eq!(
            move_claim(&r, &neg).unwrap(),
            "Negative goal ¬C(b) in the rule body fails."
        );
        assert_eq!(
            move_claim(&neg, &id("rel:C(b)")).unwrap(),
            "No: ¬C(b) succeeds, but C(b) fails."
        );
        assert!(move_claim(&id("rel:A(a)"), &id("rel:B(a,b)")).is_none());
    }

    #[test]
    fn trio_goal_ids() {
        let p = parse_program(HOP).unwrap();
        let d = parse_database(HOP_DB).unwrap();
        let g = build_game(&p, &d, BuildVariant::Trio).unwrap();
        let r = GameNodeId::rule(1, ["a", "a", "a", "a"].map(String::from).to_vec());
        let goals: Vec<_> = g
            .graph()
            .followers(&r)
            .unwrap()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(goals, ["goal:g1[hop](a,a)"]);
        let NodeOrigin::Goals { positions, .. } = g
            .origin(&GameNodeId::new(Node::Goal {
                rule: 1,
                slot: GoalSlot::Collapsed,
                negated: false,
                atom: atom("hop(a,a)"),
            }))
            .unwrap()
        else {
            panic!()
        };
        assert_eq!(positions, &[1, 2, 3]);
    }

    #[test]
    fn trio_keeps_sign_and_predicate_apart() {
        let p = parse_program("R(X) :- S(X), not T(X), U(X).").unwrap();
        let d = parse_database("S(a). U(a).").unwrap();
        let g = build_game(&p, &d, BuildVariant::Trio).unwrap();
        let r = GameNodeId::rule(1, vec!["a".into()]);
        let goals: Vec<_> = g
            .graph()
            .followers(&r)
            .unwrap()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(goals, ["goal:g1[!T](a)", "goal:g1[S](a)", "goal:g1[U](a)"]);
        let sg = g.solve().unwrap();
        assert_eq!(sg.value_of(&atom("R(a)")).unwrap(), NodeValue::Won);
    }

    fn schema_conforms(g: &GameGraph<GameNodeId>) -> core::result::Result<(), String> {
        for (s, d) in g.moves() {
            if MoveKind::of(s, d).is_none() {
                return Err(format!("{s} -> {d} matches no move type"));
            }
            // goal arguments must be the goal's own atom
            if s.kind() == NodeKind::Goal && s.atom() != d.atom() {
                return Err(format!("{s} -> {d} changes the atom"));
            }
            if s.kind() == NodeKind::Neg && s.atom() != d.atom() {
                return Err(format!("{s} -> {d} changes the atom"));
            }
        }
        for (i, p) in g.positions().iter().enumerate() {
            match p.kind() {
                NodeKind::Neg => {
                    if g.followers_at(i).len() != 1 {
                        return Err(format!("{p} must have exactly one move"));
                    }
                }
                NodeKind::Fact => {
                    let indeg = g.moves().filter(|(_, d)| *d == p).count();
                    if !g.is_sink(i) || indeg != 1 {
                        return Err(format!("{p} must be a sink with in-degree 1"));
                    }
                }
                NodeKind::Rel => {
                    let neg = GameNodeId::neg(p.atom().unwrap().clone());
                    if !g.contains_move(&neg, p) {
                        return Err(format!("{p} has no negated node"));
                    }
                }
                _ => {}
            }
        }
        // Kahn: every node gets removed iff the graph is acyclic
        let mut indeg = vec![0usize; g.len()];
        for i in 0..g.len() {
            for &j in g.followers_at(i) {
                indeg[j] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..g.len()).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(i) = ready.pop() {
            removed += 1;
            for &j in g.followers_at(i) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
        if removed != g.len() {
            return Err("game graph has a cycle".into());
        }
        Ok(())
    }

    /// Maps a Full-variant node to the node it becomes in the Trio variant.
    fn quotient(id: &GameNodeId) -> GameNodeId {
        match id.node() {
            Node::Goal {
                rule,
                negated,
                atom,
                ..
            } => GameNodeId::new(Node::Goal {
                rule: *rule,
                slot: GoalSlot::Collapsed,
                negated: *negated,
                atom: atom.clone(),
            }),
            _ => id.clone(),
        }
    }

    #[test]
    fn edge_labels_on_abc() {
        let sg = abc(BuildVariant::Full).solve().unwrap();
        let s = sg.solved();
        let r_ab = GameNodeId::rule(1, vec!["a".into(), "b".into()]);
        let r_aa = GameNodeId::rule(1, vec!["a".into(), "a".into()]);
        assert_eq!(s.label(&id("rel:A(a)"), &r_ab).unwrap(), EdgeLabel::Winning);
        assert_eq!(s.label(&id("rel:A(a)"), &r_aa).unwrap(), EdgeLabel::Bad);
    }

    mod props {
        use super::*;
        use crate::testgen::{random_instance, Shape};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(150))]

            #[test]
            fn game_agrees_with_stratified_model(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::default());
                let sg = solve_query_game(&p, &d, BuildVariant::Full).unwrap();
                prop_assert_eq!(sg.solved().count(NodeValue::Drawn), 0);
                let model = evaluate_stratified(&p, &d);
                let won: BTreeSet<_> = sg
                    .true_atoms()
                    .into_iter()
                    .filter(|a| p.is_idb(&a.predicate))
                    .collect();
                prop_assert_eq!(won, model);
                prop_assert_eq!(sg.solved().verify(), Ok(()));
            }

            #[test]
            fn edb_nodes_follow_the_database(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::default());
                let sg = solve_query_game(&p, &d, BuildVariant::Full).unwrap();
                for (q, v, _) in sg.solved().iter() {
                    if q.kind() == NodeKind::Rel && !p.is_idb(&q.atom().unwrap().predicate) {
                        let present = d.contains(q.atom().unwrap());
                        prop_assert_eq!(present, v == NodeValue::Won);
                    }
                }
            }

            #[test]
            fn schema_conformance(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::default());
                for variant in [BuildVariant::Full, BuildVariant::Trio] {
                    let g = build_game(&p, &d, variant).unwrap();
                    prop_assert_eq!(schema_conforms(g.graph()), Ok(()));
                }
            }

            #[test]
            fn trio_is_quotient_of_full(seed in any::<u64>()) {
                let (p, d) = random_instance(seed, Shape::default());
                let full = build_game(&p, &d, BuildVariant::Full).unwrap();
                let trio = build_game(&p, &d, BuildVariant::Trio).unwrap();
                let nodes: BTreeSet<_> = full.graph().positions().iter().map(quotient).collect();
                let trio_nodes: BTreeSet<_> = trio.graph().positions().iter().cloned().collect();
                prop_assert_eq!(nodes, trio_nodes);
                let moves: BTreeSet<_> = full
                    .graph()
                    .moves()
                    .map(|(s, d)| (quotient(s), quotient(d)))
                    .collect();
                let trio_moves: BTreeSet<_> = trio
                    .graph()
                    .moves()
                    .map(|(s, d)| (s.clone(), d.clone()))
                    .collect();
                prop_assert_eq!(moves, trio_moves);
                // values of shared nodes agree
                let a = full.solve().unwrap();
                let b = trio.solve().unwrap();
                for (q, v, _) in a.solved().iter() {
                    prop_assert_eq!(b.solved().value(&quotient(q)).unwrap(), v);
                }
            }
        }
    }
}
