//! Finite win-move games.
//!
//! Two players alternate moving a token along the edges of a finite directed
//! graph; the player who cannot move loses, and infinite plays are draws.
//! [`solve`] computes the value of every position together with its length
//! (shortest forced win, longest possible delay of a loss, or infinity for
//! draws). From a solved game, [`SolvedGame::provenance`] extracts the
//! subgraph of good moves reachable from a position.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Anything usable as a game position: ordered, cloneable and printable.
pub trait Position: Ord + Clone + fmt::Display {}

impl<T: Ord + Clone + fmt::Display> Position for T {}

/// A finite game graph. Positions are kept sorted, so iteration order is the
/// positions' total order and does not depend on insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph<P> {
    positions: Vec<P>,
    succ: Vec<Vec<usize>>,
}

impl<P: Position> Default for GameGraph<P> {
    fn default() -> Self {
        GameGraph {
            positions: Vec::new(),
            succ: Vec::new(),
        }
    }
}

impl<P: Position> GameGraph<P> {
    /// Builds a graph from explicit positions and moves. Every move endpoint
    /// must be listed among the positions; duplicate moves collapse.
    pub fn new(
        positions: impl IntoIterator<Item = P>,
        moves: impl IntoIterator<Item = (P, P)>,
    ) -> Result<Self> {
        let mut builder = GameGraphBuilder::new();
        for p in positions {
            builder.add_position(p);
        }
        for (src, dst) in moves {
            for end in [&src, &dst] {
                if !builder.positions.contains(end) {
                    return Err(Error::UnknownPosition(end.to_string()));
                }
            }
            builder.add_move(src, dst);
        }
        Ok(builder.build())
    }

    /// Builds a graph whose positions are exactly the move endpoints.
    pub fn from_moves(moves: impl IntoIterator<Item = (P, P)>) -> Self {
        let mut builder = GameGraphBuilder::new();
        for (src, dst) in moves {
            builder.add_move(src, dst);
        }
        builder.build()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[P] {
        &self.positions
    }

    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.positions.binary_search(p).ok()
    }

    pub fn position(&self, idx: usize) -> &P {
        &self.positions[idx]
    }

    /// Follower indices of the position at `idx`, in position order.
    pub fn followers_at(&self, idx: usize) -> &[usize] {
        &self.succ[idx]
    }

    pub fn followers(&self, p: &P) -> Result<impl Iterator<Item = &P> + '_> {
        let idx = self.require(p)?;
        Ok(self.succ[idx].iter().map(move |&j| &self.positions[j]))
    }

    pub fn is_sink(&self, idx: usize) -> bool {
        self.succ[idx].is_empty()
    }

    /// All moves, ordered by source then target.
    pub fn moves(&self) -> impl Iterator<Item = (&P, &P)> + '_ {
        self.succ.iter().enumerate().flat_map(move |(i, out)| {
            out.iter()
                .map(move |&j| (&self.positions[i], &self.positions[j]))
        })
    }

    pub fn move_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn contains_move(&self, src: &P, dst: &P) -> bool {
        match (self.index_of(src), self.index_of(dst)) {
            (Some(i), Some(j)) => self.succ[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn solve(self) -> SolvedGame<P> {
        solve(self)
    }

    fn require(&self, p: &P) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::UnknownPosition(p.to_string()))
    }
}

/// Incremental construction of a [`GameGraph`]; adding a move adds its
/// endpoints.
#[derive(Debug, Clone)]
pub struct GameGraphBuilder<P> {
    positions: BTreeSet<P>,
    moves: BTreeSet<(P, P)>,
}

impl<P: Position> Default for GameGraphBuilder<P> {
    fn default() -> Self {
        Self::new()
    }
}

impl<P: Position> GameGraphBuilder<P> {
    pub fn new() -> Self {
        GameGraphBuilder {
            positions: BTreeSet::new(),
            moves: BTreeSet::new(),
        }
    }

    pub fn add_position(&mut self, p: P) {
        self.positions.insert(p);
    }

    pub fn add_move(&mut self, src: P, dst: P) {
        self.positions.insert(src.clone());
        self.positions.insert(dst.clone());
        self.moves.insert((src, dst));
    }

    pub fn build(self) -> GameGraph<P> {
        let positions: Vec<P> = self.positions.into_iter().collect();
        let mut succ = alloc::vec![Vec::new(); positions.len()];
        // moves are sorted by (src, dst), so each follower list comes out sorted
        for (src, dst) in &self.moves {
            let i = positions.binary_search(src).expect("endpoint registered");
            let j = positions.binary_search(dst).expect("endpoint registered");
            succ[i].push(j);
        }
        GameGraph { positions, succ }
    }
}

/// Value of a position for the player about to move from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeValue {
    Won,
    Lost,
    Drawn,
}

impl NodeValue {
    pub fn symbol(self) -> char {
        match self {
            NodeValue::Won => 'W',
            NodeValue::Lost => 'L',
            NodeValue::Drawn => 'D',
        }
    }
}

impl fmt::Display for NodeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Number of moves until the play ends under optimal play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(u32),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u32> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

/// Classification of a move `x -> y` by the values of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    /// won -> lost
    Winning,
    /// lost -> won
    Delaying,
    /// drawn -> drawn
    Drawing,
    /// won -> won, won -> drawn, drawn -> won
    Bad,
}

impl EdgeLabel {
    /// Label for a move between positions with the given values, or `None`
    /// for the combinations that never occur in a solved game
    /// (lost -> lost, lost -> drawn, drawn -> lost).
    pub fn classify(src: NodeValue, dst: NodeValue) -> Option<EdgeLabel> {
        use NodeValue::*;
        match (src, dst) {
            (Won, Lost) => Some(EdgeLabel::Winning),
            (Lost, Won) => Some(EdgeLabel::Delaying),
            (Drawn, Drawn) => Some(EdgeLabel::Drawing),
            (Won, Won) | (Won, Drawn) | (Drawn, Won) => Some(EdgeLabel::Bad),
            (Lost, Lost) | (Lost, Drawn) | (Drawn, Lost) => None,
        }
    }

    pub fn is_good(self) -> bool {
        self != EdgeLabel::Bad
    }

    /// One-letter color code: g, r, y, or b for bad.
    pub fn symbol(self) -> char {
        match self {
            EdgeLabel::Winning => 'g',
            EdgeLabel::Delaying => 'r',
            EdgeLabel::Drawing => 'y',
            EdgeLabel::Bad => 'b',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeLabel::Winning => "winning",
            EdgeLabel::Delaying => "delaying",
            EdgeLabel::Drawing => "drawing",
            EdgeLabel::Bad => "bad",
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A game together with the value and length of every position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedGame<P> {
    graph: GameGraph<P>,
    gamma: Vec<NodeValue>,
    len: Vec<Length>,
}

/// Solves a game round by round.
///
/// Sinks are lost with length 0. In every round, each unlabeled position with
/// a lost follower becomes won (length: one more than its shortest lost
/// follower) and each unlabeled position whose followers are all won becomes
/// lost (length: one more than its longest follower). All decisions in a
/// round are taken against the labels from the end of the previous round.
/// Whatever is unlabeled when nothing changes any more is drawn.
pub fn solve<P: Position>(graph: GameGraph<P>) -> SolvedGame<P> {
    let n = graph.len();
    let mut gamma: Vec<Option<NodeValue>> = (0..n)
        .map(|x| graph.is_sink(x).then_some(NodeValue::Lost))
        .collect();
    let mut len: Vec<u32> = alloc::vec![0; n];

    let mut updates = Vec::new();
    loop {
        for x in (0..n).filter(|&x| gamma[x].is_none()) {
            let followers = graph.followers_at(x);
            let shortest_lost = followers
                .iter()
                .filter(|&&y| gamma[y] == Some(NodeValue::Lost))
                .map(|&y| len[y])
                .min();
            if let Some(m) = shortest_lost {
                updates.push((x, NodeValue::Won, m + 1));
            } else if followers.iter().all(|&y| gamma[y] == Some(NodeValue::Won)) {
                let longest = followers.iter().map(|&y| len[y]).max().unwrap_or(0);
                updates.push((x, NodeValue::Lost, longest + 1));
            }
        }
        if updates.is_empty() {
            break;
        }
        for (x, value, l) in updates.drain(..) {
            gamma[x] = Some(value);
            len[x] = l;
        }
    }

    let gamma: Vec<NodeValue> = gamma
        .into_iter()
        .map(|v| v.unwrap_or(NodeValue::Drawn))
        .collect();
    let len = gamma
        .iter()
        .zip(len)
        .map(|(v, l)| match v {
            NodeValue::Drawn => Length::Infinite,
            _ => Length::Finite(l),
        })
        .collect();
    SolvedGame { graph, gamma, len }
}

impl<P: Position> SolvedGame<P> {
    pub fn graph(&self) -> &GameGraph<P> {
        &self.graph
    }

    pub fn value(&self, p: &P) -> Result<NodeValue> {
        Ok(self.gamma[self.graph.require(p)?])
    }

    pub fn length(&self, p: &P) -> Result<Length> {
        Ok(self.len[self.graph.require(p)?])
    }

    pub fn value_at(&self, idx: usize) -> NodeValue {
        self.gamma[idx]
    }

    pub fn length_at(&self, idx: usize) -> Length {
        self.len[idx]
    }

    /// `(position, value, length)` for every position, in position order.
    pub fn iter(&self) -> impl Iterator<Item = (&P, NodeValue, Length)> + '_ {
        self.graph
            .positions
            .iter()
            .zip(self.gamma.iter().zip(&self.len))
            .map(|(p, (&v, &l))| (p, v, l))
    }

    pub fn count(&self, value: NodeValue) -> usize {
        self.gamma.iter().filter(|&&v| v == value).count()
    }

    fn label_at(&self, i: usize, j: usize) -> Result<EdgeLabel> {
        EdgeLabel::classify(self.gamma[i], self.gamma[j]).ok_or_else(|| Error::InconsistentLabels {
            src: self.graph.positions[i].to_string(),
            dst: self.graph.positions[j].to_string(),
        })
    }

    /// Label of a single move.
    pub fn label(&self, src: &P, dst: &P) -> Result<EdgeLabel> {
        let i = self.graph.require(src)?;
        let j = self.graph.require(dst)?;
        if self.graph.succ[i].binary_search(&j).is_err() {
            return Err(Error::UnknownPosition(format!("{src} -> {dst}")));
        }
        self.label_at(i, j)
    }

    /// Labels every move.
    pub fn label_edges(&self) -> Result<BTreeMap<(P, P), EdgeLabel>> {
        let mut out = BTreeMap::new();
        for (i, followers) in self.graph.succ.iter().enumerate() {
            for &j in followers {
                out.insert(
                    (
                        self.graph.positions[i].clone(),
                        self.graph.positions[j].clone(),
                    ),
                    self.label_at(i, j)?,
                );
            }
        }
        Ok(out)
    }

    /// Game provenance of `root`: everything reachable from it along
    /// winning, delaying and drawing moves.
    pub fn provenance(&self, root: &P) -> Result<ProvenanceSubgraph<P>> {
        let start = self.graph.require(root)?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let mut nodes = BTreeMap::new();
        let mut edges = BTreeMap::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let mut out = Vec::new();
            for &j in &self.graph.succ[i] {
                let label = self.label_at(i, j)?;
                if !label.is_good() {
                    continue;
                }
                out.push((self.graph.positions[j].clone(), label));
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
            let p = self.graph.positions[i].clone();
            nodes.insert(p.clone(), (self.gamma[i], self.len[i]));
            edges.insert(p, out);
        }
        Ok(ProvenanceSubgraph {
            root: root.clone(),
            nodes,
            edges,
        })
    }

    /// The good moves out of `p`, plus the subset an optimal player prefers:
    /// shortest wins from won positions, longest delays from lost ones, and
    /// all drawing moves from drawn ones.
    pub fn optimal_moves(&self, p: &P) -> Result<OptimalMoves<P>> {
        let i = self.graph.require(p)?;
        let mut good = Vec::new();
        for &j in &self.graph.succ[i] {
            let label = self.label_at(i, j)?;
            if label.is_good() {
                good.push((j, label));
            }
        }
        let best = match self.gamma[i] {
            NodeValue::Won => good.iter().map(|&(j, _)| self.len[j]).min(),
            NodeValue::Lost => good.iter().map(|&(j, _)| self.len[j]).max(),
            NodeValue::Drawn => None,
        };
        let preferred = good
            .iter()
            .filter(|&&(j, _)| best.is_none_or(|b| self.len[j] == b))
            .map(|&(j, _)| self.graph.positions[j].clone())
            .collect();
        let good = good
            .into_iter()
            .map(|(j, label)| (self.graph.positions[j].clone(), label))
            .collect();
        Ok(OptimalMoves { good, preferred })
    }

    /// Checks the defining properties of a solved game: the local
    /// won/lost/drawn conditions, the length recurrences, and the parity of
    /// lengths. Returns a description of the first violation.
    pub fn verify(&self) -> core::result::Result<(), String> {
        for (x, followers) in self.graph.succ.iter().enumerate() {
            let name = &self.graph.positions[x];
            let fl = |v: NodeValue| followers.iter().filter(move |&&y| self.gamma[y] == v);
            let finite = |y: usize| self.len[y].finite();
            match (self.gamma[x], self.len[x]) {
                (NodeValue::Lost, Length::Finite(0)) if followers.is_empty() => {}
                (_, _) if followers.is_empty() => {
                    return Err(format!("sink {name} must be lost with length 0"));
                }
                (NodeValue::Won, Length::Finite(l)) => {
                    let min = fl(NodeValue::Lost).filter_map(|&y| finite(y)).min();
                    match min {
                        Some(m) if l == m + 1 && l % 2 == 1 => {}
                        Some(_) => return Err(format!("won {name} has wrong length {l}")),
                        None => return Err(format!("won {name} has no lost follower")),
                    }
                }
                (NodeValue::Lost, Length::Finite(l)) => {
                    if fl(NodeValue::Won).count() != followers.len() {
                        return Err(format!("lost {name} has a follower that is not won"));
                    }
                    let max = followers.iter().filter_map(|&y| finite(y)).max();
                    if max.map(|m| m + 1) != Some(l) || l % 2 != 0 {
                        return Err(format!("lost {name} has wrong length {l}"));
                    }
                }
                (NodeValue::Drawn, Length::Infinite) => {
                    if fl(NodeValue::Lost).next().is_some() {
                        return Err(format!("drawn {name} has a lost follower"));
                    }
                    if fl(NodeValue::Drawn).next().is_none() {
                        return Err(format!("drawn {name} has no drawn follower"));
                    }
                }
                (v, l) => return Err(format!("{name} has value {v} with length {l}")),
            }
        }
        Ok(())
    }
}

impl<P: Position> SolvedGame<P> {
    /// [`verify`](Self::verify) plus the structural properties of game
    /// provenance: every move has a label from the table, Γ of every
    /// position has the regular structure, and re-solving Γ(x) on its own
    /// gives `x` the same value.
    pub fn audit(&self) -> core::result::Result<(), String> {
        self.verify()?;
        self.label_edges().map_err(|e| e.to_string())?;
        for (i, p) in self.graph.positions.iter().enumerate() {
            let prov = self.provenance(p).map_err(|e| e.to_string())?;
            if !prov.check_regular_structure() {
                return Err(format!("provenance of {p} is not regular"));
            }
            let again = solve(prov.to_game());
            if again.value(p).map_err(|e| e.to_string())? != self.gamma[i] {
                return Err(format!("provenance of {p} does not determine its value"));
            }
        }
        Ok(())
    }
}

/// Good moves out of a position; see [`SolvedGame::optimal_moves`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalMoves<P> {
    /// Every non-bad move with its label, in target order.
    pub good: Vec<(P, EdgeLabel)>,
    /// Targets of the moves an optimal player picks from.
    pub preferred: Vec<P>,
}

/// The game provenance Γ(root) of a solved game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceSubgraph<P> {
    root: P,
    nodes: BTreeMap<P, (NodeValue, Length)>,
    edges: BTreeMap<P, Vec<(P, EdgeLabel)>>,
}

impl<P: Position> ProvenanceSubgraph<P> {
    pub fn root(&self) -> &P {
        &self.root
    }

    pub fn root_value(&self) -> NodeValue {
        self.nodes[&self.root].0
    }

    pub fn contains(&self, p: &P) -> bool {
        self.nodes.contains_key(p)
    }

    pub fn value(&self, p: &P) -> Option<NodeValue> {
        self.nodes.get(p).map(|&(v, _)| v)
    }

    pub fn length(&self, p: &P) -> Option<Length> {
        self.nodes.get(p).map(|&(_, l)| l)
    }

    /// Nodes with their value and length, in position order.
    pub fn nodes(&self) -> impl Iterator<Item = (&P, NodeValue, Length)> + '_ {
        self.nodes.iter().map(|(p, &(v, l))| (p, v, l))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    /// Labeled edges ordered by source then target.
    pub fn edges(&self) -> impl Iterator<Item = (&P, &P, EdgeLabel)> + '_ {
        self.edges
            .iter()
            .flat_map(|(src, out)| out.iter().map(move |(dst, l)| (src, dst, *l)))
    }

    /// Followers of `p` inside the subgraph.
    pub fn followers(&self, p: &P) -> &[(P, EdgeLabel)] {
        self.edges.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn sinks(&self) -> impl Iterator<Item = &P> + '_ {
        self.edges
            .iter()
            .filter(|(_, out)| out.is_empty())
            .map(|(p, _)| p)
    }

    /// The subgraph as a game of its own.
    pub fn to_game(&self) -> GameGraph<P> {
        let mut builder = GameGraphBuilder::new();
        for p in self.nodes.keys() {
            builder.add_position(p.clone());
        }
        for (src, dst, _) in self.edges() {
            builder.add_move(src.clone(), dst.clone());
        }
        builder.build()
    }

    /// True iff every label path from the root is a prefix of a word in
    /// `g(rg)*` (won root), `(rg)*` (lost root) or `y+` (drawn root).
    pub fn check_regular_structure(&self) -> bool {
        // automaton states: which label the next edge must carry
        let start = match self.root_value() {
            NodeValue::Won => EdgeLabel::Winning,
            NodeValue::Lost => EdgeLabel::Delaying,
            NodeValue::Drawn => EdgeLabel::Drawing,
        };
        let next = |l: EdgeLabel| match l {
            EdgeLabel::Winning => EdgeLabel::Delaying,
            EdgeLabel::Delaying => EdgeLabel::Winning,
            other => other,
        };
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![(&self.root, start)];
        while let Some((p, expect)) = stack.pop() {
            if !seen.insert((p, expect)) {
                continue;
            }
            for (q, label) in self.followers(p) {
                if *label != expect {
                    return false;
                }
                stack.push((q, next(expect)));
            }
        }
        true
    }
}
