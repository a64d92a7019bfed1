//! Graphviz and JSON renderings of solved games and provenance subgraphs.
//!
//! Both formats list nodes and edges in canonical id order, so equal inputs
//! give byte-identical output.

use std::fmt::Write as _;

use provgame_core::game::{EdgeLabel, Length, NodeValue, Position, ProvenanceSubgraph, SolvedGame};
use provgame_core::query_game::{GameNodeId, Node, NodeKind};
use serde::Serialize;

/// How a position is drawn and named.
pub trait Styled: Position {
    fn kind(&self) -> &'static str;
    fn shape(&self) -> &'static str;
    fn display_label(&self) -> String;
}

impl Styled for String {
    fn kind(&self) -> &'static str {
        "position"
    }

    fn shape(&self) -> &'static str {
        "ellipse"
    }

    fn display_label(&self) -> String {
        self.clone()
    }
}

impl Styled for GameNodeId {
    fn kind(&self) -> &'static str {
        NodeKind::name(GameNodeId::kind(self))
    }

    fn shape(&self) -> &'static str {
        match GameNodeId::kind(self) {
            NodeKind::Rel | NodeKind::Neg => "ellipse",
            NodeKind::Rule | NodeKind::Fact | NodeKind::Goal => "box",
        }
    }

    fn display_label(&self) -> String {
        let text = self.as_str();
        let body = &text[text.find(':').map_or(0, |i| i + 1)..];
        match self.node() {
            Node::Neg(a) => format!("¬{a}"),
            _ => body.to_string(),
        }
    }
}

/// A solved game or a piece of one, flattened for rendering.
pub struct View<P> {
    pub nodes: Vec<(P, NodeValue, Length)>,
    pub edges: Vec<(P, P, EdgeLabel)>,
}

impl<P: Position> View<P> {
    pub fn full(game: &SolvedGame<P>) -> Self {
        let nodes = game.iter().map(|(p, v, l)| (p.clone(), v, l)).collect();
        let edges = game
            .graph()
            .moves()
            .map(|(s, d)| {
                let label = game.label(s, d).expect("solved games label every move");
                (s.clone(), d.clone(), label)
            })
            .collect();
        View { nodes, edges }
    }

    pub fn gamma(gamma: &ProvenanceSubgraph<P>) -> Self {
        let nodes = gamma.nodes().map(|(p, v, l)| (p.clone(), v, l)).collect();
        let edges = gamma
            .edges()
            .map(|(s, d, l)| (s.clone(), d.clone(), l))
            .collect();
        View { nodes, edges }
    }
}

fn fill(v: NodeValue) -> &'static str {
    match v {
        NodeValue::Won => "green",
        NodeValue::Lost => "red",
        NodeValue::Drawn => "yellow",
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Won nodes green, lost red, drawn yellow. Relation nodes are ellipses,
/// rule and fact nodes boxes, goal nodes rounded boxes. Bad moves are gray
/// and dashed.
pub fn to_dot<P: Styled>(view: &View<P>) -> String {
    let mut out = String::new();
    out.push_str("digraph game {\n");
    out.push_str("  node [style=filled, fontname=\"Helvetica\"];\n");
    for (p, v, l) in &view.nodes {
        let style = if p.kind() == "goal" {
            ", style=\"rounded,filled\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {} [label={}, shape={}{style}, fillcolor={}, tooltip={}];",
            quote(&p.to_string()),
            quote(&p.display_label()),
            p.shape(),
            fill(*v),
            quote(&format!("{} {}", v.symbol(), l)),
        );
    }
    for (s, d, label) in &view.edges {
        let attrs = match label {
            EdgeLabel::Bad => "color=gray, style=dashed",
            EdgeLabel::Winning => "color=darkgreen",
            EdgeLabel::Delaying => "color=red3",
            EdgeLabel::Drawing => "color=goldenrod",
        };
        let _ = writeln!(
            out,
            "  {} -> {} [{attrs}];",
            quote(&s.to_string()),
            quote(&d.to_string())
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonGraph {
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

#[derive(Serialize)]
struct JsonNode {
    id: String,
    kind: &'static str,
    gamma: String,
    /// `null` for drawn positions.
    len: Option<u32>,
}

#[derive(Serialize)]
struct JsonEdge {
    src: String,
    dst: String,
    label: &'static str,
}

pub fn to_json<P: Styled>(view: &View<P>) -> String {
    let graph = JsonGraph {
        nodes: view
            .nodes
            .iter()
            .map(|(p, v, l)| JsonNode {
                id: p.to_string(),
                kind: p.kind(),
                gamma: v.symbol().to_string(),
                len: l.finite(),
            })
            .collect(),
        edges: view
            .edges
            .iter()
            .map(|(s, d, l)| JsonEdge {
                src: s.to_string(),
                dst: d.to_string(),
                label: l.name(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&graph).expect("plain data serializes");
    text.push('\n');
    text
}
