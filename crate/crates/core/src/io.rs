//! File formats: state documents, tree documents and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{GameState, HostMove, StateKey, Variant, VariantRules};
use crate::geometry::{Point, PointConfiguration};
use crate::scalar::Scalar;
use crate::search::GameTree;

/// Textual form of a position.
///
/// ```json
/// {"variant":"basic-shifted","dim":3,"points":[[2,0,0],[0,2,0],[0,0,3]]}
/// ```
///
/// Non-integers are written as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub variant: Variant,
    pub dim: usize,
    pub points: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u64>,
}

impl StateDocument {
    pub fn from_state(variant: Variant, state: &GameState) -> Self {
        StateDocument {
            variant,
            dim: state.dim(),
            points: state
                .config
                .points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            weights: state.weights.clone(),
            step: (state.step > 0).then_some(state.step),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GameError::Document(e.to_string()))
    }

    /// One line of JSON, no trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state documents always serialize")
    }

    pub fn rules(&self) -> VariantRules {
        self.variant.rules()
    }

    /// The position exactly as written, checked against the variant.
    pub fn to_state(&self) -> Result<GameState> {
        let config = self.config()?;
        let state = GameState {
            config,
            weights: self.weights.clone(),
            step: self.step.unwrap_or(0),
        };
        self.rules().validate(&state)?;
        Ok(state)
    }

    /// The position brought into the variant's normal form, as a game start.
    pub fn to_initial_state(&self) -> Result<GameState> {
        let config = self.config()?;
        let mut state = self.rules().initial_state(config, self.weights.clone())?;
        state.step = self.step.unwrap_or(0);
        Ok(state)
    }

    fn config(&self) -> Result<PointConfiguration> {
        for (ix, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(GameError::Document(format!(
                    "point {ix} has {} coordinates but dim is {}",
                    p.len(),
                    self.dim
                )));
            }
        }
        if self.points.is_empty() {
            return Err(GameError::Document("no points".into()));
        }
        PointConfiguration::new(self.points.iter().map(|p| Point::new(p.clone())).collect())
            .map_err(|e| GameError::Document(e.to_string()))
    }
}

/// Reads a state file; returns the variant's rules and the normalized start.
pub fn read_state_file(path: &Path) -> Result<(VariantRules, GameState)> {
    let text = std::fs::read_to_string(path)?;
    let doc = StateDocument::parse(&text)?;
    let state = doc.to_initial_state()?;
    Ok((doc.rules(), state))
}

#[derive(Serialize)]
struct TreeDocument<'a> {
    variant: Variant,
    root: usize,
    nodes: Vec<NodeDocument<'a>>,
}

#[derive(Serialize)]
struct NodeDocument<'a> {
    id: usize,
    parent: Option<usize>,
    depth: u32,
    state: StateDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    host_move: Option<&'a HostMove>,
    children: Vec<EdgeDocument>,
    terminal: bool,
    smooth: bool,
    looped: bool,
    depth_capped: bool,
}

#[derive(Serialize)]
struct EdgeDocument {
    agent: usize,
    child: usize,
}

/// Machine-readable dump of a policy tree.
pub fn tree_to_json(variant: Variant, tree: &GameTree) -> String {
    let doc = TreeDocument {
        variant,
        root: 0,
        nodes: tree
            .nodes
            .iter()
            .map(|n| NodeDocument {
                id: n.id,
                parent: n.parent,
                depth: n.depth,
                state: StateDocument::from_state(variant, &n.state),
                host_move: n.host_move.as_ref(),
                children: n
                    .children
                    .iter()
                    .map(|&(agent, child)| EdgeDocument { agent, child })
                    .collect(),
                terminal: n.terminal,
                smooth: n.smooth,
                looped: n.looped,
                depth_capped: n.depth_capped,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("tree documents always serialize") + "\n"
}

/// Graphviz rendering: one point per label line, double circles for
/// terminal states, blue for smooth markers, dashed for loops and cut-offs,
/// agent replies on the edges.
pub fn tree_to_dot(tree: &GameTree) -> String {
    let mut out = String::new();
    out.push_str("digraph game {\n");
    out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
    for n in &tree.nodes {
        let label: Vec<String> = n
            .state
            .config
            .points()
            .iter()
            .map(|p| p.to_string())
            .collect();
        let mut attrs = vec![format!("label=\"{}\"", label.join("\\n"))];
        if n.terminal {
            attrs.push("shape=doublecircle".into());
        }
        if n.smooth {
            attrs.push("color=blue".into());
        }
        if n.looped || n.depth_capped {
            attrs.push("style=dashed".into());
        }
        if let Some(m) = n.host_move {
            attrs.push(format!("xlabel=\"I={m}\""));
        }
        let _ = writeln!(out, "  n{} [{}];", n.id, attrs.join(", "));
    }
    for n in &tree.nodes {
        for &(reply, child) in &n.children {
            let _ = writeln!(out, "  n{} -> n{child} [label=\"{reply}\"];", n.id);
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct StrategyEntry {
    state: StateDocument,
    #[serde(rename = "move")]
    host_move: HostMove,
}

/// A solved strategy as a JSON array of `{state, move}` rows, in state order.
pub fn strategy_to_json(variant: Variant, strategy: &BTreeMap<StateKey, HostMove>) -> String {
    let rows: Vec<StrategyEntry> = strategy
        .iter()
        .map(|(k, &m)| StrategyEntry {
            state: StateDocument::from_state(
                variant,
                &GameState {
                    config: k.config.clone(),
                    weights: k.weights.clone(),
                    step: 0,
                },
            ),
            host_move: m,
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("strategies always serialize") + "\n"
}
