//! Policy trees, an exact bounded minimax solver, and UCT planning.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{GameError, Result};
use crate::game::{is_smooth_marker, AgentMove, GameState, HostMove, StateKey, VariantRules};
use crate::policy::{AgentPolicy, HostPolicy};

// ---------------------------------------------------------------------------
// Policy trees
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub state: GameState,
    pub depth: u32,
    /// The host's choice here; `None` at leaves.
    pub host_move: Option<HostMove>,
    /// `(agent reply, child id)` in increasing reply order.
    pub children: Vec<(AgentMove, usize)>,
    pub terminal: bool,
    pub smooth: bool,
    /// The state already occurs on the path from the root.
    pub looped: bool,
    pub depth_capped: bool,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A host strategy unrolled against every agent reply. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTree {
    pub nodes: Vec<TreeNode>,
}

impl GameTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    pub fn max_depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// True when every branch ends in a terminal state.
    pub fn is_resolved(&self) -> bool {
        self.leaves().all(|n| n.terminal)
    }
}

/// Breadth-first expansion of `host` against all agent replies.
///
/// States repeating an ancestor are marked `looped`, states at `depth_cap`
/// are marked `depth_capped`; neither is expanded.
pub fn build_policy_tree(
    root: &GameState,
    host: &mut dyn HostPolicy,
    rules: &VariantRules,
    depth_cap: u32,
    rng: &mut dyn RngCore,
) -> Result<GameTree> {
    assert!(depth_cap >= 1, "depth cap must be positive");
    let mut nodes = vec![TreeNode {
        id: 0,
        parent: None,
        state: root.clone(),
        depth: 0,
        host_move: None,
        children: Vec::new(),
        terminal: rules.is_terminal(root),
        smooth: is_smooth_marker(root),
        looped: false,
        depth_capped: false,
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        if nodes[id].terminal {
            continue;
        }
        if repeats_ancestor(&nodes, id) {
            nodes[id].looped = true;
            continue;
        }
        if nodes[id].depth >= depth_cap {
            nodes[id].depth_capped = true;
            continue;
        }
        let state = nodes[id].state.clone();
        let host_move = host.decide(&state, rules, rng)?;
        if !rules.is_legal_host_move(&state, host_move) {
            return Err(GameError::IllegalMove(format!(
                "host {} chose {host_move} at {state}",
                host.name()
            )));
        }
        nodes[id].host_move = Some(host_move);
        for reply in rules.legal_agent_moves(&state, host_move) {
            let child_state = rules.apply_unchecked(&state, host_move, reply);
            let child = nodes.len();
            nodes.push(TreeNode {
                id: child,
                parent: Some(id),
                terminal: rules.is_terminal(&child_state),
                smooth: is_smooth_marker(&child_state),
                state: child_state,
                depth: nodes[id].depth + 1,
                host_move: None,
                children: Vec::new(),
                looped: false,
                depth_capped: false,
            });
            nodes[id].children.push((reply, child));
            queue.push_back(child);
        }
    }
    Ok(GameTree { nodes })
}

fn repeats_ancestor(nodes: &[TreeNode], id: usize) -> bool {
    let me = &nodes[id].state;
    let mut cursor = nodes[id].parent;
    while let Some(p) = cursor {
        if nodes[p].state.config == me.config && nodes[p].state.weights == me.weights {
            return true;
        }
        cursor = nodes[p].parent;
    }
    false
}

// ---------------------------------------------------------------------------
// Minimax
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    /// Exact worst-case value and the host move achieving it.
    Exact(u32, HostMove),
    /// The value is strictly greater than this bound.
    Above(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveValue {
    /// Fewest moves that force termination against every agent.
    Exact(u32),
    /// No strategy terminates within the cap.
    Unbounded(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub value: SolveValue,
    /// Host move for every non-terminal state reachable under the strategy.
    pub strategy: BTreeMap<StateKey, HostMove>,
    pub explored: usize,
}

/// Exact minimax over host moves (minimizing) and agent replies
/// (maximizing) with a transposition table keyed by canonical state.
///
/// Values do not depend on the path, so the table may be reused across
/// roots and calls.
pub struct MinimaxSolver {
    rules: VariantRules,
    memo: FxHashMap<StateKey, Entry>,
}

impl MinimaxSolver {
    pub fn new(rules: VariantRules) -> Self {
        MinimaxSolver {
            rules,
            memo: FxHashMap::default(),
        }
    }

    pub fn rules(&self) -> &VariantRules {
        &self.rules
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// The exact value of `state` if it is at most `budget`, else `None`.
    pub fn bounded_value(&mut self, state: &GameState, budget: u32) -> Option<u32> {
        if self.rules.is_terminal(state) {
            return Some(0);
        }
        if budget == 0 {
            return None;
        }
        let key = state.key();
        match self.memo.get(&key) {
            Some(&Entry::Exact(v, _)) => return (v <= budget).then_some(v),
            Some(&Entry::Above(b)) if budget <= b => return None,
            _ => {}
        }

        let moves = self.rules.legal_host_moves(state).expect("non-terminal");
        let mut best: Option<(u32, HostMove)> = None;
        // Any improvement must come in strictly under the current best.
        let mut limit = budget;
        for host_move in moves {
            let mut worst = 0;
            let mut ok = true;
            for reply in self.rules.legal_agent_moves(state, host_move) {
                let child = self.rules.apply_unchecked(state, host_move, reply);
                match self.bounded_value(&child, limit - 1) {
                    Some(v) => worst = worst.max(v + 1),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                best = Some((worst, host_move));
                if worst == 1 {
                    break;
                }
                limit = worst - 1;
            }
        }
        match best {
            Some((v, m)) => {
                self.memo.insert(key, Entry::Exact(v, m));
                Some(v)
            }
            None => {
                self.memo.insert(key, Entry::Above(budget));
                None
            }
        }
    }

    /// Iterative deepening up to `depth_cap`, then extraction of the
    /// principal strategy.
    pub fn solve(&mut self, root: &GameState, depth_cap: u32) -> SolveResult {
        assert!(depth_cap >= 1, "depth cap must be positive");
        let mut value = SolveValue::Unbounded(depth_cap);
        for d in 0..=depth_cap {
            if let Some(v) = self.bounded_value(root, d) {
                value = SolveValue::Exact(v);
                break;
            }
        }
        let strategy = match value {
            SolveValue::Exact(_) => self.principal_strategy(root),
            SolveValue::Unbounded(_) => BTreeMap::new(),
        };
        SolveResult {
            value,
            strategy,
            explored: self.memo.len(),
        }
    }

    fn principal_strategy(&self, root: &GameState) -> BTreeMap<StateKey, HostMove> {
        let mut strategy = BTreeMap::new();
        let mut stack = vec![root.clone()];
        while let Some(state) = stack.pop() {
            if self.rules.is_terminal(&state) {
                continue;
            }
            let key = state.key();
            if strategy.contains_key(&key) {
                continue;
            }
            let Some(&Entry::Exact(_, host_move)) = self.memo.get(&key) else {
                unreachable!("solved state without an exact entry: {state}");
            };
            for reply in self.rules.legal_agent_moves(&state, host_move) {
                stack.push(self.rules.apply_unchecked(&state, host_move, reply));
            }
            strategy.insert(key, host_move);
        }
        strategy
    }
}

/// Convenience wrapper over a fresh [`MinimaxSolver`].
pub fn minimax_solve(root: &GameState, rules: &VariantRules, depth_cap: u32) -> SolveResult {
    MinimaxSolver::new(*rules).solve(root, depth_cap)
}

/// Replays a solved strategy table.
pub struct StrategyHost {
    strategy: BTreeMap<StateKey, HostMove>,
}

impl StrategyHost {
    pub fn new(strategy: BTreeMap<StateKey, HostMove>) -> Self {
        StrategyHost { strategy }
    }
}

impl HostPolicy for StrategyHost {
    fn name(&self) -> String {
        "solver".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        _rules: &VariantRules,
        _rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        self.strategy
            .get(&state.key())
            .copied()
            .ok_or_else(|| GameError::MissingStrategy(state.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo tree search
// ---------------------------------------------------------------------------

/// How rollouts pick moves once they leave the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RolloutMode {
    /// Uniformly random legal moves for both seats.
    #[default]
    Uniform,
    /// Uniformly random for the planning seat, the opponent model for the
    /// other seat.
    OpponentModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MctsConfig {
    pub simulations: u32,
    pub exploration: f64,
    /// Maximum number of moves played out beyond the tree.
    pub rollout_depth: u32,
    /// A simulation ending after `d` moves is worth `discount^d` to the host.
    pub discount: f64,
    pub rollout: RolloutMode,
    /// Seed for [`mcts_decide`]; policy wrappers use the caller's stream.
    pub seed: u64,
}

impl Default for MctsConfig {
    fn default() -> Self {
        MctsConfig {
            simulations: 100,
            exploration: std::f64::consts::SQRT_2,
            rollout_depth: 50,
            discount: 0.99,
            rollout: RolloutMode::Uniform,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Host(HostMove),
    Agent(AgentMove),
}

/// Which seat is planning, together with the model of the other seat.
pub enum Planner<'a> {
    Host {
        opponent: &'a mut dyn AgentPolicy,
    },
    Agent {
        host_move: HostMove,
        opponent: &'a mut dyn HostPolicy,
    },
}

#[derive(Default)]
struct Node {
    visits: u32,
    /// `(move, visits, value sum from the planner's side, child node)`.
    edges: Vec<Edge>,
}

struct Edge {
    mv: Move,
    visits: u32,
    total: f64,
    child: Option<usize>,
}

/// One UCT decision.
///
/// The tree is open-loop: nodes are identified by the planner's move
/// sequence and the opponent model is re-sampled on every pass, so random
/// opponents are handled without chance nodes.
pub fn mcts_search(
    state: &GameState,
    planner: Planner<'_>,
    rules: &VariantRules,
    config: &MctsConfig,
    rng: &mut dyn RngCore,
) -> Result<Move> {
    if rules.is_terminal(state) {
        return Err(GameError::Terminal);
    }
    assert!(config.simulations >= 1 && config.exploration > 0.0 && config.rollout_depth >= 1);

    let (host_role, root_moves, mut opp_host, mut opp_agent, root_host_move) = match planner {
        Planner::Host { opponent } => {
            let moves: Vec<Move> = rules
                .legal_host_moves(state)?
                .into_iter()
                .map(Move::Host)
                .collect();
            (true, moves, None, Some(opponent), None)
        }
        Planner::Agent {
            host_move,
            opponent,
        } => {
            if !rules.is_legal_host_move(state, host_move) {
                return Err(GameError::IllegalMove(format!(
                    "host move {host_move} at {state}"
                )));
            }
            let moves: Vec<Move> = rules
                .legal_agent_moves(state, host_move)
                .into_iter()
                .map(Move::Agent)
                .collect();
            (false, moves, Some(opponent), None, Some(host_move))
        }
    };
    if root_moves.len() == 1 {
        return Ok(root_moves[0]);
    }

    let sign = if host_role { 1.0 } else { -1.0 };
    let mut arena: Vec<Node> = vec![Node::default()];

    for _ in 0..config.simulations {
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut node = 0usize;
        let mut cur = state.clone();
        let mut pending = root_host_move;
        let mut moves_played = 0u32;
        let outcome: Option<u32>;

        loop {
            let legal: Vec<Move> = if host_role {
                rules
                    .legal_host_moves(&cur)?
                    .into_iter()
                    .map(Move::Host)
                    .collect()
            } else {
                let hm = pending.expect("agent node has a pending host move");
                rules
                    .legal_agent_moves(&cur, hm)
                    .into_iter()
                    .map(Move::Agent)
                    .collect()
            };
            for mv in &legal {
                if !arena[node].edges.iter().any(|e| e.mv == *mv) {
                    arena[node].edges.push(Edge {
                        mv: *mv,
                        visits: 0,
                        total: 0.0,
                        child: None,
                    });
                }
            }
            let edge_ix = select_edge(&arena[node], &legal, config.exploration);
            path.push((node, edge_ix));
            let mv = arena[node].edges[edge_ix].mv;
            let fresh = arena[node].edges[edge_ix].visits == 0;

            // Planner move, then the opponent's answer.
            let next = match mv {
                Move::Host(hm) => {
                    let reply = opp_agent
                        .as_mut()
                        .expect("host planner")
                        .decide(&cur, hm, rules, rng)?;
                    rules.apply(&cur, hm, reply)?
                }
                Move::Agent(i) => rules.apply(&cur, pending.expect("pending"), i)?,
            };
            moves_played += 1;
            cur = next;
            if rules.is_terminal(&cur) {
                outcome = Some(moves_played);
                break;
            }
            if !host_role {
                pending = Some(
                    opp_host
                        .as_mut()
                        .expect("agent planner")
                        .decide(&cur, rules, rng)?,
                );
            }
            if fresh {
                outcome = rollout(
                    &cur,
                    pending,
                    rules,
                    config,
                    host_role,
                    opp_host.as_deref_mut(),
                    opp_agent.as_deref_mut(),
                    rng,
                )?
                .map(|d| d + moves_played);
                break;
            }
            node = match arena[node].edges[edge_ix].child {
                Some(c) => c,
                None => {
                    arena.push(Node::default());
                    let c = arena.len() - 1;
                    arena[node].edges[edge_ix].child = Some(c);
                    c
                }
            };
        }

        let host_value = outcome.map_or(0.0, |d| config.discount.powi(d as i32));
        let value = sign * host_value;
        for (n, e) in path {
            arena[n].visits += 1;
            let edge = &mut arena[n].edges[e];
            edge.visits += 1;
            edge.total += value;
        }
    }

    // Most visited; ties to the better mean, then to enumeration order.
    let root = &arena[0];
    let best = root_moves
        .iter()
        .filter_map(|mv| root.edges.iter().find(|e| e.mv == *mv))
        .fold(None::<&Edge>, |acc, e| match acc {
            None => Some(e),
            Some(b) => {
                let bm = mean(b);
                let em = mean(e);
                if e.visits > b.visits || (e.visits == b.visits && em > bm) {
                    Some(e)
                } else {
                    Some(b)
                }
            }
        })
        .expect("root has edges");
    Ok(best.mv)
}

fn mean(e: &Edge) -> f64 {
    if e.visits == 0 {
        f64::NEG_INFINITY
    } else {
        e.total / e.visits as f64
    }
}

fn select_edge(node: &Node, legal: &[Move], exploration: f64) -> usize {
    let candidates = node
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| legal.contains(&e.mv));
    let mut best: Option<(usize, f64)> = None;
    let ln_n = (node.visits.max(1) as f64).ln();
    for (ix, e) in candidates {
        if e.visits == 0 {
            return ix;
        }
        let score = e.total / e.visits as f64 + exploration * (ln_n / e.visits as f64).sqrt();
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((ix, score));
        }
    }
    best.expect("at least one legal edge").0
}

/// Plays out from a decision point; returns the number of further moves
/// until termination, or `None` if the depth cap is reached first.
#[allow(clippy::too_many_arguments)]
fn rollout<'h, 'a>(
    start: &GameState,
    pending: Option<HostMove>,
    rules: &VariantRules,
    config: &MctsConfig,
    host_role: bool,
    mut opp_host: Option<&mut (dyn HostPolicy + 'h)>,
    mut opp_agent: Option<&mut (dyn AgentPolicy + 'a)>,
    rng: &mut dyn RngCore,
) -> Result<Option<u32>> {
    let model = config.rollout == RolloutMode::OpponentModel;
    let mut cur = start.clone();
    let mut pending = pending;
    for played in 0..config.rollout_depth {
        let host_move = match pending.take() {
            Some(m) => m,
            None if model && !host_role => opp_host
                .as_deref_mut()
                .expect("agent planner")
                .decide(&cur, rules, rng)?,
            None => *rules
                .legal_host_moves(&cur)?
                .choose(rng)
                .expect("non-terminal"),
        };
        let reply = if model && host_role {
            opp_agent
                .as_deref_mut()
                .expect("host planner")
                .decide(&cur, host_move, rules, rng)?
        } else {
            let replies = rules.legal_agent_moves(&cur, host_move);
            replies[rng.gen_range(0..replies.len())]
        };
        cur = rules.apply(&cur, host_move, reply)?;
        if rules.is_terminal(&cur) {
            return Ok(Some(played + 1));
        }
    }
    Ok(None)
}

/// Plans one move for `role` with a private generator seeded from
/// `config.seed`.
pub fn mcts_decide(
    state: &GameState,
    planner: Planner<'_>,
    rules: &VariantRules,
    config: &MctsConfig,
) -> Result<Move> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    mcts_search(state, planner, rules, config, &mut rng)
}

/// UCT host planning against a model of the agent.
pub struct MctsHost {
    config: MctsConfig,
    opponent: Box<dyn AgentPolicy>,
}

impl MctsHost {
    pub fn new(config: MctsConfig, opponent: Box<dyn AgentPolicy>) -> Self {
        MctsHost { config, opponent }
    }
}

impl HostPolicy for MctsHost {
    fn name(&self) -> String {
        format!("mcts:{}", self.opponent.name())
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        let planner = Planner::Host {
            opponent: self.opponent.as_mut(),
        };
        match mcts_search(state, planner, rules, &self.config, rng)? {
            Move::Host(m) => Ok(m),
            Move::Agent(_) => unreachable!("host planner returned an agent move"),
        }
    }
}

/// UCT agent planning against a model of the host.
pub struct MctsAgent {
    config: MctsConfig,
    opponent: Box<dyn HostPolicy>,
}

impl MctsAgent {
    pub fn new(config: MctsConfig, opponent: Box<dyn HostPolicy>) -> Self {
        MctsAgent { config, opponent }
    }
}

impl AgentPolicy for MctsAgent {
    fn name(&self) -> String {
        format!("mcts:{}", self.opponent.name())
    }

    fn decide(
        &mut self,
        state: &GameState,
        host_move: HostMove,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<AgentMove> {
        let planner = Planner::Agent {
            host_move,
            opponent: self.opponent.as_mut(),
        };
        match mcts_search(state, planner, rules, &self.config, rng)? {
            Move::Agent(i) => Ok(i),
            Move::Host(_) => unreachable!("agent planner returned a host move"),
        }
    }
}
