//! Host and agent strategies behind one interface.
//!
//! Search, evaluation, the interactive session and external processes all
//! drive games through [`HostPolicy`] and [`AgentPolicy`]. Every built-in
//! policy only ever returns legal moves; the engine re-checks anyway.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GameError, Result};
use crate::game::{AgentMove, EpisodeStep, GameState, HostMove, VariantRules};
use crate::geometry::{
    characteristic_vector, minimal_hitting_sets, newton_vertices, CoordinateSubset,
};
use crate::search::{MctsAgent, MctsConfig, MctsHost, MinimaxSolver, RolloutMode};
use crate::wire::{ExternalAgent, ExternalHost, ExternalOptions};

pub trait HostPolicy: Send {
    fn name(&self) -> String;
    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<HostMove>;
}

pub trait AgentPolicy: Send {
    fn name(&self) -> String;
    fn decide(
        &mut self,
        state: &GameState,
        host_move: HostMove,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<AgentMove>;
}

// ---------------------------------------------------------------------------
// Host strategies
// ---------------------------------------------------------------------------

/// The full coordinate set, or the lexicographically first largest legal
/// subset when the full set is illegal.
pub fn choose_all_host(state: &GameState, rules: &VariantRules) -> Result<HostMove> {
    let full = CoordinateSubset::full(state.dim());
    if rules.is_terminal(state) {
        return Err(GameError::Terminal);
    }
    if rules.is_legal_host_move(state, full) {
        return Ok(full);
    }
    let moves = rules.legal_host_moves(state)?;
    let largest = moves
        .iter()
        .map(|m| m.len())
        .max()
        .ok_or_else(no_legal_move(state))?;
    Ok(*moves.iter().find(|m| m.len() == largest).expect("nonempty"))
}

/// Pairs a minimal and a maximal component of the characteristic vector,
/// lowest index first on ties.
pub fn zeillinger_host(state: &GameState, rules: &VariantRules) -> Result<HostMove> {
    if rules.is_terminal(state) {
        return Err(GameError::Terminal);
    }
    let pair = match characteristic_vector(&state.config) {
        Some(w) => {
            let min = w.iter().min().expect("dim >= 2");
            let max = w.iter().max().expect("dim >= 2");
            let k = w.iter().position(|v| v == min).expect("present");
            let l = w.iter().position(|v| v == max).expect("present");
            CoordinateSubset::from_indices([k, l])?
        }
        // Only reachable from unpruned input with a single vertex.
        None => CoordinateSubset::from_indices([0, 1])?,
    };
    if rules.is_legal_host_move(state, pair) {
        return Ok(pair);
    }
    // Sum-legality can rule the pair out in the polyhedra and Thom games.
    let moves = rules.legal_host_moves(state)?;
    moves
        .iter()
        .copied()
        .find(|m| m.len() == 2)
        .or_else(|| moves.first().copied())
        .ok_or_else(no_legal_move(state))
}

/// The maximal hitting set: every coordinate that is positive on some
/// Newton vertex, padded to two elements when necessary.
pub fn spivakovsky_style_host(state: &GameState, rules: &VariantRules) -> Result<HostMove> {
    if rules.is_terminal(state) {
        return Err(GameError::Terminal);
    }
    let vertices = newton_vertices(&state.config);
    if vertices.points().iter().any(|p| p.is_origin()) {
        return Err(GameError::NoHittingSet);
    }
    let mask = vertices.points().iter().fold(0u32, |m, p| m | p.support());
    let mut subset = CoordinateSubset::from_mask(mask).ok_or(GameError::NoHittingSet)?;
    let mut next = 0;
    while subset.len() < 2 {
        if !subset.contains(next) {
            subset = subset.with(next);
        }
        next += 1;
    }
    if rules.is_legal_host_move(state, subset) {
        Ok(subset)
    } else {
        choose_all_host(state, rules)
    }
}

/// A uniformly random hitting set of minimum size; a single coordinate is
/// padded with a uniformly random second one.
pub fn random_hitting_host(
    state: &GameState,
    rules: &VariantRules,
    rng: &mut dyn RngCore,
) -> Result<HostMove> {
    if rules.is_terminal(state) {
        return Err(GameError::Terminal);
    }
    let sets = minimal_hitting_sets(&state.config)?;
    let mut subset = *sets.choose(rng).expect("at least one hitting set");
    if subset.len() < 2 {
        let others: Vec<usize> = (0..state.dim()).filter(|&j| !subset.contains(j)).collect();
        subset = subset.with(*others.choose(rng).expect("dim >= 2"));
    }
    if rules.is_legal_host_move(state, subset) {
        Ok(subset)
    } else {
        choose_all_host(state, rules)
    }
}

fn no_legal_move(state: &GameState) -> impl FnOnce() -> GameError + '_ {
    move || GameError::IllegalMove(format!("no legal host move at {state}"))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ChooseAll;

impl HostPolicy for ChooseAll {
    fn name(&self) -> String {
        "choose-all".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        _rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        choose_all_host(state, rules)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Zeillinger;

impl HostPolicy for Zeillinger {
    fn name(&self) -> String {
        "zeillinger".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        _rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        zeillinger_host(state, rules)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Spivakovsky;

impl HostPolicy for Spivakovsky {
    fn name(&self) -> String {
        "spivakovsky".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        _rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        spivakovsky_style_host(state, rules)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomHitting;

impl HostPolicy for RandomHitting {
    fn name(&self) -> String {
        "random-hitting".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        random_hitting_host(state, rules, rng)
    }
}

/// Uniform over all legal host moves. The default rollout host.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomHost;

impl HostPolicy for RandomHost {
    fn name(&self) -> String {
        "random".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<HostMove> {
        let moves = rules.legal_host_moves(state)?;
        moves.choose(rng).copied().ok_or_else(no_legal_move(state))
    }
}

// ---------------------------------------------------------------------------
// Agent strategies
// ---------------------------------------------------------------------------

pub fn choose_first_agent(
    state: &GameState,
    host_move: HostMove,
    rules: &VariantRules,
) -> AgentMove {
    rules.legal_agent_moves(state, host_move)[0]
}

pub fn choose_last_agent(
    state: &GameState,
    host_move: HostMove,
    rules: &VariantRules,
) -> AgentMove {
    *rules
        .legal_agent_moves(state, host_move)
        .last()
        .expect("nonempty host move")
}

pub fn random_agent(
    state: &GameState,
    host_move: HostMove,
    rules: &VariantRules,
    rng: &mut dyn RngCore,
) -> AgentMove {
    let moves = rules.legal_agent_moves(state, host_move);
    moves[rng.gen_range(0..moves.len())]
}

/// The reply maximizing the minimax survival value truncated at `depth`,
/// lowest index on ties.
pub fn lookahead_agent(
    state: &GameState,
    host_move: HostMove,
    rules: &VariantRules,
    depth: u32,
    solver: &mut MinimaxSolver,
) -> AgentMove {
    assert!(depth >= 1, "lookahead depth must be positive");
    let mut best: Option<(u32, AgentMove)> = None;
    for i in rules.legal_agent_moves(state, host_move) {
        let child = rules.apply_unchecked(state, host_move, i);
        let score = solver.bounded_value(&child, depth - 1).unwrap_or(depth);
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, i));
        }
    }
    best.expect("nonempty host move").1
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ChooseFirst;

impl AgentPolicy for ChooseFirst {
    fn name(&self) -> String {
        "choose-first".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        m: HostMove,
        rules: &VariantRules,
        _: &mut dyn RngCore,
    ) -> Result<AgentMove> {
        Ok(choose_first_agent(state, m, rules))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ChooseLast;

impl AgentPolicy for ChooseLast {
    fn name(&self) -> String {
        "choose-last".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        m: HostMove,
        rules: &VariantRules,
        _: &mut dyn RngCore,
    ) -> Result<AgentMove> {
        Ok(choose_last_agent(state, m, rules))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomAgent;

impl AgentPolicy for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn decide(
        &mut self,
        state: &GameState,
        m: HostMove,
        rules: &VariantRules,
        rng: &mut dyn RngCore,
    ) -> Result<AgentMove> {
        Ok(random_agent(state, m, rules, rng))
    }
}

pub const DEFAULT_LOOKAHEAD_DEPTH: u32 = 4;

/// Keeps its transposition table between decisions; values do not depend on
/// the path, so entries stay valid for the whole run.
pub struct Lookahead {
    depth: u32,
    solver: Option<MinimaxSolver>,
}

const LOOKAHEAD_MEMO_LIMIT: usize = 1 << 20;

impl Lookahead {
    pub fn new(depth: u32) -> Self {
        assert!(depth >= 1, "lookahead depth must be positive");
        Lookahead {
            depth,
            solver: None,
        }
    }
}

impl AgentPolicy for Lookahead {
    fn name(&self) -> String {
        format!("lookahead:{}", self.depth)
    }

    fn decide(
        &mut self,
        state: &GameState,
        m: HostMove,
        rules: &VariantRules,
        _: &mut dyn RngCore,
    ) -> Result<AgentMove> {
        let solver = match &mut self.solver {
            Some(s) if s.rules() == rules && s.memo_len() < LOOKAHEAD_MEMO_LIMIT => s,
            slot => slot.insert(MinimaxSolver::new(*rules)),
        };
        Ok(lookahead_agent(state, m, rules, self.depth, solver))
    }
}

// ---------------------------------------------------------------------------
// Episodes
// ---------------------------------------------------------------------------

/// Independent random streams for the two seats.
pub struct SeatRngs {
    pub host: ChaCha8Rng,
    pub agent: ChaCha8Rng,
}

impl SeatRngs {
    pub fn from_seed(seed: u64) -> Self {
        SeatRngs {
            host: ChaCha8Rng::seed_from_u64(derive_seed(seed, 1)),
            agent: ChaCha8Rng::seed_from_u64(derive_seed(seed, 2)),
        }
    }
}

/// SplitMix64-style mixing for deriving independent child seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Episode {
    pub steps: Vec<EpisodeStep>,
    pub terminated: bool,
}

/// Plays host against agent from `start` for at most `max_steps` moves.
pub fn play_episode(
    rules: &VariantRules,
    start: GameState,
    host: &mut dyn HostPolicy,
    agent: &mut dyn AgentPolicy,
    rngs: &mut SeatRngs,
    max_steps: u64,
) -> Result<Episode> {
    let mut steps = Vec::new();
    let mut state = start;
    while !rules.is_terminal(&state) && (steps.len() as u64) < max_steps {
        let host_move = host.decide(&state, rules, &mut rngs.host)?;
        let agent_move = agent.decide(&state, host_move, rules, &mut rngs.agent)?;
        let step = rules.step(&state, host_move, agent_move)?;
        state = step.after.clone();
        steps.push(step);
    }
    let terminated = rules.is_terminal(&state);
    Ok(Episode { steps, terminated })
}

// ---------------------------------------------------------------------------
// Named policies
// ---------------------------------------------------------------------------

/// A host policy by name, buildable any number of times (one instance per
/// worker).
#[derive(Debug, Clone, PartialEq)]
pub enum HostSpec {
    ChooseAll,
    Zeillinger,
    Spivakovsky,
    RandomHitting,
    Random,
    Mcts {
        config: MctsConfig,
        opponent: AgentSpec,
    },
    External(String),
}

/// An agent policy by name.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentSpec {
    ChooseFirst,
    ChooseLast,
    Random,
    Lookahead(u32),
    Mcts {
        config: MctsConfig,
        opponent: Box<HostSpec>,
    },
    External(String),
}

impl HostSpec {
    pub fn build(&self, rules: &VariantRules) -> Result<Box<dyn HostPolicy>> {
        Ok(match self {
            HostSpec::ChooseAll => Box::new(ChooseAll),
            HostSpec::Zeillinger => Box::new(Zeillinger),
            HostSpec::Spivakovsky => Box::new(Spivakovsky),
            HostSpec::RandomHitting => Box::new(RandomHitting),
            HostSpec::Random => Box::new(RandomHost),
            HostSpec::Mcts { config, opponent } => {
                Box::new(MctsHost::new(config.clone(), opponent.build(rules)?))
            }
            HostSpec::External(cmd) => Box::new(ExternalHost::spawn(
                cmd,
                rules.variant,
                ExternalOptions::default(),
            )?),
        })
    }
}

impl AgentSpec {
    pub fn build(&self, rules: &VariantRules) -> Result<Box<dyn AgentPolicy>> {
        Ok(match self {
            AgentSpec::ChooseFirst => Box::new(ChooseFirst),
            AgentSpec::ChooseLast => Box::new(ChooseLast),
            AgentSpec::Random => Box::new(RandomAgent),
            AgentSpec::Lookahead(d) => Box::new(Lookahead::new(*d)),
            AgentSpec::Mcts { config, opponent } => {
                Box::new(MctsAgent::new(config.clone(), opponent.build(rules)?))
            }
            AgentSpec::External(cmd) => Box::new(ExternalAgent::spawn(
                cmd,
                rules.variant,
                ExternalOptions::default(),
            )?),
        })
    }
}

impl fmt::Display for HostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HostSpec::ChooseAll => f.write_str("choose-all"),
            HostSpec::Zeillinger => f.write_str("zeillinger"),
            HostSpec::Spivakovsky => f.write_str("spivakovsky"),
            HostSpec::RandomHitting => f.write_str("random-hitting"),
            HostSpec::Random => f.write_str("random"),
            HostSpec::Mcts { opponent, .. } => write!(f, "mcts:{opponent}"),
            HostSpec::External(cmd) => write!(f, "ext:{cmd}"),
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::ChooseFirst => f.write_str("choose-first"),
            AgentSpec::ChooseLast => f.write_str("choose-last"),
            AgentSpec::Random => f.write_str("random"),
            AgentSpec::Lookahead(d) => write!(f, "lookahead:{d}"),
            AgentSpec::Mcts { opponent, .. } => write!(f, "mcts:{opponent}"),
            AgentSpec::External(cmd) => write!(f, "ext:{cmd}"),
        }
    }
}

/// Names: `choose-all`, `zeillinger`, `spivakovsky`, `random-hitting`,
/// `random`, `mcts[:<agent model>]`, `ext:<command>`.
impl FromStr for HostSpec {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(cmd) = s.strip_prefix("ext:") {
            return Ok(HostSpec::External(cmd.to_string()));
        }
        let (head, arg) = split_arg(s);
        Ok(match (head, arg) {
            ("choose-all", None) => HostSpec::ChooseAll,
            ("zeillinger", None) => HostSpec::Zeillinger,
            ("spivakovsky", None) => HostSpec::Spivakovsky,
            ("random-hitting", None) => HostSpec::RandomHitting,
            ("random", None) => HostSpec::Random,
            ("mcts", model) => HostSpec::Mcts {
                config: mcts_config_for(model),
                opponent: model
                    .map(str::parse)
                    .transpose()?
                    .unwrap_or(AgentSpec::Random),
            },
            _ => {
                return Err(GameError::InvalidConfiguration(format!(
                    "unknown host policy `{s}`"
                )))
            }
        })
    }
}

/// Names: `choose-first`, `choose-last`, `random`, `lookahead[:<depth>]`,
/// `mcts[:<host model>]`, `ext:<command>`.
impl FromStr for AgentSpec {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(cmd) = s.strip_prefix("ext:") {
            return Ok(AgentSpec::External(cmd.to_string()));
        }
        let (head, arg) = split_arg(s);
        Ok(match (head, arg) {
            ("choose-first", None) => AgentSpec::ChooseFirst,
            ("choose-last", None) => AgentSpec::ChooseLast,
            ("random", None) => AgentSpec::Random,
            ("lookahead", None) => AgentSpec::Lookahead(DEFAULT_LOOKAHEAD_DEPTH),
            ("lookahead", Some(d)) => match d.parse::<u32>() {
                Ok(d) if d >= 1 => AgentSpec::Lookahead(d),
                _ => {
                    return Err(GameError::InvalidConfiguration(format!(
                        "bad lookahead depth `{d}`"
                    )))
                }
            },
            ("mcts", model) => AgentSpec::Mcts {
                config: mcts_config_for(model),
                opponent: Box::new(
                    model
                        .map(str::parse)
                        .transpose()?
                        .unwrap_or(HostSpec::Random),
                ),
            },
            _ => {
                return Err(GameError::InvalidConfiguration(format!(
                    "unknown agent policy `{s}`"
                )))
            }
        })
    }
}

// A named opponent model also drives the opponent's rollout moves; without
// one both seats roll out uniformly.
fn mcts_config_for(model: Option<&str>) -> MctsConfig {
    let rollout = if model.is_some() {
        RolloutMode::OpponentModel
    } else {
        RolloutMode::Uniform
    };
    MctsConfig {
        rollout,
        ..MctsConfig::default()
    }
}

fn split_arg(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (s, None),
    }
}
