//! Game variants as deterministic transition systems.
//!
//! A move is a pair: the host picks a coordinate subset `I` with `|I| >= 2`,
//! the agent picks `i` in `I`. Every point then has its `i`-th coordinate
//! replaced by the sum of its coordinates over `I` (minus one in the
//! polyhedra variant), after which the variant prunes and translates the set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::geometry::{
    diagonal_shift, newton_vertices, remove_dominated, shift_to_axes, subsets_of_size,
    CoordinateSubset, Point, PointConfiguration,
};
use crate::scalar::Scalar;

pub type HostMove = CoordinateSubset;
pub type AgentMove = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Basic,
    BasicShifted,
    Hauser,
    Polyhedra,
    Thom,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Basic,
        Variant::BasicShifted,
        Variant::Hauser,
        Variant::Polyhedra,
        Variant::Thom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::BasicShifted => "basic-shifted",
            Variant::Hauser => "hauser",
            Variant::Polyhedra => "polyhedra",
            Variant::Thom => "thom",
        }
    }

    pub fn rules(self) -> VariantRules {
        VariantRules::for_variant(self)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| GameError::InvalidConfiguration(format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    /// Remove points with another point componentwise below them.
    Domination,
    /// Keep only vertices of the Newton polyhedron.
    HullVertices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftMode {
    None,
    /// Subtract the componentwise minimum.
    Axes,
    /// Subtract the largest integer multiple of `(1, .., 1)`.
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalRule {
    Singleton,
    SomePointSumAtMostOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HostLegality {
    SizeAtLeastTwo,
    /// Additionally every point must have coordinate sum at least one over `I`.
    SizeAtLeastTwoAndSumAtLeastOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentLegality {
    AnyInSubset,
    /// Only coordinates of minimal weight within `I`.
    WeightMinimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Integer,
    Rational,
}

/// The full rule set of one game variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariantRules {
    pub variant: Variant,
    pub transform_offset: i64,
    pub pruning: Pruning,
    pub shift: ShiftMode,
    pub terminal: TerminalRule,
    pub host_legality: HostLegality,
    pub agent_legality: AgentLegality,
    pub scalar_field: ScalarField,
    pub uses_weights: bool,
}

impl VariantRules {
    pub fn for_variant(variant: Variant) -> Self {
        let basic = VariantRules {
            variant,
            transform_offset: 0,
            pruning: Pruning::Domination,
            shift: ShiftMode::None,
            terminal: TerminalRule::Singleton,
            host_legality: HostLegality::SizeAtLeastTwo,
            agent_legality: AgentLegality::AnyInSubset,
            scalar_field: ScalarField::Integer,
            uses_weights: false,
        };
        match variant {
            Variant::Basic => basic,
            Variant::BasicShifted => VariantRules {
                shift: ShiftMode::Axes,
                ..basic
            },
            Variant::Hauser => VariantRules {
                pruning: Pruning::HullVertices,
                ..basic
            },
            Variant::Polyhedra => VariantRules {
                transform_offset: -1,
                pruning: Pruning::HullVertices,
                terminal: TerminalRule::SomePointSumAtMostOne,
                host_legality: HostLegality::SizeAtLeastTwoAndSumAtLeastOne,
                scalar_field: ScalarField::Rational,
                ..basic
            },
            Variant::Thom => VariantRules {
                pruning: Pruning::HullVertices,
                shift: ShiftMode::Diagonal,
                host_legality: HostLegality::SizeAtLeastTwoAndSumAtLeastOne,
                agent_legality: AgentLegality::WeightMinimal,
                uses_weights: true,
                ..basic
            },
        }
    }

    pub fn basic() -> Self {
        Self::for_variant(Variant::Basic)
    }

    pub fn basic_shifted() -> Self {
        Self::for_variant(Variant::BasicShifted)
    }

    pub fn hauser() -> Self {
        Self::for_variant(Variant::Hauser)
    }

    pub fn polyhedra() -> Self {
        Self::for_variant(Variant::Polyhedra)
    }

    pub fn thom() -> Self {
        Self::for_variant(Variant::Thom)
    }
}

/// A position: the point set, the Thom weights if any, and the number of
/// moves played so far.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    pub config: PointConfiguration,
    pub weights: Option<Vec<u64>>,
    pub step: u64,
}

/// Memoization key: a state without its step counter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateKey {
    pub config: PointConfiguration,
    pub weights: Option<Vec<u64>>,
}

impl GameState {
    pub fn new(config: PointConfiguration) -> Self {
        GameState {
            config,
            weights: None,
            step: 0,
        }
    }

    pub fn with_weights(config: PointConfiguration, weights: Vec<u64>) -> Self {
        GameState {
            config,
            weights: Some(weights),
            step: 0,
        }
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Ok(GameState::new(PointConfiguration::from_i64(rows)?))
    }

    pub fn dim(&self) -> usize {
        self.config.dim()
    }

    pub fn key(&self) -> StateKey {
        StateKey {
            config: self.config.clone(),
            weights: self.weights.clone(),
        }
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.config)?;
        if let Some(w) = &self.weights {
            write!(f, " w={w:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} @{}", self.step)
    }
}

/// One full move and its rewards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeStep {
    pub before: GameState,
    pub host_move: HostMove,
    pub agent_move: AgentMove,
    pub after: GameState,
    /// `-1` when the move ends the game, else `0`.
    pub agent_reward: i8,
    /// `+1` when the move ends the game, else `0`.
    pub host_reward: i8,
    pub terminal: bool,
}

/// `T_{I,i}` with an additive offset on the replaced coordinate, no pruning.
pub fn transform(
    config: &PointConfiguration,
    subset: HostMove,
    index: AgentMove,
    offset: i64,
) -> PointConfiguration {
    let offset = Scalar::from(offset);
    let points = config
        .points()
        .iter()
        .map(|p| {
            let total = subset
                .indices()
                .fold(offset.clone(), |acc, k| acc.add(&p.coords()[k]));
            let mut q = p.clone();
            q.coords_mut()[index] = total;
            q
        })
        .collect();
    PointConfiguration::canonical(config.dim(), points)
}

/// True iff some point has coordinate sum at most one.
///
/// Marks the earliest smooth charts in exported trees; it only ends the game
/// in the polyhedra variant.
pub fn is_smooth_marker(state: &GameState) -> bool {
    state.config.points().iter().any(|p| p.sum() <= Scalar::ONE)
}

impl VariantRules {
    /// Checks that `state` is well formed for this variant.
    pub fn validate(&self, state: &GameState) -> Result<()> {
        match (&state.weights, self.uses_weights) {
            (Some(w), true) if w.len() != state.dim() => {
                return Err(GameError::InvalidConfiguration(format!(
                    "weight vector has length {} but dimension is {}",
                    w.len(),
                    state.dim()
                )))
            }
            (None, true) => {
                return Err(GameError::InvalidConfiguration(
                    "variant requires weights".into(),
                ))
            }
            (Some(_), false) => {
                return Err(GameError::InvalidConfiguration(format!(
                    "variant {} takes no weights",
                    self.variant
                )))
            }
            _ => {}
        }
        if self.scalar_field == ScalarField::Integer && !state.config.is_integral() {
            return Err(GameError::InvalidConfiguration(format!(
                "variant {} requires integer coordinates",
                self.variant
            )));
        }
        Ok(())
    }

    /// Validates a starting position and brings it into the variant's normal
    /// form (pruned and translated). Thom states without weights get
    /// `(1, .., 1)`.
    pub fn initial_state(
        &self,
        config: PointConfiguration,
        weights: Option<Vec<u64>>,
    ) -> Result<GameState> {
        let weights = match weights {
            None if self.uses_weights => Some(vec![1; config.dim()]),
            w => w,
        };
        let state = GameState {
            config,
            weights,
            step: 0,
        };
        self.validate(&state)?;
        let config = self.normalize(&state.config);
        Ok(GameState { config, ..state })
    }

    /// Pruning followed by the translation step.
    pub fn normalize(&self, config: &PointConfiguration) -> PointConfiguration {
        let pruned = match self.pruning {
            Pruning::Domination => remove_dominated(config),
            Pruning::HullVertices => newton_vertices(config),
        };
        match self.shift {
            ShiftMode::None => pruned,
            ShiftMode::Axes => shift_to_axes(&pruned),
            ShiftMode::Diagonal => diagonal_shift(&pruned),
        }
    }

    pub fn is_terminal(&self, state: &GameState) -> bool {
        match self.terminal {
            TerminalRule::Singleton => state.config.is_singleton(),
            TerminalRule::SomePointSumAtMostOne => is_smooth_marker(state),
        }
    }

    pub fn is_legal_host_move(&self, state: &GameState, subset: HostMove) -> bool {
        if subset.len() < 2 || !subset.fits(state.dim()) {
            return false;
        }
        match self.host_legality {
            HostLegality::SizeAtLeastTwo => true,
            HostLegality::SizeAtLeastTwoAndSumAtLeastOne => state.config.points().iter().all(|p| {
                subset
                    .indices()
                    .fold(Scalar::ZERO, |acc, k| acc.add(&p.coords()[k]))
                    >= Scalar::ONE
            }),
        }
    }

    /// Every legal host move, ordered by size and then lexicographically.
    pub fn legal_host_moves(&self, state: &GameState) -> Result<Vec<HostMove>> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let n = state.dim();
        Ok((2..=n)
            .flat_map(|k| subsets_of_size(n, k))
            .filter(|&s| self.is_legal_host_move(state, s))
            .collect())
    }

    /// Agent replies to `subset`, in increasing order.
    pub fn legal_agent_moves(&self, state: &GameState, subset: HostMove) -> Vec<AgentMove> {
        match (self.agent_legality, &state.weights) {
            (AgentLegality::WeightMinimal, Some(w)) => {
                let min = subset.indices().map(|i| w[i]).min().unwrap_or(0);
                subset.indices().filter(|&i| w[i] == min).collect()
            }
            _ => subset.indices().collect(),
        }
    }

    pub fn is_legal_agent_move(
        &self,
        state: &GameState,
        subset: HostMove,
        index: AgentMove,
    ) -> bool {
        subset.contains(index) && self.legal_agent_moves(state, subset).contains(&index)
    }

    /// Plays `(subset, index)` from `state`.
    pub fn apply(
        &self,
        state: &GameState,
        subset: HostMove,
        index: AgentMove,
    ) -> Result<GameState> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        if !self.is_legal_host_move(state, subset) {
            return Err(GameError::IllegalMove(format!(
                "host move {subset} at {state}"
            )));
        }
        if !self.is_legal_agent_move(state, subset, index) {
            return Err(GameError::IllegalMove(format!(
                "agent move {index} for {subset} at {state}"
            )));
        }
        Ok(self.apply_unchecked(state, subset, index))
    }

    /// [`apply`](Self::apply) without legality checks; for search inner loops
    /// that only ever generate legal moves.
    pub fn apply_unchecked(
        &self,
        state: &GameState,
        subset: HostMove,
        index: AgentMove,
    ) -> GameState {
        let moved = transform(&state.config, subset, index, self.transform_offset);
        let config = self.normalize(&moved);
        let weights = state.weights.as_ref().map(|w| {
            let wi = w[index];
            w.iter()
                .enumerate()
                .map(|(j, &wj)| {
                    if j != index && subset.contains(j) {
                        wj - wi
                    } else {
                        wj
                    }
                })
                .collect()
        });
        GameState {
            config,
            weights,
            step: state.step + 1,
        }
    }

    /// [`apply`](Self::apply) plus reward bookkeeping.
    pub fn step(
        &self,
        state: &GameState,
        subset: HostMove,
        index: AgentMove,
    ) -> Result<EpisodeStep> {
        let after = self.apply(state, subset, index)?;
        let terminal = self.is_terminal(&after);
        Ok(EpisodeStep {
            before: state.clone(),
            host_move: subset,
            agent_move: index,
            after,
            agent_reward: if terminal { -1 } else { 0 },
            host_reward: if terminal { 1 } else { 0 },
            terminal,
        })
    }
}

/// Convenience for tests and examples: a point set from rational literals.
pub fn rational_config(rows: &[&[(i64, i64)]]) -> Result<PointConfiguration> {
    PointConfiguration::new(
        rows.iter()
            .map(|r| Point::new(r.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect()))
            .collect(),
    )
}
