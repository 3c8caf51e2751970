//! The games-per-step ratio ρ: how many games a host/agent pair completes
//! per move when play restarts from a fresh random state after every end.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GameError, Result};
use crate::game::{GameState, VariantRules};
use crate::geometry::{Point, PointConfiguration};
use crate::policy::{derive_seed, AgentPolicy, AgentSpec, HostPolicy, HostSpec, SeatRngs};

pub const DEFAULT_GAME_CAP: u64 = 500;

/// Where each game starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StartSource {
    /// `k` points with coordinates uniform in `1..=N`, normalized; redrawn
    /// while fewer than two points survive.
    Sampled,
    /// The same position every time.
    Fixed(GameState),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    pub dim: usize,
    pub points: usize,
    pub bound: i64,
    pub steps: u64,
    pub repetitions: u32,
    pub game_cap: u64,
    pub seed: u64,
    pub rules: VariantRules,
    pub start: StartSource,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            dim: 3,
            points: 3,
            bound: 10,
            steps: 1000,
            repetitions: 30,
            game_cap: DEFAULT_GAME_CAP,
            seed: 0,
            rules: VariantRules::basic_shifted(),
            start: StartSource::Sampled,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GameError::InvalidConfiguration(m));
        if self.steps == 0 || self.repetitions == 0 || self.game_cap == 0 {
            return bad("steps, repetitions and game cap must be positive".into());
        }
        match &self.start {
            StartSource::Sampled => {
                if !(2..=crate::geometry::MAX_DIM).contains(&self.dim) {
                    return bad(format!("dimension {} out of range", self.dim));
                }
                // With one point, or with every coordinate forced to 1, no
                // sample survives normalization with two points.
                if self.points < 2 || self.bound < 2 {
                    return bad(format!(
                        "sampling needs k >= 2 and N >= 2 (got k={}, N={})",
                        self.points, self.bound
                    ));
                }
            }
            StartSource::Fixed(s) => {
                self.rules.validate(s)?;
                if self.rules.is_terminal(s) {
                    return bad("fixed start is already terminal".into());
                }
            }
        }
        Ok(())
    }
}

/// Draws a non-terminal starting position.
pub fn sample_initial_state(
    rules: &VariantRules,
    dim: usize,
    points: usize,
    bound: i64,
    rng: &mut dyn RngCore,
) -> GameState {
    loop {
        let pts: Vec<Point> = (0..points)
            .map(|_| {
                Point::from_i64(
                    &(0..dim)
                        .map(|_| rng.gen_range(1..=bound))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let config = PointConfiguration::new(pts).expect("sampled coordinates are valid");
        let state = rules
            .initial_state(config, None)
            .expect("sampled states are valid");
        if state.config.len() >= 2 && !rules.is_terminal(&state) {
            return state;
        }
    }
}

/// Outcome of one `m`-step sequence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequenceOutcome {
    pub completed: u64,
    pub capped: u64,
    pub lengths: BTreeMap<u64, u64>,
}

/// Plays `config.steps` moves with restarts. Randomness comes from `seed`
/// alone.
pub fn run_sequence(
    host: &mut dyn HostPolicy,
    agent: &mut dyn AgentPolicy,
    config: &EvalConfig,
    seed: u64,
) -> Result<SequenceOutcome> {
    let rules = &config.rules;
    let mut seats = SeatRngs::from_seed(seed);
    let mut sampler = ChaCha8Rng::seed_from_u64(derive_seed(seed, 3));
    let draw = |sampler: &mut ChaCha8Rng| match &config.start {
        StartSource::Sampled => {
            sample_initial_state(rules, config.dim, config.points, config.bound, sampler)
        }
        StartSource::Fixed(s) => s.clone(),
    };
    let mut out = SequenceOutcome::default();
    let mut state = draw(&mut sampler);
    let mut length = 0u64;
    for _ in 0..config.steps {
        let host_move = host.decide(&state, rules, &mut seats.host)?;
        let agent_move = agent.decide(&state, host_move, rules, &mut seats.agent)?;
        state = rules.apply(&state, host_move, agent_move)?;
        length += 1;
        if rules.is_terminal(&state) {
            out.completed += 1;
            *out.lengths.entry(length).or_default() += 1;
            state = draw(&mut sampler);
            length = 0;
        } else if length == config.game_cap {
            out.capped += 1;
            state = draw(&mut sampler);
            length = 0;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub host: String,
    pub agent: String,
    pub rho: f64,
    /// Standard error of the mean over repetitions.
    pub stderr: f64,
    /// Completed games over all repetitions.
    pub games: u64,
    pub capped: u64,
    pub per_repetition: Vec<f64>,
    /// Game length -> number of completed games.
    pub lengths: BTreeMap<u64, u64>,
}

impl EvalReport {
    pub fn mean_game_length(&self) -> Option<f64> {
        let total: u64 = self.lengths.values().sum();
        (total > 0).then(|| {
            self.lengths
                .iter()
                .map(|(l, c)| (l * c) as f64)
                .sum::<f64>()
                / total as f64
        })
    }
}

/// Estimates ρ with policies built fresh for every repetition.
///
/// Repetition `r` uses seed `derive_seed(config.seed, r)`; repetitions run
/// in parallel and are reduced in index order, so the report is identical
/// for any thread count.
pub fn rho_estimate_with<H, A>(
    make_host: H,
    make_agent: A,
    config: &EvalConfig,
) -> Result<EvalReport>
where
    H: Fn() -> Result<Box<dyn HostPolicy>> + Sync,
    A: Fn() -> Result<Box<dyn AgentPolicy>> + Sync,
{
    config.validate()?;
    let names = (make_host()?.name(), make_agent()?.name());
    let outcomes: Vec<SequenceOutcome> = (0..config.repetitions)
        .into_par_iter()
        .map(|r| {
            let mut host = make_host()?;
            let mut agent = make_agent()?;
            run_sequence(
                host.as_mut(),
                agent.as_mut(),
                config,
                derive_seed(config.seed, r as u64),
            )
        })
        .collect::<Result<_>>()?;
    Ok(summarize(names, &outcomes, config.steps))
}

pub fn rho_estimate(host: &HostSpec, agent: &AgentSpec, config: &EvalConfig) -> Result<EvalReport> {
    let rules = config.rules;
    rho_estimate_with(|| host.build(&rules), || agent.build(&rules), config)
}

fn summarize(
    (host, agent): (String, String),
    outcomes: &[SequenceOutcome],
    steps: u64,
) -> EvalReport {
    let per_repetition: Vec<f64> = outcomes
        .iter()
        .map(|o| o.completed as f64 / steps as f64)
        .collect();
    let n = per_repetition.len() as f64;
    // The mean of g/m, divided once so that equal repetitions stay exact.
    let games: u64 = outcomes.iter().map(|o| o.completed).sum();
    let rho = games as f64 / (n * steps as f64);
    let stderr = if per_repetition.len() > 1 {
        let var = per_repetition
            .iter()
            .map(|x| (x - rho).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let mut lengths = BTreeMap::new();
    for o in outcomes {
        for (l, c) in &o.lengths {
            *lengths.entry(*l).or_default() += c;
        }
    }
    EvalReport {
        host,
        agent,
        rho,
        stderr,
        games,
        capped: outcomes.iter().map(|o| o.capped).sum(),
        per_repetition,
        lengths,
    }
}

/// Every host against every agent, row-major.
///
/// All cells share `config.seed`, so every pair starts from the same draws
/// and a cell does not depend on the rest of the matrix.
pub fn benchmark_matrix(
    hosts: &[HostSpec],
    agents: &[AgentSpec],
    config: &EvalConfig,
) -> Result<Vec<EvalReport>> {
    if hosts.is_empty() || agents.is_empty() {
        return Err(GameError::InvalidConfiguration(
            "benchmark needs at least one host and one agent".into(),
        ));
    }
    let mut out = Vec::with_capacity(hosts.len() * agents.len());
    for h in hosts {
        for a in agents {
            out.push(rho_estimate(h, a, config)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub steps: u64,
    pub rho: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceScan {
    pub points: Vec<ScanPoint>,
    /// `|ρ(m_{j+1}) - ρ(m_j)|` along the grid.
    pub differences: Vec<f64>,
}

/// ρ at each `m` of an ascending grid, all with the same base seed.
pub fn convergence_scan(
    host: &HostSpec,
    agent: &AgentSpec,
    config: &EvalConfig,
    grid: &[u64],
) -> Result<ConvergenceScan> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GameError::InvalidConfiguration(
            "grid must be nonempty and strictly ascending".into(),
        ));
    }
    let points = grid
        .iter()
        .map(|&m| {
            let r = rho_estimate(
                host,
                agent,
                &EvalConfig {
                    steps: m,
                    ..config.clone()
                },
            )?;
            Ok(ScanPoint {
                steps: m,
                rho: r.rho,
                stderr: r.stderr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let differences = points
        .windows(2)
        .map(|w| (w[1].rho - w[0].rho).abs())
        .collect();
    Ok(ConvergenceScan {
        points,
        differences,
    })
}

pub const CSV_HEADER: &str = "host,agent,n,k,N,m,reps,rho,stderr,games,capped";

/// Header plus one row per report.
pub fn to_csv(reports: &[EvalReport], config: &EvalConfig) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.host),
            csv_field(&r.agent),
            config.dim,
            config.points,
            config.bound,
            config.steps,
            config.repetitions,
            r.rho,
            r.stderr,
            r.games,
            r.capped
        );
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
