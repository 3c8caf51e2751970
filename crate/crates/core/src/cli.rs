//! Command-line front end. [`run`] takes explicit streams so the commands
//! can be driven from tests.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GameError, Result};
use crate::eval::{benchmark_matrix, to_csv, EvalConfig, StartSource, DEFAULT_GAME_CAP};
use crate::game::{GameState, HostMove, Variant, VariantRules};
use crate::geometry::CoordinateSubset;
use crate::io::{strategy_to_json, tree_to_dot, tree_to_json, StateDocument};
use crate::policy::{AgentSpec, HostPolicy, HostSpec, SeatRngs};
use crate::search::{build_policy_tree, MinimaxSolver, SolveValue, StrategyHost};
use crate::wire::{serve, Served};

#[derive(Parser, Debug)]
#[command(
    name = "hironaka",
    version,
    about = "Play, solve and benchmark Hironaka resolution games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Interactive game against a policy.
    Play(PlayArgs),
    /// Unroll a host policy against all agent replies; writes DOT and JSON.
    Tree(TreeArgs),
    /// Exact minimax value of a position.
    Solve(SolveArgs),
    /// Games-per-step benchmark matrix as CSV.
    Eval(EvalArgs),
    /// Answer the policy wire protocol on stdin/stdout with a native policy.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
pub struct StateArgs {
    /// State document (JSON).
    pub state: PathBuf,
    /// Override the variant named in the file.
    #[arg(long)]
    pub variant: Option<Variant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Seat {
    Host,
    Agent,
}

#[derive(Args, Debug)]
pub struct PlayArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// The seat you play.
    #[arg(long, value_enum, default_value = "agent")]
    pub role: Seat,
    /// Policy for the other seat.
    #[arg(long)]
    pub opponent: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Host policy name, or `solver` for the minimax principal strategy.
    #[arg(long, default_value = "choose-all")]
    pub host: String,
    #[arg(long, default_value_t = 12)]
    pub depth_cap: u32,
    /// Output prefix; writes `<out>.dot` and `<out>.json`. DOT goes to
    /// stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 12)]
    pub depth_cap: u32,
    /// Write the principal strategy as a state -> move table.
    #[arg(long)]
    pub strategy: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Comma-separated host policies.
    #[arg(long, default_value = "choose-all,zeillinger")]
    pub hosts: String,
    /// Comma-separated agent policies.
    #[arg(long, default_value = "random,choose-first,choose-last")]
    pub agents: String,
    #[arg(long = "n", default_value_t = 3)]
    pub dim: usize,
    #[arg(long = "k", default_value_t = 3)]
    pub points: usize,
    #[arg(long = "N", default_value_t = 10)]
    pub bound: i64,
    #[arg(long = "m", default_value_t = 1000)]
    pub steps: u64,
    #[arg(long, default_value_t = 30)]
    pub reps: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "basic-shifted")]
    pub variant: Variant,
    /// Per-game step cap.
    #[arg(long, default_value_t = DEFAULT_GAME_CAP)]
    pub cap: u64,
    /// Start every game from this state file instead of sampling.
    #[arg(long)]
    pub start: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    /// Policy name.
    pub policy: String,
    #[arg(long, value_enum)]
    pub role: Seat,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, input, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                GameError::Io(_) | GameError::Document(_) | GameError::InvalidConfiguration(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(command: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Play(a) => cmd_play(&a, input, out),
        Command::Tree(a) => cmd_tree(&a, out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Serve(a) => cmd_serve(&a, input, out),
    }
}

fn load(args: &StateArgs) -> Result<(Variant, VariantRules, GameState)> {
    let text = std::fs::read_to_string(&args.state)
        .map_err(|e| GameError::Document(format!("cannot read {}: {e}", args.state.display())))?;
    let mut doc = StateDocument::parse(&text)?;
    if let Some(v) = args.variant {
        doc.variant = v;
    }
    let state = doc.to_initial_state()?;
    Ok((doc.variant, doc.rules(), state))
}

fn print_state(out: &mut dyn Write, state: &GameState) -> Result<()> {
    writeln!(out, "step {}", state.step)?;
    for p in state.config.points() {
        writeln!(out, "  {p}")?;
    }
    if let Some(w) = &state.weights {
        let w: Vec<String> = w.iter().map(u64::to_string).collect();
        writeln!(out, "  weights ({})", w.join(","))?;
    }
    Ok(())
}

fn parse_subset(text: &str) -> Option<HostMove> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let ix: Option<Vec<usize>> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect();
    CoordinateSubset::from_indices(ix?).ok()
}

/// Reads one answer; `None` on quit or end of input.
fn prompt(input: &mut dyn BufRead, out: &mut dyn Write) -> Result<Option<String>> {
    write!(out, "> ")?;
    out.flush()?;
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        writeln!(out)?;
        return Ok(None);
    }
    let line = line.trim().to_string();
    if line == "q" || line == "quit" {
        return Ok(None);
    }
    Ok(Some(line))
}

pub fn cmd_play(args: &PlayArgs, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    let (variant, rules, mut state) = load(&args.state)?;
    let mut rngs = SeatRngs::from_seed(args.seed);
    let (mut host, mut agent) = match args.role {
        Seat::Agent => {
            let name = args.opponent.as_deref().unwrap_or("choose-all");
            (Some(name.parse::<HostSpec>()?.build(&rules)?), None)
        }
        Seat::Host => {
            let name = args.opponent.as_deref().unwrap_or("choose-first");
            (None, Some(name.parse::<AgentSpec>()?.build(&rules)?))
        }
    };
    let seat = match args.role {
        Seat::Host => "host",
        Seat::Agent => "agent",
    };
    writeln!(
        out,
        "variant {variant}; you play the {seat} seat; `quit` leaves"
    )?;
    loop {
        print_state(out, &state)?;
        if rules.is_terminal(&state) {
            writeln!(out, "terminal after {} steps", state.step)?;
            return Ok(());
        }
        let host_move = match host.as_mut() {
            Some(h) => {
                let m = h.decide(&state, &rules, &mut rngs.host)?;
                writeln!(out, "host {} chooses {m}", h.name())?;
                m
            }
            None => {
                let legal = rules.legal_host_moves(&state)?;
                let listed: Vec<String> = legal.iter().map(ToString::to_string).collect();
                writeln!(out, "choose coordinates: {}", listed.join(" "))?;
                loop {
                    let Some(line) = prompt(input, out)? else {
                        writeln!(out, "quit after {} steps", state.step)?;
                        return Ok(());
                    };
                    match parse_subset(&line) {
                        Some(m) if legal.contains(&m) => break m,
                        _ => writeln!(out, "not a legal choice: {line}")?,
                    }
                }
            }
        };
        let legal = rules.legal_agent_moves(&state, host_move);
        let agent_move = match agent.as_mut() {
            Some(a) => {
                let i = a.decide(&state, host_move, &rules, &mut rngs.agent)?;
                writeln!(out, "agent {} picks {i}", a.name())?;
                i
            }
            None => {
                let listed: Vec<String> = legal.iter().map(ToString::to_string).collect();
                writeln!(out, "pick a coordinate: {}", listed.join(" "))?;
                loop {
                    let Some(line) = prompt(input, out)? else {
                        writeln!(out, "quit after {} steps", state.step)?;
                        return Ok(());
                    };
                    match line.parse::<usize>() {
                        Ok(i) if legal.contains(&i) => break i,
                        _ => writeln!(out, "not a legal choice: {line}")?,
                    }
                }
            }
        };
        state = rules.apply(&state, host_move, agent_move)?;
    }
}

pub fn cmd_tree(args: &TreeArgs, out: &mut dyn Write) -> Result<()> {
    let (variant, rules, state) = load(&args.state)?;
    if args.depth_cap == 0 {
        return Err(GameError::InvalidConfiguration(
            "depth cap must be positive".into(),
        ));
    }
    let mut host: Box<dyn HostPolicy> = if args.host == "solver" {
        let result = MinimaxSolver::new(rules).solve(&state, args.depth_cap);
        if let SolveValue::Unbounded(cap) = result.value {
            return Err(GameError::MissingStrategy(format!(
                "no strategy terminates within {cap} moves"
            )));
        }
        Box::new(StrategyHost::new(result.strategy))
    } else {
        args.host.parse::<HostSpec>()?.build(&rules)?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let tree = build_policy_tree(&state, host.as_mut(), &rules, args.depth_cap, &mut rng)?;
    let dot = tree_to_dot(&tree);
    match &args.out {
        None => out.write_all(dot.as_bytes())?,
        Some(prefix) => {
            let dot_path = with_suffix(prefix, "dot");
            let json_path = with_suffix(prefix, "json");
            std::fs::write(&dot_path, dot)?;
            std::fs::write(&json_path, tree_to_json(variant, &tree))?;
            writeln!(
                out,
                "{} nodes, depth {}, {}; wrote {} and {}",
                tree.nodes.len(),
                tree.max_depth(),
                if tree.is_resolved() {
                    "all leaves terminal"
                } else {
                    "unresolved leaves"
                },
                dot_path.display(),
                json_path.display()
            )?;
        }
    }
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let (variant, rules, state) = load(&args.state)?;
    if args.depth_cap == 0 {
        return Err(GameError::InvalidConfiguration(
            "depth cap must be positive".into(),
        ));
    }
    let result = MinimaxSolver::new(rules).solve(&state, args.depth_cap);
    match result.value {
        SolveValue::Exact(v) => writeln!(out, "value: {v}")?,
        SolveValue::Unbounded(cap) => writeln!(out, "value: unbounded (cap {cap})")?,
    }
    writeln!(out, "explored: {}", result.explored)?;
    if let Some(path) = &args.strategy {
        std::fs::write(path, strategy_to_json(variant, &result.strategy))?;
        writeln!(
            out,
            "strategy: {} states written to {}",
            result.strategy.len(),
            path.display()
        )?;
    }
    Ok(())
}

fn split_names<T: std::str::FromStr<Err = GameError>>(list: &str) -> Result<Vec<T>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let hosts: Vec<HostSpec> = split_names(&args.hosts)?;
    let agents: Vec<AgentSpec> = split_names(&args.agents)?;
    let rules = args.variant.rules();
    let start = match &args.start {
        None => StartSource::Sampled,
        Some(path) => {
            let (_, _, state) = load(&StateArgs {
                state: path.clone(),
                variant: Some(args.variant),
            })?;
            StartSource::Fixed(state)
        }
    };
    let config = EvalConfig {
        dim: args.dim,
        points: args.points,
        bound: args.bound,
        steps: args.steps,
        repetitions: args.reps,
        game_cap: args.cap,
        seed: args.seed,
        rules,
        start,
    };
    let reports = benchmark_matrix(&hosts, &agents, &config)?;
    let csv = to_csv(&reports, &config);
    match &args.out {
        None => out.write_all(csv.as_bytes())?,
        Some(path) => std::fs::write(path, csv)?,
    }
    Ok(())
}

pub fn cmd_serve(args: &ServeArgs, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    // Rules arrive with the handshake; policies that need them at build
    // time get the basic game's, which only fixes their variant-independent
    // parts.
    let rules = VariantRules::basic();
    let served = match args.role {
        Seat::Host => Served::Host(args.policy.parse::<HostSpec>()?.build(&rules)?),
        Seat::Agent => Served::Agent(args.policy.parse::<AgentSpec>()?.build(&rules)?),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    serve(served, input, out, &mut rng)
}
