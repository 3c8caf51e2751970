//! Acceptance suite: one PASS/FAIL line per primary criterion.
//!
//! Runs as a plain binary so the report is always printed; exits nonzero if
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use hironaka::eval::{rho_estimate, sample_initial_state, EvalConfig, StartSource};
use hironaka::geometry::{minimal_hitting_sets, newton_vertices, remove_dominated};
use hironaka::policy::{play_episode, ChooseFirst, ChooseLast, Lookahead, RandomAgent, Zeillinger};
use hironaka::search::{build_policy_tree, StrategyHost};
use hironaka::{
    minimax_solve, AgentPolicy, AgentSpec, CoordinateSubset, GameState, HostSpec,
    PointConfiguration, Scalar, SeatRngs, SolveValue, VariantRules,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type MakeAgent = fn() -> Box<dyn AgentPolicy>;
type Criterion = fn() -> Check;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn state<R: AsRef<[i64]>>(rows: &[R]) -> GameState {
    GameState::from_i64(rows).unwrap()
}

fn all3() -> CoordinateSubset {
    CoordinateSubset::full(3)
}

fn a2_transcript() -> Check {
    let rules = VariantRules::basic_shifted();
    let a2 = state(&[[2, 0, 0], [0, 2, 0], [0, 0, 3]]);
    let started = Instant::now();
    let kept = rules.apply(&a2, all3(), 2).unwrap();
    let ends = [
        rules.apply(&a2, all3(), 0).unwrap(),
        rules.apply(&a2, all3(), 1).unwrap(),
    ];
    let elapsed = started.elapsed();
    let expect = PointConfiguration::from_i64(&[[2, 0, 0], [0, 2, 0], [0, 0, 1]]).unwrap();
    let origin = PointConfiguration::from_i64(&[[0, 0, 0]]).unwrap();
    let exact = kept.config == expect
        && !rules.is_terminal(&kept)
        && ends
            .iter()
            .all(|s| s.config == origin && rules.is_terminal(s));
    ensure(
        exact && elapsed < Duration::from_millis(1),
        format!(
            "i=2 -> {}, i=0,1 -> {} in {elapsed:?}",
            kept.config, ends[0].config
        ),
    )
}

fn d4_first_move() -> Check {
    let sets = minimal_hitting_sets(
        &PointConfiguration::from_i64(&[[2, 0, 0], [0, 2, 1], [0, 0, 3]]).unwrap(),
    )
    .unwrap();
    let expect = vec![CoordinateSubset::from_indices([0, 2]).unwrap()];
    ensure(sets == expect, format!("{sets:?}"))
}

fn e8_bound() -> Check {
    let rules = VariantRules::basic_shifted();
    let e8 = state(&[[2, 0, 0], [0, 3, 0], [0, 0, 5]]);
    let started = Instant::now();
    let solved = minimax_solve(&e8, &rules, 12);
    let SolveValue::Exact(value) = solved.value else {
        return Err(format!("{:?}", solved.value));
    };
    let mut host = StrategyHost::new(solved.strategy);
    let tree = build_policy_tree(
        &e8,
        &mut host,
        &rules,
        12,
        &mut ChaCha8Rng::seed_from_u64(0),
    )
    .unwrap();
    let leaves_ok = tree.is_resolved() && tree.max_depth() <= 9;
    ensure(
        value <= 9 && leaves_ok,
        format!(
            "value {value}, tree depth {}, {} nodes, {:?}",
            tree.max_depth(),
            tree.nodes.len(),
            started.elapsed()
        ),
    )
}

fn zeillinger_finiteness() -> Check {
    let rules = VariantRules::basic_shifted();
    let mut sampler = ChaCha8Rng::seed_from_u64(2024);
    let starts: Vec<GameState> = (0..100)
        .map(|_| {
            let k = sampler.gen_range(2..=5);
            sample_initial_state(&rules, 3, k, 10, &mut sampler)
        })
        .collect();
    let mut report = Vec::new();
    let mut ok = true;
    let agents: [(&str, MakeAgent); 4] = [
        ("choose-first", || Box::new(ChooseFirst)),
        ("choose-last", || Box::new(ChooseLast)),
        ("random", || Box::new(RandomAgent)),
        ("lookahead(4)", || Box::new(Lookahead::new(4))),
    ];
    for (name, make) in agents {
        let mut agent = make();
        let done = starts
            .iter()
            .enumerate()
            .filter(|(seed, s)| {
                let ep = play_episode(
                    &rules,
                    (*s).clone(),
                    &mut Zeillinger,
                    agent.as_mut(),
                    &mut SeatRngs::from_seed(*seed as u64),
                    200,
                );
                ep.map(|e| e.terminated).unwrap_or(false)
            })
            .count();
        ok &= done == 100;
        report.push(format!("{name} {done}/100"));
    }
    ensure(ok, report.join(", "))
}

fn benchmark_config(seed: u64) -> EvalConfig {
    EvalConfig {
        dim: 3,
        points: 3,
        bound: 10,
        steps: 1000,
        repetitions: 30,
        seed,
        rules: VariantRules::basic_shifted(),
        start: StartSource::Sampled,
        ..EvalConfig::default()
    }
}

fn rho(host: &HostSpec, agent: &AgentSpec, config: &EvalConfig) -> f64 {
    rho_estimate(host, agent, config).unwrap().rho
}

fn benchmark_orderings() -> Check {
    let config = benchmark_config(1);
    let z_first = rho(&HostSpec::Zeillinger, &AgentSpec::ChooseFirst, &config);
    let z_last = rho(&HostSpec::Zeillinger, &AgentSpec::ChooseLast, &config);
    let all_first = rho(&HostSpec::ChooseAll, &AgentSpec::ChooseFirst, &config);
    let all_last = rho(&HostSpec::ChooseAll, &AgentSpec::ChooseLast, &config);
    let all_random = rho(&HostSpec::ChooseAll, &AgentSpec::Random, &config);
    ensure(
        z_first > 2.0 * all_first && z_last > 2.0 * all_last && all_random > all_first,
        format!(
            "zeillinger {z_first:.4}/{z_last:.4} vs choose-all {all_first:.4}/{all_last:.4}; choose-all vs random {all_random:.4}"
        ),
    )
}

fn mcts_competence() -> Check {
    let config = benchmark_config(3);
    let mcts = rho(&"mcts".parse().unwrap(), &AgentSpec::ChooseFirst, &config);
    let base = rho(&HostSpec::ChooseAll, &AgentSpec::ChooseFirst, &config);
    ensure(
        mcts >= 3.0 * base,
        format!("mcts {mcts:.4} vs choose-all {base:.4}"),
    )
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, k: usize, max: i64) -> common::Rows {
    (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=max)).collect())
        .collect()
}

/// Plays uniformly random legal moves, calling `visit` on every transition.
fn playout(
    rules: &VariantRules,
    mut s: GameState,
    rng: &mut ChaCha8Rng,
    cap: usize,
    mut visit: impl FnMut(&GameState, CoordinateSubset, usize, &GameState) -> bool,
) -> bool {
    for _ in 0..cap {
        if rules.is_terminal(&s) {
            break;
        }
        let hosts = rules.legal_host_moves(&s).unwrap();
        let m = hosts[rng.gen_range(0..hosts.len())];
        let agents = rules.legal_agent_moves(&s, m);
        let i = agents[rng.gen_range(0..agents.len())];
        let next = rules.apply(&s, m, i).unwrap();
        if !visit(&s, m, i, &next) {
            return false;
        }
        s = next;
    }
    true
}

fn oracle_equivalences() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let solvers = [
        VariantRules::basic(),
        VariantRules::basic_shifted(),
        VariantRules::hauser(),
    ];
    let mut solver_misses = 0;
    for t in 0..200 {
        let rules = solvers[t % 3];
        let (n, k) = (rng.gen_range(2..=3), rng.gen_range(1..=4));
        let s = rules
            .initial_state(common::config(&random_rows(&mut rng, n, k, 4)), None)
            .unwrap();
        let expect = match common::brute_value(&rules, &s, 6) {
            Some(v) => SolveValue::Exact(v),
            None => SolveValue::Unbounded(6),
        };
        solver_misses += (minimax_solve(&s, &rules, 6).value != expect) as usize;
    }

    let mut vertex_misses = 0;
    for _ in 0..10_000 {
        let (n, k) = (rng.gen_range(2..=4), rng.gen_range(1..=8));
        let r = random_rows(&mut rng, n, k, 10);
        let s = common::config(&r);
        let got = common::rows(&newton_vertices(&s));
        let kept = common::rows(&remove_dominated(&s));
        if got != common::vertices(&r) || !got.iter().all(|v| kept.contains(v)) {
            vertex_misses += 1;
        }
    }

    let mut scale_misses = 0;
    let mut prune_misses = 0;
    for _ in 0..1000 {
        let (n, k) = (rng.gen_range(2..=4), rng.gen_range(2..=5));
        let raw = random_rows(&mut rng, n, k, 8);
        let c = Scalar::from(rng.gen_range(2..=5i64));

        let rules = VariantRules::basic_shifted();
        let start = rules.initial_state(common::config(&raw), None).unwrap();
        let mut scaled = GameState::new(start.config.scaled(&c));
        let ok = playout(&rules, start, &mut rng, 20, |_, m, i, after| {
            let next = rules.apply(&scaled, m, i).unwrap();
            let same = next.config == after.config.scaled(&c)
                && rules.is_terminal(&next) == rules.is_terminal(after);
            scaled = next;
            same
        });
        scale_misses += (!ok) as usize;

        let rules = VariantRules::basic();
        let start = rules.initial_state(common::config(&raw), None).unwrap();
        let mut unpruned = raw.clone();
        let ok = common::rows(&start.config) == common::undominated(&raw)
            && playout(&rules, start, &mut rng, 20, |_, m, i, after| {
                let ix: Vec<usize> = m.indices().collect();
                unpruned = common::transform(&unpruned, &ix, i);
                let kept = common::undominated(&unpruned);
                common::rows(&after.config) == kept && (kept.len() == 1) == rules.is_terminal(after)
            });
        prune_misses += (!ok) as usize;
    }
    ensure(
        solver_misses + vertex_misses + scale_misses + prune_misses == 0,
        format!(
            "mismatches: solver {solver_misses}/200, vertices {vertex_misses}/10000, scaling {scale_misses}/1000, pruning {prune_misses}/1000"
        ),
    )
}

fn rho_exactness() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for s in [1i64, 2, 5] {
        let rules = VariantRules::basic_shifted();
        let start = rules
            .initial_state(
                PointConfiguration::from_i64(&[[s, 0], [0, 1]]).unwrap(),
                None,
            )
            .unwrap();
        let config = EvalConfig {
            dim: 2,
            steps: 1000,
            repetitions: 3,
            rules,
            start: StartSource::Fixed(start),
            ..EvalConfig::default()
        };
        let r = rho(&HostSpec::ChooseAll, &AgentSpec::ChooseFirst, &config);
        ok &= r == 1.0 / s as f64;
        parts.push(format!("s={s}: {r}"));
    }
    let config = EvalConfig {
        steps: 500,
        repetitions: 4,
        seed: 11,
        ..EvalConfig::default()
    };
    for (host, agent) in [
        (HostSpec::Zeillinger, AgentSpec::Random),
        (HostSpec::RandomHitting, AgentSpec::Random),
    ] {
        let a = rho_estimate(&host, &agent, &config).unwrap();
        let b = rho_estimate(&host, &agent, &config).unwrap();
        ok &= a == b && a.rho.to_bits() == b.rho.to_bits();
    }
    parts.push(format!("reruns bit-identical: {ok}"));
    ensure(ok, parts.join(", "))
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("A2 transcript exactness", a2_transcript),
        ("D4 first move", d4_first_move),
        ("E8 bound", e8_bound),
        ("Zeillinger finiteness", zeillinger_finiteness),
        ("Benchmark orderings", benchmark_orderings),
        ("MCTS competence", mcts_competence),
        ("Oracle equivalences", oracle_equivalences),
        ("rho exactness", rho_exactness),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {name}: {detail} [{:.1}s]",
            started.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
