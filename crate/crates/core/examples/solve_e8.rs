//! Solves the E8 singularity x^2 + y^3 + z^5 exactly and checks the
//! principal strategy's tree.

use std::time::Instant;

use hironaka::search::{build_policy_tree, StrategyHost};
use hironaka::{GameState, MinimaxSolver, SolveValue, VariantRules};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let rules = VariantRules::basic_shifted();
    let e8 = GameState::from_i64(&[[2, 0, 0], [0, 3, 0], [0, 0, 5]]).unwrap();
    let started = Instant::now();
    let mut solver = MinimaxSolver::new(rules);
    let result = solver.solve(&e8, 12);
    println!("value: {:?}", result.value);
    println!("explored states: {}", result.explored);
    println!("strategy entries: {}", result.strategy.len());
    println!("time: {:.2?}", started.elapsed());

    if let SolveValue::Exact(_) = result.value {
        let mut host = StrategyHost::new(result.strategy);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = build_policy_tree(&e8, &mut host, &rules, 12, &mut rng).unwrap();
        println!(
            "tree nodes: {}, depth: {}, resolved: {}",
            tree.nodes.len(),
            tree.max_depth(),
            tree.is_resolved()
        );
        println!("first move: {}", tree.root().host_move.unwrap());
    }
}
