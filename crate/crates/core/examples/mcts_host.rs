//! UCT planning for both seats, then a short rho comparison of the MCTS
//! host against choose-all.

use hironaka::eval::{rho_estimate, EvalConfig};
use hironaka::policy::{ChooseAll, ChooseFirst};
use hironaka::search::{mcts_decide, Planner};
use hironaka::{AgentSpec, GameState, HostSpec, MctsConfig, VariantRules};

fn main() {
    let rules = VariantRules::basic_shifted();
    let a2 = GameState::from_i64(&[[2, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap();
    let config = MctsConfig {
        simulations: 200,
        seed: 3,
        ..MctsConfig::default()
    };

    let host_move = mcts_decide(
        &a2,
        Planner::Host {
            opponent: &mut ChooseFirst,
        },
        &rules,
        &config,
    )
    .unwrap();
    println!("host move on A2 vs choose-first: {host_move:?}");
    let all = hironaka::CoordinateSubset::full(3);
    let reply = mcts_decide(
        &a2,
        Planner::Agent {
            host_move: all,
            opponent: &mut ChooseAll,
        },
        &rules,
        &config,
    )
    .unwrap();
    println!("agent reply to I={all} vs choose-all: {reply:?}");

    let eval = EvalConfig {
        steps: 300,
        repetitions: 4,
        seed: 11,
        ..EvalConfig::default()
    };
    for host in ["choose-all", "mcts", "mcts:choose-first"] {
        let host: HostSpec = host.parse().unwrap();
        let r = rho_estimate(&host, &AgentSpec::ChooseFirst, &eval).unwrap();
        println!(
            "{:<18} vs choose-first: rho {:.3} +- {:.3}",
            r.host, r.rho, r.stderr
        );
    }
}
