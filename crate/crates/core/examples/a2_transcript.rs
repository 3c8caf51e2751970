//! Every agent reply to the choose-all host on the A2 singularity
//! x^2 + y^2 + z^3, step by step.

use hironaka::{CoordinateSubset, GameState, VariantRules};

fn main() {
    let rules = VariantRules::basic_shifted();
    let a2 = GameState::from_i64(&[[2, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap();
    let all = CoordinateSubset::full(3);
    println!("start: {a2}");
    println!(
        "legal host moves: {:?}",
        rules.legal_host_moves(&a2).unwrap()
    );
    for reply in rules.legal_agent_moves(&a2, all) {
        let step = rules.step(&a2, all, reply).unwrap();
        println!(
            "I={all} i={reply} -> {}  terminal={} host reward={} agent reward={}",
            step.after, step.terminal, step.host_reward, step.agent_reward
        );
    }

    // The only surviving line, played out with the host always choosing all.
    let mut state = a2;
    while !rules.is_terminal(&state) {
        let reply = *rules.legal_agent_moves(&state, all).last().unwrap();
        state = rules.apply(&state, all, reply).unwrap();
        println!("step {}: i={reply} -> {state}", state.step);
    }
}
