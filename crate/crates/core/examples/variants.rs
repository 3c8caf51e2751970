//! One move in each game variant, showing how pruning, shifting, terminal
//! rules and Thom weights differ.

use hironaka::game::rational_config;
use hironaka::{CoordinateSubset, GameState, Variant};

fn main() {
    let pair = CoordinateSubset::from_indices([0, 1]).unwrap();
    let start = GameState::from_i64(&[[2, 0, 1], [0, 2, 1], [1, 1, 0], [3, 3, 3]]).unwrap();

    for variant in [Variant::Basic, Variant::BasicShifted, Variant::Hauser] {
        let rules = variant.rules();
        let s = rules.initial_state(start.config.clone(), None).unwrap();
        let after = rules.apply(&s, pair, 0).unwrap();
        println!("{variant:>13}: {s}  --I={pair},i=0-->  {after}");
    }

    let rules = Variant::Polyhedra.rules();
    let s = GameState::new(rational_config(&[&[(3, 2), (0, 1)], &[(0, 1), (5, 4)]]).unwrap());
    println!(
        "{:>13}: legal host moves at {s}: {:?}",
        "polyhedra",
        rules.legal_host_moves(&s).unwrap()
    );
    let after = rules.apply(&s, pair, 1).unwrap();
    println!(
        "{:>13}: {s}  --I={pair},i=1-->  {after}  terminal={}",
        "",
        rules.is_terminal(&after)
    );

    let rules = Variant::Thom.rules();
    let s = rules
        .initial_state(start.config.clone(), Some(vec![2, 1, 1]))
        .unwrap();
    println!(
        "{:>13}: agent may answer I={pair} with {:?} at {s}",
        "thom",
        rules.legal_agent_moves(&s, pair)
    );
    let after = rules.apply(&s, pair, 1).unwrap();
    println!("{:>13}: {s}  --I={pair},i=1-->  {after}", "");
}
