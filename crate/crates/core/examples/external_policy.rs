//! An agent living in another process, reached over `hironaka-policy/1`.
//!
//! The example spawns itself with `--serve`; in that mode it answers the
//! engine as the choose-last agent. The external transcript is compared
//! with the native one.

use std::io::{stdin, stdout};

use hironaka::policy::{play_episode, ChooseLast, Zeillinger};
use hironaka::wire::{serve, ExternalAgent, ExternalOptions, Served};
use hironaka::{GameState, SeatRngs, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    if std::env::args().any(|a| a == "--serve") {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        serve(
            Served::Agent(Box::new(ChooseLast)),
            stdin().lock(),
            stdout().lock(),
            &mut rng,
        )
        .unwrap();
        return;
    }
    let me = std::env::current_exe().unwrap();
    let command = format!("'{}' --serve", me.display());
    let variant = Variant::BasicShifted;
    let rules = variant.rules();
    let start = GameState::from_i64(&[[7, 1, 0], [0, 5, 2], [3, 0, 9]]).unwrap();
    let start = rules.initial_state(start.config, None).unwrap();

    let mut external = ExternalAgent::spawn(&command, variant, ExternalOptions::default()).unwrap();
    let remote = play_episode(
        &rules,
        start.clone(),
        &mut Zeillinger,
        &mut external,
        &mut SeatRngs::from_seed(1),
        200,
    )
    .unwrap();
    let native = play_episode(
        &rules,
        start,
        &mut Zeillinger,
        &mut ChooseLast,
        &mut SeatRngs::from_seed(1),
        200,
    )
    .unwrap();
    for s in &remote.steps {
        println!("{}  I={} i={}", s.before, s.host_move, s.agent_move);
    }
    println!(
        "{} steps, terminated: {}, matches native: {}",
        remote.steps.len(),
        remote.terminated,
        remote == native
    );
}
