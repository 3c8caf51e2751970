//! How long each agent survives against the Zeillinger host: choose-first,
//! choose-last, random and a depth-4 minimax lookahead.

use hironaka::eval::{sample_initial_state, EvalConfig};
use hironaka::policy::{
    play_episode, AgentPolicy, ChooseFirst, ChooseLast, Lookahead, RandomAgent, Zeillinger,
};
use hironaka::SeatRngs;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let config = EvalConfig {
        points: 5,
        ..EvalConfig::default()
    };
    let rules = config.rules;
    let mut sampler = ChaCha8Rng::seed_from_u64(5);
    let starts: Vec<_> = (0..50)
        .map(|_| {
            sample_initial_state(
                &rules,
                config.dim,
                config.points,
                config.bound,
                &mut sampler,
            )
        })
        .collect();

    let agents: Vec<Box<dyn AgentPolicy>> = vec![
        Box::new(ChooseFirst),
        Box::new(ChooseLast),
        Box::new(RandomAgent),
        Box::new(Lookahead::new(4)),
    ];
    for mut agent in agents {
        let mut lengths = Vec::new();
        for (ix, start) in starts.iter().enumerate() {
            let mut rngs = SeatRngs::from_seed(ix as u64);
            let ep = play_episode(
                &rules,
                start.clone(),
                &mut Zeillinger,
                agent.as_mut(),
                &mut rngs,
                200,
            )
            .unwrap();
            assert!(ep.terminated);
            lengths.push(ep.steps.len());
        }
        let mean = lengths.iter().sum::<usize>() as f64 / lengths.len() as f64;
        println!(
            "{:<12} mean {:>5.2}  max {:>3}",
            agent.name(),
            mean,
            lengths.iter().max().unwrap()
        );
    }
}
