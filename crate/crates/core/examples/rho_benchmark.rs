//! Host x agent ρ matrix at n=3, k=3, N=10 as CSV.
//!
//! `cargo run --release --example rho_benchmark -- [m] [reps] [hosts] [agents]`

use std::time::Instant;

use hironaka::eval::{benchmark_matrix, to_csv, EvalConfig};
use hironaka::{AgentSpec, HostSpec};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let steps = args.first().map_or(1000, |s| s.parse().unwrap());
    let repetitions = args.get(1).map_or(30, |s| s.parse().unwrap());
    let hosts = args.get(2).map_or(
        "choose-all,zeillinger,spivakovsky,random-hitting",
        String::as_str,
    );
    let agents = args
        .get(3)
        .map_or("random,choose-first,choose-last", String::as_str);
    let hosts: Vec<HostSpec> = hosts.split(',').map(|s| s.parse().unwrap()).collect();
    let agents: Vec<AgentSpec> = agents.split(',').map(|s| s.parse().unwrap()).collect();

    let config = EvalConfig {
        steps,
        repetitions,
        seed: 2024,
        ..EvalConfig::default()
    };
    let started = Instant::now();
    let reports = benchmark_matrix(&hosts, &agents, &config).unwrap();
    print!("{}", to_csv(&reports, &config));
    eprintln!("{:.2?}", started.elapsed());
}
