//! rho over a growing step budget m, with the successive differences.

use hironaka::eval::{convergence_scan, EvalConfig};
use hironaka::{AgentSpec, HostSpec};

fn main() {
    let config = EvalConfig {
        repetitions: 10,
        seed: 9,
        ..EvalConfig::default()
    };
    let scan = convergence_scan(
        &HostSpec::Zeillinger,
        &AgentSpec::Random,
        &config,
        &[250, 500, 1000, 2000],
    )
    .unwrap();
    for p in &scan.points {
        println!("m={:>5}  rho {:.4} +- {:.4}", p.steps, p.rho, p.stderr);
    }
    println!("differences: {:?}", scan.differences);
}
