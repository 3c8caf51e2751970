//! Writes the random-hitting host's policy tree on D4 as Graphviz and JSON.
//!
//!     cargo run --example policy_tree_dot > d4.dot && dot -Tsvg d4.dot -o d4.svg

use hironaka::io::{tree_to_dot, tree_to_json};
use hironaka::policy::RandomHitting;
use hironaka::search::build_policy_tree;
use hironaka::{GameState, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let rules = Variant::BasicShifted.rules();
    let d4 = GameState::from_i64(&[[2, 0, 0], [0, 2, 1], [0, 0, 3]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tree = build_policy_tree(&d4, &mut RandomHitting, &rules, 12, &mut rng).unwrap();
    eprintln!(
        "{} nodes, depth {}, resolved: {}, smooth nodes: {}",
        tree.nodes.len(),
        tree.max_depth(),
        tree.is_resolved(),
        tree.nodes.iter().filter(|n| n.smooth).count()
    );
    if std::env::args().any(|a| a == "--json") {
        print!("{}", tree_to_json(Variant::BasicShifted, &tree));
    } else {
        print!("{}", tree_to_dot(&tree));
    }
}
