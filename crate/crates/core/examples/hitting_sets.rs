//! Newton vertices, minimal hitting sets and the host moves derived from
//! them on the D4 singularity x^2 + y^2 z + z^3.

use hironaka::geometry::{
    characteristic_vector, minimal_hitting_sets, newton_vertices, remove_dominated,
};
use hironaka::policy::{random_hitting_host, spivakovsky_style_host, zeillinger_host};
use hironaka::{GameState, PointConfiguration, VariantRules};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let rules = VariantRules::basic_shifted();
    let d4 = GameState::from_i64(&[[2, 0, 0], [0, 2, 1], [0, 0, 3]]).unwrap();
    println!("D4: {d4}");
    println!(
        "minimal hitting sets: {:?}",
        minimal_hitting_sets(&d4.config).unwrap()
    );
    println!(
        "characteristic vector: {:?}",
        characteristic_vector(&d4.config).unwrap()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!(
        "random-hitting host: {}",
        random_hitting_host(&d4, &rules, &mut rng).unwrap()
    );
    println!(
        "spivakovsky host:    {}",
        spivakovsky_style_host(&d4, &rules).unwrap()
    );
    println!(
        "zeillinger host:     {}",
        zeillinger_host(&d4, &rules).unwrap()
    );

    // (1,1) lies on the segment between (2,0) and (0,2): not dominated, yet
    // not a vertex.
    let s = PointConfiguration::from_i64(&[[2, 0], [0, 2], [1, 1], [3, 1]]).unwrap();
    println!("\n{s}");
    println!("undominated:    {}", remove_dominated(&s));
    println!("Newton vertices: {}", newton_vertices(&s));
}
