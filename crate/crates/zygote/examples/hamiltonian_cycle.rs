//! Find a Hamiltonian cycle on the dual graph of a random polycube surface,
//! then break it into the stacking path.
//!
//! ```bash
//! cargo run --example hamiltonian_cycle
//! ```

use zygote::hamilton::{ham_cycle, ham_path_from_cycle, is_valid_cycle, Subgraph};
use zygote::synth::random_polycube;

fn main() {
    let (model, g) = random_polycube(100, 42);
    println!(
        "polycube: {} cells, {} boundary faces, 4-regular dual with {} edges",
        model.len(),
        g.node_count(),
        g.edge_count()
    );

    let cycle = ham_cycle(&g, 42, None)
        .unwrap()
        .found()
        .expect("closed surface duals carry Hamiltonian cycles");
    let adj = Subgraph::full(&g).adj;
    assert!(is_valid_cycle(&adj, &cycle.order));
    println!("cycle found, length {}", cycle.order.len());
    println!("first nodes: {:?} ...", &cycle.order[..8.min(cycle.order.len())]);

    let path = ham_path_from_cycle(&cycle, 0).unwrap();
    println!("broken after index 0 -> stacking order starting at {}", path.order[0]);
}
