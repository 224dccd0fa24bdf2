//! From partition to grid: build the inter-pile hypergraph, place the piles
//! to maximize realized adjacency, and root the parent tree.
//!
//! ```bash
//! cargo run --example pile_placement
//! ```

use zygote::geometry::build_sheet;
use zygote::layout::{build_hypergraph, optimal_placement, parent_tree};
use zygote::partition::balanced_partition;

fn main() {
    let g = build_sheet(12, 12).unwrap();
    let p = balanced_partition(&g, 4, 0, 200).unwrap();
    let h = build_hypergraph(&g, &p);
    println!("hypergraph edges (pile, pile, crossing weight):");
    for (a, b, w) in h.edges() {
        println!("  {a} - {b}: {w}");
    }

    let placement = optimal_placement(&h).unwrap();
    println!("placement (pile -> grid cell): {:?}", placement.cell);
    println!("realized adjacency weight: {}", placement.realized_weight);

    let tree = parent_tree(&h, &placement, 0).unwrap();
    println!("resolution order from reference pile {}: {:?}", tree.reference, tree.order);
    for pile in tree.order.iter().skip(1) {
        println!("  pile {pile} hangs off pile {}", tree.parent[*pile as usize]);
    }
}
