//! Open every hinge flat and look at the planar layout. The open sheet
//! tiles the plane cleanly; the closed ring must overlap itself.
//!
//! ```bash
//! cargo run --example flatten_overlap
//! ```

use zygote::foldsim::flatten_map;
use zygote::geometry::{build_sheet, extract_dual_graph};
use zygote::synth::ring_model;
use zygote::treestack::stack_pipeline;

fn main() {
    let sheet = build_sheet(12, 12).unwrap();
    let cs = stack_pipeline(&sheet, 4, 7, 40).unwrap();
    let map = flatten_map(&cs).unwrap();
    println!(
        "sheet flattened: {} panels, max {} per cell, {} overlapping cells",
        map.total, map.max_count, map.overlap_cells
    );

    let ring = extract_dual_graph(&ring_model(10, 1)).unwrap();
    let cs = stack_pipeline(&ring, 4, 0, 40).unwrap();
    let map = flatten_map(&cs).unwrap();
    println!(
        "ring flattened:  {} panels, max {} per cell, {} overlapping cells",
        map.total, map.max_count, map.overlap_cells
    );

    // Render the occupancy counts.
    let (x0, x1) = (
        map.counts.keys().map(|c| c.0).min().unwrap(),
        map.counts.keys().map(|c| c.0).max().unwrap(),
    );
    let (y0, y1) = (
        map.counts.keys().map(|c| c.1).min().unwrap(),
        map.counts.keys().map(|c| c.1).max().unwrap(),
    );
    println!("ring occupancy ({}x{} cells):", x1 - x0 + 1, y1 - y0 + 1);
    for y in (y0..=y1).rev() {
        let row: String = (x0..=x1)
            .map(|x| match map.counts.get(&(x, y)) {
                None => ' ',
                Some(1) => '.',
                Some(n) => char::from_digit(*n, 10).unwrap_or('#'),
            })
            .collect();
        println!("  {row}");
    }
}
