//! Split the 12x12 sheet into four equal connected parts and render them.
//!
//! ```bash
//! cargo run --example balanced_partition
//! ```

use zygote::geometry::build_sheet;
use zygote::partition::{balanced_partition, cut_weight, fm_refine};

fn main() {
    let g = build_sheet(12, 12).unwrap();
    let p = balanced_partition(&g, 4, 1, 200).unwrap();
    p.validate(&g).unwrap();
    println!("cut weight: {}", cut_weight(&g, &p.labels));
    for r in 0..12 {
        let row: String = (0..12)
            .map(|c| char::from(b'A' + p.labels[(r * 12 + c) as usize] as u8))
            .collect();
        println!("  {row}");
    }

    // Refinement never makes a partition worse.
    let rough: Vec<u32> = (0..144).map(|i| (i % 4) as u32).collect();
    let before = cut_weight(&g, &rough);
    let after = cut_weight(&g, &fm_refine(&g, &rough, 4));
    println!("interleaved start: cut {before} -> {after} after refinement");
}
