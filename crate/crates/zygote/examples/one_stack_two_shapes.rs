//! One stack, two shapes: a closed square ring with 144 boundary faces and
//! an open 12x12 sheet both fold out of the same 4-pile zygote; only the
//! coded sequences differ.
//!
//! ```bash
//! cargo run --example one_stack_two_shapes
//! ```

use zygote::geometry::{build_sheet, extract_dual_graph};
use zygote::synth::ring_model;
use zygote::treestack::{stack_pipeline, CodedSequence};

fn signature(cs: &CodedSequence) -> (usize, usize, i64, i64) {
    let rows = cs.footprint.iter().map(|c| c.0).max().unwrap() + 1;
    let cols = cs.footprint.iter().map(|c| c.1).max().unwrap() + 1;
    (cs.pile_count, cs.pile_height(), rows, cols)
}

fn main() {
    let ring = ring_model(10, 1);
    let ring_graph = extract_dual_graph(&ring).unwrap();
    let sheet_graph = build_sheet(12, 12).unwrap();
    println!(
        "ring: {} faces (closed surface), sheet: {} panels (open)",
        ring_graph.node_count(),
        sheet_graph.node_count()
    );

    let ring_cs = stack_pipeline(&ring_graph, 4, 0, 40).expect("ring stacks");
    let sheet_cs = stack_pipeline(&sheet_graph, 4, 0, 40).expect("sheet stacks");

    let (rk, rh, rr, rc) = signature(&ring_cs);
    let (sk, sh, sr, sc) = signature(&sheet_cs);
    println!("ring zygote:  {rk} piles x {rh}, footprint {rr}x{rc}");
    println!("sheet zygote: {sk} piles x {sh}, footprint {sr}x{sc}");
    assert_eq!(signature(&ring_cs), signature(&sheet_cs));
    println!("same stack either way; only the hinge program differs:");
    println!(
        "  ring bridges at heights {:?}",
        bridge_heights(&ring_cs)
    );
    println!(
        "  sheet bridges at heights {:?}",
        bridge_heights(&sheet_cs)
    );
}

fn bridge_heights(cs: &CodedSequence) -> Vec<u32> {
    cs.hinges
        .iter()
        .filter(|h| h.role == zygote::treestack::HingeRole::Bridge)
        .map(|h| cs.panels[h.parent as usize].height)
        .collect()
}
