//! Stack a 12x12 sheet into four equal piles and print the resulting coded
//! sequence summary.
//!
//! ```bash
//! cargo run --example sheet_to_zygote
//! ```

use zygote::foldsim::{stacked_layout, verify_deployed, deploy_poses, DeployMode};
use zygote::geometry::build_sheet;
use zygote::treestack::{stack_pipeline_traced, write_sequence};

fn main() {
    let g = build_sheet(12, 12).unwrap();
    println!("sheet: {} panels, {} hinge candidates", g.node_count(), g.edge_count());

    let (result, trace) = stack_pipeline_traced(&g, 4, 7, 40);
    let cs = result.expect("the sheet stacks");
    println!("pipeline: {} attempt(s)", trace.attempts);
    println!(
        "zygote: {} piles of {} panels, {} hinges ({} bridges, {} breaks)",
        cs.pile_count,
        cs.pile_height(),
        cs.hinges.len(),
        cs.bridge_count(),
        cs.breaks.len()
    );
    println!(
        "footprint: {} rows x {} cols",
        cs.footprint.iter().map(|c| c.0).max().unwrap() + 1,
        cs.footprint.iter().map(|c| c.1).max().unwrap() + 1
    );

    let stacked = stacked_layout(&cs);
    println!("stacked check: heights {:?}, {} conflicts", stacked.pile_heights, stacked.conflict_count());
    let deployed = deploy_poses(&cs, DeployMode::Deployed).unwrap();
    let verify = verify_deployed(&deployed, &g);
    println!("deploy check: ok={} worst gap={}", verify.ok, verify.worst_gap);

    let text = write_sequence(&cs);
    println!("--- first lines of the coded sequence ---");
    for line in text.lines().take(8) {
        println!("{line}");
    }
    println!("... ({} lines total)", text.lines().count());
}
