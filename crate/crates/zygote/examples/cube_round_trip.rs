//! Stack the six faces of a unit cube into one pile, deploy them back, and
//! measure how much bigger the deployed box is than the stack.
//!
//! ```bash
//! cargo run --example cube_round_trip
//! ```

use zygote::foldsim::{compute_ver, deploy_poses, verify_deployed, DeployMode};
use zygote::geometry::{extract_dual_graph, Voxel, VoxelModel};
use zygote::treestack::stack_pipeline;

fn main() {
    let model = VoxelModel::from_cells([Voxel::new(0, 0, 0)]);
    let g = extract_dual_graph(&model).unwrap();
    println!("cube: {} faces, every panel hinged to 4 neighbors", g.node_count());

    let cs = stack_pipeline(&g, 1, 2, 20).unwrap();
    println!("stacked into one pile of {}", cs.pile_height());

    let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
    let report = verify_deployed(&fs, &g);
    println!("deployed back onto the cube: ok={} worst gap={}", report.ok, report.worst_gap);

    // With panels 100x thinner than they are wide, the deployed bounding
    // box is about 16.7x the stack's.
    let ver = compute_ver(&cs, &fs, 100.0).unwrap();
    println!(
        "stack box {:?} t, deployed box {:?} t",
        ver.zygote_box, ver.deployed_box
    );
    println!("package volume expansion ratio: {:.2}", ver.ratio);
}
