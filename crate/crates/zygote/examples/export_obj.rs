//! Stack a random polycube surface and export the deployed and flattened
//! geometry as Wavefront files, one quad per panel.
//!
//! ```bash
//! cargo run --example export_obj
//! ```

use zygote::foldsim::{deploy_poses, export_obj, DeployMode};
use zygote::synth::random_polycube;
use zygote::treestack::stack_pipeline;

fn main() {
    let (model, g) = random_polycube(60, 3);
    println!("polycube: {} cells, {} panels", model.len(), g.node_count());

    let k = if g.node_count() % 2 == 0 { 2 } else { 1 };
    let cs = stack_pipeline(&g, k, 0, 40).unwrap();
    println!("stacked into {} pile(s) of {}", cs.pile_count, cs.pile_height());

    let out = std::env::temp_dir();
    for (mode, name) in [(DeployMode::Deployed, "deployed.obj"), (DeployMode::Flattened, "flattened.obj")] {
        let fs = deploy_poses(&cs, mode).unwrap();
        let path = out.join(name);
        std::fs::write(&path, export_obj(&fs)).unwrap();
        println!("wrote {}", path.display());
    }
}
