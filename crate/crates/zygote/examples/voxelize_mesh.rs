//! Voxelize a watertight triangle mesh and panelize its boundary.
//!
//! ```bash
//! cargo run --example voxelize_mesh
//! ```

use zygote::geometry::{box_mesh, extract_dual_graph, voxelize, write_voxel_text};

fn main() {
    // A 3 x 2 x 2 block in mesh units, sampled at 3 cells along its
    // longest axis.
    let mesh = box_mesh([3.0, 2.0, 2.0]);
    println!("mesh: {} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len());

    let model = voxelize(&mesh, 3).unwrap();
    println!("voxelized at resolution 3: {} cells", model.len());
    print!("{}", write_voxel_text(&model));

    let g = extract_dual_graph(&model).unwrap();
    println!("boundary: {} panels, {} hinge candidates", g.node_count(), g.edge_count());
    let angles: Vec<usize> = [90u16, 180, 270]
        .iter()
        .map(|&d| g.edges.iter().filter(|e| e.angle.degrees() == d).count())
        .collect();
    println!("hinge angles: {} convex, {} flat, {} concave", angles[0], angles[1], angles[2]);
}
