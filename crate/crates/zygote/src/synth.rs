//! Generators for test solids: random manifold polycubes, boxes, and rings.

use crate::geometry::{extract_dual_graph, DualGraph, Voxel, VoxelModel};
use crate::seed::sub_seed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Grow a random polycube by face-adjacent accretion until its boundary has
/// at least `min_faces` panels, rejecting growth steps that break the
/// manifold property. Returns the model and its dual graph.
///
/// Face counts move in steps of 2 as cells are added, so the result lands
/// within a few faces above `min_faces`.
pub fn random_polycube(min_faces: usize, seed: u64) -> (VoxelModel, DualGraph) {
    for round in 0..64 {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, round));
        if let Some(found) = try_grow(min_faces, &mut rng) {
            return found;
        }
    }
    // Face-adjacent growth from a seed cell practically never exhausts 64
    // rounds; a box of the right size is a safe deterministic fallback.
    let b = VoxelModel::solid_box([2, 2, (min_faces as i64 / 8).max(1)]);
    let g = extract_dual_graph(&b).expect("boxes are manifold");
    (b, g)
}

fn try_grow(min_faces: usize, rng: &mut ChaCha8Rng) -> Option<(VoxelModel, DualGraph)> {
    let mut model = VoxelModel::new();
    model.insert(Voxel::new(0, 0, 0));
    let mut best = extract_dual_graph(&model).ok()?;
    if best.node_count() >= min_faces {
        return Some((model, best));
    }

    for _ in 0..min_faces * 8 {
        let cells: Vec<Voxel> = model.iter().collect();
        let base = cells[rng.random_range(0..cells.len())];
        let dirs = [
            [1, 0, 0],
            [-1, 0, 0],
            [0, 1, 0],
            [0, -1, 0],
            [0, 0, 1],
            [0, 0, -1],
        ];
        let cand = base.offset(dirs[rng.random_range(0..6)]);
        if model.contains(cand) {
            continue;
        }
        let mut grown = model.clone();
        grown.insert(cand);
        match extract_dual_graph(&grown) {
            Ok(g) => {
                model = grown;
                let enough = g.node_count() >= min_faces;
                best = g;
                if enough {
                    return Some((model, best));
                }
            }
            // Non-manifold contact; try another cell.
            Err(_) => continue,
        }
    }
    None
}

/// A square ring (washer) one voxel thick: outer side `outer`, hole side
/// `outer - 2 * width`. Its boundary is a closed torus-like surface.
pub fn ring_model(outer: i64, width: i64) -> VoxelModel {
    assert!(outer >= 3 && width >= 1 && outer - 2 * width >= 1, "ring needs a hole");
    let mut m = VoxelModel::new();
    for x in 0..outer {
        for y in 0..outer {
            let in_hole =
                x >= width && x < outer - width && y >= width && y < outer - width;
            if !in_hole {
                m.insert(Voxel::new(x, y, 0));
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_polycubes_are_manifold_and_sized() {
        for seed in 0..10u64 {
            let min_faces = 6 + (seed as usize % 5) * 24;
            let (model, g) = random_polycube(min_faces, seed);
            assert!(g.node_count() >= min_faces);
            assert!((0..g.node_count() as u32).all(|n| g.degree(n) == 4));
            assert_eq!(extract_dual_graph(&model).unwrap().node_count(), g.node_count());
        }
    }

    #[test]
    fn ring_has_144_faces_at_10_by_10() {
        let m = ring_model(10, 1);
        assert_eq!(m.len(), 36);
        let g = extract_dual_graph(&m).unwrap();
        assert_eq!(g.node_count(), 144);
    }

    #[test]
    fn generation_is_deterministic() {
        let (a, _) = random_polycube(30, 7);
        let (b, _) = random_polycube(30, 7);
        assert_eq!(a, b);
    }
}
