//! Combinatorial state of panels in the stacked configuration.
//!
//! In the stack every panel lies flat on its pile's grid cell. Its state is
//! which lateral grid direction its side 0 points to (`spin`) and whether it
//! lies face-down. Folding a hinge flat onto the next layer flips the face
//! and mirrors the side cycle; a bridge keeps the face and carries the panel
//! to the neighboring cell. Grid directions are indexed 0..4 as
//! +col, +row, -col, -row.

/// Lateral grid direction index: 0 = +col, 1 = +row, 2 = -col, 3 = -row.
pub type GridDir = u8;

pub fn opposite_dir(d: GridDir) -> GridDir {
    (d + 2) % 4
}

/// Direction from one grid cell to an adjacent one.
pub fn dir_between(from: (i64, i64), to: (i64, i64)) -> Option<GridDir> {
    match (to.0 - from.0, to.1 - from.1) {
        (0, 1) => Some(0),
        (1, 0) => Some(1),
        (0, -1) => Some(2),
        (-1, 0) => Some(3),
        _ => None,
    }
}

/// Stacked orientation of a single panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StackOrientation {
    /// Grid direction of the panel's side 0.
    pub spin: u8,
    /// Face-down panels run their side cycle clockwise when seen from above.
    pub face_down: bool,
}

impl StackOrientation {
    pub fn new(spin: u8, face_down: bool) -> Self {
        StackOrientation { spin: spin % 4, face_down }
    }

    /// World grid direction of side `side`.
    pub fn side_dir(&self, side: u8) -> GridDir {
        if self.face_down {
            (self.spin + 4 - side) % 4
        } else {
            (self.spin + side) % 4
        }
    }

    /// Spin that makes `side` point toward `dir`, keeping the face.
    pub fn spin_for(face_down: bool, side: u8, dir: GridDir) -> u8 {
        if face_down {
            (dir + side) % 4
        } else {
            (dir + 4 - side) % 4
        }
    }

    /// Rotate the whole panel (and with it, a whole pile) by `rho` quarter
    /// turns about the vertical axis.
    pub fn rotated(&self, rho: u8) -> Self {
        StackOrientation { spin: (self.spin + rho) % 4, face_down: self.face_down }
    }

    /// State of the next panel up after folding the hinge that joins this
    /// panel's `my_side` to the next panel's `its_side` flat onto this one.
    pub fn fold_over(&self, my_side: u8, its_side: u8) -> StackOrientation {
        let w = self.side_dir(my_side);
        let face_down = !self.face_down;
        StackOrientation { spin: Self::spin_for(face_down, its_side, w), face_down }
    }

    /// State of the equal-height panel across a bridge leaving through
    /// `my_side`. The bridge lies flat, so the face carries over and the
    /// other panel's `its_side` points straight back.
    pub fn bridge_over(&self, my_side: u8, its_side: u8) -> StackOrientation {
        let w = self.side_dir(my_side);
        StackOrientation {
            spin: Self::spin_for(self.face_down, its_side, opposite_dir(w)),
            face_down: self.face_down,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foldsim::pose::{hinge_transform, rot_quarter, RigidPose};

    fn all_orientations() -> Vec<StackOrientation> {
        let mut v = Vec::new();
        for spin in 0..4 {
            for face_down in [false, true] {
                v.push(StackOrientation { spin, face_down });
            }
        }
        v
    }

    #[test]
    fn side_dir_is_a_bijection() {
        for o in all_orientations() {
            let mut dirs: Vec<u8> = (0..4).map(|s| o.side_dir(s)).collect();
            dirs.sort_unstable();
            assert_eq!(dirs, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn fold_over_is_involutive() {
        for o in all_orientations() {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    let c = o.fold_over(a, b);
                    assert_eq!(c.fold_over(b, a), o);
                    // Folded pairs share the physical hinge edge direction.
                    assert_eq!(o.side_dir(a), c.side_dir(b));
                }
            }
        }
    }

    #[test]
    fn bridge_over_is_involutive() {
        for o in all_orientations() {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    let c = o.bridge_over(a, b);
                    assert_eq!(c.bridge_over(b, a), o);
                    assert_eq!(c.face_down, o.face_down);
                    assert_eq!(c.side_dir(b), opposite_dir(o.side_dir(a)));
                }
            }
        }
    }

    /// Pose of a flat panel with a given stacked orientation, ignoring layers.
    fn orientation_pose(o: StackOrientation, cell: (i64, i64)) -> RigidPose {
        let spin = RigidPose { rot: rot_quarter([0, 0, 1], o.spin as i64), trans: [0.0; 3] };
        let base = if o.face_down {
            spin.compose(&RigidPose { rot: rot_quarter([1, 0, 0], 2), trans: [0.0; 3] })
        } else {
            spin
        };
        RigidPose { rot: base.rot, trans: [cell.1 as f64, cell.0 as f64, 0.0] }
    }

    fn orientation_of_pose(p: &RigidPose) -> StackOrientation {
        let n = p.normal();
        let face_down = n[2] < 0.0;
        let s0 = p.rotate([1.0, 0.0, 0.0]);
        let spin_dir = match (s0[0] as i64, s0[1] as i64) {
            (1, 0) => 0,
            (0, 1) => 1,
            (-1, 0) => 2,
            (0, -1) => 3,
            _ => panic!("side 0 not grid aligned: {s0:?}"),
        };
        StackOrientation { spin: spin_dir, face_down }
    }

    #[test]
    fn fold_over_matches_rigid_poses() {
        // Folding flat onto the same cell is a 2-quarter hinge; the state
        // machine must agree with the exact pose composition.
        for o in all_orientations() {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    let parent = orientation_pose(o, (0, 0));
                    let child = parent.compose(&hinge_transform(a, b, 2));
                    assert_eq!(child.trans, [0.0, 0.0, 0.0]);
                    assert_eq!(orientation_of_pose(&child), o.fold_over(a, b));
                }
            }
        }
    }

    #[test]
    fn bridge_over_matches_rigid_poses() {
        for o in all_orientations() {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    let parent = orientation_pose(o, (0, 0));
                    let child = parent.compose(&hinge_transform(a, b, 0));
                    let w = o.side_dir(a);
                    let expect_cell = match w {
                        0 => (0i64, 1i64),
                        1 => (1, 0),
                        2 => (0, -1),
                        _ => (-1, 0),
                    };
                    assert_eq!(child.trans, [expect_cell.1 as f64, expect_cell.0 as f64, 0.0]);
                    assert_eq!(orientation_of_pose(&child), o.bridge_over(a, b));
                }
            }
        }
    }

    #[test]
    fn dir_between_cells() {
        assert_eq!(dir_between((0, 0), (0, 1)), Some(0));
        assert_eq!(dir_between((2, 1), (3, 1)), Some(1));
        assert_eq!(dir_between((0, 1), (0, 0)), Some(2));
        assert_eq!(dir_between((3, 1), (2, 1)), Some(3));
        assert_eq!(dir_between((0, 0), (1, 1)), None);
        assert_eq!(dir_between((0, 0), (0, 0)), None);
    }
}
