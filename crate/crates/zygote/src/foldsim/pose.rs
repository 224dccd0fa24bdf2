//! Rigid poses and hinge transforms.
//!
//! Every rotation in the deployed, flattened, and stacked states is a
//! multiple of a quarter turn about a lattice axis, so all matrix entries
//! stay exactly in {-1, 0, 1} and pose composition is exact in f64 no
//! matter how deep the hinge tree gets.

use crate::geometry::{FoldAngle, Frame, IVec3, PanelNode};

/// Proper rigid motion: `apply(v) = rot * v + trans`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidPose {
    /// Row-major rotation matrix; columns are the images of the basis vectors.
    pub rot: [[f64; 3]; 3],
    pub trans: [f64; 3],
}

impl RigidPose {
    pub fn identity() -> Self {
        RigidPose {
            rot: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            trans: [0.0; 3],
        }
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let r = &self.rot;
        [
            r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2] + self.trans[0],
            r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2] + self.trans[1],
            r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2] + self.trans[2],
        ]
    }

    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let r = &self.rot;
        [
            r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
            r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
            r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
        ]
    }

    /// `self` after `other`: `(self.compose(other)).apply(v) == self.apply(other.apply(v))`.
    #[allow(clippy::needless_range_loop)]
    pub fn compose(&self, other: &RigidPose) -> RigidPose {
        let mut rot = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                rot[r][c] = (0..3).map(|i| self.rot[r][i] * other.rot[i][c]).sum();
            }
        }
        RigidPose { rot, trans: self.apply(other.trans) }
    }

    /// Inverse of a proper rigid motion (transpose the rotation).
    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> RigidPose {
        let mut rot = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                rot[r][c] = self.rot[c][r];
            }
        }
        let t = [-self.trans[0], -self.trans[1], -self.trans[2]];
        let rt = RigidPose { rot, trans: [0.0; 3] };
        RigidPose { rot, trans: rt.apply(t) }
    }

    /// Max deviation of `rot^T rot` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|r| self.rot[r][i] * self.rot[r][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).abs());
            }
        }
        worst
    }

    pub fn normal(&self) -> [f64; 3] {
        [self.rot[0][2], self.rot[1][2], self.rot[2][2]]
    }
}

/// Rotation by `quarters` quarter turns about a unit lattice axis, exact.
#[allow(clippy::needless_range_loop)]
pub fn rot_quarter(axis: IVec3, quarters: i64) -> [[f64; 3]; 3] {
    debug_assert_eq!(axis.iter().map(|a| a * a).sum::<i64>(), 1);
    let q = quarters.rem_euclid(4);
    let (sin, cos): (i64, i64) = match q {
        0 => (0, 1),
        1 => (1, 0),
        2 => (0, -1),
        3 => (-1, 0),
        _ => unreachable!(),
    };
    // Rodrigues with integer sin/cos: R = cos*I + sin*K + (1-cos)*a a^T
    let a = axis;
    let mut m = [[0i64; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let k = match (r, c) {
                (0, 1) => -a[2],
                (0, 2) => a[1],
                (1, 0) => a[2],
                (1, 2) => -a[0],
                (2, 0) => -a[1],
                (2, 1) => a[0],
                _ => 0,
            };
            m[r][c] = cos * ((r == c) as i64) + sin * k + (1 - cos) * a[r] * a[c];
        }
    }
    let mut out = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = m[r][c] as f64;
        }
    }
    out
}

/// In-plane direction of a panel's side slot in its local frame.
pub fn local_side_dir(side: u8) -> IVec3 {
    match side {
        0 => [1, 0, 0],
        1 => [0, 1, 0],
        2 => [-1, 0, 0],
        3 => [0, -1, 0],
        _ => panic!("side index {side} out of range"),
    }
}

/// Fold deviation from flat, in signed quarter turns.
pub fn fold_quarters(angle: FoldAngle) -> i64 {
    match angle {
        FoldAngle::Deg90 => 1,
        FoldAngle::Deg180 => 0,
        FoldAngle::Deg270 => -1,
    }
}

/// Child pose relative to its parent across a hinge.
///
/// The child square attaches along the parent's side `parent_side`, with its
/// own side `child_side` on the hinge, folded `quarters` quarter turns away
/// from coplanar (0 = flat, +1 = toward the parent's back/solid side,
/// +-2 = folded onto the parent's cell).
pub fn hinge_transform(parent_side: u8, child_side: u8, quarters: i64) -> RigidPose {
    let t_sp = local_side_dir(parent_side);
    // Spin the child so its hinge side points back at the parent.
    let q_flat = (parent_side as i64 + 2 - child_side as i64).rem_euclid(4);
    let r_flat = rot_quarter([0, 0, 1], q_flat);
    // Fold about the hinge edge axis z x t_sp.
    let axis = local_side_dir((parent_side + 1) % 4);
    let r_fold = rot_quarter(axis, quarters);

    let fold = RigidPose { rot: r_fold, trans: [0.0; 3] };
    let flat = RigidPose { rot: r_flat, trans: [0.0; 3] };
    let rot = fold.compose(&flat).rot;

    let half_t = [t_sp[0] as f64 * 0.5, t_sp[1] as f64 * 0.5, t_sp[2] as f64 * 0.5];
    let swung = fold.apply(half_t);
    RigidPose { rot, trans: [half_t[0] + swung[0], half_t[1] + swung[1], half_t[2] + swung[2]] }
}

/// The pose that carries the canonical panel square (unit square in the xy
/// plane, normal +z, side 0 toward +x) onto a panel's deployed position.
pub fn ground_truth_pose(node: &PanelNode) -> RigidPose {
    let Frame { u0, u1, normal } = node.frame();
    let c2 = node.center2();
    let mut rot = [[0.0; 3]; 3];
    for r in 0..3 {
        rot[r][0] = u0[r] as f64;
        rot[r][1] = u1[r] as f64;
        rot[r][2] = normal[r] as f64;
    }
    RigidPose { rot, trans: [c2[0] as f64 / 2.0, c2[1] as f64 / 2.0, c2[2] as f64 / 2.0] }
}

/// Corners of the canonical panel square: side-0 edge first, counterclockwise
/// around the outward normal.
pub const PANEL_CORNERS: [[f64; 3]; 4] = [
    [0.5, -0.5, 0.0],
    [0.5, 0.5, 0.0],
    [-0.5, 0.5, 0.0],
    [-0.5, -0.5, 0.0],
];
