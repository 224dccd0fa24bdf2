//! Forward simulation and verification of coded sequences.
//!
//! Deployment walks the hinge tree composing exact quarter-turn poses;
//! verification re-anchors the root panel on its source face and demands
//! every panel land on its own face. The stacked checker recomputes the
//! combinatorial stack (spins, faces, layers) from the document alone and
//! reports side conflicts, bridge violations, and pile imbalance rather
//! than trusting anything the pipeline recorded.

pub mod pose;

pub use pose::{ground_truth_pose, hinge_transform, RigidPose, PANEL_CORNERS};

use crate::error::{Error, Result};
use crate::geometry::DualGraph;
use crate::treestack::{dir_between, CodedSequence, HingeRole, StackOrientation};
use pose::fold_quarters;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Which fold angles drive the pose walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeployMode {
    /// Each hinge opens to its recorded dihedral: the target shape.
    Deployed,
    /// Every hinge opens flat: the planar tree layout, overlaps allowed.
    Flattened,
}

/// Rigid poses of all panels under one angle assignment.
#[derive(Clone, Debug)]
pub struct FoldState {
    pub mode: DeployMode,
    pub root: u32,
    pub poses: Vec<RigidPose>,
}

/// Walk the hinge tree from the root panel (placed at the identity pose)
/// and compose each child's pose across its hinge.
pub fn deploy_poses(cs: &CodedSequence, mode: DeployMode) -> Result<FoldState> {
    cs.validate()?;
    let n = cs.panel_count;
    let root = cs.root();

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, h) in cs.hinges.iter().enumerate() {
        children[h.parent as usize].push(i);
    }

    let mut poses = vec![RigidPose::identity(); n];
    let mut placed = vec![false; n];
    placed[root as usize] = true;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &hi in &children[v as usize] {
            let h = &cs.hinges[hi];
            let quarters = match mode {
                DeployMode::Deployed => fold_quarters(h.angle),
                DeployMode::Flattened => 0,
            };
            let rel = hinge_transform(h.parent_side, h.child_side, quarters);
            poses[h.child as usize] = poses[v as usize].compose(&rel);
            placed[h.child as usize] = true;
            stack.push(h.child);
        }
    }
    debug_assert!(placed.iter().all(|&p| p));
    Ok(FoldState { mode, root, poses })
}

/// Outcome of checking a deployed state against the panels' source faces.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    /// Largest center displacement, in panel side lengths.
    pub worst_gap: f64,
    pub mismatched_normals: usize,
    pub checked: usize,
}

const GAP_TOLERANCE: f64 = 1e-6;

/// Compare deployed poses against ground truth, up to the one global rigid
/// transform that re-anchors the root panel onto its source face.
pub fn verify_deployed(fs: &FoldState, g: &DualGraph) -> VerifyReport {
    let n = g.node_count();
    if fs.poses.len() != n {
        return VerifyReport { ok: false, worst_gap: f64::INFINITY, mismatched_normals: n, checked: 0 };
    }
    let anchor = ground_truth_pose(&g.nodes[fs.root as usize])
        .compose(&fs.poses[fs.root as usize].inverse());
    let mut worst_gap = 0.0f64;
    let mut mismatched_normals = 0;
    for id in 0..n {
        let actual = anchor.compose(&fs.poses[id]);
        let expected = ground_truth_pose(&g.nodes[id]);
        let gap = {
            let (a, e) = (actual.trans, expected.trans);
            let d = [a[0] - e[0], a[1] - e[1], a[2] - e[2]];
            (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
        };
        worst_gap = worst_gap.max(gap);
        let (an, en) = (actual.normal(), expected.normal());
        let dot = an[0] * en[0] + an[1] * en[1] + an[2] * en[2];
        if dot < 1.0 - 1e-9 {
            mismatched_normals += 1;
        }
    }
    VerifyReport {
        ok: worst_gap < GAP_TOLERANCE && mismatched_normals == 0,
        worst_gap,
        mismatched_normals,
        checked: n,
    }
}

/// Independent recomputation of the stacked configuration.
#[derive(Clone, Debug)]
pub struct StackReport {
    pub pile_heights: Vec<u32>,
    /// (panel, side) slots claimed by more than one hinge.
    pub side_conflicts: Vec<(u32, u8)>,
    /// Bridges that join the wrong heights, non-adjacent piles, or sides
    /// that do not face each other across the seam.
    pub bridge_violations: Vec<String>,
    /// Panels whose recorded face parity disagrees with the fold chain.
    pub flip_mismatches: Vec<u32>,
    /// Panels not reachable as a consistent stack (should be none).
    pub structural_violations: Vec<String>,
    /// hinge degree -> panel count
    pub degree_histogram: BTreeMap<u32, usize>,
    /// Per pile: does it own a panel with 3 or more hinges?
    pub pile_has_hdn: Vec<bool>,
}

impl StackReport {
    pub fn conflict_count(&self) -> usize {
        self.side_conflicts.len()
            + self.bridge_violations.len()
            + self.flip_mismatches.len()
            + self.structural_violations.len()
    }
}

/// Rebuild the stacked state from the document alone: layer assignments
/// from the panel records, spins and faces propagated from the root through
/// every hinge, with each bridge checked against the grid footprint.
pub fn stacked_layout(cs: &CodedSequence) -> StackReport {
    let n = cs.panel_count;
    let k = cs.pile_count;
    let target = cs.pile_height() as u32;

    let mut pile_heights = vec![0u32; k];
    for p in &cs.panels {
        if (p.pile as usize) < k {
            pile_heights[p.pile as usize] = pile_heights[p.pile as usize].max(p.height);
        }
    }

    let mut side_conflicts = Vec::new();
    let mut seen_sides = std::collections::HashSet::new();
    for h in &cs.hinges {
        for key in [(h.parent, h.parent_side), (h.child, h.child_side)] {
            if !seen_sides.insert(key) {
                side_conflicts.push(key);
            }
        }
    }

    let mut bridge_violations = Vec::new();
    let mut structural_violations = Vec::new();
    let root = cs.root();
    let mut orient: Vec<Option<StackOrientation>> = vec![None; n];
    orient[root as usize] =
        Some(StackOrientation::new(0, cs.panels[root as usize].flip));

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, h) in cs.hinges.iter().enumerate() {
        children[h.parent as usize].push(i);
    }
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let Some(ov) = orient[v as usize] else { continue };
        for &hi in &children[v as usize] {
            let h = &cs.hinges[hi];
            let (pp, pc) = (&cs.panels[h.parent as usize], &cs.panels[h.child as usize]);
            let next = match h.role {
                HingeRole::Pile => {
                    if pp.pile != pc.pile || pp.height.abs_diff(pc.height) != 1 {
                        structural_violations.push(format!(
                            "pile hinge {}-{} does not join consecutive heights of one pile",
                            h.parent, h.child
                        ));
                        continue;
                    }
                    ov.fold_over(h.parent_side, h.child_side)
                }
                HingeRole::Bridge => {
                    let mut bad = false;
                    if pp.pile == pc.pile {
                        bridge_violations
                            .push(format!("bridge {}-{} stays inside pile {}", h.parent, h.child, pp.pile));
                        bad = true;
                    }
                    if pp.height != pc.height {
                        bridge_violations.push(format!(
                            "bridge {}-{} joins heights {} and {}",
                            h.parent, h.child, pp.height, pc.height
                        ));
                        bad = true;
                    }
                    let seam = dir_between(
                        cs.footprint[pp.pile as usize],
                        cs.footprint[pc.pile.min(k as u32 - 1) as usize],
                    );
                    match seam {
                        None => {
                            bridge_violations.push(format!(
                                "bridge {}-{} joins non-adjacent piles {} and {}",
                                h.parent, h.child, pp.pile, pc.pile
                            ));
                            bad = true;
                        }
                        Some(d) => {
                            if ov.side_dir(h.parent_side) != d {
                                bridge_violations.push(format!(
                                    "bridge {}-{} leaves through a side not facing the seam",
                                    h.parent, h.child
                                ));
                                bad = true;
                            }
                        }
                    }
                    if bad {
                        continue;
                    }
                    ov.bridge_over(h.parent_side, h.child_side)
                }
            };
            orient[h.child as usize] = Some(next);
            stack.push(h.child);
        }
    }

    let mut flip_mismatches = Vec::new();
    for id in 0..n as u32 {
        match orient[id as usize] {
            Some(o) => {
                if o.face_down != cs.panels[id as usize].flip {
                    flip_mismatches.push(id);
                }
            }
            None => structural_violations.push(format!("panel {id} unreachable in the stack")),
        }
    }

    for (pile, &h) in pile_heights.iter().enumerate() {
        if h != target {
            structural_violations.push(format!("pile {pile} has height {h}, expected {target}"));
        }
    }

    let degrees = cs.degrees();
    let mut degree_histogram = BTreeMap::new();
    for &d in &degrees {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    let mut pile_has_hdn = vec![false; k];
    for (id, &d) in degrees.iter().enumerate() {
        if d >= 3 {
            pile_has_hdn[cs.panels[id].pile as usize] = true;
        }
    }

    StackReport {
        pile_heights,
        side_conflicts,
        bridge_violations,
        flip_mismatches,
        structural_violations,
        degree_histogram,
        pile_has_hdn,
    }
}

/// Occupancy of the flattened configuration on the unit grid.
#[derive(Clone, Debug)]
pub struct FlattenMap {
    /// (x, y) cell -> number of panels landing there.
    pub counts: BTreeMap<(i64, i64), u32>,
    pub max_count: u32,
    pub overlap_cells: usize,
    pub total: usize,
}

/// Open every hinge flat and count panels per grid cell. Closed targets may
/// overlap themselves; the total always equals the panel count.
pub fn flatten_map(cs: &CodedSequence) -> Result<FlattenMap> {
    let fs = deploy_poses(cs, DeployMode::Flattened)?;
    let mut counts: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    for pose in &fs.poses {
        let c = pose.trans;
        let cell = (c[0].round() as i64, c[1].round() as i64);
        let snap_err = (c[0] - cell.0 as f64).abs().max((c[1] - cell.1 as f64).abs()).max(c[2].abs());
        if snap_err > 1e-9 {
            return Err(Error::Verification(format!(
                "flattened panel center {c:?} is not grid aligned"
            )));
        }
        *counts.entry(cell).or_insert(0) += 1;
    }
    let max_count = counts.values().copied().max().unwrap_or(0);
    let overlap_cells = counts.values().filter(|&&c| c > 1).count();
    let total = counts.values().map(|&c| c as usize).sum();
    Ok(FlattenMap { counts, max_count, overlap_cells, total })
}

/// Bounding boxes and the package volume expansion ratio, in units of the
/// panel thickness t.
#[derive(Clone, Debug)]
pub struct VerReport {
    /// Zygote stack box (x, y, z) in t units: footprint times L/t, piles high.
    pub zygote_box: [f64; 3],
    /// Deployed box (x, y, z) in t units, panels extruded t toward their backs.
    pub deployed_box: [f64; 3],
    pub ratio: f64,
}

/// Package volume expansion ratio of a deployed state against its stack.
///
/// `l_ratio` is L/t, the panel side length in thicknesses. Panels occupy
/// the slab behind their outward face, so a closed solid's deployed box is
/// exactly its midplane bounds while a lone flat panel still gets its
/// thickness.
pub fn compute_ver(cs: &CodedSequence, deployed: &FoldState, l_ratio: f64) -> Result<VerReport> {
    if l_ratio.is_nan() || l_ratio <= 0.0 {
        return Err(Error::Contract("L/t ratio must be positive".into()));
    }
    if deployed.poses.len() != cs.panel_count {
        return Err(Error::Contract("fold state does not match the sequence".into()));
    }
    let rows = cs.footprint.iter().map(|c| c.0).max().unwrap_or(0) + 1;
    let cols = cs.footprint.iter().map(|c| c.1).max().unwrap_or(0) + 1;
    let zygote_box = [
        cols as f64 * l_ratio,
        rows as f64 * l_ratio,
        (cs.panel_count / cs.pile_count) as f64,
    ];

    let t = 1.0 / l_ratio;
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for pose in &deployed.poses {
        let n = pose.normal();
        for corner in PANEL_CORNERS {
            let p = pose.apply(corner);
            let back = [p[0] - t * n[0], p[1] - t * n[1], p[2] - t * n[2]];
            for q in [p, back] {
                for i in 0..3 {
                    lo[i] = lo[i].min(q[i]);
                    hi[i] = hi[i].max(q[i]);
                }
            }
        }
    }
    let deployed_box = [
        (hi[0] - lo[0]) * l_ratio,
        (hi[1] - lo[1]) * l_ratio,
        (hi[2] - lo[2]) * l_ratio,
    ];
    let ratio = (deployed_box[0] * deployed_box[1] * deployed_box[2])
        / (zygote_box[0] * zygote_box[1] * zygote_box[2]);
    Ok(VerReport { zygote_box, deployed_box, ratio })
}

/// Wavefront-style export: one quad per panel, panel id as the group name,
/// vertices counterclockwise around the outward normal starting with the
/// side-0 edge.
pub fn export_obj(fs: &FoldState) -> String {
    let mut out = String::new();
    for (id, pose) in fs.poses.iter().enumerate() {
        writeln!(out, "g panel_{id}").unwrap();
        for corner in PANEL_CORNERS {
            let p = pose.apply(corner);
            // +0.0 squashes negative zero.
            writeln!(out, "v {} {} {}", p[0] + 0.0, p[1] + 0.0, p[2] + 0.0).unwrap();
        }
        let base = 4 * id + 1;
        writeln!(out, "f {} {} {} {}", base, base + 1, base + 2, base + 3).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_sheet, extract_dual_graph, FoldAngle, Voxel, VoxelModel};
    use crate::treestack::stack_pipeline;

    fn cube_graph() -> DualGraph {
        extract_dual_graph(&VoxelModel::from_cells([Voxel::new(0, 0, 0)])).unwrap()
    }

    #[test]
    fn single_panel_deploys_at_identity() {
        let g = build_sheet(1, 1).unwrap();
        let cs = stack_pipeline(&g, 1, 0, 10).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        assert_eq!(fs.poses.len(), 1);
        assert_eq!(fs.poses[0].trans, [0.0; 3]);
        assert!(verify_deployed(&fs, &g).ok);
    }

    #[test]
    fn flat_pair_sits_side_by_side() {
        let g = build_sheet(1, 2).unwrap();
        let cs = stack_pipeline(&g, 1, 0, 10).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let (a, b) = (fs.poses[0].trans, fs.poses[1].trans);
        let d = [(a[0] - b[0]).abs(), (a[1] - b[1]).abs(), (a[2] - b[2]).abs()];
        assert_eq!(d[0] + d[1] + d[2], 1.0);
        assert_eq!(fs.poses[0].normal(), fs.poses[1].normal());
    }

    #[test]
    fn cube_sequence_rebuilds_the_cube() {
        let g = cube_graph();
        let cs = stack_pipeline(&g, 1, 2, 20).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let report = verify_deployed(&fs, &g);
        assert!(report.ok, "worst gap {}", report.worst_gap);
        assert_eq!(report.worst_gap, 0.0);

        // Anchored poses land every panel exactly on a cube face.
        let anchor = ground_truth_pose(&g.nodes[fs.root as usize]);
        let centers: std::collections::BTreeSet<[i64; 3]> = fs
            .poses
            .iter()
            .map(|p| {
                let c = anchor.compose(p).trans;
                [(c[0] * 2.0) as i64, (c[1] * 2.0) as i64, (c[2] * 2.0) as i64]
            })
            .collect();
        assert_eq!(centers.len(), 6);
    }

    #[test]
    fn corrupted_angle_is_caught() {
        let g = cube_graph();
        let mut cs = stack_pipeline(&g, 1, 2, 20).unwrap();
        let idx = cs
            .hinges
            .iter()
            .position(|h| h.angle == FoldAngle::Deg90)
            .expect("cube hinges are convex");
        cs.hinges[idx].angle = FoldAngle::Deg270;
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let report = verify_deployed(&fs, &g);
        assert!(!report.ok);
        assert!(report.worst_gap >= 1.0);
    }

    #[test]
    fn sheet_pipeline_round_trips() {
        let g = build_sheet(12, 12).unwrap();
        let cs = stack_pipeline(&g, 4, 5, 40).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        assert!(verify_deployed(&fs, &g).ok);
        let stacked = stacked_layout(&cs);
        assert_eq!(stacked.pile_heights, vec![36; 4]);
        assert_eq!(stacked.conflict_count(), 0);
        assert!((0..4).filter(|&p| stacked.pile_has_hdn[p]).count() >= 3);
    }

    #[test]
    fn strip_stacks_into_one_pile() {
        let g = build_sheet(1, 4).unwrap();
        let cs = stack_pipeline(&g, 1, 0, 10).unwrap();
        let report = stacked_layout(&cs);
        assert_eq!(report.pile_heights, vec![4]);
        assert_eq!(report.conflict_count(), 0);
    }

    #[test]
    fn duplicated_side_reports_conflict() {
        let g = build_sheet(2, 2).unwrap();
        let mut cs = stack_pipeline(&g, 1, 1, 20).unwrap();
        // Corrupt one hinge record to reuse another hinge's slot.
        let other = cs.hinges[0];
        let last = cs.hinges.len() - 1;
        cs.hinges[last].parent = other.parent;
        cs.hinges[last].parent_side = other.parent_side;
        let report = stacked_layout(&cs);
        assert!(!report.side_conflicts.is_empty());
    }

    #[test]
    fn sheet_flattens_without_overlap() {
        let g = build_sheet(12, 12).unwrap();
        let cs = stack_pipeline(&g, 4, 5, 40).unwrap();
        let map = flatten_map(&cs).unwrap();
        assert_eq!(map.max_count, 1);
        assert_eq!(map.overlap_cells, 0);
        assert_eq!(map.total, 144);
    }

    #[test]
    fn cube_flattens_to_a_clean_net() {
        let g = cube_graph();
        let cs = stack_pipeline(&g, 1, 2, 20).unwrap();
        let map = flatten_map(&cs).unwrap();
        assert_eq!(map.max_count, 1);
        assert_eq!(map.total, 6);
    }

    #[test]
    fn ver_identity_is_exactly_one() {
        let g = build_sheet(1, 1).unwrap();
        let cs = stack_pipeline(&g, 1, 0, 10).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let report = compute_ver(&cs, &fs, 100.0).unwrap();
        assert_eq!(report.ratio, 1.0);
    }

    #[test]
    fn ver_of_cube_matches_hand_arithmetic() {
        // Stack: 100t x 100t footprint, 6 panels high. Deployed: the unit
        // cube, 100t per side. 100^3 / (100 * 100 * 6) = 16.67.
        let g = cube_graph();
        let cs = stack_pipeline(&g, 1, 2, 20).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let report = compute_ver(&cs, &fs, 100.0).unwrap();
        let expect = 1_000_000.0 / 60_000.0;
        assert!((report.ratio - expect).abs() < 1e-9, "got {}", report.ratio);
        assert!((report.ratio / 16.7 - 1.0).abs() < 0.02);
    }

    #[test]
    fn ver_is_invariant_under_rigid_motion() {
        let g = build_sheet(4, 4).unwrap();
        let cs = stack_pipeline(&g, 2, 3, 20).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let before = compute_ver(&cs, &fs, 100.0).unwrap();
        let motion = RigidPose {
            rot: pose::rot_quarter([0, 0, 1], 1),
            trans: [7.0, -3.0, 2.5],
        };
        let moved = FoldState {
            mode: fs.mode,
            root: fs.root,
            poses: fs.poses.iter().map(|p| motion.compose(p)).collect(),
        };
        let after = compute_ver(&cs, &moved, 100.0).unwrap();
        assert!((before.ratio - after.ratio).abs() < 1e-12);
    }

    #[test]
    fn flatten_conserves_panels_on_closed_solids() {
        let model = VoxelModel::solid_box([2, 2, 2]);
        let g = extract_dual_graph(&model).unwrap();
        let cs = stack_pipeline(&g, 2, 4, 40).unwrap();
        let map = flatten_map(&cs).unwrap();
        assert_eq!(map.total, 24);
    }

    #[test]
    fn closed_ring_overlaps_when_flattened() {
        // A torus-like surface cannot unfold into the plane injectively
        // along this tree; the count map shows the doubled cells while
        // conserving the panel total.
        let g = extract_dual_graph(&crate::synth::ring_model(10, 1)).unwrap();
        let cs = stack_pipeline(&g, 4, 0, 40).unwrap();
        let map = flatten_map(&cs).unwrap();
        assert!(map.max_count >= 2);
        assert!(map.overlap_cells >= 1);
        assert_eq!(map.total, 144);
    }

    #[test]
    fn obj_export_shape() {
        let g = build_sheet(1, 2).unwrap();
        let cs = stack_pipeline(&g, 1, 0, 10).unwrap();
        let fs = deploy_poses(&cs, DeployMode::Deployed).unwrap();
        let obj = export_obj(&fs);
        let lines: Vec<&str> = obj.lines().collect();
        assert_eq!(lines.iter().filter(|l| l.starts_with("g ")).count(), 2);
        assert_eq!(lines.iter().filter(|l| l.starts_with("v ")).count(), 8);
        assert_eq!(lines.iter().filter(|l| l.starts_with("f ")).count(), 2);
        assert!(lines.contains(&"g panel_0"));
        assert!(!obj.contains("-0 "));
    }
}
