//! Panels, voxel solids, and the dual graph of a panelized surface.
//!
//! A voxel solid's boundary decomposes into unit square faces. Each face
//! becomes a panel node; two panels sharing a lattice edge are joined by a
//! hinge-candidate edge carrying the dihedral angle of the deployed surface
//! (90 convex, 180 flat, 270 concave). Open rectangular sheets produce the
//! same structure with every hinge flat.

mod mesh;
mod model_io;

pub use mesh::{box_mesh, parse_obj, voxelize, TriMesh};
pub use model_io::{parse_voxel_text, write_voxel_text};

use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};

pub type IVec3 = [i64; 3];

pub(crate) fn add3(a: IVec3, b: IVec3) -> IVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn neg3(a: IVec3) -> IVec3 {
    [-a[0], -a[1], -a[2]]
}

/// One of the six axis directions a boundary face can point to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

impl Dir {
    pub const ALL: [Dir; 6] = [Dir::PosX, Dir::NegX, Dir::PosY, Dir::NegY, Dir::PosZ, Dir::NegZ];

    pub fn vec(self) -> IVec3 {
        match self {
            Dir::PosX => [1, 0, 0],
            Dir::NegX => [-1, 0, 0],
            Dir::PosY => [0, 1, 0],
            Dir::NegY => [0, -1, 0],
            Dir::PosZ => [0, 0, 1],
            Dir::NegZ => [0, 0, -1],
        }
    }

    /// Side-0 tangent: the cyclically next axis, always positive. Together
    /// with `u1 = normal x u0` this fixes the panel's local frame, and with
    /// it every side label and file format downstream.
    pub fn u0(self) -> IVec3 {
        match self {
            Dir::PosX | Dir::NegX => [0, 1, 0],
            Dir::PosY | Dir::NegY => [0, 0, 1],
            Dir::PosZ | Dir::NegZ => [1, 0, 0],
        }
    }

    pub fn u1(self) -> IVec3 {
        cross3(self.vec(), self.u0())
    }

    /// Tangent direction of side `k` (counterclockwise around the outward normal).
    pub fn tangent(self, side: u8) -> IVec3 {
        match side {
            0 => self.u0(),
            1 => self.u1(),
            2 => neg3(self.u0()),
            3 => neg3(self.u1()),
            _ => panic!("side index {side} out of range"),
        }
    }

    /// Inverse of `tangent`.
    pub fn side_of(self, t: IVec3) -> Option<u8> {
        (0..4).find(|&k| self.tangent(k) == t)
    }
}

pub(crate) fn cross3(a: IVec3, b: IVec3) -> IVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg_attr(not(test), allow(dead_code))]
fn dir_of_vec(v: IVec3) -> Option<Dir> {
    Dir::ALL.into_iter().find(|d| d.vec() == v)
}

/// A unit cell of the integer lattice. One voxel edge is one panel side length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Voxel {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Voxel {
    pub fn new(x: i64, y: i64, z: i64) -> Self {
        Voxel { x, y, z }
    }

    pub fn as_vec(self) -> IVec3 {
        [self.x, self.y, self.z]
    }

    pub fn offset(self, d: IVec3) -> Voxel {
        Voxel::new(self.x + d[0], self.y + d[1], self.z + d[2])
    }
}

/// A set of occupied lattice cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VoxelModel {
    cells: BTreeSet<Voxel>,
}

impl VoxelModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells<I: IntoIterator<Item = Voxel>>(cells: I) -> Self {
        VoxelModel { cells: cells.into_iter().collect() }
    }

    /// Insert a cell; `false` if it was already present.
    pub fn insert(&mut self, v: Voxel) -> bool {
        self.cells.insert(v)
    }

    pub fn contains(&self, v: Voxel) -> bool {
        self.cells.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in lexicographic order; extraction and file output rely on it.
    pub fn iter(&self) -> impl Iterator<Item = Voxel> + '_ {
        self.cells.iter().copied()
    }

    /// Axis-aligned box of cells, handy for building test solids.
    pub fn solid_box(dims: [i64; 3]) -> Self {
        let mut m = VoxelModel::new();
        for x in 0..dims[0] {
            for y in 0..dims[1] {
                for z in 0..dims[2] {
                    m.insert(Voxel::new(x, y, z));
                }
            }
        }
        m
    }
}

/// Where a panel came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Boundary face of a voxel solid: the cell is occupied, the neighbor
    /// across `dir` is not.
    ClosedFace { voxel: Voxel, dir: Dir },
    /// Cell of an open rectangular sheet lying in the z = 0 plane.
    SheetCell { row: i64, col: i64 },
}

/// A uniform square panel with four side slots labeled 0..3 counterclockwise
/// around the outward normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PanelNode {
    pub id: u32,
    pub provenance: Provenance,
}

/// Orthonormal integer frame of a panel in its deployed position:
/// `u0`/`u1` span the square, `normal` points out of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub u0: IVec3,
    pub u1: IVec3,
    pub normal: IVec3,
}

impl PanelNode {
    pub fn frame(&self) -> Frame {
        match self.provenance {
            Provenance::ClosedFace { dir, .. } => Frame { u0: dir.u0(), u1: dir.u1(), normal: dir.vec() },
            Provenance::SheetCell { .. } => {
                Frame { u0: Dir::PosZ.u0(), u1: Dir::PosZ.u1(), normal: Dir::PosZ.vec() }
            }
        }
    }

    /// Panel center doubled, so it stays on the integer lattice.
    pub fn center2(&self) -> IVec3 {
        match self.provenance {
            Provenance::ClosedFace { voxel, dir } => {
                let v = voxel.as_vec();
                let d = dir.vec();
                [2 * v[0] + 1 + d[0], 2 * v[1] + 1 + d[1], 2 * v[2] + 1 + d[2]]
            }
            Provenance::SheetCell { row, col } => [2 * col + 1, 2 * row + 1, 0],
        }
    }

    /// Lattice edge under side `k`: (lower endpoint, axis index).
    fn side_edge_key(&self, side: u8) -> ([i64; 3], usize) {
        let f = self.frame();
        let t = match side {
            0 => f.u0,
            1 => f.u1,
            2 => neg3(f.u0),
            3 => neg3(f.u1),
            _ => panic!("side index {side} out of range"),
        };
        // Edge runs perpendicular to t within the panel plane.
        let e = cross3(f.normal, t);
        let c2 = self.center2();
        let a2 = add3(add3(c2, t), e);
        let b2 = add3(add3(c2, t), neg3(e));
        let a = [a2[0] / 2, a2[1] / 2, a2[2] / 2];
        let b = [b2[0] / 2, b2[1] / 2, b2[2] / 2];
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let axis = (0..3).find(|&i| lo[i] != hi[i]).expect("side edge endpoints coincide");
        (lo, axis)
    }
}

/// Deployed dihedral angle of a hinge, measured through the solid side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoldAngle {
    Deg90,
    Deg180,
    Deg270,
}

impl FoldAngle {
    pub fn degrees(self) -> u16 {
        match self {
            FoldAngle::Deg90 => 90,
            FoldAngle::Deg180 => 180,
            FoldAngle::Deg270 => 270,
        }
    }

    pub fn from_degrees(d: u16) -> Option<FoldAngle> {
        match d {
            90 => Some(FoldAngle::Deg90),
            180 => Some(FoldAngle::Deg180),
            270 => Some(FoldAngle::Deg270),
            _ => None,
        }
    }
}

/// A hinge-candidate edge between two panels, recorded once with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HingeEdge {
    pub a: u32,
    pub side_a: u8,
    pub b: u32,
    pub side_b: u8,
    pub angle: FoldAngle,
}

impl HingeEdge {
    /// Side used by `node`, which must be one of the endpoints.
    pub fn side_of(&self, node: u32) -> u8 {
        if node == self.a {
            self.side_a
        } else if node == self.b {
            self.side_b
        } else {
            panic!("node {node} is not an endpoint of this edge");
        }
    }

    pub fn other(&self, node: u32) -> u32 {
        if node == self.a {
            self.b
        } else if node == self.b {
            self.a
        } else {
            panic!("node {node} is not an endpoint of this edge");
        }
    }
}

/// Panels as nodes, shared surface edges as hinge candidates.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub nodes: Vec<PanelNode>,
    pub edges: Vec<HingeEdge>,
    /// (node, side) -> edge index.
    adj: Vec<[Option<u32>; 4]>,
}

impl DualGraph {
    fn from_parts(nodes: Vec<PanelNode>, edges: Vec<HingeEdge>) -> Result<Self> {
        let mut adj = vec![[None; 4]; nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            for (n, s) in [(e.a, e.side_a), (e.b, e.side_b)] {
                let slot = &mut adj[n as usize][s as usize];
                if slot.is_some() {
                    return Err(Error::Contract(format!("panel {n} side {s} hosts two edges")));
                }
                *slot = Some(i as u32);
            }
        }
        Ok(DualGraph { nodes, edges, adj })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: u32) -> usize {
        self.adj[node as usize].iter().filter(|s| s.is_some()).count()
    }

    /// Edge hanging off a given side slot, if any.
    pub fn edge_at(&self, node: u32, side: u8) -> Option<&HingeEdge> {
        self.adj[node as usize][side as usize].map(|i| &self.edges[i as usize])
    }

    /// Neighbors of `node` in side order 0..3.
    pub fn neighbors(&self, node: u32) -> impl Iterator<Item = &HingeEdge> + '_ {
        self.adj[node as usize]
            .iter()
            .flatten()
            .map(move |&i| &self.edges[i as usize])
    }

    pub fn edge_between(&self, a: u32, b: u32) -> Option<&HingeEdge> {
        self.neighbors(a).find(|e| e.other(a) == b)
    }

    /// Plain adjacency lists (neighbor ids, ascending) for the path solvers.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut lists: Vec<Vec<u32>> = (0..self.node_count() as u32)
            .map(|n| self.neighbors(n).map(|e| e.other(n)).collect())
            .collect();
        for l in &mut lists {
            l.sort_unstable();
        }
        lists
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 0usize;
        while let Some(n) = stack.pop() {
            count += 1;
            for e in self.neighbors(n) {
                let o = e.other(n);
                if !seen[o as usize] {
                    seen[o as usize] = true;
                    stack.push(o);
                }
            }
        }
        count == self.node_count()
    }
}

/// Grid graph of an open `rows x cols` sheet; every hinge deploys flat.
pub fn build_sheet(rows: i64, cols: i64) -> Result<DualGraph> {
    if rows < 1 || cols < 1 {
        return Err(Error::Contract(format!("sheet dims {rows}x{cols} must be at least 1x1")));
    }
    let id = |r: i64, c: i64| (r * cols + c) as u32;
    let mut nodes = Vec::with_capacity((rows * cols) as usize);
    for r in 0..rows {
        for c in 0..cols {
            nodes.push(PanelNode {
                id: id(r, c),
                provenance: Provenance::SheetCell { row: r, col: c },
            });
        }
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                // side 0 is +col, side 2 is -col
                edges.push(HingeEdge {
                    a: id(r, c),
                    side_a: 0,
                    b: id(r, c + 1),
                    side_b: 2,
                    angle: FoldAngle::Deg180,
                });
            }
            if r + 1 < rows {
                edges.push(HingeEdge {
                    a: id(r, c),
                    side_a: 1,
                    b: id(r + 1, c),
                    side_b: 3,
                    angle: FoldAngle::Deg180,
                });
            }
        }
    }
    DualGraph::from_parts(nodes, edges)
}

/// Classify the deployed dihedral angle of two edge-adjacent boundary faces.
///
/// 90 when both faces belong to one voxel (convex corner), 180 when coplanar
/// on adjacent voxels, 270 when they rim an inside notch.
pub fn classify_edge(a: &PanelNode, b: &PanelNode) -> Result<FoldAngle> {
    let shared = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .find(|&(i, j)| a.side_edge_key(i) == b.side_edge_key(j));
    if shared.is_none() {
        return Err(Error::Contract("faces are not edge-adjacent".into()));
    }
    match (a.provenance, b.provenance) {
        (Provenance::SheetCell { .. }, Provenance::SheetCell { .. }) => Ok(FoldAngle::Deg180),
        (Provenance::ClosedFace { voxel: va, dir: da }, Provenance::ClosedFace { voxel: vb, dir: db }) => {
            if va == vb {
                Ok(FoldAngle::Deg90)
            } else if da == db {
                Ok(FoldAngle::Deg180)
            } else {
                Ok(FoldAngle::Deg270)
            }
        }
        _ => Err(Error::Contract("cannot classify a sheet cell against a voxel face".into())),
    }
}

/// Extract the dual graph of a voxel solid's boundary surface.
///
/// Rejects models whose boundary is not a closed 2-manifold: edges where
/// four faces meet (diagonal cell contact) and pinched vertices (corner-only
/// cell contact) are reported, not repaired.
pub fn extract_dual_graph(model: &VoxelModel) -> Result<DualGraph> {
    if model.is_empty() {
        return Err(Error::EmptyModel);
    }

    let mut nodes = Vec::new();
    for v in model.iter() {
        for dir in Dir::ALL {
            if !model.contains(v.offset(dir.vec())) {
                nodes.push(PanelNode {
                    id: nodes.len() as u32,
                    provenance: Provenance::ClosedFace { voxel: v, dir },
                });
            }
        }
    }

    // Every lattice edge on the surface must carry exactly two faces.
    type SurfaceEdge = ([i64; 3], usize);
    let mut edge_faces: HashMap<SurfaceEdge, Vec<(u32, u8)>> = HashMap::new();
    for n in &nodes {
        for side in 0..4u8 {
            edge_faces.entry(n.side_edge_key(side)).or_default().push((n.id, side));
        }
    }
    for (key, faces) in &edge_faces {
        if faces.len() != 2 {
            return Err(Error::NonManifold {
                at: key.0,
                detail: format!("{} boundary faces share one lattice edge", faces.len()),
            });
        }
    }

    // Faces around every lattice vertex must form a single umbrella.
    let mut vertex_links: HashMap<[i64; 3], Vec<(u32, u32)>> = HashMap::new();
    for (key, faces) in &edge_faces {
        let (lo, axis) = *key;
        let mut hi = lo;
        hi[axis] += 1;
        for p in [lo, hi] {
            vertex_links.entry(p).or_default().push((faces[0].0, faces[1].0));
        }
    }
    for (p, links) in &vertex_links {
        let mut ids: Vec<u32> = links.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index = |f: u32| ids.binary_search(&f).unwrap();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for &(a, b) in links {
            let (ra, rb) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
            parent[ra] = rb;
        }
        let roots: BTreeSet<usize> = (0..ids.len()).map(|i| find(&mut parent, i)).collect();
        if roots.len() > 1 {
            return Err(Error::NonManifold {
                at: *p,
                detail: "surface pinches at a lattice vertex".into(),
            });
        }
    }

    let mut keys: Vec<&([i64; 3], usize)> = edge_faces.keys().collect();
    keys.sort();
    let mut edges = Vec::with_capacity(keys.len());
    for key in keys {
        let faces = &edge_faces[key];
        let ((fa, sa), (fb, sb)) = (faces[0], faces[1]);
        let angle = classify_edge(&nodes[fa as usize], &nodes[fb as usize])?;
        let (a, side_a, b, side_b) = if fa < fb { (fa, sa, fb, sb) } else { (fb, sb, fa, sa) };
        edges.push(HingeEdge { a, side_a, b, side_b, angle });
    }
    edges.sort_by_key(|e| (e.a, e.b));

    let g = DualGraph::from_parts(nodes, edges)?;
    if !g.is_connected() {
        return Err(Error::DegenerateInput(
            "boundary surface is disconnected (cavity or multiple shells)".into(),
        ));
    }
    debug_assert!((0..g.node_count() as u32).all(|n| g.degree(n) == 4));
    Ok(g)
}

/// The three-case surface walk: which boundary face lies across side
/// tangent `s` of face `(v, d)`. Used as an independent cross-check of the
/// edge-map pairing.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn walk_neighbor(model: &VoxelModel, v: Voxel, d: Dir, s: IVec3) -> (Voxel, Dir, FoldAngle) {
    let dv = d.vec();
    let diag = v.offset(add3(s, dv));
    let side = v.offset(s);
    if model.contains(diag) {
        (diag, dir_of_vec(neg3(s)).unwrap(), FoldAngle::Deg270)
    } else if model.contains(side) {
        (side, d, FoldAngle::Deg180)
    } else {
        (v, dir_of_vec(s).unwrap(), FoldAngle::Deg90)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tromino() -> VoxelModel {
        VoxelModel::from_cells([Voxel::new(0, 0, 0), Voxel::new(1, 0, 0), Voxel::new(0, 1, 0)])
    }

    fn find_face(g: &DualGraph, v: Voxel, d: Dir) -> u32 {
        g.nodes
            .iter()
            .find(|n| n.provenance == Provenance::ClosedFace { voxel: v, dir: d })
            .unwrap()
            .id
    }

    #[test]
    fn single_voxel_is_octahedral() {
        let g = extract_dual_graph(&VoxelModel::from_cells([Voxel::new(0, 0, 0)])).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!((0..6).all(|n| g.degree(n) == 4));
        // Opposite faces are the only non-adjacent pairs.
        for d in Dir::ALL {
            let a = find_face(&g, Voxel::new(0, 0, 0), d);
            let b = find_face(&g, Voxel::new(0, 0, 0), opposite(d));
            assert!(g.edge_between(a, b).is_none());
        }
        assert!(g.edges.iter().all(|e| e.angle == FoldAngle::Deg90));
    }

    fn opposite(d: Dir) -> Dir {
        dir_of_vec(neg3(d.vec())).unwrap()
    }

    #[test]
    fn domino_counts() {
        let m = VoxelModel::from_cells([Voxel::new(0, 0, 0), Voxel::new(0, 0, 1)]);
        let g = extract_dual_graph(&m).unwrap();
        assert_eq!(g.node_count(), 10);
        assert_eq!(g.edge_count(), 20);
        assert!((0..10).all(|n| g.degree(n) == 4));
    }

    #[test]
    fn tromino_has_concave_edges() {
        let g = extract_dual_graph(&tromino()).unwrap();
        assert_eq!(g.node_count(), 14);
        let a = find_face(&g, Voxel::new(0, 1, 0), Dir::PosX);
        let b = find_face(&g, Voxel::new(1, 0, 0), Dir::PosY);
        assert_eq!(g.edge_between(a, b).unwrap().angle, FoldAngle::Deg270);
        let n270 = g.edges.iter().filter(|e| e.angle == FoldAngle::Deg270).count();
        assert!(n270 >= 1);
    }

    #[test]
    fn classify_matches_walk_rule_on_tromino() {
        let m = tromino();
        let g = extract_dual_graph(&m).unwrap();
        for n in &g.nodes {
            let Provenance::ClosedFace { voxel, dir } = n.provenance else { unreachable!() };
            for side in 0..4u8 {
                let (wv, wd, wangle) = walk_neighbor(&m, voxel, dir, dir.tangent(side));
                let e = g.edge_at(n.id, side).unwrap();
                let other = &g.nodes[e.other(n.id) as usize];
                assert_eq!(other.provenance, Provenance::ClosedFace { voxel: wv, dir: wd });
                assert_eq!(e.angle, wangle);
            }
        }
    }

    #[test]
    fn classify_is_symmetric() {
        let g = extract_dual_graph(&tromino()).unwrap();
        for e in &g.edges {
            let a = &g.nodes[e.a as usize];
            let b = &g.nodes[e.b as usize];
            assert_eq!(classify_edge(a, b).unwrap(), classify_edge(b, a).unwrap());
        }
    }

    #[test]
    fn classify_rejects_non_adjacent() {
        let g = extract_dual_graph(&VoxelModel::from_cells([Voxel::new(0, 0, 0)])).unwrap();
        let a = find_face(&g, Voxel::new(0, 0, 0), Dir::PosX);
        let b = find_face(&g, Voxel::new(0, 0, 0), Dir::NegX);
        assert!(classify_edge(&g.nodes[a as usize], &g.nodes[b as usize]).is_err());
    }

    #[test]
    fn diagonal_contact_rejected() {
        let m = VoxelModel::from_cells([Voxel::new(0, 0, 0), Voxel::new(1, 1, 0)]);
        match extract_dual_graph(&m) {
            Err(Error::NonManifold { .. }) => {}
            other => panic!("expected non-manifold rejection, got {other:?}"),
        }
    }

    #[test]
    fn corner_contact_rejected() {
        let m = VoxelModel::from_cells([Voxel::new(0, 0, 0), Voxel::new(1, 1, 1)]);
        match extract_dual_graph(&m) {
            Err(Error::NonManifold { .. }) => {}
            other => panic!("expected non-manifold rejection, got {other:?}"),
        }
    }

    #[test]
    fn pinched_free_corner_rejected() {
        // 2x2x2 block minus two antipodal cells: every edge is fine but the
        // free space pinches at the center vertex.
        let mut m = VoxelModel::solid_box([2, 2, 2]);
        let mut cells: Vec<Voxel> = m.iter().collect();
        cells.retain(|&v| v != Voxel::new(0, 0, 0) && v != Voxel::new(1, 1, 1));
        m = VoxelModel::from_cells(cells);
        match extract_dual_graph(&m) {
            Err(Error::NonManifold { .. }) => {}
            other => panic!("expected non-manifold rejection, got {other:?}"),
        }
    }

    #[test]
    fn cavity_rejected() {
        let mut cells = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    if (x, y, z) != (1, 1, 1) {
                        cells.push(Voxel::new(x, y, z));
                    }
                }
            }
        }
        assert!(extract_dual_graph(&VoxelModel::from_cells(cells)).is_err());
    }

    #[test]
    fn sheet_counts_match_closed_forms() {
        for r in 1..=32i64 {
            for c in 1..=32i64 {
                let g = build_sheet(r, c).unwrap();
                assert_eq!(g.node_count() as i64, r * c);
                assert_eq!(g.edge_count() as i64, r * (c - 1) + c * (r - 1));
            }
        }
    }

    #[test]
    fn sheet_examples() {
        assert_eq!(build_sheet(1, 1).unwrap().edge_count(), 0);
        let g = build_sheet(2, 2).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (4, 4));
        let g = build_sheet(12, 12).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (144, 264));
        assert!(g.edges.iter().all(|e| e.angle == FoldAngle::Deg180));
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        for m in [
            VoxelModel::from_cells([Voxel::new(0, 0, 0)]),
            tromino(),
            VoxelModel::solid_box([2, 3, 1]),
        ] {
            let g = extract_dual_graph(&m).unwrap();
            let sum: usize = (0..g.node_count() as u32).map(|n| g.degree(n)).sum();
            assert_eq!(sum, 2 * g.edge_count());
        }
    }

    #[test]
    fn box_surface_face_count() {
        // 2(ab + bc + ca) boundary faces for a solid box.
        for (a, b, c) in [(1, 1, 3), (2, 2, 2), (3, 2, 1), (4, 4, 7)] {
            let g = extract_dual_graph(&VoxelModel::solid_box([a, b, c])).unwrap();
            assert_eq!(g.node_count() as i64, 2 * (a * b + b * c + c * a));
            assert!((0..g.node_count() as u32).all(|n| g.degree(n) == 4));
        }
    }
}
