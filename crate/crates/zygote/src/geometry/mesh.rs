//! Triangle soup input and solid voxelization.

use super::{Voxel, VoxelModel};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// A triangle mesh in model units.
#[derive(Clone, Debug, Default)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn bounds(&self) -> Option<([f64; 3], [f64; 3])> {
        let mut it = self.vertices.iter();
        let first = *it.next()?;
        let mut lo = first;
        let mut hi = first;
        for v in it {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        Some((lo, hi))
    }

    /// Closed and orientable: every undirected edge is used by exactly two
    /// triangles, once in each direction.
    fn check_watertight(&self) -> Result<()> {
        let mut edges: HashMap<(u32, u32), (u32, i32)> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if a == b {
                    return Err(Error::DegenerateInput(format!("triangle repeats vertex {a}")));
                }
                let key = (a.min(b), a.max(b));
                let entry = edges.entry(key).or_insert((0, 0));
                entry.0 += 1;
                entry.1 += if a < b { 1 } else { -1 };
            }
        }
        for ((a, b), (count, orient)) in edges {
            if count != 2 || orient != 0 {
                return Err(Error::NonWatertightMesh(format!(
                    "edge {a}-{b} used {count} times (orientation sum {orient})"
                )));
            }
        }
        Ok(())
    }
}

/// Parse Wavefront-style ASCII geometry: `v x y z` vertices and triangular
/// `f` faces. Face entries may carry `/vt/vn` suffixes, which are ignored.
pub fn parse_obj(text: &str) -> Result<TriMesh> {
    let mut mesh = TriMesh::default();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("v") => {
                let mut coord = [0.0f64; 3];
                for c in &mut coord {
                    let t = tok.next().ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: "vertex needs three coordinates".into(),
                    })?;
                    *c = t.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad coordinate '{t}'"),
                    })?;
                }
                mesh.vertices.push(coord);
            }
            Some("f") => {
                let refs: Vec<&str> = tok.collect();
                if refs.len() != 3 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("face has {} vertices, expected 3", refs.len()),
                    });
                }
                let mut tri = [0u32; 3];
                for (slot, r) in tri.iter_mut().zip(&refs) {
                    let head = r.split('/').next().unwrap_or("");
                    let idx: i64 = head.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad face index '{r}'"),
                    })?;
                    let n = mesh.vertices.len() as i64;
                    let resolved = if idx > 0 { idx - 1 } else { n + idx };
                    if resolved < 0 || resolved >= n {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("face index {idx} out of range"),
                        });
                    }
                    *slot = resolved as u32;
                }
                mesh.triangles.push(tri);
            }
            // Normals, texture coordinates, groups, etc. carry no geometry we use.
            Some(_) => {}
            None => {}
        }
    }
    Ok(mesh)
}

/// Sign of `orient2d` with a symbolic perturbation of the query point by
/// (eps, eps^2), so a point exactly on an edge still gets a consistent side.
fn orient2d_perturbed(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> i32 {
    let det = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if det != 0.0 {
        return if det > 0.0 { 1 } else { -1 };
    }
    // det + (b.x - a.x)*eps^2 - (b.y - a.y)*eps; the eps term dominates.
    let e1 = -(b[1] - a[1]);
    if e1 != 0.0 {
        return if e1 > 0.0 { 1 } else { -1 };
    }
    let e2 = b[0] - a[0];
    if e2 > 0.0 {
        1
    } else if e2 < 0.0 {
        -1
    } else {
        0
    }
}

/// Voxelize a closed triangle mesh by testing each cell center against the
/// solid with a +x parity ray. `resolution` is the target voxel count along
/// the longest bounding-box axis.
pub fn voxelize(mesh: &TriMesh, resolution: u32) -> Result<VoxelModel> {
    if resolution < 1 {
        return Err(Error::Contract("resolution must be at least 1".into()));
    }
    if mesh.triangles.is_empty() {
        return Err(Error::DegenerateInput("mesh has no faces".into()));
    }
    mesh.check_watertight()?;
    let (lo, hi) = mesh.bounds().ok_or_else(|| Error::DegenerateInput("mesh has no vertices".into()))?;
    let extent = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
    let longest = extent[0].max(extent[1]).max(extent[2]);
    if longest <= 0.0 || extent.iter().any(|&e| e <= 0.0) {
        return Err(Error::DegenerateInput("mesh bounding box has zero volume".into()));
    }
    let h = longest / resolution as f64;
    let dims: Vec<i64> = extent.iter().map(|&e| ((e / h) - 1e-9).ceil().max(1.0) as i64).collect();

    // Triangles whose yz-projection is degenerate are parallel to the ray
    // and never crossed transversally.
    struct RayTri {
        ayz: [f64; 2],
        byz: [f64; 2],
        cyz: [f64; 2],
        normal: [f64; 3],
        d: f64,
    }
    let mut tris = Vec::with_capacity(mesh.triangles.len());
    for t in &mesh.triangles {
        let a = mesh.vertices[t[0] as usize];
        let b = mesh.vertices[t[1] as usize];
        let c = mesh.vertices[t[2] as usize];
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let normal = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        if normal[0] == 0.0 {
            continue;
        }
        tris.push(RayTri {
            ayz: [a[1], a[2]],
            byz: [b[1], b[2]],
            cyz: [c[1], c[2]],
            normal,
            d: normal[0] * a[0] + normal[1] * a[1] + normal[2] * a[2],
        });
    }

    let mut model = VoxelModel::new();
    for i in 0..dims[0] {
        let px = lo[0] + (i as f64 + 0.5) * h;
        for j in 0..dims[1] {
            let py = lo[1] + (j as f64 + 0.5) * h;
            for k in 0..dims[2] {
                let pz = lo[2] + (k as f64 + 0.5) * h;
                let mut crossings = 0u32;
                for t in &tris {
                    let p = [py, pz];
                    let s0 = orient2d_perturbed(t.ayz, t.byz, p);
                    let s1 = orient2d_perturbed(t.byz, t.cyz, p);
                    let s2 = orient2d_perturbed(t.cyz, t.ayz, p);
                    if s0 == s1 && s1 == s2 && s0 != 0 {
                        let x_hit = (t.d - t.normal[1] * py - t.normal[2] * pz) / t.normal[0];
                        if x_hit > px {
                            crossings += 1;
                        }
                    }
                }
                if crossings % 2 == 1 {
                    model.insert(Voxel::new(i, j, k));
                }
            }
        }
    }
    if model.is_empty() {
        return Err(Error::DegenerateInput("no cell centers fall inside the mesh".into()));
    }
    Ok(model)
}

/// Axis-aligned box mesh, mostly for tests and examples.
pub fn box_mesh(dims: [f64; 3]) -> TriMesh {
    let [dx, dy, dz] = dims;
    let corner = |i: usize| -> [f64; 3] {
        [
            if i & 1 != 0 { dx } else { 0.0 },
            if i & 2 != 0 { dy } else { 0.0 },
            if i & 4 != 0 { dz } else { 0.0 },
        ]
    };
    let vertices: Vec<[f64; 3]> = (0..8).map(corner).collect();
    // Outward-facing quads, each split into two triangles.
    let quads: [[u32; 4]; 6] = [
        [0, 4, 6, 2], // -x
        [1, 3, 7, 5], // +x
        [0, 1, 5, 4], // -y
        [2, 6, 7, 3], // +y
        [0, 2, 3, 1], // -z
        [4, 5, 7, 6], // +z
    ];
    let mut triangles = Vec::new();
    for q in quads {
        triangles.push([q[0], q[1], q[2]]);
        triangles.push([q[0], q[2], q[3]]);
    }
    TriMesh { vertices, triangles }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube_resolution_one() {
        let m = voxelize(&box_mesh([1.0, 1.0, 1.0]), 1).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.contains(Voxel::new(0, 0, 0)));
    }

    #[test]
    fn unit_cube_resolution_two() {
        let m = voxelize(&box_mesh([1.0, 1.0, 1.0]), 2).unwrap();
        assert_eq!(m.len(), 8);
    }

    #[test]
    fn box_1x1x3() {
        let m = voxelize(&box_mesh([1.0, 1.0, 3.0]), 3).unwrap();
        let cells: Vec<Voxel> = m.iter().collect();
        assert_eq!(cells, vec![Voxel::new(0, 0, 0), Voxel::new(0, 0, 1), Voxel::new(0, 0, 2)]);
    }

    #[test]
    fn aligned_boxes_fill_exactly() {
        for (a, b, c) in [(1i64, 2, 3), (2, 2, 2), (4, 1, 2), (3, 4, 2)] {
            let longest = a.max(b).max(c) as u32;
            let m = voxelize(&box_mesh([a as f64, b as f64, c as f64]), longest).unwrap();
            assert_eq!(m.len() as i64, a * b * c, "box {a}x{b}x{c}");
        }
    }

    #[test]
    fn open_mesh_rejected() {
        let mut mesh = box_mesh([1.0, 1.0, 1.0]);
        mesh.triangles.pop();
        match voxelize(&mesh, 2) {
            Err(Error::NonWatertightMesh(_)) => {}
            other => panic!("expected watertight rejection, got {other:?}"),
        }
    }

    #[test]
    fn flat_mesh_rejected() {
        let mesh = TriMesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            triangles: vec![[0, 1, 2], [0, 2, 1]],
        };
        match voxelize(&mesh, 2) {
            Err(Error::DegenerateInput(_)) => {}
            other => panic!("expected degenerate rejection, got {other:?}"),
        }
    }

    #[test]
    fn obj_round_trip() {
        let text = "# cube corner\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 1//1 3/2/1 2/1\n";
        let mesh = parse_obj(text).unwrap();
        assert_eq!(mesh.vertices.len(), 3);
        assert_eq!(mesh.triangles.len(), 2);
        assert_eq!(mesh.triangles[1], [0, 2, 1]);
    }

    #[test]
    fn obj_bad_face_rejected() {
        assert!(parse_obj("v 0 0 0\nf 1 2 9\n").is_err());
        assert!(parse_obj("f 1 2\n").is_err());
    }
}
