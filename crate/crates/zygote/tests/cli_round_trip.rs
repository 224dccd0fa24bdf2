//! End-to-end runs through the command-line surface: files in, files out,
//! exit codes as documented (0 ok, 2 input error, 3 search failure,
//! 4 verification failure).

use std::path::PathBuf;
use zygote::cli::run;
use zygote::geometry::{box_mesh, write_voxel_text, Voxel, VoxelModel};

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("zygote-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_str().unwrap().to_string()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn argv(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

#[test]
fn stack_verify_deploy_flatten_ver_on_sheet() {
    let tmp = TempDir::new("sheet");
    let seq = tmp.path("sheet.zyg");

    assert_eq!(
        run(&argv(&["stack", "--sheet", "12x12", "--piles", "4", "--seed", "7", "--out", &seq])),
        0
    );
    assert_eq!(run(&argv(&["verify", &seq, "--sheet", "12x12"])), 0);

    let obj = tmp.path("sheet.obj");
    assert_eq!(run(&argv(&["deploy", &seq, "--out", &obj])), 0);
    let obj_text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(obj_text.lines().filter(|l| l.starts_with("v ")).count(), 4 * 144);

    assert_eq!(run(&argv(&["flatten", &seq])), 0);
    assert_eq!(run(&argv(&["ver", &seq, "--lratio", "100"])), 0);
}

#[test]
fn stack_output_is_seed_deterministic() {
    let tmp = TempDir::new("determinism");
    let (a, b) = (tmp.path("a.zyg"), tmp.path("b.zyg"));
    for out in [&a, &b] {
        assert_eq!(
            run(&argv(&["stack", "--sheet", "6x6", "--piles", "4", "--seed", "11", "--out", out])),
            0
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn voxel_model_file_round_trip() {
    let tmp = TempDir::new("voxels");
    let voxels = tmp.path("cube.txt");
    std::fs::write(&voxels, write_voxel_text(&VoxelModel::from_cells([Voxel::new(0, 0, 0)]))).unwrap();

    let seq = tmp.path("cube.zyg");
    assert_eq!(
        run(&argv(&["stack", "--voxels", &voxels, "--piles", "2", "--seed", "1", "--out", &seq])),
        0
    );
    assert_eq!(run(&argv(&["verify", &seq, "--voxels", &voxels])), 0);

    // The sequence of the cube cannot verify against an unrelated model.
    assert_eq!(run(&argv(&["verify", &seq, "--sheet", "1x6"])), 4);
}

#[test]
fn mesh_input_voxelizes_and_stacks() {
    let tmp = TempDir::new("mesh");
    let mesh_path = tmp.path("box.obj");
    // 2x1x1 box in mesh units -> 2 voxels -> 10 panels at resolution 2.
    let mesh = box_mesh([2.0, 1.0, 1.0]);
    let mut text = String::new();
    for v in &mesh.vertices {
        text.push_str(&format!("v {} {} {}\n", v[0], v[1], v[2]));
    }
    for t in &mesh.triangles {
        text.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
    }
    std::fs::write(&mesh_path, text).unwrap();

    let voxels_out = tmp.path("box.txt");
    assert_eq!(
        run(&argv(&["panelize", "--mesh", &mesh_path, "--res", "2", "--out", &voxels_out])),
        0
    );
    assert_eq!(std::fs::read_to_string(&voxels_out).unwrap().lines().count(), 2);

    let seq = tmp.path("box.zyg");
    assert_eq!(
        run(&argv(&["stack", "--mesh", &mesh_path, "--res", "2", "--piles", "2", "--out", &seq])),
        0
    );
    assert_eq!(run(&argv(&["verify", &seq, "--voxels", &voxels_out])), 0);
}

#[test]
fn input_errors_exit_2() {
    let tmp = TempDir::new("errors");

    // Non-manifold voxel model: diagonal contact.
    let bad = tmp.path("bad.txt");
    std::fs::write(&bad, "0 0 0\n1 1 0\n").unwrap();
    assert_eq!(run(&argv(&["panelize", "--voxels", &bad])), 2);

    // Duplicate voxel line.
    let dup = tmp.path("dup.txt");
    std::fs::write(&dup, "0 0 0\n0 0 0\n").unwrap();
    assert_eq!(run(&argv(&["panelize", "--voxels", &dup])), 2);

    // Open mesh.
    let open_mesh = tmp.path("open.obj");
    std::fs::write(&open_mesh, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
    assert_eq!(run(&argv(&["panelize", "--mesh", &open_mesh, "--res", "2"])), 2);

    // Missing file.
    assert_eq!(run(&argv(&["panelize", "--voxels", &tmp.path("missing.txt")])), 2);

    // Corrupt sequence document.
    let corrupt = tmp.path("corrupt.zyg");
    std::fs::write(&corrupt, "ZYGOTE v1\nN 2 K 1\nFOOT 0 0\nPANEL 0 0 1 0\n").unwrap();
    assert_eq!(run(&argv(&["verify", &corrupt, "--sheet", "1x2"])), 2);
}

#[test]
fn corrupted_sequence_fails_verification() {
    let tmp = TempDir::new("corrupt");
    let seq = tmp.path("strip.zyg");
    assert_eq!(
        run(&argv(&["stack", "--sheet", "1x6", "--piles", "1", "--seed", "0", "--out", &seq])),
        0
    );
    // Flip one hinge's recorded angle; the tree still parses but deploys
    // to the wrong shape.
    let text = std::fs::read_to_string(&seq).unwrap();
    let corrupted = text.replacen(" 180 P", " 90 P", 1);
    assert_ne!(text, corrupted);
    std::fs::write(&seq, corrupted).unwrap();
    assert_eq!(run(&argv(&["verify", &seq, "--sheet", "1x6"])), 4);
}

#[test]
fn search_failure_exits_3() {
    // Single-panel piles can never produce a three-hinge panel in every
    // pile, so the restart rule keeps rejecting and the search gives up.
    assert_eq!(run(&argv(&["stack", "--sheet", "2x2", "--piles", "4", "--max-restarts", "3"])), 3);
}
