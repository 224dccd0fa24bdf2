//! Voxel model text format: one `x y z` integer triple per line, `#`
//! comments, any order, duplicates rejected.

use super::{Voxel, VoxelModel};
use crate::error::{Error, Result};
use std::fmt::Write as _;

pub fn parse_voxel_text(text: &str) -> Result<VoxelModel> {
    let mut model = VoxelModel::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut coords = [0i64; 3];
        let mut tok = line.split_whitespace();
        for c in &mut coords {
            let t = tok.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected three integers".into(),
            })?;
            *c = t.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad integer '{t}'"),
            })?;
        }
        if tok.next().is_some() {
            return Err(Error::Parse { line: lineno, msg: "trailing tokens after triple".into() });
        }
        let v = Voxel::new(coords[0], coords[1], coords[2]);
        if !model.insert(v) {
            return Err(Error::Duplicate(format!("voxel {} {} {}", v.x, v.y, v.z)));
        }
    }
    Ok(model)
}

pub fn write_voxel_text(model: &VoxelModel) -> String {
    let mut out = String::new();
    for v in model.iter() {
        writeln!(out, "{} {} {}", v.x, v.y, v.z).unwrap();
    }
    out
}
