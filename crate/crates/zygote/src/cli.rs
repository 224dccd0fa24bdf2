//! Command-line front end.
//!
//! Subcommands: `panelize`, `stack`, `verify`, `deploy`, `flatten`, `ver`.
//! Logs go to standard error; data goes to `--out` files or standard
//! output. Exit codes: 0 ok, 2 input error, 3 search failure,
//! 4 verification failure.

use crate::error::{Error, Result};
use crate::foldsim::{
    compute_ver, deploy_poses, export_obj, flatten_map, stacked_layout, verify_deployed, DeployMode,
};
use crate::geometry::{
    build_sheet, extract_dual_graph, parse_obj, parse_voxel_text, voxelize, write_voxel_text,
    DualGraph, VoxelModel,
};
use crate::treestack::{parse_sequence, stack_pipeline_traced, write_sequence, CodedSequence};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Where the panels come from.
#[derive(Clone, Debug, PartialEq)]
pub enum InputKind {
    Sheet { rows: i64, cols: i64 },
    Voxels(PathBuf),
    Mesh { path: PathBuf, resolution: u32 },
}

/// One stacking job, fully specified.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub input: InputKind,
    pub piles: usize,
    pub seed: u64,
    pub max_restarts: u32,
    pub l_ratio: f64,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_MAX_RESTARTS: u32 = 40;
pub const DEFAULT_L_RATIO: f64 = 100.0;

const USAGE: &str = "\
usage: zygote <command> [flags]

commands:
  panelize   build panels from a model and print dual-graph stats
  stack      search for a coded sequence that stacks the panels into piles
  verify     check a sequence file against its model, deployed and stacked
  deploy     export the deployed geometry of a sequence file
  flatten    report (and optionally export) the flattened layout
  ver        report the package volume expansion ratio

model flags (panelize, stack, verify):
  --sheet RxC          open sheet with R rows and C columns
  --voxels FILE        voxel model, one 'x y z' per line
  --mesh FILE --res N  watertight triangle mesh voxelized to N cells along
                       its longest axis

other flags:
  --piles K            pile count (default 1)
  --seed S             random seed (default 0)
  --max-restarts M     pipeline restarts (default 40)
  --lratio X           panel side length over thickness (default 100)
  --out FILE           output path (default standard output)

sequence commands take the sequence file as a positional argument:
  zygote verify out.zyg --sheet 12x12
";

/// Run the CLI against an argument list (excluding the program name) and
/// return the process exit code.
pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SearchExhausted { .. }
        | Error::BudgetExhausted { .. }
        | Error::Infeasible(_)
        | Error::PileUnbridgeable { .. }
        | Error::PlacementDisconnected
        | Error::Assembly(_) => 3,
        Error::Verification(_) => 4,
        _ => 2,
    }
}

struct Parsed {
    positional: Vec<String>,
    flags: BTreeMap<String, String>,
}

fn parse_args(args: &[String]) -> Result<Parsed> {
    const KNOWN: [&str; 9] = [
        "--sheet",
        "--voxels",
        "--mesh",
        "--res",
        "--piles",
        "--seed",
        "--max-restarts",
        "--lratio",
        "--out",
    ];
    let mut positional = Vec::new();
    let mut flags = BTreeMap::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--") {
            if !KNOWN.contains(&arg.as_str()) {
                return Err(Error::Contract(format!("unknown flag '{arg}'")));
            }
            let value = it
                .next()
                .ok_or_else(|| Error::Contract(format!("flag '{arg}' needs a value")))?;
            if flags.insert(name.to_string(), value.clone()).is_some() {
                return Err(Error::Contract(format!("flag '{arg}' given twice")));
            }
        } else {
            positional.push(arg.clone());
        }
    }
    Ok(Parsed { positional, flags })
}

impl Parsed {
    fn take_input(&mut self) -> Result<InputKind> {
        let sheet = self.flags.remove("sheet");
        let voxels = self.flags.remove("voxels");
        let mesh = self.flags.remove("mesh");
        let res = self.flags.remove("res");
        let given = [sheet.is_some(), voxels.is_some(), mesh.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(Error::Contract(
                "exactly one of --sheet, --voxels, --mesh is required".into(),
            ));
        }
        if let Some(spec) = sheet {
            let (r, c) = spec
                .split_once('x')
                .ok_or_else(|| Error::Contract(format!("bad sheet spec '{spec}', expected RxC")))?;
            let rows: i64 =
                r.parse().map_err(|_| Error::Contract(format!("bad sheet rows '{r}'")))?;
            let cols: i64 =
                c.parse().map_err(|_| Error::Contract(format!("bad sheet cols '{c}'")))?;
            if res.is_some() {
                return Err(Error::Contract("--res only applies to --mesh".into()));
            }
            return Ok(InputKind::Sheet { rows, cols });
        }
        if let Some(path) = voxels {
            if res.is_some() {
                return Err(Error::Contract("--res only applies to --mesh".into()));
            }
            return Ok(InputKind::Voxels(PathBuf::from(path)));
        }
        let path = mesh.unwrap();
        let res = res.ok_or_else(|| Error::Contract("--mesh requires --res".into()))?;
        let resolution: u32 =
            res.parse().map_err(|_| Error::Contract(format!("bad resolution '{res}'")))?;
        Ok(InputKind::Mesh { path: PathBuf::from(path), resolution })
    }

    fn take_u64(&mut self, name: &str, default: u64) -> Result<u64> {
        match self.flags.remove(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Contract(format!("bad --{name} '{v}'"))),
        }
    }

    fn take_f64(&mut self, name: &str, default: f64) -> Result<f64> {
        match self.flags.remove(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Contract(format!("bad --{name} '{v}'"))),
        }
    }

    fn take_out(&mut self) -> Option<PathBuf> {
        self.flags.remove("out").map(PathBuf::from)
    }

    fn finish(self, expected_positionals: usize) -> Result<Vec<String>> {
        if let Some((name, _)) = self.flags.into_iter().next() {
            return Err(Error::Contract(format!("flag '--{name}' does not apply here")));
        }
        if self.positional.len() != expected_positionals {
            return Err(Error::Contract(format!(
                "expected {expected_positionals} positional argument(s), got {}",
                self.positional.len()
            )));
        }
        Ok(self.positional)
    }
}

/// Load the model behind an input spec and build its dual graph.
fn load_graph(input: &InputKind) -> Result<(Option<VoxelModel>, DualGraph)> {
    match input {
        InputKind::Sheet { rows, cols } => Ok((None, build_sheet(*rows, *cols)?)),
        InputKind::Voxels(path) => {
            let text = std::fs::read_to_string(path)?;
            let model = parse_voxel_text(&text)?;
            let g = extract_dual_graph(&model)?;
            Ok((Some(model), g))
        }
        InputKind::Mesh { path, resolution } => {
            let text = std::fs::read_to_string(path)?;
            let mesh = parse_obj(&text)?;
            let model = voxelize(&mesh, *resolution)?;
            let g = extract_dual_graph(&model)?;
            Ok((Some(model), g))
        }
    }
}

fn emit(out: &Option<PathBuf>, data: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn dispatch(args: &[String]) -> Result<()> {
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return Err(Error::Contract("missing command".into()));
    };
    let rest = &args[1..];
    match command.as_str() {
        "panelize" => cmd_panelize(rest),
        "stack" => cmd_stack_args(rest),
        "verify" => cmd_verify(rest),
        "deploy" => cmd_deploy(rest),
        "flatten" => cmd_flatten(rest),
        "ver" => cmd_ver(rest),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(())
        }
        other => {
            eprint!("{USAGE}");
            Err(Error::Contract(format!("unknown command '{other}'")))
        }
    }
}

/// Panelize a model and print dual-graph stats; `--out` writes the voxel
/// model file for solid inputs.
fn cmd_panelize(args: &[String]) -> Result<()> {
    let mut parsed = parse_args(args)?;
    let input = parsed.take_input()?;
    let out = parsed.take_out();
    parsed.finish(0)?;

    let (model, g) = load_graph(&input)?;
    if let Some(path) = out {
        match &model {
            Some(m) => std::fs::write(&path, write_voxel_text(m))?,
            None => {
                return Err(Error::Contract(
                    "--out needs a solid input; sheets have no voxel file".into(),
                ))
            }
        }
    }
    let mut stats = String::new();
    writeln!(stats, "N {}", g.node_count()).unwrap();
    writeln!(stats, "EDGES {}", g.edge_count()).unwrap();
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for n in 0..g.node_count() as u32 {
        *hist.entry(g.degree(n)).or_insert(0) += 1;
    }
    for (d, count) in hist {
        writeln!(stats, "DEGREE {d} {count}").unwrap();
    }
    print!("{stats}");
    Ok(())
}

/// Run the stacking pipeline described by a job config. Used by the `stack`
/// subcommand and by integration tests.
pub fn cmd_stack(job: &JobConfig) -> Result<CodedSequence> {
    let (_, g) = load_graph(&job.input)?;
    let (result, trace) = stack_pipeline_traced(&g, job.piles, job.seed, job.max_restarts);
    eprintln!("stack: {} attempt(s) used", trace.attempts);
    for (stage, count) in &trace.failures {
        eprintln!("stack: stage {stage} failed {count} time(s)");
    }
    let cs = result?;
    eprintln!(
        "stack: N={} K={} bridges={} breaks={}",
        cs.panel_count,
        cs.pile_count,
        cs.bridge_count(),
        cs.breaks.len()
    );
    Ok(cs)
}

fn cmd_stack_args(args: &[String]) -> Result<()> {
    let mut parsed = parse_args(args)?;
    let job = JobConfig {
        input: parsed.take_input()?,
        piles: parsed.take_u64("piles", 1)? as usize,
        seed: parsed.take_u64("seed", 0)?,
        max_restarts: parsed.take_u64("max-restarts", DEFAULT_MAX_RESTARTS as u64)? as u32,
        l_ratio: parsed.take_f64("lratio", DEFAULT_L_RATIO)?,
        out: parsed.take_out(),
    };
    parsed.finish(0)?;
    let cs = cmd_stack(&job)?;
    emit(&job.out, &write_sequence(&cs))
}

fn load_sequence(path: &str) -> Result<CodedSequence> {
    let text = std::fs::read_to_string(path)?;
    parse_sequence(&text)
}

fn cmd_verify(args: &[String]) -> Result<()> {
    let mut parsed = parse_args(args)?;
    let input = parsed.take_input()?;
    let out = parsed.take_out();
    let positional = parsed.finish(1)?;
    let cs = load_sequence(&positional[0])?;
    let (_, g) = load_graph(&input)?;
    if g.node_count() != cs.panel_count {
        return Err(Error::Verification(format!(
            "model has {} panels but sequence has {}",
            g.node_count(),
            cs.panel_count
        )));
    }

    let fs = deploy_poses(&cs, DeployMode::Deployed)?;
    let deploy = verify_deployed(&fs, &g);
    let stacked = stacked_layout(&cs);

    let mut report = String::new();
    writeln!(report, "DEPLOY_OK {}", deploy.ok as u8).unwrap();
    writeln!(report, "WORST_GAP {}", deploy.worst_gap).unwrap();
    writeln!(report, "NORMALS_BAD {}", deploy.mismatched_normals).unwrap();
    writeln!(report, "SIDE_CONFLICTS {}", stacked.side_conflicts.len()).unwrap();
    writeln!(report, "BRIDGE_VIOLATIONS {}", stacked.bridge_violations.len()).unwrap();
    writeln!(report, "FLIP_MISMATCHES {}", stacked.flip_mismatches.len()).unwrap();
    writeln!(report, "STRUCTURE_VIOLATIONS {}", stacked.structural_violations.len()).unwrap();
    for (pile, h) in stacked.pile_heights.iter().enumerate() {
        writeln!(report, "PILE_HEIGHT {pile} {h}").unwrap();
    }
    for (d, count) in &stacked.degree_histogram {
        writeln!(report, "DEGREE {d} {count}").unwrap();
    }
    emit(&out, &report)?;

    if !deploy.ok || stacked.conflict_count() > 0 {
        return Err(Error::Verification("sequence does not reproduce the model".into()));
    }
    Ok(())
}

fn cmd_deploy(args: &[String]) -> Result<()> {
    let mut parsed = parse_args(args)?;
    let out = parsed.take_out();
    let positional = parsed.finish(1)?;
    let cs = load_sequence(&positional[0])?;
    let fs = deploy_poses(&cs, DeployMode::Deployed)?;
    emit(&out, &export_obj(&fs))
}

fn cmd_flatten(args: &[String]) -> Result<()> {
    let mut parsed = parse_args(args)?;
    let out = parsed.take_out();
    let positional = parsed.finish(1)?;
    let cs = load_sequence(&positional[0])?;
    let map = flatten_map(&cs)?;

    let mut report = String::new();
    writeln!(report, "MAX_COUNT {}", map.max_count).unwrap();
    writeln!(report, "OVERLAP_CELLS {}", map.overlap_cells).unwrap();
    writeln!(report, "TOTAL {}", map.total).unwrap();
    print!("{report}");

    if let Some(path) = out {
        let fs = deploy_poses(&cs, DeployMode::Flattened)?;
        std::fs::write(path, export_obj(&fs))?;
    }
    Ok(())
}

fn cmd_ver(args: &[String]) -> Result<()> {
    let mut parsed = parse_args(args)?;
    let l_ratio = parsed.take_f64("lratio", DEFAULT_L_RATIO)?;
    let out = parsed.take_out();
    let positional = parsed.finish(1)?;
    let cs = load_sequence(&positional[0])?;
    let fs = deploy_poses(&cs, DeployMode::Deployed)?;
    let ver = compute_ver(&cs, &fs, l_ratio)?;

    let mut report = String::new();
    writeln!(
        report,
        "ZYGOTE_BOX {:.3} {:.3} {:.3}",
        ver.zygote_box[0], ver.zygote_box[1], ver.zygote_box[2]
    )
    .unwrap();
    writeln!(
        report,
        "DEPLOYED_BOX {:.3} {:.3} {:.3}",
        ver.deployed_box[0], ver.deployed_box[1], ver.deployed_box[2]
    )
    .unwrap();
    writeln!(report, "VER {:.6}", ver.ratio).unwrap();
    emit(&out, &report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn unknown_flags_are_errors() {
        assert_eq!(run(&argv("stack --sheet 4x4 --piles 2 --frobnicate 1")), 2);
        assert_eq!(run(&argv("panelize --sheet 4x4 --what yes")), 2);
    }

    #[test]
    fn unknown_command_is_an_error() {
        assert_eq!(run(&argv("transmogrify")), 2);
        assert_eq!(run(&[]), 2);
    }

    #[test]
    fn indivisible_piles_exit_2() {
        assert_eq!(run(&argv("stack --sheet 12x12 --piles 5")), 2);
    }

    #[test]
    fn sheet_spec_parsing() {
        let mut p = parse_args(&argv("--sheet 12x12")).unwrap();
        assert_eq!(p.take_input().unwrap(), InputKind::Sheet { rows: 12, cols: 12 });
        let mut p = parse_args(&argv("--sheet twelve")).unwrap();
        assert!(p.take_input().is_err());
        let mut p = parse_args(&argv("--voxels a.txt --sheet 2x2")).unwrap();
        assert!(p.take_input().is_err());
        let mut p = parse_args(&argv("--mesh m.obj")).unwrap();
        assert!(p.take_input().is_err());
    }
}
