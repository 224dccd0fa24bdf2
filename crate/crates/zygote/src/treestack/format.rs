//! The coded-sequence document: UTF-8, line-oriented, one record per entity.
//!
//! ```text
//! ZYGOTE v1
//! N <panels> K <piles>
//! FOOT <row> <col>                                    one per pile, in pile order
//! PANEL <id> <pile> <height> <flip 0|1>               one per panel, by id
//! HINGE <parent> <child> <pside> <cside> <angle> <P|B>
//! BREAK <a> <b>
//! ```

use super::{CodedSequence, Hinge, HingeRole, PanelRecord};
use crate::error::{Error, Result};
use crate::geometry::FoldAngle;
use std::fmt::Write as _;

pub fn write_sequence(cs: &CodedSequence) -> String {
    let mut out = String::new();
    writeln!(out, "ZYGOTE v1").unwrap();
    writeln!(out, "N {} K {}", cs.panel_count, cs.pile_count).unwrap();
    for &(row, col) in &cs.footprint {
        writeln!(out, "FOOT {row} {col}").unwrap();
    }
    for (id, p) in cs.panels.iter().enumerate() {
        writeln!(out, "PANEL {id} {} {} {}", p.pile, p.height, p.flip as u8).unwrap();
    }
    let mut hinges = cs.hinges.clone();
    hinges.sort_by_key(|h| (h.parent, h.child));
    for h in &hinges {
        let role = match h.role {
            HingeRole::Pile => 'P',
            HingeRole::Bridge => 'B',
        };
        writeln!(
            out,
            "HINGE {} {} {} {} {} {role}",
            h.parent,
            h.child,
            h.parent_side,
            h.child_side,
            h.angle.degrees()
        )
        .unwrap();
    }
    let mut breaks = cs.breaks.clone();
    breaks.sort_unstable();
    for (a, b) in breaks {
        writeln!(out, "BREAK {a} {b}").unwrap();
    }
    out
}

struct LineParser<'a> {
    lineno: usize,
    tokens: std::str::SplitWhitespace<'a>,
}

impl<'a> LineParser<'a> {
    fn next_int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let tok = self.tokens.next().ok_or_else(|| Error::Parse {
            line: self.lineno,
            msg: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: self.lineno,
            msg: format!("bad {what} '{tok}'"),
        })
    }

    fn finish(mut self) -> Result<()> {
        if self.tokens.next().is_some() {
            return Err(Error::Parse { line: self.lineno, msg: "trailing tokens".into() });
        }
        Ok(())
    }
}

pub fn parse_sequence(text: &str) -> Result<CodedSequence> {
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty document".into() })?;
    if header.trim() != "ZYGOTE v1" {
        return Err(Error::Parse { line: 1, msg: format!("expected 'ZYGOTE v1', got '{header}'") });
    }

    let (idx, counts_line) =
        lines.next().ok_or(Error::Parse { line: 2, msg: "missing counts line".into() })?;
    let mut tok = counts_line.split_whitespace();
    let (n, k) = match (tok.next(), tok.next(), tok.next(), tok.next(), tok.next()) {
        (Some("N"), Some(n), Some("K"), Some(k), None) => {
            let n: usize = n.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad panel count '{n}'"),
            })?;
            let k: usize = k.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad pile count '{k}'"),
            })?;
            (n, k)
        }
        _ => return Err(Error::Parse { line: idx + 1, msg: "expected 'N <int> K <int>'".into() }),
    };
    if n == 0 || k == 0 || n % k != 0 {
        return Err(Error::Parse { line: idx + 1, msg: format!("bad counts N={n} K={k}") });
    }

    let mut footprint: Vec<(i64, i64)> = Vec::with_capacity(k);
    let mut panels: Vec<Option<PanelRecord>> = vec![None; n];
    let mut hinges: Vec<Hinge> = Vec::new();
    let mut breaks: Vec<(u32, u32)> = Vec::new();

    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let kind = tokens.next().unwrap();
        let mut p = LineParser { lineno, tokens };
        match kind {
            "FOOT" => {
                if footprint.len() == k {
                    return Err(Error::Duplicate(format!("extra FOOT record at line {lineno}")));
                }
                let row: i64 = p.next_int("row")?;
                let col: i64 = p.next_int("col")?;
                p.finish()?;
                footprint.push((row, col));
            }
            "PANEL" => {
                let id: usize = p.next_int("panel id")?;
                let pile: u32 = p.next_int("pile")?;
                let height: u32 = p.next_int("height")?;
                let flip: u8 = p.next_int("flip")?;
                p.finish()?;
                if id >= n {
                    return Err(Error::Parse { line: lineno, msg: format!("panel id {id} out of range") });
                }
                if flip > 1 {
                    return Err(Error::Parse { line: lineno, msg: format!("flip must be 0 or 1, got {flip}") });
                }
                if panels[id].is_some() {
                    return Err(Error::Duplicate(format!("panel {id}")));
                }
                panels[id] = Some(PanelRecord { pile, height, flip: flip == 1 });
            }
            "HINGE" => {
                let parent: u32 = p.next_int("parent")?;
                let child: u32 = p.next_int("child")?;
                let parent_side: u8 = p.next_int("parent side")?;
                let child_side: u8 = p.next_int("child side")?;
                let degrees: u16 = p.next_int("angle")?;
                let role_tok = p.tokens.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "missing role".into(),
                })?;
                let role = match role_tok {
                    "P" => HingeRole::Pile,
                    "B" => HingeRole::Bridge,
                    other => {
                        return Err(Error::Parse { line: lineno, msg: format!("bad role '{other}'") })
                    }
                };
                p.finish()?;
                if parent as usize >= n || child as usize >= n {
                    return Err(Error::Parse { line: lineno, msg: "hinge endpoint out of range".into() });
                }
                if parent_side > 3 || child_side > 3 {
                    return Err(Error::Parse { line: lineno, msg: "side index out of range".into() });
                }
                let angle = FoldAngle::from_degrees(degrees).ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: format!("bad angle {degrees}"),
                })?;
                hinges.push(Hinge { parent, child, parent_side, child_side, angle, role });
            }
            "BREAK" => {
                let a: u32 = p.next_int("panel id")?;
                let b: u32 = p.next_int("panel id")?;
                p.finish()?;
                if a as usize >= n || b as usize >= n || a == b {
                    return Err(Error::Parse { line: lineno, msg: "bad break pair".into() });
                }
                breaks.push((a.min(b), a.max(b)));
            }
            other => {
                return Err(Error::Parse { line: lineno, msg: format!("unknown record '{other}'") })
            }
        }
    }

    if footprint.len() != k {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {k} FOOT records, found {}", footprint.len()),
        });
    }
    let panels: Vec<PanelRecord> = panels
        .into_iter()
        .enumerate()
        .map(|(id, p)| p.ok_or(Error::Parse { line: 0, msg: format!("missing PANEL {id}") }))
        .collect::<Result<_>>()?;

    hinges.sort_by_key(|h| (h.parent, h.child));
    for w in hinges.windows(2) {
        if (w[0].parent, w[0].child) == (w[1].parent, w[1].child) {
            return Err(Error::Duplicate(format!("hinge {} {}", w[0].parent, w[0].child)));
        }
    }
    breaks.sort_unstable();
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Duplicate(format!("break {} {}", w[0].0, w[0].1)));
        }
    }

    let cs = CodedSequence { panel_count: n, pile_count: k, footprint, panels, hinges, breaks };
    cs.validate()?;
    Ok(cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> CodedSequence {
        // 1x2 sheet stacked as one pile of two panels.
        CodedSequence {
            panel_count: 2,
            pile_count: 1,
            footprint: vec![(0, 0)],
            panels: vec![
                PanelRecord { pile: 0, height: 1, flip: false },
                PanelRecord { pile: 0, height: 2, flip: true },
            ],
            hinges: vec![Hinge {
                parent: 0,
                child: 1,
                parent_side: 0,
                child_side: 2,
                angle: FoldAngle::Deg180,
                role: HingeRole::Pile,
            }],
            breaks: vec![],
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let cs = tiny();
        let text = write_sequence(&cs);
        let parsed = parse_sequence(&text).unwrap();
        assert_eq!(parsed, cs);
        assert_eq!(write_sequence(&parsed), text);
    }

    #[test]
    fn header_and_counts_are_strict() {
        assert!(parse_sequence("").is_err());
        assert!(parse_sequence("ZYGOTE v2\nN 1 K 1\n").is_err());
        assert!(parse_sequence("ZYGOTE v1\nN 3 K 2\n").is_err());
    }

    #[test]
    fn duplicates_rejected() {
        let text = write_sequence(&tiny());
        let doubled = format!("{text}PANEL 1 0 2 1\n");
        match parse_sequence(&doubled) {
            Err(Error::Duplicate(_)) => {}
            other => panic!("expected duplicate rejection, got {other:?}"),
        }
    }

    #[test]
    fn unknown_records_rejected() {
        let text = format!("{}WHAT 1 2\n", write_sequence(&tiny()));
        assert!(parse_sequence(&text).is_err());
    }

    #[test]
    fn structural_validation_runs_on_parse() {
        // Drop the only hinge: no longer a spanning tree.
        let mut cs = tiny();
        cs.hinges.clear();
        let text = write_sequence(&cs);
        assert!(parse_sequence(&text).is_err());
    }
}
