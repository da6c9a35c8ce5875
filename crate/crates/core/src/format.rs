//! Plain-text operator descriptions.
//!
//! ```text
//! # Vf = f, Ve_i = e_{i+1}
//! name V
//! lane 0 finite 1 f
//! lane 1 naturals e
//! col 0:0 -> 0:0 1 0
//! tail 1 0 1 1 0
//! ```
//!
//! `lane <id> finite <n>|naturals|integers [label]` declares a lane,
//! `col <l>:<p> -> <l>:<p> <re> <im> [; <l>:<p> <re> <im> ...]` an explicit
//! column and `tail <source> <threshold> <target> <offset> <phase_turns>` a
//! tail rule. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::isometry::{Phase, StructuredIsometry, TailRule};
use crate::vector::{BasisIndex, HVector, LaneDomain, LaneId, LaneSpec};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(line: usize, field: &str, raw: Option<&str>) -> Result<T> {
    let raw = raw.ok_or_else(|| parse_err(line, format!("missing {field}")))?;
    raw.parse().map_err(|_| parse_err(line, format!("bad {field} {raw:?}")))
}

fn index(line: usize, raw: Option<&str>) -> Result<BasisIndex> {
    let raw = raw.ok_or_else(|| parse_err(line, "missing basis index"))?;
    raw.parse().map_err(|e: Error| parse_err(line, e.to_string()))
}

pub fn parse_operator(text: &str) -> Result<StructuredIsometry> {
    let mut name = None;
    let mut lanes = Vec::new();
    let mut columns = BTreeMap::new();
    let mut tails = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        let mut words = body.split_whitespace();
        let Some(keyword) = words.next() else { continue };
        match keyword {
            "name" => name = words.next().map(str::to_string),
            "lane" => {
                let id: u32 = number(line, "lane id", words.next())?;
                let domain = match words.next() {
                    Some("finite") => LaneDomain::Finite(number(line, "finite lane size", words.next())?),
                    Some("naturals") => LaneDomain::Naturals,
                    Some("integers") => LaneDomain::Integers,
                    other => return Err(parse_err(line, format!("unknown lane domain {other:?}"))),
                };
                let label = words.next().map(str::to_string);
                lanes.push(LaneSpec { id: LaneId(id), domain, label });
            }
            "col" => {
                let src = index(line, words.next())?;
                if words.next() != Some("->") {
                    return Err(parse_err(line, "expected '->' after the column index"));
                }
                let rest: Vec<&str> = words.collect();
                let mut entries = Vec::new();
                for term in rest.join(" ").split(';').map(str::trim).filter(|t| !t.is_empty()) {
                    let mut parts = term.split_whitespace();
                    let idx = index(line, parts.next())?;
                    let re: f64 = number(line, "real part", parts.next())?;
                    let im: f64 = number(line, "imaginary part", parts.next())?;
                    if parts.next().is_some() {
                        return Err(parse_err(line, format!("trailing fields in column entry {term:?}")));
                    }
                    entries.push((idx, Complex64::new(re, im)));
                }
                if columns.insert(src, HVector::from_entries(entries)).is_some() {
                    return Err(parse_err(line, format!("duplicate column {src}")));
                }
            }
            "tail" => {
                let source: u32 = number(line, "source lane", words.next())?;
                let threshold: i64 = number(line, "threshold", words.next())?;
                let target: u32 = number(line, "target lane", words.next())?;
                let offset: i64 = number(line, "offset", words.next())?;
                let phase: f64 = match words.next() {
                    Some(raw) => raw.parse().map_err(|_| parse_err(line, format!("bad phase {raw:?}")))?,
                    None => 0.0,
                };
                tails.push(TailRule::new(source, threshold, target, offset).with_phase(Phase::from_turns(phase)));
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        }
    }
    let v = StructuredIsometry::new(lanes, columns, tails)?;
    Ok(match name {
        Some(n) => v.with_name(&n),
        None => v,
    })
}

/// Inverse of [`parse_operator`].
pub fn write_operator(v: &StructuredIsometry) -> String {
    let mut out = String::new();
    if !v.name().is_empty() {
        let _ = writeln!(out, "name {}", v.name().replace(char::is_whitespace, "_"));
    }
    for lane in v.lanes() {
        let domain = match lane.domain {
            LaneDomain::Finite(n) => format!("finite {n}"),
            LaneDomain::Naturals => "naturals".into(),
            LaneDomain::Integers => "integers".into(),
        };
        let _ = write!(out, "lane {} {domain}", lane.id);
        if let Some(label) = &lane.label {
            let _ = write!(out, " {label}");
        }
        out.push('\n');
    }
    for (idx, col) in v.columns() {
        let entries: Vec<String> = col.iter().map(|(i, c)| format!("{i} {} {}", c.re, c.im)).collect();
        let _ = writeln!(out, "col {idx} -> {}", entries.join(" ; "));
    }
    for rule in v.tail_rules() {
        let _ = writeln!(
            out,
            "tail {} {} {} {} {}",
            rule.source,
            rule.threshold,
            rule.target,
            rule.offset,
            rule.phase.turns()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip_catalog_operators() {
        for entry in catalog::fixtures() {
            for v in entry.fixture.operators() {
                let text = write_operator(v);
                let back = parse_operator(&text).unwrap();
                assert_eq!(back.first_difference(v), None, "{}", entry.name);
                assert_eq!(write_operator(&back), text);
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_operator("lane 0 naturals\ntail 0 zero 0 1 0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "bad threshold \"zero\"".into() });
        let err = parse_operator("lane 0 naturals\n\nbogus\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn non_orthogonal_columns_are_reported() {
        let text = "lane 0 finite 2\ncol 0:0 -> 0:0 1 0\ncol 0:1 -> 0:0 0.6 0 ; 0:1 0.8 0\n";
        let err = parse_operator(text).unwrap_err();
        assert!(err.to_string().contains("not orthogonal"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let v = parse_operator("# shift\nname S\n\nlane 0 naturals e # the only lane\ntail 0 0 0 1\n").unwrap();
        assert_eq!(v.name(), "S");
        assert!(v.tail_of(LaneId(0)).is_some());
    }
}
