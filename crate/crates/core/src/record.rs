//! Line-oriented text format for groups.
//!
//! ```text
//! group <name> order <n> kind cayley|perm|sl2|psl2
//! ```
//!
//! followed by `n` rows of `n` indices (cayley), by `degree <d>` and one
//! generator per line in cycle notation (perm), or by `p <prime>` (sl2, psl2).
//! Blank lines and lines starting with `#` are ignored when reading.

use std::fmt::Write as _;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, Realization};
use crate::perm::{Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Group { line: usize, source: GroupError },
    #[error("line {line}: {source}")]
    Perm { line: usize, source: PermError },
    #[error("line {line}: declared order {declared} but the group has order {actual}")]
    OrderMismatch { line: usize, declared: usize, actual: usize },
}

/// Appends the canonical record for `group` to `out`.
pub fn write_group(out: &mut String, group: &FiniteGroup) {
    let kind = match group.realization() {
        Realization::Cayley => "cayley",
        Realization::Permutation { .. } => "perm",
        Realization::Matrix { projective: false, .. } => "sl2",
        Realization::Matrix { projective: true, .. } => "psl2",
    };
    let _ = writeln!(out, "group {} order {} kind {}", group.name(), group.order(), kind);
    match group.realization() {
        Realization::Cayley => {
            let table = group.table().expect("cayley groups carry a table");
            for row in table.chunks(group.order()) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        Realization::Permutation { degree, generators, .. } => {
            let _ = writeln!(out, "degree {}", degree);
            for g in generators {
                let _ = writeln!(out, "{}", g);
            }
        }
        Realization::Matrix { p, .. } => {
            let _ = writeln!(out, "p {}", p);
        }
    }
}

/// A group parsed from text, with the line number of its header.
#[derive(Debug, Clone)]
pub struct ParsedGroup {
    pub line: usize,
    pub group: FiniteGroup,
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Parses consecutive group records.
pub fn read_groups(lines: &[(usize, &str)]) -> Result<Vec<ParsedGroup>, RecordError> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < lines.len() {
        let (line, header) = lines[k];
        let fields: Vec<&str> = header.split_whitespace().collect();
        let syntax = |message: &str| RecordError::Syntax {
            line,
            message: message.to_string(),
        };
        if fields.len() != 6 || fields[0] != "group" || fields[2] != "order" || fields[4] != "kind" {
            return Err(syntax("expected `group <name> order <n> kind <kind>`"));
        }
        let name = fields[1];
        let order: usize = fields[3].parse().map_err(|_| syntax("bad order"))?;
        k += 1;
        let body_end = (k..lines.len())
            .find(|&i| lines[i].1.starts_with("group "))
            .unwrap_or(lines.len());
        let body = &lines[k..body_end];
        k = body_end;
        let group = match fields[5] {
            "cayley" => {
                if body.len() != order {
                    return Err(syntax(&format!("expected {} table rows, found {}", order, body.len())));
                }
                let mut rows = Vec::with_capacity(order);
                for &(l, text) in body {
                    let row: Result<Vec<usize>, _> = text.split_whitespace().map(|t| t.parse::<usize>()).collect();
                    rows.push(row.map_err(|_| RecordError::Syntax {
                        line: l,
                        message: "bad table entry".into(),
                    })?);
                }
                FiniteGroup::from_cayley_table(name, &rows).map_err(|source| RecordError::Group { line, source })?
            }
            "perm" => {
                let Some(&(dl, dtext)) = body.first() else {
                    return Err(syntax("missing `degree <d>` line"));
                };
                let degree: usize = dtext
                    .strip_prefix("degree ")
                    .and_then(|d| d.trim().parse().ok())
                    .ok_or(RecordError::Syntax {
                        line: dl,
                        message: "expected `degree <d>`".into(),
                    })?;
                let mut gens = Vec::new();
                for &(l, text) in &body[1..] {
                    gens.push(Perm::parse_cycles(degree, text).map_err(|source| RecordError::Perm { line: l, source })?);
                }
                let mut g = FiniteGroup::from_perm_generators(name, degree, &gens)
                    .map_err(|source| RecordError::Group { line, source })?;
                g.set_name(name);
                g
            }
            kind @ ("sl2" | "psl2") => {
                let p: Option<u32> = match body {
                    [(_, t)] => t.strip_prefix("p ").and_then(|p| p.trim().parse().ok()),
                    _ => None,
                };
                let p = p.ok_or(syntax("expected a single `p <prime>` line"))?;
                let mut g = if kind == "sl2" {
                    FiniteGroup::sl2(p)
                } else {
                    FiniteGroup::psl2(p)
                }
                .map_err(|source| RecordError::Group { line, source })?;
                g.set_name(name);
                g
            }
            other => return Err(syntax(&format!("unknown kind `{}`", other))),
        };
        if group.order() != order {
            return Err(RecordError::OrderMismatch {
                line,
                declared: order,
                actual: group.order(),
            });
        }
        out.push(ParsedGroup { line, group });
    }
    Ok(out)
}

/// Parses a file containing exactly one group record.
pub fn read_group(text: &str) -> Result<FiniteGroup, RecordError> {
    let lines = content_lines(text);
    let mut groups = read_groups(&lines)?;
    if groups.len() != 1 {
        return Err(RecordError::Syntax {
            line: lines.first().map_or(1, |l| l.0),
            message: format!("expected one group record, found {}", groups.len()),
        });
    }
    Ok(groups.remove(0).group)
}
