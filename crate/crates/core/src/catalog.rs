//! A complete, isomorphism-deduplicated list of the groups of order at most
//! some bound.
//!
//! Orders up to [`MAX_ENUMERATED`] are produced by Cayley-table enumeration;
//! orders 13 through 16 come from explicit constructions and are validated
//! against the known counts. Entries are ordered by group order, then by
//! descending element-order profile (so the cyclic group is always first),
//! and get stable ids `o<order>-<k>`.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::enumerate::for_each_table;
use crate::group::FiniteGroup;
use crate::iso::isomorphic;
use crate::record::{content_lines, read_groups, write_group, RecordError};
use crate::small::{classical_groups, known_count, MAX_KNOWN_ORDER};

/// Largest order produced by table enumeration.
pub const MAX_ENUMERATED: usize = 12;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("max order {0} outside the supported range")]
    MaxOrder(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error("entries {first} and {second} are isomorphic")]
    Duplicate { first: String, second: String },
    #[error("order {order}: found {found} groups, expected {expected}")]
    Count { order: usize, found: usize, expected: usize },
    #[error("catalog must be extended from a complete catalog through order {0}")]
    Incomplete(usize),
    #[error("entry for order {order} out of canonical order at line {line}")]
    Unsorted { order: usize, line: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Enumerated,
    Handcoded,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub group: FiniteGroup,
    pub provenance: Provenance,
}

#[derive(Debug, Clone)]
pub struct GroupCatalog {
    max_order: usize,
    entries: Vec<CatalogEntry>,
}

impl GroupCatalog {
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries of order at most `bound`.
    pub fn up_to(&self, bound: usize) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.group.order() <= bound)
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Number of entries of each order `1..=max_order`.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_order];
        for e in &self.entries {
            c[e.group.order() - 1] += 1;
        }
        c
    }

    fn from_groups(max_order: usize, mut groups: Vec<(FiniteGroup, Provenance)>) -> GroupCatalog {
        groups.sort_by(|a, b| {
            a.0.order()
                .cmp(&b.0.order())
                .then_with(|| b.0.order_profile().cmp(&a.0.order_profile()))
        });
        let mut entries = Vec::with_capacity(groups.len());
        let mut k = 0;
        let mut last_order = 0;
        for (group, provenance) in groups {
            if group.order() != last_order {
                last_order = group.order();
                k = 0;
            }
            k += 1;
            entries.push(CatalogEntry {
                id: format!("o{}-{}", group.order(), k),
                group,
                provenance,
            });
        }
        GroupCatalog { max_order, entries }
    }

    /// Canonical text serialization.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "catalog max_order {} entries {}", self.max_order, self.entries.len());
        for e in &self.entries {
            write_group(&mut out, &e.group);
        }
        out
    }

    /// Parses and fully revalidates a catalog.
    pub fn from_text(text: &str) -> Result<GroupCatalog, CatalogError> {
        let lines = content_lines(text);
        let Some(&(hline, header)) = lines.first() else {
            return Err(CatalogError::Syntax {
                line: 1,
                message: "empty catalog".into(),
            });
        };
        let f: Vec<&str> = header.split_whitespace().collect();
        let parsed = match f.as_slice() {
            ["catalog", "max_order", b, "entries", c] => b.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
            _ => None,
        };
        let (max_order, count) = parsed.ok_or(CatalogError::Syntax {
            line: hline,
            message: "expected `catalog max_order <B> entries <count>`".into(),
        })?;
        if max_order == 0 || max_order > MAX_KNOWN_ORDER {
            return Err(CatalogError::MaxOrder(max_order));
        }
        let groups = read_groups(&lines[1..])?;
        if groups.len() != count {
            return Err(CatalogError::Syntax {
                line: hline,
                message: format!("header declares {} entries, found {}", count, groups.len()),
            });
        }
        let mut entries: Vec<CatalogEntry> = Vec::with_capacity(groups.len());
        let mut k = 0;
        let mut last_order = 0;
        for pg in groups {
            let order = pg.group.order();
            if order < last_order || order > max_order {
                return Err(CatalogError::Unsorted { order, line: pg.line });
            }
            if order != last_order {
                last_order = order;
                k = 0;
            }
            k += 1;
            let provenance = match pg.group.realization() {
                crate::group::Realization::Cayley => Provenance::Enumerated,
                _ => Provenance::Handcoded,
            };
            entries.push(CatalogEntry {
                id: format!("o{}-{}", order, k),
                group: pg.group,
                provenance,
            });
        }
        let catalog = GroupCatalog { max_order, entries };
        catalog.validate()?;
        Ok(catalog)
    }

    /// Checks the per-order counts against the known classification and that
    /// no two entries are isomorphic.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for (i, e) in self.entries.iter().enumerate() {
            for other in &self.entries[..i] {
                if other.group.order() == e.group.order() && isomorphic(&other.group, &e.group) {
                    return Err(CatalogError::Duplicate {
                        first: other.id.clone(),
                        second: e.id.clone(),
                    });
                }
            }
        }
        for (i, &found) in self.counts().iter().enumerate() {
            let order = i + 1;
            let expected = known_count(order).ok_or(CatalogError::MaxOrder(self.max_order))?;
            if found != expected {
                return Err(CatalogError::Count { order, found, expected });
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), CatalogError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<GroupCatalog, CatalogError> {
        GroupCatalog::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Enumerates every group of order at most `max_order` (at most 12) from
/// Cayley tables, one entry per isomorphism class.
pub fn enumerate_groups(max_order: usize) -> Result<GroupCatalog, CatalogError> {
    if max_order == 0 || max_order > MAX_ENUMERATED {
        return Err(CatalogError::MaxOrder(max_order));
    }
    let mut groups = Vec::new();
    for n in 1..=max_order {
        let reps = enumerate_order(n);
        for mut g in reps {
            g.set_name(&classical_name(&g).unwrap_or_else(|| format!("G{}", n)));
            groups.push((g, Provenance::Enumerated));
        }
    }
    Ok(GroupCatalog::from_groups(max_order, groups))
}

/// One group per isomorphism class among the enumerated tables of order `n`.
fn enumerate_order(n: usize) -> Vec<FiniteGroup> {
    let mut reps: Vec<FiniteGroup> = Vec::new();
    for_each_table(n, &mut |t| {
        let flat: Vec<u32> = t.iter().map(|&v| v as u32).collect();
        let g = FiniteGroup::from_flat_table("table", flat, n)
            .unwrap_or_else(|e| panic!("enumerator produced an invalid table: {e}"));
        if !reps.iter().any(|r| isomorphic(r, &g)) {
            reps.push(g);
        }
    });
    reps
}

fn classical_name(g: &FiniteGroup) -> Option<String> {
    classical_groups(g.order())
        .into_iter()
        .find(|c| isomorphic(c, g))
        .map(|c| c.name().to_string())
}

/// Appends the explicit constructions for orders `catalog.max_order() + 1`
/// through `through_order` (at most 16) and revalidates.
pub fn handcoded_extension(catalog: GroupCatalog, through_order: usize) -> Result<GroupCatalog, CatalogError> {
    if through_order > MAX_KNOWN_ORDER || through_order < catalog.max_order {
        return Err(CatalogError::MaxOrder(through_order));
    }
    if catalog.max_order < MAX_ENUMERATED {
        return Err(CatalogError::Incomplete(MAX_ENUMERATED));
    }
    let mut groups: Vec<(FiniteGroup, Provenance)> =
        catalog.entries.into_iter().map(|e| (e.group, e.provenance)).collect();
    for n in catalog.max_order + 1..=through_order {
        for g in classical_groups(n) {
            groups.push((g, Provenance::Handcoded));
        }
    }
    let extended = GroupCatalog::from_groups(through_order, groups);
    extended.validate()?;
    Ok(extended)
}

/// The complete catalog through order 16.
pub fn standard_catalog() -> Result<GroupCatalog, CatalogError> {
    handcoded_extension(enumerate_groups(MAX_ENUMERATED)?, MAX_KNOWN_ORDER)
}
