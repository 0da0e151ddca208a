//! The flat `key = value` group file.
//!
//! ```text
//! # genus-two surface group
//! kind = surface
//! genus = 2
//! conjugacy_search_radius = 12
//! coset_search_radius = 2
//! max_window_radius = 12
//! ```
//!
//! Blank lines and `#` comments are ignored. Every key may appear once; unknown
//! keys are rejected.

use std::collections::BTreeMap;

use pdstring::builtin::{GroupKind, GroupSpec};

use crate::CliError;

const KEYS: [&str; 6] =
    ["kind", "rank", "genus", "conjugacy_search_radius", "coset_search_radius", "max_window_radius"];

fn spec_error(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

pub fn parse_group_file(text: &str) -> Result<GroupSpec, CliError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(spec_error(format!("line {}: expected key = value", n + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(spec_error(format!("line {}: unknown key {key:?}", n + 1)));
        }
        if entries.insert(key, (n + 1, value)).is_some() {
            return Err(spec_error(format!("line {}: duplicate key {key:?}", n + 1)));
        }
    }
    let number = |key: &str| -> Result<Option<usize>, CliError> {
        entries
            .get(key)
            .map(|(line, v)| {
                v.parse::<usize>()
                    .map_err(|_| spec_error(format!("line {line}: {key} must be a non-negative integer, got {v:?}")))
            })
            .transpose()
    };
    let kind = match entries.get("kind").map(|(_, v)| *v) {
        Some("free_abelian") => {
            if entries.contains_key("genus") {
                return Err(spec_error("genus is not a free_abelian key"));
            }
            GroupKind::FreeAbelian { rank: number("rank")?.ok_or_else(|| spec_error("free_abelian needs rank"))? }
        }
        Some("surface") => {
            if entries.contains_key("rank") {
                return Err(spec_error("rank is not a surface key"));
            }
            GroupKind::Surface { genus: number("genus")?.ok_or_else(|| spec_error("surface needs genus"))? }
        }
        Some(other) => return Err(spec_error(format!("unknown kind {other:?} (free_abelian or surface)"))),
        None => return Err(spec_error("missing kind")),
    };
    let mut spec = GroupSpec::new(kind);
    if let Some(r) = number("conjugacy_search_radius")? {
        spec.bounds.conjugacy_radius = Some(r);
    }
    if let Some(r) = number("coset_search_radius")? {
        spec.bounds.coset_slack = r;
    }
    if let Some(r) = number("max_window_radius")? {
        spec.max_window_radius = r;
    }
    spec.validate().map_err(|e| spec_error(e.to_string()))?;
    Ok(spec)
}
