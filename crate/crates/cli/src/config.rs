//! Input-file parsing: an INI-like format with `[group]`, `[action]`, and
//! an optional `[query]` section, plus a separate limits-override file.
//!
//! ```text
//! [group]
//! rank = 1
//! torsion = []
//!
//! [action]
//! omega = [(0), (1)]
//!
//! [query]
//! expr = atom(0, {1})
//! ```
//!
//! Unknown sections or keys are rejected so that typos cannot silently
//! change the meaning of a run.

use std::collections::BTreeMap;

use cuntz_ideals::group::{parse_elem, GroupElem, GroupSpec};
use cuntz_ideals::{ActionSpec, Error, Limits, Result};

#[derive(Debug, Clone)]
pub struct InputFile {
    pub action: ActionSpec,
    /// Raw key/value pairs of the `[query]` section, in file order.
    pub query: BTreeMap<String, String>,
}

/// Split an INI-like document into sections of key = value lines.
fn split_sections(text: &str) -> Result<Vec<(String, Vec<(String, String)>)>> {
    let mut sections: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            sections.push((name.trim().to_string(), Vec::new()));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
        })?;
        let section = sections.last_mut().ok_or_else(|| {
            Error::Parse(format!("line {}: key before any [section]", lineno + 1))
        })?;
        section.1.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(sections)
}

/// Parse `[a, b, c]` into its comma-separated items, respecting nested
/// brackets and parentheses.
pub fn bracket_items(text: &str) -> Result<Vec<String>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected `[...]`, got `{t}`")))?;
    split_top_level(inner, ',')
}

/// Split on `sep` at nesting depth zero (w.r.t. (), [], {}).
pub fn split_top_level(text: &str, sep: char) -> Result<Vec<String>> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in `{text}`")));
        }
        if c == sep && depth == 0 {
            items.push(current.trim().to_string());
            current.clear();
        } else {
            current.push(c);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{text}`")));
    }
    let last = current.trim().to_string();
    if !last.is_empty() {
        items.push(last);
    }
    Ok(items)
}

pub fn parse_input(text: &str, limits: Limits) -> Result<InputFile> {
    let mut group: Option<GroupSpec> = None;
    let mut rank: usize = 0;
    let mut torsion: Vec<u64> = Vec::new();
    let mut saw_group = false;
    let mut omega_text: Option<String> = None;
    let mut declared_n: Option<usize> = None;
    let mut query: BTreeMap<String, String> = BTreeMap::new();

    for (name, entries) in split_sections(text)? {
        match name.as_str() {
            "group" => {
                saw_group = true;
                for (key, value) in entries {
                    match key.as_str() {
                        "rank" => {
                            rank = value
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad rank `{value}`")))?
                        }
                        "torsion" => {
                            torsion = bracket_items(&value)?
                                .iter()
                                .map(|s| {
                                    s.parse().map_err(|_| {
                                        Error::Parse(format!("bad torsion order `{s}`"))
                                    })
                                })
                                .collect::<Result<_>>()?
                        }
                        other => {
                            return Err(Error::Parse(format!("unknown [group] key `{other}`")))
                        }
                    }
                }
                group = Some(GroupSpec::new(rank, torsion.clone())?);
            }
            "action" => {
                for (key, value) in entries {
                    match key.as_str() {
                        "omega" => omega_text = Some(value),
                        "n" => {
                            declared_n = Some(value.parse().map_err(|_| {
                                Error::Parse(format!("bad weight count `{value}`"))
                            })?)
                        }
                        other => {
                            return Err(Error::Parse(format!("unknown [action] key `{other}`")))
                        }
                    }
                }
            }
            "query" => {
                for (key, value) in entries {
                    if query.insert(key.clone(), value).is_some() {
                        return Err(Error::Parse(format!("duplicate [query] key `{key}`")));
                    }
                }
            }
            other => return Err(Error::Parse(format!("unknown section `[{other}]`"))),
        }
    }

    if !saw_group {
        return Err(Error::Parse("missing [group] section".into()));
    }
    let group = group.expect("constructed above");
    let omega_text =
        omega_text.ok_or_else(|| Error::Parse("missing `omega` in [action]".into()))?;
    let omega: Vec<GroupElem> = bracket_items(&omega_text)?
        .iter()
        .map(|s| parse_elem(&group, s))
        .collect::<Result<_>>()?;
    if let Some(n) = declared_n {
        if n != omega.len() {
            return Err(Error::Parse(format!(
                "declared n = {n} but omega lists {} weights",
                omega.len()
            )));
        }
    }
    let action = ActionSpec::with_limits(group, omega, limits)?;
    Ok(InputFile { action, query })
}

/// Parse a limits-override file: `key = value` lines using the field names
/// of the limit set; unspecified keys keep their defaults.
pub fn parse_limits(text: &str) -> Result<Limits> {
    let mut limits = Limits::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |_| Error::Parse(format!("bad value `{value}` for `{key}`"));
        match key {
            "max_rank" => limits.max_rank = value.parse().map_err(bad)?,
            "max_n" => limits.max_n = value.parse().map_err(bad)?,
            "max_coord" => limits.max_coord = value.parse().map_err(bad)?,
            "max_torsion_lcm" => limits.max_torsion_lcm = value.parse().map_err(bad)?,
            "max_search_states" => limits.max_search_states = value.parse().map_err(bad)?,
            "max_finite_order" => limits.max_finite_order = value.parse().map_err(bad)?,
            "max_kgroup_order" => limits.max_kgroup_order = value.parse().map_err(bad)?,
            "max_brute_force_order" => {
                limits.max_brute_force_order = value.parse().map_err(bad)?
            }
            "max_dot_nodes" => limits.max_dot_nodes = value.parse().map_err(bad)?,
            other => return Err(Error::Parse(format!("unknown limit `{other}`"))),
        }
    }
    Ok(limits)
}
