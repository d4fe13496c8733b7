//! Deterministic string renderings of group elements and sets.

use cuntz_ideals::group::GroupElem;
use cuntz_ideals::sets::{FiniteSet, FinitarySet};
use cuntz_ideals::Result;

/// `0` for a single coordinate, `(1, 0)` otherwise.
pub fn elem_str(e: &GroupElem) -> String {
    let coords = e.coords();
    if coords.len() == 1 {
        coords[0].to_string()
    } else {
        format!(
            "({})",
            coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        )
    }
}

/// `{0, 2}` in enumeration order.
pub fn finite_set_str(x: &FiniteSet) -> Result<String> {
    let members: Vec<String> = x.members()?.iter().map(elem_str).collect();
    Ok(format!("{{{}}}", members.join(", ")))
}

fn indices_str(indices: &std::collections::BTreeSet<usize>) -> String {
    format!(
        "{{{}}}",
        indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    )
}

/// Atom-union form: `atom(0,{1}) ∪ atom(-7,{1})`.
pub fn finitary_str(x: &FinitarySet) -> String {
    if x.atoms().is_empty() {
        return "{}".to_string();
    }
    x.atoms()
        .iter()
        .map(|a| format!("atom({},{})", elem_str(&a.base), indices_str(&a.indices)))
        .collect::<Vec<_>>()
        .join(" ∪ ")
}
