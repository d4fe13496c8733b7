//! The set-expression grammar of the `set` command.
//!
//! ```text
//! expr := atom(ELEM, {I, ...})          translated semigroup ELEM + Ω_I
//!       | union(expr, expr)
//!       | translate(expr, ELEM)
//!       | elems{ELEM, ...}              explicit finite set (finite Γ only)
//!       | ypoint(ELEM, "p/q")           minimal invariant set of a point of Γ' × T
//!       | lift(expr)                    cylinder [X] × T over a gauge-invariant X
//!       | rotate(expr, "p/q")           the rotation ρ_t
//! ```
//!
//! Gauge expressions evaluate to explicit sets over a finite `Γ` and to
//! atom unions otherwise; the `ypoint`/`lift`/`rotate` constructors need
//! the escape condition to fail and evaluate over `Γ' × T`.

use std::collections::BTreeSet;

use cuntz_ideals::ext::{
    lift_x, make_y_point, normalize_failing, parse_angle, ExtSet, NormalizedFailingAction,
};
use cuntz_ideals::group::parse_elem;
use cuntz_ideals::semigroup::{condition_check, make_semigroup};
use cuntz_ideals::sets::{FiniteSet, FinitarySet};
use cuntz_ideals::{ActionSpec, Error, Result};

use crate::config::split_top_level;

#[derive(Debug, Clone)]
pub enum Expr {
    Atom { elem: String, indices: BTreeSet<usize> },
    Union(Box<Expr>, Box<Expr>),
    Translate(Box<Expr>, String),
    Elems(Vec<String>),
    YPoint { elem: String, angle: String },
    Lift(Box<Expr>),
    Rotate(Box<Expr>, String),
}

fn call_args(text: &str, name: &str) -> Result<Vec<String>> {
    let inner = text
        .strip_prefix(name)
        .and_then(|s| s.trim().strip_prefix('('))
        .and_then(|s| s.trim_end().strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("malformed `{name}(...)` in `{text}`")))?;
    split_top_level(inner, ',')
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let t = text.trim();
    if t.starts_with("atom") {
        let args = call_args(t, "atom")?;
        // The element may itself contain commas: the index set is the last
        // argument, everything before it is the element.
        let (last, front) = args
            .split_last()
            .ok_or_else(|| Error::Parse("atom() needs arguments".into()))?;
        let inner = last
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected `{{...}}` index set, got `{last}`")))?;
        let mut indices = BTreeSet::new();
        for item in split_top_level(inner, ',')? {
            indices.insert(
                item.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad index `{item}`")))?,
            );
        }
        Ok(Expr::Atom { elem: front.join(","), indices })
    } else if t.starts_with("union") {
        let args = call_args(t, "union")?;
        if args.len() != 2 {
            return Err(Error::Parse("union() takes exactly two set expressions".into()));
        }
        Ok(Expr::Union(Box::new(parse_expr(&args[0])?), Box::new(parse_expr(&args[1])?)))
    } else if t.starts_with("translate") {
        let args = call_args(t, "translate")?;
        let (first, rest) = args
            .split_first()
            .ok_or_else(|| Error::Parse("translate() needs arguments".into()))?;
        Ok(Expr::Translate(Box::new(parse_expr(first)?), rest.join(",")))
    } else if t.starts_with("elems") {
        let inner = t
            .strip_prefix("elems")
            .and_then(|s| s.trim().strip_prefix('{'))
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("malformed `elems{{...}}` in `{t}`")))?;
        Ok(Expr::Elems(split_top_level(inner, ',')?))
    } else if t.starts_with("ypoint") {
        let args = call_args(t, "ypoint")?;
        let (last, front) = args
            .split_last()
            .ok_or_else(|| Error::Parse("ypoint() needs arguments".into()))?;
        Ok(Expr::YPoint { elem: front.join(","), angle: last.clone() })
    } else if t.starts_with("lift") {
        let args = call_args(t, "lift")?;
        if args.len() != 1 {
            return Err(Error::Parse("lift() takes exactly one set expression".into()));
        }
        Ok(Expr::Lift(Box::new(parse_expr(&args[0])?)))
    } else if t.starts_with("rotate") {
        let args = call_args(t, "rotate")?;
        let (last, front) = args
            .split_last()
            .ok_or_else(|| Error::Parse("rotate() needs arguments".into()))?;
        Ok(Expr::Rotate(Box::new(parse_expr(&front.join(","))?), last.clone()))
    } else {
        Err(Error::Parse(format!("unrecognized set expression `{t}`")))
    }
}

/// An evaluated set expression.
pub enum SetValue {
    /// Explicit subset of a finite `Γ`.
    Finite(FiniteSet),
    /// Atom union over an infinite `Γ`.
    Finitary(FinitarySet),
    /// Subset of `Γ' × T` in the failing regime.
    Ext(ExtSet, Box<NormalizedFailingAction>),
}

fn check_indices(action: &ActionSpec, indices: &BTreeSet<usize>) -> Result<()> {
    if let Some(&i) = indices.iter().find(|&&i| i == 0 || i > action.n()) {
        return Err(Error::Parse(format!("index {i} out of range 1..={}", action.n())));
    }
    Ok(())
}

/// Explicit form of the atom `base + Ω_I` over a finite group.
fn atom_explicit(
    action: &ActionSpec,
    base: &cuntz_ideals::GroupElem,
    indices: &BTreeSet<usize>,
) -> Result<FiniteSet> {
    let spec = action.group();
    let s = make_semigroup(action, indices)?;
    let bits = s.members_finite().expect("finite group has explicit closure");
    let mut out = FiniteSet::empty(spec)?;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out.insert(&spec.add(base, &spec.elem_at(i)?)?)?;
        }
    }
    Ok(out)
}

fn normalized(action: &ActionSpec) -> Result<NormalizedFailingAction> {
    let report = condition_check(action)?;
    if report.holds {
        return Err(Error::Precondition(
            "ypoint/lift/rotate apply only when the escape condition fails".into(),
        ));
    }
    normalize_failing(action, &report)
}

/// Re-express a gauge set over the re-indexed failing action (the weights
/// are the same, only their positions change).
fn reindex(x: &FinitarySet, nfa: &NormalizedFailingAction) -> Result<FinitarySet> {
    let target = nfa.action();
    let mut out = FinitarySet::empty(target);
    for atom in x.atoms() {
        let indices: BTreeSet<usize> = atom
            .indices
            .iter()
            .map(|&old| {
                nfa.permutation()
                    .iter()
                    .position(|&p| p == old)
                    .map(|pos| pos + 1)
                    .ok_or_else(|| Error::Precondition(format!("index {old} not in action")))
            })
            .collect::<Result<_>>()?;
        out = out.union(&FinitarySet::atom(target, &atom.base, &indices)?)?;
    }
    Ok(out)
}

pub fn eval(action: &ActionSpec, expr: &Expr) -> Result<SetValue> {
    let spec = action.group();
    match expr {
        Expr::Atom { elem, indices } => {
            check_indices(action, indices)?;
            let base = parse_elem(spec, elem)?;
            if spec.is_finite() {
                Ok(SetValue::Finite(atom_explicit(action, &base, indices)?))
            } else {
                Ok(SetValue::Finitary(FinitarySet::atom(action, &base, indices)?))
            }
        }
        Expr::Elems(items) => {
            if !spec.is_finite() {
                return Err(Error::InfiniteGroup(
                    "explicit element lists; use atom()/union() set expressions".into(),
                ));
            }
            let members: Vec<_> =
                items.iter().map(|s| parse_elem(spec, s)).collect::<Result<_>>()?;
            Ok(SetValue::Finite(FiniteSet::from_members(spec, &members)?))
        }
        Expr::Union(a, b) => match (eval(action, a)?, eval(action, b)?) {
            (SetValue::Finite(x), SetValue::Finite(y)) => Ok(SetValue::Finite(x.union(&y)?)),
            (SetValue::Finitary(x), SetValue::Finitary(y)) => {
                Ok(SetValue::Finitary(x.union(&y)?))
            }
            (SetValue::Ext(x, nfa), SetValue::Ext(y, _)) => {
                Ok(SetValue::Ext(x.union(&y)?, nfa))
            }
            _ => Err(Error::Mismatch(
                "union() operands live over different spaces".into(),
            )),
        },
        Expr::Translate(inner, elem) => {
            let by = parse_elem(spec, elem)?;
            match eval(action, inner)? {
                SetValue::Finite(x) => Ok(SetValue::Finite(x.translate(&by)?)),
                SetValue::Finitary(x) => Ok(SetValue::Finitary(x.translate(&by)?)),
                SetValue::Ext(..) => Err(Error::Precondition(
                    "translate() applies to subsets of Γ, not of Γ' × T".into(),
                )),
            }
        }
        Expr::YPoint { elem, angle } => {
            let nfa = normalized(action)?;
            let base = parse_elem(nfa.projected().group(), elem)?;
            let theta = parse_angle(angle)?;
            let y = make_y_point(&nfa, &base, &theta)?;
            Ok(SetValue::Ext(y, Box::new(nfa)))
        }
        Expr::Lift(inner) => {
            let nfa = normalized(action)?;
            match eval(action, inner)? {
                SetValue::Finitary(x) => {
                    let y = lift_x(&nfa, &reindex(&x, &nfa)?)?;
                    Ok(SetValue::Ext(y, Box::new(nfa)))
                }
                _ => Err(Error::Precondition(
                    "lift() takes an atom-union set over Γ".into(),
                )),
            }
        }
        Expr::Rotate(inner, angle) => {
            let t = parse_angle(angle)?;
            match eval(action, inner)? {
                SetValue::Ext(y, nfa) => Ok(SetValue::Ext(y.rotate(&t)?, nfa)),
                _ => Err(Error::Precondition(
                    "rotate() applies to subsets of Γ' × T".into(),
                )),
            }
        }
    }
}
