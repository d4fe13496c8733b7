//! Ideal parametrization in the exceptional regime.
//!
//! When the escape condition fails at exactly one index, the ideals of the
//! crossed product are no longer all gauge-invariant: they correspond to
//! invariant subsets of `Γ' × T`, where `Γ' = Γ / <ω_f>` quotients out the
//! failing (torsion) weight and `T` is the circle.  This module implements
//! that parametrization for the finitary fragment actually needed: sets
//! whose fibers over `Γ'` are either finite sets of rational angles or the
//! whole circle.

use std::collections::BTreeSet;

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::group::{gcd, GroupElem};
use crate::semigroup::ConditionReport;
use crate::sets::FinitarySet;
use crate::subgroup::{quotient, subgroup_generated, QuotientMap};

/// A rational point of the circle group `T`, stored as a reduced fraction
/// of a full turn in `[0, 1)`.  The group operation is written
/// multiplicatively to match the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("angle with zero denominator".into()));
        }
        let den_u = den.unsigned_abs();
        let num_signed = if den < 0 { -num } else { num };
        let num_u = num_signed.rem_euclid(den_u as i64) as u64;
        let g = gcd(num_u, den_u).max(1);
        Ok(Angle { num: num_u / g, den: den_u / g })
    }

    pub fn one() -> Self {
        Angle { num: 0, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &Angle) -> Result<Angle> {
        let den = self
            .den
            .checked_mul(other.den)
            .ok_or_else(|| Error::ResourceLimit("angle denominator overflow".into()))?;
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|a| other.num.checked_mul(self.den).map(|b| a + b))
            .ok_or_else(|| Error::ResourceLimit("angle numerator overflow".into()))?;
        Angle::new((num % den) as i64, den as i64)
    }

    pub fn inv(&self) -> Angle {
        if self.num == 0 {
            *self
        } else {
            Angle { num: self.den - self.num, den: self.den }
        }
    }

    pub fn pow(&self, e: i64) -> Result<Angle> {
        let base = if e < 0 { self.inv() } else { *self };
        let mut out = Angle::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }
}

impl std::fmt::Display for Angle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parse `"p/q"` (quotes optional) as a rational angle.
pub fn parse_angle(text: &str) -> Result<Angle> {
    let t = text.trim().trim_matches('"');
    let (p, q) = t
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected `p/q`, got `{t}`")))?;
    let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in `{t}`")))?;
    let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in `{t}`")))?;
    Angle::new(p, q)
}

/// An action whose escape condition fails, re-indexed so the failing weight
/// is first, together with the quotient `Γ' = Γ / <ω_1>` and the projected
/// action on `Γ'`.
#[derive(Debug, Clone)]
pub struct NormalizedFailingAction {
    /// The re-indexed action over `Γ` (failing weight first).
    action: ActionSpec,
    /// `permutation[new_index - 1] = old_index` (both 1-based).
    permutation: Vec<usize>,
    /// Order `K` of the failing weight.
    order_k: u64,
    /// `Γ -> Γ' = Γ / <ω_1>`.
    quotient_map: QuotientMap,
    /// The weights pushed forward to `Γ'` (same indexing as `action`;
    /// the first projected weight is zero).
    projected: ActionSpec,
}

pub fn normalize_failing(
    action: &ActionSpec,
    report: &ConditionReport,
) -> Result<NormalizedFailingAction> {
    if report.holds {
        return Err(Error::Precondition(
            "normalization only applies when the escape condition fails".into(),
        ));
    }
    let f = report
        .failing_index
        .ok_or_else(|| Error::Precondition("failing report without an index".into()))?;
    let spec = action.group();
    let mut permutation = vec![f];
    permutation.extend((1..=action.n()).filter(|&i| i != f));
    let omega: Vec<GroupElem> = permutation
        .iter()
        .map(|&i| action.weight(i).cloned())
        .collect::<Result<_>>()?;
    let reordered = ActionSpec::with_limits(spec.clone(), omega, action.limits().clone())?;
    let wf = reordered.weight(1)?.clone();
    let order_k = spec
        .order_of(&wf)?
        .ok_or_else(|| Error::Precondition("failing weight must be torsion".into()))?;
    let sub = subgroup_generated(spec, &[wf])?;
    let quotient_map = quotient(spec, &sub)?;
    let projected_omega: Vec<GroupElem> = reordered
        .omega()
        .iter()
        .map(|w| quotient_map.project(w))
        .collect::<Result<_>>()?;
    let projected = ActionSpec::with_limits(
        quotient_map.target().clone(),
        projected_omega,
        action.limits().clone(),
    )?;
    Ok(NormalizedFailingAction { action: reordered, permutation, order_k, quotient_map, projected })
}

impl NormalizedFailingAction {
    /// The re-indexed action on `Γ` (failing weight at position 1).
    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn order_k(&self) -> u64 {
        self.order_k
    }

    pub fn quotient_map(&self) -> &QuotientMap {
        &self.quotient_map
    }

    /// The induced action on `Γ'` (same indexing; first weight is zero).
    pub fn projected(&self) -> &ActionSpec {
        &self.projected
    }
}

/// A fiber over one point of `Γ'`: finitely many rational angles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointAtom {
    pub base: GroupElem,
    pub angles: BTreeSet<Angle>,
}

/// A subset of `Γ' × T` in the finitary fragment: finitely many finite
/// fibers plus a finitary set of full fibers.
#[derive(Debug, Clone)]
pub struct ExtSet {
    points: Vec<PointAtom>,
    full: FinitarySet,
}

impl ExtSet {
    pub fn empty(nfa: &NormalizedFailingAction) -> Self {
        ExtSet { points: Vec::new(), full: FinitarySet::empty(nfa.projected()) }
    }

    pub fn from_parts(points: Vec<PointAtom>, full: FinitarySet) -> Self {
        let mut s = ExtSet { points, full };
        s.canonicalize();
        s
    }

    /// Drop point atoms swallowed by a full fiber and merge duplicates.
    fn canonicalize(&mut self) {
        let mut merged: Vec<PointAtom> = Vec::new();
        for p in &self.points {
            if self.full.member(&p.base).unwrap_or(false) {
                continue;
            }
            if p.angles.is_empty() {
                continue;
            }
            match merged.iter_mut().find(|m| m.base == p.base) {
                Some(m) => m.angles.extend(p.angles.iter().copied()),
                None => merged.push(p.clone()),
            }
        }
        merged.sort_by(|a, b| a.base.coords().cmp(b.base.coords()));
        self.points = merged;
    }

    pub fn points(&self) -> &[PointAtom] {
        &self.points
    }

    pub fn full(&self) -> &FinitarySet {
        &self.full
    }

    pub fn contains(&self, base: &GroupElem, theta: &Angle) -> Result<bool> {
        if self.full.member(base)? {
            return Ok(true);
        }
        Ok(self.points.iter().any(|p| &p.base == base && p.angles.contains(theta)))
    }

    pub fn union(&self, other: &ExtSet) -> Result<ExtSet> {
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let full = self.full.union(&other.full)?;
        Ok(ExtSet::from_parts(points, full))
    }

    /// Semantic equality within the finitary fragment.
    pub fn set_eq(&self, other: &ExtSet) -> Result<bool> {
        if !self.full.set_eq(&other.full)? {
            return Ok(false);
        }
        // After canonicalization, both point lists are disjoint from the
        // (equal) full parts, so they must agree fiber by fiber... except
        // that canonicalization only checked against the *own* full part.
        let residual =
            |points: &[PointAtom], full: &FinitarySet| -> Result<Vec<PointAtom>> {
                let mut out = Vec::new();
                for p in points {
                    if !full.member(&p.base)? {
                        out.push(p.clone());
                    }
                }
                Ok(out)
            };
        let a = residual(&self.points, &other.full)?;
        let b = residual(&other.points, &self.full)?;
        Ok(a == b)
    }

    /// Invariance over `Γ' × T`: whenever `([γ], θ)` is in the set, the full
    /// fiber over `[γ] + ω'_i` must be, for every `i ≠ 1`.  Full-fiber atoms
    /// satisfy this inside their own translated semigroup, so only the
    /// finite fibers need checking.
    pub fn is_invariant(&self, nfa: &NormalizedFailingAction) -> Result<bool> {
        let proj = nfa.projected();
        for p in &self.points {
            for i in 2..=proj.n() {
                let moved = proj.group().add(&p.base, proj.weight(i)?)?;
                if !self.full.member(&moved)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The rotation action: `θ ∈ ρ_t(Y) ⟺ t·θ ∈ Y`, so finite fibers are
    /// multiplied by `t^{-1}` and full fibers are unchanged.
    pub fn rotate(&self, t: &Angle) -> Result<ExtSet> {
        let tinv = t.inv();
        let points = self
            .points
            .iter()
            .map(|p| {
                Ok(PointAtom {
                    base: p.base.clone(),
                    angles: p
                        .angles
                        .iter()
                        .map(|a| a.mul(&tinv))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ExtSet::from_parts(points, self.full.clone()))
    }
}

/// The smallest invariant subset of `Γ' × T` containing the single point
/// `([γ], θ)`: the point itself plus full fibers over
/// `[γ] + ω'_i + Ω'` for every `i ≠ 1`.  (Because the condition fails, the
/// union of those translated semigroups misses `[γ]` itself.)
pub fn make_y_point(
    nfa: &NormalizedFailingAction,
    base: &GroupElem,
    theta: &Angle,
) -> Result<ExtSet> {
    let proj = nfa.projected();
    proj.group().check_same(base)?;
    let mut full = FinitarySet::empty(proj);
    for i in 2..=proj.n() {
        let b = proj.group().add(base, proj.weight(i)?)?;
        full = full.union(&FinitarySet::atom(proj, &b, &BTreeSet::new())?)?;
    }
    Ok(ExtSet::from_parts(
        vec![PointAtom { base: base.clone(), angles: BTreeSet::from([*theta]) }],
        full,
    ))
}

/// The gauge-invariant subset of `Γ` lying under an invariant `Y ⊆ Γ' × T`:
/// the full preimage of its support.  Each `Γ'` atom `b + Ω'_I` lifts to
/// `lift(b) + Ω_I` over `Γ` (the kernel `<ω_1>` is already inside every
/// `Ω_I` since `ω_1` is torsion), and invariance of `Y` makes the finite
/// fibers lift to `lift(b) + Ω`.
pub fn project_to_gamma(nfa: &NormalizedFailingAction, y: &ExtSet) -> Result<FinitarySet> {
    if !y.is_invariant(nfa)? {
        return Err(Error::Precondition("projection requires an invariant set".into()));
    }
    let action = nfa.action();
    let q = nfa.quotient_map();
    let mut out = FinitarySet::empty(action);
    for p in y.points() {
        let base = q.section(&p.base)?;
        out = out.union(&FinitarySet::atom(action, &base, &BTreeSet::new())?)?;
    }
    for atom in y.full().atoms() {
        let base = q.section(&atom.base)?;
        out = out.union(&FinitarySet::atom(action, &base, &atom.indices)?)?;
    }
    Ok(out)
}

/// Lift a gauge-invariant `X ⊆ Γ` to the cylinder set `[X] × T`.
pub fn lift_x(nfa: &NormalizedFailingAction, x: &FinitarySet) -> Result<ExtSet> {
    nfa.action().check_same_action(x.action())?;
    let q = nfa.quotient_map();
    let proj = nfa.projected();
    let mut full = FinitarySet::empty(proj);
    for atom in x.atoms() {
        let base = q.project(&atom.base)?;
        full = full.union(&FinitarySet::atom(proj, &base, &atom.indices)?)?;
    }
    Ok(ExtSet::from_parts(Vec::new(), full))
}

/// The margin `Y|_Γ = {γ : ([γ - ω_i], θ) ∈ Y for some i ≠ 1, θ}`: the part
/// of `Γ` over which the ideal behaves like a gauge-invariant one.
pub fn restrict_to_gamma_margin(
    nfa: &NormalizedFailingAction,
    y: &ExtSet,
) -> Result<FinitarySet> {
    let support = project_to_gamma(nfa, y)?;
    let action = nfa.action();
    let mut out = FinitarySet::empty(action);
    for i in 2..=action.n() {
        out = out.union(&support.translate(action.weight(i)?)?)?;
    }
    Ok(out)
}
