//! Closed subsemigroups of the dual group generated by the weights.
//!
//! For an index set `I ⊆ {1..n}`, `Ω_I` is the smallest closed subsemigroup
//! of `Γ` containing `0`, every weight `ω_1..ω_n`, and additionally `-ω_i`
//! for each `i ∈ I`.  Since `Γ` is discrete, "closed" is vacuous and `Ω_I`
//! is just the set of finite sums of generators.
//!
//! Membership is decided exactly:
//! * finite `Γ`: an explicit closure is computed once by a BFS fixpoint;
//! * infinite `Γ`: a lattice pre-check (is the target even in the *group*
//!   generated by the generators?) followed by a breadth-first search over a
//!   box of partial sums.  The box is sound by the Steinitz rearrangement
//!   bound: any multiset of generators with free-part sum `w` can be ordered
//!   so that every partial sum stays within `‖w‖_∞ + d·Δ` in each free
//!   coordinate, where `Δ` is the largest free coordinate of a generator.
//!   So searching that box finds a representation iff one exists.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::group::GroupElem;
use crate::subgroup::{subgroup_generated, SubgroupDesc};

#[derive(Debug, Clone)]
pub struct SemigroupDesc {
    action: ActionSpec,
    indices: BTreeSet<usize>,
    generators: Vec<GroupElem>,
    /// Group generated by the generators (a superset of the semigroup);
    /// used as a fast, exact rejection test.
    lattice: SubgroupDesc,
    /// Explicit member bitset over the lexicographic enumeration, for
    /// finite `Γ`.
    closure: Option<Vec<bool>>,
}

/// Build `Ω_I` for the 1-based index set `I` (which may be empty).
pub fn make_semigroup(action: &ActionSpec, indices: &BTreeSet<usize>) -> Result<SemigroupDesc> {
    action.check_n_limit()?;
    if let Some(&i) = indices.iter().find(|&&i| i == 0 || i > action.n()) {
        return Err(Error::Precondition(format!(
            "index {i} out of range 1..={}",
            action.n()
        )));
    }
    let spec = action.group();
    let mut generators: Vec<GroupElem> = action.omega().to_vec();
    for &i in indices {
        generators.push(spec.neg(action.weight(i)?)?);
    }
    generators.sort_by(|a, b| a.coords().cmp(b.coords()));
    generators.dedup();

    let lattice = subgroup_generated(spec, &generators)?;

    let closure = match spec.order() {
        Some(order) if order <= action.limits().max_finite_order => {
            let order = order as usize;
            let mut bits = vec![false; order];
            let zero_idx = spec.index_of(&spec.zero())?;
            bits[zero_idx] = true;
            let mut queue: VecDeque<usize> = VecDeque::from([zero_idx]);
            while let Some(idx) = queue.pop_front() {
                let here = spec.elem_at(idx)?;
                for g in &generators {
                    let next = spec.add(&here, g)?;
                    let nidx = spec.index_of(&next)?;
                    if !bits[nidx] {
                        bits[nidx] = true;
                        queue.push_back(nidx);
                    }
                }
            }
            Some(bits)
        }
        Some(order) => {
            return Err(Error::ResourceLimit(format!(
                "finite group of order {order} exceeds closure limit {}",
                action.limits().max_finite_order
            )));
        }
        None => None,
    };

    Ok(SemigroupDesc { action: action.clone(), indices: indices.clone(), generators, lattice, closure })
}

impl SemigroupDesc {
    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }

    /// Explicit members, available only for finite `Γ`.
    pub fn members_finite(&self) -> Option<&[bool]> {
        self.closure.as_deref()
    }

    /// Exact membership test.
    pub fn member(&self, g: &GroupElem) -> Result<bool> {
        let spec = self.action.group();
        spec.check_same(g)?;
        if let Some(bits) = &self.closure {
            return Ok(bits[spec.index_of(g)?]);
        }
        self.action.check_coords(g)?;
        if !self.lattice.contains(g)? {
            return Ok(false);
        }
        self.search_member(g)
    }

    /// Breadth-first search over the Steinitz box; see the module docs for
    /// why this is complete.
    fn search_member(&self, g: &GroupElem) -> Result<bool> {
        let spec = self.action.group();
        let d = spec.rank();
        if g.is_zero() {
            return Ok(true);
        }
        let delta: i64 = self
            .generators
            .iter()
            .flat_map(|w| w.free_coords().iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0);
        let target_norm: i64 = g.free_coords().iter().map(|c| c.abs()).max().unwrap_or(0);
        let bound = target_norm + (d as i64) * delta;

        let start = spec.zero();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([start.coords().to_vec()]);
        let mut queue: VecDeque<GroupElem> = VecDeque::from([start]);
        while let Some(here) = queue.pop_front() {
            for w in &self.generators {
                let next = spec.add(&here, w)?;
                if next.free_coords().iter().any(|c| c.abs() > bound) {
                    continue;
                }
                if &next == g {
                    return Ok(true);
                }
                if seen.len() >= self.action.limits().max_search_states {
                    return Err(Error::ResourceLimit(
                        "membership search exceeded the state cap".into(),
                    ));
                }
                if seen.insert(next.coords().to_vec()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(false)
    }
}

/// Do two index sets generate the same semigroup (within one action)?
/// Decided by mutual generator membership, which suffices because both
/// sides are generated by their listed generators.
pub fn semigroups_equal(a: &SemigroupDesc, b: &SemigroupDesc) -> Result<bool> {
    a.action().check_same_action(b.action())?;
    for g in a.generators() {
        if !b.member(g)? {
            return Ok(false);
        }
    }
    for g in b.generators() {
        if !a.member(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The largest subgroup contained in the semigroup.
///
/// An element `h` of `Ω_I` is a unit iff `-h ∈ Ω_I`; the units form a
/// subgroup, and it is generated by the *generators* that are units: if
/// `h = Σ c_j g_j` has `-h ∈ Ω_I`, then for each `g_j` appearing,
/// `-g_j = (c_j - 1)·g_j + (other terms) + (-h) ∈ Ω_I`, so every generator
/// used in a unit is itself a unit.
pub fn units_subgroup(s: &SemigroupDesc) -> Result<SubgroupDesc> {
    let spec = s.action().group();
    let mut unit_gens: Vec<GroupElem> = Vec::new();
    for g in s.generators() {
        if s.member(&spec.neg(g)?)? {
            unit_gens.push(g.clone());
        }
    }
    subgroup_generated(spec, &unit_gens)
}

/// Status of a single weight index in the escape condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexStatus {
    /// Branch (i): the weight generates an infinite cyclic subgroup.
    NonTorsion,
    /// Branch (ii): some other weight's inverse lies in `Ω_{i}`;
    /// `via` is the witnessing index `j ≠ i` with `-ω_j ∈ Ω_{i}`.
    Escape { via: usize },
    /// Neither branch holds.
    Failing,
}

/// Result of checking the escape condition that separates the
/// "all ideals gauge-invariant" regime from the exceptional one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub holds: bool,
    /// The unique failing index (1-based), when the condition fails.
    pub failing_index: Option<usize>,
    /// Order `K` of the failing weight (finite by definition of failing).
    pub order_k: Option<u64>,
    pub statuses: Vec<IndexStatus>,
}

/// Check, for every index `i`, that either `ω_i` is non-torsion or
/// `-ω_j ∈ Ω_{i}` for some `j ≠ i`.
///
/// At most one index can fail: if `i` fails then `ω_i` is torsion, so
/// `-ω_i = (K-1)·ω_i` already lies in every `Ω_J`; hence any other torsion
/// index `j` would escape via `i`, and a failing index must be unique.
pub fn condition_check(action: &ActionSpec) -> Result<ConditionReport> {
    let spec = action.group();
    let mut statuses = Vec::with_capacity(action.n());
    let mut failing: Vec<usize> = Vec::new();
    for i in 1..=action.n() {
        let w = action.weight(i)?;
        if spec.order_of(w)?.is_none() {
            statuses.push(IndexStatus::NonTorsion);
            continue;
        }
        let omega_i = make_semigroup(action, &BTreeSet::from([i]))?;
        let mut escape = None;
        for j in 1..=action.n() {
            if j == i {
                continue;
            }
            if omega_i.member(&spec.neg(action.weight(j)?)?)? {
                escape = Some(j);
                break;
            }
        }
        match escape {
            Some(j) => statuses.push(IndexStatus::Escape { via: j }),
            None => {
                statuses.push(IndexStatus::Failing);
                failing.push(i);
            }
        }
    }
    debug_assert!(failing.len() <= 1, "more than one failing index: {failing:?}");
    let failing_index = failing.first().copied();
    let order_k = match failing_index {
        Some(i) => spec.order_of(action.weight(i)?)?,
        None => None,
    };
    Ok(ConditionReport { holds: failing_index.is_none(), failing_index, order_k, statuses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn action_z(omega: &[i64]) -> ActionSpec {
        let g = GroupSpec::free(1);
        let ws = omega.iter().map(|&w| g.elem(&[w]).unwrap()).collect();
        ActionSpec::new(g, ws).unwrap()
    }

    #[test]
    fn natural_numbers_from_zero_one_weights() {
        // Γ = Z, ω = (0, 1): Ω_∅ = N.
        let a = action_z(&[0, 1]);
        let s = make_semigroup(&a, &BTreeSet::new()).unwrap();
        let g = a.group().clone();
        for x in 0..30 {
            assert!(s.member(&g.elem(&[x]).unwrap()).unwrap(), "{x} should be in N");
        }
        for x in 1..30 {
            assert!(!s.member(&g.elem(&[-x]).unwrap()).unwrap(), "-{x} should not be in N");
        }
        // Ω_{2} = Z.
        let s2 = make_semigroup(&a, &BTreeSet::from([2])).unwrap();
        for x in -20..20 {
            assert!(s2.member(&g.elem(&[x]).unwrap()).unwrap());
        }
        // Ω_{1} adds -0 = 0: still N.
        let s1 = make_semigroup(&a, &BTreeSet::from([1])).unwrap();
        assert!(!s1.member(&g.elem(&[-1]).unwrap()).unwrap());
        assert!(semigroups_equal(&s, &s1).unwrap());
        assert!(!semigroups_equal(&s, &s2).unwrap());
    }

    #[test]
    fn numerical_semigroup_gaps_are_detected() {
        // Γ = Z, ω = (2, 3): Ω = {0, 2, 3, 4, ...}, gap at 1.
        let a = action_z(&[2, 3]);
        let s = make_semigroup(&a, &BTreeSet::new()).unwrap();
        let g = a.group().clone();
        assert!(s.member(&g.elem(&[0]).unwrap()).unwrap());
        assert!(!s.member(&g.elem(&[1]).unwrap()).unwrap());
        for x in 2..40 {
            assert!(s.member(&g.elem(&[x]).unwrap()).unwrap(), "{x}");
        }
        assert!(!s.member(&g.elem(&[-2]).unwrap()).unwrap());
    }

    #[test]
    fn two_dimensional_cone_with_lattice_gap() {
        // Γ = Z^2, ω = ((2, 0), (0, 1)): members have even first coordinate
        // >= 0.
        let g = GroupSpec::free(2);
        let a = ActionSpec::new(
            g.clone(),
            vec![g.elem(&[2, 0]).unwrap(), g.elem(&[0, 1]).unwrap()],
        )
        .unwrap();
        let s = make_semigroup(&a, &BTreeSet::new()).unwrap();
        assert!(s.member(&g.elem(&[4, 3]).unwrap()).unwrap());
        assert!(!s.member(&g.elem(&[3, 3]).unwrap()).unwrap()); // lattice reject
        assert!(!s.member(&g.elem(&[-2, 3]).unwrap()).unwrap()); // cone reject
        assert!(!s.member(&g.elem(&[4, -1]).unwrap()).unwrap());
    }

    #[test]
    fn finite_group_closure_is_a_subgroup() {
        // Γ = Z/4, ω = (1, 1): Ω = Z/4. ω = (2, 2): Ω = {0, 2}.
        let g = GroupSpec::new(0, vec![4]).unwrap();
        let a = ActionSpec::new(g.clone(), vec![g.elem(&[2]).unwrap(), g.elem(&[2]).unwrap()])
            .unwrap();
        let s = make_semigroup(&a, &BTreeSet::new()).unwrap();
        assert!(s.member(&g.elem(&[0]).unwrap()).unwrap());
        assert!(s.member(&g.elem(&[2]).unwrap()).unwrap());
        assert!(!s.member(&g.elem(&[1]).unwrap()).unwrap());
        let units = units_subgroup(&s).unwrap();
        assert!(units.contains(&g.elem(&[2]).unwrap()).unwrap());
        assert!(!units.contains(&g.elem(&[1]).unwrap()).unwrap());
    }

    #[test]
    fn torsion_mixes_into_free_part() {
        // Γ = Z x Z/2, ω = ((1, 1), (1, 1)): members (m, t) need m >= 0 and
        // t ≡ m (mod 2).
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let w = g.elem(&[1, 1]).unwrap();
        let a = ActionSpec::new(g.clone(), vec![w.clone(), w]).unwrap();
        let s = make_semigroup(&a, &BTreeSet::new()).unwrap();
        assert!(s.member(&g.elem(&[2, 0]).unwrap()).unwrap());
        assert!(s.member(&g.elem(&[3, 1]).unwrap()).unwrap());
        assert!(!s.member(&g.elem(&[2, 1]).unwrap()).unwrap());
        assert!(!s.member(&g.elem(&[-1, 1]).unwrap()).unwrap());
    }

    #[test]
    fn condition_fixtures() {
        // Γ = Z, ω = (0, 1): fails at i = 1 with K = 1.
        let a = action_z(&[0, 1]);
        let r = condition_check(&a).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing_index, Some(1));
        assert_eq!(r.order_k, Some(1));
        assert_eq!(r.statuses[1], IndexStatus::NonTorsion);

        // Γ = Z, ω = (1, 1): holds (both non-torsion).
        let a = action_z(&[1, 1]);
        let r = condition_check(&a).unwrap();
        assert!(r.holds);

        // Γ = Z, ω = (1, -1): holds via escape both ways... actually via
        // branch (i) already; check a genuine escape on Z with ω = (0, 0)
        // is impossible (n = 2 both torsion of order 1: -ω_2 = 0 ∈ Ω_{1}).
        let a = action_z(&[0, 0]);
        let r = condition_check(&a).unwrap();
        assert!(r.holds);
        assert_eq!(r.statuses[0], IndexStatus::Escape { via: 2 });

        // Γ = Z x Z/2, ω = ((0, 1), (1, 0)): fails at i = 1 with K = 2.
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let a = ActionSpec::new(
            g.clone(),
            vec![g.elem(&[0, 1]).unwrap(), g.elem(&[1, 0]).unwrap()],
        )
        .unwrap();
        let r = condition_check(&a).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing_index, Some(1));
        assert_eq!(r.order_k, Some(2));
    }

    #[test]
    fn finite_groups_always_satisfy_the_condition() {
        let g = GroupSpec::new(0, vec![6]).unwrap();
        for w1 in 0..6 {
            for w2 in 0..6 {
                let a = ActionSpec::new(
                    g.clone(),
                    vec![g.elem(&[w1]).unwrap(), g.elem(&[w2]).unwrap()],
                )
                .unwrap();
                assert!(condition_check(&a).unwrap().holds, "({w1}, {w2})");
            }
        }
    }
}
