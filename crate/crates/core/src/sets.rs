//! Weight-invariant subsets of the dual group.
//!
//! A closed `X ⊆ Γ` is invariant when `X = ⋃_i (X + ω_i)`; these sets
//! parametrize the ideals of the crossed product.  Two representations are
//! used:
//!
//! * [`FiniteSet`]: an explicit bitset over a finite `Γ`;
//! * [`FinitarySet`]: a finite union of atoms `γ + Ω_I`, which covers the
//!   sets the classification actually produces for infinite `Γ`.  Every
//!   finitary set is invariant by construction.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::group::{GroupElem, GroupSpec};
use crate::semigroup::{make_semigroup, ConditionReport, SemigroupDesc};
use crate::subgroup::{quotient, subgroup_generated, QuotientMap};

/// Subset of a finite group as a bitset over the lexicographic enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSet {
    spec: GroupSpec,
    bits: Vec<bool>,
}

impl FiniteSet {
    pub fn empty(spec: &GroupSpec) -> Result<Self> {
        let order = spec
            .order()
            .ok_or_else(|| Error::InfiniteGroup("explicit subset".into()))?;
        let order = usize::try_from(order)
            .map_err(|_| Error::ResourceLimit("group too large for explicit subsets".into()))?;
        Ok(FiniteSet { spec: spec.clone(), bits: vec![false; order] })
    }

    pub fn universe(spec: &GroupSpec) -> Result<Self> {
        let mut s = Self::empty(spec)?;
        s.bits.iter_mut().for_each(|b| *b = true);
        Ok(s)
    }

    pub fn from_members(spec: &GroupSpec, members: &[GroupElem]) -> Result<Self> {
        let mut s = Self::empty(spec)?;
        for m in members {
            s.insert(m)?;
        }
        Ok(s)
    }

    pub fn from_bits(spec: &GroupSpec, bits: Vec<bool>) -> Result<Self> {
        let empty = Self::empty(spec)?;
        if bits.len() != empty.bits.len() {
            return Err(Error::Mismatch("bitset length does not match group order".into()));
        }
        Ok(FiniteSet { spec: spec.clone(), bits })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn insert(&mut self, g: &GroupElem) -> Result<()> {
        let idx = self.spec.index_of(g)?;
        self.bits[idx] = true;
        Ok(())
    }

    pub fn contains(&self, g: &GroupElem) -> Result<bool> {
        Ok(self.bits[self.spec.index_of(g)?])
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn members(&self) -> Result<Vec<GroupElem>> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| self.spec.elem_at(i))
            .collect()
    }

    pub fn union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        if self.spec != other.spec {
            return Err(Error::Mismatch("union of subsets of different groups".into()));
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect();
        Ok(FiniteSet { spec: self.spec.clone(), bits })
    }

    pub fn is_subset(&self, other: &FiniteSet) -> Result<bool> {
        if self.spec != other.spec {
            return Err(Error::Mismatch("comparison of subsets of different groups".into()));
        }
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b))
    }

    pub fn translate(&self, by: &GroupElem) -> Result<FiniteSet> {
        self.spec.check_same(by)?;
        let mut out = Self::empty(&self.spec)?;
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                let moved = self.spec.add(&self.spec.elem_at(i)?, by)?;
                out.bits[self.spec.index_of(&moved)?] = true;
            }
        }
        Ok(out)
    }
}

/// Is `X = ⋃_i (X + ω_i)`?
pub fn is_invariant_finite(action: &ActionSpec, x: &FiniteSet) -> Result<bool> {
    if x.spec() != action.group() {
        return Err(Error::Mismatch("set over a different group than the action".into()));
    }
    let mut shifted = FiniteSet::empty(x.spec())?;
    for w in action.omega() {
        shifted = shifted.union(&x.translate(w)?)?;
    }
    Ok(shifted == *x)
}

/// All invariant subsets of a small finite group, by exhaustive scan over
/// all `2^|Γ|` subsets, in ascending bitmask order.
pub fn brute_force_invariant_sets(action: &ActionSpec) -> Result<Vec<FiniteSet>> {
    let spec = action.group();
    let order = spec
        .order()
        .ok_or_else(|| Error::InfiniteGroup("brute force scan".into()))?;
    if order > action.limits().max_brute_force_order {
        return Err(Error::ResourceLimit(format!(
            "brute force scan limited to order {}, got {order}",
            action.limits().max_brute_force_order
        )));
    }
    let order = order as usize;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << order) {
        let bits: Vec<bool> = (0..order).map(|i| mask & (1 << i) != 0).collect();
        let x = FiniteSet::from_bits(spec, bits)?;
        if is_invariant_finite(action, &x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// One building block of a [`FinitarySet`]: the translated semigroup
/// `base + Ω_indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub base: GroupElem,
    pub indices: BTreeSet<usize>,
}

/// Finite union of atoms `γ_j + Ω_{I_j}`.  Invariant by construction:
/// translating an atom by any `ω_i` lands inside the same atom, and
/// `γ_j = (γ_j + ω_i) - ω_i` shows condition (ii) with the atom's own
/// generators.
#[derive(Debug, Clone)]
pub struct FinitarySet {
    action: ActionSpec,
    atoms: Vec<Atom>,
}

impl FinitarySet {
    pub fn empty(action: &ActionSpec) -> Self {
        FinitarySet { action: action.clone(), atoms: Vec::new() }
    }

    pub fn atom(action: &ActionSpec, base: &GroupElem, indices: &BTreeSet<usize>) -> Result<Self> {
        action.group().check_same(base)?;
        action.check_coords(base)?;
        if let Some(&i) = indices.iter().find(|&&i| i == 0 || i > action.n()) {
            return Err(Error::Precondition(format!(
                "index {i} out of range 1..={}",
                action.n()
            )));
        }
        Ok(FinitarySet {
            action: action.clone(),
            atoms: vec![Atom { base: base.clone(), indices: indices.clone() }],
        })
    }

    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty_representation(&self) -> bool {
        self.atoms.is_empty()
    }

    fn semigroup(&self, indices: &BTreeSet<usize>) -> Result<SemigroupDesc> {
        make_semigroup(&self.action, indices)
    }

    pub fn member(&self, g: &GroupElem) -> Result<bool> {
        self.action.group().check_same(g)?;
        for atom in &self.atoms {
            let diff = self.action.group().sub(g, &atom.base)?;
            if self.semigroup(&atom.indices)?.member(&diff)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn union(&self, other: &FinitarySet) -> Result<FinitarySet> {
        self.action.check_same_action(&other.action)?;
        let mut atoms = self.atoms.clone();
        for a in &other.atoms {
            if !atoms.contains(a) {
                atoms.push(a.clone());
            }
        }
        Ok(FinitarySet { action: self.action.clone(), atoms })
    }

    pub fn translate(&self, by: &GroupElem) -> Result<FinitarySet> {
        self.action.group().check_same(by)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    base: self.action.group().add(&a.base, by)?,
                    indices: a.indices.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(FinitarySet { action: self.action.clone(), atoms })
    }

    /// Sound subset test on the decidable fragment: each atom `γ + Ω_I` of
    /// `self` is checked for containment in a *single* atom `γ' + Ω_{I'}`
    /// of `other`, which holds iff `γ - γ' ∈ Ω_{I'}` and `Ω_I ⊆ Ω_{I'}`
    /// (the weights themselves are automatic, so only the extra inverse
    /// generators `-ω_i`, `i ∈ I`, need testing).  A `true` answer is
    /// always correct; `false` may in principle be conservative when an
    /// atom is covered only jointly by several atoms of `other`, which
    /// does not occur for the sets this library constructs.
    pub fn is_subset(&self, other: &FinitarySet) -> Result<bool> {
        self.action.check_same_action(&other.action)?;
        let spec = self.action.group();
        'atoms: for atom in &self.atoms {
            for cover in &other.atoms {
                let s = other.semigroup(&cover.indices)?;
                let diff = spec.sub(&atom.base, &cover.base)?;
                if !s.member(&diff)? {
                    continue;
                }
                let mut contained = true;
                for &i in &atom.indices {
                    let neg = spec.neg(self.action.weight(i)?)?;
                    if !s.member(&neg)? {
                        contained = false;
                        break;
                    }
                }
                if contained {
                    continue 'atoms;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    pub fn set_eq(&self, other: &FinitarySet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }
}

/// The smallest invariant set containing `γ` is the single atom `γ + Ω_∅`.
pub fn minimal_invariant_containing(action: &ActionSpec, gamma: &GroupElem) -> Result<FinitarySet> {
    FinitarySet::atom(action, gamma, &BTreeSet::new())
}

/// The lattice of invariant subsets of a finite `Γ`.
///
/// For finite `Γ` the semigroup `Ω` generated by the weights is a subgroup,
/// invariant sets are exactly the unions of `Ω`-cosets, and the lattice is
/// the Boolean lattice on `Γ/Ω`.
#[derive(Debug, Clone)]
pub struct IdealLatticeFinite {
    pub quotient_map: QuotientMap,
    /// One representative per `Ω`-coset, each the lexicographically first
    /// member of its coset.
    pub coset_reps: Vec<GroupElem>,
    /// Number of invariant sets (= number of ideals): `2^{|Γ/Ω|}`.
    pub count: BigUint,
}

pub fn ideal_lattice_finite(action: &ActionSpec) -> Result<IdealLatticeFinite> {
    let spec = action.group();
    if !spec.is_finite() {
        return Err(Error::InfiniteGroup("explicit ideal lattice".into()));
    }
    // Finite Γ: the semigroup closure of the weights is the subgroup they
    // generate.
    let sub = subgroup_generated(spec, action.omega())?;
    let q = quotient(spec, &sub)?;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut reps: Vec<GroupElem> = Vec::new();
    for e in spec.enumerate()? {
        let p = q.project(&e)?;
        if seen.insert(p.coords().to_vec()) {
            reps.push(e);
        }
    }
    let count = BigUint::from(2u32).pow(reps.len() as u32);
    Ok(IdealLatticeFinite { quotient_map: q, coset_reps: reps, count })
}

impl IdealLatticeFinite {
    /// The coset of a representative as an explicit set.
    pub fn coset(&self, action: &ActionSpec, rep: &GroupElem) -> Result<FiniteSet> {
        let spec = action.group();
        let p0 = self.quotient_map.project(rep)?;
        let mut out = FiniteSet::empty(spec)?;
        for e in spec.enumerate()? {
            if self.quotient_map.project(&e)? == p0 {
                out.insert(&e)?;
            }
        }
        Ok(out)
    }
}

/// Witness that a set is a prime invariant set: `X = base + Ω_indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWitness {
    pub base: GroupElem,
    pub indices: BTreeSet<usize>,
}

/// Is the (non-empty, invariant) finite set prime, i.e. a single translated
/// semigroup `γ + Ω_I` with `I` non-empty?  For finite `Γ` every `Ω_I` is
/// the subgroup `Ω`, so this means: a single `Ω`-coset.
pub fn is_prime_finite(action: &ActionSpec, x: &FiniteSet) -> Result<Option<PrimeWitness>> {
    if x.is_empty() {
        return Err(Error::Precondition("prime test on the empty set".into()));
    }
    if !is_invariant_finite(action, x)? {
        return Err(Error::Precondition("prime test on a non-invariant set".into()));
    }
    let omega = make_semigroup(action, &BTreeSet::new())?;
    let bits = omega.members_finite().expect("finite group has explicit closure");
    let spec = action.group();
    let base = x.members()?.into_iter().next().expect("non-empty");
    let mut coset = FiniteSet::empty(spec)?;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            coset.insert(&spec.add(&base, &spec.elem_at(i)?)?)?;
        }
    }
    if &coset == x {
        Ok(Some(PrimeWitness { base, indices: BTreeSet::from([1]) }))
    } else {
        Ok(None)
    }
}

/// Prime test for a finitary set: try every atom base against every
/// non-empty index set.
pub fn is_prime_finitary(x: &FinitarySet) -> Result<Option<PrimeWitness>> {
    if x.is_empty_representation() {
        return Err(Error::Precondition("prime test on the empty set".into()));
    }
    let action = x.action().clone();
    let n = action.n();
    for atom in x.atoms() {
        for mask in 1u32..(1u32 << n) {
            let indices: BTreeSet<usize> =
                (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let candidate = FinitarySet::atom(&action, &atom.base, &indices)?;
            if x.set_eq(&candidate)? {
                return Ok(Some(PrimeWitness { base: atom.base.clone(), indices }));
            }
        }
    }
    Ok(None)
}

/// Is the invariant set "bad", i.e. does dropping the failing weight lose
/// elements: `X' = ⋃_{i ≠ f} (X + ω_i) ⊊ X`?  Returns a witness element of
/// `X \ X'` when bad.  When the escape condition holds every invariant set
/// is good and the answer is `None` without further work.
///
/// Completeness of the candidate scan: any member of an atom `γ_j + Ω_{I_j}`
/// whose representation uses a generator other than `±ω_f` lies in `X'`
/// directly (peel that generator off, or use that `-ω_i` is itself in the
/// atom's semigroup).  What remains are the elements `γ_j + k·ω_f`, and
/// `k` only matters modulo the order `K` of `ω_f`.
pub fn is_bad(x: &FinitarySet, report: &ConditionReport) -> Result<Option<GroupElem>> {
    if report.holds {
        return Ok(None);
    }
    let action = x.action();
    let spec = action.group();
    let f = report.failing_index.expect("failing condition carries its index");
    let k = report.order_k.expect("failing weight is torsion") as i64;
    let wf = action.weight(f)?.clone();

    let in_x_prime = |c: &GroupElem| -> Result<bool> {
        for i in 1..=action.n() {
            if i == f {
                continue;
            }
            if x.member(&spec.sub(c, action.weight(i)?)?)? {
                return Ok(true);
            }
        }
        Ok(false)
    };

    for atom in x.atoms() {
        for step in 0..k {
            let c = spec.add(&atom.base, &spec.scale(step, &wf)?)?;
            if x.member(&c)? && !in_x_prime(&c)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::condition_check;

    fn action_z(omega: &[i64]) -> ActionSpec {
        let g = GroupSpec::free(1);
        let ws = omega.iter().map(|&w| g.elem(&[w]).unwrap()).collect();
        ActionSpec::new(g, ws).unwrap()
    }

    #[test]
    fn finite_invariance_and_brute_force() {
        // Γ = Z/4, ω = (1, 1): only ∅ and Γ are invariant.
        let g = GroupSpec::new(0, vec![4]).unwrap();
        let a = ActionSpec::new(g.clone(), vec![g.elem(&[1]).unwrap(), g.elem(&[1]).unwrap()])
            .unwrap();
        let all = brute_force_invariant_sets(&a).unwrap();
        assert_eq!(all.len(), 2);

        // Γ = Z/4, ω = (2, 2): Ω = {0, 2}, two cosets, four invariant sets.
        let a = ActionSpec::new(g.clone(), vec![g.elem(&[2]).unwrap(), g.elem(&[2]).unwrap()])
            .unwrap();
        let all = brute_force_invariant_sets(&a).unwrap();
        assert_eq!(all.len(), 4);
        let lat = ideal_lattice_finite(&a).unwrap();
        assert_eq!(lat.coset_reps.len(), 2);
        assert_eq!(lat.count, BigUint::from(4u32));
    }

    #[test]
    fn finite_prime_sets() {
        let g = GroupSpec::new(0, vec![4]).unwrap();
        let a = ActionSpec::new(g.clone(), vec![g.elem(&[2]).unwrap(), g.elem(&[2]).unwrap()])
            .unwrap();
        // {1, 3} is a coset of Ω = {0, 2}: prime.
        let x = FiniteSet::from_members(&g, &[g.elem(&[1]).unwrap(), g.elem(&[3]).unwrap()])
            .unwrap();
        let w = is_prime_finite(&a, &x).unwrap().unwrap();
        assert_eq!(w.base.coords(), &[1]);
        // The whole group is two cosets: not prime.
        let whole = FiniteSet::universe(&g).unwrap();
        assert!(is_prime_finite(&a, &whole).unwrap().is_none());
        // Empty set: precondition error.
        assert!(is_prime_finite(&a, &FiniteSet::empty(&g).unwrap()).is_err());
        // Non-invariant set: precondition error.
        let bad = FiniteSet::from_members(&g, &[g.elem(&[1]).unwrap()]).unwrap();
        assert!(is_prime_finite(&a, &bad).is_err());
    }

    #[test]
    fn finitary_membership_and_subset() {
        // Γ = Z, ω = (0, 1): atom(0, {}) = N, atom(0, {2}) = Z.
        let a = action_z(&[0, 1]);
        let g = a.group().clone();
        let nat = FinitarySet::atom(&a, &g.zero(), &BTreeSet::new()).unwrap();
        let all = FinitarySet::atom(&a, &g.zero(), &BTreeSet::from([2])).unwrap();
        assert!(nat.member(&g.elem(&[5]).unwrap()).unwrap());
        assert!(!nat.member(&g.elem(&[-5]).unwrap()).unwrap());
        assert!(all.member(&g.elem(&[-5]).unwrap()).unwrap());
        assert!(nat.is_subset(&all).unwrap());
        assert!(!all.is_subset(&nat).unwrap());
        let shifted = nat.translate(&g.elem(&[3]).unwrap()).unwrap();
        assert!(shifted.is_subset(&nat).unwrap());
        assert!(!nat.is_subset(&shifted).unwrap());
        // Translating by ω_1 = 0 keeps N; union is still N-as-two-atoms.
        let u = nat.union(&shifted).unwrap();
        assert!(u.set_eq(&nat).unwrap());
    }

    #[test]
    fn finitary_prime_detection() {
        let a = action_z(&[0, 1]);
        let g = a.group().clone();
        // -7 + Ω_{1}: prime with witness (-7, {1}).
        let x = FinitarySet::atom(&a, &g.elem(&[-7]).unwrap(), &BTreeSet::from([1])).unwrap();
        let w = is_prime_finitary(&x).unwrap().unwrap();
        assert_eq!(w.base.coords(), &[-7]);
        // N ∪ (-7 + N) = -7 + N is still prime (single translated Ω).
        let nat = FinitarySet::atom(&a, &g.zero(), &BTreeSet::new()).unwrap();
        let shifted = FinitarySet::atom(&a, &g.elem(&[-7]).unwrap(), &BTreeSet::new()).unwrap();
        let u = nat.union(&shifted).unwrap();
        let w = is_prime_finitary(&u).unwrap().unwrap();
        assert_eq!(w.base.coords(), &[-7]);
    }

    #[test]
    fn badness_fixtures() {
        // Γ = Z, ω = (0, 1): condition fails at 1.  X = N is bad with
        // witness 0; X = Z is good.
        let a = action_z(&[0, 1]);
        let g = a.group().clone();
        let report = condition_check(&a).unwrap();
        assert!(!report.holds);
        let nat = FinitarySet::atom(&a, &g.zero(), &BTreeSet::new()).unwrap();
        let witness = is_bad(&nat, &report).unwrap().unwrap();
        assert!(witness.is_zero());
        let all = FinitarySet::atom(&a, &g.zero(), &BTreeSet::from([2])).unwrap();
        assert!(is_bad(&all, &report).unwrap().is_none());

        // When the condition holds everything is good.
        let a = action_z(&[1, 1]);
        let report = condition_check(&a).unwrap();
        assert!(report.holds);
        let g = a.group().clone();
        let x = FinitarySet::atom(&a, &g.zero(), &BTreeSet::new()).unwrap();
        assert!(is_bad(&x, &report).unwrap().is_none());
    }

    #[test]
    fn minimal_invariant_set_is_the_orbit_semigroup() {
        let a = action_z(&[2, 3]);
        let g = a.group().clone();
        let x = minimal_invariant_containing(&a, &g.elem(&[1]).unwrap()).unwrap();
        assert!(x.member(&g.elem(&[1]).unwrap()).unwrap());
        assert!(x.member(&g.elem(&[3]).unwrap()).unwrap());
        assert!(!x.member(&g.elem(&[2]).unwrap()).unwrap());
    }
}
