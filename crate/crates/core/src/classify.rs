//! Global verdicts about the crossed product: simplicity, primitivity, the
//! strong Connes spectrum, and the primitive ideal space.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::ext::Angle;
use crate::group::{GroupElem, GroupSpec};
use crate::matrix::{hnf, snf, IntMat};
use crate::semigroup::{
    condition_check, make_semigroup, semigroups_equal, units_subgroup, ConditionReport,
    SemigroupDesc,
};
use crate::sets::FiniteSet;
use crate::subgroup::{quotient, subgroup_generated};

/// The crossed product is simple iff every `Ω_{i}` is all of `Γ`.
/// `Ω_{i} = Γ` is decided by testing the standard generators of `Γ` and
/// their inverses for membership (a semigroup containing a generating set
/// of the group together with its inverses is the whole group).
pub fn is_simple(action: &ActionSpec) -> Result<bool> {
    let spec = action.group();
    for i in 1..=action.n() {
        let s = make_semigroup(action, &BTreeSet::from([i]))?;
        for g in spec.standard_generators() {
            if !s.member(&g)? || !s.member(&spec.neg(&g)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The crossed product is primitive iff the closed subgroup generated by
/// the weights is all of `Γ`.
pub fn is_primitive(action: &ActionSpec) -> Result<bool> {
    Ok(subgroup_generated(action.group(), action.omega())?.is_full())
}

/// The strong Connes spectrum `⋂_i Ω_{i}`, as a membership oracle, with an
/// explicit member set when `Γ` is finite.
#[derive(Debug, Clone)]
pub struct SpectrumDesc {
    semigroups: Vec<SemigroupDesc>,
    explicit: Option<FiniteSet>,
}

impl SpectrumDesc {
    pub fn member(&self, g: &GroupElem) -> Result<bool> {
        if let Some(x) = &self.explicit {
            return x.contains(g);
        }
        for s in &self.semigroups {
            if !s.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn explicit(&self) -> Option<&FiniteSet> {
        self.explicit.as_ref()
    }

    /// The semigroups being intersected, indexed by the weight they invert.
    pub fn parts(&self) -> &[SemigroupDesc] {
        &self.semigroups
    }
}

pub fn strong_connes_spectrum(action: &ActionSpec) -> Result<SpectrumDesc> {
    let semigroups: Vec<SemigroupDesc> = (1..=action.n())
        .map(|i| make_semigroup(action, &BTreeSet::from([i])))
        .collect::<Result<_>>()?;
    let explicit = if action.group().is_finite() {
        let spec = action.group();
        let mut x = FiniteSet::universe(spec)?;
        for s in &semigroups {
            let bits = s.members_finite().expect("finite group has explicit closure");
            let part = FiniteSet::from_bits(spec, bits.to_vec())?;
            let mut both = FiniteSet::empty(spec)?;
            for e in spec.enumerate()? {
                if x.contains(&e)? && part.contains(&e)? {
                    both.insert(&e)?;
                }
            }
            x = both;
        }
        Some(x)
    } else {
        None
    };
    Ok(SpectrumDesc { semigroups, explicit })
}

/// Partition of the non-empty index sets `I ⊆ {1..n}` by equality of their
/// semigroups `Ω_I`.  Classes are listed with their lexicographically
/// smallest member first (which is the representative), and the classes
/// themselves are ordered by representative.
pub fn index_class_reps(action: &ActionSpec) -> Result<Vec<Vec<BTreeSet<usize>>>> {
    action.check_n_limit()?;
    let n = action.n();
    let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        subsets.push((1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect());
    }
    // Lexicographic order on the sorted index tuples.
    subsets.sort();
    let mut classes: Vec<(SemigroupDesc, Vec<BTreeSet<usize>>)> = Vec::new();
    'outer: for indices in subsets {
        let s = make_semigroup(action, &indices)?;
        for (rep, members) in classes.iter_mut() {
            if semigroups_equal(rep, &s)? {
                members.push(indices);
                continue 'outer;
            }
        }
        classes.push((s, vec![indices]));
    }
    Ok(classes.into_iter().map(|(_, members)| members).collect())
}

/// The underlying space of one component of the primitive ideal space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentSpace {
    /// The (possibly trivial) group `Γ / (Ω_I ∩ -Ω_I)`.
    Group(GroupSpec),
    /// `Γ' × T`: the exceptional component attached to the failing index.
    GroupTimesCircle(GroupSpec),
}

impl std::fmt::Display for ComponentSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComponentSpace::Group(g) if g.is_trivial() => write!(f, "point"),
            ComponentSpace::Group(g) => write!(f, "{g}"),
            ComponentSpace::GroupTimesCircle(g) if g.is_trivial() => write!(f, "T"),
            ComponentSpace::GroupTimesCircle(g) => write!(f, "{g} x T"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PrimComponent {
    /// Representative index set of the class.
    pub rep: BTreeSet<usize>,
    /// All index sets in the class.
    pub members: Vec<BTreeSet<usize>>,
    pub space: ComponentSpace,
}

/// The primitive ideal space, as a disjoint union of components indexed by
/// classes of index sets with equal `Ω_I`.
#[derive(Debug, Clone)]
pub struct PrimSpaceDesc {
    pub condition: ConditionReport,
    pub components: Vec<PrimComponent>,
}

/// Compute the primitive ideal space.  One component per class of index
/// sets; the component of class `[I]` is `Γ / (Ω_I ∩ -Ω_I)` — except that
/// when the escape condition fails at `f`, the class of `{f}` (which is
/// then a singleton class) carries the exceptional component `Γ' × T`.
pub fn primitive_ideal_space(action: &ActionSpec) -> Result<PrimSpaceDesc> {
    let condition = condition_check(action)?;
    let classes = index_class_reps(action)?;
    let mut components = Vec::new();
    for members in classes {
        let rep = members[0].clone();
        let is_failing_class = match condition.failing_index {
            Some(f) => members.contains(&BTreeSet::from([f])),
            None => false,
        };
        let space = if is_failing_class {
            // Γ' = Γ / <ω_f>.
            let f = condition.failing_index.unwrap();
            let sub = subgroup_generated(action.group(), &[action.weight(f)?.clone()])?;
            let q = quotient(action.group(), &sub)?;
            ComponentSpace::GroupTimesCircle(q.target().clone())
        } else {
            let s = make_semigroup(action, &rep)?;
            let units = units_subgroup(&s)?;
            let q = quotient(action.group(), &units)?;
            ComponentSpace::Group(q.target().clone())
        };
        components.push(PrimComponent { rep, members, space });
    }
    Ok(PrimSpaceDesc { condition, components })
}

/// Structure report for the opposite compactness regime: `G` discrete, so
/// the dual `Γ` is a compact torus and the weights are rational angle
/// vectors.  Here the closure `Ω̄` of the weight semigroup is automatically
/// a closed *subgroup* containing every `-ω_i`, all ideals are
/// gauge-invariant, and the ideal lattice is parametrized by the closed
/// subsets of the (finite, for rational weights) quotient `Γ / Ω̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactDualReport {
    /// Dimension of the torus `Γ = T^d`.
    pub torus_dim: usize,
    /// Invariant factors (each >= 2) of the finite subgroup `Ω̄`.
    pub closure_invariant_factors: Vec<u64>,
    /// Order of `Ω̄`.
    pub closure_order: u64,
}

impl CompactDualReport {
    pub fn summary(&self) -> String {
        let group = if self.closure_invariant_factors.is_empty() {
            "0".to_string()
        } else {
            self.closure_invariant_factors
                .iter()
                .map(|k| format!("Z/{k}"))
                .collect::<Vec<_>>()
                .join(" x ")
        };
        format!(
            "Gamma = T^{d} compact: the closed semigroup generated by the weights is the \
             finite subgroup {group} (order {o}); every -w_i lies in it, all ideals are \
             gauge-invariant, and ideals correspond to closed subsets of the quotient of \
             T^{d} by it (again a {d}-torus).",
            d = self.torus_dim,
            group = group,
            o = self.closure_order,
        )
    }
}

/// Analyze a quasi-free action with weights in a compact torus dual
/// `Γ = T^d`, given as vectors of rational angles.
pub fn analyze_compact_dual(dim: usize, weights: &[Vec<Angle>]) -> Result<CompactDualReport> {
    if weights.len() < 2 {
        return Err(Error::Precondition("need at least 2 weights".into()));
    }
    if weights.iter().any(|w| w.len() != dim) {
        return Err(Error::Mismatch("weight dimension does not match the torus".into()));
    }
    // Common denominator Q: Ω̄ sits inside (1/Q)Z^d / Z^d.
    let mut q: u64 = 1;
    for w in weights {
        for a in w {
            q = crate::group::lcm(q, a.denominator());
            if q > 1 << 20 {
                return Err(Error::ResourceLimit("angle denominators too large".into()));
            }
        }
    }
    // Lattice L spanned by the scaled weights and Q·Z^d; Ω̄ = L / QZ^d.
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for w in weights {
        rows.push(
            w.iter()
                .map(|a| (a.numerator() * (q / a.denominator())) as i64)
                .collect(),
        );
    }
    for j in 0..dim {
        let mut r = vec![0i64; dim];
        r[j] = q as i64;
        rows.push(r);
    }
    if dim == 0 {
        return Ok(CompactDualReport {
            torus_dim: 0,
            closure_invariant_factors: vec![],
            closure_order: 1,
        });
    }
    let h = hnf(&IntMat::from_rows(&rows));
    // L has full rank d, so H is square; Ω̄ = L/QZ^d has the invariant
    // factors of the integer matrix C with C·H = Q·I.
    debug_assert_eq!(h.nrows(), dim);
    let det = h.det();
    let mut c = IntMat::zeros(dim, dim);
    let h_adj_scaled = adjugate(&h);
    for r in 0..dim {
        for cidx in 0..dim {
            let num = BigInt::from(q) * h_adj_scaled.at(r, cidx);
            let (quot, rem) = num_integer::Integer::div_rem(&num, &det);
            debug_assert!(rem.is_zero(), "QZ^d must be inside L");
            c.set(r, cidx, quot);
        }
    }
    let s = snf(&c);
    let mut factors: Vec<u64> = Vec::new();
    let mut order: u64 = 1;
    for dgn in s.diag() {
        let v = dgn
            .to_u64()
            .ok_or_else(|| Error::ResourceLimit("closure order overflow".into()))?;
        if v > 1 {
            factors.push(v);
            order = order.checked_mul(v).ok_or_else(|| {
                Error::ResourceLimit("closure order overflow".into())
            })?;
        } else if v == 0 {
            return Err(Error::Precondition("weight lattice lost rank".into()));
        }
    }
    Ok(CompactDualReport {
        torus_dim: dim,
        closure_invariant_factors: factors,
        closure_order: order,
    })
}

/// Adjugate matrix: `adj(H) * H = det(H) * I`.
fn adjugate(h: &IntMat) -> IntMat {
    let n = h.nrows();
    let mut adj = IntMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut minor = IntMat::zeros(n - 1, n - 1);
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let si = if i < r { i } else { i + 1 };
                    let sj = if j < c { j } else { j + 1 };
                    minor.set(i, j, h.at(si, sj).clone());
                }
            }
            let mut cof = minor.det();
            if (r + c) % 2 == 1 {
                cof = -cof;
            }
            adj.set(c, r, cof);
        }
    }
    if n == 0 {
        return IntMat::identity(0);
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    fn action_z(omega: &[i64]) -> ActionSpec {
        let g = GroupSpec::free(1);
        let ws = omega.iter().map(|&w| g.elem(&[w]).unwrap()).collect();
        ActionSpec::new(g, ws).unwrap()
    }

    #[test]
    fn simplicity_on_the_line() {
        // ω = (1, -1): each Ω_{i} contains 1 and -1, hence is Z: simple.
        assert!(is_simple(&action_z(&[1, -1])).unwrap());
        // ω = (1, 1): Ω_{1} = Z but wait -1 ∈ Ω_{1}: also simple.
        assert!(is_simple(&action_z(&[1, 1])).unwrap());
        // ω = (0, 1): Ω_{1} = N is not Z: not simple.
        assert!(!is_simple(&action_z(&[0, 1])).unwrap());
        // ω = (2, 2): Ω_{1} = 2Z misses 1: not simple.
        assert!(!is_simple(&action_z(&[2, 2])).unwrap());
    }

    #[test]
    fn primitivity_is_about_the_generated_subgroup() {
        assert!(is_primitive(&action_z(&[1, 1])).unwrap());
        assert!(is_primitive(&action_z(&[0, 1])).unwrap());
        assert!(is_primitive(&action_z(&[2, 3])).unwrap());
        assert!(!is_primitive(&action_z(&[2, 2])).unwrap());
        // Trivial group: always primitive (O_n is).
        let t = GroupSpec::new(0, vec![]).unwrap();
        let a = ActionSpec::new(t.clone(), vec![t.zero(), t.zero()]).unwrap();
        assert!(is_primitive(&a).unwrap());
        assert!(is_simple(&a).unwrap());
    }

    #[test]
    fn spectrum_on_the_line() {
        // ω = (0, 1): Ω_{1} = N, Ω_{2} = Z, intersection N.
        let s = strong_connes_spectrum(&action_z(&[0, 1])).unwrap();
        let g = GroupSpec::free(1);
        assert!(s.member(&g.elem(&[3]).unwrap()).unwrap());
        assert!(s.member(&g.zero()).unwrap());
        assert!(!s.member(&g.elem(&[-1]).unwrap()).unwrap());
        // ω = (1, 1): spectrum Z (simple case).
        let s = strong_connes_spectrum(&action_z(&[1, 1])).unwrap();
        assert!(s.member(&g.elem(&[-5]).unwrap()).unwrap());
    }

    #[test]
    fn index_classes_for_the_failing_fixture() {
        // ω = (0, 1) on Z: Ω_{1} = N; Ω_{2} = Ω_{1,2} = Z.
        let classes = index_class_reps(&action_z(&[0, 1])).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0][0], BTreeSet::from([1]));
        assert_eq!(classes[0].len(), 1);
        assert_eq!(classes[1].len(), 2);
    }

    #[test]
    fn prim_space_fixtures() {
        // Γ = Z, ω = (0, 1): components [Z × T (class {1}), point (class
        // {2} ~ {1,2})].
        let p = primitive_ideal_space(&action_z(&[0, 1])).unwrap();
        assert!(!p.condition.holds);
        assert_eq!(p.components.len(), 2);
        assert_eq!(
            p.components[0].space,
            ComponentSpace::GroupTimesCircle(GroupSpec::free(1))
        );
        assert_eq!(p.components[0].space.to_string(), "Z x T");
        assert_eq!(
            p.components[1].space,
            ComponentSpace::Group(GroupSpec::new(0, vec![]).unwrap())
        );
        assert_eq!(p.components[1].space.to_string(), "point");

        // Γ = Z, ω = (1, 1): a single point (the algebra is simple).
        let p = primitive_ideal_space(&action_z(&[1, 1])).unwrap();
        assert!(p.condition.holds);
        assert_eq!(p.components.len(), 1);
        assert_eq!(p.components[0].space.to_string(), "point");
    }

    #[test]
    fn compact_dual_examples() {
        // T^1, weights 1/2 and 0: Ω̄ = Z/2.
        let w = vec![vec![Angle::new(1, 2).unwrap()], vec![Angle::one()]];
        let r = analyze_compact_dual(1, &w).unwrap();
        assert_eq!(r.closure_invariant_factors, vec![2]);
        assert_eq!(r.closure_order, 2);

        // T^2, weights (1/2, 0) and (0, 1/3): Ω̄ = Z/6.
        let w = vec![
            vec![Angle::new(1, 2).unwrap(), Angle::one()],
            vec![Angle::one(), Angle::new(1, 3).unwrap()],
        ];
        let r = analyze_compact_dual(2, &w).unwrap();
        assert_eq!(r.closure_invariant_factors, vec![6]);
        assert_eq!(r.closure_order, 6);
        assert!(r.summary().contains("T^2"));
    }
}
