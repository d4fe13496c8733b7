//! Subgroups of a finitely generated abelian group and quotients by them.
//!
//! A subgroup of `Γ = Z^{d+s} / R` (with `R` the torsion relation lattice)
//! is stored as the full preimage lattice in `Z^{d+s}`, i.e. the lattice
//! spanned by lifted generators *and* the relation vectors `k_j e_j`, kept
//! in canonical Hermite normal form.  Two subgroups are equal iff their
//! canonical bases are equal.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupElem, GroupSpec};
use crate::matrix::{hnf, hnf_lattice_contains, snf, IntMat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDesc {
    spec: GroupSpec,
    generators: Vec<GroupElem>,
    /// Canonical HNF basis of the preimage lattice in `Z^{d+s}`.
    basis: IntMat,
}

/// Subgroup generated by `gens` (plus, implicitly, nothing else: the torsion
/// relations are part of the ambient group, not extra generators).
pub fn subgroup_generated(spec: &GroupSpec, gens: &[GroupElem]) -> Result<SubgroupDesc> {
    for g in gens {
        spec.check_same(g)?;
    }
    let mut rows: Vec<Vec<i64>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    rows.extend(spec.relation_rows());
    if rows.is_empty() {
        // Zero subgroup of a free group: an empty basis with the right width.
        return Ok(SubgroupDesc {
            spec: spec.clone(),
            generators: gens.to_vec(),
            basis: IntMat::zeros(0, spec.n_coords()),
        });
    }
    let basis = hnf(&IntMat::from_rows(&rows));
    Ok(SubgroupDesc { spec: spec.clone(), generators: gens.to_vec(), basis })
}

impl SubgroupDesc {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn contains(&self, g: &GroupElem) -> Result<bool> {
        self.spec.check_same(g)?;
        let v: Vec<BigInt> = g.coords().iter().map(|&c| BigInt::from(c)).collect();
        Ok(hnf_lattice_contains(&self.basis, &v))
    }

    /// Is this the whole group?  (The preimage lattice is all of `Z^{d+s}`.)
    pub fn is_full(&self) -> bool {
        let n = self.spec.n_coords();
        self.basis.nrows() == n && self.basis == IntMat::identity(n)
    }
}

/// Role of one coordinate of the SNF basis in the quotient group.
#[derive(Debug, Clone)]
enum CoordRole {
    /// Free quotient coordinate (diagonal entry 0 / absent).
    Free { z_index: usize },
    /// Torsion quotient coordinate with modulus `d >= 2`.
    Torsion { z_index: usize, modulus: u64 },
}

/// The projection `Γ -> Γ / H` together with an explicit (set-theoretic)
/// section.  Built from the Smith normal form of the subgroup's preimage
/// lattice: with `U M V = D`, the map `x -> x V` takes the lattice to the
/// diagonal lattice, so the quotient splits coordinate-wise.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source: GroupSpec,
    target: GroupSpec,
    v: IntMat,
    v_inv: IntMat,
    roles: Vec<CoordRole>,
}

pub fn quotient(spec: &GroupSpec, sub: &SubgroupDesc) -> Result<QuotientMap> {
    if sub.spec() != spec {
        return Err(Error::Mismatch("subgroup of a different group".into()));
    }
    let m = spec.n_coords();
    let s = snf(sub.basis());
    let diag = s.diag();
    let mut roles: Vec<CoordRole> = Vec::new();
    // Free coordinates first, then torsion in SNF (divisibility-chain) order.
    for z in 0..m {
        let d = diag.get(z).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            roles.push(CoordRole::Free { z_index: z });
        }
    }
    let mut torsion: Vec<u64> = Vec::new();
    for z in 0..m {
        let d = diag.get(z).cloned().unwrap_or_else(BigInt::zero);
        if d > BigInt::one() {
            let modulus = d
                .to_u64()
                .ok_or_else(|| Error::ResourceLimit("quotient torsion order overflow".into()))?;
            roles.push(CoordRole::Torsion { z_index: z, modulus });
            torsion.push(modulus);
        }
    }
    let rank = roles.len() - torsion.len();
    let target = GroupSpec::new(rank, torsion)?;
    let v_inv = s.v.inverse_unimodular();
    Ok(QuotientMap { source: spec.clone(), target, v: s.v, v_inv, roles })
}

impl QuotientMap {
    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn project(&self, g: &GroupElem) -> Result<GroupElem> {
        self.source.check_same(g)?;
        let x: Vec<BigInt> = g.coords().iter().map(|&c| BigInt::from(c)).collect();
        let z = self.v.apply_left(&x);
        let coords: Vec<i64> = self
            .roles
            .iter()
            .map(|role| {
                let raw = match role {
                    CoordRole::Free { z_index } => z[*z_index].clone(),
                    CoordRole::Torsion { z_index, modulus } => {
                        let m = BigInt::from(*modulus);
                        ((&z[*z_index] % &m) + &m) % &m
                    }
                };
                raw.to_i64()
                    .ok_or_else(|| Error::ResourceLimit("quotient coordinate overflow".into()))
            })
            .collect::<Result<_>>()?;
        self.target.elem(&coords)
    }

    /// A set-theoretic section: `project(section(y)) == y` for every `y`.
    pub fn section(&self, y: &GroupElem) -> Result<GroupElem> {
        self.target.check_same(y)?;
        let m = self.source.n_coords();
        let mut z = vec![BigInt::zero(); m];
        for (i, role) in self.roles.iter().enumerate() {
            let z_index = match role {
                CoordRole::Free { z_index } => *z_index,
                CoordRole::Torsion { z_index, .. } => *z_index,
            };
            z[z_index] = BigInt::from(y.coords()[i]);
        }
        let x = self.v_inv.apply_left(&z);
        let coords: Vec<i64> = x
            .iter()
            .map(|c| {
                c.to_i64()
                    .ok_or_else(|| Error::ResourceLimit("section coordinate overflow".into()))
            })
            .collect::<Result<_>>()?;
        self.source.elem(&coords)
    }

    /// True iff the quotient is the trivial group.
    pub fn is_trivial_quotient(&self) -> bool {
        self.target.is_trivial()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_membership_and_canonical_equality() {
        let g = GroupSpec::new(1, vec![4]).unwrap();
        // <(2, 1)> inside Z x Z/4.
        let a = subgroup_generated(&g, &[g.elem(&[2, 1]).unwrap()]).unwrap();
        assert!(a.contains(&g.elem(&[2, 1]).unwrap()).unwrap());
        assert!(a.contains(&g.elem(&[4, 2]).unwrap()).unwrap());
        assert!(a.contains(&g.elem(&[8, 0]).unwrap()).unwrap());
        assert!(!a.contains(&g.elem(&[2, 0]).unwrap()).unwrap());
        assert!(!a.contains(&g.elem(&[1, 0]).unwrap()).unwrap());

        // Same subgroup from a redundant generating set.
        let b = subgroup_generated(
            &g,
            &[g.elem(&[2, 1]).unwrap(), g.elem(&[4, 2]).unwrap(), g.elem(&[-2, 3]).unwrap()],
        )
        .unwrap();
        assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn full_subgroup_detection() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let full = subgroup_generated(
            &g,
            &[g.elem(&[1, 0]).unwrap(), g.elem(&[0, 1]).unwrap()],
        )
        .unwrap();
        assert!(full.is_full());
        let half = subgroup_generated(&g, &[g.elem(&[1, 0]).unwrap()]).unwrap();
        assert!(!half.is_full());
    }

    #[test]
    fn quotient_of_z_cross_z2_by_torsion() {
        // (Z x Z/2) / <(0,1)> = Z.
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let sub = subgroup_generated(&g, &[g.elem(&[0, 1]).unwrap()]).unwrap();
        let q = quotient(&g, &sub).unwrap();
        assert_eq!(q.target(), &GroupSpec::free(1));
        let p = q.project(&g.elem(&[5, 1]).unwrap()).unwrap();
        let p2 = q.project(&g.elem(&[5, 0]).unwrap()).unwrap();
        assert_eq!(p, p2);
        let sec = q.section(&p).unwrap();
        assert_eq!(q.project(&sec).unwrap(), p);
    }

    #[test]
    fn quotient_of_z4_by_two_torsion() {
        // (Z/4) / <2> = Z/2.
        let g = GroupSpec::new(0, vec![4]).unwrap();
        let sub = subgroup_generated(&g, &[g.elem(&[2]).unwrap()]).unwrap();
        let q = quotient(&g, &sub).unwrap();
        assert_eq!(q.target(), &GroupSpec::new(0, vec![2]).unwrap());
        let zero = q.project(&g.elem(&[2]).unwrap()).unwrap();
        assert!(zero.is_zero());
        let one = q.project(&g.elem(&[3]).unwrap()).unwrap();
        assert!(!one.is_zero());
    }

    #[test]
    fn quotient_of_z2_by_diagonal() {
        // Z^2 / <(1,1)> = Z.
        let g = GroupSpec::free(2);
        let sub = subgroup_generated(&g, &[g.elem(&[1, 1]).unwrap()]).unwrap();
        let q = quotient(&g, &sub).unwrap();
        assert_eq!(q.target(), &GroupSpec::free(1));
        let a = q.project(&g.elem(&[3, 1]).unwrap()).unwrap();
        let b = q.project(&g.elem(&[4, 2]).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!q.project(&g.elem(&[1, 0]).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn section_roundtrip_on_mixed_quotient() {
        // (Z^2 x Z/4) / <(2, 0, 1)>: section must invert projection.
        let g = GroupSpec::new(2, vec![4]).unwrap();
        let sub = subgroup_generated(&g, &[g.elem(&[2, 0, 1]).unwrap()]).unwrap();
        let q = quotient(&g, &sub).unwrap();
        for x in [-3i64, 0, 2, 7] {
            for y in [-1i64, 0, 5] {
                for t in 0..4i64 {
                    let e = g.elem(&[x, y, t]).unwrap();
                    let p = q.project(&e).unwrap();
                    assert_eq!(q.project(&q.section(&p).unwrap()).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn quotient_kernel_is_exactly_the_subgroup() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let sub = subgroup_generated(&g, &[g.elem(&[2, 1]).unwrap()]).unwrap();
        let q = quotient(&g, &sub).unwrap();
        for x in -6..=6 {
            for t in 0..2 {
                let e = g.elem(&[x, t]).unwrap();
                let in_kernel = q.project(&e).unwrap().is_zero();
                assert_eq!(in_kernel, sub.contains(&e).unwrap(), "at {e}");
            }
        }
    }
}
