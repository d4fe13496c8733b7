//! K-groups of the crossed product.
//!
//! The K-groups fit into a six-term sequence whose connecting map on
//! `K_0(C*(G)) = Z[Γ]` is `id - Σ_i (shift by ω_i)`.  For finite `Γ` this
//! is an integer matrix `M = I - Σ_i P_{ω_i}` on `Z^{|Γ|}`, and
//!
//! * `K_0 = coker(M)`: invariant factors of `M` plus a free part,
//! * `K_1 = ker(M) ≅ Z^{|Γ| - rank(M)}`.
//!
//! For infinite `Γ` the same map is returned symbolically as a group-ring
//! element `1 - Σ_i t^{ω_i}`.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::matrix::{snf, IntMat};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroupReport {
    /// Invariant factors (> 1) of the torsion part of `K_0`.
    pub k0_torsion: Vec<BigUint>,
    pub k0_free_rank: usize,
    pub k1_free_rank: usize,
    /// Size of the presentation matrix (`|Γ|`).
    pub matrix_size: usize,
}

impl KGroupReport {
    pub fn k0_string(&self) -> String {
        group_string(self.k0_free_rank, &self.k0_torsion)
    }

    pub fn k1_string(&self) -> String {
        group_string(self.k1_free_rank, &[])
    }
}

fn group_string(free_rank: usize, torsion: &[BigUint]) -> String {
    let mut parts: Vec<String> = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push("Z".into()),
        d => parts.push(format!("Z^{d}")),
    }
    for t in torsion {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" x ")
    }
}

/// Compute `K_0` and `K_1` of the crossed product for finite `Γ`.
pub fn kgroups_finite(action: &ActionSpec) -> Result<KGroupReport> {
    let spec = action.group();
    let order = spec
        .order()
        .ok_or_else(|| Error::InfiniteGroup("explicit K-group computation".into()))?;
    if order > action.limits().max_kgroup_order {
        return Err(Error::ResourceLimit(format!(
            "K-group computation limited to order {}, got {order}",
            action.limits().max_kgroup_order
        )));
    }
    let n = order as usize;
    let mut m = IntMat::identity(n);
    for w in action.omega() {
        for a in 0..n {
            let target = spec.add(&spec.elem_at(a)?, w)?;
            let b = spec.index_of(&target)?;
            let v = m.at(a, b) - BigInt::one();
            m.set(a, b, v);
        }
    }
    let s = snf(&m);
    let mut k0_torsion: Vec<BigUint> = Vec::new();
    let mut rank = 0usize;
    for d in s.diag() {
        if d.is_zero() {
            continue;
        }
        rank += 1;
        let d = d.abs();
        if d > BigInt::one() {
            k0_torsion.push(d.to_biguint().expect("non-negative"));
        }
    }
    Ok(KGroupReport {
        k0_torsion,
        k0_free_rank: n - rank,
        k1_free_rank: n - rank,
        matrix_size: n,
    })
}

/// The symbolic presentation of the `K_0`-map for arbitrary `Γ`: the
/// group-ring element `1 - Σ_i t^{ω_i}` of `Z[Γ]`, with one multiplicative
/// variable per free coordinate and one per torsion coordinate (the latter
/// carrying an order relation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    /// Human-readable expression, e.g. `1 - 2 t` or `1 - s - t`.
    pub expr: String,
    /// Relations on the torsion variables, e.g. `s^2 = 1`.
    pub relations: Vec<String>,
}

pub fn presentation_matrix(action: &ActionSpec) -> Result<Presentation> {
    let spec = action.group();
    let d = spec.rank();
    let s = spec.torsion().len();
    let var = |i: usize| -> String {
        if i < d {
            if d == 1 {
                "t".into()
            } else {
                format!("t{}", i + 1)
            }
        } else if s == 1 {
            "s".into()
        } else {
            format!("s{}", i - d + 1)
        }
    };

    // Collect the weights as monomials with multiplicity.
    let mut terms: Vec<(Vec<i64>, i64)> = Vec::new();
    for w in action.omega() {
        let key = w.coords().to_vec();
        match terms.iter_mut().find(|(k, _)| k == &key) {
            Some((_, c)) => *c += 1,
            None => terms.push((key, 1)),
        }
    }
    terms.sort_by(|(a, _), (b, _)| a.cmp(b));

    let monomial = |coords: &[i64]| -> String {
        let factors: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { var(i) } else { format!("{}^{e}", var(i)) })
            .collect();
        factors.join(" ")
    };

    let mut expr = String::from("1");
    for (coords, mult) in &terms {
        let mono = monomial(coords);
        let piece = match (mono.is_empty(), *mult) {
            (true, m) => m.to_string(),
            (false, 1) => mono,
            (false, m) => format!("{m} {mono}"),
        };
        expr.push_str(&format!(" - {piece}"));
    }

    let relations = spec
        .torsion()
        .iter()
        .enumerate()
        .map(|(j, &k)| format!("{}^{k} = 1", var(d + j)))
        .collect();

    Ok(Presentation { expr, relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn trivial_action(n: usize) -> ActionSpec {
        let g = GroupSpec::new(0, vec![]).unwrap();
        ActionSpec::new(g.clone(), vec![g.zero(); n]).unwrap()
    }

    #[test]
    fn cuntz_algebra_k_theory() {
        // K_0(O_n) = Z/(n-1), K_1 = 0.
        for n in 2..=9usize {
            let r = kgroups_finite(&trivial_action(n)).unwrap();
            if n == 2 {
                // Z/1 is trivial: no torsion factors at all.
                assert!(r.k0_torsion.is_empty(), "n = 2");
                assert_eq!(r.k0_string(), "0");
            } else {
                assert_eq!(r.k0_torsion, vec![BigUint::from(n as u32 - 1)], "n = {n}");
            }
            assert_eq!(r.k0_free_rank, 0);
            assert_eq!(r.k1_free_rank, 0);
        }
    }

    #[test]
    fn z3_with_unit_weights() {
        // Γ = Z/3, ω = (1, 1): M = I - 2P, det ±7: K_0 = Z/7, K_1 = 0.
        let g = GroupSpec::new(0, vec![3]).unwrap();
        let a = ActionSpec::new(g.clone(), vec![g.elem(&[1]).unwrap(), g.elem(&[1]).unwrap()])
            .unwrap();
        let r = kgroups_finite(&a).unwrap();
        assert_eq!(r.k0_torsion, vec![BigUint::from(7u32)]);
        assert_eq!(r.k0_free_rank, 0);
        assert_eq!(r.k1_free_rank, 0);
        assert_eq!(r.k0_string(), "Z/7");
    }

    #[test]
    fn z2_with_rank_drop() {
        // Γ = Z/2, ω = (0, 0, 1): M = -I - P has rank 1: K_0 = K_1 = Z.
        let g = GroupSpec::new(0, vec![2]).unwrap();
        let a = ActionSpec::new(
            g.clone(),
            vec![g.zero(), g.zero(), g.elem(&[1]).unwrap()],
        )
        .unwrap();
        let r = kgroups_finite(&a).unwrap();
        assert!(r.k0_torsion.is_empty());
        assert_eq!(r.k0_free_rank, 1);
        assert_eq!(r.k1_free_rank, 1);
        assert_eq!(r.k0_string(), "Z");
        assert_eq!(r.k1_string(), "Z");
    }

    #[test]
    fn symbolic_presentations() {
        // Γ = Z, ω = (1, 1): 1 - 2t.
        let g = GroupSpec::free(1);
        let a = ActionSpec::new(g.clone(), vec![g.elem(&[1]).unwrap(), g.elem(&[1]).unwrap()])
            .unwrap();
        let p = presentation_matrix(&a).unwrap();
        assert_eq!(p.expr, "1 - 2 t");
        assert!(p.relations.is_empty());

        // Γ = Z x Z/2, ω = ((0, 1), (1, 0)): 1 - s - t with s^2 = 1.
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let a = ActionSpec::new(
            g.clone(),
            vec![g.elem(&[0, 1]).unwrap(), g.elem(&[1, 0]).unwrap()],
        )
        .unwrap();
        let p = presentation_matrix(&a).unwrap();
        assert_eq!(p.expr, "1 - s - t");
        assert_eq!(p.relations, vec!["s^2 = 1".to_string()]);
    }
}
