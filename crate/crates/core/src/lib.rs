//! Ideal structure of Cuntz algebra crossed products by quasi-free abelian
//! actions.
//!
//! Given a finitely generated abelian group `Γ = Z^d x Z/k_1 x ... x Z/k_s`
//! (the dual of the acting group) and `n >= 2` weights `ω_1, ..., ω_n ∈ Γ`,
//! this crate computes, exactly:
//!
//! * the weight-invariant subsets of `Γ` and the lattice of ideals of the
//!   crossed product they parametrize ([`sets`]);
//! * the subsemigroups `Ω_I` generated by the weights and selected inverses,
//!   with exact membership, and the escape condition distinguishing the
//!   regime where all ideals are gauge-invariant ([`semigroup`]);
//! * the extended parametrization over `Γ' × T` used when that condition
//!   fails ([`ext`]);
//! * simplicity and primitivity of the crossed product, its strong Connes
//!   spectrum, and its primitive ideal space ([`classify`]);
//! * `K_0` and `K_1` of the crossed product ([`ktheory`]).
//!
//! All arithmetic is exact; computations that would exceed the declared
//! resource limits fail with [`Error::ResourceLimit`] instead of returning
//! approximate answers.

pub mod action;
pub mod classify;
pub mod error;
pub mod ext;
pub mod group;
pub mod ktheory;
pub mod matrix;
pub mod semigroup;
pub mod sets;
pub mod subgroup;

pub use action::{ActionSpec, Limits};
pub use error::{Error, Result};
pub use group::{parse_elem, parse_group_spec, GroupElem, GroupSpec};
