//! Weight data of a quasi-free action on the Cuntz algebra `O_n`.
//!
//! The action of `G` on `O_n` is determined by `n` weights in the dual
//! group `Γ`; everything the library computes is a function of `Γ` and the
//! weight list, so this pair (plus resource limits) is the root input type.

use crate::error::{Error, Result};
use crate::group::{lcm, GroupElem, GroupSpec};

/// Hard caps on input size and internal work.
///
/// These are honest limits: inputs beyond them produce a
/// [`Error::ResourceLimit`](crate::Error::ResourceLimit), never a silently
/// wrong or truncated answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Free rank `d` of the dual group.
    pub max_rank: usize,
    /// Number of weights `n` (the Cuntz algebra index).
    pub max_n: usize,
    /// Absolute value of any input coordinate (weights and query elements).
    pub max_coord: i64,
    /// `lcm` of the torsion orders of the dual group.
    pub max_torsion_lcm: u64,
    /// States explored by one infinite-group membership search.
    pub max_search_states: usize,
    /// Order of a finite dual group for explicit closure computations.
    pub max_finite_order: u128,
    /// Order of a finite dual group for K-group computations.
    pub max_kgroup_order: u128,
    /// Order of a finite dual group for brute-force invariant set scans.
    pub max_brute_force_order: u128,
    /// Nodes in a rendered Hasse diagram.
    pub max_dot_nodes: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rank: 4,
            max_n: 8,
            max_coord: 64,
            max_torsion_lcm: 64,
            max_search_states: 4_000_000,
            max_finite_order: 1 << 20,
            max_kgroup_order: 4096,
            max_brute_force_order: 16,
            max_dot_nodes: 1 << 10,
        }
    }
}

/// `n` weights in `Γ`, i.e. the data of a quasi-free action on `O_n`.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    group: GroupSpec,
    omega: Vec<GroupElem>,
    limits: Limits,
}

impl PartialEq for ActionSpec {
    /// Limits are operational tuning, not mathematical content.
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.omega == other.omega
    }
}
impl Eq for ActionSpec {}

impl ActionSpec {
    pub fn new(group: GroupSpec, omega: Vec<GroupElem>) -> Result<Self> {
        Self::with_limits(group, omega, Limits::default())
    }

    pub fn with_limits(group: GroupSpec, omega: Vec<GroupElem>, limits: Limits) -> Result<Self> {
        if omega.len() < 2 {
            return Err(Error::Precondition(format!(
                "need at least 2 weights (O_n requires n >= 2), got {}",
                omega.len()
            )));
        }
        for w in &omega {
            group.check_same(w)?;
        }
        let action = ActionSpec { group, omega, limits };
        action.check_limits()?;
        Ok(action)
    }

    fn check_limits(&self) -> Result<()> {
        let l = &self.limits;
        if self.group.rank() > l.max_rank {
            return Err(Error::ResourceLimit(format!(
                "rank {} exceeds limit {}",
                self.group.rank(),
                l.max_rank
            )));
        }
        let tl = self.torsion_lcm();
        if tl > l.max_torsion_lcm {
            return Err(Error::ResourceLimit(format!(
                "torsion lcm {tl} exceeds limit {}",
                l.max_torsion_lcm
            )));
        }
        for w in &self.omega {
            self.check_coords(w)?;
        }
        Ok(())
    }

    /// The `n ≤ max_n` cap guards the combinatorial machinery (index-set
    /// enumeration and semigroup searches), so it is checked where those
    /// start rather than at construction; K-group computations scale with
    /// `|Γ|` and work for larger `n`.
    pub fn check_n_limit(&self) -> Result<()> {
        if self.omega.len() > self.limits.max_n {
            return Err(Error::ResourceLimit(format!(
                "n = {} exceeds limit {}",
                self.omega.len(),
                self.limits.max_n
            )));
        }
        Ok(())
    }

    pub fn check_coords(&self, g: &GroupElem) -> Result<()> {
        if let Some(&c) = g.coords().iter().find(|c| c.unsigned_abs() > self.limits.max_coord as u64)
        {
            return Err(Error::ResourceLimit(format!(
                "coordinate {c} exceeds limit {}",
                self.limits.max_coord
            )));
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[GroupElem] {
        &self.omega
    }

    /// Weight by 1-based index.
    pub fn weight(&self, i: usize) -> Result<&GroupElem> {
        if i == 0 || i > self.omega.len() {
            return Err(Error::Precondition(format!(
                "weight index {i} out of range 1..={}",
                self.omega.len()
            )));
        }
        Ok(&self.omega[i - 1])
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn torsion_lcm(&self) -> u64 {
        self.group.torsion().iter().fold(1u64, |acc, &k| lcm(acc, k))
    }

    pub fn check_same_action(&self, other: &ActionSpec) -> Result<()> {
        if self != other {
            return Err(Error::Mismatch("operands belong to different actions".into()));
        }
        Ok(())
    }
}
