//! Finitely generated abelian groups `Z^d x Z/k_1 x ... x Z/k_s` and their
//! elements.
//!
//! A group is described by its invariant data only (free rank and torsion
//! orders); elements are coordinate vectors with the torsion coordinates
//! kept reduced into `[0, k_j)`.  All elements carry their group spec so
//! that cross-group arithmetic is rejected instead of silently producing
//! nonsense.

use crate::error::{Error, Result};

/// `Z^rank x Z/torsion[0] x ... x Z/torsion[s-1]`.
///
/// Coordinates are ordered free-first: coordinate `i < rank` is a free `Z`
/// coordinate, coordinate `rank + j` is reduced modulo `torsion[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    rank: usize,
    torsion: Vec<u64>,
}

impl GroupSpec {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(&k) = torsion.iter().find(|&&k| k < 2) {
            return Err(Error::Parse(format!(
                "torsion order {k} is not allowed; every torsion order must be >= 2"
            )));
        }
        Ok(GroupSpec { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        GroupSpec { rank, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Total number of coordinates (`d + s`).
    pub fn n_coords(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.  Saturates with `None` only for
    /// infinite groups; finite orders are exact (u128 is plenty: orders past
    /// the resource limits are rejected long before this could overflow).
    pub fn order(&self) -> Option<u128> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(1u128, |acc, &k| acc * k as u128))
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem { spec: self.clone(), coords: vec![0; self.n_coords()] }
    }

    /// Build an element, validating the coordinate count and reducing the
    /// torsion coordinates.
    pub fn elem(&self, coords: &[i64]) -> Result<GroupElem> {
        if coords.len() != self.n_coords() {
            return Err(Error::Mismatch(format!(
                "element has {} coordinates, group needs {}",
                coords.len(),
                self.n_coords()
            )));
        }
        let mut coords = coords.to_vec();
        self.reduce(&mut coords);
        Ok(GroupElem { spec: self.clone(), coords })
    }

    fn reduce(&self, coords: &mut [i64]) {
        for (j, &k) in self.torsion.iter().enumerate() {
            let c = &mut coords[self.rank + j];
            *c = c.rem_euclid(k as i64);
        }
    }

    /// The standard generating set: one unit vector per coordinate.
    pub fn standard_generators(&self) -> Vec<GroupElem> {
        (0..self.n_coords())
            .map(|i| {
                let mut coords = vec![0; self.n_coords()];
                coords[i] = 1;
                GroupElem { spec: self.clone(), coords }
            })
            .collect()
    }

    /// Relation vectors `k_j * e_{rank+j}` as rows over `Z^{d+s}`; every
    /// lattice representing a subgroup must contain them.
    pub fn relation_rows(&self) -> Vec<Vec<i64>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                let mut row = vec![0i64; self.n_coords()];
                row[self.rank + j] = k as i64;
                row
            })
            .collect()
    }

    /// Lexicographic index of an element of a finite group.
    pub fn index_of(&self, g: &GroupElem) -> Result<usize> {
        self.check_same(g)?;
        if !self.is_finite() {
            return Err(Error::InfiniteGroup("enumeration".into()));
        }
        let mut idx = 0usize;
        for (j, &k) in self.torsion.iter().enumerate() {
            idx = idx * k as usize + g.coords[j] as usize;
        }
        Ok(idx)
    }

    /// Element of a finite group at lexicographic index `idx`.
    pub fn elem_at(&self, mut idx: usize) -> Result<GroupElem> {
        let order = self
            .order()
            .ok_or_else(|| Error::InfiniteGroup("enumeration".into()))?;
        if idx as u128 >= order {
            return Err(Error::Mismatch(format!("index {idx} out of range")));
        }
        let mut coords = vec![0i64; self.torsion.len()];
        for (j, &k) in self.torsion.iter().enumerate().rev() {
            coords[j] = (idx % k as usize) as i64;
            idx /= k as usize;
        }
        Ok(GroupElem { spec: self.clone(), coords })
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn enumerate(&self) -> Result<Vec<GroupElem>> {
        let order = self
            .order()
            .ok_or_else(|| Error::InfiniteGroup("enumeration".into()))?;
        let order = usize::try_from(order)
            .map_err(|_| Error::ResourceLimit("group too large to enumerate".into()))?;
        (0..order).map(|i| self.elem_at(i)).collect()
    }

    pub fn check_same(&self, g: &GroupElem) -> Result<()> {
        if &g.spec != self {
            return Err(Error::Mismatch(format!(
                "element of {} used with {}",
                g.spec, self
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.check_same(a)?;
        self.check_same(b)?;
        let mut coords: Vec<i64> =
            a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.reduce(&mut coords);
        Ok(GroupElem { spec: self.clone(), coords })
    }

    pub fn neg(&self, a: &GroupElem) -> Result<GroupElem> {
        self.check_same(a)?;
        let mut coords: Vec<i64> = a.coords.iter().map(|x| -x).collect();
        self.reduce(&mut coords);
        Ok(GroupElem { spec: self.clone(), coords })
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.add(a, &self.neg(b)?)
    }

    pub fn scale(&self, m: i64, a: &GroupElem) -> Result<GroupElem> {
        self.check_same(a)?;
        let mut coords: Vec<i64> = a
            .coords
            .iter()
            .map(|x| {
                x.checked_mul(m)
                    .ok_or_else(|| Error::ResourceLimit("coordinate overflow in scale".into()))
            })
            .collect::<Result<_>>()?;
        self.reduce(&mut coords);
        Ok(GroupElem { spec: self.clone(), coords })
    }

    /// Order of an element: `None` means infinite.
    pub fn order_of(&self, a: &GroupElem) -> Result<Option<u64>> {
        self.check_same(a)?;
        if a.coords[..self.rank].iter().any(|&c| c != 0) {
            return Ok(None);
        }
        let mut ord = 1u64;
        for (j, &k) in self.torsion.iter().enumerate() {
            let c = a.coords[self.rank + j] as u64;
            let step = k / gcd(c, k);
            ord = lcm(ord, step);
        }
        Ok(Some(ord))
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            d => parts.push(format!("Z^{d}")),
        }
        for &k in &self.torsion {
            parts.push(format!("Z/{k}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    spec: GroupSpec,
    coords: Vec<i64>,
}

impl GroupElem {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn free_coords(&self) -> &[i64] {
        &self.coords[..self.spec.rank]
    }
}

impl std::fmt::Display for GroupElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", body.join(", "))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Parse a group description of the form
///
/// ```text
/// rank = 1
/// torsion = [2, 4]
/// ```
///
/// Both keys are optional (`rank` defaults to 0, `torsion` to empty); the
/// `torsion = []` form is accepted.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let mut rank = 0usize;
    let mut torsion: Vec<u64> = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected `key = value`, got `{line}`")))?;
        match key.trim() {
            "rank" => {
                rank = value.trim().parse().map_err(|_| {
                    Error::Parse(format!("invalid rank `{}`", value.trim()))
                })?;
            }
            "torsion" => {
                torsion = parse_uint_list(value.trim())?;
            }
            other => {
                return Err(Error::Parse(format!("unknown group key `{other}`")));
            }
        }
    }
    GroupSpec::new(rank, torsion)
}

fn parse_uint_list(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected `[k1, k2, ...]`, got `{s}`")))?
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid torsion order `{}`", p.trim())))
        })
        .collect()
}

/// Parse an element: either a tuple `(c1, c2, ...)` / `[c1, c2, ...]` or,
/// for single-coordinate groups, a bare integer.
pub fn parse_elem(spec: &GroupSpec, text: &str) -> Result<GroupElem> {
    let t = text.trim();
    let inner = if let Some(body) = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
    {
        body
    } else {
        t
    };
    let coords: Vec<i64> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid coordinate `{}`", p.trim())))
            })
            .collect::<Result<_>>()?
    };
    spec.elem(&coords)
}
