use std::fmt;

use crate::error::{check_dim, Result};
use crate::wqo::extnat::{ExtNat, ExtVec, Fin};

/// A downward-closed subset of `ℕ^X`, stored as its decomposition into
/// ideals: an antichain of generators sorted lexicographically (ω on top).
///
/// Two down-sets are equal iff their representations are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DownSet {
    dim: usize,
    gens: Vec<ExtVec>,
}

impl DownSet {
    pub fn empty(dim: usize) -> Self {
        DownSet {
            dim,
            gens: Vec::new(),
        }
    }

    /// All of `ℕ^X`.
    pub fn full(dim: usize) -> Self {
        DownSet {
            dim,
            gens: vec![ExtVec::omegas(dim)],
        }
    }

    pub fn ideal(x: ExtVec) -> Self {
        DownSet {
            dim: x.dim(),
            gens: vec![x],
        }
    }

    /// Keeps the maximal generators and sorts them.
    pub fn canonicalize(dim: usize, gens: Vec<ExtVec>) -> Result<Self> {
        for g in &gens {
            check_dim(dim, g.dim())?;
        }
        Ok(Self::from_gens_unchecked(dim, gens))
    }

    pub(crate) fn from_gens_unchecked(dim: usize, mut gens: Vec<ExtVec>) -> Self {
        gens.sort_unstable();
        gens.dedup();
        // A generator can only be dominated by a lexicographically larger one.
        let mut keep: Vec<ExtVec> = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if !gens[i + 1..].iter().any(|h| g.leq_unchecked(h)) {
                keep.push(g.clone());
            }
        }
        DownSet { dim, gens: keep }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ExtVec] {
        &self.gens
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].0.iter().all(|x| x.is_omega())
    }

    /// Membership of an integer vector.
    pub fn contains(&self, v: &[u64]) -> bool {
        self.gens.iter().any(|g| g.covers(v))
    }

    /// `↓x ⊆ self`, decided by comparison with the generators.
    pub fn contains_ideal(&self, x: &ExtVec) -> Result<bool> {
        check_dim(self.dim, x.dim())?;
        Ok(self.gens.iter().any(|g| x.leq_unchecked(g)))
    }

    pub fn is_subset(&self, other: &DownSet) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .gens
            .iter()
            .all(|g| other.gens.iter().any(|h| g.leq_unchecked(h))))
    }

    pub fn union(&self, other: &DownSet) -> Result<DownSet> {
        check_dim(self.dim, other.dim)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(Self::from_gens_unchecked(self.dim, gens))
    }

    pub fn intersection(&self, other: &DownSet) -> Result<DownSet> {
        check_dim(self.dim, other.dim)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                gens.push(g.meet(h));
            }
        }
        Ok(Self::from_gens_unchecked(self.dim, gens))
    }
}

impl fmt::Display for DownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// `↓x ⊆ D`.
pub fn ideal_in_downset(x: &ExtVec, d: &DownSet) -> Result<bool> {
    d.contains_ideal(x)
}

/// `ℕ^X ∖ ↑basis` as a canonical down-set.
///
/// Each basis vector `m` excludes `↑m`, whose complement is the union over
/// coordinates `q` with `m(q) ≥ 1` of the ideal capped at `m(q) - 1` on `q`.
pub fn complement_upset(dim: usize, basis: &[Vec<u64>]) -> Result<DownSet> {
    let mut acc = DownSet::full(dim);
    for m in basis {
        check_dim(dim, m.len())?;
        let avoid: Vec<ExtVec> = (0..dim)
            .filter(|&q| m[q] >= 1)
            .map(|q| {
                let mut g = ExtVec::omegas(dim);
                g.0[q] = Fin(m[q] - 1);
                g
            })
            .collect();
        acc = acc.intersection(&DownSet::from_gens_unchecked(dim, avoid))?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// Whether `v` is above some basis element.
pub(crate) fn in_upset(basis: &[Vec<u64>], v: &[u64]) -> bool {
    basis
        .iter()
        .any(|b| b.iter().zip(v).all(|(x, y)| x <= y))
}

/// Helper for tests and fixtures: builds a down-set from rows such as
/// `&[&[Fin(1), Omega]]`.
pub fn downset_of(rows: &[&[ExtNat]]) -> DownSet {
    let dim = rows.first().map_or(0, |r| r.len());
    DownSet::canonicalize(dim, rows.iter().map(|r| ExtVec(r.to_vec())).collect())
        .expect("rows share a dimension")
}
