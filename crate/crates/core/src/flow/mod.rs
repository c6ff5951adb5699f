//! Configurations, flows, capacities and the one-step machinery built on
//! top of them.

mod ideals;
mod reach;

pub use ideals::{flowset_from_preconstraint, post_image_ideal};
pub use reach::{enum_flows, flows_along, goes_to, posts, reach_bfs, ReachWitness};

use std::fmt;

use crate::error::{check_dim, Result};
use crate::wqo::{DownSet, ExtNat, ExtVec, Fin, Omega};

/// Token counts per state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Configuration(pub Vec<u64>);

impl Configuration {
    pub fn zero(n: usize) -> Self {
        Configuration(vec![0; n])
    }

    /// `count · q`.
    pub fn unit(n: usize, q: usize, count: u64) -> Self {
        let mut c = Self::zero(n);
        c.0[q] = count;
        c
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn as_ext(&self) -> ExtVec {
        ExtVec(self.0.iter().map(|&n| Fin(n)).collect())
    }

    pub fn leq(&self, other: &Configuration) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Every configuration with exactly `total` tokens over `n` states, in
    /// lexicographic order.
    pub fn all_with_total(n: usize, total: u64) -> impl Iterator<Item = Configuration> {
        crate::combinatorics::Compositions::new(total, n).map(Configuration)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (q, &k) in self.0.iter().enumerate() {
            if k > 0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{k}·q{q}")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An integer matrix over `Q × Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flow {
    n: usize,
    edges: Vec<u64>,
}

impl Flow {
    pub fn zero(n: usize) -> Self {
        Flow {
            n,
            edges: vec![0; n * n],
        }
    }

    pub fn from_entries(n: usize, entries: &[(usize, usize, u64)]) -> Self {
        let mut f = Flow::zero(n);
        for &(p, q, v) in entries {
            f.edges[p * n + q] += v;
        }
        f
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> u64 {
        self.edges[p * self.n + q]
    }

    pub fn set(&mut self, p: usize, q: usize, v: u64) {
        self.edges[p * self.n + q] = v;
    }

    pub fn entries(&self) -> &[u64] {
        &self.edges
    }

    /// Row sums.
    pub fn pre(&self) -> Configuration {
        Configuration(
            (0..self.n)
                .map(|p| self.edges[p * self.n..(p + 1) * self.n].iter().sum())
                .collect(),
        )
    }

    /// Column sums.
    pub fn post(&self) -> Configuration {
        Configuration(
            (0..self.n)
                .map(|q| (0..self.n).map(|p| self.get(p, q)).sum())
                .collect(),
        )
    }

    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.n {
            for q in 0..self.n {
                if self.get(p, q) > 0 {
                    out.push((p, q));
                }
            }
        }
        out
    }

    pub fn total(&self) -> u64 {
        self.edges.iter().sum()
    }

    pub fn leq(&self, cap: &Capacity) -> bool {
        self.n == cap.n && self.edges.iter().zip(&cap.edges).all(|(&f, c)| c.admits(f))
    }

    /// The capacity with exactly this flow's entries.
    pub fn as_capacity(&self) -> Capacity {
        Capacity {
            n: self.n,
            edges: self.edges.iter().map(|&v| Fin(v)).collect(),
        }
    }
}

/// An ω-extended matrix bounding flows edge-wise; 0 means "no edge".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Capacity {
    n: usize,
    edges: Vec<ExtNat>,
}

impl Capacity {
    pub fn zero(n: usize) -> Self {
        Capacity {
            n,
            edges: vec![Fin(0); n * n],
        }
    }

    pub fn from_entries(n: usize, entries: &[(usize, usize, ExtNat)]) -> Self {
        let mut c = Capacity::zero(n);
        for &(p, q, v) in entries {
            c.set(p, q, v);
        }
        c
    }

    /// ω on every edge of `edges`.
    pub fn omega_on(edges: &EdgeSet) -> Self {
        let mut c = Capacity::zero(edges.states());
        for (p, q) in edges.iter() {
            c.set(p, q, Omega);
        }
        c
    }

    pub fn from_ext(n: usize, v: ExtVec) -> Result<Self> {
        check_dim(n * n, v.dim())?;
        Ok(Capacity { n, edges: v.0 })
    }

    pub fn as_ext(&self) -> ExtVec {
        ExtVec(self.edges.clone())
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> ExtNat {
        self.edges[p * self.n + q]
    }

    pub fn set(&mut self, p: usize, q: usize, v: ExtNat) {
        self.edges[p * self.n + q] = v;
    }

    pub fn entries(&self) -> &[ExtNat] {
        &self.edges
    }

    /// Successors `q` with `a(p, q) ≠ 0`.
    pub fn successors(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&q| !self.get(p, q).is_zero())
    }

    /// Largest finite entry.
    pub fn max_finite(&self) -> u64 {
        self.edges.iter().filter_map(|x| x.finite()).max().unwrap_or(0)
    }

    pub fn leq(&self, other: &Capacity) -> bool {
        self.n == other.n && self.edges.iter().zip(&other.edges).all(|(a, b)| a <= b)
    }

    pub fn support(&self) -> EdgeSet {
        let mut e = EdgeSet::empty(self.n);
        for p in 0..self.n {
            for q in 0..self.n {
                if !self.get(p, q).is_zero() {
                    e.insert(p, q);
                }
            }
        }
        e
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut first = true;
        for p in 0..self.n {
            for q in 0..self.n {
                let v = self.get(p, q);
                if !v.is_zero() {
                    if !first {
                        write!(f, ", ")?;
                    }
                    write!(f, "q{p}→q{q}:{v}")?;
                    first = false;
                }
            }
        }
        write!(f, "]")
    }
}

/// Canonical antichain of capacities: the decomposition of the flow set
/// `∪ ↓c` into ideals over `Q × Q`.
pub fn canonical_capacities(n: usize, caps: Vec<Capacity>) -> Result<Vec<Capacity>> {
    let d = DownSet::canonicalize(n * n, caps.into_iter().map(|c| c.as_ext()).collect())?;
    d.generators()
        .iter()
        .map(|g| Capacity::from_ext(n, g.clone()))
        .collect()
}

/// A set of edges over `Q × Q` with successor lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    n: usize,
    succ: Vec<Vec<usize>>,
}

impl EdgeSet {
    pub fn empty(n: usize) -> Self {
        EdgeSet {
            n,
            succ: vec![Vec::new(); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut e = EdgeSet::empty(n);
        for &(p, q) in pairs {
            e.insert(p, q);
        }
        e
    }

    pub fn insert(&mut self, p: usize, q: usize) {
        if let Err(pos) = self.succ[p].binary_search(&q) {
            self.succ[p].insert(pos, q);
        }
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.succ[p].binary_search(&q).is_ok()
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn successors(&self, p: usize) -> &[usize] {
        &self.succ[p]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(p, qs)| qs.iter().map(move |&q| (p, q)))
    }

    pub fn len(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pre_post_examples() {
        let f = Flow::from_entries(3, &[(0, 1, 2), (0, 2, 1)]);
        assert_eq!(f.pre(), Configuration(vec![3, 0, 0]));
        assert_eq!(f.post(), Configuration(vec![0, 2, 1]));

        let f = Flow::zero(3);
        assert_eq!(f.pre(), Configuration::zero(3));
        assert_eq!(f.post(), Configuration::zero(3));

        let f = Flow::from_entries(2, &[(1, 1, 5)]);
        assert_eq!(f.pre(), Configuration::unit(2, 1, 5));
        assert_eq!(f.post(), Configuration::unit(2, 1, 5));
        assert_eq!(f.support(), vec![(1, 1)]);
    }

    #[test]
    fn canonical_capacities_drop_dominated() {
        let big = Capacity::from_entries(2, &[(0, 1, Omega)]);
        let small = Capacity::from_entries(2, &[(0, 1, Fin(3))]);
        let other = Capacity::from_entries(2, &[(1, 0, Fin(1))]);
        let got = canonical_capacities(2, vec![small, big.clone(), other.clone()]).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.contains(&big) && got.contains(&other));
    }

    proptest! {
        #[test]
        fn conservation(n in 1usize..5, raw in prop::collection::vec(0u64..7, 16)) {
            let mut f = Flow::zero(n);
            for p in 0..n { for q in 0..n { f.set(p, q, raw[p * 4 + q]); } }
            prop_assert_eq!(f.pre().total(), f.total());
            prop_assert_eq!(f.post().total(), f.total());
        }
    }
}
