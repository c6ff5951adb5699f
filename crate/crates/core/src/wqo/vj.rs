//! Reconstruction of a downward-closed set from an ideal-inclusion oracle.
//!
//! The complement of a downward-closed set `X` is upward closed, hence the
//! upward closure of its finitely many minimal elements `B`. Finite vectors
//! are enumerated by increasing total (ties lexicographic); a vector that is
//! neither above `B` nor accepted by the oracle is therefore minimal in the
//! complement and joins `B`. After each insertion every ideal of
//! `ℕ^X ∖ ↑B` is submitted to the oracle; once all pass, `X = ℕ^X ∖ ↑B`.

use crate::combinatorics::Compositions;
use crate::error::{Error, Result};
use crate::wqo::downset::{complement_upset, in_upset, DownSet};
use crate::wqo::extnat::{ExtNat, ExtVec};

/// Counters collected during one reconstruction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VjStats {
    pub enumerated: usize,
    pub oracle_calls: usize,
    pub basis: Vec<Vec<u64>>,
}

/// Builds the canonical decomposition of the set `X` described by
/// `oracle(x) ⇔ ↓x ⊆ X`.
///
/// The oracle must be monotone. `budget` bounds the number of enumerated
/// vectors and turns a non-terminating search into [`Error::Budget`].
pub fn valk_jantzen<F>(dim: usize, oracle: F, budget: usize) -> Result<DownSet>
where
    F: FnMut(&ExtVec) -> Result<bool>,
{
    valk_jantzen_with_stats(dim, oracle, budget).map(|(d, _)| d)
}

pub fn valk_jantzen_with_stats<F>(
    dim: usize,
    mut oracle: F,
    budget: usize,
) -> Result<(DownSet, VjStats)>
where
    F: FnMut(&ExtVec) -> Result<bool>,
{
    let mut stats = VjStats::default();
    // ideals already known to lie inside X
    let mut inside: Vec<ExtVec> = Vec::new();

    let mut candidate = complement_upset(dim, &stats.basis)?;
    if all_inside(&candidate, &mut inside, &mut oracle, &mut stats)? {
        return Ok((candidate, stats));
    }
    for total in 0u64.. {
        for v in Compositions::new(total, dim) {
            stats.enumerated += 1;
            if stats.enumerated > budget {
                return Err(Error::budget(
                    "valk-jantzen enumeration",
                    budget,
                    stats.enumerated - 1,
                ));
            }
            if in_upset(&stats.basis, &v) || inside.iter().any(|g| g.covers(&v)) {
                continue;
            }
            stats.oracle_calls += 1;
            let x = ExtVec(v.iter().map(|&n| ExtNat::Fin(n)).collect());
            if oracle(&x)? {
                inside.push(x);
                continue;
            }
            stats.basis.push(v);
            candidate = complement_upset(dim, &stats.basis)?;
            if all_inside(&candidate, &mut inside, &mut oracle, &mut stats)? {
                return Ok((candidate, stats));
            }
        }
    }
    unreachable!("the enumeration is unbounded")
}

fn all_inside<F>(
    candidate: &DownSet,
    inside: &mut Vec<ExtVec>,
    oracle: &mut F,
    stats: &mut VjStats,
) -> Result<bool>
where
    F: FnMut(&ExtVec) -> Result<bool>,
{
    for g in candidate.generators() {
        if inside.iter().any(|h| g.leq_unchecked(h)) {
            continue;
        }
        stats.oracle_calls += 1;
        if !oracle(g)? {
            return Ok(false);
        }
        inside.push(g.clone());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wqo::extnat::{parse_vec as v, Fin, Omega};
    use std::collections::HashSet;

    fn oracle_of(d: &DownSet) -> impl FnMut(&ExtVec) -> Result<bool> + '_ {
        move |x| d.contains_ideal(x)
    }

    #[test]
    fn examples() {
        let target = DownSet::ideal(v("w,2"));
        assert_eq!(valk_jantzen(2, oracle_of(&target), 10_000).unwrap(), target);

        let target = DownSet::canonicalize(2, vec![v("1,w"), v("w,0")]).unwrap();
        let (got, stats) = valk_jantzen_with_stats(2, oracle_of(&target), 10_000).unwrap();
        assert_eq!(got, target);
        assert_eq!(stats.basis, vec![vec![2, 1]]);

        let got = valk_jantzen(3, |_| Ok(true), 10).unwrap();
        assert_eq!(got, DownSet::full(3));
    }

    #[test]
    fn empty_set_and_zero_dimension() {
        assert!(valk_jantzen(2, |_| Ok(false), 10).unwrap().is_empty());
        assert_eq!(valk_jantzen(0, |_| Ok(true), 10).unwrap(), DownSet::full(0));
        assert!(valk_jantzen(0, |_| Ok(false), 10).unwrap().is_empty());
    }

    #[test]
    fn inconsistent_oracle_hits_budget() {
        // claims every finite vector is inside but refuses ω-ideals
        let err = valk_jantzen(2, |x| Ok(x.is_finite()), 500).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn oracle_errors_propagate() {
        let err = valk_jantzen(1, |_| Err(Error::Contract("boom".into())), 10).unwrap_err();
        assert_eq!(err, Error::Contract("boom".into()));
    }

    #[test]
    fn exhaustive_sweep_recovers_every_small_downset() {
        let values = [Fin(0), Fin(1), Fin(2), Omega];
        for dim in 1..=3usize {
            let mut vecs = Vec::new();
            let total = values.len().pow(dim as u32);
            for code in 0..total {
                let mut c = code;
                let mut e = Vec::with_capacity(dim);
                for _ in 0..dim {
                    e.push(values[c % 4]);
                    c /= 4;
                }
                vecs.push(ExtVec(e));
            }
            let mut seen = HashSet::new();
            let n = vecs.len();
            for i in 0..=n {
                for j in i..=n {
                    for k in j..=n {
                        let gens: Vec<ExtVec> = [i, j, k]
                            .iter()
                            .filter(|&&x| x < n)
                            .map(|&x| vecs[x].clone())
                            .collect();
                        let d = DownSet::canonicalize(dim, gens).unwrap();
                        if !seen.insert(d.clone()) {
                            continue;
                        }
                        let got = valk_jantzen(dim, oracle_of(&d), 100_000).unwrap();
                        assert_eq!(got, d);
                    }
                }
            }
            assert!(seen.len() >= values.len().pow(dim as u32) / 2);
        }
    }
}
