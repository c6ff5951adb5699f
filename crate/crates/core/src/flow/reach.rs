use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::combinatorics::Compositions;
use crate::error::{Error, Result};
use crate::flow::{Capacity, Configuration, Flow};
use crate::wqo::DownSet;

/// Follows a flow word from `c` and returns the final configuration.
///
/// Positions in the error are 1-based.
pub fn goes_to(c: &Configuration, word: &[Flow]) -> Result<Configuration> {
    let mut cur = c.clone();
    for (i, f) in word.iter().enumerate() {
        if f.states() != cur.dim() {
            return Err(Error::Chain {
                position: i + 1,
                reason: format!("flow over {} states, configuration over {}", f.states(), cur.dim()),
            });
        }
        let pre = f.pre();
        if pre != cur {
            return Err(Error::Chain {
                position: i + 1,
                reason: format!("pre is {pre}, expected {cur}"),
            });
        }
        cur = f.post();
    }
    Ok(cur)
}

/// The ways of sending `tokens` out of `p` under `cap`, each as a row of
/// `(successor, amount)` pairs over every successor.
fn row_choices(p: usize, tokens: u64, cap: &Capacity) -> Vec<Vec<(usize, u64)>> {
    let succ: Vec<usize> = cap.successors(p).collect();
    Compositions::new(tokens, succ.len())
        .filter(|parts| {
            succ.iter()
                .zip(parts)
                .all(|(&q, &k)| cap.get(p, q).admits(k))
        })
        .map(|parts| succ.iter().copied().zip(parts).collect())
        .collect()
}

/// All flows `f ≤ cap` with `pre(f) = c`, lexicographic in the row-major
/// entries.
pub fn enum_flows(c: &Configuration, cap: &Capacity, budget: usize) -> Result<Vec<Flow>> {
    crate::error::check_dim(cap.states(), c.dim())?;
    let n = c.dim();
    let rows: Vec<Vec<Vec<(usize, u64)>>> = (0..n)
        .map(|p| {
            if c.0[p] == 0 {
                vec![Vec::new()]
            } else {
                row_choices(p, c.0[p], cap)
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut overflow = false;
    crate::combinatorics::for_each_product(&rows, |picked| {
        if out.len() == budget {
            overflow = true;
            return false;
        }
        let mut f = Flow::zero(n);
        for (p, row) in picked.iter().enumerate() {
            for &(q, k) in row.iter() {
                f.set(p, q, k);
            }
        }
        out.push(f);
        true
    });
    if overflow {
        return Err(Error::budget("flow enumeration", budget, out.len()));
    }
    Ok(out)
}

/// The distinct successors `post(f)` over flows `f ≤ cap` with
/// `pre(f) = c`, sorted.
pub fn posts(c: &Configuration, cap: &Capacity) -> Vec<Configuration> {
    let n = c.dim();
    let mut acc: HashSet<Vec<u64>> = HashSet::from([vec![0; n]]);
    for p in 0..n {
        if c.0[p] == 0 {
            continue;
        }
        let choices = row_choices(p, c.0[p], cap);
        if choices.is_empty() {
            return Vec::new();
        }
        let mut next = HashSet::with_capacity(acc.len() * choices.len());
        for base in &acc {
            for row in &choices {
                let mut v = base.clone();
                for &(q, k) in row {
                    v[q] += k;
                }
                next.insert(v);
            }
        }
        acc = next;
    }
    let mut out: Vec<Configuration> = acc.into_iter().map(Configuration).collect();
    out.sort_unstable();
    out
}

/// A flow `f ≤ cap` with `pre(f) = c` and `post(f) = d`, if one exists.
pub(crate) fn flow_between(c: &Configuration, cap: &Capacity, d: &Configuration) -> Option<Flow> {
    let n = c.dim();
    let rows: Vec<Vec<Vec<(usize, u64)>>> = (0..n)
        .map(|p| row_choices(p, c.0[p], cap))
        .collect();
    let mut f = Flow::zero(n);
    let mut room = d.0.clone();
    fn go(
        p: usize,
        rows: &[Vec<Vec<(usize, u64)>>],
        room: &mut [u64],
        f: &mut Flow,
    ) -> bool {
        if p == rows.len() {
            return room.iter().all(|&r| r == 0);
        }
        for row in &rows[p] {
            if row.iter().all(|&(q, k)| k <= room[q]) {
                for &(q, k) in row {
                    room[q] -= k;
                    f.set(p, q, k);
                }
                if go(p + 1, rows, room, f) {
                    return true;
                }
                for &(q, k) in row {
                    room[q] += k;
                    f.set(p, q, 0);
                }
            }
        }
        false
    }
    go(0, &rows, &mut room, &mut f).then_some(f)
}

/// A flow word `f ≤ word` leading from `c0` into `target`, if one exists.
pub fn flows_along(
    c0: &Configuration,
    word: &[&Capacity],
    target: &DownSet,
) -> Result<Option<Vec<Flow>>> {
    crate::error::check_dim(target.dim(), c0.dim())?;
    let mut layers: Vec<BTreeSet<Configuration>> = vec![BTreeSet::from([c0.clone()])];
    for cap in word {
        crate::error::check_dim(c0.dim(), cap.states())?;
        let next = layers
            .last()
            .expect("nonempty")
            .iter()
            .flat_map(|c| posts(c, cap))
            .collect();
        layers.push(next);
    }
    let Some(mut cur) = layers.last().expect("nonempty").iter().find(|c| target.contains(&c.0)).cloned()
    else {
        return Ok(None);
    };
    let mut flows = Vec::with_capacity(word.len());
    for (i, cap) in word.iter().enumerate().rev() {
        let (prev, f) = layers[i]
            .iter()
            .find_map(|p| flow_between(p, cap, &cur).map(|f| (p.clone(), f)))
            .expect("every layer element has a predecessor");
        flows.push(f);
        cur = prev;
    }
    flows.reverse();
    Ok(Some(flows))
}

/// A witness of reachability: the capacities used (as indices into the
/// input list), a matching flow word, and the visited configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachWitness {
    pub capacities: Vec<usize>,
    pub flows: Vec<Flow>,
    pub configurations: Vec<Configuration>,
}

/// Breadth-first search over the configurations reachable from `c0`.
///
/// Returns a shortest witness when some reachable configuration lies in
/// `target`.
pub fn reach_bfs(
    c0: &Configuration,
    caps: &[Capacity],
    target: &DownSet,
) -> Result<Option<ReachWitness>> {
    crate::error::check_dim(target.dim(), c0.dim())?;
    for cap in caps {
        crate::error::check_dim(c0.dim(), cap.states())?;
    }
    let tokens = c0.total();
    let mut parent: HashMap<Configuration, Option<(Configuration, usize)>> = HashMap::new();
    parent.insert(c0.clone(), None);
    let mut queue = VecDeque::from([c0.clone()]);
    while let Some(c) = queue.pop_front() {
        if target.contains(&c.0) {
            return Ok(Some(rebuild(&parent, c, caps)));
        }
        for (i, cap) in caps.iter().enumerate() {
            for d in posts(&c, cap) {
                debug_assert_eq!(d.total(), tokens);
                if !parent.contains_key(&d) {
                    parent.insert(d.clone(), Some((c.clone(), i)));
                    queue.push_back(d);
                }
            }
        }
    }
    Ok(None)
}

fn rebuild(
    parent: &HashMap<Configuration, Option<(Configuration, usize)>>,
    end: Configuration,
    caps: &[Capacity],
) -> ReachWitness {
    let mut configurations = vec![end.clone()];
    let mut capacities = Vec::new();
    let mut flows = Vec::new();
    let mut cur = end;
    while let Some(Some((prev, i))) = parent.get(&cur) {
        let f = flow_between(prev, &caps[*i], &cur).expect("recorded step is realizable");
        flows.push(f);
        capacities.push(*i);
        configurations.push(prev.clone());
        cur = prev.clone();
    }
    configurations.reverse();
    capacities.reverse();
    flows.reverse();
    ReachWitness {
        capacities,
        flows,
        configurations,
    }
}
