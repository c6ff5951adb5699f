//! The stochastic control problem: the descending sequence `Win^i` of
//! winning regions and the final verdict.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::flow::{canonical_capacities, flowset_from_preconstraint, post_image_ideal, Capacity};
use crate::game::{solve_fixed_n, sweep, DEFAULT_ARENA_BUDGET};
use crate::mdp::Mdp;
use crate::sfp::{sfp_downset, DEFAULT_VJ_BUDGET};
use crate::wqo::{ideal_in_downset, valk_jantzen, DownSet, ExtVec, Omega};

/// Resource limits of the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Enumerated vectors per Valk–Jantzen reconstruction.
    pub vj: usize,
    /// Configurations per fixed-population arena.
    pub arena: usize,
    /// Refinement rounds of the fixed point.
    pub iterations: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            vj: DEFAULT_VJ_BUDGET,
            arena: DEFAULT_ARENA_BUDGET,
            iterations: 64,
        }
    }
}

/// One capacity per action: ω on its transitions.
pub fn flows0(m: &Mdp) -> Vec<Capacity> {
    (0..m.actions().len()).map(|a| Capacity::omega_on(m.delta(a))).collect()
}

/// Configurations from which every flow along action `a` lands in
/// `win_prev`.
pub fn p_set(m: &Mdp, a: usize, win_prev: &DownSet, budget: usize) -> Result<DownSet> {
    let edges = m.delta(a);
    if win_prev.is_full() {
        return Ok(DownSet::full(m.num_states()));
    }
    valk_jantzen(
        m.num_states(),
        |x| {
            let image = post_image_ideal(x, edges)?;
            image.is_subset(win_prev)
        },
        budget,
    )
}

/// Capacities of the flows Eve can play without letting an interrupt
/// leave `win_prev`.
pub fn flows_i(m: &Mdp, win_prev: &DownSet, budget: usize) -> Result<Vec<Capacity>> {
    let mut caps = Vec::new();
    for a in 0..m.actions().len() {
        for y in p_set(m, a, win_prev, budget)?.generators() {
            caps.extend(flowset_from_preconstraint(y, m.delta(a))?);
        }
    }
    canonical_capacities(m.num_states(), caps)
}

/// The sequence `Win^0 ⊇ Win^1 ⊇ …` up to its first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixpoint {
    /// `levels[i]` is `Win^i`; the last two entries coincide.
    pub levels: Vec<DownSet>,
    /// Capacity antichains used for each level.
    pub flows: Vec<Vec<Capacity>>,
}

impl Fixpoint {
    pub fn win(&self) -> &DownSet {
        self.levels.last().expect("at least one level")
    }

    /// The first `i` with `Win^i = Win^{i-1}`.
    pub fn index(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Iterates `Win^i = SFP(Flows^i, ↓ω·t)` until two consecutive levels agree.
pub fn win_fixpoint(m: &Mdp, budgets: &Budgets) -> Result<Fixpoint> {
    let n = m.num_states();
    let goal = ExtVec::unit(n, m.target(), Omega);
    let mut caps = flows0(m);
    let mut levels = vec![sfp_downset(&caps, &goal, budgets.vj)?];
    let mut flows = vec![caps.clone()];
    for _ in 0..budgets.iterations {
        caps = flows_i(m, levels.last().expect("nonempty"), budgets.vj)?;
        let next = sfp_downset(&caps, &goal, budgets.vj)?;
        let done = Some(&next) == levels.last();
        levels.push(next);
        flows.push(caps.clone());
        if done {
            return Ok(Fixpoint { levels, flows });
        }
    }
    Err(Error::budget("fixed-point iterations", budgets.iterations, levels.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Fixpoint,
    Sweep { max_n: u64 },
    Both { max_n: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Fixpoint => "fixpoint",
            Method::Sweep { .. } => "sweep",
            Method::Both { .. } => "both",
        }
    }
}

/// The answer with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: bool,
    pub method: Method,
    /// A population at which the controller fails.
    pub witness_n: Option<u64>,
    pub fixpoint_index: Option<usize>,
    pub win_downset: Option<DownSet>,
    /// Set when a sweep found no failure: evidence up to `max_n` only.
    pub bounded_evidence: bool,
    /// Generator counts of `Win^0, Win^1, …`.
    pub level_sizes: Vec<usize>,
    pub millis: u128,
}

fn smallest_losing_population(win: &DownSet, m: &Mdp) -> Option<u64> {
    let n = m.num_states();
    let bound = win
        .generators()
        .iter()
        .filter_map(|g| g.0[m.source()].finite())
        .max()
        .unwrap_or(0);
    (1..=bound + 1).find(|&k| {
        let mut c = vec![0; n];
        c[m.source()] = k;
        !win.contains(&c)
    })
}

/// Decides whether every population at `s` can almost surely be brought
/// to `t`.
pub fn decide_control(m: &Mdp, method: Method, budgets: &Budgets) -> Result<Verdict> {
    let start = Instant::now();
    let mut v = Verdict {
        answer: true,
        method,
        witness_n: None,
        fixpoint_index: None,
        win_downset: None,
        bounded_evidence: false,
        level_sizes: Vec::new(),
        millis: 0,
    };
    if matches!(method, Method::Fixpoint | Method::Both { .. }) {
        let fp = win_fixpoint(m, budgets)?;
        let omega_s = ExtVec::unit(m.num_states(), m.source(), Omega);
        v.answer = ideal_in_downset(&omega_s, fp.win())?;
        v.fixpoint_index = Some(fp.index());
        v.level_sizes = fp.levels.iter().map(|d| d.generators().len()).collect();
        if !v.answer {
            let n = smallest_losing_population(fp.win(), m)
                .ok_or_else(|| Error::Consistency("no losing population below ω·s".into()))?;
            if solve_fixed_n(m, n, budgets.arena)? {
                return Err(Error::Consistency(format!(
                    "fixed point excludes {n}·s but the game at n = {n} is won"
                )));
            }
            v.witness_n = Some(n);
        }
        v.win_downset = Some(fp.win().clone());
    }
    if let Method::Sweep { max_n } | Method::Both { max_n } = method {
        let found = sweep(m, max_n, budgets.arena)?;
        match (method, found) {
            (Method::Sweep { .. }, Some(n)) => {
                v.answer = false;
                v.witness_n = Some(n);
            }
            (Method::Sweep { .. }, None) => v.bounded_evidence = true,
            (_, Some(n)) if v.answer => {
                return Err(Error::Consistency(format!(
                    "fixed point says yes but the game at n = {n} is lost"
                )));
            }
            (_, Some(n)) => {
                if v.witness_n != Some(n) {
                    return Err(Error::Consistency(format!(
                        "smallest losing population differs: fixed point {:?}, sweep {n}",
                        v.witness_n
                    )));
                }
            }
            (_, None) => {
                if v.witness_n.is_some_and(|w| w <= max_n) {
                    return Err(Error::Consistency("sweep missed the fixed-point witness".into()));
                }
            }
        }
    }
    v.millis = start.elapsed().as_millis();
    Ok(v)
}
