//! The sequential flow problem.
//!
//! For a capacity word `w`, the configurations that can be driven into
//! `↓b` are characterized by minimum cuts of the layered graph of `w`.
//! The powerset automaton started from `{q}` computes, on `w`, the
//! cheapest cut whose first-layer source side is `{q}`; its final costs
//! charge the cut target bounds `b`.
//!
//! An ideal `↓x` with ω-support `T` and finite part `a` is included in the
//! SFP set iff for every `N` some word lets `a` reach `↓b` while every cut
//! started at a single `t ∈ T` costs at least `N`. This is unboundedness of
//! the minimum of the automata from `{t}` and a 0/ω automaton tracking the
//! configurations reachable from `a`.

mod maxflow;

use std::collections::{BTreeSet, HashMap, VecDeque};

pub use maxflow::{layered_max_flow, layered_min_cut};

use crate::automata::{Block, Closure, DistanceAutomaton, Limitedness, DEFAULT_CLOSURE_BUDGET};
use crate::error::{check_dim, Error, Result};
use crate::flow::{posts, reach_bfs, Capacity, Configuration};
use crate::wqo::{valk_jantzen, DownSet, ExtNat, ExtVec, Fin, Omega};

/// Capacities, a source ideal and a target ideal over named states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SfpInstance {
    states: Vec<String>,
    names: Vec<String>,
    capacities: Vec<Capacity>,
    source: ExtVec,
    target: ExtVec,
}

impl SfpInstance {
    pub fn new(
        states: Vec<String>,
        capacities: Vec<(String, Capacity)>,
        source: ExtVec,
        target: ExtVec,
    ) -> Result<Self> {
        let n = states.len();
        check_dim(n, source.dim())?;
        check_dim(n, target.dim())?;
        for (_, c) in &capacities {
            check_dim(n, c.states())?;
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(Error::Structure(format!("duplicate state `{s}`")));
            }
        }
        let (names, capacities) = capacities.into_iter().unzip();
        Ok(SfpInstance {
            states,
            names,
            capacities,
            source,
            target,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn capacity_names(&self) -> &[String] {
        &self.names
    }

    pub fn capacities(&self) -> &[Capacity] {
        &self.capacities
    }

    pub fn capacity(&self, name: &str) -> Option<&Capacity> {
        self.capacity_index(name).map(|i| &self.capacities[i])
    }

    pub fn capacity_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn source(&self) -> &ExtVec {
        &self.source
    }

    pub fn target(&self) -> &ExtVec {
        &self.target
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// Largest finite capacity entry.
    pub fn k(&self) -> u64 {
        self.capacities.iter().map(Capacity::max_finite).max().unwrap_or(0)
    }

    /// Indices of capacities named in `word`.
    pub fn word(&self, word: &[&str]) -> Result<Vec<usize>> {
        word.iter()
            .map(|w| {
                self.capacity_index(w)
                    .ok_or_else(|| Error::Format(format!("unknown capacity `{w}`")))
            })
            .collect()
    }

    /// The single state where the source ideal is ω, when the source has
    /// that shape.
    pub fn simple_source(&self) -> Result<usize> {
        let omega = self.source.omega_support();
        let finite_zero = self.source.entries().iter().all(|e| e.is_omega() || e.is_zero());
        match (omega.as_slice(), finite_zero) {
            ([s], true) => Ok(*s),
            _ => Err(Error::Contract("source ideal must be ω at one state and 0 elsewhere".into())),
        }
    }
}

/// Default bound on the number of powerset or tracker states.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 16;

/// Reach checks run before the automata: a failure at a small population
/// already answers no.
const SHORTCUT_POPULATION: u64 = 2;

fn subset_name(states: &[String], mask: u64) -> String {
    let inner: Vec<&str> = (0..states.len())
        .filter(|&q| mask >> q & 1 == 1)
        .map(|q| states[q].as_str())
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// Powerset cut automaton over the letters `caps`, started from `start`.
fn powerset_automaton(
    states: &[String],
    letters: &[String],
    caps: &[Capacity],
    start: u64,
    target: &ExtVec,
    budget: usize,
) -> Result<DistanceAutomaton> {
    let n = states.len();
    if n > 63 {
        return Err(Error::Structure("powerset construction needs at most 63 states".into()));
    }
    // per letter and state: successor mask and ω-successor mask
    let masks: Vec<Vec<(u64, u64)>> = caps
        .iter()
        .map(|c| {
            (0..n)
                .map(|p| {
                    c.successors(p).fold((0, 0), |(z, o), q| {
                        let bit = 1u64 << q;
                        (z | bit, if c.get(p, q).is_omega() { o | bit } else { o })
                    })
                })
                .collect()
        })
        .collect();

    let mut index: HashMap<u64, usize> = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    let mut edges: Vec<(usize, usize, ExtNat, usize)> = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let from = index[&x];
        let members: Vec<usize> = (0..n).filter(|&q| x >> q & 1 == 1).collect();
        for (l, cap) in caps.iter().enumerate() {
            let (z, omega) = members
                .iter()
                .fold((0, 0), |(z, o), &q| (z | masks[l][q].0, o | masks[l][q].1));
            let free = z & !omega;
            let mut sub = free;
            loop {
                let y = omega | sub;
                let cut = z & !y;
                let cost: u64 = members
                    .iter()
                    .flat_map(|&p| (0..n).filter(move |&q| cut >> q & 1 == 1).map(move |q| (p, q)))
                    .filter_map(|(p, q)| cap.get(p, q).finite())
                    .sum();
                let to = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        let i = order.len();
                        if i >= budget {
                            return Err(Error::budget("powerset states", budget, i + 1));
                        }
                        index.insert(y, i);
                        order.push(y);
                        queue.push_back(y);
                        i
                    }
                };
                edges.push((from, l, Fin(cost), to));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }
    let names = order.iter().map(|&m| subset_name(states, m)).collect();
    let mut a = DistanceAutomaton::new(names, letters.to_vec(), 0)?;
    for (p, l, c, q) in edges {
        a.add_transition(p, l, c, q)?;
    }
    for (i, &m) in order.iter().enumerate() {
        let eta: ExtNat = (0..n).filter(|&q| m >> q & 1 == 1).map(|q| target.0[q]).sum();
        a.set_final(i, eta);
    }
    Ok(a)
}

/// The powerset cut automaton of a simple instance: on every capacity word
/// its value is the maximum number of tokens that can be sent from the
/// source state into `↓b`.
pub fn build_simple_sfp_automaton(inst: &SfpInstance) -> Result<DistanceAutomaton> {
    let s = inst.simple_source()?;
    powerset_automaton(
        &inst.states,
        &inst.names,
        &inst.capacities,
        1 << s,
        &inst.target,
        DEFAULT_STATE_BUDGET,
    )
}

/// Deterministic 0/ω automaton whose state is the set of configurations
/// reachable from `c0`; the value is ω when one of them lies in `↓b`.
fn tracker_automaton(
    letters: &[String],
    caps: &[Capacity],
    c0: &Configuration,
    target: &ExtVec,
    budget: usize,
) -> Result<DistanceAutomaton> {
    type Set = Vec<Configuration>;
    let start: Set = vec![c0.clone()];
    let mut index: HashMap<Set, usize> = HashMap::from([(start.clone(), 0)]);
    let mut order = vec![start.clone()];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let from = index[&x];
        for (l, cap) in caps.iter().enumerate() {
            let next: BTreeSet<Configuration> = x.iter().flat_map(|c| posts(c, cap)).collect();
            let next: Set = next.into_iter().collect();
            let to = match index.get(&next) {
                Some(&i) => i,
                None => {
                    let i = order.len();
                    if i >= budget {
                        return Err(Error::budget("configuration tracker states", budget, i + 1));
                    }
                    index.insert(next.clone(), i);
                    order.push(next.clone());
                    queue.push_back(next);
                    i
                }
            };
            edges.push((from, l, to));
        }
    }
    let names = (0..order.len()).map(|i| format!("R{i}")).collect();
    let mut a = DistanceAutomaton::new(names, letters.to_vec(), 0)?;
    for (p, l, q) in edges {
        a.add_transition(p, l, Fin(0), q)?;
    }
    for (i, set) in order.iter().enumerate() {
        let accepting = set.iter().any(|c| target.covers(&c.0));
        a.set_final(i, if accepting { Omega } else { Fin(0) });
    }
    Ok(a)
}

/// Ideal-inclusion oracle for `SFP(↓caps, ↓b)`, caching the cut automata
/// shared by successive queries.
#[derive(Debug)]
pub struct InclusionOracle {
    states: Vec<String>,
    letters: Vec<String>,
    caps: Vec<Capacity>,
    target: ExtVec,
    cut_blocks: HashMap<usize, Block>,
    state_budget: usize,
    closure_budget: usize,
    pub queries: usize,
}

impl InclusionOracle {
    pub fn new(caps: &[Capacity], target: &ExtVec) -> Result<Self> {
        let n = target.dim();
        for c in caps {
            check_dim(n, c.states())?;
        }
        Ok(InclusionOracle {
            states: (0..n).map(|q| format!("q{q}")).collect(),
            letters: (0..caps.len()).map(|i| format!("c{i}")).collect(),
            caps: caps.to_vec(),
            target: target.clone(),
            cut_blocks: HashMap::new(),
            state_budget: DEFAULT_STATE_BUDGET,
            closure_budget: DEFAULT_CLOSURE_BUDGET,
            queries: 0,
        })
    }

    pub fn with_budgets(mut self, states: usize, closure: usize) -> Self {
        self.state_budget = states;
        self.closure_budget = closure;
        self
    }

    fn cut_block(&mut self, t: usize) -> Result<Block> {
        if let Some(b) = self.cut_blocks.get(&t) {
            return Ok(b.clone());
        }
        let a = powerset_automaton(
            &self.states,
            &self.letters,
            &self.caps,
            1 << t,
            &self.target,
            self.state_budget,
        )?;
        let b = Block::from_automaton(&a).trim();
        self.cut_blocks.insert(t, b.clone());
        Ok(b)
    }

    fn reaches(&self, c: &Configuration) -> Result<bool> {
        Ok(reach_bfs(c, &self.caps, &DownSet::ideal(self.target.clone()))?.is_some())
    }

    /// Whether `↓x ⊆ SFP(↓caps, ↓b)`.
    pub fn decide(&mut self, x: &ExtVec) -> Result<bool> {
        check_dim(self.target.dim(), x.dim())?;
        self.queries += 1;
        let omega = x.omega_support();
        let base = Configuration(x.finite_part());
        if omega.is_empty() {
            return self.reaches(&base);
        }
        for n in 0..=SHORTCUT_POPULATION {
            if !self.reaches(&Configuration(x.instantiate(n)))? {
                return Ok(false);
            }
        }
        let mut blocks = Vec::with_capacity(omega.len() + 1);
        for &t in &omega {
            blocks.push(self.cut_block(t)?);
        }
        let tracker = tracker_automaton(&self.letters, &self.caps, &base, &self.target, self.state_budget)?;
        blocks.push(Block::from_automaton(&tracker).trim());
        let verdict = Closure::new(blocks)?.search(self.closure_budget)?;
        Ok(verdict.is_unbounded())
    }
}

/// Whether `↓x ⊆ SFP(↓caps, ↓b)`.
pub fn decide_ideal_inclusion(x: &ExtVec, caps: &[Capacity], target: &ExtVec) -> Result<bool> {
    InclusionOracle::new(caps, target)?.decide(x)
}

/// Whether every population at the source state can be sent into the
/// target ideal.
pub fn decide_simple_sfp(inst: &SfpInstance) -> Result<bool> {
    let s = inst.simple_source()?;
    let n = inst.num_states();
    for pop in 1..=SHORTCUT_POPULATION {
        let c = Configuration::unit(n, s, pop);
        if reach_bfs(&c, &inst.capacities, &DownSet::ideal(inst.target.clone()))?.is_none() {
            return Ok(false);
        }
    }
    let a = build_simple_sfp_automaton(inst)?;
    Ok(decide_simple_sfp_automaton(&a)?.is_unbounded())
}

/// The limitedness verdict of a simple-SFP automaton.
pub fn decide_simple_sfp_automaton(a: &DistanceAutomaton) -> Result<Limitedness> {
    crate::automata::limitedness(a)
}

/// Default enumeration budget for [`sfp_downset`].
pub const DEFAULT_VJ_BUDGET: usize = 200_000;

/// The ideal decomposition of `SFP(↓caps, ↓b)`.
pub fn sfp_downset(caps: &[Capacity], target: &ExtVec, budget: usize) -> Result<DownSet> {
    let mut oracle = InclusionOracle::new(caps, target)?;
    valk_jantzen(target.dim(), |x| oracle.decide(x), budget)
}

/// Whether the source instantiated at `n` can be sent into the target
/// ideal along the capacity word `word` (indices into the instance).
pub fn brute_phi(inst: &SfpInstance, word: &[usize], n: u64) -> Result<bool> {
    let caps = word_capacities(inst, word)?;
    let supply: Vec<u64> = inst.source.instantiate(n);
    let total: u64 = supply.iter().sum();
    let supply: Vec<ExtNat> = supply.into_iter().map(Fin).collect();
    Ok(layered_max_flow(&supply, &caps, inst.target.entries()) >= Fin(total))
}

/// Maximum flow from the ω-states of the source into the target ideal.
pub fn phi(inst: &SfpInstance, word: &[usize]) -> Result<ExtNat> {
    let caps = word_capacities(inst, word)?;
    Ok(layered_max_flow(inst.source.entries(), &caps, inst.target.entries()))
}

fn word_capacities<'a>(inst: &'a SfpInstance, word: &[usize]) -> Result<Vec<&'a Capacity>> {
    word.iter()
        .map(|&i| inst.capacities.get(i).ok_or(Error::UnknownLetter(i)))
        .collect()
}

#[cfg(test)]
mod tests;
