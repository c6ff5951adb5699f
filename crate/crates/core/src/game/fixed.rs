use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::flow::{posts, Capacity, Configuration};
use crate::game::graph::GameGraph;
use crate::mdp::Mdp;

/// Default bound on the number of configurations in one arena.
pub const DEFAULT_ARENA_BUDGET: usize = 10_000_000;

/// The configurations of a fixed population size together with, for every
/// configuration and action, the distinct outcomes of one step.
#[derive(Clone, Debug)]
pub struct Arena {
    configs: Vec<Configuration>,
    index: HashMap<Configuration, u32>,
    /// `moves[c][a]` lists the outcome configurations, sorted by index.
    moves: Vec<Vec<Vec<u32>>>,
    goal: Option<u32>,
}

impl Arena {
    /// Explores every configuration reachable from `starts`.
    pub fn build(m: &Mdp, starts: &[Configuration], n: u64, budget: usize) -> Result<Self> {
        let caps: Vec<Capacity> = (0..m.actions().len())
            .map(|a| Capacity::omega_on(m.delta(a)))
            .collect();
        let mut arena = Arena {
            configs: Vec::new(),
            index: HashMap::new(),
            moves: Vec::new(),
            goal: None,
        };
        let mut queue = VecDeque::new();
        for c in starts {
            arena.intern(c.clone(), &mut queue, budget)?;
        }
        while let Some(i) = queue.pop_front() {
            let c = arena.configs[i as usize].clone();
            let mut per_action = Vec::with_capacity(caps.len());
            for cap in &caps {
                let mut out = Vec::new();
                for d in posts(&c, cap) {
                    out.push(arena.intern(d, &mut queue, budget)?);
                }
                out.sort_unstable();
                per_action.push(out);
            }
            arena.moves[i as usize] = per_action;
        }
        arena.goal = arena.index.get(&m.goal(n)).copied();
        Ok(arena)
    }

    /// Every configuration with `n` tokens.
    pub fn build_all(m: &Mdp, n: u64, budget: usize) -> Result<Self> {
        let all: Vec<Configuration> = Configuration::all_with_total(m.num_states(), n).collect();
        if all.len() > budget {
            return Err(Error::budget("arena configurations", budget, all.len()));
        }
        Self::build(m, &all, n, budget)
    }

    fn intern(
        &mut self,
        c: Configuration,
        queue: &mut VecDeque<u32>,
        budget: usize,
    ) -> Result<u32> {
        if let Some(&i) = self.index.get(&c) {
            return Ok(i);
        }
        if self.configs.len() >= budget {
            return Err(Error::budget("arena configurations", budget, self.configs.len()));
        }
        let i = self.configs.len() as u32;
        self.index.insert(c.clone(), i);
        self.configs.push(c);
        self.moves.push(Vec::new());
        queue.push_back(i);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.index.get(c).map(|&i| i as usize)
    }

    /// Winning sets of the games with at most `i` tolerated interrupts, for
    /// `i = 0..=max_i`, as membership vectors over the arena.
    ///
    /// An interrupt beyond the tolerance wins for Eve, so level `i` is a
    /// reachability game whose interrupt moves are safe iff every outcome
    /// lies in level `i - 1`.
    pub fn interrupt_levels(&self, max_i: usize) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut levels: Vec<Vec<bool>> = Vec::with_capacity(max_i + 1);
        let mut prev = vec![true; n];
        for _ in 0..=max_i {
            let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
            for (c, per_action) in self.moves.iter().enumerate() {
                for outs in per_action {
                    if outs.iter().all(|&d| prev[d as usize]) {
                        for &d in outs {
                            rev[d as usize].push(c as u32);
                        }
                    }
                }
            }
            let mut win = vec![false; n];
            let mut queue = VecDeque::new();
            if let Some(g) = self.goal {
                win[g as usize] = true;
                queue.push_back(g);
            }
            while let Some(d) = queue.pop_front() {
                for &c in &rev[d as usize] {
                    if !win[c as usize] {
                        win[c as usize] = true;
                        queue.push_back(c);
                    }
                }
            }
            prev = win.clone();
            levels.push(win);
        }
        levels
    }

    /// The Büchi game: Eve vertices `E(c)`, Adam vertices `A(c,a,d)` after
    /// Eve proposes outcome `d`, and marked interrupt vertices `I(c,a)`
    /// owned by Adam. The goal configuration loops on itself and is marked.
    fn buchi_game(&self) -> Result<(GameGraph, Vec<bool>, Vec<(u32, u32, u32)>)> {
        let n = self.len();
        let actions = self.moves.first().map_or(0, Vec::len);
        let mut eve = vec![true; n];
        let mut marked = vec![false; n];
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut proposals: Vec<(u32, u32, u32)> = Vec::new();
        eve.extend(std::iter::repeat_n(false, n * actions));
        marked.extend(std::iter::repeat_n(true, n * actions));
        let interrupt = |c: usize, a: usize| (n + c * actions + a) as u32;
        let mut next = (n + n * actions) as u32;
        for c in 0..n {
            if Some(c as u32) == self.goal {
                marked[c] = true;
                edges.push((c as u32, c as u32));
            }
            for a in 0..actions {
                let i = interrupt(c, a);
                for &d in &self.moves[c][a] {
                    edges.push((i, d));
                    if Some(c as u32) != self.goal {
                        let v = next;
                        next += 1;
                        eve.push(false);
                        marked.push(false);
                        proposals.push((c as u32, a as u32, d));
                        edges.push((c as u32, v));
                        edges.push((v, d));
                        edges.push((v, i));
                    }
                }
            }
        }
        Ok((GameGraph::new(eve, &edges)?, marked, proposals))
    }

    /// Solves the Büchi game on the whole arena and re-verifies the
    /// extracted strategy.
    pub fn solve_buchi(&self) -> Result<BuchiSolution> {
        let n = self.len();
        let (g, marked, proposals) = self.buchi_game()?;
        let win = g.solve_buchi(&marked);
        let strat = g.buchi_strategy(&marked, &win);
        g.verify_buchi_strategy(&marked, &win, &strat)?;
        let first_proposal = g.len() - proposals.len();
        let strategy = (0..n)
            .map(|c| {
                let v = strat[c]? as usize;
                // the goal plays its own loop
                let (_, a, d) = *proposals.get(v.checked_sub(first_proposal)?)?;
                Some((a as usize, d as usize))
            })
            .collect();
        Ok(BuchiSolution {
            winning: win[..n].to_vec(),
            strategy,
        })
    }
}

/// Eve's winning configurations and, on the winning ones, a positional
/// strategy as `(action, proposed outcome)` arena indices.
#[derive(Clone, Debug)]
pub struct BuchiSolution {
    pub winning: Vec<bool>,
    pub strategy: Vec<Option<(usize, usize)>>,
}

/// Outcome of the game at one population size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameVerdict {
    pub n: u64,
    pub initial_wins: bool,
    pub arena_size: usize,
    pub winning: BTreeSet<Configuration>,
    /// Eve's move per winning configuration other than the goal:
    /// the action name and the proposed successor.
    pub strategy: Vec<(Configuration, String, Configuration)>,
}

/// Solves the game from `n·s` over the configurations reachable from it.
pub fn solve_game(m: &Mdp, n: u64, budget: usize) -> Result<GameVerdict> {
    let start = m.initial(n);
    let arena = Arena::build(m, std::slice::from_ref(&start), n, budget)?;
    let sol = arena.solve_buchi()?;
    let winning = (0..arena.len())
        .filter(|&c| sol.winning[c])
        .map(|c| arena.configs[c].clone())
        .collect();
    let strategy = (0..arena.len())
        .filter_map(|c| {
            let (a, d) = sol.strategy[c]?;
            Some((
                arena.configs[c].clone(),
                m.actions()[a].clone(),
                arena.configs[d].clone(),
            ))
        })
        .collect();
    Ok(GameVerdict {
        n,
        initial_wins: sol.winning[0],
        arena_size: arena.len(),
        winning,
        strategy,
    })
}

/// Whether the controller almost surely brings `n` tokens from `s` to `t`.
pub fn solve_fixed_n(m: &Mdp, n: u64, budget: usize) -> Result<bool> {
    if n == 0 || m.source() == m.target() {
        return Ok(true);
    }
    Ok(solve_game(m, n, budget)?.initial_wins)
}

/// Eve's winning configurations with `n` tokens in the full game.
pub fn buchi_winning_all(m: &Mdp, n: u64, budget: usize) -> Result<BTreeSet<Configuration>> {
    let arena = Arena::build_all(m, n, budget)?;
    let sol = arena.solve_buchi()?;
    Ok((0..arena.len())
        .filter(|&c| sol.winning[c])
        .map(|c| arena.configs[c].clone())
        .collect())
}

/// Winning configurations with `n` tokens when Eve also wins once Adam has
/// interrupted more than `i` times.
pub fn win_i_fixed_n(m: &Mdp, n: u64, i: usize, budget: usize) -> Result<BTreeSet<Configuration>> {
    Ok(win_levels_fixed_n(m, n, i, budget)?.pop().expect("at least one level"))
}

/// The sets of [`win_i_fixed_n`] for `i = 0..=max_i`.
pub fn win_levels_fixed_n(
    m: &Mdp,
    n: u64,
    max_i: usize,
    budget: usize,
) -> Result<Vec<BTreeSet<Configuration>>> {
    let arena = Arena::build_all(m, n, budget)?;
    Ok(arena
        .interrupt_levels(max_i)
        .into_iter()
        .map(|w| {
            (0..arena.len())
                .filter(|&c| w[c])
                .map(|c| arena.configs[c].clone())
                .collect()
        })
        .collect())
}

/// The smallest `n ≤ max_n` at which the controller fails, if any.
pub fn sweep(m: &Mdp, max_n: u64, budget: usize) -> Result<Option<u64>> {
    for n in 1..=max_n {
        if !solve_fixed_n(m, n, budget)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
