//! Weighted automata over `ℕ ∪ {ω}`: distance automata (minimum over runs)
//! and desert automata (maximum over runs), plus the limitedness decision.

mod stab;

pub use stab::{
    limitedness, limitedness_blocks, witness_search, AbsMatrix, Abstract, Block, Closure, Expr,
    Limitedness, DEFAULT_CLOSURE_BUDGET,
};

use crate::error::{Error, Result};
use crate::wqo::{ExtNat, Fin, Omega};

/// A weighted automaton with one initial state.
///
/// The same structure is read as a distance automaton by
/// [`eval_distance`] and as a desert automaton by [`eval_desert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: usize,
    /// `trans[q][a]` lists `(target, cost)`.
    trans: Vec<Vec<Vec<(usize, ExtNat)>>>,
    final_costs: Vec<ExtNat>,
}

pub type DesertAutomaton = DistanceAutomaton;

impl DistanceAutomaton {
    pub fn new(states: Vec<String>, alphabet: Vec<String>, initial: usize) -> Result<Self> {
        let n = states.len();
        if initial >= n {
            return Err(Error::Structure(format!("initial state {initial} out of range")));
        }
        Ok(DistanceAutomaton {
            trans: vec![vec![Vec::new(); alphabet.len()]; n],
            final_costs: vec![Omega; n],
            states,
            alphabet,
            initial,
        })
    }

    /// Anonymous states `0..n` over letters `0..letters`.
    pub fn with_sizes(n: usize, letters: usize, initial: usize) -> Result<Self> {
        Self::new(
            (0..n).map(|i| format!("q{i}")).collect(),
            (0..letters).map(|i| format!("l{i}")).collect(),
            initial,
        )
    }

    pub fn add_transition(&mut self, from: usize, letter: usize, cost: ExtNat, to: usize) -> Result<()> {
        let n = self.states.len();
        if from >= n || to >= n {
            return Err(Error::Structure(format!("transition {from}→{to} out of range")));
        }
        if letter >= self.alphabet.len() {
            return Err(Error::UnknownLetter(letter));
        }
        self.trans[from][letter].push((to, cost));
        Ok(())
    }

    pub fn set_final(&mut self, q: usize, cost: ExtNat) {
        self.final_costs[q] = cost;
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn final_costs(&self) -> &[ExtNat] {
        &self.final_costs
    }

    pub fn transitions_from(&self, q: usize, letter: usize) -> &[(usize, ExtNat)] {
        &self.trans[q][letter]
    }

    /// All transitions as `(from, letter, cost, to)`.
    pub fn transitions(&self) -> Vec<(usize, usize, ExtNat, usize)> {
        let mut out = Vec::new();
        for (q, per) in self.trans.iter().enumerate() {
            for (a, list) in per.iter().enumerate() {
                for &(p, c) in list {
                    out.push((q, a, c, p));
                }
            }
        }
        out
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == name)
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&a| a >= self.alphabet.len()) {
            Some(&a) => Err(Error::UnknownLetter(a)),
            None => Ok(()),
        }
    }
}

/// Minimum over runs of the summed costs plus the final cost; ω when no
/// run exists.
pub fn eval_distance(a: &DistanceAutomaton, word: &[usize]) -> Result<ExtNat> {
    a.check_word(word)?;
    let mut cur = vec![Omega; a.num_states()];
    cur[a.initial] = Fin(0);
    for &l in word {
        let mut next = vec![Omega; a.num_states()];
        for (q, &v) in cur.iter().enumerate() {
            if v.is_omega() {
                continue;
            }
            for &(p, c) in &a.trans[q][l] {
                next[p] = next[p].min(v + c);
            }
        }
        cur = next;
    }
    Ok(cur
        .iter()
        .zip(&a.final_costs)
        .map(|(&v, &f)| v + f)
        .min()
        .unwrap_or(Omega))
}

/// Maximum over runs of the summed costs plus the final cost; 0 when no
/// run exists.
pub fn eval_desert(a: &DesertAutomaton, word: &[usize]) -> Result<ExtNat> {
    a.check_word(word)?;
    let mut cur: Vec<Option<ExtNat>> = vec![None; a.num_states()];
    cur[a.initial] = Some(Fin(0));
    for &l in word {
        let mut next: Vec<Option<ExtNat>> = vec![None; a.num_states()];
        for (q, v) in cur.iter().enumerate() {
            let Some(v) = *v else { continue };
            for &(p, c) in &a.trans[q][l] {
                let x = v + c;
                next[p] = Some(next[p].map_or(x, |y| y.max(x)));
            }
        }
        cur = next;
    }
    Ok(cur
        .iter()
        .zip(&a.final_costs)
        .filter_map(|(v, &f)| v.map(|v| v + f))
        .max()
        .unwrap_or(Fin(0)))
}

/// An automaton whose value is the minimum of the components' values.
///
/// A fresh initial state copies the first step of every component.
pub fn product_min(parts: &[DistanceAutomaton]) -> Result<DistanceAutomaton> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Structure("product of no automata".into()))?;
    if parts.iter().any(|p| p.alphabet != first.alphabet) {
        return Err(Error::Structure("alphabet mismatch in product".into()));
    }
    let letters = first.alphabet.len();
    let mut states = vec!["init".to_string()];
    let mut offsets = Vec::with_capacity(parts.len());
    for (j, p) in parts.iter().enumerate() {
        offsets.push(states.len());
        states.extend(p.states.iter().map(|s| format!("{j}:{s}")));
    }
    let mut out = DistanceAutomaton::new(states, first.alphabet.clone(), 0)?;
    let mut eta0 = Omega;
    for (p, &off) in parts.iter().zip(&offsets) {
        for q in 0..p.num_states() {
            out.final_costs[off + q] = p.final_costs[q];
            for l in 0..letters {
                for &(r, c) in &p.trans[q][l] {
                    out.trans[off + q][l].push((off + r, c));
                    if q == p.initial {
                        out.trans[0][l].push((off + r, c));
                    }
                }
            }
        }
        eta0 = eta0.min(p.final_costs[p.initial]);
    }
    out.final_costs[0] = eta0;
    Ok(out)
}
