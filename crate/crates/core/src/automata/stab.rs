//! Limitedness by the stabilization closure of abstract cost matrices.
//!
//! Costs are abstracted to `0 < 1 < ω < ⊤`, where `1` stands for any
//! bounded positive cost, `ω` for a cost that grows without bound when a
//! loop is pumped, and `⊤` for the absence of a (finite) run. A matrix is
//! stored as three boolean matrices holding the entries `≤ 0`, `≤ 1` and
//! `≤ ω`; the product is then a boolean product per level.

use std::collections::HashMap;
use std::fmt;

use crate::automata::{eval_distance, DistanceAutomaton};
use crate::error::{Error, Result};
use crate::wqo::ExtNat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Abstract {
    Zero,
    One,
    Omega,
    Top,
}

impl Abstract {
    pub fn of_cost(c: ExtNat) -> Abstract {
        match c {
            ExtNat::Fin(0) => Abstract::Zero,
            ExtNat::Fin(_) => Abstract::One,
            ExtNat::Omega => Abstract::Top,
        }
    }

    /// Abstract sum: bounded positive costs absorb each other.
    pub fn plus(self, other: Abstract) -> Abstract {
        self.max(other)
    }
}

impl fmt::Display for Abstract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Abstract::Zero => "0",
            Abstract::One => "1",
            Abstract::Omega => "ω",
            Abstract::Top => "⊤",
        })
    }
}

const LEVELS: usize = 3;

/// A square matrix over [`Abstract`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbsMatrix {
    n: usize,
    words: usize,
    /// `levels[k]` has bit `(i, j)` set iff the entry is at most
    /// `Zero`, `One`, `Omega` for `k = 0, 1, 2`.
    levels: [Vec<u64>; LEVELS],
}

impl AbsMatrix {
    /// All entries `⊤`.
    pub fn top(n: usize) -> Self {
        let words = n.div_ceil(64);
        AbsMatrix {
            n,
            words,
            levels: std::array::from_fn(|_| vec![0; n * words]),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::top(n);
        for i in 0..n {
            m.set(i, i, Abstract::Zero);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn bit(&self, level: usize, i: usize, j: usize) -> bool {
        self.levels[level][i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn get(&self, i: usize, j: usize) -> Abstract {
        if self.bit(0, i, j) {
            Abstract::Zero
        } else if self.bit(1, i, j) {
            Abstract::One
        } else if self.bit(2, i, j) {
            Abstract::Omega
        } else {
            Abstract::Top
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Abstract) {
        let idx = i * self.words + j / 64;
        let mask = 1u64 << (j % 64);
        for (k, level) in self.levels.iter_mut().enumerate() {
            let on = (v as usize) <= k;
            if on {
                level[idx] |= mask;
            } else {
                level[idx] &= !mask;
            }
        }
    }

    /// Lowers the entry to `min(current, v)`.
    pub fn lower(&mut self, i: usize, j: usize, v: Abstract) {
        if v < self.get(i, j) {
            self.set(i, j, v);
        }
    }

    fn row(&self, level: usize, i: usize) -> &[u64] {
        &self.levels[level][i * self.words..(i + 1) * self.words]
    }

    pub fn mul(&self, other: &AbsMatrix) -> AbsMatrix {
        debug_assert_eq!(self.n, other.n);
        let mut out = AbsMatrix::top(self.n);
        let w = self.words;
        for level in 0..LEVELS {
            let dst = &mut out.levels[level];
            for i in 0..self.n {
                let acc = &mut dst[i * w..(i + 1) * w];
                for (wi, &word) in self.row(level, i).iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let r = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        for (a, b) in acc.iter_mut().zip(other.row(level, r)) {
                            *a |= b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Stabilization of an idempotent: entries stay bounded only through a
    /// state with a zero-cost loop.
    pub fn stabilize(&self) -> AbsMatrix {
        let n = self.n;
        let w = self.words;
        let zero_loop: Vec<bool> = (0..n).map(|r| self.bit(0, r, r)).collect();
        let mut out = AbsMatrix::top(n);
        for level in 0..2 {
            for i in 0..n {
                let mut acc = vec![0u64; w];
                for r in (0..n).filter(|&r| zero_loop[r] && self.bit(level, i, r)) {
                    for (a, b) in acc.iter_mut().zip(self.row(level, r)) {
                        *a |= b;
                    }
                }
                out.levels[level][i * w..(i + 1) * w].copy_from_slice(&acc);
            }
        }
        out.levels[2] = self.levels[2].clone();
        out
    }

    /// Restriction to the given rows and columns, in order.
    fn restrict(&self, keep: &[usize]) -> AbsMatrix {
        let mut m = AbsMatrix::top(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }
}

/// One component of a min-combination: letter matrices, initial states and
/// one final vector per end marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub letters: Vec<AbsMatrix>,
    pub initial: Vec<usize>,
    pub ends: Vec<Vec<Abstract>>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.letters.first().map_or(0, AbsMatrix::dim)
    }

    pub fn from_automaton(a: &DistanceAutomaton) -> Block {
        let n = a.num_states();
        let letters = (0..a.alphabet().len())
            .map(|l| {
                let mut m = AbsMatrix::top(n);
                for q in 0..n {
                    for &(p, c) in a.transitions_from(q, l) {
                        m.lower(q, p, Abstract::of_cost(c));
                    }
                }
                m
            })
            .collect();
        Block {
            letters,
            initial: vec![a.initial()],
            ends: vec![a.final_costs().iter().map(|&c| Abstract::of_cost(c)).collect()],
        }
    }

    /// Drops states that are unreachable from an initial state or cannot
    /// reach a finite final cost. Values are unchanged.
    pub fn trim(&self) -> Block {
        let n = self.dim();
        let adj = |i: usize, j: usize| self.letters.iter().any(|m| m.get(i, j) != Abstract::Top);
        let mut fwd = vec![false; n];
        let mut stack: Vec<usize> = self.initial.clone();
        for &i in &stack {
            fwd[i] = true;
        }
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !fwd[j] && adj(i, j) {
                    fwd[j] = true;
                    stack.push(j);
                }
            }
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<usize> = (0..n)
            .filter(|&j| self.ends.iter().any(|e| e[j] != Abstract::Top))
            .collect();
        for &j in &stack {
            bwd[j] = true;
        }
        while let Some(j) = stack.pop() {
            for i in 0..n {
                if !bwd[i] && adj(i, j) {
                    bwd[i] = true;
                    stack.push(i);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| fwd[i] && bwd[i]).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        Block {
            letters: self.letters.iter().map(|m| m.restrict(&keep)).collect(),
            initial: self.initial.iter().filter_map(|i| pos.get(i).copied()).collect(),
            ends: self
                .ends
                .iter()
                .map(|e| keep.iter().map(|&i| e[i]).collect())
                .collect(),
        }
    }
}

/// A stabilization expression over letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Empty,
    Letter(usize),
    Concat(Box<Expr>, Box<Expr>),
    /// Pumped `m` times on unfolding.
    Star(Box<Expr>),
}

impl Expr {
    pub fn unfold(&self, m: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.unfold_into(m, &mut out);
        out
    }

    fn unfold_into(&self, m: usize, out: &mut Vec<usize>) {
        match self {
            Expr::Empty => {}
            Expr::Letter(a) => out.push(*a),
            Expr::Concat(x, y) => {
                x.unfold_into(m, out);
                y.unfold_into(m, out);
            }
            Expr::Star(x) => {
                for _ in 0..m {
                    x.unfold_into(m, out);
                }
            }
        }
    }

    /// Length of `unfold(m)`, saturating.
    pub fn unfolded_len(&self, m: usize) -> usize {
        match self {
            Expr::Empty => 0,
            Expr::Letter(_) => 1,
            Expr::Concat(x, y) => x.unfolded_len(m).saturating_add(y.unfolded_len(m)),
            Expr::Star(x) => x.unfolded_len(m).saturating_mul(m),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        match self {
            Expr::Empty => "ε".into(),
            Expr::Letter(a) => names.get(*a).cloned().unwrap_or_else(|| a.to_string()),
            Expr::Concat(x, y) => format!("{} {}", x.display_with(names), y.display_with(names)),
            Expr::Star(x) => format!("({})^#", x.display_with(names)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limitedness {
    Bounded,
    /// Values exceed every bound along the unfoldings of `pattern`
    /// followed by end marker `end`.
    Unbounded { pattern: Expr, end: usize },
}

impl Limitedness {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, Limitedness::Unbounded { .. })
    }
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Letter(usize),
    Concat(usize, usize),
    Star(usize),
}

/// The closure of the letter matrices under product and stabilization of
/// idempotents, over a tuple of blocks.
#[derive(Debug)]
pub struct Closure {
    blocks: Vec<Block>,
    elements: Vec<Vec<AbsMatrix>>,
    nodes: Vec<Node>,
    index: HashMap<Vec<AbsMatrix>, usize>,
    gens: Vec<usize>,
    next_gen: Vec<usize>,
    stabilized: Vec<bool>,
    cursor: usize,
}

impl Closure {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let letters = blocks.first().map_or(0, |b| b.letters.len());
        let ends = blocks.first().map_or(0, |b| b.ends.len());
        for b in &blocks {
            if b.letters.len() != letters || b.ends.len() != ends {
                return Err(Error::Structure("blocks disagree on letters or end markers".into()));
            }
        }
        let mut c = Closure {
            blocks,
            elements: Vec::new(),
            nodes: Vec::new(),
            index: HashMap::new(),
            gens: Vec::new(),
            next_gen: Vec::new(),
            stabilized: Vec::new(),
            cursor: 0,
        };
        for l in 0..letters {
            let e: Vec<AbsMatrix> = c.blocks.iter().map(|b| b.letters[l].clone()).collect();
            if let Some(id) = c.insert(e, Node::Letter(l)) {
                c.gens.push(id);
            }
        }
        Ok(c)
    }

    fn insert(&mut self, e: Vec<AbsMatrix>, node: Node) -> Option<usize> {
        if self.index.contains_key(&e) {
            return None;
        }
        let id = self.elements.len();
        self.index.insert(e.clone(), id);
        self.elements.push(e);
        self.nodes.push(node);
        self.next_gen.push(0);
        self.stabilized.push(false);
        Some(id)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<AbsMatrix>] {
        &self.elements
    }

    fn end_count(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.ends.len())
    }

    /// Abstract value of the empty word followed by end marker `end`.
    pub fn empty_value(&self, end: usize) -> Abstract {
        self.blocks
            .iter()
            .flat_map(|b| b.initial.iter().map(move |&i| b.ends[end][i]))
            .min()
            .unwrap_or(Abstract::Top)
    }

    /// Abstract value of an element followed by end marker `end`.
    pub fn value(&self, e: &[AbsMatrix], end: usize) -> Abstract {
        let mut best = Abstract::Top;
        for (b, m) in self.blocks.iter().zip(e) {
            for &i in &b.initial {
                for (j, &f) in b.ends[end].iter().enumerate() {
                    best = best.min(m.get(i, j).plus(f));
                    if best == Abstract::Zero {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn expr(&self, id: usize) -> Expr {
        match self.nodes[id] {
            Node::Letter(l) => Expr::Letter(l),
            Node::Concat(x, y) => Expr::Concat(Box::new(self.expr(x)), Box::new(self.expr(y))),
            Node::Star(x) => Expr::Star(Box::new(self.expr(x))),
        }
    }

    fn unbounded_at(&self, id: usize) -> Option<Limitedness> {
        (0..self.end_count()).find_map(|end| {
            (self.value(&self.elements[id], end) >= Abstract::Omega).then(|| Limitedness::Unbounded {
                pattern: self.expr(id),
                end,
            })
        })
    }

    /// Advances the saturation by one element. Returns `false` once the
    /// closure is complete.
    fn step(&mut self, budget: usize) -> Result<bool> {
        if self.cursor == self.elements.len() {
            // elements processed before a generator appeared still owe
            // products with it
            let pending = (0..self.elements.len()).find(|&i| self.next_gen[i] < self.gens.len());
            match pending {
                Some(i) => self.cursor = i,
                None => return Ok(false),
            }
        }
        let i = self.cursor;
        self.cursor += 1;
        while self.next_gen[i] < self.gens.len() {
            let g = self.gens[self.next_gen[i]];
            self.next_gen[i] += 1;
            let prod: Vec<AbsMatrix> = self.elements[i]
                .iter()
                .zip(&self.elements[g])
                .map(|(x, y)| x.mul(y))
                .collect();
            self.insert(prod, Node::Concat(i, g));
            if self.elements.len() > budget {
                return Err(Error::budget("stabilization closure", budget, self.elements.len()));
            }
        }
        if !self.stabilized[i] {
            self.stabilized[i] = true;
            let e = &self.elements[i];
            if e.iter().all(AbsMatrix::is_idempotent) {
                let s: Vec<AbsMatrix> = e.iter().map(AbsMatrix::stabilize).collect();
                if let Some(id) = self.insert(s, Node::Star(i)) {
                    self.gens.push(id);
                }
            }
        }
        Ok(true)
    }

    /// Saturates, stopping at the first element whose value is unbounded.
    pub fn search(&mut self, budget: usize) -> Result<Limitedness> {
        for end in 0..self.end_count() {
            if self.empty_value(end) >= Abstract::Omega {
                return Ok(Limitedness::Unbounded {
                    pattern: Expr::Empty,
                    end,
                });
            }
        }
        let mut checked = 0;
        loop {
            while checked < self.elements.len() {
                if let Some(v) = self.unbounded_at(checked) {
                    return Ok(v);
                }
                checked += 1;
            }
            if !self.step(budget)? {
                return Ok(Limitedness::Bounded);
            }
        }
    }

    /// Saturates completely.
    pub fn saturate(&mut self, budget: usize) -> Result<()> {
        while self.step(budget)? {}
        Ok(())
    }

    /// Whether values that are finite stay bounded: no element has the
    /// abstract value `ω`. Requires a saturated closure.
    pub fn finite_values_bounded(&self) -> bool {
        (0..self.end_count()).all(|end| {
            self.elements
                .iter()
                .all(|e| self.value(e, end) != Abstract::Omega)
        })
    }

    /// Checks that products and stabilizations of elements stay in the
    /// closure. Requires a saturated closure.
    pub fn check_closed(&self) -> Result<()> {
        for x in &self.elements {
            for y in &self.elements {
                let p: Vec<AbsMatrix> = x.iter().zip(y).map(|(a, b)| a.mul(b)).collect();
                if !self.index.contains_key(&p) {
                    return Err(Error::Consistency("closure misses a product".into()));
                }
            }
            if x.iter().all(AbsMatrix::is_idempotent) {
                let s: Vec<AbsMatrix> = x.iter().map(AbsMatrix::stabilize).collect();
                if !self.index.contains_key(&s) {
                    return Err(Error::Consistency("closure misses a stabilization".into()));
                }
            }
        }
        Ok(())
    }
}

/// Default bound on the closure size.
pub const DEFAULT_CLOSURE_BUDGET: usize = 200_000;

/// Decides whether `∀n ∃w, ⟦a⟧(w) ≥ n` (an infinite value counts).
pub fn limitedness(a: &DistanceAutomaton) -> Result<Limitedness> {
    limitedness_blocks(vec![Block::from_automaton(a)], DEFAULT_CLOSURE_BUDGET)
}

/// Same decision for the minimum over several blocks read in parallel.
pub fn limitedness_blocks(blocks: Vec<Block>, budget: usize) -> Result<Limitedness> {
    let blocks: Vec<Block> = blocks.iter().map(Block::trim).collect();
    Closure::new(blocks)?.search(budget)
}

/// A word of value at least `target`, obtained by unfolding the
/// unboundedness pattern with growing exponents; `None` when bounded.
pub fn witness_search(
    a: &DistanceAutomaton,
    target: u64,
    max_len: usize,
) -> Result<Option<Vec<usize>>> {
    let Limitedness::Unbounded { pattern, .. } = limitedness(a)? else {
        return Ok(None);
    };
    let mut m = 1usize;
    loop {
        let len = pattern.unfolded_len(m);
        if len > max_len {
            return Err(Error::budget("witness length", max_len, len));
        }
        let w = pattern.unfold(m);
        if eval_distance(a, &w)? >= ExtNat::Fin(target) {
            return Ok(Some(w));
        }
        m *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::{counter, random_automaton};
    use crate::wqo::Fin;
    use proptest::prelude::*;

    #[test]
    fn matrix_entries_roundtrip() {
        let mut m = AbsMatrix::top(70);
        m.set(3, 68, Abstract::One);
        m.set(69, 0, Abstract::Omega);
        assert_eq!(m.get(3, 68), Abstract::One);
        assert_eq!(m.get(69, 0), Abstract::Omega);
        assert_eq!(m.get(0, 0), Abstract::Top);
        m.lower(3, 68, Abstract::Omega);
        assert_eq!(m.get(3, 68), Abstract::One);
        m.lower(3, 68, Abstract::Zero);
        assert_eq!(m.get(3, 68), Abstract::Zero);
    }

    #[test]
    fn stabilization_of_a_counter_loop() {
        let mut e = AbsMatrix::top(1);
        e.set(0, 0, Abstract::One);
        assert!(e.is_idempotent());
        assert_eq!(e.stabilize().get(0, 0), Abstract::Omega);
        let z = AbsMatrix::identity(2);
        assert_eq!(z.stabilize(), z);
    }

    #[test]
    fn counter_is_unbounded() {
        let v = limitedness(&counter()).unwrap();
        assert_eq!(
            v,
            Limitedness::Unbounded {
                pattern: Expr::Star(Box::new(Expr::Letter(0))),
                end: 0
            }
        );
        let w = witness_search(&counter(), 7, 1000).unwrap().unwrap();
        assert!(w.len() >= 7);
        assert!(eval_distance(&counter(), &w).unwrap() >= Fin(7));
        let w = witness_search(&counter(), 20, 1000).unwrap().unwrap();
        assert!(eval_distance(&counter(), &w).unwrap() >= Fin(20));
    }

    #[test]
    fn zero_costs_are_bounded() {
        let mut a = DistanceAutomaton::with_sizes(2, 2, 0).unwrap();
        for l in 0..2 {
            a.add_transition(0, l, Fin(0), 1).unwrap();
            a.add_transition(1, l, Fin(0), 0).unwrap();
        }
        a.set_final(0, Fin(0));
        a.set_final(1, Fin(0));
        assert_eq!(limitedness(&a).unwrap(), Limitedness::Bounded);
        assert_eq!(witness_search(&a, 5, 100).unwrap(), None);
    }

    #[test]
    fn cheap_escape_keeps_bounded() {
        // cost 1 on the loop at 0, but a zero-cost route through 1 exists
        let mut a = DistanceAutomaton::with_sizes(2, 1, 0).unwrap();
        a.add_transition(0, 0, Fin(1), 0).unwrap();
        a.add_transition(0, 0, Fin(0), 1).unwrap();
        a.add_transition(1, 0, Fin(0), 1).unwrap();
        a.set_final(0, Fin(0));
        a.set_final(1, Fin(0));
        assert_eq!(limitedness(&a).unwrap(), Limitedness::Bounded);
    }

    #[test]
    fn missing_run_counts_as_unbounded() {
        // letter 1 kills every run, so its value is ω
        let mut a = DistanceAutomaton::with_sizes(1, 2, 0).unwrap();
        a.add_transition(0, 0, Fin(0), 0).unwrap();
        a.set_final(0, Fin(0));
        assert!(limitedness(&a).unwrap().is_unbounded());
        let mut c = Closure::new(vec![Block::from_automaton(&a)]).unwrap();
        c.saturate(100).unwrap();
        assert!(c.finite_values_bounded());
    }

    #[test]
    fn min_of_blocks_needs_a_common_word() {
        // block A counts letter 0, block B counts letter 1
        let mut x = DistanceAutomaton::with_sizes(1, 2, 0).unwrap();
        x.add_transition(0, 0, Fin(1), 0).unwrap();
        x.add_transition(0, 1, Fin(0), 0).unwrap();
        x.set_final(0, Fin(0));
        let mut y = DistanceAutomaton::with_sizes(1, 2, 0).unwrap();
        y.add_transition(0, 0, Fin(0), 0).unwrap();
        y.add_transition(0, 1, Fin(1), 0).unwrap();
        y.set_final(0, Fin(0));
        let both = vec![Block::from_automaton(&x), Block::from_automaton(&y)];
        assert!(limitedness_blocks(both, 1000).unwrap().is_unbounded());

        // block B is reset to 0 by letter 0
        let mut z = DistanceAutomaton::with_sizes(2, 2, 0).unwrap();
        z.add_transition(0, 0, Fin(0), 1).unwrap();
        z.add_transition(1, 0, Fin(0), 1).unwrap();
        z.add_transition(0, 1, Fin(0), 0).unwrap();
        z.add_transition(1, 1, Fin(0), 0).unwrap();
        z.set_final(1, Fin(0));
        z.set_final(0, Fin(0));
        let pair = vec![Block::from_automaton(&x), Block::from_automaton(&z)];
        assert_eq!(limitedness_blocks(pair, 1000).unwrap(), Limitedness::Bounded);
    }

    fn word_matrix(a: &DistanceAutomaton, w: &[usize]) -> AbsMatrix {
        // exact min-plus product, then abstracted
        let n = a.num_states();
        let mut cur: Vec<Vec<ExtNat>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Fin(0) } else { ExtNat::Omega }).collect())
            .collect();
        for &l in w {
            let mut next = vec![vec![ExtNat::Omega; n]; n];
            for i in 0..n {
                for r in 0..n {
                    if cur[i][r].is_omega() {
                        continue;
                    }
                    for &(j, c) in a.transitions_from(r, l) {
                        next[i][j] = next[i][j].min(cur[i][r] + c);
                    }
                }
            }
            cur = next;
        }
        let mut m = AbsMatrix::top(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, Abstract::of_cost(cur[i][j]));
            }
        }
        m
    }

    fn all_words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..letters {
                    let mut v: Vec<usize> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn abstraction_is_sound_on_short_words(
            n in 1usize..=3,
            edges in prop::collection::vec((0usize..3, 0usize..2, 0u64..2, 0usize..3), 0..10),
        ) {
            let a = random_automaton(n, 2, &edges, &[0]);
            let block = Block::from_automaton(&a);
            for w in all_words(2, 6) {
                let mut m = AbsMatrix::identity(n);
                for &l in &w {
                    m = m.mul(&block.letters[l]);
                }
                prop_assert_eq!(&m, &word_matrix(&a, &w));
            }
        }

        #[test]
        fn closure_is_closed(
            n in 1usize..=3,
            edges in prop::collection::vec((0usize..3, 0usize..2, 0u64..2, 0usize..3), 0..10),
            finals in prop::collection::vec(0u64..4, 3),
        ) {
            let a = random_automaton(n, 2, &edges, &finals);
            let mut c = Closure::new(vec![Block::from_automaton(&a)]).unwrap();
            c.saturate(100_000).unwrap();
            c.check_closed().unwrap();
        }

        #[test]
        fn verdicts_match_sampling(
            n in 1usize..=3,
            edges in prop::collection::vec((0usize..3, 0usize..2, 0u64..4, 0usize..3), 0..10),
            finals in prop::collection::vec(0u64..4, 3),
        ) {
            let a = random_automaton(n, 2, &edges, &finals);
            match limitedness(&a).unwrap() {
                Limitedness::Unbounded { .. } => {
                    let w = witness_search(&a, 20, 1 << 20).unwrap().unwrap();
                    prop_assert!(eval_distance(&a, &w).unwrap() >= Fin(20));
                }
                Limitedness::Bounded => {
                    // a bounded verdict rules out words without a finite run
                    let mut worst = Fin(0);
                    for w in all_words(2, 8) {
                        worst = worst.max(eval_distance(&a, &w).unwrap());
                    }
                    prop_assert!(!worst.is_omega());
                    let mut c = Closure::new(vec![Block::from_automaton(&a)]).unwrap();
                    c.saturate(100_000).unwrap();
                    prop_assert!(c.finite_values_bounded());
                }
            }
        }
    }
}
