use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A finite two-player game graph in compressed adjacency form.
///
/// Every vertex must have at least one successor.
#[derive(Clone, Debug)]
pub struct GameGraph {
    eve: Vec<bool>,
    succ_start: Vec<usize>,
    succ: Vec<u32>,
    pred_start: Vec<usize>,
    pred: Vec<u32>,
}

impl GameGraph {
    /// `eve[v]` tells the owner of `v`; `edges` lists `(from, to)`.
    pub fn new(eve: Vec<bool>, edges: &[(u32, u32)]) -> Result<Self> {
        let n = eve.len();
        let (succ_start, succ) = csr(n, edges.iter().map(|&(u, v)| (u, v)));
        let (pred_start, pred) = csr(n, edges.iter().map(|&(u, v)| (v, u)));
        if let Some(v) = (0..n).find(|&v| succ_start[v] == succ_start[v + 1]) {
            return Err(Error::Structure(format!("game vertex {v} has no successor")));
        }
        Ok(GameGraph {
            eve,
            succ_start,
            succ,
            pred_start,
            pred,
        })
    }

    pub fn len(&self) -> usize {
        self.eve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eve.is_empty()
    }

    pub fn is_eve(&self, v: usize) -> bool {
        self.eve[v]
    }

    pub fn successors(&self, v: usize) -> &[u32] {
        &self.succ[self.succ_start[v]..self.succ_start[v + 1]]
    }

    pub fn predecessors(&self, v: usize) -> &[u32] {
        &self.pred[self.pred_start[v]..self.pred_start[v + 1]]
    }

    /// The set of vertices of `active` from which `player` (Eve when
    /// `for_eve`) forces a visit to `target` while staying in `active`.
    ///
    /// `active` must be a subgame: the opponent cannot leave it. Returns
    /// the attractor and, for the attracting player's vertices outside the
    /// target, the successor that decreases the distance.
    pub fn attractor(
        &self,
        for_eve: bool,
        target: &[bool],
        active: &[bool],
    ) -> (Vec<bool>, Vec<Option<u32>>) {
        let n = self.len();
        let mut attr = vec![false; n];
        let mut choice = vec![None; n];
        let mut remaining: Vec<usize> = (0..n)
            .map(|v| {
                if active[v] {
                    self.successors(v).iter().filter(|&&w| active[w as usize]).count()
                } else {
                    0
                }
            })
            .collect();
        let mut queue = VecDeque::new();
        for v in 0..n {
            if active[v] && target[v] {
                attr[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            for &u in self.predecessors(w) {
                let u = u as usize;
                if !active[u] || attr[u] {
                    continue;
                }
                if self.eve[u] == for_eve {
                    attr[u] = true;
                    choice[u] = Some(w as u32);
                    queue.push_back(u);
                } else {
                    remaining[u] -= 1;
                    if remaining[u] == 0 {
                        attr[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        (attr, choice)
    }

    /// Eve's winning region for the objective "visit `marked` infinitely
    /// often", by repeatedly removing Adam's attractor to the vertices that
    /// can avoid `marked` forever.
    pub fn solve_buchi(&self, marked: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut active = vec![true; n];
        loop {
            let target: Vec<bool> = (0..n).map(|v| active[v] && marked[v]).collect();
            let (reach, _) = self.attractor(true, &target, &active);
            let trap: Vec<bool> = (0..n).map(|v| active[v] && !reach[v]).collect();
            if !trap.iter().any(|&x| x) {
                return active;
            }
            let (lost, _) = self.attractor(false, &trap, &active);
            for v in 0..n {
                if lost[v] {
                    active[v] = false;
                }
            }
        }
    }

    /// A positional Eve strategy on `win` for the Büchi objective: attract
    /// to `marked ∩ win`, and from there stay inside `win`.
    pub fn buchi_strategy(&self, marked: &[bool], win: &[bool]) -> Vec<Option<u32>> {
        let n = self.len();
        let target: Vec<bool> = (0..n).map(|v| win[v] && marked[v]).collect();
        let (_, mut choice) = self.attractor(true, &target, win);
        for v in 0..n {
            if win[v] && self.eve[v] && choice[v].is_none() {
                choice[v] = self.successors(v).iter().copied().find(|&w| win[w as usize]);
            }
        }
        choice
    }

    /// Checks that `strategy` keeps every play from `win` inside `win` and
    /// visits `marked` infinitely often.
    pub fn verify_buchi_strategy(
        &self,
        marked: &[bool],
        win: &[bool],
        strategy: &[Option<u32>],
    ) -> Result<()> {
        let n = self.len();
        let next = |v: usize| -> Vec<u32> {
            if self.eve[v] {
                strategy[v].into_iter().collect()
            } else {
                self.successors(v).to_vec()
            }
        };
        for v in (0..n).filter(|&v| win[v]) {
            let out = next(v);
            if out.is_empty() {
                return Err(Error::Consistency(format!("no strategy move at vertex {v}")));
            }
            if let Some(&w) = out.iter().find(|&&w| !win[w as usize]) {
                return Err(Error::Consistency(format!("move {v} → {w} leaves the winning region")));
            }
            if self.eve[v] && !self.successors(v).contains(&out[0]) {
                return Err(Error::Consistency(format!("illegal strategy move at {v}")));
            }
        }
        // no cycle inside win that avoids marked: Kahn's algorithm
        let inside = |v: usize| win[v] && !marked[v];
        let mut indeg = vec![0usize; n];
        for v in (0..n).filter(|&v| inside(v)) {
            for w in next(v) {
                if inside(w as usize) {
                    indeg[w as usize] += 1;
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| inside(v) && indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for w in next(v) {
                let w = w as usize;
                if inside(w) {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push_back(w);
                    }
                }
            }
        }
        let total = (0..n).filter(|&v| inside(v)).count();
        if seen != total {
            return Err(Error::Consistency(
                "a play consistent with the strategy avoids the Büchi set forever".into(),
            ));
        }
        Ok(())
    }
}

fn csr(n: usize, pairs: impl Iterator<Item = (u32, u32)> + Clone) -> (Vec<usize>, Vec<u32>) {
    let mut start = vec![0usize; n + 1];
    for (u, _) in pairs.clone() {
        start[u as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut out = vec![0u32; start[n]];
    for (u, v) in pairs {
        out[fill[u as usize]] = v;
        fill[u as usize] += 1;
    }
    (start, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buchi_on_small_graphs() {
        // 0 (Eve) → 1 or 2; 1 (Adam) → 0 or 3; 2 loops; 3 loops; marked {0}
        let g = GameGraph::new(
            vec![true, false, true, true],
            &[(0, 1), (0, 2), (1, 0), (1, 3), (2, 2), (3, 3)],
        )
        .unwrap();
        let win = g.solve_buchi(&[true, false, false, false]);
        assert_eq!(win, vec![false, false, false, false]);

        let win = g.solve_buchi(&[false, false, true, false]);
        assert_eq!(win, vec![true, false, true, false]);
        let marked = [false, false, true, false];
        let strat = g.buchi_strategy(&marked, &win);
        assert_eq!(strat[0], Some(2));
        g.verify_buchi_strategy(&marked, &win, &strat).unwrap();

        // a bad strategy is rejected
        let mut bad = strat.clone();
        bad[0] = Some(1);
        assert!(g.verify_buchi_strategy(&marked, &win, &bad).is_err());
    }

    #[test]
    fn buchi_requires_recurrence() {
        // Eve may loop on 0 (unmarked) or go to marked 1, which returns to 0
        let g = GameGraph::new(vec![true, true], &[(0, 0), (0, 1), (1, 0)]).unwrap();
        let marked = [false, true];
        let win = g.solve_buchi(&marked);
        assert_eq!(win, vec![true, true]);
        let strat = g.buchi_strategy(&marked, &win);
        g.verify_buchi_strategy(&marked, &win, &strat).unwrap();
        let lazy = vec![Some(0), Some(0)];
        assert!(g.verify_buchi_strategy(&marked, &win, &lazy).is_err());
    }

    #[test]
    fn dead_ends_are_rejected() {
        assert!(GameGraph::new(vec![true, true], &[(0, 1)]).is_err());
    }
}
