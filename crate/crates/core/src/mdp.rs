//! Agent model: states, actions and the transition relation, without
//! probabilities.

use crate::error::{Error, Result};
use crate::flow::{Configuration, EdgeSet};

/// Name given to the sink added by completion.
pub const SINK: &str = "⊥";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    states: Vec<String>,
    actions: Vec<String>,
    delta: Vec<EdgeSet>,
    source: usize,
    target: usize,
}

impl Mdp {
    /// Builds and validates an MDP from named transitions `(from, action, to)`.
    ///
    /// With `sink_completion`, every `(state, action)` pair without a
    /// successor is sent to a fresh sink [`SINK`] that loops under every
    /// action.
    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        transitions: &[(String, String, String)],
        source: &str,
        target: &str,
        sink_completion: bool,
    ) -> Result<Self> {
        let mut states = states;
        let index = |names: &[String], x: &str, err: fn(String) -> Error| {
            names.iter().position(|s| s == x).ok_or_else(|| err(x.to_string()))
        };
        let mut triples = Vec::with_capacity(transitions.len());
        for (p, a, q) in transitions {
            triples.push((
                index(&states, p, Error::UnknownState)?,
                index(&actions, a, Error::UnknownAction)?,
                index(&states, q, Error::UnknownState)?,
            ));
        }
        let source = index(&states, source, Error::UnknownState)?;
        let target = index(&states, target, Error::UnknownState)?;

        if sink_completion {
            let n = states.len();
            let mut has = vec![vec![false; actions.len()]; n];
            for &(p, a, _) in &triples {
                has[p][a] = true;
            }
            let missing: Vec<(usize, usize)> = (0..n)
                .flat_map(|p| (0..actions.len()).map(move |a| (p, a)))
                .filter(|&(p, a)| !has[p][a])
                .collect();
            if !missing.is_empty() {
                let sink = match states.iter().position(|s| s == SINK) {
                    Some(i) => i,
                    None => {
                        states.push(SINK.to_string());
                        states.len() - 1
                    }
                };
                for (p, a) in missing {
                    triples.push((p, a, sink));
                }
                for a in 0..actions.len() {
                    triples.push((sink, a, sink));
                }
            }
        }
        Self::from_indices(states, actions, &triples, source, target)
    }

    /// Builds from index triples `(from, action, to)` and checks the
    /// invariants.
    pub fn from_indices(
        states: Vec<String>,
        actions: Vec<String>,
        transitions: &[(usize, usize, usize)],
        source: usize,
        target: usize,
    ) -> Result<Self> {
        let n = states.len();
        if actions.is_empty() {
            return Err(Error::Structure("an MDP needs at least one action".into()));
        }
        let mut sorted = states.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure("duplicate state name".into()));
        }
        let mut delta = vec![EdgeSet::empty(n); actions.len()];
        for &(p, a, q) in transitions {
            if p >= n || q >= n {
                return Err(Error::Structure(format!("state index out of range in ({p},{a},{q})")));
            }
            if a >= actions.len() {
                return Err(Error::UnknownAction(a.to_string()));
            }
            delta[a].insert(p, q);
        }
        if source >= n || target >= n {
            return Err(Error::Structure("source or target out of range".into()));
        }
        for (a, e) in delta.iter().enumerate() {
            for p in 0..n {
                if e.successors(p).is_empty() {
                    return Err(Error::Structure(format!(
                        "state `{}` has no successor under `{}`",
                        states[p], actions[a]
                    )));
                }
            }
            if e.successors(target) != [target] {
                return Err(Error::Structure(format!(
                    "target `{}` must only loop under `{}`",
                    states[target], actions[a]
                )));
            }
        }
        Ok(Mdp {
            states,
            actions,
            delta,
            source,
            target,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn action_index(&self, name: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownAction(name.to_string()))
    }

    /// `Δ_a` by action name.
    pub fn delta_a(&self, action: &str) -> Result<&EdgeSet> {
        Ok(&self.delta[self.action_index(action)?])
    }

    /// `Δ_a` by action index.
    pub fn delta(&self, a: usize) -> &EdgeSet {
        &self.delta[a]
    }

    /// All transitions as index triples, sorted.
    pub fn transitions(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<_> = self
            .delta
            .iter()
            .enumerate()
            .flat_map(|(a, e)| e.iter().map(move |(p, q)| (p, a, q)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `n · s`.
    pub fn initial(&self, n: u64) -> Configuration {
        Configuration::unit(self.num_states(), self.source, n)
    }

    /// `n · t`.
    pub fn goal(&self, n: u64) -> Configuration {
        Configuration::unit(self.num_states(), self.target, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn tr(p: &str, a: &str, q: &str) -> (String, String, String) {
        (p.into(), a.into(), q.into())
    }

    #[test]
    fn completion_adds_sink() {
        let m = Mdp::new(
            names(&["s", "t"]),
            names(&["a", "b"]),
            &[tr("s", "a", "t"), tr("t", "a", "t"), tr("t", "b", "t")],
            "s",
            "t",
            true,
        )
        .unwrap();
        assert_eq!(m.states(), &names(&["s", "t", SINK])[..]);
        let b = m.delta_a("b").unwrap();
        assert_eq!(b.successors(0), &[2]);
        assert_eq!(b.successors(2), &[2]);
        assert_eq!(m.delta_a("a").unwrap().successors(2), &[2]);
    }

    #[test]
    fn invariants_are_checked() {
        let missing = Mdp::new(
            names(&["s", "t"]),
            names(&["a"]),
            &[tr("t", "a", "t")],
            "s",
            "t",
            false,
        );
        assert!(matches!(missing, Err(Error::Structure(_))));

        let leaky_target = Mdp::new(
            names(&["s", "t"]),
            names(&["a"]),
            &[tr("s", "a", "t"), tr("t", "a", "s"), tr("t", "a", "t")],
            "s",
            "t",
            false,
        );
        assert!(matches!(leaky_target, Err(Error::Structure(_))));

        let unknown = Mdp::new(names(&["s"]), names(&["a"]), &[tr("s", "z", "s")], "s", "s", false);
        assert_eq!(unknown.unwrap_err(), Error::UnknownAction("z".into()));
    }

    #[test]
    fn self_loop_action_gives_identity() {
        let m = Mdp::new(
            names(&["s", "t"]),
            names(&["stay"]),
            &[tr("s", "stay", "s"), tr("t", "stay", "t")],
            "s",
            "t",
            false,
        )
        .unwrap();
        let e = m.delta_a("stay").unwrap();
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert_eq!(m.delta_a("go").unwrap_err(), Error::UnknownAction("go".into()));
    }
}
