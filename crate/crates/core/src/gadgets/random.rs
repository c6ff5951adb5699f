use rand::Rng;

use crate::error::Result;
use crate::gadgets::Nfa;
use crate::mdp::Mdp;

/// A random MDP over `q0 … q{n-1}` with source `q0` and target `q{n-1}`;
/// every other state gets a nonempty random successor set per action.
pub fn random_mdp<R: Rng>(rng: &mut R, n: usize, actions: usize) -> Result<Mdp> {
    let n = n.max(2);
    let t = n - 1;
    let mut triples = Vec::new();
    for a in 0..actions {
        triples.push((t, a, t));
        for p in 0..t {
            let mut succ: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            if succ.is_empty() {
                succ.push(rng.gen_range(0..n));
            }
            triples.extend(succ.into_iter().map(|q| (p, a, q)));
        }
    }
    Mdp::from_indices(
        (0..n).map(|i| format!("q{i}")).collect(),
        (0..actions).map(|i| format!("a{i}")).collect(),
        &triples,
        0,
        t,
    )
}

/// A random NFA with states `{prefix}0 …` over `letters` letters.
pub fn random_nfa<R: Rng>(rng: &mut R, prefix: &str, n: usize, letters: usize) -> Result<Nfa> {
    let states: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut initial: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    let mut transitions = Vec::new();
    for p in 0..n {
        for l in 0..letters {
            for q in 0..n {
                if rng.gen_bool(0.3) {
                    transitions.push((p, l, q));
                }
            }
        }
    }
    Nfa::new(
        states,
        ["x", "y", "z"].iter().take(letters).map(|s| s.to_string()).collect(),
        initial,
        finals,
        transitions,
    )
}
