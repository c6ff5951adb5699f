use crate::error::{Error, Result};
use crate::mdp::Mdp;

fn build(
    states: &[&str],
    actions: &[&str],
    edges: &[(&str, &str, &str)],
    complete: bool,
) -> Mdp {
    let transitions: Vec<(String, String, String)> = edges
        .iter()
        .map(|&(p, a, q)| (p.to_string(), a.to_string(), q.to_string()))
        .collect();
    Mdp::new(
        states.iter().map(|s| s.to_string()).collect(),
        actions.iter().map(|s| s.to_string()).collect(),
        &transitions,
        "s",
        "t",
        complete,
    )
    .expect("built-in example is well formed")
}

/// Two actions; any number of tokens can be driven to `t`.
pub fn example1() -> Mdp {
    build(
        &["s", "q", "t"],
        &["a", "b"],
        &[
            ("s", "a", "s"),
            ("s", "a", "q"),
            ("q", "a", "q"),
            ("t", "a", "t"),
            ("s", "b", "s"),
            ("q", "b", "t"),
            ("q", "b", "s"),
            ("t", "b", "t"),
        ],
        false,
    )
}

/// Three binary splitting stages; synchronises at most seven tokens.
pub fn example2() -> Mdp {
    build(
        &["s", "q1u", "q1d", "q1", "q2u", "q2d", "q2", "q3u", "q3d", "t", "⊥"],
        &["a", "u", "d"],
        &[
            ("s", "a", "q1u"),
            ("s", "a", "q1d"),
            ("q1", "a", "q2u"),
            ("q1", "a", "q2d"),
            ("q2", "a", "q3u"),
            ("q2", "a", "q3d"),
            ("t", "a", "t"),
            ("q1u", "u", "t"),
            ("q1d", "u", "q1"),
            ("q2u", "u", "t"),
            ("q2d", "u", "q2"),
            ("q3u", "u", "t"),
            ("q3d", "u", "⊥"),
            ("t", "u", "t"),
            ("q1d", "d", "t"),
            ("q1u", "d", "q1"),
            ("q2d", "d", "t"),
            ("q2u", "d", "q2"),
            ("q3d", "d", "t"),
            ("q3u", "d", "⊥"),
            ("t", "d", "t"),
        ],
        true,
    )
}

/// Tokens pass one at a time through `q1`; any number can be driven to `t`.
pub fn example3() -> Mdp {
    build(
        &["s", "q1", "ql", "qr", "t", "⊥"],
        &["a", "b", "l", "r"],
        &[
            ("s", "a", "s"),
            ("s", "a", "q1"),
            ("q1", "a", "q1"),
            ("q1", "a", "s"),
            ("t", "a", "t"),
            ("s", "b", "s"),
            ("q1", "b", "ql"),
            ("q1", "b", "qr"),
            ("t", "b", "t"),
            ("s", "l", "s"),
            ("ql", "l", "t"),
            ("qr", "l", "⊥"),
            ("t", "l", "t"),
            ("s", "r", "s"),
            ("qr", "r", "t"),
            ("ql", "r", "⊥"),
            ("t", "r", "t"),
        ],
        true,
    )
}

pub fn gen_example(which: u32) -> Result<Mdp> {
    match which {
        1 => Ok(example1()),
        2 => Ok(example2()),
        3 => Ok(example3()),
        _ => Err(Error::Contract(format!("no example {which}; expected 1, 2 or 3"))),
    }
}
