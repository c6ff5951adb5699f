use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::flow::Capacity;
use crate::sfp::SfpInstance;
use crate::wqo::{ExtNat, ExtVec, Fin, Omega};

/// A nondeterministic finite automaton with named states and letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: Vec<usize>,
    pub finals: Vec<usize>,
    /// `(from, letter, to)`
    pub transitions: Vec<(usize, usize, usize)>,
}

impl Nfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: Vec<usize>,
        finals: Vec<usize>,
        transitions: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        let n = states.len();
        if initial.iter().chain(&finals).any(|&q| q >= n) {
            return Err(Error::Structure("initial or final state out of range".into()));
        }
        for &(p, a, q) in &transitions {
            if p >= n || q >= n {
                return Err(Error::Structure(format!("transition {p}→{q} out of range")));
            }
            if a >= alphabet.len() {
                return Err(Error::UnknownLetter(a));
            }
        }
        Ok(Nfa {
            states,
            alphabet,
            initial,
            finals,
            transitions,
        })
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut cur: BTreeSet<usize> = self.initial.iter().copied().collect();
        for &a in word {
            cur = self
                .transitions
                .iter()
                .filter(|&&(p, b, _)| b == a && cur.contains(&p))
                .map(|&(_, _, q)| q)
                .collect();
        }
        cur.iter().any(|q| self.finals.contains(q))
    }
}

/// Emptiness of the intersection of the languages, by search in the
/// product automaton. Returns a shortest common word when nonempty.
pub fn nfa_intersection_word(nfas: &[Nfa]) -> Result<Option<Vec<usize>>> {
    let Some(first) = nfas.first() else {
        return Err(Error::Structure("no automata".into()));
    };
    if nfas.iter().any(|a| a.alphabet != first.alphabet) {
        return Err(Error::Structure("automata disagree on the alphabet".into()));
    }
    let letters = first.alphabet.len();
    let mut starts: Vec<Vec<usize>> = vec![vec![]];
    for a in nfas {
        starts = starts
            .iter()
            .flat_map(|t| {
                a.initial.iter().map(move |&q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
    }
    let mut parent: std::collections::HashMap<Vec<usize>, Option<(Vec<usize>, usize)>> =
        starts.iter().map(|s| (s.clone(), None)).collect();
    let mut queue: VecDeque<Vec<usize>> = starts.into_iter().collect();
    while let Some(t) = queue.pop_front() {
        if t.iter().zip(nfas).all(|(q, a)| a.finals.contains(q)) {
            let mut word = Vec::new();
            let mut cur = t;
            while let Some(Some((prev, l))) = parent.get(&cur) {
                word.push(*l);
                cur = prev.clone();
            }
            word.reverse();
            return Ok(Some(word));
        }
        for l in 0..letters {
            let mut next: Vec<Vec<usize>> = vec![vec![]];
            for (q, a) in t.iter().zip(nfas) {
                let succ: Vec<usize> = a
                    .transitions
                    .iter()
                    .filter(|&&(p, b, _)| p == *q && b == l)
                    .map(|&(_, _, r)| r)
                    .collect();
                next = next
                    .iter()
                    .flat_map(|v| {
                        succ.iter().map(move |&r| {
                            let mut v = v.clone();
                            v.push(r);
                            v
                        })
                    })
                    .collect();
            }
            for v in next {
                if !parent.contains_key(&v) {
                    parent.insert(v.clone(), Some((t.clone(), l)));
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(None)
}

/// Whether the languages have a common word.
pub fn nfa_intersect_bruteforce(nfas: &[Nfa]) -> Result<bool> {
    Ok(nfa_intersection_word(nfas)?.is_some())
}

struct Builder {
    states: Vec<String>,
    caps: Vec<(String, Capacity)>,
}

impl Builder {
    fn idx(&self, name: &str) -> usize {
        self.states.iter().position(|s| s == name).expect("known state")
    }

    fn cap(&mut self, name: String, entries: &[(&str, &str, ExtNat)]) {
        let n = self.states.len();
        let e: Vec<(usize, usize, ExtNat)> = entries
            .iter()
            .map(|&(p, q, v)| (self.idx(p), self.idx(q), v))
            .collect();
        self.caps.push((name, Capacity::from_entries(n, &e)));
    }
}

fn r(i: usize) -> String {
    format!("r{i}")
}

fn t(i: usize) -> String {
    if i == 0 {
        "s".into()
    } else {
        format!("t{i}")
    }
}

/// Entries of `a_i` and `b_i` of the gadget with `k` levels.
fn gadget_entries(k: usize, i: usize) -> (Vec<(String, String, ExtNat)>, Vec<(String, String, ExtNat)>) {
    let mut a = vec![("s".to_string(), "s".to_string(), Omega), ("s".into(), r(i), Fin(1))];
    let mut b = vec![(t(i - 1), "s".to_string(), Omega), (r(i), t(i), Fin(1))];
    for j in i..=k {
        a.push((t(j), t(j), Omega));
        b.push((t(j), t(j), Omega));
    }
    for j in i + 1..=k {
        a.push((r(j), r(j), Fin(1)));
        b.push((r(j), r(j), Fin(1)));
    }
    (a, b)
}

fn gadget_states(k: usize) -> Vec<String> {
    let mut states = vec!["s".to_string()];
    for i in 1..=k {
        states.push(r(i));
        states.push(t(i));
    }
    states
}

fn borrow(entries: &[(String, String, ExtNat)]) -> Vec<(&str, &str, ExtNat)> {
    entries.iter().map(|(p, q, v)| (p.as_str(), q.as_str(), *v)).collect()
}

fn simple_instance(states: Vec<String>, caps: Vec<(String, Capacity)>, k: usize) -> Result<SfpInstance> {
    let n = states.len();
    let s = 0;
    let tk = states.iter().position(|x| *x == t(k)).expect("target state");
    SfpInstance::new(
        states,
        caps,
        ExtVec::unit(n, s, Omega),
        ExtVec::unit(n, tk, Omega),
    )
}

/// The synchronization gadget with `k` levels: states `s, r1, t1, …, rk,
/// tk`, capacities `a1, b1, …, ak, bk`, source `ω·s`, target `ω·tk`.
pub fn gen_gadget_k(k: usize) -> Result<SfpInstance> {
    if k == 0 {
        return Err(Error::Contract("the gadget needs k ≥ 1".into()));
    }
    let mut b = Builder {
        states: gadget_states(k),
        caps: Vec::new(),
    };
    for i in 1..=k {
        let (ea, eb) = gadget_entries(k, i);
        b.cap(format!("a{i}"), &borrow(&ea));
        b.cap(format!("b{i}"), &borrow(&eb));
    }
    simple_instance(b.states, b.caps, k)
}

/// The simple-SFP instance whose answer is yes iff the languages of
/// `nfas` intersect.
pub fn gen_nfa_reduction(nfas: &[Nfa]) -> Result<SfpInstance> {
    let k = nfas.len();
    let Some(first) = nfas.first() else {
        return Err(Error::Structure("no automata".into()));
    };
    if nfas.iter().any(|a| a.alphabet != first.alphabet) {
        return Err(Error::Structure("automata disagree on the alphabet".into()));
    }
    let mut states = gadget_states(k);
    states.push("r1'".into());
    let mut seen: HashSet<String> = states.iter().cloned().collect();
    for a in nfas {
        for q in &a.states {
            if !seen.insert(q.clone()) {
                return Err(Error::Structure(format!("state `{q}` is not disjoint")));
            }
            states.push(q.clone());
        }
    }
    let mut b = Builder {
        states,
        caps: Vec::new(),
    };
    let keep: Vec<(String, String, ExtNat)> = std::iter::once("s".to_string())
        .chain((1..=k).map(t))
        .map(|q| (q.clone(), q, Omega))
        .collect();

    for i in 1..=k {
        let (ea, eb) = gadget_entries(k, i);
        b.cap(format!("a{i}"), &borrow(&ea));
        if i == 1 {
            let mut e = keep.clone();
            e.extend((2..=k).map(|j| (r(j), r(j), Fin(1))));
            e.push(("r1'".into(), t(1), Fin(1)));
            b.cap("b1".into(), &borrow(&e));
        } else {
            b.cap(format!("b{i}"), &borrow(&eb));
        }
    }

    let mut init = keep.clone();
    for (i, a) in nfas.iter().enumerate() {
        init.extend(a.initial.iter().map(|&q| (r(i + 1), a.states[q].clone(), Fin(1))));
    }
    b.cap("init".into(), &borrow(&init));

    let mut fin = keep.clone();
    for (i, a) in nfas.iter().enumerate() {
        let to = if i == 0 { "r1'".to_string() } else { r(i + 1) };
        fin.extend(a.finals.iter().map(|&q| (a.states[q].clone(), to.clone(), Fin(1))));
    }
    b.cap("fin".into(), &borrow(&fin));

    for (l, sigma) in first.alphabet.iter().enumerate() {
        let mut e = keep.clone();
        for a in nfas {
            e.extend(
                a.transitions
                    .iter()
                    .filter(|&&(_, x, _)| x == l)
                    .map(|&(p, _, q)| (a.states[p].clone(), a.states[q].clone(), Fin(1))),
            );
        }
        b.cap(format!("c_{sigma}"), &borrow(&e));
    }
    simple_instance(b.states, b.caps, k)
}

/// Capacity word moving one token from `s` to `tk` when `n` tokens sit in
/// `s`; `inner` replaces the innermost `a1 b1`.
fn one_token_word(k: usize, n: usize, inner: &[String]) -> Vec<String> {
    fn block(i: usize, k: usize, n: usize, inner: &[String], out: &mut Vec<String>) {
        if i == 1 {
            out.extend(inner.iter().cloned());
            return;
        }
        out.push(format!("a{i}"));
        let reps = (n + i).saturating_sub(k + 1);
        for _ in 0..reps {
            block(i - 1, k, n, inner, out);
        }
        out.push(format!("b{i}"));
    }
    let mut out = Vec::new();
    block(k, k, n, inner, &mut out);
    out
}

fn full_word(k: usize, n: usize, inner: &[String]) -> Vec<String> {
    (1..=n).rev().flat_map(|m| one_token_word(k, m, inner)).collect()
}

/// Capacity word sending `n·s` to `n·tk` in the gadget with `k` levels.
pub fn gadget_word(k: usize, n: usize) -> Vec<String> {
    full_word(k, n, &["a1".into(), "b1".into()])
}

/// Capacity word sending `n·s` to `n·tk` in the reduction instance, given
/// a word `u` accepted by every automaton.
pub fn reduction_word(k: usize, n: usize, alphabet: &[String], u: &[usize]) -> Vec<String> {
    let mut inner = vec!["a1".to_string(), "init".to_string()];
    inner.extend(u.iter().map(|&l| format!("c_{}", alphabet[l])));
    inner.push("fin".into());
    inner.push("b1".into());
    full_word(k, n, &inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{flows_along, goes_to, Configuration};
    use crate::wqo::DownSet;

    fn nfa(prefix: &str, n: usize, letters: usize, init: &[usize], fin: &[usize], tr: &[(usize, usize, usize)]) -> Nfa {
        Nfa::new(
            (0..n).map(|i| format!("{prefix}{i}")).collect(),
            ["x", "y"][..letters].iter().map(|s| s.to_string()).collect(),
            init.to_vec(),
            fin.to_vec(),
            tr.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn gadget_capacities() {
        let g = gen_gadget_k(1).unwrap();
        let s = g.state_index("s").unwrap();
        let r1 = g.state_index("r1").unwrap();
        let t1 = g.state_index("t1").unwrap();
        let a1 = g.capacity("a1").unwrap();
        let b1 = g.capacity("b1").unwrap();
        assert_eq!(a1.get(s, r1), Fin(1));
        assert_eq!(a1.get(s, s), Omega);
        assert_eq!(a1.get(t1, t1), Omega);
        assert_eq!(b1.get(s, s), Omega);
        assert_eq!(b1.get(r1, t1), Fin(1));
        assert_eq!(b1.get(s, r1), Fin(0));

        let g = gen_gadget_k(3).unwrap();
        assert_eq!(g.capacities().len(), 6);
        let idx = |x: &str| g.state_index(x).unwrap();
        let b2 = g.capacity("b2").unwrap();
        assert_eq!(b2.get(idx("t1"), idx("s")), Omega);
        assert_eq!(b2.get(idx("r3"), idx("r3")), Fin(1));
        assert_eq!(b2.get(idx("s"), idx("s")), Fin(0));
        assert_eq!(g.capacity("a2").unwrap().get(idx("t1"), idx("t1")), Fin(0));
        assert!(gen_gadget_k(0).is_err());
    }

    #[test]
    fn gadget_generation_is_deterministic() {
        assert_eq!(gen_gadget_k(2).unwrap(), gen_gadget_k(2).unwrap());
    }

    #[test]
    fn two_level_word_moves_one_token() {
        let g = gen_gadget_k(2).unwrap();
        let w = one_token_word(2, 2, &["a1".into(), "b1".into()]);
        assert_eq!(w, ["a2", "a1", "b1", "b2"]);
        let caps: Vec<&Capacity> = w.iter().map(|x| g.capacity(x).unwrap()).collect();
        let n = g.num_states();
        let start = Configuration::unit(n, 0, 2);
        let mut end = vec![0; n];
        end[0] = 1;
        end[g.state_index("t2").unwrap()] = 1;
        let target = DownSet::ideal(ExtVec::from_finite(&end));
        let flows = flows_along(&start, &caps, &target).unwrap().unwrap();
        assert_eq!(goes_to(&start, &flows).unwrap().0, end);
    }

    #[test]
    fn intersection_bruteforce() {
        let all = |p| nfa(p, 1, 1, &[0], &[0], &[(0, 0, 0)]);
        assert!(nfa_intersect_bruteforce(&[all("A"), all("B")]).unwrap());
        // {x} and {xx}
        let one = nfa("A", 2, 1, &[0], &[1], &[(0, 0, 1)]);
        let two = nfa("B", 3, 1, &[0], &[2], &[(0, 0, 1), (1, 0, 2)]);
        assert!(!nfa_intersect_bruteforce(&[one.clone(), two]).unwrap());
        let dead = nfa("C", 2, 1, &[0], &[1], &[(0, 0, 0)]);
        assert!(!nfa_intersect_bruteforce(&[dead]).unwrap());
        assert!(one.accepts(&[0]) && !one.accepts(&[0, 0]));
    }

    #[test]
    fn reduction_shape() {
        let a = nfa("A", 1, 1, &[0], &[0], &[(0, 0, 0)]);
        let b = nfa("B", 1, 1, &[0], &[0], &[(0, 0, 0)]);
        let inst = gen_nfa_reduction(&[a.clone(), b]).unwrap();
        assert_eq!(inst.num_states(), 5 + 1 + 2);
        let names: Vec<&str> = inst.capacity_names().iter().map(String::as_str).collect();
        assert_eq!(names, ["a1", "b1", "a2", "b2", "init", "fin", "c_x"]);
        let idx = |x: &str| inst.state_index(x).unwrap();
        let fin = inst.capacity("fin").unwrap();
        assert_eq!(fin.get(idx("A0"), idx("r1'")), Fin(1));
        assert_eq!(fin.get(idx("B0"), idx("r2")), Fin(1));
        let b1 = inst.capacity("b1").unwrap();
        assert_eq!(b1.get(idx("r1'"), idx("t1")), Fin(1));
        assert_eq!(b1.get(idx("r1"), idx("t1")), Fin(0));
        assert!(matches!(gen_nfa_reduction(&[a.clone(), a]), Err(Error::Structure(_))));
    }

    #[test]
    fn reduction_word_reaches_goal() {
        let a = nfa("A", 2, 2, &[0], &[1], &[(0, 0, 1), (1, 1, 1)]);
        let b = nfa("B", 2, 2, &[0], &[1], &[(0, 0, 0), (0, 0, 1)]);
        let inst = gen_nfa_reduction(&[a.clone(), b.clone()]).unwrap();
        let alphabet = a.alphabet.clone();
        let u = nfa_intersection_word(&[a, b]).unwrap().unwrap();
        assert_eq!(u, vec![0]);
        for n in 1..=3 {
            let w = reduction_word(2, n, &alphabet, &u);
            let caps: Vec<&Capacity> = w.iter().map(|x| inst.capacity(x).unwrap()).collect();
            let start = Configuration::unit(inst.num_states(), 0, n as u64);
            let target = DownSet::ideal(inst.target().clone());
            assert!(flows_along(&start, &caps, &target).unwrap().is_some(), "n = {n}");
        }
    }
}
