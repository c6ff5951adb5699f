use proptest::prelude::*;

use super::*;
use crate::automata::{eval_distance, witness_search};
use crate::flow::{Configuration, EdgeSet};
use crate::gadgets::{gen_gadget_k, gen_nfa_reduction, Nfa};
use crate::wqo::ev;

fn named(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

fn instance(n: usize, caps: Vec<Capacity>, source: ExtVec, target: ExtVec) -> SfpInstance {
    let caps = caps
        .into_iter()
        .enumerate()
        .map(|(i, c)| (format!("c{i}"), c))
        .collect();
    SfpInstance::new(named(n), caps, source, target).unwrap()
}

#[test]
fn gadget_one_automaton() {
    let g = gen_gadget_k(1).unwrap();
    let a = build_simple_sfp_automaton(&g).unwrap();
    assert!(a.num_states() <= 8);
    let w = g.word(&["a1", "b1"]).unwrap();
    assert_eq!(eval_distance(&a, &w).unwrap(), Fin(1));
    assert_eq!(phi(&g, &w).unwrap(), Fin(1));
    assert_eq!(eval_distance(&a, &[]).unwrap(), Fin(0));
    let pumped: Vec<usize> = w.iter().cycle().take(2 * 5).copied().collect();
    assert_eq!(eval_distance(&a, &pumped).unwrap(), Fin(5));
    assert!(witness_search(&a, 5, 10_000).unwrap().is_some());
}

#[test]
fn powerset_size_is_bounded() {
    let e = EdgeSet::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 0), (3, 3)]);
    let inst = instance(
        4,
        vec![Capacity::omega_on(&e)],
        ExtVec::unit(4, 0, Omega),
        ExtVec::unit(4, 3, Omega),
    );
    assert!(build_simple_sfp_automaton(&inst).unwrap().num_states() <= 16);
}

#[test]
fn source_shape_is_checked() {
    let inst = instance(2, vec![], ev(&[Omega, Omega]), ExtVec::unit(2, 1, Omega));
    assert!(matches!(build_simple_sfp_automaton(&inst), Err(Error::Contract(_))));
    let inst = instance(2, vec![], ev(&[Omega, Fin(1)]), ExtVec::unit(2, 1, Omega));
    assert!(matches!(decide_simple_sfp(&inst), Err(Error::Contract(_))));
}

#[test]
fn gadgets_are_yes_instances() {
    for k in 1..=3 {
        assert!(decide_simple_sfp(&gen_gadget_k(k).unwrap()).unwrap(), "k = {k}");
    }
}

#[test]
fn zero_capacities_are_no_instances() {
    let inst = instance(
        2,
        vec![Capacity::zero(2)],
        ExtVec::unit(2, 0, Omega),
        ExtVec::unit(2, 1, Omega),
    );
    assert!(!decide_simple_sfp(&inst).unwrap());
    let a = build_simple_sfp_automaton(&inst).unwrap();
    assert!(!crate::automata::limitedness(&a).unwrap().is_unbounded());
}

fn single_word_nfa(prefix: &str, word: &[usize]) -> Nfa {
    let n = word.len() + 1;
    Nfa::new(
        (0..n).map(|i| format!("{prefix}{i}")).collect(),
        vec!["x".into(), "y".into()],
        vec![0],
        vec![n - 1],
        word.iter().enumerate().map(|(i, &l)| (i, l, i + 1)).collect(),
    )
    .unwrap()
}

#[test]
fn disjoint_languages_give_no() {
    let inst = gen_nfa_reduction(&[single_word_nfa("A", &[0]), single_word_nfa("B", &[1, 1])]).unwrap();
    assert!(!decide_simple_sfp(&inst).unwrap());
    let t = DownSet::ideal(inst.target().clone());
    let s = inst.simple_source().unwrap();
    let c1 = Configuration::unit(inst.num_states(), s, 1);
    let c2 = Configuration::unit(inst.num_states(), s, 2);
    // a single token never needs the automata
    assert!(reach_bfs(&c1, inst.capacities(), &t).unwrap().is_some());
    assert!(reach_bfs(&c2, inst.capacities(), &t).unwrap().is_none());
}

#[test]
fn ideal_inclusion_examples() {
    let g = gen_gadget_k(1).unwrap();
    let n = g.num_states();
    let omega_s = ExtVec::unit(n, 0, Omega);
    let yes = decide_ideal_inclusion(&omega_s, g.capacities(), g.target()).unwrap();
    assert!(yes);
    assert_eq!(yes, decide_simple_sfp(&g).unwrap());
    let two_s = ExtVec::unit(n, 0, Fin(2));
    assert!(decide_ideal_inclusion(&two_s, g.capacities(), g.target()).unwrap());

    let zero = [Capacity::zero(2)];
    let one_s = ExtVec::unit(2, 0, Fin(1));
    assert!(!decide_ideal_inclusion(&one_s, &zero, &ExtVec::unit(2, 1, Omega)).unwrap());
}

#[test]
fn ideal_inclusion_mixes_finite_and_omega() {
    // one token at r1 blocks a1 from pushing further tokens into r1
    let g = gen_gadget_k(1).unwrap();
    let x = ev(&[Omega, Fin(1), Fin(0)]);
    assert!(decide_ideal_inclusion(&x, g.capacities(), g.target()).unwrap());
    let x = ev(&[Omega, Fin(2), Fin(0)]);
    assert!(!decide_ideal_inclusion(&x, g.capacities(), g.target()).unwrap());
    let x = ev(&[Omega, Fin(0), Omega]);
    assert!(decide_ideal_inclusion(&x, g.capacities(), g.target()).unwrap());
}

#[test]
fn downset_examples() {
    let t = ExtVec::unit(2, 1, Omega);
    let d = sfp_downset(&[Capacity::zero(2)], &t, 10_000).unwrap();
    assert_eq!(d, DownSet::ideal(t.clone()));
    let loops = Capacity::omega_on(&EdgeSet::from_pairs(2, &[(0, 0), (1, 1)]));
    assert_eq!(sfp_downset(&[loops], &t, 10_000).unwrap(), DownSet::ideal(t));

    let g = gen_gadget_k(1).unwrap();
    let d = sfp_downset(g.capacities(), g.target(), 10_000).unwrap();
    assert!(d.generators().iter().any(|x| x.0[0].is_omega() && x.0[2].is_omega()));
    // every vector with at most 3 tokens per state agrees with search
    let target = DownSet::ideal(g.target().clone());
    for v in (0..64u64).map(|m| vec![m % 4, m / 4 % 4, m / 16]) {
        let c = Configuration(v.clone());
        let reach = reach_bfs(&c, g.capacities(), &target).unwrap().is_some();
        assert_eq!(d.contains(&v), reach, "{v:?}");
    }
}

#[test]
fn brute_phi_examples() {
    let g = gen_gadget_k(1).unwrap();
    let w = g.word(&["a1", "b1"]).unwrap();
    assert!(brute_phi(&g, &w, 1).unwrap());
    assert!(!brute_phi(&g, &w, 2).unwrap());
    assert!(brute_phi(&g, &w, 0).unwrap());
    assert!(brute_phi(&g, &[], 0).unwrap());
}

fn cap_entry() -> impl Strategy<Value = ExtNat> {
    prop_oneof![4 => (0u64..=2).prop_map(Fin), 1 => Just(Omega)]
}

fn random_caps(n: usize, count: usize) -> impl Strategy<Value = Vec<Capacity>> {
    prop::collection::vec(
        prop::collection::vec(prop_oneof![2 => Just(Fin(0)), 3 => cap_entry()], n * n),
        count,
    )
    .prop_map(move |cs| cs.into_iter().map(|e| Capacity::from_ext(n, ExtVec(e)).unwrap()).collect())
}

fn random_instance() -> impl Strategy<Value = (SfpInstance, Vec<usize>)> {
    (2usize..=4, 1usize..=3).prop_flat_map(|(n, m)| {
        (
            random_caps(n, m),
            prop::collection::vec(prop_oneof![Just(Fin(0)), Just(Fin(1)), Just(Omega)], n),
            0..n,
            prop::collection::vec(0..m, 0..=5),
        )
            .prop_map(move |(caps, target, s, word)| {
                (instance(n, caps, ExtVec::unit(n, s, Omega), ExtVec(target)), word)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn automaton_value_is_max_flow((inst, word) in random_instance()) {
        let a = build_simple_sfp_automaton(&inst).unwrap();
        let caps: Vec<&Capacity> = word.iter().map(|&i| &inst.capacities()[i]).collect();
        let flow = layered_max_flow(inst.source().entries(), &caps, inst.target().entries());
        let cut = layered_min_cut(inst.source().entries(), &caps, inst.target().entries());
        prop_assert_eq!(flow, cut);
        prop_assert_eq!(eval_distance(&a, &word).unwrap(), flow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn inclusion_agrees_with_populations(
        caps in random_caps(3, 2),
        x in prop::collection::vec(prop_oneof![Just(Fin(0)), Just(Fin(1)), Just(Omega)], 3),
        t in 0usize..3,
    ) {
        let target = ExtVec::unit(3, t, Omega);
        let x = ExtVec(x);
        let yes = decide_ideal_inclusion(&x, &caps, &target).unwrap();
        let down = DownSet::ideal(target.clone());
        let reach = |n: u64| reach_bfs(&Configuration(x.instantiate(n)), &caps, &down).unwrap().is_some();
        if yes {
            for n in 0..=5 {
                prop_assert!(reach(n), "n = {}", n);
            }
        } else {
            prop_assert!((0..=8).any(|n| !reach(n)));
        }
    }
}
