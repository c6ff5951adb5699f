//! Instance generators.

mod examples;
mod nfa;
mod random;

pub use examples::{example1, example2, example3, gen_example};
pub use nfa::{
    gadget_word, gen_gadget_k, gen_nfa_reduction, nfa_intersect_bruteforce, nfa_intersection_word,
    reduction_word, Nfa,
};
pub use random::{random_mdp, random_nfa};
