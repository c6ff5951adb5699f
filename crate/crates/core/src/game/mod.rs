//! Configuration games at a fixed population size.

mod fixed;
mod graph;

pub use fixed::{
    buchi_winning_all, solve_fixed_n, solve_game, sweep, win_i_fixed_n, win_levels_fixed_n, Arena,
    BuchiSolution, GameVerdict, DEFAULT_ARENA_BUDGET,
};
pub use graph::GameGraph;
