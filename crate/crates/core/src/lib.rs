pub mod automata;
pub mod combinatorics;
pub mod control;
pub mod corpus;
pub mod error;
pub mod flow;
pub mod gadgets;
pub mod game;
pub mod io;
pub mod mdp;
pub mod sfp;
pub mod wqo;

pub use error::{Error, Result};
