//! Groups of homeomorphisms of path spaces given by finite rewriting rules:
//! evaluation, activity growth, Bratteli diagrams, Schreier graphs and
//! recurrence diagnostics.

pub mod activity;
pub mod alphabet;
pub mod bratteli;
pub mod caps;
pub mod cli;
pub mod engine;
pub mod error;
pub mod machine;
pub mod ray;
pub mod recurrence;
pub mod schreier;
pub mod text;
pub mod triviality;
pub mod word;
pub mod zoo;

pub use alphabet::{Alphabet, Prev, Subshift, Sym};
pub use caps::Caps;
pub use engine::{apply_word, section_of, Pipeline};
pub use error::{Error, Result};
pub use machine::{MachineBuilder, MachineDef, Rule};
pub use word::{GenId, GroupWord, Letter};
