//! Recodings between column structures, the switching reduction, and the
//! adversary constructions against weak truth-table reductions.

pub mod adversary;
pub mod corpus;
mod recode;
pub mod switching;

pub use adversary::{
    adversary_btt, adversary_for, adversary_linear, adversary_positive, AdversaryConfig,
    AdversaryOutcome, AdversaryWitness, Certificate, Parity, WitnessCheck,
};
pub use recode::{either_encode, some_to_many, some_to_many_one};
pub use switching::{recheck_triggers, suffix_agrees, switching_reduction, Arity, SwitchEvent, SwitchRun, SwitchTrace};
