//! Anti-powers in infinite binary words.
//!
//! A `k`-anti-power is a word made of `k` consecutive, pairwise distinct
//! blocks of equal length. This crate provides:
//!
//! * [`word`]: finite words, lazily generated infinite words with 1-based
//!   factor access, borders and occurrence search;
//! * [`morphism`]: uniform binary morphisms, their fixed points, an exact
//!   aperiodicity / uniform-recurrence classifier and factor sets;
//! * [`antipower`]: the definitional check, witnesses and the γ function;
//! * [`construct`]: a 5-anti-power builder for aperiodic recurrent words and
//!   a linear-block-length `k`-anti-power builder for uniformly recurrent
//!   aperiodic uniform-morphic words;
//! * [`verify`]: scanners that replay the underlying structural lemmas on
//!   long prefixes;
//! * [`cli`]: the `antipower` command-line tool.

pub mod antipower;
pub mod cli;
pub mod construct;
pub mod error;
pub mod morphism;
pub mod verify;
pub mod word;

pub use antipower::{gamma, is_k_anti_power, verify_witness, AntiPowerWitness, ConstructionTag};
pub use construct::{
    build_five_anti_power, build_morphic_anti_power, find_occurrence_pattern, find_spaced_factor,
    recurrence_constant, FiveAntiPower, MorphicAntiPowerBuilder, RecurrenceConstant,
};
pub use error::{Error, Result};
pub use morphism::{Classification, Reason, UniformMorphism};
pub use word::{FiniteWord, WordStream, DEFAULT_HORIZON};
