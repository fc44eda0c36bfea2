//! Words, presentations, region labels and the triviality oracle.

pub mod abelian;
pub mod coset;
pub mod presentation;
pub mod trivial;
pub mod word;

pub use abelian::{smith_invariants, Lattice};
pub use coset::{enumerate_cosets, CosetTable};
pub use presentation::{
    presentation, rebase, region_words, u_relator, v_relator, GroupError, GroupPresentation, RegionLabeling,
};
pub use trivial::{
    conjugate_schedule, invert_schedule, is_c_prime_sixth, is_trivial_word, join_schedules, relator_conjugate,
    schedule_product, shorten, verify, Budget, Certificate, Factor, TriValue,
    TrivialityOracle,
};
pub use word::{Letter, Word, WordParseError, GEN_NAMES};
