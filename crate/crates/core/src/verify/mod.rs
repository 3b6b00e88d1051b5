//! Exhaustive checks of the entropy and probing inequalities behind the
//! security bound, over key spaces small enough to enumerate.

mod bias;
mod checks;
mod main_lemma;
mod report;
mod suites;
mod tables;

pub use bias::{bias_estimate, BiasResult, KeyLaw, MIN_BIAS_TRIALS};
pub use checks::{
    decomposition_check, leakage_entropy_check, parity_biases, parseval_check, DecompositionResult,
    LeakageEntropyResult, ParsevalResult, MAX_PARSEVAL_BITS,
};
pub use main_lemma::{main_lemma_check, MainLemmaResult, MAX_ENUM_KEY_BITS, MAX_ENUM_WORK};
pub use report::{CheckReport, Relation, Summary};
pub use suites::{run_all, run_suite, SUITE_NAMES};
pub use tables::{DistributionTable, LeakageTable, MAX_TABLE_BITS};
