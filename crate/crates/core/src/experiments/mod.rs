//! Seeded experiments: the CPD/Waring ratio study, the fast-path benchmark
//! and the randomized property suite.

pub mod bench;
pub mod ratio;
pub mod sampling;
pub mod verify;

pub use bench::{relative_difference, speed_benchmark, BenchReport};
pub use ratio::{
    max_rank_bound, ratio_experiment, ExperimentConfig, RankRule, RatioOutcome, RatioRecord, RatioSummary,
    RECORDS_HEADER, SUMMARY_HEADER,
};
pub use sampling::{
    derive_seed, random_orthonormal, random_psrd, random_q_wd, random_unit, random_waring, rng_from_seed,
};
pub use verify::{check_names, verify_suite, CheckOutcome, VerifyConfig, VerifyReport};
