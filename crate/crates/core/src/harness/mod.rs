//! Test-bed plumbing: prime and semiprime generation, the benchmark runner
//! and its CSV output, and the worked-example verifier.

pub mod bench;
pub mod prime;
pub mod verify;

pub use bench::{
    gen_semiprime, measure, prediction_accuracy, run_bench, write_csv, BenchmarkRecord, BenchmarkSpec, RunStatus,
    Semiprime,
};
pub use prime::{gen_prime, is_probable_prime, next_prime};
pub use verify::{verify_example, Check, VerifyReport};
