//! Harness library behind the `ctrlmatch` binary: instance file loading,
//! the reduction registry, seeded instance generators, fuzz/equivalence
//! campaigns, and benchmark timing. Everything the binary does is callable
//! from here, so integration tests drive the same code paths.

pub mod commands;
pub mod families;
pub mod gen;
pub mod report;

pub use commands::{
    cmd_bench, cmd_fuzz, cmd_oracle, cmd_reduce, cmd_solve, load_instance, BenchRequest, CliError,
    FuzzRequest, InstanceFile, SolveRequest,
};
pub use families::{Family, Rule, Source};
pub use report::RunReport;
