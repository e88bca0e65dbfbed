//! Benchmark harness for the conditional-gradient library: experiment
//! catalog, configuration format, and the acceptance battery.

pub mod config;
pub mod experiments;
pub mod instances;
pub mod selftest;
pub mod output;
