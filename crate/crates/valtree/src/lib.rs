//! Exporters, JSON reports, parallel verification and the command line for
//! p-adic valuation trees. The mathematics lives in [`valtree_core`].

pub mod cli;
pub mod export;
pub mod parallel;
pub mod report;

pub use valtree_core as core;
