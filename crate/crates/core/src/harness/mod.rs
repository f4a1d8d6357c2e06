//! Convergence studies, reference-table regression and problem description files.

pub mod config;
pub mod expr;
pub mod golden;
pub mod study;
