//! Std companion to `pxharm-core`: configs, reports, CSV/SVG output and the
//! acceptance suite.

pub mod acceptance;
pub mod config;
pub mod csv;
pub mod parse;
pub mod pipeline;
pub mod plot;
pub mod report;
