//! IO companion to `profinite-core`: file formats, expression parsers,
//! command implementations and deterministic run reports.

pub mod commands;
pub mod formats;
pub mod parse;
pub mod report;
