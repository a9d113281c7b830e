//! Graph pattern matching over in-memory property graphs.

pub mod graph;
pub mod syntax;
pub mod analyze;
pub mod eval;
pub mod oracle;
pub mod output;
pub mod cli;
