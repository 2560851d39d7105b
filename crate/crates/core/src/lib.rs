//! Toolchain for turning UML use-case and class models into a single
//! thinging-machine (TM) static model, overlaying event regions on it,
//! and working with the resulting behavior graph.
//!
//! Pipeline: [`uml`] parses the inputs, [`transform`] builds and merges
//! the TM fragments, [`tm`] validates and serializes static models,
//! [`events`] handles regions, method paths, and simulation, and
//! [`render`] emits Graphviz DOT.

pub mod events;
pub mod lexer;
pub mod render;
pub mod report;
pub mod tm;
pub mod transform;
pub mod uml;

pub use lexer::ParseError;
pub use report::{Code, Finding, Severity, ValidationReport};
