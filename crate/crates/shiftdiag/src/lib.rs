//! Markov diagrams for binary minimal subshifts.
//!
//! The crate scans exact prefixes of infinite words into finite language
//! tables, decides which blocks are *significant* (dropping their first
//! letter strictly enlarges the follower set), and assembles the
//! depth-bounded Markov diagram whose vertices are the significant blocks.
//! Rooted paths of the diagram project bijectively onto language blocks,
//! which yields exact block-counting by dynamic programming.
//!
//! Three constructions are provided and cross-checked against each other:
//! a generic table-driven builder, a closed-form builder for Sturmian
//! systems driven by continued-fraction directives, and a rule-based
//! builder for the Prouhet-Thue-Morse system. The [`morse`] module adds
//! 1-cuttings, ancestor chains, and a recognizability-index check for the
//! doubling substitution.

pub mod block;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod generators;
pub mod language;
pub mod morse;
pub mod paths;
pub mod significance;

pub use block::{Block, Letter};
pub use diagram::{build_generic, build_morse, build_sturmian, MarkovDiagram};
pub use error::{Error, Result};
pub use language::{scan_language, LanguageTable};
