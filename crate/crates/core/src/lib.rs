//! Data model, well-formedness checking, pattern evaluation, validation,
//! and schema compilation for KG-ER conceptual schemas.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the
//! command-line tool, and IO live in the `kger` crate.

#![no_std]

extern crate alloc;

pub mod diagnostic;
pub mod emit;
pub mod fol;
pub mod graph;
pub mod hierarchy;
pub mod pattern;
pub mod query;
pub mod schema;
pub mod semantics;
pub mod validate;
pub mod value;
pub mod wf;

pub use diagnostic::{Code, Diagnostic, Severity};
pub use graph::{GraphBuilder, KnowledgeGraph};
pub use hierarchy::{ancestors_of, roots_of};
pub use pattern::Pattern;
pub use schema::{build_schema, ConstraintStatement, Schema, ShapeStatement, Statement, Vocabulary};
pub use value::{NodeId, Term, Value, ValueKind};
