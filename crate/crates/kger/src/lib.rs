//! Schema and graph file formats, report rendering, and the command-line
//! front end for `kger-core`.

pub mod cli;
pub mod graph_file;
pub mod report;
pub mod text;

pub use graph_file::{graph_to_json, load_graph};
pub use text::{parse_schema, parse_statements, serialize_schema, ParseError, SchemaError};
