//! Graphviz rendering of the shape graph.

use alloc::string::String;
use core::fmt::Write;

use crate::schema::{ConstraintStatement, Schema, ShapeStatement};

/// Entities are boxes, attributes ellipses and relationships hexagons.
/// Role edges carry the role name; `Isa` edges are dashed.
pub fn emit_dot(schema: &Schema) -> String {
    let mut out = String::from("digraph schema {\n");
    for s in schema.shape() {
        let (name, shape) = match s {
            ShapeStatement::Entity(e) => (e, "box"),
            ShapeStatement::Relationship(r) => (r, "hexagon"),
            ShapeStatement::Attribute { attr, .. } => (attr, "ellipse"),
            ShapeStatement::Role { .. } => continue,
        };
        let _ = writeln!(out, "    \"{name}\" [shape={shape}];");
    }
    for s in schema.shape() {
        match s {
            ShapeStatement::Attribute { owner, attr } => {
                let _ = writeln!(out, "    \"{owner}\" -> \"{attr}\" [arrowhead=none];");
            }
            ShapeStatement::Role { rel, role, entity } => {
                let _ = writeln!(out, "    \"{rel}\" -> \"{entity}\" [label=\"{role}\", arrowhead=none];");
            }
            _ => {}
        }
    }
    for c in schema.constraints() {
        if let ConstraintStatement::Isa { sub, sup } = c {
            let _ = writeln!(out, "    \"{sub}\" -> \"{sup}\" [style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}
