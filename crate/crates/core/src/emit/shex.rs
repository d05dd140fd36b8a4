//! ShEx compact syntax.

use alloc::string::String;
use core::fmt::Write;

use super::rdf::{node_shapes, shape_name, Value, EX, XSD};
use super::{append_comments, Coverage, EmitterOutput};
use crate::schema::Schema;

fn cardinality(min: u32, max_one: bool) -> &'static str {
    match (min > 0, max_one) {
        (true, true) => "",
        (true, false) => "+",
        (false, true) => "?",
        (false, false) => "*",
    }
}

pub fn emit_shex(schema: &Schema) -> EmitterOutput {
    let mut cov = Coverage::new(schema);
    let shapes = node_shapes(schema, &mut cov, false);
    let mut artifact = String::new();
    let _ = writeln!(artifact, "PREFIX ex: <{EX}>");
    let _ = writeln!(artifact, "PREFIX xsd: <{XSD}>");
    for s in &shapes {
        let kind = if schema.is_relationship(&s.class) { "Relationship" } else { "Entity" };
        let _ = write!(artifact, "\n# {kind}: {}\nex:{} {{", s.class, shape_name(schema, &s.class));
        if s.properties.is_empty() {
            artifact.push_str("}\n");
            continue;
        }
        for (i, p) in s.properties.iter().enumerate() {
            let caret = if p.inverse { "^" } else { "" };
            let value = match &p.value {
                Value::String => String::from("xsd:string"),
                Value::Node(c) => alloc::format!("@ex:{}", shape_name(schema, c)),
            };
            let sep = if i + 1 < s.properties.len() { " ;" } else { "" };
            let _ = write!(artifact, "\n  {caret}ex:{} {value}{}{sep}", p.path, cardinality(p.min, p.max_one));
        }
        artifact.push_str("\n}\n");
    }
    let unexpressed = cov.finish();
    append_comments(&mut artifact, "# ", &unexpressed);
    EmitterOutput { artifact, unexpressed }
}
