//! SHACL core shapes in Turtle.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::rdf::{node_shapes, shape_name, NodeShape, Value, EX, XSD};
use super::{append_comments, capitalize, Coverage, EmitterOutput};
use crate::schema::Schema;

const RULE: &str = "#################################################################";

fn banner(out: &mut String, title: &str) {
    let _ = writeln!(out, "{RULE}\n# {title}\n{RULE}");
}

fn render_shape(out: &mut String, schema: &Schema, s: &NodeShape) {
    let title = if schema.is_relationship(&s.class) {
        alloc::format!("{} relationship node", s.class)
    } else {
        s.class.clone()
    };
    banner(out, &title);
    let _ = writeln!(out, "ex:{}\n    a sh:NodeShape ;", shape_name(schema, &s.class));
    let _ = write!(out, "    sh:targetClass ex:{}", s.class);
    for p in &s.properties {
        out.push_str(" ;\n    sh:property [\n");
        if p.inverse {
            let _ = writeln!(out, "        sh:path [ sh:inversePath ex:{} ] ;", p.path);
        } else {
            let _ = writeln!(out, "        sh:path ex:{} ;", p.path);
        }
        match &p.value {
            Value::String => out.push_str("        sh:datatype xsd:string ;\n"),
            Value::Node(c) => {
                let _ = writeln!(out, "        sh:class ex:{c} ;");
            }
        }
        let _ = writeln!(out, "        sh:minCount {} ;", p.min);
        if p.max_one {
            out.push_str("        sh:maxCount 1 ;\n");
        }
        out.push_str("    ]");
    }
    out.push_str(" .\n");
}

fn render_unique(out: &mut String, attr: &str) {
    out.push('\n');
    banner(out, &alloc::format!("Unicity of {attr} globally"));
    let _ = writeln!(out, "ex:{}TargetShape\n    a sh:NodeShape ;", capitalize(attr));
    let _ = writeln!(out, "    sh:targetObjectsOf ex:{attr} ;");
    out.push_str("    sh:property [\n");
    let _ = writeln!(out, "        sh:path [ sh:inversePath ex:{attr} ] ;");
    out.push_str("        sh:maxCount 1 ;\n    ] .\n");
}

pub fn emit_shacl(schema: &Schema) -> EmitterOutput {
    let mut cov = Coverage::new(schema);
    let shapes = node_shapes(schema, &mut cov, true);
    let mut artifact = String::new();
    let _ = writeln!(artifact, "@prefix sh: <http://www.w3.org/ns/shacl#> .");
    let _ = writeln!(artifact, "@prefix xsd: <{XSD}> .");
    let _ = writeln!(artifact, "@prefix ex: <{EX}> .");
    let mut seen: Vec<&str> = Vec::new();
    for s in &shapes {
        artifact.push('\n');
        render_shape(&mut artifact, schema, s);
        for a in &s.unique_attributes {
            if !seen.contains(&a.as_str()) {
                seen.push(a);
                render_unique(&mut artifact, a);
            }
        }
    }
    let unexpressed = cov.finish();
    append_comments(&mut artifact, "# ", &unexpressed);
    EmitterOutput { artifact, unexpressed }
}
