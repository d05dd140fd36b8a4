//! JSON graph files with four sections: `entities`, `relationships`,
//! `attributes`, and `roles`.

use serde::{Deserialize, Serialize};
use serde_json::Number;

use kger_core::{Code, Diagnostic, GraphBuilder, KnowledgeGraph, Schema, Value, ValueKind};

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(default)]
    entities: Vec<EntityRecord>,
    #[serde(default)]
    relationships: Vec<RelationshipRecord>,
    #[serde(default)]
    attributes: Vec<AttributeRecord>,
    #[serde(default)]
    roles: Vec<RoleRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityRecord {
    id: String,
    types: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationshipRecord {
    id: String,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeRecord {
    owner: String,
    name: String,
    value: serde_json::Value,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoleRecord {
    rel: String,
    role: String,
    target: String,
}

fn syntax(subject: impl Into<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::GraphSyntax, subject, message)
}

fn to_value(v: &serde_json::Value) -> Option<Value> {
    match v {
        serde_json::Value::String(s) => Some(Value::text(s.as_str())),
        serde_json::Value::Bool(b) => Some(Value::boolean(*b)),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Some(Value::integer(i)),
            None => Value::decimal(&n.to_string()).ok(),
        },
        _ => None,
    }
}

fn from_value(v: &Value) -> serde_json::Value {
    match v.kind() {
        ValueKind::Text => serde_json::Value::String(v.lexical().into()),
        ValueKind::Boolean => serde_json::Value::Bool(v.lexical() == "true"),
        ValueKind::Integer | ValueKind::Decimal => v
            .lexical()
            .parse::<Number>()
            .map(serde_json::Value::Number)
            .unwrap_or_else(|_| serde_json::Value::String(v.lexical().into())),
    }
}

/// Reads a graph file against `schema`.
pub fn load_graph(source: &str, schema: &Schema) -> Result<KnowledgeGraph, Vec<Diagnostic>> {
    let file: GraphFile = serde_json::from_str(source)
        .map_err(|e| vec![syntax(format!("line {} column {}", e.line(), e.column()), e.to_string())])?;
    let mut b = GraphBuilder::new(schema);
    let mut errors = Vec::new();
    for e in &file.entities {
        b.add_entity(&e.id, e.types.iter().map(String::as_str));
    }
    for r in &file.relationships {
        b.add_relationship(&r.id, &r.ty);
    }
    for a in &file.attributes {
        match to_value(&a.value) {
            Some(v) => {
                b.add_attribute(&a.owner, &a.name, v);
            }
            None => errors.push(syntax(
                format!("{} {}", a.owner, a.name),
                format!("`{}` is not a string, number, or boolean", a.value),
            )),
        }
    }
    for r in &file.roles {
        b.add_role(&r.rel, &r.role, &r.target);
    }
    match b.build() {
        Ok(g) if errors.is_empty() => Ok(g),
        Ok(_) => Err(errors),
        Err(mut diags) => {
            errors.append(&mut diags);
            Err(errors)
        }
    }
}

/// Writes a graph in the format read by [`load_graph`].
pub fn graph_to_json(graph: &KnowledgeGraph) -> String {
    let file = GraphFile {
        entities: graph
            .entity_memberships()
            .map(|(id, types)| EntityRecord { id: id.to_string(), types: types.iter().cloned().collect() })
            .collect(),
        relationships: graph
            .relationship_memberships()
            .map(|(id, ty)| RelationshipRecord { id: id.to_string(), ty: ty.into() })
            .collect(),
        attributes: graph
            .attribute_facts()
            .map(|(id, name, v)| AttributeRecord { owner: id.to_string(), name: name.into(), value: from_value(v) })
            .collect(),
        roles: graph
            .role_facts()
            .map(|(rel, role, target)| RoleRecord {
                rel: rel.to_string(),
                role: role.into(),
                target: target.to_string(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("graph files serialize");
    out.push('\n');
    out
}
