//! Node-shape model shared by the SHACL and ShEx emitters.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{capitalize, identifying_relationships, skip_hierarchy, Coverage};
use crate::pattern::Pattern;
use crate::schema::{ConstraintStatement, Schema};

pub(crate) const EX: &str = "http://example.org/";
pub(crate) const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Value {
    String,
    /// Instances of the named entity or relationship.
    Node(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Property {
    pub path: String,
    pub inverse: bool,
    pub value: Value,
    pub min: u32,
    pub max_one: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct NodeShape {
    pub class: String,
    pub properties: Vec<Property>,
    /// Attributes that identify their subject on their own.
    pub unique_attributes: Vec<String>,
}

pub(crate) fn shape_name(schema: &Schema, class: &str) -> String {
    if schema.is_relationship(class) {
        format!("{}RelShape", capitalize(class))
    } else {
        format!("{class}Shape")
    }
}

fn is_identity_leaf(schema: &Schema, owner: &str, name: &str) -> bool {
    schema.identities_of(owner).any(|ps| ps.iter().any(|p| p.head() == name))
}

fn attribute_properties(schema: &Schema, owner: &str, cov: &mut Coverage<'_>) -> Vec<Property> {
    let mut out = Vec::new();
    for a in schema.attributes_of(owner) {
        let id = is_identity_leaf(schema, owner, a);
        out.push(Property {
            path: a.clone(),
            inverse: false,
            value: Value::String,
            min: u32::from(id || schema.is_mandatory_attr(owner, a)),
            max_one: id || schema.is_single_attr(owner, a),
        });
    }
    for c in schema.constraints() {
        match c {
            ConstraintStatement::MandatoryAttr { owner: o, .. } | ConstraintStatement::SingleAttr { owner: o, .. }
                if o == owner =>
            {
                cov.expressed(c)
            }
            _ => {}
        }
    }
    out
}

/// Builds the node shapes. With `attribute_keys`, single-attribute keys are
/// collected for inverse-path uniqueness shapes; otherwise every key is
/// left to the coverage report.
pub(crate) fn node_shapes(schema: &Schema, cov: &mut Coverage<'_>, attribute_keys: bool) -> Vec<NodeShape> {
    skip_hierarchy(schema, cov);
    let flattened = identifying_relationships(schema);
    let mut shapes = Vec::new();

    for e in schema.entities() {
        let mut properties = attribute_properties(schema, e, cov);
        for (rel, role) in schema.participations(e) {
            let constraint = |mandatory: bool| {
                if mandatory {
                    ConstraintStatement::MandatoryRole { entity: e.clone(), role: role.clone(), rel: rel.clone() }
                } else {
                    ConstraintStatement::SingleRole { entity: e.clone(), role: role.clone(), rel: rel.clone() }
                }
            };
            cov.expressed(&constraint(true));
            cov.expressed(&constraint(false));
            let min = u32::from(schema.is_mandatory_role(e, role, rel));
            let max_one = schema.is_single_role(e, role, rel);
            match flattened.iter().find(|f| f.rel == *rel) {
                Some(f) if f.dep_role == *role => properties.push(Property {
                    path: f.parent_role.clone(),
                    inverse: false,
                    value: Value::Node(f.parent.clone()),
                    min: 1,
                    max_one: true,
                }),
                Some(f) => properties.push(Property {
                    path: f.parent_role.clone(),
                    inverse: true,
                    value: Value::Node(f.dependent.clone()),
                    min,
                    max_one,
                }),
                None => properties.push(Property {
                    path: role.clone(),
                    inverse: true,
                    value: Value::Node(rel.clone()),
                    min,
                    max_one,
                }),
            }
        }
        let mut unique_attributes = Vec::new();
        if attribute_keys {
            for c in schema.constraints() {
                let (ConstraintStatement::Key { owner, patterns } | ConstraintStatement::Identity { owner, patterns }) =
                    c
                else {
                    continue;
                };
                if owner != e {
                    continue;
                }
                if let [Pattern::Attr(a)] = &patterns[..] {
                    if schema.attr_owner(a) == Some(e.as_str()) {
                        if !unique_attributes.contains(a) {
                            unique_attributes.push(a.clone());
                        }
                        cov.expressed(c);
                        continue;
                    }
                }
                cov.unexpressed(c, "composite and navigational keys have no SHACL core counterpart");
            }
        }
        shapes.push(NodeShape { class: e.clone(), properties, unique_attributes });
    }

    for r in schema.relationships() {
        if flattened.iter().any(|f| f.rel == *r) {
            continue;
        }
        let mut properties = attribute_properties(schema, r, cov);
        for (b, e) in schema.roles_of(r) {
            properties.push(Property {
                path: b.clone(),
                inverse: false,
                value: Value::Node(e.clone()),
                min: u32::from(is_identity_leaf(schema, r, b)),
                max_one: true,
            });
        }
        shapes.push(NodeShape { class: r.clone(), properties, unique_attributes: Vec::new() });
    }

    for c in schema.constraints() {
        if let ConstraintStatement::Key { .. } | ConstraintStatement::Identity { .. } = c {
            if attribute_keys {
                cov.unexpressed(c, "composite and navigational keys have no SHACL core counterpart");
            } else {
                cov.unexpressed(c, "ShEx has no key constraints");
            }
        }
    }
    shapes
}
