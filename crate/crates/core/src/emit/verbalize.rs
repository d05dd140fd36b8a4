//! English rendering of a schema, one sentence per line.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::schema::{ConstraintStatement, Schema, ShapeStatement};

fn kind(schema: &Schema, x: &str) -> &'static str {
    if schema.is_relationship(x) {
        "relationship"
    } else {
        "entity"
    }
}

fn patterns(p: &[crate::pattern::Pattern]) -> String {
    let items: Vec<String> = p.iter().map(ToString::to_string).collect();
    alloc::format!("[{}]", items.join(", "))
}

/// Shape declarations come first, each entity and relationship followed
/// by its attributes. A role declaration and its participation
/// constraints form a single sentence.
pub fn verbalize(schema: &Schema) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    let attribute = |line: &mut dyn FnMut(String), owner: &str, a: &str| {
        line(alloc::format!("'{a}' is an attribute of the {} '{owner}'.", kind(schema, owner)));
    };

    for e in schema.entities() {
        line(alloc::format!("'{e}' is an entity."));
        for a in schema.attributes_of(e) {
            attribute(&mut line, e, a);
        }
    }
    for r in schema.relationships() {
        line(alloc::format!("'{r}' is an relationship."));
        for a in schema.attributes_of(r) {
            attribute(&mut line, r, a);
        }
    }
    for s in schema.shape() {
        if let ShapeStatement::Attribute { owner, attr } = s {
            if !schema.is_entity(owner) && !schema.is_relationship(owner) {
                attribute(&mut line, owner, attr);
            }
        }
    }

    let mut fused: Vec<&ConstraintStatement> = Vec::new();
    for s in schema.shape() {
        let ShapeStatement::Role { rel, role, entity } = s else { continue };
        let mandatory = schema.is_mandatory_role(entity, role, rel);
        let single = schema.is_single_role(entity, role, rel);
        let amount = match (mandatory, single) {
            (true, true) => "exactly one instance",
            (true, false) => "one or more instances",
            (false, true) => "at most one instance",
            (false, false) => "zero or more instances",
        };
        line(alloc::format!(
            "Every instance of the entity '{entity}' participates in {amount} of the relationship '{rel}' through the role '{role}'."
        ));
        for c in schema.constraints() {
            match c {
                ConstraintStatement::MandatoryRole { entity: e, role: b, rel: r }
                | ConstraintStatement::SingleRole { entity: e, role: b, rel: r }
                    if e == entity && b == role && r == rel =>
                {
                    fused.push(c)
                }
                _ => {}
            }
        }
    }

    let mut rest: Vec<&ConstraintStatement> = schema.constraints().iter().filter(|c| !fused.contains(c)).collect();
    // Stable partition: participation, keys, hierarchy, leftovers.
    rest.sort_by_key(|c| match c {
        ConstraintStatement::MandatoryAttr { .. } | ConstraintStatement::SingleAttr { .. } => 0,
        ConstraintStatement::Key { .. } | ConstraintStatement::Identity { .. } => 1,
        ConstraintStatement::Isa { .. } | ConstraintStatement::Disjoint(..) | ConstraintStatement::Cover { .. } => 2,
        ConstraintStatement::MandatoryRole { .. } | ConstraintStatement::SingleRole { .. } => 3,
    });
    for c in rest {
        line(match c {
            ConstraintStatement::MandatoryAttr { owner, attr } => alloc::format!(
                "Every instance of the {} '{owner}' must have an attribute value for '{attr}'.",
                kind(schema, owner)
            ),
            ConstraintStatement::SingleAttr { owner, attr } => alloc::format!(
                "Every instance of the {} '{owner}' must have at most one attribute value of '{attr}'.",
                kind(schema, owner)
            ),
            ConstraintStatement::MandatoryRole { entity, role, rel } => alloc::format!(
                "Every instance of the entity '{entity}' must participate in an instance of the relationship '{rel}' through the role '{role}'."
            ),
            ConstraintStatement::SingleRole { entity, role, rel } => alloc::format!(
                "Every instance of the entity '{entity}' can participate in at most one instance of the relationship '{rel}' through the role '{role}'."
            ),
            ConstraintStatement::Key { owner, patterns: p } => alloc::format!(
                "No two instances of the {} '{owner}' may have the same key values obtained with {}.",
                kind(schema, owner),
                patterns(p)
            ),
            ConstraintStatement::Identity { owner, patterns: p } => {
                let k = kind(schema, owner);
                alloc::format!(
                    "Every instance of the {k} '{owner}' must have precisely one tuple of key values obtained with {}, and no two instances of the {k} '{owner}' may have the same key values.",
                    patterns(p)
                )
            }
            ConstraintStatement::Isa { sub, sup } => alloc::format!(
                "'{sub}' is a subclass of '{sup}'; in particular, '{sub}' inherits all attributes, relationships, and constraints of '{sup}'."
            ),
            ConstraintStatement::Disjoint(a, b) => {
                alloc::format!("No instance of the entity '{a}' is an instance of the entity '{b}' and vice versa.")
            }
            ConstraintStatement::Cover { members, covered } => {
                let names: Vec<String> = members.iter().map(|m| alloc::format!("'{m}'")).collect();
                alloc::format!(
                    "Any instance of the entity '{covered}' is an instance of at least one of {}.",
                    names.join(", ")
                )
            }
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::build_schema;
    use crate::schema::stmt::*;

    #[test]
    fn empty_schema() {
        let s = build_schema(alloc::vec::Vec::<crate::schema::Statement>::new()).unwrap();
        assert_eq!(verbalize(&s), "");
    }

    #[test]
    fn attribute_sentence() {
        let s = build_schema([entity("University"), attribute("University", "name")]).unwrap();
        assert_eq!(verbalize(&s), "'University' is an entity.\n'name' is an attribute of the entity 'University'.\n");
    }

    #[test]
    fn fused_participation() {
        let s = build_schema([
            entity("Message"),
            entity("Person"),
            relationship("wrote"),
            role("wrote", "msg", "Message"),
            role("wrote", "author", "Person"),
            mandatory_role("Message", "msg", "wrote"),
            single_role("Message", "msg", "wrote"),
            single_role("Person", "author", "wrote"),
        ])
        .unwrap();
        let text = verbalize(&s);
        assert!(text.contains(
            "Every instance of the entity 'Message' participates in exactly one instance of the relationship 'wrote' through the role 'msg'.\n"
        ));
        assert!(text.contains("in at most one instance of the relationship 'wrote' through the role 'author'."));
        assert_eq!(text.lines().count(), 5);
    }
}
