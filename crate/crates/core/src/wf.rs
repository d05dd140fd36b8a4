//! Well-formedness conditions on schemas.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::diagnostic::{Code, Diagnostic};
use crate::hierarchy::{ancestors_unchecked, roots_of};
use crate::query::is_rooted_at;
use crate::schema::{ConstraintStatement, Schema, ShapeStatement};

/// Checks WF1 to WF9. The result is empty iff the schema is well-formed.
///
/// | code | condition |
/// |------|-----------|
/// | WF1 | attribute and role declarations mention declared entities and relationships |
/// | WF2 | participation constraints have matching attribute or role declarations |
/// | WF3 | identity keys use ground patterns |
/// | WF4 | every relationship has an identity key |
/// | WF5 | the `Isa` hierarchy is acyclic |
/// | WF6 | every root entity declares an identity key |
/// | WF7 | `Disjoint` only relates entities with a common ancestor |
/// | WF8 | `Cover` members descend from the covered entity |
/// | WF9 | key patterns are rooted at the key's subject |
///
/// Hierarchy statements naming undeclared entities yield `UNKNOWN-ENTITY`.
pub fn check_well_formed(schema: &Schema) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    for s in schema.shape() {
        match s {
            ShapeStatement::Attribute { owner, .. } => {
                if !schema.is_entity(owner) && !schema.is_relationship(owner) {
                    out.push(Diagnostic::error(
                        Code::Wf1,
                        s.to_string(),
                        format!("`{owner}` is not a declared entity or relationship"),
                    ));
                }
            }
            ShapeStatement::Role { rel, entity, .. } => {
                if !schema.is_relationship(rel) {
                    out.push(Diagnostic::error(
                        Code::Wf1,
                        s.to_string(),
                        format!("`{rel}` is not a declared relationship"),
                    ));
                }
                if !schema.is_entity(entity) {
                    out.push(Diagnostic::error(
                        Code::Wf1,
                        s.to_string(),
                        format!("`{entity}` is not a declared entity"),
                    ));
                }
            }
            _ => {}
        }
    }

    for c in schema.constraints() {
        let subject = c.to_string();
        let unknown =
            |e: &str| Diagnostic::error(Code::UnknownEntity, &subject, format!("`{e}` is not a declared entity"));
        match c {
            ConstraintStatement::MandatoryAttr { owner, attr } | ConstraintStatement::SingleAttr { owner, attr } => {
                if schema.attr_owner(attr) != Some(owner) {
                    out.push(Diagnostic::error(
                        Code::Wf2,
                        &subject,
                        format!("no declaration Attribute({owner}, {attr})"),
                    ));
                }
            }
            ConstraintStatement::MandatoryRole { entity, role, rel }
            | ConstraintStatement::SingleRole { entity, role, rel } => {
                if schema.role_owner(role) != Some((rel, entity)) {
                    out.push(Diagnostic::error(
                        Code::Wf2,
                        &subject,
                        format!("no declaration Role({rel}, {role}, {entity})"),
                    ));
                }
            }
            ConstraintStatement::Key { owner, patterns } | ConstraintStatement::Identity { owner, patterns } => {
                if matches!(c, ConstraintStatement::Identity { .. }) {
                    for p in patterns.iter().filter(|p| !p.is_ground()) {
                        out.push(Diagnostic::error(Code::Wf3, &subject, format!("pattern `{p}` is not ground")));
                    }
                }
                for p in patterns {
                    match is_rooted_at(schema, p, owner) {
                        Ok(true) => {}
                        Ok(false) => out.push(Diagnostic::error(
                            Code::Wf9,
                            &subject,
                            format!("pattern `{p}` is not rooted at `{owner}`"),
                        )),
                        Err(e) => out.push(Diagnostic::error(Code::Wf9, &subject, e.to_string())),
                    }
                }
            }
            ConstraintStatement::Isa { sub, sup } => {
                for e in [sub, sup] {
                    if !schema.is_entity(e) {
                        out.push(unknown(e));
                    }
                }
                // The edge sub -> sup lies on a cycle iff sub is reachable from sup.
                if ancestors_unchecked(schema, sup).contains(sub) {
                    out.push(Diagnostic::error(
                        Code::Wf5,
                        &subject,
                        "the Isa hierarchy has a cycle through this statement",
                    ));
                }
            }
            ConstraintStatement::Disjoint(a, b) => {
                let mut known = true;
                for e in [a, b] {
                    if !schema.is_entity(e) {
                        out.push(unknown(e));
                        known = false;
                    }
                }
                if known && ancestors_unchecked(schema, a).is_disjoint(&ancestors_unchecked(schema, b)) {
                    out.push(Diagnostic::error(
                        Code::Wf7,
                        &subject,
                        format!("`{a}` and `{b}` have no common Isa-ancestor"),
                    ));
                }
            }
            ConstraintStatement::Cover { members, covered } => {
                if !schema.is_entity(covered) {
                    out.push(unknown(covered));
                }
                for m in members {
                    if !schema.is_entity(m) {
                        out.push(unknown(m));
                    } else if !ancestors_unchecked(schema, m).contains(covered) {
                        out.push(Diagnostic::error(
                            Code::Wf8,
                            &subject,
                            format!("`{m}` is not a descendant of `{covered}`"),
                        ));
                    }
                }
            }
        }
    }

    for r in schema.relationships() {
        if schema.identities_of(r).next().is_none() {
            out.push(Diagnostic::error(
                Code::Wf4,
                format!("Relationship({r})"),
                format!("relationship `{r}` has no identity key"),
            ));
        }
    }
    for e in schema.entities() {
        if roots_of(schema).contains(e) && schema.identities_of(e).next().is_none() {
            out.push(Diagnostic::error(
                Code::Wf6,
                format!("Entity({e})"),
                format!("root entity `{e}` has no directly declared identity key"),
            ));
        }
    }
    out
}
