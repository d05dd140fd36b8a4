//! Schema compilation to other formalisms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::diagnostic::{Code, Diagnostic};
use crate::schema::{ConstraintStatement, Schema};

mod dot;
mod pgschema;
mod rdf;
mod shacl;
mod shex;
mod sql;
mod verbalize;

pub use dot::emit_dot;
pub use pgschema::{emit_pg_schema, emit_pg_schema_named};
pub use shacl::emit_shacl;
pub use shex::emit_shex;
pub use sql::emit_sql;
pub use verbalize::verbalize;

/// A generated artifact and the constraints it leaves out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitterOutput {
    pub artifact: String,
    /// One `UNEXPRESSED` warning per constraint the target cannot state.
    pub unexpressed: Vec<Diagnostic>,
}

/// Tracks which constraints an emitter has encoded.
pub(crate) struct Coverage<'s> {
    schema: &'s Schema,
    expressed: Vec<bool>,
    notes: Vec<Option<String>>,
    extra: Vec<Diagnostic>,
}

impl<'s> Coverage<'s> {
    pub(crate) fn new(schema: &'s Schema) -> Self {
        let n = schema.constraints().len();
        Coverage { schema, expressed: alloc::vec![false; n], notes: alloc::vec![None; n], extra: Vec::new() }
    }

    fn index(&self, c: &ConstraintStatement) -> Option<usize> {
        self.schema.constraints().iter().position(|d| d == c)
    }

    pub(crate) fn expressed(&mut self, c: &ConstraintStatement) {
        if let Some(i) = self.index(c) {
            self.expressed[i] = true;
        }
    }

    /// Records why `c` is left out; a later [`Coverage::expressed`] wins.
    pub(crate) fn unexpressed(&mut self, c: &ConstraintStatement, reason: impl Into<String>) {
        if let Some(i) = self.index(c) {
            if self.notes[i].is_none() {
                self.notes[i] = Some(reason.into());
            }
        }
    }

    /// A gap that is not tied to a single constraint statement.
    pub(crate) fn note(&mut self, subject: impl Into<String>, reason: impl Into<String>) {
        self.extra.push(Diagnostic::warning(Code::Unexpressed, subject, reason));
    }

    /// Every constraint not marked expressed, in schema order, followed by
    /// the free-standing notes.
    pub(crate) fn finish(self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (i, c) in self.schema.constraints().iter().enumerate() {
            if !self.expressed[i] {
                let reason = self.notes[i].clone().unwrap_or_else(|| "not representable in this target".into());
                out.push(Diagnostic::warning(Code::Unexpressed, c.to_string(), reason));
            }
        }
        out.extend(self.extra);
        out
    }
}

/// Marks every hierarchy statement as unexpressed.
pub(crate) fn skip_hierarchy(schema: &Schema, cov: &mut Coverage<'_>) {
    for c in schema.constraints().iter().filter(|c| c.is_hierarchy()) {
        cov.unexpressed(c, "type hierarchies are not translated");
    }
}

pub(crate) fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub(crate) fn lower_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Appends `prefix` + diagnostic lines as trailing comments.
pub(crate) fn append_comments(out: &mut String, prefix: &str, diags: &[Diagnostic]) {
    if diags.is_empty() {
        return;
    }
    if !out.is_empty() {
        out.push('\n');
    }
    for d in diags {
        out.push_str(prefix);
        out.push_str("UNEXPRESSED: ");
        out.push_str(&d.subject);
        out.push_str(": ");
        out.push_str(&d.message);
        out.push('\n');
    }
}

/// A binary relationship that identifies a dependent entity: the
/// dependent participates exactly once through `dep_role`, and one of its
/// identity keys navigates that role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Identifying {
    pub rel: String,
    pub dependent: String,
    pub dep_role: String,
    pub parent: String,
    pub parent_role: String,
}

/// Identifying relationships without attributes, at most one per
/// relationship.
pub(crate) fn identifying_relationships(schema: &Schema) -> Vec<Identifying> {
    let mut out = Vec::new();
    for rel in schema.relationships() {
        let roles = schema.roles_of(rel);
        if roles.len() != 2 || !schema.attributes_of(rel).is_empty() {
            continue;
        }
        for (i, (b, e)) in roles.iter().enumerate() {
            let (c, p) = &roles[1 - i];
            let navigates = schema
                .identities_of(e)
                .any(|ps| ps.iter().any(|p| matches!(p, crate::pattern::Pattern::Nav(n, _) if n == b)));
            if navigates && schema.is_mandatory_role(e, b, rel) && schema.is_single_role(e, b, rel) {
                out.push(Identifying {
                    rel: rel.clone(),
                    dependent: e.clone(),
                    dep_role: b.clone(),
                    parent: p.clone(),
                    parent_role: c.clone(),
                });
                break;
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use crate::pattern::Pattern;
    use crate::schema::stmt::*;
    use crate::schema::{build_schema, Schema, Statement};
    use alloc::vec;
    use alloc::vec::Vec;

    fn nav(role: &str, leaves: &[&str]) -> Pattern {
        Pattern::nav(role, leaves.iter().map(|a| Pattern::attr(a)).collect())
    }

    /// The social-network schema with every attribute but `email` single.
    pub(crate) fn running_example() -> Schema {
        let mut s: Vec<Statement> = vec![
            entity("University"),
            attribute("University", "name"),
            entity("Person"),
            attribute("Person", "fname"),
            attribute("Person", "lname"),
            attribute("Person", "email"),
            entity("Message"),
            attribute("Message", "number"),
            attribute("Message", "date"),
            attribute("Message", "text"),
            relationship("studies"),
            attribute("studies", "year"),
            role("studies", "student", "Person"),
            role("studies", "uni", "University"),
            relationship("follows"),
            attribute("follows", "since"),
            role("follows", "follower", "Person"),
            role("follows", "followee", "Person"),
            relationship("wrote"),
            role("wrote", "author", "Person"),
            role("wrote", "msg", "Message"),
            mandatory_attr("Message", "date"),
        ];
        for (o, a) in [
            ("University", "name"),
            ("Person", "fname"),
            ("Person", "lname"),
            ("Message", "number"),
            ("Message", "date"),
            ("Message", "text"),
            ("studies", "year"),
            ("follows", "since"),
        ] {
            s.push(single_attr(o, a));
        }
        s.extend([
            mandatory_role("Message", "msg", "wrote"),
            single_role("Message", "msg", "wrote"),
            identity("University", vec![Pattern::attr("name")]),
            identity("Person", vec![Pattern::attr("fname"), Pattern::attr("lname")]),
            key("Person", vec![Pattern::attr("email")]),
            identity(
                "Message",
                vec![Pattern::nav("msg", vec![nav("author", &["fname", "lname"])]), Pattern::attr("number")],
            ),
            identity(
                "studies",
                vec![nav("uni", &["name"]), nav("student", &["fname", "lname"]), Pattern::attr("year")],
            ),
            identity("follows", vec![nav("follower", &["fname", "lname"]), nav("followee", &["fname", "lname"])]),
            identity("wrote", vec![nav("author", &["fname", "lname"]), nav("msg", &["number"])]),
        ]);
        build_schema(s).unwrap()
    }

    #[test]
    fn running_example_is_well_formed() {
        assert!(crate::wf::check_well_formed(&running_example()).is_empty());
    }

    #[test]
    fn identifying_relationship_of_running_example() {
        let ids = super::identifying_relationships(&running_example());
        assert_eq!(ids.len(), 1);
        assert_eq!((ids[0].rel.as_str(), ids[0].parent.as_str()), ("wrote", "Person"));
    }
}
