//! Schema statements, the `Schema` type with its lookup indexes, and
//! schema construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::diagnostic::{Code, Diagnostic};
use crate::pattern::{write_list, Pattern};

/// A shape-graph statement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeStatement {
    Entity(String),
    Relationship(String),
    /// `owner` is an entity or a relationship.
    Attribute {
        owner: String,
        attr: String,
    },
    /// `entity` participates in `rel` in the role `role`.
    Role {
        rel: String,
        role: String,
        entity: String,
    },
}

/// A constraint statement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintStatement {
    MandatoryAttr {
        owner: String,
        attr: String,
    },
    SingleAttr {
        owner: String,
        attr: String,
    },
    MandatoryRole {
        entity: String,
        role: String,
        rel: String,
    },
    SingleRole {
        entity: String,
        role: String,
        rel: String,
    },
    Key {
        owner: String,
        patterns: Vec<Pattern>,
    },
    Identity {
        owner: String,
        patterns: Vec<Pattern>,
    },
    Isa {
        sub: String,
        sup: String,
    },
    Disjoint(String, String),
    /// Members are kept sorted and free of duplicates.
    Cover {
        members: Vec<String>,
        covered: String,
    },
}

impl ConstraintStatement {
    /// Key or identity patterns together with the key's subject.
    pub fn key_parts(&self) -> Option<(&str, &[Pattern])> {
        match self {
            ConstraintStatement::Key { owner, patterns } | ConstraintStatement::Identity { owner, patterns } => {
                Some((owner, patterns))
            }
            _ => None,
        }
    }

    pub fn is_hierarchy(&self) -> bool {
        matches!(
            self,
            ConstraintStatement::Isa { .. } | ConstraintStatement::Disjoint(..) | ConstraintStatement::Cover { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    Shape(ShapeStatement),
    Constraint(ConstraintStatement),
}

impl From<ShapeStatement> for Statement {
    fn from(s: ShapeStatement) -> Self {
        Statement::Shape(s)
    }
}

impl From<ConstraintStatement> for Statement {
    fn from(c: ConstraintStatement) -> Self {
        Statement::Constraint(c)
    }
}

/// Borrowed view of either statement kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementRef<'a> {
    Shape(&'a ShapeStatement),
    Constraint(&'a ConstraintStatement),
}

impl fmt::Display for StatementRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementRef::Shape(s) => s.fmt(f),
            StatementRef::Constraint(c) => c.fmt(f),
        }
    }
}

impl fmt::Display for ShapeStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeStatement::Entity(e) => write!(f, "Entity({e})"),
            ShapeStatement::Relationship(r) => write!(f, "Relationship({r})"),
            ShapeStatement::Attribute { owner, attr } => write!(f, "Attribute({owner}, {attr})"),
            ShapeStatement::Role { rel, role, entity } => write!(f, "Role({rel}, {role}, {entity})"),
        }
    }
}

impl fmt::Display for ConstraintStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConstraintStatement::*;
        match self {
            MandatoryAttr { owner, attr } => write!(f, "Mandatory({owner}, {attr})"),
            SingleAttr { owner, attr } => write!(f, "Single({owner}, {attr})"),
            MandatoryRole { entity, role, rel } => write!(f, "Mandatory({entity}, {role}, {rel})"),
            SingleRole { entity, role, rel } => write!(f, "Single({entity}, {role}, {rel})"),
            Key { owner, patterns } | Identity { owner, patterns } => {
                let kw = if matches!(self, Key { .. }) { "Key" } else { "Identity" };
                write!(f, "{kw}({owner}, [")?;
                write_list(f, patterns)?;
                f.write_str("])")
            }
            Isa { sub, sup } => write!(f, "Isa({sub}, {sup})"),
            Disjoint(a, b) => write!(f, "Disjoint({a}, {b})"),
            Cover { members, covered } => {
                f.write_str("Cover({")?;
                write_list(f, members)?;
                write!(f, "}}, {covered})")
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Shape(s) => s.fmt(f),
            Statement::Constraint(c) => c.fmt(f),
        }
    }
}

/// The four pairwise-disjoint name classes of a schema.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub entities: BTreeSet<String>,
    pub relationships: BTreeSet<String>,
    pub attributes: BTreeSet<String>,
    pub roles: BTreeSet<String>,
}

/// A built schema.
///
/// Statements keep their first-occurrence order, which presentation-oriented
/// output (verbalization, emitted artifacts) follows. Equality ignores that
/// order: two schemas are equal iff they contain the same statements.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    shape: Vec<ShapeStatement>,
    constraints: Vec<ConstraintStatement>,
    entities: Vec<String>,
    relationships: Vec<String>,
    attrs_of: BTreeMap<String, Vec<String>>,
    roles_of: BTreeMap<String, Vec<(String, String)>>,
    participations: BTreeMap<String, Vec<(String, String)>>,
    attr_owner: BTreeMap<String, String>,
    role_owner: BTreeMap<String, (String, String)>,
    isa_parents: BTreeMap<String, Vec<String>>,
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        let a: BTreeSet<StatementKey<'_>> = self.statement_keys().collect();
        let b: BTreeSet<StatementKey<'_>> = other.statement_keys().collect();
        a == b
    }
}

impl Eq for Schema {}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum StatementKey<'a> {
    Shape(&'a ShapeStatement),
    Constraint(&'a ConstraintStatement),
}

const EMPTY_NAMES: &[String] = &[];
const EMPTY_PAIRS: &[(String, String)] = &[];

impl Schema {
    fn statement_keys(&self) -> impl Iterator<Item = StatementKey<'_>> {
        self.shape.iter().map(StatementKey::Shape).chain(self.constraints.iter().map(StatementKey::Constraint))
    }

    pub fn shape(&self) -> &[ShapeStatement] {
        &self.shape
    }

    pub fn constraints(&self) -> &[ConstraintStatement] {
        &self.constraints
    }

    /// Shape statements followed by constraints, in schema order.
    pub fn statements(&self) -> impl Iterator<Item = StatementRef<'_>> {
        self.shape.iter().map(StatementRef::Shape).chain(self.constraints.iter().map(StatementRef::Constraint))
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty() && self.constraints.is_empty()
    }

    /// Declared entities in declaration order.
    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    /// Declared relationships in declaration order.
    pub fn relationships(&self) -> &[String] {
        &self.relationships
    }

    pub fn is_entity(&self, name: &str) -> bool {
        self.entities.iter().any(|e| e == name)
    }

    pub fn is_relationship(&self, name: &str) -> bool {
        self.relationships.iter().any(|r| r == name)
    }

    pub fn is_attribute(&self, name: &str) -> bool {
        self.attr_owner.contains_key(name)
    }

    pub fn is_role(&self, name: &str) -> bool {
        self.role_owner.contains_key(name)
    }

    /// Attributes declared on `owner`, in declaration order.
    pub fn attributes_of(&self, owner: &str) -> &[String] {
        self.attrs_of.get(owner).map_or(EMPTY_NAMES, Vec::as_slice)
    }

    /// `(role, entity)` pairs of relationship `rel`, in declaration order.
    pub fn roles_of(&self, rel: &str) -> &[(String, String)] {
        self.roles_of.get(rel).map_or(EMPTY_PAIRS, Vec::as_slice)
    }

    /// `(relationship, role)` pairs through which `entity` participates.
    pub fn participations(&self, entity: &str) -> &[(String, String)] {
        self.participations.get(entity).map_or(EMPTY_PAIRS, Vec::as_slice)
    }

    pub fn attr_owner(&self, attr: &str) -> Option<&str> {
        self.attr_owner.get(attr).map(String::as_str)
    }

    /// `(relationship, entity)` of a role.
    pub fn role_owner(&self, role: &str) -> Option<(&str, &str)> {
        self.role_owner.get(role).map(|(r, e)| (r.as_str(), e.as_str()))
    }

    /// Direct superclasses of `entity`.
    pub fn isa_parents(&self, entity: &str) -> &[String] {
        self.isa_parents.get(entity).map_or(EMPTY_NAMES, Vec::as_slice)
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary {
            entities: self.entities.iter().cloned().collect(),
            relationships: self.relationships.iter().cloned().collect(),
            attributes: self.attr_owner.keys().cloned().collect(),
            roles: self.role_owner.keys().cloned().collect(),
        }
    }

    pub fn contains(&self, c: &ConstraintStatement) -> bool {
        self.constraints.contains(c)
    }

    pub fn is_single_attr(&self, owner: &str, attr: &str) -> bool {
        self.constraints
            .iter()
            .any(|c| matches!(c, ConstraintStatement::SingleAttr { owner: o, attr: a } if o == owner && a == attr))
    }

    pub fn is_mandatory_attr(&self, owner: &str, attr: &str) -> bool {
        self.constraints
            .iter()
            .any(|c| matches!(c, ConstraintStatement::MandatoryAttr { owner: o, attr: a } if o == owner && a == attr))
    }

    pub fn is_single_role(&self, entity: &str, role: &str, rel: &str) -> bool {
        self.constraints.iter().any(|c| {
            matches!(c, ConstraintStatement::SingleRole { entity: e, role: b, rel: r } if e == entity && b == role && r == rel)
        })
    }

    pub fn is_mandatory_role(&self, entity: &str, role: &str, rel: &str) -> bool {
        self.constraints.iter().any(|c| {
            matches!(c, ConstraintStatement::MandatoryRole { entity: e, role: b, rel: r } if e == entity && b == role && r == rel)
        })
    }

    /// Identity keys declared directly on `owner`.
    pub fn identities_of<'a>(&'a self, owner: &'a str) -> impl Iterator<Item = &'a [Pattern]> + 'a {
        self.constraints.iter().filter_map(move |c| match c {
            ConstraintStatement::Identity { owner: o, patterns } if o == owner => Some(patterns.as_slice()),
            _ => None,
        })
    }
}

/// Returns true for identifiers of the form `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Builds a schema from statements, deduplicating repeats.
///
/// Fails when names are malformed, when an attribute or role name is
/// declared on two owners, or when a name is used in two name classes.
/// Pattern leaves are re-tagged as role or attribute leaves according to
/// the declared role names.
pub fn build_schema<I, S>(statements: I) -> Result<Schema, Vec<Diagnostic>>
where
    I: IntoIterator<Item = S>,
    S: Into<Statement>,
{
    let mut shape: Vec<ShapeStatement> = Vec::new();
    let mut constraints: Vec<ConstraintStatement> = Vec::new();
    let mut errors = Vec::new();

    for stmt in statements {
        match stmt.into() {
            Statement::Shape(s) => {
                if !shape.contains(&s) {
                    shape.push(s);
                }
            }
            Statement::Constraint(mut c) => {
                if let ConstraintStatement::Cover { members, .. } = &mut c {
                    members.sort();
                    members.dedup();
                }
                constraints.push(c);
            }
        }
    }

    for s in &shape {
        check_names(&s.to_string(), shape_names(s), &mut errors);
    }
    for c in &constraints {
        let subject = c.to_string();
        match c {
            ConstraintStatement::Key { patterns, .. } | ConstraintStatement::Identity { patterns, .. } => {
                if patterns.is_empty() {
                    errors.push(Diagnostic::error(
                        Code::MalformedStatement,
                        &subject,
                        "non-empty pattern list expected",
                    ));
                }
                if patterns.iter().any(has_empty_navigation) {
                    errors.push(Diagnostic::error(Code::MalformedStatement, &subject, "navigation without children"));
                }
            }
            ConstraintStatement::Cover { members, .. } if members.is_empty() => {
                errors.push(Diagnostic::error(Code::MalformedStatement, &subject, "non-empty entity set expected"));
            }
            _ => {}
        }
        check_names(&subject, constraint_names(c), &mut errors);
    }

    // Name classes and ownership.
    let mut class_of: BTreeMap<&str, &'static str> = BTreeMap::new();
    let mut overlaps: BTreeSet<String> = BTreeSet::new();
    let mut attr_owner: BTreeMap<String, String> = BTreeMap::new();
    let mut role_owner: BTreeMap<String, (String, String)> = BTreeMap::new();
    for s in &shape {
        let (name, class) = match s {
            ShapeStatement::Entity(e) => (e.as_str(), "entity"),
            ShapeStatement::Relationship(r) => (r.as_str(), "relationship"),
            ShapeStatement::Attribute { attr, .. } => (attr.as_str(), "attribute"),
            ShapeStatement::Role { role, .. } => (role.as_str(), "role"),
        };
        match class_of.get(name) {
            Some(&prev) if prev != class => {
                if overlaps.insert(name.into()) {
                    errors.push(Diagnostic::error(
                        Code::NameClassOverlap,
                        s.to_string(),
                        format!("`{name}` is used both as {} and as {}", article(prev), article(class)),
                    ));
                }
            }
            Some(_) => {}
            None => {
                class_of.insert(name, class);
            }
        }
        match s {
            ShapeStatement::Attribute { owner, attr } => match attr_owner.get(attr) {
                Some(prev) if prev != owner => errors.push(Diagnostic::error(
                    Code::DupAttrOwner,
                    s.to_string(),
                    format!("attribute `{attr}` is already owned by `{prev}`"),
                )),
                Some(_) => {}
                None => {
                    attr_owner.insert(attr.clone(), owner.clone());
                }
            },
            ShapeStatement::Role { rel, role, entity } => match role_owner.get(role) {
                Some((r, e)) if r != rel || e != entity => errors.push(Diagnostic::error(
                    Code::DupRoleOwner,
                    s.to_string(),
                    format!("role `{role}` is already declared as Role({r}, {role}, {e})"),
                )),
                Some(_) => {}
                None => {
                    role_owner.insert(role.clone(), (rel.clone(), entity.clone()));
                }
            },
            _ => {}
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }

    // Normalize pattern leaves, then deduplicate constraints.
    let is_role = |n: &str| role_owner.contains_key(n);
    let mut deduped: Vec<ConstraintStatement> = Vec::with_capacity(constraints.len());
    for mut c in constraints {
        if let ConstraintStatement::Key { patterns, .. } | ConstraintStatement::Identity { patterns, .. } = &mut c {
            for p in patterns.iter_mut() {
                p.reclassify_leaves(&is_role);
            }
        }
        if !deduped.contains(&c) {
            deduped.push(c);
        }
    }

    let mut schema = Schema { shape, constraints: deduped, attr_owner, role_owner, ..Schema::default() };
    schema.rebuild_indexes();
    Ok(schema)
}

impl Schema {
    fn rebuild_indexes(&mut self) {
        for s in &self.shape {
            match s {
                ShapeStatement::Entity(e) => self.entities.push(e.clone()),
                ShapeStatement::Relationship(r) => self.relationships.push(r.clone()),
                ShapeStatement::Attribute { owner, attr } => {
                    self.attrs_of.entry(owner.clone()).or_default().push(attr.clone())
                }
                ShapeStatement::Role { rel, role, entity } => {
                    self.roles_of.entry(rel.clone()).or_default().push((role.clone(), entity.clone()));
                    self.participations.entry(entity.clone()).or_default().push((rel.clone(), role.clone()));
                }
            }
        }
        for c in &self.constraints {
            if let ConstraintStatement::Isa { sub, sup } = c {
                let parents = self.isa_parents.entry(sub.clone()).or_default();
                if !parents.contains(sup) {
                    parents.push(sup.clone());
                }
            }
        }
    }
}

fn article(class: &str) -> &'static str {
    match class {
        "entity" => "an entity",
        "relationship" => "a relationship",
        "attribute" => "an attribute",
        _ => "a role",
    }
}

fn has_empty_navigation(p: &Pattern) -> bool {
    match p {
        Pattern::Nav(_, children) => children.is_empty() || children.iter().any(has_empty_navigation),
        _ => false,
    }
}

fn shape_names(s: &ShapeStatement) -> Vec<&str> {
    match s {
        ShapeStatement::Entity(e) | ShapeStatement::Relationship(e) => alloc::vec![e.as_str()],
        ShapeStatement::Attribute { owner, attr } => alloc::vec![owner.as_str(), attr.as_str()],
        ShapeStatement::Role { rel, role, entity } => alloc::vec![rel.as_str(), role.as_str(), entity.as_str()],
    }
}

fn constraint_names(c: &ConstraintStatement) -> Vec<&str> {
    use ConstraintStatement::*;
    match c {
        MandatoryAttr { owner, attr } | SingleAttr { owner, attr } => alloc::vec![owner.as_str(), attr.as_str()],
        MandatoryRole { entity, role, rel } | SingleRole { entity, role, rel } => {
            alloc::vec![entity.as_str(), role.as_str(), rel.as_str()]
        }
        Key { owner, patterns } | Identity { owner, patterns } => {
            let mut names = alloc::vec![owner.as_str()];
            for p in patterns {
                names.extend(p.names());
            }
            names
        }
        Isa { sub, sup } => alloc::vec![sub.as_str(), sup.as_str()],
        Disjoint(a, b) => alloc::vec![a.as_str(), b.as_str()],
        Cover { members, covered } => {
            let mut names: Vec<&str> = members.iter().map(String::as_str).collect();
            names.push(covered);
            names
        }
    }
}

fn check_names(subject: &str, names: Vec<&str>, errors: &mut Vec<Diagnostic>) {
    for n in names {
        if !is_identifier(n) {
            errors.push(Diagnostic::error(
                Code::MalformedStatement,
                subject,
                format!("`{n}` is not a valid identifier"),
            ));
        }
    }
}

/// Convenience constructors used by tests, fixtures, and callers building
/// schemas programmatically.
pub mod stmt {
    use super::*;

    pub fn entity(e: &str) -> Statement {
        ShapeStatement::Entity(e.into()).into()
    }
    pub fn relationship(r: &str) -> Statement {
        ShapeStatement::Relationship(r.into()).into()
    }
    pub fn attribute(owner: &str, attr: &str) -> Statement {
        ShapeStatement::Attribute { owner: owner.into(), attr: attr.into() }.into()
    }
    pub fn role(rel: &str, role: &str, entity: &str) -> Statement {
        ShapeStatement::Role { rel: rel.into(), role: role.into(), entity: entity.into() }.into()
    }
    pub fn mandatory_attr(owner: &str, attr: &str) -> Statement {
        ConstraintStatement::MandatoryAttr { owner: owner.into(), attr: attr.into() }.into()
    }
    pub fn single_attr(owner: &str, attr: &str) -> Statement {
        ConstraintStatement::SingleAttr { owner: owner.into(), attr: attr.into() }.into()
    }
    pub fn mandatory_role(entity: &str, role: &str, rel: &str) -> Statement {
        ConstraintStatement::MandatoryRole { entity: entity.into(), role: role.into(), rel: rel.into() }.into()
    }
    pub fn single_role(entity: &str, role: &str, rel: &str) -> Statement {
        ConstraintStatement::SingleRole { entity: entity.into(), role: role.into(), rel: rel.into() }.into()
    }
    pub fn key(owner: &str, patterns: Vec<Pattern>) -> Statement {
        ConstraintStatement::Key { owner: owner.into(), patterns }.into()
    }
    pub fn identity(owner: &str, patterns: Vec<Pattern>) -> Statement {
        ConstraintStatement::Identity { owner: owner.into(), patterns }.into()
    }
    pub fn isa(sub: &str, sup: &str) -> Statement {
        ConstraintStatement::Isa { sub: sub.into(), sup: sup.into() }.into()
    }
    pub fn disjoint(a: &str, b: &str) -> Statement {
        ConstraintStatement::Disjoint(a.into(), b.into()).into()
    }
    pub fn cover(members: &[&str], covered: &str) -> Statement {
        ConstraintStatement::Cover { members: members.iter().map(|m| m.to_string()).collect(), covered: covered.into() }
            .into()
    }
}
