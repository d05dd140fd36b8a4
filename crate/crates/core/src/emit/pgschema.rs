//! PG-Schema graph types.
//!
//! Entities become node types, binary relationships edge types, and other
//! relationships node types with one edge type per role. Every
//! multi-valued attribute gets an auxiliary node type reached through a
//! `has<Attr>` edge.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{append_comments, capitalize, lower_first, skip_hierarchy, Coverage, EmitterOutput};
use crate::pattern::Pattern;
use crate::schema::{ConstraintStatement, Schema};

const DEFAULT_NAME: &str = "kgerGraphType";

fn type_name(class: &str) -> String {
    format!("{}Type", lower_first(class))
}

fn has_edge(attr: &str) -> String {
    format!("has{}", capitalize(attr))
}

/// One variable per name: the lowercased first letter, numbered when
/// several names share it.
fn variables(names: &[&str]) -> Vec<String> {
    let letter = |n: &str| match n.chars().next() {
        Some(c) if c.is_ascii_alphabetic() => c.to_ascii_lowercase(),
        _ => 'x',
    };
    let letters: Vec<char> = names.iter().map(|n| letter(n)).collect();
    (0..names.len())
        .map(|i| {
            let l = letters[i];
            if letters.iter().filter(|&&x| x == l).count() == 1 {
                l.to_string()
            } else {
                format!("{l}{}", letters[..=i].iter().filter(|&&x| x == l).count())
            }
        })
        .collect()
}

struct Binary<'a> {
    source: (&'a str, &'a str),
    target: (&'a str, &'a str),
}

fn binary<'a>(schema: &'a Schema, rel: &str) -> Option<Binary<'a>> {
    match schema.roles_of(rel) {
        [(b1, e1), (b2, e2)] => Some(Binary { source: (b1, e1), target: (b2, e2) }),
        _ => None,
    }
}

fn single_attrs<'a>(schema: &Schema, owner: &str, leaves: &'a [Pattern]) -> Option<Vec<&'a str>> {
    leaves
        .iter()
        .map(|l| match l {
            Pattern::Attr(a) if schema.attr_owner(a) == Some(owner) && schema.is_single_attr(owner, a) => {
                Some(a.as_str())
            }
            _ => None,
        })
        .collect()
}

fn properties(schema: &Schema, owner: &str) -> String {
    let id_leaf = |a: &str| schema.identities_of(owner).any(|ps| ps.iter().any(|p| p.head() == a));
    let props: Vec<String> = schema
        .attributes_of(owner)
        .iter()
        .filter(|a| schema.is_single_attr(owner, a))
        .map(|a| {
            let optional = if schema.is_mandatory_attr(owner, a) || id_leaf(a) { "" } else { "OPTIONAL " };
            format!("{optional}{a} STRING")
        })
        .collect();
    if props.is_empty() {
        String::new()
    } else {
        format!(" {{{}}}", props.join(", "))
    }
}

/// `FOR (x:eType) IDENTIFIER ...` for an entity identity, with at most one
/// navigation through a binary relationship to a parent's attributes.
fn entity_identifier(schema: &Schema, e: &str, patterns: &[Pattern]) -> Option<String> {
    let mut nav: Option<(&str, &str, Vec<&str>)> = None;
    for p in patterns {
        if let Pattern::Nav(b, children) = p {
            let [Pattern::Nav(c, leaves)] = &children[..] else { return None };
            let (rel, _) = schema.role_owner(b)?;
            let bin = binary(schema, rel)?;
            let parent = if bin.source.0 == b && bin.target.0 == c {
                bin.target.1
            } else if bin.target.0 == b && bin.source.0 == c {
                bin.source.1
            } else {
                return None;
            };
            if nav.is_some() {
                return None;
            }
            nav = Some((rel, parent, single_attrs(schema, parent, leaves)?));
        }
    }
    let mut names = alloc::vec![e];
    if let Some((_, parent, _)) = &nav {
        names.push(parent);
    }
    let vars = variables(&names);
    let mut parts = Vec::new();
    for p in patterns {
        match p {
            Pattern::Attr(_) => {
                let attrs = single_attrs(schema, e, core::slice::from_ref(p))?;
                parts.push(format!("{}.{}", vars[0], attrs[0]));
            }
            Pattern::Nav(..) => {
                let (_, _, leaves) = nav.as_ref()?;
                parts.extend(leaves.iter().map(|a| format!("{}.{a}", vars[1])));
            }
            Pattern::Role(_) => return None,
        }
    }
    let mut out = format!("FOR ({}:{}) IDENTIFIER {}", vars[0], type_name(e), parts.join(", "));
    if let Some((rel, _, _)) = nav {
        let bin = binary(schema, rel)?;
        let (src, tgt) =
            if bin.source.1 == e && bin.target.1 != e { (&vars[0], &vars[1]) } else { (&vars[1], &vars[0]) };
        let _ = write!(out, " WITHIN ({src})-[:{rel}]->({tgt})");
    }
    Some(out)
}

/// `FOR ()-[r:rel]->() IDENTIFIER ...` for an edge type.
fn edge_identifier(schema: &Schema, rel: &str, patterns: &[Pattern]) -> Option<String> {
    let bin = binary(schema, rel)?;
    let vars = variables(&[rel, bin.source.1, bin.target.1]);
    let role_var = |b: &str| {
        if b == bin.source.0 {
            Some(&vars[1])
        } else if b == bin.target.0 {
            Some(&vars[2])
        } else {
            None
        }
    };
    let mut parts = Vec::new();
    for p in patterns {
        match p {
            Pattern::Attr(_) => {
                let attrs = single_attrs(schema, rel, core::slice::from_ref(p))?;
                parts.push(format!("{}.{}", vars[0], attrs[0]));
            }
            Pattern::Role(b) => parts.push(role_var(b)?.clone()),
            Pattern::Nav(b, leaves) => {
                let v = role_var(b)?;
                let (_, e) = schema.role_owner(b)?;
                parts.extend(single_attrs(schema, e, leaves)?.iter().map(|a| format!("{v}.{a}")));
            }
        }
    }
    Some(format!(
        "FOR ()-[{r}:{rel}]->() IDENTIFIER {} WITHIN ({s})-[{r}]->({t})",
        parts.join(", "),
        r = vars[0],
        s = vars[1],
        t = vars[2]
    ))
}

/// `MANDATORY` / `SINGLETON` over the edges through which `e` takes part
/// in `rel` via `role`.
fn participation(schema: &Schema, e: &str, role: &str, rel: &str, keyword: &str) -> String {
    match binary(schema, rel) {
        Some(bin) => {
            let vars = variables(&[e, rel]);
            let (x, w) = (&vars[0], &vars[1]);
            let path =
                if bin.source.0 == role { format!("({x})-[{w}:{rel}]->()") } else { format!("()-[{w}:{rel}]->({x})") };
            format!("FOR ({x}:{}) {keyword} {w} WITHIN {path}", type_name(e))
        }
        None => {
            let vars = variables(&[e, rel]);
            let (x, r) = (&vars[0], &vars[1]);
            format!("FOR ({x}:{}) {keyword} {r} WITHIN ({r}:{})-[:{role}]->({x})", type_name(e), type_name(rel))
        }
    }
}

pub fn emit_pg_schema(schema: &Schema) -> EmitterOutput {
    emit_pg_schema_named(schema, DEFAULT_NAME)
}

pub fn emit_pg_schema_named(schema: &Schema, name: &str) -> EmitterOutput {
    let mut cov = Coverage::new(schema);
    skip_hierarchy(schema, &mut cov);
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut identifiers = Vec::new();
    let mut constraints = Vec::new();

    let mut owners: Vec<&str> = schema.entities().iter().map(String::as_str).collect();
    for e in schema.entities() {
        nodes.push(format!("({}: {e}{})", type_name(e), properties(schema, e)));
    }
    for r in schema.relationships() {
        if binary(schema, r).is_none() {
            nodes.push(format!("({}: {r}{})", type_name(r), properties(schema, r)));
            cov.note(
                format!("Relationship({r})"),
                format!("`{r}` has {} roles and is encoded as a node type", schema.roles_of(r).len()),
            );
        }
        owners.push(r);
    }
    // Auxiliary node types for multi-valued attributes.
    for owner in &owners {
        for a in schema.attributes_of(owner) {
            if schema.is_single_attr(owner, a) {
                continue;
            }
            if binary(schema, owner).is_some() {
                cov.note(format!("Attribute({owner}, {a})"), "edge types cannot carry multi-valued attributes");
                continue;
            }
            nodes.push(format!("({}: {} {{{a} STRING}})", type_name(a), capitalize(a)));
            edges.push(format!("(:{})-[:{}]->(:{})", type_name(owner), has_edge(a), type_name(a)));
        }
    }
    for r in schema.relationships() {
        match binary(schema, r) {
            Some(bin) => edges.push(format!(
                "(:{})-[:{r}{}]->(:{})",
                type_name(bin.source.1),
                properties(schema, r),
                type_name(bin.target.1)
            )),
            None => {
                for (b, e) in schema.roles_of(r) {
                    edges.push(format!("(:{})-[:{b}]->(:{})", type_name(r), type_name(e)));
                }
            }
        }
    }

    for c in schema.constraints() {
        match c {
            ConstraintStatement::SingleAttr { owner, attr } | ConstraintStatement::MandatoryAttr { owner, attr }
                if schema.is_single_attr(owner, attr) =>
            {
                cov.expressed(c)
            }
            ConstraintStatement::MandatoryAttr { owner, .. } if binary(schema, owner).is_some() => {
                cov.unexpressed(c, "edge types cannot carry multi-valued attributes")
            }
            ConstraintStatement::MandatoryAttr { owner, attr } => {
                let vars = variables(&[owner, attr]);
                constraints.push(format!(
                    "FOR ({x}:{}) MANDATORY {v} WITHIN ({x})-[:{}]->({v})",
                    type_name(owner),
                    has_edge(attr),
                    x = vars[0],
                    v = vars[1]
                ));
                cov.expressed(c);
            }
            ConstraintStatement::MandatoryRole { entity, role, rel }
            | ConstraintStatement::SingleRole { entity, role, rel } => {
                let mandatory = schema.is_mandatory_role(entity, role, rel);
                let single = schema.is_single_role(entity, role, rel);
                let keyword = match (mandatory, single) {
                    (true, true) => "MANDATORY SINGLETON",
                    (true, false) => "MANDATORY",
                    _ => "SINGLETON",
                };
                let clause = participation(schema, entity, role, rel, keyword);
                if !constraints.contains(&clause) {
                    constraints.push(clause);
                }
                cov.expressed(c);
            }
            ConstraintStatement::Identity { owner, patterns } => {
                let clause = if schema.is_entity(owner) {
                    entity_identifier(schema, owner, patterns)
                } else {
                    edge_identifier(schema, owner, patterns)
                };
                match clause {
                    Some(clause) => {
                        identifiers.push(clause);
                        cov.expressed(c);
                    }
                    None => cov.unexpressed(c, "the key does not map onto one identifier clause"),
                }
            }
            ConstraintStatement::Key { owner, patterns } => {
                let vars = variables(&[owner]);
                let x = &vars[0];
                let clause = match &patterns[..] {
                    [Pattern::Attr(a)]
                        if schema.attr_owner(a) == Some(owner)
                            && !schema.is_single_attr(owner, a)
                            && binary(schema, owner).is_none() =>
                    {
                        let vars = variables(&[owner, a]);
                        Some(format!(
                            "FOR ({x}:{}) EXCLUSIVE {v} WITHIN ({x})-[:{}]->({v})",
                            type_name(owner),
                            has_edge(a),
                            x = vars[0],
                            v = vars[1]
                        ))
                    }
                    _ => single_attrs(schema, owner, patterns).filter(|_| schema.is_entity(owner)).map(|attrs| {
                        let props: Vec<String> = attrs.iter().map(|a| format!("{x}.{a}")).collect();
                        format!("FOR ({x}:{}) EXCLUSIVE {}", type_name(owner), props.join(", "))
                    }),
                };
                match clause {
                    Some(clause) => {
                        constraints.push(clause);
                        cov.expressed(c);
                    }
                    None => cov.unexpressed(c, "only keys over local or multi-valued attributes map to EXCLUSIVE"),
                }
            }
            _ => {}
        }
    }

    let sections = [
        ("Node types", nodes),
        ("Edge types", edges),
        ("Identifiers", identifiers),
        ("Key and participation constraints", constraints),
    ];
    let total: usize = sections.iter().map(|(_, v)| v.len()).sum();
    let mut artifact = format!("CREATE GRAPH TYPE {name} STRICT {{\n");
    let mut written = 0;
    for (title, entries) in sections.iter().filter(|(_, v)| !v.is_empty()) {
        if written > 0 {
            artifact.push('\n');
        }
        let _ = writeln!(artifact, "    // {title}");
        for e in entries {
            written += 1;
            let sep = if written < total { "," } else { "" };
            let _ = writeln!(artifact, "    {e}{sep}");
        }
    }
    artifact.push_str("}\n");
    let unexpressed = cov.finish();
    append_comments(&mut artifact, "// ", &unexpressed);
    EmitterOutput { artifact, unexpressed }
}
