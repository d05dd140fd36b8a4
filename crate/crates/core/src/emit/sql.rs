//! SQL DDL.
//!
//! Entities become tables keyed by their identity key. A weak entity whose
//! identity navigates an identifying binary relationship to a parent
//! inlines the parent's key columns and absorbs the relationship. Every
//! multi-valued attribute gets its own table, and every other relationship
//! becomes a table referencing its participants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{append_comments, capitalize, skip_hierarchy, Coverage, EmitterOutput};
use crate::pattern::Pattern;
use crate::schema::{ConstraintStatement, Schema};

const RESERVED: &[&str] = &[
    "all",
    "and",
    "as",
    "by",
    "check",
    "column",
    "constraint",
    "create",
    "default",
    "delete",
    "distinct",
    "drop",
    "foreign",
    "from",
    "group",
    "having",
    "in",
    "index",
    "insert",
    "into",
    "is",
    "join",
    "key",
    "not",
    "null",
    "on",
    "or",
    "order",
    "primary",
    "references",
    "select",
    "table",
    "text",
    "to",
    "union",
    "unique",
    "update",
    "user",
    "values",
    "where",
];

fn is_reserved(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    RESERVED.contains(&lower.as_str())
}

/// Lowercases, drops vowels after the first letter, and collapses runs
/// of the same letter: `Message` gives `msg`.
fn abbreviate(name: &str) -> String {
    let mut out = String::new();
    for (i, ch) in name.chars().flat_map(char::to_lowercase).enumerate() {
        if i > 0 && "aeiou".contains(ch) {
            continue;
        }
        if out.ends_with(ch) {
            continue;
        }
        out.push(ch);
    }
    out
}

fn column_name(owner: &str, attr: &str) -> String {
    if is_reserved(attr) {
        format!("{}_{attr}", abbreviate(owner))
    } else {
        attr.into()
    }
}

#[derive(Debug, Default)]
struct Table {
    name: String,
    comment: Option<String>,
    columns: Vec<(String, bool)>,
    foreign_keys: Vec<(Vec<String>, String, Vec<String>)>,
    primary_key: Option<Vec<String>>,
    uniques: Vec<Vec<String>>,
}

impl Table {
    fn new(name: String) -> Self {
        Table { name, ..Table::default() }
    }

    fn set_not_null(&mut self, cols: &[String]) {
        for (c, nn) in &mut self.columns {
            if cols.contains(c) {
                *nn = true;
            }
        }
    }

    fn render(&self, out: &mut String) {
        if let Some(c) = &self.comment {
            let _ = writeln!(out, "-- {c}");
        }
        let pk = self.primary_key.as_deref().unwrap_or(&[]);
        let mut lines: Vec<String> = Vec::new();
        for (c, not_null) in &self.columns {
            let nn = if *not_null && !pk.contains(c) { " NOT NULL" } else { "" };
            lines.push(format!("{c} text{nn}"));
        }
        for (cols, table, refs) in &self.foreign_keys {
            lines.push(format!("FOREIGN KEY ({}) REFERENCES {table}({})", cols.join(", "), refs.join(", ")));
        }
        if let Some(pk) = &self.primary_key {
            lines.push(format!("PRIMARY KEY ({})", pk.join(", ")));
        }
        for u in &self.uniques {
            lines.push(format!("UNIQUE ({})", u.join(", ")));
        }
        let _ = writeln!(out, "CREATE TABLE {} (", self.name);
        for (i, l) in lines.iter().enumerate() {
            let sep = if i + 1 < lines.len() { "," } else { "" };
            let _ = writeln!(out, "    {l}{sep}");
        }
        out.push_str(");\n");
    }
}

/// Primary-key information of an entity or relationship table.
#[derive(Debug, Clone)]
struct KeyInfo {
    table: String,
    columns: Vec<String>,
    /// For keys made of local attributes only: those attributes.
    attrs: Option<Vec<String>>,
}

struct Weak {
    rel: String,
    role: String,
    parent: String,
    parent_role: String,
}

pub fn emit_sql(schema: &Schema) -> EmitterOutput {
    let mut cov = Coverage::new(schema);
    skip_hierarchy(schema, &mut cov);
    let mut keys: BTreeMap<String, KeyInfo> = BTreeMap::new();

    let local = |owner: &str, p: &Pattern| -> Option<String> {
        match p {
            Pattern::Attr(a) if schema.attr_owner(a) == Some(owner) && schema.is_single_attr(owner, a) => {
                Some(a.clone())
            }
            _ => None,
        }
    };

    // Entities keyed by local attributes.
    for e in schema.entities() {
        if let Some(ps) = schema.identities_of(e).next() {
            if let Some(attrs) = ps.iter().map(|p| local(e, p)).collect::<Option<Vec<_>>>() {
                let columns = attrs.iter().map(|a| column_name(e, a)).collect();
                keys.insert(e.clone(), KeyInfo { table: e.clone(), columns, attrs: Some(attrs) });
            }
        }
    }

    // Weak entities: one navigation to a parent's local key through an
    // identifying binary relationship, plus local attributes.
    let mut weak: BTreeMap<String, Weak> = BTreeMap::new();
    for e in schema.entities() {
        if keys.contains_key(e) {
            continue;
        }
        let Some(ps) = schema.identities_of(e).next() else { continue };
        let navs: Vec<usize> = (0..ps.len()).filter(|&i| local(e, &ps[i]).is_none()).collect();
        let [i] = navs[..] else { continue };
        let Pattern::Nav(b, outer) = &ps[i] else { continue };
        let [Pattern::Nav(c, leaves)] = &outer[..] else { continue };
        let Some((rel, owner)) = schema.role_owner(b) else { continue };
        let roles = schema.roles_of(rel);
        if owner != e || roles.len() != 2 || !(schema.is_mandatory_role(e, b, rel) && schema.is_single_role(e, b, rel))
        {
            continue;
        }
        let Some((_, parent)) = roles.iter().find(|(r, _)| r == c) else { continue };
        let Some(pk) = keys.get(parent.as_str()).filter(|k| k.table == *parent) else { continue };
        let leaf_attrs: Option<Vec<&str>> =
            leaves.iter().map(|l| if let Pattern::Attr(a) = l { Some(a.as_str()) } else { None }).collect();
        let parent_attrs: Option<Vec<&str>> = pk.attrs.as_ref().map(|v| v.iter().map(String::as_str).collect());
        if leaf_attrs.is_none() || leaf_attrs != parent_attrs {
            continue;
        }
        let inlined: Vec<String> = pk.columns.iter().map(|col| format!("{c}_{col}")).collect();
        let mut columns = Vec::new();
        for (j, p) in ps.iter().enumerate() {
            if j == i {
                columns.extend(inlined.iter().cloned());
            } else {
                columns.push(column_name(e, local(e, p).as_deref().unwrap_or_default()));
            }
        }
        keys.insert(e.clone(), KeyInfo { table: e.clone(), columns, attrs: None });
        weak.insert(
            e.clone(),
            Weak { rel: rel.into(), role: b.clone(), parent: parent.clone(), parent_role: c.clone() },
        );
    }
    let absorbed: Vec<&str> = weak.values().map(|w| w.rel.as_str()).collect();

    let mut tables: Vec<Table> = Vec::new();
    for e in schema.entities() {
        let mut t = Table::new(e.clone());
        let key = keys.get(e.as_str()).cloned();
        if let Some(w) = weak.get(e.as_str()) {
            t.comment = Some(format!("{e} absorbs the identifying relationship {}", w.rel));
            let parent = &keys[&w.parent];
            let cols: Vec<String> = parent.columns.iter().map(|c| format!("{}_{c}", w.parent_role)).collect();
            for c in &cols {
                t.columns.push((c.clone(), true));
            }
            t.foreign_keys.push((cols, parent.table.clone(), parent.columns.clone()));
        }
        add_attribute_columns(schema, e, &mut t, &mut cov);
        if let Some(w) = weak.get(e.as_str()) {
            add_attribute_columns(schema, &w.rel, &mut t, &mut cov);
            for c in schema.constraints() {
                match c {
                    ConstraintStatement::MandatoryRole { entity, role, rel }
                    | ConstraintStatement::SingleRole { entity, role, rel }
                        if entity == e && *role == w.role && *rel == w.rel =>
                    {
                        cov.expressed(c)
                    }
                    _ => {}
                }
            }
        }
        t.primary_key = key.as_ref().map(|k| k.columns.clone());
        table_constraints(schema, e, &mut t, key.as_ref(), &mut cov, &|p| {
            local(e, p).map(|a| alloc::vec![column_name(e, &a)])
        });
        if let Some(w) = weak.get(e.as_str()) {
            // The relationship's identity is implied when it maps onto the
            // dependent's primary key.
            let pk = &keys[e.as_str()].columns;
            for c in schema.constraints() {
                let ConstraintStatement::Identity { owner, patterns } = c else { continue };
                if *owner != w.rel {
                    continue;
                }
                let mapped: Option<Vec<String>> = patterns
                    .iter()
                    .map(|p| match p {
                        Pattern::Nav(r, leaves) if *r == w.parent_role => {
                            let attrs: Option<Vec<&str>> = leaves
                                .iter()
                                .map(|l| if let Pattern::Attr(a) = l { Some(a.as_str()) } else { None })
                                .collect();
                            let pa = keys[&w.parent].attrs.as_ref()?;
                            (attrs? == pa.iter().map(String::as_str).collect::<Vec<_>>()).then(|| {
                                pa.iter().map(|a| format!("{}_{}", w.parent_role, column_name(&w.parent, a))).collect()
                            })
                        }
                        Pattern::Nav(r, leaves) if *r == w.role => {
                            leaves.iter().map(|l| local(e, l).map(|a| column_name(e, &a))).collect::<Option<Vec<_>>>()
                        }
                        _ => None,
                    })
                    .collect::<Option<Vec<Vec<String>>>>()
                    .map(|v| v.concat());
                let pk_sorted = {
                    let mut v = pk.clone();
                    v.sort();
                    v
                };
                match mapped.map(|mut v| {
                    v.sort();
                    v
                }) {
                    Some(cols) if cols == pk_sorted => cov.expressed(c),
                    _ => {
                        cov.unexpressed(c, "identity of an absorbed relationship that differs from the dependent's key")
                    }
                }
            }
        }
        tables.push(t);
        attribute_tables(schema, e, key.as_ref(), &mut tables, &mut cov);
    }

    for r in schema.relationships() {
        if absorbed.contains(&r.as_str()) {
            continue;
        }
        let mut t = Table::new(capitalize(r));
        let mut role_cols: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for (b, e) in schema.roles_of(r) {
            match keys.get(e.as_str()) {
                Some(k) => {
                    let cols: Vec<String> = k.columns.iter().map(|c| format!("{b}_{c}")).collect();
                    for c in &cols {
                        t.columns.push((c.clone(), true));
                    }
                    t.foreign_keys.push((cols.clone(), k.table.clone(), k.columns.clone()));
                    role_cols.insert(b, cols);
                }
                None => cov.note(format!("Role({r}, {b}, {e})"), format!("`{e}` has no primary key to reference")),
            }
        }
        add_attribute_columns(schema, r, &mut t, &mut cov);
        let map = |p: &Pattern| -> Option<Vec<String>> {
            match p {
                Pattern::Attr(_) => local(r, p).map(|a| alloc::vec![column_name(r, &a)]),
                Pattern::Role(b) => role_cols.get(b.as_str()).cloned(),
                Pattern::Nav(b, leaves) => {
                    let (_, e) = schema.role_owner(b)?;
                    let attrs = keys.get(e)?.attrs.as_ref()?;
                    let leaf_attrs: Option<Vec<&str>> =
                        leaves.iter().map(|l| if let Pattern::Attr(a) = l { Some(a.as_str()) } else { None }).collect();
                    (leaf_attrs? == attrs.iter().map(String::as_str).collect::<Vec<_>>())
                        .then(|| role_cols.get(b.as_str()).cloned())
                        .flatten()
                }
            }
        };
        let key = schema
            .identities_of(r)
            .next()
            .and_then(|ps| ps.iter().map(map).collect::<Option<Vec<_>>>())
            .map(|v| KeyInfo { table: t.name.clone(), columns: v.concat(), attrs: None });
        t.primary_key = key.as_ref().map(|k| k.columns.clone());
        table_constraints(schema, r, &mut t, key.as_ref(), &mut cov, &map);
        for c in schema.constraints() {
            match c {
                ConstraintStatement::SingleRole { role, rel, .. } if rel == r => match role_cols.get(role.as_str()) {
                    Some(cols) => {
                        t.uniques.push(cols.clone());
                        cov.expressed(c);
                    }
                    None => cov.unexpressed(c, "the role has no columns"),
                },
                ConstraintStatement::MandatoryRole { rel, .. } if rel == r => {
                    cov.unexpressed(c, "mandatory participation needs a check across tables")
                }
                _ => {}
            }
        }
        tables.push(t);
        attribute_tables(schema, r, key.as_ref(), &mut tables, &mut cov);
    }

    // Participation constraints of the parent side of absorbed relationships.
    for c in schema.constraints() {
        if let ConstraintStatement::MandatoryRole { rel, .. } | ConstraintStatement::SingleRole { rel, .. } = c {
            if absorbed.contains(&rel.as_str()) {
                cov.unexpressed(c, "participation on the parent side of an absorbed relationship");
            }
        }
    }

    let mut artifact = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            artifact.push('\n');
        }
        t.render(&mut artifact);
    }
    let unexpressed = cov.finish();
    append_comments(&mut artifact, "-- ", &unexpressed);
    EmitterOutput { artifact, unexpressed }
}

/// Single-valued attributes of `owner` as columns; records attribute
/// participation constraints.
fn add_attribute_columns(schema: &Schema, owner: &str, t: &mut Table, cov: &mut Coverage<'_>) {
    for a in schema.attributes_of(owner) {
        if schema.is_single_attr(owner, a) {
            t.columns.push((column_name(owner, a), schema.is_mandatory_attr(owner, a)));
        }
    }
    for c in schema.constraints() {
        match c {
            ConstraintStatement::SingleAttr { owner: o, .. } if o == owner => cov.expressed(c),
            ConstraintStatement::MandatoryAttr { owner: o, attr } if o == owner => {
                if schema.is_single_attr(owner, attr) {
                    cov.expressed(c)
                } else {
                    cov.unexpressed(c, "a multi-valued attribute table cannot require a value")
                }
            }
            _ => {}
        }
    }
}

/// Identity and key constraints of `owner` that map onto columns of its
/// table. The first identity is the primary key; others become UNIQUE.
fn table_constraints(
    schema: &Schema,
    owner: &str,
    t: &mut Table,
    key: Option<&KeyInfo>,
    cov: &mut Coverage<'_>,
    map: &dyn Fn(&Pattern) -> Option<Vec<String>>,
) {
    let mut first_identity = true;
    for c in schema.constraints() {
        match c {
            ConstraintStatement::Identity { owner: o, patterns } if o == owner => {
                if first_identity && key.is_some() {
                    cov.expressed(c);
                } else if let Some(cols) = patterns.iter().map(map).collect::<Option<Vec<_>>>() {
                    let cols = cols.concat();
                    t.set_not_null(&cols);
                    t.uniques.push(cols);
                    cov.expressed(c);
                } else {
                    cov.unexpressed(c, "key navigates beyond an inlined identifying relationship");
                }
                first_identity = false;
            }
            ConstraintStatement::Key { owner: o, patterns } if o == owner => {
                if let [Pattern::Attr(a)] = &patterns[..] {
                    if schema.attr_owner(a) == Some(owner) && !schema.is_single_attr(owner, a) {
                        // Stated on the attribute's own table.
                        if key.is_some() {
                            cov.expressed(c);
                        } else {
                            cov.unexpressed(c, "the owner has no primary key");
                        }
                        continue;
                    }
                }
                match patterns.iter().map(map).collect::<Option<Vec<_>>>() {
                    Some(cols) => {
                        t.uniques.push(cols.concat());
                        cov.expressed(c);
                    }
                    None => cov.unexpressed(c, "key navigates beyond an inlined identifying relationship"),
                }
            }
            _ => {}
        }
    }
}

/// One table per multi-valued attribute of `owner`.
fn attribute_tables(
    schema: &Schema,
    owner: &str,
    key: Option<&KeyInfo>,
    tables: &mut Vec<Table>,
    cov: &mut Coverage<'_>,
) {
    for a in schema.attributes_of(owner) {
        if schema.is_single_attr(owner, a) {
            continue;
        }
        let value = column_name(owner, a);
        let mut t = Table::new(format!("{}s", capitalize(a)));
        t.columns.push((value.clone(), true));
        let mut pk = alloc::vec![value.clone()];
        match key {
            Some(k) => {
                for c in &k.columns {
                    t.columns.push((c.clone(), true));
                }
                t.foreign_keys.push((k.columns.clone(), k.table.clone(), k.columns.clone()));
                pk.extend(k.columns.iter().cloned());
            }
            None => cov.note(format!("Attribute({owner}, {a})"), format!("`{owner}` has no primary key to reference")),
        }
        t.primary_key = Some(pk);
        let keyed = schema.constraints().iter().any(|c| {
            matches!(c, ConstraintStatement::Key { owner: o, patterns } if o == owner && matches!(&patterns[..], [Pattern::Attr(x)] if x == a))
        });
        if keyed {
            t.uniques.push(alloc::vec![value]);
        }
        tables.push(t);
    }
}
