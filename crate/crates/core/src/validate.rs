//! Validation of knowledge graphs against schemas.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::diagnostic::{Code, Diagnostic};
use crate::graph::KnowledgeGraph;
use crate::hierarchy::ancestors_unchecked;
use crate::pattern::Pattern;
use crate::query::{witness_tuples, Tuple};
use crate::schema::{ConstraintStatement, Schema, ShapeStatement, StatementRef};
use crate::value::{NodeId, Term};

/// Which semantics a report was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Semantics {
    Core,
    ImplicitDisjointness,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationStats {
    pub statements: usize,
    pub entity_instances: usize,
    pub relationship_instances: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub conforms: bool,
    pub semantics: Semantics,
    pub diagnostics: Vec<Diagnostic>,
    pub stats: ValidationStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Maximum number of diagnostics kept per statement or data-model
    /// condition; the rest is summarized by a `TRUNCATED` warning.
    pub limit: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { limit: 100 }
    }
}

fn ids(ids: &[&NodeId]) -> Vec<Term> {
    ids.iter().map(|id| Term::Id((*id).clone())).collect()
}

/// Checks the three data-model conditions: facts sit on instances of the
/// declaring owner (DM1), roles are partial functions (DM2), and every
/// relationship instance has exactly one declared relationship (DM3).
pub fn check_data_model(schema: &Schema, graph: &KnowledgeGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (id, attr, value) in graph.attribute_facts() {
        match schema.attr_owner(attr) {
            Some(owner) if graph.has_type(id, owner) => {}
            Some(owner) => out.push(
                Diagnostic::error(
                    Code::Dm1,
                    format!("{id} {attr}"),
                    format!("`{attr}` is asserted on `{id}`, which is not a {owner}"),
                )
                .with_witnesses([Term::Id(id.clone()), Term::Value(value.clone())]),
            ),
            None => out.push(
                Diagnostic::error(Code::Dm1, format!("{id} {attr}"), format!("`{attr}` is not a declared attribute"))
                    .with_witnesses([Term::Id(id.clone())]),
            ),
        }
    }
    for (rel, role, target) in graph.role_facts() {
        match schema.role_owner(role) {
            Some((owner, _)) if graph.has_type(rel, owner) => {}
            _ => out.push(
                Diagnostic::error(
                    Code::Dm1,
                    format!("{rel} {role}"),
                    format!("role `{role}` is asserted on `{rel}`, which does not carry it"),
                )
                .with_witnesses(ids(&[rel, target])),
            ),
        }
    }
    // Role facts are sorted by (relationship instance, role), so equal
    // keys are adjacent.
    let facts: Vec<(&NodeId, &str, &NodeId)> = graph.role_facts().collect();
    for group in facts.chunk_by(|a, b| a.0 == b.0 && a.1 == b.1) {
        if group.len() > 1 {
            let (rel, role, _) = group[0];
            let mut w = alloc::vec![rel];
            w.extend(group.iter().map(|f| f.2));
            out.push(
                Diagnostic::error(
                    Code::Dm2,
                    format!("{rel} {role}"),
                    format!("role `{role}` of `{rel}` has several fillers"),
                )
                .with_witnesses(ids(&w)),
            );
        }
    }
    for (rel, ty) in graph.relationship_memberships() {
        if !schema.is_relationship(ty) {
            out.push(
                Diagnostic::error(Code::Dm3, rel.as_str(), format!("`{ty}` is not a declared relationship"))
                    .with_witnesses(ids(&[rel])),
            );
        }
    }
    for (id, types) in graph.entity_memberships() {
        if types.is_empty() || types.iter().any(|t| !schema.is_entity(t)) {
            out.push(
                Diagnostic::error(Code::Dm3, id.as_str(), "entity instance outside the declared entities")
                    .with_witnesses(ids(&[id])),
            );
        }
    }
    out
}

/// Evaluates the first-order clause of one statement and returns one
/// diagnostic per violation witness.
pub fn check_statement(schema: &Schema, graph: &KnowledgeGraph, stmt: StatementRef<'_>) -> Vec<Diagnostic> {
    let subject = stmt.to_string();
    let mut out = Vec::new();
    match stmt {
        StatementRef::Shape(s) => match s {
            ShapeStatement::Entity(_) | ShapeStatement::Relationship(_) => {}
            ShapeStatement::Attribute { owner, attr } => {
                for (id, a, v) in graph.attribute_facts() {
                    if a == attr && !graph.has_type(id, owner) {
                        out.push(
                            Diagnostic::error(
                                Code::ViolAttrTyping,
                                &subject,
                                format!("`{id}` has `{attr}` but is not a {owner}"),
                            )
                            .with_witnesses([Term::Id(id.clone()), Term::Value(v.clone())]),
                        );
                    }
                }
            }
            ShapeStatement::Role { rel, role, entity } => {
                for (r, b, e) in graph.role_facts() {
                    if b == role && !(graph.has_type(r, rel) && graph.has_type(e, entity)) {
                        out.push(
                            Diagnostic::error(
                                Code::ViolRoleTyping,
                                &subject,
                                format!("`{r}` links `{e}` as {role}, expected a {rel} linking a {entity}"),
                            )
                            .with_witnesses(ids(&[r, e])),
                        );
                    }
                }
            }
        },
        StatementRef::Constraint(c) => check_constraint(schema, graph, c, &subject, &mut out),
    }
    out
}

fn all_ids(graph: &KnowledgeGraph) -> impl Iterator<Item = &NodeId> {
    graph.entity_ids().chain(graph.relationship_ids())
}

fn check_constraint(
    schema: &Schema,
    graph: &KnowledgeGraph,
    c: &ConstraintStatement,
    subject: &str,
    out: &mut Vec<Diagnostic>,
) {
    match c {
        ConstraintStatement::MandatoryAttr { owner, attr } => {
            for x in graph.extension(owner) {
                if graph.attribute_values(x, attr).is_empty() {
                    out.push(
                        Diagnostic::error(Code::ViolMandatoryAttr, subject, format!("`{x}` has no value for `{attr}`"))
                            .with_witnesses(ids(&[x])),
                    );
                }
            }
        }
        ConstraintStatement::SingleAttr { attr, .. } => {
            for x in all_ids(graph) {
                let values = graph.attribute_values(x, attr);
                if values.len() > 1 {
                    let mut w = alloc::vec![Term::Id(x.clone())];
                    w.extend(values.iter().cloned().map(Term::Value));
                    out.push(
                        Diagnostic::error(
                            Code::ViolSingleAttr,
                            subject,
                            format!("`{x}` has {} values for `{attr}`", values.len()),
                        )
                        .with_witnesses(w),
                    );
                }
            }
        }
        ConstraintStatement::MandatoryRole { entity, role, rel } => {
            for x in graph.extension(entity) {
                if graph.role_sources(role, x).is_empty() {
                    out.push(
                        Diagnostic::error(
                            Code::ViolMandatoryRole,
                            subject,
                            format!("`{x}` does not participate in any {rel} as {role}"),
                        )
                        .with_witnesses(ids(&[x])),
                    );
                }
            }
        }
        ConstraintStatement::SingleRole { role, rel, .. } => {
            for x in graph.entity_ids() {
                let rels = graph.role_sources(role, x);
                if rels.len() > 1 {
                    let mut w = alloc::vec![x];
                    w.extend(rels);
                    out.push(
                        Diagnostic::error(
                            Code::ViolSingleRole,
                            subject,
                            format!("`{x}` participates in {} instances of {rel} as {role}", rels.len()),
                        )
                        .with_witnesses(ids(&w)),
                    );
                }
            }
        }
        ConstraintStatement::Key { owner, patterns } => check_key(schema, graph, owner, patterns, false, subject, out),
        ConstraintStatement::Identity { owner, patterns } => {
            check_key(schema, graph, owner, patterns, true, subject, out)
        }
        ConstraintStatement::Isa { sub, sup } => {
            for x in graph.extension(sub) {
                if !graph.has_type(x, sup) {
                    out.push(
                        Diagnostic::error(Code::ViolIsa, subject, format!("`{x}` is a {sub} but not a {sup}"))
                            .with_witnesses(ids(&[x])),
                    );
                }
            }
        }
        ConstraintStatement::Disjoint(a, b) => {
            for x in graph.extension(a) {
                if graph.has_type(x, b) {
                    out.push(
                        Diagnostic::error(Code::ViolDisjoint, subject, format!("`{x}` is both a {a} and a {b}"))
                            .with_witnesses(ids(&[x])),
                    );
                }
            }
        }
        ConstraintStatement::Cover { members, covered } => {
            for x in graph.extension(covered) {
                if !members.iter().any(|m| graph.has_type(x, m)) {
                    out.push(
                        Diagnostic::error(
                            Code::ViolCover,
                            subject,
                            format!("`{x}` is a {covered} but none of {}", members.join(", ")),
                        )
                        .with_witnesses(ids(&[x])),
                    );
                }
            }
        }
    }
}

fn check_key(
    schema: &Schema,
    graph: &KnowledgeGraph,
    owner: &str,
    patterns: &[Pattern],
    identity: bool,
    subject: &str,
    out: &mut Vec<Diagnostic>,
) {
    let mut buckets: BTreeMap<Tuple, Vec<&NodeId>> = BTreeMap::new();
    let mut counts = Vec::new();
    for x in graph.extension(owner) {
        // Patterns that are not rooted at `owner` are reported by the
        // well-formedness checker; there is nothing to evaluate here.
        let Ok(tuples) = witness_tuples(schema, graph, owner, patterns, x) else { return };
        counts.push((x, tuples.len()));
        for t in tuples {
            buckets.entry(t).or_default().push(x);
        }
    }
    for (tuple, xs) in &buckets {
        if xs.len() > 1 {
            let mut w = ids(xs);
            w.extend(tuple.iter().cloned());
            out.push(
                Diagnostic::error(
                    Code::ViolKey,
                    subject,
                    format!("{} share the key value ({})", join_ids(xs), join_terms(tuple)),
                )
                .with_witnesses(w),
            );
        }
    }
    if identity {
        for (x, n) in counts {
            if n != 1 {
                let what = if n == 0 { "no key value" } else { "several key values" };
                out.push(
                    Diagnostic::error(Code::ViolIdentity, subject, format!("`{x}` has {what} ({n} tuples)"))
                        .with_witnesses(ids(&[x])),
                );
            }
        }
    }
}

fn join_ids(xs: &[&NodeId]) -> String {
    xs.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(", ")
}

fn join_terms(ts: &[Term]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn push_capped(out: &mut Vec<Diagnostic>, mut batch: Vec<Diagnostic>, subject: &str, limit: usize) {
    if batch.len() > limit {
        let dropped = batch.len() - limit;
        batch.truncate(limit);
        batch.push(Diagnostic::warning(Code::Truncated, subject, format!("{dropped} further diagnostics omitted")));
    }
    out.extend(batch);
}

fn stats(schema: &Schema, graph: &KnowledgeGraph) -> ValidationStats {
    ValidationStats {
        statements: schema.shape().len() + schema.constraints().len(),
        entity_instances: graph.entity_count(),
        relationship_instances: graph.relationship_count(),
    }
}

fn report(semantics: Semantics, diagnostics: Vec<Diagnostic>, stats: ValidationStats) -> ValidationReport {
    ValidationReport { conforms: !diagnostics.iter().any(Diagnostic::is_error), semantics, diagnostics, stats }
}

pub fn validate_core(schema: &Schema, graph: &KnowledgeGraph) -> ValidationReport {
    validate_core_with(schema, graph, &ValidationOptions::default())
}

/// Core semantics: the data-model conditions, then every statement's
/// clause. Statement clauses presuppose the data-model conditions and are
/// only evaluated when those hold.
pub fn validate_core_with(schema: &Schema, graph: &KnowledgeGraph, opts: &ValidationOptions) -> ValidationReport {
    let mut diagnostics = Vec::new();
    let dm = check_data_model(schema, graph);
    let dm_ok = dm.is_empty();
    for code in [Code::Dm1, Code::Dm2, Code::Dm3] {
        let batch: Vec<Diagnostic> = dm.iter().filter(|d| d.code == code).cloned().collect();
        push_capped(&mut diagnostics, batch, code.as_str(), opts.limit);
    }
    if dm_ok {
        for stmt in schema.statements() {
            let batch = check_statement(schema, graph, stmt);
            push_capped(&mut diagnostics, batch, &stmt.to_string(), opts.limit);
        }
    }
    report(Semantics::Core, diagnostics, stats(schema, graph))
}

/// Unordered pairs of declared entities without a common `Isa`-ancestor,
/// each with the smaller name first.
pub fn implicit_disjoint_pairs(schema: &Schema) -> BTreeSet<(String, String)> {
    let ancestors: Vec<(&String, BTreeSet<String>)> =
        schema.entities().iter().map(|e| (e, ancestors_unchecked(schema, e))).collect();
    let mut out = BTreeSet::new();
    for (i, (a, aa)) in ancestors.iter().enumerate() {
        for (b, bb) in &ancestors[i + 1..] {
            if aa.is_disjoint(bb) {
                let pair = if a < b { ((*a).clone(), (*b).clone()) } else { ((*b).clone(), (*a).clone()) };
                out.insert(pair);
            }
        }
    }
    out
}

pub fn validate_implicit_disjointness(schema: &Schema, graph: &KnowledgeGraph) -> ValidationReport {
    validate_implicit_disjointness_with(schema, graph, &ValidationOptions::default())
}

/// Core semantics plus disjointness of every pair of entities without a
/// common ancestor.
pub fn validate_implicit_disjointness_with(
    schema: &Schema,
    graph: &KnowledgeGraph,
    opts: &ValidationOptions,
) -> ValidationReport {
    let mut diagnostics = validate_core_with(schema, graph, opts).diagnostics;
    for (a, b) in implicit_disjoint_pairs(schema) {
        let subject = format!("Disjoint({a}, {b})");
        let batch: Vec<Diagnostic> = graph
            .extension(&a)
            .filter(|x| graph.has_type(x, &b))
            .map(|x| {
                Diagnostic::error(
                    Code::ViolImplicitDisjoint,
                    &subject,
                    format!("`{x}` is both a {a} and a {b}, which share no ancestor"),
                )
                .with_witnesses(ids(&[x]))
            })
            .collect();
        push_capped(&mut diagnostics, batch, &subject, opts.limit);
    }
    report(Semantics::ImplicitDisjointness, diagnostics, stats(schema, graph))
}
