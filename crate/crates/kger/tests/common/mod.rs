#![allow(dead_code)]

use std::collections::BTreeSet;

use kger::{load_graph, parse_schema};
use kger_core::hierarchy::{ancestors_unchecked, descendants_of};
use kger_core::schema::stmt::*;
use kger_core::wf::check_well_formed;
use kger_core::{build_schema, GraphBuilder, KnowledgeGraph, Pattern, Schema, Statement, Value};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const RUNNING_EXAMPLE: &str = include_str!("../fixtures/running_example.kger");
pub const G0: &str = include_str!("../fixtures/g0.json");

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn running_example() -> Schema {
    parse_schema(RUNNING_EXAMPLE).expect("running example parses")
}

pub fn g0(schema: &Schema) -> KnowledgeGraph {
    load_graph(G0, schema).expect("G0 loads")
}

/// `msg(author(fname, lname))`, the navigational part of Message's identity.
pub fn p4() -> Pattern {
    Pattern::nav("msg", vec![Pattern::nav("author", vec![Pattern::attr("fname"), Pattern::attr("lname")])])
}

/// Runs `f`, prints one result line, and fails if it failed or ran longer
/// than `limit_ms`.
pub fn timed(name: &str, limit_ms: u128, f: impl FnOnce() -> Result<(), String>) {
    let start = std::time::Instant::now();
    let result = f();
    let elapsed = start.elapsed().as_millis();
    let verdict = match (&result, elapsed <= limit_ms) {
        (Ok(()), true) => "PASS".to_string(),
        (Ok(()), false) => format!("FAIL (over the {limit_ms} ms limit)"),
        (Err(e), _) => format!("FAIL ({e})"),
    };
    println!("{name}: {verdict} in {elapsed} ms");
    assert!(result.is_ok() && elapsed <= limit_ms, "{name}: {verdict}");
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Random schemas, graphs, and patterns.

fn chance(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen_bool(p)
}

/// Attributes usable in a pattern rooted at entity `e`.
fn entity_attributes(schema: &Schema, e: &str) -> Vec<String> {
    ancestors_unchecked(schema, e).iter().flat_map(|a| schema.attributes_of(a).iter().cloned()).collect()
}

/// `(relationship, role)` participations usable from entity `e`.
fn entity_participations(schema: &Schema, e: &str) -> Vec<(String, String)> {
    ancestors_unchecked(schema, e).iter().flat_map(|a| schema.participations(a).iter().cloned()).collect()
}

/// A pattern rooted at `x`, or `None` when `x` has nothing to navigate.
pub fn random_pattern(rng: &mut ChaCha8Rng, schema: &Schema, x: &str, depth: usize, ground: bool) -> Option<Pattern> {
    let entity_side = schema.is_entity(x);
    let attrs: Vec<String> = if entity_side { entity_attributes(schema, x) } else { schema.attributes_of(x).to_vec() };
    // (role, the element the role leads to)
    let navs: Vec<(String, String)> = if entity_side {
        entity_participations(schema, x).into_iter().map(|(r, b)| (b, r)).collect()
    } else {
        schema.roles_of(x).to_vec()
    };
    if depth > 0 && !navs.is_empty() && (attrs.is_empty() || chance(rng, 0.45)) {
        let (b, next) = navs.choose(rng).unwrap().clone();
        let n = rng.gen_range(1..=2);
        let children: Vec<Pattern> =
            (0..n).filter_map(|_| random_pattern(rng, schema, &next, depth - 1, ground)).collect();
        if !children.is_empty() {
            return Some(Pattern::nav(&b, children));
        }
    }
    if !ground && !navs.is_empty() && (attrs.is_empty() || chance(rng, 0.25)) {
        return Some(Pattern::role(&navs.choose(rng).unwrap().0));
    }
    attrs.choose(rng).map(|a| Pattern::attr(a))
}

/// A random well-formed schema over a few entities and relationships.
pub fn random_statements(rng: &mut ChaCha8Rng) -> Vec<Statement> {
    let mut out = Vec::new();
    let n = rng.gen_range(1..=4);
    let entities: Vec<String> = (0..n).map(|i| format!("E{i}")).collect();
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, ps) in parents.iter_mut().enumerate().skip(1) {
        if chance(rng, 0.45) {
            ps.push(rng.gen_range(0..i));
            if i > 1 && chance(rng, 0.15) {
                let j = rng.gen_range(0..i);
                if !ps.contains(&j) {
                    ps.push(j);
                }
            }
        }
    }
    let mut attrs: Vec<Vec<String>> = Vec::new();
    for (i, e) in entities.iter().enumerate() {
        out.push(entity(e));
        let min = usize::from(parents[i].is_empty());
        let k = rng.gen_range(min..=2);
        let names: Vec<String> = (0..k).map(|j| format!("a{i}_{j}")).collect();
        for a in &names {
            out.push(attribute(e, a));
        }
        attrs.push(names);
    }
    for (i, ps) in parents.iter().enumerate() {
        for &p in ps {
            out.push(isa(&entities[i], &entities[p]));
        }
    }

    let m = rng.gen_range(0..=3);
    for j in 0..m {
        let r = format!("r{j}");
        out.push(relationship(&r));
        if chance(rng, 0.4) {
            out.push(attribute(&r, &format!("c{j}")));
        }
        for k in 0..rng.gen_range(1..=3) {
            let e = entities.choose(rng).unwrap();
            out.push(role(&r, &format!("b{j}_{k}"), e));
        }
    }

    let partial = build_schema(out.clone()).expect("generated shape builds");
    for i in 0..n {
        let e = &entities[i];
        if parents[i].is_empty() || chance(rng, 0.2) {
            let own = entity_attributes(&partial, e);
            let mut ps = vec![Pattern::attr(own.choose(rng).unwrap())];
            if let Some(extra) = random_pattern(rng, &partial, e, 2, true) {
                if chance(rng, 0.3) && !ps.contains(&extra) {
                    ps.push(extra);
                }
            }
            out.push(identity(e, ps));
        }
        if chance(rng, 0.35) {
            let ps: Vec<Pattern> =
                (0..rng.gen_range(1..=2)).filter_map(|_| random_pattern(rng, &partial, e, 2, false)).collect();
            if !ps.is_empty() {
                out.push(key(e, ps));
            }
        }
        for a in &attrs[i] {
            if chance(rng, 0.3) {
                out.push(mandatory_attr(e, a));
            }
            if chance(rng, 0.4) {
                out.push(single_attr(e, a));
            }
        }
    }
    for r in partial.relationships() {
        let mut ps = Vec::new();
        for (b, e) in partial.roles_of(r) {
            let own = entity_attributes(&partial, e);
            ps.push(Pattern::nav(b, vec![Pattern::attr(own.choose(rng).unwrap())]));
        }
        for c in partial.attributes_of(r) {
            ps.push(Pattern::attr(c));
            if chance(rng, 0.3) {
                out.push(mandatory_attr(r, c));
            }
            if chance(rng, 0.4) {
                out.push(single_attr(r, c));
            }
        }
        ps.shuffle(rng);
        out.push(identity(r, ps));
        for (b, e) in partial.roles_of(r) {
            if chance(rng, 0.3) {
                out.push(mandatory_role(e, b, r));
            }
            if chance(rng, 0.3) {
                out.push(single_role(e, b, r));
            }
        }
        if chance(rng, 0.2) {
            if let Some(p) = random_pattern(rng, &partial, r, 2, false) {
                out.push(key(r, vec![p]));
            }
        }
    }
    for a in &entities {
        for b in &entities {
            if a < b
                && !ancestors_unchecked(&partial, a).is_disjoint(&ancestors_unchecked(&partial, b))
                && chance(rng, 0.3)
            {
                out.push(disjoint(a, b));
            }
        }
    }
    for e in &entities {
        let below: Vec<String> = descendants_of(&partial, e).into_iter().filter(|d| d != e).collect();
        if !below.is_empty() && chance(rng, 0.4) {
            let k = rng.gen_range(1..=below.len());
            let members: Vec<&str> = below.choose_multiple(rng, k).map(String::as_str).collect();
            out.push(cover(&members, e));
        }
    }
    out.shuffle(rng);
    out
}

pub fn random_schema(rng: &mut ChaCha8Rng) -> Schema {
    let schema = build_schema(random_statements(rng)).expect("generated schema builds");
    let diags = check_well_formed(&schema);
    assert!(diags.is_empty(), "generated schema is not well-formed: {diags:?}");
    schema
}

const VALUES: [&str; 3] = ["x", "y", "z"];

/// A graph with at most `max_nodes` instances that respects the data-model
/// conditions but not necessarily the constraints. A `tidy` graph has
/// Isa-closed memberships, exactly one fresh value per attribute, and
/// well-typed role fillers, so it often conforms.
pub fn random_graph(rng: &mut ChaCha8Rng, schema: &Schema, max_nodes: usize, tidy: bool) -> KnowledgeGraph {
    let mut b = GraphBuilder::new(schema);
    let entities = schema.entities();
    let relationships = schema.relationships();
    let total = rng.gen_range(1..=max_nodes);
    let n_rel = if relationships.is_empty() { 0 } else { rng.gen_range(0..=total / 2) };
    let n_ent = (total - n_rel).max(1);

    let mut typed: Vec<(String, BTreeSet<String>)> = Vec::new();
    for i in 0..n_ent {
        let id = format!("e{i}");
        let mut types: BTreeSet<String> = BTreeSet::new();
        types.insert(entities.choose(rng).unwrap().clone());
        if chance(rng, 0.2) {
            types.insert(entities.choose(rng).unwrap().clone());
        }
        if tidy || chance(rng, 0.7) {
            types = types.iter().flat_map(|t| ancestors_unchecked(schema, t)).collect();
        }
        b.add_entity(&id, types.iter().map(String::as_str));
        typed.push((id, types));
    }
    let mut rels: Vec<(String, String)> = Vec::new();
    for i in 0..n_rel {
        let id = format!("r{i}");
        let ty = relationships.choose(rng).unwrap().clone();
        b.add_relationship(&id, &ty);
        rels.push((id, ty));
    }

    let mut fresh = 0;
    let mut fill = |b: &mut GraphBuilder, id: &str, owner: &str, rng: &mut ChaCha8Rng| {
        for a in schema.attributes_of(owner) {
            if tidy {
                fresh += 1;
                b.add_attribute(id, a, Value::text(format!("v{fresh}")));
                continue;
            }
            let k = rng.gen_range(0..=2);
            for _ in 0..k {
                b.add_attribute(id, a, Value::text(*VALUES.choose(rng).unwrap()));
            }
        }
    };
    for (id, types) in &typed {
        for t in types {
            fill(&mut b, id, t, rng);
        }
    }
    for (id, ty) in &rels {
        fill(&mut b, id, ty, rng);
        for (role, e) in schema.roles_of(ty) {
            if tidy || chance(rng, 0.85) {
                let fitting: Vec<&String> = typed.iter().filter(|(_, ts)| ts.contains(e)).map(|(id, _)| id).collect();
                let target = if !fitting.is_empty() && (tidy || chance(rng, 0.9)) {
                    fitting.choose(rng).unwrap().as_str()
                } else {
                    typed.choose(rng).unwrap().0.as_str()
                };
                b.add_role(id, role, target);
            }
        }
    }
    b.build().expect("generated graph builds")
}
