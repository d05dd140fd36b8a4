//! Pattern rootedness, translation to first-order formulas, and direct
//! evaluation of patterns on knowledge graphs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::fol::{Atom, Formula, Var};
use crate::graph::KnowledgeGraph;
use crate::hierarchy::ancestors_unchecked;
use crate::pattern::Pattern;
use crate::schema::Schema;
use crate::value::{NodeId, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("UNKNOWN-NAME: `{0}` is not declared")]
    UnknownName(String),
    #[error("NOT-ROOTED: `{pattern}` is not rooted at `{root}`")]
    NotRooted { pattern: String, root: String },
    #[error("NOT-AN-INSTANCE: `{id}` is not an instance of `{root}`")]
    NotAnInstance { id: String, root: String },
}

impl PatternError {
    pub fn code(&self) -> &'static str {
        match self {
            PatternError::UnknownName(_) => "UNKNOWN-NAME",
            PatternError::NotRooted { .. } => "NOT-ROOTED",
            PatternError::NotAnInstance { .. } => "NOT-AN-INSTANCE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Entity,
    Relationship,
}

fn side_of(schema: &Schema, x: &str) -> Result<Side, PatternError> {
    if schema.is_entity(x) {
        Ok(Side::Entity)
    } else if schema.is_relationship(x) {
        Ok(Side::Relationship)
    } else {
        Err(PatternError::UnknownName(x.into()))
    }
}

fn check_names(schema: &Schema, p: &Pattern) -> Result<(), PatternError> {
    for n in p.names() {
        if !schema.is_attribute(n) && !schema.is_role(n) {
            return Err(PatternError::UnknownName(n.into()));
        }
    }
    Ok(())
}

/// Does `x` own `attr`, directly or through an ancestor?
fn has_attribute(schema: &Schema, side: Side, x: &str, attr: &str) -> bool {
    let Some(owner) = schema.attr_owner(attr) else { return false };
    match side {
        Side::Relationship => owner == x,
        Side::Entity => ancestors_unchecked(schema, x).contains(owner),
    }
}

/// Is `p` rooted at `x`? Entities may use the attributes and
/// participations of their ancestors.
pub fn is_rooted_at(schema: &Schema, p: &Pattern, x: &str) -> Result<bool, PatternError> {
    let side = side_of(schema, x)?;
    check_names(schema, p)?;
    Ok(rooted(schema, p, side, x))
}

fn rooted(schema: &Schema, p: &Pattern, side: Side, x: &str) -> bool {
    match p {
        Pattern::Attr(n) | Pattern::Role(n) => {
            if schema.is_attribute(n) {
                return has_attribute(schema, side, x, n);
            }
            let Some((rel, entity)) = schema.role_owner(n) else { return false };
            match side {
                Side::Relationship => rel == x,
                Side::Entity => ancestors_unchecked(schema, x).contains(entity),
            }
        }
        Pattern::Nav(b, children) => {
            let Some((rel, entity)) = schema.role_owner(b) else { return false };
            !children.is_empty()
                && match side {
                    Side::Entity => {
                        ancestors_unchecked(schema, x).contains(entity)
                            && children.iter().all(|c| rooted(schema, c, Side::Relationship, rel))
                    }
                    Side::Relationship => rel == x && children.iter().all(|c| rooted(schema, c, Side::Entity, entity)),
                }
        }
    }
}

/// `φ_p^X(x, y1..yk)` in prenex form `∃z̄. atoms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFormula {
    pub instance: Var,
    pub answers: Vec<Var>,
    pub existentials: Vec<Var>,
    pub atoms: Vec<Atom>,
}

impl PatternFormula {
    pub fn to_formula(&self) -> Formula {
        Formula::exists(
            self.existentials.clone(),
            Formula::and(self.atoms.iter().cloned().map(Formula::Atom).collect()),
        )
    }

    /// Renames every variable consistently.
    pub fn rename(&self, f: &dyn Fn(&Var) -> Var) -> PatternFormula {
        let formula = self.to_formula().rename(f);
        let atoms = match formula {
            Formula::Exists(_, body) => flatten_atoms(*body),
            other => flatten_atoms(other),
        };
        PatternFormula {
            instance: f(&self.instance),
            answers: self.answers.iter().map(f).collect(),
            existentials: self.existentials.iter().map(f).collect(),
            atoms,
        }
    }
}

fn flatten_atoms(f: Formula) -> Vec<Atom> {
    match f {
        Formula::Atom(a) => alloc::vec![a],
        Formula::And(ps) => ps.into_iter().flat_map(flatten_atoms).collect(),
        _ => Vec::new(),
    }
}

impl fmt::Display for PatternFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_formula().fmt(f)
    }
}

/// Translates `p` rooted at `x`. Fresh variables are `z1, z2, ...` in
/// pre-order of the navigation nodes; answer variables are `y1..yk` in
/// leaf pre-order; the instance variable is `x`.
pub fn translate_pattern(schema: &Schema, x: &str, p: &Pattern) -> Result<PatternFormula, PatternError> {
    if !is_rooted_at(schema, p, x)? {
        return Err(PatternError::NotRooted { pattern: format!("{p}"), root: x.into() });
    }
    let side = side_of(schema, x)?;
    let mut t = Translation { answers: Vec::new(), existentials: Vec::new(), atoms: Vec::new() };
    let inst = Var::new("x");
    t.go(schema, p, side, &inst);
    Ok(PatternFormula { instance: inst, answers: t.answers, existentials: t.existentials, atoms: t.atoms })
}

struct Translation {
    answers: Vec<Var>,
    existentials: Vec<Var>,
    atoms: Vec<Atom>,
}

impl Translation {
    fn go(&mut self, schema: &Schema, p: &Pattern, side: Side, x: &Var) {
        match p {
            Pattern::Attr(n) | Pattern::Role(n) => {
                let y = Var::new(format!("y{}", self.answers.len() + 1));
                let atom = if schema.is_role(n) && side == Side::Entity {
                    Atom::Binary(n.clone(), y.clone(), x.clone())
                } else {
                    Atom::Binary(n.clone(), x.clone(), y.clone())
                };
                self.answers.push(y);
                self.atoms.push(atom);
            }
            Pattern::Nav(b, children) => {
                let z = Var::new(format!("z{}", self.existentials.len() + 1));
                self.existentials.push(z.clone());
                let next = match side {
                    Side::Entity => {
                        self.atoms.push(Atom::Binary(b.clone(), z.clone(), x.clone()));
                        Side::Relationship
                    }
                    Side::Relationship => {
                        self.atoms.push(Atom::Binary(b.clone(), x.clone(), z.clone()));
                        Side::Entity
                    }
                };
                for c in children {
                    self.go(schema, c, next, &z);
                }
            }
        }
    }
}

pub type Tuple = Vec<Term>;

/// `{ ȳ : graph ⊨ φ_p^X(inst, ȳ) }`, computed by structural recursion.
pub fn eval_pattern(
    schema: &Schema,
    graph: &KnowledgeGraph,
    x: &str,
    p: &Pattern,
    inst: &NodeId,
) -> Result<BTreeSet<Tuple>, PatternError> {
    if !is_rooted_at(schema, p, x)? {
        return Err(PatternError::NotRooted { pattern: format!("{p}"), root: x.into() });
    }
    if !graph.has_type(inst, x) {
        return Err(PatternError::NotAnInstance { id: inst.as_str().into(), root: x.into() });
    }
    Ok(eval_at(schema, graph, p, side_of(schema, x)?, inst))
}

fn eval_at(schema: &Schema, g: &KnowledgeGraph, p: &Pattern, side: Side, id: &NodeId) -> BTreeSet<Tuple> {
    match p {
        Pattern::Attr(n) | Pattern::Role(n) if schema.is_attribute(n) => {
            g.attribute_values(id, n).iter().map(|v| alloc::vec![Term::Value(v.clone())]).collect()
        }
        Pattern::Attr(n) | Pattern::Role(n) => {
            let ids = match side {
                Side::Entity => g.role_sources(n, id),
                Side::Relationship => g.role_fillers(id, n),
            };
            ids.iter().map(|i| alloc::vec![Term::Id(i.clone())]).collect()
        }
        Pattern::Nav(b, children) => {
            let (next, ids) = match side {
                Side::Entity => (Side::Relationship, g.role_sources(b, id)),
                Side::Relationship => (Side::Entity, g.role_fillers(id, b)),
            };
            let mut out = BTreeSet::new();
            for z in ids {
                let parts: Vec<BTreeSet<Tuple>> = children.iter().map(|c| eval_at(schema, g, c, next, z)).collect();
                out.extend(product(&parts));
            }
            out
        }
    }
}

/// Concatenations `t1 ++ ... ++ tk` with each `ti` drawn from `parts[i]`.
pub fn product(parts: &[BTreeSet<Tuple>]) -> BTreeSet<Tuple> {
    let mut acc: BTreeSet<Tuple> = BTreeSet::new();
    acc.insert(Vec::new());
    for part in parts {
        let mut next = BTreeSet::new();
        for prefix in &acc {
            for t in part {
                let mut joined = prefix.clone();
                joined.extend(t.iter().cloned());
                next.insert(joined);
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// `{ z̄ : graph ⊨ ψ(inst, z̄) }` for `ψ(x, z̄) = X(x) ∧ ⋀ φ_{p_i}^X(x, z̄_i)`.
pub fn witness_tuples(
    schema: &Schema,
    graph: &KnowledgeGraph,
    x: &str,
    patterns: &[Pattern],
    inst: &NodeId,
) -> Result<BTreeSet<Tuple>, PatternError> {
    let parts = patterns.iter().map(|p| eval_pattern(schema, graph, x, p, inst)).collect::<Result<Vec<_>, _>>()?;
    Ok(product(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::schema::build_schema;
    use crate::schema::stmt::*;
    use crate::value::Value;
    use alloc::string::ToString;
    use alloc::vec;

    fn schema() -> Schema {
        build_schema(vec![
            entity("University"),
            entity("Person"),
            entity("Message"),
            attribute("University", "name"),
            attribute("Person", "fname"),
            attribute("Person", "lname"),
            attribute("Message", "number"),
            relationship("studies"),
            role("studies", "student", "Person"),
            role("studies", "uni", "University"),
            relationship("wrote"),
            role("wrote", "author", "Person"),
            role("wrote", "msg", "Message"),
        ])
        .unwrap()
    }

    fn p4() -> Pattern {
        Pattern::nav("msg", vec![Pattern::nav("author", vec![Pattern::attr("fname"), Pattern::attr("lname")])])
    }

    #[test]
    fn rootedness() {
        let s = schema();
        let p3 = Pattern::nav("msg", vec![Pattern::role("author")]);
        assert!(is_rooted_at(&s, &p3, "Message").unwrap());
        assert!(is_rooted_at(&s, &Pattern::role("student"), "studies").unwrap());
        assert!(!is_rooted_at(&s, &Pattern::role("student"), "University").unwrap());
        assert!(is_rooted_at(&s, &Pattern::role("student"), "Person").unwrap());
        assert!(!is_rooted_at(&s, &Pattern::attr("fname"), "Message").unwrap());
        assert!(is_rooted_at(&s, &p4(), "Message").unwrap());
        assert_eq!(is_rooted_at(&s, &Pattern::attr("age"), "Person").unwrap_err().code(), "UNKNOWN-NAME");
        assert_eq!(is_rooted_at(&s, &Pattern::attr("fname"), "Nobody").unwrap_err().code(), "UNKNOWN-NAME");
    }

    #[test]
    fn inherited_rootedness() {
        let s = build_schema(vec![
            entity("Message"),
            entity("Post"),
            attribute("Message", "fname"),
            isa("Post", "Message"),
        ])
        .unwrap();
        assert!(is_rooted_at(&s, &Pattern::attr("fname"), "Post").unwrap());
    }

    #[test]
    fn translations() {
        let s = schema();
        let f = translate_pattern(&s, "Message", &p4()).unwrap();
        assert_eq!(f.to_string(), "∃z1, z2. msg(z1, x) ∧ author(z1, z2) ∧ fname(z2, y1) ∧ lname(z2, y2)");
        assert_eq!(f.answers.len(), 2);
        let f = translate_pattern(&s, "Person", &Pattern::role("student")).unwrap();
        assert_eq!(f.to_string(), "student(y1, x)");
        let f = translate_pattern(&s, "University", &Pattern::attr("name")).unwrap();
        assert_eq!(f.to_string(), "name(x, y1)");
        let f = translate_pattern(&s, "studies", &Pattern::role("student")).unwrap();
        assert_eq!(f.to_string(), "student(x, y1)");
        assert_eq!(translate_pattern(&s, "Person", &Pattern::attr("name")).unwrap_err().code(), "NOT-ROOTED");
    }

    #[test]
    fn evaluation() {
        let s = schema();
        let mut b = GraphBuilder::new(&s);
        b.add_entity("pA", ["Person"])
            .add_entity("m1", ["Message"])
            .add_relationship("w1", "wrote")
            .add_attribute("pA", "fname", Value::text("Ada"))
            .add_attribute("pA", "lname", Value::text("Lovelace"))
            .add_role("w1", "author", "pA")
            .add_role("w1", "msg", "m1");
        let g = b.build().unwrap();
        let got = eval_pattern(&s, &g, "Message", &p4(), &"m1".into()).unwrap();
        let want: BTreeSet<Tuple> = [vec![Term::text("Ada"), Term::text("Lovelace")]].into_iter().collect();
        assert_eq!(got, want);

        let got = eval_pattern(&s, &g, "Person", &Pattern::role("author"), &"pA".into()).unwrap();
        assert_eq!(got.into_iter().collect::<Vec<_>>(), [vec![Term::id("w1")]]);

        let err = eval_pattern(&s, &g, "Person", &Pattern::attr("fname"), &"m1".into()).unwrap_err();
        assert_eq!(err.code(), "NOT-AN-INSTANCE");
        assert!(eval_pattern(&s, &g, "Message", &Pattern::attr("number"), &"m1".into()).unwrap().is_empty());
    }

    #[test]
    fn products() {
        let a: BTreeSet<Tuple> = [vec![Term::text("a")], vec![Term::text("b")]].into_iter().collect();
        let c: BTreeSet<Tuple> = [vec![Term::text("c")]].into_iter().collect();
        assert_eq!(product(&[a.clone(), c.clone()]).len(), 2);
        assert!(product(&[a, BTreeSet::new(), c]).is_empty());
        assert_eq!(product(&[]).len(), 1);
    }
}
