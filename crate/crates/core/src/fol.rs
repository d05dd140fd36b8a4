//! First-order formulas over the graph signature and a brute-force
//! evaluator used as a reference implementation.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::KnowledgeGraph;
use crate::pattern::write_list;
use crate::value::Term;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `A(x, y)` for an attribute or `B(x, y)` for a role.
    Binary(String, Var, Var),
    /// `E(x)` or `R(x)`.
    Class(String, Var),
    Eq(Var, Var),
}

impl Atom {
    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Atom::Binary(_, a, b) | Atom::Eq(a, b) => alloc::vec![a, b],
            Atom::Class(_, a) => alloc::vec![a],
        }
    }

    fn map_vars(&self, f: &dyn Fn(&Var) -> Var) -> Atom {
        match self {
            Atom::Binary(n, a, b) => Atom::Binary(n.clone(), f(a), f(b)),
            Atom::Class(n, a) => Atom::Class(n.clone(), f(a)),
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Binary(n, a, b) => write!(f, "{n}({a}, {b})"),
            Atom::Class(n, a) => write!(f, "{n}({a})"),
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn binary(name: &str, a: &Var, b: &Var) -> Formula {
        Formula::Atom(Atom::Binary(name.into(), a.clone(), b.clone()))
    }

    pub fn class(name: &str, a: &Var) -> Formula {
        Formula::Atom(Atom::Class(name.into(), a.clone()))
    }

    pub fn eq(a: &Var, b: &Var) -> Formula {
        Formula::Atom(Atom::Eq(a.clone(), b.clone()))
    }

    /// Free variables, sorted.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::And(ps) | Formula::Or(ps) => {
                for p in ps {
                    p.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Applies `f` to every variable occurrence, bound or free.
    pub fn rename(&self, f: &dyn Fn(&Var) -> Var) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_vars(f)),
            Formula::And(ps) => Formula::And(ps.iter().map(|p| p.rename(f)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| p.rename(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.rename(f), b.rename(f)),
            Formula::Exists(vs, b) => Formula::Exists(vs.iter().map(f).collect(), Box::new(b.rename(f))),
            Formula::Forall(vs, b) => Formula::Forall(vs.iter().map(f).collect(), Box::new(b.rename(f))),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn joined(f: &mut fmt::Formatter<'_>, ps: &[Formula], op: &str) -> fmt::Result {
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                p.fmt_operand(f)?;
            }
            Ok(())
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => a.fmt(f),
            Formula::And(ps) => joined(f, ps, "∧"),
            Formula::Or(ps) => joined(f, ps, "∨"),
            Formula::Implies(a, b) => {
                a.fmt_operand(f)?;
                f.write_str(" ⇒ ")?;
                b.fmt_operand(f)
            }
            Formula::Exists(vs, b) => {
                f.write_str("∃")?;
                write_list(f, vs)?;
                write!(f, ". {b}")
            }
            Formula::Forall(vs, b) => {
                f.write_str("∀")?;
                write_list(f, vs)?;
                write!(f, ". {b}")
            }
        }
    }
}

impl Formula {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Exists(..) | Formula::Forall(..) => {
                write!(f, "({self})")
            }
            _ => fmt::Display::fmt(self, f),
        }
    }
}

pub type Assignment = BTreeMap<Var, Term>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("UNSUPPORTED-FORMULA: {0}")]
    Unsupported(String),
}

/// Default number of atom evaluations after which [`eval_formula`] gives up.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Returns every extension of `binding` to the free variables of `f`
/// that satisfies `f` in `graph`.
///
/// Variables range over the instance ids and data values of the graph.
/// Evaluation grounds quantifiers by enumeration and is exponential in the
/// number of variables; it is meant for small graphs.
pub fn eval_formula(
    graph: &KnowledgeGraph,
    f: &Formula,
    binding: &Assignment,
) -> Result<Vec<Assignment>, FormulaError> {
    eval_formula_with_budget(graph, f, binding, DEFAULT_BUDGET)
}

pub fn eval_formula_with_budget(
    graph: &KnowledgeGraph,
    f: &Formula,
    binding: &Assignment,
    budget: u64,
) -> Result<Vec<Assignment>, FormulaError> {
    let mut ev = Evaluator { graph, domain: graph.domain(), steps: 0, budget };
    let free: Vec<Var> = f.free_vars().into_iter().filter(|v| !binding.contains_key(v)).collect();
    let mut out = Vec::new();
    let mut asg = binding.clone();
    ev.search(f, &free, &mut asg, &mut |a| out.push(a.clone()))?;
    Ok(out)
}

/// Convenience wrapper: does the closed formula `f` hold in `graph`?
pub fn holds(graph: &KnowledgeGraph, f: &Formula) -> Result<bool, FormulaError> {
    Ok(!eval_formula(graph, f, &Assignment::new())?.is_empty())
}

struct Evaluator<'g> {
    graph: &'g KnowledgeGraph,
    domain: Vec<Term>,
    steps: u64,
    budget: u64,
}

impl Evaluator<'_> {
    fn tick(&mut self) -> Result<(), FormulaError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(FormulaError::Unsupported("grounding exceeds the evaluation budget".into()));
        }
        Ok(())
    }

    /// Assigns `vars` in order, pruning as soon as `f` is decided false.
    fn search(
        &mut self,
        f: &Formula,
        vars: &[Var],
        asg: &mut Assignment,
        found: &mut dyn FnMut(&Assignment),
    ) -> Result<bool, FormulaError> {
        match self.eval(f, asg)? {
            Some(false) => return Ok(false),
            Some(true) if vars.is_empty() => {
                found(asg);
                return Ok(true);
            }
            _ => {}
        }
        let Some((v, rest)) = vars.split_first() else {
            return Ok(false);
        };
        let mut any = false;
        for i in 0..self.domain.len() {
            asg.insert(v.clone(), self.domain[i].clone());
            any |= self.search(f, rest, asg, found)?;
        }
        asg.remove(v);
        Ok(any)
    }

    /// Three-valued evaluation: `None` when the result depends on an
    /// unassigned variable.
    fn eval(&mut self, f: &Formula, asg: &mut Assignment) -> Result<Option<bool>, FormulaError> {
        Ok(match f {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Atom(a) => {
                self.tick()?;
                self.eval_atom(a, asg)
            }
            Formula::And(ps) => {
                let mut all = true;
                for p in ps {
                    match self.eval(p, asg)? {
                        Some(false) => return Ok(Some(false)),
                        Some(true) => {}
                        None => all = false,
                    }
                }
                all.then_some(true)
            }
            Formula::Or(ps) => {
                let mut none = true;
                for p in ps {
                    match self.eval(p, asg)? {
                        Some(true) => return Ok(Some(true)),
                        Some(false) => {}
                        None => none = false,
                    }
                }
                none.then_some(false)
            }
            Formula::Implies(a, b) => match self.eval(a, asg)? {
                Some(false) => Some(true),
                Some(true) => self.eval(b, asg)?,
                None => match self.eval(b, asg)? {
                    Some(true) => Some(true),
                    _ => None,
                },
            },
            Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
                let outer: Vec<Var> = f.free_vars().into_iter().collect();
                if outer.iter().any(|v| !asg.contains_key(v)) {
                    return Ok(None);
                }
                let saved: Vec<Option<Term>> = vs.iter().map(|v| asg.remove(v)).collect();
                let result = if matches!(f, Formula::Exists(..)) {
                    self.exists(body, vs, asg)?
                } else {
                    !self.exists(&Formula::implies((**body).clone(), Formula::False), vs, asg)?
                };
                for (v, old) in vs.iter().zip(saved) {
                    match old {
                        Some(t) => {
                            asg.insert(v.clone(), t);
                        }
                        None => {
                            asg.remove(v);
                        }
                    }
                }
                Some(result)
            }
        })
    }

    /// Is there an assignment of `vars` making `body` true?
    fn exists(&mut self, body: &Formula, vars: &[Var], asg: &mut Assignment) -> Result<bool, FormulaError> {
        match self.eval(body, asg)? {
            Some(false) => return Ok(false),
            Some(true) => return Ok(vars.is_empty() || !self.domain.is_empty()),
            None => {}
        }
        let Some((v, rest)) = vars.split_first() else {
            return Ok(false);
        };
        for i in 0..self.domain.len() {
            asg.insert(v.clone(), self.domain[i].clone());
            if self.exists(body, rest, asg)? {
                asg.remove(v);
                return Ok(true);
            }
        }
        asg.remove(v);
        Ok(false)
    }

    fn eval_atom(&self, a: &Atom, asg: &Assignment) -> Option<bool> {
        let g = self.graph;
        Some(match a {
            Atom::Binary(name, x, y) => {
                let (x, y) = (asg.get(x)?, asg.get(y)?);
                match (x, y) {
                    (Term::Id(s), Term::Value(v)) => g.attribute_values(s, name).contains(v),
                    (Term::Id(r), Term::Id(e)) => g.role_fillers(r, name).contains(e),
                    _ => false,
                }
            }
            Atom::Class(name, x) => match asg.get(x)? {
                Term::Id(id) => g.has_type(id, name),
                Term::Value(_) => false,
            },
            Atom::Eq(x, y) => asg.get(x)? == asg.get(y)?,
        })
    }
}
