//! The first-order reading of each schema statement.
//!
//! These formulas drive `--explain` output and serve as the reference the
//! validator is tested against. Key and identity clauses are written in
//! prenex form: the existential variables of each pattern formula become
//! universal variables of the implication's antecedent.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::fol::{Atom, Formula, Var};
use crate::pattern::Pattern;
use crate::query::{translate_pattern, PatternError};
use crate::schema::{ConstraintStatement, Schema, ShapeStatement, StatementRef};

fn v(name: &str) -> Var {
    Var::new(name)
}

/// The clause of a statement. Fails only for key patterns that cannot be
/// translated (undeclared names or patterns not rooted at the subject).
pub fn clause(schema: &Schema, stmt: StatementRef<'_>) -> Result<Formula, PatternError> {
    let (x, y, z) = (v("x"), v("y"), v("z"));
    Ok(match stmt {
        StatementRef::Shape(s) => match s {
            ShapeStatement::Entity(_) | ShapeStatement::Relationship(_) => Formula::True,
            ShapeStatement::Attribute { owner, attr } => Formula::forall(
                alloc::vec![x.clone(), y.clone()],
                Formula::implies(Formula::binary(attr, &x, &y), Formula::class(owner, &x)),
            ),
            ShapeStatement::Role { rel, role, entity } => Formula::forall(
                alloc::vec![x.clone(), y.clone()],
                Formula::implies(
                    Formula::binary(role, &x, &y),
                    Formula::and(alloc::vec![Formula::class(rel, &x), Formula::class(entity, &y)]),
                ),
            ),
        },
        StatementRef::Constraint(c) => match c {
            ConstraintStatement::MandatoryAttr { owner, attr } => Formula::forall(
                alloc::vec![x.clone()],
                Formula::implies(
                    Formula::class(owner, &x),
                    Formula::exists(alloc::vec![y.clone()], Formula::binary(attr, &x, &y)),
                ),
            ),
            ConstraintStatement::SingleAttr { attr, .. } => Formula::forall(
                alloc::vec![x.clone(), y.clone(), z.clone()],
                Formula::implies(
                    Formula::and(alloc::vec![Formula::binary(attr, &x, &y), Formula::binary(attr, &x, &z)]),
                    Formula::eq(&y, &z),
                ),
            ),
            ConstraintStatement::MandatoryRole { entity, role, .. } => Formula::forall(
                alloc::vec![x.clone()],
                Formula::implies(
                    Formula::class(entity, &x),
                    Formula::exists(alloc::vec![y.clone()], Formula::binary(role, &y, &x)),
                ),
            ),
            ConstraintStatement::SingleRole { role, .. } => Formula::forall(
                alloc::vec![x.clone(), y.clone(), z.clone()],
                Formula::implies(
                    Formula::and(alloc::vec![Formula::binary(role, &y, &x), Formula::binary(role, &z, &x)]),
                    Formula::eq(&y, &z),
                ),
            ),
            ConstraintStatement::Key { owner, patterns } => key_clause(schema, owner, patterns)?,
            ConstraintStatement::Identity { owner, patterns } => Formula::and(alloc::vec![
                key_clause(schema, owner, patterns)?,
                at_least_one(schema, owner, patterns)?,
                at_most_one(schema, owner, patterns)?,
            ]),
            ConstraintStatement::Isa { sub, sup } => Formula::forall(
                alloc::vec![x.clone()],
                Formula::implies(Formula::class(sub, &x), Formula::class(sup, &x)),
            ),
            ConstraintStatement::Disjoint(a, b) => disjointness(a, b),
            ConstraintStatement::Cover { members, covered } => Formula::forall(
                alloc::vec![x.clone()],
                Formula::implies(
                    Formula::class(covered, &x),
                    Formula::or(members.iter().map(|m| Formula::class(m, &x)).collect()),
                ),
            ),
        },
    })
}

/// `∀x. E1(x) ∧ E2(x) ⇒ false`.
pub fn disjointness(a: &str, b: &str) -> Formula {
    let x = v("x");
    Formula::forall(
        alloc::vec![x.clone()],
        Formula::implies(Formula::and(alloc::vec![Formula::class(a, &x), Formula::class(b, &x)]), Formula::False),
    )
}

/// Atoms, answer variables, and existential variables.
type PatternAtoms = (Vec<Atom>, Vec<Var>, Vec<Var>);

/// Atoms of `⋀_i φ_{p_i}^X(inst, z̄_i)` with answer variables named
/// `{tag}1, {tag}2, ...` and existential variables `{tag}w1, ...`.
fn pattern_atoms(
    schema: &Schema,
    owner: &str,
    patterns: &[Pattern],
    inst: &Var,
    tag: &str,
) -> Result<PatternAtoms, PatternError> {
    let mut atoms = Vec::new();
    let mut answers = Vec::new();
    let mut hidden = Vec::new();
    for (i, p) in patterns.iter().enumerate() {
        let f = translate_pattern(schema, owner, p)?;
        let offset = answers.len();
        let rename = |var: &Var| -> Var {
            if *var == f.instance {
                inst.clone()
            } else if let Some(k) = f.answers.iter().position(|a| a == var) {
                Var::new(format!("{tag}{}", offset + k + 1))
            } else {
                Var::new(format!("{tag}w{}_{}", i + 1, &var.0[1..]))
            }
        };
        let f = f.rename(&rename);
        atoms.extend(f.atoms);
        answers.extend(f.answers);
        hidden.extend(f.existentials);
    }
    Ok((atoms, answers, hidden))
}

/// Variables of `atoms` in order of first occurrence, excluding `skip`.
fn vars_in_order(atoms: &[Atom], skip: &[&Var]) -> Vec<Var> {
    let mut seen: BTreeSet<&Var> = skip.iter().copied().collect();
    let mut out = Vec::new();
    for a in atoms {
        for var in a.vars() {
            if seen.insert(var) {
                out.push(var.clone());
            }
        }
    }
    out
}

fn atoms_formula(atoms: Vec<Atom>) -> Formula {
    Formula::and(atoms.into_iter().map(Formula::Atom).collect())
}

/// `∀x, y, z̄. ψ(x, z̄) ∧ ψ(y, z̄) ⇒ x = y`.
fn key_clause(schema: &Schema, owner: &str, patterns: &[Pattern]) -> Result<Formula, PatternError> {
    let (x, y) = (v("x"), v("y"));
    let (ax, _, _) = pattern_atoms(schema, owner, patterns, &x, "z")?;
    let (ay, _, _) = pattern_atoms(schema, owner, patterns, &y, "z")?;
    // Rename the second copy's hidden variables apart.
    let ay: Vec<Atom> = ay.into_iter().map(|a| rename_hidden(&a, "zw", "zv")).collect();
    let mut atoms = alloc::vec![Atom::Class(owner.into(), x.clone())];
    atoms.extend(ax);
    atoms.push(Atom::Class(owner.into(), y.clone()));
    atoms.extend(ay);
    let mut vars = alloc::vec![x.clone()];
    vars.extend(vars_in_order(&atoms, &[&x]));
    Ok(Formula::forall(vars, Formula::implies(atoms_formula(atoms), Formula::eq(&x, &y))))
}

fn rename_hidden(a: &Atom, from: &str, to: &str) -> Atom {
    let f = |var: &Var| {
        if let Some(rest) = var.0.strip_prefix(from) {
            Var::new(format!("{to}{rest}"))
        } else {
            var.clone()
        }
    };
    match a {
        Atom::Binary(n, p, q) => Atom::Binary(n.clone(), f(p), f(q)),
        Atom::Class(n, p) => Atom::Class(n.clone(), f(p)),
        Atom::Eq(p, q) => Atom::Eq(f(p), f(q)),
    }
}

/// `∀x. X(x) ⇒ ∃ȳ. ⋀_i φ_{p_i}^X(x, ȳ_i)`.
fn at_least_one(schema: &Schema, owner: &str, patterns: &[Pattern]) -> Result<Formula, PatternError> {
    let x = v("x");
    let (atoms, _, _) = pattern_atoms(schema, owner, patterns, &x, "y")?;
    let inner = vars_in_order(&atoms, &[&x]);
    Ok(Formula::forall(
        alloc::vec![x.clone()],
        Formula::implies(Formula::class(owner, &x), Formula::exists(inner, atoms_formula(atoms))),
    ))
}

/// `∀x, ȳ, z̄. X(x) ∧ ⋀_i φ_{p_i}^X(x, ȳ_i) ∧ ⋀_i φ_{p_i}^X(x, z̄_i) ⇒ ȳ = z̄`.
fn at_most_one(schema: &Schema, owner: &str, patterns: &[Pattern]) -> Result<Formula, PatternError> {
    let x = v("x");
    let (ay, ys, _) = pattern_atoms(schema, owner, patterns, &x, "y")?;
    let (az, zs, _) = pattern_atoms(schema, owner, patterns, &x, "z")?;
    let mut atoms = alloc::vec![Atom::Class(owner.into(), x.clone())];
    atoms.extend(ay);
    atoms.extend(az);
    let mut vars = alloc::vec![x.clone()];
    vars.extend(vars_in_order(&atoms, &[&x]));
    let eqs = ys.iter().zip(&zs).map(|(a, b)| Formula::eq(a, b)).collect();
    Ok(Formula::forall(vars, Formula::implies(atoms_formula(atoms), Formula::and(eqs))))
}
