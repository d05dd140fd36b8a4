mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use kger::{parse_schema, parse_statements, serialize_schema};
use kger_core::emit::{emit_dot, emit_pg_schema, emit_shacl, emit_shex, emit_sql, verbalize, EmitterOutput};
use kger_core::fol::{eval_formula_with_budget, Assignment};
use kger_core::hierarchy::ancestors_of;
use kger_core::query::witness_tuples;
use kger_core::schema::StatementRef;
use kger_core::semantics::clause;
use kger_core::validate::check_statement;
use kger_core::wf::check_well_formed;
use kger_core::{build_schema, Code, ConstraintStatement, Schema, ShapeStatement, Statement};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use sqlparser::ast::{Statement as SqlStatement, TableConstraint};
use sqlparser::dialect::GenericDialect;
use sqlparser::parser::Parser;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const BUDGET: u64 = 2_000_000;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statement_checks_agree_with_clauses(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let schema = random_schema(&mut rng);
        let tidy = rng.gen_bool(0.5);
        let graph = random_graph(&mut rng, &schema, 5, tidy);
        for stmt in schema.statements() {
            let f = clause(&schema, stmt).expect("clause of a well-formed schema");
            let Ok(models) = eval_formula_with_budget(&graph, &f, &Assignment::new(), BUDGET) else { continue };
            let holds = !models.is_empty();
            let diags = check_statement(&schema, &graph, stmt);
            prop_assert_eq!(holds, diags.is_empty(), "{} on\n{:?}\ndiagnostics {:?}", stmt, graph, diags);
        }
    }

    #[test]
    fn identity_implies_key(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let schema = random_schema(&mut rng);
        let tidy = rng.gen_bool(0.5);
        let graph = random_graph(&mut rng, &schema, 8, tidy);
        for c in schema.constraints() {
            let ConstraintStatement::Identity { owner, patterns } = c else { continue };
            if !check_statement(&schema, &graph, StatementRef::Constraint(c)).is_empty() {
                continue;
            }
            let key = ConstraintStatement::Key { owner: owner.clone(), patterns: patterns.clone() };
            prop_assert!(check_statement(&schema, &graph, StatementRef::Constraint(&key)).is_empty());
            let mut seen = BTreeMap::new();
            for inst in graph.extension(owner) {
                let tuples = witness_tuples(&schema, &graph, owner, patterns, inst).unwrap();
                prop_assert_eq!(tuples.len(), 1, "{} at {}", c, inst);
                let tuple = tuples.into_iter().next().unwrap();
                prop_assert!(seen.insert(tuple, inst.clone()).is_none(), "{} shared by two instances", c);
            }
        }
    }

    #[test]
    fn serialization_ignores_statement_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let mut stmts = random_statements(&mut rng);
        let schema = build_schema(stmts.clone()).unwrap();
        let is_role = |s: &Statement| matches!(s, Statement::Shape(ShapeStatement::Role { .. }));
        let roles: Vec<Statement> = stmts.iter().filter(|s| is_role(s)).cloned().collect();
        stmts.shuffle(&mut rng);
        // Role order within a relationship is significant; keep it.
        let mut roles = roles.into_iter();
        for s in stmts.iter_mut().filter(|s| is_role(s)) {
            *s = roles.next().unwrap();
        }
        let shuffled = build_schema(stmts.clone()).unwrap();
        prop_assert_eq!(&schema, &shuffled);
        stmts.shuffle(&mut rng);
        prop_assert_eq!(&schema, &build_schema(stmts).unwrap());
        prop_assert_eq!(serialize_schema(&schema), serialize_schema(&shuffled));
        let text = serialize_schema(&schema);
        prop_assert_eq!(parse_schema(&text).unwrap(), schema);
    }

    #[test]
    fn emitters_are_deterministic(seed in any::<u64>()) {
        let schema = random_schema(&mut rng(seed));
        let again = parse_schema(&serialize_schema(&schema)).unwrap();
        for emit in [emit_sql, emit_shacl, emit_shex, emit_pg_schema] {
            prop_assert_eq!(emit(&schema), emit(&schema));
        }
        prop_assert_eq!(emit_dot(&schema), emit_dot(&schema));
        prop_assert_eq!(verbalize(&again), verbalize(&parse_schema(&serialize_schema(&again)).unwrap()));
    }

    #[test]
    fn every_gap_is_reported(seed in any::<u64>()) {
        let schema = random_schema(&mut rng(seed));
        let statements: BTreeSet<String> = schema.statements().map(|s| s.to_string()).collect();
        let outputs: [(&str, EmitterOutput); 4] = [
            ("-- ", emit_sql(&schema)),
            ("# ", emit_shacl(&schema)),
            ("# ", emit_shex(&schema)),
            ("// ", emit_pg_schema(&schema)),
        ];
        for (prefix, out) in outputs {
            for d in &out.unexpressed {
                prop_assert_eq!(d.code, Code::Unexpressed);
                prop_assert!(statements.contains(&d.subject), "unknown subject {}", d.subject);
                let comment = format!("{prefix}UNEXPRESSED: {}: {}\n", d.subject, d.message);
                prop_assert!(out.artifact.contains(&comment), "missing comment {}", comment);
            }
            let reported: BTreeSet<&str> = out.unexpressed.iter().map(|d| d.subject.as_str()).collect();
            for c in schema.constraints().iter().filter(|c| c.is_hierarchy()) {
                prop_assert!(reported.contains(c.to_string().as_str()), "{} not reported", c);
            }
        }
    }

    #[test]
    fn sql_is_consistent(seed in any::<u64>()) {
        let schema = random_schema(&mut rng(seed));
        let sql = emit_sql(&schema).artifact;
        let stmts = Parser::parse_sql(&GenericDialect {}, &sql).map_err(|e| TestCaseError::fail(format!("{e}\n{sql}")))?;
        let mut columns: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut keys: BTreeMap<String, Vec<BTreeSet<String>>> = BTreeMap::new();
        let mut references = Vec::new();
        for s in &stmts {
            let SqlStatement::CreateTable(ct) = s else { panic!("unexpected statement {s}") };
            let table = ct.name.to_string();
            prop_assert!(!columns.contains_key(&table), "table {} twice", table);
            let cols: BTreeSet<String> = ct.columns.iter().map(|c| c.name.value.clone()).collect();
            prop_assert_eq!(cols.len(), ct.columns.len(), "duplicate column in {}", table);
            for k in &ct.constraints {
                let names = |cols: &[sqlparser::ast::Ident]| cols.iter().map(|c| c.value.clone()).collect::<Vec<_>>();
                let local = match k {
                    TableConstraint::PrimaryKey { columns, .. } | TableConstraint::Unique { columns, .. } => {
                        keys.entry(table.clone()).or_default().push(names(columns).into_iter().collect());
                        names(columns)
                    }
                    TableConstraint::ForeignKey { columns, foreign_table, referred_columns, .. } => {
                        references.push((table.clone(), foreign_table.to_string(), names(referred_columns)));
                        names(columns)
                    }
                    _ => Vec::new(),
                };
                for c in local {
                    prop_assert!(cols.contains(&c), "{}.{} does not exist", table, c);
                }
            }
            columns.insert(table, cols);
        }
        for (from, to, referred) in references {
            let target = columns.get(&to);
            prop_assert!(target.is_some(), "{} references missing table {}", from, to);
            let referred: BTreeSet<String> = referred.into_iter().collect();
            prop_assert!(
                keys.get(&to).is_some_and(|ks| ks.contains(&referred)),
                "{} references {:?}, which is not a key of {}", from, referred, to
            );
        }
    }

    #[test]
    fn verbalization_can_be_read_back(seed in any::<u64>()) {
        let schema = random_schema(&mut rng(seed));
        let text = verbalize(&schema);
        let read = read_verbalization(&text);
        prop_assert_eq!(build_schema(read).unwrap(), schema, "{}", text);
    }

    #[test]
    fn ancestors_are_a_closure(seed in any::<u64>()) {
        let schema = random_schema(&mut rng(seed));
        for e in schema.entities() {
            let up = ancestors_of(&schema, e).unwrap();
            prop_assert!(up.contains(e));
            for a in &up {
                prop_assert!(ancestors_of(&schema, a).unwrap().is_subset(&up));
            }
        }
        for c in schema.constraints() {
            if let ConstraintStatement::Isa { sub, sup } = c {
                prop_assert!(ancestors_of(&schema, sup).unwrap().is_subset(&ancestors_of(&schema, sub).unwrap()));
            }
        }
        prop_assert_eq!(ancestors_of(&schema, "Ghost").unwrap_err().code, Code::UnknownEntity);
    }

    #[test]
    fn ill_formedness_survives_additions(seed in any::<u64>(), bad in 0usize..3) {
        let mut rng = rng(seed);
        let base = random_statements(&mut rng);
        let defect = ["Attribute(Ghost, g)", "Mandatory(E0, nickname)", "Key(E0, [nowhere])"][bad];
        let mut stmts = base.clone();
        stmts.extend(parse_statements(defect).unwrap());
        prop_assert!(!check_well_formed(&build_schema(stmts.clone()).unwrap()).is_empty());

        let more = renamed(&build_schema(random_statements(&mut rng)).unwrap());
        let k = rng.gen_range(0..=more.len());
        stmts.extend(more.choose_multiple(&mut rng, k).cloned());
        let schema = build_schema(stmts).unwrap();
        prop_assert!(!check_well_formed(&schema).is_empty(), "{}", serialize_schema(&schema));
    }
}

/// The statements of a schema with every generated name suffixed, so that
/// they can be added to another generated schema.
fn renamed(schema: &Schema) -> Vec<Statement> {
    let names = Regex::new(r"\b(E\d+|a\d+_\d+|r\d+|c\d+|b\d+_\d+)\b").unwrap();
    parse_statements(&names.replace_all(&serialize_schema(schema), "${1}m")).unwrap()
}

/// Inverse of the verbalizer on the sentences it produces.
fn read_verbalization(text: &str) -> Vec<Statement> {
    let q = r"'(\w+)'";
    let kind = r"(?:entity|relationship)";
    type Rule = (Regex, fn(&regex::Captures) -> String);
    let rules: Vec<Rule> = vec![
        (Regex::new(&format!(r"^{q} is an entity\.$")).unwrap(), |c| format!("Entity({})", &c[1])),
        (Regex::new(&format!(r"^{q} is an relationship\.$")).unwrap(), |c| format!("Relationship({})", &c[1])),
        (Regex::new(&format!(r"^{q} is an attribute of the {kind} {q}\.$")).unwrap(), |c| {
            format!("Attribute({}, {})", &c[2], &c[1])
        }),
        (
            Regex::new(&format!(
                r"^Every instance of the entity {q} participates in (exactly one instance|one or more instances|at most one instance|zero or more instances) of the relationship {q} through the role {q}\.$"
            ))
            .unwrap(),
            |c| {
                let (e, amount, r, b) = (&c[1], &c[2], &c[3], &c[4]);
                let mut out = format!("Role({r}, {b}, {e})");
                if amount.starts_with("exactly") || amount.starts_with("one or more") {
                    out += &format!("\nMandatory({e}, {b}, {r})");
                }
                if amount.starts_with("exactly") || amount.starts_with("at most") {
                    out += &format!("\nSingle({e}, {b}, {r})");
                }
                out
            },
        ),
        (Regex::new(&format!(r"^Every instance of the {kind} {q} must have an attribute value for {q}\.$")).unwrap(), |c| {
            format!("Mandatory({}, {})", &c[1], &c[2])
        }),
        (
            Regex::new(&format!(r"^Every instance of the {kind} {q} must have at most one attribute value of {q}\.$")).unwrap(),
            |c| format!("Single({}, {})", &c[1], &c[2]),
        ),
        (
            Regex::new(&format!(r"^No two instances of the {kind} {q} may have the same key values obtained with (\[.*\])\.$"))
                .unwrap(),
            |c| format!("Key({}, {})", &c[1], &c[2]),
        ),
        (
            Regex::new(&format!(
                r"^Every instance of the {kind} {q} must have precisely one tuple of key values obtained with (\[.*\]), and no two instances of the {kind} {q} may have the same key values\.$"
            ))
            .unwrap(),
            |c| format!("Identity({}, {})", &c[1], &c[2]),
        ),
        (
            Regex::new(&format!(
                r"^{q} is a subclass of {q}; in particular, {q} inherits all attributes, relationships, and constraints of {q}\.$"
            ))
            .unwrap(),
            |c| format!("Isa({}, {})", &c[1], &c[2]),
        ),
        (
            Regex::new(&format!(r"^No instance of the entity {q} is an instance of the entity {q} and vice versa\.$")).unwrap(),
            |c| format!("Disjoint({}, {})", &c[1], &c[2]),
        ),
        (
            Regex::new(&format!(r"^Any instance of the entity {q} is an instance of at least one of (.*)\.$")).unwrap(),
            |c| format!("Cover({{{}}}, {})", c[2].replace('\'', ""), &c[1]),
        ),
    ];
    let mut source = String::new();
    for line in text.lines() {
        let (re, build) =
            rules.iter().find(|(re, _)| re.is_match(line)).unwrap_or_else(|| panic!("unrecognized sentence: {line}"));
        source += &build(&re.captures(line).unwrap());
        source.push('\n');
    }
    parse_statements(&source).unwrap_or_else(|e| panic!("{e:?}\n{source}"))
}
