mod common;

use common::*;
use kger::text::{ParseError, SchemaError};
use kger::{graph_to_json, load_graph, parse_schema, parse_statements, serialize_schema};
use kger_core::{Code, Pattern};

fn syntax_errors(source: &str) -> Vec<ParseError> {
    match parse_schema(source) {
        Err(SchemaError::Syntax(errs)) => errs,
        other => panic!("expected syntax errors, got {other:?}"),
    }
}

#[test]
fn canonical_form_of_the_running_example() {
    let schema = running_example();
    assert_eq!(serialize_schema(&schema), fixture("running_example.canonical.kger"));
    assert_eq!(parse_schema(&fixture("running_example.canonical.kger")).unwrap(), schema);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let a = parse_schema("Entity(A)\nAttribute(A, a)").unwrap();
    let b = parse_schema("# header\n\nEntity(A)   # the only entity\n\n  Attribute( A ,a )\n# end").unwrap();
    assert_eq!(a, b);
}

#[test]
fn leaves_are_classified_by_the_vocabulary() {
    let schema = running_example();
    let identity = schema
        .constraints()
        .iter()
        .find_map(|c| match c {
            kger_core::ConstraintStatement::Identity { owner, patterns } if owner == "wrote" => Some(patterns.clone()),
            _ => None,
        })
        .unwrap();
    assert_eq!(
        identity,
        [
            Pattern::nav("author", vec![Pattern::attr("fname"), Pattern::attr("lname")]),
            Pattern::nav("msg", vec![Pattern::attr("number")]),
        ]
    );
    let s =
        parse_schema("Entity(P)\nAttribute(P, n)\nRelationship(f)\nRole(f, a, P)\nRole(f, b, P)\nKey(f, [a, b(n)])")
            .unwrap();
    let key = s.constraints()[0].key_parts().unwrap().1.to_vec();
    assert_eq!(key, [Pattern::role("a"), Pattern::nav("b", vec![Pattern::attr("n")])]);
}

#[test]
fn every_error_is_reported_with_its_position() {
    let errs = syntax_errors("Entity(A\nCover({}, A)\nIdentity(A [a])\nEntity(A) Entity(B)\nEntity(9x)");
    let at: Vec<(usize, usize, &str)> = errs.iter().map(|e| (e.line, e.column, e.expected.as_str())).collect();
    assert_eq!(
        at,
        [(1, 9, "`)`"), (2, 8, "non-empty entity set"), (3, 12, "`,`"), (4, 11, "end of line"), (5, 8, "entity name"),]
    );
}

#[test]
fn invalid_statement_sets_are_rejected() {
    match parse_schema("Entity(A)\nRelationship(A)") {
        Err(SchemaError::Invalid(diags)) => assert_eq!(diags[0].code, Code::NameClassOverlap),
        other => panic!("{other:?}"),
    }
}

#[test]
fn statements_keep_source_order() {
    let stmts = parse_statements("Entity(B)\nEntity(A)\nIsa(B, A)").unwrap();
    let shown: Vec<String> = stmts.iter().map(ToString::to_string).collect();
    assert_eq!(shown, ["Entity(B)", "Entity(A)", "Isa(B, A)"]);
}

#[test]
fn graph_files_round_trip() {
    let schema = running_example();
    let g = g0(&schema);
    let json = graph_to_json(&g);
    assert_eq!(load_graph(&json, &schema).unwrap(), g);
    assert_eq!(graph_to_json(&load_graph(&json, &schema).unwrap()), json);
}

#[test]
fn unknown_graph_fields_are_syntax_errors() {
    let schema = running_example();
    let errs = load_graph(r#"{"nodes": []}"#, &schema).unwrap_err();
    assert_eq!(errs[0].code, Code::GraphSyntax);
    assert_eq!(errs[0].subject, "line 1 column 8");
}
