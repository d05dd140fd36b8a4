use kger_core::fol::{Atom, Var};
use kger_core::query::{is_rooted_at, translate_pattern, PatternError};
use kger_core::schema::stmt::*;
use kger_core::{build_schema, Pattern, Schema};

fn schema() -> Schema {
    build_schema([
        entity("Person"),
        attribute("Person", "fname"),
        attribute("Person", "lname"),
        entity("University"),
        attribute("University", "name"),
        entity("Message"),
        attribute("Message", "number"),
        relationship("studies"),
        role("studies", "student", "Person"),
        role("studies", "uni", "University"),
        relationship("wrote"),
        role("wrote", "author", "Person"),
        role("wrote", "msg", "Message"),
        entity("Student"),
        isa("Student", "Person"),
    ])
    .unwrap()
}

fn binary(name: &str, a: &Var, b: &Var) -> Atom {
    Atom::Binary(name.into(), a.clone(), b.clone())
}

#[test]
fn navigation_from_an_entity() {
    let p4 = Pattern::nav("msg", vec![Pattern::nav("author", vec![Pattern::attr("fname"), Pattern::attr("lname")])]);
    let f = translate_pattern(&schema(), "Message", &p4).unwrap();
    let x = &f.instance;
    let [y1, y2] = &f.answers[..] else { panic!("arity 2 expected: {f:?}") };
    let [w, p] = &f.existentials[..] else { panic!("two existentials expected: {f:?}") };
    assert_eq!(f.atoms, [binary("msg", w, x), binary("author", w, p), binary("fname", p, y1), binary("lname", p, y2)]);
}

#[test]
fn role_leaf_direction_depends_on_the_root() {
    let s = schema();
    let p0 = Pattern::role("student");
    let at_person = translate_pattern(&s, "Person", &p0).unwrap();
    assert_eq!(at_person.atoms, [binary("student", &at_person.answers[0], &at_person.instance)]);
    let at_studies = translate_pattern(&s, "studies", &p0).unwrap();
    assert_eq!(at_studies.atoms, [binary("student", &at_studies.instance, &at_studies.answers[0])]);
    assert!(at_person.existentials.is_empty() && at_studies.existentials.is_empty());
}

#[test]
fn rootedness_follows_inheritance() {
    let s = schema();
    let p = Pattern::nav("student", vec![Pattern::nav("uni", vec![Pattern::attr("name")])]);
    assert!(is_rooted_at(&s, &p, "Person").unwrap());
    assert!(is_rooted_at(&s, &p, "Student").unwrap());
    assert!(!is_rooted_at(&s, &p, "University").unwrap());
    assert!(!is_rooted_at(&s, &Pattern::attr("fname"), "studies").unwrap());
    assert!(matches!(translate_pattern(&s, "University", &p), Err(PatternError::NotRooted { .. })));
}
