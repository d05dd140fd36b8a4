//! Type-hierarchy utilities over `Isa` statements.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diagnostic::{Code, Diagnostic};
use crate::schema::Schema;

/// Reflexive-transitive closure of `Isa` starting from `entity`.
pub fn ancestors_of(schema: &Schema, entity: &str) -> Result<BTreeSet<String>, Diagnostic> {
    if !schema.is_entity(entity) {
        return Err(Diagnostic::error(Code::UnknownEntity, entity, format!("`{entity}` is not a declared entity")));
    }
    Ok(ancestors_unchecked(schema, entity))
}

/// Like [`ancestors_of`] but accepts undeclared names, which are then
/// their only ancestor unless they occur on the left of some `Isa`.
pub fn ancestors_unchecked(schema: &Schema, entity: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&str> = alloc::vec![entity];
    while let Some(e) = stack.pop() {
        if seen.insert(String::from(e)) {
            stack.extend(schema.isa_parents(e).iter().map(String::as_str));
        }
    }
    seen
}

/// Declared entities without a declared superclass.
pub fn roots_of(schema: &Schema) -> BTreeSet<String> {
    schema.entities().iter().filter(|e| schema.isa_parents(e).is_empty()).cloned().collect()
}

/// Entities whose ancestor set contains `entity`, including `entity` itself.
pub fn descendants_of(schema: &Schema, entity: &str) -> BTreeSet<String> {
    schema.entities().iter().filter(|e| ancestors_unchecked(schema, e).contains(entity)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::build_schema;
    use crate::schema::stmt::*;
    use alloc::vec;

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|n| String::from(*n)).collect()
    }

    fn example_2_7() -> Schema {
        build_schema(vec![
            entity("Message"),
            entity("Post"),
            entity("Comment"),
            entity("Person"),
            entity("University"),
            isa("Post", "Message"),
            isa("Comment", "Message"),
            disjoint("Post", "Comment"),
            cover(&["Post", "Comment"], "Message"),
        ])
        .unwrap()
    }

    #[test]
    fn ancestors() {
        let s = example_2_7();
        assert_eq!(ancestors_of(&s, "Post").unwrap(), set(&["Post", "Message"]));
        assert_eq!(ancestors_of(&s, "Person").unwrap(), set(&["Person"]));
        assert_eq!(ancestors_of(&s, "Nope").unwrap_err().code, Code::UnknownEntity);

        let chain = build_schema(vec![entity("A"), entity("B"), entity("C"), isa("A", "B"), isa("B", "C")]).unwrap();
        assert_eq!(ancestors_of(&chain, "A").unwrap(), set(&["A", "B", "C"]));
    }

    #[test]
    fn roots() {
        let s = example_2_7();
        assert_eq!(roots_of(&s), set(&["Message", "Person", "University"]));
        let diamond = build_schema(vec![
            entity("A"),
            entity("B"),
            entity("C"),
            entity("D"),
            isa("A", "B"),
            isa("A", "C"),
            isa("B", "D"),
            isa("C", "D"),
        ])
        .unwrap();
        assert_eq!(roots_of(&diamond), set(&["D"]));
        assert_eq!(descendants_of(&diamond, "B"), set(&["A", "B"]));
    }

    #[test]
    fn cycles_terminate() {
        let s = build_schema(vec![entity("A"), entity("B"), isa("A", "B"), isa("B", "A")]).unwrap();
        assert_eq!(ancestors_of(&s, "A").unwrap(), set(&["A", "B"]));
        assert!(roots_of(&s).is_empty());
    }
}
