//! Knowledge graphs: finite structures of entity and relationship
//! instances with attribute and role facts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diagnostic::{Code, Diagnostic};
use crate::hierarchy::ancestors_unchecked;
use crate::schema::Schema;
use crate::value::{NodeId, Term, Value};

/// An immutable knowledge graph over a schema vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    entities: BTreeMap<NodeId, BTreeSet<String>>,
    relationships: BTreeMap<NodeId, String>,
    attr_facts: BTreeSet<(NodeId, String, Value)>,
    role_facts: BTreeSet<(NodeId, String, NodeId)>,
    // Derived.
    extension: BTreeMap<String, BTreeSet<NodeId>>,
    attrs_by_id: BTreeMap<NodeId, BTreeMap<String, Vec<Value>>>,
    role_out: BTreeMap<NodeId, BTreeMap<String, Vec<NodeId>>>,
    role_in: BTreeMap<String, BTreeMap<NodeId, Vec<NodeId>>>,
}

const NO_VALUES: &[Value] = &[];
const NO_IDS: &[NodeId] = &[];

impl KnowledgeGraph {
    fn index(
        entities: BTreeMap<NodeId, BTreeSet<String>>,
        relationships: BTreeMap<NodeId, String>,
        attr_facts: BTreeSet<(NodeId, String, Value)>,
        role_facts: BTreeSet<(NodeId, String, NodeId)>,
    ) -> Self {
        let mut g = KnowledgeGraph { entities, relationships, attr_facts, role_facts, ..Default::default() };
        for (id, types) in &g.entities {
            for t in types {
                g.extension.entry(t.clone()).or_default().insert(id.clone());
            }
        }
        for (id, t) in &g.relationships {
            g.extension.entry(t.clone()).or_default().insert(id.clone());
        }
        for (id, name, v) in &g.attr_facts {
            g.attrs_by_id.entry(id.clone()).or_default().entry(name.clone()).or_default().push(v.clone());
        }
        for (r, role, e) in &g.role_facts {
            g.role_out.entry(r.clone()).or_default().entry(role.clone()).or_default().push(e.clone());
            g.role_in.entry(role.clone()).or_default().entry(e.clone()).or_default().push(r.clone());
        }
        g
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty() && self.relationships.is_empty()
    }

    pub fn entity_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.entities.keys()
    }

    pub fn relationship_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.relationships.keys()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn relationship_count(&self) -> usize {
        self.relationships.len()
    }

    pub fn is_entity_id(&self, id: &NodeId) -> bool {
        self.entities.contains_key(id)
    }

    pub fn is_relationship_id(&self, id: &NodeId) -> bool {
        self.relationships.contains_key(id)
    }

    /// Entity names an entity instance belongs to.
    pub fn types_of(&self, id: &NodeId) -> Option<&BTreeSet<String>> {
        self.entities.get(id)
    }

    pub fn relationship_type(&self, id: &NodeId) -> Option<&str> {
        self.relationships.get(id).map(String::as_str)
    }

    /// True iff `id` is in the extension of the entity or relationship `name`.
    pub fn has_type(&self, id: &NodeId, name: &str) -> bool {
        self.extension.get(name).is_some_and(|ids| ids.contains(id))
    }

    /// Instances of an entity or relationship name, in id order.
    pub fn extension(&self, name: &str) -> impl Iterator<Item = &NodeId> {
        self.extension.get(name).into_iter().flatten()
    }

    pub fn attribute_values(&self, id: &NodeId, attr: &str) -> &[Value] {
        self.attrs_by_id.get(id).and_then(|m| m.get(attr)).map_or(NO_VALUES, Vec::as_slice)
    }

    /// Entities filling `role` on relationship instance `rel`.
    pub fn role_fillers(&self, rel: &NodeId, role: &str) -> &[NodeId] {
        self.role_out.get(rel).and_then(|m| m.get(role)).map_or(NO_IDS, Vec::as_slice)
    }

    /// Relationship instances in which `entity` fills `role`.
    pub fn role_sources(&self, role: &str, entity: &NodeId) -> &[NodeId] {
        self.role_in.get(role).and_then(|m| m.get(entity)).map_or(NO_IDS, Vec::as_slice)
    }

    pub fn attribute_facts(&self) -> impl Iterator<Item = (&NodeId, &str, &Value)> {
        self.attr_facts.iter().map(|(id, a, v)| (id, a.as_str(), v))
    }

    pub fn role_facts(&self) -> impl Iterator<Item = (&NodeId, &str, &NodeId)> {
        self.role_facts.iter().map(|(r, b, e)| (r, b.as_str(), e))
    }

    pub fn entity_memberships(&self) -> impl Iterator<Item = (&NodeId, &BTreeSet<String>)> {
        self.entities.iter()
    }

    pub fn relationship_memberships(&self) -> impl Iterator<Item = (&NodeId, &str)> {
        self.relationships.iter().map(|(id, t)| (id, t.as_str()))
    }

    /// Instance ids followed by the distinct values occurring in the graph.
    pub fn domain(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.entities.keys().chain(self.relationships.keys()).cloned().map(Term::Id).collect();
        let values: BTreeSet<&Value> = self.attr_facts.iter().map(|(_, _, v)| v).collect();
        out.extend(values.into_iter().cloned().map(Term::Value));
        out
    }

    /// Copy of the graph with every entity membership closed upward
    /// under the schema's `Isa` statements.
    pub fn close_isa(&self, schema: &Schema) -> KnowledgeGraph {
        let entities = self
            .entities
            .iter()
            .map(|(id, types)| {
                let closed: BTreeSet<String> = types.iter().flat_map(|t| ancestors_unchecked(schema, t)).collect();
                (id.clone(), closed)
            })
            .collect();
        KnowledgeGraph::index(entities, self.relationships.clone(), self.attr_facts.clone(), self.role_facts.clone())
    }
}

/// Accumulates instances and facts and checks them against a schema
/// vocabulary on [`GraphBuilder::build`].
#[derive(Debug, Clone)]
pub struct GraphBuilder<'s> {
    schema: &'s Schema,
    entities: Vec<(NodeId, Vec<String>)>,
    relationships: Vec<(NodeId, String)>,
    attrs: Vec<(NodeId, String, Value)>,
    roles: Vec<(NodeId, String, NodeId)>,
}

impl<'s> GraphBuilder<'s> {
    pub fn new(schema: &'s Schema) -> Self {
        GraphBuilder { schema, entities: Vec::new(), relationships: Vec::new(), attrs: Vec::new(), roles: Vec::new() }
    }

    /// Starts from the instances and facts of an existing graph.
    pub fn from_graph(schema: &'s Schema, g: &KnowledgeGraph) -> Self {
        let mut b = GraphBuilder::new(schema);
        for (id, types) in &g.entities {
            b.entities.push((id.clone(), types.iter().cloned().collect()));
        }
        b.relationships.extend(g.relationships.iter().map(|(id, t)| (id.clone(), t.clone())));
        b.attrs.extend(g.attr_facts.iter().cloned());
        b.roles.extend(g.role_facts.iter().cloned());
        b
    }

    pub fn add_entity<'a>(&mut self, id: &str, types: impl IntoIterator<Item = &'a str>) -> &mut Self {
        self.entities.push((NodeId::new(id), types.into_iter().map(String::from).collect()));
        self
    }

    pub fn add_relationship(&mut self, id: &str, ty: &str) -> &mut Self {
        self.relationships.push((NodeId::new(id), ty.into()));
        self
    }

    pub fn add_attribute(&mut self, owner: &str, attr: &str, value: Value) -> &mut Self {
        self.attrs.push((NodeId::new(owner), attr.into(), value));
        self
    }

    pub fn add_role(&mut self, rel: &str, role: &str, target: &str) -> &mut Self {
        self.roles.push((NodeId::new(rel), role.into(), NodeId::new(target)));
        self
    }

    /// Drops every value of `attr` on `owner`.
    pub fn remove_attribute(&mut self, owner: &str, attr: &str) -> &mut Self {
        self.attrs.retain(|(id, a, _)| !(id.as_str() == owner && a == attr));
        self
    }

    /// Drops the given role fact.
    pub fn remove_role(&mut self, rel: &str, role: &str, target: &str) -> &mut Self {
        self.roles.retain(|(r, b, e)| !(r.as_str() == rel && b == role && e.as_str() == target));
        self
    }

    pub fn build(&self) -> Result<KnowledgeGraph, Vec<Diagnostic>> {
        let s = self.schema;
        let mut errors = Vec::new();
        let mut entities: BTreeMap<NodeId, BTreeSet<String>> = BTreeMap::new();
        let mut relationships: BTreeMap<NodeId, String> = BTreeMap::new();

        for (id, types) in &self.entities {
            if types.is_empty() {
                errors.push(Diagnostic::error(Code::GraphSyntax, id.as_str(), "entity instance without any type"));
            }
            for t in types {
                if !s.is_entity(t) {
                    errors.push(Diagnostic::error(
                        Code::GraphUnknownName,
                        id.as_str(),
                        format!("`{t}` is not a declared entity"),
                    ));
                }
            }
            entities.entry(id.clone()).or_default().extend(types.iter().cloned());
        }
        for (id, t) in &self.relationships {
            if !s.is_relationship(t) {
                errors.push(Diagnostic::error(
                    Code::GraphUnknownName,
                    id.as_str(),
                    format!("`{t}` is not a declared relationship"),
                ));
            }
            if entities.contains_key(id) {
                errors.push(Diagnostic::error(
                    Code::GraphIdClash,
                    id.as_str(),
                    "id used for both an entity and a relationship instance",
                ));
            }
            match relationships.get(id) {
                Some(prev) if prev != t => errors.push(Diagnostic::error(
                    Code::GraphIdClash,
                    id.as_str(),
                    format!("relationship instance typed both `{prev}` and `{t}`"),
                )),
                Some(_) => {}
                None => {
                    relationships.insert(id.clone(), t.clone());
                }
            }
        }

        let known = |id: &NodeId| entities.contains_key(id) || relationships.contains_key(id);
        let mut attr_facts = BTreeSet::new();
        for (id, a, v) in &self.attrs {
            let subject = format!("{id} {a}");
            if !s.is_attribute(a) {
                errors.push(Diagnostic::error(
                    Code::GraphUnknownName,
                    subject,
                    format!("`{a}` is not a declared attribute"),
                ));
            } else if !known(id) {
                errors.push(Diagnostic::error(Code::GraphBadRef, subject, format!("unknown instance `{id}`")));
            } else {
                attr_facts.insert((id.clone(), a.clone(), v.clone()));
            }
        }

        let mut role_facts = BTreeSet::new();
        for (r, b, e) in &self.roles {
            let subject = format!("{r} {b} {e}");
            let Some((owner, _)) = s.role_owner(b) else {
                errors.push(Diagnostic::error(
                    Code::GraphUnknownName,
                    subject,
                    format!("`{b}` is not a declared role"),
                ));
                continue;
            };
            let Some(rel_type) = relationships.get(r) else {
                errors.push(Diagnostic::error(
                    Code::GraphBadRef,
                    subject,
                    format!("unknown relationship instance `{r}`"),
                ));
                continue;
            };
            if !entities.contains_key(e) {
                errors.push(Diagnostic::error(Code::GraphBadRef, subject, format!("unknown entity instance `{e}`")));
                continue;
            }
            if rel_type != owner {
                errors.push(Diagnostic::error(
                    Code::GraphUnknownName,
                    subject,
                    format!("role `{b}` belongs to `{owner}`, not to `{rel_type}`"),
                ));
                continue;
            }
            role_facts.insert((r.clone(), b.clone(), e.clone()));
        }

        if errors.is_empty() {
            Ok(KnowledgeGraph::index(entities, relationships, attr_facts, role_facts))
        } else {
            Err(errors)
        }
    }
}
