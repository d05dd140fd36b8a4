//! The `.kger` schema syntax: one statement per line, written as in
//! `Identity(Message, [msg(author(fname, lname)), number])`.

use std::fmt;

use kger_core::schema::stmt;
use kger_core::{build_schema, ConstraintStatement, Diagnostic, Pattern, Schema, ShapeStatement, Statement};

/// A malformed line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {expected} expected, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

/// Why a schema file was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaError {
    Syntax(Vec<ParseError>),
    /// The statements parsed but do not form a schema.
    Invalid(Vec<Diagnostic>),
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaError::Syntax(errors) => {
                for (i, e) in errors.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            SchemaError::Invalid(diags) => {
                for (i, d) in diags.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for SchemaError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
    Bad(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Punct(c) | Tok::Bad(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of line"),
        }
    }
}

fn tokenize(line: &str) -> Vec<(usize, Tok)> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start + 1, Tok::Ident(chars[start..i].iter().collect())));
        } else if "()[]{},".contains(c) {
            out.push((i + 1, Tok::Punct(c)));
            i += 1;
        } else {
            out.push((i + 1, Tok::Bad(c)));
            i += 1;
        }
    }
    out.push((chars.len() + 1, Tok::End));
    out
}

const KEYWORDS: &[&str] = &[
    "Entity",
    "Relationship",
    "Attribute",
    "Role",
    "Mandatory",
    "Single",
    "Key",
    "Identity",
    "Isa",
    "Disjoint",
    "Cover",
];

struct Parser {
    line: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &str) -> ParseError {
        let (column, tok) = &self.toks[self.pos];
        ParseError { line: self.line, column: *column, expected: expected.into(), found: tok.to_string() }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn punct(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Punct(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let name = self.ident("attribute or role name")?;
        if !self.eat('(') {
            return Ok(Pattern::Attr(name));
        }
        let mut children = vec![self.pattern()?];
        while self.eat(',') {
            children.push(self.pattern()?);
        }
        self.punct(')')?;
        Ok(Pattern::Nav(name, children))
    }

    fn patterns(&mut self) -> PResult<Vec<Pattern>> {
        self.punct('[')?;
        if *self.peek() == Tok::Punct(']') {
            return Err(self.error("non-empty pattern list"));
        }
        let mut out = vec![self.pattern()?];
        while self.eat(',') {
            out.push(self.pattern()?);
        }
        self.punct(']')?;
        Ok(out)
    }

    fn statement(&mut self) -> PResult<Statement> {
        let keyword = self.ident("statement keyword")?;
        if !KEYWORDS.contains(&keyword.as_str()) {
            self.pos -= 1;
            return Err(self.error("statement keyword"));
        }
        self.punct('(')?;
        let s = match keyword.as_str() {
            "Entity" => stmt::entity(&self.ident("entity name")?),
            "Relationship" => stmt::relationship(&self.ident("relationship name")?),
            "Attribute" => {
                let owner = self.ident("entity or relationship name")?;
                self.punct(',')?;
                stmt::attribute(&owner, &self.ident("attribute name")?)
            }
            "Role" => {
                let rel = self.ident("relationship name")?;
                self.punct(',')?;
                let role = self.ident("role name")?;
                self.punct(',')?;
                stmt::role(&rel, &role, &self.ident("entity name")?)
            }
            "Mandatory" | "Single" => {
                let x = self.ident("entity or relationship name")?;
                self.punct(',')?;
                let a = self.ident("attribute or role name")?;
                let mandatory = keyword == "Mandatory";
                if self.eat(',') {
                    let r = self.ident("relationship name")?;
                    if mandatory {
                        stmt::mandatory_role(&x, &a, &r)
                    } else {
                        stmt::single_role(&x, &a, &r)
                    }
                } else if mandatory {
                    stmt::mandatory_attr(&x, &a)
                } else {
                    stmt::single_attr(&x, &a)
                }
            }
            "Key" | "Identity" => {
                let x = self.ident("entity or relationship name")?;
                self.punct(',')?;
                let ps = self.patterns()?;
                if keyword == "Key" {
                    stmt::key(&x, ps)
                } else {
                    stmt::identity(&x, ps)
                }
            }
            "Isa" | "Disjoint" => {
                let a = self.ident("entity name")?;
                self.punct(',')?;
                let b = self.ident("entity name")?;
                if keyword == "Isa" {
                    stmt::isa(&a, &b)
                } else {
                    stmt::disjoint(&a, &b)
                }
            }
            "Cover" => {
                self.punct('{')?;
                if *self.peek() == Tok::Punct('}') {
                    return Err(self.error("non-empty entity set"));
                }
                let mut members = vec![self.ident("entity name")?];
                while self.eat(',') {
                    members.push(self.ident("entity name")?);
                }
                self.punct('}')?;
                self.punct(',')?;
                let covered = self.ident("entity name")?;
                let refs: Vec<&str> = members.iter().map(String::as_str).collect();
                stmt::cover(&refs, &covered)
            }
            _ => unreachable!("keyword checked above"),
        };
        self.punct(')')?;
        if *self.peek() != Tok::End {
            return Err(self.error("end of line"));
        }
        Ok(s)
    }
}

/// Parses statements without building a schema.
pub fn parse_statements(source: &str) -> Result<Vec<Statement>, Vec<ParseError>> {
    let mut statements = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let toks = tokenize(line);
        if toks.len() == 1 {
            continue;
        }
        let mut p = Parser { line: i + 1, toks, pos: 0 };
        match p.statement() {
            Ok(s) => statements.push(s),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(statements)
    } else {
        Err(errors)
    }
}

/// Parses a schema file and builds the schema.
pub fn parse_schema(source: &str) -> Result<Schema, SchemaError> {
    let statements = parse_statements(source).map_err(SchemaError::Syntax)?;
    build_schema(statements).map_err(SchemaError::Invalid)
}

fn constraint_rank(c: &ConstraintStatement) -> u8 {
    match c {
        ConstraintStatement::MandatoryAttr { .. } => 0,
        ConstraintStatement::SingleAttr { .. } => 1,
        ConstraintStatement::MandatoryRole { .. } => 2,
        ConstraintStatement::SingleRole { .. } => 3,
        ConstraintStatement::Key { .. } => 4,
        ConstraintStatement::Identity { .. } => 5,
        ConstraintStatement::Isa { .. } => 6,
        ConstraintStatement::Disjoint(..) => 7,
        ConstraintStatement::Cover { .. } => 8,
    }
}

/// Writes a schema one statement per line in canonical order: entities,
/// relationships, attributes, then roles, each sorted by name, followed
/// by constraints grouped by kind. Roles keep their declaration order
/// within a relationship, since emitters read the first role as the
/// source of an edge.
pub fn serialize_schema(schema: &Schema) -> String {
    let mut entities: Vec<&String> = Vec::new();
    let mut relationships: Vec<&String> = Vec::new();
    let mut attributes: Vec<(&String, &String)> = Vec::new();
    let mut roles: Vec<&ShapeStatement> = Vec::new();
    for s in schema.shape() {
        match s {
            ShapeStatement::Entity(e) => entities.push(e),
            ShapeStatement::Relationship(r) => relationships.push(r),
            ShapeStatement::Attribute { owner, attr } => attributes.push((owner, attr)),
            ShapeStatement::Role { .. } => roles.push(s),
        }
    }
    entities.sort();
    relationships.sort();
    attributes.sort();
    roles.sort_by_key(|s| match s {
        ShapeStatement::Role { rel, .. } => rel.as_str(),
        _ => "",
    });
    let mut constraints: Vec<(u8, String)> =
        schema.constraints().iter().map(|c| (constraint_rank(c), c.to_string())).collect();
    constraints.sort();

    let mut out = String::new();
    let mut line = |s: &dyn fmt::Display| {
        out.push_str(&s.to_string());
        out.push('\n');
    };
    for e in entities {
        line(&format_args!("Entity({e})"));
    }
    for r in relationships {
        line(&format_args!("Relationship({r})"));
    }
    for (owner, attr) in attributes {
        line(&format_args!("Attribute({owner}, {attr})"));
    }
    for r in roles {
        line(r);
    }
    for (_, c) in constraints {
        line(&c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_pattern_list() {
        let Err(SchemaError::Syntax(errs)) = parse_schema("Key(Person, [])") else { panic!() };
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].to_string(), "1:14: non-empty pattern list expected, found `]`");
    }

    #[test]
    fn collects_every_bad_line() {
        let src = "Entity(A)\nEntity(\n# comment\n\nWhatever(A)\nAttribute(A, b) extra";
        let Err(SchemaError::Syntax(errs)) = parse_schema(src) else { panic!() };
        let at: Vec<(usize, usize)> = errs.iter().map(|e| (e.line, e.column)).collect();
        assert_eq!(at, [(2, 8), (5, 1), (6, 17)]);
        assert_eq!(errs[1].expected, "statement keyword");
    }

    #[test]
    fn nested_patterns_and_cover() {
        let s = parse_schema(
            "Entity(Message)\nIdentity(Message, [msg(author(fname, lname)), number])\nCover({Post, Comment}, Message) # total",
        )
        .unwrap();
        assert_eq!(s.constraints()[0].to_string(), "Identity(Message, [msg(author(fname, lname)), number])");
        assert_eq!(s.constraints()[1].to_string(), "Cover({Comment, Post}, Message)");
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_schema("Role(studies,uni,University)").unwrap();
        let b = parse_schema("  Role ( studies , uni ,  University )  ").unwrap();
        assert_eq!(a, b);
    }
}
