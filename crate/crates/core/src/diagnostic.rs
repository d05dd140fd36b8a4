//! Diagnostics shared by schema construction, well-formedness checking,
//! graph loading, validation, and the emitters.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::value::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

macro_rules! codes {
    ($($(#[$doc:meta])* $variant:ident => $text:literal,)*) => {
        /// The closed set of diagnostic codes.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
        pub enum Code {
            $($(#[$doc])* #[cfg_attr(feature = "serde", serde(rename = $text))] $variant,)*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$variant => $text,)*
                }
            }

            pub fn parse(s: &str) -> Option<Code> {
                match s {
                    $($text => Some(Code::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

codes! {
    /// An attribute name declared on two owners.
    DupAttrOwner => "DUP-ATTR-OWNER",
    /// A role name declared on two relationships, or with two entities.
    DupRoleOwner => "DUP-ROLE-OWNER",
    /// A name used in two of the entity/relationship/attribute/role classes.
    NameClassOverlap => "NAME-CLASS-OVERLAP",
    /// Invalid identifier, empty key pattern list, or empty cover set.
    MalformedStatement => "MALFORMED-STATEMENT",
    /// A hierarchy statement or query names an undeclared entity.
    UnknownEntity => "UNKNOWN-ENTITY",
    /// Attribute or role declaration over an undeclared entity or relationship.
    Wf1 => "WF1",
    /// Participation constraint without the matching declaration.
    Wf2 => "WF2",
    /// Identity key with a non-ground pattern.
    Wf3 => "WF3",
    /// Relationship without an identity key.
    Wf4 => "WF4",
    /// Cyclic type hierarchy.
    Wf5 => "WF5",
    /// Root entity without a directly declared identity key.
    Wf6 => "WF6",
    /// Disjointness between entities without a common ancestor.
    Wf7 => "WF7",
    /// Cover member that is not a descendant of the covered entity.
    Wf8 => "WF8",
    /// Key pattern not rooted at the key's subject.
    Wf9 => "WF9",
    GraphSyntax => "GRAPH-SYNTAX",
    GraphUnknownName => "GRAPH-UNKNOWN-NAME",
    GraphIdClash => "GRAPH-ID-CLASH",
    GraphBadRef => "GRAPH-BAD-REF",
    /// Attribute or role fact on an instance outside its declared owner.
    Dm1 => "DM1",
    /// Role with two fillers on one relationship instance.
    Dm2 => "DM2",
    /// Relationship instance without exactly one relationship.
    Dm3 => "DM3",
    ViolAttrTyping => "VIOL-ATTR-TYPING",
    ViolRoleTyping => "VIOL-ROLE-TYPING",
    ViolMandatoryAttr => "VIOL-MANDATORY-ATTR",
    ViolSingleAttr => "VIOL-SINGLE-ATTR",
    ViolMandatoryRole => "VIOL-MANDATORY-ROLE",
    ViolSingleRole => "VIOL-SINGLE-ROLE",
    /// Two instances share a key tuple.
    ViolKey => "VIOL-KEY",
    /// An instance has zero or several identity tuples.
    ViolIdentity => "VIOL-IDENTITY",
    ViolIsa => "VIOL-ISA",
    ViolDisjoint => "VIOL-DISJOINT",
    ViolCover => "VIOL-COVER",
    ViolImplicitDisjoint => "VIOL-IMPLICIT-DISJOINT",
    /// Further diagnostics for a statement were dropped.
    Truncated => "TRUNCATED",
    /// A constraint the emitter's target cannot express.
    Unexpressed => "UNEXPRESSED",
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A violation or note tied to a statement or to instances.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    /// The statement (in schema syntax) or instance ids concerned.
    pub subject: String,
    pub message: String,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub witnesses: Vec<Term>,
}

impl Diagnostic {
    pub fn error(code: Code, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            subject: subject.into(),
            message: message.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn warning(code: Code, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, ..Diagnostic::error(code, subject, message) }
    }

    pub fn with_witnesses(mut self, witnesses: impl IntoIterator<Item = Term>) -> Self {
        self.witnesses.extend(witnesses);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.code, self.subject, self.message)?;
        if !self.witnesses.is_empty() {
            f.write_str(" [witnesses: ")?;
            crate::pattern::write_list(f, &self.witnesses)?;
            f.write_str("]")?;
        }
        Ok(())
    }
}
