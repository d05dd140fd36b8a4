//! Scalar data values and the terms that appear in answer tuples.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

/// Tag of a scalar value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ValueKind {
    Text,
    Integer,
    Decimal,
    Boolean,
}

impl ValueKind {
    fn class(self) -> u8 {
        match self {
            ValueKind::Text => 0,
            ValueKind::Integer | ValueKind::Decimal => 1,
            ValueKind::Boolean => 2,
        }
    }
}

/// A data value with a canonical lexical form.
///
/// Integers and decimals share one numeric class: `2` and `2.0` are equal.
/// Ordering is by class, then by canonical lexical form, which is
/// consistent with equality but not with numeric order.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Value {
    kind: ValueKind,
    lexical: String,
}

/// Error returned when a lexical form does not denote a value of the requested kind.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{lexical}` is not a valid {kind:?} literal")]
pub struct InvalidLiteral {
    pub kind: ValueKind,
    pub lexical: String,
}

impl Value {
    pub fn text(s: impl Into<String>) -> Self {
        Value { kind: ValueKind::Text, lexical: s.into() }
    }

    pub fn integer(i: i64) -> Self {
        Value { kind: ValueKind::Integer, lexical: i.to_string() }
    }

    pub fn boolean(b: bool) -> Self {
        Value { kind: ValueKind::Boolean, lexical: if b { "true" } else { "false" }.into() }
    }

    /// Parses a decimal literal such as `-1.50`, `3`, or `2.5e3`.
    pub fn decimal(lexical: &str) -> Result<Self, InvalidLiteral> {
        canonical_decimal(lexical)
            .map(|lexical| Value { kind: ValueKind::Decimal, lexical })
            .ok_or_else(|| InvalidLiteral { kind: ValueKind::Decimal, lexical: lexical.into() })
    }

    /// Builds a value of `kind` from a lexical form, canonicalizing it.
    pub fn parse(kind: ValueKind, lexical: &str) -> Result<Self, InvalidLiteral> {
        let bad = || InvalidLiteral { kind, lexical: lexical.into() };
        match kind {
            ValueKind::Text => Ok(Value::text(lexical)),
            ValueKind::Integer => {
                let canon = canonical_decimal(lexical).ok_or_else(bad)?;
                if canon.contains('.') {
                    return Err(bad());
                }
                Ok(Value { kind, lexical: canon })
            }
            ValueKind::Decimal => Value::decimal(lexical),
            ValueKind::Boolean => match lexical {
                "true" => Ok(Value::boolean(true)),
                "false" => Ok(Value::boolean(false)),
                _ => Err(bad()),
            },
        }
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    /// Canonical lexical form.
    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn is_numeric(&self) -> bool {
        self.kind.class() == 1
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.kind.class() == other.kind.class() && self.lexical == other.lexical
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind.class().cmp(&other.kind.class()).then_with(|| self.lexical.cmp(&other.lexical))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ValueKind::Text => write!(f, "{:?}", self.lexical),
            _ => f.write_str(&self.lexical),
        }
    }
}

/// Normalizes a decimal literal: no leading `+`, no superfluous zeros, no
/// exponent, `-0` folded into `0`. Integral values lose their fraction.
fn canonical_decimal(s: &str) -> Option<String> {
    let s = s.trim();
    let (negative, rest) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], rest[i + 1..].parse::<i64>().ok()?),
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    // digits * 10^(point - digits.len())
    let mut digits: String = int_part.chars().chain(frac_part.chars()).collect();
    let mut point = int_part.len() as i64 + exponent;
    let lead = digits.len() - digits.trim_start_matches('0').len();
    digits.drain(..lead);
    point -= lead as i64;
    let trimmed = digits.trim_end_matches('0').len();
    digits.truncate(trimmed);
    if digits.is_empty() {
        return Some("0".into());
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let len = digits.len() as i64;
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else if point >= len {
        out.push_str(&digits);
        for _ in 0..point - len {
            out.push('0');
        }
    } else {
        let (a, b) = digits.split_at(point as usize);
        out.push_str(a);
        out.push('.');
        out.push_str(b);
    }
    Some(out)
}

/// Identifier of an entity or relationship instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(s: impl Into<String>) -> Self {
        NodeId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.into())
    }
}

/// An element of a graph's domain: an instance id or a data value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Term {
    Id(NodeId),
    Value(Value),
}

impl Term {
    pub fn id(s: &str) -> Self {
        Term::Id(NodeId::new(s))
    }

    pub fn text(s: &str) -> Self {
        Term::Value(Value::text(s))
    }

    pub fn as_id(&self) -> Option<&NodeId> {
        match self {
            Term::Id(id) => Some(id),
            Term::Value(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Id(id) => id.fmt(f),
            Term::Value(v) => v.fmt(f),
        }
    }
}

impl From<Value> for Term {
    fn from(v: Value) -> Self {
        Term::Value(v)
    }
}

impl From<NodeId> for Term {
    fn from(id: NodeId) -> Self {
        Term::Id(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_canonical_forms() {
        let canon = |s| canonical_decimal(s).unwrap();
        assert_eq!(canon("1.50"), "1.5");
        assert_eq!(canon("2.0"), "2");
        assert_eq!(canon("-0.0"), "0");
        assert_eq!(canon("+007"), "7");
        assert_eq!(canon(".25"), "0.25");
        assert_eq!(canon("2.5e3"), "2500");
        assert_eq!(canon("25e-3"), "0.025");
        assert_eq!(canon("-12.340"), "-12.34");
        assert!(canonical_decimal("1.2.3").is_none());
        assert!(canonical_decimal("abc").is_none());
        assert!(canonical_decimal("").is_none());
        assert!(canonical_decimal(".").is_none());
    }

    #[test]
    fn integer_and_decimal_compare_equal() {
        assert_eq!(Value::integer(2), Value::decimal("2.0").unwrap());
        assert_ne!(Value::integer(2), Value::text("2"));
        assert_ne!(Value::boolean(true), Value::text("true"));
        assert_eq!(Value::integer(2).cmp(&Value::decimal("2.00").unwrap()), Ordering::Equal);
    }

    #[test]
    fn parse_by_kind() {
        assert!(Value::parse(ValueKind::Integer, "1.5").is_err());
        assert_eq!(Value::parse(ValueKind::Integer, "010").unwrap().lexical(), "10");
        assert!(Value::parse(ValueKind::Boolean, "yes").is_err());
        assert_eq!(Value::parse(ValueKind::Text, " a ").unwrap().lexical(), " a ");
    }
}
