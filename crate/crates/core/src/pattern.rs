//! Tree patterns over role and attribute names.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A tree pattern. Attribute names occur only at leaves; children are
/// ordered and leaf pre-order fixes the order of tuple components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Attr(String),
    Role(String),
    Nav(String, Vec<Pattern>),
}

impl Pattern {
    pub fn attr(name: &str) -> Self {
        Pattern::Attr(name.into())
    }

    pub fn role(name: &str) -> Self {
        Pattern::Role(name.into())
    }

    /// `B(p1, ..., pm)`; `children` must be non-empty.
    pub fn nav(role: &str, children: Vec<Pattern>) -> Self {
        debug_assert!(!children.is_empty(), "navigation needs at least one child");
        Pattern::Nav(role.into(), children)
    }

    /// Number of leaves.
    pub fn arity(&self) -> usize {
        match self {
            Pattern::Attr(_) | Pattern::Role(_) => 1,
            Pattern::Nav(_, children) => children.iter().map(Pattern::arity).sum(),
        }
    }

    /// True iff every leaf is an attribute.
    pub fn is_ground(&self) -> bool {
        match self {
            Pattern::Attr(_) => true,
            Pattern::Role(_) => false,
            Pattern::Nav(_, children) => children.iter().all(Pattern::is_ground),
        }
    }

    /// Depth of role navigation: 0 for leaves.
    pub fn depth(&self) -> usize {
        match self {
            Pattern::Attr(_) | Pattern::Role(_) => 0,
            Pattern::Nav(_, children) => 1 + children.iter().map(Pattern::depth).max().unwrap_or(0),
        }
    }

    /// The name at the root of the pattern.
    pub fn head(&self) -> &str {
        match self {
            Pattern::Attr(n) | Pattern::Role(n) | Pattern::Nav(n, _) => n,
        }
    }

    /// All names in the pattern, pre-order.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        out.push(self.head());
        if let Pattern::Nav(_, children) = self {
            for c in children {
                c.collect_names(out);
            }
        }
    }

    /// Rewrites every leaf whose name satisfies `is_role` into a role leaf,
    /// and every other leaf into an attribute leaf.
    pub(crate) fn reclassify_leaves(&mut self, is_role: &dyn Fn(&str) -> bool) {
        match self {
            Pattern::Attr(n) | Pattern::Role(n) => {
                let n = core::mem::take(n);
                *self = if is_role(&n) { Pattern::Role(n) } else { Pattern::Attr(n) };
            }
            Pattern::Nav(_, children) => {
                for c in children {
                    c.reclassify_leaves(is_role);
                }
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Attr(n) | Pattern::Role(n) => f.write_str(n),
            Pattern::Nav(n, children) => {
                write!(f, "{n}(")?;
                write_list(f, children)?;
                f.write_str(")")
            }
        }
    }
}

/// Writes `items` separated by `", "`.
pub(crate) fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        item.fmt(f)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn p4() -> Pattern {
        Pattern::nav("msg", vec![Pattern::nav("author", vec![Pattern::attr("fname"), Pattern::attr("lname")])])
    }

    #[test]
    fn arity_counts_leaves() {
        assert_eq!(Pattern::attr("name").arity(), 1);
        assert_eq!(p4().arity(), 2);
        let p = Pattern::nav(
            "b",
            vec![Pattern::nav("b2", vec![Pattern::attr("a")]), Pattern::attr("a2"), Pattern::role("c")],
        );
        assert_eq!(p.arity(), 3);
    }

    #[test]
    fn groundness() {
        assert!(p4().is_ground());
        assert!(!Pattern::nav("msg", vec![Pattern::role("author")]).is_ground());
        assert!(Pattern::attr("name").is_ground());
        assert!(!Pattern::role("student").is_ground());
    }

    #[test]
    fn display_uses_functional_notation() {
        assert_eq!(p4().to_string(), "msg(author(fname, lname))");
        assert_eq!(p4().depth(), 2);
        assert_eq!(p4().names(), ["msg", "author", "fname", "lname"]);
    }
}
