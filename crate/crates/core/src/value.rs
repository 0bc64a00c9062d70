//! The universal element type for players, situations, nodes and actions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("atoms must be nonempty strings")]
    EmptyAtom,
    #[error("malformed node-set literal `{0}`")]
    MalformedSet(String),
}

/// An opaque, nonempty string. Nodes and actions are always atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(s: impl Into<String>) -> Result<Self, ValueError> {
        let s = s.into();
        if s.is_empty() {
            return Err(ValueError::EmptyAtom);
        }
        Ok(Atom(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Atom {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Atom::new(s)
    }
}

impl AsRef<str> for Atom {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Either an atom or a finite set of atoms.
///
/// The derived order puts every atom before every node set; atoms compare
/// lexicographically and node sets compare by their sorted element lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(Atom),
    Set(BTreeSet<Atom>),
}

impl Value {
    pub fn atom(s: impl Into<String>) -> Result<Self, ValueError> {
        Atom::new(s).map(Value::Atom)
    }

    pub fn set<I, S>(items: I) -> Result<Self, ValueError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        items
            .into_iter()
            .map(Atom::new)
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Value::Set)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Value::Atom(a) => Some(a),
            Value::Set(_) => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Atom>> {
        match self {
            Value::Atom(_) => None,
            Value::Set(s) => Some(s),
        }
    }
}

impl From<Atom> for Value {
    fn from(a: Atom) -> Self {
        Value::Atom(a)
    }
}

impl From<BTreeSet<Atom>> for Value {
    fn from(s: BTreeSet<Atom>) -> Self {
        Value::Set(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => write!(f, "{a}"),
            Value::Set(s) => {
                f.write_str("{")?;
                for (k, a) in s.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Shorthand syntax: `{a,b,c}` is a node set (whitespace around elements is
/// trimmed, `{}` is the empty set); anything else is an atom.
impl FromStr for Value {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.strip_prefix('{') {
            Some(rest) => {
                let inner = rest
                    .strip_suffix('}')
                    .ok_or_else(|| ValueError::MalformedSet(s.to_string()))?;
                if inner.trim().is_empty() {
                    return Ok(Value::Set(BTreeSet::new()));
                }
                inner
                    .split(',')
                    .map(|e| Atom::new(e.trim()).map_err(|_| ValueError::MalformedSet(s.to_string())))
                    .collect::<Result<BTreeSet<_>, _>>()
                    .map(Value::Set)
            }
            None => Value::atom(t),
        }
    }
}
