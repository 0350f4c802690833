//! Hierarchical content names.
//!
//! A [`Name`] is an ordered list of opaque, non-empty byte components. The
//! text form is `/` followed by the components joined with `/`; bytes outside
//! printable ASCII, and the `/` and `%` characters themselves, are written as
//! `%XX` with uppercase hex. Components compare by exact byte equality.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("name must start with '/': {0:?}")]
    MissingLeadingSlash(String),
    #[error("empty component at position {0}")]
    EmptyComponent(usize),
    #[error("bad percent escape at byte offset {0}")]
    BadEscape(usize),
}

/// A single name component. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component(Vec<u8>);

impl Component {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self, NameError> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(NameError::EmptyComponent(0));
        }
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            if (0x21..=0x7E).contains(&b) && b != b'/' && b != b'%' {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "%{b:02X}")?;
            }
        }
        Ok(())
    }
}

/// Hierarchical content name. The empty name is the root and only appears as
/// a routing wildcard; packets always carry at least one component.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    components: Vec<Component>,
}

impl Name {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn from_components(components: Vec<Component>) -> Self {
        Self { components }
    }

    /// Builds a name from raw byte components, rejecting empty ones.
    pub fn from_bytes<I, B>(parts: I) -> Result<Self, NameError>
    where
        I: IntoIterator<Item = B>,
        B: Into<Vec<u8>>,
    {
        let components = parts
            .into_iter()
            .enumerate()
            .map(|(i, p)| Component::new(p).map_err(|_| NameError::EmptyComponent(i)))
            .collect::<Result<_, _>>()?;
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Name) -> bool {
        is_prefix(self, other)
    }

    /// The first `len` components.
    pub fn prefix(&self, len: usize) -> Name {
        Name {
            components: self.components[..len.min(self.len())].to_vec(),
        }
    }

    pub fn child(&self, component: impl Into<Vec<u8>>) -> Result<Name, NameError> {
        let mut components = self.components.clone();
        components.push(Component::new(component).map_err(|_| NameError::EmptyComponent(self.len()))?);
        Ok(Name { components })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("/");
        }
        for c in &self.components {
            write!(f, "/{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Name {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_name(s)
    }
}

fn hex_value(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'A'..=b'F' => Some(b - b'A' + 10),
        b'a'..=b'f' => Some(b - b'a' + 10),
        _ => None,
    }
}

/// Parses the canonical text form. `"/"` alone is the root name.
pub fn parse_name(text: &str) -> Result<Name, NameError> {
    let bytes = text.as_bytes();
    if bytes.first() != Some(&b'/') {
        return Err(NameError::MissingLeadingSlash(text.to_owned()));
    }
    if bytes.len() == 1 {
        return Ok(Name::root());
    }
    let mut components = Vec::new();
    let mut current = Vec::new();
    let mut i = 1;
    while i < bytes.len() {
        match bytes[i] {
            b'/' => {
                if current.is_empty() {
                    return Err(NameError::EmptyComponent(components.len()));
                }
                components.push(Component(std::mem::take(&mut current)));
                i += 1;
            }
            b'%' => {
                let hi = bytes.get(i + 1).copied().and_then(hex_value);
                let lo = bytes.get(i + 2).copied().and_then(hex_value);
                match (hi, lo) {
                    (Some(hi), Some(lo)) => current.push(hi << 4 | lo),
                    _ => return Err(NameError::BadEscape(i)),
                }
                i += 3;
            }
            b => {
                current.push(b);
                i += 1;
            }
        }
    }
    if current.is_empty() {
        return Err(NameError::EmptyComponent(components.len()));
    }
    components.push(Component(current));
    Ok(Name { components })
}

/// True iff every component of `p` equals the corresponding leading
/// component of `n`.
pub fn is_prefix(p: &Name, n: &Name) -> bool {
    p.len() <= n.len() && p.components.iter().zip(&n.components).all(|(a, b)| a == b)
}

/// Returns the entry with the most components that is a prefix of `n`.
///
/// Probes the prefixes of `n` from longest to shortest, so the cost is
/// bounded by the length of `n` rather than the number of entries.
pub fn longest_prefix_match<'a>(entries: &'a HashSet<Name>, n: &Name) -> Option<&'a Name> {
    (0..=n.len()).rev().find_map(|len| entries.get(&n.prefix(len)))
}
