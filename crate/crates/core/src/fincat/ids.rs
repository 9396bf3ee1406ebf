use std::fmt;

/// Name of an object in a finite category.
///
/// Identifiers are opaque strings; constructed categories use conventional
/// shapes such as `(a|b)` for pair objects, but nothing ever parses them
/// back.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ObjId(String);

/// Name of a morphism in a finite category.
///
/// The name `1_<obj>` is reserved for the identity on `<obj>`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MorId(String);

impl ObjId {
    pub fn new(name: impl Into<String>) -> Self {
        ObjId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl MorId {
    pub fn new(name: impl Into<String>) -> Self {
        MorId(name.into())
    }

    /// The reserved identity name for an object.
    pub fn identity_of(obj: &ObjId) -> Self {
        MorId(format!("1_{}", obj.as_str()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjId {
    fn from(s: &str) -> Self {
        ObjId::new(s)
    }
}

impl From<&str> for MorId {
    fn from(s: &str) -> Self {
        MorId::new(s)
    }
}

impl From<String> for ObjId {
    fn from(s: String) -> Self {
        ObjId(s)
    }
}

impl From<String> for MorId {
    fn from(s: String) -> Self {
        MorId(s)
    }
}
