use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One step of an [`AnnotationPath`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathSegment {
    Root(usize),
    Property(String),
    Index(usize),
}

/// Location of a node or value inside an annotation graph, rendered as
/// `$<root>(.<property>([<index>])?)*`. The empty path renders as `$` and
/// denotes the block as a whole.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnnotationPath {
    segments: Vec<PathSegment>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed annotation path `{0}`")]
pub struct PathParseError(pub String);

impl AnnotationPath {
    /// The whole-block path `$`.
    pub fn block() -> Self {
        Self::default()
    }

    pub fn root(index: usize) -> Self {
        Self { segments: vec![PathSegment::Root(index)] }
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    pub fn property(&self, name: &str) -> Self {
        let mut segments = self.segments.clone();
        segments.push(PathSegment::Property(name.to_owned()));
        Self { segments }
    }

    pub fn index(&self, index: usize) -> Self {
        let mut segments = self.segments.clone();
        segments.push(PathSegment::Index(index));
        Self { segments }
    }

    /// Path of the `index`-th of `count` values of `name`: the index is
    /// omitted for single-valued properties.
    pub fn value(&self, name: &str, index: usize, count: usize) -> Self {
        let property = self.property(name);
        if count == 1 {
            property
        } else {
            property.index(index)
        }
    }

    pub fn starts_with(&self, prefix: &AnnotationPath) -> bool {
        self.segments.starts_with(&prefix.segments)
    }
}

impl fmt::Display for AnnotationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("$")?;
        for segment in &self.segments {
            match segment {
                PathSegment::Root(i) => write!(f, "{i}")?,
                PathSegment::Property(name) => write!(f, ".{name}")?,
                PathSegment::Index(i) => write!(f, "[{i}]")?,
            }
        }
        Ok(())
    }
}

fn digit_len(s: &str) -> usize {
    s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len())
}

impl FromStr for AnnotationPath {
    type Err = PathParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PathParseError(s.to_owned());
        let mut rest = s.strip_prefix('$').ok_or_else(err)?;
        if rest.is_empty() {
            return Ok(Self::block());
        }
        let end = digit_len(rest);
        if end == 0 {
            return Err(err());
        }
        let mut segments = vec![PathSegment::Root(rest[..end].parse().map_err(|_| err())?)];
        rest = &rest[end..];
        while !rest.is_empty() {
            rest = rest.strip_prefix('.').ok_or_else(err)?;
            let end = rest.find(['.', '[']).unwrap_or(rest.len());
            if end == 0 {
                return Err(err());
            }
            segments.push(PathSegment::Property(rest[..end].to_owned()));
            rest = &rest[end..];
            if let Some(after) = rest.strip_prefix('[') {
                let end = digit_len(after);
                if end == 0 || !after[end..].starts_with(']') {
                    return Err(err());
                }
                segments.push(PathSegment::Index(after[..end].parse().map_err(|_| err())?));
                rest = &after[end + 1..];
            }
        }
        Ok(Self { segments })
    }
}

impl Serialize for AnnotationPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AnnotationPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
