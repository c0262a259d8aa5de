use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("glyph id `{0}` is missing the `category:local` separator")]
    MissingSeparator(String),
    #[error("glyph id `{id}` has an invalid category token")]
    BadCategory { id: String },
    #[error("glyph id `{id}` has an invalid local token")]
    BadLocal { id: String },
}

/// Category tokens: lowercase ASCII letters, digits and `-`.
pub fn is_category_token(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

/// Local tokens additionally admit uppercase letters (`h-1-L-0`).
pub fn is_local_token(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

/// Identifier of a catalog glyph, rendered `category:local`.
///
/// Ordering and equality are defined on the rendered text, so sorting a list
/// of ids is plain lexicographic ordering of their `category:local` strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlyphId {
    text: String,
    split: usize,
}

impl GlyphId {
    pub fn new(category: &str, local: &str) -> Result<Self, IdError> {
        let text = format!("{category}:{local}");
        if !is_category_token(category) {
            return Err(IdError::BadCategory { id: text });
        }
        if !is_local_token(local) {
            return Err(IdError::BadLocal { id: text });
        }
        Ok(GlyphId {
            split: category.len(),
            text,
        })
    }

    pub fn category(&self) -> &str {
        &self.text[..self.split]
    }

    pub fn local(&self) -> &str {
        &self.text[self.split + 1..]
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl FromStr for GlyphId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (category, local) = s
            .split_once(':')
            .ok_or_else(|| IdError::MissingSeparator(s.to_string()))?;
        GlyphId::new(category, local)
    }
}

impl fmt::Display for GlyphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for GlyphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlyphId({})", self.text)
    }
}

impl Serialize for GlyphId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for GlyphId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
