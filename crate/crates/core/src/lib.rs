//! Core of a SignWriting sign editor.
//!
//! - [`catalog`]: the immutable glyph inventory and per-category facet schemas.
//! - [`search`]: order-free facet selection over a category (the Choose Boxes).
//! - [`sign`]: the composition document and its multi-selection edits.
//! - [`hints`]: co-occurrence statistics over saved signs and the hint ranking.
//! - [`notation`], [`svg`], [`store`]: the text, image and database save formats.

pub mod catalog;
pub mod fixtures;
pub mod hints;
pub mod id;
pub mod notation;
pub mod search;
pub mod sign;
pub mod store;
pub mod svg;

pub use catalog::{load_catalog, Catalog, CatalogError, Category, CategoryKind, FacetSchema, Glyph, LookupError};
pub use hints::{CooccurrenceTable, Hint, HintError, HintResult};
pub use id::GlyphId;
pub use notation::{parse_text, serialize_text, NotationError};
pub use search::{FacetQuery, SearchError};
pub use sign::{Direction, PlacedGlyph, Rect, Selection, Sign, SignError};
pub use store::{SignRecord, SignStore, SignSummary, StoreError};
pub use svg::export_svg;

#[cfg(feature = "testkit")]
pub mod testkit;
