//! Catalogs and corpora bundled with the crate.

use crate::catalog::Catalog;
use crate::notation::parse_text;
use crate::sign::Sign;

/// Two categories (`hands`, `head`), 52 glyphs.
pub const FIXTURE_CATALOG: &str = include_str!("../data/fixture.catalog");

/// Editor catalog covering every Puppet area plus punctuation and contact.
pub const SAMPLE_CATALOG: &str = include_str!("../data/sample.catalog");

/// Four signs over [`FIXTURE_CATALOG`], one SWT1 string per line.
pub const FIXTURE_CORPUS: &str = include_str!("../data/fixture_corpus.swt");

/// Twenty signs over [`FIXTURE_CATALOG`].
pub const EXPORT_CORPUS: &str = include_str!("../data/export_corpus.swt");

/// Parses a `#`-commented list of SWT1 lines.
///
/// # Panics
///
/// If a line does not parse against `catalog`; bundled corpora always do.
pub fn parse_corpus(text: &str, catalog: &Catalog) -> Vec<Sign> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_text(l, catalog).unwrap_or_else(|e| panic!("bundled corpus line `{l}`: {e}")))
        .collect()
}

pub fn fixture_corpus(catalog: &Catalog) -> Vec<Sign> {
    parse_corpus(FIXTURE_CORPUS, catalog)
}

pub fn export_corpus(catalog: &Catalog) -> Vec<Sign> {
    parse_corpus(EXPORT_CORPUS, catalog)
}
