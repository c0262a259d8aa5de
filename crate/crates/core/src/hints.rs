//! Hint Panel statistics: base-form co-occurrence across saved signs.
//!
//! Counts are keyed on a glyph's `base_id`, so rotated or mirrored variants
//! of one hand shape share their statistics. Within one sign a base form
//! counts at most once.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, Glyph, LookupError};
use crate::id::GlyphId;
use crate::sign::Sign;

pub const DEFAULT_TAU: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HintError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("compatibility threshold must be at least 1")]
    ZeroThreshold,
    #[error("hint limit must be at least 1")]
    ZeroLimit,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceTable {
    pairs: BTreeMap<(GlyphId, GlyphId), u64>,
    unary: BTreeMap<GlyphId, u64>,
    sign_total: u64,
}

fn pair_key(a: &GlyphId, b: &GlyphId) -> (GlyphId, GlyphId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// The distinct base forms of a sign's placements.
pub fn base_set(sign: &Sign, catalog: &Catalog) -> Result<BTreeSet<GlyphId>, LookupError> {
    sign.placements
        .iter()
        .map(|p| catalog.base_of(&p.glyph_id).cloned())
        .collect()
}

impl CooccurrenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rebuild<'a>(
        corpus: impl IntoIterator<Item = &'a Sign>,
        catalog: &Catalog,
    ) -> Result<Self, HintError> {
        let mut table = Self::new();
        for sign in corpus {
            table.record(sign, catalog)?;
        }
        Ok(table)
    }

    /// Returns a copy of the table with `sign` counted.
    pub fn record_sign(&self, sign: &Sign, catalog: &Catalog) -> Result<Self, HintError> {
        let mut next = self.clone();
        next.record(sign, catalog)?;
        Ok(next)
    }

    /// Counts `sign` in place. On error the table is unchanged.
    pub fn record(&mut self, sign: &Sign, catalog: &Catalog) -> Result<(), HintError> {
        let bases: Vec<GlyphId> = base_set(sign, catalog)?.into_iter().collect();
        for (i, a) in bases.iter().enumerate() {
            *self.unary.entry(a.clone()).or_default() += 1;
            for b in &bases[i + 1..] {
                *self.pairs.entry((a.clone(), b.clone())).or_default() += 1;
            }
        }
        self.sign_total += 1;
        Ok(())
    }

    pub fn pair(&self, a: &GlyphId, b: &GlyphId) -> u64 {
        self.pairs.get(&pair_key(a, b)).copied().unwrap_or(0)
    }

    pub fn unary(&self, base: &GlyphId) -> u64 {
        self.unary.get(base).copied().unwrap_or(0)
    }

    pub fn sign_total(&self) -> u64 {
        self.sign_total
    }

    /// Non-zero pair counts, each unordered pair once with `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (&GlyphId, &GlyphId, u64)> {
        self.pairs.iter().map(|((a, b), &n)| (a, b, n))
    }

    pub fn unary_counts(&self) -> impl Iterator<Item = (&GlyphId, u64)> {
        self.unary.iter().map(|(id, &n)| (id, n))
    }

    /// The `n` most frequent pairs, ties broken by the pair's ids.
    pub fn top_pairs(&self, n: usize) -> Vec<(&GlyphId, &GlyphId, u64)> {
        let mut all: Vec<_> = self.pairs().collect();
        all.sort_by(|x, y| y.2.cmp(&x.2).then_with(|| (x.0, x.1).cmp(&(y.0, y.1))));
        all.truncate(n);
        all
    }

    /// Glyphs of `area` compatible with every placed glyph.
    ///
    /// With nothing placed, every glyph whose base appears in at least one
    /// saved sign is a candidate, scored by that frequency. Otherwise a glyph
    /// qualifies when its base co-occurs at least `tau` times with each placed
    /// base (and is not itself placed); its score is the weakest of those
    /// counts. Ties fall back to base frequency, then glyph id.
    pub fn hints<'c>(
        &self,
        catalog: &'c Catalog,
        area: &str,
        placed: &[GlyphId],
        tau: u64,
        limit: usize,
    ) -> Result<HintResult<'c>, HintError> {
        if tau == 0 {
            return Err(HintError::ZeroThreshold);
        }
        if limit == 0 {
            return Err(HintError::ZeroLimit);
        }
        let members = catalog.glyphs_in_category(area)?;
        let placed_bases: BTreeSet<&GlyphId> = placed
            .iter()
            .map(|id| catalog.base_of(id))
            .collect::<Result<_, _>>()?;

        let mut scored: Vec<(u64, u64, &'c Glyph)> = Vec::new();
        for glyph in members {
            let base = &glyph.base_id;
            let unary = self.unary(base);
            let score = if placed_bases.is_empty() {
                (unary >= 1).then_some(unary)
            } else if placed_bases.contains(base) {
                None
            } else {
                let weakest = placed_bases
                    .iter()
                    .map(|p| self.pair(base, p))
                    .min()
                    .expect("non-empty placed set");
                (weakest >= tau).then_some(weakest)
            };
            if let Some(score) = score {
                scored.push((score, unary, glyph));
            }
        }
        scored.sort_by(|a, b| {
            b.0.cmp(&a.0)
                .then_with(|| b.1.cmp(&a.1))
                .then_with(|| a.2.id.cmp(&b.2.id))
        });
        let total = scored.len();
        scored.truncate(limit);
        Ok(HintResult {
            hints: scored
                .into_iter()
                .map(|(score, _, glyph)| Hint { glyph, score })
                .collect(),
            total,
        })
    }

    /// The minimized panel's badge: the untruncated number of hints.
    pub fn hint_count(
        &self,
        catalog: &Catalog,
        area: &str,
        placed: &[GlyphId],
        tau: u64,
    ) -> Result<usize, HintError> {
        Ok(self.hints(catalog, area, placed, tau, usize::MAX)?.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hint<'c> {
    pub glyph: &'c Glyph,
    pub score: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HintResult<'c> {
    pub hints: Vec<Hint<'c>>,
    /// Candidate count before truncation to the limit.
    pub total: usize,
}
