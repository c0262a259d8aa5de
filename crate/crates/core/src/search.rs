//! Choose Box search: order-free facet selections over one category.
//!
//! Each category carries a posting list per (facet, value) holding the
//! positions of matching glyphs in the category's id-sorted member list.
//! A query intersects the posting lists of its selections, so results come
//! out already in id order.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, FacetSchema, Glyph, LookupError};
use crate::id::GlyphId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("unknown facet `{facet}` for category `{category}`")]
    UnknownFacet { category: String, facet: String },
    #[error("value `{value}` is outside the domain of facet `{facet}`")]
    OutOfDomain { facet: String, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CategoryIndex {
    members: Vec<GlyphId>,
    postings: BTreeMap<String, BTreeMap<String, Vec<u32>>>,
}

impl CategoryIndex {
    pub(crate) fn build<'a>(
        schema: &FacetSchema,
        glyphs: impl Iterator<Item = &'a Glyph>,
    ) -> Self {
        let mut members: Vec<&Glyph> = glyphs.collect();
        members.sort_by(|a, b| a.id.cmp(&b.id));
        let mut postings: BTreeMap<String, BTreeMap<String, Vec<u32>>> = schema
            .facets
            .iter()
            .map(|f| {
                let values = f.domain.iter().map(|v| (v.clone(), Vec::new())).collect();
                (f.name.clone(), values)
            })
            .collect();
        for (pos, glyph) in members.iter().enumerate() {
            for (facet, value) in &glyph.facets {
                if let Some(list) = postings.get_mut(facet).and_then(|m| m.get_mut(value)) {
                    list.push(pos as u32);
                }
            }
        }
        CategoryIndex {
            members: members.into_iter().map(|g| g.id.clone()).collect(),
            postings,
        }
    }

    pub(crate) fn members(&self) -> &[GlyphId] {
        &self.members
    }

    fn posting(&self, facet: &str, value: &str) -> &[u32] {
        self.postings
            .get(facet)
            .and_then(|m| m.get(value))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Positions matching every selection, skipping `except` if given.
    fn matching<'q>(
        &self,
        selections: impl Iterator<Item = (&'q String, &'q String)>,
        except: Option<&str>,
    ) -> Option<Vec<u32>> {
        let mut lists: Vec<&[u32]> = selections
            .filter(|(f, _)| Some(f.as_str()) != except)
            .map(|(f, v)| self.posting(f, v))
            .collect();
        if lists.is_empty() {
            return None;
        }
        lists.sort_by_key(|l| l.len());
        let mut acc = lists[0].to_vec();
        for list in &lists[1..] {
            acc = intersect(&acc, list);
            if acc.is_empty() {
                break;
            }
        }
        Some(acc)
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn count_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// A set of Choose Box selections within one category.
///
/// Queries are values: `set_facet` and `clear_facet` return a new query and
/// leave the receiver untouched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetQuery {
    category: String,
    selections: BTreeMap<String, String>,
}

pub type RemainingCounts = BTreeMap<String, BTreeMap<String, usize>>;

impl FacetQuery {
    pub fn new(catalog: &Catalog, category: &str) -> Result<Self, SearchError> {
        catalog.facet_schema(category)?;
        Ok(FacetQuery {
            category: category.to_string(),
            selections: BTreeMap::new(),
        })
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    pub fn selections(&self) -> &BTreeMap<String, String> {
        &self.selections
    }

    pub fn set_facet(
        &self,
        catalog: &Catalog,
        facet: &str,
        value: &str,
    ) -> Result<Self, SearchError> {
        let schema = catalog.facet_schema(&self.category)?;
        let declared = schema
            .facet(facet)
            .ok_or_else(|| self.unknown_facet(facet))?;
        if !declared.admits(value) {
            return Err(SearchError::OutOfDomain {
                facet: facet.to_string(),
                value: value.to_string(),
            });
        }
        let mut next = self.clone();
        next.selections.insert(facet.to_string(), value.to_string());
        Ok(next)
    }

    pub fn clear_facet(&self, catalog: &Catalog, facet: &str) -> Result<Self, SearchError> {
        let schema = catalog.facet_schema(&self.category)?;
        if schema.facet(facet).is_none() {
            return Err(self.unknown_facet(facet));
        }
        let mut next = self.clone();
        next.selections.remove(facet);
        Ok(next)
    }

    fn unknown_facet(&self, facet: &str) -> SearchError {
        SearchError::UnknownFacet {
            category: self.category.clone(),
            facet: facet.to_string(),
        }
    }

    /// Glyphs of the category matching every selection, in id order.
    pub fn execute<'c>(&self, catalog: &'c Catalog) -> Result<Vec<&'c Glyph>, SearchError> {
        let index = catalog.category_index(&self.category)?;
        let ids: Vec<&GlyphId> = match index.matching(self.selections.iter(), None) {
            None => index.members().iter().collect(),
            Some(hits) => hits.iter().map(|&p| &index.members()[p as usize]).collect(),
        };
        ids.into_iter()
            .map(|id| catalog.get_glyph(id).map_err(SearchError::from))
            .collect()
    }

    /// For every facet and value, the result size if that value were chosen.
    pub fn remaining_counts(&self, catalog: &Catalog) -> Result<RemainingCounts, SearchError> {
        let schema = catalog.facet_schema(&self.category)?;
        let index = catalog.category_index(&self.category)?;
        let mut counts = RemainingCounts::new();
        for facet in &schema.facets {
            let others = index.matching(self.selections.iter(), Some(&facet.name));
            let per_value = facet
                .domain
                .iter()
                .map(|value| {
                    let posting = index.posting(&facet.name, value);
                    let n = match &others {
                        None => posting.len(),
                        Some(base) => count_common(base, posting),
                    };
                    (value.clone(), n)
                })
                .collect();
            counts.insert(facet.name.clone(), per_value);
        }
        Ok(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_catalog;
    use crate::fixtures::FIXTURE_CATALOG;

    fn fixture() -> Catalog {
        load_catalog(FIXTURE_CATALOG).unwrap()
    }

    fn ids(glyphs: &[&Glyph]) -> Vec<String> {
        glyphs.iter().map(|g| g.id.to_string()).collect()
    }

    #[test]
    fn new_query_examples() {
        let cat = fixture();
        let q = FacetQuery::new(&cat, "hands").unwrap();
        assert_eq!(q.category(), "hands");
        assert!(q.selections().is_empty());
        assert!(FacetQuery::new(&cat, "head").unwrap().selections().is_empty());
        assert!(matches!(
            FacetQuery::new(&cat, "x"),
            Err(SearchError::Lookup(LookupError::UnknownCategory(_)))
        ));
    }

    #[test]
    fn set_facet_replaces_and_validates() {
        let cat = fixture();
        let q = FacetQuery::new(&cat, "hands").unwrap();
        let l = q.set_facet(&cat, "handedness", "L").unwrap();
        assert!(q.selections().is_empty(), "input query must not change");
        assert_eq!(l.selections()["handedness"], "L");
        let r = l.set_facet(&cat, "handedness", "R").unwrap();
        assert_eq!(r.selections().len(), 1);
        assert_eq!(r.selections()["handedness"], "R");
        assert!(matches!(
            q.set_facet(&cat, "fingers", "7"),
            Err(SearchError::OutOfDomain { .. })
        ));
        assert!(matches!(
            q.set_facet(&cat, "color", "red"),
            Err(SearchError::UnknownFacet { .. })
        ));
    }

    #[test]
    fn clear_facet_examples() {
        let cat = fixture();
        let q = FacetQuery::new(&cat, "hands").unwrap();
        let l = q.set_facet(&cat, "handedness", "L").unwrap();
        assert_eq!(l.clear_facet(&cat, "handedness").unwrap(), q);
        assert_eq!(q.clear_facet(&cat, "handedness").unwrap(), q);
        assert!(matches!(
            q.clear_facet(&cat, "color"),
            Err(SearchError::UnknownFacet { .. })
        ));
    }

    #[test]
    fn execute_examples() {
        let cat = fixture();
        let q = FacetQuery::new(&cat, "hands").unwrap();
        assert_eq!(q.execute(&cat).unwrap().len(), 48);
        let l = q.set_facet(&cat, "handedness", "L").unwrap();
        assert_eq!(l.execute(&cat).unwrap().len(), 24);
        let one = l
            .set_facet(&cat, "fingers", "1")
            .unwrap()
            .set_facet(&cat, "rotation", "3")
            .unwrap();
        assert_eq!(ids(&one.execute(&cat).unwrap()), ["hands:h-1-L-3"]);
    }

    #[test]
    fn results_are_id_ordered() {
        let cat = fixture();
        let q = FacetQuery::new(&cat, "hands")
            .unwrap()
            .set_facet(&cat, "rotation", "0")
            .unwrap();
        let got = ids(&q.execute(&cat).unwrap());
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(got, sorted);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn remaining_counts_examples() {
        let cat = fixture();
        let q = FacetQuery::new(&cat, "hands").unwrap();
        let counts = q.remaining_counts(&cat).unwrap();
        assert_eq!(counts["handedness"]["L"], 24);
        assert_eq!(counts["handedness"]["R"], 24);

        let f1 = q.set_facet(&cat, "fingers", "1").unwrap();
        let counts = f1.remaining_counts(&cat).unwrap();
        assert_eq!(counts["rotation"].len(), 8);
        assert!(counts["rotation"].values().all(|&n| n == 2));
        // Re-choosing within the selected box counts as a replacement.
        assert_eq!(counts["fingers"]["2"], 16);

        let head = FacetQuery::new(&cat, "head").unwrap();
        let counts = head.remaining_counts(&cat).unwrap();
        assert_eq!(counts["region"]["brow"], 2);
        assert_eq!(counts["region"]["mouth"], 2);
    }
}
