//! Seeded generators and brute-force reference computations for tests.
//!
//! The reference functions here deliberately avoid the indexed and
//! incremental code paths of the library: they scan glyph lists and recount
//! raw corpora from scratch on every call.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{load_catalog, Catalog};
use crate::id::GlyphId;
use crate::sign::{PlacedGlyph, Sign, MAX_SCALE, MIN_SCALE};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for [`random_catalog_doc`].
#[derive(Debug, Clone, Copy)]
pub struct CatalogShape {
    pub max_categories: usize,
    pub max_facets: usize,
    pub max_domain: usize,
    pub max_glyphs: usize,
    /// Upper bound on distinct base forms across the catalog.
    pub max_bases: usize,
}

impl Default for CatalogShape {
    fn default() -> Self {
        CatalogShape {
            max_categories: 4,
            max_facets: 6,
            max_domain: 6,
            max_glyphs: 1000,
            max_bases: usize::MAX,
        }
    }
}

/// Renders a random but valid catalog document.
pub fn random_catalog_doc(rng: &mut TestRng, shape: CatalogShape) -> String {
    let mut doc = String::from("CATALOG random 1\n");
    let n_cats = rng.random_range(1..=shape.max_categories);
    let cats: Vec<String> = (0..n_cats).map(|i| format!("c{i}")).collect();
    let mut schemas: Vec<Vec<(String, Vec<String>)>> = Vec::new();
    for (i, cat) in cats.iter().enumerate() {
        let kind = if i % 2 == 0 { "anatomical" } else { "symbolic" };
        writeln!(doc, "CATEGORY {cat} LABEL \"Cat {i}\" KIND {kind}").unwrap();
        let n_facets = rng.random_range(0..=shape.max_facets);
        let mut facets = Vec::new();
        for f in 0..n_facets {
            let n_values = rng.random_range(1..=shape.max_domain);
            let values: Vec<String> = (0..n_values).map(|v| format!("v{v}")).collect();
            writeln!(
                doc,
                "FACET {cat} f{f} LABEL \"Facet {f}\" VALUES {}",
                values.join(",")
            )
            .unwrap();
            facets.push((format!("f{f}"), values));
        }
        schemas.push(facets);
    }
    let n_glyphs = rng.random_range(0..=shape.max_glyphs);
    let mut bases: Vec<Vec<String>> = vec![Vec::new(); n_cats];
    let mut base_total = 0;
    for g in 0..n_glyphs {
        let c = rng.random_range(0..n_cats);
        let id = format!("{}:g{g}", cats[c]);
        let can_be_base = base_total < shape.max_bases;
        let base = if bases[c].is_empty() || (can_be_base && rng.random_bool(0.4)) {
            if !can_be_base {
                continue;
            }
            bases[c].push(id.clone());
            base_total += 1;
            id.clone()
        } else {
            bases[c].choose(rng).unwrap().clone()
        };
        let mut assigned = Vec::new();
        for (name, values) in &schemas[c] {
            if rng.random_bool(0.9) {
                assigned.push(format!("{name}={}", values.choose(rng).unwrap()));
            }
        }
        write!(doc, "GLYPH {id} BASE {base}").unwrap();
        if !assigned.is_empty() {
            write!(doc, " FACETS {}", assigned.join(",")).unwrap();
        }
        writeln!(doc, " PATH \"M0 0 L{} 100\"", g % 100).unwrap();
    }
    doc
}

pub fn random_catalog(rng: &mut TestRng, shape: CatalogShape) -> Catalog {
    let doc = random_catalog_doc(rng, shape);
    load_catalog(&doc).expect("generated catalogs are valid")
}

/// A random selection set: category plus distinct (facet, value) pairs.
pub fn random_selections(rng: &mut TestRng, catalog: &Catalog) -> (String, Vec<(String, String)>) {
    let category = catalog.categories().choose(rng).unwrap().token.clone();
    let schema = catalog.facet_schema(&category).unwrap();
    let mut picks = Vec::new();
    for facet in &schema.facets {
        if rng.random_bool(0.5) {
            picks.push((facet.name.clone(), facet.domain.choose(rng).unwrap().clone()));
        }
    }
    picks.shuffle(rng);
    (category, picks)
}

/// Linear scan over every glyph of the catalog.
pub fn naive_filter(catalog: &Catalog, category: &str, selections: &[(String, String)]) -> Vec<GlyphId> {
    let mut hits: Vec<GlyphId> = catalog
        .glyphs()
        .filter(|g| g.category == category)
        .filter(|g| {
            selections
                .iter()
                .all(|(f, v)| g.facets.get(f).map(String::as_str) == Some(v.as_str()))
        })
        .map(|g| g.id.clone())
        .collect();
    hits.sort_by(|a, b| a.as_str().cmp(b.as_str()));
    hits
}

pub fn random_sign(rng: &mut TestRng, catalog: &Catalog, max_placements: usize) -> Sign {
    let ids: Vec<&GlyphId> = catalog.glyphs().map(|g| &g.id).collect();
    let w = rng.random_range(1..=1200);
    let h = rng.random_range(1..=1200);
    let mut sign = Sign::with_canvas(w, h).unwrap();
    if ids.is_empty() {
        return sign;
    }
    let n = rng.random_range(0..=max_placements);
    for _ in 0..n {
        sign.placements.push(PlacedGlyph {
            glyph_id: (*ids.choose(rng).unwrap()).clone(),
            x: rng.random_range(0..=w as i32),
            y: rng.random_range(0..=h as i32),
            rot: rng.random_range(0..8),
            mirrored: rng.random_bool(0.5),
            scale: rng.random_range(MIN_SCALE..=MAX_SCALE),
        });
    }
    sign
}

pub fn random_corpus(rng: &mut TestRng, catalog: &Catalog, max_signs: usize, max_placements: usize) -> Vec<Sign> {
    let n = rng.random_range(0..=max_signs);
    (0..n).map(|_| random_sign(rng, catalog, max_placements)).collect()
}

fn bases_of(sign: &Sign, catalog: &Catalog) -> BTreeSet<GlyphId> {
    sign.placements
        .iter()
        .map(|p| catalog.get_glyph(&p.glyph_id).unwrap().base_id.clone())
        .collect()
}

fn corpus_bases(corpus: &[Sign], catalog: &Catalog) -> Vec<BTreeSet<GlyphId>> {
    corpus.iter().map(|s| bases_of(s, catalog)).collect()
}

fn count_pair(sets: &[BTreeSet<GlyphId>], a: &GlyphId, b: &GlyphId) -> u64 {
    if a == b {
        return 0;
    }
    sets.iter().filter(|s| s.contains(a) && s.contains(b)).count() as u64
}

fn count_unary(sets: &[BTreeSet<GlyphId>], a: &GlyphId) -> u64 {
    sets.iter().filter(|s| s.contains(a)).count() as u64
}

/// Number of signs containing both base forms, recounted from the corpus.
pub fn brute_pair(corpus: &[Sign], catalog: &Catalog, a: &GlyphId, b: &GlyphId) -> u64 {
    count_pair(&corpus_bases(corpus, catalog), a, b)
}

pub fn brute_unary(corpus: &[Sign], catalog: &Catalog, a: &GlyphId) -> u64 {
    count_unary(&corpus_bases(corpus, catalog), a)
}

/// Every non-zero pair count, recounted by enumerating all base pairs.
pub fn brute_pair_table(corpus: &[Sign], catalog: &Catalog) -> BTreeMap<(GlyphId, GlyphId), u64> {
    let sets = corpus_bases(corpus, catalog);
    let bases: BTreeSet<GlyphId> = catalog.glyphs().map(|g| g.base_id.clone()).collect();
    let bases: Vec<GlyphId> = bases.into_iter().collect();
    let mut out = BTreeMap::new();
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i + 1..] {
            let n = count_pair(&sets, a, b);
            if n > 0 {
                out.insert((a.clone(), b.clone()), n);
            }
        }
    }
    out
}

/// Reference hint list: (glyph id, score) in ranking order, untruncated.
pub fn brute_hints(
    corpus: &[Sign],
    catalog: &Catalog,
    area: &str,
    placed: &[GlyphId],
    tau: u64,
) -> Vec<(GlyphId, u64)> {
    let placed_bases: BTreeSet<GlyphId> = placed
        .iter()
        .map(|id| catalog.get_glyph(id).unwrap().base_id.clone())
        .collect();
    let sets = corpus_bases(corpus, catalog);
    let mut rows: Vec<(GlyphId, u64, u64)> = Vec::new();
    for g in catalog.glyphs().filter(|g| g.category == area) {
        let unary = count_unary(&sets, &g.base_id);
        if placed_bases.is_empty() {
            if unary >= 1 {
                rows.push((g.id.clone(), unary, unary));
            }
            continue;
        }
        if placed_bases.contains(&g.base_id) {
            continue;
        }
        let counts: Vec<u64> = placed_bases
            .iter()
            .map(|p| count_pair(&sets, &g.base_id, p))
            .collect();
        if counts.iter().all(|&c| c >= tau) {
            rows.push((g.id.clone(), *counts.iter().min().unwrap(), unary));
        }
    }
    rows.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(b.2.cmp(&a.2))
            .then(a.0.as_str().cmp(b.0.as_str()))
    });
    rows.into_iter().map(|(id, score, _)| (id, score)).collect()
}
