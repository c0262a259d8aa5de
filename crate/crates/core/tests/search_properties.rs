use std::collections::BTreeSet;
use std::time::Instant;

use proptest::prelude::*;
use swift_core::testkit::{naive_filter, random_catalog, random_selections, rng, CatalogShape};
use swift_core::{Catalog, FacetQuery, GlyphId};

fn build(cat: &Catalog, category: &str, picks: &[(String, String)]) -> FacetQuery {
    picks.iter().fold(FacetQuery::new(cat, category).unwrap(), |q, (f, v)| {
        q.set_facet(cat, f, v).unwrap()
    })
}

fn ids(cat: &Catalog, q: &FacetQuery) -> Vec<GlyphId> {
    q.execute(cat).unwrap().into_iter().map(|g| g.id.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn execute_matches_linear_scan(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cat = random_catalog(&mut r, CatalogShape { max_glyphs: 400, ..Default::default() });
        for _ in 0..10 {
            let (category, picks) = random_selections(&mut r, &cat);
            let q = build(&cat, &category, &picks);
            prop_assert_eq!(ids(&cat, &q), naive_filter(&cat, &category, &picks));
        }
    }

    #[test]
    fn selection_order_is_irrelevant(seed in any::<u64>(), rot in 0usize..8) {
        let mut r = rng(seed);
        let cat = random_catalog(&mut r, CatalogShape { max_glyphs: 200, ..Default::default() });
        let (category, mut picks) = random_selections(&mut r, &cat);
        let forward = ids(&cat, &build(&cat, &category, &picks));
        if !picks.is_empty() {
            let n = rot % picks.len();
            picks.rotate_left(n);
        }
        picks.reverse();
        prop_assert_eq!(forward, ids(&cat, &build(&cat, &category, &picks)));
    }

    #[test]
    fn adding_a_selection_never_grows_results(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cat = random_catalog(&mut r, CatalogShape { max_glyphs: 200, ..Default::default() });
        let (category, picks) = random_selections(&mut r, &cat);
        let q = FacetQuery::new(&cat, &category).unwrap();
        let mut prev: BTreeSet<GlyphId> = ids(&cat, &q).into_iter().collect();
        let mut cur = q;
        for (f, v) in &picks {
            cur = cur.set_facet(&cat, f, v).unwrap();
            let next: BTreeSet<GlyphId> = ids(&cat, &cur).into_iter().collect();
            prop_assert!(next.is_subset(&prev));
            prev = next;
        }
    }

    #[test]
    fn clearing_undoes_setting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cat = random_catalog(&mut r, CatalogShape { max_glyphs: 50, ..Default::default() });
        let (category, picks) = random_selections(&mut r, &cat);
        let schema = cat.facet_schema(&category).unwrap();
        let q = build(&cat, &category, &picks);
        for facet in &schema.facets {
            if q.selections().contains_key(&facet.name) {
                continue;
            }
            let set = q.set_facet(&cat, &facet.name, &facet.domain[0]).unwrap();
            prop_assert_eq!(set.clear_facet(&cat, &facet.name).unwrap(), q.clone());
        }
    }

    #[test]
    fn remaining_counts_agree_with_execute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cat = random_catalog(&mut r, CatalogShape { max_glyphs: 200, ..Default::default() });
        let (category, picks) = random_selections(&mut r, &cat);
        let q = build(&cat, &category, &picks);
        let counts = q.remaining_counts(&cat).unwrap();
        for facet in &cat.facet_schema(&category).unwrap().facets {
            for value in &facet.domain {
                let n = q.set_facet(&cat, &facet.name, value).unwrap().execute(&cat).unwrap().len();
                prop_assert_eq!(counts[&facet.name][value], n);
            }
        }
    }
}

#[test]
fn ten_thousand_glyphs_six_facets() {
    let mut doc = String::from("CATALOG big 1\nCATEGORY hands LABEL \"H\" KIND anatomical\n");
    let domains = [2usize, 6, 3, 8, 5, 4];
    for (i, d) in domains.iter().enumerate() {
        let values: Vec<String> = (0..*d).map(|v| v.to_string()).collect();
        doc.push_str(&format!("FACET hands f{i} LABEL \"F\" VALUES {}\n", values.join(",")));
    }
    for g in 0..10_000usize {
        let facets: Vec<String> = domains
            .iter()
            .enumerate()
            .map(|(i, d)| format!("f{i}={}", (g / (i + 1) + g * 7 + i) % d))
            .collect();
        doc.push_str(&format!("GLYPH hands:g{g} FACETS {} PATH \"M0 0\"\n", facets.join(",")));
    }
    let cat = swift_core::load_catalog(&doc).unwrap();
    let q = FacetQuery::new(&cat, "hands")
        .unwrap()
        .set_facet(&cat, "f0", "1")
        .unwrap()
        .set_facet(&cat, "f3", "5")
        .unwrap();
    let start = Instant::now();
    let runs = 20;
    for _ in 0..runs {
        std::hint::black_box(q.execute(&cat).unwrap());
        std::hint::black_box(FacetQuery::new(&cat, "hands").unwrap().execute(&cat).unwrap());
    }
    let per_query = start.elapsed() / (2 * runs);
    let budget_ms = if cfg!(debug_assertions) { 100 } else { 10 };
    assert!(
        per_query.as_millis() < budget_ms,
        "execute took {per_query:?} per query"
    );
}
