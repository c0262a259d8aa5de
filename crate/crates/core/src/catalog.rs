//! The glyph inventory: categories, their facet schemas and the glyphs.
//!
//! A catalog is loaded once from a line-oriented text document and never
//! mutated afterwards:
//!
//! ```text
//! CATALOG <name> <version>
//! CATEGORY <token> LABEL "<display>" KIND <anatomical|symbolic>
//! FACET <category> <facet-name> LABEL "<display>" VALUES <v1>,<v2>,...
//! GLYPH <category>:<local> BASE <category>:<local> FACETS <name>=<value>,... PATH "<path data>" ANCHOR <x>,<y>
//! ```
//!
//! `BASE`, `FACETS` and `ANCHOR` are optional on a glyph line. Lines starting
//! with `#` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::id::{is_category_token, GlyphId};
use crate::search::CategoryIndex;

/// Side length of the local unit box every glyph drawing lives in.
pub const ART_BOX: i32 = 100;

/// Categories an editor catalog must offer on the Puppet and its buttons.
pub const REQUIRED_ANATOMICAL: [&str; 4] = ["head", "shoulders", "hands", "arms"];
pub const REQUIRED_SYMBOLIC: [&str; 2] = ["punctuation", "contact"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("empty catalog")]
    EmptyCatalog,
    #[error("{subject}: {reason}")]
    Invalid { subject: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("glyph `{0}` not found")]
    GlyphNotFound(GlyphId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CategoryKind {
    Anatomical,
    Symbolic,
}

impl fmt::Display for CategoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CategoryKind::Anatomical => "anatomical",
            CategoryKind::Symbolic => "symbolic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Category {
    pub token: String,
    pub label: String,
    pub kind: CategoryKind,
}

/// One Choose Box: a feature with mutually exclusive values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub name: String,
    pub label: String,
    pub domain: Vec<String>,
}

impl Facet {
    pub fn admits(&self, value: &str) -> bool {
        self.domain.iter().any(|v| v == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetSchema {
    pub category: String,
    pub facets: Vec<Facet>,
}

impl FacetSchema {
    pub fn facet(&self, name: &str) -> Option<&Facet> {
        self.facets.iter().find(|f| f.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Default for Point {
    fn default() -> Self {
        Point {
            x: ART_BOX / 2,
            y: ART_BOX / 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Glyph {
    pub id: GlyphId,
    pub base_id: GlyphId,
    pub category: String,
    pub facets: BTreeMap<String, String>,
    /// SVG path data in the 100x100 local box.
    pub path: String,
    pub anchor: Point,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    name: String,
    version: String,
    categories: Vec<Category>,
    schemas: BTreeMap<String, FacetSchema>,
    glyphs: BTreeMap<GlyphId, Glyph>,
    index: BTreeMap<String, CategoryIndex>,
}

impl Catalog {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, token: &str) -> Result<&Category, LookupError> {
        self.categories
            .iter()
            .find(|c| c.token == token)
            .ok_or_else(|| LookupError::UnknownCategory(token.to_string()))
    }

    pub fn glyphs(&self) -> impl Iterator<Item = &Glyph> {
        self.glyphs.values()
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }

    /// Glyphs of one category, ordered by id.
    pub fn glyphs_in_category(&self, category: &str) -> Result<Vec<&Glyph>, LookupError> {
        let index = self.category_index(category)?;
        Ok(index.members().iter().map(|id| &self.glyphs[id]).collect())
    }

    pub fn facet_schema(&self, category: &str) -> Result<&FacetSchema, LookupError> {
        self.schemas
            .get(category)
            .ok_or_else(|| LookupError::UnknownCategory(category.to_string()))
    }

    pub fn get_glyph(&self, id: &GlyphId) -> Result<&Glyph, LookupError> {
        self.glyphs
            .get(id)
            .ok_or_else(|| LookupError::GlyphNotFound(id.clone()))
    }

    pub fn base_of(&self, id: &GlyphId) -> Result<&GlyphId, LookupError> {
        self.get_glyph(id).map(|g| &g.base_id)
    }

    pub(crate) fn category_index(&self, category: &str) -> Result<&CategoryIndex, LookupError> {
        self.index
            .get(category)
            .ok_or_else(|| LookupError::UnknownCategory(category.to_string()))
    }

    /// Lists the Puppet areas and symbolic buttons the catalog lacks.
    ///
    /// Not enforced by [`load_catalog`]: small test catalogs are legal, an
    /// editor deployment should pass this check.
    pub fn check_editor_coverage(&self) -> Result<(), Vec<String>> {
        let has = |token: &str, kind: CategoryKind| {
            self.categories
                .iter()
                .any(|c| c.token == token && c.kind == kind)
        };
        let missing: Vec<String> = REQUIRED_ANATOMICAL
            .iter()
            .filter(|t| !has(t, CategoryKind::Anatomical))
            .map(|t| format!("anatomical category `{t}`"))
            .chain(
                REQUIRED_SYMBOLIC
                    .iter()
                    .filter(|t| !has(t, CategoryKind::Symbolic))
                    .map(|t| format!("symbolic category `{t}`")),
            )
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(missing)
        }
    }
}

/// Parses and validates a catalog document.
pub fn load_catalog(source: &str) -> Result<Catalog, CatalogError> {
    let doc = parse_document(source)?;
    validate(doc)
}

struct RawGlyph {
    id: GlyphId,
    base: Option<GlyphId>,
    facets: Vec<(String, String)>,
    path: String,
    anchor: Option<Point>,
}

struct RawFacet {
    category: String,
    facet: Facet,
}

#[derive(Default)]
struct Document {
    header: Option<(String, String)>,
    categories: Vec<Category>,
    facets: Vec<RawFacet>,
    glyphs: Vec<RawGlyph>,
}

fn parse_document(source: &str) -> Result<Document, CatalogError> {
    let mut doc = Document::default();
    for (n, raw) in source.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |reason: String| CatalogError::Parse { line, reason };
        let tokens = tokenize(trimmed).map_err(err)?;
        let (keyword, rest) = tokens.split_first().expect("non-empty line has a token");
        match keyword.text.as_str() {
            "CATALOG" => {
                if doc.header.is_some() {
                    return Err(err("duplicate CATALOG header".into()));
                }
                let [name, version] = rest else {
                    return Err(err("expected `CATALOG <name> <version>`".into()));
                };
                doc.header = Some((name.text.clone(), version.text.clone()));
            }
            _ if doc.header.is_none() => {
                return Err(err("document must start with a CATALOG header".into()))
            }
            "CATEGORY" => doc.categories.push(parse_category(rest).map_err(err)?),
            "FACET" => doc.facets.push(parse_facet(rest).map_err(err)?),
            "GLYPH" => doc.glyphs.push(parse_glyph(rest).map_err(err)?),
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    if doc.header.is_none() {
        return Err(CatalogError::Parse {
            line: source.lines().count().max(1),
            reason: "missing CATALOG header".into(),
        });
    }
    Ok(doc)
}

#[derive(Debug)]
struct Token {
    text: String,
    quoted: bool,
}

fn tokenize(line: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '"' {
            chars.next();
            let mut text = String::new();
            loop {
                match chars.next() {
                    None => return Err("unterminated quoted string".into()),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(e @ ('"' | '\\')) => text.push(e),
                        Some(e) => return Err(format!("unknown escape `\\{e}`")),
                        None => return Err("unterminated quoted string".into()),
                    },
                    Some(ch) => text.push(ch),
                }
            }
            if chars.peek().is_some_and(|c| !c.is_whitespace()) {
                return Err("quoted string must be followed by whitespace".into());
            }
            tokens.push(Token { text, quoted: true });
        } else {
            let mut text = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() {
                    break;
                }
                if ch == '"' {
                    return Err(format!("unexpected quote after `{text}`"));
                }
                text.push(ch);
                chars.next();
            }
            tokens.push(Token {
                text,
                quoted: false,
            });
        }
    }
    Ok(tokens)
}

fn bare<'a>(tok: Option<&'a Token>, what: &str) -> Result<&'a str, String> {
    match tok {
        Some(t) if !t.quoted => Ok(&t.text),
        Some(t) => Err(format!("expected {what}, found quoted string \"{}\"", t.text)),
        None => Err(format!("expected {what}")),
    }
}

fn quoted<'a>(tok: Option<&'a Token>, what: &str) -> Result<&'a str, String> {
    match tok {
        Some(t) if t.quoted => Ok(&t.text),
        Some(t) => Err(format!("expected quoted {what}, found `{}`", t.text)),
        None => Err(format!("expected quoted {what}")),
    }
}

fn keyword(tok: Option<&Token>, kw: &str) -> Result<(), String> {
    match bare(tok, kw)? {
        k if k == kw => Ok(()),
        other => Err(format!("expected `{kw}`, found `{other}`")),
    }
}

fn expect_end(rest: &[Token]) -> Result<(), String> {
    match rest.first() {
        None => Ok(()),
        Some(t) => Err(format!("unexpected trailing token `{}`", t.text)),
    }
}

fn category_token(s: &str) -> Result<String, String> {
    if is_category_token(s) {
        Ok(s.to_string())
    } else {
        Err(format!("invalid category token `{s}`"))
    }
}

fn is_value_token(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

fn name_token(s: &str, what: &str) -> Result<String, String> {
    if is_value_token(s) {
        Ok(s.to_string())
    } else {
        Err(format!("invalid {what} `{s}`"))
    }
}

fn parse_category(rest: &[Token]) -> Result<Category, String> {
    let mut it = rest.iter();
    let token = category_token(bare(it.next(), "category token")?)?;
    keyword(it.next(), "LABEL")?;
    let label = quoted(it.next(), "label")?.to_string();
    keyword(it.next(), "KIND")?;
    let kind = match bare(it.next(), "kind")? {
        "anatomical" => CategoryKind::Anatomical,
        "symbolic" => CategoryKind::Symbolic,
        other => return Err(format!("unknown category kind `{other}`")),
    };
    expect_end(it.as_slice())?;
    Ok(Category { token, label, kind })
}

fn parse_facet(rest: &[Token]) -> Result<RawFacet, String> {
    let mut it = rest.iter();
    let category = category_token(bare(it.next(), "category token")?)?;
    let name = name_token(bare(it.next(), "facet name")?, "facet name")?;
    keyword(it.next(), "LABEL")?;
    let label = quoted(it.next(), "label")?.to_string();
    keyword(it.next(), "VALUES")?;
    let domain = bare(it.next(), "value list")?
        .split(',')
        .map(|v| name_token(v, "facet value"))
        .collect::<Result<Vec<_>, _>>()?;
    expect_end(it.as_slice())?;
    Ok(RawFacet {
        category,
        facet: Facet {
            name,
            label,
            domain,
        },
    })
}

fn parse_glyph(rest: &[Token]) -> Result<RawGlyph, String> {
    let mut it = rest.iter();
    let id_text = bare(it.next(), "glyph id")?;
    let id: GlyphId = id_text.parse().map_err(|e| format!("{e}"))?;
    let mut glyph = RawGlyph {
        id,
        base: None,
        facets: Vec::new(),
        path: String::new(),
        anchor: None,
    };
    let mut seen = BTreeSet::new();
    let mut have_path = false;
    while let Some(kw) = it.next() {
        let kw = bare(Some(kw), "glyph clause keyword")?;
        if !seen.insert(kw.to_string()) {
            return Err(format!("duplicate `{kw}` clause"));
        }
        match kw {
            "BASE" => {
                let text = bare(it.next(), "base glyph id")?;
                glyph.base = Some(text.parse().map_err(|e| format!("{e}"))?);
            }
            "FACETS" => {
                for pair in bare(it.next(), "facet list")?.split(',') {
                    let (k, v) = pair
                        .split_once('=')
                        .ok_or_else(|| format!("facet assignment `{pair}` lacks `=`"))?;
                    glyph.facets.push((
                        name_token(k, "facet name")?,
                        name_token(v, "facet value")?,
                    ));
                }
            }
            "PATH" => {
                glyph.path = quoted(it.next(), "path data")?.to_string();
                have_path = true;
            }
            "ANCHOR" => {
                let text = bare(it.next(), "anchor")?;
                let (x, y) = text
                    .split_once(',')
                    .ok_or_else(|| format!("anchor `{text}` must be `<x>,<y>`"))?;
                let coord = |s: &str| {
                    s.parse::<i32>()
                        .map_err(|_| format!("anchor coordinate `{s}` is not an integer"))
                };
                glyph.anchor = Some(Point {
                    x: coord(x)?,
                    y: coord(y)?,
                });
            }
            other => return Err(format!("unknown glyph clause `{other}`")),
        }
    }
    if !have_path {
        return Err(format!("glyph `{}` has no PATH clause", glyph.id));
    }
    Ok(glyph)
}

fn invalid(subject: impl fmt::Display, reason: impl Into<String>) -> CatalogError {
    CatalogError::Invalid {
        subject: subject.to_string(),
        reason: reason.into(),
    }
}

fn validate(doc: Document) -> Result<Catalog, CatalogError> {
    let (name, version) = doc.header.expect("header checked by parser");
    if doc.categories.is_empty() {
        return Err(CatalogError::EmptyCatalog);
    }

    let mut schemas: BTreeMap<String, FacetSchema> = BTreeMap::new();
    for cat in &doc.categories {
        let fresh = FacetSchema {
            category: cat.token.clone(),
            facets: Vec::new(),
        };
        if schemas.insert(cat.token.clone(), fresh).is_some() {
            return Err(invalid(
                format!("category {}", cat.token),
                "declared twice",
            ));
        }
    }

    for RawFacet { category, facet } in doc.facets {
        let subject = format!("facet {category}.{}", facet.name);
        let schema = schemas
            .get_mut(&category)
            .ok_or_else(|| invalid(&subject, "undeclared category"))?;
        if schema.facet(&facet.name).is_some() {
            return Err(invalid(&subject, "declared twice"));
        }
        let mut values = BTreeSet::new();
        for v in &facet.domain {
            if !values.insert(v) {
                return Err(invalid(&subject, format!("duplicate domain value `{v}`")));
            }
        }
        schema.facets.push(facet);
    }

    let mut glyphs: BTreeMap<GlyphId, Glyph> = BTreeMap::new();
    for raw in doc.glyphs {
        let subject = format!("glyph {}", raw.id);
        let category = raw.id.category().to_string();
        let schema = schemas
            .get(&category)
            .ok_or_else(|| invalid(&subject, format!("unknown category `{category}`")))?;
        let mut facets = BTreeMap::new();
        for (name, value) in raw.facets {
            let facet = schema.facet(&name).ok_or_else(|| {
                invalid(&subject, format!("facet `{name}` not in the {category} schema"))
            })?;
            if !facet.admits(&value) {
                return Err(invalid(
                    &subject,
                    format!("value `{value}` outside the domain of facet `{name}`"),
                ));
            }
            if facets.insert(name.clone(), value).is_some() {
                return Err(invalid(&subject, format!("facet `{name}` assigned twice")));
            }
        }
        if raw.path.trim().is_empty() {
            return Err(invalid(&subject, "empty drawing"));
        }
        let anchor = raw.anchor.unwrap_or_default();
        if !(0..=ART_BOX).contains(&anchor.x) || !(0..=ART_BOX).contains(&anchor.y) {
            return Err(invalid(&subject, "anchor outside the 100x100 art box"));
        }
        let base_id = raw.base.unwrap_or_else(|| raw.id.clone());
        if glyphs.contains_key(&raw.id) {
            return Err(invalid(&subject, "declared twice"));
        }
        glyphs.insert(
            raw.id.clone(),
            Glyph {
                id: raw.id,
                base_id,
                category,
                facets,
                path: raw.path,
                anchor,
            },
        );
    }

    for glyph in glyphs.values() {
        match glyphs.get(&glyph.base_id) {
            None => {
                return Err(invalid(
                    format!("glyph {}", glyph.id),
                    format!("base `{}` does not resolve", glyph.base_id),
                ))
            }
            Some(base) if base.category != glyph.category => {
                return Err(invalid(
                    format!("glyph {}", glyph.id),
                    format!("base `{}` is in another category", glyph.base_id),
                ))
            }
            Some(_) => {}
        }
    }

    let index = schemas
        .values()
        .map(|schema| {
            let members = glyphs.values().filter(|g| g.category == schema.category);
            (schema.category.clone(), CategoryIndex::build(schema, members))
        })
        .collect();

    Ok(Catalog {
        name,
        version,
        categories: doc.categories,
        schemas,
        glyphs,
        index,
    })
}
