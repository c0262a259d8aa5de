//! The Sign Display document: placed glyphs on a fixed integer canvas.
//!
//! Every editing operation takes `&self` and returns a new [`Sign`]; failed
//! operations return an error and produce nothing, so a rejected multi-glyph
//! edit never applies partially.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, LookupError, ART_BOX};
use crate::id::GlyphId;

pub const DEFAULT_CANVAS: u32 = 500;
pub const MAX_CANVAS: u32 = 100_000;
pub const NATURAL_SCALE: u32 = 1000;
pub const MIN_SCALE: u32 = 100;
pub const MAX_SCALE: u32 = 4000;
/// Rotation steps per full turn (45° each).
pub const ROTATION_STEPS: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("position ({x},{y}) is outside the {w}x{h} canvas")]
    OutOfCanvas { x: i64, y: i64, w: u32, h: u32 },
    #[error("selection index {index} is out of range for {len} placements")]
    InvalidSelection { index: usize, len: usize },
    #[error("canvas size {w}x{h} is outside 1..={MAX_CANVAS}")]
    BadCanvas { w: u32, h: u32 },
    #[error("rotation {0} is outside 0..=7")]
    BadRotation(u8),
    #[error("scale {0} is outside {MIN_SCALE}..={MAX_SCALE}")]
    BadScale(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Cw,
    Ccw,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedGlyph {
    pub glyph_id: GlyphId,
    /// Anchor position in canvas units, origin top-left.
    pub x: i32,
    pub y: i32,
    /// Counter-clockwise 45° steps about the glyph anchor.
    pub rot: u8,
    /// Horizontal flip about the anchor, applied before rotation.
    pub mirrored: bool,
    /// Per-mille; 1000 draws the glyph at its natural size.
    pub scale: u32,
}

impl PlacedGlyph {
    pub fn new(glyph_id: GlyphId, x: i32, y: i32) -> Self {
        PlacedGlyph {
            glyph_id,
            x,
            y,
            rot: 0,
            mirrored: false,
            scale: NATURAL_SCALE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sign {
    /// Assigned by the store on save; empty for an unsaved composition.
    #[serde(default)]
    pub id: String,
    pub canvas_w: u32,
    pub canvas_h: u32,
    /// Insertion order, which is also z-order (later on top).
    pub placements: Vec<PlacedGlyph>,
    #[serde(default)]
    pub label: Option<String>,
}

impl Default for Sign {
    fn default() -> Self {
        Sign {
            id: String::new(),
            canvas_w: DEFAULT_CANVAS,
            canvas_h: DEFAULT_CANVAS,
            placements: Vec::new(),
            label: None,
        }
    }
}

/// Positions into [`Sign::placements`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Selection(BTreeSet<usize>);

impl Selection {
    pub fn empty() -> Self {
        Selection::default()
    }

    pub fn all(sign: &Sign) -> Self {
        (0..sign.placements.len()).collect()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, sign: &Sign) -> Result<(), SignError> {
        let len = sign.placements.len();
        match self.0.iter().next_back() {
            Some(&index) if index >= len => Err(SignError::InvalidSelection { index, len }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for Selection {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Selection(iter.into_iter().collect())
    }
}

/// Axis-aligned rectangle in canvas units, `min` inclusive, `max` exclusive
/// in the drawing sense (a 100-unit glyph at 200 spans 200..300).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Rect {
    pub min_x: i64,
    pub min_y: i64,
    pub max_x: i64,
    pub max_y: i64,
}

impl Rect {
    pub fn width(&self) -> i64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> i64 {
        self.max_y - self.min_y
    }
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// (cos, sin) of k * 45°, exact where the value is rational.
const ROTATION_TABLE: [(f64, f64); 8] = [
    (1.0, 0.0),
    (H, H),
    (0.0, 1.0),
    (-H, H),
    (-1.0, 0.0),
    (-H, -H),
    (0.0, -1.0),
    (H, -H),
];

/// Maps a point of the glyph's local art box to canvas coordinates.
///
/// Order: scale, mirror, rotate (all about the anchor), translate to (x, y).
/// Counter-clockwise is as seen on screen with +y pointing down.
pub fn place_point(p: &PlacedGlyph, anchor: (i32, i32), local: (f64, f64)) -> (f64, f64) {
    let s = f64::from(p.scale) / f64::from(NATURAL_SCALE);
    let mut dx = (local.0 - f64::from(anchor.0)) * s;
    let dy = (local.1 - f64::from(anchor.1)) * s;
    if p.mirrored {
        dx = -dx;
    }
    let (cos, sin) = ROTATION_TABLE[usize::from(p.rot % ROTATION_STEPS)];
    (
        f64::from(p.x) + dx * cos + dy * sin,
        f64::from(p.y) - dx * sin + dy * cos,
    )
}

impl Sign {
    pub fn with_canvas(canvas_w: u32, canvas_h: u32) -> Result<Self, SignError> {
        check_canvas(canvas_w, canvas_h)?;
        Ok(Sign {
            canvas_w,
            canvas_h,
            ..Sign::default()
        })
    }

    pub fn glyph_ids(&self) -> Vec<GlyphId> {
        self.placements.iter().map(|p| p.glyph_id.clone()).collect()
    }

    pub fn contains_point(&self, x: i64, y: i64) -> bool {
        (0..=i64::from(self.canvas_w)).contains(&x) && (0..=i64::from(self.canvas_h)).contains(&y)
    }

    fn require_point(&self, x: i64, y: i64) -> Result<(), SignError> {
        if self.contains_point(x, y) {
            Ok(())
        } else {
            Err(SignError::OutOfCanvas {
                x,
                y,
                w: self.canvas_w,
                h: self.canvas_h,
            })
        }
    }

    /// Checks canvas, rotation, scale and anchor invariants.
    pub fn validate(&self) -> Result<(), SignError> {
        check_canvas(self.canvas_w, self.canvas_h)?;
        for p in &self.placements {
            if p.rot >= ROTATION_STEPS {
                return Err(SignError::BadRotation(p.rot));
            }
            check_scale(p.scale)?;
            self.require_point(i64::from(p.x), i64::from(p.y))?;
        }
        Ok(())
    }

    /// Checks that every placed glyph exists in the catalog.
    pub fn resolve(&self, catalog: &Catalog) -> Result<(), SignError> {
        for p in &self.placements {
            catalog.get_glyph(&p.glyph_id)?;
        }
        Ok(())
    }

    pub fn add_glyph(
        &self,
        catalog: &Catalog,
        glyph_id: &GlyphId,
        x: i32,
        y: i32,
    ) -> Result<Sign, SignError> {
        catalog.get_glyph(glyph_id)?;
        self.require_point(i64::from(x), i64::from(y))?;
        let mut next = self.clone();
        next.placements
            .push(PlacedGlyph::new(glyph_id.clone(), x, y));
        Ok(next)
    }

    pub fn move_by(&self, sel: &Selection, dx: i32, dy: i32) -> Result<Sign, SignError> {
        sel.check(self)?;
        for i in sel.indices() {
            let p = &self.placements[i];
            self.require_point(i64::from(p.x) + i64::from(dx), i64::from(p.y) + i64::from(dy))?;
        }
        let mut next = self.clone();
        for i in sel.indices() {
            let p = &mut next.placements[i];
            // In range: the target lies on a canvas no larger than MAX_CANVAS.
            p.x += dx;
            p.y += dy;
        }
        Ok(next)
    }

    pub fn rotate(&self, sel: &Selection, direction: Direction) -> Result<Sign, SignError> {
        let step = match direction {
            Direction::Ccw => 1,
            Direction::Cw => ROTATION_STEPS - 1,
        };
        self.edit(sel, |p| p.rot = (p.rot + step) % ROTATION_STEPS)
    }

    pub fn mirror(&self, sel: &Selection) -> Result<Sign, SignError> {
        self.edit(sel, |p| p.mirrored = !p.mirrored)
    }

    pub fn set_scale(&self, sel: &Selection, scale: u32) -> Result<Sign, SignError> {
        check_scale(scale)?;
        self.edit(sel, |p| p.scale = scale)
    }

    pub fn delete(&self, sel: &Selection) -> Result<Sign, SignError> {
        sel.check(self)?;
        let mut next = self.clone();
        next.placements = self
            .placements
            .iter()
            .enumerate()
            .filter(|(i, _)| !sel.contains(*i))
            .map(|(_, p)| p.clone())
            .collect();
        Ok(next)
    }

    pub fn clear(&self) -> Sign {
        Sign {
            placements: Vec::new(),
            ..self.clone()
        }
    }

    fn edit(&self, sel: &Selection, f: impl Fn(&mut PlacedGlyph)) -> Result<Sign, SignError> {
        sel.check(self)?;
        let mut next = self.clone();
        for i in sel.indices() {
            f(&mut next.placements[i]);
        }
        Ok(next)
    }

    /// Tightest integer rectangle around every placed glyph's transformed
    /// art box. An empty sign yields the zero rectangle at the origin.
    pub fn bounding_box(&self, catalog: &Catalog) -> Result<Rect, SignError> {
        let mut bounds: Option<(f64, f64, f64, f64)> = None;
        for p in &self.placements {
            let glyph = catalog.get_glyph(&p.glyph_id)?;
            let anchor = (glyph.anchor.x, glyph.anchor.y);
            let side = f64::from(ART_BOX);
            for corner in [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)] {
                let (x, y) = place_point(p, anchor, corner);
                bounds = Some(match bounds {
                    None => (x, y, x, y),
                    Some((a, b, c, d)) => (a.min(x), b.min(y), c.max(x), d.max(y)),
                });
            }
        }
        Ok(match bounds {
            None => Rect::default(),
            Some((min_x, min_y, max_x, max_y)) => Rect {
                min_x: snap(min_x, f64::floor),
                min_y: snap(min_y, f64::floor),
                max_x: snap(max_x, f64::ceil),
                max_y: snap(max_y, f64::ceil),
            },
        })
    }
}

/// Rounds toward `round` unless `v` is within float noise of an integer.
fn snap(v: f64, round: fn(f64) -> f64) -> i64 {
    let nearest = v.round();
    if (v - nearest).abs() < 1e-9 {
        nearest as i64
    } else {
        round(v) as i64
    }
}

fn check_canvas(w: u32, h: u32) -> Result<(), SignError> {
    if (1..=MAX_CANVAS).contains(&w) && (1..=MAX_CANVAS).contains(&h) {
        Ok(())
    } else {
        Err(SignError::BadCanvas { w, h })
    }
}

fn check_scale(scale: u32) -> Result<(), SignError> {
    if (MIN_SCALE..=MAX_SCALE).contains(&scale) {
        Ok(())
    } else {
        Err(SignError::BadScale(scale))
    }
}
