//! SWT1, the single-line text form of a sign.
//!
//! ```text
//! sign       = "SWIFT1" ";" canvas *( ";" placement )
//! canvas     = "C" INT "x" INT
//! placement  = "G" glyphid "@" INT "," INT "r" DIGIT "m" BIT "s" INT
//! glyphid    = token ":" token
//! INT        = decimal, no leading zeros
//! ```
//!
//! Example: `SWIFT1;C500x500;Ghands:h-1-L-0@250,200r3m1s1000`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::catalog::Catalog;
use crate::id::GlyphId;
use crate::sign::{PlacedGlyph, Sign, SignError, MAX_CANVAS, MAX_SCALE, MIN_SCALE, ROTATION_STEPS};

pub const MAGIC: &str = "SWIFT1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("value out of range at byte {pos}: {field} = {value}")]
    OutOfRange {
        pos: usize,
        field: &'static str,
        value: String,
    },
    #[error("unknown glyph `{0}`")]
    UnknownGlyph(GlyphId),
}

impl NotationError {
    /// Short class name, stable across messages.
    pub fn class(&self) -> &'static str {
        match self {
            NotationError::Syntax { .. } => "syntax",
            NotationError::OutOfRange { .. } => "out-of-range",
            NotationError::UnknownGlyph(_) => "unknown-glyph",
        }
    }
}

pub fn serialize_text(sign: &Sign) -> String {
    let mut out = format!("{MAGIC};C{}x{}", sign.canvas_w, sign.canvas_h);
    for p in &sign.placements {
        write!(
            out,
            ";G{}@{},{}r{}m{}s{}",
            p.glyph_id,
            p.x,
            p.y,
            p.rot,
            u8::from(p.mirrored),
            p.scale
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Parses SWT1 text and checks every glyph against the catalog.
pub fn parse_text(text: &str, catalog: &Catalog) -> Result<Sign, NotationError> {
    let sign = parse_syntax(text)?;
    for p in &sign.placements {
        if catalog.get_glyph(&p.glyph_id).is_err() {
            return Err(NotationError::UnknownGlyph(p.glyph_id.clone()));
        }
    }
    Ok(sign)
}

/// Parses SWT1 text without consulting a catalog.
pub fn parse_syntax(text: &str) -> Result<Sign, NotationError> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    cur.literal(MAGIC, "`SWIFT1`")?;
    cur.byte(b';', "`;`")?;
    cur.byte(b'C', "`C`")?;
    let (w_pos, w) = cur.int()?;
    cur.byte(b'x', "`x`")?;
    let (h_pos, h) = cur.int()?;
    let canvas_w = in_range(w, 1, u64::from(MAX_CANVAS), w_pos, "canvas width")? as u32;
    let canvas_h = in_range(h, 1, u64::from(MAX_CANVAS), h_pos, "canvas height")? as u32;
    let mut sign = Sign::with_canvas(canvas_w, canvas_h).expect("canvas checked above");

    while !cur.at_end() {
        cur.byte(b';', "`;` or end of input")?;
        cur.byte(b'G', "`G`")?;
        let glyph_id = cur.glyph_id()?;
        cur.byte(b'@', "`@`")?;
        let (x_pos, x) = cur.int()?;
        cur.byte(b',', "`,`")?;
        let (y_pos, y) = cur.int()?;
        cur.byte(b'r', "`r`")?;
        let (r_pos, rot) = cur.digit()?;
        cur.byte(b'm', "`m`")?;
        let (m_pos, m) = cur.digit()?;
        cur.byte(b's', "`s`")?;
        let (s_pos, scale) = cur.int()?;

        let x = in_range(x, 0, u64::from(canvas_w), x_pos, "x")? as i32;
        let y = in_range(y, 0, u64::from(canvas_h), y_pos, "y")? as i32;
        let rot = in_range(rot, 0, u64::from(ROTATION_STEPS - 1), r_pos, "rotation")? as u8;
        let mirrored = in_range(m, 0, 1, m_pos, "mirror")? == 1;
        let scale = in_range(scale, u64::from(MIN_SCALE), u64::from(MAX_SCALE), s_pos, "scale")? as u32;
        sign.placements.push(PlacedGlyph {
            glyph_id,
            x,
            y,
            rot,
            mirrored,
            scale,
        });
    }
    debug_assert_eq!(sign.validate(), Ok::<(), SignError>(()));
    Ok(sign)
}

fn in_range(
    value: u64,
    lo: u64,
    hi: u64,
    pos: usize,
    field: &'static str,
) -> Result<u64, NotationError> {
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(NotationError::OutOfRange {
            pos,
            field,
            value: value.to_string(),
        })
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, expected: &'static str) -> NotationError {
        NotationError::Syntax {
            pos: self.pos,
            expected,
        }
    }

    fn byte(&mut self, b: u8, expected: &'static str) -> Result<(), NotationError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(expected))
        }
    }

    fn literal(&mut self, lit: &str, expected: &'static str) -> Result<(), NotationError> {
        for &b in lit.as_bytes() {
            self.byte(b, expected)?;
        }
        Ok(())
    }

    fn int(&mut self) -> Result<(usize, u64), NotationError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        if digits.is_empty() {
            return Err(self.syntax("integer"));
        }
        if digits.len() > 1 && digits[0] == b'0' {
            self.pos = start;
            return Err(self.syntax("integer without leading zeros"));
        }
        let text = std::str::from_utf8(digits).expect("ascii digits");
        let value = text.parse::<u64>().map_err(|_| NotationError::OutOfRange {
            pos: start,
            field: "integer",
            value: text.to_string(),
        })?;
        Ok((start, value))
    }

    fn digit(&mut self) -> Result<(usize, u64), NotationError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                self.pos += 1;
                if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    // A second digit is never valid here; report it as a range error.
                    let start = self.pos - 1;
                    while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    return Err(NotationError::OutOfRange {
                        pos: start,
                        field: "digit",
                        value: text.to_string(),
                    });
                }
                Ok((self.pos - 1, u64::from(b - b'0')))
            }
            _ => Err(self.syntax("digit")),
        }
    }

    fn glyph_id(&mut self) -> Result<GlyphId, NotationError> {
        let cat_start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
        {
            self.pos += 1;
        }
        if self.pos == cat_start {
            return Err(self.syntax("category token"));
        }
        let cat_end = self.pos;
        self.byte(b':', "`:`")?;
        let local_start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'-')
        {
            self.pos += 1;
        }
        if self.pos == local_start {
            return Err(self.syntax("glyph token"));
        }
        let text = |a: usize, b: usize| std::str::from_utf8(&self.src[a..b]).expect("ascii");
        GlyphId::new(text(cat_start, cat_end), text(local_start, self.pos))
            .map_err(|_| self.syntax("glyph id"))
    }
}
