//! Deterministic SVG export.
//!
//! Each placement becomes one `<g>` whose transform list is, right to left,
//! the anchor shift, scale and mirror, rotation, and translation to the
//! placement position. All numbers are produced from integers so equal
//! inputs always give byte-identical documents.

use std::fmt::Write as _;

use crate::catalog::Catalog;
use crate::sign::{Rect, Sign, SignError, NATURAL_SCALE};

const STROKE: &str = r##"fill="none" stroke="#000" stroke-width="2" stroke-linecap="round" stroke-linejoin="round""##;

/// Renders the sign. With `crop`, the document is sized to the sign's
/// bounding box instead of the whole canvas.
pub fn export_svg(sign: &Sign, catalog: &Catalog, crop: bool) -> Result<String, SignError> {
    let view = if crop {
        sign.bounding_box(catalog)?
    } else {
        Rect {
            min_x: 0,
            min_y: 0,
            max_x: i64::from(sign.canvas_w),
            max_y: i64::from(sign.canvas_h),
        }
    };
    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        view.width(),
        view.height(),
        view.min_x,
        view.min_y,
        view.width(),
        view.height()
    )
    .unwrap();
    if let Some(label) = &sign.label {
        writeln!(w, "<title>{}</title>", escape(label)).unwrap();
    }
    writeln!(w, "<g {STROKE}>").unwrap();
    for p in &sign.placements {
        let glyph = catalog.get_glyph(&p.glyph_id)?;
        let scale = per_mille(i64::from(p.scale));
        let scale_x = if p.mirrored {
            per_mille(-i64::from(p.scale))
        } else {
            scale.clone()
        };
        writeln!(
            w,
            r#"<g data-glyph="{}" transform="translate({} {}) rotate({}) scale({} {}) translate({} {})"><path d="{}"/></g>"#,
            p.glyph_id,
            p.x,
            p.y,
            -45 * i32::from(p.rot),
            scale_x,
            scale,
            -glyph.anchor.x,
            -glyph.anchor.y,
            escape(&glyph.path)
        )
        .unwrap();
    }
    w.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Formats a per-mille integer as a shortest exact decimal (1500 -> "1.5").
fn per_mille(v: i64) -> String {
    let unit = i64::from(NATURAL_SCALE);
    let sign = if v < 0 { "-" } else { "" };
    let v = v.abs();
    let (whole, frac) = (v / unit, v % unit);
    if frac == 0 {
        format!("{sign}{whole}")
    } else {
        let digits = format!("{frac:03}");
        format!("{sign}{whole}.{}", digits.trim_end_matches('0'))
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}
