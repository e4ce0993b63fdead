//! Removal of overprinted glyphs, as produced by fake-bold rendering or
//! repeated layers.

use std::collections::HashMap;

use super::Glyph;

const CELL: f64 = 4.0;

/// Intersection area over the larger of the two areas.
pub fn overlap_ratio(a: &Glyph, b: &Glyph) -> f64 {
    let largest = a.bbox.area().max(b.bbox.area());
    if largest <= 0.0 {
        return if a.bbox == b.bbox { 1.0 } else { 0.0 };
    }
    a.bbox
        .intersection(&b.bbox)
        .map_or(0.0, |r| r.area() / largest)
}

fn cell(v: f64) -> i64 {
    (v / CELL).floor() as i64
}

/// Drops every glyph whose codepoint and box repeat an earlier kept glyph
/// with overlap at or above `threshold`. Input order is preserved.
pub fn dedupe_overlaps(glyphs: &[Glyph], threshold: f64) -> Vec<Glyph> {
    let mut kept: Vec<Glyph> = Vec::with_capacity(glyphs.len());
    let mut grid: HashMap<(usize, char, i64, i64), Vec<usize>> = HashMap::new();
    for g in glyphs {
        let (cx, cy) = (cell(g.bbox.center_x()), cell(g.bbox.center_y()));
        let reach = (g.bbox.width().max(g.bbox.height()) * 0.25 / CELL).ceil() as i64 + 1;
        let duplicate = (cx - reach..=cx + reach).any(|x| {
            (cy - reach..=cy + reach).any(|y| {
                grid.get(&(g.page, g.ch, x, y)).is_some_and(|idx| {
                    idx.iter().any(|&k| overlap_ratio(&kept[k], g) >= threshold)
                })
            })
        });
        if duplicate {
            continue;
        }
        grid.entry((g.page, g.ch, cx, cy)).or_default().push(kept.len());
        kept.push(g.clone());
    }
    kept
}
