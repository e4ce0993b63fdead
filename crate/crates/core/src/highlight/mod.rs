//! Passage geometry and highlight annotations.

mod annotate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::layout::PositionedText;

pub use annotate::{write_annotations, AnnotationStyle, WriteMode, Written};

/// Vertical padding added above and below each glyph run, in points.
pub const QUAD_PADDING: f64 = 1.0;

/// RGB colour with components in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Color(pub [f64; 3]);

impl Color {
    pub const YELLOW: Color = Color([1.0, 1.0, 0.0]);
}

impl Default for Color {
    fn default() -> Self {
        Color::YELLOW
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "{r},{g},{b}")
    }
}

impl FromStr for Color {
    type Err = Error;

    /// Parses `R,G,B` with each component in `[0, 1]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Validation(format!("color {s:?} must be R,G,B with components in [0, 1]"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut rgb = [0.0; 3];
        for (slot, part) in rgb.iter_mut().zip(parts) {
            let v: f64 = part.parse().map_err(|_| bad())?;
            if !(0.0..=1.0).contains(&v) {
                return Err(bad());
            }
            *slot = v;
        }
        Ok(Color(rgb))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighlightQuad {
    /// 0-based page index.
    pub page: usize,
    /// Corners in the order upper-left, upper-right, lower-left, lower-right.
    pub points: [[f64; 2]; 4],
    pub color: Color,
    /// Character offsets of the first and last glyph covered.
    pub first_offset: usize,
    pub last_offset: usize,
}

impl HighlightQuad {
    pub fn from_rect(page: usize, r: Rect, color: Color, first_offset: usize, last_offset: usize) -> Self {
        HighlightQuad {
            page,
            points: [[r.x0, r.y1], [r.x1, r.y1], [r.x0, r.y0], [r.x1, r.y0]],
            color,
            first_offset,
            last_offset,
        }
    }

    pub fn bounds(&self) -> Rect {
        let xs = self.points.map(|p| p[0]);
        let ys = self.points.map(|p| p[1]);
        let min = |v: [f64; 4]| v.into_iter().fold(f64::INFINITY, f64::min);
        let max = |v: [f64; 4]| v.into_iter().fold(f64::NEG_INFINITY, f64::max);
        Rect {
            x0: min(xs),
            y0: min(ys),
            x1: max(xs),
            y1: max(ys),
        }
    }

    /// `x1 y1 ... x4 y4` as written to `/QuadPoints`.
    pub fn flat(&self) -> [f64; 8] {
        let p = self.points;
        [p[0][0], p[0][1], p[1][0], p[1][1], p[2][0], p[2][1], p[3][0], p[3][1]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighlightSet {
    pub start: usize,
    pub end: usize,
    pub quads: Vec<HighlightQuad>,
}

impl HighlightSet {
    /// Offsets of every glyph the quads cover, ascending.
    pub fn covered_offsets(&self, doc: &PositionedText) -> Vec<usize> {
        self.quads
            .iter()
            .flat_map(|q| q.first_offset..=q.last_offset)
            .filter(|&o| doc.glyph_at(o).is_some())
            .collect()
    }
}

/// Quads for the glyphs of `[start, end)`, one per line run.
///
/// Runs break wherever the text between two consecutive mapped glyphs holds
/// a newline or the page changes. Each quad is the union of its glyph boxes,
/// padded by [`QUAD_PADDING`] vertically and clamped to the media box.
pub fn passage_to_quads(start: usize, end: usize, doc: &PositionedText, color: Color) -> Result<HighlightSet> {
    let end = end.min(doc.len());
    let chars = doc.chars();
    let mapped: Vec<(usize, usize)> = (start..end)
        .filter_map(|o| doc.glyph_at(o).map(|g| (o, g)))
        .collect();
    if mapped.is_empty() {
        return Err(Error::EmptyGeometry { start, end });
    }

    let glyphs = doc.glyphs();
    let mut quads = Vec::new();
    let mut run: Vec<(usize, usize)> = Vec::new();
    let flush = |run: &mut Vec<(usize, usize)>, quads: &mut Vec<HighlightQuad>| {
        let Some(&(first, g0)) = run.first() else { return };
        let &(last, _) = run.last().expect("non-empty run");
        let page = glyphs[g0].page;
        let bounds = run
            .iter()
            .map(|&(_, g)| glyphs[g].bbox)
            .reduce(|a, b| a.union(&b))
            .expect("non-empty run");
        let padded = Rect {
            y0: bounds.y0 - QUAD_PADDING,
            y1: bounds.y1 + QUAD_PADDING,
            ..bounds
        };
        let media = doc.pages()[page];
        quads.push(HighlightQuad::from_rect(page, padded.clamp_to(&media), color, first, last));
        run.clear();
    };
    for &(o, g) in &mapped {
        if let Some(&(prev_o, prev_g)) = run.last() {
            let newline = chars[prev_o + 1..o].contains(&'\n');
            if newline || glyphs[prev_g].page != glyphs[g].page {
                flush(&mut run, &mut quads);
            }
        }
        run.push((o, g));
    }
    flush(&mut run, &mut quads);
    Ok(HighlightSet { start, end, quads })
}
