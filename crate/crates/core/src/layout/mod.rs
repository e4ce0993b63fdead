//! Positioned text extraction and reading-order reconstruction.
//!
//! Processing runs in four steps: glyphs are pulled from the content
//! streams ([`extract_glyphs`]), the dominant writing direction and column
//! structure are measured ([`measure`]), overprinted duplicates are removed
//! ([`dedupe_overlaps`]) and the glyphs are serialised into a linear string
//! that remembers where every character came from ([`linearize`]).

mod analysis;
mod dedupe;
pub(crate) mod extract;
pub(crate) mod fonts;
mod json;
mod linearize;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;

pub use analysis::{
    cluster_rows, detect_columns, detect_orientation, measure, median_line_spacing,
    median_word_gap, OrientationVote,
};
pub use dedupe::{dedupe_overlaps, overlap_ratio};
pub use extract::{extract_glyphs, ExtractedPdf};
pub use json::{GlyphRecord, LayoutJson, MetricsRecord, PageRecord};
pub use linearize::linearize;

/// One rendered character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Glyph {
    pub ch: char,
    /// 0-based page index.
    pub page: usize,
    pub bbox: Rect,
    pub font_size: f64,
    /// Baseline angle in degrees, counter-clockwise.
    pub rotation: f64,
}

impl Glyph {
    pub fn height(&self) -> f64 {
        self.bbox.height()
    }

    /// Total order used wherever a deterministic arrangement is required,
    /// independent of the order glyphs were supplied in.
    pub(crate) fn canonical_cmp(&self, other: &Glyph) -> std::cmp::Ordering {
        self.page
            .cmp(&other.page)
            .then(self.bbox.x0.total_cmp(&other.bbox.x0))
            .then(self.bbox.y0.total_cmp(&other.bbox.y0))
            .then(self.bbox.x1.total_cmp(&other.bbox.x1))
            .then(self.bbox.y1.total_cmp(&other.bbox.y1))
            .then(self.ch.cmp(&other.ch))
            .then(self.font_size.total_cmp(&other.font_size))
            .then(self.rotation.total_cmp(&other.rotation))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    LeftToRight,
    RightToLeft,
}

/// Horizontal extent of one text column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub x0: f64,
    pub x1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutMetrics {
    pub orientation: Orientation,
    /// Column ranges per page, sorted by x and pairwise disjoint.
    pub columns_per_page: Vec<Vec<ColumnRange>>,
    pub median_line_spacing: f64,
    pub median_word_gap: f64,
}

/// Thresholds for the layout heuristics. All factors are multiples of the
/// measured document medians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutConfig {
    /// A gutter must be wider than this many median word gaps.
    pub column_gap_factor: f64,
    /// Fraction of the text block height a gutter must keep clear.
    pub column_height_coverage: f64,
    /// Glyph gaps above this many median word gaps become a space.
    pub word_gap_factor: f64,
    /// Line advances above this many median line spacings start a paragraph.
    pub paragraph_gap_factor: f64,
    /// Minimum area overlap for two same-codepoint glyphs to count as one.
    pub overlap_threshold: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            column_gap_factor: 2.0,
            column_height_coverage: 0.6,
            word_gap_factor: 0.5,
            paragraph_gap_factor: 1.5,
            overlap_threshold: 0.9,
        }
    }
}

/// Counters describing what the layout stage dropped or guessed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LayoutDiagnostics {
    pub rotated_dropped: usize,
    pub duplicates_removed: usize,
    /// Set when there were too few glyph pairs to vote on a direction.
    pub orientation_defaulted: bool,
}

/// Linearised document text with an exact offset↔glyph correspondence.
///
/// Offsets are in `char`s, not bytes. Every glyph owns exactly one character
/// of `text`; the remaining characters are synthesised spaces and newlines.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionedText {
    glyphs: Vec<Glyph>,
    text: String,
    glyph_offsets: Vec<usize>,
    offset_glyphs: Vec<Option<usize>>,
    byte_index: Vec<usize>,
    pages: Vec<Rect>,
}

impl PositionedText {
    /// Assembles and validates a positioned text. `glyph_offsets[i]` is the
    /// character offset of glyph `i`.
    pub fn from_parts(
        glyphs: Vec<Glyph>,
        text: String,
        glyph_offsets: Vec<usize>,
        pages: Vec<Rect>,
    ) -> Result<Self> {
        if glyphs.len() != glyph_offsets.len() {
            return Err(Error::InvalidLayout(format!(
                "{} glyphs but {} offsets",
                glyphs.len(),
                glyph_offsets.len()
            )));
        }
        let chars: Vec<char> = text.chars().collect();
        let mut byte_index = Vec::with_capacity(chars.len() + 1);
        let mut pos = 0;
        for c in &chars {
            byte_index.push(pos);
            pos += c.len_utf8();
        }
        byte_index.push(pos);

        let mut offset_glyphs = vec![None; chars.len()];
        for (g, (&off, glyph)) in glyph_offsets.iter().zip(&glyphs).enumerate() {
            let Some(&c) = chars.get(off) else {
                return Err(Error::InvalidLayout(format!(
                    "glyph {g} maps to offset {off} past the end of the text"
                )));
            };
            if offset_glyphs[off].is_some() {
                return Err(Error::InvalidLayout(format!(
                    "offset {off} is claimed by more than one glyph"
                )));
            }
            if c != glyph.ch {
                return Err(Error::InvalidLayout(format!(
                    "glyph {g} is {:?} but offset {off} holds {c:?}",
                    glyph.ch
                )));
            }
            if glyph.page >= pages.len() {
                return Err(Error::InvalidLayout(format!(
                    "glyph {g} is on page {} of {}",
                    glyph.page,
                    pages.len()
                )));
            }
            offset_glyphs[off] = Some(g);
        }
        for (off, slot) in offset_glyphs.iter().enumerate() {
            if slot.is_none() && !chars[off].is_whitespace() {
                return Err(Error::InvalidLayout(format!(
                    "unmapped offset {off} holds non-separator {:?}",
                    chars[off]
                )));
            }
        }

        Ok(PositionedText {
            glyphs,
            text,
            glyph_offsets,
            offset_glyphs,
            byte_index,
            pages,
        })
    }

    pub fn glyphs(&self) -> &[Glyph] {
        &self.glyphs
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Length of the text in characters.
    pub fn len(&self) -> usize {
        self.offset_glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offset_glyphs.is_empty()
    }

    /// Media boxes, one per page.
    pub fn pages(&self) -> &[Rect] {
        &self.pages
    }

    pub fn glyph_offsets(&self) -> &[usize] {
        &self.glyph_offsets
    }

    /// Glyph rendered at character offset `offset`, if it is not a
    /// synthesised separator.
    pub fn glyph_at(&self, offset: usize) -> Option<usize> {
        self.offset_glyphs.get(offset).copied().flatten()
    }

    pub fn offset_of(&self, glyph: usize) -> usize {
        self.glyph_offsets[glyph]
    }

    /// Text between two character offsets.
    pub fn slice(&self, start: usize, end: usize) -> &str {
        let end = end.min(self.len());
        let start = start.min(end);
        &self.text[self.byte_index[start]..self.byte_index[end]]
    }

    pub fn chars(&self) -> Vec<char> {
        self.text.chars().collect()
    }

    /// `[start, end)` character ranges of every line, excluding the newline.
    pub fn line_spans(&self) -> Vec<(usize, usize)> {
        let mut spans = Vec::new();
        let mut start = 0;
        for (i, c) in self.text.chars().enumerate() {
            if c == '\n' {
                spans.push((start, i));
                start = i + 1;
            }
        }
        spans.push((start, self.len()));
        spans
    }
}

/// Output of the full layout stage for one document.
#[derive(Debug, Clone)]
pub struct LayoutResult {
    pub text: PositionedText,
    pub metrics: LayoutMetrics,
    pub diagnostics: LayoutDiagnostics,
}

/// Runs extraction, measurement, de-duplication and linearisation.
pub fn analyze_pdf(pdf: &[u8], config: &LayoutConfig) -> Result<LayoutResult> {
    let extracted = extract_glyphs(pdf)?;
    analyze_glyphs(extracted.glyphs, extracted.pages, config)
}

/// Layout stage on already-extracted glyphs.
pub fn analyze_glyphs(
    glyphs: Vec<Glyph>,
    pages: Vec<Rect>,
    config: &LayoutConfig,
) -> Result<LayoutResult> {
    if let Some(g) = glyphs.iter().find(|g| g.page >= pages.len()) {
        return Err(Error::InvalidLayout(format!(
            "glyph {:?} is on page {} of {}",
            g.ch,
            g.page,
            pages.len()
        )));
    }
    let mut diagnostics = LayoutDiagnostics::default();
    let before = glyphs.len();
    let upright: Vec<Glyph> = glyphs
        .into_iter()
        .filter(|g| g.rotation.abs() < 0.5 || (g.rotation.abs() - 360.0).abs() < 0.5)
        .collect();
    diagnostics.rotated_dropped = before - upright.len();

    let vote = detect_orientation(&upright);
    diagnostics.orientation_defaulted = vote.defaulted;

    let deduped = dedupe_overlaps(&upright, config.overlap_threshold);
    diagnostics.duplicates_removed = upright.len() - deduped.len();

    let metrics = measure(&deduped, vote.orientation, pages.len(), config);
    let text = linearize(&deduped, &metrics, &pages, config)?;
    Ok(LayoutResult {
        text,
        metrics,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn glyph(ch: char, x: f64) -> Glyph {
        Glyph {
            ch,
            page: 0,
            bbox: Rect::new(x, 100.0, x + 5.0, 110.0),
            font_size: 10.0,
            rotation: 0.0,
        }
    }

    fn page() -> Vec<Rect> {
        vec![Rect::new(0.0, 0.0, 612.0, 792.0)]
    }

    #[test]
    fn from_parts_rejects_double_mapping() {
        let err = PositionedText::from_parts(
            vec![glyph('A', 0.0), glyph('A', 10.0)],
            "A A".into(),
            vec![0, 0],
            page(),
        );
        assert!(matches!(err, Err(Error::InvalidLayout(_))));
    }

    #[test]
    fn from_parts_rejects_unmapped_letters() {
        let err = PositionedText::from_parts(vec![glyph('A', 0.0)], "AB".into(), vec![0], page());
        assert!(err.is_err());
    }

    #[test]
    fn slice_uses_char_offsets() {
        let glyphs = vec![glyph('é', 0.0), glyph('b', 10.0)];
        let text = PositionedText::from_parts(glyphs, "é b".into(), vec![0, 2], page()).unwrap();
        assert_eq!(text.len(), 3);
        assert_eq!(text.slice(2, 3), "b");
        assert_eq!(text.glyph_at(1), None);
        assert_eq!(text.glyph_at(2), Some(1));
    }

    #[test]
    fn rotated_glyphs_are_counted_and_dropped() {
        let mut g = vec![glyph('A', 0.0), glyph('B', 5.0)];
        g.push(Glyph {
            rotation: 90.0,
            ..glyph('C', 20.0)
        });
        let result = analyze_glyphs(g, page(), &LayoutConfig::default()).unwrap();
        assert_eq!(result.diagnostics.rotated_dropped, 1);
        assert_eq!(result.text.text(), "AB");
    }
}
