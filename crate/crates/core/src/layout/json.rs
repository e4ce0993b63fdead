//! Serialisable form of a layout result.
//!
//! ```json
//! {
//!   "pages": [{"width": 612.0, "height": 792.0, "media_box": [0, 0, 612, 792]}],
//!   "glyphs": [{"c": "A", "page": 0, "bbox": [x0, y0, x1, y1], "size": 10.0}],
//!   "text": "A ...",
//!   "offset_map": [0, ...],
//!   "metrics": {...},
//!   "diagnostics": {...}
//! }
//! ```
//!
//! `offset_map[i]` is the character offset of `glyphs[i]` in `text`.

use serde::{Deserialize, Serialize};

use super::{
    ColumnRange, Glyph, LayoutDiagnostics, LayoutMetrics, LayoutResult, Orientation,
    PositionedText,
};
use crate::error::{Error, Result};
use crate::geometry::Rect;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRecord {
    pub width: f64,
    pub height: f64,
    pub media_box: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlyphRecord {
    pub c: String,
    pub page: usize,
    pub bbox: Rect,
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub orientation: Orientation,
    pub columns: Vec<Vec<ColumnRange>>,
    pub median_line_spacing: f64,
    pub median_word_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutJson {
    pub pages: Vec<PageRecord>,
    pub glyphs: Vec<GlyphRecord>,
    pub text: String,
    pub offset_map: Vec<usize>,
    pub metrics: MetricsRecord,
    #[serde(default)]
    pub diagnostics: LayoutDiagnostics,
}

impl LayoutJson {
    pub fn from_result(result: &LayoutResult) -> LayoutJson {
        let text = &result.text;
        LayoutJson {
            pages: text
                .pages()
                .iter()
                .map(|r| PageRecord {
                    width: r.width(),
                    height: r.height(),
                    media_box: *r,
                })
                .collect(),
            glyphs: text
                .glyphs()
                .iter()
                .map(|g| GlyphRecord {
                    c: g.ch.to_string(),
                    page: g.page,
                    bbox: g.bbox,
                    size: g.font_size,
                })
                .collect(),
            text: text.text().to_owned(),
            offset_map: text.glyph_offsets().to_vec(),
            metrics: MetricsRecord {
                orientation: result.metrics.orientation,
                columns: result.metrics.columns_per_page.clone(),
                median_line_spacing: result.metrics.median_line_spacing,
                median_word_gap: result.metrics.median_word_gap,
            },
            diagnostics: result.diagnostics.clone(),
        }
    }

    /// Rebuilds the layout result, re-validating the offset bijection.
    pub fn into_result(self) -> Result<LayoutResult> {
        let glyphs = self
            .glyphs
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut chars = r.c.chars();
                match (chars.next(), chars.next()) {
                    (Some(ch), None) => Ok(Glyph {
                        ch,
                        page: r.page,
                        bbox: r.bbox,
                        font_size: r.size,
                        rotation: 0.0,
                    }),
                    _ => Err(Error::InvalidLayout(format!(
                        "glyph {i} must hold exactly one character, got {:?}",
                        r.c
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let pages = self.pages.iter().map(|p| p.media_box).collect();
        let text = PositionedText::from_parts(glyphs, self.text, self.offset_map, pages)?;
        Ok(LayoutResult {
            text,
            metrics: LayoutMetrics {
                orientation: self.metrics.orientation,
                columns_per_page: self.metrics.columns,
                median_line_spacing: self.metrics.median_line_spacing,
                median_word_gap: self.metrics.median_word_gap,
            },
            diagnostics: self.diagnostics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{analyze_glyphs, LayoutConfig};

    #[test]
    fn round_trip_preserves_mapping() {
        let glyphs: Vec<Glyph> = "ab"
            .chars()
            .enumerate()
            .map(|(i, ch)| Glyph {
                ch,
                page: 0,
                bbox: Rect::new(20.0 * i as f64, 0.0, 20.0 * i as f64 + 5.0, 10.0),
                font_size: 10.0,
                rotation: 0.0,
            })
            .collect();
        let result =
            analyze_glyphs(glyphs, vec![Rect::new(0.0, 0.0, 100.0, 100.0)], &LayoutConfig::default())
                .unwrap();
        let json = LayoutJson::from_result(&result);
        let back = json.clone().into_result().unwrap();
        assert_eq!(back.text, result.text);
        assert_eq!(LayoutJson::from_result(&back), json);
    }

    #[test]
    fn multi_char_glyph_is_rejected() {
        let json = LayoutJson {
            pages: vec![PageRecord {
                width: 1.0,
                height: 1.0,
                media_box: Rect::new(0.0, 0.0, 1.0, 1.0),
            }],
            glyphs: vec![GlyphRecord {
                c: "ab".into(),
                page: 0,
                bbox: Rect::new(0.0, 0.0, 1.0, 1.0),
                size: 1.0,
            }],
            text: "ab".into(),
            offset_map: vec![0],
            metrics: MetricsRecord {
                orientation: Orientation::LeftToRight,
                columns: vec![],
                median_line_spacing: 1.0,
                median_word_gap: 1.0,
            },
            diagnostics: LayoutDiagnostics::default(),
        };
        assert!(matches!(json.into_result(), Err(Error::InvalidLayout(_))));
    }
}
