//! Reading-order serialisation of glyphs into a [`PositionedText`].

use super::analysis::{cluster_rows, split_row};
use super::{ColumnRange, Glyph, LayoutConfig, LayoutMetrics, Orientation, PositionedText};
use crate::error::Result;
use crate::geometry::Rect;

#[derive(Debug)]
enum Band {
    /// Rows that cross a gutter, read as whole lines.
    Spanning(Vec<Vec<usize>>),
    /// Rows confined to columns, read column by column.
    Columnar(Vec<Vec<usize>>),
}

struct Writer<'a> {
    glyphs: &'a [Glyph],
    config: &'a LayoutConfig,
    metrics: &'a LayoutMetrics,
    text: String,
    len: usize,
    order: Vec<Glyph>,
    offsets: Vec<usize>,
    last_line_y: Option<f64>,
}

impl Writer<'_> {
    fn push(&mut self, c: char) {
        self.text.push(c);
        self.len += 1;
    }

    fn separator(&mut self, fresh_flow: bool, line_y: f64) {
        if self.len == 0 {
            return;
        }
        let paragraph = !fresh_flow
            && self.last_line_y.is_some_and(|prev| {
                prev - line_y > self.config.paragraph_gap_factor * self.metrics.median_line_spacing
            });
        self.push('\n');
        if paragraph {
            self.push('\n');
        }
    }

    fn line(&mut self, line: &[usize], fresh_flow: bool) {
        if line.is_empty() {
            return;
        }
        let y = line
            .iter()
            .map(|&i| self.glyphs[i].bbox.center_y())
            .sum::<f64>()
            / line.len() as f64;
        self.separator(fresh_flow, y);
        let rtl = self.metrics.orientation == Orientation::RightToLeft;
        let mut ordered = line.to_vec();
        if rtl {
            ordered.reverse();
        }
        let space_gap = self.config.word_gap_factor * self.metrics.median_word_gap;
        let mut prev: Option<&Glyph> = None;
        for &i in &ordered {
            let g = &self.glyphs[i];
            if let Some(p) = prev {
                let gap = if rtl {
                    p.bbox.x0 - g.bbox.x1
                } else {
                    g.bbox.x0 - p.bbox.x1
                };
                if gap > space_gap {
                    self.push(' ');
                }
            }
            self.offsets.push(self.len);
            self.order.push(g.clone());
            self.push(g.ch);
            prev = Some(g);
        }
        self.last_line_y = Some(y);
    }
}

fn column_of(columns: &[ColumnRange], x: f64) -> usize {
    columns
        .iter()
        .position(|c| x >= c.x0 && x <= c.x1)
        .unwrap_or_else(|| {
            let dist = |c: &ColumnRange| (c.x0 - x).abs().min((c.x1 - x).abs());
            (0..columns.len())
                .min_by(|&a, &b| dist(&columns[a]).total_cmp(&dist(&columns[b])))
                .unwrap_or(0)
        })
}

/// A row spans the columns when one of its gap-separated pieces reaches
/// across a whole gutter. Line ends that merely poke into a gutter do not
/// count.
fn crosses_gutter(glyphs: &[Glyph], row: &[usize], columns: &[ColumnRange], max_gap: f64) -> bool {
    let pieces = split_row(glyphs, row, max_gap);
    columns.windows(2).any(|w| {
        let (lo, hi) = (w[0].x1, w[1].x0);
        pieces.iter().any(|p| p.bbox.x0 < lo && p.bbox.x1 > hi)
    })
}

fn bands(glyphs: &[Glyph], rows: Vec<Vec<usize>>, columns: &[ColumnRange], max_gap: f64) -> Vec<Band> {
    let mut out: Vec<Band> = Vec::new();
    for row in rows {
        let spanning = columns.len() > 1 && crosses_gutter(glyphs, &row, columns, max_gap);
        match (out.last_mut(), spanning) {
            (Some(Band::Spanning(rows)), true) | (Some(Band::Columnar(rows)), false) => rows.push(row),
            (_, true) => out.push(Band::Spanning(vec![row])),
            (_, false) => out.push(Band::Columnar(vec![row])),
        }
    }
    out
}

/// Serialises glyphs in reading order.
///
/// Rows that reach across a column gutter (titles, full-width figures) are emitted
/// as whole lines where they occur; the rows between them are read column
/// by column. Glyph gaps wider than `word_gap_factor` median word gaps
/// become a space, line breaks become `\n`, and line advances wider than
/// `paragraph_gap_factor` median line spacings become `\n\n`.
pub fn linearize(
    glyphs: &[Glyph],
    metrics: &LayoutMetrics,
    pages: &[Rect],
    config: &LayoutConfig,
) -> Result<PositionedText> {
    let mut sorted = glyphs.to_vec();
    sorted.sort_by(|a, b| a.canonical_cmp(b));
    let glyphs = &sorted[..];

    let mut w = Writer {
        glyphs,
        config,
        metrics,
        text: String::new(),
        len: 0,
        order: Vec::with_capacity(glyphs.len()),
        offsets: Vec::with_capacity(glyphs.len()),
        last_line_y: None,
    };
    let page_count = glyphs.iter().map(|g| g.page + 1).max().unwrap_or(0);
    for page in 0..page_count {
        let members: Vec<usize> = (0..glyphs.len()).filter(|&i| glyphs[i].page == page).collect();
        if members.is_empty() {
            continue;
        }
        let fallback;
        let columns: &[ColumnRange] = match metrics.columns_per_page.get(page) {
            Some(c) if !c.is_empty() => c,
            _ => {
                fallback = [ColumnRange {
                    x0: f64::NEG_INFINITY,
                    x1: f64::INFINITY,
                }];
                &fallback
            }
        };
        let mut column_order: Vec<usize> = (0..columns.len()).collect();
        if metrics.orientation == Orientation::RightToLeft {
            column_order.reverse();
        }

        let mut fresh = true;
        let max_gap = config.column_gap_factor * metrics.median_word_gap;
        for band in bands(glyphs, cluster_rows(glyphs, &members), columns, max_gap) {
            match band {
                Band::Spanning(rows) => {
                    for row in rows {
                        w.line(&row, fresh);
                        fresh = false;
                    }
                }
                Band::Columnar(rows) => {
                    for (k, &col) in column_order.iter().enumerate() {
                        let mut first = true;
                        for row in &rows {
                            let part: Vec<usize> = row
                                .iter()
                                .copied()
                                .filter(|&i| column_of(columns, glyphs[i].bbox.center_x()) == col)
                                .collect();
                            if part.is_empty() {
                                continue;
                            }
                            w.line(&part, fresh || (k > 0 && first));
                            fresh = false;
                            first = false;
                        }
                    }
                }
            }
        }
    }
    PositionedText::from_parts(w.order, w.text, w.offsets, pages.to_vec())
}
