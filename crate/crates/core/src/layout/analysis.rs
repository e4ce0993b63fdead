//! Document-level measurements: writing direction, spacing medians and
//! column structure.

use super::{ColumnRange, Glyph, LayoutConfig, LayoutMetrics, Orientation};
use crate::geometry::Rect;

/// Result of the pairwise direction vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationVote {
    pub orientation: Orientation,
    pub ltr_pairs: usize,
    pub rtl_pairs: usize,
    /// No usable pair was found and left-to-right was assumed.
    pub defaulted: bool,
}

fn same_baseline(a: &Glyph, b: &Glyph) -> bool {
    a.page == b.page
        && (a.bbox.center_y() - b.bbox.center_y()).abs() <= 0.25 * a.height().max(b.height())
}

/// Majority vote over the x-progression of consecutive same-baseline glyphs,
/// taken in content-stream order.
pub fn detect_orientation(glyphs: &[Glyph]) -> OrientationVote {
    let (mut ltr, mut rtl) = (0, 0);
    for pair in glyphs.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if !same_baseline(a, b) {
            continue;
        }
        let dx = b.bbox.center_x() - a.bbox.center_x();
        if dx > 0.0 {
            ltr += 1;
        } else if dx < 0.0 {
            rtl += 1;
        }
    }
    OrientationVote {
        orientation: if rtl > ltr {
            Orientation::RightToLeft
        } else {
            Orientation::LeftToRight
        },
        ltr_pairs: ltr,
        rtl_pairs: rtl,
        defaulted: ltr + rtl == 0,
    }
}

/// Groups glyph indices into rows sharing a vertical band. Rows come back
/// top to bottom, members sorted by x.
pub fn cluster_rows(glyphs: &[Glyph], members: &[usize]) -> Vec<Vec<usize>> {
    let mut order = members.to_vec();
    order.sort_by(|&a, &b| {
        glyphs[b]
            .bbox
            .center_y()
            .total_cmp(&glyphs[a].bbox.center_y())
            .then_with(|| glyphs[a].canonical_cmp(&glyphs[b]))
    });

    let mut rows: Vec<(f64, f64, Vec<usize>)> = Vec::new();
    for i in order {
        let g = &glyphs[i];
        let cy = g.bbox.center_y();
        match rows.last_mut() {
            Some((ref_cy, h, row)) if (*ref_cy - cy).abs() <= 0.5 * h.max(g.height()) => {
                *h = h.max(g.height());
                row.push(i);
            }
            _ => rows.push((cy, g.height(), vec![i])),
        }
    }
    rows.into_iter()
        .map(|(_, _, mut row)| {
            row.sort_by(|&a, &b| glyphs[a].canonical_cmp(&glyphs[b]));
            row
        })
        .collect()
}

/// A horizontal run of glyphs on one row with no gap wider than the split
/// threshold.
#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub bbox: Rect,
    pub center_y: f64,
}

pub(crate) fn split_row(glyphs: &[Glyph], row: &[usize], max_gap: f64) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    let mut current: Option<Rect> = None;
    for &i in row {
        let b = glyphs[i].bbox;
        current = match current {
            Some(r) if b.x0 - r.x1 <= max_gap => Some(r.union(&b)),
            Some(r) => {
                out.push(Segment {
                    bbox: r,
                    center_y: r.center_y(),
                });
                Some(b)
            }
            None => Some(b),
        };
    }
    if let Some(r) = current {
        out.push(Segment {
            bbox: r,
            center_y: r.center_y(),
        });
    }
    out
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

fn median_font_size(glyphs: &[Glyph]) -> f64 {
    let mut sizes: Vec<f64> = glyphs.iter().map(|g| g.font_size).filter(|s| *s > 0.0).collect();
    median(&mut sizes).unwrap_or(10.0)
}

fn page_members(glyphs: &[Glyph], page: usize) -> Vec<usize> {
    (0..glyphs.len()).filter(|&i| glyphs[i].page == page).collect()
}

fn page_count(glyphs: &[Glyph]) -> usize {
    glyphs.iter().map(|g| g.page + 1).max().unwrap_or(0)
}

/// Median of the horizontal gaps that separate words. Gaps narrower than
/// 12% of the font size are treated as intra-word spacing and ignored.
pub fn median_word_gap(glyphs: &[Glyph]) -> f64 {
    let mut gaps = Vec::new();
    for page in 0..page_count(glyphs) {
        for row in cluster_rows(glyphs, &page_members(glyphs, page)) {
            for pair in row.windows(2) {
                let (a, b) = (&glyphs[pair[0]], &glyphs[pair[1]]);
                let gap = b.bbox.x0 - a.bbox.x1;
                if gap > 0.12 * a.font_size.min(b.font_size) {
                    gaps.push(gap);
                }
            }
        }
    }
    median(&mut gaps)
        .filter(|g| *g > 0.0)
        .unwrap_or_else(|| 0.25 * median_font_size(glyphs))
}

/// Median baseline-to-baseline distance between a text segment and the
/// nearest horizontally overlapping segment below it.
pub fn median_line_spacing(glyphs: &[Glyph], word_gap: f64, config: &LayoutConfig) -> f64 {
    let split = config.column_gap_factor * word_gap;
    let mut spacings = Vec::new();
    for page in 0..page_count(glyphs) {
        let segments: Vec<Segment> = cluster_rows(glyphs, &page_members(glyphs, page))
            .iter()
            .flat_map(|row| split_row(glyphs, row, split))
            .collect();
        for s in &segments {
            let below = segments
                .iter()
                .filter(|t| t.center_y < s.center_y - 0.1 * s.bbox.height())
                .filter(|t| t.bbox.x1.min(s.bbox.x1) - t.bbox.x0.max(s.bbox.x0) > 0.0)
                .map(|t| s.center_y - t.center_y)
                .min_by(f64::total_cmp);
            if let Some(d) = below {
                spacings.push(d);
            }
        }
    }
    median(&mut spacings)
        .filter(|d| *d > 0.0)
        .unwrap_or_else(|| 1.2 * median_font_size(glyphs))
}

fn union_length(mut ranges: Vec<(f64, f64)>) -> f64 {
    ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (lo, hi) in ranges {
        if hi <= lo {
            continue;
        }
        current = match current {
            Some((clo, chi)) if lo <= chi => Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                Some((lo, hi))
            }
            None => Some((lo, hi)),
        };
    }
    if let Some((lo, hi)) = current {
        total += hi - lo;
    }
    total
}

/// Column x-ranges on `page`.
///
/// Each row is cut into segments at gaps wider than the gutter threshold.
/// Every segment claims the vertical band of one line pitch around its
/// centre. An x interval is clear when text on its two sides shares at least
/// two line pitches of height and, within that shared height, the bands
/// crossing it cover at most `1 - column_height_coverage` of the smaller
/// side. Inside each run of clear intervals the gutter is
/// the widest strip with the least crossing height; it must be wider than
/// `column_gap_factor × word_gap`.
pub fn detect_columns(
    glyphs: &[Glyph],
    page: usize,
    word_gap: f64,
    line_spacing: f64,
    config: &LayoutConfig,
) -> Vec<ColumnRange> {
    let members = page_members(glyphs, page);
    let Some(block) = members
        .iter()
        .map(|&i| glyphs[i].bbox)
        .reduce(|a, b| a.union(&b))
    else {
        return Vec::new();
    };
    let whole = vec![ColumnRange {
        x0: block.x0,
        x1: block.x1,
    }];
    let block_h = block.height();
    let min_gutter = config.column_gap_factor * word_gap;
    let segments: Vec<Segment> = cluster_rows(glyphs, &members)
        .iter()
        .flat_map(|row| split_row(glyphs, row, min_gutter))
        .collect();
    if block_h <= 0.0 || segments.len() < 2 {
        return whole;
    }

    let mut breaks: Vec<f64> = segments
        .iter()
        .flat_map(|s| [s.bbox.x0, s.bbox.x1])
        .chain([block.x0, block.x1])
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let half_pitch = line_spacing / 2.0;
    let band = |s: &Segment| {
        let top = s.bbox.y1.max(s.center_y + half_pitch).min(block.y1);
        let bottom = s.bbox.y0.min(s.center_y - half_pitch).max(block.y0);
        (bottom, top)
    };
    let bands = |keep: &dyn Fn(&Segment) -> bool| -> Vec<(f64, f64)> { segments.iter().filter(|s| keep(s)).map(band).collect() };
    let extent = |b: &[(f64, f64)]| b.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.0), hi.max(r.1)));
    let clipped = |b: Vec<(f64, f64)>, (lo, hi): (f64, f64)| union_length(b.into_iter().map(|r| (r.0.max(lo), r.1.min(hi))).collect());
    let allowed = 1.0 - config.column_height_coverage;
    // Crossing height of each clear elementary interval, measured over the
    // height where both sides carry text.
    let crossing: Vec<Option<f64>> = breaks
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let left = bands(&|s| s.bbox.x1 <= lo);
            let right = bands(&|s| s.bbox.x0 >= hi);
            let (l, r) = (extent(&left), extent(&right));
            let shared = (l.0.max(r.0), l.1.min(r.1));
            if shared.1 - shared.0 < 2.0 * line_spacing {
                return None;
            }
            let left = clipped(left, shared);
            let right = clipped(right, shared);
            let across = clipped(bands(&|s| s.bbox.x0 <= lo && s.bbox.x1 >= hi), shared);
            (across <= allowed * left.min(right) + 1e-9).then_some(across)
        })
        .collect();

    let mut gutters = Vec::new();
    let mut k = 0;
    while k < crossing.len() {
        if crossing[k].is_none() {
            k += 1;
            continue;
        }
        let start = k;
        while k < crossing.len() && crossing[k].is_some() {
            k += 1;
        }
        let least = crossing[start..k].iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let mut best: Option<(f64, f64)> = None;
        let mut j = start;
        while j < k {
            if crossing[j].is_some_and(|c| c > least + 1e-6) {
                j += 1;
                continue;
            }
            let from = j;
            while j < k && crossing[j].is_some_and(|c| c <= least + 1e-6) {
                j += 1;
            }
            let strip = (breaks[from], breaks[j]);
            if best.is_none_or(|b| strip.1 - strip.0 > b.1 - b.0) {
                best = Some(strip);
            }
        }
        if let Some((lo, hi)) = best.filter(|(lo, hi)| hi - lo > min_gutter) {
            gutters.push((lo, hi));
        }
    }
    if gutters.is_empty() {
        return whole;
    }

    let mut columns = Vec::with_capacity(gutters.len() + 1);
    let mut left = block.x0;
    for (lo, hi) in gutters {
        columns.push(ColumnRange { x0: left, x1: lo });
        left = hi;
    }
    columns.push(ColumnRange {
        x0: left,
        x1: block.x1,
    });
    columns
}

/// Measures spacing medians and per-page columns.
pub fn measure(
    glyphs: &[Glyph],
    orientation: Orientation,
    pages: usize,
    config: &LayoutConfig,
) -> LayoutMetrics {
    let word_gap = median_word_gap(glyphs);
    let line_spacing = median_line_spacing(glyphs, word_gap, config);
    let columns_per_page = (0..pages)
        .map(|p| detect_columns(glyphs, p, word_gap, line_spacing, config))
        .collect();
    LayoutMetrics {
        orientation,
        columns_per_page,
        median_line_spacing: line_spacing,
        median_word_gap: word_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(ch: char, x0: f64, x1: f64, y: f64) -> Glyph {
        Glyph {
            ch,
            page: 0,
            bbox: Rect::new(x0, y, x1, y + 10.0),
            font_size: 10.0,
            rotation: 0.0,
        }
    }

    /// Rows of glyphs 5 pt wide with no gaps, covering `[x0, x1]` on each
    /// baseline.
    fn band(x0: f64, x1: f64, rows: usize) -> Vec<Glyph> {
        let mut out = Vec::new();
        for r in 0..rows {
            let y = 700.0 - 12.0 * r as f64;
            let mut x = x0;
            while x < x1 - 1e-9 {
                let w = 5.0_f64.min(x1 - x);
                out.push(g('x', x, x + w, y));
                x += w;
            }
        }
        out
    }

    #[test]
    fn increasing_x_is_left_to_right() {
        let glyphs: Vec<Glyph> = (0..5).map(|i| g('a', 10.0 * i as f64, 10.0 * i as f64 + 5.0, 0.0)).collect();
        let vote = detect_orientation(&glyphs);
        assert_eq!(vote.orientation, Orientation::LeftToRight);
        assert_eq!(vote.ltr_pairs, 4);
    }

    #[test]
    fn mirrored_is_right_to_left() {
        let glyphs: Vec<Glyph> = (0..5).rev().map(|i| g('a', 10.0 * i as f64, 10.0 * i as f64 + 5.0, 0.0)).collect();
        assert_eq!(detect_orientation(&glyphs).orientation, Orientation::RightToLeft);
    }

    #[test]
    fn ninety_percent_increasing_pairs_vote_left_to_right() {
        // 11 glyphs -> 10 consecutive pairs; one pair reversed.
        let xs = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 100.0, 90.0];
        let glyphs: Vec<Glyph> = xs.iter().map(|&x| g('a', x, x + 5.0, 0.0)).collect();
        let vote = detect_orientation(&glyphs);
        assert_eq!((vote.ltr_pairs, vote.rtl_pairs), (9, 1));
        assert_eq!(vote.orientation, Orientation::LeftToRight);
        assert!(!vote.defaulted);
    }

    #[test]
    fn single_glyph_defaults_with_flag() {
        let vote = detect_orientation(&[g('a', 0.0, 5.0, 0.0)]);
        assert_eq!(vote.orientation, Orientation::LeftToRight);
        assert!(vote.defaulted);
    }

    #[test]
    fn one_block_is_one_column() {
        let glyphs = band(72.0, 300.0, 20);
        let cfg = LayoutConfig::default();
        let cols = detect_columns(&glyphs, 0, 2.5, 12.0, &cfg);
        assert_eq!(cols, vec![ColumnRange { x0: 72.0, x1: 300.0 }]);
    }

    #[test]
    fn gutter_splits_two_columns() {
        let mut glyphs = band(72.0, 290.0, 30);
        glyphs.extend(band(322.0, 540.0, 30));
        let cfg = LayoutConfig::default();
        let cols = detect_columns(&glyphs, 0, 2.5, 12.0, &cfg);
        assert_eq!(
            cols,
            vec![ColumnRange { x0: 72.0, x1: 290.0 }, ColumnRange { x0: 322.0, x1: 540.0 }]
        );
    }

    #[test]
    fn spanning_title_does_not_hide_gutter() {
        let mut glyphs = band(72.0, 540.0, 3);
        let mut body = band(72.0, 290.0, 30);
        body.extend(band(322.0, 540.0, 30));
        for b in &mut body {
            b.bbox.y0 -= 60.0;
            b.bbox.y1 -= 60.0;
        }
        glyphs.extend(body);
        let cols = detect_columns(&glyphs, 0, 2.5, 12.0, &LayoutConfig::default());
        assert_eq!(cols.len(), 2);
    }

    #[test]
    fn short_second_column_is_still_a_column() {
        let mut glyphs = band(72.0, 540.0, 2);
        let mut body = band(72.0, 290.0, 40);
        body.extend(band(322.0, 540.0, 3));
        for b in &mut body {
            b.bbox.y0 -= 40.0;
            b.bbox.y1 -= 40.0;
        }
        glyphs.extend(body);
        let cols = detect_columns(&glyphs, 0, 2.5, 12.0, &LayoutConfig::default());
        assert_eq!(
            cols,
            vec![ColumnRange { x0: 72.0, x1: 290.0 }, ColumnRange { x0: 322.0, x1: 540.0 }]
        );
    }

    #[test]
    fn one_row_beside_text_is_not_a_gutter() {
        let mut glyphs = band(72.0, 200.0, 1);
        glyphs.extend(band(400.0, 420.0, 1));
        let mut body = band(72.0, 420.0, 20);
        for b in &mut body {
            b.bbox.y0 -= 20.0;
            b.bbox.y1 -= 20.0;
        }
        glyphs.extend(body);
        assert_eq!(detect_columns(&glyphs, 0, 2.5, 12.0, &LayoutConfig::default()).len(), 1);
    }

    #[test]
    fn single_glyph_page_is_degenerate_column() {
        let cols = detect_columns(&[g('a', 5.0, 9.0, 0.0)], 0, 2.5, 12.0, &LayoutConfig::default());
        assert_eq!(cols, vec![ColumnRange { x0: 5.0, x1: 9.0 }]);
    }

    #[test]
    fn narrow_gap_is_not_a_gutter() {
        let mut glyphs = band(72.0, 290.0, 30);
        glyphs.extend(band(293.0, 540.0, 30));
        let cols = detect_columns(&glyphs, 0, 2.5, 12.0, &LayoutConfig::default());
        assert_eq!(cols.len(), 1);
    }

    #[test]
    fn word_gap_median_ignores_touching_glyphs() {
        let glyphs = vec![
            g('a', 0.0, 5.0, 0.0),
            g('b', 5.0, 10.0, 0.0),
            g('c', 13.0, 18.0, 0.0),
            g('d', 21.0, 26.0, 0.0),
        ];
        assert_eq!(median_word_gap(&glyphs), 3.0);
    }

    #[test]
    fn line_spacing_from_stacked_rows() {
        let glyphs = band(72.0, 100.0, 5);
        let spacing = median_line_spacing(&glyphs, 2.5, &LayoutConfig::default());
        assert!((spacing - 12.0).abs() < 1e-9);
    }

    #[test]
    fn union_length_merges_overlaps() {
        assert_eq!(union_length(vec![(0.0, 2.0), (1.0, 3.0), (5.0, 6.0)]), 4.0);
    }
}
