//! Section spans and the match-state counters.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{HeaderCandidate, MatchKind, TargetSection};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchState {
    pub explicit_count: usize,
    pub implicit_count: usize,
    /// Candidate indices matched to each section, in document order.
    pub per_section: BTreeMap<TargetSection, Vec<usize>>,
}

impl MatchState {
    pub fn from_candidates(candidates: &[HeaderCandidate]) -> Self {
        let mut state = MatchState::default();
        for (i, c) in candidates.iter().enumerate() {
            let Some(section) = c.matched else { continue };
            match c.match_kind {
                MatchKind::Explicit => state.explicit_count += 1,
                MatchKind::Implicit => state.implicit_count += 1,
                MatchKind::Unmatched => continue,
            }
            state.per_section.entry(section).or_default().push(i);
        }
        state
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionSpan {
    pub start: usize,
    pub end: usize,
    pub kind: MatchKind,
    /// Index of the header candidate that opened the span.
    pub candidate: usize,
}

impl SectionSpan {
    pub fn contains(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end
    }
}

/// Character ranges of each detected section.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectionMap {
    spans: BTreeMap<TargetSection, Vec<SectionSpan>>,
}

impl SectionMap {
    /// Builds a map from explicit spans, checking that every range is
    /// non-empty and that no two ranges overlap.
    pub fn from_spans(
        spans: impl IntoIterator<Item = (TargetSection, SectionSpan)>,
    ) -> crate::Result<Self> {
        let mut map = SectionMap::default();
        for (section, span) in spans {
            if span.start >= span.end {
                return Err(crate::Error::InvalidLayout(format!(
                    "empty span [{}, {}) for {section}",
                    span.start, span.end
                )));
            }
            map.spans.entry(section).or_default().push(span);
        }
        for list in map.spans.values_mut() {
            list.sort_by_key(|s| s.start);
        }
        let all = map.all_spans();
        if let Some(w) = all.windows(2).find(|w| w[0].1.end > w[1].1.start) {
            return Err(crate::Error::InvalidLayout(format!(
                "spans [{}, {}) and [{}, {}) overlap",
                w[0].1.start, w[0].1.end, w[1].1.start, w[1].1.end
            )));
        }
        Ok(map)
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn spans(&self, section: TargetSection) -> &[SectionSpan] {
        self.spans.get(&section).map_or(&[], Vec::as_slice)
    }

    /// Sections with at least one span, in canonical order.
    pub fn sections(&self) -> impl Iterator<Item = TargetSection> + '_ {
        self.spans.keys().copied()
    }

    /// Every span sorted by start offset.
    pub fn all_spans(&self) -> Vec<(TargetSection, SectionSpan)> {
        let mut all: Vec<(TargetSection, SectionSpan)> = self
            .spans
            .iter()
            .flat_map(|(s, list)| list.iter().map(move |span| (*s, *span)))
            .collect();
        all.sort_by_key(|(_, span)| span.start);
        all
    }

    /// The section whose span contains `offset`.
    pub fn section_at(&self, offset: usize) -> Option<TargetSection> {
        self.spans
            .iter()
            .find(|(_, list)| list.iter().any(|s| s.contains(offset)))
            .map(|(s, _)| *s)
    }

    /// The span containing `offset` and its section.
    pub fn span_at(&self, offset: usize) -> Option<(TargetSection, SectionSpan)> {
        self.spans.iter().find_map(|(s, list)| {
            list.iter().find(|span| span.contains(offset)).map(|span| (*s, *span))
        })
    }

    /// The requested section whose span contains `offset`.
    pub fn requested_section_at(
        &self,
        offset: usize,
        requested: &BTreeSet<TargetSection>,
    ) -> Option<(TargetSection, SectionSpan)> {
        requested.iter().find_map(|s| {
            self.spans(*s)
                .iter()
                .find(|span| span.contains(offset))
                .map(|span| (*s, *span))
        })
    }

    /// Copy without `section`.
    pub fn without(&self, section: TargetSection) -> SectionMap {
        let mut spans = self.spans.clone();
        spans.remove(&section);
        SectionMap { spans }
    }
}

/// Spans every matched candidate from the end of its header line to the
/// next candidate or the end of the text. Empty spans are skipped.
pub fn build_section_map(candidates: &[HeaderCandidate], text_len: usize) -> (SectionMap, MatchState) {
    let mut spans: BTreeMap<TargetSection, Vec<SectionSpan>> = BTreeMap::new();
    for (i, c) in candidates.iter().enumerate() {
        let Some(section) = c.matched else { continue };
        if c.match_kind == MatchKind::Unmatched {
            continue;
        }
        let end = candidates.get(i + 1).map_or(text_len, |n| n.offset).min(text_len);
        let start = c.line_end.min(end);
        if start < end {
            spans.entry(section).or_default().push(SectionSpan {
                start,
                end,
                kind: c.match_kind,
                candidate: i,
            });
        }
    }
    (SectionMap { spans }, MatchState::from_candidates(candidates))
}

/// Whether structural filtering should be abandoned for this request.
///
/// True when the document has no explicit match at all, or when fewer than
/// `ratio` of the requested sections have a span.
pub fn check_fallback(
    state: &MatchState,
    map: &SectionMap,
    requested: &BTreeSet<TargetSection>,
    ratio: f64,
) -> bool {
    if state.explicit_count == 0 {
        return true;
    }
    if requested.is_empty() {
        return false;
    }
    let found = requested.iter().filter(|s| !map.spans(**s).is_empty()).count();
    (found as f64) < ratio * requested.len() as f64
}
