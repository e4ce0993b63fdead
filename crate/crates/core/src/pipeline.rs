//! End-to-end search: layout, structure, retrieval, filtering and
//! highlighting.

use crate::error::Result;
use crate::highlight::{passage_to_quads, write_annotations, AnnotationStyle, Color, HighlightSet, Written};
use crate::layout::{analyze_pdf, LayoutConfig, LayoutResult, PositionedText};
use crate::retrieval::{filter_by_sections, score_passages, sentences, Passage, Query, Stoplist};
use crate::structure::{
    analyze_structure, check_fallback, HeaderCandidate, MatchState, SectionMap, StructureAnalysis,
    StructureConfig,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Surviving passages, best first.
    pub passages: Vec<Passage>,
    /// Structural filtering was abandoned.
    pub fallback: bool,
    /// Filtering was active and removed every passage.
    pub no_match: bool,
}

/// Ranks the sentences of `text` against `query` and restricts them to the
/// requested sections unless section detection failed.
///
/// `candidates` supplies the header lines, which always form sentences of
/// their own. Every passage inside a detected section carries that section,
/// whether or not filtering ran.
pub fn search_text(
    text: &PositionedText,
    candidates: &[HeaderCandidate],
    map: &SectionMap,
    state: &MatchState,
    query: &Query,
    stoplist: &Stoplist,
    fallback_ratio: f64,
) -> Result<SearchResult> {
    let breaks: Vec<(usize, usize)> = candidates.iter().map(|c| (c.offset, c.line_end)).collect();
    let sents = sentences(text.text(), &breaks, stoplist);
    let scored = score_passages(query, &sents)?;
    let fallback = check_fallback(state, map, &query.requested_sections, fallback_ratio);
    let mut filtered = filter_by_sections(scored, map, query, fallback);
    for p in filtered.passages.iter_mut().filter(|p| p.section.is_none()) {
        if let Some((section, span)) = map.span_at(p.start) {
            p.section = Some(section);
            p.provenance = Some(span.kind);
        }
    }
    Ok(SearchResult {
        passages: filtered.passages,
        fallback,
        no_match: filtered.no_match,
    })
}

#[derive(Debug, Clone)]
pub struct DocumentSearch {
    pub layout: LayoutResult,
    pub structure: StructureAnalysis,
    pub result: SearchResult,
}

/// Runs the whole pipeline on PDF bytes.
pub fn search_pdf(
    pdf: &[u8],
    query: &Query,
    layout_config: &LayoutConfig,
    structure_config: &StructureConfig,
    stoplist: &Stoplist,
) -> Result<DocumentSearch> {
    let layout = analyze_pdf(pdf, layout_config)?;
    search_layout(layout, query, structure_config, stoplist)
}

/// Pipeline from an existing layout onwards.
pub fn search_layout(
    layout: LayoutResult,
    query: &Query,
    structure_config: &StructureConfig,
    stoplist: &Stoplist,
) -> Result<DocumentSearch> {
    let structure = analyze_structure(&layout.text, structure_config);
    let result = search_text(
        &layout.text,
        &structure.candidates,
        &structure.map,
        &structure.state,
        query,
        stoplist,
        structure_config.fallback_ratio,
    )?;
    Ok(DocumentSearch {
        layout,
        structure,
        result,
    })
}

/// Quads for every passage, in passage order.
pub fn passage_quads(text: &PositionedText, passages: &[Passage], color: Color) -> Result<Vec<HighlightSet>> {
    passages
        .iter()
        .map(|p| passage_to_quads(p.start, p.end, text, color))
        .collect()
}

/// Writes highlight annotations for `passages` into `pdf`.
pub fn highlight_pdf(
    pdf: &[u8],
    text: &PositionedText,
    passages: &[Passage],
    color: Color,
    style: &AnnotationStyle,
) -> Result<Written> {
    let sets = passage_quads(text, passages, color)?;
    write_annotations(pdf, &sets, style)
}
