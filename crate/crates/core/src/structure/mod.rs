//! Section header detection and the section-to-offset map.
//!
//! Header candidates are all-caps lines with optional arabic or roman
//! numbering ([`scan_header_candidates`]). Candidates are first matched by
//! phrase against an [`EquivalenceTable`], then unmatched candidates lying
//! between matched anchors are assigned by ordered [`Rule`]s. The matched
//! headers carve the text into per-section spans ([`build_section_map`]).

mod candidates;
mod config;
mod equivalence;
mod json;
mod map;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::PositionedText;

pub use candidates::{parse_roman, scan_header_candidates, scan_text, DEFAULT_MAX_HEADER_CHARS};
pub use config::StructureConfig;
pub use equivalence::{normalize_phrase, EquivalenceTable};
pub use map::{build_section_map, check_fallback, MatchState, SectionMap, SectionSpan};
pub use json::{SectionsJson, SpanProvenance};
pub use rules::{infer_implicit, Anchor, Position, Rule, RuleDiagnostic};

/// The fixed set of sections a search can be restricted to, in canonical
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetSection {
    Abstract,
    Introduction,
    RelatedWork,
    Implementation,
    Evaluation,
    Conclusion,
    FutureWork,
}

impl TargetSection {
    pub const ALL: [TargetSection; 7] = [
        TargetSection::Abstract,
        TargetSection::Introduction,
        TargetSection::RelatedWork,
        TargetSection::Implementation,
        TargetSection::Evaluation,
        TargetSection::Conclusion,
        TargetSection::FutureWork,
    ];

    /// Position in canonical order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn kebab_name(self) -> &'static str {
        match self {
            TargetSection::Abstract => "abstract",
            TargetSection::Introduction => "introduction",
            TargetSection::RelatedWork => "related-work",
            TargetSection::Implementation => "implementation",
            TargetSection::Evaluation => "evaluation",
            TargetSection::Conclusion => "conclusion",
            TargetSection::FutureWork => "future-work",
        }
    }

    /// Header phrase in normalised form, e.g. `related work`.
    pub fn phrase(self) -> String {
        self.kebab_name().replace('-', " ")
    }
}

impl fmt::Display for TargetSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kebab_name())
    }
}

impl FromStr for TargetSection {
    type Err = Error;

    /// Accepts kebab-case, spaced or snake-case names in any letter case.
    fn from_str(s: &str) -> Result<Self> {
        let wanted = normalize_phrase(s);
        TargetSection::ALL
            .into_iter()
            .find(|t| t.phrase() == wanted)
            .ok_or_else(|| Error::UnknownSection(s.to_owned()))
    }
}

/// Parses a comma-separated section list.
pub fn parse_section_list(list: &str) -> Result<Vec<TargetSection>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let section: TargetSection = part.parse()?;
        if !out.contains(&section) {
            out.push(section);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Numbering {
    Arabic(u32),
    Roman(u32),
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchKind {
    Explicit,
    Implicit,
    Unmatched,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeaderCandidate {
    /// The full header line as it appears in the text.
    pub raw_text: String,
    /// Character offset of the line start.
    pub offset: usize,
    /// Character offset just past the last character of the line.
    pub line_end: usize,
    pub numbering: Numbering,
    pub matched: Option<TargetSection>,
    pub match_kind: MatchKind,
}

impl HeaderCandidate {
    /// The header text without its numbering token.
    pub fn title(&self) -> &str {
        candidates::strip_numbering(&self.raw_text).1
    }
}

/// Explicit phrase matching. Returns the number of candidates matched.
pub fn match_explicit(candidates: &mut [HeaderCandidate], table: &EquivalenceTable) -> usize {
    let mut count = 0;
    for c in candidates.iter_mut() {
        if let Some(section) = table.lookup(c.title()) {
            c.matched = Some(section);
            c.match_kind = MatchKind::Explicit;
            count += 1;
        }
    }
    count
}

/// Everything the structure stage learned about one document.
#[derive(Debug, Clone)]
pub struct StructureAnalysis {
    pub candidates: Vec<HeaderCandidate>,
    pub map: SectionMap,
    pub state: MatchState,
    pub diagnostics: Vec<RuleDiagnostic>,
}

/// Runs scanning, explicit and implicit matching, and map construction.
pub fn analyze_structure(doc: &PositionedText, config: &StructureConfig) -> StructureAnalysis {
    let mut candidates = scan_text(doc.text(), config.max_header_chars);
    match_explicit(&mut candidates, &config.equivalence);
    let diagnostics = infer_implicit(&mut candidates, &config.rules);
    let (map, state) = build_section_map(&candidates, doc.len());
    StructureAnalysis {
        candidates,
        map,
        state,
        diagnostics,
    }
}
