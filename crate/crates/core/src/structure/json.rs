//! JSON interchange for the structure stage.
//!
//! ```json
//! {
//!   "sections": { "evaluation": [[812, 2040]] },
//!   "provenance": { "evaluation": [{ "header": "5 RESULTS", "kind": "explicit", "candidate": 4 }] },
//!   "fallback": false,
//!   "requested": ["evaluation"],
//!   "candidates": [ ... ],
//!   "diagnostics": [ ... ]
//! }
//! ```
//!
//! `sections[name][i]` and `provenance[name][i]` describe the same span.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{HeaderCandidate, MatchKind, MatchState, RuleDiagnostic, SectionMap, SectionSpan, StructureAnalysis, TargetSection};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanProvenance {
    pub header: String,
    pub kind: MatchKind,
    pub candidate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionsJson {
    pub sections: BTreeMap<TargetSection, Vec<[usize; 2]>>,
    pub provenance: BTreeMap<TargetSection, Vec<SpanProvenance>>,
    pub fallback: bool,
    #[serde(default)]
    pub requested: Vec<TargetSection>,
    pub candidates: Vec<HeaderCandidate>,
    #[serde(default)]
    pub diagnostics: Vec<RuleDiagnostic>,
}

impl SectionsJson {
    pub fn from_analysis(analysis: &StructureAnalysis, requested: &BTreeSet<TargetSection>, fallback: bool) -> Self {
        let mut sections: BTreeMap<TargetSection, Vec<[usize; 2]>> = BTreeMap::new();
        let mut provenance: BTreeMap<TargetSection, Vec<SpanProvenance>> = BTreeMap::new();
        for section in analysis.map.sections() {
            for span in analysis.map.spans(section) {
                sections.entry(section).or_default().push([span.start, span.end]);
                provenance.entry(section).or_default().push(SpanProvenance {
                    header: analysis.candidates[span.candidate].raw_text.clone(),
                    kind: span.kind,
                    candidate: span.candidate,
                });
            }
        }
        SectionsJson {
            sections,
            provenance,
            fallback,
            requested: requested.iter().copied().collect(),
            candidates: analysis.candidates.clone(),
            diagnostics: analysis.diagnostics.clone(),
        }
    }

    /// Rebuilds the analysis, checking the spans against a text of
    /// `text_len` characters.
    pub fn into_analysis(self, text_len: usize) -> Result<StructureAnalysis> {
        let bad = |m: String| Error::InvalidLayout(format!("section map: {m}"));
        let mut spans = Vec::new();
        for (section, ranges) in &self.sections {
            let prov = self.provenance.get(section).map_or(&[][..], Vec::as_slice);
            if prov.len() != ranges.len() {
                return Err(bad(format!("{section} has {} spans but {} provenance entries", ranges.len(), prov.len())));
            }
            for (&[start, end], p) in ranges.iter().zip(prov) {
                if end > text_len {
                    return Err(bad(format!("span [{start}, {end}) exceeds text length {text_len}")));
                }
                let Some(c) = self.candidates.get(p.candidate) else {
                    return Err(bad(format!("candidate {} does not exist", p.candidate)));
                };
                if c.matched != Some(*section) || c.match_kind != p.kind {
                    return Err(bad(format!("candidate {} is not a {:?} match for {section}", p.candidate, p.kind)));
                }
                spans.push((
                    *section,
                    SectionSpan {
                        start,
                        end,
                        kind: p.kind,
                        candidate: p.candidate,
                    },
                ));
            }
        }
        if let Some(extra) = self.provenance.keys().find(|s| !self.sections.contains_key(s)) {
            return Err(bad(format!("provenance for {extra} has no spans")));
        }
        let map = SectionMap::from_spans(spans)?;
        Ok(StructureAnalysis {
            state: MatchState::from_candidates(&self.candidates),
            candidates: self.candidates,
            map,
            diagnostics: self.diagnostics,
        })
    }
}
