//! Sentence passages, term normalisation, scoring and section filtering.

mod porter;
mod sentences;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{MatchKind, SectionMap, TargetSection};

pub use porter::stem;
pub use sentences::split_sentences;

const SHIPPED_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Words dropped before stemming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stoplist {
    words: HashSet<String>,
}

impl Default for Stoplist {
    fn default() -> Self {
        Stoplist::parse(SHIPPED_STOPWORDS)
    }
}

impl Stoplist {
    /// One word per line; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Stoplist { words }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(Stoplist::parse(&std::fs::read_to_string(path)?))
    }

    pub fn empty() -> Self {
        Stoplist {
            words: HashSet::new(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Lowercases, splits on non-alphanumerics, drops stopwords and stems.
/// Returns the stems in text order, repeats included.
pub fn normalize_terms(text: &str, stoplist: &Stoplist) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty() && !stoplist.contains(t))
        .map(stem)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub raw: String,
    /// Distinct stems in first-occurrence order.
    pub stems: Vec<String>,
    /// Empty means the whole document.
    pub requested_sections: BTreeSet<TargetSection>,
    /// Fewest distinct matched stems a passage needs. Always at least 1.
    pub min_score: usize,
}

impl Query {
    pub fn new(
        raw: &str,
        requested_sections: impl IntoIterator<Item = TargetSection>,
        stoplist: &Stoplist,
    ) -> Result<Self> {
        let mut stems = Vec::new();
        for s in normalize_terms(raw, stoplist) {
            if !stems.contains(&s) {
                stems.push(s);
            }
        }
        if stems.is_empty() {
            return Err(Error::EmptyQuery);
        }
        Ok(Query {
            raw: raw.to_owned(),
            stems,
            requested_sections: requested_sections.into_iter().collect(),
            min_score: 1,
        })
    }

    pub fn with_min_score(mut self, min_score: usize) -> Self {
        self.min_score = min_score.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub start: usize,
    pub end: usize,
    pub stems: Vec<String>,
}

/// Splits and normalises every sentence of `text`.
pub fn sentences(text: &str, hard_breaks: &[(usize, usize)], stoplist: &Stoplist) -> Vec<Sentence> {
    let chars: Vec<char> = text.chars().collect();
    split_sentences(text, hard_breaks)
        .into_iter()
        .map(|(start, end)| {
            let s: String = chars[start..end].iter().collect();
            Sentence {
                start,
                end,
                stems: normalize_terms(&s, stoplist),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub start: usize,
    pub end: usize,
    pub score: usize,
    /// Matched query stems, in query order.
    pub matched: Vec<String>,
    pub section: Option<TargetSection>,
    /// How the section's header was recognised.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<MatchKind>,
}

/// Scores each sentence by the number of distinct query stems it contains.
/// Sentences scoring below `query.min_score` are dropped; the rest are
/// sorted by score, then by position.
pub fn score_passages(query: &Query, sentences: &[Sentence]) -> Result<Vec<Passage>> {
    if query.stems.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let mut out: Vec<Passage> = sentences
        .iter()
        .filter_map(|s| {
            let present: HashSet<&str> = s.stems.iter().map(String::as_str).collect();
            let matched: Vec<String> = query
                .stems
                .iter()
                .filter(|q| present.contains(q.as_str()))
                .cloned()
                .collect();
            (!matched.is_empty() && matched.len() >= query.min_score).then_some(Passage {
                start: s.start,
                end: s.end,
                score: matched.len(),
                matched,
                section: None,
                provenance: None,
            })
        })
        .collect();
    out.sort_by(|a, b| b.score.cmp(&a.score).then(a.start.cmp(&b.start)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtered {
    pub passages: Vec<Passage>,
    /// Filtering was active, there was input, and nothing survived.
    pub no_match: bool,
}

/// Keeps passages starting inside a requested section and tags them with
/// that section. With `fallback` set or no requested sections the input is
/// returned as is.
pub fn filter_by_sections(
    passages: Vec<Passage>,
    map: &SectionMap,
    query: &Query,
    fallback: bool,
) -> Filtered {
    if fallback || query.requested_sections.is_empty() {
        return Filtered {
            passages,
            no_match: false,
        };
    }
    let had_input = !passages.is_empty();
    let kept: Vec<Passage> = passages
        .into_iter()
        .filter_map(|mut p| {
            let (section, span) = map.requested_section_at(p.start, &query.requested_sections)?;
            p.section = Some(section);
            p.provenance = Some(span.kind);
            Some(p)
        })
        .collect();
    Filtered {
        no_match: had_input && kept.is_empty(),
        passages: kept,
    }
}
