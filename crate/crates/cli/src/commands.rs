//! One function per subcommand. Each takes paths and resolved settings and
//! returns the bytes to emit, leaving output routing to the caller.

use std::collections::BTreeSet;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use structpass::eval::{compare_systems, load_judgments, raw_scores_csv, Report};
use structpass::highlight::{AnnotationStyle, Color, Written};
use structpass::layout::{analyze_pdf, LayoutConfig, LayoutJson, LayoutResult};
use structpass::pipeline::{highlight_pdf, search_text};
use structpass::retrieval::{Query, Stoplist};
use structpass::structure::{
    analyze_structure, check_fallback, MatchKind, SectionsJson, StructureAnalysis, StructureConfig, TargetSection,
};

use crate::error::{CliError, CliResult};

/// Resolved settings for `search` and `sections`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub query: String,
    /// Fewest distinct query stems a passage must match.
    pub min_score: usize,
    pub sections: Vec<TargetSection>,
    pub layout: LayoutConfig,
    pub structure: StructureConfig,
    pub stoplist: Stoplist,
    pub color: Color,
    pub highlight: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            query: String::new(),
            min_score: 1,
            sections: Vec::new(),
            layout: LayoutConfig::default(),
            structure: StructureConfig::shipped(),
            stoplist: Stoplist::default(),
            color: Color::YELLOW,
            highlight: false,
        }
    }
}

impl RunConfig {
    /// Checks that every threshold is strictly positive and the fallback
    /// ratio lies in `(0, 1]`.
    pub fn validate(&self) -> CliResult<()> {
        let l = &self.layout;
        for (name, v) in [
            ("column gap", l.column_gap_factor),
            ("word gap", l.word_gap_factor),
            ("paragraph gap", l.paragraph_gap_factor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("{name} {v} must be strictly positive")));
            }
        }
        let r = self.structure.fallback_ratio;
        if !(r > 0.0 && r <= 1.0) {
            return Err(CliError::Usage(format!("fallback ratio {r} must lie in (0, 1]")));
        }
        Ok(())
    }

    fn requested(&self) -> BTreeSet<TargetSection> {
        self.sections.iter().copied().collect()
    }
}

pub fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| match source.kind() {
        ErrorKind::NotFound => CliError::NotFound { path: path.to_owned() },
        _ => CliError::Read {
            path: path.to_owned(),
            source,
        },
    })
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> CliResult<T> {
    serde_json::from_slice(bytes).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn is_json(bytes: &[u8]) -> bool {
    bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{')
}

/// An input document: the original PDF bytes, if any, and its layout.
pub struct Loaded {
    pub path: PathBuf,
    pub pdf: Option<Vec<u8>>,
    pub layout: LayoutResult,
}

/// Reads a PDF or a layout JSON file.
pub fn load_input(path: &Path, layout: &LayoutConfig) -> CliResult<Loaded> {
    let bytes = read_file(path)?;
    if is_json(&bytes) {
        let json: LayoutJson = parse_json(path, &bytes)?;
        let layout = json.into_result().map_err(|e| CliError::input(path, e))?;
        return Ok(Loaded {
            path: path.to_owned(),
            pdf: None,
            layout,
        });
    }
    let result = analyze_pdf(&bytes, layout).map_err(|e| CliError::input(path, e))?;
    Ok(Loaded {
        path: path.to_owned(),
        pdf: Some(bytes),
        layout: result,
    })
}

/// Layout JSON for one PDF.
pub fn cmd_extract(pdf: &Path, layout: &LayoutConfig) -> CliResult<String> {
    let bytes = read_file(pdf)?;
    let result = analyze_pdf(&bytes, layout).map_err(|e| CliError::input(pdf, e))?;
    to_json(&LayoutJson::from_result(&result))
}

pub struct SectionsOutput {
    pub json: SectionsJson,
    pub notes: Vec<String>,
}

pub fn cmd_sections(input: &Path, run: &RunConfig) -> CliResult<SectionsOutput> {
    let loaded = load_input(input, &run.layout)?;
    let analysis = analyze_structure(&loaded.layout.text, &run.structure);
    let requested = run.requested();
    let fallback = check_fallback(&analysis.state, &analysis.map, &requested, run.structure.fallback_ratio);
    let mut notes = layout_notes(&loaded.layout);
    notes.extend(structure_notes(&analysis));
    Ok(SectionsOutput {
        json: SectionsJson::from_analysis(&analysis, &requested, fallback),
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub raw: String,
    pub stems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassageRecord {
    pub start: usize,
    pub end: usize,
    pub score: usize,
    pub section: Option<TargetSection>,
    pub provenance: Option<MatchKind>,
    pub matched: Vec<String>,
    pub text: String,
}

/// Passage JSON written by `search` and read by `highlight`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassagesJson {
    pub query: QueryRecord,
    pub requested: Vec<TargetSection>,
    pub fallback: bool,
    /// Filtering was active and removed every passage.
    pub no_match: bool,
    pub passages: Vec<PassageRecord>,
}

pub struct SearchOutput {
    pub json: PassagesJson,
    /// Annotated PDF, when highlighting was requested and the input is a PDF.
    pub highlighted: Option<Written>,
    pub notes: Vec<String>,
}

/// Runs the pipeline on one input. `sections_map` replaces header detection
/// with a saved `sections` result.
pub fn cmd_search(input: &Path, sections_map: Option<&Path>, run: &RunConfig) -> CliResult<SearchOutput> {
    let query = Query::new(&run.query, run.sections.iter().copied(), &run.stoplist)
        .map_err(|e| CliError::Usage(format!("--query {:?}: {e}", run.query)))?
        .with_min_score(run.min_score);
    let loaded = load_input(input, &run.layout)?;
    let text = &loaded.layout.text;
    let analysis = match sections_map {
        Some(path) => {
            let json: SectionsJson = parse_json(path, &read_file(path)?)?;
            json.into_analysis(text.len()).map_err(|e| CliError::input(path, e))?
        }
        None => analyze_structure(text, &run.structure),
    };
    let result = search_text(
        text,
        &analysis.candidates,
        &analysis.map,
        &analysis.state,
        &query,
        &run.stoplist,
        run.structure.fallback_ratio,
    )
    .map_err(|e| CliError::input(input, e))?;

    let mut notes = layout_notes(&loaded.layout);
    notes.extend(structure_notes(&analysis));
    if result.fallback && !query.requested_sections.is_empty() {
        notes.push("too few requested sections detected; returning unfiltered results".into());
    }

    let highlighted = match (&loaded.pdf, run.highlight) {
        (Some(pdf), true) => Some(
            highlight_pdf(pdf, text, &result.passages, run.color, &AnnotationStyle::default())
                .map_err(|e| CliError::input(input, e))?,
        ),
        (None, true) => {
            notes.push("input is layout JSON; no highlighted PDF written".into());
            None
        }
        _ => None,
    };

    let passages = result
        .passages
        .iter()
        .map(|p| PassageRecord {
            start: p.start,
            end: p.end,
            score: p.score,
            section: p.section,
            provenance: p.provenance,
            matched: p.matched.clone(),
            text: text.slice(p.start, p.end).to_owned(),
        })
        .collect();
    Ok(SearchOutput {
        json: PassagesJson {
            query: QueryRecord {
                raw: query.raw.clone(),
                stems: query.stems.clone(),
            },
            requested: query.requested_sections.iter().copied().collect(),
            fallback: result.fallback,
            no_match: result.no_match,
            passages,
        },
        highlighted,
        notes,
    })
}

#[derive(Deserialize)]
struct SpanRecord {
    start: usize,
    end: usize,
}

#[derive(Deserialize)]
struct SpansOnly {
    passages: Vec<SpanRecord>,
}

/// Annotates `pdf` with the passages listed in a passage JSON file.
pub fn cmd_highlight(
    pdf: &Path,
    passages: &Path,
    layout_json: Option<&Path>,
    layout: &LayoutConfig,
    color: Color,
    style: &AnnotationStyle,
) -> CliResult<Written> {
    let bytes = read_file(pdf)?;
    let spans: SpansOnly = parse_json(passages, &read_file(passages)?)?;
    let result = match layout_json {
        Some(path) => {
            let json: LayoutJson = parse_json(path, &read_file(path)?)?;
            json.into_result().map_err(|e| CliError::input(path, e))?
        }
        None => analyze_pdf(&bytes, layout).map_err(|e| CliError::input(pdf, e))?,
    };
    let passages: Vec<structpass::retrieval::Passage> = spans
        .passages
        .iter()
        .map(|s| structpass::retrieval::Passage {
            start: s.start,
            end: s.end,
            score: 0,
            matched: Vec::new(),
            section: None,
            provenance: None,
        })
        .collect();
    highlight_pdf(&bytes, &result.text, &passages, color, style).map_err(|e| CliError::input(pdf, e))
}

pub struct EvalOutput {
    pub report: Report,
    pub raw_csv: String,
}

pub fn cmd_eval(csv: &Path, systems: Option<&[String]>) -> CliResult<EvalOutput> {
    let bytes = read_file(csv)?;
    let file = load_judgments(bytes.as_slice()).map_err(|e| CliError::input(csv, e))?;
    let mut report = compare_systems(&file.judgments, systems).map_err(|e| CliError::input(csv, e))?;
    report.warnings = file.warnings;
    let raw_csv = raw_scores_csv(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(EvalOutput { report, raw_csv })
}

fn layout_notes(layout: &LayoutResult) -> Vec<String> {
    let m = &layout.metrics;
    let d = &layout.diagnostics;
    let columns: Vec<String> = m.columns_per_page.iter().map(|c| c.len().to_string()).collect();
    let mut notes = vec![format!(
        "{} glyphs on {} pages, {:?}, columns per page [{}]",
        layout.text.glyphs().len(),
        layout.text.pages().len(),
        m.orientation,
        columns.join(",")
    )];
    if d.orientation_defaulted {
        notes.push("too few glyph pairs to detect reading direction; assumed left-to-right".into());
    }
    if d.rotated_dropped > 0 {
        notes.push(format!("{} rotated glyphs ignored", d.rotated_dropped));
    }
    if d.duplicates_removed > 0 {
        notes.push(format!("{} overprinted glyphs removed", d.duplicates_removed));
    }
    notes
}

fn structure_notes(a: &StructureAnalysis) -> Vec<String> {
    let mut notes = vec![format!(
        "{} header candidates, {} explicit and {} implicit matches",
        a.candidates.len(),
        a.state.explicit_count,
        a.state.implicit_count
    )];
    for c in &a.candidates {
        let target = c.matched.map_or("-".to_owned(), |s| s.to_string());
        notes.push(format!("  {:>6}  {:<14} {}", c.offset, target, c.raw_text));
    }
    notes
}
