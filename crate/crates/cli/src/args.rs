//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use structpass::highlight::Color;
use structpass::layout::LayoutConfig;
use structpass::structure::{parse_section_list, TargetSection};

#[derive(Debug, Parser)]
#[command(
    name = "structpass",
    version,
    about = "Section-aware passage search and highlighting for scholarly PDFs"
)]
pub struct Cli {
    /// Print per-document diagnostics on standard error (repeatable).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write positioned text and the offset map as layout JSON.
    Extract(ExtractArgs),
    /// Detect section headers and write the section map as JSON.
    Sections(SectionsArgs),
    /// Rank sentences against a query, optionally restricted to sections.
    Search(SearchArgs),
    /// Add highlight annotations for a passage JSON file to a PDF.
    Highlight(HighlightArgs),
    /// Score relevance judgments and summarise each system.
    Eval(EvalArgs),
}

/// Comma-separated list of section names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectionList(pub Vec<TargetSection>);

fn section_list(s: &str) -> Result<SectionList, String> {
    parse_section_list(s).map(SectionList).map_err(|e| e.to_string())
}

/// Strictly positive finite number.
pub fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be strictly positive"))
    }
}

/// Number in `(0, 1]`.
pub fn ratio(s: &str) -> Result<f64, String> {
    let v = positive(s)?;
    if v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie in (0, 1]"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct LayoutArgs {
    /// Minimum gutter width, in median word gaps.
    #[arg(long, value_name = "F", value_parser = positive, default_value_t = LayoutConfig::default().column_gap_factor)]
    pub column_gap: f64,
    /// Glyph gaps wider than this many median word gaps become spaces.
    #[arg(long, value_name = "F", value_parser = positive, default_value_t = LayoutConfig::default().word_gap_factor)]
    pub word_gap: f64,
    /// Line advances larger than this many median line spacings start a paragraph.
    #[arg(long, value_name = "F", value_parser = positive, default_value_t = LayoutConfig::default().paragraph_gap_factor)]
    pub paragraph_gap: f64,
}

impl LayoutArgs {
    pub fn config(&self) -> LayoutConfig {
        LayoutConfig {
            column_gap_factor: self.column_gap,
            word_gap_factor: self.word_gap,
            paragraph_gap_factor: self.paragraph_gap,
            ..LayoutConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StructureArgs {
    /// Section config (TOML). Falls back to the shipped table.
    #[arg(long, value_name = "PATH", env = "STRUCTPASS_CONFIG")]
    pub config: Option<PathBuf>,
    /// Sections to restrict to, e.g. `evaluation,related-work`.
    #[arg(long, value_name = "a,b,c", value_parser = section_list)]
    pub sections: Option<SectionList>,
    /// Share of requested sections that must be detected before filtering applies.
    #[arg(long, value_name = "F", value_parser = ratio)]
    pub fallback_ratio: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    /// PDF files.
    #[arg(required = true, value_name = "PDF")]
    pub inputs: Vec<PathBuf>,
    /// Output file, or directory when several inputs are given.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub layout: LayoutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SectionsArgs {
    /// PDF files or layout JSON files.
    #[arg(required = true, value_name = "INPUT")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub layout: LayoutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// PDF files or layout JSON files.
    #[arg(required = true, value_name = "INPUT")]
    pub inputs: Vec<PathBuf>,
    /// Free-text query; stopwords are dropped and terms stemmed.
    #[arg(long, short)]
    pub query: String,
    /// Section map JSON from `sections`, used instead of detecting headers.
    #[arg(long, value_name = "PATH")]
    pub sections_map: Option<PathBuf>,
    /// Stopword list, one word per line.
    #[arg(long, value_name = "PATH")]
    pub stoplist: Option<PathBuf>,
    /// Fewest distinct query terms a sentence must contain.
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_score: u64,
    /// Passage JSON output file, or directory when several inputs are given.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Print passage JSON on standard output instead of a listing.
    #[arg(long)]
    pub json: bool,
    /// Do not write a highlighted PDF.
    #[arg(long)]
    pub no_highlight: bool,
    /// Highlighted PDF path (directory for several inputs). Defaults to
    /// `<stem>.highlighted.pdf` next to the input.
    #[arg(long, value_name = "PATH")]
    pub pdf_out: Option<PathBuf>,
    /// Highlight colour, components in [0, 1].
    #[arg(long, value_name = "R,G,B", default_value = "1,1,0")]
    pub color: Color,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub layout: LayoutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct HighlightArgs {
    #[arg(value_name = "PDF")]
    pub input: PathBuf,
    /// Passage JSON from `search`.
    #[arg(long, value_name = "PATH")]
    pub passages: PathBuf,
    /// Layout JSON of the same PDF; extracted again when omitted.
    #[arg(long, value_name = "PATH")]
    pub layout_json: Option<PathBuf>,
    /// Output PDF. Defaults to `<stem>.highlighted.pdf` next to the input.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "R,G,B", default_value = "1,1,0")]
    pub color: Color,
    /// Omit the appearance streams and leave rendering to the viewer.
    #[arg(long)]
    pub no_appearance: bool,
    #[command(flatten)]
    pub layout: LayoutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Judgment CSV with columns topic,system,e,s.
    #[arg(value_name = "CSV")]
    pub input: PathBuf,
    /// Systems that must all be present, e.g. `baseline,sectioned`.
    #[arg(long, value_name = "a,b", value_delimiter = ',')]
    pub systems: Option<Vec<String>>,
    /// Report JSON output file.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Per-judgment scores as CSV.
    #[arg(long, value_name = "PATH")]
    pub raw_out: Option<PathBuf>,
    /// Print report JSON on standard output instead of a table.
    #[arg(long)]
    pub json: bool,
}
