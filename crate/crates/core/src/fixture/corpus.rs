//! Synthetic scholarly papers with planted section headers.
//!
//! A [`PaperSpec`] lists sections with their header text and the target
//! section a correct detector should assign. [`render`] lays the paper out
//! in one or two columns on letter pages; [`random_spec`] draws a plausible
//! paper with header variants, numbering styles and unmatched headers.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{FixtureBuilder, FixturePdf, PageSpec};
use crate::layout::fonts::helvetica_text_width;
use crate::structure::TargetSection;

const MARGIN: f64 = 72.0;
const TOP: f64 = 720.0;
const GUTTER: f64 = 24.0;
const BODY_SIZE: f64 = 10.0;
const BODY_LEADING: f64 = 12.0;
const HEADER_SIZE: f64 = 11.0;
const TITLE_SIZE: f64 = 16.0;
const PARAGRAPH_GAP: f64 = 8.0;
const SECTION_GAP: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberingStyle {
    None,
    /// `1 INTRODUCTION`
    Arabic,
    /// `1. INTRODUCTION`
    ArabicDot,
    /// `I. INTRODUCTION`
    Roman,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionSpec {
    /// Header text without numbering.
    pub header: String,
    /// Section a correct detector assigns; `None` for headers that must stay
    /// unmatched.
    pub expected: Option<TargetSection>,
    pub numbered: bool,
    pub paragraphs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperSpec {
    pub title: String,
    pub authors: String,
    pub columns: usize,
    pub numbering: NumberingStyle,
    pub sections: Vec<SectionSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedHeader {
    /// The header line as rendered, numbering included.
    pub line: String,
    pub expected: Option<TargetSection>,
}

#[derive(Debug, Clone)]
pub struct GeneratedPaper {
    pub pdf: FixturePdf,
    pub headers: Vec<PlantedHeader>,
    pub spec: PaperSpec,
}

fn to_roman(n: usize) -> &'static str {
    ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"][n - 1]
}

fn header_line(style: NumberingStyle, number: usize, text: &str) -> String {
    match style {
        NumberingStyle::None => text.to_owned(),
        NumberingStyle::Arabic => format!("{number} {text}"),
        NumberingStyle::ArabicDot => format!("{number}. {text}"),
        NumberingStyle::Roman => format!("{}. {text}", to_roman(number)),
    }
}

/// Greedy word wrap to `width` points.
pub fn wrap(text: &str, size: f64, width: f64) -> Vec<String> {
    let mut lines = Vec::new();
    let mut current = String::new();
    for word in text.split_whitespace() {
        let candidate = if current.is_empty() {
            word.to_owned()
        } else {
            format!("{current} {word}")
        };
        if !current.is_empty() && helvetica_text_width(&candidate, size) > width {
            lines.push(std::mem::replace(&mut current, word.to_owned()));
        } else {
            current = candidate;
        }
    }
    if !current.is_empty() {
        lines.push(current);
    }
    lines
}

struct Flow {
    builder: FixtureBuilder,
    columns: usize,
    column: usize,
    y: f64,
    top: f64,
}

impl Flow {
    fn column_width(&self) -> f64 {
        let usable = PageSpec::letter().width - 2.0 * MARGIN;
        (usable - GUTTER * (self.columns as f64 - 1.0)) / self.columns as f64
    }

    fn column_x(&self) -> f64 {
        MARGIN + self.column as f64 * (self.column_width() + GUTTER)
    }

    /// Moves down by `advance`, breaking to the next column or page when the
    /// line would fall below the bottom margin.
    fn advance(&mut self, advance: f64) {
        self.y -= advance;
        if self.y < MARGIN {
            self.column += 1;
            if self.column == self.columns {
                self.column = 0;
                self.builder.page(PageSpec::letter());
                self.top = TOP;
            }
            self.y = self.top;
        }
    }

    fn line(&mut self, size: f64, leading: f64, text: &str) {
        let (x, y) = (self.column_x(), self.y);
        let page = self.builder.page_count() - 1;
        self.builder.page_mut(page).text(x, y, size, text);
        self.advance(leading);
    }

    fn gap(&mut self, gap: f64) {
        if self.y < self.top {
            self.advance(gap);
        }
    }
}

/// Lays out `spec` and records the rendered header lines.
pub fn render(spec: &PaperSpec) -> GeneratedPaper {
    let mut builder = FixtureBuilder::new();
    builder.page(PageSpec::letter());
    let full_width = PageSpec::letter().width - 2.0 * MARGIN;

    let mut y = TOP;
    for line in wrap(&spec.title, TITLE_SIZE, full_width) {
        builder.page_mut(0).text(MARGIN, y, TITLE_SIZE, &line);
        y -= TITLE_SIZE * 1.25;
    }
    builder.page_mut(0).text(MARGIN, y, BODY_SIZE, &spec.authors);
    y -= 2.0 * BODY_LEADING + SECTION_GAP;

    let mut flow = Flow {
        builder,
        columns: spec.columns.max(1),
        column: 0,
        y,
        top: y,
    };
    let mut headers = Vec::new();
    let mut number = 0;
    for section in &spec.sections {
        let line = if section.numbered {
            number += 1;
            header_line(spec.numbering, number, &section.header)
        } else {
            section.header.clone()
        };
        flow.gap(SECTION_GAP);
        flow.line(HEADER_SIZE, HEADER_SIZE + 4.0, &line);
        headers.push(PlantedHeader {
            line,
            expected: section.expected,
        });
        for (i, paragraph) in section.paragraphs.iter().enumerate() {
            if i > 0 {
                flow.gap(PARAGRAPH_GAP);
            }
            for l in wrap(paragraph, BODY_SIZE, flow.column_width()) {
                flow.line(BODY_SIZE, BODY_LEADING, &l);
            }
        }
    }
    GeneratedPaper {
        pdf: flow.builder.build(),
        headers,
        spec: spec.clone(),
    }
}

const NOUNS: &[&str] = &[
    "cache", "latency", "throughput", "scheduler", "buffer", "query", "index", "workload",
    "partition", "replica", "network", "storage", "memory", "kernel", "request", "thread",
    "compiler", "model", "graph", "vector", "stream", "batch", "cluster", "node", "server",
    "client", "protocol", "update", "version", "record", "table", "log", "sample", "trace",
    "policy", "budget", "signal", "channel", "packet", "route", "layer", "module", "object",
    "field", "block", "segment", "region", "window", "counter", "queue", "lock", "heap",
];
const ADJECTIVES: &[&str] = &[
    "adaptive", "shared", "local", "remote", "static", "dynamic", "sparse", "dense", "stable",
    "fast", "small", "large", "parallel", "lazy", "eager", "compact", "robust", "simple",
];
const VERBS: &[&str] = &[
    "improves", "reduces", "tracks", "stores", "balances", "shares", "limits", "adapts",
    "merges", "splits", "reuses", "bounds", "predicts", "schedules", "filters", "groups",
];
const OPENERS: &[&str] = &["The", "Each", "Our", "This", "A", "Every"];

fn pick<'a, R: Rng + ?Sized>(rng: &mut R, words: &'a [&'a str]) -> &'a str {
    words.choose(rng).expect("non-empty word list")
}

/// One sentence of filler prose: capitalised, lowercase otherwise, ending
/// in a period.
pub fn sentence<R: Rng + ?Sized>(rng: &mut R) -> String {
    let mut words = vec![
        pick(rng, OPENERS).to_owned(),
        pick(rng, ADJECTIVES).to_owned(),
        pick(rng, NOUNS).to_owned(),
        pick(rng, VERBS).to_owned(),
        "the".to_owned(),
        pick(rng, NOUNS).to_owned(),
    ];
    for _ in 0..rng.gen_range(0..3) {
        match rng.gen_range(0..3) {
            0 => words.extend(["of", "the", pick(rng, ADJECTIVES), pick(rng, NOUNS)].map(String::from)),
            1 => words.extend(["by", &rng.gen_range(2..99).to_string(), "percent"].map(String::from)),
            _ => words.extend(["and", pick(rng, VERBS), "each", pick(rng, NOUNS)].map(String::from)),
        }
    }
    let mut s = words.join(" ");
    s.push('.');
    s
}

pub fn paragraph<R: Rng + ?Sized>(rng: &mut R, sentences: usize) -> String {
    (0..sentences).map(|_| sentence(rng)).collect::<Vec<_>>().join(" ")
}

fn body<R: Rng + ?Sized>(rng: &mut R) -> Vec<String> {
    let n = rng.gen_range(1..=2);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(2..=4);
            paragraph(rng, k)
        })
        .collect()
}

fn section<R: Rng + ?Sized>(
    rng: &mut R,
    variants: &[&str],
    expected: Option<TargetSection>,
    numbered: bool,
) -> SectionSpec {
    SectionSpec {
        header: pick(rng, variants).to_owned(),
        expected,
        numbered,
        paragraphs: body(rng),
    }
}

/// Draws a random paper layout: one or two columns, a numbering style,
/// header variants for each section, optional related and future work, and
/// headers that only the ordering rules can place.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R) -> PaperSpec {
    use TargetSection::*;
    let numbering = *[
        NumberingStyle::None,
        NumberingStyle::Arabic,
        NumberingStyle::ArabicDot,
        NumberingStyle::Roman,
    ]
    .choose(rng)
    .expect("non-empty");
    let numbered = numbering != NumberingStyle::None;

    let mut sections = vec![section(rng, &["ABSTRACT"], Some(Abstract), false)];
    sections.push(section(rng, &["INTRODUCTION", "OVERVIEW"], Some(Introduction), numbered));
    if rng.gen_bool(0.7) {
        sections.push(section(
            rng,
            &[
                "RELATED WORK",
                "BACKGROUND",
                "PRIOR WORK",
                "RELATED WORKS",
                "BACKGROUND AND RELATED WORK",
            ],
            Some(RelatedWork),
            numbered,
        ));
    }
    let implicit_design = rng.gen_bool(0.5).then(|| {
        section(
            rng,
            &["THREAT MODEL", "SYSTEM MODEL", "PROBLEM STATEMENT", "OUR SYSTEM"],
            Some(Implementation),
            numbered,
        )
    });
    let explicit_design = section(
        rng,
        &[
            "IMPLEMENTATION",
            "DESIGN",
            "ARCHITECTURE",
            "SYSTEM DESIGN",
            "DESIGN AND IMPLEMENTATION",
            "METHODOLOGY",
        ],
        Some(Implementation),
        numbered,
    );
    match implicit_design {
        Some(extra) if rng.gen_bool(0.5) => sections.extend([extra, explicit_design]),
        Some(extra) => sections.extend([explicit_design, extra]),
        None => sections.push(explicit_design),
    }
    sections.push(section(
        rng,
        &[
            "EVALUATION",
            "EXPERIMENTAL RESULTS",
            "EXPERIMENTS",
            "RESULTS",
            "EXPERIMENTAL EVALUATION",
            "PERFORMANCE EVALUATION",
        ],
        Some(Evaluation),
        numbered,
    ));
    if rng.gen_bool(0.4) {
        sections.push(section(rng, &["DISCUSSION", "LIMITATIONS"], Some(Evaluation), numbered));
    }
    sections.push(section(
        rng,
        &[
            "CONCLUSION",
            "CONCLUSIONS",
            "SUMMARY",
            "CONCLUDING REMARKS",
            "CONCLUSION AND FUTURE WORK",
        ],
        Some(Conclusion),
        numbered,
    ));
    if rng.gen_bool(0.3) {
        sections.push(section(rng, &["FUTURE WORK", "FUTURE DIRECTIONS"], Some(FutureWork), numbered));
    }
    if rng.gen_bool(0.5) {
        sections.push(section(rng, &["ACKNOWLEDGMENTS"], None, false));
    }
    sections.push(SectionSpec {
        header: "REFERENCES".into(),
        expected: None,
        numbered: false,
        paragraphs: (1..=rng.gen_range(2..=4))
            .map(|i| format!("[{i}] Author Name. A paper about {}. Proc. Venue, 20{:02}.", pick(rng, NOUNS), rng.gen_range(0..24)))
            .collect(),
    });

    let title = format!(
        "{} {} for {} {} Systems",
        capitalise(pick(rng, ADJECTIVES)),
        capitalise(pick(rng, NOUNS)),
        capitalise(pick(rng, ADJECTIVES)),
        capitalise(pick(rng, NOUNS)),
    );
    PaperSpec {
        title,
        authors: "Alex Example and Sam Sample, Example University".into(),
        columns: rng.gen_range(1..=2),
        numbering,
        sections,
    }
}

fn capitalise(word: &str) -> String {
    let mut c = word.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

pub fn random_paper<R: Rng + ?Sized>(rng: &mut R) -> GeneratedPaper {
    render(&random_spec(rng))
}
