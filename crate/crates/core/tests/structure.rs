use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use structpass::fixture::corpus::{random_paper, render, NumberingStyle, PaperSpec, SectionSpec};
use structpass::layout::{analyze_pdf, LayoutConfig};
use structpass::structure::{analyze_structure, check_fallback, MatchKind, StructureConfig, TargetSection};

use TargetSection::*;

fn spec(numbering: NumberingStyle, sections: &[(&str, Option<TargetSection>)]) -> PaperSpec {
    PaperSpec {
        title: "Adaptive Caches for Shared Storage".into(),
        authors: "A. Writer, Some University".into(),
        columns: 1,
        numbering,
        sections: sections
            .iter()
            .map(|(h, e)| SectionSpec {
                header: (*h).into(),
                expected: *e,
                numbered: *h != "ABSTRACT" && *h != "REFERENCES",
                paragraphs: vec!["The cache stores each block. A small table tracks the log.".into()],
            })
            .collect(),
    }
}

#[test]
fn planted_headers_are_recovered_on_a_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let config = StructureConfig::shipped();
    let (mut right, mut planted) = (0, 0);
    for _ in 0..20 {
        let paper = random_paper(&mut rng);
        let layout = analyze_pdf(&paper.pdf.bytes, &LayoutConfig::default()).unwrap();
        let a = analyze_structure(&layout.text, &config);
        for h in paper.headers.iter().filter(|h| h.expected.is_some()) {
            planted += 1;
            let got = a.candidates.iter().find(|c| c.raw_text == h.line).and_then(|c| c.matched);
            if got == h.expected {
                right += 1;
            }
        }
        let spans = a.map.all_spans();
        assert!(spans.windows(2).all(|w| w[0].1.end <= w[1].1.start));
        assert!(spans.iter().all(|(_, s)| s.start < s.end && s.end <= layout.text.len()));
    }
    assert!(right * 100 >= planted * 95, "{right}/{planted}");
}

#[test]
fn roman_numbering_and_summary_variant() {
    let paper = render(&spec(
        NumberingStyle::Roman,
        &[
            ("ABSTRACT", Some(Abstract)),
            ("INTRODUCTION", Some(Introduction)),
            ("RELATED WORK", Some(RelatedWork)),
            ("EXPERIMENTS", Some(Evaluation)),
            ("SUMMARY", Some(Conclusion)),
            ("REFERENCES", None),
        ],
    ));
    let layout = analyze_pdf(&paper.pdf.bytes, &LayoutConfig::default()).unwrap();
    let a = analyze_structure(&layout.text, &StructureConfig::shipped());
    let got: Vec<(&str, Option<TargetSection>)> = a.candidates.iter().map(|c| (c.raw_text.as_str(), c.matched)).collect();
    assert_eq!(
        got,
        vec![
            ("ABSTRACT", Some(Abstract)),
            ("I. INTRODUCTION", Some(Introduction)),
            ("II. RELATED WORK", Some(RelatedWork)),
            ("III. EXPERIMENTS", Some(Evaluation)),
            ("IV. SUMMARY", Some(Conclusion)),
            ("REFERENCES", None),
        ]
    );
}

#[test]
fn unknown_header_between_anchors_is_inferred() {
    let paper = render(&spec(
        NumberingStyle::Arabic,
        &[
            ("INTRODUCTION", Some(Introduction)),
            ("THREAT MODEL", Some(Implementation)),
            ("EVALUATION", Some(Evaluation)),
            ("CONCLUSION", Some(Conclusion)),
        ],
    ));
    let layout = analyze_pdf(&paper.pdf.bytes, &LayoutConfig::default()).unwrap();
    let a = analyze_structure(&layout.text, &StructureConfig::shipped());
    let threat = a.candidates.iter().find(|c| c.raw_text == "2 THREAT MODEL").unwrap();
    assert_eq!(threat.matched, Some(Implementation));
    assert_eq!(threat.match_kind, MatchKind::Implicit);
    assert_eq!(a.state.explicit_count, 3);
    assert_eq!(a.state.implicit_count, 1);
}

#[test]
fn user_config_replaces_phrases() {
    let config = StructureConfig::from_toml(
        r#"
        inherit_defaults = false
        fallback_ratio = 1.0
        [equivalence]
        "threat model" = "implementation"
        "#,
    )
    .unwrap();
    let paper = render(&spec(
        NumberingStyle::None,
        &[("OVERVIEW", None), ("EVALUATION", Some(Evaluation)), ("THREAT MODEL", Some(Implementation))],
    ));
    let layout = analyze_pdf(&paper.pdf.bytes, &LayoutConfig::default()).unwrap();
    let a = analyze_structure(&layout.text, &config);
    let matched: Vec<_> = a.candidates.iter().map(|c| c.matched).collect();
    // Shipped variants are gone; section names themselves always match.
    assert_eq!(matched, vec![None, Some(Evaluation), Some(Implementation)]);
    let wanted: BTreeSet<_> = [Implementation, Evaluation, Conclusion].into();
    assert!(check_fallback(&a.state, &a.map, &wanted, config.fallback_ratio));
    assert!(!check_fallback(&a.state, &a.map, &[Implementation].into(), config.fallback_ratio));
}

#[test]
fn mixed_case_headings_are_not_candidates() {
    let paper = render(&spec(NumberingStyle::None, &[("Introduction", None), ("Evaluation", None)]));
    let layout = analyze_pdf(&paper.pdf.bytes, &LayoutConfig::default()).unwrap();
    let a = analyze_structure(&layout.text, &StructureConfig::shipped());
    assert!(a.candidates.is_empty());
    assert!(a.map.is_empty());
    assert!(check_fallback(&a.state, &a.map, &[Evaluation].into(), 0.5));
}
