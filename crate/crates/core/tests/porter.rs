use std::collections::BTreeMap;

use proptest::prelude::*;
use structpass::retrieval::stem;

const VOCABULARY: &str = include_str!("data/porter_vocabulary.txt");
const OUTPUT: &str = include_str!("data/porter_output.txt");
const REPORT: &str = include_str!("data/porter_divergences.md");

/// `word -> (reference, ours)` for every disagreement.
fn divergences() -> (usize, BTreeMap<String, (String, String)>) {
    let words: Vec<&str> = VOCABULARY.lines().collect();
    let expected: Vec<&str> = OUTPUT.lines().collect();
    assert_eq!(words.len(), expected.len());
    let mut out = BTreeMap::new();
    for (w, e) in words.iter().zip(&expected) {
        let got = stem(w);
        if got != *e {
            out.insert(w.to_string(), (e.to_string(), got));
        }
    }
    (words.len(), out)
}

/// Rows of the last markdown table in the report.
fn reported() -> BTreeMap<String, (String, String)> {
    let table = REPORT.rsplit("| word |").next().unwrap();
    table
        .lines()
        .skip(2)
        .filter(|l| l.starts_with('|'))
        .map(|l| {
            let cells: Vec<String> = l.trim_matches('|').split('|').map(|c| c.trim().to_string()).collect();
            (cells[0].clone(), (cells[1].clone(), cells[2].clone()))
        })
        .collect()
}

#[test]
fn agreement_with_reference_vocabulary() {
    let (total, diff) = divergences();
    assert!(total > 20_000);
    let agree = total - diff.len();
    assert!(agree * 100 >= total * 99, "{agree}/{total}");
    let claim = format!("{} / {}", fmt_thousands(agree), fmt_thousands(total));
    assert!(REPORT.contains(&claim), "report should state {claim}");
}

fn fmt_thousands(n: usize) -> String {
    let s = n.to_string();
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

#[test]
fn divergence_report_is_current() {
    assert_eq!(divergences().1, reported());
}

#[test]
fn known_stems() {
    for (w, s) in [
        ("decision", "decis"),
        ("trees", "tree"),
        ("caresses", "caress"),
        ("ponies", "poni"),
        ("relational", "relat"),
        ("generalization", "gener"),
        ("is", "is"),
    ] {
        assert_eq!(stem(w), s, "{w}");
    }
}

proptest! {
    #[test]
    fn stemming_is_total_and_never_lengthens(w in "[a-z]{0,20}") {
        let s = stem(&w);
        prop_assert!(s.len() <= w.len());
        prop_assert_eq!(stem(&w), s);
    }
}
