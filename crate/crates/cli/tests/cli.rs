use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use structpass::fixture::corpus::{paragraph, render, NumberingStyle, PaperSpec, SectionSpec};
use structpass::fixture::{FixtureBuilder, PageSpec};
use structpass::structure::TargetSection;
use tempfile::TempDir;

const PLANTED: &str = "We report the evaluation metric for each run.";

fn structpass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_structpass"))
        .args(args)
        .env_remove("STRUCTPASS_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn section(header: &str, expected: Option<TargetSection>, paragraphs: Vec<String>) -> SectionSpec {
    SectionSpec {
        header: header.into(),
        expected,
        numbered: true,
        paragraphs,
    }
}

/// A paper whose only mention of the query sits in its evaluation section.
fn planted_paper(dir: &Path) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut filler = || vec![paragraph(&mut rng, 3)];
    let mut results = filler();
    results[0].push(' ');
    results[0].push_str(PLANTED);
    let spec = PaperSpec {
        title: "Adaptive Caches for Shared Storage".into(),
        authors: "A. Writer, Some University".into(),
        columns: 1,
        numbering: NumberingStyle::Arabic,
        sections: vec![
            section("INTRODUCTION", Some(TargetSection::Introduction), filler()),
            section("RELATED WORK", Some(TargetSection::RelatedWork), filler()),
            section("DESIGN", Some(TargetSection::Implementation), filler()),
            section("EXPERIMENTAL RESULTS", Some(TargetSection::Evaluation), results),
            section("CONCLUSION", Some(TargetSection::Conclusion), filler()),
        ],
    };
    let path = dir.join("planted.pdf");
    std::fs::write(&path, render(&spec).pdf.bytes).unwrap();
    path
}

/// Mixed-case headings only, so no header candidate is found.
fn headerless_paper(dir: &Path) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut filler = || vec![paragraph(&mut rng, 3)];
    let mut body = filler();
    body[0].push(' ');
    body[0].push_str(PLANTED);
    let spec = PaperSpec {
        title: "Adaptive Caches for Shared Storage".into(),
        authors: "A. Writer, Some University".into(),
        columns: 1,
        numbering: NumberingStyle::None,
        sections: vec![
            section("Introduction", None, filler()),
            section("Results", None, body),
            section("Closing remarks", None, filler()),
        ],
    };
    let path = dir.join("headerless.pdf");
    std::fs::write(&path, render(&spec).pdf.bytes).unwrap();
    path
}

#[test]
fn extract_writes_layout_json() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let v = json(&structpass(&["extract", p(&pdf)]));
    for key in ["text", "glyphs", "offset_map", "pages", "metrics"] {
        assert!(v.get(key).is_some(), "missing {key}: {:?}", v.as_object().unwrap().keys().collect::<Vec<_>>());
    }
    assert!(v["text"].as_str().unwrap().contains("EXPERIMENTAL RESULTS"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = structpass(&["extract", "/nonexistent/paper.pdf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no such file"), "{}", stderr(&o));
}

#[test]
fn encrypted_pdf_is_unsupported() {
    let dir = TempDir::new().unwrap();
    let mut b = FixtureBuilder::new();
    b.page(PageSpec::letter()).text(72.0, 700.0, 10.0, "Secret text");
    b.encrypted(true);
    let path = dir.path().join("locked.pdf");
    std::fs::write(&path, b.build().bytes).unwrap();
    let o = structpass(&["extract", p(&path)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn section_filter_keeps_only_requested_sections() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let q = "evaluation metric";
    let v = json(&structpass(&["search", p(&pdf), "-q", q, "--sections", "evaluation", "--json", "--no-highlight"]));
    assert_eq!(v["fallback"], false);
    let passages = v["passages"].as_array().unwrap();
    assert_eq!(passages.len(), 1);
    assert_eq!(passages[0]["text"].as_str().unwrap().replace('\n', " "), PLANTED);
    assert_eq!(passages[0]["section"], "evaluation");
    assert_eq!(passages[0]["score"], 2);

    let v = json(&structpass(&["search", p(&pdf), "-q", q, "--sections", "related-work", "--json", "--no-highlight"]));
    assert_eq!(v["fallback"], false);
    assert_eq!(v["no_match"], true);
    assert!(v["passages"].as_array().unwrap().is_empty());
}

#[test]
fn undetected_sections_fall_back_to_unfiltered_results() {
    let dir = TempDir::new().unwrap();
    let pdf = headerless_paper(dir.path());
    let q = "evaluation metric";
    let filtered = structpass(&["search", p(&pdf), "-q", q, "--sections", "evaluation", "--json", "--no-highlight"]);
    let plain = structpass(&["search", p(&pdf), "-q", q, "--json", "--no-highlight"]);
    let (f, u) = (json(&filtered), json(&plain));
    assert_eq!(f["fallback"], true);
    assert_eq!(f["passages"], u["passages"]);
    assert_eq!(f["passages"].as_array().unwrap().len(), 1);
}

#[test]
fn stopword_only_query_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let o = structpass(&["search", p(&pdf), "-q", "the of and", "--no-highlight"]);
    assert_eq!(o.status.code(), Some(2));
    let o = structpass(&["search", p(&pdf), "-q", "", "--no-highlight"]);
    assert_eq!(o.status.code(), Some(2));
    let o = structpass(&["search", p(&pdf), "-q", "cache", "--min-score", "0", "--no-highlight"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn min_score_keeps_sentences_with_enough_terms() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let v = json(&structpass(&["search", p(&pdf), "-q", "evaluation metric cache", "--min-score", "2", "--json", "--no-highlight"]));
    let passages = v["passages"].as_array().unwrap();
    assert!(!passages.is_empty());
    assert!(passages.iter().all(|p| p["score"].as_u64().unwrap() >= 2));
}

#[test]
fn staged_commands_match_direct_search() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let layout = dir.path().join("planted.layout.json");
    let sections = dir.path().join("planted.sections.json");
    assert_eq!(structpass(&["extract", p(&pdf), "--out", p(&layout)]).status.code(), Some(0));
    let o = structpass(&["sections", p(&layout), "--out", p(&sections)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: Value = serde_json::from_slice(&std::fs::read(&sections).unwrap()).unwrap();
    assert!(s["sections"]["evaluation"].is_array());

    let args = ["-q", "adaptive cache metric", "--sections", "evaluation,introduction", "--json", "--no-highlight"];
    let staged = structpass(&[&["search", p(&layout), "--sections-map", p(&sections)][..], &args].concat());
    let direct = structpass(&[&["search", p(&pdf)][..], &args].concat());
    assert_eq!(json(&staged), json(&direct));
    assert_eq!(staged.stdout, direct.stdout);
}

#[test]
fn search_writes_highlighted_pdf_beside_input() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let o = structpass(&["search", p(&pdf), "-q", "evaluation metric", "-v"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("1 passages"), "{}", stdout(&o));
    let out = dir.path().join("planted.highlighted.pdf");
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.windows(b"/Highlight".len()).any(|w| w == b"/Highlight"));
}

#[test]
fn highlight_subcommand_reads_passage_json() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let passages = dir.path().join("p.json");
    let o = structpass(&["search", p(&pdf), "-q", "cache", "--no-highlight", "--out", p(&passages)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("marked.pdf");
    let o = structpass(&["highlight", p(&pdf), "--passages", p(&passages), "--out", p(&out), "--color", "0,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let before = json(&structpass(&["extract", p(&pdf)]));
    let after = json(&structpass(&["extract", p(&out)]));
    assert_eq!(before["text"], after["text"]);

    let o = structpass(&["highlight", p(&pdf), "--passages", p(&passages)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("planted.highlighted.pdf").exists());
}

#[test]
fn bad_color_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let o = structpass(&["search", p(&pdf), "-q", "cache", "--color", "2,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_reports_each_system() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("j.csv");
    let mut text = String::from("topic,system,e,s\n");
    for e in 0..4 {
        for s in 0..4 {
            text.push_str(&format!("t,all,{e},{s}\n"));
        }
    }
    std::fs::write(&csv, &text).unwrap();
    let raw = dir.path().join("raw.csv");
    let v = json(&structpass(&["eval", p(&csv), "--json", "--raw-out", p(&raw)]));
    assert_eq!(v["systems"]["all"]["mean"].as_f64().unwrap(), 5.25 / 16.0);
    assert_eq!(std::fs::read_to_string(&raw).unwrap().lines().count(), 17);

    let table = structpass(&["eval", p(&csv)]);
    assert!(stdout(&table).contains("all"));

    std::fs::write(&csv, "topic,system,e,s\n").unwrap();
    let o = structpass(&["eval", p(&csv)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least one value"), "{}", stderr(&o));

    std::fs::write(&csv, "topic,system,e,s\nt,A,1,1\nt,A,4,1\n").unwrap();
    let o = structpass(&["eval", p(&csv)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn config_path_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let pdf = planted_paper(dir.path());
    let config = dir.path().join("sections.toml");
    std::fs::write(&config, "inherit_defaults = false\n[equivalence]\n\"design\" = \"conclusion\"\n").unwrap();
    let run = |env: bool| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_structpass"));
        c.args(["sections", p(&pdf)]).env_remove("STRUCTPASS_CONFIG");
        if env {
            c.env("STRUCTPASS_CONFIG", &config);
        }
        json(&c.output().unwrap())
    };
    let matched = |v: &Value| {
        v["candidates"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["raw_text"] == "3 DESIGN")
            .unwrap()["matched"]
            .clone()
    };
    assert_eq!(matched(&run(true)), "conclusion");
    assert_ne!(matched(&run(false)), "conclusion");

    std::fs::write(&config, "fallback_ratio = 3.0\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_structpass"))
        .args(["sections", p(&pdf)])
        .env("STRUCTPASS_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn several_inputs_write_one_file_each() {
    let dir = TempDir::new().unwrap();
    let a = planted_paper(dir.path());
    let b = headerless_paper(dir.path());
    let out = dir.path().join("out");
    let o = structpass(&["search", p(&a), p(&b), "-q", "evaluation metric", "--out", p(&out), "--no-highlight"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for stem in ["planted", "headerless"] {
        let v: Value = serde_json::from_slice(&std::fs::read(out.join(format!("{stem}.passages.json"))).unwrap()).unwrap();
        assert_eq!(v["passages"].as_array().unwrap().len(), 1);
    }
    let o = structpass(&["search", p(&a), p(&b), "-q", "cache", "--json"]);
    assert_eq!(o.status.code(), Some(2));

    let missing = dir.path().join("gone.pdf");
    let o = structpass(&["extract", p(&a), p(&missing), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(out.join("planted.layout.json").exists());
}
