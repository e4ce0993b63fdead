mod common;

use lopdf::{Document, Object};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structpass::fixture::corpus::random_paper;
use structpass::geometry::Rect;
use structpass::highlight::{
    passage_to_quads, write_annotations, AnnotationStyle, Color, HighlightQuad, HighlightSet, WriteMode,
};
use structpass::layout::{analyze_pdf, LayoutConfig, PositionedText};
use structpass::pipeline::{highlight_pdf, passage_quads, search_pdf};
use structpass::retrieval::{Query, Stoplist};
use structpass::structure::StructureConfig;
use structpass::Error;

/// `/QuadPoints` of every highlight annotation, per page, in file order.
fn read_quads(pdf: &[u8]) -> Vec<(usize, Vec<f32>)> {
    let doc = Document::load_mem(pdf).unwrap();
    let mut out = Vec::new();
    for (page, id) in doc.page_iter().enumerate() {
        let dict = doc.get_dictionary(id).unwrap();
        let Ok(annots) = dict.get(b"Annots") else { continue };
        let annots = match annots {
            Object::Reference(r) => doc.get_object(*r).unwrap().as_array().unwrap(),
            other => other.as_array().unwrap(),
        };
        for a in annots {
            let a = doc.get_dictionary(a.as_reference().unwrap()).unwrap();
            assert_eq!(a.get(b"Subtype").unwrap().as_name().unwrap(), b"Highlight");
            let qp = a
                .get(b"QuadPoints")
                .unwrap()
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_float().unwrap())
                .collect();
            out.push((page, qp));
        }
    }
    out
}

fn contains(outer: &Rect, inner: &Rect) -> bool {
    outer.x0 <= inner.x0 + 1e-9 && outer.y0 <= inner.y0 + 1e-9 && outer.x1 >= inner.x1 - 1e-9 && outer.y1 >= inner.y1 - 1e-9
}

/// Checks that `set` covers exactly the glyphs mapped inside its span and
/// that every covered glyph lies inside its quad.
fn covers_exactly(set: &HighlightSet, doc: &PositionedText) {
    let expected: Vec<usize> = doc
        .glyph_offsets()
        .iter()
        .copied()
        .filter(|o| (set.start..set.end).contains(o))
        .collect();
    assert_eq!(set.covered_offsets(doc), expected);
    for q in &set.quads {
        for o in q.first_offset..=q.last_offset {
            if let Some(g) = doc.glyph_at(o) {
                let glyph = &doc.glyphs()[g];
                assert_eq!(glyph.page, q.page);
                let media = doc.pages()[q.page];
                assert!(contains(&q.bounds(), &glyph.bbox.clamp_to(&media)), "{o}");
            }
        }
    }
}

fn round_trip(pdf: &[u8], sets: &[HighlightSet], original: &PositionedText) {
    let written = write_annotations(pdf, sets, &AnnotationStyle::default()).unwrap();
    assert_ne!(written.mode, WriteMode::Unchanged);
    let again = analyze_pdf(&written.bytes, &LayoutConfig::default()).unwrap();
    // (a) annotating leaves extraction untouched
    assert_eq!(again.text.text(), original.text());
    assert_eq!(again.text.glyph_offsets(), original.glyph_offsets());
    for set in sets {
        // (b) quads cover exactly the mapped offsets
        covers_exactly(set, original);
        // (c) the annotated file yields the same quads
        assert_eq!(&passage_to_quads(set.start, set.end, &again.text, set.quads[0].color).unwrap(), set);
    }
    let mut flat: Vec<(usize, Vec<f32>)> = Vec::new();
    for set in sets {
        for q in &set.quads {
            let f: Vec<f32> = q.flat().iter().map(|&v| v as f32).collect();
            if !flat.iter().any(|(p, x)| *p == q.page && *x == f) {
                flat.push((q.page, f));
            }
        }
    }
    let mut written_quads: Vec<(usize, Vec<f32>)> = read_quads(&written.bytes)
        .into_iter()
        .flat_map(|(p, v)| v.chunks(8).map(|c| (p, c.to_vec())).collect::<Vec<_>>())
        .collect();
    let key = |a: &(usize, Vec<f32>), b: &(usize, Vec<f32>)| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap());
    written_quads.sort_by(key);
    flat.sort_by(key);
    assert_eq!(written_quads, flat);
}

#[test]
fn search_results_round_trip_on_corpus_papers() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let stop = Stoplist::default();
    for _ in 0..5 {
        let paper = random_paper(&mut rng);
        let query = Query::new("adaptive cache latency", [], &stop).unwrap();
        let found = search_pdf(&paper.pdf.bytes, &query, &LayoutConfig::default(), &StructureConfig::shipped(), &stop)
            .unwrap();
        assert!(!found.result.passages.is_empty());
        let sets = passage_quads(&found.layout.text, &found.result.passages, Color::YELLOW).unwrap();
        round_trip(&paper.pdf.bytes, &sets, &found.layout.text);
        let written = highlight_pdf(
            &paper.pdf.bytes,
            &found.layout.text,
            &found.result.passages,
            Color::YELLOW,
            &AnnotationStyle { appearance: false },
        )
        .unwrap();
        assert!(written.annotations >= 1);
    }
}

#[test]
fn random_spans_round_trip_on_scattered_text() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let f = common::scatter_fixture(&mut rng);
        let r = analyze_pdf(&f.bytes, &LayoutConfig::default()).unwrap();
        let len = r.text.len();
        let mut sets = Vec::new();
        for _ in 0..3 {
            let a = rng.gen_range(0..len);
            let b = rng.gen_range(a + 1..=len);
            if let Ok(set) = passage_to_quads(a, b, &r.text, Color([0.5, 1.0, 0.5])) {
                sets.push(set);
            }
        }
        if !sets.is_empty() {
            round_trip(&f.bytes, &sets, &r.text);
        }
    }
}

#[test]
fn nothing_to_highlight_returns_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let paper = random_paper(&mut rng);
    let w = write_annotations(&paper.pdf.bytes, &[], &AnnotationStyle::default()).unwrap();
    assert_eq!(w.mode, WriteMode::Unchanged);
    assert_eq!(w.bytes, paper.pdf.bytes);
}

#[test]
fn quad_outside_media_box_is_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let paper = random_paper(&mut rng);
    let quad = |page, r| HighlightSet {
        start: 0,
        end: 1,
        quads: vec![HighlightQuad::from_rect(page, r, Color::YELLOW, 0, 0)],
    };
    let outside = quad(0, Rect::new(600.0, 10.0, 640.0, 20.0));
    assert!(matches!(
        write_annotations(&paper.pdf.bytes, &[outside], &AnnotationStyle::default()),
        Err(Error::Geometry { page: 0, .. })
    ));
    let missing_page = quad(99, Rect::new(10.0, 10.0, 20.0, 20.0));
    assert!(matches!(
        write_annotations(&paper.pdf.bytes, &[missing_page], &AnnotationStyle::default()),
        Err(Error::Geometry { page: 99, .. })
    ));
}
