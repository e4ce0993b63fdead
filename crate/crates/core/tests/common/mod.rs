#![allow(dead_code)]

use rand::Rng;
use structpass::fixture::{FixtureBuilder, FixturePdf, PageSpec};
use structpass::layout::{Glyph, PositionedText};

const WORD_CHARS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.,;:()-";

fn word<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..=9);
    (0..n)
        .map(|_| WORD_CHARS[rng.gen_range(0..WORD_CHARS.len())] as char)
        .collect()
}

/// Lines of random words at random positions on one to three pages. Lines
/// never share a baseline band, so no two glyphs overlap.
pub fn scatter_fixture<R: Rng>(rng: &mut R) -> FixturePdf {
    let mut b = FixtureBuilder::new();
    for _ in 0..rng.gen_range(1..=3) {
        let page = b.page(PageSpec::letter());
        let mut y = 740.0;
        for _ in 0..rng.gen_range(1..=14) {
            let size = rng.gen_range(7.0..14.0f64).round();
            y -= size * rng.gen_range(1.3..3.0);
            if y < 40.0 {
                break;
            }
            let x = rng.gen_range(36.0..200.0f64).round();
            let words = rng.gen_range(1..=7);
            let text = (0..words).map(|_| word(rng)).collect::<Vec<_>>().join(" ");
            page.text(x, y, size, &text);
        }
    }
    b.build()
}

/// Every glyph and offset agree in both directions, and unmapped offsets
/// hold only separators. Returns the first failure.
pub fn check_bijection(t: &PositionedText) -> Result<(), String> {
    let chars = t.chars();
    for (i, g) in t.glyphs().iter().enumerate() {
        let off = t.offset_of(i);
        if chars.get(off) != Some(&g.ch) {
            return Err(format!("glyph {i} {:?} maps to offset {off} holding {:?}", g.ch, chars.get(off)));
        }
        if t.glyph_at(off) != Some(i) {
            return Err(format!("offset {off} does not map back to glyph {i}"));
        }
    }
    for (off, c) in chars.iter().enumerate() {
        match t.glyph_at(off) {
            Some(g) if t.offset_of(g) != off => return Err(format!("offset {off} -> glyph {g} -> other offset")),
            None if !c.is_whitespace() => return Err(format!("offset {off} holds unmapped {c:?}")),
            _ => {}
        }
    }
    let letters = chars.iter().filter(|c| !c.is_whitespace()).count();
    if letters != t.glyphs().len() {
        return Err(format!("{letters} non-space characters for {} glyphs", t.glyphs().len()));
    }
    Ok(())
}

/// Same glyph multiset up to `tol` points, ignoring order.
pub fn same_glyphs(a: &[Glyph], b: &[Glyph], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("{} glyphs vs {}", a.len(), b.len()));
    }
    let key = |g: &Glyph| (g.page, (g.bbox.y0 * -100.0).round() as i64, (g.bbox.x0 * 100.0).round() as i64, g.ch);
    let mut a: Vec<&Glyph> = a.iter().collect();
    let mut b: Vec<&Glyph> = b.iter().collect();
    a.sort_by_key(|g| key(g));
    b.sort_by_key(|g| key(g));
    for (x, y) in a.iter().zip(&b) {
        let close = (x.bbox.x0 - y.bbox.x0).abs() <= tol
            && (x.bbox.x1 - y.bbox.x1).abs() <= tol
            && (x.bbox.y0 - y.bbox.y0).abs() <= tol
            && (x.bbox.y1 - y.bbox.y1).abs() <= tol;
        if x.ch != y.ch || x.page != y.page || !close {
            return Err(format!("{x:?} != {y:?}"));
        }
    }
    Ok(())
}
