//! Content-stream interpretation: turns text-showing operators into glyphs
//! with page-space bounding boxes.

use std::collections::HashMap;
use std::rc::Rc;

use lopdf::content::Content;
use lopdf::{Dictionary, Document, Encoding, Object, ObjectId};

use super::fonts::StandardFamily;
use super::Glyph;
use crate::error::{Error, Result};
use crate::geometry::{Matrix, Rect};

const MAX_FORM_DEPTH: usize = 8;
const DEFAULT_MEDIA_BOX: Rect = Rect {
    x0: 0.0,
    y0: 0.0,
    x1: 612.0,
    y1: 792.0,
};

/// Glyphs in content-stream order plus the media box of every page.
#[derive(Debug, Clone)]
pub struct ExtractedPdf {
    pub glyphs: Vec<Glyph>,
    pub pages: Vec<Rect>,
}

/// Parses `pdf` and returns one glyph per rendered non-whitespace character.
///
/// Whitespace glyphs advance the pen but are not emitted; separators are
/// re-synthesised from geometry during linearisation.
pub fn extract_glyphs(pdf: &[u8]) -> Result<ExtractedPdf> {
    let doc = load_document(pdf)?;
    let mut glyphs = Vec::new();
    let mut pages = Vec::new();

    for (index, page_id) in doc.page_iter().enumerate() {
        let page = doc
            .get_dictionary(page_id)
            .map_err(|e| Error::parse(object_label(page_id, "page"), e))?;
        pages.push(media_box(&doc, page));

        let resources = inherited_resources(&doc, page);
        let content = doc.get_page_content(page_id);
        let ops = Content::decode(&content).map_err(|e| {
            Error::parse(
                format!("page {} ({}) content stream", index + 1, ref_label(page_id)),
                e,
            )
        })?;

        let mut interp = Interpreter {
            doc: &doc,
            page: index,
            fonts: HashMap::new(),
            out: &mut glyphs,
        };
        interp.run(&ops.operations, resources, Matrix::IDENTITY, 0)?;
    }

    if glyphs.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(ExtractedPdf { glyphs, pages })
}

pub(crate) fn load_document(pdf: &[u8]) -> Result<Document> {
    let doc = Document::load_mem(pdf).map_err(|e| match e {
        lopdf::Error::Decryption(_)
        | lopdf::Error::InvalidPassword
        | lopdf::Error::AlreadyEncrypted => {
            Error::Unsupported(format!("encrypted PDF ({e})"))
        }
        other => Error::parse("document structure", other),
    })?;
    if doc.was_encrypted() || doc.is_encrypted() {
        return Err(Error::Unsupported("encrypted PDF".into()));
    }
    Ok(doc)
}

fn ref_label(id: ObjectId) -> String {
    format!("{} {} R", id.0, id.1)
}

fn object_label(id: ObjectId, what: &str) -> String {
    format!("{what} object {}", ref_label(id))
}

fn number(obj: &Object) -> Option<f64> {
    match obj {
        Object::Integer(i) => Some(*i as f64),
        Object::Real(r) => Some(f64::from(*r)),
        _ => None,
    }
}

fn resolve<'a>(doc: &'a Document, obj: &'a Object) -> &'a Object {
    doc.dereference(obj).map(|(_, o)| o).unwrap_or(obj)
}

fn dict_of<'a>(doc: &'a Document, obj: &'a Object) -> Option<&'a Dictionary> {
    match resolve(doc, obj) {
        Object::Dictionary(d) => Some(d),
        Object::Stream(s) => Some(&s.dict),
        _ => None,
    }
}

fn parent<'a>(doc: &'a Document, node: &'a Dictionary) -> Option<&'a Dictionary> {
    node.get(b"Parent").ok().and_then(|p| dict_of(doc, p))
}

/// Walks the page tree upwards looking for an inheritable attribute.
fn inherited<'a>(doc: &'a Document, page: &'a Dictionary, key: &[u8]) -> Option<&'a Object> {
    let mut node = Some(page);
    let mut depth = 0;
    while let Some(n) = node {
        if let Ok(v) = n.get(key) {
            return Some(resolve(doc, v));
        }
        depth += 1;
        if depth > 64 {
            break;
        }
        node = parent(doc, n);
    }
    None
}

pub(crate) fn media_box(doc: &Document, page: &Dictionary) -> Rect {
    inherited(doc, page, b"MediaBox")
        .and_then(|o| o.as_array().ok())
        .and_then(|a| {
            let v: Vec<f64> = a.iter().filter_map(|o| number(resolve(doc, o))).collect();
            (v.len() == 4).then(|| Rect::new(v[0], v[1], v[2], v[3]))
        })
        .unwrap_or(DEFAULT_MEDIA_BOX)
}

fn inherited_resources<'a>(doc: &'a Document, page: &'a Dictionary) -> Option<&'a Dictionary> {
    inherited(doc, page, b"Resources").and_then(|o| dict_of(doc, o))
}

#[derive(Clone, Copy)]
enum FontKind {
    Simple,
    Composite,
}

struct FontInfo<'a> {
    kind: FontKind,
    encoding: Option<Encoding<'a>>,
    first_char: u32,
    widths: Vec<f64>,
    cid_widths: HashMap<u32, f64>,
    default_width: f64,
    family: StandardFamily,
    /// Glyph-space to text-space scale (1/1000 except for Type 3 fonts).
    scale: f64,
    ascent: f64,
    descent: f64,
}

impl<'a> FontInfo<'a> {
    fn load(doc: &'a Document, font: &'a Dictionary) -> FontInfo<'a> {
        let subtype = font.get(b"Subtype").and_then(Object::as_name).unwrap_or(b"");
        let base = font.get(b"BaseFont").and_then(Object::as_name).unwrap_or(b"");
        let family = StandardFamily::from_base_font(base);
        let encoding = font.get_font_encoding(doc).ok();

        if subtype == b"Type0" {
            let descendant = font
                .get(b"DescendantFonts")
                .ok()
                .map(|o| resolve(doc, o))
                .and_then(|o| o.as_array().ok())
                .and_then(|a| a.first())
                .and_then(|o| dict_of(doc, o));
            let mut cid_widths = HashMap::new();
            let mut default_width = 1000.0;
            let (mut ascent, mut descent) = (880.0, -120.0);
            if let Some(d) = descendant {
                if let Some(dw) = d.get(b"DW").ok().and_then(|o| number(resolve(doc, o))) {
                    default_width = dw;
                }
                if let Ok(w) = d.get(b"W") {
                    if let Ok(arr) = resolve(doc, w).as_array() {
                        parse_cid_widths(doc, arr, &mut cid_widths);
                    }
                }
                if let Some((a, de)) = descriptor_metrics(doc, d) {
                    ascent = a;
                    descent = de;
                }
            }
            return FontInfo {
                kind: FontKind::Composite,
                encoding,
                first_char: 0,
                widths: Vec::new(),
                cid_widths,
                default_width,
                family,
                scale: 0.001,
                ascent,
                descent,
            };
        }

        let first_char = font
            .get(b"FirstChar")
            .ok()
            .and_then(|o| number(resolve(doc, o)))
            .unwrap_or(0.0) as u32;
        let widths: Vec<f64> = font
            .get(b"Widths")
            .ok()
            .map(|o| resolve(doc, o))
            .and_then(|o| o.as_array().ok())
            .map(|a| a.iter().map(|o| number(resolve(doc, o)).unwrap_or(0.0)).collect())
            .unwrap_or_default();
        let descriptor = font.get(b"FontDescriptor").ok().and_then(|o| dict_of(doc, o));
        let missing = descriptor
            .and_then(|d| d.get(b"MissingWidth").ok())
            .and_then(|o| number(resolve(doc, o)));

        let mut scale = 0.001;
        let (mut ascent, mut descent) = family.vertical_metrics();
        if subtype == b"Type3" {
            if let Some(m) = font.get(b"FontMatrix").ok().and_then(|o| resolve(doc, o).as_array().ok()) {
                if let Some(a) = m.first().and_then(number) {
                    scale = a;
                }
            }
            // Type 3 glyph space is arbitrary; express the defaults in it.
            ascent = 0.75 / scale;
            descent = -0.25 / scale;
        } else if let Some((a, d)) = descriptor_metrics(doc, font) {
            ascent = a;
            descent = d;
        }

        FontInfo {
            kind: FontKind::Simple,
            encoding,
            first_char,
            widths,
            cid_widths: HashMap::new(),
            default_width: missing.unwrap_or(f64::NAN),
            family,
            scale,
            ascent,
            descent,
        }
    }

    fn fallback() -> Self {
        FontInfo {
            kind: FontKind::Simple,
            encoding: None,
            first_char: 0,
            widths: Vec::new(),
            cid_widths: HashMap::new(),
            default_width: f64::NAN,
            family: StandardFamily::Helvetica,
            scale: 0.001,
            ascent: 718.0,
            descent: -207.0,
        }
    }

    fn code_len(&self) -> usize {
        match self.kind {
            FontKind::Simple => 1,
            FontKind::Composite => 2,
        }
    }

    /// Advance width of `code` in glyph space.
    fn width(&self, code: u32) -> f64 {
        match self.kind {
            FontKind::Composite => self.cid_widths.get(&code).copied().unwrap_or(self.default_width),
            FontKind::Simple => {
                let from_table = code
                    .checked_sub(self.first_char)
                    .and_then(|i| self.widths.get(i as usize))
                    .copied();
                match from_table {
                    Some(w) => w,
                    None if !self.widths.is_empty() && !self.default_width.is_nan() => self.default_width,
                    None => self.family.width(code),
                }
            }
        }
    }

    fn decode(&self, bytes: &[u8], code: u32) -> Vec<char> {
        let decoded = self
            .encoding
            .as_ref()
            .and_then(|e| e.bytes_to_string(bytes).ok())
            .unwrap_or_default();
        let mut chars: Vec<char> = decoded.chars().filter(|c| *c != '\u{FFFD}' && *c != '\0').collect();
        if chars.is_empty() && matches!(self.kind, FontKind::Simple) && (32..127).contains(&code) {
            chars.push(char::from(code as u8));
        }
        chars.into_iter().flat_map(expand_ligature).collect()
    }
}

fn expand_ligature(c: char) -> Vec<char> {
    match c {
        '\u{FB00}' => vec!['f', 'f'],
        '\u{FB01}' => vec!['f', 'i'],
        '\u{FB02}' => vec!['f', 'l'],
        '\u{FB03}' => vec!['f', 'f', 'i'],
        '\u{FB04}' => vec!['f', 'f', 'l'],
        '\u{FB05}' | '\u{FB06}' => vec!['s', 't'],
        other => vec![other],
    }
}

fn descriptor_metrics(doc: &Document, font: &Dictionary) -> Option<(f64, f64)> {
    let d = font.get(b"FontDescriptor").ok().and_then(|o| dict_of(doc, o))?;
    let ascent = d.get(b"Ascent").ok().and_then(|o| number(resolve(doc, o)))?;
    let descent = d.get(b"Descent").ok().and_then(|o| number(resolve(doc, o)))?;
    (ascent > descent && ascent > 0.0).then_some((ascent, descent.min(0.0)))
}

fn parse_cid_widths(doc: &Document, arr: &[Object], out: &mut HashMap<u32, f64>) {
    let mut i = 0;
    while i < arr.len() {
        let Some(first) = number(resolve(doc, &arr[i])) else {
            break;
        };
        match arr.get(i + 1).map(|o| resolve(doc, o)) {
            Some(Object::Array(ws)) => {
                for (k, w) in ws.iter().enumerate() {
                    if let Some(w) = number(resolve(doc, w)) {
                        out.insert(first as u32 + k as u32, w);
                    }
                }
                i += 2;
            }
            Some(last) => {
                let (Some(last), Some(w)) = (number(last), arr.get(i + 2).and_then(|o| number(resolve(doc, o))))
                else {
                    break;
                };
                for c in first as u32..=last as u32 {
                    out.insert(c, w);
                }
                i += 3;
            }
            None => break,
        }
    }
}

#[derive(Clone)]
struct TextState {
    char_spacing: f64,
    word_spacing: f64,
    horizontal_scale: f64,
    leading: f64,
    font_key: Option<Vec<u8>>,
    font_size: f64,
    rise: f64,
}

#[derive(Clone)]
struct GraphicsState {
    ctm: Matrix,
    text: TextState,
}

struct Interpreter<'a, 'o> {
    doc: &'a Document,
    page: usize,
    /// Font cache keyed by resource dictionary address and font name.
    fonts: HashMap<(usize, Vec<u8>), Rc<FontInfo<'a>>>,
    out: &'o mut Vec<Glyph>,
}

impl<'a> Interpreter<'a, '_> {
    fn run(
        &mut self,
        ops: &[lopdf::content::Operation],
        resources: Option<&'a Dictionary>,
        base_ctm: Matrix,
        depth: usize,
    ) -> Result<()> {
        let mut gs = GraphicsState {
            ctm: base_ctm,
            text: TextState {
                char_spacing: 0.0,
                word_spacing: 0.0,
                horizontal_scale: 1.0,
                leading: 0.0,
                font_key: None,
                font_size: 0.0,
                rise: 0.0,
            },
        };
        let mut stack: Vec<GraphicsState> = Vec::new();
        let mut tm = Matrix::IDENTITY;
        let mut tlm = Matrix::IDENTITY;

        for op in ops {
            let args = &op.operands;
            let n = |i: usize| args.get(i).and_then(number).unwrap_or(0.0);
            match op.operator.as_str() {
                "q" => stack.push(gs.clone()),
                "Q" => {
                    if let Some(prev) = stack.pop() {
                        gs = prev;
                    }
                }
                "cm" if args.len() == 6 => {
                    let m = Matrix::new(n(0), n(1), n(2), n(3), n(4), n(5));
                    gs.ctm = m.then(&gs.ctm);
                }
                "BT" => {
                    tm = Matrix::IDENTITY;
                    tlm = Matrix::IDENTITY;
                }
                "Tf" => {
                    gs.text.font_key = args.first().and_then(|o| o.as_name().ok()).map(<[u8]>::to_vec);
                    gs.text.font_size = n(1);
                }
                "Tc" => gs.text.char_spacing = n(0),
                "Tw" => gs.text.word_spacing = n(0),
                "Tz" => gs.text.horizontal_scale = n(0) / 100.0,
                "TL" => gs.text.leading = n(0),
                "Ts" => gs.text.rise = n(0),
                "Td" => {
                    tlm = Matrix::translate(n(0), n(1)).then(&tlm);
                    tm = tlm;
                }
                "TD" => {
                    gs.text.leading = -n(1);
                    tlm = Matrix::translate(n(0), n(1)).then(&tlm);
                    tm = tlm;
                }
                "Tm" if args.len() == 6 => {
                    tlm = Matrix::new(n(0), n(1), n(2), n(3), n(4), n(5));
                    tm = tlm;
                }
                "T*" => {
                    tlm = Matrix::translate(0.0, -gs.text.leading).then(&tlm);
                    tm = tlm;
                }
                "Tj" => {
                    if let Some(Object::String(bytes, _)) = args.first() {
                        self.show(bytes, &gs, &mut tm, resources);
                    }
                }
                "'" => {
                    tlm = Matrix::translate(0.0, -gs.text.leading).then(&tlm);
                    tm = tlm;
                    if let Some(Object::String(bytes, _)) = args.first() {
                        self.show(bytes, &gs, &mut tm, resources);
                    }
                }
                "\"" => {
                    gs.text.word_spacing = n(0);
                    gs.text.char_spacing = n(1);
                    tlm = Matrix::translate(0.0, -gs.text.leading).then(&tlm);
                    tm = tlm;
                    if let Some(Object::String(bytes, _)) = args.get(2) {
                        self.show(bytes, &gs, &mut tm, resources);
                    }
                }
                "TJ" => {
                    if let Some(Object::Array(items)) = args.first() {
                        for item in items {
                            match item {
                                Object::String(bytes, _) => self.show(bytes, &gs, &mut tm, resources),
                                other => {
                                    if let Some(adj) = number(other) {
                                        let tx = -adj / 1000.0 * gs.text.font_size * gs.text.horizontal_scale;
                                        tm = Matrix::translate(tx, 0.0).then(&tm);
                                    }
                                }
                            }
                        }
                    }
                }
                "Do" if depth < MAX_FORM_DEPTH => {
                    if let Some(name) = args.first().and_then(|o| o.as_name().ok()) {
                        self.form_xobject(name, &gs, resources, depth)?;
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn form_xobject(
        &mut self,
        name: &[u8],
        gs: &GraphicsState,
        resources: Option<&'a Dictionary>,
        depth: usize,
    ) -> Result<()> {
        let doc = self.doc;
        let Some(xobjects) = resources
            .and_then(|r| r.get(b"XObject").ok())
            .and_then(|o| dict_of(doc, o))
        else {
            return Ok(());
        };
        let Ok(entry) = xobjects.get(name) else {
            return Ok(());
        };
        let id = entry.as_reference().ok();
        let Object::Stream(stream) = resolve(doc, entry) else {
            return Ok(());
        };
        if stream.dict.get(b"Subtype").and_then(Object::as_name).ok() != Some(b"Form".as_slice()) {
            return Ok(());
        }
        let label = id.map_or_else(|| "inline form".to_string(), |id| object_label(id, "form XObject"));
        let data = stream.decompressed_content().unwrap_or_else(|_| stream.content.clone());
        let ops = Content::decode(&data).map_err(|e| Error::parse(label, e))?;
        let form_matrix = stream
            .dict
            .get(b"Matrix")
            .ok()
            .and_then(|o| resolve(doc, o).as_array().ok())
            .and_then(|a| {
                let v: Vec<f64> = a.iter().filter_map(number).collect();
                (v.len() == 6).then(|| Matrix::new(v[0], v[1], v[2], v[3], v[4], v[5]))
            })
            .unwrap_or(Matrix::IDENTITY);
        let form_resources = stream
            .dict
            .get(b"Resources")
            .ok()
            .and_then(|o| dict_of(doc, o))
            .or(resources);
        self.run(&ops.operations, form_resources, form_matrix.then(&gs.ctm), depth + 1)
    }

    fn font(&mut self, resources: Option<&'a Dictionary>, key: &[u8]) -> Rc<FontInfo<'a>> {
        let cache_key = (resources.map_or(0, |r| r as *const Dictionary as usize), key.to_vec());
        if let Some(f) = self.fonts.get(&cache_key) {
            return Rc::clone(f);
        }
        let doc = self.doc;
        let info = resources
            .and_then(|r| r.get(b"Font").ok())
            .and_then(|o| dict_of(doc, o))
            .and_then(|fonts| fonts.get(key).ok())
            .and_then(|o| dict_of(doc, o))
            .map(|font| FontInfo::load(doc, font))
            .unwrap_or_else(FontInfo::fallback);
        let info = Rc::new(info);
        self.fonts.insert(cache_key, Rc::clone(&info));
        info
    }

    fn show(&mut self, bytes: &[u8], gs: &GraphicsState, tm: &mut Matrix, resources: Option<&'a Dictionary>) {
        let Some(key) = gs.text.font_key.clone() else {
            return;
        };
        let font = self.font(resources, &key);
        let ts = &gs.text;
        let code_len = font.code_len();

        for chunk in bytes.chunks(code_len) {
            let code = chunk.iter().fold(0u32, |acc, b| acc * 256 + u32::from(*b));
            let w0 = font.width(code) * font.scale;
            let trm = Matrix::new(ts.font_size * ts.horizontal_scale, 0.0, 0.0, ts.font_size, 0.0, ts.rise)
                .then(tm)
                .then(&gs.ctm);
            let chars = font.decode(chunk, code);
            let visible: Vec<char> = chars.iter().copied().filter(|c| !c.is_whitespace()).collect();
            if !visible.is_empty() && chars.len() == visible.len() {
                let device = tm.then(&gs.ctm);
                let rotation = normalize_degrees(device.b.atan2(device.a).to_degrees());
                let size = ts.font_size * device.c.hypot(device.d);
                let part = w0 / visible.len() as f64;
                for (k, ch) in visible.into_iter().enumerate() {
                    let local = Rect::new(
                        part * k as f64,
                        font.descent * font.scale,
                        part * (k + 1) as f64,
                        font.ascent * font.scale,
                    );
                    self.out.push(Glyph {
                        ch,
                        page: self.page,
                        bbox: trm.transform_rect(&local),
                        font_size: size.abs(),
                        rotation,
                    });
                }
            }
            let word_space = if code_len == 1 && code == 32 { ts.word_spacing } else { 0.0 };
            let tx = (w0 * ts.font_size + ts.char_spacing + word_space) * ts.horizontal_scale;
            *tm = Matrix::translate(tx, 0.0).then(tm);
        }
    }
}

fn normalize_degrees(d: f64) -> f64 {
    let mut d = d % 360.0;
    if d <= -180.0 {
        d += 360.0;
    } else if d > 180.0 {
        d -= 360.0;
    }
    if d.abs() < 1e-9 {
        0.0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{FixtureBuilder, PageSpec};

    #[test]
    fn hi_yields_two_glyphs_left_to_right() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter()).text(72.0, 700.0, 12.0, "Hi");
        let pdf = b.build();
        let out = extract_glyphs(&pdf.bytes).unwrap();
        assert_eq!(out.glyphs.len(), 2);
        assert!(out.glyphs.iter().all(|g| g.page == 0));
        assert_eq!(out.glyphs[0].ch, 'H');
        assert!(out.glyphs[0].bbox.x0 < out.glyphs[1].bbox.x0);
    }

    #[test]
    fn empty_page_is_an_empty_document() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter());
        let pdf = b.build();
        assert!(matches!(extract_glyphs(&pdf.bytes), Err(Error::EmptyDocument)));
    }

    #[test]
    fn garbage_is_a_parse_error() {
        let err = extract_glyphs(b"%PDF-1.4\nthis is not a pdf").unwrap_err();
        match err {
            Error::Parse { object, .. } => assert!(!object.is_empty()),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn encrypted_fixture_is_unsupported() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter()).text(72.0, 700.0, 12.0, "Secret");
        b.encrypted(true);
        let pdf = b.build();
        assert!(matches!(extract_glyphs(&pdf.bytes), Err(Error::Unsupported(_))));
    }

    #[test]
    fn text_in_form_xobject_is_extracted() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter()).form_text(100.0, 200.0, 10.0, "Form");
        let pdf = b.build();
        let out = extract_glyphs(&pdf.bytes).unwrap();
        let text: String = out.glyphs.iter().map(|g| g.ch).collect();
        assert_eq!(text, "Form");
        assert!((out.glyphs[0].bbox.x0 - 100.0).abs() < 0.01);
    }

    #[test]
    fn rotation_is_reported() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter()).rotated_text(300.0, 300.0, 10.0, 90.0, "Up");
        let pdf = b.build();
        let out = extract_glyphs(&pdf.bytes).unwrap();
        assert!(out.glyphs.iter().all(|g| (g.rotation - 90.0).abs() < 1e-6));
    }

    #[test]
    fn ligatures_expand() {
        assert_eq!(expand_ligature('\u{FB01}'), vec!['f', 'i']);
        assert_eq!(expand_ligature('x'), vec!['x']);
    }
}
