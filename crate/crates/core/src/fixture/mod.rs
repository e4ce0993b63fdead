//! Synthetic PDF builder with recorded ground truth.
//!
//! Every non-space character written through [`PageBuilder`] is recorded as a
//! [`Glyph`] with the bounding box the builder placed it at, so extraction and
//! layout code can be checked against known geometry. Text is set in
//! Helvetica; the font dictionary carries explicit `/Widths` and a font
//! descriptor, so readers do not need built-in metrics.

pub mod corpus;

use lopdf::content::{Content, Operation};
use lopdf::{dictionary, Document, Object, ObjectId, Stream, StringFormat};

use crate::geometry::{Matrix, Rect};
use crate::layout::fonts::{StandardFamily, HELVETICA_WIDTHS};
use crate::layout::Glyph;

const ASCENT: f64 = 718.0;
const DESCENT: f64 = -207.0;

/// Page dimensions in points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageSpec {
    pub width: f64,
    pub height: f64,
}

impl PageSpec {
    pub fn letter() -> Self {
        PageSpec {
            width: 612.0,
            height: 792.0,
        }
    }
}

#[derive(Debug, Clone)]
enum Item {
    /// Text shown with a single `Tj` starting at the text matrix.
    Run { matrix: Matrix, size: f64, text: String },
    /// Text drawn inside a form XObject placed with `cm`.
    Form { x: f64, y: f64, size: f64, text: String },
}

/// Content of one page under construction.
#[derive(Debug, Clone)]
pub struct PageBuilder {
    spec: PageSpec,
    items: Vec<Item>,
    truth: Vec<Glyph>,
    index: usize,
}

impl PageBuilder {
    /// Writes `text` on one baseline starting at `(x, y)`.
    pub fn text(&mut self, x: f64, y: f64, size: f64, text: &str) -> &mut Self {
        self.run(Matrix::translate(x, y), size, text)
    }

    /// Writes `text` rotated by `degrees` around its origin.
    pub fn rotated_text(&mut self, x: f64, y: f64, size: f64, degrees: f64, text: &str) -> &mut Self {
        let (s, c) = degrees.to_radians().sin_cos();
        self.run(Matrix::new(c, s, -s, c, x, y), size, text)
    }

    /// Writes each character of `text` at an explicit x position, all on
    /// baseline `y`. Used for mirrored and hand-placed fixtures.
    pub fn glyphs_at(&mut self, y: f64, size: f64, placed: &[(f64, char)]) -> &mut Self {
        for &(x, ch) in placed {
            self.run(Matrix::translate(x, y), size, &ch.to_string());
        }
        self
    }

    /// Draws `text` twice, the second copy shifted by `dx` points. This is
    /// how some producers fake bold type.
    pub fn overprint(&mut self, x: f64, y: f64, size: f64, dx: f64, text: &str) -> &mut Self {
        self.text(x, y, size, text);
        self.text(x + dx, y, size, text)
    }

    /// Writes `text` through a form XObject translated to `(x, y)`.
    pub fn form_text(&mut self, x: f64, y: f64, size: f64, text: &str) -> &mut Self {
        assert_ascii(text);
        self.record(Matrix::translate(x, y), size, text);
        self.items.push(Item::Form {
            x,
            y,
            size,
            text: text.to_string(),
        });
        self
    }

    /// Ground-truth glyphs written so far, in content order.
    pub fn truth(&self) -> &[Glyph] {
        &self.truth
    }

    pub fn spec(&self) -> PageSpec {
        self.spec
    }

    fn run(&mut self, matrix: Matrix, size: f64, text: &str) -> &mut Self {
        assert_ascii(text);
        self.record(matrix, size, text);
        self.items.push(Item::Run {
            matrix,
            size,
            text: text.to_string(),
        });
        self
    }

    fn record(&mut self, matrix: Matrix, size: f64, text: &str) {
        let rotation = matrix.b.atan2(matrix.a).to_degrees();
        let mut pen = 0.0;
        for ch in text.chars() {
            let advance = StandardFamily::Helvetica.width(ch as u32) * size / 1000.0;
            if !ch.is_whitespace() {
                let local = Rect::new(
                    pen,
                    DESCENT * size / 1000.0,
                    pen + advance,
                    ASCENT * size / 1000.0,
                );
                self.truth.push(Glyph {
                    ch,
                    page: self.index,
                    bbox: matrix.transform_rect(&local),
                    font_size: size,
                    rotation: if rotation.abs() < 1e-9 { 0.0 } else { rotation },
                });
            }
            pen += advance;
        }
    }
}

fn assert_ascii(text: &str) {
    assert!(
        text.chars().all(|c| (' '..='~').contains(&c)),
        "fixture text must be printable ASCII: {text:?}"
    );
}

/// A built fixture: PDF bytes plus the glyphs the builder placed.
#[derive(Debug, Clone)]
pub struct FixturePdf {
    pub bytes: Vec<u8>,
    pub glyphs: Vec<Glyph>,
    pub pages: Vec<Rect>,
}

#[derive(Debug, Clone, Default)]
pub struct FixtureBuilder {
    pages: Vec<PageBuilder>,
    encrypted: bool,
}

impl FixtureBuilder {
    pub fn new() -> Self {
        FixtureBuilder::default()
    }

    /// Starts a new page and returns it for writing.
    pub fn page(&mut self, spec: PageSpec) -> &mut PageBuilder {
        let index = self.pages.len();
        self.pages.push(PageBuilder {
            spec,
            items: Vec::new(),
            truth: Vec::new(),
            index,
        });
        self.pages.last_mut().expect("just pushed")
    }

    pub fn page_mut(&mut self, index: usize) -> &mut PageBuilder {
        &mut self.pages[index]
    }

    pub fn page_count(&self) -> usize {
        self.pages.len()
    }

    /// Encrypt the output with the standard security handler (empty user
    /// password).
    pub fn encrypted(&mut self, yes: bool) -> &mut Self {
        self.encrypted = yes;
        self
    }

    pub fn build(&self) -> FixturePdf {
        let mut doc = Document::with_version("1.5");
        let pages_id = doc.new_object_id();

        let descriptor_id = doc.add_object(dictionary! {
            "Type" => "FontDescriptor",
            "FontName" => "Helvetica",
            "Flags" => 32,
            "FontBBox" => vec![(-166).into(), (-225).into(), 1000.into(), 931.into()],
            "ItalicAngle" => 0,
            "Ascent" => ASCENT as i64,
            "Descent" => DESCENT as i64,
            "CapHeight" => 718,
            "StemV" => 88,
        });
        let widths: Vec<Object> = HELVETICA_WIDTHS.iter().map(|w| Object::Integer(i64::from(*w))).collect();
        let font_id = doc.add_object(dictionary! {
            "Type" => "Font",
            "Subtype" => "Type1",
            "BaseFont" => "Helvetica",
            "Encoding" => "WinAnsiEncoding",
            "FirstChar" => 32,
            "LastChar" => 126,
            "Widths" => widths,
            "FontDescriptor" => descriptor_id,
        });
        let resources_id = doc.add_object(dictionary! {
            "Font" => dictionary! { "F1" => font_id },
        });

        let mut kids: Vec<Object> = Vec::new();
        for page in &self.pages {
            let mut ops = Vec::new();
            let mut xobjects = lopdf::Dictionary::new();
            for (i, item) in page.items.iter().enumerate() {
                match item {
                    Item::Run { matrix, size, text } => {
                        ops.extend(text_ops(*matrix, *size, text));
                    }
                    Item::Form { x, y, size, text } => {
                        let form = form_xobject(&mut doc, resources_id, *size, text);
                        let name = format!("Fx{i}");
                        xobjects.set(name.as_bytes(), form);
                        ops.push(Operation::new("q", vec![]));
                        ops.push(Operation::new(
                            "cm",
                            vec![1.into(), 0.into(), 0.into(), 1.into(), (*x).into(), (*y).into()],
                        ));
                        ops.push(Operation::new("Do", vec![Object::Name(name.into_bytes())]));
                        ops.push(Operation::new("Q", vec![]));
                    }
                }
            }
            let content = Content { operations: ops };
            let content_id = doc.add_object(Stream::new(
                dictionary! {},
                content.encode().expect("fixture content encodes"),
            ));
            let resources: Object = if xobjects.is_empty() {
                resources_id.into()
            } else {
                dictionary! {
                    "Font" => dictionary! { "F1" => font_id },
                    "XObject" => xobjects,
                }
                .into()
            };
            let page_id = doc.add_object(dictionary! {
                "Type" => "Page",
                "Parent" => pages_id,
                "MediaBox" => vec![0.into(), 0.into(), page.spec.width.into(), page.spec.height.into()],
                "Contents" => content_id,
                "Resources" => resources,
            });
            kids.push(page_id.into());
        }
        let count = kids.len() as i64;
        doc.objects.insert(
            pages_id,
            Object::Dictionary(dictionary! {
                "Type" => "Pages",
                "Kids" => kids,
                "Count" => count,
            }),
        );
        let catalog_id = doc.add_object(dictionary! {
            "Type" => "Catalog",
            "Pages" => pages_id,
        });
        doc.trailer.set("Root", catalog_id);

        if self.encrypted {
            encrypt(&mut doc);
        }

        let mut bytes = Vec::new();
        doc.save_to(&mut bytes).expect("fixture serialises");

        FixturePdf {
            bytes,
            glyphs: self.pages.iter().flat_map(|p| p.truth.iter().cloned()).collect(),
            pages: self
                .pages
                .iter()
                .map(|p| Rect::new(0.0, 0.0, p.spec.width, p.spec.height))
                .collect(),
        }
    }
}

fn text_ops(matrix: Matrix, size: f64, text: &str) -> Vec<Operation> {
    let m = matrix;
    vec![
        Operation::new("BT", vec![]),
        Operation::new("Tf", vec![Object::Name(b"F1".to_vec()), size.into()]),
        Operation::new(
            "Tm",
            vec![m.a.into(), m.b.into(), m.c.into(), m.d.into(), m.e.into(), m.f.into()],
        ),
        Operation::new(
            "Tj",
            vec![Object::String(text.as_bytes().to_vec(), StringFormat::Literal)],
        ),
        Operation::new("ET", vec![]),
    ]
}

fn form_xobject(doc: &mut Document, resources: ObjectId, size: f64, text: &str) -> ObjectId {
    let content = Content {
        operations: text_ops(Matrix::IDENTITY, size, text),
    };
    doc.add_object(Stream::new(
        dictionary! {
            "Type" => "XObject",
            "Subtype" => "Form",
            "BBox" => vec![0.into(), (-50).into(), 1000.into(), 100.into()],
            "Resources" => resources,
        },
        content.encode().expect("form content encodes"),
    ))
}

fn encrypt(doc: &mut Document) {
    let id = Object::String(b"fixture-document".to_vec(), StringFormat::Hexadecimal);
    doc.trailer.set("ID", vec![id.clone(), id]);
    let version = lopdf::EncryptionVersion::V2 {
        document: doc,
        owner_password: "owner",
        user_password: "",
        key_length: 128,
        permissions: lopdf::Permissions::all(),
    };
    let state = lopdf::EncryptionState::try_from(version).expect("encryption parameters are valid");
    doc.encrypt(&state).expect("fixture encrypts");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_skips_spaces_and_advances() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter()).text(10.0, 20.0, 10.0, "A B");
        let truth = b.page_mut(0).truth().to_vec();
        assert_eq!(truth.len(), 2);
        // A is 667 units wide, the space 278.
        assert!((truth[0].bbox.x1 - 16.67).abs() < 1e-9);
        assert!((truth[1].bbox.x0 - (10.0 + 6.67 + 2.78)).abs() < 1e-9);
        assert!((truth[0].bbox.y0 - (20.0 - 2.07)).abs() < 1e-9);
    }

    #[test]
    fn build_produces_loadable_pdf() {
        let mut b = FixtureBuilder::new();
        b.page(PageSpec::letter()).text(72.0, 700.0, 12.0, "Hello");
        b.page(PageSpec::letter()).text(72.0, 700.0, 12.0, "World");
        let pdf = b.build();
        let doc = Document::load_mem(&pdf.bytes).unwrap();
        assert_eq!(doc.get_pages().len(), 2);
        assert_eq!(pdf.glyphs.len(), 10);
        assert_eq!(pdf.glyphs[5].page, 1);
    }
}
