//! Writing `/Highlight` annotations into a PDF.

use lopdf::{dictionary, Dictionary, Document, IncrementalDocument, Object, ObjectId, Stream};

use super::{HighlightQuad, HighlightSet};
use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::layout::extract::{load_document, media_box};

/// Tolerance for the media-box containment check, in points.
const CONTAINMENT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnotationStyle {
    /// Attach an appearance stream painted with the multiply blend mode.
    pub appearance: bool,
}

impl Default for AnnotationStyle {
    fn default() -> Self {
        AnnotationStyle { appearance: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteMode {
    /// Nothing to add; the input bytes were returned.
    Unchanged,
    /// The annotations were appended as a new revision.
    Incremental,
    /// The document was re-serialised.
    FullRewrite,
}

#[derive(Debug, Clone)]
pub struct Written {
    pub bytes: Vec<u8>,
    pub mode: WriteMode,
    pub annotations: usize,
}

struct Planned<'a> {
    page: usize,
    quads: Vec<&'a HighlightQuad>,
}

fn same_quad(a: &HighlightQuad, b: &HighlightQuad) -> bool {
    a.page == b.page && a.flat() == b.flat() && a.color == b.color
}

/// One annotation per set and page. A quad already emitted earlier on the
/// same page with the same colour is not repeated.
fn plan(sets: &[HighlightSet]) -> Vec<Planned<'_>> {
    let mut emitted: Vec<&HighlightQuad> = Vec::new();
    let mut out = Vec::new();
    for set in sets {
        let mut pages: Vec<usize> = set.quads.iter().map(|q| q.page).collect();
        pages.dedup();
        let mut seen_pages = Vec::new();
        for page in pages {
            if seen_pages.contains(&page) {
                continue;
            }
            seen_pages.push(page);
            let quads: Vec<&HighlightQuad> = set
                .quads
                .iter()
                .filter(|q| q.page == page)
                .filter(|q| !emitted.iter().any(|e| same_quad(e, q)))
                .collect();
            if quads.is_empty() {
                continue;
            }
            emitted.extend(quads.iter().copied());
            out.push(Planned { page, quads });
        }
    }
    out
}

fn reals(values: impl IntoIterator<Item = f64>) -> Object {
    Object::Array(values.into_iter().map(|v| Object::Real(v as f32)).collect())
}

fn appearance(bounds: Rect, quads: &[&HighlightQuad]) -> Stream {
    let [r, g, b] = quads[0].color.0;
    let mut ops = format!("/GS0 gs {r:.4} {g:.4} {b:.4} rg\n");
    for q in quads {
        let q = q.bounds();
        ops.push_str(&format!(
            "{:.3} {:.3} {:.3} {:.3} re f\n",
            q.x0,
            q.y0,
            q.width(),
            q.height()
        ));
    }
    let resources = dictionary! {
        "ExtGState" => dictionary! {
            "GS0" => dictionary! {
                "Type" => "ExtGState",
                "BM" => "Multiply",
            },
        },
    };
    Stream::new(
        dictionary! {
            "Type" => "XObject",
            "Subtype" => "Form",
            "BBox" => reals([bounds.x0, bounds.y0, bounds.x1, bounds.y1]),
            "Resources" => resources,
        },
        ops.into_bytes(),
    )
}

/// Copies `id` from `source` into `target` unless it is already there.
fn ensure(target: &mut Document, source: &Document, id: ObjectId) -> Result<()> {
    if let std::collections::btree_map::Entry::Vacant(e) = target.objects.entry(id) {
        let obj = source
            .get_object(id)
            .map_err(|e| Error::parse(format!("object {} {} R", id.0, id.1), e))?;
        e.insert(obj.clone());
    }
    Ok(())
}

fn attach(target: &mut Document, source: &Document, page_id: ObjectId, annot: ObjectId) -> Result<()> {
    let label = || format!("page object {} {} R", page_id.0, page_id.1);
    ensure(target, source, page_id)?;
    let existing = target
        .get_dictionary(page_id)
        .map_err(|e| Error::parse(label(), e))?
        .get(b"Annots")
        .ok()
        .cloned();
    match existing {
        Some(Object::Reference(list_id)) => {
            ensure(target, source, list_id)?;
            target
                .get_object_mut(list_id)
                .and_then(Object::as_array_mut)
                .map_err(|e| Error::parse(format!("annotation list {} {} R", list_id.0, list_id.1), e))?
                .push(Object::Reference(annot));
        }
        Some(Object::Array(mut list)) => {
            list.push(Object::Reference(annot));
            target
                .get_dictionary_mut(page_id)
                .map_err(|e| Error::parse(label(), e))?
                .set("Annots", list);
        }
        _ => {
            target
                .get_dictionary_mut(page_id)
                .map_err(|e| Error::parse(label(), e))?
                .set("Annots", vec![Object::Reference(annot)]);
        }
    }
    Ok(())
}

fn apply(
    target: &mut Document,
    source: &Document,
    page_ids: &[ObjectId],
    planned: &[Planned<'_>],
    style: &AnnotationStyle,
) -> Result<()> {
    for p in planned {
        let page_id = page_ids[p.page];
        let bounds = p
            .quads
            .iter()
            .map(|q| q.bounds())
            .reduce(|a, b| a.union(&b))
            .expect("planned annotations hold quads");
        let mut annot: Dictionary = dictionary! {
            "Type" => "Annot",
            "Subtype" => "Highlight",
            "Rect" => reals([bounds.x0, bounds.y0, bounds.x1, bounds.y1]),
            "QuadPoints" => reals(p.quads.iter().flat_map(|q| q.flat())),
            "C" => reals(p.quads[0].color.0),
            "F" => 4,
            "P" => Object::Reference(page_id),
        };
        if style.appearance {
            let ap = target.add_object(appearance(bounds, &p.quads));
            annot.set("AP", dictionary! { "N" => Object::Reference(ap) });
        }
        let annot_id = target.add_object(annot);
        attach(target, source, page_id, annot_id)?;
    }
    Ok(())
}

/// Adds one highlight annotation per set and page to `pdf`.
///
/// The annotations are appended as an incremental update; if that cannot be
/// produced the whole document is rewritten. Original content streams are
/// never touched, so text extraction of the result matches the input.
pub fn write_annotations(pdf: &[u8], sets: &[HighlightSet], style: &AnnotationStyle) -> Result<Written> {
    let doc = load_document(pdf)?;
    let page_ids: Vec<ObjectId> = doc.page_iter().collect();
    for set in sets {
        for q in &set.quads {
            let Some(&page_id) = page_ids.get(q.page) else {
                return Err(Error::Geometry {
                    page: q.page,
                    quad: format!("{:?}", q.flat()),
                    media_box: format!("<missing: document has {} pages>", page_ids.len()),
                });
            };
            let page = doc
                .get_dictionary(page_id)
                .map_err(|e| Error::parse(format!("page object {} {} R", page_id.0, page_id.1), e))?;
            let media = media_box(&doc, page);
            let b = q.bounds();
            let inside = b.x0 >= media.x0 - CONTAINMENT_EPSILON
                && b.y0 >= media.y0 - CONTAINMENT_EPSILON
                && b.x1 <= media.x1 + CONTAINMENT_EPSILON
                && b.y1 <= media.y1 + CONTAINMENT_EPSILON;
            if !inside {
                return Err(Error::Geometry {
                    page: q.page,
                    quad: b.to_string(),
                    media_box: media.to_string(),
                });
            }
        }
    }

    let planned = plan(sets);
    if planned.is_empty() {
        return Ok(Written {
            bytes: pdf.to_vec(),
            mode: WriteMode::Unchanged,
            annotations: 0,
        });
    }

    let mut incremental = IncrementalDocument::create_from(pdf.to_vec(), doc.clone());
    if apply(&mut incremental.new_document, &doc, &page_ids, &planned, style).is_ok() {
        let mut out = Vec::new();
        if incremental.save_to(&mut out).is_ok() && Document::load_mem(&out).is_ok() {
            return Ok(Written {
                bytes: out,
                mode: WriteMode::Incremental,
                annotations: planned.len(),
            });
        }
    }

    let mut full = doc.clone();
    apply(&mut full, &doc, &page_ids, &planned, style)?;
    let mut out = Vec::new();
    full.save_to(&mut out)?;
    Ok(Written {
        bytes: out,
        mode: WriteMode::FullRewrite,
        annotations: planned.len(),
    })
}
