//! Section-aware passage retrieval for scholarly PDFs.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`layout`] pulls positioned glyphs out of a PDF and rebuilds reading
//!    order into a [`layout::PositionedText`], keeping an exact map between
//!    text offsets and glyphs.
//! 2. [`structure`] finds all-caps section headers, maps them onto the seven
//!    canonical sections and produces a [`structure::SectionMap`].
//! 3. [`retrieval`] splits the text into sentences, stems query and sentence
//!    terms, scores matches and drops passages outside the requested sections.
//! 4. [`highlight`] turns passage spans back into page quads and appends
//!    highlight annotations to the PDF.
//! 5. [`eval`] scores graded judgments with `quant_gen` and summarises them.
//!
//! [`pipeline`] wires the stages together and [`fixture`] builds synthetic
//! PDFs with known glyph placement for tests.

pub mod error;
pub mod eval;
pub mod fixture;
pub mod geometry;
pub mod highlight;
pub mod layout;
pub mod pipeline;
pub mod retrieval;
pub mod structure;

pub use error::{Error, Result};
