//! Built-in metrics for the standard Type 1 fonts, used when a font
//! dictionary carries no `/Widths` or `/FontDescriptor`.

/// Helvetica advance widths for codes 32..=126, in 1/1000 em.
pub(crate) const HELVETICA_WIDTHS: [u16; 95] = [
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278, // 32-47
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556, // 48-63
    1015, 667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, 722, 778, // 64-79
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 278, 278, 278, 469, 556, // 80-95
    333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, 556, 556, // 96-111
    556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584, // 112-126
];

/// Times-Roman advance widths for codes 32..=126, in 1/1000 em.
pub(crate) const TIMES_WIDTHS: [u16; 95] = [
    250, 333, 408, 500, 500, 833, 778, 180, 333, 333, 500, 564, 250, 333, 250, 278, // 32-47
    500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 278, 278, 564, 564, 564, 444, // 48-63
    921, 722, 667, 667, 722, 611, 556, 722, 722, 333, 389, 722, 611, 889, 722, 722, // 64-79
    556, 722, 667, 556, 611, 722, 722, 944, 722, 722, 611, 333, 278, 333, 469, 500, // 80-95
    333, 444, 500, 444, 500, 444, 333, 500, 500, 278, 278, 500, 278, 778, 500, 500, // 96-111
    500, 500, 333, 389, 278, 500, 500, 722, 500, 500, 444, 480, 200, 480, 541, // 112-126
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StandardFamily {
    Helvetica,
    Times,
    Courier,
}

impl StandardFamily {
    /// Best-effort family guess from a `/BaseFont` name, ignoring any subset
    /// prefix such as `ABCDEF+`.
    pub(crate) fn from_base_font(name: &[u8]) -> StandardFamily {
        let name = String::from_utf8_lossy(name).to_ascii_lowercase();
        let name = name.split_once('+').map_or(name.as_str(), |(_, rest)| rest);
        if name.contains("courier") || name.contains("mono") {
            StandardFamily::Courier
        } else if name.contains("times") || (name.contains("serif") && !name.contains("sans")) {
            StandardFamily::Times
        } else {
            StandardFamily::Helvetica
        }
    }

    /// Advance width in 1/1000 em.
    pub(crate) fn width(self, code: u32) -> f64 {
        let table = match self {
            StandardFamily::Courier => return 600.0,
            StandardFamily::Helvetica => &HELVETICA_WIDTHS,
            StandardFamily::Times => &TIMES_WIDTHS,
        };
        match code {
            32..=126 => f64::from(table[(code - 32) as usize]),
            _ => 500.0,
        }
    }

    /// `(ascent, descent)` in 1/1000 em; descent is negative.
    pub(crate) fn vertical_metrics(self) -> (f64, f64) {
        match self {
            StandardFamily::Helvetica => (718.0, -207.0),
            StandardFamily::Times => (683.0, -217.0),
            StandardFamily::Courier => (629.0, -157.0),
        }
    }
}

/// Width of `text` set in Helvetica at `size` points. Used by the fixture
/// builder to lay out lines.
pub(crate) fn helvetica_text_width(text: &str, size: f64) -> f64 {
    text.chars()
        .map(|c| StandardFamily::Helvetica.width(c as u32) * size / 1000.0)
        .sum()
}
