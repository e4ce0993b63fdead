//! Header candidate scanning.

use super::{HeaderCandidate, MatchKind, Numbering};
use crate::layout::PositionedText;

pub const DEFAULT_MAX_HEADER_CHARS: usize = 60;

/// Value of a roman numeral in canonical subtractive form, e.g. `XIV`.
/// Non-canonical spellings such as `IIII` or `VX` are rejected.
pub fn parse_roman(s: &str) -> Option<u32> {
    if s.is_empty() {
        return None;
    }
    let value = |c: char| match c {
        'I' => Some(1),
        'V' => Some(5),
        'X' => Some(10),
        'L' => Some(50),
        'C' => Some(100),
        'D' => Some(500),
        'M' => Some(1000),
        _ => None,
    };
    let digits: Vec<u32> = s.chars().map(value).collect::<Option<_>>()?;
    let mut total = 0;
    for (i, &d) in digits.iter().enumerate() {
        match digits.get(i + 1) {
            Some(&next) if next > d => total -= d as i64,
            _ => total += d as i64,
        }
    }
    let n = u32::try_from(total).ok().filter(|n| (1..4000).contains(n))?;
    (to_roman(n) == s).then_some(n)
}

fn to_roman(mut n: u32) -> String {
    const TABLE: [(u32, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for (v, s) in TABLE {
        while n >= v {
            out.push_str(s);
            n -= v;
        }
    }
    out
}

fn parse_arabic(token: &str) -> Option<u32> {
    let mut parts = token.split('.');
    let first = parts.next()?;
    let valid = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    if !valid(first) || !parts.all(valid) {
        return None;
    }
    first.parse().ok()
}

/// Splits a leading numbering token off a trimmed header line.
pub(crate) fn strip_numbering(line: &str) -> (Numbering, &str) {
    let line = line.trim();
    let Some((token, rest)) = line.split_once(char::is_whitespace) else {
        return (Numbering::None, line);
    };
    let rest = rest.trim_start();
    if rest.is_empty() {
        return (Numbering::None, line);
    }
    let bare = token
        .strip_suffix('.')
        .or_else(|| token.strip_suffix(')'))
        .unwrap_or(token);
    if let Some(n) = parse_arabic(bare) {
        (Numbering::Arabic(n), rest)
    } else if let Some(n) = parse_roman(bare) {
        (Numbering::Roman(n), rest)
    } else {
        (Numbering::None, line)
    }
}

fn is_header_line(line: &str, max_chars: usize) -> Option<Numbering> {
    if line.is_empty() || line.chars().count() > max_chars {
        return None;
    }
    let (numbering, rest) = strip_numbering(line);
    let letters = rest.chars().filter(|c| c.is_alphabetic()).count();
    if letters < 2 || rest.chars().any(char::is_lowercase) {
        return None;
    }
    Some(numbering)
}

/// Header candidates of a linearised document, in document order.
pub fn scan_header_candidates(doc: &PositionedText) -> Vec<HeaderCandidate> {
    scan_text(doc.text(), DEFAULT_MAX_HEADER_CHARS)
}

/// Header candidates of plain text. Offsets are in characters.
pub fn scan_text(text: &str, max_chars: usize) -> Vec<HeaderCandidate> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for line in text.split('\n') {
        let len = line.chars().count();
        let lead = line.chars().take_while(|c| c.is_whitespace()).count();
        let trimmed = line.trim();
        if let Some(numbering) = is_header_line(trimmed, max_chars) {
            out.push(HeaderCandidate {
                raw_text: trimmed.to_owned(),
                offset: line_start + lead,
                line_end: line_start + lead + trimmed.chars().count(),
                numbering,
                matched: None,
                match_kind: MatchKind::Unmatched,
            });
        }
        line_start += len + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arabic_numbered_header() {
        let c = scan_text("1 INTRODUCTION\nbody", 60);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].numbering, Numbering::Arabic(1));
        assert_eq!((c[0].offset, c[0].line_end), (0, 14));
        assert_eq!(c[0].title(), "INTRODUCTION");
    }

    #[test]
    fn roman_numbered_header() {
        let c = scan_text("text\nIV. RELATED WORK\n", 60);
        assert_eq!(c[0].numbering, Numbering::Roman(4));
        assert_eq!(c[0].offset, 5);
        assert_eq!(c[0].title(), "RELATED WORK");
    }

    #[test]
    fn dotted_and_parenthesised_numbers() {
        assert_eq!(strip_numbering("2.1 DESIGN"), (Numbering::Arabic(2), "DESIGN"));
        assert_eq!(strip_numbering("3) RESULTS"), (Numbering::Arabic(3), "RESULTS"));
        assert_eq!(strip_numbering("I/O COST"), (Numbering::None, "I/O COST"));
    }

    #[test]
    fn lowercase_lines_are_rejected() {
        assert!(scan_text("In Section 3 we evaluate.", 60).is_empty());
    }

    #[test]
    fn long_shouting_line_is_rejected() {
        let line = "A".repeat(30) + " " + &"B".repeat(30);
        assert!(scan_text(&line, 60).is_empty());
        assert_eq!(scan_text(&line[..59], 60).len(), 1);
    }

    #[test]
    fn bare_numbers_are_not_headers() {
        assert!(scan_text("2019\n12.5\nI", 60).is_empty());
    }

    #[test]
    fn roman_parsing_is_canonical() {
        assert_eq!(parse_roman("XIV"), Some(14));
        assert_eq!(parse_roman("MCMXC"), Some(1990));
        assert_eq!(parse_roman("IIII"), None);
        assert_eq!(parse_roman("VX"), None);
        assert_eq!(parse_roman(""), None);
    }
}
