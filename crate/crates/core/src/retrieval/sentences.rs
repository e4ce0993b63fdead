//! Rule-based sentence boundary detection.

/// Tokens ending in a period that never end a sentence, compared in
/// lowercase without the final period.
const ABBREVIATIONS: &[&str] = &[
    "al", "alg", "approx", "ca", "cf", "ch", "co", "def", "dr", "e.g", "eq", "eqs", "fig", "figs",
    "i.e", "ibid", "inc", "jr", "lem", "ltd", "mr", "mrs", "ms", "no", "nos", "pp", "prof", "prop",
    "ref", "refs", "resp", "sec", "secs", "sect", "st", "tab", "thm", "viz", "vol", "vs",
];

const CLOSERS: &[char] = &['"', '\'', ')', ']', '\u{201d}', '\u{2019}'];
const OPENERS: &[char] = &['"', '\'', '(', '[', '\u{201c}', '\u{2018}'];

fn is_abbreviation(chars: &[char], period: usize) -> bool {
    let start = chars[..period]
        .iter()
        .rposition(|c| c.is_whitespace())
        .map_or(0, |p| p + 1);
    let token: String = chars[start..period]
        .iter()
        .skip_while(|c| OPENERS.contains(c))
        .collect();
    let mut letters = token.chars();
    if let (Some(c), None) = (letters.next(), letters.next()) {
        if c.is_uppercase() {
            return true;
        }
    }
    ABBREVIATIONS.contains(&token.to_lowercase().as_str())
}

/// Where the next sentence starts if a terminator at `i` ends this one.
fn sentence_break(chars: &[char], i: usize) -> Option<usize> {
    if !matches!(chars[i], '.' | '!' | '?') {
        return None;
    }
    let mut j = i + 1;
    while j < chars.len() && CLOSERS.contains(&chars[j]) {
        j += 1;
    }
    let mut k = j;
    while k < chars.len() && chars[k].is_whitespace() {
        k += 1;
    }
    if k == j || k >= chars.len() {
        return None;
    }
    let mut first = k;
    while first < chars.len() && OPENERS.contains(&chars[first]) {
        first += 1;
    }
    let next = *chars.get(first)?;
    if !(next.is_uppercase() || next.is_ascii_digit()) {
        return None;
    }
    if chars[i] == '.' && is_abbreviation(chars, i) {
        return None;
    }
    Some(j)
}

/// Sentence spans `[start, end)` in character offsets, trimmed of
/// surrounding whitespace.
///
/// `hard_breaks` are ranges that always form a sentence of their own, such
/// as header lines. Blank lines always end a sentence.
pub fn split_sentences(text: &str, hard_breaks: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut cuts = vec![0, chars.len()];
    for &(s, e) in hard_breaks {
        cuts.push(s.min(chars.len()));
        cuts.push(e.min(chars.len()));
    }
    for i in 0..chars.len() {
        if chars[i] == '\n' && chars.get(i + 1) == Some(&'\n') {
            cuts.push(i);
        } else if let Some(end) = sentence_break(&chars, i) {
            cuts.push(end);
        }
    }
    cuts.sort_unstable();
    cuts.dedup();

    cuts.windows(2)
        .filter_map(|w| {
            let (mut s, mut e) = (w[0], w[1]);
            while s < e && chars[s].is_whitespace() {
                s += 1;
            }
            while e > s && chars[e - 1].is_whitespace() {
                e -= 1;
            }
            (s < e).then_some((s, e))
        })
        .collect()
}
