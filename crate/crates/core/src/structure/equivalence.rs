//! Many-to-one mapping from header phrases to target sections.

use std::collections::BTreeMap;

use super::TargetSection;

/// Lowercases, turns every non-alphanumeric character into a space and
/// collapses runs of whitespace.
pub fn normalize_phrase(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .flat_map(char::to_lowercase)
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceTable {
    entries: BTreeMap<String, TargetSection>,
}

impl Default for EquivalenceTable {
    fn default() -> Self {
        EquivalenceTable::new()
    }
}

impl EquivalenceTable {
    /// A table holding only each section's own name.
    pub fn new() -> Self {
        let entries = TargetSection::ALL.iter().map(|s| (s.phrase(), *s)).collect();
        EquivalenceTable { entries }
    }

    /// Adds or replaces a phrase. Returns the section it previously mapped to.
    pub fn insert(&mut self, phrase: &str, section: TargetSection) -> Option<TargetSection> {
        self.entries.insert(normalize_phrase(phrase), section)
    }

    pub fn lookup(&self, phrase: &str) -> Option<TargetSection> {
        self.entries.get(&normalize_phrase(phrase)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TargetSection)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation() {
        assert_eq!(normalize_phrase("  Related\tWORK "), "related work");
        assert_eq!(normalize_phrase("CONCLUSION & FUTURE-WORK"), "conclusion future work");
    }

    #[test]
    fn every_section_has_its_own_name() {
        let t = EquivalenceTable::new();
        for s in TargetSection::ALL {
            assert_eq!(t.lookup(&s.phrase().to_uppercase()), Some(s));
        }
    }

    #[test]
    fn inserted_variants_are_case_insensitive() {
        let mut t = EquivalenceTable::new();
        t.insert("Summary", TargetSection::Conclusion);
        assert_eq!(t.lookup("SUMMARY"), Some(TargetSection::Conclusion));
        assert_eq!(t.lookup("THREAT MODEL"), None);
    }
}
