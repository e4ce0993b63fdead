//! TOML configuration for header matching.
//!
//! ```toml
//! fallback_ratio = 0.5      # share of requested sections that must be found
//! max_header_chars = 60
//! inherit_defaults = true   # start from the shipped phrase table
//!
//! [equivalence]
//! "experimental results" = "evaluation"
//!
//! [[rules]]                 # replaces the shipped rules when present
//! before = "introduction"   # section name or "start"
//! after = "evaluation"      # section name or "end"
//! position = "any"          # any | first | last | adjacent-after | adjacent-before
//! assign = "implementation"
//! max = 3                   # optional
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::candidates::DEFAULT_MAX_HEADER_CHARS;
use super::{EquivalenceTable, Rule, TargetSection};
use crate::error::{Error, Result};

const SHIPPED: &str = include_str!("../../data/sections.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    fallback_ratio: Option<f64>,
    max_header_chars: Option<usize>,
    inherit_defaults: Option<bool>,
    #[serde(default)]
    equivalence: BTreeMap<String, String>,
    rules: Option<Vec<Rule>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureConfig {
    pub equivalence: EquivalenceTable,
    pub rules: Vec<Rule>,
    pub fallback_ratio: f64,
    pub max_header_chars: usize,
}

impl Default for StructureConfig {
    fn default() -> Self {
        StructureConfig::shipped()
    }
}

impl StructureConfig {
    /// The configuration compiled into the crate.
    pub fn shipped() -> Self {
        let raw = toml::from_str(SHIPPED).expect("shipped section config parses");
        Self::from_raw(raw, None).expect("shipped section config is valid")
    }

    /// The shipped configuration as TOML text.
    pub fn shipped_toml() -> &'static str {
        SHIPPED
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let base = if raw.inherit_defaults.unwrap_or(true) {
            Some(StructureConfig::shipped())
        } else {
            None
        };
        Self::from_raw(raw, base)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn from_raw(raw: RawConfig, base: Option<StructureConfig>) -> Result<Self> {
        let mut config = base.unwrap_or_else(|| StructureConfig {
            equivalence: EquivalenceTable::new(),
            rules: Vec::new(),
            fallback_ratio: 0.5,
            max_header_chars: DEFAULT_MAX_HEADER_CHARS,
        });
        for (phrase, section) in raw.equivalence {
            let section: TargetSection = section
                .parse()
                .map_err(|_| Error::Config(format!("phrase {phrase:?} maps to unknown section {section:?}")))?;
            config.equivalence.insert(&phrase, section);
        }
        if let Some(rules) = raw.rules {
            config.rules = rules;
        }
        if let Some(r) = raw.fallback_ratio {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::Config(format!("fallback_ratio {r} is outside (0, 1]")));
            }
            config.fallback_ratio = r;
        }
        if let Some(n) = raw.max_header_chars {
            if n == 0 {
                return Err(Error::Config("max_header_chars must be positive".into()));
            }
            config.max_header_chars = n;
        }
        Ok(config)
    }
}
