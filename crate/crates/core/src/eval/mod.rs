//! Graded relevance scoring with `quant_gen` and per-system summaries.

mod judgments;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use judgments::{load_judgments, raw_scores_csv, JudgmentFile};

/// Highest exhaustivity or specificity grade.
pub const MAX_GRADE: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub topic: String,
    pub system: String,
    /// Exhaustivity grade.
    pub e: u8,
    /// Specificity grade.
    pub s: u8,
}

/// Quantised score of an (exhaustivity, specificity) pair.
///
/// Any pair with a zero grade scores 0.
pub fn quant_gen(e: u8, s: u8) -> Result<f64> {
    if e > MAX_GRADE || s > MAX_GRADE {
        return Err(Error::Validation(format!(
            "grades (e={e}, s={s}) must lie in 0..={MAX_GRADE}"
        )));
    }
    Ok(match (e, s) {
        (3, 3) => 1.0,
        (2, 3) | (3, 2) | (3, 1) => 0.75,
        (1, 3) | (2, 2) | (2, 1) => 0.5,
        (1, 2) | (1, 1) => 0.25,
        _ => 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Mean, Tukey hinges and extremes. For odd `n` the median belongs to both
/// halves.
pub fn aggregate(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let half = n.div_ceil(2);
    Ok(SummaryStats {
        mean: v.iter().sum::<f64>() / n as f64,
        q1: median_sorted(&v[..half]),
        median: median_sorted(&v),
        q3: median_sorted(&v[n - half..]),
        min: v[0],
        max: v[n - 1],
        n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Method {
    pub metric: String,
    pub grade_scale: String,
    pub zero_grade_rule: String,
    pub quartiles: String,
}

impl Default for Method {
    fn default() -> Self {
        Method {
            metric: "quant_gen".into(),
            grade_scale: "0-3".into(),
            zero_grade_rule: "e=0 or s=0 scores 0".into(),
            quartiles: "tukey-hinges (median included in both halves for odd n)".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawScore {
    pub topic: String,
    pub system: String,
    pub e: u8,
    pub s: u8,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub method: Method,
    pub systems: BTreeMap<String, SummaryStats>,
    /// Scores in input order, for plotting.
    pub raw: Vec<RawScore>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Scores every judgment and summarises each system.
///
/// When `expected` is given, every listed system must have judgments and no
/// other system may appear.
pub fn compare_systems(judgments: &[Judgment], expected: Option<&[String]>) -> Result<Report> {
    if judgments.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut raw = Vec::with_capacity(judgments.len());
    let mut grouped: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (i, j) in judgments.iter().enumerate() {
        if j.system.trim().is_empty() {
            return Err(Error::Validation(format!("judgment {} has no system id", i + 1)));
        }
        if let Some(list) = expected {
            if !list.contains(&j.system) {
                return Err(Error::Validation(format!("unknown system id {:?}", j.system)));
            }
        }
        let score = quant_gen(j.e, j.s)?;
        grouped.entry(j.system.clone()).or_default().push(score);
        raw.push(RawScore {
            topic: j.topic.clone(),
            system: j.system.clone(),
            e: j.e,
            s: j.s,
            score,
        });
    }
    if let Some(list) = expected {
        if let Some(missing) = list.iter().find(|s| !grouped.contains_key(*s)) {
            return Err(Error::Validation(format!("system {missing:?} has no judgments")));
        }
    }
    let systems = grouped
        .into_iter()
        .map(|(k, v)| aggregate(&v).map(|s| (k, s)))
        .collect::<Result<_>>()?;
    Ok(Report {
        method: Method::default(),
        systems,
        raw,
        warnings: Vec::new(),
    })
}
