//! Ordering-based assignment of unmatched header candidates.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HeaderCandidate, MatchKind, TargetSection};

/// Most candidates that may be implicitly assigned to related work.
const IMPLICIT_RELATED_WORK_CAP: usize = 1;

/// One end of a rule window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    End,
    Section(TargetSection),
}

impl Serialize for Anchor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Anchor::Start => s.serialize_str("start"),
            Anchor::End => s.serialize_str("end"),
            Anchor::Section(t) => s.serialize_str(t.kebab_name()),
        }
    }
}

impl<'de> Deserialize<'de> for Anchor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "start" => Ok(Anchor::Start),
            "end" => Ok(Anchor::End),
            other => other
                .parse()
                .map(Anchor::Section)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Which candidates inside the window a rule takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Position {
    #[default]
    Any,
    First,
    Last,
    /// The first candidate, only if it directly follows the opening anchor.
    AdjacentAfter,
    /// The last candidate, only if it directly precedes the closing anchor.
    AdjacentBefore,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub before: Anchor,
    pub after: Anchor,
    #[serde(default)]
    pub position: Position,
    pub assign: TargetSection,
    /// Cap on candidates this rule may assign.
    #[serde(default)]
    pub max: Option<usize>,
    /// Fewest unmatched candidates the window must hold for the rule to fire.
    #[serde(default = "one")]
    pub min_window: usize,
    /// Skip the rule when `assign` already has an explicit match.
    #[serde(default)]
    pub skip_if_matched: bool,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let anchor = |a: Anchor| match a {
            Anchor::Start => "start".to_owned(),
            Anchor::End => "end".to_owned(),
            Anchor::Section(s) => s.to_string(),
        };
        write!(
            f,
            "{}..{} {:?} -> {}",
            anchor(self.before),
            anchor(self.after),
            self.position,
            self.assign
        )
    }
}

/// Why a proposed implicit assignment was not applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum RuleDiagnostic {
    /// An earlier rule already assigned the candidate elsewhere.
    Conflict {
        candidate: usize,
        kept: TargetSection,
        rejected: TargetSection,
        rule: usize,
    },
    /// The assignment would put a section out of canonical order.
    OrderViolation {
        candidate: usize,
        section: TargetSection,
        rule: usize,
    },
    /// The global cap for implicit assignments to this section was reached.
    CapReached {
        candidate: usize,
        section: TargetSection,
        rule: usize,
    },
}

fn explicit_positions(candidates: &[HeaderCandidate], section: TargetSection) -> Vec<usize> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.match_kind == MatchKind::Explicit && c.matched == Some(section))
        .map(|(i, _)| i)
        .collect()
}

/// Open window `(lo, hi)` of candidate indices bounded by the rule anchors,
/// using only explicit matches. The closing anchor is the first occurrence
/// after the first opening anchor; the opening anchor is the last occurrence
/// before that.
fn window(candidates: &[HeaderCandidate], rule: &Rule) -> Option<(isize, isize)> {
    let n = candidates.len() as isize;
    let opening: Vec<isize> = match rule.before {
        Anchor::Start => vec![-1],
        Anchor::End => return None,
        Anchor::Section(s) => explicit_positions(candidates, s).into_iter().map(|i| i as isize).collect(),
    };
    let first_open = *opening.first()?;
    let close = match rule.after {
        Anchor::End => n,
        Anchor::Start => return None,
        Anchor::Section(s) => explicit_positions(candidates, s)
            .into_iter()
            .map(|i| i as isize)
            .find(|&i| i > first_open)?,
    };
    let open = opening.into_iter().filter(|&i| i < close).max()?;
    Some((open, close))
}

fn proposals(candidates: &[HeaderCandidate], rule: &Rule) -> Vec<usize> {
    let Some((lo, hi)) = window(candidates, rule) else {
        return Vec::new();
    };
    if rule.skip_if_matched && !explicit_positions(candidates, rule.assign).is_empty() {
        return Vec::new();
    }
    let free: Vec<usize> = ((lo + 1)..hi)
        .map(|i| i as usize)
        .filter(|&i| candidates[i].match_kind == MatchKind::Unmatched)
        .collect();
    if free.is_empty() || free.len() < rule.min_window {
        return Vec::new();
    }
    let mut picked = match rule.position {
        Position::Any => free,
        Position::First => vec![free[0]],
        Position::Last => vec![free[free.len() - 1]],
        Position::AdjacentAfter => {
            if free[0] as isize == lo + 1 {
                vec![free[0]]
            } else {
                Vec::new()
            }
        }
        Position::AdjacentBefore => {
            let last = free[free.len() - 1];
            if last as isize == hi - 1 {
                vec![last]
            } else {
                Vec::new()
            }
        }
    };
    if let Some(max) = rule.max {
        picked.truncate(max);
    }
    picked
}

/// True when `section` at `index` sits between its nearest matched
/// neighbours in canonical order.
fn fits_order(candidates: &[HeaderCandidate], index: usize, section: TargetSection) -> bool {
    let prev = candidates[..index].iter().rev().find_map(|c| c.matched);
    let next = candidates[index + 1..].iter().find_map(|c| c.matched);
    prev.is_none_or(|p| p <= section) && next.is_none_or(|n| section <= n)
}

/// Applies `rules` in priority order to the unmatched candidates.
///
/// Every rule sees the explicit matches only; proposals are then merged in
/// rule order. A candidate keeps the first section proposed for it, an
/// assignment that would break canonical order with its matched neighbours
/// is refused, and at most one candidate becomes implicit related work.
pub fn infer_implicit(candidates: &mut [HeaderCandidate], rules: &[Rule]) -> Vec<RuleDiagnostic> {
    let all: Vec<Vec<usize>> = rules.iter().map(|r| proposals(candidates, r)).collect();
    let mut diagnostics = Vec::new();
    let mut related_work = candidates
        .iter()
        .filter(|c| c.match_kind == MatchKind::Implicit && c.matched == Some(TargetSection::RelatedWork))
        .count();

    for (rule_idx, (rule, picked)) in rules.iter().zip(all).enumerate() {
        let section = rule.assign;
        for i in picked {
            let c = &candidates[i];
            match (c.match_kind, c.matched) {
                (MatchKind::Implicit, Some(kept)) if kept != section => {
                    diagnostics.push(RuleDiagnostic::Conflict {
                        candidate: i,
                        kept,
                        rejected: section,
                        rule: rule_idx,
                    });
                    continue;
                }
                (MatchKind::Unmatched, _) => {}
                _ => continue,
            }
            if section == TargetSection::RelatedWork && related_work >= IMPLICIT_RELATED_WORK_CAP {
                diagnostics.push(RuleDiagnostic::CapReached {
                    candidate: i,
                    section,
                    rule: rule_idx,
                });
                continue;
            }
            if !fits_order(candidates, i, section) {
                diagnostics.push(RuleDiagnostic::OrderViolation {
                    candidate: i,
                    section,
                    rule: rule_idx,
                });
                continue;
            }
            if section == TargetSection::RelatedWork {
                related_work += 1;
            }
            candidates[i].matched = Some(section);
            candidates[i].match_kind = MatchKind::Implicit;
        }
    }
    diagnostics
}
