//! Judgment CSV input and raw-score CSV output.
//!
//! Input columns are `topic,system,e,s` in any order. Lines starting with
//! `#` are comments; `# exhaustivity-scale: 0-2` declares the three-level
//! scale and produces a warning, since scores assume grades 0 to 3.

use std::io::Read;

use super::{quant_gen, Judgment, Report, MAX_GRADE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgmentFile {
    pub judgments: Vec<Judgment>,
    pub warnings: Vec<String>,
}

fn declared_scale(text: &str) -> Option<String> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|c| c.trim().strip_prefix("exhaustivity-scale:"))
        .map(|v| v.trim().to_owned())
        .next_back()
}

pub fn load_judgments(mut input: impl Read) -> Result<JudgmentFile> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut warnings = Vec::new();
    if let Some(scale) = declared_scale(&text) {
        if scale != "0-3" {
            warnings.push(format!(
                "dataset declares exhaustivity scale {scale}; scores assume grades 0-3"
            ));
        }
    }

    let blank = text
        .lines()
        .map(str::trim)
        .all(|l| l.is_empty() || l.starts_with('#'));
    if blank {
        return Ok(JudgmentFile {
            judgments: Vec::new(),
            warnings,
        });
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Csv {
        line: 1,
        message: e.to_string(),
    })?;
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Csv {
            line: 1,
            message: format!("missing column {name:?}"),
        })
    };
    let (topic, system, e, s) = (column("topic")?, column("system")?, column("e")?, column("s")?);

    let mut judgments = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|err| Error::Csv {
            line: err.position().map_or(0, |p| p.line()),
            message: err.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let grade = |i: usize, name: &str| -> Result<u8> {
            let raw = field(i);
            let value: u8 = raw.parse().map_err(|_| Error::Csv {
                line,
                message: format!("{name}={raw:?} is not a grade"),
            })?;
            if value > MAX_GRADE {
                return Err(Error::Validation(format!(
                    "line {line}: {name}={value} is outside 0..={MAX_GRADE}"
                )));
            }
            Ok(value)
        };
        let j = Judgment {
            topic: field(topic).to_owned(),
            system: field(system).to_owned(),
            e: grade(e, "e")?,
            s: grade(s, "s")?,
        };
        if j.system.is_empty() {
            return Err(Error::Validation(format!("line {line}: empty system id")));
        }
        quant_gen(j.e, j.s)?;
        judgments.push(j);
    }
    Ok(JudgmentFile {
        judgments,
        warnings,
    })
}

/// `topic,system,e,s,quant_gen` rows in report order.
pub fn raw_scores_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Csv {
        line: 0,
        message: e.to_string(),
    };
    w.write_record(["topic", "system", "e", "s", "quant_gen"])
        .map_err(csv_err)?;
    for r in &report.raw {
        w.write_record([
            r.topic.clone(),
            r.system.clone(),
            r.e.to_string(),
            r.s.to_string(),
            r.score.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::compare_systems;

    #[test]
    fn parses_columns_in_any_order() {
        let f = load_judgments("system,topic,s,e\nA,t1,3,2\n".as_bytes()).unwrap();
        assert_eq!(
            f.judgments,
            vec![Judgment {
                topic: "t1".into(),
                system: "A".into(),
                e: 2,
                s: 3
            }]
        );
        assert!(f.warnings.is_empty());
    }

    #[test]
    fn out_of_range_grade_names_the_line() {
        let err = load_judgments("topic,system,e,s\nt,A,1,1\nt,A,4,1\n".as_bytes()).unwrap_err();
        match err {
            Error::Validation(m) => assert!(m.starts_with("line 3"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_row_names_the_line() {
        let err = load_judgments("topic,system,e,s\nt,A,x,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Csv { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn missing_column() {
        let err = load_judgments("topic,system,e\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Csv { line: 1, .. }));
    }

    #[test]
    fn three_level_scale_warns() {
        let f = load_judgments("# exhaustivity-scale: 0-2\ntopic,system,e,s\nt,A,2,2\n".as_bytes()).unwrap();
        assert_eq!(f.warnings.len(), 1);
        assert_eq!(f.judgments.len(), 1);
    }

    #[test]
    fn raw_csv_rows() {
        let f = load_judgments("topic,system,e,s\nt,A,3,3\n".as_bytes()).unwrap();
        let r = compare_systems(&f.judgments, None).unwrap();
        assert_eq!(raw_scores_csv(&r).unwrap(), "topic,system,e,s,quant_gen\nt,A,3,3,1\n");
    }
}
