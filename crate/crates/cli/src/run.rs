//! Dispatch, output routing and per-input parallelism.
//!
//! With one input, JSON goes to `--out` or standard output. With several,
//! each input gets `<stem>.<kind>.json` inside `--out` (a directory) or next
//! to the input. Inputs run in parallel; results are reported in input order
//! and the exit code is that of the first failing input.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use structpass::highlight::{AnnotationStyle, WriteMode};
use structpass::retrieval::Stoplist;
use structpass::structure::StructureConfig;

use crate::args::{Cli, Command, EvalArgs, HighlightArgs, LayoutArgs, SearchArgs, SectionsArgs, StructureArgs};
use crate::commands::{cmd_eval, cmd_extract, cmd_highlight, cmd_search, cmd_sections, to_json, write_file, RunConfig};
use crate::error::{CliError, CliResult};

/// Output streams for one invocation.
pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub verbose: u8,
}

impl Streams<'_> {
    fn print(&mut self, text: &str) -> CliResult<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("standard output: {e}")))
    }

    fn warn(&mut self, text: &str) {
        let _ = writeln!(self.err, "structpass: {text}");
    }

    fn note(&mut self, path: &Path, notes: &[String]) {
        if self.verbose > 0 {
            for n in notes {
                let _ = writeln!(self.err, "{}: {n}", path.display());
            }
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut io = Streams {
        out,
        err,
        verbose: cli.verbose,
    };
    let result = match cli.command {
        Command::Extract(a) => extract(&a.inputs, a.out.as_deref(), &a.layout, &mut io),
        Command::Sections(a) => sections(&a, &mut io),
        Command::Search(a) => search(&a, &mut io),
        Command::Highlight(a) => highlight(&a, &mut io),
        Command::Eval(a) => eval(&a, &mut io),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            io.warn(&e.to_string());
            e.exit_code()
        }
    }
}

enum Dest {
    Stdout,
    File(PathBuf),
}

fn stem(path: &Path) -> String {
    let s = path.file_stem().map_or_else(|| "output".into(), |s| s.to_string_lossy().into_owned());
    s.strip_suffix(".layout").map(str::to_owned).unwrap_or(s)
}

fn sibling(dir: Option<&Path>, input: &Path, suffix: &str) -> PathBuf {
    let name = format!("{}.{suffix}", stem(input));
    match dir {
        Some(d) => d.join(name),
        None => input.with_file_name(name),
    }
}

/// Output path per input. `out` names a file for one input and a directory
/// for several.
fn destinations(inputs: &[PathBuf], out: Option<&Path>, suffix: &str) -> CliResult<Vec<Dest>> {
    if let [_] = inputs {
        return Ok(vec![out.map_or(Dest::Stdout, |p| Dest::File(p.to_owned()))]);
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_owned(),
            source,
        })?;
    }
    let paths: Vec<PathBuf> = inputs.iter().map(|i| sibling(out, i, suffix)).collect();
    let mut seen = BTreeSet::new();
    if let Some(dup) = paths.iter().find(|p| !seen.insert(*p)) {
        return Err(CliError::Usage(format!("two inputs would both write {}", dup.display())));
    }
    Ok(paths.into_iter().map(Dest::File).collect())
}

fn emit(io: &mut Streams<'_>, dest: &Dest, text: &str) -> CliResult<()> {
    match dest {
        Dest::Stdout => io.print(text),
        Dest::File(p) => write_file(p, text.as_bytes()),
    }
}

/// Runs `job` over all inputs in parallel, then hands each result to
/// `report` in input order. Returns the first failure.
fn for_each_input<T: Send>(
    inputs: &[PathBuf],
    io: &mut Streams<'_>,
    job: impl Fn(usize, &Path) -> CliResult<T> + Sync,
    mut report: impl FnMut(&mut Streams<'_>, usize, T) -> CliResult<()>,
) -> CliResult<()> {
    let results: Vec<CliResult<T>> = inputs.par_iter().enumerate().map(|(i, p)| job(i, p)).collect();
    let single = inputs.len() == 1;
    let mut first: Option<CliError> = None;
    for (i, r) in results.into_iter().enumerate() {
        let r = r.and_then(|v| report(io, i, v));
        if let Err(e) = r {
            if single {
                return Err(e);
            }
            io.warn(&e.to_string());
            first.get_or_insert(e);
        }
    }
    match first {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn extract(inputs: &[PathBuf], out: Option<&Path>, layout: &LayoutArgs, io: &mut Streams<'_>) -> CliResult<()> {
    let dests = destinations(inputs, out, "layout.json")?;
    let config = layout.config();
    for_each_input(inputs, io, |_, p| cmd_extract(p, &config), |io, i, json| emit(io, &dests[i], &json))
}

fn structure_config(args: &StructureArgs) -> CliResult<StructureConfig> {
    let mut config = match &args.config {
        Some(path) => StructureConfig::load(path).map_err(|e| CliError::input(path, e))?,
        None => StructureConfig::shipped(),
    };
    if let Some(r) = args.fallback_ratio {
        config.fallback_ratio = r;
    }
    Ok(config)
}

fn run_config(structure: &StructureArgs, layout: &LayoutArgs) -> CliResult<RunConfig> {
    let run = RunConfig {
        sections: structure.sections.clone().unwrap_or_default().0,
        layout: layout.config(),
        structure: structure_config(structure)?,
        ..RunConfig::default()
    };
    run.validate()?;
    Ok(run)
}

fn sections(a: &SectionsArgs, io: &mut Streams<'_>) -> CliResult<()> {
    let run = run_config(&a.structure, &a.layout)?;
    let dests = destinations(&a.inputs, a.out.as_deref(), "sections.json")?;
    for_each_input(
        &a.inputs,
        io,
        |_, p| cmd_sections(p, &run),
        |io, i, o| {
            io.note(&a.inputs[i], &o.notes);
            emit(io, &dests[i], &to_json(&o.json)?)
        },
    )
}

fn search(a: &SearchArgs, io: &mut Streams<'_>) -> CliResult<()> {
    let mut run = run_config(&a.structure, &a.layout)?;
    run.query = a.query.clone();
    run.min_score = a.min_score as usize;
    run.color = a.color;
    run.highlight = !a.no_highlight;
    if let Some(path) = &a.stoplist {
        run.stoplist = Stoplist::load(path).map_err(|e| match e {
            structpass::Error::Io(source) if source.kind() == std::io::ErrorKind::NotFound => {
                CliError::NotFound { path: path.clone() }
            }
            other => CliError::input(path, other),
        })?;
    }
    let single = a.inputs.len() == 1;
    if !single && a.sections_map.is_some() {
        return Err(CliError::Usage("--sections-map needs a single input".into()));
    }
    if !single && a.json {
        return Err(CliError::Usage("--json needs a single input; use --out DIR".into()));
    }
    let json_dests: Vec<Option<PathBuf>> = match (&a.out, single) {
        (None, true) => vec![None],
        (out, _) => destinations(&a.inputs, out.as_deref(), "passages.json")?
            .into_iter()
            .map(|d| match d {
                Dest::File(p) => Some(p),
                Dest::Stdout => None,
            })
            .collect(),
    };
    let pdf_dests: Vec<PathBuf> = match (&a.pdf_out, single) {
        (Some(p), true) => vec![p.clone()],
        (dir, _) => {
            if let Some(d) = dir {
                std::fs::create_dir_all(d).map_err(|source| CliError::Write {
                    path: d.clone(),
                    source,
                })?;
            }
            a.inputs
                .iter()
                .map(|i| sibling(dir.as_deref(), i, "highlighted.pdf"))
                .collect()
        }
    };

    for_each_input(
        &a.inputs,
        io,
        |_, p| cmd_search(p, a.sections_map.as_deref(), &run),
        |io, i, o| {
            let input = &a.inputs[i];
            io.note(input, &o.notes);
            let json = to_json(&o.json)?;
            if let Some(path) = &json_dests[i] {
                write_file(path, json.as_bytes())?;
            }
            if let Some(w) = &o.highlighted {
                write_file(&pdf_dests[i], &w.bytes)?;
                io.note(
                    input,
                    &[format!(
                        "{} annotations written to {} ({:?})",
                        w.annotations,
                        pdf_dests[i].display(),
                        w.mode
                    )],
                );
            }
            if a.json {
                return io.print(&json);
            }
            let mut listing = String::new();
            if !single {
                listing.push_str(&format!("== {}\n", input.display()));
            }
            let j = &o.json;
            let status = if j.fallback && !j.requested.is_empty() {
                " (section filter not applied)"
            } else if j.no_match {
                " (no passage inside the requested sections)"
            } else {
                ""
            };
            listing.push_str(&format!("{} passages{status}\n", j.passages.len()));
            for p in &j.passages {
                let section = p.section.map_or("-".to_owned(), |s| s.to_string());
                listing.push_str(&format!("{:>3}  {:<14} {:>7}..{:<7} {}\n", p.score, section, p.start, p.end, p.text.replace('\n', " ")));
            }
            io.print(&listing)
        },
    )
}

fn highlight(a: &HighlightArgs, io: &mut Streams<'_>) -> CliResult<()> {
    let style = AnnotationStyle {
        appearance: !a.no_appearance,
    };
    let written = cmd_highlight(
        &a.input,
        &a.passages,
        a.layout_json.as_deref(),
        &a.layout.config(),
        a.color,
        &style,
    )?;
    let out = a.out.clone().unwrap_or_else(|| sibling(None, &a.input, "highlighted.pdf"));
    write_file(&out, &written.bytes)?;
    if written.mode == WriteMode::Unchanged {
        io.warn("no passages to highlight; output is a copy of the input");
    }
    io.note(
        &a.input,
        &[format!("{} annotations written to {} ({:?})", written.annotations, out.display(), written.mode)],
    );
    Ok(())
}

fn eval(a: &EvalArgs, io: &mut Streams<'_>) -> CliResult<()> {
    let o = cmd_eval(&a.input, a.systems.as_deref())?;
    for w in &o.report.warnings {
        io.warn(&format!("{}: {w}", a.input.display()));
    }
    let json = to_json(&o.report)?;
    if let Some(path) = &a.out {
        write_file(path, json.as_bytes())?;
    }
    if let Some(path) = &a.raw_out {
        write_file(path, o.raw_csv.as_bytes())?;
    }
    if a.json {
        return io.print(&json);
    }
    let mut table = format!(
        "{:<16} {:>5} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}\n",
        "system", "n", "mean", "q1", "median", "q3", "min", "max"
    );
    for (name, s) in &o.report.systems {
        table.push_str(&format!(
            "{name:<16} {:>5} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4}\n",
            s.n, s.mean, s.q1, s.median, s.q3, s.min, s.max
        ));
    }
    io.print(&table)
}
