use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pwalnut::automata::{dfa_to_dot, dfa_to_text, dfao_to_dot, dfao_to_text, Dfao};
use pwalnut::logic::{LogicError, Session, DEFAULT_STATE_LIMIT};
use pwalnut::morphism::{catalog, Morphism};
use pwalnut::search::{self, AntiMode, Budget, CellResult, Verdict};
use pwalnut::theorems::{self, Options};
use pwalnut::word::{self, Occurrence, PartialWord};

/// Exit statuses. Clap reports its own usage errors with 2 as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    False = 1,
    Usage = 2,
    Resource = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Parser)]
#[command(
    name = "pwalnut",
    version,
    about = "Repetitions in partial words, and a small Walnut-style prover"
)]
struct Cli {
    /// Print one JSON record per result instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script of morphism/promote/image/eval commands.
    Run {
        script: PathBuf,
        /// Print the per-subformula state counts of every eval.
        #[arg(long)]
        stats: bool,
        /// Write automata of evals with free variables into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
    /// Generate a prefix of a catalog word or of a morphism's fixed point,
    /// optionally scanning it for a repetition.
    Word {
        /// A catalog id such as `tm` or `phi_psi_fix`, or rules like `0->01,1->10`.
        spec: String,
        #[arg(long, default_value_t = 100_000)]
        length: usize,
        #[arg(long, value_enum)]
        scan: Option<Scan>,
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        /// Seed letter for a morphism given as rules.
        #[arg(long, default_value_t = 0)]
        seed: u8,
        /// Digit to read as a hole in a morphism given as rules.
        #[arg(long)]
        hole_digit: Option<u8>,
    },
    /// Longest one-hole binary word under a square/antisquare budget.
    Search {
        #[arg(long, default_value_t = 0)]
        a: usize,
        /// Omit for no antisquare bound.
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Antisquare)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        holes: usize,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: u64,
        /// Compute every cell with a <= A and b <= B, e.g. `5x8`.
        #[arg(long, value_parser = parse_region)]
        region: Option<(usize, usize)>,
    },
    /// Print a word automaton: `T`, `VTM`, a uniform catalog id, or a word
    /// defined by a script.
    ExportDfao {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Run this script first and export one of the words it defines.
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
    /// Run a built-in check, or `all` of them.
    Verify {
        id: String,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = 1_000_000)]
        prefix_length: usize,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scan {
    Square,
    Antisquare,
    Cube,
    NontrivialSquare,
    WeakOverlap,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Antisquare,
    CAntisquare,
}

impl From<ModeArg> for AntiMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Antisquare => AntiMode::Antisquare,
            ModeArg::CAntisquare => AntiMode::CAntisquare,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Dot,
}

fn parse_region(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

/// An error already reduced to the exit status it maps to.
struct Failure {
    status: Status,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            status: Status::Usage,
            message: message.to_string(),
        }
    }
}

impl From<LogicError> for Failure {
    fn from(e: LogicError) -> Self {
        Failure {
            status: if e.is_resource_exceeded() {
                Status::Resource
            } else {
                Status::Usage
            },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output { json: cli.json };
    let result = match cli.command {
        Command::Run {
            script,
            stats,
            emit,
            limit,
        } => run(&out, &script, stats, emit.as_deref(), limit),
        Command::Word {
            spec,
            length,
            scan,
            min_order,
            seed,
            hole_digit,
        } => word_cmd(&out, &spec, length, scan, min_order, seed, hole_digit),
        Command::Search {
            a,
            b,
            mode,
            holes,
            cutoff,
            region,
        } => search_cmd(&out, a, b, mode.into(), holes, cutoff as usize, region),
        Command::ExportDfao {
            name,
            format,
            script,
            limit,
        } => export(&name, format, script.as_deref(), limit),
        Command::Verify {
            id,
            limit,
            prefix_length,
            cutoff,
        } => verify(
            &out,
            &id,
            &Options {
                state_limit: limit,
                prefix_length,
                cutoff: cutoff as usize,
            },
        ),
    };
    match result {
        Ok(status) => status.into(),
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.status.into()
        }
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, text: impl AsRef<str>, record: serde_json::Value) {
        if self.json {
            put(&format!("{record}\n"));
        } else {
            put(&format!("{}\n", text.as_ref()));
        }
    }
}

/// Writes to stdout, ignoring a reader that went away (`| head`).
fn put(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run(
    out: &Output,
    path: &std::path::Path,
    stats: bool,
    emit: Option<&std::path::Path>,
    limit: usize,
) -> Result<Status, Failure> {
    let text = read(path)?;
    let mut session = Session::with_limit(limit);
    let results = session.run_script(&text)?;
    let mut status = Status::Ok;
    for r in &results {
        if r.verdict == Some(false) {
            status = Status::False;
        }
        let mut file = None;
        if let (None, Some(dir)) = (r.verdict, emit) {
            fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
            let p = dir.join(format!("{}.txt", r.name));
            fs::write(&p, dfa_to_text(&r.automaton)).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            fs::write(dir.join(format!("{}.dot", r.name)), dfa_to_dot(&r.automaton, &r.name))
                .map_err(|e| Failure::usage(e.to_string()))?;
            file = Some(p.display().to_string());
        }
        let entries: Vec<_> = r
            .log
            .entries
            .iter()
            .map(|e| json!({"formula": e.formula, "states": e.states, "millis": e.millis}))
            .collect();
        out.emit(
            format!("{}: {} ({:.0}ms)", r.name, r.summary(), r.millis),
            json!({
                "eval": r.name,
                "verdict": r.verdict,
                "free_vars": r.free_vars,
                "states": r.automaton.states(),
                "millis": r.millis,
                "automaton_file": file,
                "log": if stats { Some(entries) } else { None },
            }),
        );
        if stats && !out.json {
            put(&r.log.to_string());
        }
    }
    Ok(status)
}

fn prefix_of(spec: &str, length: usize, seed: u8, hole_digit: Option<u8>) -> Result<PartialWord, Failure> {
    if spec.contains("->") {
        let m = match hole_digit {
            Some(d) => Morphism::parse_with_hole(spec, d),
            None => Morphism::parse(spec),
        }
        .map_err(Failure::usage)?;
        m.fixed_point_prefix(seed, length).map_err(Failure::usage)
    } else {
        catalog::named_word_prefix(spec, length).map_err(Failure::usage)
    }
}

fn word_cmd(
    out: &Output,
    spec: &str,
    length: usize,
    scan: Option<Scan>,
    min_order: usize,
    seed: u8,
    hole_digit: Option<u8>,
) -> Result<Status, Failure> {
    let w = prefix_of(spec, length, seed, hole_digit)?;
    let Some(scan) = scan else {
        out.emit(
            w.to_string(),
            json!({"word": spec, "length": w.len(), "prefix": w.to_string()}),
        );
        return Ok(Status::Ok);
    };
    let (kind, found): (&str, Option<Occurrence>) = match scan {
        Scan::Square => ("square", word::find_square(&w, min_order)),
        Scan::Antisquare => (
            "antisquare",
            word::find_antisquare(&w, min_order).map_err(Failure::usage)?,
        ),
        Scan::Cube => ("cube", word::find_cube(&w, min_order)),
        Scan::NontrivialSquare => ("nontrivial square", word::find_nontrivial_square(&w)),
        Scan::WeakOverlap => ("weak overlap", word::find_weak_overlap(&w)),
    };
    match found {
        Some(o) => {
            let factor = w.factor(o.start, o.span()).to_string();
            out.emit(
                format!("{kind} of order {} at position {}: {factor}", o.order, o.start),
                json!({"word": spec, "length": w.len(), "scan": kind, "found": true,
                       "start": o.start, "order": o.order, "factor": factor}),
            );
            Ok(Status::False)
        }
        None => {
            out.emit(
                format!("no {kind} of order >= {min_order} in the first {} symbols", w.len()),
                json!({"word": spec, "length": w.len(), "scan": kind, "found": false, "min_order": min_order}),
            );
            Ok(Status::Ok)
        }
    }
}

fn cell_record(c: &CellResult) -> serde_json::Value {
    let (verdict, length) = match c.outcome.verdict {
        Verdict::Exact(n) => ("exact", Some(n)),
        Verdict::AtLeast(n) => ("at-least", Some(n)),
        Verdict::None => ("none", None),
    };
    json!({
        "a": c.a,
        "b": if c.b == usize::MAX { None } else { Some(c.b) },
        "mode": c.mode.to_string(),
        "verdict": verdict,
        "length": length,
        "witness": c.outcome.witness.as_ref().map(ToString::to_string),
        "nodes": c.outcome.nodes,
        "millis": c.millis,
    })
}

fn search_cmd(
    out: &Output,
    a: usize,
    b: Option<usize>,
    mode: AntiMode,
    holes: usize,
    cutoff: usize,
    region: Option<(usize, usize)>,
) -> Result<Status, Failure> {
    if let Some((rows, cols)) = region {
        let cells = search::region(0..=rows, 0..=cols, mode, holes, cutoff).map_err(Failure::usage)?;
        if out.json {
            for c in &cells {
                put(&format!("{}\n", cell_record(c)));
            }
        } else {
            put(&search::render_table(&cells));
        }
        return Ok(Status::Ok);
    }
    let b = b.unwrap_or(usize::MAX);
    let started = std::time::Instant::now();
    let outcome = search::longest(Budget::new(a, b, mode).with_holes(holes), cutoff).map_err(Failure::usage)?;
    let cell = CellResult {
        a,
        b,
        mode,
        outcome,
        millis: started.elapsed().as_secs_f64() * 1e3,
    };
    let verdict = match cell.outcome.verdict {
        Verdict::Exact(n) => format!("exactly {n}"),
        Verdict::AtLeast(n) => format!("at least {n} (cutoff reached)"),
        Verdict::None => "no word meets the budget".into(),
    };
    let witness = cell
        .outcome
        .witness
        .as_ref()
        .map_or(String::new(), |w| format!(", witness {w}"));
    out.emit(
        format!(
            "{verdict}{witness} ({} nodes, {:.0}ms)",
            cell.outcome.nodes, cell.millis
        ),
        cell_record(&cell),
    );
    Ok(Status::Ok)
}

fn catalog_dfao(id: &str, limit: usize) -> Result<Dfao, Failure> {
    let named = catalog::lookup(id).map_err(Failure::usage)?;
    let width = named
        .generator
        .uniform_width()
        .ok_or_else(|| Failure::usage(format!("{id} is not generated by a uniform morphism")))?;
    let coding = Morphism::identity(named.generator.domain_size() as u8);
    let mut d = Dfao::from_uniform_fixed_point(&named.generator, &coding, named.seed, width as u32)
        .map_err(|e| Failure::usage(e.to_string()))?;
    for m in &named.images {
        d = d.image(m, limit).map_err(LogicError::from)?.minimized();
    }
    Ok(d)
}

fn export(name: &str, format: Format, script: Option<&std::path::Path>, limit: usize) -> Result<Status, Failure> {
    let mut session = Session::with_limit(limit);
    if let Some(path) = script {
        session.run_script(&read(path)?)?;
    }
    let dfao = match session.word(name) {
        Some(d) => d.clone(),
        None => catalog_dfao(name, limit)?,
    };
    match format {
        Format::Text => put(&dfao_to_text(&dfao)),
        Format::Dot => put(&dfao_to_dot(&dfao, name)),
    }
    Ok(Status::Ok)
}

fn verify(out: &Output, id: &str, opts: &Options) -> Result<Status, Failure> {
    let ids: Vec<&str> = if id == "all" { theorems::IDS.to_vec() } else { vec![id] };
    let mut worst = Status::Ok;
    for id in ids {
        let status = match theorems::verify(id, opts) {
            Ok(report) => {
                out.emit(
                    report.to_string().trim_end(),
                    json!({"id": report.id, "method": report.method.to_string(), "passed": report.passed,
                           "details": report.details, "millis": report.millis}),
                );
                if report.passed {
                    Status::Ok
                } else {
                    Status::False
                }
            }
            Err(e) => {
                let status = if e.is_resource_exceeded() {
                    Status::Resource
                } else {
                    Status::Usage
                };
                out.emit(format!("{id}: ERROR {e}"), json!({"id": id, "error": e.to_string()}));
                status
            }
        };
        worst = worst.max(status);
    }
    Ok(worst)
}
