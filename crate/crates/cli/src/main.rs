//! `fhs`: command-line access to formal Hodge structure computations.
//!
//! Exit status is 0 on success, 1 when an input fails validation or a
//! computation's hypotheses fail, and 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fhs_core::fhs::FormalHodge;
use fhs_core::functors::Shift;
use fhs_core::io::{parse, print_payload, DrRecord, Payload};
use fhs_core::report::{self, Outcome};
use fhs_core::{fixtures, Error};

#[derive(Parser)]
#[command(name = "fhs", version, about = "Exact computations with formal Hodge structures")]
struct Cli {
    /// Emit reports as `result` documents instead of plain lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Iota,
    Tau,
}

#[derive(Subcommand)]
enum Verb {
    /// Check any document and print its status line.
    Validate { file: PathBuf },
    /// Canonical parts and the decomposition sequences.
    Decompose { file: PathBuf },
    /// Class in the Grothendieck group.
    K0 { file: PathBuf },
    /// Presentation of the Hom group.
    Hom { source: PathBuf, target: PathBuf },
    /// Ext^1 of Z(-p) by the object, as a Lie extension.
    Ext {
        file: PathBuf,
        #[arg(long)]
        tate: usize,
    },
    /// The formal Jacobian `V_p / H_Z`.
    Jacobian {
        file: PathBuf,
        #[arg(long)]
        p: usize,
    },
    /// ESV Albanese of sharp data with its two-route certificate.
    Esv { file: PathBuf },
    /// Albanese of a punctured curve pushed along `Z`.
    Fw {
        serre: PathBuf,
        #[arg(long)]
        z: PathBuf,
        /// Level-1 object whose `Ext^1(Z(-1), -)` certifies the result.
        #[arg(long)]
        level_one: Option<PathBuf>,
    },
    /// Sharp cohomology object of de Rham data.
    Sharp {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Raise the level with iota or tau, or lower it with `--down`.
    ShiftLevel {
        file: PathBuf,
        #[arg(long, value_enum)]
        via: Via,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        down: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tate twist by `k`.
    Twist {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the fixture corpus to a directory, or compare with `--check`.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        check: bool,
    },
}

/// Failures sorted by exit status.
enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Run<T> = Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Run<Payload> {
    let text = read(path)?;
    parse(&text)
        .map(|d| d.payload)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn wrong_kind(path: &Path, want: &str, got: &Payload) -> Failure {
    Failure::Invalid(format!("{}: expected {want}, found a {} document", path.display(), got.kind()))
}

/// An object from a `fhs` document or built from a `dr` record.
fn load_fhs(path: &Path) -> Run<FormalHodge> {
    match load(path)? {
        Payload::Fhs(x) => Ok(x),
        Payload::Dr(r) => Ok(report::dr_object(&r)?),
        p => Err(wrong_kind(path, "a fhs or dr document", &p)),
    }
}

fn load_dr(path: &Path) -> Run<DrRecord> {
    match load(path)? {
        Payload::Dr(r) => Ok(r),
        p => Err(wrong_kind(path, "a dr document", &p)),
    }
}

/// Prints the object's document, or writes it and prints a summary.
fn emit(x: FormalHodge, out: Option<&Path>) -> Run<String> {
    let summary = report::summary(&x);
    let text = print_payload(Payload::Fhs(x));
    match out {
        None => Ok(text),
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(format!("wrote {}: {summary}\n", p.display()))
        }
    }
}

fn corpus(dir: &Path, check: bool) -> Run<Outcome> {
    let mut lines = Vec::new();
    let mut ok = true;
    if !check {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    for (name, text) in fixtures::corpus_text() {
        let path = dir.join(name);
        if check {
            let same = fs::read_to_string(&path).map(|t| t == text).unwrap_or(false);
            ok &= same;
            lines.push(format!("{name}: {}", if same { "matches" } else { "DIFFERS" }));
        } else {
            fs::write(&path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            lines.push(format!("{name}: written"));
        }
    }
    Ok(Outcome {
        report: fhs_core::io::Report {
            verb: "corpus".into(),
            lines,
        },
        ok,
    })
}

enum Output {
    Report(Outcome),
    Text(String),
}

fn run(verb: Verb) -> Run<Output> {
    use Output::{Report, Text};
    Ok(match verb {
        Verb::Validate { file } => Report(report::validate(&load(&file)?)),
        Verb::Decompose { file } => Report(report::decompose(&load_fhs(&file)?)?),
        Verb::K0 { file } => Report(report::k0(&load_fhs(&file)?)),
        Verb::Hom { source, target } => Report(report::hom(&load_fhs(&source)?, &load_fhs(&target)?)?),
        Verb::Ext { file, tate } => Report(report::ext_tate(&load_fhs(&file)?, tate)?),
        Verb::Jacobian { file, p } => Report(report::jacobian(&load_fhs(&file)?, p)?),
        Verb::Esv { file } => Report(report::esv(&load_dr(&file)?)?),
        Verb::Fw { serre, z, level_one } => {
            let e = match load(&serre)? {
                Payload::Lie(e) => e,
                p => return Err(wrong_kind(&serre, "a lie document", &p)),
            };
            let zs = match load(&z)? {
                Payload::Subspace(s) => s,
                p => return Err(wrong_kind(&z, "a subspace document", &p)),
            };
            let x = level_one.as_deref().map(load_fhs).transpose()?;
            Report(report::fw(&e, &zs, x.as_ref())?)
        }
        Verb::Sharp { file, n, k, out } => Text(emit(report::sharp(&load_dr(&file)?, n, k)?, out.as_deref())?),
        Verb::ShiftLevel { file, via, k, down, out } => {
            let kind = match via {
                Via::Iota => Shift::Iota,
                Via::Tau => Shift::Tau,
            };
            Text(emit(report::shift_level(&load_fhs(&file)?, kind, k, down)?, out.as_deref())?)
        }
        Verb::Twist { file, k, out } => Text(emit(report::twist(&load_fhs(&file)?, k), out.as_deref())?),
        Verb::Corpus { dir, check } => Report(corpus(&dir, check)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(o)) => {
            if cli.json {
                print!("{}", print_payload(Payload::Result(o.report.clone())));
            } else {
                print!("{}", o.text());
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
