use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sarkisov::corpus;
use sarkisov::exact::{parse_rat, AffineSubspace, QVector};
use sarkisov::formats::{GeographyFile, InputFile, NerveFile};
use sarkisov::geography::{self, ValidGeography};
use sarkisov::program::{self, DecoratedNerve};
use sarkisov::relations::{self, DEFAULT_MAX_CYCLE_LEN};
use sarkisov::report;

#[derive(Parser)]
#[command(name = "sarkisov", version, about = "Geographies of ample models, their nerves and Sarkisov relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a geography against the validity rules.
    Validate(FileArg),
    /// Emit the decorated nerve.
    Nerve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = NerveOut::Dot)]
        out: NerveOut,
    },
    /// Typed link table.
    Links(FileArg),
    /// Elementary relations with their classification.
    Relations {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLE_LEN)]
        max_len: usize,
    },
    /// Residual complex at a non-big face and its nerve.
    Residual {
        file: PathBuf,
        /// Ray indices spanning the face, e.g. 0,4.
        #[arg(long, value_delimiter = ',', conflicts_with = "apex", required_unless_present = "apex")]
        face: Vec<usize>,
        #[arg(long)]
        apex: bool,
    },
    /// Section by the affine subspace base + span(dirs), as a geography file.
    Slice {
        file: PathBuf,
        /// Comma separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Vectors separated by ';', coordinates by ','.
        #[arg(long, allow_hyphen_values = true)]
        dirs: String,
    },
    /// Cover and H1 span check for the residual loops.
    VerifyGeneration(FileArg),
    /// Bundled inputs.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Draw a rank 3 geography as SVG.
    Report {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Args)]
struct FileArg {
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum NerveOut {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Export { name: String },
}

enum Failure {
    /// Input is fine, the check it asked for failed.
    Check(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: impl std::fmt::Display) -> Failure {
    Failure::Check(e.to_string())
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &impl serde::Serialize) {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

/// Reads a file, falling back to a bundled entry of the same name.
fn load(path: &Path) -> Result<InputFile, Failure> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let name = path.to_string_lossy();
            match corpus::get(&name) {
                Some(entry) => entry.text.to_string(),
                None => return Err(usage(format!("{}: {e}", path.display()))),
            }
        }
    };
    InputFile::parse(&text).map_err(|e| check(format!("{}: {e}", path.display())))
}

fn valid(f: &GeographyFile) -> Result<ValidGeography, Failure> {
    f.to_geography().map_err(check)?.into_valid().map_err(check)
}

fn nerve_of(input: &InputFile) -> Result<DecoratedNerve, Failure> {
    match input {
        InputFile::Geography(f) => program::decorated_nerve(&valid(f)?).map_err(check),
        InputFile::Nerve(f) => f.to_nerve().map_err(check),
    }
}

fn geography_only(input: InputFile, what: &str) -> Result<GeographyFile, Failure> {
    match input {
        InputFile::Geography(f) => Ok(f),
        InputFile::Nerve(_) => Err(usage(format!("{what} needs a geography file, not a nerve file"))),
    }
}

fn parse_vector(s: &str) -> Result<QVector, Failure> {
    s.split(',')
        .map(|x| parse_rat(x.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map(QVector::new)
        .map_err(usage)
}

fn validate(file: &Path) -> Outcome {
    match load(file)? {
        InputFile::Geography(f) => {
            let report = f.to_geography().map_err(check)?.validate();
            print_json(&json!({ "passed": report.passed(), "rules": report.rules }));
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check(format!("failed rules: {}", report.failed_rules().join(", "))))
            }
        }
        InputFile::Nerve(f) => {
            let n = f.to_nerve().map_err(check)?;
            print_json(&json!({
                "passed": true,
                "vertices": n.vertices.len(),
                "edges": n.edges.len(),
                "two_simplices": n.two_simplices().len(),
            }));
            Ok(())
        }
    }
}

fn nerve(file: &Path, out: NerveOut) -> Outcome {
    let n = nerve_of(&load(file)?)?;
    match out {
        NerveOut::Dot => emit(&report::nerve_dot(&n)),
        NerveOut::Json => emit(&NerveFile::from_nerve(&n, None).to_json()),
    }
    Ok(())
}

fn links(file: &Path) -> Outcome {
    let input = load(file)?;
    let (edges, issues) = match &input {
        InputFile::Geography(f) => {
            let t = program::links(&valid(f)?);
            (t.links, t.issues)
        }
        InputFile::Nerve(_) => (nerve_of(&input)?.edges, Vec::new()),
    };
    let n = nerve_of(&input)?;
    let rows: Vec<_> = edges
        .iter()
        .map(|e| {
            json!({
                "a": n.vertices[e.a].id,
                "b": n.vertices[e.b].id,
                "hinge": e.hinge,
                "T_model": e.t_model,
                "type_ab": e.link_type,
                "type_ba": e.link_type.reversed(),
                "unsupported_type_ii": e.unsupported_type_ii,
            })
        })
        .collect();
    print_json(&json!({ "links": rows, "issues": issues }));
    Ok(())
}

fn relations_cmd(file: &Path, max_len: usize) -> Outcome {
    let n = nerve_of(&load(file)?)?;
    let rel = relations::elementary_relations(&n, max_len).map_err(usage)?;
    print_json(&rel);
    Ok(())
}

fn residual(file: &Path, face: &[usize], apex: bool) -> Outcome {
    let f = geography_only(load(file)?, "residual")?;
    let vg = valid(&f)?;
    let cell = if apex {
        vg.apex_cell().ok_or_else(|| usage("this geography has no recorded apex"))?
    } else {
        vg.find_cell(face)
            .ok_or_else(|| usage(format!("no cell is spanned by rays {face:?}")))?
    };
    let r = relations::residual_report(&vg, cell).map_err(usage)?;
    print_json(&r);
    Ok(())
}

fn slice(file: &Path, base: &str, dirs: &str) -> Outcome {
    let f = geography_only(load(file)?, "slice")?;
    let vg = valid(&f)?;
    let base = parse_vector(base)?;
    let dirs = dirs
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_vector)
        .collect::<Result<Vec<_>, _>>()?;
    let d = dirs.len();
    let h = AffineSubspace::new(base, dirs).map_err(usage)?;
    let s = geography::slice(&vg, &h, d).map_err(check)?;
    emit(&GeographyFile::from_geography(&s.geography, None).to_json());
    Ok(())
}

fn verify_generation(file: &Path) -> Outcome {
    let report = match load(file)? {
        InputFile::Geography(f) => relations::verify_generation(&valid(&f)?),
        InputFile::Nerve(f) => relations::verify_generation_nerve(&f.to_nerve().map_err(check)?),
    }
    .map_err(check)?;
    print_json(&report);
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check("generation check failed".into()))
    }
}

fn corpus_cmd(action: &CorpusAction) -> Outcome {
    match action {
        CorpusAction::List => {
            for e in corpus::entries() {
                let kind = if e.is_nerve() { "nerve" } else { "geography" };
                emit(&format!("{}\t{}\t{}\n", e.name, kind, e.file_name));
            }
            Ok(())
        }
        CorpusAction::Export { name } => {
            let e = corpus::get(name).ok_or_else(|| usage(format!("no corpus entry {name:?}")))?;
            emit(e.text);
            Ok(())
        }
    }
}

fn svg(file: &Path, out: &Path) -> Outcome {
    let f = geography_only(load(file)?, "report")?;
    let text = report::geography_svg(&valid(&f)?).map_err(usage)?;
    std::fs::write(out, text).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate(a) => validate(&a.file),
        Command::Nerve { file, out } => nerve(file, *out),
        Command::Links(a) => links(&a.file),
        Command::Relations { file, max_len } => relations_cmd(file, *max_len),
        Command::Residual { file, face, apex } => residual(file, face, *apex),
        Command::Slice { file, base, dirs } => slice(file, base, dirs),
        Command::VerifyGeneration(a) => verify_generation(&a.file),
        Command::Corpus { action } => corpus_cmd(action),
        Command::Report { file, svg: out } => svg(file, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
