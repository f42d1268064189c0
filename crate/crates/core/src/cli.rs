//! Command-line front end.
//!
//! [`run`] takes its arguments and streams explicitly so tests can drive it
//! in-process; the `fractalseq` binary is a thin wrapper around it.
//!
//! Exit codes: 0 on success, 1 on a domain failure (a failed fractal check,
//! an `EMPTY` interval under `--expect-nonempty`, equal parameters given to
//! `diverge`), 2 on usage errors and unreadable or malformed input.

use std::ffi::OsString;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

use crate::construction::{
    construct_type1, format_branches, Branch, BranchPolicy, ConstructionState,
};
use crate::exact::ExactNumber;
use crate::inverse::{first_divergence, theta_interval_from_prefix, InverseError};
use crate::seqcore::{check_doubly_fractal_prefix, lower_trim, rank_stream, upper_trim, Sequence};
use crate::signature::SignatureGenerator;

/// Environment variable capping the number of terms any command may produce.
pub const MAX_TERMS_ENV: &str = "FRACTALSEQ_MAX_TERMS";
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "fractalseq",
    version,
    about = "Signature sequences and doubly fractal sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first terms of the signature of THETA
    Generate {
        /// `p/q`, an integer, or `(a+b*sqrt(d))/c`
        #[arg(long)]
        theta: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        /// Print `value rank` pairs
        #[arg(long)]
        ranks: bool,
        /// JSON lines `{"index":h,"value":s,"rank":a}`
        #[arg(long, conflicts_with_all = ["bfile", "ranks"])]
        json: bool,
        /// OEIS b-file lines `index value`
        #[arg(long, conflicts_with = "ranks")]
        bfile: bool,
    },
    /// Upper- or lower-trim a sequence
    #[command(group(ArgGroup::new("which").required(true).args(["upper", "lower"])))]
    Trim {
        #[arg(long)]
        upper: bool,
        #[arg(long)]
        lower: bool,
        /// Input file; stdin when absent or `-`
        file: Option<PathBuf>,
    },
    /// Check a prefix for the doubly fractal property
    Check { file: Option<PathBuf> },
    /// Run the block-extension construction
    Construct {
        /// Number of main terms
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        blocks: u64,
        /// Fork choices in order, e.g. `0,1` (0 = 1 first, 1 = fresh first)
        #[arg(long, conflicts_with = "enumerate")]
        branches: Option<String>,
        /// Emit the type-2 rank stream instead
        #[arg(long)]
        type2: bool,
        /// Emit every branch outcome as `<branches>\t<terms>`
        #[arg(long)]
        enumerate: bool,
    },
    /// Print the interval of parameters consistent with a prefix
    Invert {
        file: Option<PathBuf>,
        /// Exit 1 when the interval is empty
        #[arg(long)]
        expect_nonempty: bool,
    },
    /// Print the first index where two signatures differ, or NONE
    Diverge {
        theta1: String,
        theta2: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max: u64,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

#[derive(Serialize)]
struct JsonTerm {
    index: u64,
    value: u64,
    rank: u64,
}

fn max_terms() -> Result<usize, Failure> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{MAX_TERMS_ENV}={v:?} is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn within_cap(requested: u64) -> Result<usize, Failure> {
    let cap = max_terms()?;
    usize::try_from(requested)
        .ok()
        .filter(|&r| r <= cap)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "{requested} terms exceeds the cap of {cap} ({MAX_TERMS_ENV})"
            ))
        })
}

fn parse_theta(s: &str) -> Result<ExactNumber, Failure> {
    s.parse()
        .map_err(|e| Failure::Usage(format!("bad theta {s:?}: {e}")))
}

fn read_sequence(file: Option<&PathBuf>, stdin: &mut dyn BufRead) -> Result<Sequence, Failure> {
    let mut text = String::new();
    match file {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        }
        _ => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        }
    }
    text.parse()
        .map_err(|e| Failure::Usage(format!("bad sequence: {e}")))
}

fn parse_branches(s: &str) -> Result<Vec<Branch>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .ok()
                .and_then(Branch::from_bit)
                .ok_or_else(|| Failure::Usage(format!("bad branch {t:?}; expected 0 or 1")))
        })
        .collect()
}

fn write_lines(out: &mut dyn Write, s: &Sequence) -> io::Result<()> {
    for t in s.iter() {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

fn dispatch(command: Command, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Generate {
            theta,
            count,
            ranks,
            json,
            bfile,
        } => {
            let theta = parse_theta(&theta)?;
            let count = within_cap(count)?;
            for (h, t) in SignatureGenerator::new(&theta).take(count).enumerate() {
                let index = h as u64 + 1;
                if json {
                    let line = serde_json::to_string(&JsonTerm {
                        index,
                        value: t.value,
                        rank: t.rank,
                    })
                    .expect("plain struct serializes");
                    writeln!(out, "{line}")?;
                } else if bfile {
                    writeln!(out, "{index} {}", t.value)?;
                } else if ranks {
                    writeln!(out, "{} {}", t.value, t.rank)?;
                } else {
                    writeln!(out, "{}", t.value)?;
                }
            }
        }
        Command::Trim { upper, file, .. } => {
            let s = read_sequence(file.as_ref(), stdin)?;
            write_lines(
                out,
                &if upper {
                    upper_trim(&s)
                } else {
                    lower_trim(&s)
                },
            )?;
        }
        Command::Check { file } => {
            let s = read_sequence(file.as_ref(), stdin)?;
            let r = check_doubly_fractal_prefix(&s);
            let violation = r
                .first_violation_index
                .map_or("none".to_string(), |i| i.to_string());
            writeln!(
                out,
                "length={} starts_with_one={} upper_ok={} lower_ok={} first_violation={violation}",
                s.len(),
                r.starts_with_one,
                r.upper_ok,
                r.lower_ok
            )?;
            if !r.is_ok() {
                return Err(Failure::Domain(format!(
                    "not doubly fractal (first violation at {violation})"
                )));
            }
        }
        Command::Construct {
            n,
            blocks,
            branches,
            type2,
            enumerate,
        } => {
            let blocks = within_cap(blocks)?;
            let policy = match (&branches, enumerate) {
                (_, true) => BranchPolicy::All,
                (Some(b), false) => BranchPolicy::Explicit(parse_branches(b)?),
                (None, false) => BranchPolicy::default(),
            };
            let states =
                construct_type1(n, blocks, &policy).map_err(|e| Failure::Domain(e.to_string()))?;
            let cap = max_terms()?;
            if let Some(s) = states.iter().find(|s| s.len() > cap) {
                return Err(Failure::Usage(format!(
                    "{} terms exceeds the cap of {cap} ({MAX_TERMS_ENV})",
                    s.len()
                )));
            }
            let render = |s: &ConstructionState| {
                if type2 {
                    rank_stream(&s.sequence())
                } else {
                    s.sequence()
                }
            };
            if enumerate {
                for s in &states {
                    writeln!(out, "{}\t{}", format_branches(s.branch_log()), render(s))?;
                }
            } else {
                write_lines(out, &render(&states[0]))?;
            }
        }
        Command::Invert {
            file,
            expect_nonempty,
        } => {
            let s = read_sequence(file.as_ref(), stdin)?;
            let iv = theta_interval_from_prefix(&s);
            writeln!(out, "{iv}")?;
            if expect_nonempty && iv.is_empty() {
                return Err(Failure::Domain("no parameter produces this prefix".into()));
            }
        }
        Command::Diverge {
            theta1,
            theta2,
            max,
        } => {
            let (a, b) = (parse_theta(&theta1)?, parse_theta(&theta2)?);
            let max = within_cap(max)?;
            match first_divergence(&a, &b, max) {
                Ok(Some(i)) => writeln!(out, "{i}")?,
                Ok(None) => writeln!(out, "NONE")?,
                Err(e @ InverseError::EqualParameters(_)) => {
                    return Err(Failure::Domain(e.to_string()))
                }
                Err(e) => return Err(Failure::Usage(e.to_string())),
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs one command.
/// Returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let result =
        dispatch(cli.command, stdin, stdout).and_then(|()| stdout.flush().map_err(Failure::Io));
    match result {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "fractalseq: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "fractalseq: {msg}");
            2
        }
        // downstream closed the pipe; nothing left to report
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "fractalseq: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = io::Cursor::new(input.as_bytes().to_vec());
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("fractalseq").chain(args.iter().copied());
        let code = run(argv, &mut stdin, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(
            run_str(&["generate", "--theta", "x", "--count", "3"], "").0,
            2
        );
        assert_eq!(
            run_str(&["generate", "--theta", "2", "--count", "0"], "").0,
            2
        );
        assert_eq!(
            run_str(&["generate", "--theta", "-2", "--count", "3"], "").0,
            2
        );
        assert_eq!(run_str(&["trim", "--upper", "--lower"], "1").0, 2);
        assert_eq!(run_str(&["trim"], "1").0, 2);
        assert_eq!(run_str(&["check"], "1 x").0, 2);
        assert_eq!(run_str(&["check", "/nonexistent/file"], "").0, 2);
        assert_eq!(run_str(&["construct", "--n", "1"], "").0, 2);
        assert_eq!(
            run_str(&["construct", "--n", "3", "--branches", "0,2"], "").0,
            2
        );
        assert_eq!(run_str(&["frobnicate"], "").0, 2);
        let (code, out, err) = run_str(&["diverge", "1/2", "2/4", "--max", "5"], "");
        assert_eq!((code, out.as_str()), (1, ""));
        assert!(err.contains("equal"));
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_str(&["--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("generate"));
    }

    #[test]
    fn generate_formats() {
        let (_, out, _) = run_str(
            &["generate", "--theta", "sqrt(13)", "--count", "3", "--ranks"],
            "",
        );
        assert_eq!(out, "1 1\n2 1\n3 1\n");
        let (_, out, _) = run_str(
            &["generate", "--theta", "1/7", "--count", "2", "--json"],
            "",
        );
        assert_eq!(
            out,
            "{\"index\":1,\"value\":1,\"rank\":1}\n{\"index\":2,\"value\":1,\"rank\":2}\n"
        );
        let (_, out, _) = run_str(
            &["generate", "--theta", "1/7", "--count", "2", "--bfile"],
            "",
        );
        assert_eq!(out, "1 1\n2 1\n");
    }

    #[test]
    fn check_and_invert() {
        let (code, out, _) = run_str(&["check"], "1 2 3 4 1 5 2 6 3 7 4");
        assert_eq!(code, 0);
        assert!(out.contains("upper_ok=true lower_ok=true first_violation=none"));
        let (code, out, _) = run_str(&["check"], "1 3");
        assert_eq!(code, 1);
        assert!(out.contains("lower_ok=false first_violation=1"));

        assert_eq!(run_str(&["invert"], "1 2 3 4 1 5").1, "[3, 4]\n");
        assert_eq!(
            run_str(&["invert"], "1 3"),
            (0, "EMPTY\n".into(), String::new())
        );
        assert_eq!(run_str(&["invert", "--expect-nonempty"], "1 3").0, 1);
    }

    #[test]
    fn construct_outputs() {
        let (code, out, _) = run_str(&["construct", "--n", "2", "--blocks", "2"], "");
        assert_eq!((code, out.as_str()), (0, "1\n2\n1\n3\n2\n"));
        let (_, out, _) = run_str(
            &["construct", "--n", "4", "--blocks", "3", "--enumerate"],
            "",
        );
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("0\t1 2 3 4 1 5 2 6 3 7 4 1 8"));
        assert!(lines[1].starts_with("1\t1 2 3 4 1 5 2 6 3 7 4 8 1 5 9"));
    }
}
