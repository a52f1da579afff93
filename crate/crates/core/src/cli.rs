//! The `hfp` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cchm::{cchm_to_code, code_to_cchm, is_cchm, QuaternaryRow};
use crate::error::Error;
use crate::families::{assemble, quaternion_candidate, Candidate, Family};
use crate::gf2::BitVector;
use crate::hadamard::{is_hadamard_code, kernel, profile, rank};
use crate::propelinear::PropelinearCode;
use crate::search::{needs_deep, reproduce_table, run_search, Mode, SearchOptions, SearchTask, TableOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PREDICATE: i32 = 1;
pub const EXIT_BOUND: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable that overrides the worker count.
pub const THREADS_ENV: &str = "HFP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hfp", version, about = "Hadamard full propelinear codes: search, verification and CCHM conversion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustive search over one family and t.
    Search(SearchArgs),
    /// Assemble a code from its generators and print its profile.
    Verify(VerifyArgs),
    /// Circulant complex Hadamard matrices.
    #[command(subcommand)]
    Cchm(CchmCommand),
    /// Reproduce the rank/kernel table.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub t: usize,
    /// Enumerate every code instead of stopping at the first.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    /// Allow runs above the candidate budget.
    #[arg(long)]
    pub deep: bool,
    /// Write the JSON lines of accepted codes here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Append finished chunks here and resume from it.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Reserved; the search is exact and does not sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub a: Option<BitVector>,
    #[arg(long)]
    pub b: Option<BitVector>,
    #[arg(long)]
    pub d: Option<BitVector>,
    /// File of codewords, one bitstring per line (`-` for stdin), checked
    /// as a plain binary code.
    #[arg(long, conflicts_with_all = ["family", "a", "b", "d"])]
    pub code: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CchmCommand {
    /// Print whether the row is a CCHM.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        row: QuaternaryRow,
    },
    /// Print the binary Hadamard code of a CCHM, one codeword per line.
    ToCode {
        #[arg(long, allow_hyphen_values = true)]
        row: QuaternaryRow,
    },
    /// Print the CCHM row of the 2t4u code generated by `a`.
    FromCode {
        #[arg(long)]
        a: BitVector,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 5)]
    pub tmax: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
    #[arg(long)]
    pub deep: bool,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn workers(flag: usize) -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(flag)
        .max(1)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundViolation(_) => EXIT_BOUND,
        Error::Io(_) | Error::NotCchm | Error::MalformedCosetHit { .. } | Error::VectorCollision { .. } => {
            EXIT_PREDICATE
        }
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Cchm(c) => cmd_cchm(c, out, err),
        Command::Table(a) => cmd_table(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_search(args: SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    args.family.check_t(args.t)?;
    if needs_deep(args.family, args.t) && !args.deep {
        writeln!(
            err,
            "error: {} at t = {} exceeds the candidate budget; pass --deep to run it",
            args.family, args.t
        )?;
        return Ok(EXIT_USAGE);
    }
    let workers = workers(args.workers);
    let mode = if args.all { Mode::All } else { Mode::First };
    let task = SearchTask::full(args.family, args.t, mode, workers);
    let res = run_search(
        &task,
        &SearchOptions {
            workers,
            checkpoint: args.checkpoint.clone(),
        },
    )?;
    let mut lines = String::new();
    for c in &res.codes {
        lines.push_str(&serde_json::to_string(&c.profile).expect("profiles serialize"));
        lines.push('\n');
    }
    match &args.output {
        Some(path) => fs::write(path, &lines)?,
        None => out.write_all(lines.as_bytes())?,
    }
    writeln!(out, "{}", serde_json::to_string(&res).expect("summary serializes"))?;
    if res.conjecture_counterexamples > 0 {
        writeln!(err, "warning: accepted 2t4u codes with t > 8 contradict the non-existence conjecture")?;
        for c in &res.codes {
            let words: Vec<String> = c.codewords.iter().map(ToString::to_string).collect();
            writeln!(err, "counterexample candidate: {}", words.join(" "))?;
        }
    }
    writeln!(err, "wall time: {:.3} s", res.wall_time.as_secs_f64())?;
    Ok(EXIT_OK)
}

fn assemble_from_args(args: &VerifyArgs) -> Result<Result<PropelinearCode, String>, Error> {
    let family = args
        .family
        .ok_or_else(|| Error::InvalidInput("--family is required unless --code is given".into()))?;
    let t = match (args.t, args.a.as_ref().or(args.d.as_ref())) {
        (Some(t), _) => t,
        (None, Some(v)) if v.len() % 4 == 0 => v.len() / 4,
        _ => return Err(Error::InvalidInput("--t is required".into())),
    };
    family.check_t(t)?;
    for v in [&args.a, &args.b, &args.d].into_iter().flatten() {
        if v.len() != 4 * t {
            return Err(Error::LengthMismatch {
                expected: 4 * t,
                found: v.len(),
            });
        }
    }
    let cand = if family == Family::TQU {
        let d = args.d.as_ref().ok_or_else(|| Error::InvalidInput("--d is required for tQu".into()))?;
        quaternion_candidate(t, d, args.a.as_ref(), args.b.as_ref())?
    } else {
        let a = args.a.as_ref().ok_or_else(|| Error::InvalidInput("--a is required".into()))?;
        Candidate::Generator(a.clone())
    };
    let code = match assemble(family, t, &cand) {
        Ok(c) => c,
        Err(r) => return Ok(Err(r.to_string())),
    };
    if family.is_two_generator() {
        if let (Some(b), Some(derived)) = (&args.b, &code.generators().b) {
            // b and b*u generate the same code
            if *b != derived.vector && *b != derived.vector.complement() {
                return Ok(Err(format!("b = {b} is not the companion of a (expected {})", derived.vector)));
            }
        }
    }
    Ok(Ok(code))
}

fn read_codewords(path: &PathBuf) -> Result<Vec<BitVector>, Error> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    if let Some(path) = &args.code {
        let words = read_codewords(path)?;
        let n = words.first().map_or(0, BitVector::len);
        let t = args.t.unwrap_or(n / 4);
        if n == 0 || n % 4 != 0 || !is_hadamard_code(&words, t) {
            writeln!(err, "rejected: not an Hadamard code of length 4t = {}", 4 * t)?;
            return Ok(EXIT_PREDICATE);
        }
        let (basis, k) = kernel(&words);
        let summary = serde_json::json!({
            "t": t,
            "length": n,
            "size": words.len(),
            "rank": rank(&words),
            "kernel_dim": k,
            "kernel_basis": basis.rows(),
        });
        writeln!(out, "{summary}")?;
        return Ok(EXIT_OK);
    }
    match assemble_from_args(&args)? {
        Ok(code) => {
            let p = profile(&code)?;
            writeln!(out, "{}", serde_json::to_string(&p).expect("profiles serialize"))?;
            Ok(EXIT_OK)
        }
        Err(reason) => {
            writeln!(err, "rejected: {reason}")?;
            Ok(EXIT_PREDICATE)
        }
    }
}

fn cmd_cchm(cmd: CchmCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        CchmCommand::Check { row } => {
            let ok = is_cchm(&row);
            writeln!(out, "{ok}")?;
            Ok(if ok { EXIT_OK } else { EXIT_PREDICATE })
        }
        CchmCommand::ToCode { row } => {
            for v in cchm_to_code(&row)? {
                writeln!(out, "{v}")?;
            }
            Ok(EXIT_OK)
        }
        CchmCommand::FromCode { a } => {
            if a.len() % 4 != 0 || a.is_empty() {
                return Err(Error::InvalidInput(format!("length {} is not a positive multiple of 4", a.len())));
            }
            match assemble(Family::TwoT4U, a.len() / 4, &Candidate::Generator(a)) {
                Ok(code) => {
                    writeln!(out, "{}", code_to_cchm(&code)?)?;
                    Ok(EXIT_OK)
                }
                Err(r) => {
                    writeln!(err, "rejected: {r}")?;
                    Ok(EXIT_PREDICATE)
                }
            }
        }
    }
}

fn cmd_table(args: TableArgs, out: &mut dyn Write) -> Result<i32, Error> {
    if args.tmax == 0 {
        return Err(Error::InvalidInput("--tmax must be at least 1".into()));
    }
    let table = reproduce_table(
        args.tmax,
        &TableOptions {
            workers: workers(args.workers),
            deep: args.deep,
        },
    )?;
    match args.format {
        TableFormat::Text => write!(out, "{table}")?,
        TableFormat::Csv => write!(out, "{}", table.to_csv())?,
        TableFormat::Json => writeln!(out, "{}", serde_json::to_string(&table).expect("table serializes"))?,
    }
    Ok(EXIT_OK)
}

/// Distinct `(r, k)` pairs in a stream of profile lines; used by tests and
/// scripts that post-process search output.
pub fn profiles_in(lines: &str) -> BTreeSet<(usize, usize)> {
    lines
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .filter(|v| v.get("kernel_basis").is_some())
        .filter_map(|v| Some((v["rank"].as_u64()? as usize, v["kernel_dim"].as_u64()? as usize)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("hfp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["search", "--family", "bogus", "--t", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["search", "--family", "tqu", "--t", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--family", "2t4u", "--t", "2", "--a", "0101"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--family", "2t4u", "--t", "2", "--a", "01x1"]).0, EXIT_USAGE);
        assert_eq!(call(&["search", "--family", "2t4u", "--t", "8"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verify_small() {
        let (code, out, _) = call(&["verify", "--family", "2t22u", "--t", "1", "--a", "1100"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(profiles_in(&out), BTreeSet::from([(3, 3)]));
        let (code, _, err) = call(&["verify", "--family", "2t4u", "--t", "8", "--a", &"0".repeat(32)]);
        assert_eq!(code, EXIT_PREDICATE);
        assert!(err.contains("rejected"));
        let (code, _, _) = call(&["verify", "--family", "2t22u", "--t", "1", "--a", "1100", "--b", "0110"]);
        assert_eq!(code, EXIT_PREDICATE);
        let (code, _, _) = call(&["verify", "--family", "2t22u", "--t", "1", "--a", "1100", "--b", "0101"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn cchm_commands() {
        let (code, out, _) = call(&["cchm", "check", "--row", "1,1"]);
        assert_eq!((code, out.trim()), (EXIT_PREDICATE, "false"));
        let (code, out, _) = call(&["cchm", "check", "--row", "-i,1"]);
        assert_eq!((code, out.trim()), (EXIT_OK, "true"));
        let (code, out, _) = call(&["cchm", "from-code", "--a", "1100"]);
        assert_eq!(code, EXIT_OK);
        assert!(is_cchm(&out.trim().parse().unwrap()));
        assert_eq!(call(&["cchm", "to-code", "--row", "1,1"]).0, EXIT_PREDICATE);
    }

    #[test]
    fn table_small() {
        let (code, out, _) = call(&["table", "--tmax", "1", "--format", "csv", "--workers", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("1,4tu2,found,3:3"));
        assert!(out.contains("1,tQu,searched-none,"));
    }
}
