//! `forestcount`: count labeled forests, list them, and check the
//! weight-reversing involution on PPR forests.
//!
//! Exit codes: 0 on success, 1 when a verification or validation check
//! fails, 2 on usage, domain or capacity errors.

mod dot;
mod terms;

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use forestcount::exactmath::{cayley_rooted_forest_count, takacs_count, takacs_count_eq1};
use forestcount::{
    apply_with_action, verify_involution, Enumerator, Error, PprForest, PprForestData,
    VerificationReport, DEFAULT_LIMIT,
};

#[derive(Parser, Debug)]
#[command(
    name = "forestcount",
    version,
    about = "Exact counts of labeled forests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Eq2,
    Eq1,
    Bruteforce,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Unrooted,
    Ppr,
    Rooted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of forests of unrooted trees on [n].
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "eq2")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Table of the terms of the alternating sum.
    Terms {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Counts for n = 0..=max-n (rooted: n = 1..=max-n).
    Sequence {
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value = "unrooted")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Lists every structure of one family in canonical order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "ppr")]
        kind: Kind,
        /// Pair-count filter (ppr only).
        #[arg(long)]
        j: Option<usize>,
        /// Fixed root set, comma separated (rooted only).
        #[arg(long, value_delimiter = ',')]
        roots: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Checks the involution and the counting identities for n = 0..=max-n.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Reads a PPR forest as JSON on stdin and prints its image.
    Apply {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit code 2.
    Usage(String),
    /// Exit code 1.
    Check(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Capacity { .. } => Failure::Usage(e.to_string()),
            Error::Invalid(_) | Error::NotSpecial | Error::Internal(_) => {
                Failure::Check(e.to_string())
            }
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn json_line<T: Serialize>(out: &mut impl Write, value: &T) -> Outcome {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::from)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn unsupported(format: Format, command: &str) -> Failure {
    Failure::Usage(format!("format {format:?} is not supported by {command}").to_lowercase())
}

fn count(n: u32, method: Method, limit: usize, threads: usize, out: &mut impl Write) -> Outcome {
    let value = match method {
        Method::Eq2 => takacs_count(n)?,
        Method::Eq1 => takacs_count_eq1(n)?,
        Method::Bruteforce => Enumerator::new(limit).count_unrooted(n as usize, threads)?,
    };
    writeln!(out, "{value}")?;
    Ok(())
}

fn sequence(max_n: u32, kind: Kind, format: Format, out: &mut impl Write) -> Outcome {
    let values = match kind {
        Kind::Unrooted => (0..=max_n)
            .map(|n| takacs_count(n).map(|v| (n, v)))
            .collect::<Result<Vec<_>, _>>()?,
        Kind::Rooted => (1..=max_n)
            .map(|n| cayley_rooted_forest_count(n).map(|v| (n, v)))
            .collect::<Result<Vec<_>, _>>()?,
        Kind::Ppr => return Err(Failure::Usage("no sequence for kind ppr".into())),
    };
    match format {
        Format::Plain => {
            let line: Vec<String> = values.iter().map(|(_, v)| v.to_string()).collect();
            writeln!(out, "{}", line.join(", "))?;
        }
        Format::Csv => {
            writeln!(out, "n,count")?;
            for (n, v) in &values {
                writeln!(out, "{n},{v}")?;
            }
        }
        Format::Json => {
            let list: Vec<_> = values.iter().map(|(_, v)| v).collect();
            json_line(out, &list)?;
        }
        Format::Dot => return Err(unsupported(format, "sequence")),
    }
    Ok(())
}

struct Sink<'a, W: Write> {
    format: Format,
    out: &'a mut W,
    out_dir: Option<&'a Path>,
    prefix: String,
    index: usize,
}

impl<W: Write> Sink<'_, W> {
    fn emit<T: Serialize + std::fmt::Debug>(
        &mut self,
        item: &T,
        plain: impl FnOnce(&T) -> String,
        dot: impl FnOnce(&T) -> String,
    ) -> Outcome {
        match self.format {
            Format::Json => json_line(self.out, item)?,
            Format::Plain => writeln!(self.out, "{}", plain(item))?,
            Format::Dot => {
                let dir = self.out_dir.expect("checked before enumeration");
                let path = dir.join(format!("{}_{:06}.dot", self.prefix, self.index));
                fs::write(path, dot(item))?;
            }
            Format::Csv => unreachable!("rejected before enumeration"),
        }
        self.index += 1;
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    n: usize,
    kind: Kind,
    j: Option<usize>,
    roots: Option<Vec<usize>>,
    format: Format,
    out_dir: Option<PathBuf>,
    limit: usize,
    out: &mut impl Write,
) -> Outcome {
    if format == Format::Csv {
        return Err(unsupported(format, "enumerate"));
    }
    if j.is_some() && kind != Kind::Ppr {
        return Err(Failure::Usage("--j applies only to --kind ppr".into()));
    }
    if roots.is_some() && kind != Kind::Rooted {
        return Err(Failure::Usage(
            "--roots applies only to --kind rooted".into(),
        ));
    }
    match (&out_dir, format) {
        (None, Format::Dot) => return Err(Failure::Usage("--format dot needs --out-dir".into())),
        (Some(_), f) if f != Format::Dot => {
            return Err(Failure::Usage(
                "--out-dir applies only to --format dot".into(),
            ))
        }
        (Some(dir), _) => fs::create_dir_all(dir)?,
        _ => {}
    }
    let e = Enumerator::new(limit);
    let prefix = match kind {
        Kind::Unrooted => format!("unrooted_{n}"),
        Kind::Ppr => format!("ppr_{n}"),
        Kind::Rooted => format!("rooted_{n}"),
    };
    let mut sink = Sink {
        format,
        out,
        out_dir: out_dir.as_deref(),
        prefix,
        index: 0,
    };
    match kind {
        Kind::Unrooted => {
            for g in e.unrooted_forests(n)? {
                sink.emit(&g, |g| format!("{:?}", g.edges()), dot::unrooted)?;
            }
        }
        Kind::Ppr => {
            for f in e.ppr_forests(n, j)? {
                sink.emit(&f, |f| f.to_string(), dot::ppr)?;
            }
        }
        Kind::Rooted => {
            let forests = match roots {
                Some(roots) => e.rooted_forests(n, &roots)?,
                None => e.all_rooted_forests(n)?,
            };
            let plain = |f: &forestcount::RootedForest| {
                let entries: Vec<String> = f
                    .parents()
                    .iter()
                    .map(|p| p.map_or("-".to_string(), |p| p.to_string()))
                    .collect();
                format!("parent[{}..]=[{}]", f.first(), entries.join(","))
            };
            for f in forests {
                sink.emit(&f, plain, dot::rooted)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyLine {
    #[serde(flatten)]
    report: VerificationReport,
    /// to_unrooted and from_unrooted invert each other on this n.
    roundtrip_ok: bool,
    /// Enumerated unrooted forests agree with both closed forms.
    formula_ok: bool,
}

fn check_roundtrips(n: usize, e: &Enumerator) -> Result<bool, Error> {
    for g in e.unrooted_forests(n)? {
        let f = PprForest::from_unrooted(&g);
        if !f.is_special() || f.to_unrooted()? != g {
            return Ok(false);
        }
    }
    for f in e.ppr_forests(n, Some(0))?.filter(PprForest::is_special) {
        if PprForest::from_unrooted(&f.to_unrooted()?) != f {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_formulas(n: usize, e: &Enumerator, threads: usize) -> Result<bool, Error> {
    let small = u32::try_from(n).map_err(|_| Error::Domain(format!("n = {n} is too large")))?;
    let expected = takacs_count(small)?;
    let mut ok = e.count_unrooted(n, threads)? == expected;
    if n >= 1 {
        ok &= takacs_count_eq1(small)? == expected;
    }
    Ok(ok)
}

fn verify(max_n: usize, limit: usize, threads: usize, out: &mut impl Write) -> Outcome {
    let e = Enumerator::new(limit);
    if max_n > limit {
        return Err(Error::Capacity {
            requested: max_n,
            limit,
        }
        .into());
    }
    let mut failed = Vec::new();
    for n in 0..=max_n {
        let line = VerifyLine {
            report: verify_involution(n, &e)?,
            roundtrip_ok: check_roundtrips(n, &e)?,
            formula_ok: check_formulas(n, &e, threads)?,
        };
        json_line(out, &line)?;
        if !(line.report.passed() && line.roundtrip_ok && line.formula_ok) {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "verification failed for n in {failed:?}"
        )))
    }
}

fn apply(format: Format, input: &str, out: &mut impl Write) -> Outcome {
    let data: PprForestData = serde_json::from_str(input)
        .map_err(|e| Failure::Usage(format!("cannot parse PPR forest: {e}")))?;
    let f =
        PprForest::try_from(data).map_err(|v| Failure::Check(format!("invalid forest: {v}")))?;
    let (g, action) = apply_with_action(&f)?;
    match format {
        Format::Json => json_line(out, &g)?,
        Format::Dot => out.write_all(dot::ppr(&g).as_bytes())?,
        Format::Plain => writeln!(out, "{g}")?,
        Format::Csv => return Err(unsupported(format, "apply")),
    }
    eprintln!("action: {action}");
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Count {
            n,
            method,
            limit,
            threads,
        } => count(n, method, limit, threads, out),
        Command::Terms { n, format } => terms::write(n, format, out),
        Command::Sequence {
            max_n,
            kind,
            format,
        } => sequence(max_n, kind, format, out),
        Command::Enumerate {
            n,
            kind,
            j,
            roots,
            format,
            out_dir,
            limit,
        } => enumerate(n, kind, j, roots, format, out_dir, limit, out),
        Command::Verify {
            max_n,
            limit,
            threads,
        } => verify(max_n, limit, threads, out),
        Command::Apply { format } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input)?;
            apply(format, &input, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(failure) => {
            let _ = out.flush();
            let (code, message) = match failure {
                Failure::Check(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Io(e) => (2, format!("i/o error: {e}")),
            };
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
