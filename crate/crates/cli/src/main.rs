//! `ntcong`: run congruence claims and dump coefficient tables.
//!
//! Exit codes: 0 when every report passes (or is vacuous), 1 when a claim
//! produced a counterexample, 2 for usage, hypothesis and budget errors.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ntcong::partitions::{p_of_n, PartitionTable};
use ntcong::verify::{default_suite, Claim, Verifier, DEFAULT_PREC_CAP, DP_BOUND};
use ntcong::VerificationReport;

#[derive(Parser, Debug)]
#[command(name = "ntcong", version, about = "Exact verifier for rank-statistic congruences modulo powers of 5")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    run: RunOptions,
}

#[derive(Args, Debug)]
struct RunOptions {
    /// Refuse any run needing series beyond this exponent.
    #[arg(long, global = true, default_value_t = DEFAULT_PREC_CAP)]
    prec_cap: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Directory for cached series expansions.
    #[arg(long, global = true, env = "NTCONG_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads per claim; index ranges are split into contiguous chunks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one claim family, or the whole acceptance suite with `all`.
    Verify(VerifyArgs),
    /// Dump exact values.
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Selector {
    All,
    Gencn,
    Beck,
    Ramanujan,
    Thm11,
    Thm12,
    Thm13,
    Cor14,
    Lemma21,
    Lemma22,
    Lemma41,
    Lovejoy,
    Valuations,
}

/// Without parameter flags a selector runs its default-suite entries;
/// with any flag it runs one claim, unset parameters taken from the
/// selector's first default entry.
#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    selector: Selector,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    part: Option<u8>,
    /// Upper end of the index range (for `beck`, the largest argument).
    #[arg(long)]
    nmax: Option<u64>,
    /// Modulus of the `beck` family: 5 or 7.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    imax: Option<u32>,
    #[arg(long)]
    jmax: Option<usize>,
    /// Laurent precision for `lemma21` / `lemma22`.
    #[arg(long)]
    prec: Option<i64>,
    /// Check `thm11` through partition ranks instead of the `c` series.
    #[arg(long)]
    nt: bool,
}

impl VerifyArgs {
    fn has_overrides(&self) -> bool {
        self.alpha.is_some()
            || self.ell.is_some()
            || self.r.is_some()
            || self.s.is_some()
            || self.part.is_some()
            || self.nmax.is_some()
            || self.k.is_some()
            || self.imax.is_some()
            || self.jmax.is_some()
            || self.prec.is_some()
            || self.nt
    }

    fn claims(&self) -> Vec<Claim> {
        let suite = default_suite();
        if self.selector == Selector::All {
            return suite;
        }
        let name = selector_name(self.selector);
        let mut defaults = suite.into_iter().filter(|c| c.selector() == name);
        if !self.has_overrides() {
            return defaults.collect();
        }
        let base = if self.nt {
            Claim::Thm11Nt { nmax: 5 }
        } else {
            defaults.find(|c| !matches!(c, Claim::Thm11Nt { .. })).expect("every selector has a default entry")
        };
        vec![self.apply(base)]
    }

    fn apply(&self, base: Claim) -> Claim {
        let a = |d: u32| self.alpha.unwrap_or(d);
        let n = |d: u64| self.nmax.unwrap_or(d);
        match base {
            Claim::Gencn { nmax } => Claim::Gencn { nmax: n(nmax) },
            Claim::Beck { k, max_arg } => Claim::Beck { k: self.k.unwrap_or(k), max_arg: n(max_arg) },
            Claim::Ramanujan { alpha, nmax } => Claim::Ramanujan { alpha: a(alpha), nmax: n(nmax) },
            Claim::Thm11 { alpha, nmax } => Claim::Thm11 { alpha: a(alpha), nmax: n(nmax) },
            Claim::Thm11Nt { nmax } => Claim::Thm11Nt { nmax: n(nmax) },
            Claim::Thm12 { alpha, nmax } => Claim::Thm12 { alpha: a(alpha), nmax: n(nmax) },
            Claim::Thm13 { alpha, ell, nmax } => {
                Claim::Thm13 { alpha: a(alpha), ell: self.ell.unwrap_or(ell), nmax: n(nmax) }
            }
            Claim::Cor14 { part, alpha, ell, r, s, nmax } => Claim::Cor14 {
                part: self.part.unwrap_or(part),
                alpha: a(alpha),
                ell: self.ell.unwrap_or(ell),
                r: self.r.unwrap_or(r),
                s: self.s.unwrap_or(s),
                nmax: n(nmax),
            },
            Claim::Lemma21 { imax, prec } => {
                Claim::Lemma21 { imax: self.imax.unwrap_or(imax), prec: self.prec.unwrap_or(prec) }
            }
            Claim::Lemma22 { imax, prec } => {
                Claim::Lemma22 { imax: self.imax.unwrap_or(imax), prec: self.prec.unwrap_or(prec) }
            }
            Claim::Lemma41 { alpha, nmax } => Claim::Lemma41 { alpha: a(alpha), nmax: n(nmax) },
            Claim::Lovejoy { ell, nmax } => Claim::Lovejoy { ell: self.ell.unwrap_or(ell), nmax: n(nmax) },
            Claim::Valuations { imax, jmax, alpha_max } => Claim::Valuations {
                imax: self.imax.map_or(imax, |i| i as usize),
                jmax: self.jmax.unwrap_or(jmax),
                alpha_max: a(alpha_max),
            },
        }
    }
}

fn selector_name(s: Selector) -> &'static str {
    match s {
        Selector::All => "all",
        Selector::Gencn => "gencn",
        Selector::Beck => "beck",
        Selector::Ramanujan => "ramanujan",
        Selector::Thm11 => "thm11",
        Selector::Thm12 => "thm12",
        Selector::Thm13 => "thm13",
        Selector::Cor14 => "cor14",
        Selector::Lemma21 => "lemma21",
        Selector::Lemma22 => "lemma22",
        Selector::Lemma41 => "lemma41",
        Selector::Lovejoy => "lovejoy",
        Selector::Valuations => "valuations",
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// `c(n)`, coefficients of `E_5^4/E_1`.
    C,
    /// `p(n)`.
    P,
    /// `NT(r, k, n)` for each residue `r` (or just `--r`).
    Nt,
    /// `m_{i,j}` on the window `i <= --i`, `j <= --j`.
    M,
    /// `x̃_{α,i}` over the support.
    X,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    kind: TableKind,
    /// First index (`c`, `p`).
    #[arg(long, default_value_t = 0)]
    from: u64,
    /// Last index (`c`, `p`).
    #[arg(long)]
    to: Option<u64>,
    /// Rank modulus (`nt`).
    #[arg(long)]
    k: Option<u32>,
    /// Partition size (`nt`).
    #[arg(long)]
    n: Option<usize>,
    /// Single residue (`nt`).
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    alpha: Option<u32>,
}

/// Largest `m` window and `α` a table request may ask for.
const M_WINDOW_LIMIT: usize = 1000;
const X_ALPHA_LIMIT: u32 = 8;

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Claim,
    Io(io::Error),
}

impl From<ntcong::Error> for Failure {
    fn from(e: ntcong::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(args) => cmd_verify(args, &cli.run),
        Command::Table(args) => cmd_table(args, &cli.run),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claim) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn verifier(run: &RunOptions) -> Result<Verifier, Failure> {
    if let Some(dir) = &run.cache_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Usage(format!("cannot create cache directory {}: {e}", dir.display())))?;
    }
    Ok(Verifier::new(run.jobs, run.prec_cap, run.cache_dir.clone()))
}

fn cmd_verify(args: &VerifyArgs, run: &RunOptions) -> Result<(), Failure> {
    let claims = args.claims();
    let v = verifier(run)?;
    let reports = v.run_all(&claims)?;
    write_reports(&reports, run.format)?;
    if reports.iter().all(VerificationReport::passed) {
        Ok(())
    } else {
        Err(Failure::Claim)
    }
}

fn write_reports(reports: &[VerificationReport], format: Format) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Human => {
            for r in reports {
                writeln!(out, "{r}")?;
            }
        }
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "claim",
                "params",
                "modulus",
                "range",
                "status",
                "failures",
                "first_failure",
                "elapsed_ms",
            ])?;
            for r in reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let first =
                    r.failures.first().map(|f| format!("{}: {} vs {}", f.index, f.lhs, f.rhs)).unwrap_or_default();
                w.write_record([
                    r.claim_id.clone(),
                    params.join(" "),
                    r.modulus.to_string(),
                    r.range.clone(),
                    r.status.to_string(),
                    r.failures.len().to_string(),
                    first,
                    r.elapsed_ms.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_table(args: &TableArgs, run: &RunOptions) -> Result<(), Failure> {
    let table = build_table(args, run)?;
    write_table(&table, run.format)
}

fn required<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("`table {kind}` requires --{flag}")))
}

fn build_table(args: &TableArgs, run: &RunOptions) -> Result<Table, Failure> {
    match args.kind {
        TableKind::C | TableKind::P => {
            let kind = if args.kind == TableKind::C { "c" } else { "p" };
            let to = required(args.to, "to", kind)?;
            if to as i128 > run.prec_cap as i128 {
                return Err(ntcong::Error::BudgetExceeded {
                    required: to.min(i64::MAX as u64) as i64,
                    cap: run.prec_cap,
                }
                .into());
            }
            let values: Vec<String> = if args.kind == TableKind::C {
                let c = verifier(run)?.c_series(to as i64)?;
                (args.from..=to).map(|n| c.coeff(n as i64).map(|v| v.to_string())).collect::<ntcong::Result<_>>()?
            } else {
                let p = p_of_n(to as usize);
                (args.from..=to).map(|n| p[n as usize].to_string()).collect()
            };
            Ok(Table {
                columns: vec!["n", kind],
                rows: (args.from..=to).zip(values).map(|(n, v)| vec![n.to_string(), v]).collect(),
            })
        }
        TableKind::Nt => {
            let k = required(args.k, "k", "nt")?;
            let n = required(args.n, "n", "nt")?;
            if n > DP_BOUND {
                return Err(ntcong::Error::OutOfRange { what: "n", value: n as i64, limit: DP_BOUND as i64 }.into());
            }
            if k == 0 {
                return Err(Failure::Usage("--k must be positive".into()));
            }
            let t = PartitionTable::build(n);
            let residues: Vec<u32> = match args.r {
                Some(r) => vec![r],
                None => (0..k).collect(),
            };
            let rows = residues
                .into_iter()
                .map(|r| Ok(vec![r.to_string(), k.to_string(), n.to_string(), t.nt(r, k, n)?.to_string()]))
                .collect::<ntcong::Result<_>>()?;
            Ok(Table { columns: vec!["r", "k", "n", "nt"], rows })
        }
        TableKind::M => {
            let imax = required(args.i, "i", "m")?;
            let jmax = required(args.j, "j", "m")?;
            for (what, v) in [("i", imax), ("j", jmax)] {
                if v == 0 || v > M_WINDOW_LIMIT {
                    return Err(
                        ntcong::Error::OutOfRange { what, value: v as i64, limit: M_WINDOW_LIMIT as i64 }.into()
                    );
                }
            }
            let v = verifier(run)?;
            let m = v.matrix();
            let rows = (1..=imax)
                .flat_map(|i| (1..=jmax.min(i)).map(move |j| (i, j)))
                .map(|(i, j)| vec![i.to_string(), j.to_string(), m.m_entry(i, j).to_string()])
                .collect();
            Ok(Table { columns: vec!["i", "j", "m"], rows })
        }
        TableKind::X => {
            let alpha = required(args.alpha, "alpha", "x")?;
            if alpha == 0 || alpha > X_ALPHA_LIMIT {
                return Err(ntcong::Error::OutOfRange {
                    what: "alpha",
                    value: alpha as i64,
                    limit: X_ALPHA_LIMIT as i64,
                }
                .into());
            }
            let v = verifier(run)?;
            let x = v.matrix().x_vec(alpha);
            let rows = x
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| vec![alpha.to_string(), (i + 1).to_string(), e.to_string()])
                .collect();
            Ok(Table { columns: vec!["alpha", "i", "x"], rows })
        }
    }
}

fn write_table(table: &Table, format: Format) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Human => {
            let widths: Vec<usize> = (0..table.columns.len())
                .map(|c| table.rows.iter().map(|r| r[c].len()).chain([table.columns[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| -> String {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                padded.join("  ")
            };
            writeln!(out, "{}", line(table.columns.clone()))?;
            for row in &table.rows {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
        Format::Json => {
            let value = serde_json::json!({ "columns": table.columns, "rows": table.rows });
            writeln!(out, "{value}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
