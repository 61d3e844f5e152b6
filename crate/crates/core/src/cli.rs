//! The `lagbasis` command line.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 request
//! without a closed form, 64 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hamiltonian::{convergence_report, SpectrumReport};
use crate::matrix_elements::Source;
use crate::radial_basis::{quadrature_me, BasisIndex, LengthScale};
use crate::shift_ops::{expand_l_plus_1, expand_l_plus_2};
use crate::verification::{sweep, TableOp};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "lagbasis", version, about = "Matrix elements in the Laguerre function basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Matrix elements <n', L|op|n, L+dl> for n', n <= nmax.
    Table {
        /// r, r2, rinv, rinv2, rddr, ddr, d2dr2, overlap, laplacian, gradient
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true, value_parser = clap::value_parser!(i32).range(-2..=2))]
        dl: i32,
        /// Angular momentum of the bra.
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long)]
        nmax: u32,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Add exact values (only at b = 1).
        #[arg(long)]
        exact: bool,
        /// Integrate numerically where no closed form exists.
        #[arg(long)]
        allow_quadrature: bool,
    },
    /// Compare every closed form against direct integration.
    Verify {
        #[arg(long, default_value_t = 12)]
        nmax: u32,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        /// Length scales to check; repeatable.
        #[arg(long, default_values_t = [1.0])]
        b: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Lowest Coulomb levels for one or more basis cutoffs.
    Solve {
        #[arg(long = "Z", default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Basis cutoff; repeat for a convergence table.
        #[arg(long, default_values_t = [40])]
        nmax: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Expansion of S_(n,l+k) over the S_(i,l).
    Shift {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        k: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

/// One matrix element as written by `table`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub n_bra: u32,
    pub l_bra: u32,
    pub n_ket: u32,
    pub l_ket: u32,
    pub op: String,
    pub b: f64,
    pub value: f64,
    pub exact: Option<String>,
    pub source: Source,
}

pub const CSV_HEADER: [&str; 9] = ["n_bra", "l_bra", "n_ket", "l_ket", "op", "b", "value", "exact", "source"];

/// CSV with a header row. Floats use the shortest decimal that reads back to
/// the same `f64`.
pub fn write_csv(records: &[OutputRecord], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n_bra.to_string(),
            r.l_bra.to_string(),
            r.n_ket.to_string(),
            r.l_ket.to_string(),
            r.op.clone(),
            r.b.to_string(),
            r.value.to_string(),
            r.exact.clone().unwrap_or_default(),
            r.source.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: impl std::io::Read) -> csv::Result<Vec<OutputRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn write_json(records: &[OutputRecord], out: impl Write) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(out, records)
}

pub fn read_json(input: impl std::io::Read) -> serde_json::Result<Vec<OutputRecord>> {
    serde_json::from_reader(input)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported { .. } => EXIT_UNSUPPORTED,
        Error::Domain(_) | Error::Parse(_) | Error::Annihilated { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Table { op, dl, l, nmax, b, format, exact, allow_quadrature } => {
            cmd_table(&op, dl, l, nmax, b, format, exact, allow_quadrature, out)
        }
        Command::Verify { nmax, lmax, b, tol } => cmd_verify(nmax, lmax, &b, tol, out),
        Command::Solve { z, b, l, nmax, levels, format } => cmd_solve(z, b, l, &nmax, levels, format, out),
        Command::Shift { n, l, k, format } => cmd_shift(n, l, k, format, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

type CmdResult = Result<i32, Error>;

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Domain(format!("write failed: {e}"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    op: &str,
    dl: i32,
    l: u32,
    nmax: u32,
    b: f64,
    format: Format,
    exact: bool,
    allow_quadrature: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let op: TableOp = op.parse()?;
    let scale = LengthScale::new(b)?;
    let l_ket = l as i32 + dl;
    if l_ket < 0 {
        return Err(Error::domain(format!("ket angular momentum {l}{dl:+} is negative")));
    }
    let l_ket = l_ket as u32;
    let radial = match op {
        TableOp::Radial(t) => Some(t),
        _ => None,
    };
    let closed = op.supports(dl);
    if !closed && !(allow_quadrature && radial.is_some()) {
        return Err(Error::Unsupported { op: op.name().to_string(), dl });
    }
    let mut records = Vec::new();
    for p in 0..=nmax {
        for n in 0..=nmax {
            let (bra, ket) = (BasisIndex::new(p, l), BasisIndex::new(n, l_ket));
            let (value, source, exact_str) = if closed {
                let e = (exact && b == 1.0).then(|| op.exact(bra, ket)).transpose()?;
                (op.closed_form(bra, ket, scale)?, Source::ClosedForm, e.map(|s| s.to_string()))
            } else {
                let t = radial.expect("checked above");
                (quadrature_me(bra, ket, &t.into(), scale)?, Source::Quadrature, None)
            };
            records.push(OutputRecord {
                n_bra: p,
                l_bra: l,
                n_ket: n,
                l_ket,
                op: op.name().to_string(),
                b,
                value,
                exact: exact_str,
                source,
            });
        }
    }
    match format {
        Format::Csv => write_csv(&records, &mut *out).map_err(io_err)?,
        Format::Json => {
            write_json(&records, &mut *out).map_err(io_err)?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(nmax: u32, lmax: u32, b: &[f64], tol: f64, out: &mut dyn Write) -> CmdResult {
    let scales = b.iter().map(|&v| LengthScale::new(v)).collect::<Result<Vec<_>, _>>()?;
    if !(tol >= 0.0) {
        return Err(Error::domain(format!("tolerance must be non-negative, got {tol}")));
    }
    let report = sweep(&TableOp::all(), nmax, lmax, &scales)?;
    let pass = report.passes(tol);
    writeln!(out, "checked {} elements, max_dev {:e}, tol {:e}", report.checked, report.max_deviation, tol).map_err(io_err)?;
    if let Some(w) = &report.worst {
        writeln!(
            out,
            "worst: op={} bra=({},{}) ket=({},{}) b={} closed_form={} oracle={}",
            w.op, w.bra.n, w.bra.l, w.ket.n, w.ket.l, w.b, w.closed_form, w.oracle
        )
        .map_err(io_err)?;
    }
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io_err)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILURE })
}

fn write_report(report: &SpectrumReport, format: ReportFormat, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)
        }
        ReportFormat::Csv => {
            writeln!(out, "n_max,level,eigenvalue,reference,error")?;
            for (i, n_max) in report.n_max.iter().enumerate() {
                for (k, e) in report.eigenvalues[i].iter().enumerate() {
                    writeln!(out, "{n_max},{k},{e},{},{}", report.reference[k], report.errors[i][k])?;
                }
            }
            Ok(())
        }
        ReportFormat::Text => {
            writeln!(out, "Z={} b={} l={}", report.z, report.b, report.l)?;
            writeln!(out, "reference {:?}", report.reference)?;
            for (i, n_max) in report.n_max.iter().enumerate() {
                writeln!(out, "n_max={n_max} eigenvalues {:?} errors {:?}", report.eigenvalues[i], report.errors[i])?;
            }
            Ok(())
        }
    }
}

fn cmd_solve(z: f64, b: f64, l: u32, nmax: &[u32], levels: usize, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    if levels == 0 {
        return Err(Error::domain("--levels must be at least 1"));
    }
    let report = convergence_report(z, LengthScale::new(b)?, l, nmax, levels)?;
    write_report(&report, format, out).map_err(io_err)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ShiftTerm {
    n: u32,
    l: u32,
    coefficient: f64,
}

#[derive(Serialize)]
struct ShiftListing {
    n: u32,
    l: u32,
    k: u32,
    terms: Vec<ShiftTerm>,
    norm: f64,
}

fn cmd_shift(n: u32, l: u32, k: u32, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    let e = if k == 1 { expand_l_plus_1(n, l) } else { expand_l_plus_2(n, l) };
    let mut terms: Vec<ShiftTerm> = e.iter().map(|(i, c)| ShiftTerm { n: i.n, l: i.l, coefficient: c }).collect();
    terms.reverse();
    let listing = ShiftListing { n, l, k, terms, norm: e.norm_squared().sqrt() };
    let w = |out: &mut dyn Write| -> std::io::Result<()> {
        match format {
            ReportFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, &listing)?;
                writeln!(out)
            }
            ReportFormat::Csv => {
                writeln!(out, "n,l,coefficient")?;
                for t in &listing.terms {
                    writeln!(out, "{},{},{}", t.n, t.l, t.coefficient)?;
                }
                writeln!(out, "norm,,{}", listing.norm)
            }
            ReportFormat::Text => {
                writeln!(out, "S({},{}) =", n, l + k)?;
                for t in &listing.terms {
                    writeln!(out, "  ({},{}): {}", t.n, t.l, t.coefficient)?;
                }
                writeln!(out, "norm {}", listing.norm)
            }
        }
    };
    w(out).map_err(io_err)?;
    Ok(EXIT_OK)
}
