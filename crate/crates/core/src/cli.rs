//! Command-line front end.
//!
//! Every subcommand prints one table, either as CSV (header row, LF line
//! endings) or as a single JSON object holding a `rows` array. Numbers are
//! printed with a fixed number of significant digits so identical flags give
//! byte-identical output.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 quadrature non-convergence.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::braidexp::{
    auto_terms_for, cap_for, probe_errors, reconstruct, tau, verify_exp_tau, BraidPower, Terms,
};
use crate::conv::power;
use crate::error::Error;
use crate::fourier::{
    cn_theta_power_closed, cn_theta_power_quad, parseval_pair, ParsevalPair, QuadratureSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TREND: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;

/// Defaults shared by all subcommands.
pub mod defaults {
    pub const WINDOW: usize = 1024;
    pub const WINDOWS: &str = "256,1024,4096";
    pub const PROBES: &str = "-8..8";
    pub const CAP_FACTOR: f64 = 2.0;
    pub const PRECISION: u8 = 12;
}

#[derive(Debug, Parser)]
#[command(
    name = "braid-tau",
    version,
    about = "Convolution exponential of the logarithm of the pure braid generator"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatKind {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OutputFormat {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: FormatKind,
    /// Significant decimal digits for every printed number (1 to 17).
    #[arg(long, global = true, default_value_t = defaults::PRECISION,
          value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CnMethod {
    Closed,
    Quad,
    Conv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of τ on the window -N..N.
    Tau {
        #[arg(long, default_value_t = defaults::WINDOW)]
        window: usize,
    },
    /// The coefficient c_n(τ^m) by closed form, quadrature or convolution.
    #[command(allow_negative_numbers = true)]
    Cn {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "closed")]
        method: CnMethod,
        /// Window of τ for the `conv` method.
        #[arg(long, default_value_t = defaults::WINDOW)]
        window: usize,
        #[arg(long, default_value_t = defaults::CAP_FACTOR)]
        cap_factor: f64,
    },
    /// Convergence study of exp(τ_N) toward q.
    VerifyExp {
        /// Window radii, comma separated.
        #[arg(long, default_value = defaults::WINDOWS, value_delimiter = ',')]
        windows: Vec<usize>,
        /// Series term counts, comma separated, or `auto`.
        #[arg(long, default_value = "auto", value_parser = parse_terms)]
        terms: Terms,
        /// Probe indices: a range `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = defaults::PROBES, allow_hyphen_values = true,
              value_parser = parse_probes)]
        probes: Probes,
        #[arg(long, default_value_t = defaults::CAP_FACTOR)]
        cap_factor: f64,
    },
    /// Both sides of Parseval's identity for (iθ)^j and (iθ)^k.
    Parseval {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = defaults::WINDOW)]
        window: usize,
    },
    /// Rebuild q^k from its invariant series and compare with δ_k on probes.
    #[command(allow_negative_numbers = true)]
    Reconstruct {
        #[arg(long)]
        k: i64,
        /// Series terms, or `auto`.
        #[arg(long, default_value = "auto", value_parser = parse_single_terms)]
        terms: TermCount,
        #[arg(long, default_value_t = defaults::WINDOW)]
        window: usize,
        #[arg(long, default_value = defaults::PROBES, allow_hyphen_values = true,
              value_parser = parse_probes)]
        probes: Probes,
        #[arg(long, default_value_t = defaults::CAP_FACTOR)]
        cap_factor: f64,
    },
}

/// Probe indices in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probes(pub Vec<i64>);

pub fn parse_probes(s: &str) -> Result<Probes, String> {
    let mut out = if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
        let hi: i64 = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|e| format!("bad range end: {e}"))?;
        if lo > hi {
            return Err(format!("empty probe range {lo}..{hi}"));
        }
        (lo..=hi).collect::<Vec<_>>()
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| format!("bad probe {p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err("probe list is empty".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(Probes(out))
}

pub fn parse_terms(s: &str) -> Result<Terms, String> {
    if s.trim() == "auto" {
        return Ok(Terms::Auto);
    }
    let ms = s
        .split(',')
        .map(|m| m.trim().parse::<u32>().map_err(|e| format!("bad term count {m:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if ms.is_empty() {
        return Err("term list is empty".into());
    }
    Ok(Terms::List(ms))
}

/// A single series length; `None` means `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermCount(pub Option<u32>);

fn parse_single_terms(s: &str) -> Result<TermCount, String> {
    if s.trim() == "auto" {
        Ok(TermCount(None))
    } else {
        s.trim()
            .parse()
            .map(|m| TermCount(Some(m)))
            .map_err(|e| format!("bad term count: {e}"))
    }
}

/// A printable cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Missing,
}

/// Column-ordered table with optional JSON-only metadata.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
}

/// `x` with `precision` significant digits, scientific notation.
pub fn format_num(x: f64, precision: u8) -> String {
    format!("{:.*e}", precision as usize - 1, x)
}

impl Table {
    fn cell_text(cell: &Cell, precision: u8) -> String {
        match cell {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_num(*x, precision),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn cell_json(cell: &Cell, precision: u8) -> Value {
        match cell {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) => {
                let rounded: f64 = format_num(*x, precision)
                    .parse()
                    .expect("formatted float parses");
                serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }

    pub fn to_csv(&self, precision: u8) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| Self::cell_text(c, precision)))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn to_json(&self, precision: u8) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.to_string(), Self::cell_json(c, precision)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        if !self.summary.is_empty() {
            let summary: Map<String, Value> = self
                .summary
                .iter()
                .map(|(k, c)| (k.to_string(), Self::cell_json(c, precision)))
                .collect();
            top.insert("summary".into(), Value::Object(summary));
        }
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json encodes");
        s.push('\n');
        s
    }

    pub fn render(&self, fmt: &OutputFormat) -> String {
        match fmt.format {
            FormatKind::Csv => self.to_csv(fmt.precision),
            FormatKind::Json => self.to_json(fmt.precision),
        }
    }
}

/// Result of one subcommand: the table to print, an exit code and any
/// diagnostics for stderr.
pub struct Outcome {
    pub table: Table,
    pub code: i32,
    pub diagnostics: Vec<String>,
}

fn usage(msg: impl Into<String>) -> (i32, String) {
    (EXIT_USAGE, msg.into())
}

fn lib_error(e: Error) -> (i32, String) {
    match e {
        Error::QuadratureNotConverged { .. } => (EXIT_QUADRATURE, e.to_string()),
        _ => (EXIT_USAGE, e.to_string()),
    }
}

pub fn execute(command: &Command) -> Result<Outcome, (i32, String)> {
    match command {
        Command::Tau { window } => cmd_tau(*window),
        Command::Cn {
            n,
            m,
            method,
            window,
            cap_factor,
        } => cmd_cn(*n, *m, *method, *window, *cap_factor),
        Command::VerifyExp {
            windows,
            terms,
            probes,
            cap_factor,
        } => cmd_verify_exp(windows, terms, &probes.0, *cap_factor),
        Command::Parseval { j, k, window } => cmd_parseval(*j, *k, *window),
        Command::Reconstruct {
            k,
            terms,
            window,
            probes,
            cap_factor,
        } => cmd_reconstruct(*k, terms.0, *window, &probes.0, *cap_factor),
    }
}

fn ok(table: Table) -> Result<Outcome, (i32, String)> {
    Ok(Outcome {
        table,
        code: EXIT_OK,
        diagnostics: Vec::new(),
    })
}

pub fn cmd_tau(window: usize) -> Result<Outcome, (i32, String)> {
    if window == 0 {
        return Err(usage("--window must be at least 1"));
    }
    let rows = tau(window)
        .iter()
        .map(|(n, c)| vec![Cell::Int(n), Cell::Num(c.re)])
        .collect();
    ok(Table {
        command: "tau",
        header: vec!["n", "coeff"],
        rows,
        summary: Vec::new(),
    })
}

pub fn cmd_cn(
    n: i64,
    m: u32,
    method: CnMethod,
    window: usize,
    cap_factor: f64,
) -> Result<Outcome, (i32, String)> {
    let (value, method_name, window_cell) = match method {
        CnMethod::Closed => (cn_theta_power_closed(n, m), "closed", Cell::Missing),
        CnMethod::Quad => (
            cn_theta_power_quad(n, m, &QuadratureSpec::default()).map_err(lib_error)?,
            "quad",
            Cell::Missing,
        ),
        CnMethod::Conv => {
            if window == 0 {
                return Err(usage("--window must be at least 1"));
            }
            let cap = cap_for(window, cap_factor).map_err(lib_error)?;
            let p = power(&tau(window), m, cap).map_err(lib_error)?;
            (p.seq.get(n), "conv", Cell::Int(window as i64))
        }
    };
    if !value.is_finite() {
        return Err(usage(format!("c_{n}((iθ)^{m}) overflows double precision")));
    }
    ok(Table {
        command: "cn",
        header: vec!["n", "m", "method", "window", "re", "im"],
        rows: vec![vec![
            Cell::Int(n),
            Cell::Int(m as i64),
            Cell::Text(method_name.into()),
            window_cell,
            Cell::Num(value.re),
            Cell::Num(value.im),
        ]],
        summary: Vec::new(),
    })
}

pub fn cmd_verify_exp(
    windows: &[usize],
    terms: &Terms,
    probes: &[i64],
    cap_factor: f64,
) -> Result<Outcome, (i32, String)> {
    if windows.is_empty() || probes.is_empty() {
        return Err(usage("--windows and --probes must be nonempty"));
    }
    let report = verify_exp_tau(windows, terms, probes, cap_factor).map_err(lib_error)?;
    let violations = report.trend_violations();
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.window as i64),
                Cell::Int(r.terms as i64),
                Cell::Num(r.err_c1),
                Cell::Num(r.err_off),
                Cell::Num(r.l2_err),
                Cell::Num(r.discarded_mass),
            ]
        })
        .collect();
    Ok(Outcome {
        table: Table {
            command: "verify-exp",
            header: vec!["N", "M", "err_c1", "err_off", "l2_err", "discarded_mass"],
            rows,
            summary: Vec::new(),
        },
        code: if violations.is_empty() { EXIT_OK } else { EXIT_TREND },
        diagnostics: violations
            .iter()
            .map(|v| format!("trend violation: {v}"))
            .collect(),
    })
}

pub fn cmd_parseval(j: u32, k: u32, window: usize) -> Result<Outcome, (i32, String)> {
    if window == 0 {
        return Err(usage("--window must be at least 1"));
    }
    let pair: ParsevalPair = parseval_pair(j, k, window).map_err(lib_error)?;
    let bound = ParsevalPair::known_bound(j, k, window);
    let gap = pair.gap();
    let holds = bound.is_none_or(|b| gap <= b);
    Ok(Outcome {
        table: Table {
            command: "parseval",
            header: vec![
                "j", "k", "N", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap", "bound",
            ],
            rows: vec![vec![
                Cell::Int(j as i64),
                Cell::Int(k as i64),
                Cell::Int(window as i64),
                Cell::Num(pair.lhs.re),
                Cell::Num(pair.lhs.im),
                Cell::Num(pair.rhs.re),
                Cell::Num(pair.rhs.im),
                Cell::Num(gap),
                bound.map_or(Cell::Missing, Cell::Num),
            ]],
            summary: Vec::new(),
        },
        code: if holds { EXIT_OK } else { EXIT_TREND },
        diagnostics: if holds {
            Vec::new()
        } else {
            vec![format!(
                "parseval gap {gap:e} exceeds bound {:e}",
                bound.unwrap_or_default()
            )]
        },
    })
}

pub fn cmd_reconstruct(
    k: i64,
    terms: Option<u32>,
    window: usize,
    probes: &[i64],
    cap_factor: f64,
) -> Result<Outcome, (i32, String)> {
    if window == 0 {
        return Err(usage("--window must be at least 1"));
    }
    let cap = cap_for(window, cap_factor).map_err(lib_error)?;
    if let Some(&p) = probes.iter().find(|p| p.unsigned_abs() as usize > cap) {
        return Err(lib_error(Error::ProbeOutsideWindow { probe: p, cap }));
    }
    let b = BraidPower(k);
    let terms = terms.unwrap_or_else(|| auto_terms_for(b, window));
    let r = reconstruct(b, terms, window, cap).map_err(lib_error)?;
    let target = b.as_seq();
    let rows = probes
        .iter()
        .map(|&n| {
            let c = r.seq.get(n);
            let t = target.get(n);
            vec![
                Cell::Int(n),
                Cell::Num(c.re),
                Cell::Num(c.im),
                Cell::Num(t.re),
                Cell::Num((c - t).norm()),
            ]
        })
        .collect();
    let e = probe_errors(&r.seq, k, probes);
    Ok(Outcome {
        table: Table {
            command: "reconstruct",
            header: vec!["n", "re", "im", "target", "abs_err"],
            rows,
            summary: vec![
                ("k", Cell::Int(k)),
                ("N", Cell::Int(window as i64)),
                ("M", Cell::Int(terms as i64)),
                ("cap", Cell::Int(cap as i64)),
                ("err_target", Cell::Num(e.err_target)),
                ("err_off", Cell::Num(e.err_off)),
                ("l2_err", Cell::Num(e.l2_err)),
                ("discarded_mass", Cell::Num(r.discarded)),
            ],
        },
        code: EXIT_OK,
        diagnostics: Vec::new(),
    })
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes to the given streams. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.table.render(&cli.output).as_bytes());
            for d in &outcome.diagnostics {
                let _ = writeln!(err, "{d}");
            }
            outcome.code
        }
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
