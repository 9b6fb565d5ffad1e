//! Command-line front end.
//!
//! Exit codes: 0 when every metric passes, 1 when a metric (or a
//! verification entry) fails, 2 on bad usage.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::attack::{Strategy, StrategyKind};
use crate::protocol::{Basis, DetectionMode};
use crate::stats::{all_pass, compare, run_session, sig::round_sig, Estimate, Metric, SessionConfig, SessionReport, Verdict};
use crate::verify::run_verification;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mdiqkd", version, about = "MDI QKD simulator under third-party CNOT attacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one session and compare its statistics with the reference values.
    Run {
        #[command(flatten)]
        session: SessionArgs,
        /// Fraction of rounds Eve attacks.
        #[arg(long, default_value_t = 1.0, value_parser = parse_zeta)]
        zeta: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write the output to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one session per zeta value and print a CSV row for each.
    Sweep {
        #[command(flatten)]
        session: SessionArgs,
        /// Comma-separated zeta values, e.g. 0,0.25,0.5.
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',', value_parser = parse_zeta)]
        zetas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the reference tables analytically and print computed vs expected.
    Verify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct SessionArgs {
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = DetectArg::Full)]
    detect: DetectArg,
    /// Force both parties into one basis instead of choosing at random.
    #[arg(long, value_enum, default_value_t = BasisArg::Random)]
    basis: BasisArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Honest,
    Cnot,
    HadamardCnot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetectArg {
    Full,
    PsiOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Random,
    Z,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

fn parse_zeta(s: &str) -> Result<f64, String> {
    let z: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&z) {
        Ok(z)
    } else {
        Err(format!("zeta must lie in [0, 1], got {z}"))
    }
}

impl SessionArgs {
    fn config(&self, zeta: f64) -> SessionConfig {
        let kind = match self.strategy {
            StrategyArg::Honest => StrategyKind::Honest,
            StrategyArg::Cnot => StrategyKind::Cnot,
            StrategyArg::HadamardCnot => StrategyKind::HadamardCnot,
        };
        let mode = match self.detect {
            DetectArg::Full => DetectionMode::Full,
            DetectArg::PsiOnly => DetectionMode::PsiOnly,
        };
        let forced = match self.basis {
            BasisArg::Random => None,
            BasisArg::Z => Some(Basis::Z),
            BasisArg::X => Some(Basis::X),
        };
        // zeta was range-checked by the parser
        let strategy = Strategy::new(kind, zeta).expect("zeta in [0, 1]");
        SessionConfig::new(strategy, self.trials, self.seed)
            .with_mode(mode)
            .with_forced_basis(forced)
    }
}

/// JSON document printed by `run --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    #[serde(flatten)]
    pub report: SessionReport,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

impl RunOutput {
    pub fn new(report: SessionReport) -> Self {
        let verdicts = compare(&report);
        let all_pass = all_pass(&verdicts);
        Self {
            report,
            verdicts,
            all_pass,
        }
    }
}

fn num(x: f64) -> String {
    round_sig(x).to_string()
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn est(e: Option<Estimate>) -> String {
    opt_num(e.map(|e| e.value))
}

fn est_se(e: Option<Estimate>) -> String {
    opt_num(e.map(|e| e.std_err))
}

const CSV_HEADER: [&str; 28] = [
    "strategy",
    "zeta",
    "detect",
    "basis",
    "seed",
    "n_rounds",
    "n_kept",
    "n_attacked_kept",
    "keep_rate",
    "ber_ab",
    "ber_ab_se",
    "ber_z",
    "ber_x",
    "p_e_attacked",
    "p_e_attacked_se",
    "p_e_overall",
    "p_e_overall_se",
    "pi_e",
    "pi_e_se",
    "theory_ber_ab",
    "theory_p_e",
    "theory_pi_e",
    "ber_ab_pass",
    "p_e_pass",
    "pi_e_pass",
    "p_e_estimate",
    "p_e_z_score",
    "all_pass",
];

fn csv_row(out: &RunOutput) -> Vec<String> {
    let r = &out.report;
    let verdict = |m: Metric| out.verdicts.iter().find(|v| v.metric == m);
    let pass = |m: Metric| verdict(m).map(|v| v.pass.to_string()).unwrap_or_default();
    vec![
        r.strategy.to_string(),
        num(r.zeta),
        r.mode.to_string(),
        r.forced_basis.map_or("random".to_string(), |b| b.to_string()),
        r.seed.to_string(),
        r.n_rounds.to_string(),
        r.n_kept.to_string(),
        r.n_attacked_kept.to_string(),
        num(r.keep_rate.value),
        est(r.ber_ab),
        est_se(r.ber_ab),
        est(r.ber_z),
        est(r.ber_x),
        est(r.p_e_attacked),
        est_se(r.p_e_attacked),
        est(r.p_e_overall),
        est_se(r.p_e_overall),
        est(r.pi_e),
        est_se(r.pi_e),
        num(r.theory.ber_ab),
        num(r.theory.p_e),
        opt_num(r.theory.pi_e),
        pass(Metric::BerAb),
        pass(Metric::PE),
        pass(Metric::PiE),
        opt_num(verdict(Metric::PE).and_then(|v| v.estimate)),
        opt_num(verdict(Metric::PE).and_then(|v| v.z_score)),
        out.all_pass.to_string(),
    ]
}

pub fn render_csv(rows: &[RunOutput]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        w.write_record(csv_row(row)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn render_json(out: &RunOutput) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_table(out: &RunOutput) -> String {
    let r = &out.report;
    let mut s = String::new();
    let basis = r.forced_basis.map_or("random".to_string(), |b| b.to_string());
    let _ = writeln!(
        s,
        "strategy {}  zeta {}  detect {}  basis {}  seed {}",
        r.strategy,
        num(r.zeta),
        r.mode,
        basis,
        r.seed
    );
    let _ = writeln!(
        s,
        "rounds {}  kept {} (rate {})  attacked kept {}",
        r.n_rounds,
        r.n_kept,
        num(r.keep_rate.value),
        r.n_attacked_kept
    );
    let line = |s: &mut String, name: &str, e: Option<Estimate>| {
        let _ = match e {
            Some(e) => writeln!(s, "  {name:<13} {:>10} ± {:<10} ({}/{})", num(e.value), num(e.std_err), e.successes, e.trials),
            None => writeln!(s, "  {name:<13} {:>10}", "n/a"),
        };
    };
    line(&mut s, "ber_ab", r.ber_ab);
    line(&mut s, "ber_z", r.ber_z);
    line(&mut s, "ber_x", r.ber_x);
    line(&mut s, "p_e_attacked", r.p_e_attacked);
    line(&mut s, "p_e_overall", r.p_e_overall);
    line(&mut s, "pi_e", r.pi_e);
    let _ = writeln!(s, "{:<8} {:>10} {:>10} {:>9}  verdict", "metric", "estimate", "theory", "z");
    for v in &out.verdicts {
        let z = v.z_score.map(num).unwrap_or_else(|| "-".to_string());
        let verdict = match (v.pass, v.exact) {
            (true, true) => "PASS (exact)",
            (true, false) => "PASS",
            (false, true) => "FAIL (exact)",
            (false, false) => "FAIL",
        };
        let _ = writeln!(
            s,
            "{:<8} {:>10} {:>10} {:>9}  {verdict}",
            v.metric.name(),
            v.estimate.map(num).unwrap_or_else(|| "n/a".to_string()),
            num(v.theory),
            z
        );
    }
    s
}

pub fn render_verification() -> (String, bool) {
    let checks = run_verification();
    let mut s = String::new();
    let mut group = None;
    for c in &checks {
        if group != Some(c.group) {
            let _ = writeln!(s, "== {}", c.group.name());
            group = Some(c.group);
        }
        let _ = writeln!(
            s,
            "[{}] {}: computed {} expected {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.label,
            c.computed,
            c.expected
        );
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let ok = passed == checks.len();
    let _ = writeln!(s, "{passed}/{} checks passed", checks.len());
    (s, ok)
}

fn emit(text: &str, out_path: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), String> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| format!("cannot write output: {e}"))?;
    if let Some(path) = out_path {
        std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command, writes to `stdout`
/// and returns the exit code. Usage errors go to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            if e.use_stderr() {
                let rendered = e.render().to_string();
                eprint!("{rendered}");
                if !rendered.contains("Usage:") {
                    eprintln!("\n{}", Cli::command().render_usage());
                }
            } else {
                let _ = write!(stdout, "{}", e.render());
            }
            return code;
        }
    };

    let (text, ok, out) = match cli.command {
        Command::Run {
            session,
            zeta,
            format,
            out,
        } => {
            let report = match run_session(&session.config(zeta)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let output = RunOutput::new(report);
            let text = match format {
                Format::Json => render_json(&output),
                Format::Csv => render_csv(std::slice::from_ref(&output)),
                Format::Table => render_table(&output),
            };
            (text, output.all_pass, out)
        }
        Command::Sweep {
            session,
            zetas,
            out,
        } => {
            let mut rows = Vec::with_capacity(zetas.len());
            for zeta in zetas {
                match run_session(&session.config(zeta)) {
                    Ok(r) => rows.push(RunOutput::new(r)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_USAGE;
                    }
                }
            }
            let ok = rows.iter().all(|r| r.all_pass);
            (render_csv(&rows), ok, out)
        }
        Command::Verify { out } => {
            let (text, ok) = render_verification();
            (text, ok, out)
        }
    };

    if let Err(e) = emit(&text, out.as_ref(), stdout) {
        eprintln!("error: {e}");
        return EXIT_FAIL;
    }
    if ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
