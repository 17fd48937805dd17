//! Command line front end over the verification library.
//!
//! Subcommands either inspect a single eta-quotient (`certify`, `orders`,
//! `expand`, `u`, `decompose`), run a built-in verification task
//! (`theorem11`, `theorem12`, `watson`, `replay3`), or execute a job file
//! (`run`). Every subcommand produces verification reports, printed one per
//! line: human-readable by default, JSON objects under `--json` (reports on
//! standard output, input diagnostics on standard error).
//!
//! Exit codes: 0 when every report passed, 1 when some check failed, 2 when
//! the input could not be processed at all.

use clap::{Parser, Subcommand};
use qeta::{
    certification_report, cubic_partition_series, decompose, execute_program, order_rows,
    parse_program, replay_section_3, verify_congruence_family, verify_theorem_1_1, verify_watson,
    CongruenceFamily, EtaQuotient, HauptError, ReportTables, Status, TruncatedSeries,
    VerificationReport,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qeta",
    version,
    about = "Exact eta-quotient certification and partition-congruence verification"
)]
struct Cli {
    /// Series precision for expansions and identity checks
    #[arg(long, global = true, default_value_t = 200)]
    terms: usize,

    /// Run series arithmetic in residues modulo this value where supported
    #[arg(long, global = true)]
    modulus: Option<u64>,

    /// Emit one JSON object per report instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a job file of let/assert statements
    Run {
        /// Path to the job file
        file: PathBuf,
    },
    /// Check the four modularity conditions of an eta-quotient
    Certify {
        /// Group level N
        #[arg(long)]
        level: u64,
        /// Exponent map as "delta:r" pairs, e.g. "9:1,18:1,1:-1,2:-1"
        #[arg(long)]
        eta: String,
    },
    /// Print the exact order of an eta-quotient at every cusp
    Orders {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        eta: String,
    },
    /// Print q-expansion coefficients of an eta-quotient
    Expand {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        eta: String,
    },
    /// Apply the coefficient-extraction operator U_p to a q-expansion
    U {
        /// Extraction order p (at least 2)
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        eta: String,
    },
    /// Express a q-expansion as a polynomial in a degree-one generator
    Decompose {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        eta: String,
        /// Apply U_p to the expansion before decomposing
        #[arg(long)]
        u: Option<u64>,
        /// Generator exponent map, by default the degree-one level-6 quotient
        #[arg(long, default_value = "3:4,6:4,1:-4,2:-4")]
        generator: String,
        /// Level of the generator
        #[arg(long, default_value_t = 6)]
        generator_level: u64,
        /// Degree bound for the decomposition
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Verify the cubic-partition identity a(3n+2) = 3 (product side), coefficientwise
    Theorem11,
    /// Verify the cubic-partition congruence family a(3^a n + c) = 0 mod 3^(a+d)
    Theorem12 {
        /// Largest exponent alpha to check
        #[arg(long, default_value_t = 4)]
        alpha_max: u32,
        /// Largest progression index n to scan
        #[arg(long, default_value_t = 30000)]
        upto: u64,
    },
    /// Verify the classical p(5^k n + r_k) = 0 mod 5^k congruences
    Watson {
        /// Largest power k to check
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        #[arg(long, default_value_t = 30000)]
        upto: u64,
    },
    /// Re-run the full identity derivation: certification, orders, pole
    /// bound, constant, identity, and the theorem it proves
    Replay3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(reports) => {
            for report in &reports {
                emit(report, cli.json);
            }
            aggregate_exit(&reports)
        }
        Err(message) => {
            eprintln!("qeta: {message}");
            ExitCode::from(2)
        }
    }
}

/// Input-level problems return `Err` (exit 2 before any report is printed);
/// everything after that point reports per task.
fn run(cli: &Cli) -> Result<Vec<VerificationReport>, String> {
    let terms = cli.terms.max(1);
    match &cli.command {
        Command::Run { file } => {
            let source = std::fs::read_to_string(file)
                .map_err(|e| format!("{}: {e}", file.display()))?;
            let program =
                parse_program(&source).map_err(|d| format!("{}:{d}", file.display()))?;
            Ok(execute_program(&program, terms))
        }
        Command::Certify { level, eta } => {
            let quotient = quotient_from_flags(*level, eta)?;
            Ok(vec![certification_report("certify", &quotient.certify_modular())])
        }
        Command::Orders { level, eta } => {
            let quotient = quotient_from_flags(*level, eta)?;
            let report = match quotient.order_table() {
                Ok(table) => {
                    let rows = order_rows(&table);
                    let tables =
                        ReportTables { orders: Some(rows), ..ReportTables::default() };
                    VerificationReport::pass("orders", table.entries().len() as u64)
                        .with_tables(tables)
                }
                Err(e) => VerificationReport::error("orders", e.to_string()),
            };
            Ok(vec![report])
        }
        Command::Expand { level, eta } => {
            let quotient = quotient_from_flags(*level, eta)?;
            let series = match cli.modulus {
                Some(m) => quotient.q_expansion_mod(terms, m),
                None => quotient.q_expansion(terms),
            };
            Ok(vec![expansion_report("expand", series.map_err(|e| e.to_string()))])
        }
        Command::U { p, level, eta } => {
            let quotient = quotient_from_flags(*level, eta)?;
            let task = format!("u{p}");
            let series = extract_u(&quotient, *p, terms, cli.modulus);
            Ok(vec![expansion_report(task, series)])
        }
        Command::Decompose { level, eta, u, generator, generator_level, degree } => {
            let quotient = quotient_from_flags(*level, eta)?;
            let generator = quotient_from_flags(*generator_level, generator)?;
            Ok(vec![decompose_report(&quotient, *u, &generator, *degree, terms)])
        }
        Command::Theorem11 => Ok(vec![verify_theorem_1_1(terms)
            .unwrap_or_else(|e| VerificationReport::error("theorem11", e.to_string()))]),
        Command::Theorem12 { alpha_max, upto } => {
            let modulus = cli.modulus.unwrap_or(2187);
            let upto = usize::try_from(*upto).map_err(|_| "upto is too large".to_string())?;
            let series = cubic_partition_series(upto + 1, Some(modulus))
                .map_err(|e| e.to_string())?;
            Ok((1..=*alpha_max)
                .map(|alpha| cubic_family_report(&series, alpha, upto))
                .collect())
        }
        Command::Watson { k_max, upto } => {
            let upto = usize::try_from(*upto).map_err(|_| "upto is too large".to_string())?;
            Ok((1..=*k_max)
                .map(|k| {
                    verify_watson(k, upto).unwrap_or_else(|e| {
                        VerificationReport::error(format!("watson k={k}"), e.to_string())
                    })
                })
                .collect())
        }
        Command::Replay3 => Ok(vec![replay_section_3(terms)
            .unwrap_or_else(|e| VerificationReport::error("replay3", e.to_string()))]),
    }
}

/// Parse "delta:r,delta:r,..." into an eta-quotient at the given level.
fn quotient_from_flags(level: u64, eta: &str) -> Result<EtaQuotient, String> {
    let mut pairs = Vec::new();
    for piece in eta.split(',') {
        let piece = piece.trim();
        let (delta, exponent) = piece
            .split_once(':')
            .ok_or_else(|| format!("bad eta factor '{piece}', expected 'delta:r'"))?;
        let delta: u64 = delta
            .trim()
            .parse()
            .map_err(|_| format!("bad divisor '{}' in eta factor", delta.trim()))?;
        let exponent: i64 = exponent
            .trim()
            .parse()
            .map_err(|_| format!("bad exponent '{}' in eta factor", exponent.trim()))?;
        pairs.push((delta, exponent));
    }
    EtaQuotient::new(level, pairs).map_err(|e| e.to_string())
}

/// Expand and apply `U_p`, sized so the result still has `terms` coefficients.
fn extract_u(
    quotient: &EtaQuotient,
    p: u64,
    terms: usize,
    modulus: Option<u64>,
) -> Result<TruncatedSeries, String> {
    let p_usize = usize::try_from(p).map_err(|_| "p is too large".to_string())?;
    let base_precision = p_usize
        .checked_mul(terms - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| "terms too large for the requested p".to_string())?;
    let series = match modulus {
        Some(m) => quotient.q_expansion_mod(base_precision, m),
        None => quotient.q_expansion(base_precision),
    }
    .map_err(|e| e.to_string())?;
    series.u_p(p_usize).map_err(|e| e.to_string())
}

/// Report a computed expansion: the coefficient list rides in the constant
/// slot, `checked` counts the coefficients.
fn expansion_report(
    task: impl Into<String>,
    series: Result<TruncatedSeries, String>,
) -> VerificationReport {
    let task = task.into();
    match series {
        Ok(series) => {
            let checked = series.precision() as u64;
            let tables = ReportTables {
                constant: Some(coefficient_list(&series)),
                ..ReportTables::default()
            };
            VerificationReport::pass(task, checked).with_tables(tables)
        }
        Err(message) => VerificationReport::error(task, message),
    }
}

fn coefficient_list(series: &TruncatedSeries) -> String {
    let mut out = String::new();
    for n in 0..series.precision() {
        if n > 0 {
            out.push_str(", ");
        }
        out.push_str(&series.coeff(n).expect("n below precision").to_string());
    }
    out
}

fn decompose_report(
    quotient: &EtaQuotient,
    u: Option<u64>,
    generator: &EtaQuotient,
    degree: usize,
    terms: usize,
) -> VerificationReport {
    let task = "decompose";
    // the degree bound needs strictly smaller precision on both operands
    let terms = terms.max(degree + 2);
    let inner = || -> Result<VerificationReport, String> {
        let series = match u {
            Some(p) => extract_u(quotient, p, terms, None)?,
            None => quotient.q_expansion(terms).map_err(|e| e.to_string())?,
        };
        let generator = generator.q_expansion(terms).map_err(|e| e.to_string())?;
        let checked = series.precision().min(generator.precision()) as u64;
        match decompose(&series, &generator, degree) {
            Ok(poly) => {
                let rendered = poly
                    .coeffs()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                let tables = ReportTables {
                    constant: Some(format!("[{rendered}]")),
                    ..ReportTables::default()
                };
                Ok(VerificationReport::pass(task, checked).with_tables(tables))
            }
            Err(HauptError::ResidualMismatch { exponent }) => Ok(VerificationReport::fail(
                task,
                exponent as u64,
                exponent as u64,
                "nonzero residual",
            )),
            Err(e) => Err(e.to_string()),
        }
    };
    inner().unwrap_or_else(|message| VerificationReport::error(task, message))
}

fn cubic_family_report(
    series: &TruncatedSeries,
    alpha: u32,
    upto: usize,
) -> VerificationReport {
    CongruenceFamily::cubic(alpha)
        .and_then(|family| verify_congruence_family(series, &family, upto))
        .unwrap_or_else(|e| {
            VerificationReport::error(format!("cubic alpha={alpha}"), e.to_string())
        })
}

fn emit(report: &VerificationReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string(report).expect("reports serialize"));
        return;
    }
    println!("{report}");
    let Some(tables) = &report.tables else { return };
    if let Some(conditions) = &tables.conditions {
        for row in conditions {
            let mark = if row.holds { "ok" } else { "violated" };
            println!("  [{mark}] {}", row.name);
        }
    }
    if let Some(orders) = &tables.orders {
        for row in orders {
            println!(
                "  denominator {} (multiplicity {}): order {}",
                row.denominator, row.multiplicity, row.order
            );
        }
    }
    if let Some(valuations) = &tables.valuations {
        for row in valuations {
            match row.valuation {
                Some(v) => println!("  x^{}: 3-adic valuation {v}", row.index),
                None => println!("  x^{}: zero coefficient", row.index),
            }
        }
    }
    if let Some(constant) = &tables.constant {
        println!("  value: {constant}");
    }
}

fn aggregate_exit(reports: &[VerificationReport]) -> ExitCode {
    if reports.iter().any(|r| r.status == Status::Error) {
        ExitCode::from(2)
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
