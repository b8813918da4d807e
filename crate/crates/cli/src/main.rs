//! `perispec`: command-line front end for the end-periodic operator engine
//! and the Seifert invariant calculator.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | internal error or output failure |
//! | 2 | invalid input: unreadable file, malformed JSON, bad arguments, non-coprime or degenerate Seifert data |
//! | 3 | singular pencil (`det(T + mu A)` vanishes identically) |
//! | 4 | operator not Fredholm at the requested weight |
//! | 5 | verification failure (`check-barmu` mismatch, truncation oracle disagreement) |
//! | 6 | numerical failure: non-generic path, unresolved contour, unstabilized truncation |
//!
//! `PERISPEC_THREADS` caps the worker threads used by sweeps.

mod csv;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use perispec::endperiodic::{
    annulus_contributions, endpoint_indices, index, spectral_flow, track_spectral_curves,
    truncation_kernels, EndPeriodicOperator,
};
use perispec::family::spectral_set;
use perispec::io::{parse_family, parse_path, parse_symbol};
use perispec::seifert::{check_barmu, enumerate_seifert, report, sweep, SeifertData};
use perispec::{Complex64, Error};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "perispec",
    version,
    about = "End-periodic index engine and Seifert invariant calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral points of an affine family `T + mu A`.
    Family {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// End-periodic operators given by a Laurent symbol or a path of symbols.
    #[command(subcommand)]
    Ep(EpCommand),
    /// Invariants of Seifert fibered homology spheres.
    #[command(subcommand)]
    Seifert(SeifertCommand),
}

#[derive(Subcommand)]
enum EpCommand {
    /// Fredholm index at weight `delta`.
    Index {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        /// Also compute kernel and cokernel from truncations up to this many
        /// sites and fail with exit code 5 if they disagree with the index.
        #[arg(long, value_name = "N_MAX")]
        truncation: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// `index(delta) - index(delta2)` and the zeros of `det D` in between.
    IndexChange {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta2: f64,
        #[arg(long)]
        json: bool,
    },
    /// Spectral flow through the unit circle along a path of symbols.
    Flow {
        file: PathBuf,
        /// Only record curves that meet `r_min <= |z| <= r_max`.
        #[arg(long, value_name = "R_MIN,R_MAX", value_parser = parse_annulus)]
        annulus: Option<(f64, f64)>,
        /// Directory for `curves.csv` and `events.csv`.
        #[arg(long, value_name = "DIR")]
        csv_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SeifertCommand {
    /// Full invariant report for `Sigma(a_1, ..., a_n)`.
    Report {
        #[arg(required = true, num_args = 3..)]
        multiplicities: Vec<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Reports for every instance up to a product bound, as CSV.
    Sweep {
        #[command(flatten)]
        range: Range,
        /// Write the table here instead of standard output.
        #[arg(long, value_name = "FILE")]
        csv_out: Option<PathBuf>,
    },
    /// Checks `eta_dir / 2 + eta_sign / 8 = -mu_bar` on every instance.
    CheckBarmu {
        #[command(flatten)]
        range: Range,
        /// Additional instances, comma separated, e.g. `2,3,5,7`.
        #[arg(long, value_name = "A,B,C,...", value_parser = parse_list)]
        extra: Vec<Vec<u64>>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Range {
    /// Largest product of multiplicities.
    #[arg(long)]
    max_product: u64,
    /// Number of singular fibers.
    #[arg(long, default_value_t = 3)]
    fibers: usize,
}

fn parse_annulus(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected R_MIN,R_MAX")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(a >= 0.0 && b > a) {
        return Err("need 0 <= R_MIN < R_MAX".into());
    }
    Ok((a, b))
}

fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_)
            | Error::Dimension(_)
            | Error::Json(_)
            | Error::NotCoprime(_)
            | Error::UnsupportedSeifert(_)
            | Error::SpectralBasePoint { .. }
            | Error::PoleOrderExceeded { .. } => 2,
            Error::SingularPencil => 3,
            Error::NotFredholm { .. } | Error::BoundaryZero { .. } => 4,
            Error::NonFiniteSample { .. }
            | Error::NearSingular { .. }
            | Error::ContourTooClose { .. }
            | Error::Winding { .. }
            | Error::Unstabilized { .. }
            | Error::Collision { .. }
            | Error::ZeroCountChanged { .. }
            | Error::TangentialCrossing { .. }
            | Error::DegenerateCrossing { .. } => 6,
            Error::Normalization(_) | Error::Consistency(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn output(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) -> Outcome {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    println!("{s}");
    Ok(())
}

/// Components that round to zero print without a sign.
fn fmt_c(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:.12}{:+.12}i", clean(z.re), clean(z.im))
}

fn cmd_family(file: &Path, json: bool) -> Outcome {
    let fam = parse_family(&read(file)?)?;
    let points = spectral_set(&fam)?;
    if json {
        return print_json(&json!({ "n": fam.n(), "spectral_points": points }));
    }
    println!("n = {}, {} spectral points", fam.n(), points.len());
    println!("mu\tdet_mult\tker_dim\td\trank_P\tpole_order");
    for p in &points {
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            fmt_c(p.mu),
            p.det_multiplicity,
            p.kernel_dim,
            p.d_value,
            p.proj_rank,
            p.pole_order
        );
    }
    Ok(())
}

fn cmd_index(file: &Path, delta: f64, truncation: Option<usize>, json: bool) -> Outcome {
    let (sym, cap) = parse_symbol(&read(file)?)?;
    let op = EndPeriodicOperator::with_cap(sym, delta, cap)?;
    let ind = index(&op)?;
    let oracle = truncation.map(|n| truncation_kernels(&op, n)).transpose()?;
    if json {
        print_json(&json!({ "delta": delta, "index": ind, "truncation": oracle }))?;
    } else {
        println!("{ind}");
        if let Some(t) = &oracle {
            println!(
                "truncation: ker {} coker {} (N = {})",
                t.ker_dim, t.coker_dim, t.sites
            );
        }
    }
    match oracle {
        Some(t) if t.index() != ind => Err(Failure {
            code: 5,
            message: format!(
                "truncation index {} differs from winding index {ind}",
                t.index()
            ),
        }),
        _ => Ok(()),
    }
}

fn cmd_index_change(file: &Path, delta: f64, delta2: f64, json: bool) -> Outcome {
    let (sym, _) = parse_symbol(&read(file)?)?;
    let zeros = annulus_contributions(&sym, delta, delta2)?;
    let change: i64 = zeros.iter().map(|(_, d)| *d as i64).sum();
    if json {
        let list: Vec<_> = zeros
            .iter()
            .map(|(z, d)| json!({ "z": z, "abs": z.norm(), "d": d }))
            .collect();
        return print_json(&json!({
            "delta": delta,
            "delta2": delta2,
            "index_change": change,
            "zeros": list,
        }));
    }
    println!("{change}");
    for (z, d) in &zeros {
        println!("z = {}\t|z| = {:.12}\td = {d}", fmt_c(*z), z.norm());
    }
    Ok(())
}

fn cmd_flow(
    file: &Path,
    annulus: Option<(f64, f64)>,
    csv_out: Option<&Path>,
    json: bool,
) -> Outcome {
    let path = parse_path(&read(file)?)?;
    let (i0, i1) = endpoint_indices(&path)?;
    let (sf, events) = spectral_flow(&path)?;
    if let Some(dir) = csv_out {
        let curves = track_spectral_curves(&path, annulus)?;
        fs::create_dir_all(dir).map_err(|e| Failure::output(dir, e))?;
        let p = dir.join("curves.csv");
        fs::write(&p, csv::curves(&curves)).map_err(|e| Failure::output(&p, e))?;
        let p = dir.join("events.csv");
        fs::write(&p, csv::events(&events)).map_err(|e| Failure::output(&p, e))?;
    }
    if json {
        print_json(&json!({
            "spectral_flow": sf,
            "index_start": i0,
            "index_end": i1,
            "events": events,
        }))?;
    } else {
        println!("SF = {sf:+}");
        println!("index(0) = {i0}");
        println!("index(1) = {i1}");
        if !events.is_empty() {
            println!("t*\tz*\tsign\td\trate");
            for e in &events {
                println!(
                    "{:.10}\t{}\t{:+}\t{}\t{:.6e}",
                    e.t_star,
                    fmt_c(e.z_star),
                    e.sign,
                    e.d,
                    e.rate
                );
            }
        }
    }
    if sf != i1 - i0 {
        return Err(Failure {
            code: 5,
            message: format!("spectral flow {sf} differs from index change {}", i1 - i0),
        });
    }
    Ok(())
}

fn cmd_report(multiplicities: &[u64], json: bool) -> Outcome {
    let r = report(&SeifertData::new(multiplicities)?)?;
    if json {
        let v = serde_json::to_value(&r).map_err(Error::from)?;
        return print_json(&v);
    }
    let fibers: Vec<String> = r.fibers.iter().map(u64::to_string).collect();
    println!("Sigma({})", fibers.join(","));
    println!("orbifold euler characteristic: {}", r.chi);
    println!(
        "normalization: b0 = {}, b = {:?}",
        r.normalization.b0, r.normalization.b
    );
    println!("vortex count: {}", r.vortex_count);
    println!("moduli count: {}", r.moduli_count);
    println!("eta_dir: {}", r.etas.eta_dir);
    println!("eta_sign: {}", r.etas.eta_sign);
    println!("eta_dir/2 + eta_sign/8: {}", r.combo);
    println!("w: {}", r.w);
    println!("casson: {}", r.casson);
    println!("mu_bar: {}", r.mu_bar);
    println!("lambda_SW(S^1 x Y): {}", r.lambda_sw_product);
    println!("lambda_SW(circle action): {}", r.lambda_sw_circle_action);
    println!("lambda_SW(conjugation): {}", r.lambda_sw_conjugation);
    println!("combo = -mu_bar: {}", r.barmu_holds);
    println!("rohlin parity: {}", r.rohlin_parity_ok);
    Ok(())
}

fn instances(range: &Range) -> Result<Vec<Vec<u64>>, Failure> {
    if range.fibers < 3 {
        return Err(Failure::input("--fibers must be at least 3"));
    }
    Ok(enumerate_seifert(range.fibers, range.max_product))
}

fn cmd_sweep(range: &Range, csv_out: Option<&Path>) -> Outcome {
    let list = instances(range)?;
    let reports = sweep(&list).into_iter().collect::<Result<Vec<_>, _>>()?;
    let table = csv::sweep(&reports);
    match csv_out {
        Some(p) => {
            fs::write(p, table).map_err(|e| Failure::output(p, e))?;
            println!("{} instances written to {}", reports.len(), p.display());
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn cmd_check_barmu(range: &Range, extra: &[Vec<u64>], json: bool) -> Outcome {
    let mut list = instances(range)?;
    list.extend(extra.iter().cloned());
    let rep = check_barmu(&list);
    if json {
        print_json(&serde_json::to_value(&rep).map_err(Error::from)?)?;
    } else if rep.all_pass() {
        println!("checked {}: all pass", rep.checked);
    } else {
        println!(
            "checked {}: {} failed",
            rep.checked,
            rep.checked - rep.passed
        );
        for f in &rep.failures {
            println!("FAIL {:?}: {}", f.fibers, f.detail.as_deref().unwrap_or(""));
        }
    }
    if rep.all_pass() {
        Ok(())
    } else {
        Err(Failure {
            code: 5,
            message: format!(
                "{} instances violate combo = -mu_bar",
                rep.checked - rep.passed
            ),
        })
    }
}

fn configure_threads() -> Outcome {
    let Ok(v) = std::env::var("PERISPEC_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::input(format!(
            "PERISPEC_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Family { file, json } => cmd_family(&file, json),
        Command::Ep(EpCommand::Index {
            file,
            delta,
            truncation,
            json,
        }) => cmd_index(&file, delta, truncation, json),
        Command::Ep(EpCommand::IndexChange {
            file,
            delta,
            delta2,
            json,
        }) => cmd_index_change(&file, delta, delta2, json),
        Command::Ep(EpCommand::Flow {
            file,
            annulus,
            csv_out,
            json,
        }) => cmd_flow(&file, annulus, csv_out.as_deref(), json),
        Command::Seifert(SeifertCommand::Report {
            multiplicities,
            json,
        }) => cmd_report(&multiplicities, json),
        Command::Seifert(SeifertCommand::Sweep { range, csv_out }) => {
            cmd_sweep(&range, csv_out.as_deref())
        }
        Command::Seifert(SeifertCommand::CheckBarmu { range, extra, json }) => {
            cmd_check_barmu(&range, &extra, json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("perispec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
