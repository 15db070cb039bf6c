//! Command-line front end: constants tables, torus checks, eigensolves,
//! coverings, extension checks, and the report-producing experiments.

use clap::{Parser, Subcommand, ValueEnum};
use fracmh::constants::{ConstantsProfile, MsConfig};
use fracmh::covering::{build_covering, color_covering, verify_coverage, verify_disjoint_classes};
use fracmh::extension::{extension_bound_ratios, random_bump_field};
use fracmh::geometry::{rasterize, ShapeSpec};
use fracmh::harness::{
    default_s_grid, default_zoo, run_cheeger, run_comparison, run_counterexample,
    run_makai_hayman, write_csv, write_json, ReportRow, RunConfig,
};
use fracmh::spectral::{lambda1_disk_reference, lambda1_local, lambda1_s};
use fracmh::torus::{poincare_margin, seminorm_fourier, seminorm_quadrature, TorusFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fracmh",
    about = "Numerical verification of the fractional Makai-Hayman inequality",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the constants chain C1s, C2s, mu_s, T_s, C_s, beta_s, alpha_s
    Constants {
        /// fractional orders, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.55, 0.6, 0.75, 0.9])]
        s: Vec<f64>,
        /// user-supplied dimensional constant C_N for the M_s bound
        #[arg(long)]
        cn: Option<f64>,
    },
    /// Cross-check the two torus seminorm routes and the Poincare margin
    TorusCheck {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.55, 0.75, 0.9])]
        s: Vec<f64>,
        /// trigonometric degree of the random test functions
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// number of random test functions per order
        #[arg(long, default_value_t = 50)]
        seeds: u64,
    },
    /// Solve for the first eigenvalue of a shape
    Eigen {
        /// shape: a zoo name (disk, square, ...) or a JSON spec
        #[arg(long)]
        shape: String,
        /// fractional order in (0,1), or "local" for the Laplacian
        #[arg(long)]
        s: String,
        #[arg(long)]
        h: f64,
        /// write the eigenvector as "x y value" lines
        #[arg(long)]
        dump_mode: Option<String>,
    },
    /// Build and color the boundary-disk covering of a shape
    Cover {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        h: f64,
    },
    /// Measure Kelvin extension ratios against their bounds
    ExtensionCheck {
        #[arg(long = "R", default_value_t = std::f64::consts::SQRT_2)]
        big_r: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.6, 0.75, 0.9])]
        s: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Makai-Hayman verification sweep over the shape zoo
    Sweep {
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        config: Option<String>,
    },
    /// Cracked-square counterexample experiment
    Counterexample {
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        config: Option<String>,
    },
    /// Cheeger-chain lower bounds
    Cheeger {
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        config: Option<String>,
    },
    /// Local-vs-fractional eigenvalue comparison chains
    Compare {
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        config: Option<String>,
    },
}

fn parse_shape(text: &str) -> Result<ShapeSpec, String> {
    for (name, spec) in default_zoo() {
        if name == text {
            return Ok(spec);
        }
    }
    serde_json::from_str(text).map_err(|e| {
        format!("shape '{text}' is neither a zoo name nor a valid JSON spec: {e}")
    })
}

fn load_config(path: &Option<String>) -> Result<RunConfig, String> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{p}: {e}"))?;
            RunConfig::from_toml(&text).map_err(|e| e.to_string())
        }
    }
}

fn emit(rows: &[ReportRow], out: OutFormat) -> Result<(), String> {
    let stdout = std::io::stdout();
    let lock = stdout.lock();
    match out {
        OutFormat::Csv => write_csv(rows, lock),
        OutFormat::Json => write_json(rows, lock),
    }
    .map_err(|e| e.to_string())
}

/// Soft rows carry informational allowances; only hard rows gate the exit
/// code.
fn any_hard_failure(rows: &[ReportRow]) -> bool {
    rows.iter().any(|r| !r.pass && r.experiment != "compare-upper")
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    let err = |e: fracmh::Error| e.to_string();
    match cli.command {
        Command::Constants { s, cn } => {
            let ms = match cn {
                Some(v) => MsConfig::user_supplied(v).map_err(err)?,
                None => MsConfig::default(),
            };
            let lambda_disk = lambda1_disk_reference();
            println!("s,C1s,C2s,mu_s,T_s,C_s,beta_s,alpha_s");
            for &sv in &s {
                let p = ConstantsProfile::compute(sv, &ms, lambda_disk).map_err(err)?;
                println!(
                    "{},{},{},{},{},{},{},{}",
                    sv, p.c1s, p.c2s, p.mu_s, p.t_s, p.c_s, p.beta_s, p.alpha_s
                );
            }
            Ok(true)
        }
        Command::TorusCheck { s, degree, seeds } => {
            println!("s,seed,rel_deviation,poincare_margin,pass");
            let mut all_pass = true;
            for &sv in &s {
                for seed in 0..seeds {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let w = TorusFunction::random(2.0 * std::f64::consts::PI, degree, &mut rng)
                        .map_err(err)?
                        .vanishing_at(0.0);
                    let a = seminorm_fourier(&w, sv).map_err(err)?;
                    let b = seminorm_quadrature(&w, sv, 0).map_err(err)?;
                    let dev = (a - b).abs() / a.max(b).max(f64::MIN_POSITIVE);
                    let margin = if sv > 0.5 {
                        poincare_margin(&w, sv, 0.0).map_err(err)?
                    } else {
                        f64::NAN
                    };
                    let pass = dev <= 1e-3 && (margin.is_nan() || margin >= 0.0);
                    all_pass &= pass;
                    println!("{sv},{seed},{dev},{margin},{pass}");
                }
            }
            Ok(all_pass)
        }
        Command::Eigen { shape, s, h, dump_mode } => {
            let spec = parse_shape(&shape)?;
            let mask = rasterize(&spec, h).map_err(err)?;
            let est = if s == "local" {
                lambda1_local(&mask).map_err(err)?
            } else {
                let sv: f64 = s.parse().map_err(|e| format!("--s: {e}"))?;
                lambda1_s(&mask, sv).map_err(err)?
            };
            println!("lambda = {}", est.lambda);
            println!("residual = {}", est.residual);
            println!("nodes = {}", est.node_count);
            if let Some(path) = dump_mode {
                let mut f = fs::File::create(&path).map_err(|e| format!("{path}: {e}"))?;
                let positions: Vec<_> = if est.s.is_some() {
                    let sys = fracmh::nonlocal::NonlocalSystem::assemble(&mask, est.s.unwrap())
                        .map_err(err)?;
                    sys.nodes()
                        .iter()
                        .map(|&(ix, iy)| mask.node_pos(ix, iy))
                        .collect()
                } else {
                    mask.occupied_cells()
                        .map(|(ix, iy)| mask.cell_center(ix, iy))
                        .collect()
                };
                for (p, v) in positions.iter().zip(est.eigenvector.iter()) {
                    writeln!(f, "{} {} {}", p.x, p.y, v).map_err(|e| e.to_string())?;
                }
            }
            Ok(true)
        }
        Command::Cover { shape, h } => {
            let spec = parse_shape(&shape)?;
            let mask = rasterize(&spec, h).map_err(err)?;
            let cov = color_covering(build_covering(&mask).map_err(err)?);
            let ok = verify_coverage(&mask, &cov) && verify_disjoint_classes(&cov);
            println!("x,y,radius,color");
            for (c, &color) in cov.centers().iter().zip(cov.colors().iter()) {
                println!("{},{},{},{}", c.x, c.y, cov.radius(), color);
            }
            eprintln!(
                "classes = {}, coverage+disjointness = {}",
                cov.class_count(),
                if ok { "verified" } else { "FAILED" }
            );
            Ok(ok)
        }
        Command::ExtensionCheck { big_r, s, seeds } => {
            println!("seed,s,seminorm_ratio,seminorm_bound,l2_ratio,l2_bound,pass");
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            let mut all_pass = true;
            for seed in 0..seeds {
                let u = random_bump_field(1.0, 33, &mut rng).map_err(err)?;
                for &sv in &s {
                    let r = extension_bound_ratios(&u, big_r, sv).map_err(err)?;
                    let pass =
                        r.seminorm_ratio <= r.seminorm_bound && r.l2_ratio <= r.l2_bound;
                    all_pass &= pass;
                    println!(
                        "{seed},{sv},{},{},{},{},{pass}",
                        r.seminorm_ratio, r.seminorm_bound, r.l2_ratio, r.l2_bound
                    );
                }
            }
            Ok(all_pass)
        }
        Command::Sweep { out, config } => {
            let cfg = load_config(&config)?;
            let ms = cfg.ms_config().map_err(err)?;
            let shapes = cfg.shapes.map_or_else(default_zoo, |v| {
                v.into_iter().map(|s| (format!("{s:?}"), s)).collect()
            });
            let s_list = cfg.s_list.unwrap_or_else(default_s_grid);
            let h = cfg.h.unwrap_or(1.0 / 32.0);
            let rows = run_makai_hayman(&shapes, &s_list, h, &ms).map_err(err)?;
            emit(&rows, out)?;
            Ok(!any_hard_failure(&rows))
        }
        Command::Counterexample { out, config } => {
            let cfg = load_config(&config)?;
            let ms = cfg.ms_config().map_err(err)?;
            let k_list = cfg.k_list.unwrap_or_else(|| vec![2, 3, 4]);
            let s_list = cfg.s_list.unwrap_or_else(|| vec![0.4, 0.5, 0.75]);
            let h = cfg.h.unwrap_or(1.0 / 8.0);
            let rows = run_counterexample(&k_list, &s_list, h, &ms).map_err(err)?;
            emit(&rows, out)?;
            Ok(!any_hard_failure(&rows))
        }
        Command::Cheeger { out, config } => {
            let cfg = load_config(&config)?;
            let ms = cfg.ms_config().map_err(err)?;
            let shapes = cfg.shapes.map_or_else(default_zoo, |v| {
                v.into_iter().map(|s| (format!("{s:?}"), s)).collect()
            });
            let s_list = cfg.s_list.unwrap_or_else(|| vec![0.75]);
            let h = cfg.h.unwrap_or(1.0 / 16.0);
            let mut rows = Vec::new();
            for (name, spec) in &shapes {
                for &sv in &s_list {
                    rows.extend(run_cheeger(name, spec, sv, h, &ms).map_err(err)?);
                }
            }
            emit(&rows, out)?;
            Ok(!any_hard_failure(&rows))
        }
        Command::Compare { out, config } => {
            let cfg = load_config(&config)?;
            let ms = cfg.ms_config().map_err(err)?;
            let shapes = cfg.shapes.map_or_else(default_zoo, |v| {
                v.into_iter().map(|s| (format!("{s:?}"), s)).collect()
            });
            let s_list = cfg.s_list.unwrap_or_else(|| vec![0.75]);
            let h = cfg.h.unwrap_or(1.0 / 16.0);
            let mut rows = Vec::new();
            for (name, spec) in &shapes {
                for &sv in &s_list {
                    rows.extend(run_comparison(name, spec, sv, h, &ms).map_err(err)?);
                }
            }
            emit(&rows, out)?;
            Ok(!any_hard_failure(&rows))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
