//! zetafrac: numerical study of the joint distribution of fractional
//! parts of Riemann zeta zeros — density evaluation, empirical DM grids,
//! Landau sums, continued fractions, Diophantine scans, and relation
//! detection, with CSV / JSON / PGM output.

mod config;
mod inputs;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use config::{resolve, CountModeArg, OutputFormat, PhaseModeArg, RawConfig, Settings};
use inputs::{load_h_spec, load_relations, load_zeros, resolve_t, resolve_t_list, AlphaSource};
use zetafrac::density::{g_grid, Grid2D};
use zetafrac::diophantine::{
    check_condition_15, classify_ef, continued_fraction, convergent_inequality_check,
    u_alpha_membership,
};
use zetafrac::empirical::{dm_grid, theorem_check};
use zetafrac::error::{Error, Result};
use zetafrac::landau::landau_report;
use zetafrac::relations::{detect_relations, solve_alpha, DetectBounds};
use zetafrac::render;
use zetafrac::xprec::XCtx;
use zetafrac::zeros::ZeroSet;

#[derive(Parser)]
#[command(
    name = "zetafrac",
    version,
    about = "Joint distribution of fractional parts (α₁γ, …, αₙγ) of zeta zeros",
    after_help = "Exit codes: 0 ok; 2 zero-table parse; 3 cache format; 4 relation system; \
                  5 spectrum/dimension/resolution; 6 domain or insufficient data; \
                  7 bad decimal; 8 I/O; 9 JSON; 10 configuration (clap usage errors also exit 2)."
)]
struct Cli {
    /// JSON config file layered between built-in defaults and flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for parallel kernels (results are worker-invariant)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Extended-precision mantissa bits for α / phase arithmetic
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    /// Directory for output files
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Grid output format
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a text zero table (one γ per line) into the binary cache
    Ingest {
        /// Input text file
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Output cache filename (under --out-dir)
        #[arg(long, default_value = "zeros.zfpz")]
        out: String,
    },
    /// Evaluate the analytic density g on an R×R torus grid
    Density {
        /// Relation system: JSON file or example1 / example2
        #[arg(long, value_name = "FILE|example1|example2")]
        relations: String,
        /// Grid resolution R
        #[arg(long)]
        resolution: Option<usize>,
        /// Output basename (under --out-dir)
        #[arg(long, default_value = "density")]
        out: String,
        /// Also write a diverging-colormap PPM next to the PGM
        #[arg(long)]
        diverging: bool,
    },
    /// Discretized empirical density DM from a zero table
    Dm {
        /// Zero table (binary cache or text)
        #[arg(long, value_name = "FILE")]
        zeros: PathBuf,
        #[command(flatten)]
        alpha: AlphaSource,
        /// Grid resolution R (Δ = 1/R)
        #[arg(long)]
        resolution: Option<usize>,
        /// Height cutoff T
        #[arg(long)]
        t: Option<f64>,
        /// Use the height of the k-th zero as T
        #[arg(long, value_name = "K", conflicts_with = "t")]
        t_index: Option<usize>,
        /// Normalization count: observed or asymptotic
        #[arg(long, value_enum)]
        count_mode: Option<CountModeArg>,
        /// Output basename (under --out-dir)
        #[arg(long, default_value = "dm")]
        out: String,
        /// Also write a diverging-colormap PPM next to the PGM
        #[arg(long)]
        diverging: bool,
    },
    /// Landau sum Σ x^{iγ} with the Lemma-1 main term and residual
    Landau {
        /// Zero table (binary cache or text)
        #[arg(long, value_name = "FILE")]
        zeros: PathBuf,
        /// Evaluation point x > 1
        #[arg(long)]
        x: f64,
        /// Height cutoff T
        #[arg(long)]
        t: Option<f64>,
        /// Use the height of the k-th zero as T
        #[arg(long, value_name = "K", conflicts_with = "t")]
        t_index: Option<usize>,
        /// Phase accumulation mode
        #[arg(long, value_enum)]
        phase_mode: Option<PhaseModeArg>,
        /// Also write the report JSON to this basename
        #[arg(long)]
        out: Option<String>,
    },
    /// Compare (1/T)Σh(γα) against ∫hg over a list of heights
    Compare {
        /// Zero table (binary cache or text)
        #[arg(long, value_name = "FILE")]
        zeros: PathBuf,
        /// Relation system: JSON file or example1 / example2
        #[arg(long, value_name = "FILE|example1|example2")]
        relations: String,
        /// Inline α decimals (defaults to solving the relation system)
        #[arg(long, value_name = "DECIMALS")]
        alpha: Option<String>,
        /// α JSON file (defaults to solving the relation system)
        #[arg(long, value_name = "FILE", conflicts_with = "alpha")]
        alpha_file: Option<PathBuf>,
        /// Test function terms: JSON list of {"m": [..], "re": .., "im": ..}
        #[arg(long, value_name = "FILE")]
        h_spec: Option<PathBuf>,
        /// Comma-separated heights T
        #[arg(long, value_name = "T,T,..")]
        t_list: Option<String>,
        /// Comma-separated 1-based zero indices
        #[arg(long, value_name = "K,K,..")]
        t_indices: Option<String>,
        /// Phase accumulation mode
        #[arg(long, value_enum)]
        phase_mode: Option<PhaseModeArg>,
        /// Output basename (under --out-dir)
        #[arg(long, default_value = "compare")]
        out: String,
    },
    /// Continued fraction of α₁/α₂ with the (3.3) convergent inequality
    Cf {
        #[command(flatten)]
        alpha: AlphaSource,
        /// Maximum partial quotients (≤ 60)
        #[arg(long)]
        terms: Option<usize>,
        /// Also report U_α membership at this height T
        #[arg(long, value_name = "T")]
        u_alpha_t: Option<f64>,
        /// ε for U_α membership
        #[arg(long)]
        epsilon: Option<f64>,
        /// B for U_α membership
        #[arg(long)]
        b: Option<f64>,
        /// Also write the report JSON to this basename
        #[arg(long)]
        out: Option<String>,
    },
    /// Scan Diophantine condition (1.5) and the E_J/F_J partition
    Scan {
        #[command(flatten)]
        alpha: AlphaSource,
        /// Frequency cutoff J
        #[arg(long)]
        j: Option<u64>,
        /// Threshold constant C
        #[arg(long)]
        c: Option<f64>,
        /// Baker exponent μ for the diagnostic scan
        #[arg(long)]
        mu: Option<f64>,
        /// Also write the report JSON to this basename
        #[arg(long)]
        out: Option<String>,
    },
    /// Detect rational relations m·α = (a/q)·log(p)/(2π) numerically
    Detect {
        #[command(flatten)]
        alpha: AlphaSource,
        /// Search bound on ‖m‖∞
        #[arg(long)]
        max_norm: Option<u64>,
        /// Largest prime p to try
        #[arg(long)]
        max_prime: Option<u64>,
        /// Largest denominator q to try
        #[arg(long)]
        max_q: Option<u64>,
        /// Largest exponent a to try
        #[arg(long)]
        max_a: Option<u64>,
        /// Match tolerance on |m·α − (a/q)log(p)/2π|
        #[arg(long)]
        tol: Option<f64>,
        /// Output basename (under --out-dir)
        #[arg(long, default_value = "relations")]
        out: String,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let flags = RawConfig {
        workers: cli.workers,
        precision_bits: cli.precision_bits,
        out_dir: cli.out_dir,
        format: cli.format,
        ..RawConfig::default()
    };
    let settings = resolve(cli.config.as_ref(), flags)?;
    std::fs::create_dir_all(&settings.out_dir)?;
    match cli.command {
        Command::Ingest { input, out } => cmd_ingest(&settings, &input, &out),
        Command::Density { relations, resolution, out, diverging } => {
            cmd_density(&settings, &relations, resolution, &out, diverging)
        }
        Command::Dm { zeros, alpha, resolution, t, t_index, count_mode, out, diverging } => {
            cmd_dm(&settings, &zeros, &alpha, resolution, t, t_index, count_mode, &out, diverging)
        }
        Command::Landau { zeros, x, t, t_index, phase_mode, out } => {
            cmd_landau(&settings, &zeros, x, t, t_index, phase_mode, out.as_deref())
        }
        Command::Compare {
            zeros, relations, alpha, alpha_file, h_spec, t_list, t_indices, phase_mode, out,
        } => cmd_compare(
            &settings, &zeros, &relations, alpha, alpha_file, h_spec.as_ref(),
            t_list.as_ref(), t_indices.as_ref(), phase_mode, &out,
        ),
        Command::Cf { alpha, terms, u_alpha_t, epsilon, b, out } => {
            cmd_cf(&settings, &alpha, terms, u_alpha_t, epsilon, b, out.as_deref())
        }
        Command::Scan { alpha, j, c, mu, out } => {
            cmd_scan(&settings, &alpha, j, c, mu, out.as_deref())
        }
        Command::Detect { alpha, max_norm, max_prime, max_q, max_a, tol, out } => {
            cmd_detect(&settings, &alpha, max_norm, max_prime, max_q, max_a, tol, &out)
        }
    }
}

fn out_path(settings: &Settings, name: &str) -> PathBuf {
    settings.out_dir.join(name)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    println!("{text}");
    Ok(())
}

/// Write a grid in the configured format; returns the files written.
fn emit_grid(
    settings: &Settings,
    base: &str,
    grid: &Grid2D,
    meta: BTreeMap<String, Value>,
    diverging: bool,
) -> Result<Vec<PathBuf>> {
    let (vmin, vmax) = grid.min_max();
    let mut sidecar = meta.clone();
    sidecar.insert("r".into(), json!(grid.r()));
    sidecar.insert("vmin".into(), json!(vmin));
    sidecar.insert("vmax".into(), json!(vmax));
    let meta_pairs: Vec<(&str, String)> = sidecar
        .iter()
        .map(|(k, v)| (k.as_str(), v.to_string()))
        .collect();
    let mut files = Vec::new();
    match settings.format {
        OutputFormat::Csv => {
            let csv = out_path(settings, &format!("{base}.csv"));
            let mut buf = Vec::new();
            render::write_grid_csv(&mut buf, grid, &meta_pairs)?;
            std::fs::write(&csv, buf)?;
            files.push(csv);
            let sc = out_path(settings, &format!("{base}.meta.json"));
            write_json(&sc, &sidecar)?;
            files.push(sc);
        }
        OutputFormat::Json => {
            let mut doc = sidecar.clone();
            doc.insert("values".into(), json!(grid.values()));
            let path = out_path(settings, &format!("{base}.json"));
            write_json(&path, &doc)?;
            files.push(path);
        }
        OutputFormat::Pgm => {
            let pgm = out_path(settings, &format!("{base}.pgm"));
            let mut buf = Vec::new();
            render::write_grid_pgm(&mut buf, grid)?;
            std::fs::write(&pgm, buf)?;
            files.push(pgm);
            if diverging {
                let ppm = out_path(settings, &format!("{base}.ppm"));
                let mut buf = Vec::new();
                render::write_grid_ppm(&mut buf, grid)?;
                std::fs::write(&ppm, buf)?;
                files.push(ppm);
            }
            let sc = out_path(settings, &format!("{base}.meta.json"));
            write_json(&sc, &sidecar)?;
            files.push(sc);
        }
    }
    Ok(files)
}

fn files_json(files: &[PathBuf]) -> Value {
    json!(files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>())
}

fn cmd_ingest(settings: &Settings, input: &Path, out: &str) -> Result<()> {
    let file = std::fs::File::open(input)?;
    let zeros = ZeroSet::parse_zeros(std::io::BufReader::new(file))?;
    let path = out_path(settings, out);
    let mut sink = std::io::BufWriter::new(std::fs::File::create(&path)?);
    let written = zeros.write_cache(&mut sink)?;
    sink.flush()?;
    print_json(&json!({
        "count": zeros.count(),
        "t_max": zeros.t_max(),
        "output": path.display().to_string(),
        "bytes": written,
    }))
}

fn cmd_density(
    settings: &Settings,
    relations: &str,
    resolution: Option<usize>,
    out: &str,
    diverging: bool,
) -> Result<()> {
    let system = load_relations(relations)?;
    let r = resolution.unwrap_or(settings.resolution);
    let grid = g_grid(&system, r, settings.workers)?;
    let mut meta = BTreeMap::new();
    meta.insert("command".to_string(), json!("density"));
    meta.insert("relations".to_string(), json!(relations));
    meta.insert("rank".to_string(), json!(system.r()));
    let files = emit_grid(settings, out, &grid, meta, diverging)?;
    let (vmin, vmax) = grid.min_max();
    print_json(&json!({
        "r": r,
        "vmin": vmin,
        "vmax": vmax,
        "files": files_json(&files),
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_dm(
    settings: &Settings,
    zeros_path: &Path,
    alpha_src: &AlphaSource,
    resolution: Option<usize>,
    t: Option<f64>,
    t_index: Option<usize>,
    count_mode: Option<CountModeArg>,
    out: &str,
    diverging: bool,
) -> Result<()> {
    let ctx = XCtx::new(settings.precision_bits);
    let zeros = load_zeros(zeros_path)?;
    let alpha = alpha_src.resolve(&ctx)?;
    let r = resolution.unwrap_or(settings.resolution);
    let t = resolve_t(&zeros, t, t_index)?;
    let mode = count_mode.unwrap_or(settings.count_mode);
    let dm = dm_grid(&zeros, &alpha, r, t, settings.workers, mode.into())?;
    let mut meta = BTreeMap::new();
    meta.insert("command".to_string(), json!("dm"));
    meta.insert("t".to_string(), json!(dm.t));
    meta.insert("n_obs".to_string(), json!(dm.n_obs));
    meta.insert("count_mode".to_string(), json!(mode));
    meta.insert("alpha".to_string(), json!(alpha.as_f64()));
    let files = emit_grid(settings, out, &dm.grid, meta, diverging)?;
    let (vmin, vmax) = dm.grid.min_max();
    print_json(&json!({
        "r": r,
        "t": dm.t,
        "n_obs": dm.n_obs,
        "mass": dm.mass(),
        "vmin": vmin,
        "vmax": vmax,
        "files": files_json(&files),
    }))
}

fn cmd_landau(
    settings: &Settings,
    zeros_path: &Path,
    x: f64,
    t: Option<f64>,
    t_index: Option<usize>,
    phase_mode: Option<PhaseModeArg>,
    out: Option<&str>,
) -> Result<()> {
    let zeros = load_zeros(zeros_path)?;
    let t = resolve_t(&zeros, t, t_index)?;
    let mode = phase_mode.unwrap_or(settings.phase_mode);
    let report = landau_report(&zeros, x, t, settings.workers, mode.into())?;
    if let Some(base) = out {
        write_json(&out_path(settings, &format!("{base}.json")), &report)?;
    }
    print_json(&report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    settings: &Settings,
    zeros_path: &Path,
    relations: &str,
    alpha: Option<String>,
    alpha_file: Option<PathBuf>,
    h_spec: Option<&PathBuf>,
    t_list: Option<&String>,
    t_indices: Option<&String>,
    phase_mode: Option<PhaseModeArg>,
    out: &str,
) -> Result<()> {
    let ctx = XCtx::new(settings.precision_bits);
    let zeros = load_zeros(zeros_path)?;
    let system = load_relations(relations)?;
    let alpha = match (&alpha, &alpha_file) {
        (None, None) => solve_alpha(&ctx, &system)?,
        _ => AlphaSource { alpha, alpha_file, relations: None }.resolve(&ctx)?,
    };
    let h = load_h_spec(h_spec, &settings.h_spec, system.n)?;
    let ts = resolve_t_list(&zeros, t_list, t_indices)?;
    let mode = phase_mode.unwrap_or(settings.phase_mode);
    let report = theorem_check(
        &ctx, &zeros, &h, &system, &alpha, &ts, settings.workers, mode.into(),
    )?;
    let path = out_path(settings, &format!("{out}.json"));
    write_json(&path, &report)?;
    println!(
        "{:>16}  {:>10}  {:>14}  {:>14}  {:>14}",
        "T", "N(T)", "h_sum", "integral", "difference"
    );
    for row in &report.rows {
        println!(
            "{:>16.3}  {:>10}  {:>14.8}  {:>14.8}  {:>14.8}",
            row.t, row.n_obs, row.h_sum, row.integral, row.difference
        );
    }
    if report.non_improving {
        println!("warning: the difference is not improving with T");
    }
    println!("report written to {}", path.display());
    Ok(())
}

fn cmd_cf(
    settings: &Settings,
    alpha_src: &AlphaSource,
    terms: Option<usize>,
    u_alpha_t: Option<f64>,
    epsilon: Option<f64>,
    b: Option<f64>,
    out: Option<&str>,
) -> Result<()> {
    let ctx = XCtx::new(settings.precision_bits);
    let alpha = alpha_src.resolve(&ctx)?;
    if alpha.n() != 2 {
        return Err(Error::DimensionError { n: alpha.n() });
    }
    let xi = ctx.div(&alpha.values()[0], &alpha.values()[1]);
    let cf = continued_fraction(&ctx, &xi, terms.unwrap_or(settings.terms))?;
    let inequality = convergent_inequality_check(&ctx, &alpha.values()[0], &alpha.values()[1], &cf);
    let u_alpha = u_alpha_t.map(|t| {
        u_alpha_membership(
            &cf,
            t,
            epsilon.unwrap_or(settings.dio_epsilon),
            b.unwrap_or(settings.dio_b),
        )
    });
    let doc = json!({
        "cf": cf.report(),
        "inequality": inequality,
        "u_alpha": u_alpha,
    });
    if let Some(base) = out {
        write_json(&out_path(settings, &format!("{base}.json")), &doc)?;
    }
    print_json(&doc)
}

fn cmd_scan(
    settings: &Settings,
    alpha_src: &AlphaSource,
    j: Option<u64>,
    c: Option<f64>,
    mu: Option<f64>,
    out: Option<&str>,
) -> Result<()> {
    let ctx = XCtx::new(settings.precision_bits);
    let alpha = alpha_src.resolve(&ctx)?;
    let j = j.unwrap_or(settings.dio_j);
    let c = c.unwrap_or(settings.dio_c);
    let mu = mu.unwrap_or(settings.dio_mu);
    let condition = check_condition_15(&ctx, alpha.values(), c, j, mu)?;
    let ef = if alpha.n() == 2 {
        Some(classify_ef(&ctx, &alpha, j.min(50), c)?)
    } else {
        None
    };
    let doc = json!({ "condition15": condition, "ef": ef });
    if let Some(base) = out {
        write_json(&out_path(settings, &format!("{base}.json")), &doc)?;
    }
    print_json(&doc)
}

#[allow(clippy::too_many_arguments)]
fn cmd_detect(
    settings: &Settings,
    alpha_src: &AlphaSource,
    max_norm: Option<u64>,
    max_prime: Option<u64>,
    max_q: Option<u64>,
    max_a: Option<u64>,
    tol: Option<f64>,
    out: &str,
) -> Result<()> {
    let ctx = XCtx::new(settings.precision_bits);
    let alpha = alpha_src.resolve(&ctx)?;
    let bounds = DetectBounds {
        max_norm: max_norm.unwrap_or(settings.detect_bounds.max_norm),
        max_prime: max_prime.unwrap_or(settings.detect_bounds.max_prime),
        max_q: max_q.unwrap_or(settings.detect_bounds.max_q),
        max_a: max_a.unwrap_or(settings.detect_bounds.max_a),
    };
    let system = detect_relations(&ctx, &alpha, bounds, tol.unwrap_or(settings.detect_tol))?;
    let path = out_path(settings, &format!("{out}.json"));
    write_json(&path, &system)?;
    print_json(&json!({
        "rank": system.r(),
        "rows": system.rows,
        "output": path.display().to_string(),
    }))
}
