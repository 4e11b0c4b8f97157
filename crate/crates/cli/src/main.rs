//! `fermion-magic`: figure data for Gaussian-state magic as CSV or JSON.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fermion_magic::analytics::{haar_leading_reference, ipr_row, EnsembleSpec};
use fermion_magic::gaussian::CovarianceMatrix;
use fermion_magic::magic::sre_estimate;
use fermion_magic::models::{
    sweep_fixed_n, sweep_kitaev, sweep_random, Kitaev2DParams, SweepConfig,
};
use fermion_magic::sampler::{self, Method, SamplerConfig};
use fermion_magic::validate::run_checks;
use serde::Serialize;

use output::{write_rows, Format};

#[derive(Parser, Debug)]
#[command(
    name = "fermion-magic",
    version,
    about = "Magic of fermionic Gaussian states via Majorana sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "FERMION_MAGIC_WORKERS")]
    workers: Option<usize>,
    /// Output file (defaults to stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SamplerMethod {
    Determinant,
    Schur,
}

impl From<SamplerMethod> for Method {
    fn from(m: SamplerMethod) -> Self {
        match m {
            SamplerMethod::Determinant => Method::Determinant,
            SamplerMethod::Schur => Method::Schur,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Filtered SREs of Haar-random Gaussian states versus system size.
    RandomSre {
        #[arg(long = "L", required = true, value_delimiter = ',')]
        modes: Vec<usize>,
        #[arg(long, required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        realizations: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Add a `haar_gap` column with `L ln 2 - m_filtered_mean`.
        #[arg(long)]
        haar_gap: bool,
        #[arg(long, value_enum, default_value_t = SamplerMethod::Determinant)]
        method: SamplerMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Number-conserving random states: sampled SREs next to exact IPR data.
    FixedN {
        #[arg(long = "L")]
        modes: usize,
        #[arg(long = "N", required = true, value_delimiter = ',')]
        particles: Vec<usize>,
        #[arg(long, required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        realizations: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerMethod::Determinant)]
        method: SamplerMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Magic density of the 2D p+ip superconductor ground state along a μ sweep.
    Kitaev2d {
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        /// Explicit μ values (repeatable or comma separated).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Vec<f64>,
        /// Uniform grid `start:stop:step` (inclusive), added to `--mu`.
        #[arg(long, allow_hyphen_values = true)]
        mu_range: Option<String>,
        #[arg(long, required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerMethod::Determinant)]
        method: SamplerMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form average IPR and participation entropies.
    IprTable {
        #[arg(long = "L", required = true, value_delimiter = ',')]
        modes: Vec<u64>,
        #[arg(long = "N", required = true, value_delimiter = ',')]
        particles: Vec<u64>,
        #[arg(long, required = true, value_delimiter = ',')]
        alpha: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check the covariance machinery against dense state vectors.
    Validate {
        #[arg(long, default_value_t = 5)]
        max_modes: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Draw Majorana samples from a covariance matrix stored as JSON.
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerMethod::Determinant)]
        method: SamplerMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate SREs from a sample CSV written by `sample`.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, required = true)]
        alpha: Vec<f64>,
        /// Seed the samples were drawn with (recorded in the output).
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::RandomSre { common, .. }
            | Command::FixedN { common, .. }
            | Command::Kitaev2d { common, .. }
            | Command::IprTable { common, .. }
            | Command::Validate { common, .. }
            | Command::Sample { common, .. }
            | Command::Estimate { common, .. } => common,
        }
    }
}

#[derive(Serialize)]
struct RandomRowWithGap {
    model: String,
    #[serde(rename = "L_or_ell")]
    size: usize,
    #[serde(rename = "N_or_blank")]
    particles: Option<usize>,
    t: Option<f64>,
    mu: Option<f64>,
    delta: Option<f64>,
    alpha: f64,
    m_filtered_mean: f64,
    m_filtered_stderr: f64,
    realizations: usize,
    samples: usize,
    seed: u64,
    haar_gap: f64,
}

#[derive(Serialize)]
struct CheckRow {
    check: String,
    status: &'static str,
    detail: String,
}

fn parse_range(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad --mu-range {spec:?}, expected start:stop:step"))?;
    let [start, stop, step] = parts[..] else {
        bail!("bad --mu-range {spec:?}, expected start:stop:step");
    };
    if !(step.is_finite() && step > 0.0 && stop >= start) {
        bail!("--mu-range needs step > 0 and stop >= start");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + step * i as f64).collect())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let common = cli.command.common().clone();
    let workers = common.workers.unwrap_or_else(sampler::default_workers);
    if workers == 0 {
        bail!(fermion_magic::Error::InvalidArgument(
            "--workers must be at least 1".into()
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("failed to start worker threads")?;
    pool.install(|| dispatch(cli.command, &common))
}

fn dispatch(command: Command, common: &Common) -> anyhow::Result<bool> {
    match command {
        Command::RandomSre {
            modes,
            alpha,
            realizations,
            samples,
            seed,
            haar_gap,
            method,
            ..
        } => {
            let cfg = SweepConfig {
                seed,
                realizations,
                samples,
                method: method.into(),
            };
            let records = sweep_random(&modes, &alpha, &cfg)?;
            if haar_gap {
                let rows: Vec<RandomRowWithGap> = records
                    .into_iter()
                    .map(|r| RandomRowWithGap {
                        haar_gap: haar_leading_reference(r.size) - r.m_filtered_mean,
                        model: r.model,
                        size: r.size,
                        particles: r.particles,
                        t: r.t,
                        mu: r.mu,
                        delta: r.delta,
                        alpha: r.alpha,
                        m_filtered_mean: r.m_filtered_mean,
                        m_filtered_stderr: r.m_filtered_stderr,
                        realizations: r.realizations,
                        samples: r.samples,
                        seed: r.seed,
                    })
                    .collect();
                write_rows(&rows, common)?;
            } else {
                write_rows(&records, common)?;
            }
        }
        Command::FixedN {
            modes,
            particles,
            alpha,
            realizations,
            samples,
            seed,
            method,
            ..
        } => {
            let cfg = SweepConfig {
                seed,
                realizations,
                samples,
                method: method.into(),
            };
            write_rows(&sweep_fixed_n(modes, &particles, &alpha, &cfg)?, common)?;
        }
        Command::Kitaev2d {
            ell,
            t,
            delta,
            mut mu,
            mu_range,
            alpha,
            samples,
            seed,
            method,
            ..
        } => {
            if let Some(spec) = mu_range {
                mu.extend(parse_range(&spec)?);
            }
            if mu.is_empty() {
                bail!(fermion_magic::Error::InvalidArgument(
                    "give at least one --mu or a --mu-range".into()
                ));
            }
            let grid = mu
                .iter()
                .map(|&m| Kitaev2DParams::new(ell, t, m, delta))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = SweepConfig {
                seed,
                realizations: 1,
                samples,
                method: method.into(),
            };
            write_rows(&sweep_kitaev(&grid, &alpha, &cfg)?, common)?;
        }
        Command::IprTable {
            modes,
            particles,
            alpha,
            ..
        } => {
            let mut rows = Vec::new();
            for &l in &modes {
                for &n in &particles {
                    for &a in &alpha {
                        rows.push(ipr_row(&EnsembleSpec::new(l, n, a)?));
                    }
                }
            }
            write_rows(&rows, common)?;
        }
        Command::Validate {
            max_modes, seed, ..
        } => {
            let checks = run_checks(max_modes, seed)?;
            let all = checks.iter().all(|c| c.passed);
            let rows: Vec<CheckRow> = checks
                .into_iter()
                .map(|c| CheckRow {
                    status: if c.passed { "PASS" } else { "FAIL" },
                    check: c.name,
                    detail: c.detail,
                })
                .collect();
            match common.format {
                Format::Json => write_rows(&rows, common)?,
                Format::Csv => {
                    let mut text = String::new();
                    for r in &rows {
                        text.push_str(&format!("{:<4}  {}  [{}]\n", r.status, r.check, r.detail));
                    }
                    output::write_text(&text, common)?;
                }
            }
            return Ok(all);
        }
        Command::Sample {
            input,
            samples,
            seed,
            method,
            ..
        } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let gamma = CovarianceMatrix::from_json(&text)?;
            let cfg = SamplerConfig::new(seed, samples).with_method(method.into());
            let drawn = sampler::draw_samples(&gamma, cfg.seed, cfg.num_samples, cfg.method)?;
            write_rows(&sampler::sample_records(&drawn), common)?;
        }
        Command::Estimate {
            input, alpha, seed, ..
        } => {
            let samples = output::read_samples(&input)?;
            let Some(first) = samples.first() else {
                bail!(fermion_magic::Error::InsufficientSamples { total: 0 });
            };
            if first.x.len() % 2 == 1 {
                bail!(fermion_magic::Error::InvalidArgument(
                    "sample strings must have even length 2L".into()
                ));
            }
            let modes = first.x.len() / 2;
            let records = alpha
                .iter()
                .map(|&a| sre_estimate(&samples, a, modes).map(|e| e.record(modes, seed)))
                .collect::<Result<Vec<_>, _>>()?;
            write_rows(&records, common)?;
        }
    }
    Ok(true)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<fermion_magic::Error>() {
        Some(e) if e.is_numerical() => 1,
        Some(fermion_magic::Error::Csv(_)) | None => 1,
        Some(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
