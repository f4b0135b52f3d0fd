//! Command-line harness: configuration resolution (JSON file with flag
//! overrides), seeded parallel ensembles, experiment orchestration and
//! CSV/JSON export.
//!
//! Exit codes: 0 success, 2 domain or configuration error, 3 numerical
//! failure.

use crate::averaging::{self, SlowSystem, DEFAULT_BLOW_UP};
use crate::cam::{self, CamParams};
use crate::error::{Error, Result};
use crate::oulp::{self, OulpParams};
use crate::rng::stream_rng;
use crate::sigma_est::{self, EstimateConfig};
use crate::stats::{self, Histogram, HistogramSpec};
use crate::traj::Trajectory;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "camstable",
    about = "Simulation and estimation for multiplicative-noise SDEs, their \
             alpha-stable attractors, and stochastic-averaging reductions",
    version
)]
pub struct Cli {
    /// Master seed; every derived RNG stream is a pure function of it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON config file; command-line flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output base path (extensions appended per artifact).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Simulate the CAM noise SDE with the weak second-order scheme.
    SimulateCam(SimulateCamArgs),
    /// Simulate the stable-driven OU process (Euler-Maruyama).
    SimulateOulp(SimulateOulpArgs),
    /// Derive the attracting stable-law parameters from CAM coefficients.
    DeriveParams(CamArgs),
    /// Estimate the noise amplitude Sigma from integral samples.
    EstimateSigma(EstimateSigmaArgs),
    /// Sweep the fitted window scale sigma_Y over eps and Delta grids.
    SweepSigma(SweepSigmaArgs),
    /// Autocodifference of a simulated ensemble with quartile bars.
    Acd(AcdArgs),
    /// Codifference/cosum decorrelation diagnostics for window integrals.
    Codiff(CodiffArgs),
    /// Tail exponent and skew fit for window integrals.
    Tails(TailsArgs),
    /// Full-vs-reduced comparison for a named slow system over an eps list.
    Experiment(ExperimentArgs),
}

#[derive(Args, Clone)]
pub struct CamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
}

#[derive(Args)]
pub struct SimulateCamArgs {
    #[command(flatten)]
    pub cam: CamArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub y0: Option<f64>,
}

#[derive(Args)]
pub struct SimulateOulpArgs {
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub sigma_z: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<f64>,
}

#[derive(Args)]
pub struct EstimateSigmaArgs {
    #[command(flatten)]
    pub cam: CamArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub n_windows: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
}

#[derive(Args)]
pub struct SweepSigmaArgs {
    #[command(flatten)]
    pub cam: CamArgs,
    /// Comma-separated eps values.
    #[arg(long)]
    pub eps_list: Option<String>,
    /// Comma-separated Delta values.
    #[arg(long)]
    pub delta_list: Option<String>,
    #[arg(long)]
    pub n_windows: Option<usize>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
}

#[derive(Args)]
pub struct AcdArgs {
    /// Which process to sample: "cam" or "oulp".
    #[arg(long)]
    pub process: Option<String>,
    #[command(flatten)]
    pub cam: CamArgs,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub sigma_z: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub max_lag: Option<f64>,
    #[arg(long)]
    pub n_lags: Option<usize>,
}

#[derive(Args)]
pub struct CodiffArgs {
    #[command(flatten)]
    pub cam: CamArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub n_pairs: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Window separation between the paired integrals.
    #[arg(long)]
    pub lag: Option<usize>,
}

#[derive(Args)]
pub struct TailsArgs {
    #[command(flatten)]
    pub cam: CamArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub n_windows: Option<usize>,
    #[arg(long)]
    pub quantile: Option<f64>,
}

#[derive(Args)]
pub struct ExperimentArgs {
    /// Slow system: "linear", "cubic" or "bilinear".
    #[arg(long)]
    pub system: Option<String>,
    #[command(flatten)]
    pub cam: CamArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Comma-separated eps values, largest to smallest.
    #[arg(long)]
    pub eps_list: Option<String>,
    /// Noise amplitude; estimated from the CAM process when omitted.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
}

/// JSON config wrapper: typed field access by name.
struct Cfg(serde_json::Value);

impl Cfg {
    fn load(path: &Option<PathBuf>) -> Result<Cfg> {
        match path {
            None => Ok(Cfg(serde_json::Value::Null)),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                Ok(Cfg(serde_json::from_str(&text)?))
            }
        }
    }

    fn f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(|v| v.as_f64())
    }

    fn u64(&self, key: &str) -> Option<u64> {
        self.0.get(key).and_then(|v| v.as_u64())
    }

    fn usize(&self, key: &str) -> Option<usize> {
        self.u64(key).map(|v| v as usize)
    }

    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).and_then(|v| v.as_str()).map(str::to_owned)
    }

    fn f64_list(&self, key: &str) -> Option<Vec<f64>> {
        self.0
            .get(key)
            .and_then(|v| v.as_array())
            .map(|a| a.iter().filter_map(|x| x.as_f64()).collect())
    }
}

fn require<T>(value: Option<T>, name: &str) -> Result<T> {
    value.ok_or_else(|| {
        Error::InvalidParameter(format!("missing required parameter `{name}` (flag or config)"))
    })
}

fn parse_list(flag: &Option<String>, cfg: Option<Vec<f64>>, name: &str) -> Result<Vec<f64>> {
    if let Some(s) = flag {
        let parsed: std::result::Result<Vec<f64>, _> =
            s.split(',').map(|t| t.trim().parse::<f64>()).collect();
        return parsed
            .map_err(|e| Error::InvalidParameter(format!("bad `{name}` list: {e}")));
    }
    require(cfg, name)
}

fn cam_params(a: &CamArgs, cfg: &Cfg) -> Result<CamParams> {
    CamParams::new(
        require(a.l.or(cfg.f64("l")), "l")?,
        require(a.e.or(cfg.f64("e")), "e")?,
        require(a.g.or(cfg.f64("g")), "g")?,
        require(a.b.or(cfg.f64("b")), "b")?,
    )
}

fn out_base(out: &Option<PathBuf>, default: &str) -> PathBuf {
    out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn write_histogram_csv(path: &Path, h: &Histogram) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "bin_lo,bin_hi,density")?;
    for i in 0..h.n_bins() {
        writeln!(w, "{},{},{}", h.edges[i], h.edges[i + 1], h.density(i))?;
    }
    w.flush()?;
    Ok(())
}

fn write_acd_csv(path: &Path, rows: &[stats::AcdLagStats]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "lag,re,im,q25,q75")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.lag, r.re_median, r.im_median, r.re_q25, r.re_q75)?;
    }
    w.flush()?;
    Ok(())
}

/// Entry point used by the binary.
pub fn run(cli: Cli) -> Result<()> {
    let cfg = Cfg::load(&cli.config)?;
    if let Some(n) = cli.workers.or(cfg.usize("workers")) {
        // ignore failure when a pool already exists (tests call run() twice)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let seed = cli.seed.or(cfg.u64("seed")).unwrap_or(0);
    match &cli.command {
        Command::SimulateCam(a) => simulate_cam(a, &cfg, seed, &cli.out),
        Command::SimulateOulp(a) => simulate_oulp(a, &cfg, seed, &cli.out),
        Command::DeriveParams(a) => derive_params(a, &cfg, &cli.out),
        Command::EstimateSigma(a) => estimate_sigma_cmd(a, &cfg, seed, &cli.out),
        Command::SweepSigma(a) => sweep_sigma(a, &cfg, seed, &cli.out),
        Command::Acd(a) => acd_cmd(a, &cfg, seed, &cli.out),
        Command::Codiff(a) => codiff_cmd(a, &cfg, seed, &cli.out),
        Command::Tails(a) => tails_cmd(a, &cfg, seed, &cli.out),
        Command::Experiment(a) => experiment_cmd(a, &cfg, seed, &cli.out),
    }
}

fn simulate_cam(a: &SimulateCamArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let p = cam_params(&a.cam, cfg)?;
    let eps = a.eps.or(cfg.f64("eps")).unwrap_or(1.0);
    let dt = a.dt.or(cfg.f64("dt")).unwrap_or(eps / 10.0);
    let steps = require(a.steps.or(cfg.usize("steps")), "steps")?;
    let y0 = a.y0.or(cfg.f64("y0")).unwrap_or(0.0);
    let mut rng = stream_rng(seed, 0);
    let mut traj = if steps == 0 {
        Trajectory::new(0.0, dt, vec![])
    } else {
        cam::simulate_fast(&p, eps, y0, dt, steps, &mut rng)
    };
    traj.seed = Some((seed, 0));
    let base = out_base(out, "cam_trajectory");
    traj.export(
        &base,
        &json!({"process": "cam", "l": p.l, "e": p.e, "g": p.g, "b": p.b, "eps": eps}),
    )?;
    println!("wrote {}.csv ({} rows)", base.display(), traj.len());
    Ok(())
}

fn simulate_oulp(a: &SimulateOulpArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let p = OulpParams::new(
        require(a.theta.or(cfg.f64("theta")), "theta")?,
        require(a.sigma_z.or(cfg.f64("sigma_z")), "sigma_z")?,
        require(a.alpha.or(cfg.f64("alpha")), "alpha")?,
        require(a.beta.or(cfg.f64("beta")), "beta")?,
    )?;
    let eps = a.eps.or(cfg.f64("eps")).unwrap_or(1.0);
    let dt = a.dt.or(cfg.f64("dt")).unwrap_or(eps / (10.0 * p.theta));
    let steps = require(a.steps.or(cfg.usize("steps")), "steps")?;
    let z0 = a.z0.or(cfg.f64("z0")).unwrap_or(0.0);
    let mut rng = stream_rng(seed, 0);
    let mut traj = if steps == 0 {
        Trajectory::new(0.0, dt, vec![])
    } else {
        oulp::simulate(&p, eps, z0, dt, steps, &mut rng)
    };
    traj.seed = Some((seed, 0));
    let base = out_base(out, "oulp_trajectory");
    traj.export(
        &base,
        &json!({"process": "oulp", "theta": p.theta, "sigma_z": p.sigma_z,
                "alpha": p.alpha, "beta": p.beta, "eps": eps}),
    )?;
    println!("wrote {}.csv ({} rows)", base.display(), traj.len());
    Ok(())
}

fn derive_params(a: &CamArgs, cfg: &Cfg, out: &Option<PathBuf>) -> Result<()> {
    let p = cam_params(a, cfg)?;
    let d = cam::derive(&p)?;
    let report = json!({
        "nu": d.nu,
        "alpha_star": d.alpha_star,
        "beta_star": d.beta_star,
        "sigma_star": d.sigma_star,
        "gamma_star": d.gamma_star,
        "normalization": d.normalization,
        "h_plus": d.h_plus,
        "h_minus": d.h_minus,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(base) = out {
        write_json(&base.with_extension("json"), &report)?;
    }
    Ok(())
}

fn estimate_cfg(
    eps: f64,
    delta: f64,
    n_windows: usize,
    dt: Option<f64>,
    n_samples: usize,
    seed: u64,
) -> EstimateConfig {
    EstimateConfig::new(eps, delta, n_windows, dt.unwrap_or(eps / 10.0), n_samples, seed)
}

fn estimate_sigma_cmd(
    a: &EstimateSigmaArgs,
    cfg: &Cfg,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let p = cam_params(&a.cam, cfg)?;
    let eps = require(a.eps.or(cfg.f64("eps")), "eps")?;
    let delta = require(a.delta.or(cfg.f64("delta")), "delta")?;
    let n_windows = a.n_windows.or(cfg.usize("n_windows")).unwrap_or(100);
    let n_samples = a.n_samples.or(cfg.usize("n_samples")).unwrap_or(400);
    let ec = estimate_cfg(eps, delta, n_windows, a.dt.or(cfg.f64("dt")), n_samples, seed);
    let est = sigma_est::estimate_sigma(&p, &ec)?;
    let report = json!({
        "sigma": est.sigma,
        "sigma_y": est.sigma_y,
        "sigma_s": est.sigma_s,
        "residual": est.residual,
        "n_windows": est.n_windows,
        "eps": eps,
        "delta": delta,
        "n_samples": n_samples,
        "seed": seed,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(base) = out {
        write_json(&base.with_extension("json"), &report)?;
    }
    Ok(())
}

fn sweep_sigma(a: &SweepSigmaArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let p = cam_params(&a.cam, cfg)?;
    let eps_list = parse_list(&a.eps_list, cfg.f64_list("eps_list"), "eps_list")?;
    let delta_list = parse_list(&a.delta_list, cfg.f64_list("delta_list"), "delta_list")?;
    let n_windows = a.n_windows.or(cfg.usize("n_windows")).unwrap_or(100);
    let n_samples = a.n_samples.or(cfg.usize("n_samples")).unwrap_or(200);
    let repeats = a.repeats.or(cfg.usize("repeats")).unwrap_or(10);

    let base = out_base(out, "sigma_sweep");
    let path = base.with_extension("csv");
    let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
    writeln!(w, "eps,delta,sigma_y,q25,q75")?;
    let mut cell = 0u64;
    for &eps in &eps_list {
        for &delta in &delta_list {
            let estimates: Result<Vec<f64>> = (0..repeats as u64)
                .map(|r| {
                    // distinct stream block per repeat and grid cell
                    let ec = estimate_cfg(eps, delta, n_windows, None, n_samples,
                        seed.wrapping_add((cell * 1000 + r + 1) << 20));
                    Ok(sigma_est::estimate_sigma(&p, &ec)?.sigma_y)
                })
                .collect();
            let mut vals = estimates?;
            let (q25, med, q75) = stats::quartiles(&mut vals);
            writeln!(w, "{eps},{delta},{med},{q25},{q75}")?;
            cell += 1;
        }
    }
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn acd_cmd(a: &AcdArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let process = a
        .process
        .clone()
        .or(cfg.string("process"))
        .unwrap_or_else(|| "cam".into());
    let eps = a.eps.or(cfg.f64("eps")).unwrap_or(1.0);
    let dt = a.dt.or(cfg.f64("dt")).unwrap_or(eps / 10.0);
    let steps = a.steps.or(cfg.usize("steps")).unwrap_or(100_000);
    let realizations = a.realizations.or(cfg.usize("realizations")).unwrap_or(20);
    let max_lag = a.max_lag.or(cfg.f64("max_lag")).unwrap_or(100.0 * dt);
    let n_lags = a.n_lags.or(cfg.usize("n_lags")).unwrap_or(25);

    let lags: Vec<usize> = (0..n_lags)
        .map(|i| ((max_lag / dt) * i as f64 / (n_lags - 1).max(1) as f64).round() as usize)
        .collect();
    let burn = (steps / 10).max(1);
    let paths: Result<Vec<Vec<f64>>> = (0..realizations as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = stream_rng(seed, stream);
            let traj = match process.as_str() {
                "cam" => {
                    let p = cam_params(&a.cam, cfg)?;
                    cam::simulate_fast(&p, eps, 0.0, dt, steps, &mut rng)
                }
                "oulp" => {
                    let p = OulpParams::new(
                        require(a.theta.or(cfg.f64("theta")), "theta")?,
                        require(a.sigma_z.or(cfg.f64("sigma_z")), "sigma_z")?,
                        require(a.alpha.or(cfg.f64("alpha")), "alpha")?,
                        require(a.beta.or(cfg.f64("beta")), "beta")?,
                    )?;
                    oulp::simulate(&p, eps, 0.0, dt, steps, &mut rng)
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown process `{other}`, expected cam or oulp"
                    )))
                }
            };
            Ok(traj.tail_from(burn).to_vec())
        })
        .collect();
    let rows = stats::acd_ensemble(&paths?, dt, &lags);
    let base = out_base(out, "acd");
    let path = base.with_extension("csv");
    write_acd_csv(&path, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn codiff_cmd(a: &CodiffArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let p = cam_params(&a.cam, cfg)?;
    let d = cam::derive(&p)?;
    let eps = require(a.eps.or(cfg.f64("eps")), "eps")?;
    let delta = require(a.delta.or(cfg.f64("delta")), "delta")?;
    let dt = a.dt.or(cfg.f64("dt")).unwrap_or(eps / 10.0);
    let n_pairs = a.n_pairs.or(cfg.usize("n_pairs")).unwrap_or(10_000);
    let repeats = a.repeats.or(cfg.usize("repeats")).unwrap_or(20);
    let lag = a.lag.or(cfg.usize("lag")).unwrap_or(1);

    let per_repeat: Result<Vec<(f64, f64, f64)>> = (0..repeats as u64)
        .into_par_iter()
        .map(|r| {
            let windows =
                sigma_est::sample_windows(&p, eps, delta, dt, n_pairs + lag, seed, r)?;
            // unit-argument statistics need scale-normalized windows
            let mut sorted = windows.clone();
            let (q25, _, q75) = stats::quartiles(&mut sorted);
            let s0 = (0.5 * (q75 - q25)).max(f64::MIN_POSITIVE);
            let normalized: Vec<f64> = windows.iter().map(|x| x / s0).collect();
            let (scale, _) =
                sigma_est::fit_scale(&normalized, d.alpha_star, d.beta_star, 0.05, 2.0, 40)?;
            let unit: Vec<f64> = normalized.iter().map(|x| x / scale).collect();
            let (cd, cs) = stats::codiff_cosum(&unit[lag..], &unit[..unit.len() - lag]);
            let (cd_self, _) = stats::codiff_cosum(&unit, &unit);
            Ok((cd.norm(), cs.norm(), cd_self.re))
        })
        .collect();
    let rows = per_repeat?;
    let mut cd: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut cs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let mut cd_yy: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let (_, cd_med, _) = stats::quartiles(&mut cd);
    let (_, cs_med, _) = stats::quartiles(&mut cs);
    let (_, cd_yy_med, _) = stats::quartiles(&mut cd_yy);
    let report = json!({
        "cd_abs_median": cd_med,
        "cs_abs_median": cs_med,
        "cd_self_median": cd_yy_med,
        "lag": lag,
        "delta_over_eps": delta / eps,
        "n_pairs": n_pairs,
        "repeats": repeats,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(base) = out {
        write_json(&base.with_extension("json"), &report)?;
    }
    Ok(())
}

fn tails_cmd(a: &TailsArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let p = cam_params(&a.cam, cfg)?;
    let d = cam::derive(&p)?;
    let eps = require(a.eps.or(cfg.f64("eps")), "eps")?;
    let delta = require(a.delta.or(cfg.f64("delta")), "delta")?;
    let dt = a.dt.or(cfg.f64("dt")).unwrap_or(eps / 10.0);
    let n_windows = a.n_windows.or(cfg.usize("n_windows")).unwrap_or(1_000_000);
    let quantile = a.quantile.or(cfg.f64("quantile")).unwrap_or(0.99);

    // long stationary path split across streams, windows kept in order
    let chunk = 50_000usize.min(n_windows.max(1));
    let n_chunks = n_windows.div_ceil(chunk);
    let windows: Result<Vec<Vec<f64>>> = (0..n_chunks as u64)
        .into_par_iter()
        .map(|s| {
            let n = chunk.min(n_windows - s as usize * chunk);
            sigma_est::sample_windows(&p, eps, delta, dt, n, seed, s)
        })
        .collect();
    let samples: Vec<f64> = windows?.into_iter().flatten().collect();
    let fit = stats::tail_fit(&samples, quantile)?;
    let report = json!({
        "exponent": fit.exponent,
        "expected_exponent": -(1.0 + d.alpha_star),
        "skew_ratio": fit.skew_ratio,
        "expected_skew": d.beta_star,
        "r_min": fit.r_min,
        "r_max": fit.r_max,
        "n_tail": fit.n_tail,
        "n_windows": n_windows,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(base) = out {
        write_json(&base.with_extension("json"), &report)?;
    }
    Ok(())
}

fn slow_system(a: &ExperimentArgs, cfg: &Cfg, gamma_star: f64) -> Result<(String, SlowSystem, f64)> {
    let name = require(a.system.clone().or(cfg.string("system")), "system")?;
    let zeta = a.zeta.or(cfg.f64("zeta")).unwrap_or(1.0);
    let sys = match name.as_str() {
        "linear" => {
            let mu = a.mu.or(cfg.f64("mu")).unwrap_or(1.0);
            (SlowSystem::linear(mu, zeta, gamma_star), 1.0 / mu.abs())
        }
        "cubic" => {
            let mu = a.mu.or(cfg.f64("mu")).unwrap_or(-1.0);
            (SlowSystem::cubic(mu, zeta, gamma_star), 1.0 / mu.abs().max(1.0))
        }
        "bilinear" => {
            let c = a.c.or(cfg.f64("c")).unwrap_or(1.0);
            (SlowSystem::bilinear(c, zeta, gamma_star), 1.0)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown system `{other}`, expected linear, cubic or bilinear"
            )))
        }
    };
    Ok((name, sys.0, sys.1))
}

fn experiment_cmd(a: &ExperimentArgs, cfg: &Cfg, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let p = cam_params(&a.cam, cfg)?;
    let d = cam::derive(&p)?;
    let (name, sys, tau_x) = slow_system(a, cfg, d.gamma_star)?;
    let eps_list = parse_list(&a.eps_list, cfg.f64_list("eps_list"), "eps_list")?;
    let steps = a.steps.or(cfg.usize("steps")).unwrap_or(120_000);
    let realizations = a.realizations.or(cfg.usize("realizations")).unwrap_or(4);
    let x0 = a.x0.or(cfg.f64("x0")).unwrap_or(if name == "bilinear" { 1.0 } else { 0.0 });

    // one Sigma for the whole experiment (it does not depend on eps)
    let sigma_big = match a.sigma.or(cfg.f64("sigma")) {
        Some(s) => s,
        None => {
            let eps_ref = 1e-3;
            let ec = estimate_cfg(eps_ref, 0.2, 100, None, 400, seed ^ 0x5161);
            sigma_est::estimate_sigma(&p, &ec)?.sigma
        }
    };

    let spec = if name == "bilinear" {
        HistogramSpec::heavy_tail(6.0, 120, 1e6, 30)
    } else {
        HistogramSpec::heavy_tail(5.0, 100, 1e6, 30)
    };
    let base = out_base(out, "experiment");
    let mut summary_eps = Vec::new();
    let mut l1_values: Vec<f64> = Vec::new();

    for (ei, &eps) in eps_list.iter().enumerate() {
        let dt = averaging::default_dt_slow(eps, tau_x);
        let burn = ((5.0 * tau_x) / dt).ceil() as usize;
        let rsys = averaging::reduce(&sys, &p, sigma_big, eps)?;

        let full: Result<Vec<Vec<f64>>> = (0..realizations as u64)
            .into_par_iter()
            .map(|s| {
                let mut rng = stream_rng(seed, (ei as u64) << 32 | (2 * s));
                let t = averaging::simulate_full(
                    &sys, &p, eps, x0, dt, steps, DEFAULT_BLOW_UP, &mut rng,
                )?;
                Ok(t.tail_from(burn.min(t.len())).to_vec())
            })
            .collect();
        let reduced: Result<Vec<Vec<f64>>> = (0..realizations as u64)
            .into_par_iter()
            .map(|s| {
                let mut rng = stream_rng(seed, (ei as u64) << 32 | (2 * s + 1));
                let t = averaging::simulate_reduced(
                    &rsys, x0, dt, steps, DEFAULT_BLOW_UP, &mut rng,
                )?;
                Ok(t.tail_from(burn.min(t.len())).to_vec())
            })
            .collect();
        let full = full?;
        let reduced = reduced?;

        let full_flat: Vec<f64> = full.iter().flatten().copied().collect();
        let red_flat: Vec<f64> = reduced.iter().flatten().copied().collect();
        let hf = Histogram::build(&spec, &full_flat);
        let hr = Histogram::build(&spec, &red_flat);
        let l1 = hf.l1_distance(&hr);
        l1_values.push(l1);

        let tag = format!("{}_eps{}", base.display(), ei);
        write_histogram_csv(Path::new(&format!("{tag}_full.csv")), &hf)?;
        write_histogram_csv(Path::new(&format!("{tag}_reduced.csv")), &hr)?;

        let lags: Vec<usize> = (0..20).map(|i| i * 5).collect();
        write_acd_csv(
            Path::new(&format!("{tag}_acd_full.csv")),
            &stats::acd_ensemble(&full, dt, &lags),
        )?;
        write_acd_csv(
            Path::new(&format!("{tag}_acd_reduced.csv")),
            &stats::acd_ensemble(&reduced, dt, &lags),
        )?;

        summary_eps.push(json!({"eps": eps, "dt": dt, "l1": l1}));
    }

    // allow one Monte Carlo-noise violation of the expected ordering
    let violations = l1_values.windows(2).filter(|w| w[1] > w[0]).count();
    let summary = json!({
        "system": name,
        "sigma": sigma_big,
        "alpha_star": d.alpha_star,
        "beta_star": d.beta_star,
        "per_eps": summary_eps,
        "l1_nonincreasing": violations == 0,
        "ordering_violations": violations,
    });
    let path = PathBuf::from(format!("{}_summary.json", base.display()));
    write_json(&path, &summary)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
