//! Uniformly sampled trajectories and their CSV/JSON export format.

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// A uniformly sampled time series together with the information needed to
/// reproduce it exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    /// (master seed, stream index) of the RNG that produced the path, when known.
    pub seed: Option<(u64, u64)>,
    /// Diagnostics recorded during integration (e.g. step-size warnings).
    pub warnings: Vec<String>,
    /// True when integration stopped early (blow-up guard).
    pub truncated: bool,
}

impl Trajectory {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Self {
        Trajectory {
            t0,
            dt,
            values,
            seed: None,
            warnings: Vec::new(),
            truncated: false,
        }
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values after discarding the first `burn_in` samples.
    pub fn tail_from(&self, burn_in: usize) -> &[f64] {
        &self.values[burn_in.min(self.values.len())..]
    }

    /// Writes `<path>.csv` with header `t,y` and `<path>.json` carrying the
    /// generating parameters, seed and step size.
    pub fn export(&self, path: &Path, params: &serde_json::Value) -> Result<()> {
        let csv_path = path.with_extension("csv");
        let mut w = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
        writeln!(w, "t,y")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", self.time(i), v)?;
        }
        w.flush()?;

        let sidecar = serde_json::json!({
            "params": params,
            "seed": self.seed,
            "t0": self.t0,
            "dt": self.dt,
            "n": self.values.len(),
            "warnings": self.warnings,
            "truncated": self.truncated,
        });
        let json_path = path.with_extension("json");
        std::fs::write(&json_path, serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }
}
