//! TOML scenario files.
//!
//! ```toml
//! distributions = ["normal:0,1", "normal:0,0.5"]
//! measures = ["incstr", "incpar"]
//! format = "markdown"
//! out = "tables.md"
//!
//! [sweep]            # optional; needs exactly one measure
//! fixed = "normal:0,1"
//! mu2 = "0:10:0.1"
//! sigma2 = "0.05:5:0.05"
//! direction = "1in2"
//!
//! [quadrature]       # optional
//! grid = 512
//! rule = "gauss_legendre"
//! trunc_k = 8
//! tol = 1e-4
//! ```
//!
//! Command-line quadrature flags override the file.

use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Deserialize;

use cbf_core::experiments::{Measure, OutputFormat, Scenario, SweepSpec};
use cbf_core::QuadratureConfig;

use crate::QuadArgs;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    distributions: Vec<String>,
    measures: Vec<String>,
    format: Option<String>,
    out: Option<PathBuf>,
    sweep: Option<Sweep>,
    #[serde(default)]
    quadrature: Quad,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sweep {
    fixed: String,
    mu2: String,
    sigma2: String,
    direction: String,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Quad {
    grid: Option<usize>,
    rule: Option<String>,
    trunc_k: Option<f64>,
    tol: Option<f64>,
}

pub fn load(text: &str, flags: &QuadArgs) -> Result<(Scenario, Option<PathBuf>)> {
    let f: File = toml::from_str(text).context("parsing scenario")?;
    let mut cfg = QuadratureConfig::default();
    if let Some(n) = f.quadrature.grid {
        cfg.points_per_axis = n;
    }
    if let Some(r) = &f.quadrature.rule {
        cfg.rule = r.parse()?;
    }
    if let Some(k) = f.quadrature.trunc_k {
        cfg.truncation_k = k;
    }
    if let Some(t) = f.quadrature.tol {
        cfg.target_rel_tol = t;
    }
    let cfg = flags.apply(cfg)?;
    let measures = f
        .measures
        .iter()
        .map(|m| m.parse::<Measure>())
        .collect::<cbf_core::Result<Vec<_>>>()?;
    let distributions = f
        .distributions
        .iter()
        .map(|d| d.parse())
        .collect::<cbf_core::Result<Vec<_>>>()?;
    let sweep = match f.sweep {
        Some(s) => Some(SweepSpec {
            fixed: s.fixed.parse()?,
            mu2: s.mu2.parse()?,
            sigma2: s.sigma2.parse()?,
            direction: s.direction.parse()?,
        }),
        None => None,
    };
    let format = match &f.format {
        Some(s) => s.parse::<OutputFormat>()?,
        None => OutputFormat::Markdown,
    };
    let scenario = Scenario {
        distributions,
        measures,
        sweep,
        quadrature: cfg,
        format,
    };
    Ok((scenario, f.out))
}
