//! Truncated tensor-grid quadrature and a Monte-Carlo estimator.
//!
//! Every integral in the crate goes through [`refine`]: an estimate at half
//! resolution, then at `points_per_axis`, then doubling until two successive
//! estimates agree to `target_rel_tol` or `refine_max_doublings` is used up.
//! Grid rows are summed in parallel and combined in a fixed order, so results
//! are bit-identical from run to run.

mod mc;
mod rules;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use mc::{mc_estimate, InverseCdfSampler, McEstimate};
pub use rules::{gauss_legendre_reference, Nodes};

/// Base 1D rule used on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Midpoint,
    Trapezoid,
    GaussLegendre,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Midpoint => "midpoint",
            Rule::Trapezoid => "trapezoid",
            Rule::GaussLegendre => "gauss_legendre",
        })
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "midpoint" => Ok(Rule::Midpoint),
            "trapezoid" => Ok(Rule::Trapezoid),
            "gauss_legendre" | "gauss-legendre" | "gl" => Ok(Rule::GaussLegendre),
            _ => Err(Error::parse(
                s,
                "expected midpoint, trapezoid or gauss_legendre",
            )),
        }
    }
}

/// Grid, truncation and tolerance policy shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub points_per_axis: usize,
    pub rule: Rule,
    /// Nesting-parameter densities are truncated at `truncation_k` scale units.
    pub truncation_k: f64,
    pub target_rel_tol: f64,
    pub refine_max_doublings: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            points_per_axis: 512,
            rule: Rule::GaussLegendre,
            truncation_k: 8.0,
            target_rel_tol: 1e-4,
            refine_max_doublings: 4,
        }
    }
}

impl QuadratureConfig {
    pub const MIN_POINTS: usize = 16;

    /// Defaults for four-dimensional grids: 64 points per axis and no
    /// doublings, so the worst case stays near 64^4 evaluations.
    pub fn default_4d() -> Self {
        QuadratureConfig {
            points_per_axis: 64,
            refine_max_doublings: 0,
            ..Self::default()
        }
    }

    pub fn with_points(mut self, n: usize) -> Self {
        self.points_per_axis = n;
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_doublings(mut self, d: u32) -> Self {
        self.refine_max_doublings = d;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < Self::MIN_POINTS {
            return Err(Error::domain(format!(
                "points_per_axis must be at least {}, got {}",
                Self::MIN_POINTS,
                self.points_per_axis
            )));
        }
        if !(self.target_rel_tol > 0.0) {
            return Err(Error::domain("target_rel_tol must be positive"));
        }
        if !(self.truncation_k > 0.0) || !self.truncation_k.is_finite() {
            return Err(Error::domain("truncation_k must be positive and finite"));
        }
        Ok(())
    }
}

/// A quadrature result with the resolution that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Points per axis of the final grid.
    pub points: usize,
    pub rule: Rule,
    /// Difference between the last two refinement levels.
    pub est_error: f64,
}

/// Runs `eval(n)` at `n/2`, `n`, `2n`, … until successive values agree.
pub fn refine<F>(cfg: &QuadratureConfig, mut eval: F) -> Result<Estimate>
where
    F: FnMut(usize) -> Result<f64>,
{
    cfg.validate()?;
    let n0 = cfg.points_per_axis;
    let mut prev = eval((n0 / 2).max(8))?;
    let mut n = n0;
    let mut value = eval(n)?;
    let mut err = (value - prev).abs();
    let mut doublings = 0;
    while !converged(value, err, cfg.target_rel_tol) && doublings < cfg.refine_max_doublings {
        prev = value;
        n *= 2;
        value = eval(n)?;
        err = (value - prev).abs();
        doublings += 1;
    }
    Ok(Estimate {
        value,
        points: n,
        rule: cfg.rule,
        est_error: err,
    })
}

fn converged(value: f64, err: f64, tol: f64) -> bool {
    err <= tol * value.abs() || err <= 1e-12
}

#[inline]
pub(crate) fn checked(v: f64, location: &[f64]) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            value: v,
            location: location.to_vec(),
        })
    }
}

/// Sums `row(i)` over `0..n` in parallel, combining the rows in index order.
pub(crate) fn sum_rows<F>(n: usize, row: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    let rows: Vec<f64> = (0..n).into_par_iter().map(&row).collect::<Result<_>>()?;
    Ok(pairwise_sum(&rows))
}

/// Pairwise (tree) summation.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Integral of `f` on `[lo, hi]`.
pub fn integrate1d<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    refine(cfg, |n| {
        let nodes = Nodes::new(cfg.rule, n, lo, hi);
        let mut acc = Vec::with_capacity(nodes.len());
        for (x, w) in nodes.iter() {
            acc.push(w * checked(f(x), &[x])?);
        }
        Ok(pairwise_sum(&acc))
    })
}

/// Integral of `f` over the rectangle `[x0, x1] × [y0, y1]`.
pub fn integrate2d<F>(f: F, domain: [(f64, f64); 2], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    refine(cfg, |n| {
        let ax = Nodes::new(cfg.rule, n, domain[0].0, domain[0].1);
        let ay = Nodes::new(cfg.rule, n, domain[1].0, domain[1].1);
        tensor2(&ax, &ay, &f)
    })
}

pub(crate) fn tensor2<F>(ax: &Nodes, ay: &Nodes, f: &F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    sum_rows(ax.len(), |i| {
        let (x, wx) = (ax.x[i], ax.w[i]);
        let mut s = 0.0;
        for (y, wy) in ay.iter() {
            s += wy * checked(f(x, y), &[x, y])?;
        }
        Ok(wx * s)
    })
}

/// Integral of `f` over a 4-box, as a tensor product of four 1D rules.
pub fn integrate4d<F>(f: F, domain: [(f64, f64); 4], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn([f64; 4]) -> f64 + Sync,
{
    refine(cfg, |n| {
        let axes: [Nodes; 4] =
            std::array::from_fn(|k| Nodes::new(cfg.rule, n, domain[k].0, domain[k].1));
        tensor4(&axes, &f)
    })
}

pub(crate) fn tensor4<F>(axes: &[Nodes; 4], f: &F) -> Result<f64>
where
    F: Fn([f64; 4]) -> f64 + Sync,
{
    let [a0, a1, a2, a3] = axes;
    sum_rows(a0.len(), |i| {
        let (x0, w0) = (a0.x[i], a0.w[i]);
        let mut s1 = 0.0;
        for (x1, w1) in a1.iter() {
            let mut s2 = 0.0;
            for (x2, w2) in a2.iter() {
                let mut s3 = 0.0;
                for (x3, w3) in a3.iter() {
                    let p = [x0, x1, x2, x3];
                    s3 += w3 * checked(f(p), &p)?;
                }
                s2 += w2 * s3;
            }
            s1 += w1 * s2;
        }
        Ok(w0 * s1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_and_polynomial_2d() {
        let one = integrate2d(|_, _| 1.0, [(0.0, 1.0), (0.0, 1.0)], &cfg()).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        let xy = integrate2d(|x, y| x * y, [(0.0, 1.0), (0.0, 1.0)], &cfg()).unwrap();
        assert!((xy.value - 0.25).abs() < 1e-10);
        assert_eq!(xy.rule, Rule::GaussLegendre);
    }

    #[test]
    fn constant_4d() {
        let c = QuadratureConfig::default_4d().with_points(16);
        let v = integrate4d(|_| 1.0, [(0.0, 1.0); 4], &c).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        assert_eq!(v.points, 16);
    }

    #[test]
    fn refinement_stops_on_agreement() {
        let mut calls = Vec::new();
        let est = refine(&cfg(), |n| {
            calls.push(n);
            Ok(1.0)
        })
        .unwrap();
        assert_eq!(calls, vec![256, 512]);
        assert_eq!(est.points, 512);
        assert_eq!(est.est_error, 0.0);
    }

    #[test]
    fn refinement_bounded_by_doublings() {
        let mut calls = Vec::new();
        let c = cfg().with_points(16).with_doublings(2);
        let est = refine(&c, |n| {
            calls.push(n);
            Ok(1.0 / n as f64)
        })
        .unwrap();
        assert_eq!(calls, vec![8, 16, 32, 64]);
        assert_eq!(est.points, 64);
    }

    #[test]
    fn non_finite_sample_is_located() {
        let err = integrate2d(
            |x, _| if x > 0.5 { f64::NAN } else { 1.0 },
            [(0.0, 1.0), (0.0, 1.0)],
            &cfg().with_points(16),
        )
        .unwrap_err();
        match err {
            Error::NonFinite { location, .. } => {
                assert_eq!(location.len(), 2);
                assert!(location[0] > 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_small_grids() {
        assert!(integrate1d(|x| x, 0.0, 1.0, &cfg().with_points(8)).is_err());
        let bad = QuadratureConfig {
            target_rel_tol: 0.0,
            ..cfg()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64, y: f64| (x * y).sin().exp();
        let a = integrate2d(f, [(0.0, 3.0), (0.0, 2.0)], &cfg()).unwrap();
        let b = integrate2d(f, [(0.0, 3.0), (0.0, 2.0)], &cfg()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn rule_names_round_trip() {
        for r in [Rule::Midpoint, Rule::Trapezoid, Rule::GaussLegendre] {
            assert_eq!(r.to_string().parse::<Rule>().unwrap(), r);
        }
        assert!("simpson".parse::<Rule>().is_err());
    }
}
