//! The measures over arbitrary basic belief densities.
//!
//! Each bbd is discretized into weighted focal intervals (a 2D tensor rule
//! over `{x <= y}` for planar densities, a 1D rule along the nesting
//! parameter for pushforwards), and the functionals are evaluated as the
//! full product sum over both discretizations. No kink splitting and no
//! closed-form tails are used here, which makes this path an independent
//! check of the consonant fast path.
//!
//! `points_per_axis = n` fixes a budget of `n^4` evaluations. When one or
//! both bbds are pushforwards the budget is spread over the remaining axes,
//! `n^(4/d)` points each for `d` axes in total.

use crate::consonant::{GenericBbd, WeightedFocal};
use crate::error::Result;
use crate::interval::{delta_inc_partial_raw, delta_inc_partial_rev_raw, jaccard_delta_raw};
use crate::quadrature::{checked, refine, sum_rows, Estimate, QuadratureConfig};

fn points_for(g1: &GenericBbd, g2: &GenericBbd, n: usize) -> usize {
    let d = (g1.dims() + g2.dims()) as f64;
    (n as f64).powf(4.0 / d).round() as usize
}

fn product_sum<D>(a: &[WeightedFocal], b: &[WeightedFocal], delta: D) -> Result<f64>
where
    D: Fn(f64, f64, f64, f64) -> f64 + Sync,
{
    sum_rows(a.len(), |i| {
        let f = a[i];
        if f.weight == 0.0 {
            return Ok(0.0);
        }
        let mut s = 0.0;
        for g in b {
            s += g.weight * delta(f.lo, f.hi, g.lo, g.hi);
        }
        Ok(f.weight * checked(s, &[f.lo, f.hi])?)
    })
}

fn paired<D>(g1: &GenericBbd, g2: &GenericBbd, cfg: &QuadratureConfig, delta: D) -> Result<Estimate>
where
    D: Fn(f64, f64, f64, f64) -> f64 + Sync + Copy,
{
    refine(cfg, |n| {
        let n = points_for(g1, g2, n);
        let a = g1.discretize(cfg.rule, n);
        let b = g2.discretize(cfg.rule, n);
        product_sum(&a, &b, delta)
    })
}

pub fn scalar_product(
    g1: &GenericBbd,
    g2: &GenericBbd,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    paired(g1, g2, cfg, jaccard_delta_raw)
}

pub fn distance(g1: &GenericBbd, g2: &GenericBbd, cfg: &QuadratureConfig) -> Result<f64> {
    let n1 = scalar_product(g1, g1, cfg)?.value;
    let n2 = scalar_product(g2, g2, cfg)?.value;
    let cross = scalar_product(g1, g2, cfg)?.value;
    Ok((0.5 * (n1 + n2 - 2.0 * cross)).max(0.0).sqrt())
}

/// Strict inclusion; the containment indicator becomes integration limits
/// on the inner bbd (`x2 <= x1`, `y2 >= y1`).
pub fn inc_strict(g1: &GenericBbd, g2: &GenericBbd, cfg: &QuadratureConfig) -> Result<Estimate> {
    refine(cfg, |n| {
        let n = points_for(g1, g2, n);
        let a = g1.discretize(cfg.rule, n);
        sum_rows(a.len(), |i| {
            let f = a[i];
            if f.weight == 0.0 {
                return Ok(0.0);
            }
            let inner = g2.mass_containing(f.lo, f.hi, cfg.rule, n);
            Ok(f.weight * checked(inner, &[f.lo, f.hi])?)
        })
    })
}

pub fn inc_partial(g1: &GenericBbd, g2: &GenericBbd, cfg: &QuadratureConfig) -> Result<Estimate> {
    paired(g1, g2, cfg, delta_inc_partial_raw)
}

pub fn inc_partial_rev(
    g1: &GenericBbd,
    g2: &GenericBbd,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    paired(g1, g2, cfg, delta_inc_partial_rev_raw)
}
