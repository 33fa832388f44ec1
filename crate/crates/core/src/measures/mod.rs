//! Scalar product, distance and inclusion measures between consonant bbds.
//!
//! All measures are double integrals over the two nesting parameters
//! `(z1, z2)` of `m1(z1) m2(z2) δ(focal1(z1), focal2(z2))`. For a fixed `z1`
//! the overlap of `focal2(z2)` with `focal1(z1)` is piecewise affine in
//! `z2`, with breaks where an endpoint of `focal2` passes an endpoint of
//! `focal1`. The fast paths split every axis at those breaks, so no rule
//! ever straddles a kink:
//!
//! * strict inclusion reduces to a 1D integral of the tail mass of `m2`
//!   above the smallest containing level;
//! * partial inclusion reduces to a 1D integral of closed-form truncated
//!   moments of `m2`;
//! * the scalar product and the reversed partial inclusion are integrated
//!   on the split 2D grid.
//!
//! [`generic`] evaluates the same functionals without any of these
//! reductions, for cross-validation and for planar densities.

pub mod generic;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::consonant::ConsonantBbd;
use crate::error::{Error, Result};
use crate::interval::{
    delta_inc_partial_raw, delta_inc_partial_rev_raw, delta_inc_strict_raw, jaccard_delta_raw,
    overlap_raw,
};
use crate::quadrature::{
    checked, mc_estimate, pairwise_sum, refine, sum_rows, Estimate, InverseCdfSampler, McEstimate,
    Nodes, QuadratureConfig,
};

/// Which inclusion functional a result holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InclusionKind {
    Strict,
    /// Overlap normalized by the first bbd's focal length.
    Partial,
    /// Overlap normalized by the second bbd's focal length.
    PartialReversed,
}

impl fmt::Display for InclusionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InclusionKind::Strict => "strict",
            InclusionKind::Partial => "partial",
            InclusionKind::PartialReversed => "partial_reversed",
        })
    }
}

/// Value of an inclusion functional together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionResult {
    pub value: f64,
    /// Labels of the (included, including) bbds.
    pub direction: (String, String),
    pub kind: InclusionKind,
    pub quadrature: Estimate,
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn pieces_per_axis(n: usize, pieces: usize) -> usize {
    (n / pieces.max(1)).max(8)
}

/// Sorted breakpoints in `[0, z_max]`, endpoints included.
fn breakpoints(z_max: f64, interior: impl IntoIterator<Item = Option<f64>>) -> Vec<f64> {
    let mut b = vec![0.0, z_max];
    b.extend(
        interior
            .into_iter()
            .flatten()
            .filter(|&z| z > 0.0 && z < z_max),
    );
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Levels of `f1` at which the kink structure of the inner integral over
/// `f2` changes: an endpoint of `focal1` meets an endpoint of `focal2` at
/// either end of `f2`'s truncated support.
fn outer_breaks(f1: &ConsonantBbd, f2: &ConsonantBbd) -> Vec<f64> {
    let (a0, b0) = f2.focal_bounds(0.0);
    let (a1, b1) = f2.focal_bounds(f2.support_bound());
    breakpoints(
        f1.support_bound(),
        [a0, b0, a1, b1].into_iter().map(|x| f1.crossings(x)),
    )
}

/// Levels of `f2` at which `focal2` endpoints pass `lo` or `hi`.
fn inner_breaks(f2: &ConsonantBbd, lo: f64, hi: f64) -> Vec<f64> {
    breakpoints(f2.support_bound(), [f2.crossings(lo), f2.crossings(hi)])
}

fn outer_nodes(f1: &ConsonantBbd, f2: &ConsonantBbd, cfg: &QuadratureConfig, n: usize) -> Nodes {
    let breaks = outer_breaks(f1, f2);
    Nodes::piecewise(cfg.rule, pieces_per_axis(n, breaks.len() - 1), &breaks)
}

/// `∫∫ m1 m2 δ dz1 dz2` on the split grid, `δ` given on raw endpoints.
fn integrate_pair<D>(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    cfg: &QuadratureConfig,
    delta: D,
) -> Result<Estimate>
where
    D: Fn(f64, f64, f64, f64) -> f64 + Sync,
{
    refine(cfg, |n| {
        let outer = outer_nodes(f1, f2, cfg, n);
        sum_rows(outer.len(), |i| {
            let (z1, w1) = (outer.x[i], outer.w[i]);
            let m1 = f1.density(z1);
            if m1 == 0.0 {
                return Ok(0.0);
            }
            let (lo1, hi1) = f1.focal_bounds(z1);
            let breaks = inner_breaks(f2, lo1, hi1);
            let inner = Nodes::piecewise(cfg.rule, pieces_per_axis(n, breaks.len() - 1), &breaks);
            let mut acc = Vec::with_capacity(inner.len());
            for (z2, w2) in inner.iter() {
                let (lo2, hi2) = f2.focal_bounds(z2);
                let v = f2.density(z2) * delta(lo1, hi1, lo2, hi2);
                acc.push(w2 * checked(v, &[z1, z2])?);
            }
            Ok(w1 * m1 * pairwise_sum(&acc))
        })
    })
}

/// Integral over `f1`'s levels of `m1(z1) · inner(z1)`, on the split 1D grid.
fn integrate_outer<G>(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    cfg: &QuadratureConfig,
    inner: G,
) -> Result<Estimate>
where
    G: Fn(f64) -> f64 + Sync,
{
    refine(cfg, |n| {
        let outer = outer_nodes(f1, f2, cfg, n);
        let mut acc = Vec::with_capacity(outer.len());
        for (z1, w1) in outer.iter() {
            let v = f1.density(z1) * inner(z1);
            acc.push(w1 * checked(v, &[z1])?);
        }
        Ok(pairwise_sum(&acc))
    })
}

/// Scalar product `⟨f1, f2⟩` with the Jaccard-type interval similarity.
pub fn scalar_product(f1: &ConsonantBbd, f2: &ConsonantBbd, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(scalar_product_estimate(f1, f2, cfg)?.value)
}

pub fn scalar_product_estimate(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let mut est = integrate_pair(f1, f2, cfg, jaccard_delta_raw)?;
    est.value = est.value.max(0.0);
    Ok(est)
}

/// `sqrt(½ (‖f1‖² + ‖f2‖² − 2⟨f1, f2⟩))`, clamped at zero.
pub fn distance(f1: &ConsonantBbd, f2: &ConsonantBbd, cfg: &QuadratureConfig) -> Result<f64> {
    let n1 = scalar_product(f1, f1, cfg)?;
    let n2 = scalar_product(f2, f2, cfg)?;
    let cross = scalar_product(f1, f2, cfg)?;
    Ok((0.5 * (n1 + n2 - 2.0 * cross)).max(0.0).sqrt())
}

fn result(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    kind: InclusionKind,
    est: Estimate,
) -> InclusionResult {
    InclusionResult {
        value: clamp_unit(est.value),
        direction: (f1.to_string(), f2.to_string()),
        kind,
        quadrature: est,
    }
}

/// Strict inclusion of `f1` in `f2`: the mass of pairs with
/// `focal1(z1) ⊆ focal2(z2)`.
///
/// For each `z1` the included `z2` form the ray above the smallest level of
/// `f2` containing `focal1(z1)` (closed at the boundary), whose mass is the
/// closed-form tail of `m2`.
pub fn inc_strict(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    cfg: &QuadratureConfig,
) -> Result<InclusionResult> {
    let z2_max = f2.support_bound();
    let est = integrate_outer(f1, f2, cfg, |z1| {
        let (lo, hi) = f1.focal_bounds(z1);
        match f2.min_containing(lo, hi) {
            Some(z) => f2.mass_between(z, z2_max),
            None => 0.0,
        }
    })?;
    Ok(result(f1, f2, InclusionKind::Strict, est))
}

/// Partial inclusion of `f1` in `f2`: expected fraction of `focal1(z1)`
/// covered by `focal2(z2)`.
///
/// The inner integral over `z2` is exact: on each piece between kinks the
/// overlap is `α + β z2`, so the piece contributes `α M0 + β M1` with `M0`,
/// `M1` the truncated mass and first moment of `m2`.
pub fn inc_partial(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    cfg: &QuadratureConfig,
) -> Result<InclusionResult> {
    let est = integrate_outer(f1, f2, cfg, |z1| {
        let (lo1, hi1) = f1.focal_bounds(z1);
        let len = hi1 - lo1;
        if len <= 0.0 {
            return 0.0;
        }
        let breaks = inner_breaks(f2, lo1, hi1);
        let mut covered = 0.0;
        for piece in breaks.windows(2) {
            let (p, q) = (piece[0], piece[1]);
            let (lp, hp) = f2.focal_bounds(p);
            let (lq, hq) = f2.focal_bounds(q);
            let ov_p = overlap_raw(lo1, hi1, lp, hp);
            let ov_q = overlap_raw(lo1, hi1, lq, hq);
            let slope = (ov_q - ov_p) / (q - p);
            let intercept = ov_p - slope * p;
            covered += intercept * f2.mass_between(p, q) + slope * f2.moment_between(p, q);
        }
        covered / len
    })?;
    Ok(result(f1, f2, InclusionKind::Partial, est))
}

/// Partial inclusion normalized by the second bbd's focal length,
/// integrated directly on the 2D grid. Equals `inc_partial(f2, f1)`.
pub fn inc_partial_rev(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    cfg: &QuadratureConfig,
) -> Result<InclusionResult> {
    let est = integrate_pair(f1, f2, cfg, delta_inc_partial_rev_raw)?;
    Ok(result(f1, f2, InclusionKind::PartialReversed, est))
}

fn check_average_args(i: usize, fs: &[ConsonantBbd]) -> Result<()> {
    if fs.len() < 2 {
        return Err(Error::domain(format!(
            "average inclusion needs at least two bbds, got {}",
            fs.len()
        )));
    }
    if i >= fs.len() {
        return Err(Error::domain(format!(
            "index {i} out of range for {} bbds",
            fs.len()
        )));
    }
    Ok(())
}

fn average_by<F>(i: usize, fs: &[ConsonantBbd], measure: F) -> Result<f64>
where
    F: Fn(&ConsonantBbd, &ConsonantBbd) -> Result<InclusionResult>,
{
    check_average_args(i, fs)?;
    let mut total = 0.0;
    for (j, f) in fs.iter().enumerate() {
        if j != i {
            total += measure(&fs[i], f)?.value;
        }
    }
    Ok(total / (fs.len() - 1) as f64)
}

/// Mean strict inclusion of `fs[i]` in each of the other bbds.
pub fn inc_avg_strict(i: usize, fs: &[ConsonantBbd], cfg: &QuadratureConfig) -> Result<f64> {
    average_by(i, fs, |a, b| inc_strict(a, b, cfg))
}

/// Mean partial inclusion of `fs[i]` in each of the other bbds.
pub fn inc_avg_partial(i: usize, fs: &[ConsonantBbd], cfg: &QuadratureConfig) -> Result<f64> {
    average_by(i, fs, |a, b| inc_partial(a, b, cfg))
}

/// Functionals accepted by [`mc_measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMeasure {
    Scalar,
    Strict,
    Partial,
    PartialReversed,
}

/// Cells in the tabulated CDF of the Monte-Carlo samplers.
const SAMPLER_CELLS: usize = 1 << 14;

/// Seeded Monte-Carlo estimate of a functional: nesting levels drawn by
/// inverse-CDF sampling from each truncated density, `δ` averaged.
pub fn mc_measure(
    f1: &ConsonantBbd,
    f2: &ConsonantBbd,
    measure: McMeasure,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    let s1 = InverseCdfSampler::new(|z| f1.density(z), 0.0, f1.support_bound(), SAMPLER_CELLS)?;
    let s2 = InverseCdfSampler::new(|z| f2.density(z), 0.0, f2.support_bound(), SAMPLER_CELLS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta: fn(f64, f64, f64, f64) -> f64 = match measure {
        McMeasure::Scalar => jaccard_delta_raw,
        McMeasure::Strict => delta_inc_strict_raw,
        McMeasure::Partial => delta_inc_partial_raw,
        McMeasure::PartialReversed => delta_inc_partial_rev_raw,
    };
    mc_estimate(
        || (s1.draw(&mut rng), s2.draw(&mut rng)),
        |z1, z2| {
            let (a, b) = f1.focal_bounds(z1);
            let (c, d) = f2.focal_bounds(z2);
            delta(a, b, c, d)
        },
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consonant::{consonant_from_exponential, consonant_from_normal};

    fn n(mu: f64, sigma: f64) -> ConsonantBbd {
        consonant_from_normal(mu, sigma).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn diagonal_strict_is_one_half() {
        let v = inc_strict(&n(0.0, 1.0), &n(0.0, 1.0), &cfg()).unwrap();
        assert!((v.value - 0.5).abs() < 1e-9, "{}", v.value);
        assert_eq!(v.kind, InclusionKind::Strict);
        assert_eq!(v.direction, ("normal:0,1".into(), "normal:0,1".into()));
    }

    #[test]
    fn distant_strict_vanishes() {
        let v = inc_strict(&n(0.0, 1.0), &n(10.0, 0.1), &cfg()).unwrap();
        assert!(v.value.abs() < 1e-6);
    }

    #[test]
    fn partial_splits_into_half_plus_reciprocal_pi() {
        // ½ from z2 >= z1; E[z2/z1; z2 < z1] computed independently below
        let f = n(0.0, 1.0);
        let v = inc_partial(&f, &f, &cfg()).unwrap().value;
        let lower = crate::quadrature::integrate2d(
            |z1, z2| {
                if z2 < z1 {
                    f.density(z1) * f.density(z2) * z2 / z1
                } else {
                    0.0
                }
            },
            [(0.0, 8.0), (0.0, 8.0)],
            &cfg()
                .with_rule(crate::quadrature::Rule::Midpoint)
                .with_points(2048)
                .with_doublings(0),
        )
        .unwrap()
        .value;
        assert!(
            (lower - std::f64::consts::FRAC_1_PI).abs() < 1e-3,
            "{lower}"
        );
        assert!((v - (0.5 + lower)).abs() < 1e-3);
        assert!(
            (v - (0.5 + std::f64::consts::FRAC_1_PI)).abs() < 1e-9,
            "{v}"
        );
    }

    #[test]
    fn scalar_product_symmetric_and_positive() {
        let (a, b) = (n(0.0, 1.0), n(4.0, 0.5));
        let ab = scalar_product(&a, &b, &cfg()).unwrap();
        let ba = scalar_product(&b, &a, &cfg()).unwrap();
        assert!((ab - ba).abs() < 1e-6);
        assert!(scalar_product(&a, &a, &cfg()).unwrap() > 0.0);
        let near = scalar_product(&a, &n(1.0, 1.0), &cfg()).unwrap();
        let far = scalar_product(&a, &n(5.0, 1.0), &cfg()).unwrap();
        assert!(far < near);
    }

    #[test]
    fn distance_properties() {
        let a = n(0.0, 1.0);
        assert!(distance(&a, &a, &cfg()).unwrap() < 1e-6);
        let b = n(4.0, 1.0);
        let ab = distance(&a, &b, &cfg()).unwrap();
        assert!((ab - distance(&b, &a, &cfg()).unwrap()).abs() < 1e-9);
        assert!(ab > distance(&a, &n(1.0, 1.0), &cfg()).unwrap());
    }

    #[test]
    fn averages() {
        let fs = [n(0.0, 1.0), n(0.0, 0.5)];
        let avg = inc_avg_strict(0, &fs, &cfg()).unwrap();
        assert_eq!(avg, inc_strict(&fs[0], &fs[1], &cfg()).unwrap().value);
        assert!(inc_avg_partial(0, &fs[..1], &cfg()).is_err());
        assert!(inc_avg_partial(2, &fs, &cfg()).is_err());
    }

    #[test]
    fn exponential_pairs_are_bounded_and_ordered() {
        let e1 = consonant_from_exponential(1.0).unwrap();
        let e2 = consonant_from_exponential(2.0).unwrap();
        let nn = n(1.0, 0.5);
        for (a, b) in [(&e1, &e2), (&e2, &e1), (&e1, &nn), (&nn, &e1)] {
            let s = inc_strict(a, b, &cfg()).unwrap().value;
            let p = inc_partial(a, b, &cfg()).unwrap().value;
            let r = inc_partial_rev(b, a, &cfg()).unwrap().value;
            assert!(
                (0.0..=1.0).contains(&s) && s <= p + 1e-9,
                "{a} {b}: {s} {p}"
            );
            assert!((p - r).abs() < 1e-4, "{a} {b}: {p} vs {r}");
        }
        // [0, z] ⊆ [0, z'] iff z <= z': exchangeable levels when rates agree
        let same = inc_strict(&e1, &e1, &cfg()).unwrap().value;
        assert!((same - 0.5).abs() < 1e-9);
    }

    #[test]
    fn mc_agrees_with_quadrature_on_strict() {
        let (a, b) = (n(0.0, 0.5), n(0.0, 1.0));
        let q = inc_strict(&a, &b, &cfg()).unwrap().value;
        let mc = mc_measure(&a, &b, McMeasure::Strict, 200_000, 11).unwrap();
        assert!(mc.agrees_with(q, 3.0), "{q} vs {mc:?}");
    }
}
