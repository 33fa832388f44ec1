//! Monte-Carlo estimation over pairs of nesting parameters.
//!
//! Used as an oracle for the grid integrators, so it shares nothing with
//! them beyond the density functions themselves.

use rand::Rng;

use super::rules::Nodes;
use super::Rule;
use crate::error::{Error, Result};

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    /// True when `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }
}

/// Smallest sample count accepted by [`mc_estimate`].
pub const MIN_SAMPLES: usize = 10_000;

/// Averages `ratio(z1, z2)` over `n` draws from `sampler`.
pub fn mc_estimate<S, F>(mut sampler: S, ratio: F, n: usize) -> Result<McEstimate>
where
    S: FnMut() -> (f64, f64),
    F: Fn(f64, f64) -> f64,
{
    if n < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "Monte-Carlo estimate needs at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=n {
        let (z1, z2) = sampler();
        let v = ratio(z1, z2);
        let delta = v - mean;
        mean += delta / k as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (n - 1) as f64;
    Ok(McEstimate {
        mean,
        stderr: (var / n as f64).sqrt(),
        samples: n,
    })
}

/// Inverse-CDF sampler for a density on `[lo, hi]`.
///
/// The CDF is tabulated on `cells` equal cells (8-point Gauss-Legendre per
/// cell) and inverted by bisection over the table followed by linear
/// interpolation inside the bracketing cell.
#[derive(Debug, Clone)]
pub struct InverseCdfSampler {
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdfSampler {
    pub fn new<F>(density: F, lo: f64, hi: f64, cells: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        if !(hi > lo) || cells == 0 {
            return Err(Error::domain(format!(
                "sampler needs a non-empty support and at least one cell, got [{lo}, {hi}] with {cells} cells"
            )));
        }
        let h = (hi - lo) / cells as f64;
        let mut grid = Vec::with_capacity(cells + 1);
        let mut cdf = Vec::with_capacity(cells + 1);
        grid.push(lo);
        cdf.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            let a = lo + i as f64 * h;
            let b = if i + 1 == cells { hi } else { a + h };
            let cell: f64 = Nodes::new(Rule::GaussLegendre, 8, a, b)
                .iter()
                .map(|(x, w)| w * density(x))
                .sum();
            if !(cell >= 0.0) {
                return Err(Error::NonFinite {
                    value: cell,
                    location: vec![a, b],
                });
            }
            acc += cell;
            grid.push(b);
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::domain("density integrates to zero on the support"));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Ok(InverseCdfSampler { grid, cdf })
    }

    /// The `u`-quantile, `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let (mut lo, mut hi) = (0usize, self.cdf.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cdf[mid] < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let span = self.cdf[hi] - self.cdf[lo];
        let t = if span > 0.0 {
            (u - self.cdf[lo]) / span
        } else {
            0.5
        };
        self.grid[lo] + t.clamp(0.0, 1.0) * (self.grid[hi] - self.grid[lo])
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_ratio_has_zero_error() {
        let est = mc_estimate(|| (0.0, 0.0), |_, _| 1.0, 10_000).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn too_few_samples() {
        assert!(mc_estimate(|| (0.0, 0.0), |_, _| 1.0, 100).is_err());
    }

    #[test]
    fn exchangeable_pairs_order_half_the_time() {
        let s = InverseCdfSampler::new(|z| z * (-z).exp(), 0.0, 40.0, 4096).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let est = mc_estimate(
            || (s.draw(&mut rng), s.draw(&mut rng)),
            |a, b| if a <= b { 1.0 } else { 0.0 },
            100_000,
        )
        .unwrap();
        assert!(est.agrees_with(0.5, 3.0), "{est:?}");
    }

    #[test]
    fn uniform_quantiles() {
        let s = InverseCdfSampler::new(|_| 1.0, 2.0, 4.0, 16).unwrap();
        assert!((s.quantile(0.0) - 2.0).abs() < 1e-12);
        assert!((s.quantile(0.25) - 2.5).abs() < 1e-12);
        assert!((s.quantile(1.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_quantile_matches_closed_form() {
        let s = InverseCdfSampler::new(|z| (-z).exp(), 0.0, 40.0, 8192).unwrap();
        for u in [0.1, 0.5, 0.9, 0.99] {
            let want = -(1.0f64 - u).ln();
            assert!((s.quantile(u) - want).abs() < 1e-4, "u={u}");
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let s = InverseCdfSampler::new(|_| 1.0, 0.0, 1.0, 64).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            mc_estimate(|| (s.draw(&mut rng), 0.0), |a, _| a, 10_000).unwrap()
        };
        assert_eq!(run(3), run(3));
    }
}
