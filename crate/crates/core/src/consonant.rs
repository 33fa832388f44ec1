//! Consonant basic belief densities induced by unimodal pignistic densities.
//!
//! A consonant bbd is carried by a nested family of focal intervals
//! `focal(z)`, `z >= 0`, together with a mass density `density(z)` over the
//! nesting parameter. For a pignistic density `p` that is symmetric about
//! `mu` and decreasing away from it, the least-committed consonant bbd has
//! focal sets `[mu - z, mu + z]` and `density(z) = -2z p'(mu + z)`; for a
//! density decreasing on `[0, ∞)` the focal sets are `[0, z]` and
//! `density(z) = -z p'(z)`. Spreading each focal mass uniformly over its
//! interval gives `p` back, which is what [`ConsonantBbd::pignistic_roundtrip`]
//! computes.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quadrature::{integrate1d, Nodes, QuadratureConfig, Rule};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Default truncation in units of the family scale.
pub const DEFAULT_TRUNCATION_K: f64 = 8.0;

#[inline]
fn std_normal_pdf(t: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * t * t).exp()
}

#[inline]
fn std_normal_upper_tail(t: f64) -> f64 {
    0.5 * erfc(t / std::f64::consts::SQRT_2)
}

/// The pignistic density a consonant bbd is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Normal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
}

impl Family {
    fn validate(&self) -> Result<()> {
        match *self {
            Family::Normal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::domain(format!(
                        "normal mean must be finite, got {mu}"
                    )));
                }
                if !(sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::domain(format!(
                        "normal standard deviation must be positive, got {sigma}"
                    )));
                }
            }
            Family::Exponential { rate } => {
                if !(rate > 0.0) || !rate.is_finite() {
                    return Err(Error::domain(format!(
                        "exponential rate must be positive, got {rate}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Characteristic length: `sigma` or `1 / rate`.
    pub fn scale(&self) -> f64 {
        match *self {
            Family::Normal { sigma, .. } => sigma,
            Family::Exponential { rate } => 1.0 / rate,
        }
    }

    /// The source pignistic density.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Family::Normal { mu, sigma } => std_normal_pdf((x - mu) / sigma) / sigma,
            Family::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            Family::Exponential { rate } => write!(f, "exp:{rate}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `normal:mu,sigma` or `exp:rate`.
    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        let (kind, args) = token
            .split_once(':')
            .ok_or_else(|| Error::parse(token, "expected `normal:mu,sigma` or `exp:rate`"))?;
        let nums = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(a.trim(), format!("not a number in `{token}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let family = match (kind.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("normal" | "n", &[mu, sigma]) => Family::Normal { mu, sigma },
            ("exp" | "exponential", &[rate]) => Family::Exponential { rate },
            ("normal" | "n", _) => {
                return Err(Error::parse(token, "normal takes two arguments: mu,sigma"))
            }
            ("exp" | "exponential", _) => {
                return Err(Error::parse(token, "exp takes one argument: rate"))
            }
            (other, _) => return Err(Error::parse(other, "unknown distribution kind")),
        };
        family
            .validate()
            .map_err(|e| Error::parse(token, e.to_string()))?;
        Ok(family)
    }
}

/// A consonant basic belief density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsonantBbd {
    family: Family,
    support_bound: f64,
}

/// Least-committed consonant bbd of `N(mu, sigma²)`, truncated at `8 sigma`.
pub fn consonant_from_normal(mu: f64, sigma: f64) -> Result<ConsonantBbd> {
    ConsonantBbd::new(Family::Normal { mu, sigma })
}

/// Least-committed consonant bbd of the exponential density with `rate`,
/// truncated where its tail mass matches the normal family's at `8 sigma`.
pub fn consonant_from_exponential(rate: f64) -> Result<ConsonantBbd> {
    ConsonantBbd::new(Family::Exponential { rate })
}

impl ConsonantBbd {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        let unbounded = ConsonantBbd {
            family,
            support_bound: f64::INFINITY,
        };
        unbounded.with_truncation(DEFAULT_TRUNCATION_K)
    }

    /// Truncates the nesting parameter so that the discarded tail mass equals
    /// that of a normal-induced bbd cut at `k` standard deviations. For the
    /// normal family this is `k sigma`.
    pub fn with_truncation(self, k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::domain(format!(
                "truncation k must be positive, got {k}"
            )));
        }
        let support_bound = match self.family {
            Family::Normal { sigma, .. } => k * sigma,
            Family::Exponential { rate } => {
                let target = 2.0 * std_normal_upper_tail(k) + 2.0 * k * std_normal_pdf(k);
                let tail = |u: f64| (1.0 + u) * (-u).exp();
                // tail is decreasing and tail(k) >= target
                let (mut lo, mut hi) = (k, 2.0 * k + 80.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if tail(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi / rate
            }
        };
        Ok(ConsonantBbd {
            support_bound,
            ..self
        })
    }

    /// Sets the truncation point directly; zero leaves no mass at all.
    pub fn with_support_bound(self, z_max: f64) -> Result<Self> {
        if !(z_max >= 0.0) || !z_max.is_finite() {
            return Err(Error::domain(format!(
                "support bound must be >= 0, got {z_max}"
            )));
        }
        Ok(ConsonantBbd {
            support_bound: z_max,
            ..self
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }

    /// Focal interval at nesting level `z` (negative `z` is treated as 0).
    pub fn focal(&self, z: f64) -> Interval {
        let (lo, hi) = self.focal_bounds(z);
        Interval::Closed {
            lower: lo,
            upper: hi,
        }
    }

    #[inline]
    pub fn focal_bounds(&self, z: f64) -> (f64, f64) {
        let z = z.max(0.0);
        match self.family {
            Family::Normal { mu, .. } => (mu - z, mu + z),
            Family::Exponential { .. } => (0.0, z),
        }
    }

    /// Mass density over the nesting parameter, ignoring truncation.
    #[inline]
    pub fn density(&self, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        match self.family {
            Family::Normal { sigma, .. } => {
                let t = z / sigma;
                2.0 * t * t * std_normal_pdf(t) / sigma
            }
            Family::Exponential { rate } => rate * rate * z * (-rate * z).exp(),
        }
    }

    /// Untruncated mass on `[z, ∞)`.
    pub fn tail_mass(&self, z: f64) -> f64 {
        let z = z.max(0.0);
        match self.family {
            Family::Normal { sigma, .. } => {
                let t = z / sigma;
                2.0 * std_normal_upper_tail(t) + 2.0 * t * std_normal_pdf(t)
            }
            Family::Exponential { rate } => {
                let u = rate * z;
                (1.0 + u) * (-u).exp()
            }
        }
    }

    /// Untruncated first moment `∫_z^∞ u density(u) du`.
    pub fn tail_moment(&self, z: f64) -> f64 {
        let z = z.max(0.0);
        match self.family {
            Family::Normal { sigma, .. } => {
                let t = z / sigma;
                2.0 * sigma * (t * t + 2.0) * std_normal_pdf(t)
            }
            Family::Exponential { rate } => {
                let u = rate * z;
                (u * u + 2.0 * u + 2.0) * (-u).exp() / rate
            }
        }
    }

    /// Mass on `[a, b] ∩ [0, support_bound]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let (a, b) = (a.max(0.0), b.min(self.support_bound));
        if a >= b {
            return 0.0;
        }
        (self.tail_mass(a) - self.tail_mass(b)).max(0.0)
    }

    /// First moment on `[a, b] ∩ [0, support_bound]`.
    pub fn moment_between(&self, a: f64, b: f64) -> f64 {
        let (a, b) = (a.max(0.0), b.min(self.support_bound));
        if a >= b {
            return 0.0;
        }
        (self.tail_moment(a) - self.tail_moment(b)).max(0.0)
    }

    /// Total mass kept by the truncation.
    pub fn total_mass(&self) -> f64 {
        self.mass_between(0.0, self.support_bound)
    }

    /// Smallest `z` whose focal interval contains `[lo, hi]`, if any.
    pub fn min_containing(&self, lo: f64, hi: f64) -> Option<f64> {
        match self.family {
            Family::Normal { mu, .. } => Some((mu - lo).max(hi - mu).max(0.0)),
            Family::Exponential { .. } => (lo >= 0.0).then(|| hi.max(0.0)),
        }
    }

    /// Nesting levels `z > 0` at which an endpoint of `focal(z)` passes
    /// through `x`. Between consecutive levels the overlap of `focal(z)` with
    /// a fixed interval is affine in `z`.
    pub fn crossings(&self, x: f64) -> Option<f64> {
        let z = match self.family {
            Family::Normal { mu, .. } => (x - mu).abs(),
            Family::Exponential { .. } => x,
        };
        (z > 0.0).then_some(z)
    }

    /// Pignistic density recovered from the bbd: each focal mass spread
    /// uniformly on its interval, integrated over all focal sets containing
    /// `x`.
    pub fn pignistic_roundtrip(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let Some(z0) = self.min_containing(x, x) else {
            return Ok(0.0);
        };
        if z0 >= self.support_bound {
            return Ok(0.0);
        }
        let est = integrate1d(
            |z| {
                let (lo, hi) = self.focal_bounds(z);
                let len = hi - lo;
                if len > 0.0 {
                    self.density(z) / len
                } else {
                    0.0
                }
            },
            z0,
            self.support_bound,
            cfg,
        )?;
        Ok(est.value)
    }
}

impl fmt::Display for ConsonantBbd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family.fmt(f)
    }
}

impl FromStr for ConsonantBbd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConsonantBbd::new(s.parse()?)
    }
}

/// Axis-aligned truncation box of a planar density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

type Density2d = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A basic belief density over closed intervals `[x, y]`, given either as a
/// genuine planar density `f(x, y)` (zero for `x > y`) or as the pushforward
/// of a consonant bbd onto its curve of focal intervals.
#[derive(Clone)]
pub struct GenericBbd {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Planar {
        density: Density2d,
        bounds: TruncationBox,
    },
    Pushforward(ConsonantBbd),
}

/// A focal interval with its quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedFocal {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
}

impl fmt::Debug for GenericBbd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Planar { bounds, .. } => {
                f.debug_struct("Planar").field("bounds", bounds).finish()
            }
            Repr::Pushforward(c) => f.debug_tuple("Pushforward").field(c).finish(),
        }
    }
}

/// Pushforward of a consonant bbd, for the generic integration path.
pub fn to_generic(c: &ConsonantBbd) -> GenericBbd {
    GenericBbd {
        repr: Repr::Pushforward(*c),
    }
}

impl GenericBbd {
    pub fn planar<F>(density: F, bounds: TruncationBox) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let b = bounds;
        let finite = [b.x_lo, b.x_hi, b.y_lo, b.y_hi]
            .iter()
            .all(|v| v.is_finite());
        if !finite || b.x_lo > b.x_hi || b.y_lo > b.y_hi {
            return Err(Error::domain(format!("invalid truncation box {bounds:?}")));
        }
        Ok(GenericBbd {
            repr: Repr::Planar {
                density: Arc::new(density),
                bounds,
            },
        })
    }

    /// Planar density value; zero below the diagonal and outside the box.
    /// `None` for a pushforward, which has no planar density.
    pub fn density2d(&self, x: f64, y: f64) -> Option<f64> {
        match &self.repr {
            Repr::Planar { density, bounds } => {
                let inside =
                    bounds.x_lo <= x && x <= bounds.x_hi && bounds.y_lo <= y && y <= bounds.y_hi;
                Some(if x > y || !inside { 0.0 } else { density(x, y) })
            }
            Repr::Pushforward(_) => None,
        }
    }

    /// Number of integration axes: 2 for a planar density, 1 for a
    /// pushforward.
    pub fn dims(&self) -> usize {
        match self.repr {
            Repr::Planar { .. } => 2,
            Repr::Pushforward(_) => 1,
        }
    }

    pub fn truncation_box(&self) -> TruncationBox {
        match &self.repr {
            Repr::Planar { bounds, .. } => *bounds,
            Repr::Pushforward(c) => {
                let z = c.support_bound();
                let (lo_max, hi_max) = c.focal_bounds(z);
                let (lo_min, hi_min) = c.focal_bounds(0.0);
                TruncationBox {
                    x_lo: lo_max,
                    x_hi: lo_min,
                    y_lo: hi_min,
                    y_hi: hi_max,
                }
            }
        }
    }

    /// Discrete measure approximating the bbd: a tensor rule over the part
    /// of the box with `x <= y`, or a 1D rule along the nesting parameter.
    pub fn discretize(&self, rule: Rule, n: usize) -> Vec<WeightedFocal> {
        match &self.repr {
            Repr::Planar { density, bounds } => {
                let mut out = Vec::with_capacity(n * n);
                let xs = Nodes::new(rule, n, bounds.x_lo, bounds.x_hi.min(bounds.y_hi));
                for (x, wx) in xs.iter() {
                    let y0 = bounds.y_lo.max(x);
                    if y0 >= bounds.y_hi {
                        continue;
                    }
                    for (y, wy) in Nodes::new(rule, n, y0, bounds.y_hi).iter() {
                        out.push(WeightedFocal {
                            lo: x,
                            hi: y,
                            weight: wx * wy * density(x, y),
                        });
                    }
                }
                out
            }
            Repr::Pushforward(c) => {
                if c.support_bound() <= 0.0 {
                    return Vec::new();
                }
                Nodes::new(rule, n, 0.0, c.support_bound())
                    .iter()
                    .map(|(z, w)| {
                        let (lo, hi) = c.focal_bounds(z);
                        WeightedFocal {
                            lo,
                            hi,
                            weight: w * c.density(z),
                        }
                    })
                    .collect()
            }
        }
    }

    /// Mass of the focal intervals that contain `[lo, hi]`, integrated with
    /// explicit limits instead of an indicator.
    pub fn mass_containing(&self, lo: f64, hi: f64, rule: Rule, n: usize) -> f64 {
        match &self.repr {
            Repr::Planar { density, bounds } => {
                // {x <= lo, y >= hi} ∩ box ∩ {x <= y}
                let x_hi = lo.min(bounds.x_hi);
                if x_hi <= bounds.x_lo {
                    return 0.0;
                }
                let mut s = 0.0;
                for (x, wx) in Nodes::new(rule, n, bounds.x_lo, x_hi).iter() {
                    let y0 = hi.max(bounds.y_lo).max(x);
                    if y0 >= bounds.y_hi {
                        continue;
                    }
                    let inner: f64 = Nodes::new(rule, n, y0, bounds.y_hi)
                        .iter()
                        .map(|(y, wy)| wy * density(x, y))
                        .sum();
                    s += wx * inner;
                }
                s
            }
            Repr::Pushforward(c) => match c.min_containing(lo, hi) {
                Some(z0) if z0 < c.support_bound() => Nodes::new(rule, n, z0, c.support_bound())
                    .iter()
                    .map(|(z, w)| w * c.density(z))
                    .sum(),
                _ => 0.0,
            },
        }
    }

    pub fn total_mass(&self, rule: Rule, n: usize) -> f64 {
        self.discretize(rule, n).iter().map(|f| f.weight).sum()
    }
}
