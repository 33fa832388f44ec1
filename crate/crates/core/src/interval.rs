//! Closed real intervals and the overlap degrees defined on pairs of them.
//!
//! The four degrees take raw endpoints `(xi, yi, xj, yj)` for the intervals
//! `[xi, yi]` and `[xj, yj]`. They validate their arguments; the integrators
//! call the unchecked `*_raw` variants in their inner loops.

use std::fmt;

use crate::error::{Error, Result};

/// A closed interval of the real line, or the empty set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Empty,
    Closed { lower: f64, upper: f64 },
}

impl Interval {
    /// `[lower, upper]`; fails unless both ends are finite and `lower <= upper`.
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        check_endpoints(lower, upper)?;
        Ok(Interval::Closed { lower, upper })
    }

    /// The bracket `⟦a, b⟧`: empty when `a > b`, otherwise `[a, b]`.
    pub fn bracket(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!(
                "bracket of non-finite bounds ({a}, {b})"
            )));
        }
        Ok(if a > b {
            Interval::Empty
        } else {
            Interval::Closed { lower: a, upper: b }
        })
    }

    /// Lebesgue measure.
    pub fn length(&self) -> f64 {
        match *self {
            Interval::Empty => 0.0,
            Interval::Closed { lower, upper } => upper - lower,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn lower(&self) -> Option<f64> {
        match *self {
            Interval::Empty => None,
            Interval::Closed { lower, .. } => Some(lower),
        }
    }

    pub fn upper(&self) -> Option<f64> {
        match *self {
            Interval::Empty => None,
            Interval::Closed { upper, .. } => Some(upper),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Interval::Empty => false,
            Interval::Closed { lower, upper } => lower <= x && x <= upper,
        }
    }

    /// Set inclusion `self ⊆ other`. The empty set is included in everything.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        match (*self, *other) {
            (Interval::Empty, _) => true,
            (_, Interval::Empty) => false,
            (Interval::Closed { lower: a, upper: b }, Interval::Closed { lower: c, upper: d }) => {
                c <= a && b <= d
            }
        }
    }

    pub fn intersection(&self, other: &Interval) -> Interval {
        match (*self, *other) {
            (Interval::Closed { lower: a, upper: b }, Interval::Closed { lower: c, upper: d }) => {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo > hi {
                    Interval::Empty
                } else {
                    Interval::Closed {
                        lower: lo,
                        upper: hi,
                    }
                }
            }
            _ => Interval::Empty,
        }
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        match (*self, *other) {
            (Interval::Empty, x) | (x, Interval::Empty) => x,
            (Interval::Closed { lower: a, upper: b }, Interval::Closed { lower: c, upper: d }) => {
                Interval::Closed {
                    lower: a.min(c),
                    upper: b.max(d),
                }
            }
        }
    }

    /// Adds `shift` to both endpoints.
    pub fn translate(&self, shift: f64) -> Interval {
        match *self {
            Interval::Empty => Interval::Empty,
            Interval::Closed { lower, upper } => Interval::Closed {
                lower: lower + shift,
                upper: upper + shift,
            },
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => write!(f, "∅"),
            Interval::Closed { lower, upper } => write!(f, "[{lower}, {upper}]"),
        }
    }
}

fn check_endpoints(lower: f64, upper: f64) -> Result<()> {
    if !lower.is_finite() || !upper.is_finite() {
        return Err(Error::domain(format!(
            "interval endpoints must be finite, got [{lower}, {upper}]"
        )));
    }
    if lower > upper {
        return Err(Error::domain(format!(
            "interval lower bound {lower} exceeds upper bound {upper}"
        )));
    }
    Ok(())
}

fn check_pair(xi: f64, yi: f64, xj: f64, yj: f64) -> Result<()> {
    check_endpoints(xi, yi)?;
    check_endpoints(xj, yj)
}

/// Length of `[xi, yi] ∩ [xj, yj]`, zero when disjoint.
#[inline]
pub(crate) fn overlap_raw(xi: f64, yi: f64, xj: f64, yj: f64) -> f64 {
    (yi.min(yj) - xi.max(xj)).max(0.0)
}

#[inline]
pub(crate) fn jaccard_delta_raw(xi: f64, yi: f64, xj: f64, yj: f64) -> f64 {
    let hull = yi.max(yj) - xi.min(xj);
    if hull <= 0.0 {
        // both intervals are the same point
        return 1.0;
    }
    overlap_raw(xi, yi, xj, yj) / hull
}

#[inline]
pub(crate) fn delta_inc_strict_raw(xi: f64, yi: f64, xj: f64, yj: f64) -> f64 {
    if xj <= xi && yi <= yj {
        1.0
    } else {
        0.0
    }
}

#[inline]
pub(crate) fn delta_inc_partial_raw(xi: f64, yi: f64, xj: f64, yj: f64) -> f64 {
    let len = yi - xi;
    if len <= 0.0 {
        return if xj <= xi && xi <= yj { 1.0 } else { 0.0 };
    }
    (overlap_raw(xi, yi, xj, yj) / len).min(1.0)
}

#[inline]
pub(crate) fn delta_inc_partial_rev_raw(xi: f64, yi: f64, xj: f64, yj: f64) -> f64 {
    let len = yj - xj;
    if len <= 0.0 {
        return if xi <= xj && xj <= yi { 1.0 } else { 0.0 };
    }
    (overlap_raw(xi, yi, xj, yj) / len).min(1.0)
}

/// Jaccard-type similarity of two intervals: intersection length over the
/// length of their hull. Two identical point intervals score 1.
pub fn jaccard_delta(xi: f64, yi: f64, xj: f64, yj: f64) -> Result<f64> {
    check_pair(xi, yi, xj, yj)?;
    Ok(jaccard_delta_raw(xi, yi, xj, yj))
}

/// 1 when `[xi, yi] ⊆ [xj, yj]`, else 0.
pub fn delta_inc_strict(xi: f64, yi: f64, xj: f64, yj: f64) -> Result<f64> {
    check_pair(xi, yi, xj, yj)?;
    Ok(delta_inc_strict_raw(xi, yi, xj, yj))
}

/// Fraction of `[xi, yi]` covered by `[xj, yj]`.
///
/// A point first interval scores 1 if it lies in `[xj, yj]` and 0 otherwise.
pub fn delta_inc_partial(xi: f64, yi: f64, xj: f64, yj: f64) -> Result<f64> {
    check_pair(xi, yi, xj, yj)?;
    Ok(delta_inc_partial_raw(xi, yi, xj, yj))
}

/// Fraction of `[xj, yj]` covered by `[xi, yi]`: the overlap normalized by
/// the second interval. Equals [`delta_inc_partial`] with the intervals
/// exchanged.
pub fn delta_inc_partial_rev(xi: f64, yi: f64, xj: f64, yj: f64) -> Result<f64> {
    check_pair(xi, yi, xj, yj)?;
    Ok(delta_inc_partial_rev_raw(xi, yi, xj, yj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bracket_cases() {
        assert_eq!(Interval::bracket(2.0, 1.0).unwrap(), Interval::Empty);
        let p = Interval::bracket(0.0, 0.0).unwrap();
        assert_eq!(
            p,
            Interval::Closed {
                lower: 0.0,
                upper: 0.0
            }
        );
        assert_eq!(p.length(), 0.0);
        assert_eq!(
            Interval::bracket(-1.0, 3.0).unwrap(),
            Interval::Closed {
                lower: -1.0,
                upper: 3.0
            }
        );
        assert!(matches!(
            Interval::bracket(f64::NAN, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(Interval::bracket(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(Interval::new(1.0, 4.0).unwrap().length(), 3.0);
        assert_eq!(Interval::Empty.length(), 0.0);
        assert_eq!(Interval::new(-2.0, -2.0).unwrap().length(), 0.0);
        assert!(Interval::new(1.0, 0.0).is_err());
    }

    #[test]
    fn set_operations() {
        let a = Interval::new(0.0, 2.0).unwrap();
        let b = Interval::new(1.0, 3.0).unwrap();
        assert_eq!(a.intersection(&b), Interval::new(1.0, 2.0).unwrap());
        assert_eq!(a.hull(&b), Interval::new(0.0, 3.0).unwrap());
        assert_eq!(
            a.intersection(&Interval::new(5.0, 6.0).unwrap()),
            Interval::Empty
        );
        assert!(Interval::Empty.is_subset_of(&a));
        assert!(!a.is_subset_of(&Interval::Empty));
        assert!(Interval::new(0.5, 1.0).unwrap().is_subset_of(&a));
        assert_eq!(a.translate(1.0), Interval::new(1.0, 3.0).unwrap());
    }

    #[test]
    fn jaccard_examples() {
        assert!((jaccard_delta(0.0, 2.0, 1.0, 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(jaccard_delta(0.0, 1.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(jaccard_delta(0.0, 1.0, 2.0, 3.0).unwrap(), 0.0);
        assert_eq!(jaccard_delta(0.5, 0.5, 0.5, 0.5).unwrap(), 1.0);
        assert_eq!(jaccard_delta(0.5, 0.5, 0.0, 1.0).unwrap(), 0.0);
        assert!(jaccard_delta(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn strict_examples() {
        assert_eq!(delta_inc_strict(0.0, 1.0, -1.0, 2.0).unwrap(), 1.0);
        assert_eq!(delta_inc_strict(0.0, 1.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(delta_inc_strict(-1.0, 2.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(delta_inc_strict(0.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(delta_inc_partial(0.0, 2.0, 1.0, 5.0).unwrap(), 0.5);
        assert_eq!(delta_inc_partial(0.0, 1.0, -3.0, 4.0).unwrap(), 1.0);
        assert_eq!(delta_inc_partial(0.0, 1.0, 5.0, 6.0).unwrap(), 0.0);
        // point first interval
        assert_eq!(delta_inc_partial(0.5, 0.5, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(delta_inc_partial(1.5, 1.5, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn partial_rev_examples() {
        assert_eq!(delta_inc_partial_rev(1.0, 5.0, 0.0, 2.0).unwrap(), 0.5);
        assert_eq!(delta_inc_partial_rev(-3.0, 4.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(delta_inc_partial_rev(0.0, 1.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(delta_inc_partial_rev(0.0, 1.0, 2.0, 2.0).unwrap(), 0.0);
    }

    fn interval() -> impl Strategy<Value = (f64, f64)> {
        (-50.0..50.0f64, 0.0..20.0f64).prop_map(|(lo, w)| (lo, lo + w))
    }

    proptest! {
        #[test]
        fn degrees_in_unit_range((xi, yi) in interval(), (xj, yj) in interval()) {
            for v in [
                jaccard_delta(xi, yi, xj, yj).unwrap(),
                delta_inc_strict(xi, yi, xj, yj).unwrap(),
                delta_inc_partial(xi, yi, xj, yj).unwrap(),
                delta_inc_partial_rev(xi, yi, xj, yj).unwrap(),
            ] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn strict_implies_full_partial((xi, yi) in interval(), (xj, yj) in interval()) {
            if delta_inc_strict(xi, yi, xj, yj).unwrap() == 1.0 {
                prop_assert_eq!(delta_inc_partial(xi, yi, xj, yj).unwrap(), 1.0);
            }
        }

        #[test]
        fn reversed_degree_swaps_roles((xi, yi) in interval(), (xj, yj) in interval()) {
            let fwd = delta_inc_partial(xi, yi, xj, yj).unwrap();
            let rev = delta_inc_partial_rev(xj, yj, xi, yi).unwrap();
            prop_assert_eq!(fwd, rev);
        }

        #[test]
        fn jaccard_symmetric((xi, yi) in interval(), (xj, yj) in interval()) {
            prop_assert_eq!(
                jaccard_delta(xi, yi, xj, yj).unwrap(),
                jaccard_delta(xj, yj, xi, yi).unwrap()
            );
            prop_assert_eq!(delta_inc_strict(xi, yi, xi, yi).unwrap(), 1.0);
        }

        #[test]
        fn translation_invariant(
            (xi, yi) in interval(),
            (xj, yj) in interval(),
            shift in -100.0..100.0f64,
        ) {
            let (a, b, c, d) = (xi + shift, yi + shift, xj + shift, yj + shift);
            prop_assert!(
                (jaccard_delta(xi, yi, xj, yj).unwrap() - jaccard_delta(a, b, c, d).unwrap()).abs() < 1e-9
            );
            prop_assert!(
                (delta_inc_partial(xi, yi, xj, yj).unwrap() - delta_inc_partial(a, b, c, d).unwrap()).abs() < 1e-9
            );
            // the indicator can only flip on exact endpoint ties, which shifted
            // floats may break; compare away from ties
            if (xi - xj).abs() > 1e-9 && (yi - yj).abs() > 1e-9 {
                prop_assert_eq!(
                    delta_inc_strict(xi, yi, xj, yj).unwrap(),
                    delta_inc_strict(a, b, c, d).unwrap()
                );
            }
        }
    }
}
