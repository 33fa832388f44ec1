//! Inclusion measures, distances and conflict for belief functions.
//!
//! The crate covers two settings:
//!
//! * discrete mass functions on a finite frame ([`discrete`]): belief,
//!   plausibility, commonality, the Jousselme distance, the inclusion degree
//!   between focal sets and the inclusion-discounted conflict;
//! * continuous belief functions given by consonant basic belief densities
//!   induced by normal or exponential pignistic densities ([`consonant`]),
//!   with strict and partial inclusion, scalar product and distance
//!   ([`measures`]) computed by the quadrature engine in [`quadrature`].
//!
//! [`experiments`] builds pairwise tables and parameter sweeps on top.
//!
//! ```
//! use cbf_core::{consonant_from_normal, inc_partial, QuadratureConfig};
//!
//! let f = consonant_from_normal(0.0, 1.0).unwrap();
//! let g = consonant_from_normal(0.0, 0.5).unwrap();
//! let v = inc_partial(&g, &f, &QuadratureConfig::default()).unwrap();
//! assert!((v.value - 0.9595).abs() < 1e-3);
//! ```

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod consonant;
pub mod discrete;
pub mod error;
pub mod experiments;
pub mod interval;
pub mod measures;
pub mod quadrature;

pub use consonant::{
    consonant_from_exponential, consonant_from_normal, to_generic, ConsonantBbd, Family,
    GenericBbd, TruncationBox,
};
pub use discrete::{ConflictReading, DiscreteMassFunction, Frame};
pub use error::{Error, Result};
pub use interval::{
    delta_inc_partial, delta_inc_partial_rev, delta_inc_strict, jaccard_delta, Interval,
};
pub use measures::{
    distance, inc_avg_partial, inc_avg_strict, inc_partial, inc_partial_rev, inc_strict,
    mc_measure, scalar_product, InclusionKind, InclusionResult, McMeasure,
};
pub use quadrature::{integrate2d, integrate4d, mc_estimate, Estimate, QuadratureConfig, Rule};
