//! Mass functions on a finite frame of discernment.
//!
//! Subsets of the frame are bit patterns: bit `k` set means element `k` is
//! in the set. Frames are limited to [`MAX_FRAME`] elements.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_FRAME: usize = 16;

/// Tolerance on `Σ m = 1`.
pub const MASS_SUM_TOL: f64 = 1e-12;

/// A subset of the frame.
pub type Subset = u32;

/// Named elements of a frame of discernment.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Frame {
    names: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut frame = Frame::default();
        for n in names {
            frame.insert(&n.into())?;
        }
        Ok(frame)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Adds `name` if absent and returns its index.
    pub fn insert(&mut self, name: &str) -> Result<usize> {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::parse(name, "empty element name"));
        }
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        if self.names.len() == MAX_FRAME {
            return Err(Error::domain(format!(
                "frame is limited to {MAX_FRAME} elements, cannot add `{name}`"
            )));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset> {
        names.iter().try_fold(0, |acc, n| {
            let n = n.as_ref().trim();
            self.index_of(n)
                .map(|i| acc | (1 << i))
                .ok_or_else(|| Error::parse(n, "element not in frame"))
        })
    }

    /// `a|b|c` rendering of a subset; `∅` for the empty set.
    pub fn format_subset(&self, set: Subset) -> String {
        if set == 0 {
            return "∅".to_string();
        }
        self.names
            .iter()
            .enumerate()
            .filter(|(i, _)| set & (1 << i) != 0)
            .map(|(_, n)| n.as_str())
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// A basic belief assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMassFunction {
    frame_size: usize,
    masses: BTreeMap<Subset, f64>,
}

impl DiscreteMassFunction {
    /// Builds a mass function, summing repeated subsets. Masses must lie in
    /// `[0, 1]` and sum to 1; `m(∅) > 0` is allowed.
    pub fn new<I>(frame_size: usize, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        if frame_size == 0 || frame_size > MAX_FRAME {
            return Err(Error::domain(format!(
                "frame size must be in 1..={MAX_FRAME}, got {frame_size}"
            )));
        }
        let omega = full_set(frame_size);
        let mut map = BTreeMap::new();
        for (set, m) in masses {
            if set & !omega != 0 {
                return Err(Error::domain(format!(
                    "subset {set:#b} is outside a frame of {frame_size} elements"
                )));
            }
            if !(0.0..=1.0).contains(&m) {
                return Err(Error::domain(format!("mass {m} outside [0, 1]")));
            }
            *map.entry(set).or_insert(0.0) += m;
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > MASS_SUM_TOL {
            return Err(Error::domain(format!("masses sum to {total}, expected 1")));
        }
        map.retain(|_, m| *m > 0.0);
        Ok(DiscreteMassFunction {
            frame_size,
            masses: map,
        })
    }

    /// All mass on `set`.
    pub fn categorical(frame_size: usize, set: Subset) -> Result<Self> {
        Self::new(frame_size, [(set, 1.0)])
    }

    /// All mass on the whole frame.
    pub fn vacuous(frame_size: usize) -> Result<Self> {
        Self::new(frame_size, [(full_set(frame_size.min(MAX_FRAME)), 1.0)])
    }

    pub fn frame_size(&self) -> usize {
        self.frame_size
    }

    pub fn omega(&self) -> Subset {
        full_set(self.frame_size)
    }

    pub fn mass(&self, set: Subset) -> f64 {
        self.masses.get(&set).copied().unwrap_or(0.0)
    }

    /// Subsets with positive mass, including `∅` if it carries mass.
    pub fn masses(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.masses.iter().map(|(&s, &m)| (s, m))
    }

    /// Non-empty subsets with positive mass.
    pub fn focal_sets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.masses.keys().copied().filter(|&s| s != 0)
    }

    /// Belief: mass of the non-empty subsets of `x`.
    pub fn bel(&self, x: Subset) -> f64 {
        self.masses()
            .filter(|&(y, _)| y != 0 && y & !x == 0)
            .map(|(_, m)| m)
            .sum()
    }

    /// Plausibility: mass of the subsets meeting `x`.
    pub fn pl(&self, x: Subset) -> f64 {
        self.masses()
            .filter(|&(y, _)| y & x != 0)
            .map(|(_, m)| m)
            .sum()
    }

    /// Commonality: mass of the supersets of `x`.
    pub fn q(&self, x: Subset) -> f64 {
        self.masses()
            .filter(|&(y, _)| x & !y == 0)
            .map(|(_, m)| m)
            .sum()
    }
}

fn full_set(n: usize) -> Subset {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn same_frame(m1: &DiscreteMassFunction, m2: &DiscreteMassFunction) -> Result<()> {
    if m1.frame_size != m2.frame_size {
        return Err(Error::domain(format!(
            "mass functions live on frames of different sizes ({} vs {})",
            m1.frame_size, m2.frame_size
        )));
    }
    Ok(())
}

/// Jaccard similarity of two subsets, with `D(∅, ∅) = 1`.
pub fn jaccard_sets(a: Subset, b: Subset) -> f64 {
    let union = (a | b).count_ones();
    if union == 0 {
        return 1.0;
    }
    (a & b).count_ones() as f64 / union as f64
}

/// Jousselme distance `sqrt(½ (m1 − m2)ᵀ D (m1 − m2))` with the Jaccard
/// matrix `D`. Only subsets carrying mass in either function contribute.
pub fn jousselme_distance(m1: &DiscreteMassFunction, m2: &DiscreteMassFunction) -> Result<f64> {
    same_frame(m1, m2)?;
    let mut diff: BTreeMap<Subset, f64> = BTreeMap::new();
    for (s, m) in m1.masses() {
        *diff.entry(s).or_insert(0.0) += m;
    }
    for (s, m) in m2.masses() {
        *diff.entry(s).or_insert(0.0) -= m;
    }
    let diff: Vec<(Subset, f64)> = diff.into_iter().filter(|&(_, d)| d != 0.0).collect();
    let mut quad = 0.0;
    for &(a, da) in &diff {
        for &(b, db) in &diff {
            quad += da * db * jaccard_sets(a, b);
        }
    }
    Ok((0.5 * quad).max(0.0).sqrt().min(1.0))
}

/// Fraction of focal-set pairs `(X, Y)` of `m1 × m2` with `X ⊆ Y`.
pub fn d_inc(m1: &DiscreteMassFunction, m2: &DiscreteMassFunction) -> Result<f64> {
    same_frame(m1, m2)?;
    let f1: Vec<Subset> = m1.focal_sets().collect();
    let f2: Vec<Subset> = m2.focal_sets().collect();
    if f1.is_empty() || f2.is_empty() {
        return Ok(0.0);
    }
    let included = f1
        .iter()
        .flat_map(|&x| f2.iter().map(move |&y| x & !y == 0))
        .filter(|&inc| inc)
        .count();
    Ok(included as f64 / (f1.len() * f2.len()) as f64)
}

/// Symmetric inclusion degree `max(d_inc(m1, m2), d_inc(m2, m1))`.
pub fn sigma_inc(m1: &DiscreteMassFunction, m2: &DiscreteMassFunction) -> Result<f64> {
    Ok(d_inc(m1, m2)?.max(d_inc(m2, m1)?))
}

/// How the inclusion degree discounts the distance in [`conflict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConflictReading {
    /// `(1 − σ_inc) · d`: zero for identical mass functions.
    #[default]
    DiscountedDistance,
    /// `1 − σ_inc · d`.
    OneMinusProduct,
}

impl fmt::Display for ConflictReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConflictReading::DiscountedDistance => "discounted",
            ConflictReading::OneMinusProduct => "one-minus-product",
        })
    }
}

/// Conflict between two mass functions: the Jousselme distance discounted
/// by their mutual inclusion.
pub fn conflict(
    m1: &DiscreteMassFunction,
    m2: &DiscreteMassFunction,
    reading: ConflictReading,
) -> Result<f64> {
    let s = sigma_inc(m1, m2)?;
    let d = jousselme_distance(m1, m2)?;
    Ok(match reading {
        ConflictReading::DiscountedDistance => (1.0 - s) * d,
        ConflictReading::OneMinusProduct => 1.0 - s * d,
    })
}

/// One focal element of a mass-function file.
#[derive(Debug, Clone, PartialEq)]
pub struct BbaLine {
    pub elements: Vec<String>,
    pub mass: f64,
}

/// Parsed mass-function text: optional declared frame plus focal lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BbaFile {
    pub frame: Option<Vec<String>>,
    pub lines: Vec<BbaLine>,
}

/// Parses the `elements:mass` text format.
///
/// One focal element per line, elements separated by `|`, e.g. `a|b:0.7`.
/// An empty element list (`:0.1`) or `∅` denotes the empty set. Blank lines
/// and lines starting with `#` are ignored. A line `@frame a|b|c` declares
/// the frame explicitly; otherwise it is the set of elements mentioned.
pub fn parse_bba(text: &str) -> Result<BbaFile> {
    let mut out = BbaFile::default();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@frame") {
            out.frame = Some(split_elements(rest));
            continue;
        }
        let (elems, mass) = line
            .rsplit_once(':')
            .ok_or_else(|| Error::parse(line, "expected `elements:mass`"))?;
        let mass: f64 = mass
            .trim()
            .parse()
            .map_err(|_| Error::parse(mass.trim(), "mass is not a number"))?;
        out.lines.push(BbaLine {
            elements: split_elements(elems),
            mass,
        });
    }
    Ok(out)
}

fn split_elements(s: &str) -> Vec<String> {
    let s = s.trim();
    if s.is_empty() || s == "∅" || s == "{}" {
        return Vec::new();
    }
    s.split('|').map(|e| e.trim().to_string()).collect()
}

impl BbaFile {
    /// Adds the declared and mentioned elements to `frame`.
    pub fn extend_frame(&self, frame: &mut Frame) -> Result<()> {
        for name in self.frame.iter().flatten() {
            frame.insert(name)?;
        }
        for line in &self.lines {
            for name in &line.elements {
                frame.insert(name)?;
            }
        }
        Ok(())
    }

    pub fn to_mass_function(&self, frame: &Frame) -> Result<DiscreteMassFunction> {
        let entries = self
            .lines
            .iter()
            .map(|l| Ok((frame.subset(&l.elements)?, l.mass)))
            .collect::<Result<Vec<_>>>()?;
        DiscreteMassFunction::new(frame.len(), entries)
    }
}
