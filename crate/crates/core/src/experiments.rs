//! Pairwise tables and parameter sweeps over consonant bbds.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::consonant::{consonant_from_normal, ConsonantBbd};
use crate::error::{Error, Result};
use crate::measures::{distance, inc_partial, inc_strict, scalar_product};
use crate::quadrature::QuadratureConfig;

/// A pairwise functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    IncStr,
    IncPar,
    Distance,
    Scalar,
}

impl Measure {
    pub fn is_inclusion(&self) -> bool {
        matches!(self, Measure::IncStr | Measure::IncPar)
    }

    pub fn eval(
        &self,
        f1: &ConsonantBbd,
        f2: &ConsonantBbd,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        match self {
            Measure::IncStr => Ok(inc_strict(f1, f2, cfg)?.value),
            Measure::IncPar => Ok(inc_partial(f1, f2, cfg)?.value),
            Measure::Distance => distance(f1, f2, cfg),
            Measure::Scalar => scalar_product(f1, f2, cfg),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Measure::IncStr => "IncStr",
            Measure::IncPar => "IncPar",
            Measure::Distance => "Distance",
            Measure::Scalar => "Scalar",
        }
    }

    /// Parses a comma-separated list such as `incstr,incpar`.
    pub fn parse_list(s: &str) -> Result<Vec<Measure>> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::IncStr => "incstr",
            Measure::IncPar => "incpar",
            Measure::Distance => "distance",
            Measure::Scalar => "scalar",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "incstr" | "strict" => Ok(Measure::IncStr),
            "incpar" | "partial" => Ok(Measure::IncPar),
            "distance" | "dist" => Ok(Measure::Distance),
            "scalar" | "dot" => Ok(Measure::Scalar),
            _ => Err(Error::parse(
                s.trim(),
                "unknown measure; expected incstr, incpar, distance or scalar",
            )),
        }
    }
}

/// Which bbd plays the included role in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// The fixed bbd in the swept one.
    #[default]
    OneInTwo,
    /// The swept bbd in the fixed one.
    TwoInOne,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1in2" => Ok(Direction::OneInTwo),
            "2in1" => Ok(Direction::TwoInOne),
            other => Err(Error::parse(other, "expected 1in2 or 2in1")),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OneInTwo => "1in2",
            Direction::TwoInOne => "2in1",
        })
    }
}

/// Inclusive arithmetic grid `lo, lo + step, …, hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if ![lo, hi, step].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("range bounds must be finite"));
        }
        if !(step > 0.0) {
            return Err(Error::domain(format!(
                "range step must be positive, got {step}"
            )));
        }
        if hi < lo {
            return Err(Error::domain(format!("empty range {lo}:{hi}")));
        }
        Ok(GridRange { lo, hi, step })
    }

    /// Grid values, computed as `lo + i·step` to avoid drift; `hi` is kept
    /// when it lies on the grid up to rounding.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for GridRange {
    type Err = Error;

    /// `lo:hi:step`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(s.trim(), "expected lo:hi:step"));
        }
        let nums = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(p.trim(), "not a number"))
            })
            .collect::<Result<Vec<_>>>()?;
        GridRange::new(nums[0], nums[1], nums[2]).map_err(|e| Error::parse(s.trim(), e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub fixed: ConsonantBbd,
    pub mu2: GridRange,
    pub sigma2: GridRange,
    pub direction: Direction,
}

impl SweepSpec {
    /// The `[0, 10] × [0.05, 5]` grid around a fixed `N(0, 1)`, step 0.1
    /// in the mean and 0.05 in the deviation.
    pub fn default_grid() -> Self {
        SweepSpec {
            fixed: consonant_from_normal(0.0, 1.0).expect("valid"),
            mu2: GridRange {
                lo: 0.0,
                hi: 10.0,
                step: 0.1,
            },
            sigma2: GridRange {
                lo: 0.05,
                hi: 5.0,
                step: 0.05,
            },
            direction: Direction::OneInTwo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::parse(other, "expected csv or markdown")),
        }
    }
}

/// A batch of table or sweep computations.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub distributions: Vec<ConsonantBbd>,
    pub measures: Vec<Measure>,
    pub sweep: Option<SweepSpec>,
    /// Also sets the truncation of every distribution in the scenario.
    pub quadrature: QuadratureConfig,
    pub format: OutputFormat,
}

impl Scenario {
    pub fn tables(distributions: Vec<ConsonantBbd>, measures: Vec<Measure>) -> Self {
        Scenario {
            distributions,
            measures,
            sweep: None,
            quadrature: QuadratureConfig::default(),
            format: OutputFormat::Markdown,
        }
    }

    pub fn sweep(spec: SweepSpec, measure: Measure) -> Self {
        Scenario {
            distributions: Vec::new(),
            measures: vec![measure],
            sweep: Some(spec),
            quadrature: QuadratureConfig::default(),
            format: OutputFormat::Csv,
        }
    }
}

/// Pairwise matrix of one measure; `values[i][j] = measure(f_i, f_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseTable {
    pub measure: Measure,
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Mean of the off-diagonal row entries, for inclusion measures.
    pub row_averages: Option<Vec<f64>>,
}

/// Off-diagonal row means of a square matrix.
pub fn row_averages(values: &[Vec<f64>]) -> Vec<f64> {
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let s: f64 = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v)
                .sum();
            s / (n - 1) as f64
        })
        .collect()
}

/// Pairwise matrices for every requested measure, rows and columns in input
/// order, with per-row averages for the inclusion measures.
pub fn run_tables(s: &Scenario) -> Result<Vec<PairwiseTable>> {
    let fs = &s.distributions;
    if fs.len() < 2 {
        return Err(Error::domain(format!(
            "tables need at least two distributions, got {}",
            fs.len()
        )));
    }
    if s.measures.is_empty() {
        return Err(Error::domain("no measures requested"));
    }
    s.quadrature.validate()?;
    let k = s.quadrature.truncation_k;
    let fs = fs
        .iter()
        .map(|f| f.with_truncation(k))
        .collect::<Result<Vec<_>>>()?;
    let n = fs.len();
    let labels: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
    s.measures
        .iter()
        .map(|&measure| {
            let flat: Vec<f64> = (0..n * n)
                .into_par_iter()
                .map(|k| measure.eval(&fs[k / n], &fs[k % n], &s.quadrature))
                .collect::<Result<_>>()?;
            let values: Vec<Vec<f64>> = flat.chunks(n).map(<[f64]>::to_vec).collect();
            let row_averages = measure.is_inclusion().then(|| row_averages(&values));
            Ok(PairwiseTable {
                measure,
                labels: labels.clone(),
                values,
                row_averages,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub mu2: f64,
    pub sigma2: f64,
    pub value: f64,
}

/// Evaluates the scenario's single measure on the sweep grid, rows ordered
/// by `mu2` then `sigma2`.
pub fn run_sweep(s: &Scenario) -> Result<Vec<SweepRow>> {
    let spec = s
        .sweep
        .as_ref()
        .ok_or_else(|| Error::domain("scenario has no sweep"))?;
    let measure = match s.measures.as_slice() {
        [m] => *m,
        other => {
            return Err(Error::domain(format!(
                "a sweep takes exactly one measure, got {}",
                other.len()
            )))
        }
    };
    if spec.sigma2.lo <= 0.0 {
        return Err(Error::domain(format!(
            "sigma2 range must stay positive, starts at {}",
            spec.sigma2.lo
        )));
    }
    s.quadrature.validate()?;
    let k = s.quadrature.truncation_k;
    let fixed = spec.fixed.with_truncation(k)?;
    let mus = spec.mu2.values();
    let sigmas = spec.sigma2.values();
    let cells: Vec<(f64, f64)> = mus
        .iter()
        .flat_map(|&m| sigmas.iter().map(move |&sg| (m, sg)))
        .collect();
    cells
        .into_par_iter()
        .map(|(mu2, sigma2)| {
            let swept = consonant_from_normal(mu2, sigma2)?.with_truncation(k)?;
            let value = match spec.direction {
                Direction::OneInTwo => measure.eval(&fixed, &swept, &s.quadrature)?,
                Direction::TwoInOne => measure.eval(&swept, &fixed, &s.quadrature)?,
            };
            Ok(SweepRow { mu2, sigma2, value })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "mu2,sigma2,value";

/// `mu2,sigma2,value` rows, six decimals, LF line endings.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{:.6},{:.6},{:.6}", r.mu2, r.sigma2, r.value);
    }
    out
}

/// `measure,row,column,value` rows followed by `measure,row,average,value`
/// rows for the inclusion tables.
pub fn tables_to_csv(tables: &[PairwiseTable]) -> String {
    let mut out = String::from("measure,row,column,value\n");
    for t in tables {
        for (i, row) in t.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.6}",
                    t.measure, t.labels[i], t.labels[j], v
                );
            }
        }
        if let Some(avg) = &t.row_averages {
            for (i, v) in avg.iter().enumerate() {
                let _ = writeln!(out, "{},{},average,{:.6}", t.measure, t.labels[i], v);
            }
        }
    }
    out
}

pub fn tables_to_markdown(tables: &[PairwiseTable]) -> String {
    let mut out = String::new();
    for t in tables {
        let _ = write!(out, "| {} |", t.measure.label());
        for l in &t.labels {
            let _ = write!(out, " {l} |");
        }
        out.push('\n');
        out.push_str(&"|---".repeat(t.labels.len() + 1));
        out.push_str("|\n");
        for (label, row) in t.labels.iter().zip(&t.values) {
            let _ = write!(out, "| {label} |");
            for v in row {
                let _ = write!(out, " {v:.4} |");
            }
            out.push('\n');
        }
        if let Some(avg) = &t.row_averages {
            let _ = writeln!(
                out,
                "\n| {} average | value |\n|---|---|",
                t.measure.label()
            );
            for (label, v) in t.labels.iter().zip(avg) {
                let _ = writeln!(out, "| {label} | {v:.4} |");
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r: GridRange = "0:1:0.1".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 11);
        assert!((v[10] - 1.0).abs() < 1e-12);
        assert_eq!(
            "0.05:5:0.05".parse::<GridRange>().unwrap().values().len(),
            100
        );
        assert_eq!("2:2:1".parse::<GridRange>().unwrap().values(), vec![2.0]);
        for bad in ["0:1", "0:1:0", "1:0:0.1", "a:1:1"] {
            assert!(bad.parse::<GridRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn measure_names() {
        assert_eq!(
            Measure::parse_list("incstr,incpar").unwrap(),
            vec![Measure::IncStr, Measure::IncPar]
        );
        match Measure::parse_list("incstr,bogus") {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "bogus"),
            other => panic!("{other:?}"),
        }
        assert_eq!("2in1".parse::<Direction>().unwrap(), Direction::TwoInOne);
        assert!("3in1".parse::<Direction>().is_err());
    }

    #[test]
    fn single_pair_tables() {
        let f = consonant_from_normal(0.0, 1.0).unwrap();
        let s = Scenario::tables(vec![f, f], vec![Measure::IncStr, Measure::Distance]);
        let t = run_tables(&s).unwrap();
        assert_eq!(t.len(), 2);
        for table in &t {
            assert_eq!(table.values.len(), 2);
            assert_eq!(table.values[0][1], table.values[1][0]);
        }
        assert!(t[0].row_averages.is_some() && t[1].row_averages.is_none());
        let md = tables_to_markdown(&t);
        assert!(md.starts_with("| IncStr | normal:0,1 | normal:0,1 |"));
        assert!(tables_to_csv(&t).lines().count() > 8);
    }

    #[test]
    fn tables_need_two_inputs() {
        let f = consonant_from_normal(0.0, 1.0).unwrap();
        assert!(run_tables(&Scenario::tables(vec![f], vec![Measure::IncStr])).is_err());
    }

    #[test]
    fn sweep_rows_are_ordered_and_bounded() {
        let spec = SweepSpec {
            mu2: "0:1:0.5".parse().unwrap(),
            sigma2: "0.5:1.5:0.5".parse().unwrap(),
            ..SweepSpec::default_grid()
        };
        let rows = run_sweep(&Scenario::sweep(spec, Measure::IncPar)).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!((rows[0].mu2, rows[0].sigma2), (0.0, 0.5));
        assert_eq!((rows[1].mu2, rows[1].sigma2), (0.0, 1.0));
        assert_eq!((rows[3].mu2, rows[3].sigma2), (0.5, 0.5));
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.value)));
        let csv = sweep_to_csv(&rows);
        assert!(csv.starts_with("mu2,sigma2,value\n0.000000,0.500000,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn sweep_rejects_nonpositive_sigma() {
        let spec = SweepSpec {
            sigma2: "0:1:0.5".parse().unwrap(),
            ..SweepSpec::default_grid()
        };
        assert!(run_sweep(&Scenario::sweep(spec, Measure::IncStr)).is_err());
    }

    #[test]
    fn scenario_truncation_reaches_the_bbds() {
        let fs = vec![
            consonant_from_normal(0.0, 1.0).unwrap(),
            consonant_from_normal(1.0, 2.0).unwrap(),
        ];
        let mut sc = Scenario::tables(fs, vec![Measure::IncStr]);
        let wide = run_tables(&sc).unwrap()[0].values[0][1];
        sc.quadrature.truncation_k = 2.0;
        let narrow = run_tables(&sc).unwrap()[0].values[0][1];
        assert!((wide - narrow).abs() > 1e-3, "{wide} {narrow}");
    }
}
