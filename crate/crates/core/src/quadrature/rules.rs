//! One-dimensional node/weight sets.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::Rule;

/// Nodes and weights of a 1D rule mapped onto a concrete interval.
#[derive(Debug, Clone)]
pub struct Nodes {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

impl Nodes {
    pub fn new(rule: Rule, n: usize, lo: f64, hi: f64) -> Self {
        let n = n.max(1);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        match rule {
            Rule::GaussLegendre => {
                let reference = gauss_legendre_reference(n);
                let x = reference.0.iter().map(|&t| mid + half * t).collect();
                let w = reference.1.iter().map(|&v| half * v).collect();
                Nodes { x, w }
            }
            Rule::Midpoint => {
                let h = (hi - lo) / n as f64;
                Nodes {
                    x: (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect(),
                    w: vec![h; n],
                }
            }
            Rule::Trapezoid => {
                let n = n.max(2);
                let h = (hi - lo) / (n - 1) as f64;
                let mut w = vec![h; n];
                w[0] *= 0.5;
                w[n - 1] *= 0.5;
                Nodes {
                    x: (0..n).map(|i| lo + i as f64 * h).collect(),
                    w,
                }
            }
        }
    }

    /// A single node carrying unit weight: integration against a point mass.
    pub fn point(x: f64) -> Self {
        Nodes {
            x: vec![x],
            w: vec![1.0],
        }
    }

    /// Concatenation of rules over consecutive pieces `[b0,b1], [b1,b2], …`.
    /// Zero-width pieces are skipped.
    pub fn piecewise(rule: Rule, n_per_piece: usize, breaks: &[f64]) -> Self {
        let mut out = Nodes {
            x: Vec::new(),
            w: Vec::new(),
        };
        for pair in breaks.windows(2) {
            if pair[1] > pair[0] {
                let piece = Nodes::new(rule, n_per_piece, pair[0], pair[1]);
                out.x.extend(piece.x);
                out.w.extend(piece.w);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.w.iter().copied())
    }
}

type Reference = Arc<(Vec<f64>, Vec<f64>)>;

fn cache() -> &'static Mutex<HashMap<usize, Reference>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Reference>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre_reference(n: usize) -> Reference {
    if let Some(r) = cache().lock().unwrap().get(&n) {
        return Arc::clone(r);
    }
    let r = Arc::new(compute_gauss_legendre(n));
    cache().lock().unwrap().insert(n, Arc::clone(&r));
    r
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Newton iteration from the Tricomi initial guess
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}
