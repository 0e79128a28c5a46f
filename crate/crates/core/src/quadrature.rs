//! Gauss–Legendre quadrature with interval-halving adaptivity.
//!
//! The base rule has [`BASE_NODES`] points. [`integrate`] compares the rule on
//! an interval against the sum over its two halves and recurses until the
//! difference falls below the local share of the absolute tolerance, or the
//! refinement depth reaches [`MAX_DEPTH`].

use std::sync::OnceLock;

use nalgebra::SMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Node count of the base rule.
pub const BASE_NODES: usize = 64;
/// Default absolute tolerance for adaptive integration.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum interval-halving depth.
pub const MAX_DEPTH: u32 = 20;

/// Values that can be accumulated by the quadrature routines.
pub trait Quadrand: Clone {
    fn zero() -> Self;
    /// `self += w * other`
    fn add_scaled(&mut self, w: f64, other: &Self);
    /// Max-abs distance, used for the error estimate.
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl Quadrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        *self += w * other;
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl<const R: usize, const C: usize> Quadrand for SMatrix<Complex64, R, C> {
    fn zero() -> Self {
        SMatrix::zeros()
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += b * w;
        }
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1],
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn base_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(BASE_NODES))
}

/// Single application of the base rule on [a, b].
pub fn fixed<V: Quadrand, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> V {
    let (nodes, weights) = base_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = V::zero();
    for (x, w) in nodes.iter().zip(weights) {
        acc.add_scaled(w * half, &f(mid + half * x));
    }
    acc
}

/// Adaptive integral of `f` over [a, b] to absolute tolerance `tol`.
pub fn integrate<V: Quadrand, F: Fn(f64) -> V>(f: &F, a: f64, b: f64, tol: f64) -> Result<V> {
    if a == b {
        return Ok(V::zero());
    }
    let whole = fixed(f, a, b);
    refine(f, a, b, whole, tol, 0)
}

fn refine<V: Quadrand, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    b: f64,
    whole: V,
    tol: f64,
    depth: u32,
) -> Result<V> {
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m);
    let right = fixed(f, m, b);
    let mut sum = left.clone();
    sum.add_scaled(1.0, &right);
    let err = sum.distance(&whole);
    // Below this the estimate is dominated by rounding, not truncation.
    let floor = 256.0 * f64::EPSILON * sum.magnitude();
    if err <= tol.max(floor) {
        return Ok(sum);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { a, b, tol, err });
    }
    let mut out = refine(f, a, m, left, 0.5 * tol, depth + 1)?;
    out.add_scaled(1.0, &refine(f, m, b, right, 0.5 * tol, depth + 1)?);
    Ok(out)
}

/// Adaptive integral over consecutive pieces `breaks[0]..breaks[1]..`, with
/// the tolerance shared in proportion to piece length.
pub fn integrate_pieces<V: Quadrand, F: Fn(f64) -> V>(
    f: &F,
    breaks: &[f64],
    tol: f64,
) -> Result<V> {
    let mut acc = V::zero();
    if breaks.len() < 2 {
        return Ok(acc);
    }
    let total = breaks[breaks.len() - 1] - breaks[0];
    for w in breaks.windows(2) {
        let share = if total > 0.0 { tol * (w[1] - w[0]) / total } else { tol };
        acc.add_scaled(1.0, &integrate(f, w[0], w[1], share)?);
    }
    Ok(acc)
}
