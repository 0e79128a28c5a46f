//! Optimal cloning angles and fidelities.
//!
//! Everything here works from the two Legendre moments of the input
//! ensemble. The closed-form optimum is parametrized by `Γ` and `Ω`; the
//! grid-plus-line-search maximizer [`numeric_optimum`] is an independent
//! route used to check it.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::Serialize;

use crate::dist::{validate_moments, MomentPair};
use crate::error::{Error, Result};

/// `|x₊x₋|` below which the moments are routed to the removable-singularity limit.
pub const DEGENERATE_EPS: f64 = 1e-12;
/// Negative radicand in `Ω` tolerated (and clamped to zero) before erroring.
pub const RADICAND_SLACK: f64 = 1e-9;
const ANGLE_SLACK: f64 = 1e-12;

/// The pair `(α₊, α₋)` that fixes a symmetric cloner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CloningAngles {
    pub plus: f64,
    pub minus: f64,
}

impl CloningAngles {
    pub const PCC_UPPER: CloningAngles = CloningAngles { plus: 0.0, minus: FRAC_PI_2 };
    pub const PCC_LOWER: CloningAngles = CloningAngles { plus: FRAC_PI_2, minus: 0.0 };

    pub const fn new(plus: f64, minus: f64) -> Self {
        CloningAngles { plus, minus }
    }

    /// The universal cloner, `cos²α± = 2/3`.
    pub fn universal() -> Self {
        let a = 0.5 * (2.0 * SQRT_2 / 3.0).asin();
        CloningAngles { plus: a, minus: a }
    }

    pub fn sum(&self) -> f64 {
        self.plus + self.minus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Interior,
    /// `α₊ = 0, α₋ = π/2`
    PccUpper,
    /// `α₊ = π/2, α₋ = 0`
    PccLower,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Interior => "Interior",
            Regime::PccUpper => "PccUpper",
            Regime::PccLower => "PccLower",
        }
    }
}

/// Optimal angles plus the diagnostics that selected them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClonerParams {
    pub angles: CloningAngles,
    /// `Γ`; infinite or NaN when `x₊x₋ = 0` and no limit applies.
    pub gamma: f64,
    /// The value of `Ω` (not the angle sum `α₊ + α₋`); NaN when undefined.
    pub omega_value: f64,
    pub regime: Regime,
}

impl ClonerParams {
    pub fn alpha_plus(&self) -> f64 {
        self.angles.plus
    }

    pub fn alpha_minus(&self) -> f64 {
        self.angles.minus
    }
}

fn x_pm(m: MomentPair) -> (f64, f64) {
    let base = 1.0 + 2.0 * m.a2;
    (base + 3.0 * m.a1, base - 3.0 * m.a1)
}

/// `Γ = 6√2 a₁(a₂ − 1) / (x₊x₋)` with `x± = 1 + 2a₂ ± 3a₁`.
pub fn gamma(m: MomentPair) -> Result<f64> {
    let (xp, xm) = x_pm(m);
    let den = xp * xm;
    if den.abs() < DEGENERATE_EPS {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(6.0 * SQRT_2 * m.a1 * (m.a2 - 1.0) / den)
}

/// `Ω = 2√2(1 + 2a₂)(1 − a₂) / √(3x₊x₋(3 + 4a₂² − 3a₁² − 4a₂))`.
pub fn omega(m: MomentPair) -> Result<f64> {
    let (xp, xm) = x_pm(m);
    let den = xp * xm;
    if den.abs() < DEGENERATE_EPS {
        return Err(Error::DegenerateDenominator(den));
    }
    let mut rad = 3.0 + 4.0 * m.a2 * m.a2 - 3.0 * m.a1 * m.a1 - 4.0 * m.a2;
    if rad < -RADICAND_SLACK {
        return Err(Error::InfeasibleMoments { a1: m.a1, a2: m.a2 });
    }
    rad = rad.max(0.0);
    let q = 3.0 * den * rad;
    if q <= 0.0 {
        return Err(Error::DegenerateDenominator(q));
    }
    Ok(2.0 * SQRT_2 * (1.0 + 2.0 * m.a2) * (1.0 - m.a2) / q.sqrt())
}

/// Limit of `Ω` as `a₁ → 0`, finite at `a₂ = −1/2`.
fn omega_limit(a2: f64) -> f64 {
    let s = if 1.0 + 2.0 * a2 < 0.0 { -1.0 } else { 1.0 };
    2.0 * SQRT_2 * (1.0 - a2) * s / (3.0 * (3.0 + 4.0 * a2 * a2 - 4.0 * a2)).sqrt()
}

/// Single-copy fidelity of a clone of the state at polar angle `theta`.
pub fn single_copy_fidelity(theta: f64, a: CloningAngles) -> f64 {
    let c2 = (0.5 * theta).cos().powi(2);
    let s2 = (0.5 * theta).sin().powi(2);
    let sin_t = theta.sin();
    (2.0 * (3.0 + (2.0 * a.plus).cos()) * c2 * c2
        + 2.0 * (3.0 + (2.0 * a.minus).cos()) * s2 * s2
        + (a.plus.sin().powi(2) + a.minus.sin().powi(2) + 2.0 * SQRT_2 * a.sum().sin())
            * sin_t
            * sin_t)
        / 8.0
}

/// Ensemble-average single-copy fidelity, reduced exactly to the moments.
pub fn average_fidelity(m: MomentPair, a: CloningAngles) -> f64 {
    let m2 = m.second_moment();
    let mp = (1.0 + 2.0 * m.a1 + m2) / 4.0;
    let mm = (1.0 - 2.0 * m.a1 + m2) / 4.0;
    let s = 1.0 - m2;
    (2.0 * (3.0 + (2.0 * a.plus).cos()) * mp
        + 2.0 * (3.0 + (2.0 * a.minus).cos()) * mm
        + (a.plus.sin().powi(2) + a.minus.sin().powi(2) + 2.0 * SQRT_2 * a.sum().sin()) * s)
        / 8.0
}

/// The better of the two pure PCC branches and its fidelity.
pub fn best_pcc(m: MomentPair) -> (CloningAngles, Regime, f64) {
    let fu = average_fidelity(m, CloningAngles::PCC_UPPER);
    let fl = average_fidelity(m, CloningAngles::PCC_LOWER);
    if fl > fu {
        (CloningAngles::PCC_LOWER, Regime::PccLower, fl)
    } else {
        (CloningAngles::PCC_UPPER, Regime::PccUpper, fu)
    }
}

fn in_range(a: f64) -> Option<f64> {
    (-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK)
        .contains(&a)
        .then(|| a.clamp(0.0, FRAC_PI_2))
}

/// Optimal cloning angles for an ensemble with moments `m`.
pub fn optimal_angles(m: MomentPair) -> Result<ClonerParams> {
    if !validate_moments(m) {
        return Err(Error::InfeasibleMoments { a1: m.a1, a2: m.a2 });
    }
    let (xp, xm) = x_pm(m);
    let den = xp * xm;
    let num = 6.0 * SQRT_2 * m.a1 * (m.a2 - 1.0);

    if den.abs() < DEGENERATE_EPS && m.a1.abs() > DEGENERATE_EPS {
        // |Γ| diverges.
        let (angles, regime, _) = best_pcc(m);
        return Ok(ClonerParams { angles, gamma: num / den, omega_value: f64::NAN, regime });
    }
    if den.abs() < DEGENERATE_EPS {
        // Removable singularity along a₁ = 0, unless a PCC branch does better.
        let om = omega_limit(m.a2).min(1.0);
        let alpha = 0.5 * om.asin();
        let limit = CloningAngles::new(alpha, alpha);
        let f_limit = average_fidelity(m, limit);
        let (pcc, regime, f_pcc) = best_pcc(m);
        if f_pcc > f_limit + 1e-14 {
            return Ok(ClonerParams { angles: pcc, gamma: num / den, omega_value: f64::NAN, regime });
        }
        return Ok(ClonerParams { angles: limit, gamma: 0.0, omega_value: om, regime: Regime::Interior });
    }

    let g = num / den;
    if g.abs() < 1.0 {
        if let Ok(om) = omega(m) {
            if (-1.0..=1.0 + RADICAND_SLACK).contains(&om) {
                let principal = om.min(1.0).asin();
                let ag = g.asin();
                let best = [principal, PI - principal]
                    .into_iter()
                    .filter_map(|b| {
                        let a = CloningAngles::new(in_range(0.5 * (b + ag))?, in_range(0.5 * (b - ag))?);
                        Some((average_fidelity(m, a), a))
                    })
                    .max_by(|x, y| x.0.total_cmp(&y.0));
                if let Some((_, angles)) = best {
                    return Ok(ClonerParams { angles, gamma: g, omega_value: om, regime: Regime::Interior });
                }
            }
        }
        log::debug!("no admissible interior solution at {m:?}; falling back to PCC");
    }
    let (angles, regime, _) = best_pcc(m);
    let omega_value = omega(m).unwrap_or(f64::NAN);
    Ok(ClonerParams { angles, gamma: g, omega_value, regime })
}

/// Result of the brute-force maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptimum {
    pub angles: CloningAngles,
    pub fidelity: f64,
}

const GRID: usize = 400;

/// Maximizes [`average_fidelity`] over `[0, π/2]²` by a 400×400 grid followed
/// by golden-section line searches along the axes and both diagonals.
pub fn numeric_optimum(m: MomentPair) -> NumericOptimum {
    let f = |p: [f64; 2]| average_fidelity(m, CloningAngles::new(p[0], p[1]));
    let step = FRAC_PI_2 / (GRID - 1) as f64;
    let mut best = ([0.0, 0.0], f64::NEG_INFINITY);
    for i in 0..GRID {
        for j in 0..GRID {
            let p = [i as f64 * step, j as f64 * step];
            let v = f(p);
            if v > best.1 {
                best = (p, v);
            }
        }
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let dirs = [[1.0, 0.0], [0.0, 1.0], [r, r], [r, -r]];
    let (mut p, mut fp) = best;
    for _ in 0..1000 {
        let before = fp;
        for d in &dirs {
            let (lo, hi) = box_range(p, *d, 2.0 * step);
            let t = golden_max(|t| f([p[0] + t * d[0], p[1] + t * d[1]]), lo, hi);
            let q = [
                (p[0] + t * d[0]).clamp(0.0, FRAC_PI_2),
                (p[1] + t * d[1]).clamp(0.0, FRAC_PI_2),
            ];
            let fq = f(q);
            if fq > fp {
                p = q;
                fp = fq;
            }
        }
        if fp - before <= 1e-16 {
            break;
        }
    }
    NumericOptimum { angles: CloningAngles::new(p[0], p[1]), fidelity: fp }
}

/// Range of `t ∈ [-reach, reach]` keeping `p + t·d` inside the box.
fn box_range(p: [f64; 2], d: [f64; 2], reach: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (-reach, reach);
    for k in 0..2 {
        if d[k] > 0.0 {
            lo = lo.max(-p[k] / d[k]);
            hi = hi.min((FRAC_PI_2 - p[k]) / d[k]);
        } else if d[k] < 0.0 {
            lo = lo.max((FRAC_PI_2 - p[k]) / d[k]);
            hi = hi.min(-p[k] / d[k]);
        }
    }
    (lo.min(0.0), hi.max(0.0))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // Endpoints matter when the optimum sits on the box boundary.
    [(a, f(a)), (b, f(b)), (0.5 * (a + b), f(0.5 * (a + b)))]
        .into_iter()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map(|x| x.0)
        .unwrap()
}
