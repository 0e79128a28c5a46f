//! Axisymmetric distributions of pure qubit states and their Legendre moments.
//!
//! Every density-backed distribution is stored as its marginal `g̃(x)` in
//! `x = cosθ`, normalized so that `∫₋₁¹ g̃ dx = 1`. The bivariate density over
//! the sphere is `g̃ / 2π`. Delta-type distributions carry no density and are
//! only reachable through their moments or their atoms.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::legendre::p2;
use crate::quadrature::{self, DEFAULT_TOL};
use crate::table::TabulatedDensity;

/// Slack allowed in the moment feasibility inequalities for rounding.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

/// Below this |κ| the von Mises–Fisher moments use their Taylor series.
pub const VMF_SERIES_CUTOFF: f64 = 1e-2;

/// First two Legendre moments `a_n = ∫ g̃(x) P_n(x) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPair {
    pub a1: f64,
    pub a2: f64,
}

impl MomentPair {
    pub const UNIFORM: MomentPair = MomentPair { a1: 0.0, a2: 0.0 };

    pub fn new(a1: f64, a2: f64) -> Self {
        MomentPair { a1, a2 }
    }

    /// Raw second moment `E[cos²θ] = (2a₂ + 1)/3`.
    pub fn second_moment(&self) -> f64 {
        (2.0 * self.a2 + 1.0) / 3.0
    }

    pub fn is_feasible(&self) -> bool {
        validate_moments(*self)
    }
}

/// True iff `|a₁| ≤ 1`, `a₂ ≤ 1` and `(2a₂+1)/3 ≥ a₁²`.
pub fn validate_moments(m: MomentPair) -> bool {
    m.a1.is_finite()
        && m.a2.is_finite()
        && m.a1.abs() <= 1.0 + FEASIBILITY_SLACK
        && m.a2 <= 1.0 + FEASIBILITY_SLACK
        && m.second_moment() >= m.a1 * m.a1 - FEASIBILITY_SLACK
}

/// Direction of the symmetry axis in the global frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AxisDirection {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    Uniform,
    VonMisesFisher { kappa: f64 },
    /// Degree of polarization `p` and mean Stokes parameter `mu`.
    Brosseau { p: f64, mu: f64 },
    HenyeyGreenstein { h: f64 },
    /// All weight on the latitude `theta`.
    Delta { theta: f64 },
    /// Equal weight on the mirror latitudes `theta` and `π - theta`.
    DeltaPair { theta: f64 },
    /// Uniform between the latitudes `theta1 < theta2`.
    Belt { theta1: f64, theta2: f64 },
    Tabulated(TabulatedDensity),
}

impl DistKind {
    pub fn name(&self) -> &'static str {
        match self {
            DistKind::Uniform => "uniform",
            DistKind::VonMisesFisher { .. } => "vmf",
            DistKind::Brosseau { .. } => "brosseau",
            DistKind::HenyeyGreenstein { .. } => "hg",
            DistKind::Delta { .. } => "delta",
            DistKind::DeltaPair { .. } => "deltapair",
            DistKind::Belt { .. } => "belt",
            DistKind::Tabulated(_) => "table",
        }
    }
}

/// An axisymmetric ensemble of pure states on the Bloch sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisDistribution {
    kind: DistKind,
    axis: AxisDirection,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn is_polar(t: f64) -> bool {
    (0.0..=PI).contains(&t)
}

impl AxisDistribution {
    /// Validates the parameters of `kind` and uses the default axis.
    pub fn new(kind: DistKind) -> Result<Self> {
        match &kind {
            DistKind::Uniform | DistKind::Tabulated(_) => {}
            DistKind::VonMisesFisher { kappa } => {
                check(kappa.is_finite(), || format!("kappa = {kappa} must be finite"))?
            }
            DistKind::Brosseau { p, mu } => {
                check((0.0..1.0).contains(p), || format!("P = {p} must lie in [0, 1)"))?;
                check(mu.is_finite() && mu * mu <= p * p, || {
                    format!("mu = {mu} must satisfy mu² ≤ P²")
                })?;
            }
            DistKind::HenyeyGreenstein { h } => {
                check(*h > -1.0 && *h < 1.0, || format!("h = {h} must lie in (-1, 1)"))?
            }
            DistKind::Delta { theta } | DistKind::DeltaPair { theta } => {
                check(is_polar(*theta), || format!("theta = {theta} must lie in [0, π]"))?
            }
            DistKind::Belt { theta1, theta2 } => check(
                is_polar(*theta1) && is_polar(*theta2) && theta1 < theta2,
                || format!("belt needs 0 ≤ theta1 < theta2 ≤ π, got ({theta1}, {theta2})"),
            )?,
        }
        Ok(AxisDistribution { kind, axis: AxisDirection::default() })
    }

    pub fn uniform() -> Self {
        AxisDistribution { kind: DistKind::Uniform, axis: AxisDirection::default() }
    }

    pub fn vmf(kappa: f64) -> Result<Self> {
        Self::new(DistKind::VonMisesFisher { kappa })
    }

    pub fn brosseau(p: f64, mu: f64) -> Result<Self> {
        Self::new(DistKind::Brosseau { p, mu })
    }

    pub fn henyey_greenstein(h: f64) -> Result<Self> {
        Self::new(DistKind::HenyeyGreenstein { h })
    }

    pub fn delta(theta: f64) -> Result<Self> {
        Self::new(DistKind::Delta { theta })
    }

    pub fn delta_pair(theta: f64) -> Result<Self> {
        Self::new(DistKind::DeltaPair { theta })
    }

    pub fn belt(theta1: f64, theta2: f64) -> Result<Self> {
        Self::new(DistKind::Belt { theta1, theta2 })
    }

    pub fn tabulated(t: TabulatedDensity) -> Self {
        AxisDistribution { kind: DistKind::Tabulated(t), axis: AxisDirection::default() }
    }

    pub fn with_axis(mut self, theta: f64, phi: f64) -> Result<Self> {
        check(theta.is_finite() && phi.is_finite(), || "axis angles must be finite".into())?;
        self.axis = AxisDirection { theta, phi };
        Ok(self)
    }

    pub fn kind(&self) -> &DistKind {
        &self.kind
    }

    pub fn axis(&self) -> AxisDirection {
        self.axis
    }

    pub fn has_density(&self) -> bool {
        !matches!(self.kind, DistKind::Delta { .. } | DistKind::DeltaPair { .. })
    }

    /// Point masses `(x, weight)` of the delta kinds; `None` for densities.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self.kind {
            DistKind::Delta { theta } => Some(vec![(theta.cos(), 1.0)]),
            DistKind::DeltaPair { theta } => {
                let c = theta.cos();
                Some(vec![(c, 0.5), (-c, 0.5)])
            }
            _ => None,
        }
    }

    /// Marginal density `g̃(x)` in `x = cosθ`.
    pub fn marginal_density(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [-1, 1]")));
        }
        match &self.kind {
            DistKind::Delta { .. } | DistKind::DeltaPair { .. } => {
                Err(Error::UnsupportedKind(self.kind.name()))
            }
            _ => Ok(self.density_unchecked(x)),
        }
    }

    fn density_unchecked(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::Uniform => 0.5,
            DistKind::VonMisesFisher { kappa } => vmf_density(*kappa, x),
            DistKind::Brosseau { p, mu } => brosseau_density(*p, *mu, x),
            DistKind::HenyeyGreenstein { h } => {
                (1.0 - h * h) / (2.0 * (1.0 + h * h - 2.0 * h * x).powf(1.5))
            }
            DistKind::Belt { theta1, theta2 } => {
                let (lo, hi) = (theta2.cos(), theta1.cos());
                if x >= lo && x <= hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            DistKind::Tabulated(t) => t.eval(x),
            DistKind::Delta { .. } | DistKind::DeltaPair { .. } => 0.0,
        }
    }

    /// Integration breakpoints on [-1, 1] at kinks and peaks of the density.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![-1.0, 1.0];
        match &self.kind {
            DistKind::Brosseau { p, mu } => b = brosseau_breaks(*p, *mu),
            DistKind::Belt { theta1, theta2 } => {
                b.push(theta1.cos());
                b.push(theta2.cos());
            }
            DistKind::Tabulated(t) => b.extend_from_slice(t.xs()),
            _ => {}
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `∫ g̃(x) f(x) dx` for density kinds, `Σ wᵢ f(xᵢ)` for delta kinds.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F, tol: f64) -> Result<f64> {
        if let Some(atoms) = self.atoms() {
            return Ok(atoms.iter().map(|&(x, w)| w * f(x)).sum());
        }
        quadrature::integrate_pieces(&|x| self.density_unchecked(x) * f(x), &self.breakpoints(), tol)
    }

    /// `∫₋₁¹ g̃ dx`; exactly 1 for delta kinds.
    pub fn normalization(&self) -> Result<f64> {
        self.expectation(|_| 1.0, DEFAULT_TOL)
    }

    /// Legendre moments, in closed form where one exists.
    pub fn moments(&self) -> Result<MomentPair> {
        let m = match &self.kind {
            DistKind::Uniform => MomentPair::UNIFORM,
            DistKind::VonMisesFisher { kappa } => vmf_moments(*kappa),
            DistKind::HenyeyGreenstein { h } => MomentPair::new(*h, h * h),
            DistKind::Delta { theta } => {
                let c = theta.cos();
                MomentPair::new(c, p2(c))
            }
            DistKind::DeltaPair { theta } => MomentPair::new(0.0, p2(theta.cos())),
            DistKind::Belt { theta1, theta2 } => {
                let (lo, hi) = (theta2.cos(), theta1.cos());
                MomentPair::new(0.5 * (lo + hi), 0.5 * (hi * hi + hi * lo + lo * lo - 1.0))
            }
            DistKind::Brosseau { p, mu } => brosseau_moments(*p, *mu)?,
            DistKind::Tabulated(_) => self.moments_by_quadrature()?,
        };
        if !validate_moments(m) {
            return Err(Error::InfeasibleMoments { a1: m.a1, a2: m.a2 });
        }
        Ok(m)
    }

    /// Moments by direct quadrature of `g̃·P₁` and `g̃·P₂`.
    pub fn moments_by_quadrature(&self) -> Result<MomentPair> {
        let a1 = self.expectation(|x| x, DEFAULT_TOL)?;
        let a2 = self.expectation(p2, DEFAULT_TOL)?;
        Ok(MomentPair::new(a1, a2))
    }
}

/// `κ e^{κx} / (2 sinh κ)`, evaluated without overflow.
fn vmf_density(kappa: f64, x: f64) -> f64 {
    let k = kappa.abs();
    if k == 0.0 {
        return 0.5;
    }
    let s = kappa.signum();
    k * (k * (s * x - 1.0)).exp() / -(-2.0 * k).exp_m1()
}

/// Closed-form vMF moments: `a₁ = coth κ − 1/κ`, `a₂ = 1 − 3a₁/κ`.
pub fn vmf_moments(kappa: f64) -> MomentPair {
    if kappa.abs() < VMF_SERIES_CUTOFF {
        let k2 = kappa * kappa;
        let a1 = kappa * (1.0 / 3.0 - k2 * (1.0 / 45.0 - k2 * (2.0 / 945.0 - k2 / 4725.0)));
        let a2 = k2 * (1.0 / 15.0 - k2 * (2.0 / 315.0 - k2 / 1575.0));
        return MomentPair::new(a1, a2);
    }
    let a1 = 1.0 / kappa.tanh() - 1.0 / kappa;
    MomentPair::new(a1, 1.0 - 3.0 * a1 / kappa)
}

/// `1 + μ² − P² − 2xμ + x²P²`, written around its minimum so that it stays
/// accurate when it is tiny near full polarization.
fn brosseau_quadratic(p: f64, mu: f64, x: f64) -> f64 {
    if p == 0.0 {
        return 1.0 + mu * mu - 2.0 * x * mu;
    }
    let w = (1.0 - p) * (1.0 + p);
    let r = mu / p;
    let c = r / p;
    w * (1.0 - r) * (1.0 + r) + p * p * (x - c) * (x - c)
}

/// Breakpoints at the density peak `μ/P²` (clamped to [-1, 1]) and at
/// geometrically growing distances from it, starting at the peak width.
fn brosseau_breaks(p: f64, mu: f64) -> Vec<f64> {
    let mut b = vec![-1.0, 1.0];
    if p == 0.0 {
        return b;
    }
    let peak = (mu / (p * p)).clamp(-1.0, 1.0);
    let width = brosseau_quadratic(p, mu, peak).sqrt() / p;
    b.push(peak);
    let mut step = width;
    while step < 1.0 {
        b.extend([peak - step, peak + step].into_iter().filter(|x| x.abs() < 1.0));
        step *= 8.0;
    }
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn brosseau_density(p: f64, mu: f64, x: f64) -> f64 {
    let d = brosseau_quadratic(p, mu, x);
    (1.0 - p * p) * (1.0 - mu * x) / (2.0 * d * d.sqrt())
}

/// `Iₙ = ∫₋₁¹ xⁿ / (1 + μ² − P² − 2xμ + x²P²)^{3/2} dx` by adaptive quadrature.
pub fn brosseau_integral(n: u32, p: f64, mu: f64) -> Result<f64> {
    if n > 3 {
        return Err(Error::Domain(format!("I_n defined for n ≤ 3, got {n}")));
    }
    if !(0.0..1.0).contains(&p) || !(mu.is_finite() && mu * mu <= p * p) {
        return Err(Error::Domain(format!("need 0 ≤ P < 1 and mu² ≤ P², got P={p}, mu={mu}")));
    }
    let breaks = brosseau_breaks(p, mu);
    // Iₙ grows like 1/(1 − P²) and only enters the moments multiplied by
    // (1 − P²), so the tolerance scales with it.
    quadrature::integrate_pieces(
        &|x: f64| {
            let d = brosseau_quadratic(p, mu, x);
            x.powi(n as i32) / (d * d.sqrt())
        },
        &breaks,
        DEFAULT_TOL / (1.0 - p * p),
    )
}

fn brosseau_moments(p: f64, mu: f64) -> Result<MomentPair> {
    let i1 = brosseau_integral(1, p, mu)?;
    let i2 = brosseau_integral(2, p, mu)?;
    let i3 = brosseau_integral(3, p, mu)?;
    let w = 1.0 - p * p;
    Ok(MomentPair::new(0.5 * w * (i1 - mu * i2), 0.75 * w * (i2 - mu * i3) - 0.5))
}
