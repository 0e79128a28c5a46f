#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use qclone_core::{AxisDistribution, CloningAngles, MomentPair};

/// Composite Simpson rule with `panels` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// `E[f(cosθ)]` by brute force: Simpson on each smooth piece for densities,
/// a weighted sum for atoms. The density is read just inside each piece so
/// jumps at the breakpoints take their one-sided values.
pub fn brute_expectation<F: Fn(f64) -> f64>(d: &AxisDistribution, f: F) -> f64 {
    if let Some(atoms) = d.atoms() {
        return atoms.iter().map(|&(x, w)| w * f(x)).sum();
    }
    d.breakpoints()
        .windows(2)
        .map(|w| {
            let eps = 1e-9 * (w[1] - w[0]);
            let g = |x: f64| d.marginal_density(x.clamp(w[0] + eps, w[1] - eps)).unwrap();
            simpson(|x| f(x) * g(x), w[0], w[1], 20_000)
        })
        .sum()
}

pub fn arb_dist() -> impl Strategy<Value = AxisDistribution> {
    prop_oneof![
        Just(AxisDistribution::uniform()),
        (-6.0f64..6.0).prop_map(|k| AxisDistribution::vmf(k).unwrap()),
        (0.0f64..0.95, -1.0f64..1.0).prop_map(|(p, t)| AxisDistribution::brosseau(p, p * t).unwrap()),
        (-0.8f64..0.8).prop_map(|h| AxisDistribution::henyey_greenstein(h).unwrap()),
        (0.0f64..PI).prop_map(|t| AxisDistribution::delta(t).unwrap()),
        (0.0f64..PI).prop_map(|t| AxisDistribution::delta_pair(t).unwrap()),
        (0.0f64..PI, 0.05f64..1.0).prop_map(|(a, f)| {
            let b = a + f * (PI - a);
            AxisDistribution::belt(a, b.max(a + 1e-3).min(PI)).unwrap()
        }),
    ]
}

pub fn arb_angles() -> impl Strategy<Value = CloningAngles> {
    (0.0f64..PI / 2.0, 0.0f64..PI / 2.0).prop_map(|(p, m)| CloningAngles::new(p, m))
}

/// Uniform over the feasible region `|a₁| ≤ 1`, `(3a₁² − 1)/2 ≤ a₂ ≤ 1`.
pub fn arb_moments() -> impl Strategy<Value = MomentPair> {
    (-1.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a1, t)| {
        let lo = (3.0 * a1 * a1 - 1.0) / 2.0;
        MomentPair::new(a1, lo + t * (1.0 - lo))
    })
}
