//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qclone_core::choi::{build_merit, certify, choi_fidelity, choi_from_params};
use qclone_core::circuit::{build_circuit, circuit_unitary, Gate};
use qclone_core::dist::vmf_moments;
use qclone_core::distspec::{DistSpec, SweepSpec};
use qclone_core::optimal::{best_pcc, gamma};
use qclone_core::qsim::{clone_fidelity_sim, clone_isometry, PureQubit};
use qclone_core::quadrature;
use qclone_core::{
    average_fidelity, optimal_angles, single_copy_fidelity, AxisDistribution, CloningAngles, MomentPair, Regime,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f_opt(m: MomentPair) -> f64 {
    average_fidelity(m, optimal_angles(m).unwrap().angles)
}

fn kappa_star() -> f64 {
    let excess = |k: f64| gamma(vmf_moments(k)).unwrap().abs() - 1.0;
    let (mut lo, mut hi) = (0.05, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn uc_reduction() -> Outcome {
    let d = AxisDistribution::uniform();
    let m = d.moments().map_err(|e| e.to_string())?;
    let p = optimal_angles(m).map_err(|e| e.to_string())?;
    for a in [p.angles.plus, p.angles.minus] {
        ensure((a.cos().powi(2) - 2.0 / 3.0).abs() <= 1e-10, || format!("cos²α = {}", a.cos().powi(2)))?;
    }
    let closed = average_fidelity(m, p.angles);
    let quad = d
        .expectation(|x| single_copy_fidelity(x.acos(), p.angles), 1e-12)
        .map_err(|e| e.to_string())?;
    let sim = quadrature::integrate(
        &|x: f64| 0.5 * clone_fidelity_sim(PureQubit::new(x.clamp(-1.0, 1.0).acos(), 0.9), p.angles, 1).unwrap(),
        -1.0,
        1.0,
        1e-12,
    )
    .map_err(|e| e.to_string())?;
    let trace = choi_fidelity(&choi_from_params(p.angles), &build_merit(&d).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure((closed - 5.0 / 6.0).abs() <= 1e-10, || format!("F = {closed}"))?;
    let paths = [closed, quad, sim, trace];
    let spread = paths.iter().cloned().fold(f64::MIN, f64::max) - paths.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread <= 1e-9, || format!("paths disagree: {paths:?}"))?;
    Ok(format!("F = {closed:.15}, four-path spread {spread:.1e}"))
}

fn pcc_threshold() -> Outcome {
    let k = kappa_star();
    ensure((k - 0.3305).abs() <= 5e-4, || format!("κ* = {k}"))?;
    Ok(format!("κ* = {k:.7}"))
}

fn equatorial_pcc() -> Outcome {
    let m = AxisDistribution::delta(FRAC_PI_2).unwrap().moments().map_err(|e| e.to_string())?;
    let p = optimal_angles(m).map_err(|e| e.to_string())?;
    ensure((p.angles.plus - FRAC_PI_4).abs() <= 1e-10 && (p.angles.minus - FRAC_PI_4).abs() <= 1e-10, || {
        format!("angles {:?}", p.angles)
    })?;
    let f = average_fidelity(m, p.angles);
    let (theta, kappa) = (FRAC_PI_2, PI);
    let table = (5.0 + SQRT_2 + 2.0 * (theta + kappa).cos() - (SQRT_2 - 1.0) * (2.0 * theta).cos()) / 8.0;
    let exact = (4.0 + 2.0 * SQRT_2) / 8.0;
    ensure((f - exact).abs() <= 1e-9 && (f - table).abs() <= 1e-9, || format!("F = {f}, table {table}"))?;
    Ok(format!("F = {f:.12}"))
}

fn mpcc_reduction() -> Outcome {
    let mut worst: f64 = 0.0;
    for theta in [PI / 6.0, PI / 3.0, 1.2] {
        let m = AxisDistribution::delta_pair(theta).unwrap().moments().map_err(|e| e.to_string())?;
        let p = optimal_angles(m).map_err(|e| e.to_string())?;
        ensure((p.angles.plus - p.angles.minus).abs() <= 1e-10, || format!("ϑ={theta}: {:?}", p.angles))?;
        let (l, lb) = (p.angles.plus.cos(), p.angles.plus.sin());
        let table = (1.0 + l * l) / 2.0 - 0.5 * theta.sin().powi(2) * (l * l - l * lb * SQRT_2);
        let f = average_fidelity(m, p.angles);
        ensure((f - table).abs() <= 1e-9, || format!("ϑ={theta}: F = {f}, table {table}"))?;
        worst = worst.max((f - table).abs());
    }
    Ok(format!("max |F − table| = {worst:.1e}"))
}

fn fig2_shape() -> Outcome {
    let base = DistSpec::parse("vmf:kappa=0").unwrap();
    let sweep = SweepSpec::parse("kappa=0:3:301").unwrap();
    let mut rows = Vec::new();
    for k in sweep.values() {
        let d = sweep.apply(&base, k).unwrap().to_distribution().map_err(|e| e.to_string())?;
        let m = d.moments().map_err(|e| e.to_string())?;
        let p = optimal_angles(m).map_err(|e| e.to_string())?;
        rows.push((k, average_fidelity(m, p.angles), p.regime));
    }
    ensure((rows[0].1 - 5.0 / 6.0).abs() <= 1e-9, || format!("F(0) = {}", rows[0].1))?;
    for w in rows.windows(2) {
        ensure(w[1].1 >= w[0].1 - 1e-12, || format!("F decreases between κ={} and κ={}", w[0].0, w[1].0))?;
    }
    let ks = kappa_star();
    for &(k, _, r) in &rows {
        let want = if k < ks { Regime::Interior } else { Regime::PccUpper };
        ensure(r == want, || format!("κ={k}: regime {r:?}, κ*={ks}"))?;
    }
    let m = vmf_moments(0.2);
    let margin = f_opt(m) - best_pcc(m).2;
    ensure(margin > 1e-6, || format!("margin at κ=0.2 is {margin}"))?;
    Ok(format!("301 rows monotone, switch at κ*={ks:.5}, margin(0.2) = {margin:.3e}"))
}

fn fig3_shape() -> Outcome {
    let base = DistSpec::parse("brosseau:P=0,mu=0").unwrap();
    let sweep = SweepSpec::parse("P+mu=0:0.95:20").unwrap();
    let f_at = |spec: &DistSpec| -> Result<f64, String> {
        let d = spec.to_distribution().map_err(|e| e.to_string())?;
        Ok(f_opt(d.moments().map_err(|e| e.to_string())?))
    };
    let f0 = f_at(&sweep.apply(&base, sweep.values()[0]).unwrap())?;
    ensure((f0 - 5.0 / 6.0).abs() <= 1e-9, || format!("F(0) = {f0}"))?;
    let mut detail = Vec::new();
    for mu in [0.2, 0.5, 0.8] {
        let f = f_at(&sweep.apply(&base, mu).unwrap())?;
        // P → 1 concentrates the ensemble on the latitude cosθ = μ.
        let limit = f_opt(AxisDistribution::delta(f64::acos(mu)).unwrap().moments().unwrap());
        let near = f_at(&DistSpec::parse(&format!("brosseau:P=0.9999,mu={mu}")).unwrap())?;
        ensure(f <= limit + 1e-12 && f <= near + 1e-12, || format!("μ={mu}: F = {f}, limit {limit}, P≈1 {near}"))?;
        detail.push(format!("μ={mu}: {f:.4} ≤ {limit:.4}"));
    }
    Ok(detail.join(", "))
}

fn optimality() -> Outcome {
    let dists = [
        ("uniform", AxisDistribution::uniform()),
        ("vmf:kappa=0.2", AxisDistribution::vmf(0.2).unwrap()),
        ("vmf:kappa=1", AxisDistribution::vmf(1.0).unwrap()),
        ("brosseau:P=0.8,mu=0.5", AxisDistribution::brosseau(0.8, 0.5).unwrap()),
        ("deltapair:theta=π/3", AxisDistribution::delta_pair(PI / 3.0).unwrap()),
    ];
    let mut worst_s = f64::NEG_INFINITY;
    let mut worst_c = f64::NEG_INFINITY;
    for (label, d) in &dists {
        let r = certify(d, label, 10_000, 20_240_601).map_err(|e| e.to_string())?;
        ensure(!r.sampled_violation(), || format!("{label}: sampled {} > F_opt {}", r.max_sampled_f, r.f_opt))?;
        ensure(!r.structured_violation(), || {
            format!("{label}: structured {} > F_opt {}", r.max_structured_f, r.f_opt)
        })?;
        worst_s = worst_s.max(r.max_sampled_f - r.f_opt);
        worst_c = worst_c.max(r.max_structured_f - r.f_opt);
    }
    Ok(format!("max excess sampled {worst_s:.2e}, structured {worst_c:.2e}"))
}

fn circuit_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = CloningAngles::new(rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..FRAC_PI_2));
        let u = circuit_unitary(&build_circuit(a));
        let v = clone_isometry(a);
        for b in 0..2 {
            worst = worst.max((u.column(4 * b) - v.column(b)).norm());
        }
    }
    ensure(worst <= 1e-12, || format!("column error {worst:e}"))?;
    for t in [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
        let c = build_circuit(CloningAngles::new(t, t));
        let cry = c.gates.iter().find_map(|g| match g {
            Gate::CRy { phi, .. } => Some(*phi),
            _ => None,
        });
        ensure(cry == Some(0.0), || format!("CRy angle {cry:?} at α={t}"))?;
        let full = circuit_unitary(&c);
        let mpcc = circuit_unitary(&c.without_cry());
        for b in 0..2 {
            let d = (full.column(4 * b) - mpcc.column(4 * b)).norm();
            ensure(d <= 1e-12, || format!("MPCC reduction off by {d:e} at α={t}"))?;
        }
    }
    Ok(format!("max column error {worst:.1e}"))
}

fn simulation_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a = CloningAngles::new(rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..FRAC_PI_2));
        for i in 0..50 {
            let theta = PI * i as f64 / 49.0;
            let exact = single_copy_fidelity(theta, a);
            let f1 = clone_fidelity_sim(PureQubit::new(theta, 0.0), a, 1).unwrap();
            let f2 = clone_fidelity_sim(PureQubit::new(theta, 0.0), a, 2).unwrap();
            worst = worst.max((f1 - exact).abs()).max((f1 - f2).abs());
            for k in 1..8 {
                let fp = clone_fidelity_sim(PureQubit::new(theta, TAU * k as f64 / 8.0), a, 1).unwrap();
                worst = worst.max((fp - f1).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn moment_machinery() -> Outcome {
    let mut worst: f64 = 0.0;
    for kappa in [0.1, 0.5, 1.0, 5.0, 20.0] {
        let d = AxisDistribution::vmf(kappa).unwrap();
        let c = d.moments().map_err(|e| e.to_string())?;
        let q = d.moments_by_quadrature().map_err(|e| e.to_string())?;
        let e = (c.a1 - q.a1).abs().max((c.a2 - q.a2).abs());
        ensure(e <= 1e-8, || format!("κ={kappa}: closed {c:?} vs quadrature {q:?}"))?;
        worst = worst.max(e);
    }
    Ok(format!("max |closed − quadrature| = {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("UC reduction", uc_reduction),
        ("PCC threshold", pcc_threshold),
        ("equatorial PCC fidelity", equatorial_pcc),
        ("MPCC reduction", mpcc_reduction),
        ("vMF sweep shape", fig2_shape),
        ("Brosseau sweep shape", fig3_shape),
        ("optimality certification", optimality),
        ("circuit equivalence", circuit_equivalence),
        ("simulation consistency", simulation_consistency),
        ("moment machinery", moment_machinery),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
