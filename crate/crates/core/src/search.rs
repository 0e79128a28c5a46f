//! Derivative-free local search.

/// Stopping rules for [`nelder_mead_max`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub initial_step: f64,
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_evals: usize,
    /// Restarts from the incumbent with a fresh simplex.
    pub restarts: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { initial_step: 0.4, f_tol: 1e-15, x_tol: 1e-10, max_evals: 40_000, restarts: 12 }
    }
}

/// Maximizes `f` from `x0` with restarted Nelder–Mead. Returns the best
/// point and value seen.
pub fn nelder_mead_max<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: SearchOptions) -> (Vec<f64>, f64) {
    let mut best_x = x0.to_vec();
    let mut best_f = f(x0);
    let mut step = opts.initial_step;
    for _ in 0..=opts.restarts {
        let (x, v) = run(&f, &best_x, step, &opts);
        let gain = v - best_f;
        if v > best_f {
            best_x = x;
            best_f = v;
        }
        if gain <= opts.f_tol {
            break;
        }
        step = (step * 0.5).max(1e-4);
    }
    (best_x, best_f)
}

fn run<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], step: f64, opts: &SearchOptions) -> (Vec<f64>, f64) {
    let n = x0.len();
    // Minimize the negated objective.
    let g = |x: &[f64]| -f(x);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), g(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = g(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && size <= opts.x_tol {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = along(-1.0);
        let fr = g(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = g(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(-0.5);
                let fc = g(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = g(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = g(x);
                }
                evals += n;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, -v)
}
