//! Choi-matrix picture of 1→2 qubit cloning maps.
//!
//! A map is represented by its 8×8 Choi matrix `χ` on (input, clone 1,
//! clone 2), with `ρ_out = Tr_in(χ (ρ_inᵀ ⊗ 1 ⊗ 1))`. The ensemble-average
//! single-copy fidelity is `Tr(χR)` for the merit operator
//! `R = ½ E[ρᵀ ⊗ (ρ ⊗ 1 + 1 ⊗ ρ)]`.
//!
//! Optimality of the analytical cloner is certified numerically, by sampling
//! random channels and by maximizing over the symmetry-restricted family of
//! Choi matrices.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::{DMatrix, Matrix2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::AxisDistribution;
use crate::error::{Error, Result};
use crate::linalg::{self, kron3, re, Mat2, Mat8, C64, ONE};
use crate::optimal::{average_fidelity, optimal_angles, CloningAngles};
use crate::qsim::clone_isometry;
use crate::quadrature::{self, DEFAULT_TOL};
use crate::search::{nelder_mead_max, SearchOptions};

/// Number of azimuthal nodes in the merit-operator quadrature.
pub const PHI_NODES: usize = 16;
/// Eigenvalue floor used for positivity checks.
pub const PSD_FLOOR: f64 = -1e-10;

/// Choi matrix of a 1→2 qubit map on (input, clone 1, clone 2).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix(pub Mat8);

impl ChoiMatrix {
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&linalg::to_dynamic(&self.0))[0]
    }

    pub fn rank(&self, tol: f64) -> usize {
        linalg::hermitian_eigenvalues(&linalg::to_dynamic(&self.0))
            .iter()
            .filter(|&&e| e > tol)
            .count()
    }

    /// `Tr_clones χ`, which equals the identity for trace-preserving maps.
    pub fn input_marginal(&self) -> Mat2 {
        let m = linalg::partial_trace3(&self.0, &[1]);
        Mat2::from_fn(|i, j| m[(i, j)])
    }

    /// Positive semidefinite and trace preserving to `1e-10`.
    pub fn is_cptp(&self) -> bool {
        linalg::hermitian_deviation(&self.0) <= 1e-10
            && self.min_eigenvalue() >= PSD_FLOOR
            && (self.input_marginal() - Mat2::identity()).iter().all(|z| z.norm() <= 1e-10)
    }

    /// Applies the map to a single-qubit input.
    pub fn apply(&self, rho_in: &Mat2) -> DMatrix<C64> {
        let op = self.0 * kron3(&rho_in.transpose(), &Mat2::identity(), &Mat2::identity());
        let mut out = DMatrix::zeros(4, 4);
        for a in 0..4 {
            for b in 0..4 {
                out[(a, b)] = (0..2).map(|i| op[(4 * i + a, 4 * i + b)]).sum();
            }
        }
        out
    }
}

/// The operator `R` with `F = Tr(χR)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeritOperator(pub Mat8);

impl MeritOperator {
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&linalg::to_dynamic(&self.0))
    }
}

/// Choi matrix of the channel `ρ ↦ Tr_env(VρV†)` for an isometry `V` whose
/// rows are indexed by `clones · env_dim + env`.
pub fn choi_from_isometry(v: &DMatrix<C64>, env_dim: usize) -> ChoiMatrix {
    assert_eq!(v.nrows(), 4 * env_dim, "isometry rows must be 4·env_dim");
    assert_eq!(v.ncols(), 2, "isometry must have a qubit input");
    ChoiMatrix(Mat8::from_fn(|r, c| {
        let (i, a) = (r / 4, r % 4);
        let (j, b) = (c / 4, c % 4);
        (0..env_dim).map(|e| v[(a * env_dim + e, i)] * v[(b * env_dim + e, j)].conj()).sum()
    }))
}

/// Choi matrix of the cloner, obtained by tracing the ancilla out of its isometry.
pub fn choi_of_isometry(a: CloningAngles) -> ChoiMatrix {
    let v = clone_isometry(a);
    choi_from_isometry(&DMatrix::from_fn(8, 2, |i, j| v[(i, j)]), 2)
}

/// The explicit Choi matrix of the optimal cloner with angles `a`.
pub fn choi_from_params(a: CloningAngles) -> ChoiMatrix {
    let (sp, cp) = a.plus.sin_cos();
    let (sm, cm) = a.minus.sin_cos();
    let z1 = sm * cp * FRAC_1_SQRT_2;
    let z2 = cm * sp * FRAC_1_SQRT_2;
    StructuredChoi {
        eta1: cp * cp,
        eta2: 0.5 * sp * sp,
        eta3: 0.5 * sp * sp,
        xi1: cm * cm,
        xi2: 0.5 * sm * sm,
        xi3: 0.5 * sm * sm,
        zeta1: z1,
        zeta2: z2,
    }
    .to_choi()
}

/// The eight free entries of a Choi matrix commuting with phase rotations
/// about the axis and with the clone swap, trace preservation imposed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructuredChoi {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub zeta1: f64,
    pub zeta2: f64,
}

impl StructuredChoi {
    pub fn eta4(&self) -> f64 {
        1.0 - 2.0 * self.eta2 - self.eta1
    }

    pub fn xi4(&self) -> f64 {
        1.0 - 2.0 * self.xi2 - self.xi1
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        let mut m = Mat8::zeros();
        let mut set = |i: usize, j: usize, v: f64| {
            m[(i, j)] = re(v);
            m[(j, i)] = re(v);
        };
        set(0, 0, self.eta1);
        set(0, 5, self.zeta1);
        set(0, 6, self.zeta1);
        set(1, 1, self.eta2);
        set(2, 2, self.eta2);
        set(1, 2, self.eta3);
        set(1, 7, self.zeta2);
        set(2, 7, self.zeta2);
        set(3, 3, self.eta4());
        set(4, 4, self.xi4());
        set(5, 5, self.xi2);
        set(6, 6, self.xi2);
        set(5, 6, self.xi3);
        set(7, 7, self.xi1);
        ChoiMatrix(m)
    }

    /// Maps eight unconstrained angles onto the positive, trace-preserving
    /// part of the family. Each input sector splits its unit budget over four
    /// non-negative diagonal weights via hyperspherical coordinates; the two
    /// coherences are bounded by the geometric mean of the diagonals they couple.
    pub fn from_angles(t: &[f64]) -> Self {
        let budget = |a: f64, b: f64, c: f64| {
            let (sa, ca) = a.sin_cos();
            let (sb, cb) = b.sin_cos();
            let (sc, cc) = c.sin_cos();
            [ca * ca, (sa * cb).powi(2), (sa * sb * cc).powi(2), (sa * sb * sc).powi(2)]
        };
        // [eta1, eta2 + eta3, eta2 - eta3, eta4]
        let e = budget(t[0], t[1], t[2]);
        // [xi1, xi2 + xi3, xi2 - xi3, xi4]
        let x = budget(t[3], t[4], t[5]);
        let zeta1 = t[6].sin() * (e[0] * x[1]).sqrt() * FRAC_1_SQRT_2;
        let zeta2 = t[7].sin() * (x[0] * e[1]).sqrt() * FRAC_1_SQRT_2;
        StructuredChoi {
            eta1: e[0],
            eta2: 0.5 * (e[1] + e[2]),
            eta3: 0.5 * (e[1] - e[2]),
            xi1: x[0],
            xi2: 0.5 * (x[1] + x[2]),
            xi3: 0.5 * (x[1] - x[2]),
            zeta1,
            zeta2,
        }
    }
}

fn qubit_projector(x: f64, phi: f64) -> Mat2 {
    let c2 = 0.5 * (1.0 + x);
    let s2 = 0.5 * (1.0 - x);
    let cs = 0.5 * (1.0 - x * x).max(0.0).sqrt();
    let off = C64::from_polar(cs, -phi);
    Mat2::new(re(c2), off, off.conj(), re(s2))
}

/// `½ ρᵀ ⊗ (ρ ⊗ 1 + 1 ⊗ ρ)` averaged over the azimuth at `x = cosθ`.
pub fn merit_kernel(x: f64) -> Mat8 {
    let id = Mat2::identity();
    let mut acc = Mat8::zeros();
    for k in 0..PHI_NODES {
        let rho = qubit_projector(x, TAU * k as f64 / PHI_NODES as f64);
        let rt = rho.transpose();
        acc += kron3(&rt, &rho, &id) + kron3(&rt, &id, &rho);
    }
    acc * re(0.5 / PHI_NODES as f64)
}

/// Merit operator for `dist`, by adaptive quadrature in `cosθ` (or a sum over
/// atoms for the delta kinds).
pub fn build_merit(dist: &AxisDistribution) -> Result<MeritOperator> {
    if let Some(atoms) = dist.atoms() {
        let mut r = Mat8::zeros();
        for (x, w) in atoms {
            r += merit_kernel(x) * re(w);
        }
        return Ok(MeritOperator(r));
    }
    let f = |x: f64| merit_kernel(x) * re(dist.marginal_density(x).unwrap_or(0.0));
    let r: Mat8 = quadrature::integrate_pieces(&f, &dist.breakpoints(), DEFAULT_TOL)?;
    // Symmetrize away rounding.
    Ok(MeritOperator((r + r.adjoint()) * re(0.5)))
}

/// `Tr(χR)`.
pub fn choi_fidelity(chi: &ChoiMatrix, r: &MeritOperator) -> Result<f64> {
    for dev in [linalg::hermitian_deviation(&chi.0), linalg::hermitian_deviation(&r.0)] {
        if dev > 1e-10 {
            return Err(Error::NonHermitian(dev));
        }
    }
    let t = (chi.0 * r.0).trace();
    if t.im.abs() > 1e-12 {
        return Err(Error::NonHermitian(t.im.abs()));
    }
    Ok(t.re)
}

fn fidelity_real(chi: &Mat8, r: &Mat8) -> f64 {
    let mut t = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            t += (chi[(i, j)] * r[(j, i)]).re;
        }
    }
    t
}

/// Haar-random isometry from a qubit into `dim` dimensions: QR of a complex
/// Gaussian matrix with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_isometry(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, 2, |_, _| {
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        C64::new(a, b) * FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..2 {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Choi matrix of a random channel: a Haar isometry into the two clones and
/// an environment of dimension `env_dim`, with the environment traced out.
pub fn random_cptp(seed: u64, env_dim: usize) -> Result<ChoiMatrix> {
    if !(1..=4).contains(&env_dim) {
        return Err(Error::InvalidParameter(format!("env_dim must be in 1..=4, got {env_dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_isometry(&mut rng, 4 * env_dim);
    Ok(choi_from_isometry(&v, env_dim))
}

/// An 8×8 operator in the symmetry-adapted basis
/// `{|000⟩, |1⟩|Ψ₊⟩, |111⟩, |0⟩|Ψ₊⟩, |1⟩|Ψ₋⟩, |0⟩|Ψ₋⟩, |011⟩, |100⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBlocks {
    /// Block on `{|000⟩, |1⟩|Ψ₊⟩}`.
    pub first: Matrix2<C64>,
    /// Block on `{|111⟩, |0⟩|Ψ₊⟩}`.
    pub second: Matrix2<C64>,
    /// Diagonal entries on `|1⟩|Ψ₋⟩, |0⟩|Ψ₋⟩, |011⟩, |100⟩`.
    pub scalars: [f64; 4],
    /// Frobenius norm of everything outside the block pattern.
    pub off_block: f64,
}

/// Unitary whose columns are the symmetry-adapted basis vectors.
pub fn symmetry_basis() -> Mat8 {
    let h = re(FRAC_1_SQRT_2);
    let e = |i: usize| {
        let mut v = linalg::Vec8::zeros();
        v[i] = ONE;
        v
    };
    let cols = [
        e(0),
        (e(5) + e(6)) * h,
        e(7),
        (e(1) + e(2)) * h,
        (e(5) - e(6)) * h,
        (e(1) - e(2)) * h,
        e(3),
        e(4),
    ];
    Mat8::from_columns(&cols)
}

pub fn symmetry_blocks(m: &Mat8) -> SymmetryBlocks {
    let b = symmetry_basis();
    let t = b.adjoint() * m * b;
    let in_block = |i: usize, j: usize| (i < 2 && j < 2) || ((2..4).contains(&i) && (2..4).contains(&j)) || (i == j);
    let mut off = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            if !in_block(i, j) {
                off += t[(i, j)].norm_sqr();
            }
        }
    }
    SymmetryBlocks {
        first: Matrix2::new(t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]),
        second: Matrix2::new(t[(2, 2)], t[(2, 3)], t[(3, 2)], t[(3, 3)]),
        scalars: [t[(4, 4)].re, t[(5, 5)].re, t[(6, 6)].re, t[(7, 7)].re],
        off_block: off.sqrt(),
    }
}

/// Result of the structured maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredOptimum {
    pub fidelity: f64,
    pub params: StructuredChoi,
    pub choi: ChoiMatrix,
}

/// Number of random starts in [`constrained_maximize`].
pub const STARTS: usize = 32;
const START_SEED: u64 = 0x5EED_C10E;

/// Maximizes `Tr(χR)` over the eight-parameter symmetric family by
/// multi-start Nelder–Mead.
pub fn constrained_maximize(r: &MeritOperator) -> StructuredOptimum {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let starts: Vec<Vec<f64>> = (0..STARTS)
        .map(|_| {
            (0..8)
                .map(|_| rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::PI))
                .collect()
        })
        .collect();
    let objective = |t: &[f64]| fidelity_real(&StructuredChoi::from_angles(t).to_choi().0, &r.0);
    let opts = SearchOptions::default();
    let (angles, _) = starts
        .par_iter()
        .map(|s| nelder_mead_max(objective, s, opts))
        .reduce_with(|a, b| if b.1 > a.1 { b } else { a })
        .expect("at least one start");
    let params = StructuredChoi::from_angles(&angles);
    let choi = params.to_choi();
    debug_assert!(choi.min_eigenvalue() >= PSD_FLOOR);
    let fidelity = fidelity_real(&choi.0, &r.0);
    StructuredOptimum { fidelity, params, choi }
}

/// Optimality report for one distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityReport {
    pub distribution: String,
    #[serde(rename = "F_opt")]
    pub f_opt: f64,
    #[serde(rename = "max_sampled_F")]
    pub max_sampled_f: f64,
    pub n_samples: usize,
    #[serde(rename = "max_structured_F")]
    pub max_structured_f: f64,
}

/// Environment dimensions used when sampling channels.
pub const ENV_DIMS: [usize; 3] = [1, 2, 4];
/// Sampled channels may exceed `F_opt` by at most this much.
pub const SAMPLED_TOL: f64 = 1e-9;
/// The structured maximum may exceed `F_opt` by at most this much.
pub const STRUCTURED_TOL: f64 = 1e-7;

impl OptimalityReport {
    pub fn sampled_violation(&self) -> bool {
        self.max_sampled_f > self.f_opt + SAMPLED_TOL
    }

    pub fn structured_violation(&self) -> bool {
        self.max_structured_f > self.f_opt + STRUCTURED_TOL
    }
}

/// Largest `Tr(χR)` over random channels with seeds `seed..seed+samples`,
/// each drawn at every environment dimension in [`ENV_DIMS`].
pub fn max_sampled_fidelity(r: &MeritOperator, samples: usize, seed: u64) -> f64 {
    (0..samples as u64)
        .into_par_iter()
        .flat_map_iter(|i| ENV_DIMS.iter().map(move |&d| (seed.wrapping_add(i), d)))
        .map(|(s, d)| {
            let chi = random_cptp(s, d).expect("env_dim from ENV_DIMS");
            fidelity_real(&chi.0, &r.0)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Compares the analytical optimum with sampled and structured maxima.
pub fn certify(dist: &AxisDistribution, label: &str, samples: usize, seed: u64) -> Result<OptimalityReport> {
    let m = dist.moments()?;
    let f_opt = average_fidelity(m, optimal_angles(m)?.angles);
    let r = build_merit(dist)?;
    Ok(OptimalityReport {
        distribution: label.to_string(),
        f_opt,
        max_sampled_f: max_sampled_fidelity(&r, samples, seed),
        n_samples: samples * ENV_DIMS.len(),
        max_structured_f: constrained_maximize(&r).fidelity,
    })
}
