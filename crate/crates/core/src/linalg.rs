//! Small dense complex matrices for three-qubit work.
//!
//! Basis index convention for three qubits: `q1·4 + q2·2 + q3`, so qubit 1
//! is the most significant bit.

use nalgebra::{DMatrix, SMatrix, SVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = SMatrix<C64, 2, 2>;
pub type Mat8 = SMatrix<C64, 8, 8>;
pub type Vec8 = SVector<C64, 8>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn kron2(a: &Mat2, b: &Mat2) -> SMatrix<C64, 4, 4> {
    let mut out = SMatrix::<C64, 4, 4>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron3(a: &Mat2, b: &Mat2, c: &Mat2) -> Mat8 {
    let ab = kron2(a, b);
    let mut out = Mat8::zeros();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = ab[(i, j)] * c[(k, l)];
                }
            }
        }
    }
    out
}

/// Computational basis vector `|b1 b2 b3⟩`.
pub fn ket3(b1: usize, b2: usize, b3: usize) -> Vec8 {
    let mut v = Vec8::zeros();
    v[4 * b1 + 2 * b2 + b3] = ONE;
    v
}

/// Bit of `qubit` (1-based, 1 = most significant) in basis index `idx`.
#[inline]
pub fn bit(idx: usize, qubit: usize) -> usize {
    (idx >> (3 - qubit)) & 1
}

/// Partial trace of a three-qubit operator keeping the listed qubits
/// (1-based, any order; the result uses ascending qubit order).
pub fn partial_trace3(rho: &Mat8, keep: &[usize]) -> DMatrix<C64> {
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    assert!(kept.iter().all(|&q| (1..=3).contains(&q)), "qubit indices are 1..=3");
    let traced: Vec<usize> = (1..=3).filter(|q| !kept.contains(q)).collect();
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let compose = |k: usize, t: usize| -> usize {
        let mut idx = 0;
        for (pos, &q) in kept.iter().enumerate() {
            let b = (k >> (kept.len() - 1 - pos)) & 1;
            idx |= b << (3 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let b = (t >> (traced.len() - 1 - pos)) & 1;
            idx |= b << (3 - q);
        }
        idx
    };
    DMatrix::from_fn(dk, dk, |i, j| (0..dt).map(|t| rho[(compose(i, t), compose(j, t))]).sum())
}

/// Largest entry of `|M − M†|`.
pub fn hermitian_deviation<R: nalgebra::Dim, S: nalgebra::storage::Storage<C64, R, R>>(
    m: &nalgebra::Matrix<C64, R, R, S>,
) -> f64 {
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * re(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn to_dynamic<const N: usize>(m: &SMatrix<C64, N, N>) -> DMatrix<C64> {
    DMatrix::from_fn(N, N, |i, j| m[(i, j)])
}

pub fn frobenius<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
