//! Exact state-vector simulation of the cloner on three qubits.
//!
//! Qubit order is (clone 1, clone 2, ancilla). In the axis frame `|ψ⟩ = |0⟩`
//! and `|ψ̄⟩ = |1⟩`, and the isometry maps
//!
//! ```text
//! |0⟩ → cos α₊ |00⟩|1⟩ + sin α₊ |Ψ₊⟩|0⟩
//! |1⟩ → cos α₋ |11⟩|0⟩ + sin α₋ |Ψ₊⟩|1⟩
//! ```
//!
//! with `|Ψ₊⟩ = (|01⟩ + |10⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, SMatrix, Vector2};

use crate::error::{Error, Result};
use crate::linalg::{self, kron3, ket3, re, Mat2, Mat8, Vec8, C64};
use crate::optimal::CloningAngles;

/// 8×2 matrix whose columns are the images of `|0⟩` and `|1⟩`.
pub type Isometry = SMatrix<C64, 8, 2>;

/// A pure qubit `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    pub theta: f64,
    pub phi: f64,
}

impl PureQubit {
    pub fn new(theta: f64, phi: f64) -> Self {
        PureQubit { theta, phi }
    }

    pub fn amplitudes(&self) -> Vector2<C64> {
        let (s, c) = (0.5 * self.theta).sin_cos();
        Vector2::new(re(c), C64::from_polar(s, self.phi))
    }

    /// Bloch angles of a (not necessarily normalized) amplitude pair; the
    /// global phase is discarded.
    pub fn from_amplitudes(v: &Vector2<C64>) -> Self {
        let (a, b) = (v[0], v[1]);
        let theta = 2.0 * b.norm().atan2(a.norm());
        let phi = if b.norm() == 0.0 { 0.0 } else { (b.arg() - a.arg()).rem_euclid(std::f64::consts::TAU) };
        PureQubit { theta, phi }
    }
}

/// Orientation of the symmetry axis `|ψ⟩` in the global basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AxisFrame {
    pub vartheta: f64,
    pub varphi: f64,
}

impl AxisFrame {
    pub fn new(vartheta: f64, varphi: f64) -> Self {
        AxisFrame { vartheta, varphi }
    }

    /// Unitary whose columns are `|ψ⟩` and `|ψ̄⟩` in global coordinates.
    pub fn basis_change(&self) -> Mat2 {
        let (s, c) = (0.5 * self.vartheta).sin_cos();
        let e = C64::from_polar(1.0, self.varphi);
        Mat2::new(re(c), -e.conj() * s, e * s, re(c))
    }

    /// Re-expresses a global-basis state in this frame.
    pub fn to_local(&self, q: PureQubit) -> PureQubit {
        PureQubit::from_amplitudes(&(self.basis_change().adjoint() * q.amplitudes()))
    }

    /// Inverse of [`to_local`](Self::to_local).
    pub fn to_global(&self, q: PureQubit) -> PureQubit {
        PureQubit::from_amplitudes(&(self.basis_change() * q.amplitudes()))
    }

    /// `U ⊗ U ⊗ U` for the basis change `U`.
    pub fn three_qubit_change(&self) -> Mat8 {
        let u = self.basis_change();
        kron3(&u, &u, &u)
    }
}

/// Re-expresses a global-basis qubit in the axis frame `f`.
pub fn rotate_frame(q_global: PureQubit, f: AxisFrame) -> PureQubit {
    f.to_local(q_global)
}

/// Three-qubit pure state in (clone 1, clone 2, ancilla) order.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeQubitState(pub Vec8);

impl ThreeQubitState {
    pub fn amplitudes(&self) -> &Vec8 {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix(linalg::to_dynamic(&(self.0 * self.0.adjoint())))
    }

    /// `min_φ ‖e^{iφ}·self − other‖`.
    pub fn distance_up_to_phase(&self, other: &ThreeQubitState) -> f64 {
        let overlap = self.0.dotc(&other.0);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { linalg::ONE };
        (self.0 * phase - other.0).norm()
    }
}

/// Density matrix of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(pub DMatrix<C64>);

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.0)[0]
    }

    /// Hermitian, unit trace and positive semidefinite to the given tolerances.
    pub fn is_valid(&self) -> bool {
        linalg::hermitian_deviation(&self.0) <= 1e-12
            && (self.trace() - linalg::ONE).norm() <= 1e-12
            && self.min_eigenvalue() >= -1e-10
    }

    /// `⟨ψ|ρ|ψ⟩` for a single-qubit density matrix.
    pub fn expectation(&self, q: PureQubit) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::Domain(format!("expected a qubit density matrix, got dim {}", self.dim())));
        }
        let v = q.amplitudes();
        let v = DMatrix::from_column_slice(2, 1, v.as_slice());
        Ok((v.adjoint() * &self.0 * v)[(0, 0)].re)
    }
}

/// The cloning isometry for the given angles.
pub fn clone_isometry(a: CloningAngles) -> Isometry {
    let (sp, cp) = a.plus.sin_cos();
    let (sm, cm) = a.minus.sin_cos();
    let h = FRAC_1_SQRT_2;
    let col0 = ket3(0, 0, 1) * re(cp) + (ket3(0, 1, 0) + ket3(1, 0, 0)) * re(sp * h);
    let col1 = ket3(1, 1, 0) * re(cm) + (ket3(0, 1, 1) + ket3(1, 0, 1)) * re(sm * h);
    Isometry::from_columns(&[col0, col1])
}

/// Output of the cloner for the input `q` (axis-frame angles).
pub fn apply_clone(q: PureQubit, a: CloningAngles) -> ThreeQubitState {
    ThreeQubitState(clone_isometry(a) * q.amplitudes())
}

/// Cloner acting in the global basis: input and all outputs expressed in
/// global coordinates, with the ancilla rotated along with the clones.
pub fn clone_in_frame(q_global: PureQubit, frame: AxisFrame, a: CloningAngles) -> ThreeQubitState {
    let u = frame.basis_change();
    let local = u.adjoint() * q_global.amplitudes();
    ThreeQubitState(frame.three_qubit_change() * (clone_isometry(a) * local))
}

/// Partial trace of a three-qubit density matrix onto the qubits in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if rho.dim() != 8 {
        return Err(Error::Domain(format!("expected an 8×8 density matrix, got {}", rho.dim())));
    }
    if keep.is_empty() || keep.len() >= 3 || keep.iter().any(|q| !(1..=3).contains(q)) {
        return Err(Error::Domain(format!("keep set {keep:?} must be a non-empty proper subset of {{1,2,3}}")));
    }
    let m = Mat8::from_fn(|i, j| rho.0[(i, j)]);
    Ok(DensityMatrix(linalg::partial_trace3(&m, keep)))
}

fn check_clone_index(i: usize) -> Result<()> {
    if i == 1 || i == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("clone index must be 1 or 2, got {i}")))
    }
}

/// Reduced state of clone `i` obtained by simulation.
pub fn clone_density(q: PureQubit, a: CloningAngles, i: usize) -> Result<DensityMatrix> {
    check_clone_index(i)?;
    partial_trace(&apply_clone(q, a).density(), &[i])
}

/// Reduced state of either clone from its symbolic expression.
pub fn clone_density_closed_form(q: PureQubit, a: CloningAngles) -> DensityMatrix {
    let c2 = (0.5 * q.theta).cos().powi(2);
    let s2 = (0.5 * q.theta).sin().powi(2);
    let cp2 = a.plus.cos().powi(2);
    let cm2 = a.minus.cos().powi(2);
    let d00 = 0.5 * ((1.0 + cp2) * c2 + (1.0 - cm2) * s2);
    let d11 = 0.5 * ((1.0 + cm2) * s2 + (1.0 - cp2) * c2);
    let off = C64::from_polar(0.5 * FRAC_1_SQRT_2 * q.theta.sin() * a.sum().sin(), -q.phi);
    DensityMatrix(DMatrix::from_row_slice(2, 2, &[re(d00), off, off.conj(), re(d11)]))
}

/// Fidelity `⟨ψ|ρᵢ|ψ⟩` of clone `i` computed from the simulated output.
pub fn clone_fidelity_sim(q: PureQubit, a: CloningAngles, i: usize) -> Result<f64> {
    clone_density(q, a, i)?.expectation(q)
}
