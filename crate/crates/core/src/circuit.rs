//! Gate-level realization of the cloning isometry.
//!
//! Qubits are numbered 1..=3 (input, second clone, ancilla), with qubit 1
//! the most significant bit of the basis index. The input sits on qubit 1
//! and qubits 2 and 3 start in `|0⟩`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::Serialize;

use crate::linalg::{re, Mat2, Mat8, Vec8, ONE, ZERO};
use crate::optimal::CloningAngles;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Rotation about y by `omega` on `target`.
    Ry { omega: f64, target: usize },
    /// y rotation by `phi` on `target`, conditioned on `control` being `|1⟩`.
    CRy { phi: f64, control: usize, target: usize },
    Cnot { control: usize, target: usize },
    /// Controlled Hadamard.
    Ch { control: usize, target: usize },
    /// The real involution with `A·X·A = H`.
    A { target: usize },
    X { target: usize },
}

/// Serializable form of a gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateRecord {
    pub kind: &'static str,
    pub params: Vec<f64>,
    pub control: Option<usize>,
    pub target: usize,
}

impl Gate {
    pub fn target(&self) -> usize {
        match *self {
            Gate::Ry { target, .. }
            | Gate::CRy { target, .. }
            | Gate::Cnot { target, .. }
            | Gate::Ch { target, .. }
            | Gate::A { target }
            | Gate::X { target } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::CRy { control, .. } | Gate::Cnot { control, .. } | Gate::Ch { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn record(&self) -> GateRecord {
        let (kind, params) = match *self {
            Gate::Ry { omega, .. } => ("Ry", vec![omega]),
            Gate::CRy { phi, .. } => ("CRy", vec![phi]),
            Gate::Cnot { .. } => ("CNOT", vec![]),
            Gate::Ch { .. } => ("CH", vec![]),
            Gate::A { .. } => ("A", vec![]),
            Gate::X { .. } => ("X", vec![]),
        };
        GateRecord { kind, params, control: self.control(), target: self.target() }
    }
}

pub fn ry(omega: f64) -> Mat2 {
    let (s, c) = (0.5 * omega).sin_cos();
    Mat2::new(re(c), re(-s), re(s), re(c))
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn hadamard() -> Mat2 {
    let h = re(FRAC_1_SQRT_2);
    Mat2::new(h, h, h, -h)
}

pub fn a_matrix() -> Mat2 {
    let n = 1.0 / (4.0 + 2.0 * SQRT_2).sqrt();
    let b = re((1.0 + SQRT_2) * n);
    Mat2::new(re(n), b, b, re(-n))
}

/// `op` on `target`, identity elsewhere.
pub fn embed(op: &Mat2, target: usize) -> Mat8 {
    embed_controlled(op, None, target)
}

/// `op` on `target` when `control` (if any) is `|1⟩`.
pub fn embed_controlled(op: &Mat2, control: Option<usize>, target: usize) -> Mat8 {
    assert!((1..=3).contains(&target), "qubit indices are 1..=3");
    if let Some(c) = control {
        assert!((1..=3).contains(&c) && c != target, "bad control qubit {c}");
    }
    let tshift = 3 - target;
    Mat8::from_fn(|r, col| {
        let active = control.is_none_or(|c| (col >> (3 - c)) & 1 == 1);
        if (r & !(1 << tshift)) != (col & !(1 << tshift)) {
            return ZERO;
        }
        if active {
            op[((r >> tshift) & 1, (col >> tshift) & 1)]
        } else if r == col {
            ONE
        } else {
            ZERO
        }
    })
}

/// Controlled Hadamard built directly.
pub fn ch_direct(control: usize, target: usize) -> Mat8 {
    embed_controlled(&hadamard(), Some(control), target)
}

pub fn gate_matrix(g: &Gate) -> Mat8 {
    match *g {
        Gate::Ry { omega, target } => embed(&ry(omega), target),
        Gate::CRy { phi, control, target } => embed_controlled(&ry(phi), Some(control), target),
        Gate::Cnot { control, target } => embed_controlled(&pauli_x(), Some(control), target),
        Gate::Ch { control, target } => {
            let a = embed(&a_matrix(), target);
            a * embed_controlled(&pauli_x(), Some(control), target) * a
        }
        Gate::A { target } => embed(&a_matrix(), target),
        Gate::X { target } => embed(&pauli_x(), target),
    }
}

/// Gates in application order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn records(&self) -> Vec<GateRecord> {
        self.gates.iter().map(Gate::record).collect()
    }

    pub fn without_cry(&self) -> Circuit {
        Circuit { gates: self.gates.iter().copied().filter(|g| !matches!(g, Gate::CRy { .. })).collect() }
    }
}

/// The cloning circuit. The six-gate core leaves the ancilla flipped
/// relative to the isometry's convention; a final X on qubit 3 undoes that.
pub fn build_circuit(a: CloningAngles) -> Circuit {
    Circuit {
        gates: vec![
            Gate::CRy { phi: 2.0 * (a.minus - a.plus), control: 1, target: 3 },
            Gate::Ry { omega: 2.0 * a.plus, target: 3 },
            Gate::Ch { control: 3, target: 2 },
            Gate::Cnot { control: 1, target: 3 },
            Gate::Cnot { control: 2, target: 1 },
            Gate::Cnot { control: 3, target: 2 },
            Gate::X { target: 3 },
        ],
    }
}

pub fn circuit_unitary(c: &Circuit) -> Mat8 {
    c.gates.iter().fold(Mat8::identity(), |u, g| gate_matrix(g) * u)
}

/// Runs the circuit on `|b⟩|00⟩`.
pub fn run_on_basis(c: &Circuit, b: usize) -> Vec8 {
    circuit_unitary(c).column(4 * b).into_owned()
}
