//! Gate-level circuits and their dense simulation.
//!
//! Qubit 0 is the least significant bit of a basis index. Gates are listed in
//! time order, so the circuit's matrix is `G_n ⋯ G_2·G_1`.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{cis, norm3, Mat, Mat2};
use crate::su2param::project_su2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// `σx(target)^{n(control)}`.
    Cnot { control: usize, target: usize },
    /// `e^{i·angle·(σ⃗·axis)}` on `target`.
    Rotn { axis: [f64; 3], angle: f64, target: usize },
    /// Global `e^{i·angle}`.
    Phase { angle: f64 },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub nb: usize,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Nr,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompileStats {
    pub cnot_count: usize,
    pub rotation_count: usize,
    pub reconstruction_error: f64,
    pub mode: Mode,
}

pub const MAX_SIM_QUBITS: usize = 10;

impl Circuit {
    pub fn new(nb: usize) -> Circuit {
        Circuit { nb, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Rotn { .. })).count()
    }

    /// Checks qubit indices and axis normalization.
    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            match *g {
                Gate::Cnot { control, target } => {
                    if control >= self.nb || control == target {
                        return Err(Error::BadQubit(control));
                    }
                    if target >= self.nb {
                        return Err(Error::BadQubit(target));
                    }
                }
                Gate::Rotn { axis, target, .. } => {
                    if target >= self.nb {
                        return Err(Error::BadQubit(target));
                    }
                    if (norm3(axis) - 1.0).abs() > 1e-12 {
                        return Err(Error::ShapeMismatch);
                    }
                }
                Gate::Phase { .. } => {}
            }
        }
        Ok(())
    }

    /// Appends `u` on `target` as a rotation, folding its determinant phase
    /// into `phase`.
    pub fn push_u2(&mut self, u: &Mat2, target: usize, phase: &mut f64) {
        let (eta, axis, angle) = rotation_of(u);
        *phase += eta;
        self.push(Gate::Rotn { axis, angle, target });
    }
}

/// `(η, n̂, a)` with `u = e^{iη}·e^{i·a·(σ⃗·n̂)}`, `a ∈ [0, π]`.
pub fn rotation_of(u: &Mat2) -> (f64, [f64; 3], f64) {
    let (eta, v) = project_su2(u);
    let (x, y) = (v.0[0], v.0[1]);
    let s = [y.im, y.re, x.im];
    let sn = norm3(s);
    let angle = sn.atan2(x.re);
    if sn < 1e-300 {
        return (eta, [0.0, 0.0, 1.0], angle);
    }
    (eta, [s[0] / sn, s[1] / sn, s[2] / sn], angle)
}

/// 2×2 matrix of a single-qubit gate.
pub fn rotation_matrix(axis: [f64; 3], angle: f64) -> Mat2 {
    Mat2::exp_i_sigma([axis[0] * angle, axis[1] * angle, axis[2] * angle])
}

/// Left-multiplies `m` by `u` acting on qubit `t`.
pub fn apply_1q(m: &mut Mat, u: &Mat2, t: usize) {
    let bit = 1usize << t;
    let cols = m.cols();
    let [a, b, c, d] = u.0;
    for i0 in (0..m.rows()).filter(|i| i & bit == 0) {
        let i1 = i0 | bit;
        for col in 0..cols {
            let (x0, x1) = (m[(i0, col)], m[(i1, col)]);
            m[(i0, col)] = a * x0 + b * x1;
            m[(i1, col)] = c * x0 + d * x1;
        }
    }
}

/// Left-multiplies `m` by a CNOT.
pub fn apply_cnot(m: &mut Mat, control: usize, target: usize) {
    let (cb, tb) = (1usize << control, 1usize << target);
    let cols = m.cols();
    for i0 in (0..m.rows()).filter(|i| i & cb != 0 && i & tb == 0) {
        let i1 = i0 | tb;
        for col in 0..cols {
            let t = m[(i0, col)];
            m[(i0, col)] = m[(i1, col)];
            m[(i1, col)] = t;
        }
    }
}

/// Left-multiplies `m` by one gate.
pub fn apply_gate(m: &mut Mat, g: &Gate) {
    match *g {
        Gate::Cnot { control, target } => apply_cnot(m, control, target),
        Gate::Rotn { axis, angle, target } => apply_1q(m, &rotation_matrix(axis, angle), target),
        Gate::Phase { angle } => *m = m.scale(cis(angle)),
    }
}

/// Dense unitary of the circuit.
pub fn simulate(c: &Circuit) -> Result<Mat> {
    if c.nb > MAX_SIM_QUBITS {
        return Err(Error::QubitCount(c.nb));
    }
    c.validate()?;
    let mut m = Mat::identity(1 << c.nb);
    for g in &c.gates {
        apply_gate(&mut m, g);
    }
    Ok(m)
}

pub fn cnot_count(c: &Circuit) -> usize {
    c.cnot_count()
}

/// Stats for `circuit` measured against `target`.
pub fn stats(circuit: &Circuit, target: &Mat, mode: Mode) -> Result<CompileStats> {
    let sim = simulate(circuit)?;
    Ok(CompileStats {
        cnot_count: circuit.cnot_count(),
        rotation_count: circuit.rotation_count(),
        reconstruction_error: sim.dist(target),
        mode,
    })
}
