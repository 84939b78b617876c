//! Uniformly controlled single-qubit gates and their expansion into CNOTs and
//! rotations.
//!
//! Control bit `j` of a member index `b` is the value of qubit `controls[j]`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{cis, Mat, Mat2, C64, I, ONE, ZERO};
use crate::su2param::{rotation_taking, Side, Triad};

/// Basis index with `target = tb` and control `j` set to bit `j` of `b`.
pub fn full_index(target: usize, controls: &[usize], b: usize, tb: usize) -> usize {
    let mut idx = tb << target;
    for (j, &q) in controls.iter().enumerate() {
        idx |= ((b >> j) & 1) << q;
    }
    idx
}

fn control_bits(controls: &[usize], idx: usize) -> usize {
    controls.iter().enumerate().fold(0, |b, (j, &q)| b | (((idx >> q) & 1) << j))
}

fn check_qubits(nb: usize, target: usize, controls: &[usize]) -> Result<()> {
    if target >= nb {
        return Err(Error::BadQubit(target));
    }
    for (j, &q) in controls.iter().enumerate() {
        if q >= nb || q == target || controls[..j].contains(&q) {
            return Err(Error::BadQubit(q));
        }
    }
    Ok(())
}

/// Dense operator `Σ_b P_b(controls) ⊗ U_b(target)` (identity on other qubits).
fn assemble(nb: usize, target: usize, controls: &[usize], member: impl Fn(usize) -> Mat2) -> Mat {
    let dim = 1usize << nb;
    let mut m = Mat::zeros(dim, dim);
    let tbit = 1usize << target;
    for col in 0..dim {
        let b = control_bits(controls, col);
        let u = member(b);
        let tb = (col >> target) & 1;
        let base = col & !tbit;
        m[(base, col)] = u.0[tb];
        m[(base | tbit, col)] = u.0[2 + tb];
    }
    m
}

/// Uniformly controlled 2×2 unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplexor {
    pub nb: usize,
    pub target: usize,
    pub controls: Vec<usize>,
    pub members: Vec<Mat2>,
}

impl Multiplexor {
    pub fn new(nb: usize, target: usize, controls: Vec<usize>, members: Vec<Mat2>) -> Result<Multiplexor> {
        check_qubits(nb, target, &controls)?;
        if members.len() != 1 << controls.len() {
            return Err(Error::BadLength(members.len()));
        }
        Ok(Multiplexor { nb, target, controls, members })
    }

    /// Target `t` with every other qubit as a control, ascending.
    pub fn spanning(nb: usize, target: usize, members: Vec<Mat2>) -> Result<Multiplexor> {
        let controls = (0..nb).filter(|&q| q != target).collect();
        Multiplexor::new(nb, target, controls, members)
    }

    pub fn nk(&self) -> usize {
        self.controls.len()
    }

    pub fn operator(&self) -> Mat {
        assemble(self.nb, self.target, &self.controls, |b| self.members[b])
    }
}

/// Diagonal unitary `diag(e^{i·phases})`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalUnitary {
    pub nb: usize,
    pub phases: Vec<f64>,
}

impl DiagonalUnitary {
    pub fn identity(nb: usize) -> DiagonalUnitary {
        DiagonalUnitary { nb, phases: vec![0.0; 1 << nb] }
    }

    pub fn new(nb: usize, phases: Vec<f64>) -> Result<DiagonalUnitary> {
        if phases.len() != 1 << nb {
            return Err(Error::BadLength(phases.len()));
        }
        Ok(DiagonalUnitary { nb, phases })
    }

    pub fn operator(&self) -> Mat {
        Mat::diag(&self.phases.iter().map(|&p| cis(p)).collect::<Vec<_>>())
    }

    /// `self · other`.
    pub fn compose(&self, other: &DiagonalUnitary) -> DiagonalUnitary {
        let phases = self.phases.iter().zip(&other.phases).map(|(a, b)| a + b).collect();
        DiagonalUnitary { nb: self.nb, phases }
    }

    pub fn inverse(&self) -> DiagonalUnitary {
        DiagonalUnitary { nb: self.nb, phases: self.phases.iter().map(|p| -p).collect() }
    }

    /// 2×2 block acting on `target` for control pattern `b`.
    pub fn block(&self, target: usize, controls: &[usize], b: usize) -> Mat2 {
        let p0 = self.phases[full_index(target, controls, b, 0)];
        let p1 = self.phases[full_index(target, controls, b, 1)];
        Mat2::diag(cis(p0), cis(p1))
    }

    /// `Σ 2(1 − cos Δ²φ)` over every qubit pair and every setting of the other
    /// qubits, where `Δ²φ = φ₀₀ − φ₀₁ − φ₁₀ + φ₁₁`. Zero exactly when the
    /// diagonal is a product of one-qubit phases, i.e. needs no CNOTs.
    pub fn entangling_deviation(&self) -> f64 {
        let mut total = 0.0;
        for q in 0..self.nb {
            for r in q + 1..self.nb {
                let (bq, br) = (1usize << q, 1usize << r);
                for i in (0..self.phases.len()).filter(|i| i & (bq | br) == 0) {
                    let p = &self.phases;
                    let d = p[i] - p[i | bq] - p[i | br] + p[i | bq | br];
                    total += 2.0 * (1.0 - d.cos());
                }
            }
        }
        total
    }

    /// Best product-of-one-qubit-phases fit: `(global, per-qubit)` with
    /// `phase(j) ≈ global + Σ_q bit_q(j)·per_qubit[q]`.
    pub fn local_fit(&self) -> (f64, Vec<f64>) {
        let p0 = self.phases[0];
        let per = (0..self.nb).map(|q| self.phases[1 << q] - p0).collect();
        (p0, per)
    }
}

/// `mux` with each member multiplied by the matching 2×2 block of `delta`.
pub fn multiply_by_diagonal(mux: &Multiplexor, delta: &DiagonalUnitary, side: Side) -> Result<Multiplexor> {
    if delta.nb != mux.nb {
        return Err(Error::ShapeMismatch);
    }
    // Off-mux qubits must see a constant diagonal, or the product is no multiplexor.
    let mask = (1usize << mux.target) | mux.controls.iter().fold(0, |m, q| m | (1 << q));
    for (i, p) in delta.phases.iter().enumerate() {
        let base = i & mask;
        if (cis(*p) - cis(delta.phases[base])).norm() > 1e-12 {
            return Err(Error::ShapeMismatch);
        }
    }
    let members = mux
        .members
        .iter()
        .enumerate()
        .map(|(b, u)| {
            let d = delta.block(mux.target, &mux.controls, b);
            match side {
                Side::Dol => d * *u,
                Side::Dor => *u * d,
            }
        })
        .collect();
    Ok(Multiplexor { members, ..mux.clone() })
}

/// Scaled Walsh-Hadamard transform `θ_c = 2^{−nk}·Σ_b (−1)^{b·c} φ_b`.
pub fn hadamard_transform_angles(phi: &[f64]) -> Result<Vec<f64>> {
    let n = phi.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::BadLength(n));
    }
    let mut v = phi.to_vec();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let s = 1.0 / n as f64;
    Ok(v.into_iter().map(|x| x * s).collect())
}

/// Reflected Gray sequence over `nk` bits and, for each step `i`, the bit that
/// differs between `order[i]` and `order[i + 1]` (cyclically).
pub fn gray_order(nk: usize) -> (Vec<usize>, Vec<usize>) {
    let m = 1usize << nk;
    let order: Vec<usize> = (0..m).map(|i| i ^ (i >> 1)).collect();
    let flips = (0..m).map(|i| (order[i] ^ order[(i + 1) % m]).trailing_zeros() as usize).collect();
    (order, flips)
}

/// Multiplexor with members `e^{iΦ_b}(iσw)^{f(b)}`, `Φ_b = φ1_b σ_{s1} + φ2_b σ_{s2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneMultiplexor {
    pub nb: usize,
    pub target: usize,
    pub controls: Vec<usize>,
    pub triad: Triad,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub flags: Vec<bool>,
}

impl PlaneMultiplexor {
    pub fn new(nb: usize, target: usize, controls: Vec<usize>, triad: Triad, phi1: Vec<f64>, phi2: Vec<f64>) -> Result<Self> {
        check_qubits(nb, target, &controls)?;
        let m = 1usize << controls.len();
        if phi1.len() != m || phi2.len() != m {
            return Err(Error::BadLength(phi1.len()));
        }
        Ok(PlaneMultiplexor { nb, target, controls, triad, phi1, phi2, flags: vec![false; m] })
    }

    pub fn member(&self, b: usize) -> Mat2 {
        let t = &self.triad;
        let v: [f64; 3] = core::array::from_fn(|i| self.phi1[b] * t.s1[i] + self.phi2[b] * t.s2[i]);
        let e = Mat2::exp_i_sigma(v);
        if self.flags[b] {
            e * Mat2::sigma(t.w).scale(I)
        } else {
            e
        }
    }

    pub fn members(&self) -> Vec<Mat2> {
        (0..self.phi1.len()).map(|b| self.member(b)).collect()
    }

    pub fn operator(&self) -> Mat {
        assemble(self.nb, self.target, &self.controls, |b| self.member(b))
    }

    /// Common rotation axis `n̂ ⊥ ŵ` and signed angles `a_b` with
    /// `Φ_b = a_b σ_n`, if every `Φ_b` lies on one line.
    fn line(&self) -> Result<([f64; 3], Vec<f64>)> {
        let m = self.phi1.len();
        let (mut best, mut bn) = (0, 0.0);
        for b in 0..m {
            let n = self.phi1[b].hypot(self.phi2[b]);
            if n > bn {
                best = b;
                bn = n;
            }
        }
        let t = &self.triad;
        if bn == 0.0 {
            return Ok((t.s1, vec![0.0; m]));
        }
        let (u1, u2) = (self.phi1[best] / bn, self.phi2[best] / bn);
        let mut a = Vec::with_capacity(m);
        for b in 0..m {
            let along = self.phi1[b] * u1 + self.phi2[b] * u2;
            let across = self.phi2[b] * u1 - self.phi1[b] * u2;
            if across.abs() > 1e-9 * (1.0 + bn) {
                return Err(Error::NotCollinear);
            }
            a.push(along);
        }
        let n: [f64; 3] = core::array::from_fn(|i| u1 * t.s1[i] + u2 * t.s2[i]);
        Ok((n, a))
    }
}

/// How controlled flips anticommuting with `σ_n` are realized with CNOTs: plain
/// CNOTs when `n̂ ⊥ x̂`, otherwise CNOTs conjugated by a rotation `G`.
fn flip_frame(n: [f64; 3], w: [f64; 3]) -> Option<Mat2> {
    if n[0].abs() <= 1e-12 {
        None
    } else {
        Some(rotation_taking(w, [1.0, 0.0, 0.0]))
    }
}

/// Gray-ordered rotations for angles `a_b`, with the cyclic sequence relabeled
/// so its wrap-around flip lands on control position `wrap`.
fn gray_plan(a: &[f64], nk: usize, wrap: usize) -> Result<(Vec<f64>, Vec<usize>)> {
    let theta = hadamard_transform_angles(a)?;
    let (order, flips) = gray_order(nk);
    let top = nk - 1;
    let swap_bit = |p: usize| if p == top { wrap } else if p == wrap { top } else { p };
    let swap_word = |c: usize| {
        let (bt, bw) = ((c >> top) & 1, (c >> wrap) & 1);
        (c & !(1 << top) & !(1 << wrap)) | (bt << wrap) | (bw << top)
    };
    let angles = order.iter().map(|&c| theta[swap_word(c)]).collect();
    let flips = flips.into_iter().map(swap_bit).collect();
    Ok((angles, flips))
}

/// Expands a strong-line multiplexor (all `Φ_b` collinear, no flags) into
/// `2^nk` CNOTs alternating with `2^nk` target rotations, rotation first.
/// When the common axis has an x component the flips are conjugated CNOTs and
/// one extra rotation closes the circuit.
pub fn expand_d_multiplexor(mux: &PlaneMultiplexor) -> Result<Circuit> {
    if mux.flags.iter().any(|&f| f) {
        return Err(Error::ShapeMismatch);
    }
    let (n, a) = mux.line()?;
    let nk = mux.controls.len();
    let mut c = Circuit::new(mux.nb);
    let mut phase = 0.0;
    if nk == 0 {
        c.push_u2(&Mat2::exp_i_sigma([n[0] * a[0], n[1] * a[0], n[2] * a[0]]), mux.target, &mut phase);
        return Ok(c);
    }
    let (angles, flips) = gray_plan(&a, nk, nk - 1)?;
    let frame = flip_frame(n, mux.triad.w);
    let rot = |ang: f64| Mat2::exp_i_sigma([n[0] * ang, n[1] * ang, n[2] * ang]);
    for (i, (&ang, &f)) in angles.iter().zip(&flips).enumerate() {
        let mut g = rot(ang);
        if let Some(gf) = frame {
            g = gf * g;
            if i > 0 {
                g = g * gf.adjoint();
            }
        }
        c.push_u2(&g, mux.target, &mut phase);
        c.push(Gate::Cnot { control: mux.controls[f], target: mux.target });
    }
    if let Some(gf) = frame {
        c.push_u2(&gf.adjoint(), mux.target, &mut phase);
    }
    if phase != 0.0 {
        c.push(Gate::Phase { angle: phase });
    }
    Ok(c)
}

/// Multiplexor realized as target gates `gates[0..2^k]` separated by
/// `2^k − 1` CNOTs whose controls are `controls[flips[i]]`, optionally
/// followed by a phase `e^{iφ}` on one control being 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvenientMultiplexor {
    pub nb: usize,
    pub target: usize,
    pub controls: Vec<usize>,
    pub gates: Vec<Mat2>,
    pub flips: Vec<usize>,
    pub control_phase: Option<(usize, f64)>,
}

const SIGMA_X: Mat2 = Mat2([ZERO, ONE, ONE, ZERO]);

impl ConvenientMultiplexor {
    pub fn nk(&self) -> usize {
        self.controls.len()
    }

    pub fn member(&self, b: usize) -> Mat2 {
        let mut m = self.gates[0];
        for (g, &f) in self.gates[1..].iter().zip(&self.flips) {
            if (b >> f) & 1 == 1 {
                m = SIGMA_X * m;
            }
            m = *g * m;
        }
        if let Some((p, phi)) = self.control_phase {
            if (b >> p) & 1 == 1 {
                m = m.scale(cis(phi));
            }
        }
        m
    }

    pub fn members(&self) -> Vec<Mat2> {
        (0..self.gates.len()).map(|b| self.member(b)).collect()
    }

    pub fn operator(&self) -> Mat {
        assemble(self.nb, self.target, &self.controls, |b| self.member(b))
    }

    pub fn to_multiplexor(&self) -> Multiplexor {
        Multiplexor { nb: self.nb, target: self.target, controls: self.controls.clone(), members: self.members() }
    }

    pub fn cnot_count(&self) -> usize {
        self.flips.len()
    }

    /// Gates in time order; the determinant phases of the target gates are
    /// added to `phase` instead of being emitted.
    pub fn emit(&self, c: &mut Circuit, phase: &mut f64) {
        c.push_u2(&self.gates[0], self.target, phase);
        for (g, &f) in self.gates[1..].iter().zip(&self.flips) {
            c.push(Gate::Cnot { control: self.controls[f], target: self.target });
            c.push_u2(g, self.target, phase);
        }
        if let Some((p, phi)) = self.control_phase {
            // diag(1, e^{iφ}) = e^{iφ/2}·e^{−i(φ/2)σz}
            *phase += 0.5 * phi;
            c.push(Gate::Rotn { axis: [0.0, 0.0, 1.0], angle: -0.5 * phi, target: self.controls[p] });
        }
    }
}

/// `D·(iσw(target))^{n(μ)}` for a strong-line `D`: members `e^{iΦ_b}(iσw)^{b_μ}`.
///
/// The Gray cycle is arranged so its wrap-around flip is on `μ`; starting the
/// cycle there writes `D = Y·σw^{n(μ)}` with `Y` using `2^nk − 1` flips, and
/// `σw^{n(μ)}·(iσw)^{n(μ)} = i^{n(μ)}` is a phase on the control alone.
pub fn absorb_boundary_cnot(mux: &PlaneMultiplexor, mu: usize) -> Result<ConvenientMultiplexor> {
    let pos = mux.controls.iter().position(|&q| q == mu).ok_or(Error::NotAControl(mu))?;
    if mux.flags.iter().any(|&f| f) {
        return Err(Error::ShapeMismatch);
    }
    let (n, a) = mux.line()?;
    let nk = mux.controls.len();
    // Sign flip on b_μ = 1 compensates the leading flip.
    let signed: Vec<f64> = a.iter().enumerate().map(|(b, &x)| if (b >> pos) & 1 == 1 { -x } else { x }).collect();
    let (angles, mut flips) = gray_plan(&signed, nk, pos)?;
    flips.pop();
    let w = mux.triad.w;
    let conj = rotation_taking(w, [1.0, 0.0, 0.0]);
    let m = angles.len();
    let gates = angles
        .iter()
        .enumerate()
        .map(|(i, &ang)| {
            let mut g = Mat2::exp_i_sigma([n[0] * ang, n[1] * ang, n[2] * ang]);
            if i + 1 < m {
                g = conj * g;
            }
            if i > 0 {
                g = g * conj.adjoint();
            }
            g
        })
        .collect();
    Ok(ConvenientMultiplexor {
        nb: mux.nb,
        target: mux.target,
        controls: mux.controls.clone(),
        gates,
        flips,
        control_phase: Some((pos, FRAC_PI_2)),
    })
}

/// Circuit of a convenient multiplexor: `2^nk − 1` CNOTs, rotation first and last.
pub fn expand_convenient(mux: &ConvenientMultiplexor) -> Circuit {
    let mut c = Circuit::new(mux.nb);
    let mut phase = 0.0;
    mux.emit(&mut c, &mut phase);
    if phase != 0.0 {
        c.push(Gate::Phase { angle: phase });
    }
    c
}

/// `(r, v, d, u)` with `A = r†·v·d·u`, `B = r·v·d†·u`, `d = diag(e^{iπ/4}, e^{−iπ/4})`.
fn demux_pair(a: &Mat2, b: &Mat2) -> ([C64; 2], Mat2, Mat2) {
    let x = *a * b.adjoint();
    let det = x.det();
    let x11 = x.0[0] / det.sqrt();
    let phi = det.arg();
    let r1 = cis(0.5 * (FRAC_PI_2 - 0.5 * phi - x11.arg()));
    let r2 = cis(0.5 * (FRAC_PI_2 - 0.5 * phi + x11.arg() + core::f64::consts::PI));
    let z = Mat2::diag(r1, r2) * x * Mat2::diag(r1, r2);
    // Eigenvector of z for +i; the −i one is its orthogonal complement.
    let c1 = [z.0[1], I - z.0[0]];
    let c2 = [I - z.0[3], z.0[2]];
    let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
    let n2 = (c2[0].norm_sqr() + c2[1].norm_sqr()).sqrt();
    let (e, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    let e = if n > 1e-300 { [e[0] / n, e[1] / n] } else { [ONE, ZERO] };
    let v = Mat2::new(e[0], -e[1].conj(), e[1], e[0].conj());
    let d = Mat2::diag(cis(FRAC_PI_4), cis(-FRAC_PI_4));
    let u = d * v.adjoint() * Mat2::diag(r1.conj(), r2.conj()) * *b;
    ([r1, r2], v, u)
}

struct Split {
    diag: Vec<[C64; 2]>,
    gates: Vec<Mat2>,
    flips: Vec<usize>,
}

/// `M_b = diag(D_b)·V_b·ZZ(π/4)·U_b` recursion on the highest control bit;
/// the ZZ couplings are left implicit between consecutive gates.
fn decompose(members: &[Mat2], k: usize) -> Split {
    if k == 0 {
        return Split { diag: vec![[ONE, ONE]], gates: vec![members[0]], flips: Vec::new() };
    }
    let h = 1usize << (k - 1);
    let mut r = vec![[ONE, ONE]; 2 * h];
    let mut vs = Vec::with_capacity(h);
    let mut us = Vec::with_capacity(h);
    for bp in 0..h {
        let (rr, v, u) = demux_pair(&members[bp], &members[bp + h]);
        r[bp] = [rr[0].conj(), rr[1].conj()];
        r[bp + h] = rr;
        vs.push(v);
        us.push(u);
    }
    let su = decompose(&us, k - 1);
    for (v, d) in vs.iter_mut().zip(&su.diag) {
        *v = *v * Mat2::diag(d[0], d[1]);
    }
    let sv = decompose(&vs, k - 1);
    let diag = (0..2 * h).map(|b| [r[b][0] * sv.diag[b % h][0], r[b][1] * sv.diag[b % h][1]]).collect();
    let mut gates = su.gates;
    gates.extend(sv.gates);
    let mut flips = su.flips;
    flips.push(k - 1);
    flips.extend(sv.flips);
    Split { diag, gates, flips }
}

/// Diagonal-on-left split of a member list: `M_b = diag(D_b)·C_b`, with each
/// ZZ coupling rewritten as `e^{iπ/4}·S†_c·S†_t·H_t·CNOT·H_t`.
fn split_left(members: &[Mat2], k: usize) -> Split {
    let mut s = decompose(members, k);
    let hadamard = Mat2::new(
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::new(-FRAC_1_SQRT_2, 0.0),
    );
    let sdag_h = Mat2::diag(ONE, -I) * hadamard;
    let w = cis(FRAC_PI_4);
    for (j, &c) in s.flips.iter().enumerate() {
        s.gates[j] = hadamard * s.gates[j];
        s.gates[j + 1] = s.gates[j + 1] * sdag_h;
        for (b, d) in s.diag.iter_mut().enumerate() {
            let f = if (b >> c) & 1 == 1 { w * -I } else { w };
            d[0] *= f;
            d[1] *= f;
        }
    }
    s
}

/// Splits `mux` into a diagonal and a multiplexor realizable with
/// `2^nk − 1` CNOTs: `mux = Δ·conv` (left) or `mux = conv·Δ` (right).
///
/// Member pairs that differ in the highest control bit are demultiplexed
/// exactly through a ZZ(π/4) coupling, recursively.
pub fn split_convenient(mux: &Multiplexor, side: Side) -> (DiagonalUnitary, ConvenientMultiplexor) {
    let k = mux.nk();
    let (diag, gates, flips) = match side {
        Side::Dol => {
            let s = split_left(&mux.members, k);
            (s.diag, s.gates, s.flips)
        }
        Side::Dor => {
            let adj: Vec<Mat2> = mux.members.iter().map(|m| m.adjoint()).collect();
            let s = split_left(&adj, k);
            let diag = s.diag.iter().map(|d| [d[0].conj(), d[1].conj()]).collect();
            let gates = s.gates.iter().rev().map(|g| g.adjoint()).collect();
            let flips = s.flips.into_iter().rev().collect();
            (diag, gates, flips)
        }
    };
    let mut phases = vec![0.0; 1 << mux.nb];
    for (i, p) in phases.iter_mut().enumerate() {
        let b = control_bits(&mux.controls, i);
        *p = diag[b][(i >> mux.target) & 1].arg();
    }
    let delta = DiagonalUnitary { nb: mux.nb, phases };
    let conv = ConvenientMultiplexor {
        nb: mux.nb,
        target: mux.target,
        controls: mux.controls.clone(),
        gates,
        flips,
        control_phase: None,
    };
    (delta, conv)
}

/// Half phase differences `γ_b ∈ (−π/2, π/2]` of the target blocks of `delta`,
/// so block `b` is `e^{iη_b}·e^{iγ_b σz}`.
pub fn block_gammas(delta: &DiagonalUnitary, target: usize, controls: &[usize]) -> Vec<f64> {
    (0..1usize << controls.len())
        .map(|b| {
            let d = delta.phases[full_index(target, controls, b, 0)] - delta.phases[full_index(target, controls, b, 1)];
            0.5 * cis(d).arg()
        })
        .collect()
}

/// Moves `e^{igσz(target)}` between the diagonal and the adjacent end gate of
/// `conv`: the diagonal's target blocks become `e^{i(γ_b − g)σz}`.
pub fn shift_gauge(delta: &mut DiagonalUnitary, conv: &mut ConvenientMultiplexor, side: Side, g: f64) {
    let z = Mat2::diag(cis(g), cis(-g));
    match side {
        Side::Dol => {
            let last = conv.gates.len() - 1;
            conv.gates[last] = z * conv.gates[last];
        }
        Side::Dor => conv.gates[0] = conv.gates[0] * z,
    }
    let bit = 1usize << conv.target;
    for (i, p) in delta.phases.iter_mut().enumerate() {
        *p += if i & bit == 0 { -g } else { g };
    }
}
