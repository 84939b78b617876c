//! End-to-end compilation of a unitary into CNOTs and one-qubit rotations.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::axisopt::best_common_shift;
use crate::circuit::{simulate, Circuit, CompileStats, Gate, Mode};
use crate::error::{Error, Result};
use crate::linalg::{cis, Mat, Mat2, C64};
use crate::matcore::{csd, normalize_det, qubits_for_dim, CsdFactors};
use crate::muxseo::{
    block_gammas, expand_d_multiplexor, multiply_by_diagonal, shift_gauge, split_convenient, ConvenientMultiplexor,
    DiagonalUnitary, Multiplexor, PlaneMultiplexor,
};
use crate::su2param::{Side, Triad};

/// Single-target multiplexors in time order: `muxes[0]` acts first, so the
/// represented operator is `muxes[last] ⋯ muxes[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuxSequence {
    pub nb: usize,
    pub muxes: Vec<Multiplexor>,
}

impl MuxSequence {
    pub fn product(&self) -> Mat {
        let mut p = Mat::identity(1 << self.nb);
        for m in &self.muxes {
            p = &m.operator() * &p;
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// First-applied multiplexor first; diagonals split off on the left.
    RightToLeft,
    /// Last-applied multiplexor first; diagonals split off on the right.
    LeftToRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisMode {
    /// Leave each split as produced.
    FixedZ,
    /// Move the common `e^{igσz}` of each split diagonal into the multiplexor.
    Optimized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationReport {
    pub sweeps_run: usize,
    /// Entangling deviation of the residual diagonal after each sweep.
    pub cost_history: Vec<f64>,
    pub converged: bool,
    pub final_residual: f64,
}

impl RelaxationReport {
    /// Whether `cost_history` never increased.
    pub fn monotone(&self) -> bool {
        self.cost_history.windows(2).all(|w| w[1] <= w[0] + 1e-12)
    }
}

/// `(2^nb − 1)(2^{nb−1} − 1) + 2^nb`.
pub fn nr_formula(nb: usize) -> usize {
    ((1 << nb) - 1) * ((1 << (nb - 1)) - 1) + (1 << nb)
}

/// `(2^nb − 1)(2^{nb−1} − 1)`.
pub fn r_formula(nb: usize) -> usize {
    ((1 << nb) - 1) * ((1 << (nb - 1)) - 1)
}

/// CNOTs emitted by [`compile_nr`]: every multiplexor at `2^{nb−1} − 1` plus
/// a `2^nb − 2` diagonal cascade.
pub fn nr_emitted(nb: usize) -> usize {
    r_formula(nb) + (1 << nb) - 2
}

/// `⌈(4^nb − 3nb − 1)/4⌉`.
pub fn lower_bound(nb: usize) -> usize {
    let v = (1usize << (2 * nb)) - 3 * nb - 1;
    v.div_ceil(4)
}

fn tree(blocks: Vec<Mat>, nb: usize, gauge: &mut Option<ChaCha20Rng>) -> Result<Vec<Multiplexor>> {
    let m = qubits_for_dim(blocks[0].rows()).ok_or(Error::BadDimension(blocks[0].rows()))?;
    if m == 1 {
        let members = blocks.iter().map(Mat2::from_mat).collect();
        return Ok(vec![Multiplexor::spanning(nb, 0, members)?]);
    }
    let half = 1usize << (m - 1);
    let mut ls = vec![Mat::zeros(0, 0); 2 * blocks.len()];
    let mut rs = ls.clone();
    let mut d_members = vec![Mat2::IDENTITY; 1 << (nb - 1)];
    for (j, blk) in blocks.iter().enumerate() {
        let mut f = csd(blk)?;
        if let Some(rng) = gauge.as_mut() {
            regauge(&mut f, rng);
        }
        for (r, t) in f.thetas.iter().enumerate() {
            let (s, c) = t.sin_cos();
            d_members[r + (j << (m - 1))] =
                Mat2::new(C64::new(c, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(c, 0.0));
        }
        ls[2 * j] = f.l0;
        ls[2 * j + 1] = f.l1;
        rs[2 * j] = f.r0;
        rs[2 * j + 1] = f.r1;
        debug_assert_eq!(ls[2 * j].rows(), half);
    }
    let mut seq = tree(rs, nb, gauge)?;
    seq.push(Multiplexor::spanning(nb, m - 1, d_members)?);
    seq.extend(tree(ls, nb, gauge)?);
    Ok(seq)
}

/// Random column phases shared by `L0`, `L1` (and undone on `R0`, `R1`): a
/// different but equally valid set of factors.
fn regauge(f: &mut CsdFactors, rng: &mut ChaCha20Rng) {
    let h = f.thetas.len();
    for k in 0..h {
        let p = cis((rng.next_u64() >> 11) as f64 * (2.0 * core::f64::consts::PI / (1u64 << 53) as f64));
        for r in 0..h {
            f.l0[(r, k)] *= p;
            f.l1[(r, k)] *= p;
            f.r0[(k, r)] *= p.conj();
            f.r1[(k, r)] *= p.conj();
        }
    }
}

fn check_input(u: &Mat) -> Result<usize> {
    let nb = qubits_for_dim(u.rows()).filter(|_| u.is_square()).ok_or(Error::BadDimension(u.rows()))?;
    let residual = u.unitarity_defect();
    if residual > 1e-8 * u.rows() as f64 {
        return Err(Error::NotUnitary { residual });
    }
    Ok(nb)
}

/// Recursive cosine-sine decomposition into `2^nb − 1` multiplexors, always
/// splitting the most significant remaining qubit. Cosine-sine middle factors
/// become y-rotation multiplexors targeting the split qubit; the leaves target
/// qubit 0.
pub fn csd_tree(u: &Mat) -> Result<MuxSequence> {
    let nb = check_input(u)?;
    Ok(MuxSequence { nb, muxes: tree(vec![u.clone()], nb, &mut None)? })
}

/// [`csd_tree`] with every cosine-sine factorization re-gauged by random
/// column phases drawn from `seed`.
pub fn csd_tree_regauged(u: &Mat, seed: u64) -> Result<MuxSequence> {
    let nb = check_input(u)?;
    let mut rng = Some(ChaCha20Rng::seed_from_u64(seed));
    Ok(MuxSequence { nb, muxes: tree(vec![u.clone()], nb, &mut rng)? })
}

fn split_one(mux: &Multiplexor, side: Side, mode: AxisMode) -> (DiagonalUnitary, ConvenientMultiplexor) {
    let (mut delta, mut conv) = split_convenient(mux, side);
    if mode == AxisMode::Optimized {
        let doubled: Vec<f64> = block_gammas(&delta, mux.target, &mux.controls).iter().map(|g| 2.0 * g).collect();
        let g = 0.5 * best_common_shift(&doubled);
        shift_gauge(&mut delta, &mut conv, side, g);
    }
    (delta, conv)
}

/// One pass turning every multiplexor of `seq` into a convenient one.
///
/// Right-to-left splits diagonals off on the left and pushes each into the
/// next multiplexor: `seq = residual · convs[last] ⋯ convs[0]`.
/// Left-to-right mirrors it: `seq = convs[last] ⋯ convs[0] · residual`.
pub fn sweep(seq: &MuxSequence, direction: Direction, mode: AxisMode) -> Result<(Vec<ConvenientMultiplexor>, DiagonalUnitary)> {
    let n = seq.muxes.len();
    let mut carry = DiagonalUnitary::identity(seq.nb);
    let mut convs: Vec<Option<ConvenientMultiplexor>> = vec![None; n];
    let order: Vec<usize> = match direction {
        Direction::RightToLeft => (0..n).collect(),
        Direction::LeftToRight => (0..n).rev().collect(),
    };
    let side = match direction {
        Direction::RightToLeft => Side::Dor,
        Direction::LeftToRight => Side::Dol,
    };
    for idx in order {
        // The carried diagonal sits on the side facing the multiplexors
        // already processed.
        let m = multiply_by_diagonal(&seq.muxes[idx], &carry, side).map_err(|_| Error::Split { index: idx })?;
        let split_side = match direction {
            Direction::RightToLeft => Side::Dol,
            Direction::LeftToRight => Side::Dor,
        };
        let (delta, conv) = split_one(&m, split_side, mode);
        carry = delta;
        convs[idx] = Some(conv);
    }
    Ok((convs.into_iter().map(|c| c.unwrap()).collect(), carry))
}

/// Cascade of z-rotation multiplexors for a diagonal: target `k` with
/// controls `0..k`, from the top qubit down, then one global phase.
/// Uses `Σ_{k=1}^{nb−1} 2^k = 2^nb − 2` CNOTs for every input.
pub fn diagonal_to_seo(delta: &DiagonalUnitary) -> Circuit {
    let nb = delta.nb;
    let mut c = Circuit::new(nb);
    let mut phases = delta.phases.clone();
    // Strong plane spanned by ŷ and ẑ, so rotations about ẑ commute with
    // plain CNOT conjugation.
    let triad = Triad::new([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
    for k in (0..nb).rev() {
        let half = 1usize << k;
        let mut theta = vec![0.0; half];
        let mut avg = vec![0.0; half];
        for b in 0..half {
            let (p0, p1) = (phases[b], phases[b | half]);
            theta[b] = 0.5 * (p0 - p1);
            avg[b] = 0.5 * (p0 + p1);
        }
        let mux = PlaneMultiplexor::new(nb, k, (0..k).collect(), triad, vec![0.0; half], theta)
            .expect("cascade indices are valid");
        let sub = expand_d_multiplexor(&mux).expect("z rotations are collinear");
        c.extend(&sub);
        phases = avg;
    }
    if phases[0] != 0.0 {
        c.push(Gate::Phase { angle: phases[0] });
    }
    c
}

fn push_local_diagonal(c: &mut Circuit, delta: &DiagonalUnitary, phase: &mut f64) {
    let (global, per) = delta.local_fit();
    *phase += global;
    for (q, p) in per.iter().enumerate() {
        if *p != 0.0 {
            *phase += 0.5 * p;
            c.push(Gate::Rotn { axis: [0.0, 0.0, 1.0], angle: -0.5 * p, target: q });
        }
    }
}

fn assemble_circuit(nb: usize, convs: &[ConvenientMultiplexor], residual: &Circuit, residual_first: bool, phase: f64) -> Circuit {
    let mut c = Circuit::new(nb);
    let mut total = phase;
    if residual_first {
        c.extend(residual);
    }
    for conv in convs {
        conv.emit(&mut c, &mut total);
    }
    if !residual_first {
        c.extend(residual);
    }
    if total != 0.0 {
        c.push(Gate::Phase { angle: total });
    }
    c
}

fn finish(u: &Mat, circuit: Circuit, mode: Mode) -> Result<(Circuit, CompileStats)> {
    let sim = simulate(&circuit)?;
    let stats = CompileStats {
        cnot_count: circuit.cnot_count(),
        rotation_count: circuit.rotation_count(),
        reconstruction_error: sim.dist(u),
        mode,
    };
    Ok((circuit, stats))
}

/// Single right-to-left sweep and an explicit diagonal cascade.
pub fn compile_nr(u: &Mat) -> Result<(Circuit, CompileStats)> {
    let (un, phase) = normalize_det(u);
    let seq = csd_tree(&un)?;
    compile_nr_sequence(u, &seq, phase)
}

/// [`compile_nr`] on an already decomposed, determinant-normalized input.
pub fn compile_nr_sequence(u: &Mat, seq: &MuxSequence, phase: f64) -> Result<(Circuit, CompileStats)> {
    let (convs, residual) = sweep(seq, Direction::RightToLeft, AxisMode::FixedZ)?;
    let diag = diagonal_to_seo(&residual);
    finish(u, assemble_circuit(seq.nb, &convs, &diag, false, phase), Mode::Nr)
}

/// Alternating sweeps until the residual diagonal needs no CNOTs.
///
/// Converged runs emit the residual as one-qubit phases and use exactly
/// `(2^nb − 1)(2^{nb−1} − 1)` CNOTs; otherwise the last sweep's residual is
/// expanded as in [`compile_nr`] and the report says `converged = false`.
pub fn compile_r(u: &Mat, tol: f64, max_sweeps: usize) -> Result<(Circuit, RelaxationReport, CompileStats)> {
    let (un, phase) = normalize_det(u);
    let nb = check_input(u)?;
    let limit = 1e-8 * (1usize << nb) as f64;
    let mut seq = csd_tree(&un)?;
    let mut report = RelaxationReport { sweeps_run: 0, cost_history: Vec::new(), converged: false, final_residual: f64::INFINITY };
    let mut last: Option<(Vec<ConvenientMultiplexor>, DiagonalUnitary, Direction)> = None;
    for s in 0..max_sweeps.max(1) {
        let dir = if s % 2 == 0 { Direction::RightToLeft } else { Direction::LeftToRight };
        let (convs, residual) = sweep(&seq, dir, AxisMode::Optimized)?;
        let dev = residual.entangling_deviation();
        report.sweeps_run += 1;
        report.cost_history.push(dev);
        report.final_residual = dev;
        let residual_first = dir == Direction::LeftToRight;
        if dev <= tol {
            let mut local = Circuit::new(nb);
            let mut extra = 0.0;
            push_local_diagonal(&mut local, &residual, &mut extra);
            let c = assemble_circuit(nb, &convs, &local, residual_first, phase + extra);
            let (c, stats) = finish(u, c, Mode::R)?;
            if stats.reconstruction_error <= limit {
                report.converged = true;
                return Ok((c, report, stats));
            }
        }
        // Fold the residual back into the multiplexor next to it.
        let mut muxes: Vec<Multiplexor> = convs.iter().map(|c| c.to_multiplexor()).collect();
        let (edge, side) = match dir {
            Direction::RightToLeft => (muxes.len() - 1, Side::Dol),
            Direction::LeftToRight => (0, Side::Dor),
        };
        muxes[edge] = multiply_by_diagonal(&muxes[edge], &residual, side)?;
        seq = MuxSequence { nb, muxes };
        last = Some((convs, residual, dir));
    }
    let (convs, residual, dir) = last.expect("at least one sweep runs");
    let diag = diagonal_to_seo(&residual);
    let c = assemble_circuit(nb, &convs, &diag, dir == Direction::LeftToRight, phase);
    let (c, stats) = finish(u, c, Mode::R)?;
    Ok((c, report, stats))
}

/// `Δ⁻¹·U`, where `Δ` is the residual diagonal of the single right-to-left
/// sweep of `U`. The result lies in the set the relaxation can reach without
/// a diagonal cascade.
pub fn strip_residual(u: &Mat) -> Result<Mat> {
    let (un, _) = normalize_det(u);
    let seq = csd_tree(&un)?;
    let (_, residual) = sweep(&seq, Direction::RightToLeft, AxisMode::Optimized)?;
    Ok(&residual.inverse().operator() * u)
}
