//! Unitarity checks, determinant normalization, Haar sampling and the
//! cosine-sine decomposition.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{complete_columns, gram_schmidt, polar_unitary, svd, Mat, C64};

/// `‖M·M† − I‖_F ≤ tol`.
pub fn is_unitary(m: &Mat, tol: f64) -> bool {
    m.is_square() && m.unitarity_defect() <= tol
}

/// Number of qubits for a `2^nb` dimension, if it is one.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// Returns `(e^{-i·phase}·U, phase)` with unit determinant, where
/// `phase = arg(det U)/dim` on the principal branch.
pub fn normalize_det(u: &Mat) -> (Mat, f64) {
    let n = u.rows() as f64;
    let phase = u.det().arg() / n;
    (u.scale(C64::from_polar(1.0, -phase)), phase)
}

/// Standard normal pair via Box-Muller.
fn gaussian_pair(rng: &mut ChaCha20Rng) -> (f64, f64) {
    let uniform = |rng: &mut ChaCha20Rng| (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let u1 = 1.0 - uniform(rng); // (0, 1]
    let u2 = uniform(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * core::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

/// Haar-distributed unitary on `nb` qubits, deterministic in `seed`.
///
/// QR of a complex Ginibre matrix by modified Gram-Schmidt; the R diagonal is
/// then real positive, which is the phase correction that makes Q Haar.
pub fn haar_random_unitary(nb: usize, seed: u64) -> Result<Mat> {
    if !(1..=10).contains(&nb) {
        return Err(Error::QubitCount(nb));
    }
    let n = 1usize << nb;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut g = Mat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (a, b) = gaussian_pair(&mut rng);
            g[(r, c)] = C64::new(a, b) * core::f64::consts::FRAC_1_SQRT_2;
        }
    }
    let order: Vec<usize> = (0..n).collect();
    gram_schmidt(&mut g, &order);
    Ok(g)
}

/// Factors of `U = (L0 ⊕ L1)·exp(iσy ⊗ Θ)·(R0 ⊕ R1)`.
#[derive(Clone, Debug)]
pub struct CsdFactors {
    pub l0: Mat,
    pub l1: Mat,
    pub r0: Mat,
    pub r1: Mat,
    pub thetas: Vec<f64>,
}

impl CsdFactors {
    /// The middle factor as a dense matrix: blocks `[[C, S], [−S, C]]`.
    pub fn middle(&self) -> Mat {
        let h = self.thetas.len();
        let mut d = Mat::zeros(2 * h, 2 * h);
        for (k, t) in self.thetas.iter().enumerate() {
            let (s, c) = t.sin_cos();
            d[(k, k)] = C64::new(c, 0.0);
            d[(k, h + k)] = C64::new(s, 0.0);
            d[(h + k, k)] = C64::new(-s, 0.0);
            d[(h + k, h + k)] = C64::new(c, 0.0);
        }
        d
    }

    pub fn reconstruct(&self) -> Mat {
        let l = Mat::direct_sum(&self.l0, &self.l1);
        let r = Mat::direct_sum(&self.r0, &self.r1);
        &(&l * &self.middle()) * &r
    }
}

/// Cosine-sine decomposition with angles in `[0, π/2]`.
///
/// `U00 = L0·C·R0` comes from an SVD with cosines sorted in descending order
/// (stable, so an identity input keeps the identity gauge). `L1` and `R1`
/// follow from the other three blocks, picking for each row whichever of
/// cosine and sine is larger, then re-orthonormalized.
pub fn csd(u: &Mat) -> Result<CsdFactors> {
    let n = u.rows();
    if !u.is_square() || n < 2 || n % 2 != 0 {
        return Err(Error::BadDimension(n));
    }
    let residual = u.unitarity_defect();
    if residual > 1e-8 * n as f64 {
        return Err(Error::NotUnitary { residual });
    }
    let h = n / 2;
    let u00 = u.block(0, 0, h, h);
    let u01 = u.block(0, h, h, h);
    let u10 = u.block(h, 0, h, h);
    let u11 = u.block(h, h, h, h);

    let s = svd(&u00);
    let l0 = s.u;
    let r0 = s.v.adjoint();
    let cos: Vec<f64> = s.sigma.iter().map(|c| c.min(1.0)).collect();

    // U10·R0† = −L1·S, columns orthogonal with norms sin θ_k.
    let y = &u10 * &s.v;
    let mut sin = Vec::with_capacity(h);
    let mut l1 = Mat::zeros(h, h);
    let mut known = Vec::new();
    let mut missing = Vec::new();
    for k in 0..h {
        let col = y.col(k);
        let nk = col.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        sin.push(nk.min(1.0));
        if nk > 1e-8 {
            let col: Vec<C64> = col.iter().map(|v| -v / nk).collect();
            l1.set_col(k, &col);
            known.push(k);
        } else {
            missing.push(k);
        }
    }
    // Orthonormalize the determined columns, largest sine first.
    known.sort_by(|&a, &b| sin[b].partial_cmp(&sin[a]).unwrap());
    gram_schmidt(&mut l1, &known);
    if !missing.is_empty() {
        complete_columns(&mut l1, &known, &missing);
    }

    // Rows of R1 from U01 = L0·S·R1 or U11 = L1·C·R1.
    let a = &l0.adjoint() * &u01;
    let b = &l1.adjoint() * &u11;
    let mut r1 = Mat::zeros(h, h);
    for k in 0..h {
        let (src, div) = if cos[k] >= sin[k] { (&b, cos[k]) } else { (&a, sin[k]) };
        for c in 0..h {
            r1[(k, c)] = src[(k, c)] / div;
        }
    }
    let r1 = polar_unitary(&r1);

    let thetas = cos.iter().zip(&sin).map(|(c, s)| s.atan2(*c)).collect();
    Ok(CsdFactors { l0, l1, r0, r1, thetas })
}
