//! Dense complex matrices and the handful of factorizations the compiler needs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{i·phi}`.
#[inline]
pub fn cis(phi: f64) -> C64 {
    C64::new(phi.cos(), phi.sin())
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from row-major entries. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Mat { rows, cols, data }
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Mat::zeros(d.len(), d.len());
        for (k, v) in d.iter().enumerate() {
            m[(k, k)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: C64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn dist(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)];
            }
        }
    }

    /// `a ⊕ b`.
    pub fn direct_sum(a: &Mat, b: &Mat) -> Mat {
        let mut m = Mat::zeros(a.rows + b.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(a.rows, a.cols, b);
        m
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[C64]) {
        for (r, x) in v.iter().enumerate() {
            self[(r, c)] = *x;
        }
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Determinant by partial-pivot LU.
    pub fn det(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = ONE;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap())
                .unwrap();
            if a[(p, k)].norm() == 0.0 {
                return ZERO;
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(p * n + c, k * n + c);
                }
                det = -det;
            }
            let piv = a[(k, k)];
            det *= piv;
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                if f != ZERO {
                    for c in k..n {
                        let v = a[(k, c)];
                        a[(i, c)] -= f * v;
                    }
                }
            }
        }
        det
    }

    /// `‖M·M† − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        assert!(self.is_square());
        let p = self * &self.adjoint();
        p.dist(&Mat::identity(self.rows))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Thin singular value decomposition `A = U·diag(σ)·V†` of a square matrix.
pub struct Svd {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

/// One-sided (Hestenes) Jacobi SVD. Singular values come out in descending
/// order; ties keep their original column order. Left vectors belonging to
/// zero singular values are completed to an orthonormal basis.
pub fn svd(a: &Mat) -> Svd {
    assert!(a.is_square(), "svd expects a square matrix");
    let n = a.rows;
    // Work on columns stored contiguously.
    let mut w: Vec<Vec<C64>> = (0..n).map(|c| a.col(c)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|c| {
            let mut e = vec![ZERO; n];
            e[c] = ONE;
            e
        })
        .collect();
    let eps = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm(&w[p]).powi(2);
                let beta = norm(&w[q]).powi(2);
                let g = dot(&w[p], &w[q]);
                let gn = g.norm();
                if gn <= eps * (alpha * beta).sqrt() || gn < 1e-300 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gn);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = g / gn;
                rotate(&mut w, p, q, c, s, ph);
                rotate(&mut v, p, q, c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap());

    let mut u = Mat::zeros(n, n);
    let mut vm = Mat::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &src) in order.iter().enumerate() {
        let s = sig[src];
        sigma.push(s);
        vm.set_col(k, &v[src]);
        if s > 1e-13 {
            let col: Vec<C64> = w[src].iter().map(|x| x / s).collect();
            u.set_col(k, &col);
        } else {
            missing.push(k);
        }
    }
    if !missing.is_empty() {
        let known: Vec<usize> = (0..n).filter(|k| !missing.contains(k)).collect();
        complete_columns(&mut u, &known, &missing);
    }
    Svd { u, sigma, v: vm }
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ph: C64) {
    // [a_p, a_q·ph̄] · [[c, s], [−s, c]]
    let (lo, hi) = cols.split_at_mut(q);
    let ap = &mut lo[p];
    let aq = &mut hi[0];
    let phc = ph.conj();
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let yq = *y * phc;
        let nx = *x * c - yq * s;
        let ny = *x * s + yq * c;
        *x = nx;
        *y = ny;
    }
}

/// Fills `missing` columns of `m` with unit vectors orthogonal to the `known`
/// columns and to each other (modified Gram-Schmidt against basis vectors).
pub fn complete_columns(m: &mut Mat, known: &[usize], missing: &[usize]) {
    let n = m.rows;
    let mut basis: Vec<Vec<C64>> = known.iter().map(|&k| m.col(k)).collect();
    let mut e = 0;
    for &k in missing {
        loop {
            assert!(e < n, "cannot complete basis");
            let mut cand = vec![ZERO; n];
            cand[e] = ONE;
            e += 1;
            for _ in 0..2 {
                for b in &basis {
                    let p = dot(b, &cand);
                    for (c, bv) in cand.iter_mut().zip(b) {
                        *c -= p * bv;
                    }
                }
            }
            let nn = norm(&cand);
            if nn > 1e-6 {
                let cand: Vec<C64> = cand.iter().map(|x| x / nn).collect();
                m.set_col(k, &cand);
                basis.push(cand);
                break;
            }
        }
    }
}

/// Re-orthonormalizes the columns of `m` in the given order (modified
/// Gram-Schmidt, two passes). Columns that collapse are completed.
pub fn gram_schmidt(m: &mut Mat, order: &[usize]) {
    let mut done: Vec<usize> = Vec::new();
    let mut collapsed = Vec::new();
    for &k in order {
        let mut c = m.col(k);
        for _ in 0..2 {
            for &d in &done {
                let b = m.col(d);
                let p = dot(&b, &c);
                for (x, y) in c.iter_mut().zip(&b) {
                    *x -= p * y;
                }
            }
        }
        let nn = norm(&c);
        if nn > 1e-6 {
            let c: Vec<C64> = c.iter().map(|x| x / nn).collect();
            m.set_col(k, &c);
            done.push(k);
        } else {
            collapsed.push(k);
        }
    }
    if !collapsed.is_empty() {
        complete_columns(m, &done, &collapsed);
    }
}

/// Nearest unitary in Frobenius norm (polar factor `U·V†`).
pub fn polar_unitary(m: &Mat) -> Mat {
    let s = svd(m);
    &s.u * &s.v.adjoint()
}

/// 2×2 complex matrix, row-major `[a, b, c, d]` for `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [C64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([ONE, ZERO, ZERO, ONE]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2([a, ZERO, ZERO, d])
    }

    pub fn adjoint(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a, c, b, d])
    }

    pub fn det(&self) -> C64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> C64 {
        self.0[0] + self.0[3]
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2(self.0.map(|v| v * s))
    }

    pub fn dist(&self, o: &Mat2) -> f64 {
        self.0.iter().zip(&o.0).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint()).dist(&Mat2::IDENTITY)
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_vec(2, 2, self.0.to_vec())
    }

    pub fn from_mat(m: &Mat) -> Mat2 {
        assert_eq!((m.rows(), m.cols()), (2, 2));
        Mat2([m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
    }

    /// `e^{i θ⃗·σ⃗}` for a real 3-vector.
    pub fn exp_i_sigma(v: [f64; 3]) -> Mat2 {
        let th = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if th == 0.0 {
            return Mat2::IDENTITY;
        }
        let s = th.sin() / th;
        let (x, y, z) = (v[0] * s, v[1] * s, v[2] * s);
        let c = th.cos();
        Mat2([C64::new(c, z), C64::new(y, x), C64::new(-y, x), C64::new(c, -z)])
    }

    /// `σ⃗·n⃗`.
    pub fn sigma(n: [f64; 3]) -> Mat2 {
        Mat2([
            C64::new(n[2], 0.0),
            C64::new(n[0], -n[1]),
            C64::new(n[0], n[1]),
            C64::new(-n[2], 0.0),
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, r: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = r.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
