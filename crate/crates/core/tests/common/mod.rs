//! Test-side helpers. Everything here is written independently of the library
//! routines it is used to check.

#![allow(dead_code)]

use muxsynth_core::linalg::{Mat, Mat2, C64};
use muxsynth_core::su2param::Triad;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> TestRng {
        TestRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn gauss(&mut self) -> f64 {
        let u1 = self.unit().max(1e-300);
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn angle(&mut self) -> f64 {
        self.range(-std::f64::consts::PI, std::f64::consts::PI)
    }

    pub fn bit(&mut self) -> bool {
        self.0.next_u32() & 1 == 1
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cis(a: f64) -> C64 {
    C64::new(a.cos(), a.sin())
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    let mut m: f64 = 0.0;
    for r in 0..a.rows() {
        for k in 0..a.cols() {
            m = m.max((a[(r, k)] - b[(r, k)]).norm());
        }
    }
    m
}

/// Householder QR of a complex Gaussian matrix with the phases of `R`'s
/// diagonal moved into `Q`.
#[allow(clippy::needless_range_loop)]
pub fn qr_unitary(n: usize, rng: &mut TestRng) -> Mat {
    let mut a: Vec<Vec<C64>> = (0..n).map(|_| (0..n).map(|_| c(rng.gauss(), rng.gauss())).collect()).collect();
    let mut q = Mat::identity(n);
    for k in 0..n {
        let norm: f64 = (k..n).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        let ph = if a[k][k].norm() > 0.0 { a[k][k] / a[k][k].norm() } else { c(1.0, 0.0) };
        let mut v: Vec<C64> = vec![c(0.0, 0.0); n];
        for i in k..n {
            v[i] = a[i][k];
        }
        v[k] += ph * norm;
        let vn: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>();
        if vn < 1e-300 {
            continue;
        }
        // a ← (I − 2vv†/|v|²) a, q ← q (I − 2vv†/|v|²)
        for j in 0..n {
            let s: C64 = (k..n).map(|i| v[i].conj() * a[i][j]).sum::<C64>() * (2.0 / vn);
            for i in k..n {
                a[i][j] -= v[i] * s;
            }
        }
        for r in 0..n {
            let s: C64 = (k..n).map(|i| q[(r, i)] * v[i]).sum::<C64>() * (2.0 / vn);
            for i in k..n {
                let t = s * v[i].conj();
                q[(r, i)] -= t;
            }
        }
    }
    // Column phases so that R has a positive diagonal.
    for k in 0..n {
        let d = a[k][k];
        let p = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for r in 0..n {
            q[(r, k)] *= p;
        }
    }
    q
}

/// Product of random two-level rotations and a random diagonal.
pub fn givens_unitary(n: usize, rng: &mut TestRng) -> Mat {
    let mut m = Mat::diag(&(0..n).map(|_| cis(rng.angle())).collect::<Vec<_>>());
    for _ in 0..4 * n * n {
        let i = rng.below(n);
        let mut j = rng.below(n);
        if i == j {
            j = (j + 1) % n;
        }
        let (t, p) = (rng.range(0.0, 3.2), rng.angle());
        let (s, cc) = t.sin_cos();
        let (a, b, cm, d) = (c(cc, 0.0), cis(p) * s, -cis(-p) * s, c(cc, 0.0));
        for k in 0..n {
            let (x, y) = (m[(i, k)], m[(j, k)]);
            m[(i, k)] = a * x + b * y;
            m[(j, k)] = cm * x + d * y;
        }
    }
    m
}

pub fn random_u2(rng: &mut TestRng) -> Mat2 {
    Mat2::from_mat(&givens_unitary(2, rng))
}

/// `[[x, y], [−y*, x*]]` with uniform-on-the-sphere `(x, y)`.
pub fn random_su2(rng: &mut TestRng) -> Mat2 {
    let v: [f64; 4] = std::array::from_fn(|_| rng.gauss());
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let x = c(v[0] / n, v[1] / n);
    let y = c(v[2] / n, v[3] / n);
    Mat2::new(x, y, -y.conj(), x.conj())
}

pub fn unit3(rng: &mut TestRng) -> [f64; 3] {
    let v = [rng.gauss(), rng.gauss(), rng.gauss()];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn random_triad(rng: &mut TestRng) -> Triad {
    let s1 = unit3(rng);
    let t = unit3(rng);
    let p = cross(s1, t);
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let s2 = cross([p[0] / n, p[1] / n, p[2] / n], s1);
    Triad { s1, s2, w: cross(s1, s2) }
}

pub fn pauli(k: usize) -> Mat2 {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match k {
        0 => Mat2::new(z, o, o, z),
        1 => Mat2::new(z, -i, i, z),
        _ => Mat2::new(o, z, z, -o),
    }
}

/// `σ·n`.
pub fn sigma_dot(n: [f64; 3]) -> Mat2 {
    let (x, y, z) = (pauli(0), pauli(1), pauli(2));
    Mat2(std::array::from_fn(|k| x.0[k] * n[0] + y.0[k] * n[1] + z.0[k] * n[2]))
}

/// `e^{iθ(σ·n̂)}` by power series, to stay independent of the closed form.
pub fn expm_i_sigma(v: [f64; 3]) -> Mat2 {
    let a = sigma_dot(v).scale(c(0.0, 1.0));
    let mut term = Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    let mut sum = term;
    for k in 1..60 {
        term = (term * a).scale(c(1.0 / k as f64, 0.0));
        for j in 0..4 {
            sum.0[j] += term.0[j];
        }
    }
    sum
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    Mat::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |r, k| {
        a[(r / b.rows(), k / b.cols())] * b[(r % b.rows(), k % b.cols())]
    })
}

/// `⊗` over qubits `nb−1 … 0` (most significant first) of per-qubit factors.
pub fn tensor(nb: usize, factor: impl Fn(usize) -> Mat) -> Mat {
    let mut m = Mat::identity(1);
    for q in (0..nb).rev() {
        m = kron(&m, &factor(q));
    }
    m
}

/// `Σ_b P_b(controls) ⊗ U_b(target)` assembled from Kronecker products.
pub fn mux_oracle(nb: usize, target: usize, controls: &[usize], members: &[Mat2]) -> Mat {
    let dim = 1 << nb;
    let mut out = Mat::zeros(dim, dim);
    for (b, u) in members.iter().enumerate() {
        let term = tensor(nb, |q| {
            if q == target {
                u.to_mat()
            } else if let Some(j) = controls.iter().position(|&x| x == q) {
                let bit = (b >> j) & 1;
                Mat::diag(&[c((1 - bit) as f64, 0.0), c(bit as f64, 0.0)])
            } else {
                Mat::identity(2)
            }
        });
        for r in 0..dim {
            for k in 0..dim {
                out[(r, k)] += term[(r, k)];
            }
        }
    }
    out
}

/// Dense matrix of a circuit built gate by gate from Kronecker products.
pub fn circuit_oracle(circ: &muxsynth_core::Circuit) -> Mat {
    use muxsynth_core::Gate;
    let nb = circ.nb;
    let mut m = Mat::identity(1 << nb);
    for g in &circ.gates {
        let gm = match *g {
            Gate::Cnot { control, target } => mux_oracle(nb, target, &[control], &[Mat2::IDENTITY, pauli(0)]),
            Gate::Rotn { axis, angle, target } => {
                let u = expm_i_sigma([axis[0] * angle, axis[1] * angle, axis[2] * angle]);
                tensor(nb, |q| if q == target { u.to_mat() } else { Mat::identity(2) })
            }
            Gate::Phase { angle } => Mat::identity(1 << nb).scale(cis(angle)),
        };
        m = &gm * &m;
    }
    m
}

pub fn mat2_dist(a: &Mat2, b: &Mat2) -> f64 {
    (0..4).map(|k| (a.0[k] - b.0[k]).norm_sqr()).sum::<f64>().sqrt()
}
