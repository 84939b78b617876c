//! Factoring a 2×2 unitary as `e^{iη}·e^{iγσz}·e^{i(ασ_{s1}+βσ_{s2})}·(iσw)^f`
//! over an arbitrary orthonormal triad, and the mirrored diagonal-on-right form.

use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{cis, cross, dot3, norm3, scale3, Mat2, C64, I};

/// Orthonormal frame: strong directions `s1`, `s2` and weak axis `w = s1 × s2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triad {
    pub s1: [f64; 3],
    pub s2: [f64; 3],
    pub w: [f64; 3],
}

impl Triad {
    /// `(ê_x, ê_y, ê_z)`.
    pub const STANDARD: Triad = Triad { s1: [1.0, 0.0, 0.0], s2: [0.0, 1.0, 0.0], w: [0.0, 0.0, 1.0] };

    /// Completes `w = s1 × s2`; the inputs must already be orthonormal.
    pub fn new(s1: [f64; 3], s2: [f64; 3]) -> Triad {
        Triad { s1, s2, w: cross(s1, s2) }
    }

    /// Largest deviation from orthonormality and right-handedness.
    pub fn defect(&self) -> f64 {
        let c = cross(self.s1, self.s2);
        let dw = norm3([c[0] - self.w[0], c[1] - self.w[1], c[2] - self.w[2]]);
        (norm3(self.s1) - 1.0)
            .abs()
            .max((norm3(self.s2) - 1.0).abs())
            .max(dot3(self.s1, self.s2).abs())
            .max(dw)
    }

    /// Flip the y components of the strong directions and re-complete.
    fn mirrored_y(&self) -> Triad {
        let f = |v: [f64; 3]| [v[0], -v[1], v[2]];
        Triad::new(f(self.s1), f(self.s2))
    }
}

/// Which side of the strong-plane rotation the `e^{iγσz}` factor sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `e^{iη} e^{iγσz} e^{iθ⃗·σ⃗} (iσw)^f`
    Dol,
    /// `e^{iη} (iσw)^f e^{iθ⃗·σ⃗} e^{iγσz}`
    Dor,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Params {
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub f: bool,
    pub side: Side,
}

impl Su2Params {
    /// `θ = √(α² + β²)`.
    pub fn theta(&self) -> f64 {
        self.alpha.hypot(self.beta)
    }
}

/// First row `(x, y)` of an SU(2) matrix `[[x, y], [−y*, x*]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XyPair {
    pub x: C64,
    pub y: C64,
}

impl XyPair {
    pub fn of(v: &Mat2) -> XyPair {
        XyPair { x: v.0[0], y: v.0[1] }
    }
}

/// `(η, V)` with `V = e^{−iη}U`, `det V = 1`, `η = ½·arg det U`.
pub fn project_su2(u: &Mat2) -> (f64, Mat2) {
    let eta = 0.5 * u.det().arg();
    (eta, u.scale(cis(-eta)))
}

/// Closed-form `(α, β, γ)` for the standard triad with `cos θ = |x| ≥ 0`.
pub fn dol_orthogonal(v: &Mat2) -> (f64, f64, f64) {
    let XyPair { x, y } = XyPair::of(v);
    let (ax, ay) = (x.norm(), y.norm());
    if ay == 0.0 {
        return (0.0, 0.0, x.arg());
    }
    if ax == 0.0 {
        let d = y / ay * FRAC_PI_2;
        return (d.im, d.re, 0.0);
    }
    let theta = ay.atan2(ax);
    let d = y * x.conj() / (ax * ay) * theta;
    (d.im, d.re, x.arg())
}

/// The γ equation with both sides multiplied through by `w_z²` and the tangent
/// denominators, scaled by `1/max(|x|², |y|²)`:
/// `|y|²(w_y cos φ_y + w_x sin φ_y)² − w_z²|x|² sin² φ_x`, `φ_• = ∠• − γ`.
fn gamma_equation(p: &XyPair, w: [f64; 3], gamma: f64) -> f64 {
    let (ax2, ay2) = (p.x.norm_sqr(), p.y.norm_sqr());
    let scale = ax2.max(ay2);
    let (sy, cy) = (p.y.arg() - gamma).sin_cos();
    let sx = (p.x.arg() - gamma).sin();
    let lhs = w[1] * cy + w[0] * sy;
    (ay2 * lhs * lhs - w[2] * w[2] * ax2 * sx * sx) / scale
}

/// Normalized residual of the γ equation at `gamma` for weak axis `(kx, ky, 1)`.
pub fn gamma_residual(pair: &XyPair, kx: f64, ky: f64, gamma: f64) -> f64 {
    gamma_equation(pair, [kx, ky, 1.0], gamma)
}

/// Strong-plane rotation vector left after peeling `e^{iγσz}` off the left of
/// `[[x, y], [−y*, x*]]`, with `cos θ = Re(x e^{−iγ})`.
fn rotation_after(p: &XyPair, gamma: f64) -> (f64, [f64; 3]) {
    let ph = cis(-gamma);
    let z = p.x * ph;
    let q = p.y * ph;
    let u = [q.im, q.re, z.im];
    let s = norm3(u);
    let theta = s.atan2(z.re);
    let v = if s > 0.0 { scale3(u, theta / s) } else { [0.0; 3] };
    (z.re, v)
}

/// Whether `gamma` fully back-substitutes: branch `cos θ ≥ 0`, rotation
/// vector in the strong plane, and the rebuilt matrix equals the input.
fn admissible(p: &XyPair, w: [f64; 3], gamma: f64) -> bool {
    let (cos_theta, v) = rotation_after(p, gamma);
    if cos_theta < -1e-12 {
        return false;
    }
    let wn = norm3(w);
    let along = dot3(v, w) / wn;
    let vp = [v[0] - along * w[0] / wn, v[1] - along * w[1] / wn, v[2] - along * w[2] / wn];
    let rebuilt = Mat2::diag(cis(gamma), cis(-gamma)) * Mat2::exp_i_sigma(vp);
    let target = Mat2::new(p.x, p.y, -p.y.conj(), p.x.conj());
    rebuilt.dist(&target) <= 1e-9
}

fn wrap(a: f64) -> f64 {
    let t = 2.0 * PI;
    let mut a = a - t * ((a + PI) / t).floor();
    if a >= PI {
        a -= t;
    }
    a
}

/// Solves the γ equation for an arbitrary (not necessarily `w_z ≠ 0`) weak axis.
pub(crate) fn solve_gamma_axis(p: &XyPair, w: [f64; 3]) -> Result<f64> {
    let (ax, ay) = (p.x.norm(), p.y.norm());
    if ay <= 1e-15 {
        return Ok(p.x.arg());
    }
    if ax <= 1e-15 {
        if w[0].abs() <= 1e-15 && w[1].abs() <= 1e-15 {
            return Ok(0.0);
        }
        // w_y cos φ + w_x sin φ = 0 with φ = ∠y − γ.
        let phi = (-w[1]).atan2(w[0]);
        let g1 = wrap(p.y.arg() - phi);
        let g2 = wrap(g1 + PI);
        return Ok(if g1.abs() <= g2.abs() { g1 } else { g2 });
    }

    // The factor |y|(w_y cos φ_y + w_x sin φ_y) + w_z|x| sin φ_x of the squared
    // equation expands to A·cos γ + B·sin γ, with roots δ ± π/2.
    let (sx, cx) = p.x.arg().sin_cos();
    let (sy, cy) = p.y.arg().sin_cos();
    let a = ay * (w[1] * cy + w[0] * sy) + w[2] * ax * sx;
    let b = ay * (w[1] * sy - w[0] * cy) - w[2] * ax * cx;
    let mut roots = alloc::vec::Vec::with_capacity(4);
    if a.hypot(b) <= 1e-14 * ax.max(ay) {
        // Every γ solves it; keep the branch representatives.
        roots.extend_from_slice(&[0.0, -PI]);
    } else {
        let delta = b.atan2(a);
        roots.extend_from_slice(&[delta + FRAC_PI_2, delta - FRAC_PI_2]);
    }
    roots
        .into_iter()
        .map(wrap)
        .filter(|&g| admissible(p, w, g))
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .ok_or(Error::NoGammaRoot)
}

/// Root γ of the diagonal-angle equation for weak axis `(kx, ky, 1)`.
///
/// The squared equation factors into two sinusoids in γ; only the one that
/// puts the leftover rotation in the strong plane back-substitutes, and its
/// two roots are solved in closed form. A root is kept only if the full
/// back-substitution rebuilds `(x, y)` with `cos θ ≥ 0`; among the survivors
/// the smallest `|γ|` wins.
pub fn solve_gamma(pair: &XyPair, kx: f64, ky: f64) -> Result<f64> {
    if !kx.is_finite() || !ky.is_finite() {
        return Err(Error::Gauge);
    }
    solve_gamma_axis(pair, [kx, ky, 1.0])
}

/// Diagonal-on-left parameters of `V ∈ SU(2)`; with `f` set, `V·(−iσw)` is
/// factored and `(iσw)` re-attached on the right.
pub fn dol_oblique(v: &Mat2, triad: &Triad, f: bool) -> Result<Su2Params> {
    let v = if f { *v * Mat2::sigma(triad.w).scale(-I) } else { *v };
    let p = XyPair::of(&v);
    let gamma = solve_gamma_axis(&p, triad.w)?;
    let (_, rot) = rotation_after(&p, gamma);
    Ok(Su2Params {
        eta: 0.0,
        alpha: dot3(rot, triad.s1),
        beta: dot3(rot, triad.s2),
        gamma,
        f,
        side: Side::Dol,
    })
}

/// Diagonal-on-right parameters, via the diagonal-on-left factoring of `Vᵀ`
/// over the triad with y components of the strong directions negated.
pub fn dor_oblique(v: &Mat2, triad: &Triad, f: bool) -> Result<Su2Params> {
    // (iσw)ᵀ = −iσ_{w'} for the mirrored triad, hence the sign when f is set.
    let vt = v.transpose();
    let vt = if f { vt.scale(C64::new(-1.0, 0.0)) } else { vt };
    let p = dol_oblique(&vt, &triad.mirrored_y(), f)?;
    Ok(Su2Params { side: Side::Dor, ..p })
}

/// Factors an arbitrary 2×2 unitary on the requested side, retrying with the
/// opposite flag when the preferred one has no admissible root.
///
/// `√det U` fixes `η` only up to π; the branch taken is the one giving
/// `|γ| ≤ π/2`, since `−V` has the same parameters with `γ + π`.
pub fn parameterize(u: &Mat2, triad: &Triad, side: Side, f: bool) -> Result<Su2Params> {
    let (eta, v) = project_su2(u);
    let run = |v: &Mat2, f| match side {
        Side::Dol => dol_oblique(v, triad, f),
        Side::Dor => dor_oblique(v, triad, f),
    };
    let p = run(&v, f).or_else(|_| run(&v, !f))?;
    if p.gamma.cos() >= 0.0 {
        return Ok(Su2Params { eta, ..p });
    }
    let neg = v.scale(C64::new(-1.0, 0.0));
    match run(&neg, p.f) {
        Ok(q) if q.gamma.cos() > p.gamma.cos() => Ok(Su2Params { eta: wrap(eta + PI), ..q }),
        _ => Ok(Su2Params { eta, ..p }),
    }
}

/// Rebuilds the 2×2 unitary described by `params` over `triad`.
pub fn su2_reconstruct(params: &Su2Params, triad: &Triad) -> Mat2 {
    let th = [
        params.alpha * triad.s1[0] + params.beta * triad.s2[0],
        params.alpha * triad.s1[1] + params.beta * triad.s2[1],
        params.alpha * triad.s1[2] + params.beta * triad.s2[2],
    ];
    let rot = Mat2::exp_i_sigma(th);
    let diag = Mat2::diag(cis(params.gamma), cis(-params.gamma));
    let flip = if params.f { Mat2::sigma(triad.w).scale(I) } else { Mat2::IDENTITY };
    let core = match params.side {
        Side::Dol => diag * rot * flip,
        Side::Dor => flip * rot * diag,
    };
    core.scale(cis(params.eta))
}

/// SU(2) element `R = i σ·m̂` with `R σ_from R† = σ_to`.
pub fn rotation_taking(from: [f64; 3], to: [f64; 3]) -> Mat2 {
    let sum = [from[0] + to[0], from[1] + to[1], from[2] + to[2]];
    let n = norm3(sum);
    let m = if n > 1e-8 {
        scale3(sum, 1.0 / n)
    } else {
        // Antipodal: any axis perpendicular to `from`.
        let trial = if from[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let p = cross(from, trial);
        scale3(p, 1.0 / norm3(p))
    };
    Mat2::exp_i_sigma(scale3(m, FRAC_PI_2))
}
