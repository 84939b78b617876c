//! Correction cost of a set of 2×2 unitaries under a candidate weak axis and
//! the search for the axis that minimizes it.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{cross, Mat2};
use crate::su2param::{parameterize, Side, Su2Params, Triad};

/// Members indexed by control bitstring, with the `(iσw)` flag of each.
#[derive(Clone, Debug, PartialEq)]
pub struct U2Subset {
    pub members: Vec<Mat2>,
    pub flags: Vec<bool>,
}

impl U2Subset {
    pub fn new(members: Vec<Mat2>) -> U2Subset {
        let flags = alloc::vec![false; members.len()];
        U2Subset { members, flags }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSolution {
    pub kx: f64,
    pub ky: f64,
    pub triad: Triad,
    pub cost: f64,
    pub residuals: (f64, f64),
}

/// `ŵ ∝ (kx, ky, 1)`, `ŝ1 ∝ (ky, −kx, 0)`, `ŝ2 = ŵ × ŝ1`; `(0, 0)` maps to the
/// standard triad.
pub fn triad_from_k(kx: f64, ky: f64) -> Triad {
    if kx == 0.0 && ky == 0.0 {
        return Triad::STANDARD;
    }
    let nw = (1.0 + kx * kx + ky * ky).sqrt();
    let ns = kx.hypot(ky);
    let w = [kx / nw, ky / nw, 1.0 / nw];
    let s1 = [ky / ns, -kx / ns, 0.0];
    let s2 = cross(w, s1);
    Triad { s1, s2, w }
}

/// `4·Σ(1 − cos γ_b)`.
pub fn diagonal_cost(gammas: impl IntoIterator<Item = f64>) -> f64 {
    gammas.into_iter().map(|g| 4.0 * (1.0 - g.cos())).sum()
}

/// The common shift `g` minimizing `diagonal_cost(γ_b − g)`.
pub fn best_common_shift(gammas: &[f64]) -> f64 {
    let (s, c) = gammas.iter().fold((0.0, 0.0), |(s, c), g| (s + g.sin(), c + g.cos()));
    if s.hypot(c) < 1e-300 {
        0.0
    } else {
        s.atan2(c)
    }
}

fn member_params(subset: &U2Subset, triad: &Triad) -> Result<Vec<Su2Params>> {
    subset
        .members
        .iter()
        .zip(&subset.flags)
        .map(|(m, &f)| parameterize(m, triad, Side::Dol, f))
        .collect()
}

/// `4·Σ_b (1 − cos γ_b)` with `γ_b` the diagonal-on-left angle of member `b`.
pub fn correction_cost(subset: &U2Subset, triad: &Triad) -> Result<f64> {
    Ok(diagonal_cost(member_params(subset, triad)?.iter().map(|p| p.gamma)))
}

/// Stationarity residuals `(F1, F2)` of the cost at weak axis `(kx, ky, 1)`.
pub fn residuals(kx: f64, ky: f64, subset: &U2Subset) -> Result<(f64, f64)> {
    let t = triad_from_k(kx, ky);
    let params = member_params(subset, &t)?;
    let s = [t.s1, t.s2];
    let mut out = [0.0; 2];
    for p in &params {
        let th = p.theta();
        let (q, c) = th.sin_cos();
        let (x1, x2) = if th < 1e-12 { (0.0, 0.0) } else { (p.alpha / th, p.beta / th) };
        let sinc = if th < 1e-12 { 1.0 } else { q / th };
        let r: [f64; 3] = core::array::from_fn(|i| (p.alpha * t.s1[i] + p.beta * t.s2[i]) * sinc);
        let h = [r[1], -r[0], c];
        let hs = |v: [f64; 3]| h[0] * v[0] + h[1] * v[1] + h[2] * v[2];
        let denom = c - s[0][2] * hs(s[0]) - s[1][2] * hs(s[1]);
        if denom.abs() < 1e-10 {
            return Err(Error::DegenerateSubset);
        }
        let fb = if p.f { 1.0 } else { 0.0 };
        let sg = p.gamma.sin();
        for (j, x) in [x1, x2].into_iter().enumerate() {
            out[j] += sg * (q * t.w[2] * x + fb * c * s[j][2]) / denom;
        }
    }
    Ok((out[0], out[1]))
}

fn cost_at(subset: &U2Subset, k: [f64; 2]) -> f64 {
    correction_cost(subset, &triad_from_k(k[0], k[1])).unwrap_or(f64::INFINITY)
}

/// Small deterministic direction for stepping off singular points.
fn nudge(k: [f64; 2], n: usize) -> [f64; 2] {
    let a = 2.399_963_229_728_653 * (n as f64 + 1.0);
    [k[0] + 1e-6 * a.cos(), k[1] + 1e-6 * a.sin()]
}

fn residuals_near(subset: &U2Subset, k: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
    for n in 0..8 {
        let p = if n == 0 { k } else { nudge(k, n) };
        if let Ok((a, b)) = residuals(p[0], p[1], subset) {
            return Some((p, [a, b]));
        }
    }
    None
}

/// Damped Newton on `(F1, F2)` with a forward-difference Jacobian, accepting
/// only steps that lower the cost. Returns the best point and whether the
/// residual norm reached 1e-6.
fn newton(subset: &U2Subset, init: [f64; 2], budget: usize) -> ([f64; 2], f64, bool) {
    let mut k = init;
    let mut cost = cost_at(subset, k);
    for _ in 0..budget {
        let Some((p, f)) = residuals_near(subset, k) else { break };
        if f[0].hypot(f[1]) <= 1e-6 {
            return (k, cost, true);
        }
        let step = 1e-6;
        let Some((_, fx)) = residuals_near(subset, [p[0] + step, p[1]]) else { break };
        let Some((_, fy)) = residuals_near(subset, [p[0], p[1] + step]) else { break };
        let j = [[(fx[0] - f[0]) / step, (fy[0] - f[0]) / step], [(fx[1] - f[1]) / step, (fy[1] - f[1]) / step]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 || !det.is_finite() {
            break;
        }
        let d = [-(j[1][1] * f[0] - j[0][1] * f[1]) / det, -(-j[1][0] * f[0] + j[0][0] * f[1]) / det];
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let cand = [p[0] + t * d[0], p[1] + t * d[1]];
            let c = cost_at(subset, cand);
            if c < cost {
                k = cand;
                cost = c;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (k, cost, false)
}

/// Nelder-Mead on the cost over `(kx, ky)`.
fn nelder_mead(subset: &U2Subset, start: [f64; 2], size: f64, iters: usize) -> ([f64; 2], f64) {
    let f = |p: [f64; 2]| cost_at(subset, p);
    let mut s = [start, [start[0] + size, start[1]], [start[0], start[1] + size]];
    let mut v = s.map(f);
    for _ in 0..iters {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(core::cmp::Ordering::Equal));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        if (v[2] - v[0]).abs() <= 1e-14 * (1.0 + v[0].abs()) && (s[2][0] - s[0][0]).hypot(s[2][1] - s[0][1]) < 1e-10 {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let r = at(-1.0);
        let fr = f(r);
        if fr < v[0] {
            let e = at(-2.0);
            let fe = f(e);
            if fe < fr {
                s[2] = e;
                v[2] = fe;
            } else {
                s[2] = r;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = r;
            v[2] = fr;
        } else {
            let (ct, fc) = if fr < v[2] { let p = at(-0.5); (p, f(p)) } else { let p = at(0.5); (p, f(p)) };
            if fc < v[2].min(fr) {
                s[2] = ct;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = [(s[0][0] + s[i][0]) / 2.0, (s[0][1] + s[i][1]) / 2.0];
                    v[i] = f(s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(core::cmp::Ordering::Equal)).unwrap();
    (s[best], v[best])
}

/// Searches for the weak axis minimizing the correction cost.
///
/// Newton on the stationarity residuals runs first. If it stalls, or a coarse
/// 17×17 scan of `[−4, 4]²` finds a cheaper point than where it stopped,
/// Nelder-Mead restarts from the best scan points. The result never costs
/// more than `init`.
pub fn optimum_axis(subset: &U2Subset, init: (f64, f64)) -> Result<AxisSolution> {
    if subset.members.is_empty() {
        return Err(Error::DegenerateSubset);
    }
    let init = [init.0, init.1];
    let c0 = cost_at(subset, init);
    let (mut best, mut best_cost, converged) = newton(subset, init, 100);
    if !best_cost.is_finite() {
        best = init;
        best_cost = c0;
    }

    let mut scan: Vec<([f64; 2], f64)> = Vec::with_capacity(17 * 17);
    for i in 0..17 {
        for j in 0..17 {
            let p = [-4.0 + 0.5 * i as f64, -4.0 + 0.5 * j as f64];
            scan.push((p, cost_at(subset, p)));
        }
    }
    scan.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
    if !converged || scan[0].1 < best_cost - 1e-9 {
        let mut starts = alloc::vec![best];
        starts.extend(scan.iter().take(3).map(|s| s.0));
        for s in starts {
            let (p, c) = nelder_mead(subset, s, 0.25, 400);
            if c < best_cost {
                best = p;
                best_cost = c;
            }
        }
    }
    if !best_cost.is_finite() {
        return Err(Error::DegenerateSubset);
    }
    if best_cost > c0 {
        best = init;
        best_cost = c0;
    }
    let triad = triad_from_k(best[0], best[1]);
    let residuals = residuals(best[0], best[1], subset).unwrap_or((f64::NAN, f64::NAN));
    Ok(AxisSolution { kx: best[0], ky: best[1], triad, cost: best_cost, residuals })
}
