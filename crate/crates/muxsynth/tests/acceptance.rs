//! Acceptance run: one line per criterion.
//!
//! Runs without the libtest harness so every line reaches the console. The
//! process fails only on an unexpected outcome; criterion 1 fails in a known,
//! pinned way (the single sweep beats the reference count by two CNOTs).

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use common::*;
use muxsynth_core::axisopt::{correction_cost, optimum_axis, triad_from_k, U2Subset};
use muxsynth_core::linalg::{Mat, Mat2};
use muxsynth_core::matcore::{csd, haar_random_unitary};
use muxsynth_core::muxseo::{expand_convenient, expand_d_multiplexor, split_convenient, Multiplexor, PlaneMultiplexor};
use muxsynth_core::pipeline::{lower_bound, nr_emitted, r_formula, strip_residual};
use muxsynth_core::su2param::{dol_oblique, dol_orthogonal, parameterize, su2_reconstruct, Side, Triad};
use muxsynth_core::{compile_nr, compile_r, simulate};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    /// Fails exactly as documented.
    KnownFail,
    Fail,
}

struct Report {
    outcome: Outcome,
    detail: String,
}

impl Report {
    fn check(ok: bool, detail: String) -> Report {
        Report { outcome: if ok { Outcome::Pass } else { Outcome::Fail }, detail }
    }
}

/// Every CNOT count emitted during the run, by qubit count.
#[derive(Default)]
struct Counts(Vec<(usize, usize)>);

fn ang_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

fn criterion_1(counts: &mut Counts) -> Report {
    let reference = [7usize, 29, 121];
    let mut seen = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for (i, nb) in (2..=4).enumerate() {
        let mut got = std::collections::BTreeSet::new();
        for seed in 0..50 {
            let u = haar_random_unitary(nb, 1000 * nb as u64 + seed).unwrap();
            let (c, stats) = compile_nr(&u).unwrap();
            got.insert(c.cnot_count());
            counts.0.push((nb, c.cnot_count()));
            worst_ratio = worst_ratio.max(stats.reconstruction_error / (1e-8 * (1 << nb) as f64));
        }
        seen.push((nb, reference[i], got));
    }
    let exact = |want: &dyn Fn(usize, usize) -> usize| {
        seen.iter().all(|(nb, r, got)| got.len() == 1 && got.contains(&want(*nb, *r)))
    };
    let accurate = worst_ratio <= 1.0;
    let summary: Vec<String> = seen.iter().map(|(nb, r, got)| format!("nb={nb} emitted {got:?} reference {r}")).collect();
    let detail = format!("{}; worst error/tolerance {worst_ratio:.2e}", summary.join(", "));
    let outcome = if accurate && exact(&|_, r| r) {
        Outcome::Pass
    } else if accurate && exact(&|nb, _| nr_emitted(nb)) {
        Outcome::KnownFail
    } else {
        Outcome::Fail
    };
    Report { outcome, detail }
}

fn criterion_2(counts: &mut Counts) -> Report {
    let mut parts = Vec::new();
    let mut ok = true;
    for nb in [2usize, 3] {
        let (mut converged, mut verified) = (0, 0);
        for seed in 0..100 {
            let u = haar_random_unitary(nb, 2000 * nb as u64 + seed).unwrap();
            let (c, report, stats) = compile_r(&u, 1e-8, 20).unwrap();
            counts.0.push((nb, c.cnot_count()));
            if stats.reconstruction_error <= 1e-8 * (1 << nb) as f64 {
                verified += 1;
            }
            if report.converged {
                converged += 1;
                ok &= c.cnot_count() == r_formula(nb);
            }
        }
        ok &= verified == 100;
        parts.push(format!("nb={nb} Haar: converged {converged}/100, verified {verified}/100"));
    }
    for (name, nb) in [("converged_2.mat", 2), ("converged_3.mat", 3), ("converged_4.mat", 4)] {
        let u = muxsynth::corpus::matrices().unwrap().into_iter().find(|(n, _)| *n == name).unwrap().1;
        let (c, report, stats) = compile_r(&u, 1e-8, 20).unwrap();
        counts.0.push((nb, c.cnot_count()));
        ok &= report.converged && c.cnot_count() == r_formula(nb) && stats.reconstruction_error <= 1e-8 * (1 << nb) as f64;
        parts.push(format!("{name}: converged={} cnots={} want {}", report.converged, c.cnot_count(), r_formula(nb)));
    }
    Report::check(ok, parts.join(", "))
}

fn criterion_3(counts: &Counts) -> Report {
    let below: Vec<_> = counts.0.iter().filter(|(nb, c)| *c < lower_bound(*nb)).collect();
    let u = strip_residual(&haar_random_unitary(2, 77).unwrap()).unwrap();
    let (c, report, _) = compile_r(&u, 1e-8, 20).unwrap();
    let tight = report.converged && c.cnot_count() == lower_bound(2) && lower_bound(2) == 3;
    Report::check(
        below.is_empty() && tight,
        format!(
            "{} counts checked, {} below bound; converged nb=2 count {} vs bound {}",
            counts.0.len(),
            below.len(),
            c.cnot_count(),
            lower_bound(2)
        ),
    )
}

fn criterion_4() -> Report {
    let mut rng = TestRng::new(404);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let u = random_u2(&mut rng);
        let t = random_triad(&mut rng);
        let side = if rng.bit() { Side::Dol } else { Side::Dor };
        let p = parameterize(&u, &t, side, rng.bit()).unwrap();
        worst = worst.max(mat2_dist(&su2_reconstruct(&p, &t), &u));
    }
    let mut agree: f64 = 0.0;
    for _ in 0..1000 {
        let v = random_su2(&mut rng);
        let (a, b, g) = dol_orthogonal(&v);
        let p = dol_oblique(&v, &Triad::STANDARD, false).unwrap();
        agree = agree.max(ang_diff(p.alpha, a)).max(ang_diff(p.beta, b)).max(ang_diff(p.gamma, g));
    }
    Report::check(
        worst <= 1e-9 && agree <= 1e-10,
        format!("roundtrip worst {worst:.2e} (tol 1e-9), orthogonal vs oblique worst {agree:.2e} (tol 1e-10)"),
    )
}

/// `(A ⊕ B)·D(θ)·(C ⊕ E)` with random unitary blocks.
fn planted(thetas: &[f64], rng: &mut TestRng) -> Mat {
    let h = thetas.len();
    let mut d = Mat::zeros(2 * h, 2 * h);
    for (k, t) in thetas.iter().enumerate() {
        d[(k, k)] = c(t.cos(), 0.0);
        d[(k, h + k)] = c(t.sin(), 0.0);
        d[(h + k, k)] = c(-t.sin(), 0.0);
        d[(h + k, h + k)] = c(t.cos(), 0.0);
    }
    let l = Mat::direct_sum(&qr_unitary(h, rng), &qr_unitary(h, rng));
    let r = Mat::direct_sum(&qr_unitary(h, rng), &qr_unitary(h, rng));
    &(&l * &d) * &r
}

fn criterion_5() -> Report {
    let mut rng = TestRng::new(505);
    let mut cases: Vec<Mat> = Vec::new();
    for (nb, n) in [(1, 30), (2, 30), (3, 30), (4, 30), (5, 30), (6, 30), (7, 12), (8, 8)] {
        for i in 0..n {
            cases.push(if i % 2 == 0 { haar_random_unitary(nb, 5000 + i as u64).unwrap() } else { qr_unitary(1 << nb, &mut rng) });
        }
    }
    let random = cases.len();
    let h = std::f64::consts::FRAC_PI_2;
    for thetas in [vec![0.0; 4], vec![h; 4], vec![0.0, h, 0.0, h], vec![h, 0.3, 0.0, 1.2], vec![0.0; 16], vec![h; 16]] {
        cases.push(planted(&thetas, &mut rng));
    }
    for (name, m) in muxsynth::corpus::matrices().unwrap() {
        if ["cnot_2.mat", "flip_high_2.mat", "swap_2.mat", "identity_3.mat", "diagonal_3.mat"].contains(&name) {
            cases.push(m);
        }
    }
    let mut worst_ratio: f64 = 0.0;
    for u in &cases {
        let n = u.rows() as f64;
        worst_ratio = worst_ratio.max(csd(u).unwrap().reconstruct().dist(u) / (1e-10 * n));
    }
    Report::check(
        random == 200 && worst_ratio <= 1.0,
        format!("{random} random (dims 2..256) + {} degenerate, worst error/(1e-10 N) {worst_ratio:.2e}", cases.len() - random),
    )
}

fn layout(nb: usize, nk: usize, rng: &mut TestRng) -> (usize, Vec<usize>) {
    let target = rng.below(nb);
    let mut others: Vec<usize> = (0..nb).filter(|&q| q != target).collect();
    while others.len() > nk {
        others.remove(rng.below(others.len()));
    }
    (target, others)
}

fn criterion_6() -> Report {
    let mut rng = TestRng::new(606);
    let (mut worst, mut count_ok) = (0.0f64, true);
    for nk in 1..=3 {
        for trial in 0..100 {
            let nb = nk + 1 + trial % 2;
            let (t, ctl) = layout(nb, nk, &mut rng);
            let members: Vec<Mat2> = (0..1 << nk).map(|_| random_u2(&mut rng)).collect();
            let side = if trial % 3 == 0 { Side::Dor } else { Side::Dol };
            let (delta, conv) = split_convenient(&Multiplexor::new(nb, t, ctl.clone(), members.clone()).unwrap(), side);
            let circ = expand_convenient(&conv);
            count_ok &= circ.cnot_count() == (1 << nk) - 1;
            let sim = simulate(&circ).unwrap();
            worst = worst.max(sim.dist(&mux_oracle(nb, t, &ctl, &conv.members())));
            // Together with its diagonal the circuit rebuilds the original multiplexor.
            let whole = match side {
                Side::Dol => &delta.operator() * &sim,
                Side::Dor => &sim * &delta.operator(),
            };
            worst = worst.max(whole.dist(&mux_oracle(nb, t, &ctl, &members)));

            let (t, ctl) = layout(nb, nk, &mut rng);
            let triad = random_triad(&mut rng);
            let dir = rng.angle();
            let a: Vec<f64> = (0..1 << nk).map(|_| rng.range(-3.0, 3.0)).collect();
            let phi1: Vec<f64> = a.iter().map(|x| x * dir.cos()).collect();
            let phi2: Vec<f64> = a.iter().map(|x| x * dir.sin()).collect();
            let d_members: Vec<Mat2> = (0..1 << nk)
                .map(|b| expm_i_sigma(std::array::from_fn(|i| phi1[b] * triad.s1[i] + phi2[b] * triad.s2[i])))
                .collect();
            let dm = PlaneMultiplexor::new(nb, t, ctl.clone(), triad, phi1, phi2).unwrap();
            let circ = expand_d_multiplexor(&dm).unwrap();
            count_ok &= circ.cnot_count() == 1 << nk;
            worst = worst.max(simulate(&circ).unwrap().dist(&mux_oracle(nb, t, &ctl, &d_members)));
        }
    }
    Report::check(
        count_ok && worst <= 1e-9,
        format!("300 convenient + 300 D multiplexors, counts exact: {count_ok}, worst oracle error {worst:.2e} (tol 1e-9)"),
    )
}

fn grid_min(s: &U2Subset) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..64 {
        for j in 0..64 {
            let k = (-4.0 + 8.0 * i as f64 / 63.0, -4.0 + 8.0 * j as f64 / 63.0);
            if let Ok(v) = correction_cost(s, &triad_from_k(k.0, k.1)) {
                best = best.min(v);
            }
        }
    }
    best
}

fn criterion_7() -> Report {
    let mut rng = TestRng::new(707);
    let mut zero_worst: f64 = 0.0;
    for _ in 0..20 {
        let n = unit3(&mut rng);
        let s = U2Subset::new(
            (0..6)
                .map(|_| {
                    let a = rng.range(-3.0, 3.0);
                    expm_i_sigma([n[0] * a, n[1] * a, n[2] * a]).scale(cis(rng.angle()))
                })
                .collect(),
        );
        zero_worst = zero_worst.max(optimum_axis(&s, (0.0, 0.0)).unwrap().cost);
    }
    let mut grid_gap = f64::NEG_INFINITY;
    for _ in 0..20 {
        let s = U2Subset::new((0..4).map(|_| random_u2(&mut rng)).collect());
        grid_gap = grid_gap.max(optimum_axis(&s, (0.0, 0.0)).unwrap().cost - grid_min(&s));
    }
    let mut rise = f64::NEG_INFINITY;
    for _ in 0..100 {
        let s = U2Subset::new((0..1 + rng.below(6)).map(|_| random_u2(&mut rng)).collect());
        let k = (rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
        let init = correction_cost(&s, &triad_from_k(k.0, k.1)).unwrap();
        rise = rise.max(optimum_axis(&s, k).unwrap().cost - init);
    }
    Report::check(
        zero_worst <= 1e-9 && grid_gap <= 1e-3 && rise <= 0.0,
        format!(
            "common-axis worst cost {zero_worst:.2e} (tol 1e-9), optimizer minus grid worst {grid_gap:.2e} (tol 1e-3), worst rise over init {rise:.2e}"
        ),
    )
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_muxsynth")).args(args).output().unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn criterion_8() -> Report {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let path = |n: &str| -> String { fixtures.join(n).to_string_lossy().into_owned() };
    let dir = std::env::temp_dir().join(format!("muxsynth-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out: PathBuf = dir.join("c.circ");
    let out = out.to_string_lossy().into_owned();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (name, _) in muxsynth::corpus::matrices().unwrap() {
        for mode in ["nr", "r"] {
            let (code, _) = run_cli(&["compile", "--in", &path(name), "--out", &out, "--mode", mode]);
            let (vcode, report) = run_cli(&["verify", "--in", &path(name), &out]);
            pairs += 1;
            if code != 0 || vcode != 0 || !report.contains("verify: pass") {
                failures.push(format!("{name}/{mode}"));
            }
        }
    }
    let mut malformed = 0;
    for (name, _) in muxsynth::corpus::malformed() {
        let code = if name.ends_with(".mat") {
            run_cli(&["compile", "--in", &path(name), "--out", &out]).0
        } else {
            run_cli(&["verify", "--in", &path("identity_2.mat"), &path(name)]).0
        };
        malformed += 1;
        if code != 2 {
            failures.push(format!("{name} exit {code}"));
        }
    }
    let rand_code = run_cli(&["rand", "--nb", "11"]).0;
    if rand_code != 2 {
        failures.push(format!("rand --nb 11 exit {rand_code}"));
    }
    std::fs::write(&out, "NB 2\nROTN 1 0 0 0.01 0\n").unwrap();
    let perturbed = run_cli(&["verify", "--in", &path("identity_2.mat"), &out]).0;
    if perturbed != 3 {
        failures.push(format!("perturbed verify exit {perturbed}"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Report::check(
        failures.is_empty(),
        format!("{pairs} compile/verify pairs, {malformed} malformed inputs exit 2, perturbed exit 3; failures {failures:?}"),
    )
}

type Criterion = Box<dyn FnOnce(&mut Counts) -> Report>;

fn main() {
    let mut counts = Counts::default();
    let mut unexpected = 0;
    let criteria: Vec<(usize, f64, Criterion)> = vec![
        (1, 5.0, Box::new(criterion_1)),
        (2, f64::INFINITY, Box::new(criterion_2)),
        (3, f64::INFINITY, Box::new(|c: &mut Counts| criterion_3(c))),
        (4, 2.0, Box::new(|_: &mut Counts| criterion_4())),
        (5, 30.0, Box::new(|_: &mut Counts| criterion_5())),
        (6, f64::INFINITY, Box::new(|_: &mut Counts| criterion_6())),
        (7, f64::INFINITY, Box::new(|_: &mut Counts| criterion_7())),
        (8, f64::INFINITY, Box::new(|_: &mut Counts| criterion_8())),
    ];
    for (n, budget, f) in criteria {
        let start = Instant::now();
        let mut r = f(&mut counts);
        let secs = start.elapsed().as_secs_f64();
        if secs > budget {
            r.outcome = Outcome::Fail;
            r.detail.push_str(&format!("; over the {budget} s budget"));
        }
        let label = match r.outcome {
            Outcome::Pass => "PASS",
            Outcome::KnownFail => "FAIL (known)",
            Outcome::Fail => "FAIL",
        };
        println!("criterion {n}: {label} [{secs:.2} s] {}", r.detail);
        if r.outcome == Outcome::Fail {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
