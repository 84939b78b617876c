//! The fixture corpus, generated deterministically.
//!
//! `cargo run -p muxsynth --example make_fixtures` writes it to
//! `tests/fixtures`; a test checks the checked-in files still match.

use muxsynth_core::linalg::{cis, Mat, C64};
use muxsynth_core::matcore::haar_random_unitary;
use muxsynth_core::pipeline::strip_residual;
use muxsynth_core::Result;

use crate::format::format_matrix;

/// Valid matrix fixtures.
pub fn matrices() -> Result<Vec<(&'static str, Mat)>> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let perm = |p: [usize; 4]| Mat::from_fn(4, 4, |r, c| if p[c] == r { one } else { zero });
    let phases: Vec<C64> = (0..8).map(|k| cis(0.37 * (k * k) as f64 - 1.1 * k as f64)).collect();
    Ok(vec![
        ("identity_1.mat", Mat::identity(2)),
        ("identity_2.mat", Mat::identity(4)),
        ("identity_3.mat", Mat::identity(8)),
        // CNOT with control 1: both cosine-sine angles 0.
        ("cnot_2.mat", perm([0, 1, 3, 2])),
        // X on qubit 1: both angles π/2.
        ("flip_high_2.mat", perm([2, 3, 0, 1])),
        // One angle 0, one π/2.
        ("swap_2.mat", perm([0, 2, 1, 3])),
        ("diagonal_3.mat", Mat::diag(&phases)),
        ("haar_1_seed5.mat", haar_random_unitary(1, 5)?),
        ("haar_2_seed1.mat", haar_random_unitary(2, 1)?),
        ("haar_2_seed2.mat", haar_random_unitary(2, 2)?),
        ("haar_3_seed7.mat", haar_random_unitary(3, 7)?),
        ("haar_4_seed3.mat", haar_random_unitary(4, 3)?),
        ("converged_2.mat", strip_residual(&haar_random_unitary(2, 1)?)?),
        ("converged_3.mat", strip_residual(&haar_random_unitary(3, 7)?)?),
        ("converged_4.mat", strip_residual(&haar_random_unitary(4, 3)?)?),
    ])
}

/// Inputs every command must reject, with the text of each file.
pub fn malformed() -> Vec<(&'static str, String)> {
    vec![
        ("bad_rows.mat", "2\n1,0 0,0 0,0 0,0\n0,0 1,0 0,0 0,0\n0,0 0,0 1,0 0,0\n".to_string()),
        ("bad_entry.mat", "1\n1,0 0,0\n0,0 1;0\n".to_string()),
        ("bad_header.mat", "two\n1,0 0,0\n0,0 1,0\n".to_string()),
        ("bad_width.mat", "1\n1,0 0,0 0,0\n0,0 1,0\n".to_string()),
        ("non_unitary.mat", "1\n1,0 0,0\n0,0 2,0\n".to_string()),
        ("bad_cnot.circ", "NB 4\nCNOT 5 5\n".to_string()),
        ("bad_opcode.circ", "NB 2\nSWAP 0 1\n".to_string()),
    ]
}

/// Every fixture file as `(name, contents)`.
pub fn files() -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> =
        matrices()?.into_iter().map(|(n, m)| (n.to_string(), format_matrix(&m))).collect();
    out.extend(malformed().into_iter().map(|(n, t)| (n.to_string(), t)));
    out.push(("empty_2.circ".to_string(), "NB 2\n".to_string()));
    Ok(out)
}
