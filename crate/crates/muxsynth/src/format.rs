//! Text formats for matrices and circuits.
//!
//! Matrix files: a line holding `nb`, then `2^nb` rows of `2^nb`
//! whitespace-separated `re,im` entries. Circuit files: a `NB <nb>` header,
//! then one gate per line (`PHASE <angle>`, `ROTN <nx> <ny> <nz> <angle>
//! <target>`, `CNOT <control> <target>`), in time order. Angles are radians.
//! Blank lines and lines starting with `#` are ignored on input.
//!
//! Qubit 0 is the least significant bit of a basis index, so on two qubits
//! `CNOT 0 1` maps column 1 (`|q1 q0⟩ = |01⟩`) to row 3.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use muxsynth_core::linalg::{norm3, Mat, C64};
use muxsynth_core::{Circuit, Gate};
use thiserror::Error;

/// Largest `nb` accepted in a matrix header.
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("expected {expected} rows for nb = {nb}, found {found}")]
    RowCount { nb: usize, expected: usize, found: usize },
    #[error("matrix is not unitary: ‖UU† − I‖_F = {residual:.3e}")]
    NotUnitary { residual: f64 },
}

impl FormatError {
    fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::Syntax { line, column, message: message.into() }
    }
}

/// What to do with a matrix whose unitarity defect exceeds 1e-8.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitarityCheck {
    Warn,
    Reject,
}

/// A parsed matrix and, under [`UnitarityCheck::Warn`], its defect when it
/// exceeded the threshold.
#[derive(Clone, Debug)]
pub struct MatrixFile {
    pub matrix: Mat,
    pub warning: Option<f64>,
}

pub const UNITARITY_THRESHOLD: f64 = 1e-8;

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    })
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (ci, (bi, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((ci, bi)),
            (true, Some((c0, b0))) => {
                out.push((c0 + 1, &line[b0..bi]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c0, b0)) = start {
        out.push((c0 + 1, &line[b0..]));
    }
    out
}

fn parse_f64(tok: &str, line: usize, column: usize) -> Result<f64, FormatError> {
    let v: f64 = tok.parse().map_err(|_| FormatError::syntax(line, column, format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        return Err(FormatError::syntax(line, column, format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

fn parse_usize(tok: &str, line: usize, column: usize, what: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| FormatError::syntax(line, column, format!("invalid {what} `{tok}`")))
}

fn parse_entry(tok: &str, line: usize, column: usize) -> Result<C64, FormatError> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| FormatError::syntax(line, column, format!("expected `re,im`, found `{tok}`")))?;
    let im_column = column + re.chars().count() + 1;
    let re = parse_f64(re, line, column)?;
    let im = parse_f64(im, line, im_column)?;
    Ok(C64::new(re, im))
}

pub fn parse_matrix(text: &str, check: UnitarityCheck) -> Result<MatrixFile, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| FormatError::syntax(1, 1, "missing nb header"))?;
    let htoks = tokens(header);
    if htoks.len() != 1 {
        return Err(FormatError::syntax(hl, htoks.get(1).map_or(1, |t| t.0), "header must be a single integer nb"));
    }
    let nb = parse_usize(htoks[0].1, hl, htoks[0].0, "qubit count")?;
    if !(1..=MAX_QUBITS).contains(&nb) {
        return Err(FormatError::syntax(hl, htoks[0].0, format!("nb must be in 1..={MAX_QUBITS}, found {nb}")));
    }
    let dim = 1usize << nb;
    let mut data = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    for (ln, line) in lines {
        let toks = tokens(line);
        if rows == dim {
            // Count every surplus row for the diagnostic.
            rows += 1;
            continue;
        }
        if toks.len() != dim {
            let col = toks.get(dim).map_or(line.chars().count() + 1, |t| t.0);
            return Err(FormatError::syntax(ln, col, format!("expected {dim} entries, found {}", toks.len())));
        }
        for (col, tok) in toks {
            data.push(parse_entry(tok, ln, col)?);
        }
        rows += 1;
    }
    if rows != dim {
        return Err(FormatError::RowCount { nb, expected: dim, found: rows });
    }
    let matrix = Mat::from_vec(dim, dim, data);
    let residual = matrix.unitarity_defect();
    let mut warning = None;
    if residual > UNITARITY_THRESHOLD {
        match check {
            UnitarityCheck::Reject => return Err(FormatError::NotUnitary { residual }),
            UnitarityCheck::Warn => warning = Some(residual),
        }
    }
    Ok(MatrixFile { matrix, warning })
}

/// Matrix text with 17 significant digits, enough to round-trip every `f64`.
pub fn format_matrix(u: &Mat) -> String {
    let nb = u.rows().trailing_zeros();
    let mut s = format!("{nb}\n");
    for r in 0..u.rows() {
        let row: Vec<String> = u.row(r).iter().map(|z| format!("{:.16e},{:.16e}", z.re, z.im)).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| FormatError::syntax(1, 1, "missing `NB <nb>` header"))?;
    let htoks = tokens(header);
    if htoks.len() != 2 || htoks[0].1 != "NB" {
        return Err(FormatError::syntax(hl, 1, "header must be `NB <nb>`"));
    }
    let nb = parse_usize(htoks[1].1, hl, htoks[1].0, "qubit count")?;
    if nb == 0 {
        return Err(FormatError::syntax(hl, htoks[1].0, "nb must be at least 1"));
    }
    let mut c = Circuit::new(nb);
    for (ln, line) in lines {
        let toks = tokens(line);
        let (op_col, op) = toks[0];
        let arity = match op {
            "PHASE" => 1,
            "ROTN" => 5,
            "CNOT" => 2,
            _ => return Err(FormatError::syntax(ln, op_col, format!("unknown opcode `{op}`"))),
        };
        if toks.len() != arity + 1 {
            return Err(FormatError::syntax(ln, op_col, format!("{op} takes {arity} operands, found {}", toks.len() - 1)));
        }
        let qubit = |i: usize| -> Result<usize, FormatError> {
            let (col, tok) = toks[i];
            let q = parse_usize(tok, ln, col, "qubit index")?;
            if q >= nb {
                return Err(FormatError::syntax(ln, col, format!("qubit {q} out of range for NB {nb}")));
            }
            Ok(q)
        };
        let num = |i: usize| parse_f64(toks[i].1, ln, toks[i].0);
        let gate = match op {
            "PHASE" => Gate::Phase { angle: num(1)? },
            "ROTN" => {
                let axis = [num(1)?, num(2)?, num(3)?];
                if (norm3(axis) - 1.0).abs() > 1e-12 {
                    return Err(FormatError::syntax(ln, toks[1].0, "rotation axis is not a unit vector"));
                }
                Gate::Rotn { axis, angle: num(4)?, target: qubit(5)? }
            }
            _ => {
                let (control, target) = (qubit(1)?, qubit(2)?);
                if control == target {
                    return Err(FormatError::syntax(ln, toks[2].0, "CNOT control equals target"));
                }
                Gate::Cnot { control, target }
            }
        };
        c.push(gate);
    }
    Ok(c)
}

pub fn format_circuit(c: &Circuit) -> String {
    let mut s = format!("NB {}\n", c.nb);
    for g in &c.gates {
        // Writing to a String cannot fail.
        let _ = match *g {
            Gate::Phase { angle } => writeln!(s, "PHASE {angle:.16e}"),
            Gate::Rotn { axis, angle, target } => {
                writeln!(s, "ROTN {:.16e} {:.16e} {:.16e} {angle:.16e} {target}", axis[0], axis[1], axis[2])
            }
            Gate::Cnot { control, target } => writeln!(s, "CNOT {control} {target}"),
        };
    }
    s
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_owned(), source })
}

pub fn read_matrix(path: &Path, check: UnitarityCheck) -> Result<MatrixFile, FormatError> {
    parse_matrix(&read(path)?, check)
}

pub fn write_matrix(u: &Mat, path: &Path) -> Result<(), FormatError> {
    write(path, &format_matrix(u))
}

pub fn read_circuit(path: &Path) -> Result<Circuit, FormatError> {
    parse_circuit(&read(path)?)
}

pub fn write_circuit(c: &Circuit, path: &Path) -> Result<(), FormatError> {
    write(path, &format_circuit(c))
}
