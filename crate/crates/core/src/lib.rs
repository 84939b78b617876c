//! Compiles a `2^nb`-dimensional unitary into CNOTs and one-qubit rotations.
//!
//! The matrix is split by a recursive cosine-sine decomposition into
//! `2^nb − 1` uniformly controlled one-qubit gates. Each of those is peeled
//! into a diagonal and a part that needs `2^{nb−1} − 1` CNOTs, the diagonals
//! are pushed along the sequence, and whatever diagonal is left at the end is
//! either expanded or, after relaxation sweeps, found to need no CNOTs.
//!
//! `no_std`; needs `alloc`.

#![no_std]

extern crate alloc;

pub mod axisopt;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod matcore;
pub mod muxseo;
pub mod pipeline;
pub mod su2param;

pub use circuit::{simulate, Circuit, CompileStats, Gate, Mode};
pub use error::{Error, Result};
pub use linalg::{Mat, Mat2, C64};
pub use pipeline::{compile_nr, compile_r, RelaxationReport};
