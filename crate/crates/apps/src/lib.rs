//! Algorithm synthesizers built on label-tracking generators: QFT,
//! approximate QFT, QAOA and a Trotter step of the mixed-field Ising model.

pub mod problem;
pub mod qaoa;
pub mod qft;
pub mod schedule;
pub mod trotter;

pub use problem::{ProblemError, QuboProblem};
pub use qaoa::{synth_qaoa, QaoaAngles};
pub use qft::{synth_qft, synth_qft_approx};
pub use schedule::{pack, RotationRecord, RotationSchedule, ScheduleError};
pub use trotter::synth_trotter_mfim;

use thiserror::Error;
use twine_core::{Circuit, TrackError};
use twine_graph::GenError;

#[derive(Debug, Error, PartialEq)]
pub enum AppError {
    #[error("{0}")]
    Problem(#[from] ProblemError),
    #[error("{0}")]
    Gen(#[from] GenError),
    #[error("{0}")]
    Track(#[from] TrackError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("problem has {problem} variables but the graph has {graph} qubits")]
    Size { problem: usize, graph: usize },
    #[error("label {0} is never produced")]
    NeverProduced(String),
    #[error("no qubit carries the x-label of logical qubit {0} alone")]
    XLabel(usize),
    #[error("logical qubit {0} is not restored at the end")]
    NotRestored(usize),
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// A synthesized circuit with its rotation bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub schedule: RotationSchedule,
    /// `output[w]` is the qubit carrying logical qubit `w` at the end.
    pub output: Vec<usize>,
    /// Logical qubits in the order the algorithm treats them. For the QFT,
    /// `order[0]` is the most significant input bit.
    pub order: Vec<usize>,
}

fn final_positions(b: &schedule::Builder) -> Result<Vec<usize>, AppError> {
    (0..b.n()).map(|w| b.z_single(w).ok_or(AppError::NotRestored(w))).collect()
}
