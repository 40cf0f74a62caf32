//! Parity-label algebra, circuits and circuit metrics.

pub mod circuit;
pub mod gate;
pub mod io;
pub mod label;
pub mod metrics;
pub mod state;

pub use circuit::{Circuit, CircuitError};
pub use gate::{Block, Gate, Op};
pub use label::{binomial, k_body_labels, Label};
pub use metrics::{metrics, Metrics};
pub use state::{run_and_collect, LabelState, TrackError};
