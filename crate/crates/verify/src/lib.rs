//! Certificates for generated circuits and a dense unitary oracle for small
//! registers.

mod dense;

pub use dense::{dense_unitary, equal_up_to_perm_phase, max_dense_qubits, permute_outputs, DenseMatrix};

use std::collections::BTreeSet;
use thiserror::Error;
use twine_core::{run_and_collect, Circuit, Gate, Label, LabelState, TrackError};
use twine_topology::ConnectivityGraph;

/// Tolerance for comparing synthesized circuits with their references.
pub const TOL_SYNTH: f64 = 1e-9;
/// Tolerance for algebraic identities such as C·C† = I.
pub const TOL_ALGEBRA: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("dense unitary on {n} qubits exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("{0}")]
    Track(#[from] TrackError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub generated: BTreeSet<Label>,
    pub missing: BTreeSet<Label>,
    pub clean: bool,
    /// `permutation[q]` is the start qubit whose label ends on qubit `q`.
    pub permutation: Option<Vec<usize>>,
    pub connectivity_ok: bool,
    pub first_violation: Option<(usize, Gate)>,
}

impl Default for Certificate {
    fn default() -> Self {
        Certificate {
            generated: BTreeSet::new(),
            missing: BTreeSet::new(),
            clean: true,
            permutation: None,
            connectivity_ok: true,
            first_violation: None,
        }
    }
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.clean && self.connectivity_ok
    }

    /// Merges the connectivity part of another certificate.
    pub fn with_connectivity(mut self, other: &Certificate) -> Self {
        self.connectivity_ok = other.connectivity_ok;
        self.first_violation = other.first_violation;
        self
    }
}

/// Collects every label the circuit produces from `start` and compares it
/// with `target`.
pub fn generator_check(
    c: &Circuit,
    start: &LabelState,
    target: &[Label],
) -> Result<Certificate, VerifyError> {
    let (end, seen) = run_and_collect(c, start)?;
    let missing = target.iter().filter(|l| !seen.contains(*l)).cloned().collect();
    let permutation = end.is_permutation_of(start);
    Ok(Certificate {
        generated: seen.into_iter().collect(),
        missing,
        clean: permutation.is_some(),
        permutation,
        ..Certificate::default()
    })
}

/// Flags the first CX that does not sit on an edge of the graph.
pub fn connectivity_check(c: &Circuit, g: &ConnectivityGraph) -> Certificate {
    let mut cert = Certificate::default();
    for (m, moment) in c.ops().iter().enumerate() {
        for op in moment {
            if let Gate::Cx { c: a, t } = op.gate {
                if a >= g.n() || t >= g.n() || !g.has_edge(a, t) {
                    cert.connectivity_ok = false;
                    cert.first_violation = Some((m, op.gate));
                    return cert;
                }
            }
        }
    }
    cert
}
