//! Generators adapted to device connectivity.

pub mod compress;
pub mod hgp;

pub use compress::{compress_all_to_all, VirtualPermutation};
pub use hgp::{
    all_to_all_plan, banded_plan, g2_graph, g3_graph, initializer, layout_plan, network_passes, ptc_graph, ptn_graph, routed_cx,
    Layout, PassPlan,
};

use thiserror::Error;
use twine_core::{Circuit, CircuitError, Gate};
use twine_lnn::{GeneratorSpec, Kind, LnnError};
use twine_topology::{builtin_hgp, ConnectivityGraph, Family, GraphError, Hgp, HgpError};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid hgp: {0}")]
    Hgp(#[from] HgpError),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("qubit {0} is not in the graph")]
    BadNode(usize),
    #[error("live spine is broken between {0} and {1}")]
    BrokenSpine(usize, usize),
    #[error("qubit {0} cannot be reached")]
    Unreachable(usize),
    #[error("qubit {0} is neither on the path nor next to it")]
    Uncovered(usize),
    #[error("qubits {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("gate {0:?} breaks a tagged DX/SW block")]
    MalformedBlock(Gate),
    #[error("{0}")]
    Circuit(#[from] CircuitError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Lnn(#[from] LnnError),
}

/// Layout for a graph, using its built-in HGP unless one is given.
pub fn layout_for(graph: &ConnectivityGraph, hgp: Option<&Hgp>) -> Result<Layout, GenError> {
    let h = match hgp {
        Some(h) => h.clone(),
        None => builtin_hgp(graph)?,
    };
    Layout::new(graph.clone(), h)
}

pub fn is_all_to_all(graph: &ConnectivityGraph) -> bool {
    matches!(graph.family, Some(Family::AllToAll { .. }))
}

fn lnn_generator(n: usize, k: usize) -> Result<Circuit, GenError> {
    let kind = match k {
        2 => Kind::G2,
        3 => Kind::G3,
        _ => Kind::Gk,
    };
    Ok(twine_lnn::build(&GeneratorSpec::with_k(kind, n, k))?)
}

/// Clean k-body generator adapted to the graph. Chains use the nearest-
/// neighbour constructions, all-to-all devices compress them, and other
/// families go through their HGP (k = 2 and 3 only).
pub fn generator(graph: &ConnectivityGraph, hgp: Option<&Hgp>, k: usize) -> Result<Circuit, GenError> {
    let n = graph.n();
    if k < 2 || k > n {
        return Err(GenError::Unsupported(format!("{k}-body generator on {n} qubits")));
    }
    let lnn_ok = n >= 3 && hgp.is_none();
    match graph.family {
        Some(Family::Lnn { .. }) if lnn_ok => lnn_generator(n, k),
        Some(Family::AllToAll { .. }) if lnn_ok => Ok(compress_all_to_all(&lnn_generator(n, k)?)?.0),
        _ => match k {
            2 => g2_graph(&layout_for(graph, hgp)?),
            3 => g3_graph(&layout_for(graph, hgp)?),
            _ => Err(GenError::Unsupported(format!("{k}-body generator on this graph"))),
        },
    }
}

/// Shrinking-pass plan for the graph: fan-outs on all-to-all devices,
/// HGP passes elsewhere.
pub fn pass_plan(graph: &ConnectivityGraph, hgp: Option<&Hgp>) -> Result<PassPlan, GenError> {
    if is_all_to_all(graph) && hgp.is_none() {
        return Ok(all_to_all_plan(graph.n()));
    }
    layout_plan(&layout_for(graph, hgp)?)
}
