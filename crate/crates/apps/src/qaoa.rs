use crate::schedule::Builder;
use crate::{final_positions, AppError, QuboProblem, Synthesis};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use twine_core::metrics::cnot_depth;
use twine_core::{Circuit, Gate, Label};
use twine_graph::{generator, is_all_to_all};
use twine_topology::{ConnectivityGraph, Family, Hgp};

/// Cost angles β and driver angles α, one per cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaAngles {
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// p cycles of exp(-iβ H) followed by exp(-iα ΣX). Each cycle runs one
/// generator block with RZ(2β·coeff) where a problem label first appears,
/// and the driver RX(2α) acts once the block has restored single labels.
pub fn synth_qaoa(
    problem: &QuboProblem,
    graph: &ConnectivityGraph,
    hgp: Option<&Hgp>,
    p: usize,
    angles: &QaoaAngles,
) -> Result<Synthesis, AppError> {
    let n = graph.n();
    if p == 0 {
        return Err(AppError::Argument("p must be at least 1".into()));
    }
    if angles.beta.len() != p || angles.alpha.len() != p {
        return Err(AppError::Argument(format!(
            "{} beta and {} alpha angles for p = {p}",
            angles.beta.len(),
            angles.alpha.len()
        )));
    }
    if problem.n != n {
        return Err(AppError::Size { problem: problem.n, graph: n });
    }
    let base = cost_block(problem, graph, hgp)?;
    let (a, b) = alternation(&base, graph);
    let terms = problem.interaction_labels();
    let mut bld = Builder::new(n);
    for j in 0..p {
        let beta = angles.beta[j];
        single_fields(&mut bld, &problem.h, 2.0 * beta, j)?;
        encode(&mut bld, if j % 2 == 0 { &a } else { &b }, &terms, 2.0 * beta, j)?;
        for w in 0..n {
            let q = bld.x_single(w).ok_or(AppError::XLabel(w))?;
            bld.rx(q, 2.0 * angles.alpha[j]);
        }
    }
    let output = final_positions(&bld)?;
    let (circuit, schedule) = bld.finish();
    Ok(Synthesis { circuit, schedule, output, order: (0..n).collect() })
}

/// Two-body generator, or G2 followed by G3 when three-body terms are present.
fn cost_block(problem: &QuboProblem, graph: &ConnectivityGraph, hgp: Option<&Hgp>) -> Result<Vec<Gate>, AppError> {
    let mut gates: Vec<Gate> = generator(graph, hgp, 2)?.gates().copied().collect();
    if !problem.m.is_empty() {
        let chain = matches!(graph.family, Some(Family::Lnn { .. }));
        if hgp.is_some() || !(chain || is_all_to_all(graph)) {
            return Err(AppError::Unsupported("three-body terms need an lnn or all-to-all device".into()));
        }
        gates.extend(generator(graph, hgp, 3)?.gates().copied());
    }
    Ok(gates)
}

/// First block and the variant that follows it with the lowest CX depth:
/// the adjoint, the block itself, or their mirror images when the mirror
/// stays on the graph.
fn alternation(base: &[Gate], graph: &ConnectivityGraph) -> (Vec<Gate>, Vec<Gate>) {
    let n = graph.n();
    let adjoint: Vec<Gate> = base.iter().rev().map(Gate::adjoint).collect();
    let mut cands = vec![adjoint.clone(), base.to_vec()];
    let mirror = |g: &Gate| g.map_qubits(|q| n - 1 - q);
    let on_graph = base.iter().all(|g| match mirror(g) {
        Gate::Cx { c, t } => graph.has_edge(c, t),
        _ => true,
    });
    if on_graph && n > 0 {
        cands.push(adjoint.iter().map(mirror).collect());
        cands.push(base.iter().map(mirror).collect());
    }
    let depth = |b: &[Gate]| {
        let seq: Vec<Gate> = base.iter().chain(b).chain(base).copied().collect();
        cnot_depth(&Circuit::from_sequence(n, seq).expect("valid gates"))
    };
    let best = cands.into_iter().min_by_key(|b| depth(b)).expect("at least one candidate");
    (base.to_vec(), best)
}

pub(crate) fn single_fields(
    bld: &mut Builder,
    h: &BTreeMap<usize, f64>,
    scale: f64,
    block: usize,
) -> Result<(), AppError> {
    for (&w, &v) in h {
        let q = bld.z_single(w).ok_or(AppError::NotRestored(w))?;
        bld.rz(q, scale * v, block);
    }
    Ok(())
}

/// Runs a block and rotates each term label right after the CX that first
/// creates it.
pub(crate) fn encode(
    bld: &mut Builder,
    block: &[Gate],
    terms: &BTreeMap<Label, f64>,
    scale: f64,
    idx: usize,
) -> Result<(), AppError> {
    let mut done = BTreeSet::new();
    for g in block {
        bld.push(*g)?;
        let Gate::Cx { t, .. } = *g else { continue };
        if let Some(&v) = terms.get(&bld.st.z[t]) {
            if done.insert(bld.st.z[t].clone()) {
                bld.rz(t, scale * v, idx);
            }
        }
    }
    match terms.keys().find(|l| !done.contains(*l)) {
        Some(l) => Err(AppError::NeverProduced(format!("{:?}", l.indices()))),
        None => Ok(()),
    }
}
