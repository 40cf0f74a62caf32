use crate::qaoa::{encode, single_fields};
use crate::schedule::Builder;
use crate::{final_positions, AppError, QuboProblem, Synthesis};
use twine_core::Gate;
use twine_graph::generator;
use twine_topology::{ConnectivityGraph, Hgp};

/// One step exp(-iτ/2 ΣgX) exp(-iτ ΣhZ) exp(-iτ ΣJZZ) exp(-iτ/2 ΣgX) of the
/// mixed-field Ising model. Transverse fields come from `problem.g`.
pub fn synth_trotter_mfim(
    problem: &QuboProblem,
    graph: &ConnectivityGraph,
    hgp: Option<&Hgp>,
    tau: f64,
) -> Result<Synthesis, AppError> {
    let n = graph.n();
    if !problem.m.is_empty() {
        return Err(AppError::Unsupported("three-body terms in the Ising model".into()));
    }
    if problem.n != n {
        return Err(AppError::Size { problem: problem.n, graph: n });
    }
    let g2: Vec<Gate> = generator(graph, hgp, 2)?.gates().copied().collect();
    let mut bld = Builder::new(n);
    let half_x = |bld: &mut Builder| -> Result<(), AppError> {
        for (&w, &g) in &problem.g {
            let q = bld.x_single(w).ok_or(AppError::XLabel(w))?;
            bld.rx(q, g * tau);
        }
        Ok(())
    };
    half_x(&mut bld)?;
    single_fields(&mut bld, &problem.h, 2.0 * tau, 0)?;
    encode(&mut bld, &g2, &problem.interaction_labels(), 2.0 * tau, 0)?;
    half_x(&mut bld)?;
    let output = final_positions(&bld)?;
    let (circuit, schedule) = bld.finish();
    Ok(Synthesis { circuit, schedule, output, order: (0..n).collect() })
}
