use crate::schedule::Builder;
use crate::{final_positions, AppError, Synthesis};
use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use twine_core::{Gate, Label, LabelState};
use twine_graph::{banded_plan, pass_plan, PassPlan};
use twine_topology::{ConnectivityGraph, Hgp};

/// Upper bound on pivot orders tried when passes do not fix them.
const MAX_ORDERS: usize = 64;

/// QFT from the shrinking passes of the graph. Each Hadamard is split as
/// RZ·RX·RZ: the RX goes on the qubit whose x-label is the pivot alone, the
/// RZ halves and the single-body parts of the controlled phases move to an
/// opening and a closing layer, and each two-body phase is an RZ at the CX
/// creating its label.
pub fn synth_qft(graph: &ConnectivityGraph, hgp: Option<&Hgp>) -> Result<Synthesis, AppError> {
    let plan = pass_plan(graph, hgp)?;
    from_plan(&plan, 0.0)
}

/// All-to-all QFT that drops every controlled phase below `threshold`
/// together with the CX creating its label.
pub fn synth_qft_approx(n: usize, threshold: f64) -> Result<Synthesis, AppError> {
    if !(threshold >= 0.0) {
        return Err(AppError::Argument(format!("threshold {threshold} must be non-negative")));
    }
    let mut band = 1;
    while band < n && PI / 2f64.powi(band as i32) >= threshold {
        band += 1;
    }
    from_plan(&banded_plan(n, band), threshold)
}

fn from_plan(plan: &PassPlan, threshold: f64) -> Result<Synthesis, AppError> {
    let cands = pivot_candidates(plan)?;
    let mut err = None;
    for order in orders(&cands, plan.n) {
        match emit(plan, &order, threshold) {
            Ok(s) => return Ok(s),
            Err(e) => err = Some(e),
        }
    }
    Err(err.unwrap_or_else(|| AppError::Unsupported("no pivot order fits the passes".into())))
}

fn pair(l: &Label) -> Option<(usize, usize)> {
    match l.indices()[..] {
        [a, b] => Some((a, b)),
        _ => None,
    }
}

/// Logical indices shared by all pairs a pass creates for the first time.
/// Empty when the pass creates no pair.
fn pivot_candidates(plan: &PassPlan) -> Result<Vec<Vec<usize>>, AppError> {
    let mut st = LabelState::singles(plan.n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for pass in &plan.passes {
        let mut common: Option<BTreeSet<usize>> = None;
        for g in pass {
            st.apply(g)?;
            if let Gate::Cx { t, .. } = *g {
                if let Some((a, b)) = pair(&st.z[t]) {
                    if seen.insert((a, b)) {
                        let s = BTreeSet::from([a, b]);
                        common = Some(match common {
                            None => s,
                            Some(c) => c.intersection(&s).copied().collect(),
                        });
                    }
                }
            }
        }
        out.push(common.map(|c| c.into_iter().collect()).unwrap_or_default());
    }
    Ok(out)
}

/// Complete pivot orders consistent with the candidates, most constrained
/// first.
fn orders(cands: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    fn go(j: usize, cands: &[Vec<usize>], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() >= MAX_ORDERS {
            return;
        }
        if j == cands.len().min(n) {
            let mut full = cur.clone();
            full.extend((0..n).filter(|w| !cur.contains(w)));
            out.push(full);
            return;
        }
        let opts: Vec<usize> = if cands[j].is_empty() { (0..n).collect() } else { cands[j].clone() };
        let opts: Vec<usize> = opts.into_iter().filter(|w| !cur.contains(w)).collect();
        for w in opts {
            cur.push(w);
            go(j + 1, cands, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, cands, n, &mut Vec::new(), &mut out);
    out
}

fn emit(plan: &PassPlan, order: &[usize], threshold: f64) -> Result<Synthesis, AppError> {
    let n = plan.n;
    let mut pos = vec![0; n];
    for (i, &w) in order.iter().enumerate() {
        pos[w] = i;
    }
    let phi = |a: usize, b: usize| PI / 2f64.powi(pos[a].abs_diff(pos[b]) as i32);
    let kept = |a: usize, b: usize| phi(a, b) >= threshold;
    let closing = plan.passes.len() + 1;

    let mut b = Builder::new(n);
    for w in 0..n {
        let s: f64 = (0..n).filter(|&a| pos[a] < pos[w] && kept(a, w)).map(|a| phi(a, w) / 2.0).sum();
        b.rz(w, FRAC_PI_2 + s, 0);
    }
    let mut rx_done = vec![false; n];
    let mut done = BTreeSet::new();
    let pivots = plan.passes.len().min(n);
    for (j, pass) in plan.passes.iter().enumerate() {
        if j < pivots {
            let w = order[j];
            let q = b.x_single(w).ok_or(AppError::XLabel(w))?;
            b.rx(q, FRAC_PI_2);
            rx_done[w] = true;
        }
        for g in pass {
            b.push(*g)?;
            let Gate::Cx { t, .. } = *g else { continue };
            let Some((x, y)) = pair(&b.st.z[t]) else { continue };
            let (e, l) = if pos[x] < pos[y] { (x, y) } else { (y, x) };
            if kept(e, l) && rx_done[e] && !rx_done[l] && done.insert((e, l)) {
                b.rz(t, -phi(e, l) / 2.0, j + 1);
            }
        }
    }
    for g in &plan.decode {
        b.push(*g)?;
    }
    for &w in &order[pivots..] {
        let q = b.x_single(w).ok_or(AppError::XLabel(w))?;
        b.rx(q, FRAC_PI_2);
    }
    let output = final_positions(&b)?;
    for w in 0..n {
        let s: f64 = (0..n).filter(|&c| pos[c] > pos[w] && kept(w, c)).map(|c| phi(w, c) / 2.0).sum();
        b.rz(output[w], FRAC_PI_2 + s, closing);
    }
    for x in 0..n {
        for y in x + 1..n {
            let (e, l) = if pos[x] < pos[y] { (x, y) } else { (y, x) };
            if kept(e, l) && !done.contains(&(e, l)) {
                return Err(AppError::NeverProduced(format!("{:?}", Label::from_indices(n, [x, y]))));
            }
        }
    }
    let (circuit, schedule) = b.finish();
    Ok(Synthesis { circuit, schedule, output, order: order.to_vec() })
}
