use crate::circuit::Circuit;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("label set is empty")]
pub struct EmptyLabelSet;

/// CX-only circuit metrics. Moments holding only single-qubit gates are
/// skipped when counting depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub effective_depth: f64,
    pub mu_n: f64,
    pub nu_n: f64,
    pub label_set_size: usize,
}

/// CX moment index (1-based) of every moment, or None for moments that
/// carry only single-qubit gates. Empty gaps between CX moments count.
fn cx_moment_numbers(c: &Circuit) -> Vec<Option<usize>> {
    let ops = c.ops();
    let first = ops.iter().position(|m| m.iter().any(|o| o.gate.is_cx()));
    let last = ops.iter().rposition(|m| m.iter().any(|o| o.gate.is_cx()));
    let mut out = vec![None; ops.len()];
    let (Some(first), Some(last)) = (first, last) else { return out };
    let mut k = 0;
    for m in first..=last {
        let has_cx = ops[m].iter().any(|o| o.gate.is_cx());
        if has_cx || ops[m].is_empty() {
            k += 1;
            out[m] = Some(k);
        }
    }
    out
}

pub fn cnot_depth(c: &Circuit) -> usize {
    cx_moment_numbers(c).into_iter().flatten().max().unwrap_or(0)
}

/// Mean over qubits of the last CX moment touching the qubit.
pub fn effective_depth(c: &Circuit) -> f64 {
    if c.n() == 0 {
        return 0.0;
    }
    let nums = cx_moment_numbers(c);
    let mut last = vec![0usize; c.n()];
    for (m, moment) in c.ops().iter().enumerate() {
        let Some(k) = nums[m] else { continue };
        for op in moment {
            if let crate::Gate::Cx { c, t } = op.gate {
                last[c] = k;
                last[t] = k;
            }
        }
    }
    last.iter().sum::<usize>() as f64 / c.n() as f64
}

pub fn metrics(c: &Circuit, label_set_size: usize) -> Result<Metrics, EmptyLabelSet> {
    if label_set_size == 0 {
        return Err(EmptyLabelSet);
    }
    let cnot_count = c.cx_count();
    let depth = cnot_depth(c);
    let l = label_set_size as f64;
    Ok(Metrics {
        cnot_count,
        cnot_depth: depth,
        effective_depth: effective_depth(c),
        mu_n: cnot_count as f64 / l,
        nu_n: depth as f64 * c.n() as f64 / (2.0 * l),
        label_set_size,
    })
}
