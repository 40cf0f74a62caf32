//! All-to-all compression: SWAPs become relabelings of the wires.

use crate::GenError;
use std::collections::HashMap;
use twine_core::{Block, Circuit, Gate};

/// Where each nearest-neighbour wire currently lives on the device.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualPermutation {
    /// `perm[w]` is the physical qubit carrying wire `w`.
    pub perm: Vec<usize>,
    /// Wire pairs swapped, in order.
    pub history: Vec<(usize, usize)>,
}

impl VirtualPermutation {
    pub fn identity(n: usize) -> Self {
        VirtualPermutation { perm: (0..n).collect(), history: Vec::new() }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.perm.swap(a, b);
        self.history.push((a, b));
    }
}

/// Replaces every DX block by one CX and every SW block by a virtual swap.
/// Other gates are relabeled. The result is packed as early as possible.
pub fn compress_all_to_all(c: &Circuit) -> Result<(Circuit, VirtualPermutation), GenError> {
    let n = c.n();
    let mut vp = VirtualPermutation::identity(n);
    let mut pending: HashMap<(usize, usize), (Block, usize)> = HashMap::new();
    let mut busy = vec![false; n];
    let mut out = Vec::new();
    for op in c.ops().iter().flatten() {
        let g = op.gate;
        let (qs, k) = g.qubits();
        if op.block == Block::Plain {
            if qs[..k].iter().any(|&q| busy[q]) {
                return Err(GenError::MalformedBlock(g));
            }
            out.push(g.map_qubits(|q| vp.perm[q]));
            continue;
        }
        let Gate::Cx { c: a, t: b } = g else {
            return Err(GenError::MalformedBlock(g));
        };
        let key = (a.min(b), a.max(b));
        let entry = pending.entry(key).or_insert((op.block, 0));
        if entry.0 != op.block {
            return Err(GenError::MalformedBlock(g));
        }
        entry.1 += 1;
        busy[a] = true;
        busy[b] = true;
        let done = match op.block {
            // DX(c,t) = CX(c,t) then SWAP: keep the CX, swap virtually.
            Block::Dx if entry.1 == 2 => {
                out.push(Gate::cx(vp.perm[a], vp.perm[b]));
                true
            }
            Block::Sw if entry.1 == 3 => true,
            _ => false,
        };
        if done {
            pending.remove(&key);
            busy[a] = false;
            busy[b] = false;
            vp.swap(a, b);
        }
    }
    if let Some((&(a, b), _)) = pending.iter().next() {
        return Err(GenError::MalformedBlock(Gate::cx(a, b)));
    }
    Ok((Circuit::from_sequence(n, out)?, vp))
}
