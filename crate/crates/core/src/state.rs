use crate::circuit::Circuit;
use crate::gate::Gate;
use crate::label::Label;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TrackError {
    #[error("qubit {qubit} out of range for {n} qubits")]
    OutOfRange { qubit: usize, n: usize },
    #[error("hadamard on qubit {0} needs x-label tracking")]
    NeedsXLabels(usize),
    #[error("circuit has {0} qubits but state has {1}")]
    SizeMismatch(usize, usize),
}

/// Labels carried by each physical qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelState {
    pub z: Vec<Label>,
    pub x: Option<Vec<Label>>,
}

impl LabelState {
    /// (ℓ0, ℓ1, …) with z-labels only.
    pub fn singles(n: usize) -> LabelState {
        LabelState { z: (0..n).map(|i| Label::single(n, i)).collect(), x: None }
    }

    /// Single-body z- and x-labels.
    pub fn singles_tracked(n: usize) -> LabelState {
        let s = Self::singles(n);
        LabelState { x: Some(s.z.clone()), ..s }
    }

    pub fn from_z(z: Vec<Label>) -> LabelState {
        LabelState { z, x: None }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn apply(&mut self, g: &Gate) -> Result<(), TrackError> {
        let n = self.n();
        let (qs, k) = g.qubits();
        if let Some(&q) = qs[..k].iter().find(|&&q| q >= n) {
            return Err(TrackError::OutOfRange { qubit: q, n });
        }
        match *g {
            Gate::Cx { c, t } => {
                let zc = self.z[c].clone();
                self.z[t].xor_assign(&zc);
                if let Some(x) = &mut self.x {
                    let xt = x[t].clone();
                    x[c].xor_assign(&xt);
                }
            }
            Gate::H { q } => match &mut self.x {
                Some(x) => std::mem::swap(&mut self.z[q], &mut x[q]),
                None => return Err(TrackError::NeedsXLabels(q)),
            },
            Gate::Rz { .. } | Gate::Rx { .. } => {}
        }
        Ok(())
    }

    /// Applies a whole circuit without collecting.
    pub fn run(&mut self, c: &Circuit) -> Result<(), TrackError> {
        if c.n() != self.n() {
            return Err(TrackError::SizeMismatch(c.n(), self.n()));
        }
        for g in c.gates() {
            self.apply(g)?;
        }
        Ok(())
    }

    /// True if the z-labels are a permutation of `other`'s z-labels.
    pub fn is_permutation_of(&self, other: &LabelState) -> Option<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.n());
        for l in &self.z {
            perm.push(other.z.iter().position(|o| o == l)?);
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        Some(perm)
    }

    /// Rank of the z-label matrix over GF(2).
    pub fn z_rank(&self) -> usize {
        gf2_rank(self.z.iter().map(|l| l.words().to_vec()).collect())
    }

    /// Checks Z·Xᵀ = I over GF(2) when x-labels are tracked.
    pub fn dual_ok(&self) -> bool {
        let Some(x) = &self.x else { return true };
        for (i, zi) in self.z.iter().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                let dot = zi
                    .words()
                    .iter()
                    .zip(xj.words())
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    & 1;
                if dot != (i == j) as u32 {
                    return false;
                }
            }
        }
        true
    }
}

pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let bits = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..bits {
        let (w, b) = (col / 64, col % 64);
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (a, p) in row.iter_mut().zip(&pivot) {
                    *a ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Runs the circuit and collects every z-label present after each moment,
/// start labels included.
pub fn run_and_collect(
    c: &Circuit,
    start: &LabelState,
) -> Result<(LabelState, HashSet<Label>), TrackError> {
    if c.n() != start.n() {
        return Err(TrackError::SizeMismatch(c.n(), start.n()));
    }
    let mut st = start.clone();
    let mut seen: HashSet<Label> = st.z.iter().cloned().collect();
    for moment in c.ops() {
        for op in moment {
            st.apply(&op.gate)?;
        }
        for op in moment {
            let changed = match op.gate {
                Gate::Cx { t, .. } => t,
                Gate::H { q } => q,
                _ => continue,
            };
            if !seen.contains(&st.z[changed]) {
                seen.insert(st.z[changed].clone());
            }
        }
    }
    Ok((st, seen))
}
