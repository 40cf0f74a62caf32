use serde::{Serialize, Serializer};
use thiserror::Error;
use twine_core::{Circuit, Gate, Label, LabelState, TrackError};

/// One RZ of a synthesized circuit and the parity label it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationRecord {
    pub moment: usize,
    pub qubit: usize,
    pub label: Label,
    pub angle: f64,
    /// Cycle or pass the rotation belongs to.
    pub block: usize,
}

impl Serialize for RotationRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec<'a> {
            moment: usize,
            qubit: usize,
            label: &'a [usize],
            angle: f64,
            block: usize,
        }
        Rec { moment: self.moment, qubit: self.qubit, label: &self.label.indices(), angle: self.angle, block: self.block }
            .serialize(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RotationSchedule {
    pub records: Vec<RotationRecord>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("no RZ({angle}) on qubit {qubit} in moment {moment}")]
    MissingGate { moment: usize, qubit: usize, angle: f64 },
    #[error("qubit {qubit} carries {found:?} at moment {moment}, record says {want:?}")]
    WrongLabel { moment: usize, qubit: usize, found: Label, want: Label },
    #[error("{0} RZ gates have no record")]
    Unrecorded(usize),
    #[error("{0}")]
    Track(#[from] TrackError),
}

impl RotationSchedule {
    /// Replays label tracking from single-body labels and checks every
    /// record against the circuit.
    pub fn verify(&self, c: &Circuit) -> Result<(), ScheduleError> {
        let mut st = LabelState::singles(c.n());
        let mut rz_total = 0;
        let mut recs = self.records.iter().peekable();
        for (m, moment) in c.ops().iter().enumerate() {
            rz_total += moment.iter().filter(|o| matches!(o.gate, Gate::Rz { .. })).count();
            while let Some(r) = recs.next_if(|r| r.moment == m) {
                let hit = moment
                    .iter()
                    .any(|o| matches!(o.gate, Gate::Rz { q, theta } if q == r.qubit && theta == r.angle));
                if !hit {
                    return Err(ScheduleError::MissingGate { moment: m, qubit: r.qubit, angle: r.angle });
                }
                if st.z[r.qubit] != r.label {
                    return Err(ScheduleError::WrongLabel {
                        moment: m,
                        qubit: r.qubit,
                        found: st.z[r.qubit].clone(),
                        want: r.label.clone(),
                    });
                }
            }
            for o in moment {
                st.apply(&o.gate)?;
            }
        }
        if let Some(r) = recs.next() {
            return Err(ScheduleError::MissingGate { moment: r.moment, qubit: r.qubit, angle: r.angle });
        }
        if rz_total != self.records.len() {
            return Err(ScheduleError::Unrecorded(rz_total - self.records.len().min(rz_total)));
        }
        Ok(())
    }

    /// Records of one block.
    pub fn block(&self, b: usize) -> impl Iterator<Item = &RotationRecord> {
        self.records.iter().filter(move |r| r.block == b)
    }
}

/// Packs a gate sequence: CX gates go as early as possible among CX
/// moments, and single-qubit gates fill their own moments between them,
/// so they never add CX depth. Returns the circuit and the moment of each
/// input gate.
pub fn pack(n: usize, gates: &[Gate]) -> (Circuit, Vec<usize>) {
    // Slot s holds single-qubit gates between CX moments s - 1 and s.
    let mut ready = vec![0usize; n];
    let mut sub = vec![(usize::MAX, 0usize); n];
    let mut cx_moments: Vec<Vec<Gate>> = Vec::new();
    let mut slots: Vec<Vec<Vec<Gate>>> = vec![Vec::new()];
    let mut place = Vec::with_capacity(gates.len());
    for g in gates {
        match *g {
            Gate::Cx { c, t } => {
                let m = ready[c].max(ready[t]);
                if cx_moments.len() <= m {
                    cx_moments.resize(m + 1, Vec::new());
                    slots.resize(m + 2, Vec::new());
                }
                cx_moments[m].push(*g);
                ready[c] = m + 1;
                ready[t] = m + 1;
                place.push((m, None));
            }
            _ => {
                let (qs, _) = g.qubits();
                let q = qs[0];
                let s = ready[q];
                let k = if sub[q].0 == s { sub[q].1 } else { 0 };
                sub[q] = (s, k + 1);
                if slots[s].len() <= k {
                    slots[s].resize(k + 1, Vec::new());
                }
                slots[s][k].push(*g);
                place.push((s, Some(k)));
            }
        }
    }
    let mut slot_start = Vec::with_capacity(slots.len());
    let mut cx_at = Vec::with_capacity(cx_moments.len());
    let mut moments = Vec::new();
    for s in 0..slots.len() {
        slot_start.push(moments.len());
        moments.append(&mut slots[s]);
        if s < cx_moments.len() {
            cx_at.push(moments.len());
            moments.push(std::mem::take(&mut cx_moments[s]));
        }
    }
    let index = place
        .into_iter()
        .map(|(s, k)| match k {
            Some(k) => slot_start[s] + k,
            None => cx_at[s],
        })
        .collect();
    let c = Circuit::from_moments(n, moments).expect("packed moments are disjoint");
    (c, index)
}

/// Gate sequence with label tracking, for synthesizers that place
/// rotations by label.
pub(crate) struct Builder {
    pub st: LabelState,
    seq: Vec<Gate>,
    rz: Vec<(usize, Label, usize)>,
}

impl Builder {
    pub fn new(n: usize) -> Self {
        Builder { st: LabelState::singles_tracked(n), seq: Vec::new(), rz: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.st.n()
    }

    pub fn push(&mut self, g: Gate) -> Result<(), TrackError> {
        self.st.apply(&g)?;
        self.seq.push(g);
        Ok(())
    }

    pub fn rz(&mut self, q: usize, theta: f64, block: usize) {
        self.rz.push((self.seq.len(), self.st.z[q].clone(), block));
        self.seq.push(Gate::Rz { q, theta });
    }

    pub fn rx(&mut self, q: usize, theta: f64) {
        self.seq.push(Gate::Rx { q, theta });
    }

    /// Qubit whose x-label is exactly the single logical index `w`.
    pub fn x_single(&self, w: usize) -> Option<usize> {
        let x = self.st.x.as_ref()?;
        let want = Label::single(self.n(), w);
        x.iter().position(|l| *l == want)
    }

    /// Qubit whose z-label is exactly the single logical index `w`.
    pub fn z_single(&self, w: usize) -> Option<usize> {
        let want = Label::single(self.n(), w);
        self.st.z.iter().position(|l| *l == want)
    }

    pub fn finish(self) -> (Circuit, RotationSchedule) {
        let n = self.n();
        let (c, at) = pack(n, &self.seq);
        let mut records: Vec<RotationRecord> = self
            .rz
            .into_iter()
            .map(|(i, label, block)| {
                let Gate::Rz { q, theta } = self.seq[i] else { unreachable!("recorded gate is an RZ") };
                RotationRecord { moment: at[i], qubit: q, label, angle: theta, block }
            })
            .collect();
        records.sort_by_key(|r| (r.moment, r.qubit));
        (c, RotationSchedule { records })
    }
}
