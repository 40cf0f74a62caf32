use crate::gate::{Block, Gate, Op};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for {n} qubits")]
    OutOfRange { qubit: usize, n: usize },
    #[error("cx with identical control and target {0}")]
    SelfLoop(usize),
    #[error("overlapping gates on qubit {qubit} in moment {moment}")]
    Overlap { moment: usize, qubit: usize },
    #[error("shifted concatenation reorders gates on qubit {qubit} (moment {moment})")]
    Reorder { moment: usize, qubit: usize },
    #[error("gate on qubit {qubit} outside range {p}..={q}")]
    OutsideRange { qubit: usize, p: usize, q: usize },
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// A circuit as an ordered list of moments of non-overlapping gates.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    n: usize,
    moments: Vec<Vec<Op>>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit { n, moments: Vec::new() }
    }

    /// Builds a circuit from plain gate moments. Leading and trailing empty
    /// moments are dropped.
    pub fn from_moments(n: usize, moments: Vec<Vec<Gate>>) -> Result<Circuit, CircuitError> {
        let ops = moments
            .into_iter()
            .map(|m| m.into_iter().map(Op::from).collect())
            .collect();
        Self::from_ops(n, ops)
    }

    pub fn from_ops(n: usize, moments: Vec<Vec<Op>>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit { n, moments };
        c.validate()?;
        c.trim();
        Ok(c)
    }

    /// A one-moment circuit.
    pub fn gate(n: usize, g: Gate) -> Circuit {
        Self::block(n, vec![vec![g]], Block::Plain)
    }

    pub fn cx(n: usize, c: usize, t: usize) -> Circuit {
        Self::gate(n, Gate::cx(c, t))
    }

    /// Moments tagged as one composite block. Panics on invalid input,
    /// which is a programming error in a builder.
    pub fn block(n: usize, moments: Vec<Vec<Gate>>, block: Block) -> Circuit {
        let ops = moments
            .into_iter()
            .map(|m| m.into_iter().map(|gate| Op { gate, block }).collect())
            .collect();
        Self::from_ops(n, ops).expect("invalid block")
    }

    /// Layer of single-qubit gates in one moment (empty circuit if none).
    pub fn layer(n: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        Self::from_moments(n, vec![gates])
    }

    fn validate(&self) -> Result<(), CircuitError> {
        let mut seen = vec![usize::MAX; self.n];
        for (m, moment) in self.moments.iter().enumerate() {
            for op in moment {
                let (qs, k) = op.gate.qubits();
                if let Gate::Cx { c, t } = op.gate {
                    if c == t {
                        return Err(CircuitError::SelfLoop(c));
                    }
                }
                for &q in &qs[..k] {
                    if q >= self.n {
                        return Err(CircuitError::OutOfRange { qubit: q, n: self.n });
                    }
                    if seen[q] == m {
                        return Err(CircuitError::Overlap { moment: m, qubit: q });
                    }
                    seen[q] = m;
                }
            }
        }
        Ok(())
    }

    fn trim(&mut self) {
        while self.moments.last().is_some_and(|m| m.is_empty()) {
            self.moments.pop();
        }
        let lead = self.moments.iter().take_while(|m| m.is_empty()).count();
        self.moments.drain(..lead);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of moments, single-qubit moments included.
    pub fn depth(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn ops(&self) -> &[Vec<Op>] {
        &self.moments
    }

    pub fn moment(&self, m: usize) -> impl Iterator<Item = &Gate> {
        self.moments[m].iter().map(|o| &o.gate)
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.moments.iter().flatten().map(|o| &o.gate)
    }

    /// Plain gate moments, dropping block tags.
    pub fn gate_moments(&self) -> Vec<Vec<Gate>> {
        self.moments
            .iter()
            .map(|m| m.iter().map(|o| o.gate).collect())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.moments.iter().map(|m| m.len()).sum()
    }

    pub fn cx_count(&self) -> usize {
        self.gates().filter(|g| g.is_cx()).count()
    }

    /// Same gates on a larger register, with qubit i moved to i + offset.
    pub fn embed(&self, n: usize, offset: usize) -> Circuit {
        assert!(self.n + offset <= n, "embedding does not fit");
        self.map_qubits(n, |q| q + offset)
    }

    /// Relabels qubits through `f`; `f` must be injective on used qubits.
    pub fn map_qubits(&self, n: usize, f: impl Fn(usize) -> usize) -> Circuit {
        let moments = self
            .moments
            .iter()
            .map(|m| {
                m.iter()
                    .map(|o| Op { gate: o.gate.map_qubits(&f), block: o.block })
                    .collect()
            })
            .collect();
        Circuit { n, moments }
    }

    /// Mirror every gate inside p..=q: qubit i goes to p + q - i.
    pub fn reverse(&self, p: usize, q: usize) -> Result<Circuit, CircuitError> {
        for g in self.gates() {
            let (qs, k) = g.qubits();
            for &x in &qs[..k] {
                if x < p || x > q {
                    return Err(CircuitError::OutsideRange { qubit: x, p, q });
                }
            }
        }
        Ok(self.map_qubits(self.n, |i| p + q - i))
    }

    /// Mirror over the whole register.
    pub fn reversed(&self) -> Circuit {
        if self.n == 0 {
            return self.clone();
        }
        self.reverse(0, self.n - 1).expect("full range")
    }

    pub fn adjoint(&self) -> Circuit {
        let moments = self
            .moments
            .iter()
            .rev()
            .map(|m| {
                m.iter()
                    .map(|o| Op { gate: o.gate.adjoint(), block: o.block })
                    .collect()
            })
            .collect();
        Circuit { n: self.n, moments }
    }

    /// Plain concatenation.
    pub fn then(&self, b: &Circuit) -> Result<Circuit, CircuitError> {
        self.concat_shifted(b, 0)
    }

    /// Shifted concatenation. For `s > 0` the second circuit starts `s`
    /// moments after the start of `self`; for `s <= 0` it is the plain
    /// concatenation with the second circuit moved `|s|` moments left. If
    /// that lands before moment 0, `self` is delayed instead.
    /// Fails on overlapping gates or when a gate of `b` would land before a
    /// gate of `self` on the same qubit.
    pub fn concat_shifted(&self, b: &Circuit, s: i64) -> Result<Circuit, CircuitError> {
        if self.n != b.n {
            return Err(CircuitError::SizeMismatch(self.n, b.n));
        }
        if b.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(b.clone());
        }
        let start = if s > 0 { s } else { self.depth() as i64 + s };
        // A start before moment 0 delays `self` instead.
        let (off_a, start) = if start < 0 { ((-start) as usize, 0) } else { (0, start as usize) };
        let mut out = vec![Vec::new(); off_a];
        out.extend(self.moments.iter().cloned());
        let last_a: Vec<Option<usize>> =
            self.last_touch().into_iter().map(|l| l.map(|m| m + off_a)).collect();
        if out.len() < start + b.depth() {
            out.resize(start + b.depth(), Vec::new());
        }
        // Only moments that `self` occupies can clash with `b`.
        let a_end = off_a + self.depth();
        let mut busy = vec![usize::MAX; self.n];
        let mut checked = vec![false; self.n];
        for (k, moment) in b.moments.iter().enumerate() {
            let m = start + k;
            if m < a_end {
                for o in &out[m] {
                    let (qs, cnt) = o.gate.qubits();
                    for &q in &qs[..cnt] {
                        busy[q] = m;
                    }
                }
                for op in moment {
                    let (qs, cnt) = op.gate.qubits();
                    for &q in &qs[..cnt] {
                        if busy[q] == m {
                            return Err(CircuitError::Overlap { moment: m, qubit: q });
                        }
                        if !checked[q] {
                            checked[q] = true;
                            if last_a[q].is_some_and(|l| l >= m) {
                                return Err(CircuitError::Reorder { moment: m, qubit: q });
                            }
                        }
                    }
                }
            }
            out[m].extend_from_slice(moment);
        }
        Ok(Circuit { n: self.n, moments: out })
    }

    /// Right-associated fold: c0 ⊙s0 (c1 ⊙s1 (c2 ...)).
    pub fn chain(parts: &[Circuit], shifts: &[i64]) -> Result<Circuit, CircuitError> {
        assert_eq!(shifts.len() + 1, parts.len().max(1));
        let mut acc = parts.last().cloned().unwrap_or_default();
        for i in (0..parts.len().saturating_sub(1)).rev() {
            acc = parts[i].concat_shifted(&acc, shifts[i])?;
        }
        Ok(acc)
    }

    /// Last moment index touching each qubit.
    pub fn last_touch(&self) -> Vec<Option<usize>> {
        let mut last = vec![None; self.n];
        for (m, moment) in self.moments.iter().enumerate() {
            for g in moment.iter().map(|o| &o.gate) {
                let (qs, k) = g.qubits();
                for &q in &qs[..k] {
                    last[q] = Some(m);
                }
            }
        }
        last
    }

    /// Largest s <= 0 usable in `concat_shifted` (most negative shift that
    /// keeps per-qubit order), never moving `b` before the start of `self`.
    pub fn max_overlap(&self, b: &Circuit) -> i64 {
        if self.is_empty() || b.is_empty() {
            return 0;
        }
        let last_a = self.last_touch();
        let mut first_b = vec![None; self.n];
        for (m, moment) in b.moments.iter().enumerate().rev() {
            for g in moment.iter().map(|o| &o.gate) {
                let (qs, k) = g.qubits();
                for &q in &qs[..k] {
                    first_b[q] = Some(m);
                }
            }
        }
        // b starts at moment `start`; need start + first_b[q] > last_a[q].
        let mut start = 0i64;
        for q in 0..self.n {
            if let (Some(l), Some(f)) = (last_a[q], first_b[q]) {
                start = start.max(l as i64 + 1 - f as i64);
            }
        }
        start.min(self.depth() as i64) - self.depth() as i64
    }

    /// Same gates re-packed as early as possible, keeping per-qubit order.
    pub fn asap(&self) -> Circuit {
        let mut ready = vec![0usize; self.n];
        let mut moments: Vec<Vec<Op>> = Vec::new();
        for op in self.moments.iter().flatten() {
            let (qs, k) = op.gate.qubits();
            let m = qs[..k].iter().map(|&q| ready[q]).max().unwrap_or(0);
            if moments.len() <= m {
                moments.resize(m + 1, Vec::new());
            }
            moments[m].push(*op);
            for &q in &qs[..k] {
                ready[q] = m + 1;
            }
        }
        Circuit { n: self.n, moments }
    }

    /// Gates applied in the given order, packed as early as possible.
    pub fn from_sequence(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Circuit, CircuitError> {
        let c = Self::from_moments(n, gates.into_iter().map(|g| vec![g]).collect())?;
        Ok(c.asap())
    }

    /// Appends gates as a new final moment.
    pub fn push_moment(&mut self, gates: Vec<Gate>) -> Result<(), CircuitError> {
        if gates.is_empty() {
            return Ok(());
        }
        let mut c = self.clone();
        c.moments.push(gates.into_iter().map(Op::from).collect());
        c.validate()?;
        *self = c;
        Ok(())
    }
}
