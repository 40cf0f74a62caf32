use serde::{Deserialize, Serialize};

/// Elementary gates. Angles follow the usual convention RZ(θ) = exp(-iθZ/2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    Cx { c: usize, t: usize },
    Rz { q: usize, theta: f64 },
    Rx { q: usize, theta: f64 },
    H { q: usize },
}

impl Gate {
    pub fn cx(c: usize, t: usize) -> Gate {
        Gate::Cx { c, t }
    }

    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::Cx { c, t } => ([c, t], 2),
            Gate::Rz { q, .. } | Gate::Rx { q, .. } | Gate::H { q } => ([q, q], 1),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        let (qs, k) = self.qubits();
        qs[..k].contains(&q)
    }

    pub fn is_cx(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::Rz { q, theta } => Gate::Rz { q, theta: -theta },
            Gate::Rx { q, theta } => Gate::Rx { q, theta: -theta },
            g => g,
        }
    }

    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::Cx { c, t } => Gate::Cx { c: f(c), t: f(t) },
            Gate::Rz { q, theta } => Gate::Rz { q: f(q), theta },
            Gate::Rx { q, theta } => Gate::Rx { q: f(q), theta },
            Gate::H { q } => Gate::H { q: f(q) },
        }
    }
}

/// Which composite block a CX belongs to. Kept so that SWAP and DCNOT
/// blocks can be recognised after the circuit has been flattened to CX.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Block {
    #[default]
    Plain,
    Dx,
    Sw,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Op {
    pub gate: Gate,
    pub block: Block,
}

impl From<Gate> for Op {
    fn from(gate: Gate) -> Op {
        Op { gate, block: Block::Plain }
    }
}
