use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;
use twine_core::Label;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("invalid problem json: {0}")]
    Json(String),
    #[error("index {index} out of range for {n} variables")]
    Index { index: usize, n: usize },
    #[error("term {0:?} repeats a variable")]
    Repeated(Vec<usize>),
}

/// Ising-type cost function with optional three-body terms and transverse
/// fields. Keys are sorted index tuples.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QuboProblem {
    pub n: usize,
    pub j: BTreeMap<(usize, usize), f64>,
    pub h: BTreeMap<usize, f64>,
    pub m: BTreeMap<(usize, usize, usize), f64>,
    /// Transverse fields, used by the Trotter synthesizer only.
    pub g: BTreeMap<usize, f64>,
}

#[derive(Serialize, Deserialize)]
struct RawProblem {
    n: usize,
    #[serde(rename = "J", default)]
    j: Vec<(usize, usize, f64)>,
    #[serde(default)]
    h: Vec<(usize, f64)>,
    #[serde(rename = "M", default, skip_serializing_if = "Vec::is_empty")]
    m: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    g: Vec<(usize, f64)>,
}

impl QuboProblem {
    pub fn new(n: usize) -> Self {
        QuboProblem { n, ..Default::default() }
    }

    fn sorted<const K: usize>(&self, mut idx: [usize; K]) -> Result<[usize; K], ProblemError> {
        idx.sort_unstable();
        if let Some(&i) = idx.iter().find(|&&i| i >= self.n) {
            return Err(ProblemError::Index { index: i, n: self.n });
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(ProblemError::Repeated(idx.to_vec()));
        }
        Ok(idx)
    }

    /// Adds to the coupling of Z_a Z_b. Repeated terms accumulate.
    pub fn add_j(&mut self, a: usize, b: usize, v: f64) -> Result<(), ProblemError> {
        let [a, b] = self.sorted([a, b])?;
        *self.j.entry((a, b)).or_default() += v;
        Ok(())
    }

    pub fn add_h(&mut self, a: usize, v: f64) -> Result<(), ProblemError> {
        let [a] = self.sorted([a])?;
        *self.h.entry(a).or_default() += v;
        Ok(())
    }

    pub fn add_m(&mut self, a: usize, b: usize, c: usize, v: f64) -> Result<(), ProblemError> {
        let [a, b, c] = self.sorted([a, b, c])?;
        *self.m.entry((a, b, c)).or_default() += v;
        Ok(())
    }

    pub fn add_g(&mut self, a: usize, v: f64) -> Result<(), ProblemError> {
        let [a] = self.sorted([a])?;
        *self.g.entry(a).or_default() += v;
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, ProblemError> {
        let raw: RawProblem = serde_json::from_str(s).map_err(|e| ProblemError::Json(e.to_string()))?;
        let mut p = QuboProblem::new(raw.n);
        for (a, b, v) in raw.j {
            p.add_j(a, b, v)?;
        }
        for (a, v) in raw.h {
            p.add_h(a, v)?;
        }
        for (a, b, c, v) in raw.m {
            p.add_m(a, b, c, v)?;
        }
        for (a, v) in raw.g {
            p.add_g(a, v)?;
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let raw = RawProblem {
            n: self.n,
            j: self.j.iter().map(|(&(a, b), &v)| (a, b, v)).collect(),
            h: self.h.iter().map(|(&a, &v)| (a, v)).collect(),
            m: self.m.iter().map(|(&(a, b, c), &v)| (a, b, c, v)).collect(),
            g: self.g.iter().map(|(&a, &v)| (a, v)).collect(),
        };
        serde_json::to_string(&raw).expect("plain data")
    }

    /// Two- and three-body terms keyed by their parity label.
    pub fn interaction_labels(&self) -> BTreeMap<Label, f64> {
        let n = self.n;
        let two = self.j.iter().map(|(&(a, b), &v)| (Label::from_indices(n, [a, b]), v));
        let three = self.m.iter().map(|(&(a, b, c), &v)| (Label::from_indices(n, [a, b, c]), v));
        two.chain(three).collect()
    }
}
