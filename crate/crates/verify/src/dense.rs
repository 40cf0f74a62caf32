use crate::VerifyError;
use num_complex::Complex64;
use twine_core::{Circuit, Gate};

/// Square complex matrix stored column by column. Basis index bit `q` is
/// the value of qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for c in 0..dim {
            for r in 0..dim {
                m.data[c * dim + r] = f(r, c);
            }
        }
        m
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), |r, c| if r == c { d[r] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.dim + r]
    }

    pub fn column(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.dim..(c + 1) * self.dim]
    }

    fn column_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.data[c * self.dim..(c + 1) * self.dim]
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, VerifyError> {
        if self.dim != other.dim {
            return Err(VerifyError::Dimension(self.dim, other.dim));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for c in 0..d {
            for k in 0..d {
                let b = other.get(k, c);
                if b.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..d {
                    out.data[c * d + r] += self.data[k * d + r] * b;
                }
            }
        }
        Ok(out)
    }

    pub fn dagger(&self) -> DenseMatrix {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Largest entrywise distance.
    pub fn max_diff(&self, other: &DenseMatrix) -> Result<f64, VerifyError> {
        if self.dim != other.dim {
            return Err(VerifyError::Dimension(self.dim, other.dim));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Applies one gate on the left, i.e. `self ← G · self`.
    pub fn apply(&mut self, g: &Gate) {
        for c in 0..self.dim {
            apply_to_state(self.column_mut(c), g);
        }
    }
}

fn apply_to_state(psi: &mut [Complex64], g: &Gate) {
    match *g {
        Gate::Cx { c, t } => {
            for i in 0..psi.len() {
                if i >> c & 1 == 1 && i >> t & 1 == 0 {
                    psi.swap(i, i | 1 << t);
                }
            }
        }
        Gate::Rz { q, theta } => {
            let lo = Complex64::from_polar(1.0, -theta / 2.0);
            let hi = Complex64::from_polar(1.0, theta / 2.0);
            for (i, a) in psi.iter_mut().enumerate() {
                *a *= if i >> q & 1 == 0 { lo } else { hi };
            }
        }
        Gate::Rx { q, theta } => {
            let (s, co) = (theta / 2.0).sin_cos();
            let ms = Complex64::new(0.0, -s);
            for i in (0..psi.len()).filter(|i| i >> q & 1 == 0) {
                let j = i | 1 << q;
                let (a, b) = (psi[i], psi[j]);
                psi[i] = a * co + b * ms;
                psi[j] = a * ms + b * co;
            }
        }
        Gate::H { q } => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            for i in (0..psi.len()).filter(|i| i >> q & 1 == 0) {
                let j = i | 1 << q;
                let (a, b) = (psi[i], psi[j]);
                psi[i] = (a + b) * r;
                psi[j] = (a - b) * r;
            }
        }
    }
}

/// Cap on dense simulation, from `TWINE_MAX_DENSE_N` (default 12).
pub fn max_dense_qubits() -> usize {
    std::env::var("TWINE_MAX_DENSE_N")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(12)
}

/// Full unitary of the circuit, gates applied in moment order.
pub fn dense_unitary(c: &Circuit) -> Result<DenseMatrix, VerifyError> {
    let cap = max_dense_qubits();
    if c.n() > cap {
        return Err(VerifyError::TooLarge { n: c.n(), cap });
    }
    let mut u = DenseMatrix::identity(1 << c.n());
    for g in c.gates() {
        u.apply(g);
    }
    Ok(u)
}

/// Reorders output qubits: bit `w` of a row of the result is read from bit
/// `perm[w]` of the corresponding row of `v`.
pub fn permute_outputs(v: &DenseMatrix, perm: &[usize]) -> DenseMatrix {
    let map = |i: usize| perm.iter().enumerate().fold(0, |acc, (w, &p)| acc | (i >> w & 1) << p);
    DenseMatrix::from_fn(v.dim(), |r, c| v.get(map(r), c))
}

/// Compares `u` with `v` after moving the output of logical wire `w` of `v`
/// from qubit `perm[w]` back to `w`, ignoring a global phase fixed at the
/// largest entry of `u`. Returns the verdict at 1e-9 and the max error.
pub fn equal_up_to_perm_phase(
    u: &DenseMatrix,
    v: &DenseMatrix,
    perm: &[usize],
) -> Result<(bool, f64), VerifyError> {
    if u.dim() != v.dim() {
        return Err(VerifyError::Dimension(u.dim(), v.dim()));
    }
    if 1usize << perm.len() != u.dim() {
        return Err(VerifyError::Dimension(u.dim(), 1 << perm.len()));
    }
    let w = permute_outputs(v, perm);
    let (mut best, mut at) = (-1.0, (0, 0));
    for c in 0..u.dim() {
        for r in 0..u.dim() {
            let m = u.get(r, c).norm();
            if m > best {
                best = m;
                at = (r, c);
            }
        }
    }
    let wv = w.get(at.0, at.1);
    if wv.norm() < 1e-12 {
        let err = u.max_diff(&w)?.max(best);
        return Ok((false, err));
    }
    let phase = u.get(at.0, at.1) / wv;
    let phase = phase / phase.norm();
    let err = u.max_diff(&w.scale(phase))?;
    Ok((err <= crate::TOL_SYNTH, err))
}
