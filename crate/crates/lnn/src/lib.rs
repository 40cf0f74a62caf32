//! Nearest-neighbour generator constructions.

pub mod blocks;

use thiserror::Error;
use twine_core::Circuit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Ptc,
    Cxc,
    CxcMod,
    Swc,
    Ptn,
    PtcMod,
    PtnMod,
    Ptn3,
    Ptn4,
    Cl,
    G2,
    G3,
    CleanSpecialG4,
    CleanSpecialGk,
    Gk,
}

impl Kind {
    pub const ALL: [Kind; 15] = [
        Kind::Ptc,
        Kind::Cxc,
        Kind::CxcMod,
        Kind::Swc,
        Kind::Ptn,
        Kind::PtcMod,
        Kind::PtnMod,
        Kind::Ptn3,
        Kind::Ptn4,
        Kind::Cl,
        Kind::G2,
        Kind::G3,
        Kind::CleanSpecialG4,
        Kind::CleanSpecialGk,
        Kind::Gk,
    ];

    /// Smallest register the construction is defined on.
    pub fn min_qubits(self, k: usize) -> usize {
        match self {
            Kind::Ptc | Kind::Cxc | Kind::CxcMod | Kind::Swc => 1,
            Kind::Ptn | Kind::PtcMod => 2,
            Kind::PtnMod | Kind::Ptn3 | Kind::G2 | Kind::G3 | Kind::Cl => 3,
            Kind::Ptn4 | Kind::CleanSpecialG4 => 4,
            Kind::CleanSpecialGk => k.max(4),
            Kind::Gk => k.max(3),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LnnError {
    #[error("{kind:?} needs at least {min} qubits, got {n}")]
    TooSmall { kind: Kind, n: usize, min: usize },
    #[error("range {p}..={q} does not fit {n} qubits")]
    BadRange { p: usize, q: usize, n: usize },
    #[error("body order k={0} is not valid here")]
    BadK(usize),
    #[error("no closed form for {0:?} with k={1}")]
    NoClosedForm(Kind, usize),
}

/// What to build. `range` places the construction on a contiguous
/// sub-range of the register (0-based, inclusive); default is all qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: Kind,
    pub n: usize,
    pub k: usize,
    pub range: Option<(usize, usize)>,
}

impl GeneratorSpec {
    pub fn new(kind: Kind, n: usize) -> Self {
        let k = match kind {
            Kind::G3 => 3,
            Kind::CleanSpecialG4 => 4,
            _ => 2,
        };
        GeneratorSpec { kind, n, k, range: None }
    }

    pub fn with_k(kind: Kind, n: usize, k: usize) -> Self {
        GeneratorSpec { kind, n, k, range: None }
    }

    fn span(&self) -> Result<(usize, usize), LnnError> {
        let (p, q) = self.range.unwrap_or((0, self.n.saturating_sub(1)));
        if p > q || q >= self.n {
            return Err(LnnError::BadRange { p, q, n: self.n });
        }
        Ok((p, q))
    }

    /// Qubits the construction acts on.
    pub fn width(&self) -> usize {
        self.span().map_or(0, |(p, q)| q - p + 1)
    }

    fn check(&self) -> Result<(usize, usize), LnnError> {
        let (p, q) = self.span()?;
        if matches!(self.kind, Kind::CleanSpecialGk | Kind::Gk) && self.k < 2 {
            return Err(LnnError::BadK(self.k));
        }
        if self.kind == Kind::CleanSpecialGk && self.k < 4 {
            return Err(LnnError::BadK(self.k));
        }
        let min = self.kind.min_qubits(self.k);
        let m = q - p + 1;
        if m < min {
            return Err(LnnError::TooSmall { kind: self.kind, n: m, min });
        }
        Ok((p, q))
    }
}

pub fn build(spec: &GeneratorSpec) -> Result<Circuit, LnnError> {
    use blocks::*;
    let (p, q) = spec.check()?;
    let n = spec.n;
    Ok(match spec.kind {
        Kind::Ptc => ptc(n, p, q),
        Kind::Cxc => cxc(n, p, q),
        Kind::CxcMod => cxc_mod(n, p, q),
        Kind::Swc => swc(n, p, q),
        Kind::Ptn => ptn(n, p, q),
        Kind::PtcMod => ptc_mod(n, p, q),
        Kind::PtnMod => ptn_mod(n, p, q),
        Kind::Ptn3 => ptn3(n, p, q),
        Kind::Ptn4 => ptn4(n, p, q),
        Kind::Cl => cl(n, p, q),
        Kind::G2 => g2(n, p, q),
        Kind::G3 => g3(n, p, q),
        Kind::CleanSpecialG4 => special_g4(n, p, q),
        Kind::CleanSpecialGk => special_gk(n, spec.k, p, q),
        Kind::Gk => {
            let m = q - p + 1;
            gk(m, spec.k).embed(n, p)
        }
    })
}

/// Size and CX depth predicted by the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expected {
    Exact { size: u64, depth: u64 },
    /// Leading-order terms only.
    Leading { size: f64, depth: f64 },
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn expected_metrics(spec: &GeneratorSpec) -> Result<Expected, LnnError> {
    spec.check()?;
    let m = spec.width() as i64;
    let odd = m % 2 == 1;
    let exact = |size: i64, depth: i64| Expected::Exact { size: size as u64, depth: depth as u64 };
    Ok(match spec.kind {
        Kind::Ptc => exact(2 * (m - 1), 2 * (m - 1)),
        Kind::Cxc => exact(m - 1, m - 1),
        Kind::Swc => exact(3 * (m - 1), 3 * (m - 1)),
        Kind::Ptn => exact(m * m - m, if m == 2 { 2 } else { 4 * m - 6 }),
        Kind::PtnMod => exact(m * m - 2 * m + 1, if m == 3 { 4 } else { 4 * m - 8 }),
        Kind::Ptn3 | Kind::Ptn4 => exact(m * m - m - 1, 4 * m - 7),
        Kind::Cl => {
            let v = (7 * m + if odd { 5 } else { -10 }) / 2;
            exact(v, v)
        }
        Kind::G2 => exact(m * m - 1, 4 * m - 4),
        Kind::G3 => exact(
            (m * m * m - m) / 3,
            match m {
                3 => 8,
                4 => 18,
                _ => m * m + 5 * m - 19,
            },
        ),
        Kind::CleanSpecialG4 => exact(
            (2 * m * m * m + 19 * m - 42 + if odd { 15 } else { -30 }) / 6,
            if m == 4 { 20 } else { (2 * m * m + 17 * m - 52 + if odd { 5 } else { -10 }) / 2 },
        ),
        Kind::Gk if spec.k == 2 => exact(m * m - 1, 4 * m - 4),
        Kind::Gk if spec.k == 3 => {
            return expected_metrics(&GeneratorSpec { kind: Kind::G3, ..*spec })
        }
        Kind::Gk => {
            let k = spec.k;
            let mf = m as f64;
            Expected::Leading {
                size: 2.0 * mf.powi(k as i32) / factorial(k),
                depth: 2.0 * mf.powi(k as i32 - 1) / factorial(k - 1),
            }
        }
        kind => return Err(LnnError::NoClosedForm(kind, spec.k)),
    })
}
