//! Analytical fidelity model: two-qubit gate errors plus idling errors on
//! every qubit-moment not covered by a CX.

use std::fmt;
use thiserror::Error;
use twine_core::Metrics;

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("{0} must lie in (0, 1]")]
    OutOfRange(&'static str),
    #[error("need at least two probabilities, got {0}")]
    TooFew(usize),
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    pub f_2q: f64,
    pub f_idle: f64,
}

impl NoiseParams {
    pub fn new(f_2q: f64, f_idle: f64) -> Result<Self, NoiseError> {
        for (v, name) in [(f_2q, "f_2q"), (f_idle, "f_idle")] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(NoiseError::OutOfRange(name));
            }
        }
        Ok(NoiseParams { f_2q, f_idle })
    }

    /// Idle fidelity from lifetimes and the two-qubit gate time.
    pub fn from_times(f_2q: f64, t1: f64, t2: f64, tg: f64) -> Result<Self, NoiseError> {
        Self::new(f_2q, idle_fidelity(t1, t2, tg)?)
    }

    /// A CX is expected to be worse than two qubits idling.
    pub fn is_physical(&self) -> bool {
        self.f_2q <= self.f_idle * self.f_idle
    }
}

/// Average fidelity of one idle moment under amplitude and phase damping.
pub fn idle_fidelity(t1: f64, t2: f64, tg: f64) -> Result<f64, NoiseError> {
    if !(t1 > 0.0) {
        return Err(NoiseError::NonPositive("T1"));
    }
    if !(t2 > 0.0) {
        return Err(NoiseError::NonPositive("T2"));
    }
    if !(tg >= 0.0) {
        return Err(NoiseError::NonPositive("Tg"));
    }
    Ok(0.5 + (2.0 * (-tg / t2).exp() + (-tg / t1).exp()) / 6.0)
}

/// F_2q^count · F_idle^(n·depth − 2·count), in log form.
pub fn log_fidelity(count: f64, depth: f64, n: f64, p: &NoiseParams) -> f64 {
    count * p.f_2q.ln() + (n * depth - 2.0 * count) * p.f_idle.ln()
}

/// Fidelity of a circuit from its CX count and CX depth.
pub fn circuit_fidelity(m: &Metrics, n: usize, p: &NoiseParams) -> f64 {
    log_fidelity(m.cnot_count as f64, m.cnot_depth as f64, n as f64, p).exp()
}

/// Same model with the effective depth, i.e. qubits stop idling after their
/// last CX.
pub fn circuit_fidelity_effective(m: &Metrics, n: usize, p: &NoiseParams) -> f64 {
    log_fidelity(m.cnot_count as f64, m.effective_depth, n as f64, p).exp()
}

/// Two-body generator designs with closed-form count and effective depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Design {
    Lnn,
    Ladder,
    Grid,
    HeavyHex,
}

impl Design {
    pub const ALL: [Design; 4] = [Design::Lnn, Design::Ladder, Design::Grid, Design::HeavyHex];

    pub fn count(self, n: f64) -> f64 {
        match self {
            Design::Lnn => n * n,
            Design::HeavyHex => 5.0 / 6.0 * n * n + 17.0 / 6.0 * n,
            Design::Ladder => 0.75 * n * n + n,
            Design::Grid => 2.0 / 3.0 * n * n + 2.0 / 3.0 * n,
        }
    }

    pub fn effective_depth(self, n: f64) -> f64 {
        match self {
            Design::Lnn => 3.0 * n + 2.0,
            Design::HeavyHex => 10.0 / 3.0 * n + 51.0 / 3.0,
            Design::Ladder => 9.0 / 4.0 * n + 1.5,
            Design::Grid => 11.0 / 3.0 * n + 4.0 / 3.0,
        }
    }

    /// Exponent of F_idle accumulated by idling qubit-moments.
    fn idle_moments(self, n: f64) -> f64 {
        n * self.effective_depth(n) - 2.0 * self.count(n)
    }

    pub fn log_fidelity(self, n: usize, p: &NoiseParams) -> f64 {
        let n = n as f64;
        log_fidelity(self.count(n), self.effective_depth(n), n, p)
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Design::Lnn => "lnn",
            Design::Ladder => "ladder",
            Design::Grid => "grid",
            Design::HeavyHex => "heavy_hex",
        })
    }
}

/// x such that designs `a` and `b` are equally good at F_2q = F_idle^x.
/// None when both have the same count.
pub fn crossover_exponent(a: Design, b: Design, n: usize) -> Option<f64> {
    let n = n as f64;
    let dc = a.count(n) - b.count(n);
    if dc.abs() < 1e-12 {
        return None;
    }
    Some((b.idle_moments(n) - a.idle_moments(n)) / dc)
}

/// Limit of `crossover_exponent` as n grows, from the n² coefficients.
pub fn asymptotic_crossover(a: Design, b: Design) -> Option<f64> {
    let lead = |d: Design| {
        let (c2, d1) = (d.count(2.0) - 2.0 * d.count(1.0) + d.count(0.0), d.effective_depth(1.0) - d.effective_depth(0.0));
        (c2 / 2.0, d1 - c2)
    };
    let ((ca, ia), (cb, ib)) = (lead(a), lead(b));
    if (ca - cb).abs() < 1e-12 {
        return None;
    }
    Some((ib - ia) / (ca - cb))
}

/// The same crossover found by bisection on F_2q at a fixed F_idle,
/// reported as ln F_2q / ln F_idle.
pub fn solve_crossover(a: Design, b: Design, n: usize, f_idle: f64) -> Option<f64> {
    if !(f_idle > 0.0 && f_idle < 1.0) {
        return None;
    }
    let gap = |lf2: f64| {
        let p = NoiseParams { f_2q: lf2.exp(), f_idle };
        a.log_fidelity(n, &p) - b.log_fidelity(n, &p)
    };
    // Search exponents up to 10^3 of the idle log.
    let (mut lo, mut hi) = (1000.0 * f_idle.ln(), 0.0);
    let (glo, ghi) = (gap(lo), gap(hi));
    if glo == 0.0 {
        return Some(lo / f_idle.ln());
    }
    if glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi) / f_idle.ln())
}

/// ln(F_grid / F_ladder) / n from the leading closed forms.
pub fn transition_exponent(n: usize, p: &NoiseParams) -> f64 {
    let n = n as f64;
    let (f2, fi) = (p.f_2q.ln(), p.f_idle.ln());
    -(n / 12.0) * (f2 - 19.0 * fi) - (2.0 * f2 - 3.0 * fi) / 6.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    /// Designs with their fidelity, best first.
    pub order: Vec<(Design, f64)>,
    /// Crossover exponents for every pair with distinct counts.
    pub crossovers: Vec<(Design, Design, f64)>,
}

/// Ranks the two-body designs at `n` qubits with the effective-depth model.
pub fn best_design(n: usize, p: &NoiseParams) -> Ranking {
    let mut order: Vec<(Design, f64)> = Design::ALL.iter().map(|&d| (d, d.log_fidelity(n, p).exp())).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut crossovers = Vec::new();
    for (i, &a) in Design::ALL.iter().enumerate() {
        for &b in &Design::ALL[i + 1..] {
            if let Some(x) = crossover_exponent(a, b, n) {
                crossovers.push((a, b, x));
            }
        }
    }
    Ranking { order, crossovers }
}

/// Process fidelity estimated from the success probabilities of m
/// prepared basis states.
pub fn process_fidelity(probs: &[f64]) -> Result<f64, NoiseError> {
    let m = probs.len();
    if m < 2 {
        return Err(NoiseError::TooFew(m));
    }
    if let Some(&p) = probs.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
        return Err(NoiseError::Probability(p));
    }
    let mf = m as f64;
    let mean_sqrt = probs.iter().map(|p| p.sqrt()).sum::<f64>() / mf;
    let sum: f64 = probs.iter().sum();
    Ok(mf / (mf - 1.0) * mean_sqrt * mean_sqrt - sum / (mf * (mf - 1.0)))
}
