use crate::circuit::{Circuit, CircuitError};
use crate::gate::Gate;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("qasm line {line}: {msg}")]
    Qasm { line: usize, msg: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    moments: Vec<Vec<Gate>>,
}

pub fn to_json(c: &Circuit) -> String {
    serde_json::to_string(&CircuitJson { n: c.n(), moments: c.gate_moments() })
        .expect("circuit serializes")
}

pub fn from_json(s: &str) -> Result<Circuit, IoError> {
    let j: CircuitJson = serde_json::from_str(s)?;
    Ok(Circuit::from_moments(j.n, j.moments)?)
}

/// OpenQASM 2.0 text. Moments are separated by `barrier` statements so the
/// moment structure survives a round trip.
pub fn to_qasm(c: &Circuit) -> String {
    let mut out = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n", c.n());
    for (m, moment) in c.gate_moments().iter().enumerate() {
        if m > 0 {
            out.push_str("barrier q;\n");
        }
        for g in moment {
            let line = match *g {
                Gate::Cx { c, t } => format!("cx q[{c}],q[{t}];"),
                Gate::Rz { q, theta } => format!("rz({theta:?}) q[{q}];"),
                Gate::Rx { q, theta } => format!("rx({theta:?}) q[{q}];"),
                Gate::H { q } => format!("h q[{q}];"),
            };
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

/// Parses the subset written by [`to_qasm`]. Without barriers the gates are
/// packed as early as possible.
pub fn from_qasm(src: &str) -> Result<Circuit, IoError> {
    let err = |line: usize, msg: &str| IoError::Qasm { line, msg: msg.to_string() };
    let mut n = None;
    let mut moments: Vec<Vec<Gate>> = vec![Vec::new()];
    let mut saw_barrier = false;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split("//").next().unwrap_or("").trim();
        for stmt in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                let k = parse_index(rest.trim(), "q").ok_or_else(|| err(line, "bad qreg"))?;
                n = Some(k);
                continue;
            }
            if stmt.starts_with("barrier") {
                saw_barrier = true;
                moments.push(Vec::new());
                continue;
            }
            let (head, args) = match stmt.find(|c: char| c.is_whitespace()) {
                Some(p) if !stmt[..p].contains('(') || stmt[..p].contains(')') => {
                    (&stmt[..p], stmt[p..].trim())
                }
                _ => {
                    let close = stmt.find(')').ok_or_else(|| err(line, "bad gate"))?;
                    (&stmt[..=close], stmt[close + 1..].trim())
                }
            };
            let (name, param) = match head.find('(') {
                Some(p) => {
                    let expr = head[p + 1..].trim_end_matches(')');
                    let v = eval_angle(expr).ok_or_else(|| err(line, "bad angle"))?;
                    (&head[..p], Some(v))
                }
                None => (head, None),
            };
            let qs: Vec<usize> = args
                .split(',')
                .map(|a| parse_index(a.trim(), "q"))
                .collect::<Option<_>>()
                .ok_or_else(|| err(line, "bad operand"))?;
            let g = match (name, param, qs.as_slice()) {
                ("cx", None, &[c, t]) => Gate::Cx { c, t },
                ("rz", Some(theta), &[q]) => Gate::Rz { q, theta },
                ("rx", Some(theta), &[q]) => Gate::Rx { q, theta },
                ("h", None, &[q]) => Gate::H { q },
                _ => return Err(err(line, "unsupported gate")),
            };
            moments.last_mut().unwrap().push(g);
        }
    }
    let n = n.ok_or_else(|| err(0, "missing qreg"))?;
    if saw_barrier {
        return Ok(Circuit::from_moments(n, moments)?);
    }
    let serial: Vec<Vec<Gate>> = moments.concat().into_iter().map(|g| vec![g]).collect();
    Ok(Circuit::from_moments(n, serial)?.asap())
}

fn parse_index(s: &str, reg: &str) -> Option<usize> {
    let rest = s.strip_prefix(reg)?.trim().strip_prefix('[')?;
    rest.strip_suffix(']')?.trim().parse().ok()
}

/// Tiny evaluator for angle expressions: numbers, `pi`, unary minus, `*`, `/`.
fn eval_angle(expr: &str) -> Option<f64> {
    let expr = expr.trim();
    if let Some(rest) = expr.strip_prefix('-') {
        return eval_angle(rest).map(|v| -v);
    }
    if let Some(p) = expr.rfind(['*', '/']) {
        let (a, b) = (eval_angle(&expr[..p])?, eval_angle(&expr[p + 1..])?);
        return Some(if &expr[p..=p] == "*" { a * b } else { a / b });
    }
    if expr == "pi" {
        return Some(PI);
    }
    expr.parse().ok()
}
