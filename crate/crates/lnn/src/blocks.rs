//! Chains and networks on a contiguous qubit range `p..=q` of an
//! `n`-qubit register. Indices are 0-based.

use twine_core::{Block, Circuit, Gate};

fn cx(c: usize, t: usize) -> Gate {
    Gate::cx(c, t)
}

/// Plain concatenation of all parts.
pub fn seq(n: usize, parts: impl IntoIterator<Item = Circuit>) -> Circuit {
    parts.into_iter().fold(Circuit::new(n), |acc, c| {
        acc.then(&c).expect("plain concatenation never collides")
    })
}

fn shift(a: &Circuit, b: &Circuit, s: i64) -> Circuit {
    a.concat_shifted(b, s)
        .unwrap_or_else(|e| panic!("construction collided: {e}"))
}

pub fn single(n: usize, c: usize, t: usize) -> Circuit {
    Circuit::cx(n, c, t)
}

/// DX(c,t) = CX(t,c) then CX(c,t).
pub fn dx(n: usize, c: usize, t: usize) -> Circuit {
    Circuit::block(n, vec![vec![cx(t, c)], vec![cx(c, t)]], Block::Dx)
}

pub fn sw(n: usize, c: usize, t: usize) -> Circuit {
    Circuit::block(n, vec![vec![cx(c, t)], vec![cx(t, c)], vec![cx(c, t)]], Block::Sw)
}

fn mirrored(c: Circuit, p: usize, q: usize) -> Circuit {
    c.reverse(p, q).expect("block stays inside its range")
}

pub fn ptc(n: usize, p: usize, q: usize) -> Circuit {
    seq(n, (p..q).map(|i| dx(n, i, i + 1)))
}

pub fn ptc_rev(n: usize, p: usize, q: usize) -> Circuit {
    mirrored(ptc(n, p, q), p, q)
}

pub fn cxc(n: usize, p: usize, q: usize) -> Circuit {
    seq(n, (p..q).map(|i| single(n, i, i + 1)))
}

pub fn cxc_rev(n: usize, p: usize, q: usize) -> Circuit {
    mirrored(cxc(n, p, q), p, q)
}

/// Modified chain: CX(i,i+1) sits in moment 2(i-p).
pub fn cxc_mod(n: usize, p: usize, q: usize) -> Circuit {
    let mut moments = vec![Vec::new(); (2 * (q - p)).saturating_sub(1)];
    for i in p..q {
        moments[2 * (i - p)].push(cx(i, i + 1));
    }
    Circuit::from_moments(n, moments).expect("disjoint chain")
}

pub fn swc(n: usize, p: usize, q: usize) -> Circuit {
    seq(n, (p..q).map(|i| sw(n, i, i + 1)))
}

pub fn swc_rev(n: usize, p: usize, q: usize) -> Circuit {
    mirrored(swc(n, p, q), p, q)
}

/// Type I network: PTC(p..=q) then, four moments in, the network on p..=q-1.
pub fn ptn(n: usize, p: usize, q: usize) -> Circuit {
    match q.saturating_sub(p) {
        0 => Circuit::new(n),
        1 => ptc(n, p, q),
        _ => shift(&ptc(n, p, q), &ptn(n, p, q - 1), 4),
    }
}

pub fn ptc_mod(n: usize, p: usize, q: usize) -> Circuit {
    seq(n, [single(n, p, p + 1), ptc(n, p + 1, q)])
}

/// Modified type I network, at least three qubits.
pub fn ptn_mod(n: usize, p: usize, q: usize) -> Circuit {
    assert!(q >= p + 2, "needs three qubits");
    if q == p + 2 {
        seq(n, [ptc_mod(n, p, q), single(n, p, p + 1)])
    } else {
        shift(&ptc_mod(n, p, q), &ptn_mod(n, p, q - 1), 4)
    }
}

/// Type II network, at least three qubits.
pub fn ptn3(n: usize, p: usize, q: usize) -> Circuit {
    let head = seq(n, [single(n, p + 1, p + 2), cxc_mod(n, p + 2, q)]);
    shift(&head, &ptn_mod(n, p, q), 1)
}

/// Type III network, at least four qubits.
pub fn ptn4(n: usize, p: usize, q: usize) -> Circuit {
    let m = (q - p + 1) as i64;
    let inner = shift(&ptc(n, p, q), &ptn_mod(n, p, q - 1), 5);
    shift(&cxc_mod(n, p + 2, q), &inner, -2 * (m - 3))
}

/// Shift s_m between consecutive special networks.
pub fn s(m: usize) -> i64 {
    match m {
        0..=3 => 0,
        4 => -1,
        _ => -2 * (m as i64 - 4),
    }
}

/// W3 on p..=q (at least three qubits).
pub fn w3(n: usize, p: usize, q: usize) -> Circuit {
    let m = q - p + 1;
    if m == 3 {
        return ptn3(n, p, q);
    }
    let rest = mirrored(w3(n, p + 1, q), p + 1, q);
    shift(&ptn3(n, p, q), &rest, s(m - 1))
}

/// W4 on p..=q (at least four qubits).
pub fn w4(n: usize, p: usize, q: usize) -> Circuit {
    let m = q - p + 1;
    if m == 4 {
        return ptn4(n, p, q);
    }
    let rest = mirrored(w4(n, p + 1, q), p + 1, q);
    shift(&ptn4(n, p, q), &rest, s(m - 1))
}

/// Post-cleanup circuit on p..=q.
pub fn cl(n: usize, p: usize, q: usize) -> Circuit {
    let m = q - p + 1;
    let odd = m % 2 == 1;
    let mm = m / 2; // ceil((m-1)/2), 1-based
    let at = |r: usize| p + r - 1;
    let (c, t) = if odd { (mm + 1, mm + 2) } else { (mm + 1, mm) };
    let osc = if odd { swc(n, at(mm), at(mm + 2)) } else { Circuit::new(n) };
    seq(
        n,
        [
            single(n, at(c), at(t)),
            osc,
            ptc(n, at(mm + 2), q),
            swc_rev(n, at(mm), q),
            ptc_rev(n, p, at(mm)),
        ],
    )
}

/// Two-body generator on p..=q, at least three qubits.
pub fn g2(n: usize, p: usize, q: usize) -> Circuit {
    let m = (q - p + 1) as i64;
    shift(&ptn(n, p, q), &cxc_rev(n, p, q), -(m - 3))
}

/// Three-body generator on p..=q, at least three qubits.
pub fn g3(n: usize, p: usize, q: usize) -> Circuit {
    let m = q - p + 1;
    let (c, t) = if m % 2 == 1 { (m.div_ceil(2) + 1, m.div_ceil(2)) } else { (m / 2, m / 2 + 1) };
    seq(
        n,
        [
            cxc(n, p, q).adjoint(),
            w3(n, p, q),
            single(n, p + c - 1, p + t - 1),
        ],
    )
}

/// Clean special four-body generator on p..=q, at least four qubits.
pub fn special_g4(n: usize, p: usize, q: usize) -> Circuit {
    seq(n, [cxc(n, p + 1, q).adjoint(), w4(n, p, q), cl(n, p, q)])
}

/// Clean special k-body generator (k >= 4) on p..=q.
pub fn special_gk(n: usize, k: usize, p: usize, q: usize) -> Circuit {
    assert!(k >= 4 && q + 1 >= p + k, "needs k >= 4 and at least k qubits");
    if k == 4 {
        return special_g4(n, p, q);
    }
    let m = q - p + 1;
    seq(
        n,
        [
            wk(n, k, p, q),
            single(n, p + m - k, p + m - k + 1),
            ptc_rev(n, p, p + m - k),
        ],
    )
}

fn wk(n: usize, k: usize, p: usize, q: usize) -> Circuit {
    let head = seq(n, [single(n, p, p + 1), special_gk(n, k - 1, p + 1, q)]);
    if q - p + 1 == k {
        return head;
    }
    seq(n, [head, sw(n, p, p + 1), wk(n, k, p + 1, q)])
}

/// Full k-body generator on n qubits.
pub fn gk(n: usize, k: usize) -> Circuit {
    match k {
        2 => g2(n, 0, n - 1),
        3 => g3(n, 0, n - 1),
        _ => seq(n, (0..=n - k).map(|p| special_gk(n, k, p, n - 1))),
    }
}
