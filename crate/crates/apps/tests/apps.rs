use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use twine_apps::*;
use twine_core::metrics::cnot_depth;
use twine_core::{Circuit, Gate, Label, LabelState};
use twine_graph::generator;
use twine_topology::{build_family, ConnectivityGraph};
use twine_verify::*;

fn graph(s: &str) -> ConnectivityGraph {
    build_family(s.parse().unwrap()).unwrap()
}

fn c1(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bit(x: usize, q: usize) -> usize {
    x >> q & 1
}

/// DFT on the register, most significant input bit on `order[0]`. Output
/// bit j lands on `order[j]` with weight 2^j, as the textbook circuit
/// without final swaps leaves it.
fn dft(n: usize, order: &[usize]) -> DenseMatrix {
    let nn = 1usize << n;
    let x_val = |x: usize| order.iter().enumerate().fold(0, |a, (j, &w)| a | bit(x, w) << (n - 1 - j));
    let y_val = |y: usize| order.iter().enumerate().fold(0, |a, (j, &w)| a | bit(y, w) << j);
    DenseMatrix::from_fn(nn, |y, x| {
        Complex64::from_polar(1.0 / (nn as f64).sqrt(), 2.0 * PI * (x_val(x) * y_val(y)) as f64 / nn as f64)
    })
}

/// Textbook QFT without final swaps, dropping controlled phases below the
/// threshold. Gates are applied one at a time as dense matrices.
fn textbook_qft(n: usize, threshold: f64) -> DenseMatrix {
    let nn = 1usize << n;
    let mut u = DenseMatrix::identity(nn);
    for j in 0..n {
        u.apply(&Gate::H { q: j });
        for k in j + 1..n {
            let phi = PI / 2f64.powi((k - j) as i32);
            if phi < threshold {
                continue;
            }
            let d: Vec<Complex64> =
                (0..nn).map(|x| Complex64::from_polar(1.0, if bit(x, j) & bit(x, k) == 1 { phi } else { 0.0 })).collect();
            u = DenseMatrix::diagonal(&d).mul(&u).unwrap();
        }
    }
    u
}

fn check_qft(s: &str) {
    let g = graph(s);
    let r = synth_qft(&g, None).unwrap();
    let u = dense_unitary(&r.circuit).unwrap();
    let (ok, err) = equal_up_to_perm_phase(&dft(g.n(), &r.order), &u, &r.output).unwrap();
    assert!(ok, "{s}: error {err}");
    r.schedule.verify(&r.circuit).unwrap();
    assert!(connectivity_check(&r.circuit, &g).connectivity_ok, "{s}");
}

#[test]
fn qft_matches_the_dft_on_every_family() {
    for n in 2..=6 {
        check_qft(&format!("lnn:{n}"));
        check_qft(&format!("all-to-all:{n}"));
    }
    for s in ["grid:2x2", "grid:2x3", "grid:3x2", "ladder:4", "ladder:6", "heavy-hex:1", "heavy-hex:2"] {
        check_qft(s);
    }
}

#[test]
fn textbook_reference_is_the_dft() {
    for n in 1..=5 {
        let order: Vec<usize> = (0..n).collect();
        let (ok, err) = equal_up_to_perm_phase(&dft(n, &order), &textbook_qft(n, 0.0), &order).unwrap();
        assert!(ok, "n={n}: {err}");
    }
}

#[test]
fn qft_table_metrics() {
    for n in 3..=30 {
        let r = synth_qft(&graph(&format!("lnn:{n}")), None).unwrap();
        assert_eq!(r.circuit.cx_count(), n * n - 1, "lnn n={n}");
        assert_eq!(cnot_depth(&r.circuit), 4 * n - 4, "lnn n={n}");
        let r = synth_qft(&graph(&format!("all-to-all:{n}")), None).unwrap();
        assert_eq!(r.circuit.cx_count(), n * (n - 1) / 2 + n - 1, "a2a n={n}");
        assert_eq!(cnot_depth(&r.circuit), 2 * n - 1, "a2a n={n}");
    }
    for c in 2..=10 {
        let n = 3 * c;
        let r = synth_qft(&graph(&format!("grid:3x{c}")), None).unwrap();
        assert!(cnot_depth(&r.circuit) <= 6 * n, "grid 3x{c}");
        assert!(3 * r.circuit.cx_count() <= 2 * n * n + 4 * n, "grid 3x{c}");
    }
}

#[test]
fn every_rx_is_logically_single_qubit() {
    for s in ["lnn:7", "all-to-all:7", "grid:3x4", "ladder:10", "heavy-hex:3"] {
        let g = graph(s);
        let r = synth_qft(&g, None).unwrap();
        let mut st = LabelState::singles_tracked(g.n());
        let mut rx = 0;
        for moment in r.circuit.ops() {
            for o in moment {
                if let Gate::Rx { q, .. } = o.gate {
                    assert_eq!(st.x.as_ref().unwrap()[q].weight(), 1, "{s}");
                    rx += 1;
                }
            }
            for o in moment {
                st.apply(&o.gate).unwrap();
            }
        }
        assert_eq!(rx, g.n(), "{s}");
    }
}

#[test]
fn approximate_qft() {
    for n in 1..=8 {
        let exact = synth_qft(&graph(&format!("all-to-all:{n}")), None).unwrap();
        assert_eq!(synth_qft_approx(n, 0.0).unwrap(), exact, "n={n}");
        let h = synth_qft_approx(n, FRAC_PI_2 + 0.01).unwrap();
        assert_eq!(h.circuit.cx_count(), 0);
        let u = dense_unitary(&h.circuit).unwrap();
        let (ok, _) = equal_up_to_perm_phase(&textbook_qft(n, 4.0), &u, &h.output).unwrap();
        assert!(ok, "hadamard layer n={n}");
    }
    let n = 6;
    let threshold = PI / 16.0;
    let a = synth_qft_approx(n, threshold).unwrap();
    a.schedule.verify(&a.circuit).unwrap();
    let u = dense_unitary(&a.circuit).unwrap();
    let (ok, err) = equal_up_to_perm_phase(&textbook_qft(n, threshold), &u, &a.output).unwrap();
    assert!(ok, "truncated reference: {err}");
    let (_, dist) = equal_up_to_perm_phase(&textbook_qft(n, 0.0), &u, &a.output).unwrap();
    println!("n=6 threshold pi/16: max-norm distance to the exact QFT {dist:.3e}");
    // Only the controlled phase π/32 is dropped.
    assert!(dist > 1e-6 && dist <= PI / 32.0);
    // The dropped CX comes back as the band entry of the last qubit.
    assert_eq!(a.circuit.cx_count(), synth_qft_approx(n, 0.0).unwrap().circuit.cx_count());
    let banded = synth_qft_approx(20, PI / 8.0).unwrap();
    // Band of three partners, interleaved decode and one entry per qubit.
    assert_eq!(banded.circuit.cx_count(), 5 * 20 - 11);
    for (n, t) in [(10, PI / 8.0), (12, PI / 4.0), (9, PI / 64.0)] {
        let a = synth_qft_approx(n, t).unwrap();
        a.schedule.verify(&a.circuit).unwrap();
    }
    assert!(synth_qft_approx(4, -1.0).is_err());
}

fn random_problem(n: usize, rng: &mut ChaCha8Rng, three: bool) -> QuboProblem {
    let mut p = QuboProblem::new(n);
    for a in 0..n {
        p.add_h(a, rng.gen_range(-1.0..1.0)).unwrap();
        for b in a + 1..n {
            p.add_j(a, b, rng.gen_range(-1.0..1.0)).unwrap();
            if three {
                for c in b + 1..n {
                    p.add_m(a, b, c, rng.gen_range(-1.0..1.0)).unwrap();
                }
            }
        }
    }
    p
}

fn spin(x: usize, q: usize) -> f64 {
    1.0 - 2.0 * bit(x, q) as f64
}

fn energy(p: &QuboProblem, x: usize) -> f64 {
    let two: f64 = p.j.iter().map(|(&(a, b), v)| v * spin(x, a) * spin(x, b)).sum();
    let one: f64 = p.h.iter().map(|(&a, v)| v * spin(x, a)).sum();
    let three: f64 = p.m.iter().map(|(&(a, b, c), v)| v * spin(x, a) * spin(x, b) * spin(x, c)).sum();
    two + one + three
}

fn diag_exp(n: usize, f: impl Fn(usize) -> f64) -> DenseMatrix {
    let d: Vec<Complex64> = (0..1usize << n).map(|x| Complex64::from_polar(1.0, -f(x))).collect();
    DenseMatrix::diagonal(&d)
}

/// exp(-i Σ θ_q X_q) as a product of single-qubit factors.
fn x_exp(n: usize, theta: &[f64]) -> DenseMatrix {
    DenseMatrix::from_fn(1 << n, |y, x| {
        (0..n).fold(c1(1.0, 0.0), |acc, q| {
            let (s, c) = theta[q].sin_cos();
            acc * if bit(x, q) == bit(y, q) { c1(c, 0.0) } else { c1(0.0, -s) }
        })
    })
}

fn qaoa_oracle(p: &QuboProblem, angles: &QaoaAngles) -> DenseMatrix {
    let n = p.n;
    let mut u = DenseMatrix::identity(1 << n);
    for (b, a) in angles.beta.iter().zip(&angles.alpha) {
        u = diag_exp(n, |x| b * energy(p, x)).mul(&u).unwrap();
        u = x_exp(n, &vec![*a; n]).mul(&u).unwrap();
    }
    u
}

#[test]
fn qaoa_matches_the_oracle() {
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 3..=5 {
            let mut graphs = vec![format!("lnn:{n}"), format!("all-to-all:{n}")];
            if n == 4 {
                graphs.extend(["grid:2x2".to_string(), "ladder:4".to_string(), "heavy-hex:1".to_string()]);
            }
            for s in &graphs {
                let g = graph(s);
                let prob = random_problem(n, &mut rng, false);
                for p in 1..=2 {
                    let angles = QaoaAngles {
                        beta: (0..p).map(|_| rng.gen_range(-1.5..1.5)).collect(),
                        alpha: (0..p).map(|_| rng.gen_range(-1.5..1.5)).collect(),
                    };
                    let r = synth_qaoa(&prob, &g, None, p, &angles).unwrap();
                    r.schedule.verify(&r.circuit).unwrap();
                    let u = dense_unitary(&r.circuit).unwrap();
                    let (ok, err) = equal_up_to_perm_phase(&qaoa_oracle(&prob, &angles), &u, &r.output).unwrap();
                    assert!(ok, "{s} p={p} seed={seed}: {err}");
                }
            }
        }
    }
}

#[test]
fn hubo_matches_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 3..=5 {
        for s in [format!("lnn:{n}"), format!("all-to-all:{n}")] {
            let prob = random_problem(n, &mut rng, true);
            let angles = QaoaAngles { beta: vec![0.4, -0.7], alpha: vec![0.3, 1.1] };
            let r = synth_qaoa(&prob, &graph(&s), None, 2, &angles).unwrap();
            r.schedule.verify(&r.circuit).unwrap();
            let u = dense_unitary(&r.circuit).unwrap();
            let (ok, err) = equal_up_to_perm_phase(&qaoa_oracle(&prob, &angles), &u, &r.output).unwrap();
            assert!(ok, "{s}: {err}");
        }
    }
    let mut prob = QuboProblem::new(4);
    prob.add_m(0, 1, 2, 1.0).unwrap();
    let angles = QaoaAngles { beta: vec![0.1], alpha: vec![0.1] };
    assert!(matches!(synth_qaoa(&prob, &graph("grid:2x2"), None, 1, &angles), Err(AppError::Unsupported(_))));
}

#[test]
fn qaoa_depth_bounds() {
    // Per extra cycle the LNN block costs 2n + 2 and the grid block 3n + 11.
    const C_LNN: usize = 8;
    const C_GRID_PER_CYCLE: usize = 11;
    let dense = |n: usize| {
        let mut p = QuboProblem::new(n);
        for a in 0..n {
            for b in a + 1..n {
                p.add_j(a, b, 1.0).unwrap();
            }
        }
        p
    };
    for n in (6..=40).step_by(2) {
        let g = graph(&format!("lnn:{n}"));
        for p in 1..=4 {
            let angles = QaoaAngles { beta: vec![0.2; p], alpha: vec![0.3; p] };
            let r = synth_qaoa(&dense(n), &g, None, p, &angles).unwrap();
            assert_eq!(r.circuit.cx_count(), p * (n * n - 1), "n={n} p={p}");
            assert!(cnot_depth(&r.circuit) <= 2 * n * (p + 1) + C_LNN, "n={n} p={p}");
        }
    }
    for c in 2..=12 {
        let g = graph(&format!("grid:3x{c}"));
        let n = g.n();
        for p in [1, 3, 5] {
            let angles = QaoaAngles { beta: vec![0.2; p], alpha: vec![0.3; p] };
            let r = synth_qaoa(&dense(n), &g, None, p, &angles).unwrap();
            assert!(cnot_depth(&r.circuit) <= 3 * n * (p + 1) + C_GRID_PER_CYCLE * p, "3x{c} p={p}");
        }
    }
}

fn skeleton(c: &Circuit) -> Vec<Vec<Gate>> {
    c.gate_moments()
        .into_iter()
        .map(|m| {
            m.into_iter()
                .map(|g| match g {
                    Gate::Rz { q, .. } => Gate::Rz { q, theta: 0.0 },
                    Gate::Rx { q, .. } => Gate::Rx { q, theta: 0.0 },
                    g => g,
                })
                .collect()
        })
        .collect()
}

#[test]
fn qaoa_structure_ignores_angles() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in ["lnn:9", "grid:3x3", "ladder:8", "all-to-all:8", "heavy-hex:2"] {
        let g = graph(s);
        let prob = random_problem(g.n(), &mut rng, false);
        let a = QaoaAngles { beta: vec![0.1, 0.2, 0.3], alpha: vec![0.4, 0.5, 0.6] };
        let b = QaoaAngles { beta: vec![-2.0, 1.0, 3.0], alpha: vec![0.0, 7.0, -1.0] };
        let ra = synth_qaoa(&prob, &g, None, 3, &a).unwrap();
        let rb = synth_qaoa(&prob, &g, None, 3, &b).unwrap();
        assert_eq!(skeleton(&ra.circuit), skeleton(&rb.circuit), "{s}");
        assert_ne!(ra.circuit, rb.circuit);
    }
}

#[test]
fn sparse_problems_rotate_each_label_once_per_cycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in ["lnn:10", "grid:3x4", "ladder:10", "heavy-hex:3", "all-to-all:9"] {
        let g = graph(s);
        let n = g.n();
        let mut prob = QuboProblem::new(n);
        let mut want = BTreeSet::new();
        while want.len() < n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                prob.add_j(a, b, rng.gen_range(-1.0..1.0)).unwrap();
                want.insert(Label::from_indices(n, [a, b]));
            }
        }
        let p = 3;
        let angles = QaoaAngles { beta: vec![0.3; p], alpha: vec![0.2; p] };
        let r = synth_qaoa(&prob, &g, None, p, &angles).unwrap();
        r.schedule.verify(&r.circuit).unwrap();
        for j in 0..p {
            let labels: Vec<Label> = r.schedule.block(j).map(|x| x.label.clone()).collect();
            assert_eq!(labels.len(), want.len(), "{s} cycle {j}");
            assert_eq!(labels.into_iter().collect::<BTreeSet<_>>(), want, "{s} cycle {j}");
        }
    }
}

fn trotter_oracle(p: &QuboProblem, tau: f64) -> DenseMatrix {
    let n = p.n;
    let half: Vec<f64> = (0..n).map(|q| p.g.get(&q).copied().unwrap_or(0.0) * tau / 2.0).collect();
    let zz = diag_exp(n, |x| tau * p.j.iter().map(|(&(a, b), v)| v * spin(x, a) * spin(x, b)).sum::<f64>());
    let z = diag_exp(n, |x| tau * p.h.iter().map(|(&a, v)| v * spin(x, a)).sum::<f64>());
    let xh = x_exp(n, &half);
    xh.mul(&z).unwrap().mul(&zz).unwrap().mul(&xh).unwrap()
}

#[test]
fn trotter_matches_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 3..=5 {
        let mut graphs = vec![format!("lnn:{n}"), format!("all-to-all:{n}")];
        if n == 4 {
            graphs.extend(["grid:2x2".to_string(), "ladder:4".to_string()]);
        }
        for s in graphs {
            let g = graph(&s);
            let mut prob = random_problem(n, &mut rng, false);
            for q in 0..n {
                prob.add_g(q, rng.gen_range(-1.0..1.0)).unwrap();
            }
            let tau = rng.gen_range(0.05..0.8);
            let r = synth_trotter_mfim(&prob, &g, None, tau).unwrap();
            r.schedule.verify(&r.circuit).unwrap();
            let u = dense_unitary(&r.circuit).unwrap();
            let (ok, err) = equal_up_to_perm_phase(&trotter_oracle(&prob, tau), &u, &r.output).unwrap();
            assert!(ok, "{s}: {err}");
            let g2 = generator(&g, None, 2).unwrap();
            assert_eq!(r.circuit.cx_count(), g2.cx_count(), "{s}");
            assert_eq!(cnot_depth(&r.circuit), cnot_depth(&g2), "{s}");
        }
    }
}

#[test]
fn trotter_special_cases() {
    let g = graph("lnn:5");
    let mut prob = random_problem(5, &mut ChaCha8Rng::seed_from_u64(1), false);
    for q in 0..5 {
        prob.add_g(q, 0.7).unwrap();
    }
    let r = synth_trotter_mfim(&prob, &g, None, 0.0).unwrap();
    let u = dense_unitary(&r.circuit).unwrap();
    assert!(equal_up_to_perm_phase(&DenseMatrix::identity(32), &u, &r.output).unwrap().0);

    let mut pure = QuboProblem::new(5);
    pure.j = prob.j.clone();
    let r = synth_trotter_mfim(&pure, &g, None, 0.4).unwrap();
    let cx_moments = |c: &Circuit| -> Vec<Vec<Gate>> {
        c.gate_moments().into_iter().map(|m| m.into_iter().filter(Gate::is_cx).collect::<Vec<_>>()).filter(|m| !m.is_empty()).collect()
    };
    assert_eq!(cx_moments(&r.circuit), cx_moments(&generator(&g, None, 2).unwrap().asap()));
    assert!(r.circuit.gates().all(|x| !matches!(x, Gate::Rx { .. })));
    assert_eq!(r.schedule.records.len(), pure.j.len());

    prob.add_m(0, 1, 2, 1.0).unwrap();
    assert!(matches!(synth_trotter_mfim(&prob, &g, None, 0.1), Err(AppError::Unsupported(_))));
}

#[test]
fn argument_errors() {
    let g = graph("lnn:4");
    let prob = QuboProblem::new(4);
    let one = QaoaAngles { beta: vec![0.1], alpha: vec![0.1] };
    assert!(matches!(synth_qaoa(&prob, &g, None, 0, &one), Err(AppError::Argument(_))));
    assert!(matches!(synth_qaoa(&prob, &g, None, 2, &one), Err(AppError::Argument(_))));
    assert!(matches!(synth_qaoa(&QuboProblem::new(5), &g, None, 1, &one), Err(AppError::Size { .. })));
}

#[test]
fn problem_json() {
    let s = r#"{"n":4,"J":[[0,1,0.5],[3,2,-1.0],[1,0,0.25]],"h":[[2,0.1]],"M":[[2,0,1,2.0]]}"#;
    let p = QuboProblem::from_json(s).unwrap();
    assert_eq!(p.j.get(&(0, 1)), Some(&0.75));
    assert_eq!(p.j.get(&(2, 3)), Some(&-1.0));
    assert_eq!(p.m.get(&(0, 1, 2)), Some(&2.0));
    assert_eq!(QuboProblem::from_json(&p.to_json()).unwrap(), p);
    assert_eq!(
        QuboProblem::from_json(r#"{"n":2,"J":[[0,2,1.0]]}"#).unwrap_err(),
        ProblemError::Index { index: 2, n: 2 }
    );
    assert!(matches!(QuboProblem::from_json(r#"{"n":2,"J":[[1,1,1.0]]}"#), Err(ProblemError::Repeated(_))));
    assert!(matches!(QuboProblem::from_json("{"), Err(ProblemError::Json(_))));
}

fn gate_seq(n: usize) -> impl Strategy<Value = Vec<Gate>> {
    let g = (0..n, 1..n, 0..3u8, -3.0f64..3.0).prop_map(move |(q, d, kind, th)| match kind {
        0 => Gate::cx(q, (q + d) % n),
        1 => Gate::Rz { q, theta: th },
        _ => Gate::Rx { q, theta: th },
    });
    prop::collection::vec(g, 0..30)
}

proptest! {
    #[test]
    fn packing_keeps_the_unitary_and_cx_depth(gates in gate_seq(4)) {
        let (c, at) = pack(4, &gates);
        prop_assert_eq!(at.len(), gates.len());
        let moments = c.gate_moments();
        for (g, &m) in gates.iter().zip(&at) {
            prop_assert!(moments[m].contains(g));
        }
        let seq = Circuit::from_sequence(4, gates.clone()).unwrap();
        let (ok, err) = equal_up_to_perm_phase(&dense_unitary(&seq).unwrap(), &dense_unitary(&c).unwrap(), &[0, 1, 2, 3]).unwrap();
        prop_assert!(ok, "error {}", err);
        let cx_only = Circuit::from_sequence(4, gates.iter().filter(|g| g.is_cx()).copied()).unwrap();
        prop_assert_eq!(cnot_depth(&c), cnot_depth(&cx_only));
    }
}
