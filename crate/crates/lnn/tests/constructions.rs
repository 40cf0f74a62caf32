use proptest::prelude::*;
use std::collections::HashSet;
use twine_core::metrics::cnot_depth;
use twine_core::*;
use twine_lnn::blocks::*;
use twine_lnn::*;

fn l(n: usize, idx: &[usize]) -> Label {
    Label::from_indices(n, idx.iter().copied())
}

fn singles(n: usize) -> LabelState {
    LabelState::singles(n)
}

fn run(c: &Circuit, start: &LabelState) -> (Vec<Label>, HashSet<Label>) {
    let (st, seen) = run_and_collect(c, start).unwrap();
    (st.z, seen)
}

/// Builds every kind with a closed form and compares size and depth.
fn check_formulas(kind: Kind, k: usize, upto: usize) {
    let min = kind.min_qubits(k);
    for n in min.max(2)..=upto {
        let spec = GeneratorSpec::with_k(kind, n, k);
        let c = build(&spec).unwrap();
        match expected_metrics(&spec).unwrap() {
            Expected::Exact { size, depth } => {
                assert_eq!(c.cx_count() as u64, size, "{kind:?} size at n={n}");
                assert_eq!(cnot_depth(&c) as u64, depth, "{kind:?} depth at n={n}");
            }
            Expected::Leading { .. } => panic!("expected exact form for {kind:?}"),
        }
    }
}

#[test]
fn closed_forms_hold_up_to_64() {
    for kind in [
        Kind::Ptc,
        Kind::Cxc,
        Kind::Swc,
        Kind::Ptn,
        Kind::PtnMod,
        Kind::Ptn3,
        Kind::Ptn4,
        Kind::Cl,
        Kind::G2,
        Kind::G3,
        Kind::CleanSpecialG4,
    ] {
        check_formulas(kind, 2, 64);
    }
    check_formulas(Kind::Gk, 2, 40);
    check_formulas(Kind::Gk, 3, 30);
}

#[test]
fn spot_values() {
    let sd = |kind, n| {
        let c = build(&GeneratorSpec::new(kind, n)).unwrap();
        (c.cx_count(), cnot_depth(&c))
    };
    assert_eq!(sd(Kind::Ptn, 3), (6, 6));
    assert_eq!(sd(Kind::Ptn, 10), (90, 34));
    assert_eq!(sd(Kind::G2, 3), (8, 8));
    assert_eq!(sd(Kind::Ptn3, 4), (11, 9));
    assert_eq!(sd(Kind::PtnMod, 5), (16, 12));
    assert_eq!(sd(Kind::G3, 4), (20, 18));
    assert_eq!(sd(Kind::G3, 5), (40, 31));
    assert_eq!(sd(Kind::Cl, 4), (9, 9));
    assert_eq!(sd(Kind::Cl, 5), (20, 20));
    assert_eq!(sd(Kind::CleanSpecialG4, 4), (22, 20));
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(build(&GeneratorSpec::new(Kind::G3, 2)).is_err());
    assert!(build(&GeneratorSpec::with_k(Kind::CleanSpecialGk, 6, 3)).is_err());
    assert!(build(&GeneratorSpec::with_k(Kind::Gk, 3, 5)).is_err());
    let mut s = GeneratorSpec::new(Kind::Ptc, 4);
    s.range = Some((2, 7));
    assert!(build(&s).is_err());
    assert!(expected_metrics(&GeneratorSpec::new(Kind::PtcMod, 5)).is_err());
}

#[test]
fn chain_outputs() {
    let n = 3;
    let (z, seen) = run(&ptc(n, 0, 2), &singles(n));
    assert_eq!(z, vec![l(n, &[0, 1]), l(n, &[0, 2]), l(n, &[0])]);
    assert!(seen.contains(&l(n, &[0, 1])) && seen.contains(&l(n, &[0, 2])));

    let n = 6;
    let (z, _) = run(&cxc(n, 0, 5), &singles(n));
    for (i, lab) in z.iter().enumerate() {
        assert_eq!(*lab, l(n, &(0..=i).collect::<Vec<_>>()));
    }
    let (z, _) = run(&cxc(n, 0, 5).adjoint(), &singles(n));
    assert_eq!(z[0], l(n, &[0]));
    for i in 1..n {
        assert_eq!(z[i], l(n, &[i - 1, i]));
    }
    let (z, _) = run(&swc(n, 0, 5), &singles(n));
    let want: Vec<Label> = (1..n).chain([0]).map(|i| l(n, &[i])).collect();
    assert_eq!(z, want);
}

#[test]
fn type_one_network_output_and_coverage() {
    for n in 2..=12 {
        let (z, seen) = run(&ptn(n, 0, n - 1), &singles(n));
        let mut want: Vec<Label> = (0..n - 1).rev().map(|i| l(n, &[i, i + 1])).collect();
        want.push(l(n, &[0]));
        assert_eq!(z, want, "n={n}");
        assert!(k_body_labels(n, 2).iter().all(|x| seen.contains(x)));
    }
}

#[test]
fn two_body_generator_reverses_input() {
    for n in 3..=20 {
        let (z, seen) = run(&g2(n, 0, n - 1), &singles(n));
        let want: Vec<Label> = (0..n).rev().map(|i| l(n, &[i])).collect();
        assert_eq!(z, want);
        assert!(k_body_labels(n, 2).iter().all(|x| seen.contains(x)));
    }
}

#[test]
fn modified_network_output() {
    for n in 3..=10 {
        let (z, seen) = run(&ptn_mod(n, 0, n - 1), &singles(n));
        let mut want = vec![l(n, &[0])];
        want.extend((0..n - 1).rev().map(|i| l(n, &[i, i + 1])));
        assert_eq!(z, want);
        for i in 1..n {
            for j in i + 1..n {
                assert!(seen.contains(&l(n, &[0, i, j])));
            }
        }
    }
}

#[test]
fn type_two_network_from_adjacent_pairs() {
    for n in 3..=10 {
        let mut start = vec![l(n, &[0])];
        start.extend((1..n).map(|i| l(n, &[i - 1, i])));
        let (z, seen) = run(&ptn3(n, 0, n - 1), &LabelState::from_z(start));
        let mut want = vec![l(n, &[0])];
        want.extend((2..n).rev().map(|i| l(n, &[i - 1, i])));
        want.push(l(n, &[1]));
        assert_eq!(z, want, "n={n}");
        for i in 1..n {
            for j in i + 1..n {
                assert!(seen.contains(&l(n, &[0, i, j])));
            }
        }
    }
}

#[test]
fn type_three_network_output() {
    for n in 4..=10 {
        let mut start = vec![l(n, &[0]), l(n, &[1])];
        start.extend((2..n).map(|i| l(n, &[i - 1, i])));
        let (z, seen) = run(&ptn4(n, 0, n - 1), &LabelState::from_z(start));
        let mut want = vec![l(n, &[0, 1])];
        want.extend((3..n).rev().map(|i| l(n, &[i - 1, i])));
        want.push(l(n, &[2]));
        want.push(l(n, &[0]));
        assert_eq!(z, want, "n={n}");
        for i in 2..n {
            for j in i + 1..n {
                assert!(seen.contains(&l(n, &[0, 1, i, j])));
            }
        }
    }
}

/// Odd-then-even ordering (1-based): 1,3,5,…,6,4,2.
fn odd_even(n: usize) -> Vec<Label> {
    let odd = (0..n).step_by(2);
    let even: Vec<usize> = (1..n).step_by(2).collect();
    odd.chain(even.into_iter().rev()).map(|i| l(n, &[i])).collect()
}

#[test]
fn three_body_generator_permutation() {
    for n in 3..=20 {
        let (z, _) = run(&g3(n, 0, n - 1), &singles(n));
        assert_eq!(z, odd_even(n), "n={n}");
    }
    for n in 3..=9 {
        let (_, seen) = run(&g3(n, 0, n - 1), &singles(n));
        assert!(k_body_labels(n, 3).iter().all(|x| seen.contains(x)));
    }
}

#[test]
fn cleanup_output() {
    for n in 4..=14 {
        // 1-based helpers.
        let one = |i: usize| l(n, &[i - 1]);
        let two = |i: usize, j: usize| l(n, &[i - 1, j - 1]);
        let o = if n % 2 == 1 { n } else { n - 1 };
        let e = if n % 2 == 0 { n } else { n - 1 };
        let start = if n == 4 {
            vec![two(1, 2), two(3, 4), one(3), one(1)]
        } else {
            let mut s: Vec<Label> = (2..=e - 2).step_by(2).map(|i| two(1, i)).collect();
            if n % 2 == 0 {
                s.extend([two(n - 1, n), one(n - 1), one(1)]);
            } else {
                s.extend([one(1), one(n - 1), two(n - 1, n)]);
            }
            let tail: Vec<usize> = (3..=o - 2).step_by(2).collect();
            s.extend(tail.into_iter().rev().map(|i| two(1, i)));
            s
        };
        assert_eq!(start.len(), n);
        let (z, _) = run(&cl(n, 0, n - 1), &LabelState::from_z(start));
        let mut want = vec![one(1), one(2)];
        want.extend((4..=e).step_by(2).map(one));
        let odds: Vec<usize> = (3..=o).step_by(2).collect();
        want.extend(odds.into_iter().rev().map(one));
        assert_eq!(z, want, "n={n}");
    }
}

#[test]
fn special_four_body_output_and_family() {
    for n in 4..=10 {
        let (z, seen) = run(&special_g4(n, 0, n - 1), &singles(n));
        let mut want = vec![l(n, &[0]), l(n, &[1])];
        want.extend((3..n).step_by(2).map(|i| l(n, &[i])));
        let odds: Vec<usize> = (2..n).step_by(2).collect();
        want.extend(odds.into_iter().rev().map(|i| l(n, &[i])));
        assert_eq!(z, want, "n={n}");
        for lab in k_body_labels(n, 4) {
            assert_eq!(seen.contains(&lab), lab.contains(0), "{lab} at n={n}");
        }
    }
}

#[test]
fn special_k_body_family_is_exact() {
    for k in 4..=6 {
        for n in k..=9 {
            let (z, seen) = run(&special_gk(n, k, 0, n - 1), &singles(n));
            assert_eq!(z[0], l(n, &[0]), "special label stays put");
            assert!(LabelState::from_z(z).is_permutation_of(&singles(n)).is_some());
            for lab in k_body_labels(n, k) {
                assert_eq!(seen.contains(&lab), lab.contains(0), "k={k} n={n} {lab}");
            }
        }
    }
}

#[test]
fn full_generators_cover_their_order_and_are_clean() {
    for k in 2..=5 {
        for n in k.max(3)..=10 {
            let c = gk(n, k);
            let (z, seen) = run(&c, &singles(n));
            assert!(k_body_labels(n, k).iter().all(|x| seen.contains(x)), "k={k} n={n}");
            assert!(LabelState::from_z(z).is_permutation_of(&singles(n)).is_some());
        }
    }
}

#[test]
fn every_gate_is_nearest_neighbour() {
    for kind in Kind::ALL {
        for n in 2..=12 {
            let k = if matches!(kind, Kind::CleanSpecialGk | Kind::Gk) { 4 } else { 2 };
            let Ok(c) = build(&GeneratorSpec::with_k(kind, n, k)) else { continue };
            for g in c.gates() {
                if let Gate::Cx { c, t } = *g {
                    assert_eq!(c.abs_diff(t), 1, "{kind:?} n={n}");
                }
            }
        }
    }
}

#[test]
fn placement_on_sub_range_matches_embedding() {
    for kind in [Kind::Ptn, Kind::G2, Kind::G3, Kind::Ptn4, Kind::Cl, Kind::CleanSpecialG4] {
        let n = 11;
        let spec = GeneratorSpec { range: Some((3, 9)), ..GeneratorSpec::new(kind, n) };
        let placed = build(&spec).unwrap();
        let base = build(&GeneratorSpec::new(kind, 7)).unwrap().embed(n, 3);
        assert_eq!(placed, base, "{kind:?}");
    }
}

proptest! {
    #[test]
    fn placed_two_body_generator_stays_in_range(n in 3usize..16, a in 0usize..16, b in 0usize..16) {
        let (p, q) = (a.min(b) % n, a.max(b) % n);
        prop_assume!(q >= p + 2);
        let spec = GeneratorSpec { range: Some((p, q)), ..GeneratorSpec::new(Kind::G2, n) };
        let c = build(&spec).unwrap();
        let (z, seen) = run(&c, &singles(n));
        for g in c.gates() {
            let (qs, _) = g.qubits();
            prop_assert!(qs.iter().all(|&x| (p..=q).contains(&x)));
        }
        for i in p..=q {
            prop_assert_eq!(&z[i], &l(n, &[p + q - i]));
            for j in i + 1..=q {
                prop_assert!(seen.contains(&l(n, &[i, j])));
            }
        }
        for i in (0..p).chain(q + 1..n) {
            prop_assert_eq!(&z[i], &l(n, &[i]));
        }
    }
}
