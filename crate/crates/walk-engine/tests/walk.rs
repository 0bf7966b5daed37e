use std::collections::BTreeMap;

use loopspec::{parse_word, GroupSpec, LassoWord};
use proptest::prelude::*;
use series_engine::{evaluate, SeriesParams};
use walk_engine::{
    build_action_graph, build_action_graph_with_cap, cycle_count, deficit, evaluate_walk,
    evaluate_walk_at, evaluate_walk_sparse, long_cycle, ActionGraph, WalkError,
};

fn word(text: &str, areas: &[(&str, f64)]) -> LassoWord {
    let map: BTreeMap<String, f64> = areas.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    parse_word(text, &map).unwrap()
}

/// Every identifier used below with a distinct area.
fn all_areas() -> Vec<(&'static str, f64)> {
    vec![
        ("s", 0.3),
        ("t", 0.4),
        ("u", 0.25),
        ("s1", 0.2),
        ("s2", 0.35),
        ("s3", 0.15),
        ("t1", 0.3),
        ("t2", 0.45),
        ("t3", 0.2),
        ("A", 0.5),
    ]
}

fn a_power(n: usize, a: f64) -> LassoWord {
    word(&vec!["A"; n].join(" "), &[("A", a)])
}

fn perm(cycles: &[&[u8]], m: usize) -> Vec<u8> {
    let mut p: Vec<u8> = (0..m as u8).collect();
    for c in cycles {
        for i in 0..c.len() {
            p[(c[i] - 1) as usize] = c[(i + 1) % c.len()] - 1;
        }
    }
    p
}

#[test]
fn cube_of_one_letter_is_the_transposition_graph() {
    let g = build_action_graph(&a_power(3, 0.5)).unwrap();
    assert_eq!(g.n_states(), 6);
    // Reference state order: (123), (132), (12), (13), (23), id.
    let order = [
        perm(&[&[1, 2, 3]], 3),
        perm(&[&[1, 3, 2]], 3),
        perm(&[&[1, 2]], 3),
        perm(&[&[1, 3]], 3),
        perm(&[&[2, 3]], 3),
        perm(&[], 3),
    ];
    assert_eq!(g.states()[g.root()], order[0]);
    let idx: Vec<usize> = order
        .iter()
        .map(|p| g.states().iter().position(|s| s == p).unwrap())
        .collect();
    let (a, n) = (0.5, 3.0);
    let q = g.generator(&[a], n).unwrap();
    let d = -a / (n * n);
    // Rows are sources and columns are targets in the reference matrix.
    let reference = [
        [0.0, 0.0, -a, -a, -a, 0.0],
        [0.0, 0.0, -a, -a, -a, 0.0],
        [d, d, 0.0, 0.0, 0.0, -a],
        [d, d, 0.0, 0.0, 0.0, -a],
        [d, d, 0.0, 0.0, 0.0, -a],
        [0.0, 0.0, d, d, d, 0.0],
    ];
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(q.get(idx[j], idx[i]), reference[i][j], "entry {i},{j}");
        }
    }
}

#[test]
fn small_graphs() {
    let g = build_action_graph(&a_power(2, 0.7)).unwrap();
    assert_eq!(g.n_states(), 2);
    let q = g.generator(&[0.7], 2.0).unwrap();
    assert_eq!(q.get(0, 0), 0.0);
    assert_eq!(q.get(0, 1), -0.7 / 4.0);
    assert_eq!(q.get(1, 0), -0.7);
    assert_eq!(q.get(1, 1), 0.0);

    let w = word("s", &[("s", 0.6)]);
    let g = build_action_graph(&w).unwrap();
    assert_eq!(g.n_states(), 1);
    assert_eq!(g.generator(&[0.6], 2.0).unwrap().get(0, 0), 0.0);
    assert!((evaluate_walk(&g, &w, 2).unwrap() - (-0.3f64).exp()).abs() < 1e-15);
}

#[test]
fn one_letter_closed_forms() {
    for n in [2u32, 3, 5] {
        let nf = n as f64;
        for a in [0.2, 0.5, 1.0] {
            let w = a_power(3, a);
            let g = build_action_graph(&w).unwrap();
            let x = 3.0 * a / nf;
            let want =
                (-1.5 * a).exp() * (1.0 + (nf * nf + 2.0) / 3.0 * (x.cosh() - 1.0) - nf * x.sinh());
            assert!((evaluate_walk(&g, &w, n).unwrap() - want).abs() < 1e-13);

            let w = a_power(2, a);
            let g = build_action_graph(&w).unwrap();
            let want = (-a).exp() * ((a / nf).cosh() - nf * (a / nf).sinh());
            assert!((evaluate_walk(&g, &w, n).unwrap() - want).abs() < 1e-13);
        }
    }
}

#[test]
fn three_visit_loop_closed_form() {
    let (t, u, s) = (0.4, 0.25, 0.3);
    let w = word("(u t)(u)(u t s)", &[("t", t), ("u", u), ("s", s)]);
    let g = build_action_graph(&w).unwrap();
    for n in [2u32, 3] {
        let nf = n as f64;
        let x = (3.0 * u + t) / nf;
        let want = (-(2.0 * t + 3.0 * u + s) / 2.0f64).exp()
            * (-(nf * nf - 1.0) / 3.0 * (t / nf).cosh() + (nf * nf + 2.0) / 3.0 * x.cosh()
                - nf * x.sinh());
        assert!((evaluate_walk(&g, &w, n).unwrap() - want).abs() < 1e-13);
    }
}

#[test]
fn agrees_with_series_on_inverse_free_table_words() {
    let words = [
        "(t)(t s)",
        "(t1)(t1 t2 s)(t2)",
        "(u t)(u)(u t s)",
        "(u t1)(u)(u t1 t2 s)(t2)",
        "(t1 s1)(t1)(t2)(t2 s2)",
        "(t1)(t3)(t3 t1 t2 s)(t2)",
        "(s1)(t)(s2)(t s3)",
        "A A A A",
    ];
    for text in words {
        let w = word(text, &all_areas());
        let g = build_action_graph(&w).unwrap();
        for n in [2u32, 3] {
            let walk = evaluate_walk(&g, &w, n).unwrap();
            let s = evaluate(&w, &GroupSpec::unitary(n), &SeriesParams::default()).unwrap();
            assert!(
                (walk - s.value).abs() <= s.error + 1e-12,
                "{text} N={n}: walk {walk} series {} ± {}",
                s.value,
                s.error
            );
        }
    }
}

#[test]
fn every_state_has_one_edge_per_pair() {
    for text in ["(u t)(u)(u t s)", "A A A A A", "(t1)(t3)(t3 t1 t2 s)(t2)"] {
        let w = word(text, &all_areas());
        let g = build_action_graph(&w).unwrap();
        assert!(g.out_degrees().iter().all(|&d| d == g.n_pairs()));
        // Closed under all pair transpositions.
        for e in g.edges() {
            assert!(e.to < g.n_states());
        }
        for (i, s) in g.states().iter().enumerate() {
            for e in g.edges().iter().filter(|e| e.from == i) {
                let t = &g.states()[e.to];
                let diff = s.iter().zip(t).filter(|(a, b)| a != b).count();
                assert_eq!(diff, 2);
                assert_eq!(e.decreases, cycle_count(t) < cycle_count(s));
            }
        }
    }
}

/// Sum over paths of length `len` from the root of Π(-t) N^{-2d} / len!.
fn path_sum(g: &ActionGraph, a: f64, n: f64, len: usize) -> f64 {
    fn rec(g: &ActionGraph, state: usize, left: usize, w: f64, a: f64, n: f64) -> f64 {
        if left == 0 {
            return w;
        }
        g.edges()
            .iter()
            .filter(|e| e.from == state)
            .map(|e| {
                let f = if e.decreases { 1.0 / (n * n) } else { 1.0 };
                rec(g, e.to, left - 1, w * -a * f, a, n)
            })
            .sum()
    }
    let fact: f64 = (1..=len).map(|i| i as f64).product();
    rec(g, g.root(), len, 1.0, a, n) / fact
}

#[test]
fn path_expansion_matches_taylor_series() {
    for m in [2usize, 3, 4] {
        let a = 0.6;
        let w = a_power(m, a);
        let g = build_action_graph(&w).unwrap();
        let n = 3.0;
        let q = g.generator(&[a], n).unwrap();
        let mut v = vec![0.0; g.n_states()];
        v[g.root()] = 1.0;
        let mut fact = 1.0;
        for len in 0..7 {
            if len > 0 {
                v = q.mul_vec(&v);
                fact *= len as f64;
            }
            let taylor: f64 = v.iter().sum::<f64>() / fact;
            let paths = path_sum(&g, a, n, len);
            assert!((taylor - paths).abs() < 1e-12, "m={m} len={len}");
        }
    }
}

#[test]
fn dense_and_sparse_kernels_agree() {
    for text in ["(u t)(u)(u t s)", "A A A A A", "(t1)(t3)(t3 t1 t2 s)(t2)"] {
        let w = word(text, &all_areas());
        let g = build_action_graph(&w).unwrap();
        for scale in [1.0, 4.0] {
            let areas: Vec<f64> = w.areas().iter().map(|a| a * scale).collect();
            let d = evaluate_walk_at(&g, &w, &areas, 2).unwrap();
            let s = evaluate_walk_sparse(&g, &w, &areas, 2).unwrap();
            // values are at most one and come from alternating sums
            assert!((d - s).abs() < 1e-12, "{text}: {d} vs {s}");
        }
    }
}

#[test]
fn refuses_unsupported_words() {
    let a = all_areas();
    assert_eq!(
        build_action_graph(&word("t s t'", &a)).unwrap_err(),
        WalkError::Inverse
    );
    assert_eq!(
        build_action_graph(&word("t | t", &a)).unwrap_err(),
        WalkError::MultiLoop(2)
    );
    assert_eq!(
        build_action_graph_with_cap(&a_power(5, 1.0), 10).unwrap_err(),
        WalkError::StateCap(10)
    );
    let g = build_action_graph(&a_power(2, 1.0)).unwrap();
    assert!(matches!(
        g.generator(&[1.0, 2.0], 2.0),
        Err(WalkError::AreaCount { .. })
    ));
}

#[test]
fn deficit_examples() {
    let z = long_cycle(3);
    let p12 = perm(&[&[1, 2]], 3);
    assert_eq!(deficit(&[z.clone(), p12.clone()]).unwrap(), 0);
    let back = perm(&[&[1, 3, 2]], 3);
    assert_eq!(deficit(&[z.clone(), p12, back]).unwrap(), 1);
    assert_eq!(deficit(std::slice::from_ref(&z)).unwrap(), 0);
    assert_eq!(deficit(&[]).unwrap(), 0);
    assert_eq!(
        deficit(&[z.clone(), z]).unwrap_err(),
        WalkError::InvalidStep(0, 1)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_inverse_free_words_match_series(
        letters in prop::collection::vec(0usize..3, 1..7),
        n in 2u32..4,
    ) {
        let names = ["s", "t", "u"];
        let text: Vec<&str> = letters.iter().map(|&i| names[i]).collect();
        let w = word(&text.join(" "), &all_areas());
        let g = build_action_graph(&w).unwrap();
        let walk = evaluate_walk(&g, &w, n).unwrap();
        let s = evaluate(&w, &GroupSpec::unitary(n), &SeriesParams { budget: 1_000_000, ..SeriesParams::default() }).unwrap();
        prop_assert!((walk - s.value).abs() <= s.error + 1e-12, "{}: {} vs {} ± {}", w, walk, s.value, s.error);
    }
}
