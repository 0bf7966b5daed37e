use std::collections::BTreeMap;

use loopspec::{parse_word, GroupKind, GroupSpec, LassoWord};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use series_engine::{
    constant_prefactor, evaluate, makeenko_migdal_check, n1_closed_form, poisson_tail, su_from_u,
    ArrangementMode, FacePartial, SeriesError, SeriesExpansion, SeriesParams,
};
use surface_core::{glue, pairing_from_config, weight, GluingChoice, PointConfig};

fn word(text: &str, areas: &[(&str, f64)]) -> LassoWord {
    let map: BTreeMap<String, f64> = areas.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    parse_word(text, &map).unwrap()
}

fn u(n: u32) -> GroupSpec {
    GroupSpec::unitary(n)
}

/// Smaller than the default budget to keep the suite quick; tail bounds
/// remain rigorous at the lower truncation order.
fn params() -> SeriesParams {
    SeriesParams {
        budget: 1_000_000,
        ..SeriesParams::default()
    }
}

fn series(w: &LassoWord, g: &GroupSpec) -> (f64, f64) {
    let r = evaluate(w, g, &params()).unwrap();
    (r.value, r.error)
}

fn close(got: (f64, f64), want: f64, slack: f64) {
    assert!(
        (got.0 - want).abs() <= slack + got.1,
        "got {} ± {}, want {want}",
        got.0,
        got.1
    );
}

fn gamma0(l: [f64; 4]) -> LassoWord {
    word(
        "l2 l1 l4 l3 l4 l2 l1 l2",
        &[("l1", l[0]), ("l2", l[1]), ("l3", l[2]), ("l4", l[3])],
    )
}

fn gamma0_closed(l: [f64; 4], n: f64) -> f64 {
    let [l1, l2, l3, l4] = l;
    let x = (3.0 * l2 + l1) / n;
    (-(2.0 * l1 + 3.0 * l2 + l3 + 2.0 * l4) / 2.0).exp()
        * (-(n * n - 1.0) / 3.0 * (l1 / n).cosh() + (n * n + 2.0) / 3.0 * x.cosh() - n * x.sinh())
        * ((l4 / n).cosh() - n * (l4 / n).sinh())
}

fn gamma1(l: [f64; 4]) -> LassoWord {
    word(
        "l2' l3' l1' l2 l4 l1",
        &[("l1", l[0]), ("l2", l[1]), ("l3", l[2]), ("l4", l[3])],
    )
}

fn gamma1_closed(l: [f64; 4], n: f64) -> f64 {
    let [l1, l2, l3, l4] = l;
    (-(2.0 * l1 + 2.0 * l2 + l3 + l4) / 2.0).exp()
        * (l1.exp() + l2.exp() - 1.0 + (l1.exp() - 1.0) * (l2.exp() - 1.0) / (n * n))
}

fn regression_words() -> Vec<LassoWord> {
    vec![
        word("s", &[("s", 0.7)]),
        word("t t s", &[("t", 0.4), ("s", 0.3)]),
        word("u t u u t s", &[("u", 0.3), ("t", 0.2), ("s", 0.5)]),
        gamma0([0.2, 0.3, 0.25, 0.15]),
        gamma1([0.4, 0.3, 0.2, 0.5]),
        word("a b a' b'", &[("a", 0.5), ("b", 0.4)]),
        word("a a a", &[("a", 0.6)]),
    ]
}

#[test]
fn prefactor_examples() {
    let s = word("s", &[("s", 0.7)]);
    let p = constant_prefactor(&s, &s.matching_pairs(), &u(3));
    assert!((p - (-0.35f64).exp()).abs() < 1e-15);
    let w = word("t t s", &[("t", 0.4), ("s", 0.3)]);
    let p = constant_prefactor(&w, &w.matching_pairs(), &u(2));
    assert!((p - (-0.15f64).exp()).abs() < 1e-15);
    for w in regression_words() {
        for n in [2u32, 3, 5] {
            let su = GroupSpec::new(GroupKind::SU, n).unwrap();
            let ratio = constant_prefactor(&w, &w.matching_pairs(), &su)
                / constant_prefactor(&w, &w.matching_pairs(), &u(n));
            let want = (w.total_length() / (2.0 * (n * n) as f64)).exp();
            assert!((ratio - want).abs() < 1e-13 * want);
        }
    }
}

#[test]
fn simple_loop_has_no_points() {
    let s = word("s", &[("s", 0.7)]);
    let p = SeriesParams {
        normalized: false,
        ..SeriesParams::with_k_max(0)
    };
    let r = evaluate(&s, &u(2), &p).unwrap();
    assert!((r.value - 2.0 * (-0.35f64).exp()).abs() < 1e-15);
    assert_eq!(r.error, 0.0);
    let r = evaluate(&s, &u(2), &SeriesParams::with_k_max(0)).unwrap();
    assert!((r.value - (-0.35f64).exp()).abs() < 1e-15);
    for kind in GroupKind::ALL {
        let g = GroupSpec::new(kind, 4).unwrap();
        let (v, e) = series(&s, &g);
        assert_eq!(e, 0.0);
        assert!((v - (g.casimir() * 0.35).exp()).abs() < 1e-15, "{g}");
    }
}

#[test]
fn double_winding_closed_form() {
    for n in [2u32, 3, 4] {
        let nf = n as f64;
        for (t, s) in [(0.4, 0.3), (1.0, 0.2), (0.2, 1.0)] {
            let w = word("t t s", &[("t", t), ("s", s)]);
            let want = (-(2.0 * t + s) / 2.0).exp() * ((t / nf).cosh() - nf * (t / nf).sinh());
            close(series(&w, &u(n)), want, 1e-12);
        }
    }
    let w = word("t t", &[("t", 0.4)]);
    let want = (-0.4f64).exp() * ((0.2f64).cosh() - 2.0 * (0.2f64).sinh());
    close(series(&w, &u(2)), want, 1e-12);
}

#[test]
fn figure_eight_closed_form() {
    let points = [
        [0.4, 0.3, 0.2, 0.5],
        [1.0, 0.2, 0.5, 0.5],
        [0.2, 1.0, 1.0, 0.2],
    ];
    for l in points {
        for n in [2u32, 3] {
            close(series(&gamma1(l), &u(n)), gamma1_closed(l, n as f64), 1e-10);
        }
    }
}

#[test]
fn gamma0_closed_form() {
    let l = [0.2; 4];
    close(series(&gamma0(l), &u(3)), gamma0_closed(l, 3.0), 1e-10);
    let l = [0.3, 0.1, 0.5, 0.2];
    close(series(&gamma0(l), &u(2)), gamma0_closed(l, 2.0), 1e-10);
}

#[test]
fn n_equals_one_is_abelian() {
    for w in regression_words() {
        let (v, e) = series(&w, &u(1));
        assert!((v - n1_closed_form(&w)).abs() <= e + 1e-13, "{w}");
    }
    let w = word("t t s", &[("t", 0.4), ("s", 0.3)]);
    assert!((n1_closed_form(&w) - (-0.8f64 - 0.15).exp()).abs() < 1e-15);
    assert_eq!(n1_closed_form(&word("a a'", &[("a", 0.9)])), 1.0);
    let l = [0.2, 0.3, 0.25, 0.15];
    let want = (-(4.0 * l[0] + 9.0 * l[1] + l[2] + 4.0 * l[3]) / 2.0f64).exp();
    assert!((n1_closed_form(&gamma0(l)) - want).abs() < 1e-15);
}

#[test]
fn su_from_u_examples() {
    let s = word("s", &[("s", 0.7)]);
    assert!((su_from_u(&s, 3, 1.0) - (0.7f64 / 18.0).exp()).abs() < 1e-15);
    // a a⁻: winding zero, the two factors cancel
    let w = word("a a'", &[("a", 0.6)]);
    let n2: f64 = 4.0;
    let direct: f64 = (4.0 * 0.6 / (2.0 * n2)).exp() * (-2.0 * 0.6 / n2).exp();
    assert!((su_from_u(&w, 2, 1.0) - direct).abs() < 1e-15);
    assert!((su_from_u(&w, 2, 1.0) - 1.0).abs() < 1e-15);
}

#[test]
fn su_from_u_matches_su_series() {
    let words = regression_words();
    for w in words.iter().take(5) {
        for n in [2u32, 3] {
            let (vu, eu) = series(w, &u(n));
            let su = GroupSpec::new(GroupKind::SU, n).unwrap();
            let (vs, es) = series(w, &su);
            let conv = su_from_u(w, n, vu);
            let conv_err = su_from_u(w, n, eu);
            assert!(
                (conv - vs).abs() <= 1e-10 + es + conv_err,
                "{w} N={n}: {conv} vs {vs} (tails {es}, {conv_err})"
            );
        }
    }
}

#[test]
fn full_and_per_letter_arrangements_agree() {
    let words = [
        word("a b a b", &[("a", 0.5), ("b", 0.4)]),
        word("u t u u t s", &[("u", 0.3), ("t", 0.2), ("s", 0.5)]),
        word("a b' a' b | a b", &[("a", 0.3), ("b", 0.6)]),
    ];
    for w in &words {
        for kind in [GroupKind::U, GroupKind::SO] {
            let k = if kind == GroupKind::U { 7 } else { 5 };
            let per = SeriesExpansion::build(w, kind, &SeriesParams::with_k_max(k)).unwrap();
            let full_p = SeriesParams {
                arrangements: ArrangementMode::Full,
                ..SeriesParams::with_k_max(k)
            };
            let full = SeriesExpansion::build(w, kind, &full_p).unwrap();
            assert_eq!(per.terms().len(), full.terms().len());
            for (a, b) in per.terms().iter().zip(full.terms()) {
                assert_eq!(a.counts, b.counts);
                // K!/Πk_p! distinct arrangements in full mode
                let big_k = b.total();
                let mut multinomial: u64 = (1..=big_k as u64).product();
                for &c in &b.counts {
                    multinomial /= (1..=c as u64).product::<u64>();
                }
                assert_eq!(b.arrangements, multinomial);
                for nn in [2.0, 3.0, 7.0] {
                    assert!((a.at(nn) - b.at(nn)).abs() < 1e-12, "{w} {:?}", a.counts);
                }
            }
        }
    }
}

#[test]
fn interleaving_average_matches_uniform_t_sampling() {
    // Count vector (2, 1, 1) on the three u-pairs plus one t-pair.
    let w = word("u t u u t s", &[("u", 0.3), ("t", 0.2), ("s", 0.5)]);
    let pairs = w.matching_pairs();
    let exp = SeriesExpansion::build(&w, GroupKind::U, &SeriesParams::with_k_max(5)).unwrap();
    let counts: Vec<u8> = pairs
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if w.name(p.letter) == "t" {
                1
            } else {
                [2u8, 1, 1][i.min(2)]
            }
        })
        .collect();
    let term = exp.terms().iter().find(|t| t.counts == counts).unwrap();
    let g = u(2);
    let exact = term.at(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 20_000;
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let pts: Vec<(usize, f64)> = counts
            .iter()
            .enumerate()
            .flat_map(|(p, &k)| (0..k).map(move |_| p))
            .map(|p| (p, rng.random::<f64>()))
            .collect();
        let cfg = PointConfig::new(pts).unwrap();
        let pairing = pairing_from_config(&cfg, &pairs, &w).unwrap();
        let stats = glue(&pairing, &GluingChoice::all_type_one(cfg.len()), 1);
        let v = weight(&stats, &g, 1);
        s1 += v;
        s2 += v * v;
    }
    let mean = s1 / samples as f64;
    let se = ((s2 / samples as f64 - mean * mean) / samples as f64).sqrt();
    assert!(
        (mean - exact).abs() < 4.0 * se + 1e-12,
        "{mean} vs {exact} (se {se})"
    );
}

#[test]
fn tail_bound_brackets_higher_orders() {
    for w in regression_words() {
        for kind in [GroupKind::U, GroupKind::SU, GroupKind::Sp] {
            let g = GroupSpec::new(kind, 2).unwrap();
            let kmax = if kind == GroupKind::U { 6 } else { 4 };
            let mut prev = f64::INFINITY;
            for k in 0..kmax {
                let a = evaluate(&w, &g, &SeriesParams::with_k_max(k)).unwrap();
                let b = evaluate(&w, &g, &SeriesParams::with_k_max(k + 2)).unwrap();
                assert!(a.error <= prev);
                prev = a.error;
                assert!(
                    (a.value - b.value).abs() <= a.error * (1.0 + 1e-12) + 1e-15,
                    "{w} {g} k={k}"
                );
            }
        }
    }
}

#[test]
fn tail_values() {
    assert_eq!(poisson_tail(0.0, 3), 0.0);
    let direct: f64 = 1.5f64.exp() - (1.0 + 1.5 + 1.125);
    assert!((poisson_tail(1.5, 2) - direct).abs() < 1e-15);
    assert!(poisson_tail(40.0, 5) > 1e16);
}

#[test]
fn cancelling_pair_insertion() {
    let base = word("t t s", &[("t", 0.4), ("s", 0.3), ("a", 0.5)]);
    let with = word("t a a' t s", &[("t", 0.4), ("s", 0.3), ("a", 0.5)]);
    for kind in [GroupKind::U, GroupKind::SO] {
        let g = GroupSpec::new(kind, 3).unwrap();
        let (x, ex) = series(&base, &g);
        let (y, ey) = series(&with, &g);
        assert!((x - y).abs() <= ex + ey + 1e-12, "{g}: {x} vs {y}");
    }
}

#[test]
fn disjoint_loops_factorize() {
    let two = word(
        "t t s | a b a",
        &[("t", 0.4), ("s", 0.3), ("a", 0.2), ("b", 0.6)],
    );
    let p = SeriesParams::with_k_max(10);
    for kind in [GroupKind::U, GroupKind::SU] {
        let g = GroupSpec::new(kind, 3).unwrap();
        let whole = evaluate(&two, &g, &p).unwrap().value;
        let parts: f64 = (0..2)
            .map(|i| evaluate(&two.loop_word(i), &g, &p).unwrap().value)
            .product();
        assert!((whole - parts).abs() < 1e-13, "{whole} vs {parts}");
    }
}

#[test]
fn budget_is_reported() {
    let w = gamma0([0.2; 4]);
    let p = SeriesParams {
        budget: 1000,
        ..SeriesParams::with_k_max(12)
    };
    assert!(matches!(
        evaluate(&w, &u(2), &p),
        Err(SeriesError::Budget { k_max: 12, .. })
    ));
    let auto = SeriesParams {
        budget: 1000,
        ..SeriesParams::default()
    };
    let exp = SeriesExpansion::build(&w, GroupKind::U, &auto).unwrap();
    assert!(exp.evaluations() <= 1000);
    assert!(exp.k_max() < 12);
}

#[test]
fn makeenko_migdal_unitary() {
    let eight = word("a b'", &[("a", 0.7), ("b", 0.4)]);
    let split = word("a | b'", &[("a", 0.7), ("b", 0.4)]);
    let partials = [FacePartial::new(-1.0, &[0]), FacePartial::new(-1.0, &[1])];
    for n in [2u32, 3] {
        let r = makeenko_migdal_check(&eight, &partials, &split, &u(n), 1e-3, &params()).unwrap();
        assert!(r.residual.abs() < 1e-6, "{r:?}");
    }
    // t t s: the inner face enters both letters.
    let w = word("t t s", &[("t", 0.4), ("s", 0.3)]);
    let split = word("t | t s", &[("t", 0.4), ("s", 0.3)]);
    let partials = [FacePartial::new(2.0, &[1]), FacePartial::new(-1.0, &[0])];
    for n in [2u32, 3] {
        let r = makeenko_migdal_check(&w, &partials, &split, &u(n), 1e-3, &params()).unwrap();
        assert!(r.residual.abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn makeenko_migdal_special_unitary_corrected_form() {
    let eight = word("a b'", &[("a", 0.7), ("b", 0.4)]);
    let split = word("a | b'", &[("a", 0.7), ("b", 0.4)]);
    let partials = [FacePartial::new(-1.0, &[0]), FacePartial::new(-1.0, &[1])];
    for n in [2u32, 3] {
        let g = GroupSpec::new(GroupKind::SU, n).unwrap();
        let r = makeenko_migdal_check(&eight, &partials, &split, &g, 1e-3, &params()).unwrap();
        assert!((r.lhs - r.rhs_corrected).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn makeenko_migdal_rejects_bad_input() {
    let w = word("a", &[("a", 0.7)]);
    let so = GroupSpec::new(GroupKind::SO, 3).unwrap();
    assert_eq!(
        makeenko_migdal_check(&w, &[], &w, &u(2), 0.0, &SeriesParams::default()),
        Err(SeriesError::Step(0.0))
    );
    assert!(matches!(
        makeenko_migdal_check(&w, &[], &w, &so, 1e-3, &SeriesParams::default()),
        Err(SeriesError::MmGroup(_))
    ));
}

#[test]
fn euler_characteristic_bounded_by_twice_loop_count() {
    let w = word("a b a b | b a", &[("a", 0.5), ("b", 0.4)]);
    for kind in GroupKind::ALL {
        let exp = SeriesExpansion::build(&w, kind, &SeriesParams::with_k_max(5)).unwrap();
        for t in exp.terms() {
            for &(p, _) in &t.coeffs {
                // power is χ - n (- γ for SU), so χ ≤ 2n means power ≤ n
                assert!(p <= 2, "{kind}: power {p}");
            }
        }
    }
}

#[test]
fn symplectic_and_orthogonal_small_n_relations() {
    // SO(2) is abelian: the loop t t is exp(c·4t/2) with c = -1/2.
    let w = word("t t", &[("t", 0.3)]);
    let so2 = GroupSpec::new(GroupKind::SO, 2).unwrap();
    let (v, e) = series(&w, &so2);
    // tr(R(θ)²)/2 = cos 2θ with θ ~ N(0, t/2)... E cos 2θ = e^{-t}
    assert!((v - (-0.3f64).exp() * 1.0).abs() <= e + 1e-12, "{v}");
    // Sp(1) and SU(2) are the same group with metrics differing by a factor
    // of two, so the symplectic value at areas A is the SU(2) value at 2A.
    let sp = GroupSpec::new(GroupKind::Sp, 2).unwrap();
    let su = GroupSpec::new(GroupKind::SU, 2).unwrap();
    for w in regression_words().iter().take(5) {
        let doubled: Vec<f64> = w.areas().iter().map(|a| 2.0 * a).collect();
        let w2 = w.with_areas(&doubled).unwrap();
        let (a, ea) = series(w, &sp);
        let (b, eb) = series(&w2, &su);
        assert!((a - b).abs() <= ea + eb + 1e-12, "{w}: {a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn figure_eight_structure(l1 in 0.05f64..1.0, l2 in 0.05f64..1.0, l3 in 0.05f64..1.0, l4 in 0.05f64..1.0, n in 1u32..5) {
        let l = [l1, l2, l3, l4];
        let (v, e) = series(&gamma1(l), &u(n));
        prop_assert!((v - gamma1_closed(l, n as f64)).abs() <= e + 1e-10);
    }

    #[test]
    fn inverse_word_has_equal_value(a in 0.05f64..0.3, b in 0.05f64..0.3) {
        let w = word("a b a b' a", &[("a", a), ("b", b)]);
        for (kind, k) in [(GroupKind::U, 10), (GroupKind::SO, 5)] {
            let g = GroupSpec::new(kind, 3).unwrap();
            let p = SeriesParams::with_k_max(k);
            let x = evaluate(&w, &g, &p).unwrap();
            let y = evaluate(&w.inverse(), &g, &p).unwrap();
            prop_assert!((x.value - y.value).abs() <= x.error + y.error + 1e-12);
        }
    }
}
