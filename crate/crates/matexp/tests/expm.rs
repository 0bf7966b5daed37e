use matexp::{expm, DenseMatrix, MatexpError};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent oracle: Taylor series on `m / 2^s` followed by `s` squarings.
fn taylor_expm(m: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    let norm = m.norm_fro();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale(0.5f64.powi(s));
    let d = m.dim();
    let mut sum = DenseMatrix::identity(d);
    let mut term = DenseMatrix::identity(d);
    for k in 1..40 {
        term = term.mul(&a).scale(1.0 / k as f64);
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum
}

fn random_real(d: usize, scale: f64, seed: u64) -> DenseMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(d, |_, _| scale * (rng.random::<f64>() * 2.0 - 1.0))
}

fn random_anti_hermitian(d: usize, scale: f64, seed: u64) -> DenseMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DenseMatrix::from_fn(d, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    g.sub(&g.adjoint()).scale(Complex64::new(scale, 0.0))
}

fn max_diff<T: matexp::Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> f64 {
    a.sub(b).max_abs()
}

#[test]
fn exponential_of_zero_is_identity() {
    for d in [1, 2, 5] {
        let e = expm(&DenseMatrix::<f64>::zeros(d)).unwrap();
        assert_eq!(e, DenseMatrix::identity(d));
    }
}

#[test]
fn exponential_of_diagonal() {
    let entries = [-3.0, -0.1, 0.0, 0.7, 2.5, 9.0];
    let e = expm(&DenseMatrix::diag(&entries)).unwrap();
    for (i, &a) in entries.iter().enumerate() {
        let want: f64 = a.exp();
        assert!((e.get(i, i) - want).abs() <= 1e-13 * want.max(1.0));
        for j in 0..entries.len() {
            if i != j {
                assert!(e.get(i, j).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn symmetric_two_by_two_closed_form() {
    for a in [0.01, 0.3, 1.0, 4.0, 12.0] {
        let m = DenseMatrix::from_row_major(2, vec![0.0, -a, -a, 0.0]);
        let e = expm(&m).unwrap();
        let (c, s) = (f64::cosh(a), f64::sinh(a));
        let tol = 1e-13 * c;
        assert!((e.get(0, 0) - c).abs() < tol);
        assert!((e.get(1, 1) - c).abs() < tol);
        assert!((e.get(0, 1) + s).abs() < tol);
        assert!((e.get(1, 0) + s).abs() < tol);
    }
}

#[test]
fn matches_taylor_oracle_across_degrees() {
    // Norms chosen to exercise each Padé degree and the squaring branch.
    for (k, scale) in [0.001, 0.02, 0.1, 0.4, 0.8, 3.0, 20.0]
        .into_iter()
        .enumerate()
    {
        let m = random_real(6, scale, k as u64);
        let e = expm(&m).unwrap();
        let o = taylor_expm(&m);
        let rel = max_diff(&e, &o) / o.max_abs();
        assert!(rel < 1e-12, "scale {scale}: relative error {rel}");
    }
}

#[test]
fn inverse_residual_for_moderate_norms() {
    for (seed, d) in [(1u64, 3usize), (2, 8), (3, 16), (4, 40)] {
        let m = random_real(d, 100.0 / (d as f64 * 2.0), seed);
        let m = m.scale(100.0 / m.norm1().max(1e-300) * 0.99);
        let e = expm(&m).unwrap();
        let ei = expm(&m.scale(-1.0)).unwrap();
        let prod = e.mul(&ei);
        // Relative residual against the conditioning of the pair.
        let resid = max_diff(&prod, &DenseMatrix::identity(d));
        let cond = e.norm1() * ei.norm1();
        assert!(resid / cond < 1e-10, "d={d}: residual {resid}, cond {cond}");
    }
}

#[test]
fn anti_hermitian_gives_unitary() {
    for (seed, d) in [(5u64, 2usize), (6, 3), (7, 10), (8, 32)] {
        let x = random_anti_hermitian(d, 3.0, seed);
        let u = expm(&x).unwrap();
        let resid = max_diff(&u.adjoint().mul(&u), &DenseMatrix::identity(d));
        assert!(resid < 1e-10, "d={d}: unitarity residual {resid}");
    }
}

#[test]
fn non_finite_input_is_rejected() {
    let m = DenseMatrix::from_row_major(2, vec![f64::NAN, 0.0, 0.0, 1.0]);
    assert_eq!(expm(&m), Err(MatexpError::NonFinite));
}

#[test]
fn overflow_is_reported() {
    let m = DenseMatrix::diag(&[1e300, 1.0]);
    assert!(matches!(expm(&m), Err(MatexpError::Overflow { .. })));
}

#[test]
fn solve_round_trips() {
    let a = random_real(7, 1.0, 11).add(&DenseMatrix::identity(7).scale(4.0));
    let b = random_real(7, 1.0, 12);
    let x = a.solve(&b).unwrap();
    assert!(max_diff(&a.mul(&x), &b) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_parameter_group_law(seed in 0u64..10_000, d in 1usize..=64, s in 0.05f64..1.0, t in 0.05f64..1.0) {
        let m = random_real(d, 2.0 / (d as f64).sqrt(), seed);
        let lhs = expm(&m.scale(s + t)).unwrap();
        let rhs = expm(&m.scale(s)).unwrap().mul(&expm(&m.scale(t)).unwrap());
        let rel = max_diff(&lhs, &rhs) / lhs.max_abs().max(1.0);
        prop_assert!(rel < 1e-9, "relative error {}", rel);
    }

    #[test]
    fn exp_times_exp_of_negative_is_identity(seed in 0u64..10_000, d in 1usize..=24, scale in 0.01f64..3.0) {
        let m = random_real(d, scale, seed);
        let (e, ei) = (expm(&m).unwrap(), expm(&m.scale(-1.0)).unwrap());
        let resid = max_diff(&e.mul(&ei), &DenseMatrix::identity(d));
        prop_assert!(resid / (e.norm1() * ei.norm1()) < 1e-10, "residual {}", resid);
    }
}
