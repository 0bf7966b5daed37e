//! Moments of a single free unitary Brownian motion.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficients of `Q_n(A) = Σ_{k<n} C(n, k+1) n^{k-1} (-A)^k / k!`, lowest
/// degree first. `Q_0 = 1`.
pub fn q_polynomial(n: usize) -> Vec<BigRational> {
    if n == 0 {
        return vec![BigRational::one()];
    }
    let nb = BigInt::from(n);
    let mut out = Vec::with_capacity(n);
    // C(n, k+1), n^{k-1} and k! updated incrementally.
    let mut binom = nb.clone();
    let mut fact = BigInt::one();
    for k in 0..n {
        let power = if k == 0 {
            BigRational::new(BigInt::one(), nb.clone())
        } else {
            BigRational::from_integer(num_traits::pow(nb.clone(), k - 1))
        };
        let mut c = power * BigRational::new(binom.clone(), fact.clone());
        if k % 2 == 1 {
            c = -c;
        }
        out.push(c);
        binom = binom * BigInt::from(n - k - 1) / BigInt::from(k + 2);
        fact *= BigInt::from(k + 1);
    }
    out
}

fn q_cache() -> &'static RwLock<HashMap<(usize, u64), f64>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, u64), f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Q_n(A)` evaluated exactly at the binary value of `a` and rounded once.
///
/// The alternating sum loses many digits in floating point for `nA` of
/// order ten, so the polynomial is evaluated in rationals.
pub fn q_n(n: usize, a: f64) -> f64 {
    let key = (n, a.to_bits());
    if let Some(&v) = q_cache().read().unwrap().get(&key) {
        return v;
    }
    let v = match BigRational::from_float(a) {
        Some(x) => {
            let mut acc = BigRational::zero();
            for c in q_polynomial(n).iter().rev() {
                acc = acc * &x + c;
            }
            acc.to_f64().unwrap_or(f64::NAN)
        }
        None => f64::NAN,
    };
    q_cache().write().unwrap().insert(key, v);
    v
}

/// `Q_{k,l}(A) = e^{min(k,l) A} Q_{|k-l|}(A)`, the unnormalised moment of a
/// single-letter word with `k` letters and `l` inverses.
pub fn q_moment(k: usize, l: usize, a: f64) -> f64 {
    (k.min(l) as f64 * a).exp() * q_n(k.abs_diff(l), a)
}

/// `τ` of a single-letter word with `k` letters and `l` inverses.
pub(crate) fn tau(k: usize, l: usize, a: f64) -> f64 {
    (-((k + l) as f64) * a / 2.0).exp() * q_moment(k, l, a)
}
