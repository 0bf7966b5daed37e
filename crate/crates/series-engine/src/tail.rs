//! Tails of the exponential series.

/// `Σ_{K > k} x^K / K!` for `x ≥ 0`, summed term by term.
pub fn poisson_tail(x: f64, k: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // Term K = k + 1 computed in log space to avoid overflow of x^K.
    let kk = (k + 1) as f64;
    let mut log_term = kk * x.ln() - ln_factorial(k + 1);
    let mut sum = 0.0;
    let mut big_k = k + 1;
    loop {
        let term = log_term.exp();
        sum += term;
        if (big_k as f64) > x && (term <= sum * 1e-17 || term == 0.0) {
            break;
        }
        big_k += 1;
        log_term += x.ln() - (big_k as f64).ln();
    }
    sum
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
