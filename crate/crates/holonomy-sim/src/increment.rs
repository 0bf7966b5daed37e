//! Gaussian increments in the Lie algebras.

use loopspec::{GroupKind, GroupSpec};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{CMatrix, HolonomyError};

/// Draws a Lie-algebra increment over a time step `dt` with covariance
/// `⟨W_ab W_cd⟩ = -(dt/N) δ_ad δ_bc` plus the group-specific correction.
pub fn sample_increment<R: Rng + ?Sized>(
    g: &GroupSpec,
    dt: f64,
    rng: &mut R,
) -> Result<CMatrix, HolonomyError> {
    let mut out = CMatrix::zeros(g.n() as usize);
    sample_increment_into(g, dt, rng, &mut out)?;
    Ok(out)
}

/// As [`sample_increment`], writing into `out`.
pub fn sample_increment_into<R: Rng + ?Sized>(
    g: &GroupSpec,
    dt: f64,
    rng: &mut R,
    out: &mut CMatrix,
) -> Result<(), HolonomyError> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(HolonomyError::TimeStep(dt));
    }
    let n = g.n() as usize;
    if out.dim() != n {
        *out = CMatrix::zeros(n);
    }
    let scale = (dt / n as f64).sqrt();
    match g.kind() {
        GroupKind::SO => {
            out.fill_zero();
            for a in 0..n {
                for b in a + 1..n {
                    let x = scale * rng.sample::<f64, _>(StandardNormal);
                    out.set(a, b, Complex64::new(x, 0.0));
                    out.set(b, a, Complex64::new(-x, 0.0));
                }
            }
        }
        GroupKind::U => unitary(n, scale, rng, out),
        GroupKind::SU => {
            unitary(n, scale, rng, out);
            let shift = out.trace() / n as f64;
            for a in 0..n {
                out.add_at(a, a, -shift);
            }
        }
        GroupKind::Sp => {
            // √2 · (X + J Xᵀ J)/2 for a unitary increment X: the orthogonal
            // projection onto the symplectic algebra, rescaled so that the
            // Casimir constant is -1 - 1/N.
            unitary(n, scale, rng, out);
            let half = n / 2;
            let eta = |i: usize| if i < half { 1.0 } else { -1.0 };
            let partner = |i: usize| (i + half) % n;
            let c = std::f64::consts::FRAC_1_SQRT_2;
            // (J Xᵀ J)_ab = -η(a)η(b) X_{b'a'}; entries (a,b) and (b',a')
            // are updated together from their old values.
            for a in 0..n {
                for b in 0..n {
                    let (ra, rb) = (partner(b), partner(a));
                    if (ra, rb) < (a, b) {
                        continue;
                    }
                    let s = -eta(a) * eta(b);
                    let (xab, xr) = (out.get(a, b), out.get(ra, rb));
                    out.set(a, b, (xab + s * xr) * c);
                    if (ra, rb) != (a, b) {
                        out.set(ra, rb, (xr + s * xab) * c);
                    }
                }
            }
        }
    }
    Ok(())
}

/// `i·scale·G` with `G` Hermitian: standard normal diagonal and
/// `(x + iy)/√2` off the diagonal, so `E[G_ab G_cd] = δ_ad δ_bc`.
fn unitary<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R, out: &mut CMatrix) {
    let i = Complex64::new(0.0, 1.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        out.set(a, a, i * scale * d);
        for b in a + 1..n {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let g = Complex64::new(x * r, y * r);
            out.set(a, b, i * scale * g);
            out.set(b, a, i * scale * g.conj());
        }
    }
}

/// The matrix `J` with `J_{a,a+N/2} = 1` and `J_{a+N/2,a} = -1`.
pub fn symplectic_form(n: usize) -> CMatrix {
    let half = n / 2;
    CMatrix::from_fn(n, |a, b| {
        if a < half && b == a + half {
            Complex64::new(1.0, 0.0)
        } else if a >= half && b + half == a {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
