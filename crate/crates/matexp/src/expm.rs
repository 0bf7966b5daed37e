//! Scaling and squaring with diagonal Padé approximants.

use crate::dense::{DenseMatrix, Scalar};
use crate::MatexpError;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.53939833006323e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest number of squarings accepted before reporting overflow.
const MAX_SQUARINGS: i32 = 1024;

/// Scratch buffers reused across calls so hot loops avoid allocation.
#[derive(Clone, Debug)]
pub struct ExpmWorkspace<T: Scalar> {
    a: DenseMatrix<T>,
    powers: [DenseMatrix<T>; 3],
    u: DenseMatrix<T>,
    v: DenseMatrix<T>,
    tmp: DenseMatrix<T>,
}

impl<T: Scalar> ExpmWorkspace<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            a: DenseMatrix::zeros(dim),
            powers: [
                DenseMatrix::zeros(dim),
                DenseMatrix::zeros(dim),
                DenseMatrix::zeros(dim),
            ],
            u: DenseMatrix::zeros(dim),
            v: DenseMatrix::zeros(dim),
            tmp: DenseMatrix::zeros(dim),
        }
    }
}

/// Matrix exponential of `m`.
pub fn expm<T: Scalar>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>, MatexpError> {
    let mut ws = ExpmWorkspace::new(m.dim());
    let mut out = DenseMatrix::zeros(m.dim());
    expm_into(m, &mut ws, &mut out)?;
    Ok(out)
}

/// Matrix exponential of `m` written into `out`, using `ws` for scratch.
pub fn expm_into<T: Scalar>(
    m: &DenseMatrix<T>,
    ws: &mut ExpmWorkspace<T>,
    out: &mut DenseMatrix<T>,
) -> Result<(), MatexpError> {
    if !m.is_finite() {
        return Err(MatexpError::NonFinite);
    }
    let norm = m.norm1();
    let dim = m.dim();
    if dim == 0 {
        *out = DenseMatrix::zeros(0);
        return Ok(());
    }
    if ws.a.dim() != dim {
        *ws = ExpmWorkspace::new(dim);
    }
    ws.a.copy_from(m);

    let (degree, squarings) = if norm <= THETA_3 {
        (3, 0)
    } else if norm <= THETA_5 {
        (5, 0)
    } else if norm <= THETA_7 {
        (7, 0)
    } else if norm <= THETA_9 {
        (9, 0)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0);
        if !s.is_finite() || s as i32 > MAX_SQUARINGS {
            return Err(MatexpError::Overflow { norm });
        }
        (13, s as i32)
    };
    if squarings > 0 {
        ws.a.scale_in_place(T::from_real(0.5f64.powi(squarings)));
    }

    match degree {
        3 => pade_low(&B3, ws),
        5 => pade_low(&B5, ws),
        7 => pade_low(&B7, ws),
        9 => pade_low(&B9, ws),
        _ => pade_13(ws),
    }

    // Solve (V - U) R = (V + U).
    ws.tmp.copy_from(&ws.v);
    ws.tmp.axpy(-T::one(), &ws.u);
    out.copy_from(&ws.v);
    out.axpy(T::one(), &ws.u);
    ws.tmp.solve_in_place(out)?;

    for _ in 0..squarings {
        out.mul_into(out, &mut ws.tmp);
        std::mem::swap(out, &mut ws.tmp);
    }
    if !out.is_finite() {
        return Err(MatexpError::Overflow { norm });
    }
    Ok(())
}

/// Fills `ws.u` and `ws.v` for degrees 3 to 9 where `U = A Σ b_{2k+1} A^{2k}`
/// and `V = Σ b_{2k} A^{2k}`.
fn pade_low<T: Scalar>(b: &[f64], ws: &mut ExpmWorkspace<T>) {
    let half = b.len() / 2;
    let [a2, pow, odd] = &mut ws.powers;
    odd.set_identity();
    odd.scale_in_place(T::from_real(b[1]));
    ws.v.set_identity();
    ws.v.scale_in_place(T::from_real(b[0]));
    ws.a.mul_into(&ws.a, a2);
    pow.copy_from(a2);
    for k in 1..half {
        if k > 1 {
            pow.mul_into(a2, &mut ws.tmp);
            std::mem::swap(pow, &mut ws.tmp);
        }
        odd.axpy(T::from_real(b[2 * k + 1]), pow);
        ws.v.axpy(T::from_real(b[2 * k]), pow);
    }
    ws.a.mul_into(odd, &mut ws.u);
}

fn pade_13<T: Scalar>(ws: &mut ExpmWorkspace<T>) {
    let dim = ws.a.dim();
    let b = &B13;
    let [a2, a4, a6] = &mut ws.powers;
    ws.a.mul_into(&ws.a, a2);
    a2.mul_into(a2, a4);
    a4.mul_into(a2, a6);

    // Inner polynomial for U.
    let mut inner = a6.scale(T::from_real(b[13]));
    inner.axpy(T::from_real(b[11]), a4);
    inner.axpy(T::from_real(b[9]), a2);
    a6.mul_into(&inner, &mut ws.tmp);
    ws.tmp.axpy(T::from_real(b[7]), a6);
    ws.tmp.axpy(T::from_real(b[5]), a4);
    ws.tmp.axpy(T::from_real(b[3]), a2);
    for i in 0..dim {
        ws.tmp.add_at(i, i, T::from_real(b[1]));
    }
    ws.a.mul_into(&ws.tmp, &mut ws.u);

    // V.
    let mut inner = a6.scale(T::from_real(b[12]));
    inner.axpy(T::from_real(b[10]), a4);
    inner.axpy(T::from_real(b[8]), a2);
    a6.mul_into(&inner, &mut ws.v);
    ws.v.axpy(T::from_real(b[6]), a6);
    ws.v.axpy(T::from_real(b[4]), a4);
    ws.v.axpy(T::from_real(b[2]), a2);
    for i in 0..dim {
        ws.v.add_at(i, i, T::from_real(b[0]));
    }
}
