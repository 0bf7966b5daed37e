//! Square dense matrices stored row-major.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::MatexpError;

/// Field of matrix entries. Implemented for `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    /// Modulus of the entry.
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn conj(self) -> Self {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        // `norm` goes through `hypot`, which is slow in hot loops; the plain
        // square root is exact enough unless the square under- or overflows.
        let sq = self.norm_sqr();
        if sq.is_normal() {
            sq.sqrt()
        } else {
            self.norm()
        }
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

/// A square `d × d` matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T: Scalar> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    /// The zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    /// The identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    ///
    /// # Panics
    /// If `data.len()` is not a perfect square matching `dim`.
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major data has wrong length");
        Self { dim, data }
    }

    /// Builds a matrix from a closure over `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.dim + j] = x;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.dim + j] += x;
    }

    /// Overwrites `self` with the entries of `other`.
    pub fn copy_from(&mut self, other: &Self) {
        self.dim = other.dim;
        self.data.clear();
        self.data.extend_from_slice(&other.data);
    }

    /// Sets every entry to zero.
    pub fn fill_zero(&mut self) {
        self.data.iter_mut().for_each(|x| *x = T::zero());
    }

    /// Sets `self` to the identity.
    pub fn set_identity(&mut self) {
        self.fill_zero();
        for i in 0..self.dim {
            self.data[i * self.dim + i] = T::one();
        }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data
            .iter()
            .map(|x| {
                let m = x.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn scale_in_place(&mut self, c: T) {
        self.data.iter_mut().for_each(|x| *x = *x * c);
    }

    /// `self + c * other`, in place.
    pub fn axpy(&mut self, c: T, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (x, &y) in self.data.iter_mut().zip(other.data.iter()) {
            *x += c * y;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(T::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-T::one(), other);
        out
    }

    /// Writes `self * other` into `out`, reusing its storage.
    pub fn mul_into(&self, other: &Self, out: &mut Self) {
        let d = self.dim;
        debug_assert_eq!(d, other.dim);
        out.dim = d;
        if d <= 4 {
            out.data.resize(d * d, T::zero());
            for i in 0..d {
                for j in 0..d {
                    let mut s = T::zero();
                    for k in 0..d {
                        s += self.data[i * d + k] * other.data[k * d + j];
                    }
                    out.data[i * d + j] = s;
                }
            }
            return;
        }
        out.data.clear();
        out.data.resize(d * d, T::zero());
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let orow = &mut out.data[i * d..(i + 1) * d];
            for (k, &a) in row.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                let brow = &other.data[k * d..(k + 1) * d];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += a * b;
                }
            }
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.dim);
        self.mul_into(other, &mut out);
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                let mut s = T::zero();
                for j in 0..d {
                    s += self.data[i * d + j] * v[j];
                }
                s
            })
            .collect()
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self, MatexpError> {
        let mut lu = self.clone();
        let mut x = rhs.clone();
        lu.solve_in_place(&mut x)?;
        Ok(x)
    }

    /// Solves `self * X = rhs`, overwriting `self` with its LU factors and
    /// `rhs` with the solution.
    pub fn solve_in_place(&mut self, rhs: &mut Self) -> Result<(), MatexpError> {
        let d = self.dim;
        if rhs.dim != d {
            return Err(MatexpError::Dimension {
                left: d,
                right: rhs.dim,
            });
        }
        for col in 0..d {
            let mut piv = col;
            let mut best = self.get(col, col).modulus();
            for r in col + 1..d {
                let m = self.get(r, col).modulus();
                if m > best {
                    best = m;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(MatexpError::Singular { column: col });
            }
            if piv != col {
                for j in 0..d {
                    self.data.swap(col * d + j, piv * d + j);
                    rhs.data.swap(col * d + j, piv * d + j);
                }
            }
            let inv = T::one() / self.get(col, col);
            for r in col + 1..d {
                let f = self.get(r, col) * inv;
                if f == T::zero() {
                    continue;
                }
                self.set(r, col, f);
                for j in col + 1..d {
                    let v = self.get(r, j) - f * self.get(col, j);
                    self.set(r, j, v);
                }
                for j in 0..d {
                    let v = rhs.get(r, j) - f * rhs.get(col, j);
                    rhs.set(r, j, v);
                }
            }
        }
        for col in (0..d).rev() {
            let inv = T::one() / self.get(col, col);
            for j in 0..d {
                let mut v = rhs.get(col, j);
                for k in col + 1..d {
                    v = v - self.get(col, k) * rhs.get(k, j);
                }
                rhs.set(col, j, v * inv);
            }
        }
        Ok(())
    }
}
