//! Exact forest polynomials.

use std::collections::BTreeMap;
use std::fmt;

use loopspec::LassoWord;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::nc::{nc_block_sum, BlockSum};
use crate::{check_lengths, MasterError};

/// A product of variables, stored as `(name, exponent)` pairs sorted by name
/// with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn new(factors: &[(&str, u32)]) -> Self {
        let mut m = Monomial::default();
        for &(name, e) in factors {
            m = m.times(&Monomial(vec![(name.to_string(), e)]));
        }
        m
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map_or(0, |&(_, e)| e)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &other.0 {
            *map.entry(n.clone()).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    fn without(&self, name: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(n, _)| n != name).cloned().collect())
    }
}

/// A polynomial with exact rational coefficients in named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForestPolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl ForestPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::default())
    }

    pub fn var(name: &str) -> Self {
        Self::term(BigRational::one(), Monomial::new(&[(name, 1)]))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials with their non-zero coefficients, in canonical order.
    pub fn terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| (a.0.degree(), a.0).cmp(&(b.0.degree(), b.0)));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::default())
    }

    /// Largest exponent of `name` over all monomials.
    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(name))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Replaces the variable `name` by the polynomial `value`.
    pub fn substitute(&self, name: &str, value: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let rest = Self::term(c.clone(), m.without(name));
            out = out.add(&rest.mul(&value.pow(m.exponent(name))));
        }
        out
    }

    /// Evaluates at exact rational values.
    pub fn eval_exact(
        &self,
        values: &BTreeMap<String, BigRational>,
    ) -> Result<BigRational, MasterError> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (n, e) in &m.0 {
                let x = values
                    .get(n)
                    .ok_or_else(|| MasterError::MissingVariable(n.clone()))?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Evaluates in floating point.
    pub fn eval(&self, values: &BTreeMap<String, f64>) -> Result<f64, MasterError> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (n, e) in &m.0 {
                let x = values
                    .get(n)
                    .ok_or_else(|| MasterError::MissingVariable(n.clone()))?;
                t *= x.powi(*e as i32);
            }
            total += t;
        }
        Ok(total)
    }

    fn add_term(&mut self, m: Monomial, c: &BigRational) {
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(m, c.clone());
                }
            }
        }
    }
}

impl BlockSum for ForestPolynomial {
    fn zero() -> Self {
        ForestPolynomial::zero()
    }
    fn one() -> Self {
        ForestPolynomial::one()
    }
    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }
    fn mul(&self, other: &Self) -> Self {
        ForestPolynomial::mul(self, other)
    }
}

/// Canonical text form: monomials by increasing total degree, then by
/// variable name, written as `c*x^e*y` with rational `c`.
impl fmt::Display for ForestPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> =
                m.0.iter()
                    .map(|(n, e)| {
                        if *e == 1 {
                            n.clone()
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Weight of a tree component with `b` vertices on letter `x`, summed over
/// the `b^{b-2}` labelled trees: `(-x)^{b-1} b^{b-2} / (b-1)!`.
fn block_weight(name: &str, b: usize) -> ForestPolynomial {
    if b == 1 {
        return ForestPolynomial::one();
    }
    let trees = num_traits::pow(BigInt::from(b), b - 2);
    let fact: BigInt = (1..b).map(BigInt::from).product();
    let mut c = BigRational::new(trees, fact);
    if b.is_multiple_of(2) {
        c = -c;
    }
    ForestPolynomial::term(c, Monomial::new(&[(name, (b - 1) as u32)]))
}

/// The forest polynomial `p(w)` of a word without inverses: the sum over
/// non-crossing same-letter forests of `Π_T (-x_T)^{|T|-1} / (|T|-1)!`.
/// A collection of loops gives the product over its loops.
pub fn forest_polynomial(w: &LassoWord) -> Result<ForestPolynomial, MasterError> {
    if !w.is_inverse_free() {
        return Err(MasterError::Inverse);
    }
    check_lengths(w)?;
    let mut p = ForestPolynomial::one();
    for r in w.loop_blocks() {
        let ids: Vec<usize> = w.letters()[r].iter().map(|l| l.id).collect();
        let q = nc_block_sum(&ids, |block: &[usize]| {
            block_weight(w.name(ids[block[0]]), block.len())
        });
        p = p.mul(&q);
    }
    Ok(p)
}
