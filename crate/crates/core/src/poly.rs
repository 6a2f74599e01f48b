//! Sparse univariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::exact::Coefficient;
use crate::Q;

/// `sum_k c_k x^k`, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPoly<T> {
    coeffs: BTreeMap<usize, T>,
}

impl<T: Coefficient> RationalPoly<T> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        Self { coeffs }
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    /// Builds from dense coefficients `c_0, c_1, ...`.
    pub fn from_dense(dense: Vec<T>) -> Self {
        let coeffs = dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(&k).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    fn add_term(&mut self, k: usize, c: T) {
        let e = self.coeffs.entry(k).or_insert_with(T::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            out.add_term(*k, v.clone() * c.clone());
        }
        out
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        self.scale(&T::from_q(r))
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            if *k > 0 {
                out.add_term(k - 1, v.clone() * T::from_i64(*k as i64));
            }
        }
        out
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            let inv = Q::new(BigInt::from(1), BigInt::from(*k as u64 + 1));
            out.add_term(k + 1, v.clone() * T::from_q(&inv));
        }
        out
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let Some(deg) = self.degree() else {
            return T::zero();
        };
        let mut acc = T::zero();
        for k in (0..=deg).rev() {
            acc = acc * x.clone() + self.coeff(k);
        }
        acc
    }

    /// Real-part evaluation in double precision.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let Some(deg) = self.degree() else {
            return 0.0;
        };
        let mut acc = 0.0;
        for k in (0..=deg).rev() {
            acc = acc * x + self.coeff(k).approx().0;
        }
        acc
    }

    /// `p(q(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        let mut acc = Self::zero();
        for k in (0..=deg).rev() {
            acc = acc * inner.clone() + Self::constant(self.coeff(k));
        }
        acc
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self.clone())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            let c = if k % 2 == 0 { v.clone() } else { -v.clone() };
            out.add_term(*k, c);
        }
        out
    }

    /// `Some(0)` for even, `Some(1)` for odd, `None` for mixed parity.
    /// The zero polynomial counts as even.
    pub fn parity(&self) -> Option<usize> {
        let mut par = None;
        for k in self.coeffs.keys() {
            match par {
                None => par = Some(k % 2),
                Some(p) if p != k % 2 => return None,
                _ => {}
            }
        }
        Some(par.unwrap_or(0))
    }
}

impl<T: Coefficient> Add for RationalPoly<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, v) in rhs.coeffs {
            self.add_term(k, v);
        }
        self
    }
}

impl<T: Coefficient> Sub for RationalPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Coefficient> Neg for RationalPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl<T: Coefficient> Mul for RationalPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Coefficient> fmt::Display for RationalPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*x", c)?,
                _ => write!(f, "{}*x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl<T: Coefficient> fmt::Debug for RationalPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({})", self)
    }
}
