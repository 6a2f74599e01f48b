//! Exact scalars: rationals, Gaussian rationals, and linear combinations of
//! powers of `sqrt(pi)`.
//!
//! Every closed-form coefficient in this crate is a finite sum
//! `sum_k q_k * pi^(k/2)` with rational (or Gaussian-rational) `q_k`: gamma
//! functions at half-integers, sphere and ball volumes, `(4 pi)^(-m/2)` and
//! `beta(m)` all live in that ring. [`PiExpr`] stores such sums keyed by the
//! exponent `k` of `sqrt(pi)`.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, GaussQ, Result, Q};

/// Commutative ring operations needed by the exact layers.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
{
}

/// Coefficient field for Clifford expressions and closed-form values.
pub trait Coefficient: Ring + Display + Send + Sync {
    fn conj(&self) -> Self;
    fn from_q(q: &Q) -> Self;
    /// The imaginary unit, when the field contains one.
    fn imag_unit() -> Option<Self>;
    /// `(re, im)` in double precision.
    fn approx(&self) -> (f64, f64);
    fn try_recip(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from_integer(BigInt::from(n)))
    }
}

impl Coefficient for Q {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn imag_unit() -> Option<Self> {
        None
    }
    fn approx(&self) -> (f64, f64) {
        (self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn try_recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Coefficient for GaussQ {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_q(q: &Q) -> Self {
        Complex::new(q.clone(), Q::zero())
    }
    fn imag_unit() -> Option<Self> {
        Some(Complex::new(Q::zero(), Q::one()))
    }
    fn approx(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn try_recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        Some(Complex::new(self.re.clone() / norm.clone(), -self.im.clone() / norm))
    }
}

impl Coefficient for Complex<f64> {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_q(q: &Q) -> Self {
        Complex::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn imag_unit() -> Option<Self> {
        Some(Complex::new(0.0, 1.0))
    }
    fn approx(&self) -> (f64, f64) {
        (self.re, self.im)
    }
    fn try_recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.inv())
    }
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Finite sum `sum_k c_k * pi^(k/2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PiExpr<T> {
    terms: BTreeMap<i32, T>,
}

impl<T: Coefficient> PiExpr<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    /// `c * pi^(half_power/2)`.
    pub fn monomial(c: T, half_power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_power, c);
        }
        Self { terms }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn rational(r: Q) -> Self {
        Self::constant(T::from_q(&r))
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(T::from_i64(n))
    }

    pub fn pi() -> Self {
        Self::monomial(T::one(), 2)
    }

    pub fn sqrt_pi() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `pi^(half_power/2)`.
    pub fn coeff(&self, half_power: i32) -> T {
        self.terms.get(&half_power).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &T)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Exponents of `sqrt(pi)` that carry a nonzero coefficient.
    pub fn half_powers(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    fn insert_add(&mut self, k: i32, c: T) {
        let entry = self.terms.entry(k).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.insert_add(*k, v.clone() * c.clone());
        }
        out
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        self.scale(&T::from_q(r))
    }

    /// Multiplies by `pi^(half_power/2)`.
    pub fn shift(&self, half_power: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + half_power, v.clone())).collect(),
        }
    }

    /// Integer power, negative exponents allowed for monomials.
    pub fn powi(&self, n: i32) -> Result<Self> {
        if n >= 0 {
            let mut acc = Self::integer(1);
            for _ in 0..n {
                acc = acc.clone() * self.clone();
            }
            Ok(acc)
        } else {
            let base = Self::integer(1).div(self)?;
            base.powi(-n)
        }
    }

    /// Division; the divisor must be a single monomial.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let mut it = rhs.terms.iter();
        match (it.next(), it.next()) {
            (Some((k, c)), None) => {
                let inv = c.try_recip().ok_or(Error::NonMonomialDivision)?;
                Ok(self.scale(&inv).shift(-k))
            }
            _ => Err(Error::NonMonomialDivision),
        }
    }

    /// Complex value in double precision.
    pub fn approx(&self) -> (f64, f64) {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        self.terms.iter().fold((0.0, 0.0), |(re, im), (k, c)| {
            let (cr, ci) = c.approx();
            let w = sqrt_pi.powi(*k);
            (re + cr * w, im + ci * w)
        })
    }

    /// Real part of [`approx`](Self::approx).
    pub fn to_f64(&self) -> f64 {
        self.approx().0
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }
}

impl PiExpr<Q> {
    pub fn lift(&self) -> PiExpr<GaussQ> {
        PiExpr {
            terms: self.terms.iter().map(|(k, v)| (*k, GaussQ::from_q(v))).collect(),
        }
    }
}

impl PiExpr<GaussQ> {
    /// Real projection; `None` if any imaginary part is nonzero.
    pub fn try_real(&self) -> Option<PiExpr<Q>> {
        let mut out = PiExpr::zero();
        for (k, c) in &self.terms {
            if !c.im.is_zero() {
                return None;
            }
            out.insert_add(*k, c.re.clone());
        }
        Some(out)
    }
}

impl<T: Coefficient> Add for PiExpr<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.insert_add(k, c);
        }
        self
    }
}

impl<T: Coefficient> Sub for PiExpr<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Coefficient> Neg for PiExpr<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl<T: Coefficient> Mul for PiExpr<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &rhs.terms {
                out.insert_add(ka + kb, a.clone() * b.clone());
            }
        }
        out
    }
}

fn fmt_power(k: i32) -> String {
    if k % 2 == 0 {
        format!("pi^{}", k / 2)
    } else {
        format!("pi^({}/2)", k)
    }
}

impl<T: Coefficient> Display for PiExpr<T> {
    /// Terms in ascending power, e.g. `4/3*pi^-1` or `1/3*pi^(-1/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = format!("{}", c);
            let coeff = if coeff.contains('+') || coeff.contains("i") {
                format!("({})", coeff)
            } else {
                coeff
            };
            if *k == 0 {
                write!(f, "{}", coeff)?;
            } else {
                write!(f, "{}*{}", coeff, fmt_power(*k))?;
            }
        }
        Ok(())
    }
}

impl<T: Coefficient> Debug for PiExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiExpr({})", self)
    }
}

/// `Gamma(k/2)` for a positive integer `k`, exactly.
pub fn gamma_half(k: u32) -> Result<PiExpr<Q>> {
    if k == 0 {
        return Err(Error::Domain("Gamma(0) has a pole".into()));
    }
    if k.is_multiple_of(2) {
        let n = (k / 2 - 1) as u64;
        return Ok(PiExpr::rational(Q::from_integer(factorial(n))));
    }
    // Gamma(n + 1/2) = (2n)! / (4^n n!) * sqrt(pi)
    let n = ((k - 1) / 2) as u64;
    let num = factorial(2 * n);
    let den = BigInt::from(4u32).pow(n as u32) * factorial(n);
    Ok(PiExpr::monomial(Q::new(num, den), 1))
}

/// `Gamma(m/2) / (Gamma(1/2) Gamma((m+1)/2))` exactly: a rational multiple of
/// `1/pi` for even `m` and a rational for odd `m`.
pub fn beta_exact(m: usize) -> Result<PiExpr<Q>> {
    if m < 2 {
        return Err(Error::InvalidDimension {
            m,
            reason: "beta(m) requires m >= 2",
        });
    }
    let m = m as u32;
    gamma_half(m)?.div(&(gamma_half(1)? * gamma_half(m + 1)?))
}

/// `(4 pi)^(-k/2)` for integer `k`.
pub fn four_pi_pow_neg_half(k: i32) -> PiExpr<Q> {
    // (4 pi)^(-k/2) = 2^(-k) * pi^(-k/2)
    let two_pow = if k >= 0 {
        Q::new(BigInt::one(), BigInt::from(2).pow(k as u32))
    } else {
        Q::from_integer(BigInt::from(2).pow((-k) as u32))
    };
    PiExpr::monomial(two_pow, -k)
}

/// Volume of the unit sphere `S^(m-1)`: `2 pi^(m/2) / Gamma(m/2)`.
pub fn sphere_volume(m: usize) -> Result<PiExpr<Q>> {
    PiExpr::monomial(qi(2), m as i32).div(&gamma_half(m as u32)?)
}

/// Volume of the unit ball `B^m`: `pi^(m/2) / Gamma(m/2 + 1)`.
pub fn ball_volume(m: usize) -> Result<PiExpr<Q>> {
    PiExpr::monomial(qi(1), m as i32).div(&gamma_half(m as u32 + 2)?)
}

/// Short `p/q` rendering used in reports.
pub fn fmt_q(r: &Q) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_matches_known_values() {
        assert_eq!(gamma_half(2).unwrap(), PiQ::integer(1));
        assert_eq!(gamma_half(1).unwrap(), PiQ::sqrt_pi());
        assert_eq!(gamma_half(3).unwrap(), PiQ::monomial(q(1, 2), 1));
        assert_eq!(gamma_half(5).unwrap(), PiQ::monomial(q(3, 4), 1));
        assert_eq!(gamma_half(8).unwrap(), PiQ::integer(6));
    }

    type PiQ = PiExpr<Q>;

    #[test]
    fn beta_exact_small_m() {
        assert_eq!(beta_exact(3).unwrap(), PiQ::rational(q(1, 2)));
        assert_eq!(beta_exact(2).unwrap(), PiQ::monomial(qi(2), -2));
        assert_eq!(beta_exact(4).unwrap(), PiQ::monomial(q(4, 3), -2));
        assert!(beta_exact(1).is_err());
    }

    #[test]
    fn volumes() {
        assert_eq!(ball_volume(4).unwrap(), PiQ::monomial(q(1, 2), 4));
        assert_eq!(sphere_volume(4).unwrap(), PiQ::monomial(qi(2), 4));
        assert_eq!(sphere_volume(3).unwrap(), PiQ::monomial(qi(4), 2));
        assert!((ball_volume(3).unwrap().to_f64() - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn division_requires_monomial() {
        let a = PiQ::integer(1) + PiQ::pi();
        assert_eq!(PiQ::integer(3).div(&a), Err(Error::NonMonomialDivision));
        let b = a.div(&PiQ::monomial(qi(2), 2)).unwrap();
        assert_eq!(b, PiQ::monomial(q(1, 2), -2) + PiQ::rational(q(1, 2)));
    }

    #[test]
    fn display_is_stable() {
        let e = PiQ::monomial(q(4, 3), -2) + PiQ::monomial(q(-1, 4), 0);
        assert_eq!(e.to_string(), "4/3*pi^-1 + -1/4");
        assert_eq!(PiQ::monomial(q(1, 3), -1).to_string(), "1/3*pi^(-1/2)");
    }

    #[test]
    fn four_pi_powers() {
        let v = four_pi_pow_neg_half(3).to_f64();
        assert!((v - (4.0 * std::f64::consts::PI).powf(-1.5)).abs() < 1e-16);
        let w = four_pi_pow_neg_half(-2).to_f64();
        assert!((w - 4.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
