//! Barnes zeta functions `zeta_B(s, a) = sum_n binom(d+n-1, n) (n+a)^{-s}`,
//! generalized Bernoulli polynomials, and residues.
//!
//! The Bernoulli polynomials follow the generating function
//!
//! ```text
//! e^{-at} / (1 - e^{-t})^d = (-1)^d sum_n (-t)^{n-d} B_n^{(d)}(a) / n!
//! ```
//!
//! equivalently `sum_n B_n^{(d)}(a) (-t)^n / n! = e^{-at} (t / (1 - e^{-t}))^d`.
//! This is the classical Norlund polynomial, which also satisfies
//! `B_n^{(d)}(a) = (-1)^n B_n^{(d)}(d - a)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{binomial, factorial, q, qi};
use crate::{Error, QPoly, Real, Result, Q};

/// Dimension and offset of a Barnes zeta function.
#[derive(Clone, Debug, PartialEq)]
pub struct BarnesSpec {
    pub d: usize,
    pub a: Q,
}

impl BarnesSpec {
    pub fn new(d: usize, a: Q) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("Barnes dimension d must be >= 1".into()));
        }
        Ok(Self { d, a })
    }

    /// The sphere case `d = m - 1`, `a = m/2 - 1`.
    pub fn sphere(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension {
                m,
                reason: "sphere Barnes function needs m >= 2",
            });
        }
        Self::new(m - 1, q(m as i64 - 2, 2))
    }
}

/// `B_0^{(d)}(a), ..., B_{n_max}^{(d)}(a)` as polynomials in `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliTable {
    pub d: usize,
    pub polys: Vec<QPoly>,
}

impl BernoulliTable {
    pub fn eval(&self, n: usize, a: &Q) -> Q {
        self.polys[n].eval(a)
    }
}

/// Largest index accepted by [`gen_bernoulli`].
pub const MAX_BERNOULLI_INDEX: usize = 30;

/// Generalized Bernoulli polynomials by formal power-series division.
pub fn gen_bernoulli(d: usize, n_max: usize) -> Result<BernoulliTable> {
    if d == 0 {
        return Err(Error::Domain("Bernoulli order d must be >= 1".into()));
    }
    if n_max > MAX_BERNOULLI_INDEX {
        return Err(Error::Domain(format!(
            "Bernoulli index limited to {}, got {}",
            MAX_BERNOULLI_INDEX, n_max
        )));
    }
    let len = n_max + 1;
    // (1 - e^{-t}) / t = sum_k (-1)^k t^k / (k+1)!
    let h: Vec<Q> = (0..len)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            Q::new(BigInt::from(sign), factorial(k as u64 + 1))
        })
        .collect();
    // g = 1 / h
    let mut g = vec![Q::zero(); len];
    g[0] = Q::one();
    for n in 1..len {
        let mut acc = Q::zero();
        for k in 1..=n {
            acc += h[k].clone() * g[n - k].clone();
        }
        g[n] = -acc;
    }
    // G = g^d
    let mut big_g = vec![Q::zero(); len];
    big_g[0] = Q::one();
    for _ in 0..d {
        let mut next = vec![Q::zero(); len];
        for i in 0..len {
            for j in 0..len - i {
                next[i + j] += big_g[i].clone() * g[j].clone();
            }
        }
        big_g = next;
    }
    // Coefficient of t^n in e^{-at} G(t), as a polynomial in a, times (-1)^n n!.
    let polys = (0..len)
        .map(|n| {
            let mut poly = QPoly::zero();
            for j in 0..=n {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let c = Q::new(BigInt::from(sign), factorial(j as u64)) * big_g[n - j].clone();
                poly = poly + QPoly::monomial(c, j);
            }
            let scale = Q::from_integer(factorial(n as u64)) * if n % 2 == 0 { Q::one() } else { -Q::one() };
            poly.scale(&scale)
        })
        .collect();
    Ok(BernoulliTable { d, polys })
}

/// `Res_{s=z} zeta_B(s, a) = (-1)^{d+z} B_{d-z}^{(d)}(a) / ((z-1)! (d-z)!)`.
pub fn barnes_residue(d: usize, a: &Q, z: i64) -> Result<Q> {
    if z < 1 || z > d as i64 {
        return Err(Error::ResidueIndex { z, d });
    }
    let z = z as usize;
    let table = gen_bernoulli(d, d - z)?;
    let sign = if (d + z).is_multiple_of(2) { Q::one() } else { -Q::one() };
    let den = factorial(z as u64 - 1) * factorial((d - z) as u64);
    Ok(sign * table.eval(d - z, a) / Q::from_integer(den))
}

/// Coefficients `c_k` with `binom(d+n-1, n) = sum_k c_k (n+a)^k`.
///
/// Writing `zeta_B(s, a) = sum_k c_k zeta_H(s-k, a)` shows that the residue
/// at `s = z` is `c_{z-1}`, independently of the Bernoulli route.
pub fn degeneracy_expansion(d: usize, a: &Q) -> Vec<Q> {
    // binom(d+n-1, n) = (n+1)(n+2)...(n+d-1) / (d-1)!, with n = x - a.
    let mut poly = QPoly::one();
    for j in 1..d {
        let lin = QPoly::from_dense(vec![qi(j as i64) - a.clone(), Q::one()]);
        poly = poly * lin;
    }
    let inv = Q::new(BigInt::one(), factorial(d as u64 - 1));
    let poly = poly.scale(&inv);
    (0..d).map(|k| poly.coeff(k)).collect()
}

/// Truncated sum with a rigorous bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialSum<T> {
    pub value: T,
    pub tail_bound: T,
}

/// `sum_{n=0}^N binom(d+n-1, n) (n+a)^{-s}` for `s > d`.
///
/// For `n > N`, `binom(d+n-1, n) <= K (n+a)^{d-1} / (d-1)!` with
/// `K = max(1, ((N+d)/(N+1+a))^{d-1})`, and the remaining sum is bounded by
/// the integral `(N+a)^{d-s} / (s-d)`.
pub fn barnes_partial<T: Real>(d: usize, a: T, s: T, n_max: usize) -> Result<PartialSum<T>> {
    let dd = T::count(d);
    if !(s > dd) {
        return Err(Error::Convergence {
            s: s.to_f64_lossy(),
            min: d as f64,
        });
    }
    if !(a > T::zero()) {
        return Err(Error::Domain("Barnes offset a must be positive".into()));
    }
    let mut binom = T::one();
    let mut sum = T::zero();
    for n in 0..=n_max {
        if n > 0 {
            binom = binom * T::count(d + n - 1) / T::count(n);
        }
        sum = sum + binom * (T::count(n) + a).powf(-s);
    }
    let nn = T::count(n_max);
    let ratio = (nn + dd) / (nn + T::one() + a);
    let k = T::one().max(ratio.powi(d as i32 - 1));
    let fact = (1..d).fold(T::one(), |acc, j| acc * T::count(j));
    let tail = k * (nn + a).powf(dd - s) / (fact * (s - dd));
    Ok(PartialSum {
        value: sum,
        tail_bound: tail,
    })
}

/// Bernoulli numbers `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Hurwitz zeta `sum_n (n+a)^{-sigma}` continued to `sigma != 1` by
/// Euler-Maclaurin summation.
pub fn hurwitz_zeta<T: Real>(sigma: T, a: T) -> Result<T> {
    if (sigma - T::one()).abs() < T::epsilon() {
        return Err(Error::Domain("Hurwitz zeta has a pole at sigma = 1".into()));
    }
    if !(a > T::zero()) {
        return Err(Error::Domain("Hurwitz offset a must be positive".into()));
    }
    let cut = 40 + sigma.abs().to_f64_lossy().ceil() as usize;
    let mut sum = T::zero();
    for n in 0..cut {
        sum = sum + (T::count(n) + a).powf(-sigma);
    }
    let x = T::count(cut) + a;
    sum = sum + x.powf(T::one() - sigma) / (sigma - T::one()) + x.powf(-sigma) / T::lit(2.0);
    // Rising products sigma (sigma+1) ... (sigma+2j-2) over (2j)!.
    let mut rising = sigma;
    let mut fact = T::lit(2.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let jj = j + 1;
        if jj > 1 {
            rising = rising * (sigma + T::count(2 * jj - 3)) * (sigma + T::count(2 * jj - 2));
            fact = fact * T::count(2 * jj - 1) * T::count(2 * jj);
        }
        sum = sum + T::lit(*b) / fact * rising * x.powf(-sigma - T::count(2 * jj - 1));
    }
    Ok(sum)
}

/// `zeta_B(s, a)` continued through the Hurwitz decomposition.
pub fn barnes_continued<T: Real>(d: usize, a: &Q, s: T) -> Result<T> {
    let af = T::lit(crate::exact::Coefficient::approx(a).0);
    let mut acc = T::zero();
    for (k, c) in degeneracy_expansion(d, a).iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let ck = T::lit(crate::exact::Coefficient::approx(c).0);
        acc = acc + ck * hurwitz_zeta(s - T::count(k), af)?;
    }
    Ok(acc)
}

/// Numerical residue at `s = z` from `(s - z) zeta_B(s)` sampled at
/// `z + 0.1, z + 0.05, z + 0.025` and Richardson-extrapolated to `s = z`.
///
/// Two extrapolation levels leave a remainder of `c_3 h^3 / 8` with `h = 0.1`,
/// where `c_3` is the cubic Laurent coefficient; see [`residue_symmetric`].
pub fn residue_by_richardson(d: usize, a: &Q, z: i64) -> Result<f64> {
    let f = |h: f64| -> Result<f64> { Ok(h * barnes_continued(d, a, z as f64 + h)?) };
    let (f1, f2, f3) = (f(0.1)?, f(0.05)?, f(0.025)?);
    let r1 = 2.0 * f2 - f1;
    let r2 = 2.0 * f3 - f2;
    Ok((4.0 * r2 - r1) / 3.0)
}

/// Residue from the even combination `h (zeta_B(z+h) - zeta_B(z-h)) / 2`
/// at `h = 0.1, 0.05, 0.025`, extrapolated in `h^2`.
pub fn residue_symmetric(d: usize, a: &Q, z: i64) -> Result<f64> {
    let z = z as f64;
    let g = |h: f64| -> Result<f64> { Ok(h * (barnes_continued(d, a, z + h)? - barnes_continued(d, a, z - h)?) / 2.0) };
    let (g1, g2, g3) = (g(0.1)?, g(0.05)?, g(0.025)?);
    let r1 = (4.0 * g2 - g1) / 3.0;
    let r2 = (4.0 * g3 - g2) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

/// Residues of the sphere base zeta function `zeta_{S^d}(s) = d_s/2 zeta_B(2s, m/2 - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereResidue {
    /// `Res_{s=z} zeta_B(s, m/2 - 1)`.
    pub barnes: Q,
    /// `Res_{s=z/2} zeta_{S^d}(s) = d_s/4 * Res_{s=z} zeta_B`.
    pub sphere: Q,
}

pub fn base_zeta_residue(m: usize, z: i64) -> Result<SphereResidue> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::InvalidDimension {
            m,
            reason: "m must be even and >= 4",
        });
    }
    let spec = BarnesSpec::sphere(m)?;
    let barnes = barnes_residue(spec.d, &spec.a, z)?;
    let ds = Q::from_integer(BigInt::from(1u64 << (m / 2)));
    let sphere = barnes.clone() * ds / qi(4);
    Ok(SphereResidue { barnes, sphere })
}

/// Spinor degeneracy `d_n(m) = d_s/2 * binom(m+n-2, n)` for even `m`.
pub fn sphere_degeneracy(m: usize, n: usize) -> BigInt {
    binomial((m + n - 2) as u64, n as u64) * BigInt::from(1u64 << (m / 2 - 1))
}
