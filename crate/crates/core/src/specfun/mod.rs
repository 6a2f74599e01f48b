//! Gamma function, `beta(m)`, Bessel functions of integer order, their zeros,
//! and the Olver polynomials of the uniform large-order expansion.

mod bessel;
mod olver;
mod roots;

pub use bessel::{bessel_i, bessel_j, bessel_zeros, zero_chain, BesselJ};
pub use olver::{uniform_bessel_i, uv_tables, UVTable, UniformI};
pub use roots::{find_root, RootOptions};

use crate::exact::beta_exact;
use crate::{Error, PiQ, Real, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // Reflection keeps the approximation inside its accurate range.
        let pi = T::PI();
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(*c) / (x + T::count(k));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// `Gamma(x)` for real `x` away from the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    ln_gamma(x).exp()
}

/// `beta(m)` in floating point together with its exact closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaValue<T> {
    pub value: T,
    pub exact: PiQ,
}

/// `beta(m) = Gamma(m/2) / (Gamma(1/2) Gamma((m+1)/2))`.
pub fn beta_m<T: Real>(m: usize) -> Result<BetaValue<T>> {
    if m < 2 {
        return Err(Error::InvalidDimension {
            m,
            reason: "beta(m) requires m >= 2",
        });
    }
    let half = T::lit(0.5);
    let mm = T::count(m);
    let value = (ln_gamma(mm * half) - ln_gamma((mm + T::one()) * half)).exp() / T::PI().sqrt();
    Ok(BetaValue {
        value,
        exact: beta_exact(m)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use std::f64::consts::PI;

    #[test]
    fn gamma_values() {
        assert!((gamma(5.0f64) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5f64) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.5f64) - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((gamma(-0.5f64) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(100.0f64) - 359.134_205_369_575_4).abs() < 1e-10);
        assert!((gamma(3.0f32) - 2.0).abs() < 1e-5);
    }

    #[test]
    fn beta_examples() {
        let b3 = beta_m::<f64>(3).unwrap();
        assert!((b3.value - 0.5).abs() < 1e-14);
        assert_eq!(b3.exact, PiQ::rational(q(1, 2)));
        assert!((beta_m::<f64>(2).unwrap().value - 2.0 / PI).abs() < 1e-14);
        let b4 = beta_m::<f64>(4).unwrap();
        assert!((b4.value - 0.424_413_181_578_387_6).abs() < 1e-13);
        assert!((b4.value - b4.exact.to_f64()).abs() < 1e-15);
        // Doubling formula route: Gamma(2)/(sqrt(pi) Gamma(5/2)) with Gamma(5/2) = 3 sqrt(pi)/4.
        assert!((b4.value - 1.0 / (PI.sqrt() * 0.75 * PI.sqrt())).abs() < 1e-14);
        assert!(beta_m::<f64>(1).is_err());
    }

    #[test]
    fn beta_ratio_recursion_is_exact() {
        for m in 2..20usize {
            let r = beta_exact(m).unwrap().div(&beta_exact(m + 2).unwrap()).unwrap();
            assert_eq!(r, PiQ::rational(q(m as i64 + 1, m as i64)));
            let f = beta_m::<f64>(m).unwrap().value / beta_m::<f64>(m + 2).unwrap().value;
            assert!((f - (m as f64 + 1.0) / m as f64).abs() < 1e-12);
        }
    }
}
