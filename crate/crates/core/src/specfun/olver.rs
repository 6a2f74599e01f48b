use crate::exact::{q, qi, Coefficient};
use crate::{Error, QPoly, Real, Result};

/// Largest order accepted by [`uv_tables`].
pub const MAX_ORDER: usize = 12;

/// Olver polynomials `u_0..u_L` and `v_0..v_L` (with `v_0 = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct UVTable {
    pub u: Vec<QPoly>,
    pub v: Vec<QPoly>,
}

impl UVTable {
    pub fn max_order(&self) -> usize {
        self.u.len() - 1
    }
}

/// Builds the tables from
///
/// ```text
/// u_{l+1}(t) = t^2 (1 - t^2) u_l'(t) / 2 + (1/8) int_0^t (1 - 5 s^2) u_l(s) ds
/// v_l(t)     = u_l(t) + t (t^2 - 1) [u_{l-1}(t) / 2 + t u_{l-1}'(t)]
/// ```
pub fn uv_tables(order: usize) -> Result<UVTable> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Olver tables limited to order {}, got {}",
            MAX_ORDER, order
        )));
    }
    let t = QPoly::x();
    let t2 = t.clone() * t.clone();
    let one = QPoly::one();
    let half_t2_1mt2 = (t2.clone() * (one.clone() - t2.clone())).scale_q(&q(1, 2));
    let weight = one.clone() - t2.scale_q(&qi(5));
    let t_t2m1 = t.clone() * (t2.clone() - one.clone());

    let mut u = vec![one.clone()];
    let mut v = vec![one];
    for l in 0..order {
        let ul = &u[l];
        let next = half_t2_1mt2.clone() * ul.derivative() + (weight.clone() * ul.clone()).integral().scale_q(&q(1, 8));
        let vn = next.clone() + t_t2m1.clone() * (ul.scale_q(&q(1, 2)) + t.clone() * ul.derivative());
        u.push(next);
        v.push(vn);
    }
    Ok(UVTable { u, v })
}

/// Uniform approximation of `I_p(zp)` and `I_p'(zp)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformI<T> {
    pub value: T,
    pub derivative: T,
    /// Magnitude of the first omitted term of the value series, scaled like the value.
    pub error_proxy: T,
    pub t: T,
    pub eta: T,
}

fn eval_poly<T: Real>(p: &QPoly, x: T) -> T {
    let Some(deg) = p.degree() else {
        return T::zero();
    };
    let mut acc = T::zero();
    for k in (0..=deg).rev() {
        acc = acc * x + T::lit(p.coeff(k).approx().0);
    }
    acc
}

/// Evaluates
///
/// ```text
/// I_p(zp)  ~ e^{p eta} / (sqrt(2 pi p) (1+z^2)^{1/4}) [1 + sum_{l=1}^L u_l(t) / p^l]
/// I_p'(zp) ~ e^{p eta} (1+z^2)^{1/4} / (sqrt(2 pi p) z) [1 + sum_{l=1}^L v_l(t) / p^l]
/// ```
///
/// with `t = 1/sqrt(1+z^2)` and `eta = sqrt(1+z^2) + ln(z / (1 + sqrt(1+z^2)))`.
pub fn uniform_bessel_i<T: Real>(p: T, z: T, order: usize) -> Result<UniformI<T>> {
    if !(p > T::zero()) || !(z > T::zero()) {
        return Err(Error::Domain("uniform expansion needs p > 0 and z > 0".into()));
    }
    let table = uv_tables(order + 1)?;
    let one = T::one();
    let root = (one + z * z).sqrt();
    let t = one / root;
    let eta = root + (z / (one + root)).ln();
    let base = (p * eta).exp() / (T::lit(2.0) * T::PI() * p).sqrt();
    let quarter = root.sqrt();

    let mut su = one;
    let mut sv = one;
    let mut pl = one;
    for l in 1..=order {
        pl = pl * p;
        su = su + eval_poly(&table.u[l], t) / pl;
        sv = sv + eval_poly(&table.v[l], t) / pl;
    }
    let omitted = eval_poly(&table.u[order + 1], t) / (pl * p);
    Ok(UniformI {
        value: base / quarter * su,
        derivative: base * quarter / z * sv,
        error_proxy: (base / quarter * omitted).abs(),
        t,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::specfun::bessel_i;

    fn poly(c: &[(usize, i64, i64)]) -> QPoly {
        c.iter()
            .fold(QPoly::zero(), |acc, &(k, n, d)| acc + QPoly::monomial(q(n, d), k))
    }

    #[test]
    fn low_orders_match_closed_forms() {
        let tab = uv_tables(3).unwrap();
        assert_eq!(tab.u[0], QPoly::one());
        assert_eq!(tab.u[1], poly(&[(1, 1, 8), (3, -5, 24)]));
        assert_eq!(tab.v[1], poly(&[(1, -3, 8), (3, 7, 24)]));
        assert_eq!(tab.u[2], poly(&[(2, 9, 128), (4, -77, 192), (6, 385, 1152)]));
        // Hand check of the t^2 coefficient: 1/16 from the derivative term, 1/128 from the integral.
        assert_eq!(q(1, 16) + q(1, 128), q(9, 128));
    }

    #[test]
    fn degrees_and_parity() {
        let tab = uv_tables(8).unwrap();
        for l in 0..=8 {
            assert_eq!(tab.u[l].degree(), Some(3 * l));
            assert_eq!(tab.u[l].parity(), Some(l % 2));
            assert_eq!(tab.v[l].parity(), Some(l % 2));
            assert_eq!(
                tab.u[l].reflect(),
                if l % 2 == 0 {
                    tab.u[l].clone()
                } else {
                    -tab.u[l].clone()
                }
            );
        }
        assert!(uv_tables(13).is_err());
    }

    #[test]
    fn substitution_values() {
        let r = uniform_bessel_i(10.0f64, 1.0, 0).unwrap();
        assert!((r.t - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((r.eta - (2f64.sqrt() + (1.0 / (1.0 + 2f64.sqrt())).ln())).abs() < 1e-15);
    }

    #[test]
    fn error_decreases_with_order() {
        let (exact, dexact) = bessel_i(10.0f64, 10.0);
        let mut last = f64::INFINITY;
        for l in 0..=3 {
            let r = uniform_bessel_i(10.0f64, 1.0, l).unwrap();
            let err = (r.value / exact - 1.0).abs();
            assert!(err < last, "L={} err={}", l, err);
            if l == 2 {
                assert!(err < 1e-4);
                assert!((r.derivative / dexact - 1.0).abs() < 1e-4);
            }
            last = err;
        }
    }
}
