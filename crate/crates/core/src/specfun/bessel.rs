use super::ln_gamma;
use super::roots::{find_root, RootOptions};
use crate::{Error, Real, Result};

/// Arguments beyond this are rejected; the backward recurrence would need
/// an impractically long run.
const MAX_ARGUMENT: f64 = 1.0e5;

/// `J_p(x)`, `J_p'(x)` and `J_{p+1}(x)` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselJ<T> {
    pub value: T,
    pub derivative: T,
    pub next: T,
}

/// Bessel function of the first kind of integer order.
///
/// Small arguments (`x^2/4 < p + 1`, where the ascending series has no
/// cancellation) use the series; everything else uses Miller's backward
/// recurrence normalized by `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j<T: Real>(p: usize, x: T) -> Result<BesselJ<T>> {
    if x < T::zero() || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j needs finite x >= 0, got {}", x)));
    }
    if x == T::zero() {
        let one = T::one();
        let value = if p == 0 { one } else { T::zero() };
        let next = T::zero();
        let derivative = match p {
            0 => T::zero(),
            1 => T::lit(0.5),
            _ => T::zero(),
        };
        return Ok(BesselJ {
            value,
            derivative,
            next,
        });
    }
    let quarter_x2 = x * x / T::lit(4.0);
    let (jp, jp1) = if quarter_x2 < T::count(p + 1) {
        (series(p, x), series(p + 1, x))
    } else {
        miller(p, x)?
    };
    if !jp.is_finite() || !jp1.is_finite() {
        return Err(Error::Overflow {
            order: p,
            x: x.to_f64_lossy(),
        });
    }
    Ok(BesselJ {
        value: jp,
        derivative: T::count(p) / x * jp - jp1,
        next: jp1,
    })
}

fn series<T: Real>(p: usize, x: T) -> T {
    let half = x / T::lit(2.0);
    let log_pref = T::count(p) * half.ln() - ln_gamma(T::count(p + 1));
    let y = -half * half;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..500 {
        term = term * y / (T::count(k) * T::count(p + k));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    log_pref.exp() * sum
}

fn miller<T: Real>(p: usize, x: T) -> Result<(T, T)> {
    let xf = x.to_f64_lossy();
    if xf > MAX_ARGUMENT {
        return Err(Error::Overflow { order: p, x: xf });
    }
    let top = (p + 1).max(xf.ceil() as usize);
    let start = 2 * ((top + 16 + (40.0 * top as f64).sqrt() as usize) / 2 + 1);
    let big = T::max_value().sqrt();
    let tiny = T::one() / big;
    let two_over_x = T::lit(2.0) / x;

    let mut bjp = T::zero();
    let mut bj = T::min_positive_value().sqrt();
    let mut sum = T::zero();
    let (mut jp, mut jp1) = (T::zero(), T::zero());
    for k in (1..=start).rev() {
        // bj = J_k, bjp = J_{k+1}; step down to J_{k-1}.
        let bjm = T::count(k) * two_over_x * bj - bjp;
        bjp = bj;
        bj = bjm;
        if bj.abs() > big {
            bj = bj * tiny;
            bjp = bjp * tiny;
            jp = jp * tiny;
            jp1 = jp1 * tiny;
            sum = sum * tiny;
        }
        let idx = k - 1;
        if idx % 2 == 0 && idx > 0 {
            sum = sum + bj;
        }
        if idx == p {
            jp = bj;
            jp1 = bjp;
        }
    }
    let norm = T::lit(2.0) * sum + bj;
    Ok((jp / norm, jp1 / norm))
}

/// Modified Bessel function `I_nu(x)` and its derivative from the ascending
/// series, for real `nu >= 0`. All terms are positive, so there is no
/// cancellation; intended as an independent reference at moderate `x`.
pub fn bessel_i<T: Real>(nu: T, x: T) -> (T, T) {
    if x <= T::zero() {
        let v = if nu == T::zero() { T::one() } else { T::zero() };
        return (v, T::zero());
    }
    let half = x / T::lit(2.0);
    let log_pref = nu * half.ln() - ln_gamma(nu + T::one());
    let y = half * half;
    let mut term = T::one();
    let mut sum = T::one();
    let mut dsum = nu;
    for k in 1..10_000 {
        let kk = T::count(k);
        term = term * y / (kk * (nu + kk));
        sum = sum + term;
        dsum = dsum + (T::lit(2.0) * kk + nu) * term;
        if term <= T::epsilon() * sum {
            break;
        }
    }
    let pref = log_pref.exp();
    (pref * sum, pref * dsum / x)
}

fn refine_zero<T: Real>(p: usize, a: T, b: T) -> Result<T> {
    find_root(
        |x| match bessel_j(p, x) {
            Ok(j) => (j.value, j.derivative),
            Err(_) => (T::nan(), T::nan()),
        },
        a,
        b,
        RootOptions::default(),
    )
}

/// Scans forward from `from` in unit steps and refines the first sign change.
/// Consecutive zeros of `J_p` are roughly `pi` apart, so no zero is skipped.
fn next_zero_after<T: Real>(p: usize, from: T) -> Result<T> {
    let step = T::one();
    let mut a = from;
    let mut fa = bessel_j(p, a)?.value;
    loop {
        let b = a + step;
        let fb = bessel_j(p, b)?.value;
        if fa == T::zero() {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            return refine_zero(p, a, b);
        }
        a = b;
        fa = fb;
    }
}

/// Zeros of `J_0, ..., J_{p_max}` up to `limit`, via interlacing.
///
/// Entry `p` holds every positive zero of `J_p` below `limit` followed by
/// the first zero above it. Each zero of `J_{p+1}` is bracketed by two
/// consecutive zeros of `J_p`.
pub fn zero_chain<T: Real>(p_max: usize, limit: T) -> Result<Vec<Vec<T>>> {
    let mut levels = Vec::with_capacity(p_max + 1);
    let mut zeros = Vec::new();
    let mut x = T::zero();
    loop {
        let z = next_zero_after(0, x)?;
        zeros.push(z);
        if z > limit {
            break;
        }
        x = z + T::lit(1e-3);
    }
    levels.push(zeros);
    for p in 1..=p_max {
        let prev = &levels[p - 1];
        let mut zeros = Vec::with_capacity(prev.len());
        for w in prev.windows(2) {
            let z = refine_zero(p, w[0], w[1])?;
            zeros.push(z);
            if z > limit {
                break;
            }
        }
        while zeros.last().is_none_or(|&z| z <= limit) {
            let from = zeros
                .last()
                .copied()
                .unwrap_or(T::zero())
                .max(*prev.last().expect("nonempty level"));
            zeros.push(next_zero_after(p, from)?);
        }
        levels.push(zeros);
    }
    Ok(levels)
}

/// First `count` positive zeros of `J_p`.
pub fn bessel_zeros<T: Real>(p: usize, count: usize) -> Result<Vec<T>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // J_0 needs count + p zeros so that every level keeps enough brackets.
    let mut zeros = Vec::with_capacity(count + p);
    let mut x = T::zero();
    while zeros.len() < count + p {
        let z = next_zero_after(0, x)?;
        zeros.push(z);
        x = z + T::lit(1e-3);
    }
    for nu in 1..=p {
        zeros = zeros
            .windows(2)
            .map(|w| refine_zero(nu, w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
    }
    zeros.truncate(count);
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent library implementation.
    const J_TABLE: &[(usize, f64, f64)] = &[
        (0, 1.0, 0.765_197_686_557_966_6),
        (0, 10.0, -0.245_935_764_451_348_32),
        (1, 2.5, 0.497_094_102_464_274_1),
        (3, 10.0, 0.058_379_379_305_186_67),
        (5, 0.5, 8.053_627_241_357_477e-6),
        (10, 30.0, -0.129_876_893_998_588_7),
        (50, 60.0, -0.137_982_731_485_352_3),
        (100, 120.0, 0.075_737_179_130_012_14),
        (20, 200.0, 0.037_450_938_710_860_04),
        (100, 200.0, 0.009_333_214_186_555_177),
        (30, 5.0, 2.671_177_278_250_813_6e-21),
    ];

    #[test]
    fn matches_reference_values() {
        for &(p, x, want) in J_TABLE {
            let got = bessel_j(p, x).unwrap().value;
            assert!(
                (got - want).abs() < 1e-12 + 1e-10 * want.abs(),
                "J_{}({}) = {} vs {}",
                p,
                x,
                got,
                want
            );
        }
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0, 0.0f64).unwrap().value, 1.0);
        assert_eq!(bessel_j(1, 0.0f64).unwrap().value, 0.0);
        assert_eq!(bessel_j(1, 0.0f64).unwrap().derivative, 0.5);
    }

    #[test]
    fn bessel_ode_residual() {
        let (p, x) = (3usize, 10.0f64);
        let h = 1e-4;
        let j = |x: f64| bessel_j(p, x).unwrap();
        let jpp = (j(x + h).derivative - j(x - h).derivative) / (2.0 * h);
        let r = x * x * jpp + x * j(x).derivative + (x * x - (p * p) as f64) * j(x).value;
        assert!(r.abs() < 1e-7, "residual {}", r);
    }

    #[test]
    fn recurrence_closure_on_grid() {
        for p in [0usize, 1, 4, 17, 60] {
            for i in 1..80 {
                let x = 0.37 * i as f64 + 0.05;
                let a = bessel_j(p, x).unwrap();
                let b = bessel_j(p + 1, x).unwrap();
                let lhs = b.value;
                let rhs = p as f64 / x * a.value - a.derivative;
                assert!((lhs - rhs).abs() < 1e-11);
                assert!((a.next - b.value).abs() < 1e-12, "p={} x={}", p, x);
            }
        }
    }

    #[test]
    fn extreme_arguments_are_rejected() {
        assert!(matches!(bessel_j(2, 1e7f64), Err(Error::Overflow { .. })));
        assert!(bessel_j(2, -1.0f64).is_err());
    }

    #[test]
    fn single_precision_is_usable() {
        let j = bessel_j(1, 2.5f32).unwrap().value;
        assert!((j - 0.497_094_1).abs() < 1e-5);
    }

    #[test]
    fn known_zeros() {
        let z1 = bessel_zeros::<f64>(1, 2).unwrap();
        assert!((z1[0] - 3.831_705_970_207_512).abs() < 1e-10);
        assert!((z1[1] - 7.015_586_669_815_619).abs() < 1e-10);
        let z2 = bessel_zeros::<f64>(2, 1).unwrap();
        assert!((z2[0] - 5.135_622_301_840_683).abs() < 1e-10);
        assert!(bessel_j(1, z1[0]).unwrap().value.abs() < 1e-9);
        let z0 = bessel_zeros::<f64>(0, 3).unwrap();
        assert!((z0[2] - 8.653_727_912_911_013).abs() < 1e-10);
    }

    #[test]
    fn chain_interlaces() {
        let chain = zero_chain::<f64>(12, 40.0).unwrap();
        for p in 0..12 {
            let (a, b) = (&chain[p], &chain[p + 1]);
            assert!(*a.last().unwrap() > 40.0 && a[a.len() - 2] <= 40.0 || a.len() == 1);
            for k in 0..b.len().min(a.len() - 1) {
                assert!(a[k] < b[k] && b[k] < a[k + 1], "p={} k={}", p, k);
            }
        }
        let direct = bessel_zeros::<f64>(7, chain[7].len()).unwrap();
        for (x, y) in chain[7].iter().zip(&direct) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn modified_bessel_reference() {
        let (i, di) = bessel_i(10.0f64, 10.0);
        assert!((i / 21.891_706_163_723_374 - 1.0).abs() < 1e-13);
        let (i9, _) = bessel_i(9.0f64, 10.0);
        assert!((di - (i9 - i)).abs() < 1e-9 * di);
        assert!((bessel_i(0.0f64, 1.0).0 - 1.266_065_877_752_008_4).abs() < 1e-14);
    }
}
