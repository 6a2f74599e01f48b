use crate::{Error, Real, Result};

/// Stopping rules for [`find_root`].
#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Bracket width at which the iteration stops.
    pub xtol: f64,
    /// Residual `|f(x)|` at which the iteration stops.
    pub ftol: f64,
    /// Bisection steps before Newton is tried.
    pub bisect_steps: usize,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            xtol: 1e-13,
            ftol: 1e-12,
            bisect_steps: 4,
            max_iter: 200,
        }
    }
}

/// Safeguarded Newton iteration on a sign-changing bracket `[a, b]`.
///
/// `f` returns `(value, derivative)`. A few bisection steps shrink the
/// bracket first; Newton steps that leave the bracket or fail to halve the
/// step fall back to bisection.
pub fn find_root<T: Real, F: FnMut(T) -> (T, T)>(mut f: F, a: T, b: T, opts: RootOptions) -> Result<T> {
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NotBracketed {
            a: lo.to_f64_lossy(),
            b: hi.to_f64_lossy(),
        });
    }
    // Orient so that f(lo) < 0.
    let flip = flo > T::zero();
    let mut g = |x: T| {
        let (v, d) = f(x);
        if flip {
            (-v, -d)
        } else {
            (v, d)
        }
    };
    let two = T::lit(2.0);
    let xtol = T::lit(opts.xtol);
    let ftol = T::lit(opts.ftol);

    let mut x = (lo + hi) / two;
    let (mut fx, mut dfx) = g(x);
    let mut dx_old = hi - lo;
    for it in 0..opts.max_iter {
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let width = hi - lo;
        if width <= xtol * T::one().max(x.abs()) {
            return Ok(x);
        }
        let newton = if it >= opts.bisect_steps && dfx != T::zero() {
            let xn = x - fx / dfx;
            let step = (xn - x).abs();
            (xn > lo && xn < hi && step * two < dx_old.abs()).then_some(xn)
        } else {
            None
        };
        let xn = newton.unwrap_or((lo + hi) / two);
        dx_old = xn - x;
        if dx_old.abs() <= T::epsilon() * x.abs() {
            return Ok(xn);
        }
        x = xn;
        let (v, d) = g(x);
        fx = v;
        dfx = d;
    }
    Ok(x)
}
