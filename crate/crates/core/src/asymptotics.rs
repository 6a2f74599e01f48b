//! Small-`t` coefficients of heat traces.
//!
//! Numerically, sampled traces are fitted on the basis `t^{(k-m)/2}` (zeta
//! kind) or `t^{(k-m-1)/2}` (eta kind). Analytically, the two leading terms
//! `B_0(s)`, `B_{-1}(s)` of the ball eta function are written through
//! Barnes zeta functions, and their residues give `a_2^eta`, `a_3^eta`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{check_dimension, enumerate_spectrum, heat_trace, BallConfig, BallSpectrum, TraceKind, TraceOptions};
use crate::barnes::{barnes_partial, barnes_residue, BarnesSpec};
use crate::exact::{factorial, gamma_half, q, qi};
use crate::report::{round15, ExactValue};
use crate::specfun::gamma;
use crate::{Error, PiQ, Real, Result, Q};

/// Largest number of basis functions accepted by [`fit_heat_expansion`].
pub const MAX_TERMS: usize = 6;

/// Default fit window and sample count.
pub const DEFAULT_WINDOW: (f64, f64) = (0.02, 0.2);
pub const DEFAULT_SAMPLES: usize = 40;

/// Window and cutoff at which the five-term fit reaches the target accuracy
/// at m = 4. On [`DEFAULT_WINDOW`] the omitted terms of order `t^{1/2}` and
/// beyond still bias the eta coefficients by tens of percent.
pub const REFINED_WINDOW: (f64, f64) = (0.001, 0.01);
pub const REFINED_MU_MAX: f64 = 300.0;

/// Largest admissible ratio of tail bound to sampled value in the
/// brute-force routes.
pub const REL_TAIL_TOL: f64 = 1e-10;

fn unchecked<T: Real>() -> TraceOptions<T> {
    TraceOptions {
        shift: T::zero(),
        tol: T::infinity(),
    }
}

/// Largest `tail_bound / |value|` over the samples; fails above [`REL_TAIL_TOL`].
fn check_relative_tail(cfg: &BallConfig<f64>, kind: TraceKind, samples: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(t, v) in samples {
        let bound = crate::ball::heat_tail_bound(cfg.m, cfg.mu_max, t, kind, 0.0);
        let rel = if v != 0.0 { bound / v.abs() } else { bound };
        worst = worst.max(rel);
    }
    if !(worst <= REL_TAIL_TOL) {
        return Err(Error::TailBound {
            bound: worst,
            tol: REL_TAIL_TOL,
        });
    }
    Ok(worst)
}

/// Fitted coefficients of half-integer powers of `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticFit<T> {
    pub m: usize,
    pub kind: TraceKind,
    /// Exponent of `t` multiplying each coefficient.
    pub powers: Vec<T>,
    /// `a_0, a_1, ...` in the order of `powers`.
    pub coefficients: Vec<T>,
    pub window: (T, T),
    pub samples: usize,
    /// Largest relative deviation of the fitted expansion from a sample.
    pub residual: T,
    /// Condition number of the column-scaled weighted design matrix.
    pub condition: T,
}

impl<T: Real> AsymptoticFit<T> {
    pub fn coefficient(&self, n: usize) -> Option<T> {
        self.coefficients.get(n).copied()
    }

    pub fn eval(&self, t: T) -> T {
        self.powers
            .iter()
            .zip(&self.coefficients)
            .fold(T::zero(), |acc, (&p, &c)| acc + c * t.powf(p))
    }
}

/// Fit settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Windows whose design matrix is worse conditioned than this are refused.
    pub condition_limit: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { condition_limit: 1e10 }
    }
}

/// Exponent of `t` carried by `a_k` for the given kind.
pub fn basis_power(m: usize, kind: TraceKind, k: usize) -> f64 {
    match kind {
        TraceKind::Zeta => (k as f64 - m as f64) / 2.0,
        TraceKind::Eta => (k as f64 - m as f64 - 1.0) / 2.0,
    }
}

/// Weighted least squares on the basis `t^{(k-m)/2}` or `t^{(k-m-1)/2}`,
/// `k = 0..n_terms`.
///
/// Rows are weighted by `1/|value|` so that every sample counts by its
/// relative error (rows with value 0 keep weight 1). Columns are scaled to
/// unit norm before the SVD.
pub fn fit_heat_expansion<T: Real>(
    samples: &[(T, T)],
    m: usize,
    kind: TraceKind,
    n_terms: usize,
    opts: FitOptions,
) -> Result<AsymptoticFit<T>> {
    if n_terms == 0 || n_terms > MAX_TERMS {
        return Err(Error::Domain(format!(
            "n_terms must lie in 1..={}, got {}",
            MAX_TERMS, n_terms
        )));
    }
    if samples.len() < n_terms {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            need: n_terms,
        });
    }
    if samples.iter().any(|&(t, v)| !(t > T::zero()) || !v.is_finite()) {
        return Err(Error::Domain("samples need t > 0 and finite values".into()));
    }
    let powers: Vec<f64> = (0..n_terms).map(|k| basis_power(m, kind, k)).collect();
    let rows = samples.len();
    let mut a = DMatrix::<f64>::zeros(rows, n_terms);
    let mut b = DVector::<f64>::zeros(rows);
    for (i, &(t, v)) in samples.iter().enumerate() {
        let (t, v) = (t.to_f64_lossy(), v.to_f64_lossy());
        let w = if v != 0.0 { 1.0 / v.abs() } else { 1.0 };
        for (j, p) in powers.iter().enumerate() {
            a[(i, j)] = w * t.powf(*p);
        }
        b[i] = w * v;
    }
    let scale: Vec<f64> = (0..n_terms).map(|j| a.column(j).norm()).collect();
    let mut scaled = a.clone();
    for (j, s) in scale.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = scaled.svd(true, true);
    let sv = &svd.singular_values;
    let (max, min) = (sv.max(), sv.min());
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition <= opts.condition_limit) {
        return Err(Error::IllConditioned {
            cond: condition,
            limit: opts.condition_limit,
        });
    }
    let y = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::Domain(format!("least squares failed: {}", e)))?;
    let x: Vec<f64> = y.iter().zip(&scale).map(|(v, s)| v / s).collect();
    let fitted = &a * DVector::from_vec(x.clone());
    let residual = (0..rows).map(|i| (fitted[i] - b[i]).abs()).fold(0.0f64, f64::max);
    let (t0, t1) = samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(t, _)| {
        let t = t.to_f64_lossy();
        (lo.min(t), hi.max(t))
    });
    Ok(AsymptoticFit {
        m,
        kind,
        powers: powers.into_iter().map(T::lit).collect(),
        coefficients: x.into_iter().map(T::lit).collect(),
        window: (T::lit(t0), T::lit(t1)),
        samples: rows,
        residual: T::lit(residual),
        condition: T::lit(condition),
    })
}

/// `n` logarithmically spaced points from `t_min` to `t_max`.
pub fn log_window<T: Real>(t_min: T, t_max: T, n: usize) -> Result<Vec<T>> {
    if !(t_min > T::zero()) || !(t_max > t_min) || n < 2 {
        return Err(Error::Domain(format!(
            "window needs 0 < t_min < t_max and at least 2 samples, got [{}, {}] with {}",
            t_min, t_max, n
        )));
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let step = (b - a) / T::count(n - 1);
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                t_max
            } else {
                (a + step * T::count(i)).exp()
            }
        })
        .collect())
}

/// Heat trace at every `t`, in parallel; order follows `ts`.
pub fn sample_heat_trace<T: Real>(
    spectrum: &BallSpectrum<T>,
    kind: TraceKind,
    ts: &[T],
    opts: TraceOptions<T>,
) -> Result<Vec<(T, T)>> {
    ts.par_iter()
        .map(|&t| heat_trace(spectrum, t, kind, opts).map(|v| (t, v.value)))
        .collect()
}

/// `(trace(+eps) - trace(-eps)) / 2`, the part of the eta trace odd in `eps`.
pub fn antisymmetrized_eta<T: Real>(
    plus: &BallSpectrum<T>,
    minus: &BallSpectrum<T>,
    ts: &[T],
    opts: TraceOptions<T>,
) -> Result<Vec<(T, T)>> {
    let a = sample_heat_trace(plus, TraceKind::Eta, ts, opts)?;
    let b = sample_heat_trace(minus, TraceKind::Eta, ts, opts)?;
    Ok(a.into_iter()
        .zip(b)
        .map(|((t, x), (_, y))| (t, (x - y) / T::lit(2.0)))
        .collect())
}

/// Window and basis size for the brute-force routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub n_terms: usize,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self {
            t_min: DEFAULT_WINDOW.0,
            t_max: DEFAULT_WINDOW.1,
            samples: DEFAULT_SAMPLES,
            n_terms: 5,
        }
    }
}

impl FitWindow {
    /// [`REFINED_WINDOW`] with the default sample count and five terms.
    pub fn refined() -> Self {
        Self {
            t_min: REFINED_WINDOW.0,
            t_max: REFINED_WINDOW.1,
            ..Self::default()
        }
    }
}

/// Eta coefficients per unit `epsilon` extracted from enumerated spectra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceEta {
    pub m: usize,
    pub epsilon: f64,
    pub mu_max: f64,
    pub fit: AsymptoticFit<f64>,
    pub a2_over_eps: f64,
    pub a3_over_eps: f64,
    /// Largest ratio of tail bound to sampled value.
    pub tail_bound: f64,
}

/// Enumerates the spectra at `+eps` and `-eps`, antisymmetrizes the eta
/// trace and fits it.
pub fn brute_force_eta(m: usize, epsilon: f64, mu_max: f64, window: FitWindow) -> Result<BruteForceEta> {
    if epsilon == 0.0 {
        return Err(Error::Domain("brute-force eta route needs epsilon != 0".into()));
    }
    let plus = enumerate_spectrum(&BallConfig::with_auto_n_max(m, epsilon, mu_max)?)?;
    let minus = enumerate_spectrum(&BallConfig::with_auto_n_max(m, -epsilon, mu_max)?)?;
    brute_force_eta_from(&plus, &minus, window)
}

/// As [`brute_force_eta`] on spectra enumerated by the caller.
pub fn brute_force_eta_from(
    plus: &BallSpectrum<f64>,
    minus: &BallSpectrum<f64>,
    window: FitWindow,
) -> Result<BruteForceEta> {
    let cfg = plus.config;
    let ts = log_window(window.t_min, window.t_max, window.samples)?;
    let samples = antisymmetrized_eta(plus, minus, &ts, unchecked())?;
    // Each trace is off by at most the bound, so their half-difference is too.
    let tail_bound = check_relative_tail(&cfg, TraceKind::Eta, &samples)?;
    let fit = fit_heat_expansion(&samples, cfg.m, TraceKind::Eta, window.n_terms, FitOptions::default())?;
    let eps = cfg.epsilon;
    Ok(BruteForceEta {
        m: cfg.m,
        epsilon: eps,
        mu_max: cfg.mu_max,
        a2_over_eps: fit.coefficient(2).unwrap_or(f64::NAN) / eps,
        a3_over_eps: fit.coefficient(3).unwrap_or(f64::NAN) / eps,
        fit,
        tail_bound,
    })
}

/// Zeta coefficients extracted from the spectrum at `epsilon = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceZeta {
    pub m: usize,
    pub mu_max: f64,
    pub fit: AsymptoticFit<f64>,
    /// Largest ratio of tail bound to sampled value.
    pub tail_bound: f64,
}

pub fn brute_force_zeta(m: usize, mu_max: f64, window: FitWindow) -> Result<BruteForceZeta> {
    let spectrum = enumerate_spectrum(&BallConfig::with_auto_n_max(m, 0.0, mu_max)?)?;
    brute_force_zeta_from(&spectrum, window)
}

pub fn brute_force_zeta_from(spectrum: &BallSpectrum<f64>, window: FitWindow) -> Result<BruteForceZeta> {
    let cfg = spectrum.config;
    let ts = log_window(window.t_min, window.t_max, window.samples)?;
    let samples = sample_heat_trace(spectrum, TraceKind::Zeta, &ts, unchecked())?;
    let tail_bound = check_relative_tail(&cfg, TraceKind::Zeta, &samples)?;
    let fit = fit_heat_expansion(&samples, cfg.m, TraceKind::Zeta, window.n_terms, FitOptions::default())?;
    Ok(BruteForceZeta {
        m: cfg.m,
        mu_max: cfg.mu_max,
        fit,
        tail_bound,
    })
}

/// Extrapolation of `r(eps) = A + B eps^2` to `eps = 0` from two values.
///
/// `a_n^eta` is odd in `epsilon`, so its ratio to `epsilon` is even and the
/// extrapolation is linear in `eps^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsExtrapolation {
    pub limit: f64,
    /// `max |r(eps_i) - limit| / |limit|`.
    pub spread: f64,
}

pub fn extrapolate_in_eps(e1: f64, r1: f64, e2: f64, r2: f64) -> Result<EpsExtrapolation> {
    let (s1, s2) = (e1 * e1, e2 * e2);
    if s1 == s2 {
        return Err(Error::Domain("extrapolation needs two distinct |epsilon|".into()));
    }
    let limit = (s2 * r1 - s1 * r2) / (s2 - s1);
    let spread = ((r1 - limit).abs()).max((r2 - limit).abs()) / limit.abs();
    Ok(EpsExtrapolation { limit, spread })
}

/// Central finite-difference check of
/// `d/dc Tr{(P+c) e^{-t(P+c)^2}} = (1 + 2 t d/dt) Tr{e^{-tP^2}}` at `c = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShiftCheck {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

pub fn shift_identity<T: Real>(spectrum: &BallSpectrum<T>, t: T) -> Result<ShiftCheck> {
    let hc = T::lit(1e-4);
    let ht = T::lit(1e-5) * t;
    let tr = |c: T, tt: T, kind| {
        heat_trace(
            spectrum,
            tt,
            kind,
            TraceOptions {
                shift: c,
                tol: T::lit(1e-10),
            },
        )
    };
    let two = T::lit(2.0);
    let lhs = (tr(hc, t, TraceKind::Eta)?.value - tr(-hc, t, TraceKind::Eta)?.value) / (two * hc);
    let dt =
        (tr(T::zero(), t + ht, TraceKind::Zeta)?.value - tr(T::zero(), t - ht, TraceKind::Zeta)?.value) / (two * ht);
    let rhs = tr(T::zero(), t, TraceKind::Zeta)?.value + two * t * dt;
    let (lhs, rhs) = (lhs.to_f64_lossy(), rhs.to_f64_lossy());
    Ok(ShiftCheck {
        t: t.to_f64_lossy(),
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.abs(),
    })
}

/// `B_0(s)` and `B_{-1}(s)` per unit `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BTerms {
    pub s: f64,
    pub b0: f64,
    pub bm1: f64,
    /// Bound on the error from truncating the Barnes sums.
    pub tail_bound: f64,
}

/// ```text
/// B_0(s)    = d_s/2 Gamma(1+s/2) / (sqrt(pi) Gamma((3+s)/2)) [zeta_B(s+1) - zeta_B(s+2)/2]
/// B_{-1}(s) = -s d_s/4 zeta_B(s+2)
/// ```
///
/// with `zeta_B(., m/2 - 1)` truncated after `n_barnes` terms.
pub fn b_terms(m: usize, s: f64, n_barnes: usize) -> Result<BTerms> {
    check_dimension(m)?;
    let d = m - 1;
    let a = (m as f64 - 2.0) / 2.0;
    let z1 = barnes_partial(d, a, s + 1.0, n_barnes)?;
    let z2 = barnes_partial(d, a, s + 2.0, n_barnes)?;
    let ds = (1u64 << (m / 2)) as f64;
    let pref = gamma(1.0 + s / 2.0) / (std::f64::consts::PI.sqrt() * gamma((3.0 + s) / 2.0));
    let b0 = 0.5 * ds * pref * (z1.value - 0.5 * z2.value);
    let bm1 = -0.25 * s * ds * z2.value;
    let tail_bound =
        0.5 * ds * pref.abs() * (z1.tail_bound + 0.5 * z2.tail_bound) + 0.25 * s.abs() * ds * z2.tail_bound;
    Ok(BTerms { s, b0, bm1, tail_bound })
}

/// Direct sums `sum_p d_p p^{-s} (1/p - 1/(2p^2))` and `sum_p d_p p^{-s} / (p + 1/2)`
/// over `p = n + m/2 - 1`, `n <= n_max`.
pub fn direct_b0_sums(m: usize, s: f64, n_max: usize) -> Result<(f64, f64)> {
    check_dimension(m)?;
    let a = (m as f64 - 2.0) / 2.0;
    let half_ds = (1u64 << (m / 2 - 1)) as f64;
    let mut binom = 1.0;
    let (mut two_orders, mut full) = (0.0, 0.0);
    for n in 0..=n_max {
        if n > 0 {
            binom = binom * (m + n - 2) as f64 / n as f64;
        }
        let p = n as f64 + a;
        let dp = half_ds * binom;
        two_orders += dp * p.powf(-s) * (1.0 / p - 0.5 / (p * p));
        full += dp * p.powf(-s) / (p + 0.5);
    }
    Ok((two_orders, full))
}

/// Residues of the ball eta function per unit `epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaResidueReport {
    pub m: usize,
    /// `Res B_0` at `s = m-2`.
    pub res_b0_top: PiQ,
    /// `Res B_0` at `s = m-3`.
    pub res_b0_next: PiQ,
    /// `Res B_{-1}` at `s = m-3`.
    pub res_bm1_next: PiQ,
    /// `Res eta(m-2)`.
    pub res_eta_top: PiQ,
    /// `Res eta(m-3)`.
    pub res_eta_next: PiQ,
    pub a2: PiQ,
    pub a3: PiQ,
}

/// `Gamma(1 + s/2) / (sqrt(pi) Gamma((3+s)/2))` at integer `s >= 0`.
fn b0_prefactor(s: u32) -> Result<PiQ> {
    gamma_half(s + 2)?.div(&(gamma_half(1)? * gamma_half(s + 3)?))
}

/// Exact residues from the Barnes residues with `d = m-1`, `a = m/2-1`.
///
/// `Res eta(m-2) = Res B_0(m-2)`, `Res eta(m-3) = Res B_0(m-3) + Res B_{-1}(m-3)`,
/// and `a_n^eta = Gamma((m-n+1)/2) Res eta(m-n) / 2`.
pub fn eta_residues(m: usize) -> Result<EtaResidueReport> {
    check_dimension(m)?;
    if m > 10 {
        return Err(Error::InvalidDimension {
            m,
            reason: "eta residues are tabulated for m <= 10",
        });
    }
    let spec = BarnesSpec::sphere(m)?;
    let (d, a) = (spec.d, spec.a);
    let half_ds = Q::from_integer((1u64 << (m / 2 - 1)).into());
    let r_top = barnes_residue(d, &a, d as i64)?;
    let r_next = barnes_residue(d, &a, d as i64 - 1)?;

    // zeta_B(s+1) has its pole at s = d-1 = m-2; zeta_B(s+2) is regular there.
    let res_b0_top = b0_prefactor(m as u32 - 2)?.scale_q(&(half_ds.clone() * r_top.clone()));
    // At s = m-3 both zeta_B(s+1) (z = d-1) and zeta_B(s+2) (z = d) contribute.
    let bracket = r_next - r_top.clone() / qi(2);
    let res_b0_next = b0_prefactor(m as u32 - 3)?.scale_q(&(half_ds * bracket));
    let ds = Q::from_integer((1u64 << (m / 2)).into());
    let res_bm1_next = PiQ::rational(-q(m as i64 - 3, 4) * ds * r_top);

    let res_eta_top = res_b0_top.clone();
    let res_eta_next = res_b0_next.clone() + res_bm1_next.clone();
    let a2 = (gamma_half(m as u32 - 1)? * res_eta_top.clone()).scale_q(&q(1, 2));
    let a3 = (gamma_half(m as u32 - 2)? * res_eta_next.clone()).scale_q(&q(1, 2));
    Ok(EtaResidueReport {
        m,
        res_b0_top,
        res_b0_next,
        res_bm1_next,
        res_eta_top,
        res_eta_next,
        a2,
        a3,
    })
}

/// Closed forms of the three residues, assembled from gamma values and
/// factorials only.
pub fn eta_residues_closed_form(m: usize) -> Result<(PiQ, PiQ, PiQ)> {
    check_dimension(m)?;
    let ds = Q::from_integer((1u64 << (m / 2)).into());
    let mm2 = Q::from_integer(factorial(m as u64 - 2));
    let sqrt_pi = gamma_half(1)?;
    let top = gamma_half(m as u32)?
        .scale_q(&(ds.clone() / (qi(2) * mm2.clone())))
        .div(&(sqrt_pi.clone() * gamma_half(m as u32 + 1)?))?;
    let next = gamma_half(m as u32 - 1)?
        .scale_q(&(ds.clone() * qi(m as i64 - 3) / (qi(4) * mm2.clone())))
        .div(&(sqrt_pi * gamma_half(m as u32)?))?;
    let bm1 = PiQ::rational(-(ds * qi(m as i64 - 3)) / (qi(4) * mm2));
    Ok((top, next, bm1))
}

/// JSON form of [`EtaResidueReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaResidueJson {
    pub m: usize,
    pub res_b0_m_minus_2: ExactValue,
    pub res_b0_m_minus_3: ExactValue,
    pub res_bm1_m_minus_3: ExactValue,
    pub res_eta_m_minus_2: ExactValue,
    pub res_eta_m_minus_3: ExactValue,
    pub a2_eta_per_eps: ExactValue,
    pub a3_eta_per_eps: ExactValue,
}

impl EtaResidueReport {
    /// `Res eta(m-2)` and `Res eta(m-3)` as exact strings.
    pub fn to_string_pair(&self) -> (String, String) {
        (self.res_eta_top.to_string(), self.res_eta_next.to_string())
    }

    pub fn to_json(&self) -> EtaResidueJson {
        EtaResidueJson {
            m: self.m,
            res_b0_m_minus_2: ExactValue::from_pi(&self.res_b0_top),
            res_b0_m_minus_3: ExactValue::from_pi(&self.res_b0_next),
            res_bm1_m_minus_3: ExactValue::from_pi(&self.res_bm1_next),
            res_eta_m_minus_2: ExactValue::from_pi(&self.res_eta_top),
            res_eta_m_minus_3: ExactValue::from_pi(&self.res_eta_next),
            a2_eta_per_eps: ExactValue::from_pi(&self.a2),
            a3_eta_per_eps: ExactValue::from_pi(&self.a3),
        }
    }
}

/// JSON form of a fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub m: usize,
    pub kind: TraceKind,
    pub basis: Vec<String>,
    pub coefficients: Vec<f64>,
    pub window: (f64, f64),
    pub samples: usize,
    pub residual: f64,
    pub condition: f64,
    pub tail_bound: f64,
}

impl FitReport {
    pub fn new(fit: &AsymptoticFit<f64>, tail_bound: f64) -> Self {
        Self {
            m: fit.m,
            kind: fit.kind,
            basis: fit.powers.iter().map(|p| format!("t^({})", fmt_half(*p))).collect(),
            coefficients: fit.coefficients.iter().map(|c| round15(*c)).collect(),
            window: (round15(fit.window.0), round15(fit.window.1)),
            samples: fit.samples,
            residual: round15(fit.residual),
            condition: round15(fit.condition),
            tail_bound: round15(tail_bound),
        }
    }
}

fn fmt_half(p: f64) -> String {
    let twice = (2.0 * p).round() as i64;
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{}/2", twice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn synthetic_round_trip() {
        let b = [0.125, -0.255, 0.3, 0.07, -0.02];
        let ts = log_window(0.02f64, 0.2, 40).unwrap();
        let samples: Vec<_> = ts
            .iter()
            .map(|&t| {
                let v = b
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * t.powf((k as f64 - 4.0) / 2.0))
                    .sum();
                (t, v)
            })
            .collect();
        let fit = fit_heat_expansion(&samples, 4, TraceKind::Zeta, 5, FitOptions::default()).unwrap();
        for (c, e) in fit.coefficients.iter().zip(&b) {
            assert!((c - e).abs() < 1e-8, "{} vs {}", c, e);
        }
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.powers[0], -2.0);
        let (t, v) = samples[20];
        assert!((fit.eval(t) - v).abs() < 1e-9 * v.abs());
    }

    #[test]
    fn fit_rejects_bad_input() {
        let s = [(0.1f64, 1.0), (0.2, 2.0)];
        assert!(matches!(
            fit_heat_expansion(&s, 4, TraceKind::Zeta, 3, FitOptions::default()),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(fit_heat_expansion(&s, 4, TraceKind::Zeta, 7, FitOptions::default()).is_err());
        let ts = log_window(0.1f64, 0.100001, 10).unwrap();
        let s: Vec<_> = ts.iter().map(|&t| (t, 1.0 / (t * t))).collect();
        assert!(matches!(
            fit_heat_expansion(&s, 4, TraceKind::Zeta, 5, FitOptions::default()),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn symmetric_spectrum_has_no_eta_coefficients() {
        let spec = enumerate_spectrum(&BallConfig::with_auto_n_max(4, 0.0, 60.0).unwrap()).unwrap();
        let ts = log_window(0.02, 0.2, 40).unwrap();
        let s = sample_heat_trace(&spec, TraceKind::Eta, &ts, TraceOptions::default()).unwrap();
        let fit = fit_heat_expansion(&s, 4, TraceKind::Eta, 5, FitOptions::default()).unwrap();
        assert!(fit.coefficients.iter().all(|c: &f64| c.abs() < 1e-10));
    }

    #[test]
    fn zeta_leading_coefficient() {
        let z = brute_force_zeta(4, 60.0, FitWindow::default()).unwrap();
        let a0 = z.fit.coefficients[0];
        // (4 pi)^{-2} vol(B^4) d_s = pi^2/2 * 4 / (16 pi^2) = 1/8
        assert!((a0 - 0.125).abs() < 0.01, "{}", a0);
    }

    #[test]
    fn prefactor_at_top_pole_is_beta() {
        for m in [4usize, 6, 8, 10] {
            assert_eq!(
                b0_prefactor(m as u32 - 2).unwrap(),
                crate::exact::beta_exact(m).unwrap()
            );
        }
    }

    #[test]
    fn b_terms_against_direct_sums() {
        for m in [4usize, 6] {
            let s = m as f64;
            let t = b_terms(m, s, 20_000).unwrap();
            let (two, full) = direct_b0_sums(m, s, 20_000).unwrap();
            let pref = gamma(1.0 + s / 2.0) / (PI.sqrt() * gamma((3.0 + s) / 2.0));
            assert!((t.b0 - pref * two).abs() < 1e-6, "{} vs {}", t.b0, pref * two);
            assert!(t.tail_bound < 1e-6);
            // The two retained orders differ from the full (p+1/2)^{-1} at O(p^{-s-3}).
            assert!((two - full).abs() > 1e-6);
            assert!(t.bm1 < 0.0);
        }
        assert!(matches!(b_terms(4, 1.5, 100), Err(Error::Convergence { .. })));
    }

    #[test]
    fn residues_at_m4() {
        let r = eta_residues(4).unwrap();
        assert_eq!(r.res_b0_top, PiQ::monomial(q(4, 3), -2));
        assert_eq!(r.res_b0_next, PiQ::rational(q(1, 4)));
        assert_eq!(r.res_bm1_next, PiQ::rational(q(-1, 2)));
        assert_eq!(r.res_eta_next, PiQ::rational(q(-1, 4)));
        assert_eq!(r.a2, PiQ::monomial(q(1, 3), -1));
        assert_eq!(r.a3, PiQ::rational(q(-1, 8)));
        assert_eq!(r.to_string_pair(), ("4/3*pi^-1".to_string(), "-1/4".to_string()));
    }

    #[test]
    fn residues_match_closed_forms() {
        for m in [4usize, 6, 8, 10] {
            let r = eta_residues(m).unwrap();
            let (top, next, bm1) = eta_residues_closed_form(m).unwrap();
            assert_eq!(r.res_b0_top, top);
            assert_eq!(r.res_b0_next, next);
            assert_eq!(r.res_bm1_next, bm1);
        }
        assert!(eta_residues(5).is_err());
        assert!(eta_residues(12).is_err());
    }

    #[test]
    fn eps_extrapolation() {
        let r = |e: f64| 0.2 + 3.0 * e * e;
        let x = extrapolate_in_eps(0.02, r(0.02), 0.04, r(0.04)).unwrap();
        assert!((x.limit - 0.2).abs() < 1e-14);
        assert!(extrapolate_in_eps(0.02, 1.0, -0.02, 1.0).is_err());
    }

    #[test]
    fn fit_report_basis_labels() {
        assert_eq!(fmt_half(-2.5), "-5/2");
        assert_eq!(fmt_half(-2.0), "-2");
    }
}
