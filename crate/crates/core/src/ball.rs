//! Spectrum of the Dirac operator on the unit ball `B^m` under spectral
//! boundary conditions with `psi_A = epsilon gamma_m + (m-1)/2 Id`.
//!
//! Each mode family `n` on the boundary sphere has `lambda_n = n + (m-1)/2`
//! and Bessel order `p = lambda_n - 1/2`. Positive eigenvalues of `P_A` are
//! the roots of `F_+(mu) = J_p(mu) - kappa J_{p+1}(mu)`, negative ones are
//! `-mu` for the roots of `F_-(mu) = J_p(mu) + kappa J_{p+1}(mu)`, with
//! `kappa = epsilon / (sqrt(lambda_n^2 - epsilon^2) + lambda_n)`. Both
//! eigenspinor families give the same scalar condition, so every root
//! carries weight `2 d_n(m)`.
//!
//! Root location uses two facts. For `x <= p + 1/2` one has
//! `J_{p+1}(x) / J_p(x) < 1`, and `|kappa| < 1`, so `F_+-` has no zeros
//! there. For `x > p + 1/2` the ratio `J_p / J_{p+1}` is strictly decreasing
//! between zeros of `J_{p+1}`. Hence `F_+-` has at most one zero between
//! consecutive zeros of `J_{p+1}`. Brackets come from consecutive zeros of
//! `J_p`, where `F_+-` takes the alternating values `-+kappa J_{p+1}`.

use std::io::Write;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::barnes::{sphere_degeneracy, PartialSum};
use crate::report::round15;
use crate::specfun::{bessel_j, find_root, zero_chain, RootOptions};
use crate::{Error, Real, Result};

/// Spacing of the sign-change audit grid.
const AUDIT_STEP: f64 = 0.5;

/// Sign of the eigenvalues produced by a branch of the eigenvalue condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

/// Which heat trace or spectral sum to form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Zeta,
    Eta,
}

pub(crate) fn check_dimension(m: usize) -> Result<()> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::InvalidDimension {
            m,
            reason: "m must be even and >= 4",
        });
    }
    if m > 20 {
        return Err(Error::InvalidDimension {
            m,
            reason: "ball spectra are limited to m <= 20",
        });
    }
    Ok(())
}

fn check_epsilon(m: usize, epsilon: f64) -> Result<()> {
    let bound = (m as f64 - 1.0) / 2.0;
    if !epsilon.is_finite() || epsilon.abs() >= bound {
        return Err(Error::EpsilonOutOfRange { m, epsilon });
    }
    Ok(())
}

/// Dimension, boundary parameter and truncation of a ball computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BallConfig<T> {
    pub m: usize,
    pub epsilon: T,
    pub mu_max: T,
    pub n_max: usize,
}

impl<T: Real> BallConfig<T> {
    pub fn new(m: usize, epsilon: T, mu_max: T, n_max: usize) -> Result<Self> {
        check_dimension(m)?;
        check_epsilon(m, epsilon.to_f64_lossy())?;
        if !(mu_max > T::zero()) || !mu_max.is_finite() {
            return Err(Error::Domain(format!("mu_max must be positive, got {}", mu_max)));
        }
        Ok(Self {
            m,
            epsilon,
            mu_max,
            n_max,
        })
    }

    /// Uses [`BallConfig::sufficient_n_max`].
    pub fn with_auto_n_max(m: usize, epsilon: T, mu_max: T) -> Result<Self> {
        check_dimension(m)?;
        let n_max = Self::sufficient_n_max(m, mu_max);
        Self::new(m, epsilon, mu_max, n_max)
    }

    /// Largest `n` with `p_n + 1/2 < mu_max`; every later family has no
    /// eigenvalue below `mu_max`.
    pub fn sufficient_n_max(m: usize, mu_max: T) -> usize {
        let offset = (m - 2) / 2;
        let bound = (mu_max - T::lit(0.5)).to_f64_lossy();
        let mut n = 0usize;
        while ((n + 1 + offset) as f64) < bound {
            n += 1;
        }
        n
    }

    /// Bessel order `p_n = n + (m-2)/2`.
    pub fn order(&self, n: usize) -> usize {
        n + (self.m - 2) / 2
    }

    pub fn to_f64(&self) -> BallConfig<f64> {
        BallConfig {
            m: self.m,
            epsilon: self.epsilon.to_f64_lossy(),
            mu_max: self.mu_max.to_f64_lossy(),
            n_max: self.n_max,
        }
    }
}

/// Data shared by all eigenvalues built on one sphere mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeFamily<T> {
    pub n: usize,
    pub p: usize,
    pub lambda: T,
    /// `d_n(m) = d_s/2 * binom(m+n-2, n)`.
    pub degeneracy: u64,
    /// `2 d_n(m)`.
    pub weight: u64,
    pub kappa: T,
    /// `sqrt(lambda_n^2 - epsilon^2)`, the eigenvalue of the boundary operator.
    pub boundary_eigenvalue: T,
}

pub fn mode_family<T: Real>(m: usize, n: usize, epsilon: T) -> Result<ModeFamily<T>> {
    check_dimension(m)?;
    check_epsilon(m, epsilon.to_f64_lossy())?;
    let p = n + (m - 2) / 2;
    let lambda = T::count(p) + T::lit(0.5);
    let degeneracy = sphere_degeneracy(m, n)
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("degeneracy of family {} overflows u64", n)))?;
    let root = (lambda * lambda - epsilon * epsilon).sqrt();
    Ok(ModeFamily {
        n,
        p,
        lambda,
        degeneracy,
        weight: 2 * degeneracy,
        kappa: epsilon / (root + lambda),
        boundary_eigenvalue: root,
    })
}

impl<T: Real> ModeFamily<T> {
    fn signed_kappa(&self, branch: Branch) -> T {
        match branch {
            Branch::Plus => self.kappa,
            Branch::Minus => -self.kappa,
        }
    }

    /// `F(mu)` and `F'(mu)` for the given branch.
    fn condition(&self, branch: Branch, mu: T) -> Result<(T, T)> {
        let k = self.signed_kappa(branch);
        let j = bessel_j(self.p, mu)?;
        // J_{p+1}' = J_p - (p+1)/x J_{p+1}
        let dnext = j.value - T::count(self.p + 1) / mu * j.next;
        Ok((j.value - k * j.next, j.derivative - k * dnext))
    }

    pub fn weight_t(&self) -> T {
        T::from_u64(self.weight).expect("weight fits")
    }
}

/// `F_+-(mu) = J_p(mu) -+ kappa J_{p+1}(mu)`.
pub fn eigencondition<T: Real>(family: &ModeFamily<T>, branch: Branch, mu: T) -> Result<T> {
    if !(mu > T::zero()) {
        return Err(Error::Domain(format!("eigencondition needs mu > 0, got {}", mu)));
    }
    Ok(family.condition(branch, mu)?.0)
}

/// Roots of both branches for one family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpectrum<T> {
    pub family: ModeFamily<T>,
    pub pos_roots: Vec<T>,
    pub neg_roots: Vec<T>,
}

impl<T> FamilySpectrum<T> {
    pub fn roots(&self, branch: Branch) -> &[T] {
        match branch {
            Branch::Plus => &self.pos_roots,
            Branch::Minus => &self.neg_roots,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pos_roots.is_empty() && self.neg_roots.is_empty()
    }
}

/// All eigenvalues of `P_A` with `|mu| <= mu_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallSpectrum<T> {
    pub config: BallConfig<T>,
    pub families: Vec<FamilySpectrum<T>>,
    /// Signed eigenvalues with weights, ascending in `|mu|`.
    sorted: Vec<(T, T)>,
}

impl<T: Real> BallSpectrum<T> {
    fn new(config: BallConfig<T>, families: Vec<FamilySpectrum<T>>) -> Self {
        let mut sorted: Vec<(T, T)> = families
            .iter()
            .flat_map(|f| {
                let w = f.family.weight_t();
                f.pos_roots
                    .iter()
                    .map(move |&r| (r, w))
                    .chain(f.neg_roots.iter().map(move |&r| (-r, w)))
            })
            .collect();
        sorted.sort_by(|a, b| {
            a.0.abs()
                .partial_cmp(&b.0.abs())
                .expect("finite roots")
                .then(a.0.partial_cmp(&b.0).expect("finite roots"))
        });
        Self {
            config,
            families,
            sorted,
        }
    }

    /// Signed eigenvalues and weights in ascending `|mu|`.
    pub fn eigenvalues(&self) -> &[(T, T)] {
        &self.sorted
    }

    /// Weighted number of eigenvalues with `|mu| <= r`.
    pub fn count_below(&self, r: T) -> T {
        self.sorted
            .iter()
            .take_while(|(mu, _)| mu.abs() <= r)
            .fold(T::zero(), |acc, &(_, w)| acc + w)
    }

    /// Constant `C` with weighted count `N(mu) <= C mu^m` for every
    /// `mu >= r`, `r > 0`.
    ///
    /// Each branch of family `n` has at most `mu/pi + 2` roots below `mu`
    /// (zeros of `J_{p+1}` are more than `pi` apart), and only families with
    /// `n < mu` contribute. Summing `2 d_n` over those families gives
    /// `N(mu) <= 2 d_s (mu+m-1)^{m-1} (mu/pi + 2) / (m-1)!`.
    pub fn counting_constant(&self, r: T) -> T {
        counting_constant(self.config.m, r)
    }
}

pub(crate) fn counting_constant<T: Real>(m: usize, r: T) -> T {
    let ds = T::count(1usize << (m / 2));
    let fact = (1..m).fold(T::one(), |acc, j| acc * T::count(j));
    let a = T::lit(2.0) * ds / fact;
    let c = (T::one() + T::count(m - 1) / r).powi(m as i32 - 1);
    a * c * (T::FRAC_1_PI() + T::lit(2.0) / r)
}

fn branch_roots<T: Real>(family: &ModeFamily<T>, branch: Branch, zeros_p: &[T], mu_max: T) -> Result<Vec<T>> {
    let x0 = T::count(family.p) + T::lit(0.5);
    if family.kappa == T::zero() {
        return Ok(zeros_p.iter().copied().filter(|&z| z <= mu_max).collect());
    }
    let mut points = vec![x0];
    points.extend(zeros_p.iter().copied().filter(|&z| z > x0));
    let mut roots = Vec::new();
    let f = |x: T| family.condition(branch, x).unwrap_or((T::nan(), T::nan()));
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a > mu_max {
            break;
        }
        let (fa, fb) = (f(a).0, f(b).0);
        if !fa.is_finite() || !fb.is_finite() {
            family.condition(branch, a)?;
            family.condition(branch, b)?;
        }
        let root = if fb == T::zero() {
            b
        } else if fa.signum() != fb.signum() {
            find_root(f, a, b, RootOptions::default())?
        } else {
            continue;
        };
        if root <= mu_max && roots.last() != Some(&root) {
            roots.push(root);
        }
    }
    audit(family, branch, x0, mu_max, roots.len())?;
    Ok(roots)
}

fn audit<T: Real>(family: &ModeFamily<T>, branch: Branch, x0: T, mu_max: T, found: usize) -> Result<()> {
    if x0 >= mu_max {
        return if found == 0 {
            Ok(())
        } else {
            Err(Error::RootAudit {
                n: family.n,
                found,
                expected: 0,
            })
        };
    }
    let step = T::lit(AUDIT_STEP);
    let mut changes = 0usize;
    let mut x = x0;
    let mut fx = family.condition(branch, x)?.0;
    loop {
        let next = (x + step).min(mu_max);
        let fnext = family.condition(branch, next)?.0;
        if fnext == T::zero() || (fx != T::zero() && fx.signum() != fnext.signum()) {
            changes += 1;
        }
        x = next;
        fx = fnext;
        if x >= mu_max {
            break;
        }
    }
    if changes != found {
        return Err(Error::RootAudit {
            n: family.n,
            found,
            expected: changes,
        });
    }
    Ok(())
}

fn family_spectrum<T: Real>(config: &BallConfig<T>, n: usize, zeros_p: &[T]) -> Result<FamilySpectrum<T>> {
    let family = mode_family(config.m, n, config.epsilon)?;
    Ok(FamilySpectrum {
        pos_roots: branch_roots(&family, Branch::Plus, zeros_p, config.mu_max)?,
        neg_roots: branch_roots(&family, Branch::Minus, zeros_p, config.mu_max)?,
        family,
    })
}

/// Every eigenvalue with `|mu| <= mu_max` for families `0..=n_max`.
///
/// Family `n_max + 1` is enumerated as well; if it has a root below
/// `mu_max` the truncation is rejected.
pub fn enumerate_spectrum<T: Real>(config: &BallConfig<T>) -> Result<BallSpectrum<T>> {
    let last = config.n_max + 1;
    let chain = zero_chain(config.order(last), config.mu_max)?;
    let mut families = (0..=last)
        .into_par_iter()
        .map(|n| family_spectrum(config, n, &chain[config.order(n)]))
        .collect::<Result<Vec<_>>>()?;
    let probe = families.pop().expect("at least one family");
    if !probe.is_empty() {
        return Err(Error::Truncation {
            n_max: config.n_max,
            next_n: last,
            order: probe.family.p,
            mu_max: config.mu_max.to_f64_lossy(),
        });
    }
    Ok(BallSpectrum::new(*config, families))
}

/// Options for [`heat_trace`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions<T> {
    /// Constant `c` added to every eigenvalue (the operator `P + c Id`).
    pub shift: T,
    /// Largest admissible tail bound.
    pub tol: T,
}

impl<T: Real> Default for TraceOptions<T> {
    fn default() -> Self {
        Self {
            shift: T::zero(),
            tol: T::lit(1e-10),
        }
    }
}

/// `Gamma(k, x)` for integer `k >= 1`.
fn upper_gamma_int<T: Real>(k: usize, x: T) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for j in 1..k {
        term = term * x / T::count(j);
        sum = sum + term;
    }
    let fact = (1..k).fold(T::one(), |acc, j| acc * T::count(j));
    fact * (-x).exp() * sum
}

/// Bound on the contribution of all eigenvalues beyond `mu_max`.
///
/// With `N(mu) <= C mu^m`, integration by parts gives
/// `C t^{-m/2} Gamma(m/2 + 1, t M^2)` for the zeta kind and, once
/// `M^2 >= 1/(2t)`, `C/M t^{-(m+2)/2} Gamma(m/2 + 2, t M^2)` for the eta
/// kind. A shift `c` lowers the cutoff to `M - |c|` and inflates `C` by
/// `(1 + |c|/(M-|c|))^m`.
pub fn heat_tail_bound<T: Real>(m: usize, mu_max: T, t: T, kind: TraceKind, shift: T) -> T {
    let c = shift.abs();
    let big_m = mu_max - c;
    if !(big_m > T::zero()) {
        return T::infinity();
    }
    let k = counting_constant(m, mu_max) * (T::one() + c / big_m).powi(m as i32);
    let x = t * big_m * big_m;
    let half_m = m / 2;
    match kind {
        TraceKind::Zeta => k * t.powi(-(half_m as i32)) * upper_gamma_int(half_m + 1, x),
        TraceKind::Eta => {
            if x < T::lit(0.5) {
                return T::infinity();
            }
            k / big_m * t.powi(-(half_m as i32) - 1) * upper_gamma_int(half_m + 2, x)
        }
    }
}

/// Heat trace value with a bound on the truncated tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceValue<T> {
    pub value: T,
    pub tail_bound: T,
}

/// `sum w e^{-t mu^2}` (zeta kind) or `sum w mu e^{-t mu^2}` (eta kind) over
/// the spectrum shifted by `opts.shift`, in ascending `|mu|`.
pub fn heat_trace<T: Real>(
    spectrum: &BallSpectrum<T>,
    t: T,
    kind: TraceKind,
    opts: TraceOptions<T>,
) -> Result<TraceValue<T>> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("heat trace needs t > 0, got {}", t)));
    }
    let tail = heat_tail_bound(spectrum.config.m, spectrum.config.mu_max, t, kind, opts.shift);
    if !(tail <= opts.tol) {
        return Err(Error::TailBound {
            bound: tail.to_f64_lossy(),
            tol: opts.tol.to_f64_lossy(),
        });
    }
    let mut value = T::zero();
    for &(mu, w) in spectrum.eigenvalues() {
        let x = mu + opts.shift;
        let g = (-t * x * x).exp();
        value = value
            + match kind {
                TraceKind::Zeta => w * g,
                TraceKind::Eta => w * x * g,
            };
    }
    Ok(TraceValue {
        value,
        tail_bound: tail,
    })
}

/// Truncated `sum w (mu^2)^{-s}` (zeta kind, `s > m/2`) or
/// `sum w sign(mu) |mu|^{-s}` (eta kind, `s > m - 1`).
///
/// The tail bound uses `N(mu) <= C mu^m`; for the eta kind it is finite only
/// when `s > m`, where the sum converges absolutely.
pub fn spectral_sum<T: Real>(spectrum: &BallSpectrum<T>, s: T, kind: TraceKind) -> Result<PartialSum<T>> {
    let m = spectrum.config.m;
    let mm = T::count(m);
    let min = match kind {
        TraceKind::Zeta => mm / T::lit(2.0),
        TraceKind::Eta => mm - T::one(),
    };
    if !(s > min) {
        return Err(Error::Convergence {
            s: s.to_f64_lossy(),
            min: min.to_f64_lossy(),
        });
    }
    let big_m = spectrum.config.mu_max;
    let c = spectrum.counting_constant(big_m);
    let mut value = T::zero();
    for &(mu, w) in spectrum.eigenvalues() {
        value = value
            + match kind {
                TraceKind::Zeta => w * (mu * mu).powf(-s),
                TraceKind::Eta => w * mu.signum() * mu.abs().powf(-s),
            };
    }
    let tail_bound = match kind {
        TraceKind::Zeta => {
            let two_s = T::lit(2.0) * s;
            two_s * c * big_m.powf(mm - two_s) / (two_s - mm)
        }
        TraceKind::Eta if s > mm => s * c * big_m.powf(mm - s) / (s - mm),
        TraceKind::Eta => T::infinity(),
    };
    Ok(PartialSum { value, tail_bound })
}

/// Writes the spectrum as CSV with columns `n,p,weight,branch,root`.
pub fn write_csv<T: Real, W: Write>(spectrum: &BallSpectrum<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "p", "weight", "branch", "root"])?;
    for f in &spectrum.families {
        for branch in [Branch::Plus, Branch::Minus] {
            for r in f.roots(branch) {
                w.write_record([
                    f.family.n.to_string(),
                    f.family.p.to_string(),
                    f.family.weight.to_string(),
                    branch.symbol().to_string(),
                    round15(r.to_f64_lossy()).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub p: usize,
    pub degeneracy: u64,
    pub weight: u64,
    pub kappa: f64,
    pub boundary_eigenvalue: f64,
    pub pos_roots: Vec<f64>,
    pub neg_roots: Vec<f64>,
}

/// JSON form of a spectrum. `counting_constant` is the `C` of
/// `N(mu) <= C mu^m` for `mu >= mu_max`, from which every tail bound follows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub config: BallConfig<f64>,
    pub eigenvalue_count: usize,
    pub weighted_count: f64,
    pub counting_constant: f64,
    pub families: Vec<FamilyReport>,
}

impl<T: Real> BallSpectrum<T> {
    pub fn report(&self) -> SpectrumReport {
        let conv = |v: &[T]| v.iter().map(|r| round15(r.to_f64_lossy())).collect();
        let mut config = self.config.to_f64();
        config.epsilon = round15(config.epsilon);
        config.mu_max = round15(config.mu_max);
        SpectrumReport {
            config,
            eigenvalue_count: self.sorted.len(),
            weighted_count: round15(self.count_below(self.config.mu_max).to_f64_lossy()),
            counting_constant: round15(self.counting_constant(self.config.mu_max).to_f64_lossy()),
            families: self
                .families
                .iter()
                .map(|f| FamilyReport {
                    n: f.family.n,
                    p: f.family.p,
                    degeneracy: f.family.degeneracy,
                    weight: f.family.weight,
                    kappa: round15(f.family.kappa.to_f64_lossy()),
                    boundary_eigenvalue: round15(f.family.boundary_eigenvalue.to_f64_lossy()),
                    pos_roots: conv(&f.pos_roots),
                    neg_roots: conv(&f.neg_roots),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(m: usize, eps: f64, mu_max: f64) -> BallSpectrum<f64> {
        enumerate_spectrum(&BallConfig::with_auto_n_max(m, eps, mu_max).unwrap()).unwrap()
    }

    #[test]
    fn family_examples() {
        let f = mode_family(4, 0, 0.0f64).unwrap();
        assert_eq!((f.p, f.degeneracy, f.weight), (1, 2, 4));
        assert_eq!(f.lambda, 1.5);
        let f = mode_family(4, 1, 0.0f64).unwrap();
        assert_eq!((f.degeneracy, f.weight), (6, 12));
        let f = mode_family(4, 0, 0.5f64).unwrap();
        assert!((f.boundary_eigenvalue - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            mode_family(4, 0, 1.5f64),
            Err(Error::EpsilonOutOfRange { .. })
        ));
        assert!(matches!(mode_family(5, 0, 0.1f64), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn both_eigenspinor_factors_agree() {
        for n in 0..5 {
            for eps in [0.1f64, -0.7, 1.2] {
                let f = mode_family(4, n, eps).unwrap();
                let other = (f.boundary_eigenvalue - f.lambda) / eps;
                assert!((other + f.kappa).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn condition_examples() {
        let f = mode_family(4, 0, 0.1f64).unwrap();
        assert!((f.kappa - 0.033_370_0).abs() < 1e-6);
        for mu in [1.0, 4.2, 17.5] {
            let plus = eigencondition(&f, Branch::Plus, mu).unwrap();
            let g = mode_family(4, 0, -0.1f64).unwrap();
            assert_eq!(plus, eigencondition(&g, Branch::Minus, mu).unwrap());
        }
        let zero = mode_family(4, 3, 0.0f64).unwrap();
        let j = bessel_j(4, 6.3f64).unwrap().value;
        assert_eq!(eigencondition(&zero, Branch::Plus, 6.3).unwrap(), j);
    }

    #[test]
    fn first_root_matches_newton_step() {
        let s = spectrum(4, 0.1, 10.0);
        let first = s.families[0].pos_roots[0];
        assert!((first - 3.7983).abs() < 5e-4, "{}", first);
        // One Newton step from j_{1,1} with J_1' = -J_2 there gives j - kappa.
        let kappa = s.families[0].family.kappa;
        assert!((first - (3.831_705_970_207_512 - kappa)).abs() < 1e-3);
        assert!(first < 3.831_705_970_2 && 3.831_705_970_2 < s.families[0].neg_roots[0]);
    }

    #[test]
    fn zero_epsilon_gives_bessel_zeros() {
        let s = spectrum(4, 0.0, 10.0);
        for f in &s.families {
            assert_eq!(f.pos_roots, f.neg_roots);
        }
        assert!((s.families[0].pos_roots[1] - 7.015_586_669_8).abs() < 1e-9);
        assert!((s.families[1].pos_roots[0] - 5.135_622_301_9).abs() < 1e-9);
    }

    #[test]
    fn mirror_symmetry() {
        let a = spectrum(4, 0.3, 30.0);
        let b = spectrum(4, -0.3, 30.0);
        assert_eq!(a.families.len(), b.families.len());
        for (fa, fb) in a.families.iter().zip(&b.families) {
            assert_eq!(fa.pos_roots.len(), fb.neg_roots.len());
            for (x, y) in fa.pos_roots.iter().zip(&fb.neg_roots) {
                assert!((x - y).abs() < 1e-10);
            }
            for (x, y) in fa.neg_roots.iter().zip(&fb.pos_roots) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn squared_condition_matches_first_order_form() {
        // F_+^2 = J_p (J_p [1 - eps p/(mu (p+1/2))] + eps/(p+1/2) J_p') + O(eps^2)
        let defect = |eps: f64, n: usize, mu: f64| {
            let f = mode_family(4, n, eps).unwrap();
            let p = f.p as f64;
            let j = bessel_j(f.p, mu).unwrap();
            let fp = eigencondition(&f, Branch::Plus, mu).unwrap();
            let first = j.value * (j.value * (1.0 - eps * p / (mu * (p + 0.5))) + eps / (p + 0.5) * j.derivative);
            fp * fp - first
        };
        // The defect is kappa^2 J_{p+1}^2 + (eps/lambda - 2 kappa) J_p J_{p+1}, i.e.
        // eps^2 J_{p+1}^2 / (4 lambda^2) up to O(eps^3).
        for n in 0..4 {
            for mu in [2.7, 5.3, 9.1, 13.4] {
                for eps in [0.04, 0.02, 0.01] {
                    let lambda = n as f64 + 1.5;
                    let next = bessel_j(n + 2, mu).unwrap().value;
                    let lead = eps * eps * next * next / (4.0 * lambda * lambda);
                    let d = defect(eps, n, mu);
                    assert!((d - lead).abs() < eps.powi(3), "n={} mu={} eps={}", n, mu, eps);
                }
            }
        }
    }

    #[test]
    fn truncation_is_detected() {
        let cfg = BallConfig::new(4, 0.1f64, 20.0, 3).unwrap();
        assert!(matches!(
            enumerate_spectrum(&cfg),
            Err(Error::Truncation { next_n: 4, .. })
        ));
        let auto = BallConfig::<f64>::with_auto_n_max(4, 0.1, 20.0).unwrap();
        assert!(enumerate_spectrum(&auto).is_ok());
    }

    #[test]
    fn counting_bound_holds() {
        let s = spectrum(4, 0.2, 40.0);
        let mut last = 0.0;
        for r in [5.0, 10.0, 20.0, 30.0, 40.0] {
            let n = s.count_below(r);
            assert!(n >= last);
            last = n;
            assert!(n <= s.counting_constant(r) * r.powi(4));
        }
    }

    #[test]
    fn heat_trace_symmetries() {
        let zero = spectrum(4, 0.0, 40.0);
        let opts = TraceOptions::default();
        for t in [0.05, 0.1, 0.2] {
            assert_eq!(heat_trace(&zero, t, TraceKind::Eta, opts).unwrap().value, 0.0);
        }
        let a = spectrum(4, 0.1, 40.0);
        let b = spectrum(4, -0.1, 40.0);
        let ea = heat_trace(&a, 0.1, TraceKind::Eta, opts).unwrap().value;
        let eb = heat_trace(&b, 0.1, TraceKind::Eta, opts).unwrap().value;
        assert!(ea != 0.0 && (ea + eb).abs() < 1e-9 * ea.abs().max(1.0));
        let z1 = heat_trace(&a, 0.1, TraceKind::Zeta, opts).unwrap().value;
        let z2 = heat_trace(&a, 0.12, TraceKind::Zeta, opts).unwrap().value;
        assert!(z1 > z2 && z2 > 0.0);
        assert!(matches!(
            heat_trace(&a, 0.001, TraceKind::Zeta, opts),
            Err(Error::TailBound { .. })
        ));
    }

    #[test]
    fn tail_bound_dominates_observed_tail() {
        let small = spectrum(4, 0.1, 20.0);
        let big = spectrum(4, 0.1, 40.0);
        let loose = TraceOptions { shift: 0.0, tol: 1e6 };
        for kind in [TraceKind::Zeta, TraceKind::Eta] {
            for t in [0.02, 0.05] {
                let s = heat_trace(&small, t, kind, loose).unwrap();
                let b = heat_trace(&big, t, kind, loose).unwrap();
                assert!((b.value - s.value).abs() <= s.tail_bound);
            }
        }
    }

    #[test]
    fn shift_identity() {
        let s = spectrum(4, 0.1, 60.0);
        for t in [0.05f64, 0.1, 0.2] {
            let h = 1e-4;
            let tr = |c: f64, tt: f64, kind| {
                heat_trace(&s, tt, kind, TraceOptions { shift: c, tol: 1e-10 })
                    .unwrap()
                    .value
            };
            let dc = (tr(h, t, TraceKind::Eta) - tr(-h, t, TraceKind::Eta)) / (2.0 * h);
            let ht = 1e-5 * t;
            let dt = (tr(0.0, t + ht, TraceKind::Zeta) - tr(0.0, t - ht, TraceKind::Zeta)) / (2.0 * ht);
            let rhs = tr(0.0, t, TraceKind::Zeta) + 2.0 * t * dt;
            assert!((dc - rhs).abs() < 1e-6 * rhs.abs(), "t={} {} vs {}", t, dc, rhs);
        }
    }

    #[test]
    fn spectral_sums() {
        let zero = spectrum(4, 0.0, 40.0);
        assert_eq!(spectral_sum(&zero, 5.0, TraceKind::Eta).unwrap().value, 0.0);
        let a = spectral_sum(&zero, 4.0, TraceKind::Zeta).unwrap();
        let b = spectral_sum(&spectrum(4, 0.0, 60.0), 4.0, TraceKind::Zeta).unwrap();
        assert!((a.value - b.value).abs() < 1e-6);
        assert!((a.value - b.value).abs() <= a.tail_bound);
        let c = spectral_sum(&zero, 4.5, TraceKind::Zeta).unwrap();
        assert!(c.value < a.value);
        assert!(spectral_sum(&zero, 2.0, TraceKind::Zeta).is_err());
        assert!(spectral_sum(&zero, 3.0, TraceKind::Eta).is_err());
    }

    #[test]
    fn exports() {
        let s = spectrum(4, 0.1, 12.0);
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,p,weight,branch,root"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0,1,4,+,3.7979"), "{}", first);
        let json = crate::report::to_json(&s.report()).unwrap();
        assert!(json.contains("\"mu_max\": 12.0"));
        assert!(json.contains("counting_constant"));
    }

    #[test]
    fn single_precision_spectrum() {
        let cfg = BallConfig::<f32>::with_auto_n_max(4, 0.1, 10.0).unwrap();
        let s = enumerate_spectrum(&cfg).unwrap();
        assert!((s.families[0].pos_roots[0] - 3.7983).abs() < 1e-3);
    }
}
