//! Closed-form heat-trace coefficients.
//!
//! Boundary constants are rational combinations of `1`, `beta(m)` and
//! `pi * beta(m)` ([`BetaLinear`]). Geometric input is restricted to
//! position-independent integrands: every interior integrand is a constant
//! times `vol_M`, every boundary integrand a constant times `vol(dM)`.
//! Traces use `Tr{Id} = d_s = 2^floor(m/2)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ball::TraceKind;
use crate::exact::{
    ball_volume, beta_exact, fmt_q, four_pi_pow_neg_half, gamma_half, q, qi, sphere_volume, Coefficient, PiExpr,
};
use crate::report::ExactValue;
use crate::{CliffordQ, Error, GaussQ, PiGauss, PiQ, Result, Q};

/// `one + beta * beta(m) + pi_beta * pi * beta(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaLinear {
    pub one: Q,
    pub beta: Q,
    pub pi_beta: Q,
}

impl BetaLinear {
    pub fn new(one: Q, beta: Q, pi_beta: Q) -> Self {
        Self { one, beta, pi_beta }
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), Q::zero(), Q::zero())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(c, Q::zero(), Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.beta.is_zero() && self.pi_beta.is_zero()
    }

    pub fn scale(&self, r: &Q) -> Self {
        Self::new(
            self.one.clone() * r.clone(),
            self.beta.clone() * r.clone(),
            self.pi_beta.clone() * r.clone(),
        )
    }

    /// Value at dimension `m` as a sum of powers of `sqrt(pi)`.
    pub fn to_pi(&self, m: usize) -> Result<PiQ> {
        let b = beta_exact(m)?;
        Ok(PiQ::rational(self.one.clone()) + b.scale_q(&self.beta) + b.shift(2).scale_q(&self.pi_beta))
    }

    pub fn to_f64(&self, m: usize) -> Result<f64> {
        Ok(self.to_pi(m)?.to_f64())
    }
}

impl Add for BetaLinear {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.one + rhs.one, self.beta + rhs.beta, self.pi_beta + rhs.pi_beta)
    }
}

impl Sub for BetaLinear {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for BetaLinear {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.one, -self.beta, -self.pi_beta)
    }
}

impl fmt::Display for BetaLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(&self.one, ""), (&self.beta, "beta"), (&self.pi_beta, "pi*beta")];
        let mut first = true;
        for (c, name) in parts {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            if !first {
                f.write_str(" ")?;
            }
            let mag = fmt_q(&c.abs());
            match (name.is_empty(), c.abs().is_one()) {
                (true, _) => write!(f, "{}{}", sign, mag)?,
                (false, true) => write!(f, "{}{}", sign, name)?,
                (false, false) => write!(f, "{}{}*{}", sign, mag, name)?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// One linear relation among the constants, with its residual.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub residual: BetaLinear,
}

impl Relation {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// The seventeen boundary constants `c_m^1 .. c_m^17` of `a_2^eta`, `a_3^eta`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    pub m: usize,
    c: Vec<BetaLinear>,
}

impl CoefficientTable {
    /// `c_m^i` for `1 <= i <= 17`.
    ///
    /// # Panics
    /// If `i` is outside `1..=17`.
    pub fn c(&self, i: usize) -> &BetaLinear {
        assert!((1..=17).contains(&i), "constant index {} outside 1..=17", i);
        &self.c[i - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BetaLinear)> {
        self.c.iter().enumerate().map(|(i, c)| (i + 1, c))
    }

    /// Every linear relation the constants must satisfy.
    pub fn relations(&self) -> Vec<Relation> {
        let m = qi(self.m as i64);
        let one = Q::one();
        let c = |i: usize| self.c(i).clone();
        let (m1, m3) = (m.clone() - one.clone(), m.clone() - qi(3));
        vec![
            Relation {
                name: "connection: c3 = 0",
                residual: c(3),
            },
            Relation {
                name: "connection: c6 - c7 + (m-1) c8 + (m-1) c9 = 0",
                residual: c(6) - c(7) + c(8).scale(&m1) + c(9).scale(&m1),
            },
            Relation {
                name: "connection: c6 + c7 + (m-3) c8 - (m-3) c9 + 2(m-3) c4 = 0",
                residual: c(6) + c(7) + c(8).scale(&m3) - c(9).scale(&m3) + c(4).scale(&(qi(2) * m3.clone())),
            },
            Relation {
                name: "connection: c6 + c7 - (m-3) c8 + (m-3) c9 + 2(m-3) c10 = 0",
                residual: c(6) + c(7) - c(8).scale(&m3) + c(9).scale(&m3) + c(10).scale(&(qi(2) * m3.clone())),
            },
            Relation {
                name: "boundary shift: c5 = 0",
                residual: c(5),
            },
            Relation {
                name: "boundary shift: c6 - c7 - (m-1) c8 - (m-1) c9 = 0",
                residual: c(6) - c(7) - c(8).scale(&m1) - c(9).scale(&m1),
            },
            Relation {
                name: "boundary shift: c6 = c7",
                residual: c(6) - c(7),
            },
            Relation {
                name: "boundary shift: c8 = -c9",
                residual: c(8) + c(9),
            },
            Relation {
                name: "adjoint: c14 = 0",
                residual: c(14),
            },
            Relation {
                name: "adjoint: c17 = 0",
                residual: c(17),
            },
            Relation {
                name: "conformal: c15 = (m-3)/(1-m) c16",
                residual: c(15) - c(16).scale(&(m3.clone() / (one.clone() - m.clone()))),
            },
            Relation {
                name: "zeta consistency: c11 = c13 - (m-1)/6",
                residual: c(11) - c(13) + BetaLinear::constant(m1.clone() / qi(6)),
            },
        ]
    }

    /// Fails with the first violated relation.
    pub fn audit(&self) -> Result<()> {
        match self.relations().into_iter().find(|r| !r.holds()) {
            Some(r) => Err(Error::Relation(format!(
                "m = {}: {} (residual {})",
                self.m, r.name, r.residual
            ))),
            None => Ok(()),
        }
    }
}

/// The constant table at dimension `m >= 4`.
pub fn coefficient_table(m: usize) -> Result<CoefficientTable> {
    if m < 4 {
        return Err(Error::InvalidDimension {
            m,
            reason: "the coefficient table requires m >= 4",
        });
    }
    let mq = qi(m as i64);
    let (m1, m2, m3) = (mq.clone() - qi(1), mq.clone() - qi(2), mq.clone() - qi(3));
    let zero = BetaLinear::zero;
    let k = m3.clone() * m1.clone() / (qi(2) * m2.clone());

    let c1 = BetaLinear::new((m2.clone()) / qi(4), -m2.clone() / qi(4), Q::zero());
    let c2 = BetaLinear::new(Q::zero(), q(-1, 4), Q::zero());
    let c6 = BetaLinear::constant(-(m3.clone() * m3.clone()) / (qi(4) * m2.clone()));
    let c8 = BetaLinear::constant(m3.clone() / (qi(4) * m2.clone()));
    let c9 = BetaLinear::constant(-m3.clone() / (qi(4) * m2.clone()));
    let c10 = BetaLinear::constant(qi(2) * m3.clone() / (qi(4) * m2.clone()));
    let c13 = BetaLinear::new(k.clone(), Q::zero(), -k.clone() / qi(2));
    let c11 = BetaLinear::new(k.clone() - m1.clone() / qi(6), Q::zero(), -k / qi(2));
    let c12 = BetaLinear::new(-m3.clone() / qi(3), Q::zero(), m3.clone() / qi(4));
    let c16 = BetaLinear::new(Q::one() / (qi(2) * m2.clone()), Q::zero(), -m1.clone() / (qi(4) * m2));
    let c15 = c16.scale(&(m3 / -m1));

    Ok(CoefficientTable {
        m,
        c: vec![
            c1,
            c2,
            zero(),
            zero(),
            zero(),
            c6.clone(),
            c6,
            c8,
            c9,
            c10,
            c11,
            c12,
            c13,
            zero(),
            c15,
            c16,
            zero(),
        ],
    })
}

/// Constant geometric data: a smearing function `f` with normal derivative
/// `f_normal`, second fundamental form trace `l_trace`, scalar curvature
/// `tau`, endomorphisms `psi_P`, `psi_A`, the normal derivative
/// `psi_P_normal`, the full gradient `psi_P;i` (empty for zero) and the
/// contracted curvature `w = gamma_i gamma_j W_ij`.
#[derive(Clone, Debug)]
pub struct GeometricData {
    pub m: usize,
    pub f: Q,
    pub f_normal: Q,
    pub l_trace: Q,
    pub tau: Q,
    pub psi_p: CliffordQ,
    pub psi_a: CliffordQ,
    pub psi_p_normal: CliffordQ,
    pub psi_p_grad: Vec<CliffordQ>,
    pub w: CliffordQ,
    pub vol_m: PiQ,
    pub vol_boundary: PiQ,
}

impl GeometricData {
    /// Flat data with `f = 1` and every endomorphism zero.
    pub fn flat(m: usize, vol_m: PiQ, vol_boundary: PiQ) -> Result<Self> {
        let data = Self {
            m,
            f: Q::one(),
            f_normal: Q::zero(),
            l_trace: Q::zero(),
            tau: Q::zero(),
            psi_p: CliffordQ::zero(m),
            psi_a: CliffordQ::zero(m),
            psi_p_normal: CliffordQ::zero(m),
            psi_p_grad: Vec::new(),
            w: CliffordQ::zero(m),
            vol_m,
            vol_boundary,
        };
        data.validate()?;
        Ok(data)
    }

    /// The unit ball: `psi_P = 0`, `psi_A = epsilon gamma_m + (m-1)/2 Id`,
    /// `L_aa = m - 1`.
    pub fn ball(m: usize, epsilon: Q) -> Result<Self> {
        let mut data = Self::flat(m, ball_volume(m)?, sphere_volume(m)?)?;
        data.l_trace = qi(m as i64 - 1);
        let gm = CliffordQ::gamma(m, m)?;
        data.psi_a =
            gm.scale(&GaussQ::from_q(&epsilon)) + CliffordQ::scalar(m, GaussQ::from_q(&(data.l_trace.clone() / qi(2))));
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidDimension {
                m: self.m,
                reason: "geometric data requires m >= 2",
            });
        }
        let exprs = [&self.psi_p, &self.psi_a, &self.psi_p_normal, &self.w];
        for e in exprs.into_iter().chain(self.psi_p_grad.iter()) {
            if e.dim() != self.m {
                return Err(Error::DimensionMismatch {
                    expected: self.m,
                    found: e.dim(),
                });
            }
        }
        if !self.psi_p_grad.is_empty() && self.psi_p_grad.len() != self.m {
            return Err(Error::Domain(format!(
                "psi_P gradient needs {} components, got {}",
                self.m,
                self.psi_p_grad.len()
            )));
        }
        if self.vol_m.to_f64() <= 0.0 || self.vol_boundary.to_f64() <= 0.0 {
            return Err(Error::Domain("volumes must be positive".into()));
        }
        Ok(())
    }

    /// Fiber dimension `2^floor(m/2)`.
    pub fn fiber_dim(&self) -> u64 {
        1u64 << (self.m / 2)
    }

    fn gamma(&self, i: usize) -> CliffordQ {
        CliffordQ::gamma(self.m, i).expect("index within 1..=m")
    }

    fn gamma_t(&self, a: usize) -> CliffordQ {
        CliffordQ::gamma_t(self.m, a).expect("index within 1..m")
    }

    fn grad(&self, i: usize) -> CliffordQ {
        self.psi_p_grad
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| CliffordQ::zero(self.m))
    }

    fn scalar(&self, r: &Q) -> CliffordQ {
        CliffordQ::scalar(self.m, GaussQ::from_q(r))
    }

    /// `(4 pi)^(-k/2) * vol * d_s`.
    fn measure(&self, k: i32, vol: &PiQ) -> PiGauss {
        (four_pi_pow_neg_half(k) * vol.clone())
            .scale_q(&qi(self.fiber_dim() as i64))
            .lift()
    }

    fn interior(&self) -> PiGauss {
        self.measure(self.m as i32, &self.vol_m)
    }

    /// Boundary measure for a coefficient of index `n`.
    fn boundary(&self, n: usize) -> PiGauss {
        let k = if n == 2 || n == 1 {
            self.m as i32 - 1
        } else {
            self.m as i32
        };
        self.measure(k, &self.vol_boundary)
    }

    /// `E` built from `psi_P`, its gradient, `W` and `tau`.
    pub fn endomorphism_e(&self) -> CliffordQ {
        let m = self.m;
        let half = GaussQ::from_q(&q(1, 2));
        let quarter = GaussQ::from_q(&q(1, 4));
        let p = &self.psi_p;
        let mut e = CliffordQ::zero(m);
        for i in 1..=m {
            let g = self.gamma(i);
            let d = self.grad(i);
            e = e + (d.clone() * g.clone() - g.clone() * d).scale(&half);
            let s = p.clone() * g.clone() + g * p.clone();
            e = e - (s.clone() * s).scale(&quarter);
        }
        e - p.clone() * p.clone() - self.w.scale(&half) - self.scalar(&(self.tau.clone() / qi(4)))
    }
}

fn lift<T: Coefficient>(p: &PiQ) -> PiExpr<T> {
    p.terms()
        .fold(PiExpr::zero(), |acc, (k, c)| acc + PiExpr::monomial(T::from_q(c), k))
}

fn coef(c: &BetaLinear, m: usize) -> Result<PiGauss> {
    Ok(c.to_pi(m)?.lift())
}

/// `c * tr(e)`.
fn term(c: &PiGauss, e: &CliffordQ) -> PiGauss {
    c.scale(&e.trace())
}

/// `a_2^eta` and `a_3^eta` from the general boundary formula with constants.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzEta {
    pub a2: PiGauss,
    pub a3: PiGauss,
}

/// Evaluates the seventeen-term boundary formula with the table constants.
///
/// The tangential divergences `(gamma_a^T psi_P)_:a` and `(gamma_a psi_A)_:a`
/// vanish for constant data.
pub fn eval_ansatz_eta(data: &GeometricData) -> Result<AnsatzEta> {
    data.validate()?;
    let m = data.m;
    let t = coefficient_table(m)?;
    let c = |i: usize| coef(t.c(i), m);
    let (p, a) = (&data.psi_p, &data.psi_a);
    let f = data.scalar(&data.f);
    let gm = data.gamma(m);

    let a2 = term(&c(1)?, &(f.clone() * p.clone())) + term(&c(2)?, &(f.clone() * gm.clone() * a.clone()));

    let mut sum_t_pp = CliffordQ::zero(m);
    let mut sum_t_pa = CliffordQ::zero(m);
    let mut sum_g_pa = CliffordQ::zero(m);
    let mut sum_t_aa = CliffordQ::zero(m);
    for i in 1..m {
        let (gt, g) = (data.gamma_t(i), data.gamma(i));
        sum_t_pp = sum_t_pp + gm.clone() * gt.clone() * p.clone() * gt.clone() * p.clone();
        sum_t_pa = sum_t_pa + gt.clone() * p.clone() * gt.clone() * a.clone();
        sum_g_pa = sum_g_pa + g.clone() * p.clone() * g * a.clone();
        sum_t_aa = sum_t_aa + gm.clone() * gt.clone() * a.clone() * gt * a.clone();
    }
    let l = data.scalar(&data.l_trace);
    let fn_ = data.scalar(&data.f_normal);
    let words: [(usize, CliffordQ); 17] = [
        (1, CliffordQ::zero(m)),
        (2, CliffordQ::zero(m)),
        (3, f.clone() * gm.clone() * p.clone() * p.clone()),
        (4, f.clone() * sum_t_pp),
        (5, f.clone() * gm.clone() * a.clone() * a.clone()),
        (6, f.clone() * p.clone() * a.clone()),
        (7, f.clone() * gm.clone() * p.clone() * gm.clone() * a.clone()),
        (8, f.clone() * sum_t_pa),
        (9, f.clone() * sum_g_pa),
        (10, f.clone() * sum_t_aa),
        (11, f.clone() * data.psi_p_normal.clone()),
        (12, f.clone() * l.clone() * p.clone()),
        (13, fn_.clone() * p.clone()),
        (14, CliffordQ::zero(m)),
        (15, f * l * gm.clone() * a.clone()),
        (16, fn_ * gm * a.clone()),
        (17, CliffordQ::zero(m)),
    ];
    let mut a3 = PiGauss::zero();
    for (i, w) in &words[2..] {
        a3 = a3 + term(&c(*i)?, w);
    }
    Ok(AnsatzEta {
        a2: a2 * data.boundary(2),
        a3: a3 * data.boundary(3),
    })
}

/// Eta coefficients with their boundary parts; entries are `None` below the
/// dimension where the formula applies.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaCoefficients {
    pub a0: PiGauss,
    pub a1: PiGauss,
    pub a2: Option<PiGauss>,
    pub a2_boundary: Option<PiGauss>,
    pub a3: Option<PiGauss>,
    pub a3_boundary: Option<PiGauss>,
}

fn rat(r: Q) -> PiGauss {
    PiQ::rational(r).lift()
}

fn bl(m: usize, one: Q, beta: Q, pi_beta: Q) -> Result<PiGauss> {
    coef(&BetaLinear::new(one, beta, pi_beta), m)
}

/// Direct evaluation of the closed-form eta coefficients.
///
/// For constant data the divergence `[...]_{;i}` in the interior integrand of
/// `a_3^eta` vanishes and is not evaluated.
pub fn eval_theorem12(data: &GeometricData) -> Result<EtaCoefficients> {
    data.validate()?;
    let m = data.m;
    let mq = qi(m as i64);
    let (m1, m2, m3) = (mq.clone() - qi(1), mq.clone() - qi(2), mq.clone() - qi(3));
    let (p, a) = (&data.psi_p, &data.psi_a);
    let f = data.scalar(&data.f);
    let s = |r: Q| data.scalar(&r);

    let a1 = term(&rat(-m1.clone()), &(f.clone() * p.clone())) * data.interior();

    let (a2, a2_boundary) = if m >= 3 {
        let gm = data.gamma(m);
        let cp = bl(m, m2.clone() / qi(4), -m2.clone() / qi(4), Q::zero())?;
        let ca = bl(m, Q::zero(), q(-1, 4), Q::zero())?;
        let bd = (term(&cp, &(f.clone() * p.clone())) + term(&ca, &(f.clone() * gm * a.clone()))) * data.boundary(2);
        (Some(bd.clone()), Some(bd))
    } else {
        (None, None)
    };

    let (a3, a3_boundary) = if m >= 4 {
        let gm = data.gamma(m);
        let three_m = -m3.clone();

        let mut inner = s(data.tau.clone()) * p.clone()
            + s(qi(6)) * data.w.clone() * p.clone()
            + s(qi(4) - mq.clone()) * p.clone() * p.clone() * p.clone();
        for i in 1..=m {
            let g = data.gamma(i);
            inner = inner - s(qi(6)) * p.clone() * data.grad(i) * g.clone()
                + s(qi(3)) * p.clone() * p.clone() * g.clone() * p.clone() * g;
        }
        let interior = term(&rat(q(-1, 12) * three_m.clone()), &(f.clone() * inner)) * data.interior();

        let k = m3.clone() * m1.clone() / (qi(2) * m2.clone());
        let fn_ = s(data.f_normal.clone());
        let l = s(data.l_trace.clone());
        let mut conj = CliffordQ::zero(m);
        for i in 1..m {
            let (gt, g) = (data.gamma_t(i), data.gamma(i));
            conj = conj + gt.clone() * p.clone() * gt.clone() * a.clone() - g.clone() * p.clone() * g * a.clone()
                + s(qi(2)) * gm.clone() * gt.clone() * a.clone() * gt * a.clone();
        }
        let pa = p.clone() * a.clone() + gm.clone() * p.clone() * gm.clone() * a.clone();
        let c16 = bl(
            m,
            Q::one() / (qi(2) * m2.clone()),
            Q::zero(),
            -m1.clone() / (qi(4) * m2.clone()),
        )?;
        let bracket = f.clone() * l.clone() * s(m3.clone() / -m1.clone()) + fn_.clone();

        let bd = term(&bl(m, k.clone(), Q::zero(), -k.clone() / qi(2))?, &(fn_ * p.clone()))
            + term(
                &rat(-(three_m.clone() * three_m.clone()) / (qi(4) * m2.clone())),
                &(f.clone() * pa),
            )
            + term(
                &bl(m, three_m.clone() / qi(3), Q::zero(), -three_m.clone() / qi(4))?,
                &(f.clone() * l * p.clone()),
            )
            + term(
                &bl(m, k.clone() - m1.clone() / qi(6), Q::zero(), -k / qi(2))?,
                &(f.clone() * data.psi_p_normal.clone()),
            )
            + term(&rat(-three_m / (qi(4) * m2)), &(f * conj))
            + term(&c16, &(bracket * gm * a.clone()));
        let bd = bd * data.boundary(3);
        (Some(interior + bd.clone()), Some(bd))
    } else {
        (None, None)
    };

    Ok(EtaCoefficients {
        a0: PiGauss::zero(),
        a1,
        a2,
        a2_boundary,
        a3,
        a3_boundary,
    })
}

/// Zeta coefficients; `a2` needs `m >= 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaCoefficients {
    pub a0: PiGauss,
    pub a1: PiGauss,
    pub a2: Option<PiGauss>,
    pub a2_interior: Option<PiGauss>,
}

/// Direct evaluation of the closed-form zeta coefficients `a_0 .. a_2`.
pub fn eval_theorem11(data: &GeometricData) -> Result<ZetaCoefficients> {
    data.validate()?;
    let m = data.m;
    let mq = qi(m as i64);
    let f = data.scalar(&data.f);
    let a0 = term(&PiGauss::integer(1), &f) * data.interior();
    let a1 = term(&bl(m, q(-1, 4), q(1, 4), Q::zero())?, &f) * data.boundary(1);
    let (a2, a2_interior) = if m >= 3 {
        let m2 = mq.clone() - qi(2);
        let e = data.scalar(&(data.tau.clone() / qi(6))) + data.endomorphism_e();
        let interior = term(&PiGauss::integer(1), &(f.clone() * e)) * data.interior();
        let k = (mq - qi(1)) / (qi(2) * m2);
        let bd = bl(
            m,
            q(1, 3) * data.l_trace.clone() * data.f.clone() - k.clone() * data.f_normal.clone(),
            Q::zero(),
            q(-1, 4) * data.l_trace.clone() * data.f.clone() + k / qi(2) * data.f_normal.clone(),
        )? * data.measure(m as i32, &data.vol_boundary);
        (Some(interior.clone() + bd), Some(interior))
    } else {
        (None, None)
    };
    Ok(ZetaCoefficients {
        a0,
        a1,
        a2,
        a2_interior,
    })
}

/// Residue of the eta or zeta function carried by `a_n`: `Res eta(m-n) =
/// 2 a_n / Gamma((m-n+1)/2)` and `Res zeta((m-n)/2) = a_n / Gamma((m-n)/2)`.
pub fn mellin_residues<T: Coefficient>(m: usize, n: usize, a_n: &PiExpr<T>, kind: TraceKind) -> Result<PiExpr<T>> {
    if n >= m {
        return Err(Error::Domain(format!(
            "Mellin relation needs n < m (n = {}, m = {})",
            n, m
        )));
    }
    let k = (m - n) as u32;
    match kind {
        TraceKind::Eta => a_n.scale(&T::from_i64(2)).div(&lift(&gamma_half(k + 1)?)),
        TraceKind::Zeta => a_n.div(&lift(&gamma_half(k)?)),
    }
}

/// Inverts the ball formulas for `a_2^eta`, `a_3^eta` (per unit epsilon) to
/// recover `(c_m^2, c_m^16)`.
pub fn extract_c2_c16(m: usize, a2_per_eps: &PiQ, a3_per_eps: &PiQ) -> Result<(PiQ, PiQ)> {
    let ds = qi(1i64 << (m / 2));
    let gm = gamma_half(m as u32)?;
    let two = |k: usize| qi(1i64 << k);
    // a_2 = -c2 d_s sqrt(pi) / (2^(m-2) Gamma(m/2))
    let c2 = a2_per_eps.scale_q(&(-two(m - 2) / ds.clone())).div(&(PiQ::sqrt_pi()))? * gm.clone();
    // a_3 = c16 (m-3) d_s / (2^(m-1) Gamma(m/2))
    let c16 = a3_per_eps.scale_q(&(two(m - 1) / (ds * qi(m as i64 - 3)))) * gm;
    Ok((c2, c16))
}

/// Closed-form ball values per unit epsilon.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPrediction {
    pub m: usize,
    pub c2: BetaLinear,
    pub c16: BetaLinear,
    pub a2: PiQ,
    pub a3: PiQ,
    /// `Res eta(m-2)`.
    pub res_eta_top: PiQ,
    /// `Res eta(m-3)`.
    pub res_eta_next: PiQ,
}

/// `a_2^eta`, `a_3^eta` and the eta residues on the unit ball with
/// `psi_A = epsilon gamma_m + (m-1)/2`, all per unit epsilon.
pub fn ball_predictions(m: usize) -> Result<BallPrediction> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::InvalidDimension {
            m,
            reason: "m must be even and >= 4",
        });
    }
    let t = coefficient_table(m)?;
    let ds = qi(1i64 << (m / 2));
    let gm = gamma_half(m as u32)?;
    let c2 = t.c(2).clone();
    let c16 = t.c(16).clone();
    let a2 = (c2.to_pi(m)? * PiQ::sqrt_pi())
        .scale_q(&(-ds.clone() / qi(1i64 << (m - 2))))
        .div(&gm)?;
    let a3 = c16
        .to_pi(m)?
        .scale_q(&(qi(m as i64 - 3) * ds / qi(1i64 << (m - 1))))
        .div(&gm)?;
    Ok(BallPrediction {
        m,
        res_eta_top: mellin_residues(m, 2, &a2, TraceKind::Eta)?,
        res_eta_next: mellin_residues(m, 3, &a3, TraceKind::Eta)?,
        c2,
        c16,
        a2,
        a3,
    })
}

fn real(e: &PiGauss) -> Result<PiQ> {
    e.try_real()
        .ok_or_else(|| Error::Domain(format!("expected a real value, got {}", e)))
}

/// Named exact value in a report.
#[derive(Clone, Debug, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub exact: String,
    pub value: f64,
}

impl NamedValue {
    fn pi(name: &str, e: &PiQ) -> Self {
        let v = ExactValue::from_pi(e);
        Self {
            name: name.into(),
            exact: v.exact,
            value: v.value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationEntry {
    pub name: String,
    pub holds: bool,
}

/// Everything the closed forms say about the unit ball in dimension `m`.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub m: usize,
    pub epsilon: f64,
    pub beta: ExactValue,
    /// `c_m^i` in the basis `{1, beta, pi*beta}` with values at `m`.
    pub constants: Vec<NamedValue>,
    pub relations: Vec<RelationEntry>,
    pub zeta: Vec<NamedValue>,
    /// Eta values per unit epsilon.
    pub eta_per_epsilon: Vec<NamedValue>,
    /// Eta values at `epsilon`.
    pub eta: Vec<NamedValue>,
}

impl TheoremReport {
    pub fn ball(m: usize, epsilon: f64) -> Result<Self> {
        let table = coefficient_table(m)?;
        let pred = ball_predictions(m)?;
        let data = GeometricData::ball(m, Q::one())?;
        let z = eval_theorem11(&data)?;
        let e = eval_theorem12(&data)?;
        let unwrap = |o: Option<PiGauss>| {
            o.ok_or(Error::InvalidDimension {
                m,
                reason: "m below threshold",
            })
        };

        let constants = table
            .iter()
            .map(|(i, c)| {
                Ok(NamedValue {
                    name: format!("c{}", i),
                    exact: c.to_string(),
                    value: crate::report::round15(c.to_f64(m)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let relations = table
            .relations()
            .into_iter()
            .map(|r| RelationEntry {
                name: r.name.into(),
                holds: r.holds(),
            })
            .collect();
        let zeta = vec![
            NamedValue::pi("a0_zeta", &real(&z.a0)?),
            NamedValue::pi("a1_zeta", &real(&z.a1)?),
            NamedValue::pi("a2_zeta", &real(&unwrap(z.a2)?)?),
        ];
        let per = vec![
            NamedValue::pi("a0_eta", &real(&e.a0)?),
            NamedValue::pi("a1_eta", &real(&e.a1)?),
            NamedValue::pi("a2_eta", &real(&unwrap(e.a2)?)?),
            NamedValue::pi("a3_eta", &real(&unwrap(e.a3)?)?),
            NamedValue::pi("res_eta_m_minus_2", &pred.res_eta_top),
            NamedValue::pi("res_eta_m_minus_3", &pred.res_eta_next),
        ];
        let eta = per
            .iter()
            .map(|v| NamedValue {
                name: v.name.clone(),
                exact: format!("({})*epsilon", v.exact),
                value: crate::report::round15(v.value * epsilon),
            })
            .collect();
        Ok(Self {
            m,
            epsilon,
            beta: ExactValue::from_pi(&beta_exact(m)?),
            constants,
            relations,
            zeta,
            eta_per_epsilon: per,
            eta,
        })
    }
}
