//! Linear-variation trace identities for the boundary invariants of `a_3^eta`.
//!
//! Two variations are checked. A change of compatible connection shifts
//! `psi_P -> psi_P + rho_i gamma_i` and `psi_A -> psi_A + rho_b gamma_b^T`;
//! a shift of the boundary operator sends `psi_A -> psi_A + t Id`. For each
//! invariant the part linear in the variation parameter is compared with its
//! closed form.

use super::CliffordExpr;
use crate::exact::Coefficient;
use crate::Result;

/// One checked identity: the linear part and its expected closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityLine<C> {
    pub label: &'static str,
    pub computed: C,
    pub expected: C,
}

impl<C: Coefficient> IdentityLine<C> {
    pub fn holds(&self) -> bool {
        self.computed == self.expected
    }
}

/// Part of `Tr{q(t)}` linear in `t`, for `q` at most quadratic in `t`.
pub fn linear_part<C: Coefficient>(q: impl Fn(&C) -> CliffordExpr<C>) -> C {
    let plus = q(&C::one()).trace();
    let minus = q(&-C::one()).trace();
    let half = C::from_i64(2).try_recip().expect("2 is invertible");
    (plus - minus) * half
}

fn sum_tangential<C: Coefficient>(
    m: usize,
    f: impl Fn(&CliffordExpr<C>) -> CliffordExpr<C>,
) -> Result<CliffordExpr<C>> {
    let mut out = CliffordExpr::zero(m);
    for a in 1..m {
        out = out + f(&CliffordExpr::gamma_t(m, a)?);
    }
    Ok(out)
}

fn sum_gamma_tangential<C: Coefficient>(
    m: usize,
    f: impl Fn(&CliffordExpr<C>) -> CliffordExpr<C>,
) -> Result<CliffordExpr<C>> {
    let mut out = CliffordExpr::zero(m);
    for a in 1..m {
        out = out + f(&CliffordExpr::gamma(m, a)?);
    }
    Ok(out)
}

/// Connection variation with coefficients `rho[0..m]` (`rho[i-1]` multiplies `gamma_i`).
pub fn connection_variation_lines<C: Coefficient>(
    psi_p: &CliffordExpr<C>,
    psi_a: &CliffordExpr<C>,
    rho: &[C],
) -> Result<Vec<IdentityLine<C>>> {
    let m = psi_p.dim();
    let gm = CliffordExpr::<C>::gamma(m, m)?;
    let k = |n: i64| C::from_i64(n);
    let mi = m as i64;

    let mut r_full = CliffordExpr::zero(m);
    let mut r_tan = CliffordExpr::zero(m);
    let mut r_tan_t = CliffordExpr::zero(m);
    for i in 1..=m {
        let g = CliffordExpr::gamma(m, i)?.scale(&rho[i - 1]);
        r_full = r_full + g.clone();
        if i < m {
            r_tan = r_tan + g;
            r_tan_t = r_tan_t + CliffordExpr::gamma_t(m, i)?.scale(&rho[i - 1]);
        }
    }
    let rho_m = rho[m - 1].clone();

    let pt = |t: &C| psi_p.clone() + r_full.scale(t);
    let at = |t: &C| psi_a.clone() + r_tan_t.scale(t);

    // Recurring right-hand sides.
    let tr_pp = psi_p.trace();
    let tr_gm_a = (gm.clone() * psi_a.clone()).trace();
    let tr_b_a = (r_tan.clone() * psi_a.clone()).trace();
    let tr_p_bt = (psi_p.clone() * r_tan_t.clone()).trace();
    let tr_rm = rho_m.clone() * tr_gm_a.clone();

    let mut lines = Vec::new();

    lines.push(IdentityLine {
        label: "gamma_m psi_P^2",
        computed: linear_part(|t| gm.clone() * pt(t) * pt(t)),
        expected: k(-2) * rho_m.clone() * tr_pp,
    });

    let c4 = linear_part(|t| {
        let p = pt(t);
        sum_tangential(m, |g| gm.clone() * g.clone() * p.clone() * g.clone() * p.clone())
            .expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_m gamma_a^T psi_P gamma_a^T psi_P",
        computed: c4,
        expected: k(-2 * (mi - 3)) * (gm.clone() * r_tan.clone() * psi_p.clone()).trace(),
    });

    lines.push(IdentityLine {
        label: "gamma_m psi_A^2",
        computed: linear_part(|t| gm.clone() * at(t) * at(t)),
        expected: C::zero(),
    });

    lines.push(IdentityLine {
        label: "psi_P psi_A",
        computed: linear_part(|t| pt(t) * at(t)),
        expected: tr_rm.clone() + tr_b_a.clone() + tr_p_bt.clone(),
    });

    lines.push(IdentityLine {
        label: "gamma_m psi_P gamma_m psi_A",
        computed: linear_part(|t| gm.clone() * pt(t) * gm.clone() * at(t)),
        expected: -tr_rm.clone() + tr_b_a.clone() + tr_p_bt.clone(),
    });

    let c8 = linear_part(|t| {
        let (p, a) = (pt(t), at(t));
        sum_tangential(m, |g| g.clone() * p.clone() * g.clone() * a.clone()).expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_a^T psi_P gamma_a^T psi_A",
        computed: c8,
        expected: k(mi - 1) * tr_rm.clone() - k(mi - 3) * tr_b_a.clone() + k(mi - 3) * tr_p_bt.clone(),
    });

    let c9 = linear_part(|t| {
        let (p, a) = (pt(t), at(t));
        sum_gamma_tangential(m, |g| g.clone() * p.clone() * g.clone() * a.clone()).expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_a psi_P gamma_a psi_A",
        computed: c9,
        expected: k(mi - 1) * tr_rm + k(mi - 3) * tr_b_a - k(mi - 3) * tr_p_bt,
    });

    let c10 = linear_part(|t| {
        let a = at(t);
        sum_tangential(m, |g| gm.clone() * g.clone() * a.clone() * g.clone() * a.clone())
            .expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_m gamma_a^T psi_A gamma_a^T psi_A",
        computed: c10,
        expected: k(2 * (mi - 3)) * (gm.clone() * r_tan_t * psi_a.clone()).trace(),
    });

    Ok(lines)
}

/// Shift `psi_A -> psi_A + t Id` with `psi_P` fixed.
pub fn shift_variation_lines<C: Coefficient>(
    psi_p: &CliffordExpr<C>,
    psi_a: &CliffordExpr<C>,
) -> Result<Vec<IdentityLine<C>>> {
    let m = psi_p.dim();
    let gm = CliffordExpr::<C>::gamma(m, m)?;
    let k = |n: i64| C::from_i64(n);
    let mi = m as i64;
    let at = |t: &C| psi_a.clone() + CliffordExpr::scalar(m, t.clone());
    let tr_p = psi_p.trace();

    let mut lines = vec![
        IdentityLine {
            label: "gamma_m psi_A^2",
            computed: linear_part(|t| gm.clone() * at(t) * at(t)),
            expected: k(2) * (gm.clone() * psi_a.clone()).trace(),
        },
        IdentityLine {
            label: "psi_P psi_A",
            computed: linear_part(|t| psi_p.clone() * at(t)),
            expected: tr_p.clone(),
        },
        IdentityLine {
            label: "gamma_m psi_P gamma_m psi_A",
            computed: linear_part(|t| gm.clone() * psi_p.clone() * gm.clone() * at(t)),
            expected: -tr_p.clone(),
        },
    ];
    let c8 = linear_part(|t| {
        let a = at(t);
        sum_tangential(m, |g| g.clone() * psi_p.clone() * g.clone() * a.clone()).expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_a^T psi_P gamma_a^T psi_A",
        computed: c8,
        expected: k(1 - mi) * tr_p.clone(),
    });
    let c9 = linear_part(|t| {
        let a = at(t);
        sum_gamma_tangential(m, |g| g.clone() * psi_p.clone() * g.clone() * a.clone()).expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_a psi_P gamma_a psi_A",
        computed: c9,
        expected: k(1 - mi) * tr_p,
    });
    let c10 = linear_part(|t| {
        let a = at(t);
        sum_tangential(m, |g| gm.clone() * g.clone() * a.clone() * g.clone() * a.clone())
            .expect("valid tangential index")
    });
    lines.push(IdentityLine {
        label: "gamma_m gamma_a^T psi_A gamma_a^T psi_A",
        computed: c10,
        expected: C::zero(),
    });
    Ok(lines)
}
