//! Symbolic Clifford algebra with `gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij`.
//!
//! Words are stored as bitmasks over generators `1..=m`. The trace is
//! normalized so that `Tr{Id} = 1`; multiply by `d_s = 2^(m/2)` for the
//! matrix trace.

mod identities;
mod matrix;

pub use identities::{connection_variation_lines, linear_part, shift_variation_lines, IdentityLine};
pub use matrix::{Mat, MatrixRep};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::Coefficient;
use crate::{Error, Result};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 32;

/// Sorted repetition-free product `gamma_{i_1} ... gamma_{i_k}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordWord {
    mask: u32,
}

impl CliffordWord {
    pub const IDENTITY: CliffordWord = CliffordWord { mask: 0 };

    /// Builds a word from strictly increasing indices.
    pub fn from_sorted(indices: &[usize], m: usize) -> Result<Self> {
        let mut mask = 0u32;
        let mut last = 0;
        for &i in indices {
            check_index(i, m)?;
            if i <= last {
                return Err(Error::Domain(format!(
                    "word indices must be strictly increasing, got {:?}",
                    indices
                )));
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Ok(Self { mask })
    }

    pub fn from_mask(mask: u32) -> Self {
        Self { mask }
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn is_identity(self) -> bool {
        self.mask == 0
    }

    /// Generator indices in increasing order (1-based).
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.mask & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Largest generator index, 0 for the identity.
    pub fn top(self) -> usize {
        32 - self.mask.leading_zeros() as usize
    }

    /// `self * rhs = sign * word`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: CliffordWord) -> (i8, CliffordWord) {
        // Moving each generator of rhs left past the larger generators of self.
        let mut swaps = 0u32;
        let mut b = rhs.mask;
        while b != 0 {
            let j = b.trailing_zeros();
            b &= b - 1;
            swaps += (self.mask >> (j + 1)).count_ones();
        }
        // Every shared generator squares to -1.
        swaps += (self.mask & rhs.mask).count_ones();
        let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
        (sign, CliffordWord::from_mask(self.mask ^ rhs.mask))
    }

    /// Sign picked up by the adjoint: reversal times one minus per generator.
    pub fn adjoint_sign(self) -> i8 {
        let k = self.len();
        let rev = (k * k.saturating_sub(1) / 2) % 2;
        if (rev + k).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl PartialOrd for CliffordWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CliffordWord {
    /// Grade first, then lexicographic in the sorted indices.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| other.mask.reverse_bits().cmp(&self.mask.reverse_bits()))
    }
}

impl fmt::Display for CliffordWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "Id");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("g{}", i)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for CliffordWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn check_index(i: usize, m: usize) -> Result<()> {
    if i == 0 || i > m || m > MAX_GENERATORS {
        Err(Error::IndexOutOfRange { index: i, m })
    } else {
        Ok(())
    }
}

/// Reduces an arbitrary product of generators to `sign * word`.
pub fn normalize_word(raw: &[usize], m: usize) -> Result<(i8, CliffordWord)> {
    let mut sign = 1i8;
    let mut word = CliffordWord::IDENTITY;
    for &i in raw {
        check_index(i, m)?;
        let (s, w) = word.mul(CliffordWord::from_mask(1 << (i - 1)));
        sign *= s;
        word = w;
    }
    Ok((sign, word))
}

/// Linear combination of words in dimension `m`.
#[derive(Clone, PartialEq)]
pub struct CliffordExpr<C> {
    m: usize,
    terms: BTreeMap<CliffordWord, C>,
}

impl<C: Coefficient> CliffordExpr<C> {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(m: usize, c: C) -> Self {
        Self::from_word(m, CliffordWord::IDENTITY, c)
    }

    pub fn identity(m: usize) -> Self {
        Self::scalar(m, C::one())
    }

    pub fn from_word(m: usize, w: CliffordWord, c: C) -> Self {
        let mut out = Self::zero(m);
        out.add_term(w, c);
        out
    }

    /// The generator `gamma_i`.
    pub fn gamma(m: usize, i: usize) -> Result<Self> {
        check_index(i, m)?;
        Ok(Self::from_word(m, CliffordWord::from_mask(1 << (i - 1)), C::one()))
    }

    /// Tangential generator `gamma_a^T = -gamma_m gamma_a`.
    pub fn gamma_t(m: usize, a: usize) -> Result<Self> {
        if a == 0 || a >= m {
            return Err(Error::IndexOutOfRange { index: a, m: m - 1 });
        }
        Ok(-(Self::gamma(m, m)? * Self::gamma(m, a)?))
    }

    /// Product of generators in the given order, normalized.
    pub fn word(m: usize, raw: &[usize]) -> Result<Self> {
        let (s, w) = normalize_word(raw, m)?;
        Ok(Self::from_word(m, w, C::from_i64(s as i64)))
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (CliffordWord, &C)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coeff(&self, w: CliffordWord) -> C {
        self.terms.get(&w).cloned().unwrap_or_else(C::zero)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: CliffordWord, c: C) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(C::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = Self::zero(self.m);
        for (wa, a) in &self.terms {
            for (wb, b) in &rhs.terms {
                let (s, w) = wa.mul(*wb);
                let c = a.clone() * b.clone();
                out.add_term(w, if s > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.m);
        for (w, v) in &self.terms {
            out.add_term(*w, v.clone() * c.clone());
        }
        out
    }

    /// Coefficient of the identity word, i.e. the trace with `Tr{Id} = 1`.
    pub fn trace(&self) -> C {
        self.coeff(CliffordWord::IDENTITY)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.m);
        for (w, c) in &self.terms {
            let c = c.conj();
            out.add_term(*w, if w.adjoint_sign() > 0 { c } else { -c });
        }
        out
    }

    /// `sum_{i in range} gamma_i * self * gamma_i`.
    pub fn frame_conjugate_sum(&self, range: std::ops::RangeInclusive<usize>) -> Result<Self> {
        let mut out = Self::zero(self.m);
        for i in range {
            let g = Self::gamma(self.m, i)?;
            out = out + g.clone() * self.clone() * g;
        }
        Ok(out)
    }

    /// `sum_{a=1}^{m-1} gamma_a^T * self * gamma_a^T`.
    pub fn tangential_conjugate_sum(&self) -> Result<Self> {
        let mut out = Self::zero(self.m);
        for a in 1..self.m {
            let g = Self::gamma_t(self.m, a)?;
            out = out + g.clone() * self.clone() * g;
        }
        Ok(out)
    }

    /// Maps the coefficients into another field.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> CliffordExpr<D> {
        let mut out = CliffordExpr::zero(self.m);
        for (w, c) in &self.terms {
            out.add_term(*w, f(c));
        }
        out
    }
}

/// `gamma_m * adjoint(psi_A) * gamma_m + L_aa Id`.
pub fn adjoint_boundary_endomorphism<C: Coefficient>(psi_a: &CliffordExpr<C>, l_trace: &C) -> Result<CliffordExpr<C>> {
    let m = psi_a.dim();
    let gm = CliffordExpr::gamma(m, m)?;
    Ok(gm.clone() * psi_a.adjoint() * gm + CliffordExpr::scalar(m, l_trace.clone()))
}

/// Whether `psi_A = gamma_m psi_A^* gamma_m + L_aa Id`.
pub fn is_selfadjoint_bc<C: Coefficient>(psi_a: &CliffordExpr<C>, l_trace: &C) -> Result<bool> {
    Ok(adjoint_boundary_endomorphism(psi_a, l_trace)? == *psi_a)
}

impl<C: Coefficient> Add for CliffordExpr<C> {
    type Output = Self;
    /// Panics on a dimension mismatch; use [`CliffordExpr::checked_add`] to get an error.
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("Clifford dimensions must agree")
    }
}

impl<C: Coefficient> Sub for CliffordExpr<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Neg for CliffordExpr<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            m: self.m,
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl<C: Coefficient> Mul for CliffordExpr<C> {
    type Output = Self;
    /// Panics on a dimension mismatch; use [`CliffordExpr::checked_mul`] to get an error.
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("Clifford dimensions must agree")
    }
}

impl<C: Coefficient> fmt::Display for CliffordExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if c.is_one() {
                    format!("{}", w)
                } else {
                    format!("({})*{}", c, w)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coefficient> fmt::Debug for CliffordExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordExpr[m={}]({})", self.m, self)
    }
}

/// Seeded random inputs for the identity and trace checks.
pub mod random {
    use crate::exact::q;
    use crate::{CliffordQ, GaussQ};
    use rand::Rng;

    pub fn rand_gauss<R: Rng>(rng: &mut R) -> GaussQ {
        GaussQ::new(
            q(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
            q(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
        )
    }

    /// Random expression with `terms` words of grade at most `max_grade`.
    pub fn rand_expr<R: Rng>(rng: &mut R, m: usize, terms: usize, max_grade: usize) -> CliffordQ {
        let mut out = CliffordQ::zero(m);
        for _ in 0..terms {
            let grade = rng.gen_range(0..=max_grade.min(m));
            let raw: Vec<usize> = (0..grade).map(|_| rng.gen_range(1..=m)).collect();
            let w = CliffordQ::word(m, &raw).unwrap();
            out = out + w.scale(&rand_gauss(rng));
        }
        out
    }
}
