//! Explicit gamma matrices for even `m`, built by the block recursion
//!
//! ```text
//! gamma_a(m) = [[0, i gamma_a(m-1)], [-i gamma_a(m-1), 0]],   a < m
//! gamma_m(m) = [[0, i Id], [i Id, 0]]
//! ```
//!
//! starting from the single 1x1 generator `i` for `m - 1 = 1`. The odd set
//! for `m - 1 > 1` is the even set of dimension `m - 2` plus its chirality
//! element `gamma_1 ... gamma_{m-2}`, multiplied by `i` when it squares to
//! `+1`.

use std::fmt;

use super::{CliffordExpr, CliffordWord};
use crate::exact::Coefficient;
use crate::{Error, Result};

/// Dense square matrix; the gamma matrices are monomial so products skip zeros.
#[derive(Clone, PartialEq)]
pub struct Mat<C> {
    n: usize,
    data: Vec<C>,
}

impl<C: Coefficient> Mat<C> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(n, C::one())
    }

    pub fn diag(n: usize, c: C) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = c.clone();
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        self.data[i * self.n + j] = c;
    }

    /// `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let h = a.n;
        let mut out = Self::zeros(2 * h);
        for i in 0..h {
            for j in 0..h {
                out.set(i, j, a.get(i, j).clone());
                out.set(i, j + h, b.get(i, j).clone());
                out.set(i + h, j, c.get(i, j).clone());
                out.set(i + h, j + h, d.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C {
        (0..self.n).fold(C::zero(), |acc, i| acc + self.get(i, i).clone())
    }
}

impl<C: fmt::Debug> fmt::Debug for Mat<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:?}", self.data[i * self.n + j]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Gamma matrices `gamma_1 .. gamma_m` of size `2^(m/2)`.
#[derive(Clone, Debug)]
pub struct MatrixRep<C> {
    m: usize,
    gammas: Vec<Mat<C>>,
}

impl<C: Coefficient> MatrixRep<C> {
    /// Largest dimension accepted.
    pub const MAX_M: usize = 10;

    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || !m.is_multiple_of(2) || m > Self::MAX_M {
            return Err(Error::InvalidDimension {
                m,
                reason: "matrix representation needs even 2 <= m <= 10",
            });
        }
        let i = C::imag_unit().ok_or(Error::Domain("coefficient field has no imaginary unit".into()))?;

        let mut odd = vec![Mat::diag(1, i.clone())];
        let mut dim = 2;
        let even = loop {
            let n = odd[0].size();
            let zero = Mat::zeros(n);
            let mut even = odd
                .iter()
                .map(|g| {
                    let ig = g.scale(&i);
                    Mat::block(&zero, &ig, &ig.scale(&-C::one()), &zero)
                })
                .collect::<Vec<_>>();
            let ii = Mat::diag(n, i.clone());
            even.push(Mat::block(&zero, &ii, &ii, &zero));
            if dim == m {
                break even;
            }
            odd = even.clone();
            let mut omega = Mat::identity(2 * n);
            for g in &even {
                omega = omega.matmul(g);
            }
            if omega.matmul(&omega) == Mat::identity(2 * n) {
                omega = omega.scale(&i);
            }
            odd.push(omega);
            dim += 2;
        };
        Ok(Self { m, gammas: even })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Spinor dimension `d_s = 2^(m/2)`.
    pub fn spinor_dim(&self) -> usize {
        1 << (self.m / 2)
    }

    /// `gamma_i`, 1-based.
    pub fn gamma(&self, i: usize) -> &Mat<C> {
        &self.gammas[i - 1]
    }

    pub fn gammas(&self) -> &[Mat<C>] {
        &self.gammas
    }

    pub fn word(&self, w: CliffordWord) -> Mat<C> {
        w.indices()
            .iter()
            .fold(Mat::identity(self.spinor_dim()), |acc, &i| acc.matmul(self.gamma(i)))
    }

    /// Matrix of a symbolic expression.
    pub fn represent(&self, e: &CliffordExpr<C>) -> Result<Mat<C>> {
        if e.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: e.dim(),
            });
        }
        let mut out = Mat::zeros(self.spinor_dim());
        for (w, c) in e.terms() {
            out = out.add(&self.word(w).scale(c));
        }
        Ok(out)
    }

    /// Matrix trace divided by `d_s`, comparable with [`CliffordExpr::trace`].
    pub fn normalized_trace(&self, e: &CliffordExpr<C>) -> Result<C> {
        let d = C::from_i64(self.spinor_dim() as i64);
        let inv = d.try_recip().expect("nonzero spinor dimension");
        Ok(self.represent(e)?.trace() * inv)
    }

    /// Checks `gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij` and skew-adjointness.
    pub fn check_relations(&self) -> bool {
        let n = self.spinor_dim();
        let minus_two = Mat::diag(n, C::from_i64(-2));
        let zero = Mat::zeros(n);
        for (a, ga) in self.gammas.iter().enumerate() {
            if ga.conj_transpose() != ga.scale(&-C::one()) {
                return false;
            }
            for (b, gb) in self.gammas.iter().enumerate() {
                let anti = ga.matmul(gb).add(&gb.matmul(ga));
                let expected = if a == b { &minus_two } else { &zero };
                if anti != *expected {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::super::random::rand_expr;
    use super::*;
    use crate::exact::qi;
    use crate::{CliffordQ, GaussQ, MatrixRepQ, Q};
    use num_complex::Complex;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(re: i64, im: i64) -> GaussQ {
        GaussQ::new(qi(re), qi(im))
    }

    #[test]
    fn m2_matches_block_formula() {
        let rep = MatrixRepQ::new(2).unwrap();
        let g1 = rep.gamma(1);
        assert_eq!(*g1.get(0, 0), g(0, 0));
        assert_eq!(*g1.get(0, 1), g(-1, 0));
        assert_eq!(*g1.get(1, 0), g(1, 0));
        let g2 = rep.gamma(2);
        assert_eq!(*g2.get(0, 1), g(0, 1));
        assert_eq!(*g2.get(1, 0), g(0, 1));
        assert_eq!(*g2.get(1, 1), g(0, 0));
    }

    #[test]
    fn relations_hold_for_even_m() {
        for m in [2, 4, 6, 8, 10] {
            let rep = MatrixRepQ::new(m).unwrap();
            assert_eq!(rep.gammas().len(), m);
            assert_eq!(rep.gamma(1).size(), 1 << (m / 2));
            assert!(rep.check_relations(), "m = {}", m);
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(MatrixRepQ::new(5).is_err());
        assert!(MatrixRepQ::new(12).is_err());
        assert!(MatrixRep::<Q>::new(4).is_err());
    }

    #[test]
    fn nonidentity_words_are_traceless() {
        for m in [2, 4, 6] {
            let rep = MatrixRepQ::new(m).unwrap();
            for mask in 1u32..(1 << m) {
                assert!(rep.word(CliffordWord::from_mask(mask)).trace().is_zero());
            }
        }
    }

    #[test]
    fn symbolic_examples_match_matrices() {
        let rep = MatrixRepQ::new(4).unwrap();
        let e = CliffordQ::word(4, &[1, 2, 1, 2]).unwrap();
        assert_eq!(rep.normalized_trace(&e).unwrap(), g(-1, 0));
        let g12 = CliffordQ::word(4, &[1, 2]).unwrap();
        let lhs = rep.represent(&g12.adjoint()).unwrap();
        assert_eq!(lhs, rep.represent(&g12).unwrap().conj_transpose());
        let conj = g12.frame_conjugate_sum(1..=4).unwrap();
        let mut direct = Mat::zeros(4);
        for i in 1..=4 {
            let gi = rep.gamma(i);
            direct = direct.add(&gi.matmul(&rep.word(g12.terms().next().unwrap().0)).matmul(gi));
        }
        assert_eq!(rep.represent(&conj).unwrap(), direct);
    }

    #[test]
    fn random_products_trace_like_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2, 4, 6] {
            let rep = MatrixRepQ::new(m).unwrap();
            for _ in 0..20 {
                let a = rand_expr(&mut rng, m, 3, m);
                let b = rand_expr(&mut rng, m, 3, m);
                let p = a.clone() * b.clone();
                assert_eq!(rep.normalized_trace(&p).unwrap(), p.trace());
                let mp = rep.represent(&a).unwrap().matmul(&rep.represent(&b).unwrap());
                assert_eq!(rep.represent(&p).unwrap(), mp);
            }
            let i = rng.gen_range(1..=m);
            assert_eq!(
                rep.gamma(i).matmul(rep.gamma(i)),
                Mat::diag(1 << (m / 2), -GaussQ::one())
            );
        }
    }

    #[test]
    fn floating_representation_agrees() {
        let exact = MatrixRepQ::new(6).unwrap();
        let float = MatrixRep::<Complex<f64>>::new(6).unwrap();
        for i in 1..=6 {
            for r in 0..8 {
                for c in 0..8 {
                    let (re, im) = exact.gamma(i).get(r, c).approx();
                    assert_eq!(*float.gamma(i).get(r, c), Complex::new(re, im));
                }
            }
        }
    }
}
