//! Truncated Laurent series `Σ_{lo ≤ n < prec} c_n z^n + O(z^prec)` with coefficients in any
//! [`Coeff`] space.
//!
//! Exponents below `lo` are known to vanish; exponents at or above `prec` are unknown.
//! Every operation derives the output `prec` from its inputs and never pads.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Coeff, Matrix, Vector, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C: Coeff> {
    lo: i64,
    prec: i64,
    shape: C::Shape,
    coeffs: Vec<C>,
    zero: C,
}

/// Scalar truncated Laurent series.
pub type Series = Laurent<Q>;
/// Series with values in `g` (or any coordinate space).
pub type VecSeries = Laurent<Vector>;
/// Series of linear maps.
pub type MatSeries = Laurent<Matrix>;

impl<C: Coeff> Laurent<C> {
    /// Coefficients for `lo, lo+1, ...`; missing ones up to `prec` are zero.
    pub fn new(shape: C::Shape, lo: i64, prec: i64, mut coeffs: Vec<C>) -> Self {
        assert!(lo <= prec, "lo must not exceed prec");
        let n = (prec - lo) as usize;
        assert!(coeffs.len() <= n, "more coefficients than the window holds");
        assert!(coeffs.iter().all(|c| c.shape() == shape), "coefficient shape mismatch");
        coeffs.resize(n, C::zeros(shape));
        let mut s = Laurent { lo, prec, shape, coeffs, zero: C::zeros(shape) };
        s.normalize();
        s
    }

    pub fn zero(shape: C::Shape, prec: i64) -> Self {
        Laurent { lo: prec, prec, shape, coeffs: Vec::new(), zero: C::zeros(shape) }
    }

    pub fn monomial(c: C, n: i64, prec: i64) -> Self {
        let shape = c.shape();
        if n >= prec {
            return Self::zero(shape, prec);
        }
        Self::new(shape, n, prec, vec![c])
    }

    fn normalize(&mut self) {
        let k = self.coeffs.iter().take_while(|c| c.vanishes()).count();
        if k > 0 {
            self.coeffs.drain(..k);
            self.lo += k as i64;
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn shape(&self) -> C::Shape {
        self.shape
    }

    /// `Some(c_n)` inside the known window, `None` at or above `prec`.
    pub fn coeff(&self, n: i64) -> Option<&C> {
        if n >= self.prec {
            None
        } else if n < self.lo {
            Some(&self.zero)
        } else {
            Some(&self.coeffs[(n - self.lo) as usize])
        }
    }

    /// Coefficient that the caller knows lies inside the window.
    pub fn at(&self, n: i64) -> &C {
        self.coeff(n).expect("coefficient outside the known window")
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lo)
        }
    }

    /// Zero on the whole known window.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.lo {
            return Self::zero(self.shape, prec);
        }
        let mut out = self.clone();
        out.coeffs.truncate((prec - self.lo) as usize);
        out.prec = prec;
        out
    }

    /// Coefficients from `lo` up to `prec` (window never extends).
    pub fn combine(&self, other: &Self, s: &Q) -> Self {
        assert_eq!(self.shape, other.shape, "series shape mismatch");
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo).min(prec);
        let mut coeffs = vec![C::zeros(self.shape); (prec - lo) as usize];
        for (n, c) in self.terms().take_while(|(n, _)| *n < prec) {
            coeffs[(n - lo) as usize].add_assign(c);
        }
        for (n, c) in other.terms().take_while(|(n, _)| *n < prec) {
            coeffs[(n - lo) as usize].add_scaled(s, c);
        }
        Self::new(self.shape, lo, prec, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, &Q::one())
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, &-Q::one())
    }
    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }
    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero(self.shape, self.prec);
        }
        self.map(self.shape, |c| c.scale(s))
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.lo += k;
        out.prec += k;
        out
    }

    pub fn map<D: Coeff>(&self, shape: D::Shape, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(shape, self.lo, self.prec, self.coeffs.iter().map(f).collect())
    }

    /// Termwise derivative; the window shrinks by one.
    pub fn derive(&self) -> Self {
        let mut coeffs = Vec::new();
        let lo = self.lo - 1;
        for (n, c) in self.terms() {
            coeffs.push(c.scale(&q(n)));
        }
        Self::new(self.shape, lo, self.prec - 1, coeffs)
    }

    /// Coefficient of `z^{-1}`.
    pub fn residue(&self) -> Result<C> {
        self.coeff(-1).cloned().ok_or(Error::window("residue", [-self.prec, 0, 0]))
    }

    /// Whether both series agree on their common window; returns the first differing exponent.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo);
        (lo..prec).find(|&n| self.at(n) != other.at(n))
    }

    /// `Σ_i Σ_j f(a_i, b_j)` placed at `z^{i+j}`, with `f` accumulating into the output.
    pub fn mul_with<A: Coeff, B: Coeff>(
        a: &Laurent<A>,
        b: &Laurent<B>,
        shape: C::Shape,
        mut f: impl FnMut(&A, &B, &mut C),
    ) -> Self {
        let lo = a.lo + b.lo;
        let prec = (a.lo + b.prec).min(b.lo + a.prec);
        if a.is_zero() || b.is_zero() {
            return Self::zero(shape, prec);
        }
        let n = (prec - lo) as usize;
        let mut out = vec![C::zeros(shape); n];
        for (i, ai) in a.coeffs.iter().enumerate().take(n) {
            if ai.vanishes() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate().take(n - i) {
                if !bj.vanishes() {
                    f(ai, bj, &mut out[i + j]);
                }
            }
        }
        Self::new(shape, lo, prec, out)
    }

    /// Scalar series times this series.
    pub fn scalar_mul(&self, s: &Series) -> Self {
        Self::mul_with(s, self, self.shape, |a, c, out| out.add_scaled(a, c))
    }

    /// `self(w(z))` for a coordinate `w = w_1 z + O(z^2)`, `w_1 ≠ 0`.
    pub fn compose(&self, w: &Series) -> Result<Self> {
        check_coordinate(w)?;
        let mut prec = self.prec;
        for (n, c) in self.terms() {
            if n != 0 && !c.vanishes() {
                prec = prec.min(n + w.prec - 1);
            }
        }
        let lo = self.lo.min(prec);
        let mut coeffs = vec![C::zeros(self.shape); (prec - lo).max(0) as usize];
        let winv = if self.lo < 0 { Some(w.inv()?) } else { None };
        for (n, c) in self.terms() {
            if n >= prec {
                break;
            }
            if c.vanishes() {
                continue;
            }
            let p = if n >= 0 { w.pow_nonneg(n as u32) } else { winv.as_ref().unwrap().pow_nonneg((-n) as u32) };
            for (m, pm) in p.terms() {
                if m >= prec {
                    break;
                }
                coeffs[(m - lo) as usize].add_scaled(pm, c);
            }
        }
        Ok(Self::new(self.shape, lo, prec, coeffs))
    }
}

fn check_coordinate(w: &Series) -> Result<()> {
    if w.valuation() != Some(1) || w.prec < 2 {
        return Err(Error::InvalidCoordinate);
    }
    Ok(())
}

impl Series {
    pub fn scalar(lo: i64, prec: i64, coeffs: Vec<Q>) -> Self {
        Self::new((), lo, prec, coeffs)
    }

    /// Polynomial `Σ c_n z^n` (from `z^0`) known up to `prec`.
    pub fn polynomial(coeffs: &[Q], prec: i64) -> Self {
        let n = (coeffs.len() as i64).min(prec.max(0)) as usize;
        Self::new((), 0.min(prec), prec, coeffs[..n].to_vec())
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(Q::one(), 0, prec)
    }

    /// The coordinate `z` itself.
    pub fn z(prec: i64) -> Self {
        Self::monomial(Q::one(), 1, prec)
    }

    pub fn mul(&self, other: &Series) -> Series {
        Self::mul_with(self, other, (), |a, b, out| *out += a * b)
    }

    /// Multiplicative inverse; fails when the series vanishes on its window.
    pub fn inv(&self) -> Result<Series> {
        let v = self.valuation().ok_or(Error::DivisionByZeroSeries)?;
        let rel = (self.prec - v) as usize;
        let a0inv = self.coeffs[0].recip();
        let mut out: Vec<Q> = Vec::with_capacity(rel);
        out.push(a0inv.clone());
        for n in 1..rel {
            let mut s = Q::zero();
            for j in 1..=n.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    s += a * &out[n - j];
                }
            }
            out.push(-s * &a0inv);
        }
        Ok(Series::scalar(-v, self.prec - 2 * v, out))
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_nonneg(&self, n: u32) -> Series {
        if n == 0 {
            return Series::one((self.prec - self.lo).max(1));
        }
        let mut result: Option<Series> = None;
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    /// Integer power; negative exponents require an invertible series.
    pub fn pow(&self, n: i64) -> Result<Series> {
        if n >= 0 {
            Ok(self.pow_nonneg(n as u32))
        } else {
            Ok(self.inv()?.pow_nonneg((-n) as u32))
        }
    }

    /// Compositional inverse `v` with `w(v(z)) = z`.
    pub fn comp_inverse(&self) -> Result<Series> {
        check_coordinate(self)?;
        let prec = self.prec;
        let w1inv = self.at(1).recip();
        let mut v = Series::scalar(1, prec, vec![w1inv.clone()]);
        for n in 2..prec {
            let e = self.compose(&v)?;
            let en = e.at(n).clone();
            if en.is_zero() {
                continue;
            }
            let mut coeffs: Vec<Q> = (1..prec).map(|k| v.at(k).clone()).collect();
            coeffs[(n - 1) as usize] -= en * &w1inv;
            v = Series::scalar(1, prec, coeffs);
        }
        Ok(v)
    }

    /// `(1 + c z)^alpha` as a binomial series up to `prec`.
    pub fn binomial(alpha: &Q, c: &Q, prec: i64) -> Series {
        let mut coeffs = Vec::new();
        let mut term = Q::one();
        for n in 0..prec.max(0) {
            coeffs.push(term.clone());
            term = term * (alpha - q(n)) / q(n + 1) * c;
        }
        Series::scalar(0.min(prec), prec, coeffs)
    }

    /// `exp(z) - 1` up to `prec`.
    pub fn expm1(prec: i64) -> Series {
        let mut coeffs = vec![Q::zero()];
        let mut f = Q::one();
        for n in 1..prec.max(1) {
            f /= q(n);
            coeffs.push(f.clone());
        }
        Series::scalar(0, prec.max(0), coeffs)
    }
}

/// Solve `u' = λ(u)`, `u(0) = 0` for a unit power series `λ`.
pub fn solve_flow(lambda: &Series) -> Result<Series> {
    if lambda.lo() < 0 {
        return Err(Error::InvalidInput("flow field must be a power series".into()));
    }
    let l0 = lambda.coeff(0).cloned().ok_or(Error::window("flow", [1, 0, 0]))?;
    if l0.is_zero() {
        return Err(Error::NotAUnit);
    }
    let prec = lambda.prec() + 1;
    let mut coeffs = vec![l0];
    for k in 1..lambda.prec() {
        let u = Series::scalar(1, k + 1, coeffs.clone());
        let c = lambda.compose(&u)?;
        coeffs.push(c.at(k) / q(k + 1));
    }
    Ok(Series::scalar(1, prec, coeffs))
}

impl MatSeries {
    pub fn constant(m: Matrix, prec: i64) -> Self {
        Self::monomial(m, 0, prec)
    }

    pub fn mat_mul(&self, other: &MatSeries) -> MatSeries {
        let shape = (self.shape().0, other.shape().1);
        Self::mul_with(self, other, shape, |a, b, out| a.mul_acc(b, &Q::one(), out))
    }

    pub fn apply(&self, v: &VecSeries) -> VecSeries {
        VecSeries::mul_with(self, v, self.shape().0, |a, x, out| a.mul_vec_acc(x, &Q::one(), out))
    }

    /// Coefficientwise transpose.
    pub fn transpose(&self) -> MatSeries {
        let (r, c) = self.shape();
        self.map((c, r), |m| m.transpose())
    }

    /// Inverse of a power series of matrices with invertible constant term.
    pub fn inverse(&self) -> Result<MatSeries> {
        if self.lo() < 0 {
            return Err(Error::InvalidInput("matrix series must be a power series".into()));
        }
        let a0 = self.coeff(0).ok_or(Error::window("matrix inverse", [1, 0, 0]))?;
        let a0inv = a0.inverse()?;
        let n = self.shape().0;
        let mut out = vec![a0inv.clone()];
        for k in 1..self.prec() {
            let mut s = Matrix::zeros((n, n));
            for j in 1..=k {
                let aj = self.at(j);
                if !aj.vanishes() {
                    aj.mul_acc(&out[(k - j) as usize], &Q::one(), &mut s);
                }
            }
            out.push(a0inv.mul(&s).negated());
        }
        Ok(MatSeries::new((n, n), 0, self.prec(), out))
    }

    /// `exp(A)` for a matrix series without constant term.
    pub fn exp(&self) -> Result<MatSeries> {
        if self.valuation().is_some_and(|v| v < 1) {
            return Err(Error::InvalidInput("exponent must vanish at z = 0".into()));
        }
        let n = self.shape().0;
        let prec = self.prec();
        let mut term = MatSeries::constant(Matrix::identity(n), prec);
        let mut sum = term.clone();
        for k in 1..prec.max(1) {
            term = term.mat_mul(self).scale(&Q::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum.truncate(prec))
    }
}

/// Power-series solution of `ψ' = M ψ`, `ψ(0) = P0`; known one order beyond `M`.
pub fn solve_linear_ode(m: &MatSeries, p0: &Matrix) -> Result<MatSeries> {
    if m.lo() < 0 {
        return Err(Error::InvalidInput("coefficient matrix must be a power series".into()));
    }
    let (r, c) = m.shape();
    if r != c || p0.rows != c {
        return Err(Error::DimensionMismatch("ode coefficient and initial value".into()));
    }
    let mut psi = vec![p0.clone()];
    for k in 0..m.prec() {
        let mut s = Matrix::zeros((r, p0.cols));
        for j in 0..=k {
            let mj = m.at(j);
            if !mj.vanishes() {
                mj.mul_acc(&psi[(k - j) as usize], &Q::one(), &mut s);
            }
        }
        psi.push(s.scale(&Q::new(1.into(), (k + 1).into())));
    }
    Ok(MatSeries::new((r, p0.cols), 0, m.prec() + 1, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qf;

    fn ints(lo: i64, prec: i64, xs: &[i64]) -> Series {
        Series::scalar(lo, prec, xs.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn geometric_series() {
        let one_minus_z = Series::polynomial(&[q(1), q(-1)], 10);
        let g = one_minus_z.inv().unwrap();
        assert_eq!(g, ints(0, 10, &[1; 10]));
    }

    #[test]
    fn canonical_form_strips_leading_zeros_only() {
        let s = ints(-3, 4, &[0, 0, 5, 1]);
        assert_eq!(s.lo(), -1);
        assert_eq!(s.prec(), 4);
        assert_eq!(s.coeff(-7), Some(&q(0)));
        assert_eq!(s.coeff(4), None);
    }

    #[test]
    fn product_window() {
        let a = ints(-2, 3, &[1, 1, 1, 1, 1]);
        let b = ints(1, 4, &[2, 3, 4]);
        let p = a.mul(&b);
        assert_eq!(p.lo(), -1);
        assert_eq!(p.prec(), 2);
    }

    #[test]
    fn division_by_window_zero() {
        let a = Series::one(5);
        assert_eq!(a.div(&Series::zero((), 5)), Err(Error::DivisionByZeroSeries));
    }

    #[test]
    fn derive_and_residue() {
        let s = ints(-2, 3, &[3, 4, 5, 6, 7]);
        assert_eq!(s.residue().unwrap(), q(4));
        let d = s.derive();
        assert_eq!(d.prec(), 2);
        assert_eq!(d, ints(-3, 2, &[-6, -4, 0, 6, 14]));
        assert_eq!(ints(0, 2, &[1]).shift(-1).derive().residue(), Ok(q(0)));
        assert!(matches!(ints(0, 1, &[1]).shift(-3).derive().residue(), Err(Error::WindowTooNarrow { .. })));
    }

    #[test]
    fn compose_inverse_with_laurent() {
        // z^{-1} ∘ (z/(1-z)) = z^{-1} - 1
        let w = Series::polynomial(&[q(1), q(-1)], 12).inv().unwrap().shift(1);
        let a = Series::monomial(q(1), -1, 12);
        let c = a.compose(&w).unwrap();
        assert_eq!(c.at(-1), &q(1));
        assert_eq!(c.at(0), &q(-1));
        assert!((1..c.prec()).all(|n| c.at(n).is_zero()));
    }

    #[test]
    fn compose_rejects_bad_coordinate() {
        let a = Series::one(4);
        assert_eq!(a.compose(&Series::one(4)), Err(Error::InvalidCoordinate));
        assert_eq!(a.compose(&ints(1, 4, &[0, 1])), Err(Error::InvalidCoordinate));
    }

    #[test]
    fn flow_of_one_plus_z() {
        let lambda = Series::polynomial(&[q(1), q(1)], 12);
        let u = solve_flow(&lambda).unwrap();
        assert_eq!(u, Series::expm1(13));
        assert_eq!(solve_flow(&ints(1, 5, &[1])), Err(Error::NotAUnit));
    }

    #[test]
    fn binomial_square_root() {
        let s = Series::binomial(&qf(1, 2), &q(-1), 10);
        assert_eq!(s.mul(&s), Series::polynomial(&[q(1), q(-1)], 10));
    }

    #[test]
    fn constant_ode_gives_exponential() {
        let c = Matrix::from_rows(&[vec![q(0), q(1)], vec![q(-1), q(0)]]);
        let m = MatSeries::constant(c.clone(), 8);
        let psi = solve_linear_ode(&m, &Matrix::identity(2)).unwrap();
        let mut power = Matrix::identity(2);
        let mut fact = q(1);
        for k in 0..9 {
            assert_eq!(psi.at(k), &power.scale(&fact.recip()));
            power = power.mul(&c);
            fact *= q(k + 1);
        }
    }

    #[test]
    fn matrix_series_inverse() {
        let n = Matrix::from_rows(&[vec![q(0), q(1)], vec![q(0), q(0)]]);
        let a = MatSeries::constant(n, 6).shift(1).exp().unwrap();
        let inv = a.inverse().unwrap();
        let id = a.mat_mul(&inv);
        assert_eq!(id, MatSeries::constant(Matrix::identity(2), 7));
    }
}
