//! Equivalences `r ↦ μ(y) (φ(x) ⊗ φ(y)) r(w(x), w(y))`, normalization of `λ`, and the gauge
//! that brings a skew r-matrix into difference form `s(x - y)`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::TensorSeries;
use crate::grid::Grid;
use crate::lie::LieAlgebra;
use crate::linalg::{Coeff, Matrix, Tensor2, Vector, Q};
use crate::rmatrix::RMatrixSeries;
use crate::series::{solve_flow, solve_linear_ode, MatSeries, Series, VecSeries};
use crate::subalgebra::{ComplementSubalgebra, MembershipReport};

#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    mu: Series,
    w: Series,
    phi: MatSeries,
}

impl Equivalence {
    /// Checks that `μ` is a unit power series, `w` a coordinate and `φ` multiplicative on its
    /// window.
    pub fn new(lie: &LieAlgebra, mu: Series, w: Series, phi: MatSeries) -> Result<Self> {
        if mu.lo() < 0 || mu.coeff(0).map_or(true, |c| c.is_zero()) {
            return Err(Error::NotAUnit);
        }
        if w.valuation() != Some(1) || w.prec() < 2 {
            return Err(Error::InvalidCoordinate);
        }
        let d = lie.dim();
        if phi.shape() != (d, d) || phi.lo() < 0 {
            return Err(Error::NotAnAutomorphism("gauge must be an End(g)-valued power series".into()));
        }
        let rep = lie.is_automorphism_series(&phi, phi.prec())?;
        if !rep.holds {
            return Err(Error::NotAnAutomorphism(format!("multiplicativity fails at z^{}", rep.first_failure.unwrap_or(0))));
        }
        Ok(Equivalence { mu, w, phi })
    }

    pub fn identity(dim: usize, prec: i64) -> Self {
        Equivalence { mu: Series::one(prec), w: Series::z(prec), phi: MatSeries::constant(Matrix::identity(dim), prec) }
    }

    pub fn rescaling(dim: usize, mu: Series) -> Result<Self> {
        if mu.lo() < 0 || mu.coeff(0).map_or(true, |c| c.is_zero()) {
            return Err(Error::NotAUnit);
        }
        let prec = mu.prec();
        Ok(Equivalence { mu, w: Series::z(prec), phi: MatSeries::constant(Matrix::identity(dim), prec) })
    }

    pub fn coordinate(dim: usize, w: Series) -> Result<Self> {
        if w.valuation() != Some(1) || w.prec() < 2 {
            return Err(Error::InvalidCoordinate);
        }
        let prec = w.prec();
        Ok(Equivalence { mu: Series::one(prec), w, phi: MatSeries::constant(Matrix::identity(dim), prec) })
    }

    pub fn gauge(lie: &LieAlgebra, phi: MatSeries) -> Result<Self> {
        let prec = phi.prec();
        Self::new(lie, Series::one(prec), Series::z(prec), phi)
    }

    pub fn mu(&self) -> &Series {
        &self.mu
    }
    pub fn w(&self) -> &Series {
        &self.w
    }
    pub fn phi(&self) -> &MatSeries {
        &self.phi
    }

    /// Equivalence applying `self` first and `next` afterwards:
    /// `(μ' · μ∘w', w∘w', φ' · φ∘w')`.
    pub fn then(&self, next: &Equivalence) -> Result<Equivalence> {
        let mu = next.mu.mul(&self.mu.compose(&next.w)?);
        let w = self.w.compose(&next.w)?;
        let phi = next.phi.mat_mul(&self.phi.compose(&next.w)?);
        Ok(Equivalence { mu, w, phi })
    }

    /// `(1, w, id)` for `w = z` on the window.
    pub fn is_identity(&self) -> bool {
        let p = self.mu.prec().min(self.w.prec()).min(self.phi.prec());
        let d = self.phi.shape().0;
        self.mu.first_difference(&Series::one(p)).is_none()
            && self.w.first_difference(&Series::z(p)).is_none()
            && self.phi.first_difference(&MatSeries::constant(Matrix::identity(d), p)).is_none()
    }
}

/// `λ̃(y) = μ(y) λ(w(y)) / w'(y)`.
pub fn transformed_lambda(lambda: &Series, e: &Equivalence) -> Result<Series> {
    Ok(e.mu.mul(&lambda.compose(&e.w)?).div(&e.w.derive())?)
}

pub fn apply_equivalence(r: &RMatrixSeries, e: &Equivalence) -> Result<RMatrixSeries> {
    let lie = r.lie().clone();
    let expansion = r.expansion().substitute_x(&e.w)?.substitute_y(&e.w)?.gauge(&e.phi).mul_y(&e.mu);
    let out = RMatrixSeries::from_expansion(lie, &expansion)?;
    let expected = transformed_lambda(r.lambda(), e)?;
    if let Some(n) = out.lambda().first_difference(&expected) {
        return Err(Error::NotStandardForm(format!("rescaling factor disagrees at y^{n}")));
    }
    Ok(out)
}

/// Coordinate change `u` with `u' = λ(u)`, after which `λ = 1`.
pub fn normalize(r: &RMatrixSeries) -> Result<(RMatrixSeries, Equivalence)> {
    let d = r.lie().dim();
    if r.is_normalized() {
        return Ok((r.clone(), Equivalence::identity(d, r.lambda().prec())));
    }
    let u = solve_flow(r.lambda())?;
    let e = Equivalence::coordinate(d, u)?;
    let out = apply_equivalence(r, &e)?;
    let lambda = Series::one(out.lambda().prec());
    if out.lambda().first_difference(&lambda).is_some() {
        return Err(Error::NotNormalized);
    }
    Ok((out, e))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceForm {
    /// `s(z) = γ / z + Σ s_n z^n` on `[-1, prec)`.
    pub s: TensorSeries,
    pub phi: MatSeries,
    /// `(φ(x) ⊗ φ(y)) r(x, y)` on a rectangle inside the known triangle.
    pub r_tilde: RMatrixSeries,
    /// `r̃_{a,b}` was compared with `s(x - y)` for `a + b < order`.
    pub order: usize,
    pub matches: bool,
    pub first_mismatch: Option<(usize, usize)>,
    pub derivative_closure: MembershipReport,
}

/// `h(z, z)` where `h(x, y)` is the bracket image of `r0`.
fn diagonal_bracket(lie: &LieAlgebra, r0: &Grid<Tensor2>) -> VecSeries {
    let d = lie.dim();
    let p = r0.nx().min(r0.ny());
    let coeffs: Vec<Vector> = (0..p)
        .map(|n| {
            let mut v = Vector::zeros(d);
            for a in 0..=n {
                let b = lie.bracket_image(r0.at(a, n - a));
                for (x, y) in v.data.iter_mut().zip(b.data) {
                    *x += y;
                }
            }
            v
        })
        .collect();
    VecSeries::new(d, 0, p as i64, coeffs)
}

fn binomial(n: usize, k: usize) -> Q {
    let mut c = Q::one();
    for i in 0..k {
        c = c * Q::from_integer(((n - i) as i64).into()) / Q::from_integer(((i + 1) as i64).into());
    }
    c
}

/// Gauge a normalized skew r-matrix into the form `s(x - y)`: `ψ' = ad(h(z, z)) ψ`,
/// `ψ(0) = id`, `φ = ψ^{-1}`.
pub fn difference_normalize(r: &RMatrixSeries) -> Result<DifferenceForm> {
    if !r.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if !r.is_skew().skew {
        return Err(Error::NotSkew);
    }
    let lie: Arc<LieAlgebra> = r.lie().clone();
    let d = lie.dim();
    let h = diagonal_bracket(&lie, r.r0());
    let ad = h.map((d, d), |v| lie.ad(v));
    let psi = solve_linear_ode(&ad, &Matrix::identity(d))?;
    let phi = psi.inverse()?;
    // Coefficients r̃_{a,b} are exact for a + b < tri.
    let tri = (phi.prec() - 1).min(r.nx() as i64).min(r.ny() as i64).max(0) as usize;
    if tri < 2 {
        return Err(Error::window("difference form", [2 - tri as i64, 2 - tri as i64, 0]));
    }
    let gamma = lie.casimir();
    let coeff = |a: usize, b: usize| -> Tensor2 {
        let mut t = Tensor2::zeros(d);
        for j in 0..=b {
            let (i, k) = (a + 1 + j, b - j);
            t.add_assign(&gamma.apply(phi.at(i as i64), phi.at(k as i64)));
        }
        for a1 in 0..=a {
            for b1 in 0..=b {
                let src = r.r0().at(a - a1, b - b1);
                if !src.vanishes() {
                    t.add_assign(&src.apply(phi.at(a1 as i64), phi.at(b1 as i64)));
                }
            }
        }
        t
    };
    let s_coeffs: Vec<Tensor2> =
        core::iter::once(gamma.clone()).chain((0..tri).map(|n| coeff(n, 0))).collect();
    let s = TensorSeries::new(d, -1, tri as i64, s_coeffs);
    let mut first_mismatch = None;
    'check: for n in 0..tri {
        for b in 0..=n {
            let mut expected = s.at(n as i64).scale(&binomial(n, b));
            if b % 2 == 1 {
                expected = expected.negated();
            }
            if coeff(n - b, b) != expected {
                first_mismatch = Some((n - b, b));
                break 'check;
            }
        }
    }
    let (cx, cy) = ((tri + 2) / 2, (tri + 1) / 2);
    let r0 = Grid::from_fn(d, cx, cy, |a, b| coeff(a, b));
    let r_tilde = RMatrixSeries::new(lie, Series::one((cx + cy) as i64), r0)?;
    let w = ComplementSubalgebra::extract(&r_tilde)?;
    let derivative_closure = w.derivative_closure(cx - 1)?;
    Ok(DifferenceForm { s, phi, r_tilde, order: tri, matches: first_mismatch.is_none(), first_mismatch, derivative_closure })
}

/// `s(x - y)` with `s = γ/z + Σ s_n z^n` as an r-matrix on caps `(nx, ny)`.
pub fn from_difference(lie: Arc<LieAlgebra>, s: &TensorSeries, nx: usize, ny: usize) -> Result<RMatrixSeries> {
    let d = lie.dim();
    if s.lo() < -1 || s.coeff(-1) != Some(&lie.casimir()) {
        return Err(Error::NotStandardForm("s must have principal part γ/z".into()));
    }
    let need = (nx + ny) as i64 - 1;
    if s.prec() < need {
        return Err(Error::window("difference series", [need - s.prec(), 0, 0]));
    }
    let r0 = Grid::from_fn(d, nx, ny, |a, b| {
        let n = a + b;
        let mut t = s.at(n as i64).scale(&binomial(n, b));
        if b % 2 == 1 {
            t = t.negated();
        }
        t
    });
    RMatrixSeries::new(lie, Series::one((nx + ny) as i64), r0)
}
