//! Standard inputs: Yang's r-matrix and its twists, the Skrypnyk family on `so(3)`, and the
//! trigonometric solution on `sl(2)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::equivalence::{apply_equivalence, from_difference, Equivalence};
use crate::error::Result;
use crate::expansion::TensorSeries;
use crate::lie::LieAlgebra;
use crate::linalg::{qf, Coeff, Matrix, Tensor2, Vector, Q};
use crate::rmatrix::RMatrixSeries;
use crate::series::{MatSeries, Series};
use crate::subalgebra::{homogeneous_formula, homogeneous_from_a, ComplementSubalgebra};

/// `(φ(x) ⊗ φ(y)) γ/(x - y)` with `φ = exp(p(z) ad x)`.
pub fn gauge_twisted_yang(lie: &Arc<LieAlgebra>, x: &Vector, p: &[Q], nx: usize, ny: usize) -> Result<RMatrixSeries> {
    let prec = (nx + ny + 2) as i64;
    let phi = lie.exp_ad_poly(x, p, prec)?;
    let e = Equivalence::gauge(lie, phi)?;
    apply_equivalence(&RMatrixSeries::yang(lie.clone(), nx, ny), &e)
}

/// `a ↦ D^{1/2} a D^{1/2}` with `D = diag(1 - c_i z)` on `so(3)` in the basis `X12, X13, X23`.
pub fn skrypnyk_a(c: &[Q; 3], prec: i64) -> MatSeries {
    let alpha: Vec<Series> = c.iter().map(|ci| Series::binomial(&qf(1, 2), &-ci.clone(), prec)).collect();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let diag: Vec<Series> = pairs.iter().map(|&(i, j)| alpha[i].mul(&alpha[j])).collect();
    let coeffs = (0..prec)
        .map(|n| {
            let entries: Vec<Q> = diag.iter().map(|s| s.at(n).clone()).collect();
            Matrix::diagonal(&entries)
        })
        .collect();
    MatSeries::new((3, 3), 0, prec, coeffs)
}

pub struct Skrypnyk {
    pub lie: Arc<LieAlgebra>,
    pub a: MatSeries,
    pub abar: MatSeries,
    pub subalgebra: ComplementSubalgebra,
    pub r: RMatrixSeries,
}

/// The homogeneous subalgebra `A(z) · z^{-1} so(3)[z^{-1}]` with caps `(nx, ny)`.
pub fn skrypnyk(c: &[Q; 3], nx: usize, ny: usize) -> Result<Skrypnyk> {
    let lie = Arc::new(LieAlgebra::so(3)?);
    let a = skrypnyk_a(c, (nx + ny) as i64);
    let (subalgebra, abar) = homogeneous_from_a(lie.clone(), &a, ny)?;
    let r = homogeneous_formula(lie.clone(), &a, &abar, nx, ny)?;
    Ok(Skrypnyk { lie, a, abar, subalgebra, r })
}

/// The constant `t` with `t + τ(t) = γ` used for the trigonometric fixture on `sl(2)` with
/// basis `(e, h, f)`: `t = e ⊗ f / 4 + h ⊗ h / 16`.
pub fn trigonometric_constant() -> Tensor2 {
    let mut t = Tensor2::zeros(3);
    *t.get_mut(0, 2) = qf(1, 4);
    *t.get_mut(1, 1) = qf(1, 16);
    t
}

/// `s(z) = γ/(e^z - 1) + t` on `[-1, prec)`.
pub fn trigonometric_s(lie: &LieAlgebra, t: &Tensor2, prec: i64) -> Result<TensorSeries> {
    let f = Series::expm1(prec + 2).inv()?;
    let gamma = lie.casimir();
    let mut coeffs: Vec<Tensor2> = (-1..prec).map(|n| gamma.scale(f.at(n))).collect();
    coeffs[1].add_assign(t);
    Ok(TensorSeries::new(lie.dim(), -1, prec, coeffs))
}

/// `s(x - y)` for the trigonometric `s` on caps `(nx, ny)`.
pub fn trigonometric(lie: &Arc<LieAlgebra>, t: &Tensor2, nx: usize, ny: usize) -> Result<RMatrixSeries> {
    let s = trigonometric_s(lie, t, (nx + ny) as i64)?;
    from_difference(lie.clone(), &s, nx, ny)
}
