//! Formal r-matrices in standard form `λ(y) γ / (x - y) + r0(x, y)`, with
//! `1/(x - y) = Σ_k x^{-k-1} y^k`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expansion::{Expansion, TensorSeries};
use crate::grid::Grid;
use crate::lie::LieAlgebra;
use crate::linalg::{Coeff, Tensor2, Q};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixSeries {
    lie: Arc<LieAlgebra>,
    lambda: Series,
    r0: Grid<Tensor2>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewReport {
    pub skew: bool,
    /// Caps `(nx, ny)` of the compared window.
    pub window: (usize, usize),
    pub first_difference: Option<(usize, usize)>,
}

impl RMatrixSeries {
    pub fn new(lie: Arc<LieAlgebra>, lambda: Series, r0: Grid<Tensor2>) -> Result<Self> {
        if r0.shape() != lie.dim() {
            return Err(Error::DimensionMismatch("r0 tensor dimension".into()));
        }
        if lambda.lo() < 0 {
            return Err(Error::NotStandardForm("lambda has poles".into()));
        }
        match lambda.coeff(0) {
            None => return Err(Error::window("lambda", [1, 0, 0])),
            Some(c) if c.is_zero() => return Err(Error::NotAUnit),
            _ => {}
        }
        if lambda.prec() < r0.ny() as i64 {
            return Err(Error::window("lambda", [0, r0.ny() as i64 - lambda.prec(), 0]));
        }
        Ok(RMatrixSeries { lie, lambda, r0 })
    }

    /// `γ / (x - y)` with `r0 = 0` on caps `(nx, ny)`.
    pub fn yang(lie: Arc<LieAlgebra>, nx: usize, ny: usize) -> Self {
        let d = lie.dim();
        let lambda = Series::one((nx + ny) as i64);
        RMatrixSeries { lie, lambda, r0: Grid::zeros(d, nx, ny) }
    }

    pub fn lie(&self) -> &Arc<LieAlgebra> {
        &self.lie
    }
    pub fn lambda(&self) -> &Series {
        &self.lambda
    }
    pub fn r0(&self) -> &Grid<Tensor2> {
        &self.r0
    }
    pub fn nx(&self) -> usize {
        self.r0.nx()
    }
    pub fn ny(&self) -> usize {
        self.r0.ny()
    }

    pub fn truncate(&self, nx: usize, ny: usize) -> Self {
        RMatrixSeries { lie: self.lie.clone(), lambda: self.lambda.clone(), r0: self.r0.truncate(nx, ny) }
    }

    /// `μ(y) r(x, y)`.
    pub fn rescale(&self, mu: &Series) -> Result<Self> {
        let lambda = self.lambda.mul(mu);
        let ny = (self.ny() as i64).min(mu.prec()).max(0) as usize;
        let d = self.lie.dim();
        let r0 = Grid::from_fn(d, self.nx(), ny, |m, k| {
            let mut t = Tensor2::zeros(d);
            for j in 0..=k {
                let c = mu.at(j as i64);
                if !c.is_zero() {
                    t.add_scaled(c, self.r0.at(m, k - j));
                }
            }
            t
        });
        RMatrixSeries::new(self.lie.clone(), lambda, r0)
    }

    /// `r + t` for a constant tensor `t`.
    pub fn add_constant(&self, t: &Tensor2) -> Self {
        let mut out = self.clone();
        if out.nx() > 0 && out.ny() > 0 {
            out.r0.at_mut(0, 0).add_assign(t);
        }
        out
    }

    /// Coefficient of `x^m y^k` where known.
    pub fn coeff(&self, m: i64, k: i64) -> Option<Tensor2> {
        if k < 0 || k >= self.ny() as i64 {
            return None;
        }
        if m < 0 {
            let j = k + m + 1;
            if j < 0 {
                return Some(Tensor2::zeros(self.lie.dim()));
            }
            let l = self.lambda.coeff(j)?;
            return Some(self.lie.casimir().scale(l));
        }
        self.r0.get(m as usize, k as usize).cloned()
    }

    /// Rows `y^k`, `0 ≤ k < ny`, each a Laurent series in `x` from `x^{-k-1}` to `x^{nx}`.
    pub fn expansion(&self) -> Expansion {
        let d = self.lie.dim();
        let nx = self.nx() as i64;
        let rows = (0..self.ny() as i64)
            .map(|k| {
                let coeffs: Vec<Tensor2> = (-k - 1..nx).map(|m| self.coeff(m, k).unwrap()).collect();
                TensorSeries::new(d, -k - 1, nx, coeffs)
            })
            .collect();
        Expansion::new(0, rows)
    }

    /// First disagreement on the common window: `Err(n)` for `λ` at `y^n`, `Ok((m, k))` for
    /// `r0` at `x^m y^k`.
    pub fn first_difference(&self, other: &Self) -> Option<core::result::Result<(usize, usize), i64>> {
        if let Some(n) = self.lambda.first_difference(&other.lambda) {
            return Some(Err(n));
        }
        self.r0.first_difference(&other.r0).map(Ok)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.lie == other.lie && self.first_difference(other).is_none()
    }

    /// `λ = 1` on its window.
    pub fn is_normalized(&self) -> bool {
        self.lambda.first_difference(&Series::one(self.lambda.prec())).is_none()
    }

    /// `λ(x) γ/(x - y) - τ(r0(y, x))` rewritten as `λ(y) γ/(x - y) + r̄0`.
    pub fn bar(&self) -> Self {
        let budget = self.lambda.prec().max(0) as usize;
        let (mut bx, mut by) = (self.ny(), self.nx());
        while bx + by > budget && bx + by > 0 {
            if bx >= by {
                bx -= 1;
            } else {
                by -= 1;
            }
        }
        let gamma = self.lie.casimir();
        let r0 = Grid::from_fn(self.lie.dim(), bx, by, |m, k| {
            let mut t = gamma.scale(self.lambda.at((m + k + 1) as i64));
            t.sub_assign(&self.r0.at(k, m).flip());
            t
        });
        RMatrixSeries { lie: self.lie.clone(), lambda: self.lambda.clone(), r0 }
    }

    pub fn is_skew(&self) -> SkewReport {
        let b = self.bar();
        let window = (self.nx().min(b.nx()), self.ny().min(b.ny()));
        let first = self.r0.truncate(window.0, window.1).first_difference(&b.r0.truncate(window.0, window.1));
        SkewReport { skew: first.is_none(), window, first_difference: first }
    }

    /// `r(x, y) / λ(y)`, a normalized r-matrix with the same subalgebra.
    pub fn divide_lambda(&self) -> Result<Self> {
        if self.is_normalized() {
            return Ok(self.clone());
        }
        let inv = self.lambda.inv()?;
        let rescaled = self.rescale(&inv)?;
        Ok(RMatrixSeries { lambda: Series::one(self.lambda.prec()), ..rescaled })
    }

    /// Largest order `N` with an exact assembly of the Yang-Baxter expressions on `[0, N)^3`.
    pub fn max_ybe_order(&self) -> usize {
        self.nx().min(self.ny()).min(self.lambda.prec().max(0) as usize) / 2
    }

    /// Recover `(λ, r0)` from an expansion: the `x^{-1}` column fixes `λ` by projecting on
    /// `γ`, and every other negative coefficient must agree.
    pub fn from_expansion(lie: Arc<LieAlgebra>, e: &Expansion) -> Result<Self> {
        if e.ylo != 0 {
            return Err(Error::NotStandardForm("expansion must start at y^0".into()));
        }
        let d = lie.dim();
        let gamma = lie.casimir();
        let ny = e.rows.len();
        let norm = Q::from_integer((d as i64).into());
        let mut lam = Vec::with_capacity(ny);
        for row in &e.rows {
            let t = row.coeff(-1).ok_or(Error::window("standard form", [-row.prec(), 0, 0]))?;
            lam.push(lie.killing_contract(t) / &norm);
        }
        let lambda = Series::scalar(0, ny as i64, lam);
        for (k, row) in e.rows.iter().enumerate() {
            let k = k as i64;
            if row.lo() < -k - 1 {
                return Err(Error::NotStandardForm(format!("pole of order {} at y^{k}", -row.lo())));
            }
            for j in 0..=k {
                let expected = gamma.scale(lambda.at(k - j));
                if row.at(-j - 1) != &expected {
                    return Err(Error::NotStandardForm(format!("coefficient x^{} y^{k} is not a multiple of the Casimir", -j - 1)));
                }
            }
        }
        let nx = e.xprec().max(0) as usize;
        let r0 = Grid::from_fn(d, nx, ny, |m, k| e.rows[k].at(m as i64).clone());
        RMatrixSeries::new(lie, lambda, r0)
    }

    /// `κ`-dual contraction of the second leg: component `p` of the returned vector is
    /// `Σ_q t_pq κ(b_q, b_i)`.
    pub fn second_leg_contract(lie: &LieAlgebra, t: &Tensor2, i: usize) -> crate::linalg::Vector {
        let d = lie.dim();
        let mut v = crate::linalg::Vector::zeros(d);
        for (p, qi, c) in t.nonzeros() {
            let k = lie.killing().get(qi, i);
            if !k.is_zero() {
                v.data[p] += c * k;
            }
        }
        v
    }

    /// `μ(y) γ/(x - y)` for a polynomial `μ`.
    pub fn rescaled_yang(lie: Arc<LieAlgebra>, mu: &[Q], nx: usize, ny: usize) -> Result<Self> {
        Self::yang(lie, nx, ny).rescale(&Series::polynomial(mu, (nx + ny) as i64))
    }
}
