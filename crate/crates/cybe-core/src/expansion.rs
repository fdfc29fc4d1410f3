//! `g ⊗ g`-valued series in `(x, y)`, stored as one Laurent series in `x` per power of `y`.
//! Each row carries its own `x`-precision.

use alloc::vec::Vec;

use num_traits::One;

use crate::error::Result;
use crate::lie::LieAlgebra;
use crate::linalg::{Coeff, Matrix, Tensor2, Q};
use crate::series::{Laurent, MatSeries, Series, VecSeries};

pub type TensorSeries = Laurent<Tensor2>;

#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub ylo: i64,
    pub rows: Vec<TensorSeries>,
}

impl Expansion {
    pub fn new(ylo: i64, rows: Vec<TensorSeries>) -> Self {
        Expansion { ylo, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, |r| r.shape())
    }

    /// First unknown power of `y`.
    pub fn yprec(&self) -> i64 {
        self.ylo + self.rows.len() as i64
    }

    pub fn row(&self, k: i64) -> Option<&TensorSeries> {
        if k < self.ylo {
            None
        } else {
            self.rows.get((k - self.ylo) as usize)
        }
    }

    /// Smallest `x`-precision over all rows.
    pub fn xprec(&self) -> i64 {
        self.rows.iter().map(|r| r.prec()).min().unwrap_or(i64::MAX)
    }

    pub fn coeff(&self, m: i64, k: i64) -> Option<&Tensor2> {
        self.row(k).and_then(|r| r.coeff(m))
    }

    fn from_accumulated(dim: usize, ylo: i64, yprec: i64, mut acc: Vec<Option<TensorSeries>>) -> Self {
        let n = (yprec - ylo).max(0) as usize;
        acc.truncate(n);
        let rows = acc
            .into_iter()
            .map(|r| r.unwrap_or_else(|| TensorSeries::zero(dim, i64::MAX / 4)))
            .collect();
        Expansion { ylo, rows }
    }

    fn accumulate(slot: &mut Option<TensorSeries>, s: TensorSeries) {
        *slot = Some(match slot.take() {
            None => s,
            Some(prev) => prev.add(&s),
        });
    }

    /// Rowwise sum over the common `y`-window.
    pub fn add(&self, other: &Expansion) -> Expansion {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &Expansion) -> Expansion {
        self.combine(other, &-Q::one())
    }

    fn combine(&self, other: &Expansion, s: &Q) -> Expansion {
        let d = self.dim().max(other.dim());
        let ylo = self.ylo.min(other.ylo);
        let yprec = self.yprec().min(other.yprec());
        let mut rows = Vec::new();
        for k in ylo..yprec {
            let a = self.row(k).cloned().unwrap_or_else(|| TensorSeries::zero(d, i64::MAX / 4));
            let b = other.row(k).cloned().unwrap_or_else(|| TensorSeries::zero(d, i64::MAX / 4));
            rows.push(a.combine(&b, s));
        }
        Expansion { ylo, rows }
    }

    /// `x ↦ w(x)` in every row.
    pub fn substitute_x(&self, w: &Series) -> Result<Expansion> {
        let rows = self.rows.iter().map(|r| r.compose(w)).collect::<Result<Vec<_>>>()?;
        Ok(Expansion { ylo: self.ylo, rows })
    }

    /// `y ↦ w(y)` for an expansion without negative powers of `y`.
    pub fn substitute_y(&self, w: &Series) -> Result<Expansion> {
        assert!(self.ylo >= 0, "substitute_y needs a power series in y");
        check_power_coordinate(w)?;
        let d = self.dim();
        let yprec = self.yprec().min(w.prec());
        let n = yprec.max(0) as usize;
        let mut acc: Vec<Option<TensorSeries>> = (0..n).map(|_| None).collect();
        for (idx, row) in self.rows.iter().enumerate() {
            let k = self.ylo + idx as i64;
            if k >= yprec {
                break;
            }
            let wk = w.pow_nonneg(k as u32);
            for (beta, c) in wk.terms() {
                if beta >= yprec {
                    break;
                }
                if !c.vanishes() {
                    Self::accumulate(&mut acc[beta as usize], row.scale(c));
                }
            }
        }
        Ok(Self::from_accumulated(d, 0, yprec, acc))
    }

    /// Multiply by a scalar power series `μ(y)`.
    pub fn mul_y(&self, mu: &Series) -> Expansion {
        self.convolve_y(mu.lo(), mu.prec(), |j, row| {
            let c = mu.at(j);
            (!c.vanishes()).then(|| row.scale(c))
        })
    }

    /// `out_β = Σ_j f(j, row_{β - j})` for `j` in `[jlo, jprec)`.
    fn convolve_y(&self, jlo: i64, jprec: i64, f: impl Fn(i64, &TensorSeries) -> Option<TensorSeries>) -> Expansion {
        let d = self.dim();
        let ylo = self.ylo + jlo;
        let yprec = (self.yprec() + jlo).min(jprec + self.ylo);
        let n = (yprec - ylo).max(0) as usize;
        let mut acc: Vec<Option<TensorSeries>> = (0..n).map(|_| None).collect();
        for (idx, row) in self.rows.iter().enumerate() {
            let k = self.ylo + idx as i64;
            for j in jlo..jprec {
                let beta = j + k;
                if beta >= yprec {
                    break;
                }
                if let Some(s) = f(j, row) {
                    Self::accumulate(&mut acc[(beta - ylo) as usize], s);
                }
            }
        }
        Self::from_accumulated(d, ylo, yprec, acc)
    }

    /// `(φ(x) ⊗ φ(y))` applied to the expansion.
    pub fn gauge(&self, phi: &MatSeries) -> Expansion {
        let d = self.dim();
        let rows: Vec<TensorSeries> = self
            .rows
            .iter()
            .map(|row| TensorSeries::mul_with(phi, row, d, |a, t, out| left_acc(a, t, out)))
            .collect();
        let first = Expansion { ylo: self.ylo, rows };
        first.convolve_y(phi.lo(), phi.prec(), |j, row| {
            let b = phi.at(j);
            (!b.vanishes()).then(|| row.map(d, |t| right_apply(t, b)))
        })
    }

    /// `[a(x) ⊗ 1 + 1 ⊗ a(y), ·]`
    pub fn act(&self, lie: &LieAlgebra, a: &VecSeries) -> Expansion {
        let d = self.dim();
        let ads: MatSeries = a.map((d, d), |v| lie.ad(v));
        let rows: Vec<TensorSeries> = self
            .rows
            .iter()
            .map(|row| TensorSeries::mul_with(&ads, row, d, |m, t, out| left_acc(m, t, out)))
            .collect();
        let left = Expansion { ylo: self.ylo, rows };
        let right = self.convolve_y(ads.lo(), ads.prec(), |j, row| {
            let m = ads.at(j);
            (!m.vanishes()).then(|| row.map(d, |t| right_apply(t, m)))
        });
        left.add(&right)
    }

    /// First nonzero coefficient `(m, k)`, scanning rows in order.
    pub fn first_nonzero(&self) -> Option<(i64, i64)> {
        self.rows.iter().enumerate().find_map(|(i, r)| r.valuation().map(|m| (m, self.ylo + i as i64)))
    }

    /// First `(m, k)` where two expansions differ on their common window.
    pub fn first_difference(&self, other: &Expansion) -> Option<(i64, i64)> {
        let ylo = self.ylo.max(other.ylo);
        for k in ylo..self.yprec().min(other.yprec()) {
            if let Some(m) = self.row(k).unwrap().first_difference(other.row(k).unwrap()) {
                return Some((m, k));
            }
        }
        None
    }
}

fn check_power_coordinate(w: &Series) -> Result<()> {
    if w.valuation() != Some(1) || w.prec() < 2 {
        return Err(crate::error::Error::InvalidCoordinate);
    }
    Ok(())
}

/// `out += (A ⊗ 1) t`
pub fn left_acc(a: &Matrix, t: &Tensor2, out: &mut Tensor2) {
    let d = t.dim;
    for (i, j, c) in t.nonzeros() {
        for p in 0..d {
            let x = a.get(p, i);
            if !num_traits::Zero::is_zero(x) {
                *out.get_mut(p, j) += x * c;
            }
        }
    }
}

/// `(1 ⊗ B) t`
pub fn right_apply(t: &Tensor2, b: &Matrix) -> Tensor2 {
    let d = t.dim;
    let mut out = Tensor2::zeros(d);
    for (i, j, c) in t.nonzeros() {
        for q in 0..d {
            let x = b.get(q, j);
            if !num_traits::Zero::is_zero(x) {
                *out.get_mut(i, q) += x * c;
            }
        }
    }
    out
}
