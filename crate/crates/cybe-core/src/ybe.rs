//! Assembly of the generalized and classical Yang-Baxter expressions in
//! `(g ⊗ g ⊗ g)((x1))((x2))[[x3]]`.
//!
//! Each of the three terms is assembled separately from finite sums of coefficient
//! brackets, keeping negative powers of `x1` and `x2` down to a pole window. The sum must
//! vanish there before the power-series part is read off.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{Coeff, Tensor3, Q};
use crate::rmatrix::RMatrixSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `[r12, r13] + [r12, r23] + [r13, r̄23]`
    Generalized,
    /// `[r12, r13] + [r12, r23] + [r13, r23]`
    Classical,
}

/// Coefficients of `x1^a x2^b x3^c` for `a, b ∈ [lo, n)` and `c ∈ [0, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleSeries {
    dim: usize,
    lo: i64,
    n: i64,
    data: Vec<Tensor3>,
}

impl TripleSeries {
    fn idx(&self, a: i64, b: i64, c: i64) -> usize {
        let w = (self.n - self.lo) as usize;
        ((a - self.lo) as usize * w + (b - self.lo) as usize) * self.n as usize + c as usize
    }

    pub fn order(&self) -> i64 {
        self.n
    }
    pub fn pole_window(&self) -> i64 {
        -self.lo
    }

    pub fn coeff(&self, a: i64, b: i64, c: i64) -> Option<&Tensor3> {
        let inside = (self.lo..self.n).contains(&a) && (self.lo..self.n).contains(&b) && (0..self.n).contains(&c);
        inside.then(|| &self.data[self.idx(a, b, c)])
    }

    /// Exponents ordered by total degree, then lexicographically.
    fn exponents(&self) -> Vec<(i64, i64, i64)> {
        let mut v = Vec::new();
        for a in self.lo..self.n {
            for b in self.lo..self.n {
                for c in 0..self.n {
                    v.push((a, b, c));
                }
            }
        }
        v.sort_by_key(|&(a, b, c)| (a + b + c, a, b, c));
        v
    }

    /// First nonzero coefficient with a negative power of `x1` or `x2`.
    pub fn laurent_obstruction(&self) -> Option<(i64, i64, i64)> {
        self.exponents()
            .into_iter()
            .find(|&(a, b, c)| (a < 0 || b < 0) && !self.coeff(a, b, c).unwrap().vanishes())
    }

    /// First nonzero coefficient overall.
    pub fn first_nonzero(&self) -> Option<(i64, i64, i64)> {
        self.exponents().into_iter().find(|&(a, b, c)| !self.coeff(a, b, c).unwrap().vanishes())
    }

    /// Power-series part, defined once the Laurent part is known to vanish.
    pub fn power_part(&self) -> Result<TripleSeries> {
        if let Some((a, b, c)) = self.laurent_obstruction() {
            return Err(Error::NotStandardForm(alloc::format!(
                "Yang-Baxter expression has a pole at x1^{a} x2^{b} x3^{c}"
            )));
        }
        let mut out = TripleSeries { dim: self.dim, lo: 0, n: self.n, data: Vec::new() };
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    out.data.push(self.coeff(a, b, c).unwrap().clone());
                }
            }
        }
        Ok(out)
    }

    /// Multiply by `f(x2) g(x3)` for scalar power series known at least to `n`.
    pub fn mul_x2_x3(&self, f: &crate::series::Series, g: &crate::series::Series) -> TripleSeries {
        let mut out = self.clone();
        for a in self.lo..self.n {
            for b in self.lo..self.n {
                for c in 0..self.n {
                    let mut acc = Tensor3::zeros(self.dim);
                    for b1 in 0..=(b - self.lo) {
                        for c1 in 0..=c {
                            let (fv, gv) = (f.at(b1), g.at(c1));
                            if fv.is_zero() || gv.is_zero() {
                                continue;
                            }
                            acc.add_scaled(&(fv * gv), self.coeff(a, b - b1, c - c1).unwrap());
                        }
                    }
                    let i = out.idx(a, b, c);
                    out.data[i] = acc;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct YbeReport {
    pub holds: bool,
    /// Certified on `[0, order)^3`.
    pub order: usize,
    pub pole_window: usize,
    pub laurent_cancelled: bool,
    pub first_nonzero: Option<(i64, i64, i64)>,
    pub witness: Option<Tensor3>,
}

/// Sparse coefficient table of an r-matrix expansion.
struct Table {
    mlo: i64,
    mhi: i64,
    kmax: i64,
    entries: Vec<Vec<(usize, usize, Q)>>,
}

impl Table {
    fn build(mlo: i64, mhi: i64, kmax: i64, f: impl Fn(i64, i64) -> Option<crate::linalg::Tensor2>) -> Result<Table> {
        let mut entries = Vec::new();
        for m in mlo..mhi {
            for k in 0..kmax {
                let cell = if m < -k - 1 {
                    Vec::new()
                } else {
                    let t = f(m, k).ok_or(Error::window("Yang-Baxter table", [m + 1, k + 1, 0]))?;
                    t.nonzeros().into_iter().map(|(i, j, c)| (i, j, c.clone())).collect()
                };
                entries.push(cell);
            }
        }
        Ok(Table { mlo, mhi, kmax, entries })
    }

    fn get(&self, m: i64, k: i64) -> &[(usize, usize, Q)] {
        // `r` has no negative powers of its second variable.
        if k < 0 || m < -k - 1 {
            return &[];
        }
        assert!(m >= self.mlo && m < self.mhi && k < self.kmax, "table miss ({m}, {k})");
        &self.entries[((m - self.mlo) * self.kmax + k) as usize]
    }
}

#[derive(Clone, Copy)]
enum Legs {
    L12L13,
    L12L23,
    L13L23,
}

fn bracket_into(lie: &LieAlgebra, legs: Legs, s: &[(usize, usize, Q)], t: &[(usize, usize, Q)], out: &mut [Q]) {
    let d = lie.dim();
    for (s1, s2, sv) in s {
        for (t1, t2, tv) in t {
            let st = sv * tv;
            match legs {
                Legs::L12L13 => {
                    for (p, c) in lie.bracket_terms(*s1, *t1) {
                        out[(p * d + s2) * d + t2] += c * &st;
                    }
                }
                Legs::L12L23 => {
                    for (qi, c) in lie.bracket_terms(*s2, *t1) {
                        out[(s1 * d + qi) * d + t2] += c * &st;
                    }
                }
                Legs::L13L23 => {
                    for (ri, c) in lie.bracket_terms(*s2, *t2) {
                        out[(s1 * d + t1) * d + ri] += c * &st;
                    }
                }
            }
        }
    }
}

/// Assemble the Yang-Baxter expression of `r` on `[-kx, n)^2 × [0, n)`.
pub fn assemble(r: &RMatrixSeries, variant: Variant, n: usize, kx: usize) -> Result<TripleSeries> {
    let lie = r.lie().clone();
    let d = lie.dim();
    let n = n as i64;
    let kx = kx as i64;
    let (nx, ny, lp) = (r.nx() as i64, r.ny() as i64, r.lambda().prec());
    if 2 * n > nx || 2 * n > ny || 2 * n > lp {
        return Err(Error::window("Yang-Baxter assembly", [2 * n - nx, 2 * n - ny, 2 * n - lp]));
    }
    let rt = Table::build(-2 * n - 1, 2 * n, 2 * n, |m, k| r.coeff(m, k))?;
    let bar = r.bar();
    if (bar.nx() as i64) < n || (bar.ny() as i64) < n {
        return Err(Error::window("bar of r", [n - bar.nx() as i64, n - bar.ny() as i64, 0]));
    }
    let bt = match variant {
        Variant::Generalized => Some(Table::build(-n - 1, n, n, |m, k| bar.coeff(m, k))?),
        Variant::Classical => None,
    };
    let third = bt.as_ref().unwrap_or(&rt);
    let lo = -kx;
    let mut out = TripleSeries { dim: d, lo, n, data: Vec::new() };
    let mut acc = vec![Q::zero(); d * d * d];
    for a in lo..n {
        for b in lo..n {
            for c in 0..n {
                acc.iter_mut().for_each(|x| x.set_zero());
                for m in (-b - 1)..=(a + c + 1) {
                    bracket_into(&lie, Legs::L12L13, rt.get(m, b), rt.get(a - m, c), &mut acc);
                }
                for b1 in 0.max(-a - 1)..=(b + c + 1) {
                    bracket_into(&lie, Legs::L12L23, rt.get(a, b1), rt.get(b - b1, c), &mut acc);
                }
                for c1 in 0..=c {
                    bracket_into(&lie, Legs::L13L23, rt.get(a, c1), third.get(b, c - c1), &mut acc);
                }
                out.data.push(Tensor3 { dim: d, data: acc.clone() });
            }
        }
    }
    Ok(out)
}

pub fn gcyb(r: &RMatrixSeries, n: usize, kx: usize) -> Result<TripleSeries> {
    assemble(r, Variant::Generalized, n, kx)
}

pub fn cyb(r: &RMatrixSeries, n: usize, kx: usize) -> Result<TripleSeries> {
    assemble(r, Variant::Classical, n, kx)
}

fn report(t: &TripleSeries) -> YbeReport {
    let laurent = t.laurent_obstruction();
    let first = t.first_nonzero();
    YbeReport {
        holds: first.is_none(),
        order: t.order() as usize,
        pole_window: t.pole_window() as usize,
        laurent_cancelled: laurent.is_none(),
        first_nonzero: first,
        witness: first.map(|(a, b, c)| t.coeff(a, b, c).unwrap().clone()),
    }
}

pub fn is_generalized_rmatrix(r: &RMatrixSeries, n: usize, kx: usize) -> Result<YbeReport> {
    Ok(report(&gcyb(r, n, kx)?))
}

pub fn is_rmatrix(r: &RMatrixSeries, n: usize, kx: usize) -> Result<YbeReport> {
    Ok(report(&cyb(r, n, kx)?))
}
