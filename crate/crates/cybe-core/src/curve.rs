//! Multiplier lattices `O ⊂ Q((z))`, their index `(h0, h1)`, the Weierstrass cubic of a
//! genus-one lattice, and the elliptic / nodal / cuspidal / rational classification.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, qf, Matrix, Vector, Q};
use crate::rmatrix::RMatrixSeries;
use crate::series::Series;
use crate::subalgebra::ComplementSubalgebra;

/// Outcome of the linear solve for a monic multiplier of one pole order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderStatus {
    Found,
    /// The system is inconsistent: no element of this pole order.
    Absent,
    /// The window leaves free coefficients.
    Underdetermined { free: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub closed: bool,
    pub checked_products: usize,
    pub unverified_products: usize,
    /// Pole orders `(n, m)` of the first product that leaves the lattice.
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIndex {
    pub h0: usize,
    pub h1: usize,
    /// The window cannot rule out further gaps or power-series elements.
    pub stale: bool,
}

/// Echelon basis `1, f_1, f_2, ...` of a unital subalgebra of `Q((z))`: each `f_i` is
/// `z^{-n_i} + ...` with zero coefficients at `z^0` and at every other occupied pole order.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierLattice {
    basis: Vec<Series>,
    orders: Vec<usize>,
    max_pole: usize,
    statuses: Vec<(usize, OrderStatus)>,
    power_series_rank: usize,
    closure: ClosureCertificate,
}

fn monomial(n: i64, prec: i64) -> Series {
    Series::monomial(Q::one(), n, prec)
}

/// Solve for `f = z^{-k} + Σ_{j ∈ unknowns} f_j z^j` with `equations(f) = 0`, where
/// `equations` is linear.
fn solve_monic(
    k: usize,
    unknowns: &[i64],
    prec: i64,
    equations: &dyn Fn(&Series) -> Result<Vec<Q>>,
) -> Result<(Option<Series>, OrderStatus)> {
    let lead = monomial(-(k as i64), prec);
    let rhs: Vec<Q> = equations(&lead)?.into_iter().map(|c| -c).collect();
    let cols: Vec<Vec<Q>> = unknowns.iter().map(|&j| equations(&monomial(j, prec))).collect::<Result<_>>()?;
    let rows = rhs.len();
    let mut m = Matrix::zeros((rows, unknowns.len()));
    for (c, col) in cols.iter().enumerate() {
        debug_assert_eq!(col.len(), rows);
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                m.set(r, c, v.clone());
            }
        }
    }
    let Some((x, free)) = m.solve(&Vector { data: rhs }) else {
        return Ok((None, OrderStatus::Absent));
    };
    if free > 0 {
        return Ok((None, OrderStatus::Underdetermined { free }));
    }
    let mut f = lead;
    for (j, c) in unknowns.iter().zip(&x.data) {
        if !c.is_zero() {
            f = f.add(&monomial(*j, prec).scale(c));
        }
    }
    Ok((Some(f), OrderStatus::Found))
}

impl MultiplierLattice {
    pub fn basis(&self) -> &[Series] {
        &self.basis
    }
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }
    pub fn max_pole(&self) -> usize {
        self.max_pole
    }
    pub fn statuses(&self) -> &[(usize, OrderStatus)] {
        &self.statuses
    }
    pub fn closure(&self) -> &ClosureCertificate {
        &self.closure
    }

    /// Smallest known precision among basis elements.
    pub fn prec(&self) -> i64 {
        self.basis.iter().map(|b| b.prec()).min().unwrap_or(0)
    }

    pub fn element_of_order(&self, n: usize) -> Option<&Series> {
        self.orders.iter().position(|&o| o == n).map(|i| &self.basis[i])
    }

    /// `f` minus its expansion in the basis, read off from the principal part and `z^0`.
    pub fn reduce(&self, f: &Series) -> Series {
        let mut rest = f.clone();
        for (b, &n) in self.basis.iter().zip(&self.orders).rev() {
            let e = -(n as i64);
            if let Some(c) = rest.coeff(e) {
                if !c.is_zero() {
                    let c = c.clone();
                    rest = rest.sub(&b.scale(&c));
                }
            }
        }
        rest
    }

    fn from_parts(basis: Vec<Series>, orders: Vec<usize>, max_pole: usize, statuses: Vec<(usize, OrderStatus)>, power_series_rank: usize) -> Self {
        let mut out = MultiplierLattice {
            basis,
            orders,
            max_pole,
            statuses,
            power_series_rank,
            closure: ClosureCertificate { closed: false, checked_products: 0, unverified_products: 0, witness: None },
        };
        out.closure = out.closure_certificate();
        out
    }

    /// Every product of basis elements with total pole order at most `max_pole` reduces to
    /// zero on its window.
    pub fn closure_certificate(&self) -> ClosureCertificate {
        let (mut checked, mut unverified) = (0, 0);
        for a in 0..self.basis.len() {
            for b in a..self.basis.len() {
                let (n, m) = (self.orders[a], self.orders[b]);
                if n + m > self.max_pole {
                    unverified += 1;
                    continue;
                }
                let rest = self.reduce(&self.basis[a].mul(&self.basis[b]));
                checked += 1;
                if !rest.is_zero() {
                    return ClosureCertificate { closed: false, checked_products: checked, unverified_products: unverified, witness: Some((n, m)) };
                }
            }
        }
        ClosureCertificate { closed: true, checked_products: checked, unverified_products: unverified, witness: None }
    }

    /// Unital algebra generated by `gens`, echelonized up to pole order `max_pole`.
    pub fn from_generators(gens: &[Series], max_pole: usize) -> Result<Self> {
        let mut poles = Vec::new();
        for g in gens {
            match g.valuation() {
                Some(v) if v < 0 => poles.push((-v) as usize),
                _ => return Err(Error::InvalidGenerator("generators need a pole at z = 0".into())),
            }
        }
        // The unit is exact; give it enough room not to truncate anything it meets.
        let prec = gens.iter().map(|g| g.prec()).max().unwrap_or(1) + max_pole as i64;
        // Monomials in the generators with total pole order up to max_pole.
        let mut monomials: Vec<(usize, Series)> = gens
            .iter()
            .cloned()
            .zip(poles.iter().copied())
            .filter(|(_, p)| *p <= max_pole)
            .map(|(g, p)| (p, g))
            .collect();
        let mut frontier = monomials.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (n, m) in &frontier {
                for (g, &p) in gens.iter().zip(&poles) {
                    if n + p <= max_pole {
                        next.push((n + p, m.mul(g)));
                    }
                }
            }
            monomials.extend(next.iter().cloned());
            frontier = next;
        }
        monomials.sort_by_key(|(n, _)| *n);
        let mut lattice = MultiplierLattice::from_parts(vec![Series::one(prec)], vec![0], max_pole, Vec::new(), 0);
        let mut power_series_rank = 0;
        for (_, m) in monomials {
            let rest = lattice.reduce(&m);
            match rest.valuation() {
                None => {}
                Some(v) if v < 0 => lattice.insert(rest),
                Some(_) => power_series_rank += 1,
            }
        }
        let statuses = (1..=max_pole)
            .map(|n| (n, if lattice.orders.contains(&n) { OrderStatus::Found } else { OrderStatus::Absent }))
            .collect();
        Ok(MultiplierLattice::from_parts(lattice.basis, lattice.orders, max_pole, statuses, power_series_rank))
    }

    /// Add an element with a new leading pole order and restore echelon form.
    fn insert(&mut self, f: Series) {
        let n = (-f.lo()) as usize;
        let lead = f.at(f.lo()).clone();
        let mut f = f.scale(&lead.recip());
        // Clear the coefficient of z^0 with the unit.
        let c0 = f.at(0).clone();
        if !c0.is_zero() {
            f = f.sub(&Series::one(f.prec()).scale(&c0));
        }
        for b in self.basis.iter_mut().skip(1) {
            if let Some(c) = b.coeff(-(n as i64)) {
                if !c.is_zero() {
                    let c = c.clone();
                    *b = b.sub(&f.scale(&c));
                }
            }
        }
        let pos = self.orders.iter().position(|&o| o > n).unwrap_or(self.orders.len());
        self.orders.insert(pos, n);
        self.basis.insert(pos, f);
    }

    /// Scalar multipliers `{f : f O ⊆ O}` up to `max_pole`.
    pub fn self_multipliers(&self, max_pole: usize) -> Result<MultiplierLattice> {
        let prec = self.prec();
        let test: Vec<&Series> = self.basis.iter().filter(|b| (-b.lo()).max(0) as usize + max_pole <= self.max_pole).collect();
        let mut found = MultiplierLattice::from_parts(vec![Series::one(prec)], vec![0], max_pole, Vec::new(), 0);
        let mut statuses = Vec::new();
        for k in 1..=max_pole {
            let upper = prec - k as i64;
            if upper <= 1 {
                return Err(Error::window("lattice multipliers", [0, 2 - upper, 0]));
            }
            let lo = -(self.max_pole as i64);
            let eq = |f: &Series| -> Result<Vec<Q>> {
                let mut out = Vec::new();
                for b in &test {
                    let rest = self.reduce(&f.mul(b));
                    // Beyond `upper - n` the product sees coefficients of `f` that are not unknowns.
                    let top = upper - (-b.lo()).max(0);
                    out.extend((lo..top).map(|e| rest.coeff(e).cloned().unwrap_or_else(Q::zero)));
                }
                Ok(out)
            };
            let unknowns: Vec<i64> = (1..k as i64)
                .filter(|j| !found.orders.contains(&(*j as usize)))
                .map(|j| -j)
                .chain(1..upper)
                .collect();
            let (f, status) = solve_monic(k, &unknowns, prec + max_pole as i64 + 2, &eq)?;
            if let Some(f) = f {
                found.insert(f.truncate(upper));
            }
            statuses.push((k, status));
        }
        Ok(MultiplierLattice::from_parts(found.basis, found.orders, max_pole, statuses, 0))
    }

    /// `h1` counts the gaps of the pole-order semigroup; it is conclusive once a run of `s`
    /// consecutive orders is present, `s` the smallest positive order.
    pub fn index(&self) -> LatticeIndex {
        let positive: Vec<usize> = self.orders.iter().copied().filter(|&n| n > 0).collect();
        let undetermined = self.statuses.iter().any(|(_, s)| matches!(s, OrderStatus::Underdetermined { .. }));
        let Some(&s) = positive.first() else {
            return LatticeIndex { h0: 1 + self.power_series_rank, h1: self.max_pole, stale: true };
        };
        let run_start = (s..=(self.max_pole + 1).saturating_sub(s)).find(|&n| (n..n + s).all(|m| positive.contains(&m)));
        let (h1, stale) = match run_start {
            Some(start) => ((1..start).filter(|n| !positive.contains(n)).count(), undetermined),
            None => ((1..=self.max_pole).filter(|n| !positive.contains(n)).count(), true),
        };
        LatticeIndex { h0: 1 + self.power_series_rank, h1, stale }
    }

    /// `res_0 f dz = 0` for every basis element.
    pub fn residue_free(&self) -> bool {
        self.basis.iter().all(|b| b.coeff(-1).map_or(false, |c| c.is_zero()))
    }
}

/// `Mult(W) = {f : f W ⊆ W}` by one linear solve per pole order `k ≤ max_pole`:
/// `f · r_{l,i} ∈ W` on `[0, M - k - l)` for `l ≤ K - k - 1`.
pub fn multipliers(w: &ComplementSubalgebra, max_pole: usize) -> Result<MultiplierLattice> {
    let (depth, m) = (w.depth() as i64, w.tail_prec() as i64);
    let d = w.lie().dim();
    let mp = max_pole as i64;
    if mp >= depth || m - mp < 2 {
        return Err(Error::window("multipliers", [mp + 1 - depth, 2 - (m - mp), 0]));
    }
    let mut found = MultiplierLattice::from_parts(vec![Series::one(m)], vec![0], max_pole, Vec::new(), 0);
    let mut statuses = Vec::new();
    let mut power_series_rank = 0;
    for k in 0..=mp {
        let eq = |f: &Series| -> Result<Vec<Q>> {
            let mut out = Vec::new();
            for l in 0..(depth - k.max(1)) {
                let window = m - k - l;
                for i in 0..d {
                    let v = w.element(l as usize, i).scalar_mul(f).truncate(window);
                    let (_, rest) = w.residual(&v)?;
                    for e in 0..window {
                        let c = rest.coeff(e).expect("residual window");
                        out.extend(c.data.iter().cloned());
                    }
                }
            }
            Ok(out)
        };
        let j_max = m - k;
        let fprec = m + depth + 2;
        if k == 0 {
            // Power-series multipliers without constant term.
            let unknowns: Vec<i64> = (1..=j_max).collect();
            let cols: Vec<Vec<Q>> = unknowns.iter().map(|&j| eq(&monomial(j, fprec))).collect::<Result<_>>()?;
            let mut mat = Matrix::zeros((cols.first().map_or(0, |c| c.len()), unknowns.len()));
            for (c, col) in cols.iter().enumerate() {
                for (r, v) in col.iter().enumerate() {
                    mat.set(r, c, v.clone());
                }
            }
            power_series_rank = unknowns.len() - mat.rank();
            continue;
        }
        let unknowns: Vec<i64> = (1..k)
            .filter(|j| !found.orders.contains(&(*j as usize)))
            .map(|j| -j)
            .chain(1..=j_max)
            .collect();
        let (f, status) = solve_monic(k as usize, &unknowns, fprec, &eq)?;
        if let Some(f) = f {
            found.insert(f.truncate(j_max + 1));
        }
        statuses.push((k as usize, status));
    }
    Ok(MultiplierLattice::from_parts(found.basis, found.orders, max_pole, statuses, power_series_rank))
}

/// `(h0, h1)` of a complementary subalgebra from the rank of its principal parts.
pub fn subalgebra_index(w: &ComplementSubalgebra) -> LatticeIndex {
    let d = w.lie().dim();
    let n = w.depth() * d;
    let mut rows = Vec::with_capacity(n);
    for k in 0..w.depth() {
        for i in 0..d {
            let e = w.element(k, i);
            let mut row = Vec::with_capacity(n);
            for kk in 0..w.depth() {
                row.extend(e.at(-(kk as i64) - 1).data.iter().cloned());
            }
            rows.push(row);
        }
    }
    let rank = if n == 0 { 0 } else { Matrix::from_rows(&rows).rank() };
    LatticeIndex { h0: n - rank, h1: n - rank, stale: w.depth() == 0 }
}

/// `k[u', u' u]` for `u` with a simple pole.
pub fn skew_lattice(u: &Series, max_pole: usize) -> Result<MultiplierLattice> {
    if u.valuation() != Some(-1) {
        return Err(Error::InvalidGenerator("u must have a simple pole".into()));
    }
    let f = u.derive();
    let g = f.mul(u);
    MultiplierLattice::from_generators(&[f, g], max_pole)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Weierstrass {
    pub a: Q,
    pub b: Q,
    pub f: Series,
    pub g: Series,
    /// The relation `g^2 = f^3 + a f + b` holds on `[-6, certified)`.
    pub certified: i64,
}

impl Weierstrass {
    pub fn discriminant(&self) -> Q {
        q(4) * &self.a * &self.a * &self.a + q(27) * &self.b * &self.b
    }
}

fn scalar(c: &Q, prec: i64) -> Series {
    Series::one(prec).scale(c)
}

/// Normalize elements of pole orders 2 and 3 to `g^2 = f^3 + a f + b`; the relation must hold
/// on a window of at least `window` exponents starting at `z^{-6}`.
pub fn weierstrass_reduce(f: &Series, g: &Series, window: usize) -> Result<Weierstrass> {
    if f.valuation() != Some(-2) || g.valuation() != Some(-3) {
        return Err(Error::InvalidGenerator("need pole orders 2 and 3".into()));
    }
    let ff = f.scale(&f.at(-2).recip());
    let gg = g.scale(&g.at(-3).recip());
    let lhs = gg.mul(&gg).sub(&ff.mul(&ff).mul(&ff));
    let needed = window as i64 - 6;
    if lhs.prec() < needed {
        return Err(Error::window("Weierstrass relation", [needed - lhs.prec(), 0, 0]));
    }
    // Reduce g^2 - f^3 against f g, f^2, g, f, 1.
    let basis = [(5, ff.mul(&gg)), (4, ff.mul(&ff)), (3, gg.clone()), (2, ff.clone())];
    let mut rest = lhs;
    let mut c = [Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::zero()];
    for (n, b) in &basis {
        let e = rest.at(-(*n as i64)).clone();
        rest = rest.sub(&b.scale(&e));
        c[*n] = e;
    }
    if !rest.at(-1).is_zero() {
        return Err(Error::NotGenusOne("relation has a z^-1 term".into()));
    }
    c[0] = rest.at(0).clone();
    rest = rest.sub(&scalar(&c[0], rest.prec()));
    if let Some(v) = rest.valuation() {
        return Err(Error::NotGenusOne(format!("relation residual at z^{v}")));
    }
    // g^2 + a1 f g + a3 g = f^3 + a2 f^2 + a4 f + a6
    let (a1, a3, a2, a4, a6) = (-c[5].clone(), -c[3].clone(), c[4].clone(), c[2].clone(), c[0].clone());
    let b2 = &a1 * &a1 + q(4) * &a2;
    let b4 = &a1 * &a3 + q(2) * &a4;
    let b6 = &a3 * &a3 + q(4) * &a6;
    let a = -(&b2 * &b2) / q(48) + &b4 / q(2);
    let b = &b2 * &b2 * &b2 / q(864) - &b2 * &b4 / q(24) + &b6 / q(4);
    let f_new = ff.add(&scalar(&(&b2 / q(12)), ff.prec()));
    let g_new = gg.add(&ff.scale(&(&a1 / q(2)))).add(&scalar(&(&a3 / q(2)), gg.prec()));
    let check = g_new
        .mul(&g_new)
        .sub(&f_new.mul(&f_new).mul(&f_new))
        .sub(&f_new.scale(&a))
        .sub(&scalar(&b, f_new.prec()));
    if let Some(v) = check.valuation() {
        return Err(Error::NotGenusOne(format!("normalized relation fails at z^{v}")));
    }
    Ok(Weierstrass { a, b, f: f_new, g: g_new, certified: check.prec() })
}

/// Laurent expansion of `℘` with invariants `g2, g3` on `[-2, prec)`.
pub fn wp_series(g2: &Q, g3: &Q, prec: i64) -> Series {
    assert!(prec >= 2, "℘ needs a window beyond z^0");
    // c_k is the coefficient of z^{2k-2}.
    let kmax = ((prec + 1) / 2) as usize;
    let mut c = vec![Q::zero(); kmax.max(4) + 1];
    c[2] = g2 / q(20);
    c[3] = g3 / q(28);
    for k in 4..=kmax {
        let mut s = Q::zero();
        for m in 2..=k - 2 {
            s += &c[m] * &c[k - m];
        }
        c[k] = s * q(3) / q(((2 * k + 1) * (k - 3)) as i64);
    }
    let mut coeffs = vec![Q::zero(); (prec + 2) as usize];
    coeffs[0] = Q::one();
    for (k, ck) in c.iter().enumerate().skip(2) {
        let e = 2 * k as i64 - 2;
        if e < prec {
            coeffs[(e + 2) as usize] = ck.clone();
        }
    }
    Series::scalar(-2, prec, coeffs)
}

/// `Q[℘, ℘'/2]` up to `max_pole`.
pub fn wp_lattice(g2: &Q, g3: &Q, prec: i64, max_pole: usize) -> Result<(MultiplierLattice, Series, Series)> {
    let p = wp_series(g2, g3, prec);
    let dp = p.derive().scale(&qf(1, 2));
    let o = MultiplierLattice::from_generators(&[p.clone(), dp.clone()], max_pole)?;
    Ok((o, p, dp))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicKind {
    Elliptic,
    Nodal,
    Cuspidal,
    RationalSmooth,
    Undetermined,
}

impl CubicKind {
    pub fn name(self) -> &'static str {
        match self {
            CubicKind::Elliptic => "Elliptic",
            CubicKind::Nodal => "Nodal",
            CubicKind::Cuspidal => "Cuspidal",
            CubicKind::RationalSmooth => "RationalSmooth",
            CubicKind::Undetermined => "Undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicClass {
    pub kind: CubicKind,
    pub a: Option<Q>,
    pub b: Option<Q>,
    pub discriminant: Option<Q>,
    /// Exponent window `[-6, certified)` of the cubic relation.
    pub certified: Option<i64>,
    pub note: String,
}

impl CubicClass {
    fn undetermined(note: String) -> Self {
        CubicClass { kind: CubicKind::Undetermined, a: None, b: None, discriminant: None, certified: None, note }
    }
}

pub fn classify_lattice(o: &MultiplierLattice, window: usize) -> CubicClass {
    let idx = o.index();
    if idx.stale {
        return CubicClass::undetermined(format!("pole orders undecided up to {}", o.max_pole()));
    }
    if idx.h0 != 1 {
        return CubicClass::undetermined(format!("h0 = {} on the window", idx.h0));
    }
    match idx.h1 {
        0 if o.element_of_order(1).is_some() => CubicClass {
            kind: CubicKind::RationalSmooth,
            a: None,
            b: None,
            discriminant: None,
            certified: Some(o.prec()),
            note: "element of pole order 1".into(),
        },
        1 => {
            let (Some(f), Some(g)) = (o.element_of_order(2), o.element_of_order(3)) else {
                return CubicClass::undetermined("h1 = 1 without elements of order 2 and 3".into());
            };
            match weierstrass_reduce(f, g, window) {
                Ok(w) => {
                    let disc = w.discriminant();
                    let kind = if !disc.is_zero() {
                        CubicKind::Elliptic
                    } else if w.a.is_zero() && w.b.is_zero() {
                        CubicKind::Cuspidal
                    } else {
                        CubicKind::Nodal
                    };
                    CubicClass { kind, a: Some(w.a), b: Some(w.b), discriminant: Some(disc), certified: Some(w.certified), note: String::new() }
                }
                Err(e) => CubicClass::undetermined(format!("{e}")),
            }
        }
        h1 => CubicClass::undetermined(format!("h1 = {h1}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Skew input with a multiplier of pole order 1, classified through `k[u', u'u]`.
    SkewSimplePole,
    /// Skew input whose multiplier lattice has `h1 = 1`.
    SkewGenusOne,
    /// Non-skew input: only the rational case is decided.
    NonSkew,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub class: CubicClass,
    pub skew: bool,
    pub branch: Branch,
    pub multiplier_orders: Vec<usize>,
    pub index: LatticeIndex,
    pub closure: ClosureCertificate,
    pub window: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub max_pole: usize,
    pub window: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { max_pole: 3, window: 14 }
    }
}

pub fn classify_rmatrix(r: &RMatrixSeries, opts: ClassifyOptions) -> Result<Classification> {
    let w = ComplementSubalgebra::extract(r)?;
    let mult = multipliers(&w, opts.max_pole)?;
    let skew = r.is_skew().skew;
    let index = mult.index();
    let closure = mult.closure().clone();
    let orders = mult.orders().to_vec();
    let simple = mult.element_of_order(1).cloned();
    let (branch, class) = match (skew, simple) {
        (true, Some(u)) => {
            let o = skew_lattice(&u, 2 * opts.max_pole)?;
            let mut class = classify_lattice(&o, opts.window);
            if !o.residue_free() {
                class = CubicClass::undetermined("skew lattice has residues".into());
            }
            (Branch::SkewSimplePole, class)
        }
        (true, None) => (Branch::SkewGenusOne, classify_lattice(&mult, opts.window)),
        (false, Some(_)) if !index.stale => (
            Branch::NonSkew,
            CubicClass {
                kind: CubicKind::RationalSmooth,
                a: None,
                b: None,
                discriminant: None,
                certified: Some(mult.prec()),
                note: "multiplier of pole order 1".into(),
            },
        ),
        (false, _) => (Branch::NonSkew, CubicClass::undetermined(format!("no multiplier of pole order 1 up to {}", opts.max_pole))),
    };
    Ok(Classification { class, skew, branch, multiplier_orders: orders, index, closure, window: opts.window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::sync::Arc;
    use crate::lie::LieAlgebra;

    fn z(n: i64, prec: i64) -> Series {
        monomial(n, prec)
    }

    #[test]
    fn wp_recursion_satisfies_its_equation() {
        for (g2, g3) in [(q(4), q(0)), (q(0), q(4)), (qf(3, 2), q(-5))] {
            let p = wp_series(&g2, &g3, 16);
            assert_eq!(p.at(-2), &q(1));
            assert_eq!(p.at(2), &(&g2 / q(20)));
            assert_eq!(p.at(4), &(&g3 / q(28)));
            let dp = p.derive();
            let res = dp.mul(&dp).sub(&p.mul(&p).mul(&p).scale(&q(4))).add(&p.scale(&g2)).add(&scalar(&g3, 16));
            assert!(res.is_zero() && res.prec() == 12, "{res:?}");
        }
    }

    #[test]
    fn weierstrass_values() {
        let w = weierstrass_reduce(&z(-2, 20), &z(-3, 20).neg(), 14).unwrap();
        assert_eq!((w.a.clone(), w.b.clone()), (q(0), q(0)));
        let p = wp_series(&q(4), &q(0), 20);
        let w = weierstrass_reduce(&p, &p.derive().scale(&qf(1, 2)), 14).unwrap();
        assert_eq!((w.a.clone(), w.b.clone(), w.discriminant()), (q(-1), q(0), q(-4)));
        let p = wp_series(&q(0), &q(4), 20);
        let w = weierstrass_reduce(&p, &p.derive().scale(&qf(1, 2)), 14).unwrap();
        assert_eq!((w.a, w.b), (q(0), q(-1)));
        assert!(matches!(weierstrass_reduce(&p.truncate(8), &p.derive().truncate(8), 14), Err(Error::WindowTooNarrow { .. })));
    }

    #[test]
    fn generated_lattice_indices() {
        let o = MultiplierLattice::from_generators(&[z(-2, 12), z(-3, 12)], 8).unwrap();
        assert_eq!(o.orders(), &[0, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(o.index(), LatticeIndex { h0: 1, h1: 1, stale: false });
        assert!(o.closure().closed);
        let o = MultiplierLattice::from_generators(&[z(-1, 12)], 5).unwrap();
        assert_eq!(o.index(), LatticeIndex { h0: 1, h1: 0, stale: false });
        let o = MultiplierLattice::from_generators(&[z(-3, 12)], 5).unwrap();
        assert!(o.index().stale);
    }

    #[test]
    fn skew_lattice_of_simple_pole() {
        let o = skew_lattice(&z(-1, 16), 6).unwrap();
        assert_eq!(o.element_of_order(2).unwrap().first_difference(&z(-2, 20)), None);
        let shifted = skew_lattice(&z(-1, 16).add(&Series::one(16)), 6).unwrap();
        assert_eq!(shifted.orders(), o.orders());
        assert_eq!(shifted.index(), o.index());
        assert!(o.residue_free());
        assert!(matches!(skew_lattice(&Series::expm1(8), 6), Err(Error::InvalidGenerator(_))));
        let c = classify_lattice(&o, 14);
        assert_eq!(c.kind, CubicKind::Cuspidal);
    }

    #[test]
    fn elliptic_lattice_classifies() {
        let (o, _, _) = wp_lattice(&q(4), &q(0), 24, 8).unwrap();
        assert_eq!(o.index(), LatticeIndex { h0: 1, h1: 1, stale: false });
        let c = classify_lattice(&o, 14);
        assert_eq!((c.kind, c.a.clone(), c.b.clone()), (CubicKind::Elliptic, Some(q(-1)), Some(q(0))));
        let m = o.self_multipliers(4).unwrap();
        assert_eq!(m.orders(), &[0, 2, 3, 4]);
    }

    #[test]
    fn yang_multipliers() {
        let lie = Arc::new(LieAlgebra::sl(2).unwrap());
        let w = ComplementSubalgebra::yang(lie.clone(), 5, 10);
        let m = multipliers(&w, 3).unwrap();
        assert_eq!(m.orders(), &[0, 1, 2, 3]);
        assert_eq!(m.element_of_order(1).unwrap(), &z(-1, 10));
        assert!(m.closure().closed);
        assert_eq!(m.index(), LatticeIndex { h0: 1, h1: 0, stale: false });
        assert_eq!(subalgebra_index(&w), LatticeIndex { h0: 0, h1: 0, stale: false });
        let r = RMatrixSeries::yang(lie, 13, 5);
        let c = classify_rmatrix(&r, ClassifyOptions::default()).unwrap();
        assert_eq!(c.class.kind, CubicKind::Cuspidal, "{c:?}");
    }

    #[test]
    fn trigonometric_is_nodal() {
        let lie = Arc::new(LieAlgebra::sl(2).unwrap());
        let r = fixtures::trigonometric(&lie, &fixtures::trigonometric_constant(), 13, 5).unwrap();
        assert!(r.is_skew().skew);
        let c = classify_rmatrix(&r, ClassifyOptions::default()).unwrap();
        assert_eq!(c.class.kind, CubicKind::Nodal, "{c:?}");
    }

    #[test]
    fn skrypnyk_is_rational() {
        let sk = fixtures::skrypnyk(&[q(1), q(2), q(3)], 13, 5).unwrap();
        let c = classify_rmatrix(&sk.r, ClassifyOptions::default()).unwrap();
        assert_eq!(c.class.kind, CubicKind::RationalSmooth, "{c:?}");
        assert_eq!(c.branch, Branch::NonSkew);
    }
}
