//! Complementary subalgebras `W ⊂ g((z))` with `g((z)) = g[[z]] ⊕ W`, presented by their tail
//! map: `W` is spanned by `r_{k,i}(z) = b_i z^{-k-1} + tail(k, i)` with `tail(k, i) ∈ g[[z]]`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::grid::Grid;
use crate::lie::LieAlgebra;
use crate::linalg::{Coeff, Matrix, Tensor2, Vector, Q};
use crate::rmatrix::RMatrixSeries;
use crate::series::{Laurent, MatSeries, Series, VecSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplementSubalgebra {
    lie: Arc<LieAlgebra>,
    depth: usize,
    tail_prec: usize,
    /// `tails[k * d + i]`, power series known below `tail_prec`.
    tails: Vec<VecSeries>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    /// Residual checked on `[0, window)`.
    pub window: i64,
    pub first_residual: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub closed: bool,
    pub order: usize,
    pub verified_pairs: usize,
    /// Pairs whose bracket is too deep or too short for the available window.
    pub unverified_pairs: usize,
    /// `((k, i), (l, j), exponent)` of the first bracket that leaves `W`.
    pub witness: Option<((usize, usize), (usize, usize), i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorFailure {
    /// Leading coefficients at this depth do not span `g`.
    RankDeficit { depth: usize, rank: usize },
    /// A generated element at this depth is not in `W`.
    NotMember { depth: usize, exponent: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorsReport {
    pub generated: bool,
    pub depth: usize,
    pub order: usize,
    pub failure: Option<GeneratorFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    /// `κ0(W, W̄) = 0` on the window.
    pub orthogonal: bool,
    /// `κ0(W, W) = 0` on the window.
    pub self_orthogonal: bool,
    /// `W = W̄` as tail maps on the common window.
    pub tails_coincide: bool,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobracketReport {
    pub membership: bool,
    pub cocycle: bool,
    pub dual_bracket: bool,
    pub depth: usize,
    pub first_failure: Option<String>,
}

impl CobracketReport {
    pub fn passes(&self) -> bool {
        self.membership && self.cocycle && self.dual_bracket
    }
}

impl ComplementSubalgebra {
    pub fn new(lie: Arc<LieAlgebra>, depth: usize, tail_prec: usize, tails: Vec<VecSeries>) -> Result<Self> {
        let d = lie.dim();
        if tails.len() != depth * d {
            return Err(Error::DimensionMismatch(format!("expected {} tails, got {}", depth * d, tails.len())));
        }
        for t in &tails {
            if t.shape() != d || t.lo() < 0 || t.prec() < tail_prec as i64 {
                return Err(Error::InvalidInput("tails must be g-valued power series known to tail_prec".into()));
            }
        }
        let tails = tails.into_iter().map(|t| t.truncate(tail_prec as i64)).collect();
        Ok(ComplementSubalgebra { lie, depth, tail_prec, tails })
    }

    /// `z^{-1} g[z^{-1}]`.
    pub fn yang(lie: Arc<LieAlgebra>, depth: usize, tail_prec: usize) -> Self {
        let d = lie.dim();
        let tails = (0..depth * d).map(|_| VecSeries::zero(d, tail_prec as i64)).collect();
        ComplementSubalgebra { lie, depth, tail_prec, tails }
    }

    pub fn lie(&self) -> &Arc<LieAlgebra> {
        &self.lie
    }
    pub fn depth(&self) -> usize {
        self.depth
    }
    pub fn tail_prec(&self) -> usize {
        self.tail_prec
    }
    pub fn tail(&self, k: usize, i: usize) -> &VecSeries {
        &self.tails[k * self.lie.dim() + i]
    }

    pub fn truncate(&self, depth: usize, tail_prec: usize) -> Self {
        let (depth, tail_prec) = (depth.min(self.depth), tail_prec.min(self.tail_prec));
        let d = self.lie.dim();
        let tails = self.tails[..depth * d].iter().map(|t| t.truncate(tail_prec as i64)).collect();
        ComplementSubalgebra { lie: self.lie.clone(), depth, tail_prec, tails }
    }

    /// `r_{k,i}(z) = b_i z^{-k-1} + tail(k, i)`.
    pub fn element(&self, k: usize, i: usize) -> VecSeries {
        let d = self.lie.dim();
        let pole = VecSeries::monomial(Vector::unit(d, i), -(k as i64) - 1, self.tail_prec as i64);
        pole.add(self.tail(k, i))
    }

    /// First `(k, i, exponent)` where two tail maps differ on their common window.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, i64)> {
        let d = self.lie.dim();
        for k in 0..self.depth.min(other.depth) {
            for i in 0..d {
                let prec = self.tail_prec.min(other.tail_prec) as i64;
                let (a, b) = (self.tail(k, i).truncate(prec), other.tail(k, i).truncate(prec));
                if let Some(m) = a.first_difference(&b) {
                    return Some((k, i, m));
                }
            }
        }
        None
    }

    /// Tail map of `r` (after dividing by `λ(y)`): `tail(k, i)_m = Σ_q (r0_{m,k})_{pq} κ(b_q, b_i)`.
    pub fn extract(r: &RMatrixSeries) -> Result<Self> {
        let r = r.divide_lambda()?;
        let lie = r.lie().clone();
        let d = lie.dim();
        let (nx, ny) = (r.nx(), r.ny());
        if nx == 0 || ny == 0 {
            return Err(Error::window("extract", [1 - nx as i64, 1 - ny as i64, 0]));
        }
        let mut tails = Vec::with_capacity(ny * d);
        for k in 0..ny {
            for i in 0..d {
                let coeffs = (0..nx).map(|m| RMatrixSeries::second_leg_contract(&lie, r.r0().at(m, k), i)).collect();
                tails.push(VecSeries::new(d, 0, nx as i64, coeffs));
            }
        }
        Ok(ComplementSubalgebra { lie, depth: ny, tail_prec: nx, tails })
    }

    /// The normalized r-matrix `Σ r_{k,i}(x) ⊗ b^i y^k` with `b^i = Σ_j (κ^{-1})_{ij} b_j`.
    pub fn reconstruct(&self) -> RMatrixSeries {
        let d = self.lie.dim();
        let dual = self.lie.dual_change();
        let r0 = Grid::from_fn(d, self.tail_prec, self.depth, |m, k| {
            let mut t = Tensor2::zeros(d);
            for i in 0..d {
                let v = self.tail(k, i).at(m as i64);
                for p in 0..d {
                    if v.data[p].is_zero() {
                        continue;
                    }
                    for q in 0..d {
                        let b = dual.get(i, q);
                        if !b.is_zero() {
                            *t.get_mut(p, q) += &v.data[p] * b;
                        }
                    }
                }
            }
            t
        });
        let lambda = Series::one((self.tail_prec + self.depth) as i64);
        RMatrixSeries::new(self.lie.clone(), lambda, r0).expect("reconstructed r-matrix is in standard form")
    }

    /// Principal part coefficients `c_{k,i}` of `v` and `v - Σ c_{k,i} r_{k,i}` on `[0, window)`.
    pub fn residual(&self, v: &VecSeries) -> Result<(Vec<(usize, usize, Q)>, VecSeries)> {
        let d = self.lie.dim();
        if v.shape() != d {
            return Err(Error::DimensionMismatch("membership test vector".into()));
        }
        let pole = (-v.lo()).max(0);
        if pole > self.depth as i64 {
            return Err(Error::window("membership depth", [pole - self.depth as i64, 0, 0]));
        }
        if v.prec() <= 0 {
            return Err(Error::window("membership window", [0, 1 - v.prec(), 0]));
        }
        let window = v.prec().min(self.tail_prec as i64);
        let mut rest = v.truncate(window);
        let mut coeffs = Vec::new();
        for k in 0..pole as usize {
            let c = v.at(-(k as i64) - 1);
            for i in 0..d {
                if !c.data[i].is_zero() {
                    coeffs.push((k, i, c.data[i].clone()));
                    rest = rest.sub(&self.element(k, i).scale(&c.data[i]));
                }
            }
        }
        Ok((coeffs, rest))
    }

    pub fn membership(&self, v: &VecSeries) -> Result<MembershipReport> {
        let (_, rest) = self.residual(v)?;
        let first = rest.valuation();
        debug_assert!(first.map_or(true, |m| m >= 0), "principal part must cancel");
        Ok(MembershipReport { member: first.is_none(), window: rest.prec(), first_residual: first })
    }

    /// Brackets `[r_{k,i}, r_{l,j}]` with `k + l + 2 ≤ depth` whose residual is known on `[0, n)`.
    pub fn closure_check(&self, n: usize) -> Result<ClosureReport> {
        if n > self.tail_prec {
            return Err(Error::window("closure order", [0, (n - self.tail_prec) as i64, 0]));
        }
        let d = self.lie.dim();
        let (mut verified, mut unverified) = (0, 0);
        for k in 0..self.depth {
            for l in k..self.depth {
                let fits = k + l + 2 <= self.depth && self.tail_prec >= n + k.max(l) + 1;
                for i in 0..d {
                    let j0 = if k == l { i + 1 } else { 0 };
                    for j in j0..d {
                        if !fits {
                            unverified += 1;
                            continue;
                        }
                        let b = self.bracket(&self.element(k, i), &self.element(l, j));
                        let rep = self.membership(&b.truncate(n as i64))?;
                        verified += 1;
                        if let Some(m) = rep.first_residual {
                            return Ok(ClosureReport {
                                closed: false,
                                order: n,
                                verified_pairs: verified,
                                unverified_pairs: unverified,
                                witness: Some(((k, i), (l, j), m)),
                            });
                        }
                    }
                }
            }
        }
        Ok(ClosureReport { closed: true, order: n, verified_pairs: verified, unverified_pairs: unverified, witness: None })
    }

    pub fn bracket(&self, a: &VecSeries, b: &VecSeries) -> VecSeries {
        let lie = &self.lie;
        VecSeries::mul_with(a, b, lie.dim(), |x, y, out| lie.bracket_acc(x, y, &Q::from_integer(1.into()), out))
    }

    /// Whether `W` is generated by `W ∩ z^{-1} g[[z]]`: at each depth the brackets of the depth-0
    /// basis with the previous depth must have leading coefficients spanning `g` and lie in `W`
    /// on `[0, n)`.
    pub fn generators_check(&self, depth: usize, n: usize) -> Result<GeneratorsReport> {
        let d = self.lie.dim();
        if depth > self.depth {
            return Err(Error::window("generator depth", [(depth - self.depth) as i64, 0, 0]));
        }
        if self.tail_prec < n + depth {
            return Err(Error::window("generator window", [0, (n + depth - self.tail_prec) as i64, 0]));
        }
        let base: Vec<VecSeries> = (0..d).map(|i| self.element(0, i)).collect();
        let mut level = base.clone();
        for k in 1..depth {
            let lead = -(k as i64) - 1;
            let mut chosen: Vec<VecSeries> = Vec::new();
            let mut leads: Vec<Vec<Q>> = Vec::new();
            'outer: for a in &base {
                for b in &level {
                    let c = self.bracket(a, b);
                    let mut rows = leads.clone();
                    rows.push(c.at(lead).data.clone());
                    if Matrix::from_rows(&rows).rank() > leads.len() {
                        leads = rows;
                        chosen.push(c);
                        if chosen.len() == d {
                            break 'outer;
                        }
                    }
                }
            }
            if chosen.len() < d {
                let failure = GeneratorFailure::RankDeficit { depth: k, rank: chosen.len() };
                return Ok(GeneratorsReport { generated: false, depth, order: n, failure: Some(failure) });
            }
            for c in &chosen {
                if let Some(m) = self.membership(&c.truncate(n as i64))?.first_residual {
                    let failure = GeneratorFailure::NotMember { depth: k, exponent: m };
                    return Ok(GeneratorsReport { generated: false, depth, order: n, failure: Some(failure) });
                }
            }
            level = chosen;
        }
        Ok(GeneratorsReport { generated: true, depth, order: n, failure: None })
    }

    /// The members `v'` for every basis element whose derivative stays within the depth.
    pub fn derivative_closure(&self, n: usize) -> Result<MembershipReport> {
        let d = self.lie.dim();
        let mut window = i64::MAX;
        for k in 0..self.depth.saturating_sub(1) {
            for i in 0..d {
                let v = self.element(k, i).derive().truncate(n as i64);
                let rep = self.membership(&v)?;
                window = window.min(rep.window);
                if !rep.member {
                    return Ok(rep);
                }
            }
        }
        Ok(MembershipReport { member: true, window: window.min(n as i64), first_residual: None })
    }

    /// `φ(z) a(w(z))` for every basis element `a`.
    pub fn transported_basis(&self, phi: &MatSeries, w: &Series) -> Result<Vec<VecSeries>> {
        let d = self.lie.dim();
        let mut out = Vec::with_capacity(self.depth * d);
        for k in 0..self.depth {
            for i in 0..d {
                out.push(phi.apply(&self.element(k, i).compose(w)?));
            }
        }
        Ok(out)
    }
}

/// `κ0(s, t) = res_0 κ(s(z), t(z)) dz`.
pub fn residue_pairing(lie: &LieAlgebra, s: &VecSeries, t: &VecSeries) -> Result<Q> {
    let need_s = -1 - t.lo();
    let need_t = -1 - s.lo();
    if s.prec() <= need_s || t.prec() <= need_t {
        return Err(Error::window("residue pairing", [need_s + 1 - s.prec(), need_t + 1 - t.prec(), 0]));
    }
    let mut acc = Q::zero();
    for (a, sa) in s.terms() {
        let b = -1 - a;
        if b < t.lo() {
            break;
        }
        if b >= t.prec() {
            continue;
        }
        acc += lie.killing_form(sa, t.at(b));
    }
    Ok(acc)
}

/// Pairings of `extract(r)` against `extract(r̄)` and against itself.
pub fn orthogonality_check(r: &RMatrixSeries) -> Result<OrthogonalityReport> {
    if !r.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let lie = r.lie().clone();
    let d = lie.dim();
    let w = ComplementSubalgebra::extract(r)?;
    let wbar = ComplementSubalgebra::extract(&r.bar())?;
    let depth = w.depth.min(wbar.depth).min(w.tail_prec).min(wbar.tail_prec);
    if depth == 0 {
        return Err(Error::window("orthogonality", [1, 1, 0]));
    }
    let (mut orthogonal, mut self_orthogonal) = (true, true);
    for k in 0..depth {
        for i in 0..d {
            let a = w.element(k, i);
            for l in 0..depth {
                for j in 0..d {
                    if !residue_pairing(&lie, &a, &wbar.element(l, j))?.is_zero() {
                        orthogonal = false;
                    }
                    if !residue_pairing(&lie, &a, &w.element(l, j))?.is_zero() {
                        self_orthogonal = false;
                    }
                }
            }
        }
    }
    let tails_coincide = w.truncate(depth, depth).first_difference(&wbar.truncate(depth, depth)).is_none();
    Ok(OrthogonalityReport { orthogonal, self_orthogonal, tails_coincide, depth })
}

/// `W = A(z) · z^{-1} g[z^{-1}]` as a tail map, together with `Ā = (A^†)^{-1}`.
pub fn homogeneous_from_a(lie: Arc<LieAlgebra>, a: &MatSeries, depth: usize) -> Result<(ComplementSubalgebra, MatSeries)> {
    let d = lie.dim();
    if a.shape() != (d, d) || a.lo() < 0 {
        return Err(Error::InvalidInput("A must be an End(g)-valued power series".into()));
    }
    let pa = a.prec();
    let tail_prec = pa - depth as i64;
    if tail_prec <= 0 {
        return Err(Error::window("homogeneous tails", [0, 1 - tail_prec, 0]));
    }
    let ainv = a.inverse()?;
    let mut tails = Vec::with_capacity(depth * d);
    for k in 0..depth {
        for i in 0..d {
            let pole = VecSeries::monomial(Vector::unit(d, i), -(k as i64) - 1, pa);
            let p = ainv.apply(&pole);
            let plus = Laurent::new(d, 0, p.prec(), (0..p.prec()).map(|m| p.at(m).clone()).collect());
            tails.push(a.apply(&plus).neg().truncate(tail_prec));
        }
    }
    let adj = a.map((d, d), |m| lie.killing_adjoint(m));
    let abar = adj.inverse()?;
    let w = ComplementSubalgebra { lie, depth, tail_prec: tail_prec as usize, tails };
    Ok((w, abar))
}

/// `(A(x) ⊗ Ā(y)) γ / (x - y)` on caps `(nx, ny)`; needs `nx + ny` terms of `A` and `Ā`.
pub fn homogeneous_formula(lie: Arc<LieAlgebra>, a: &MatSeries, abar: &MatSeries, nx: usize, ny: usize) -> Result<RMatrixSeries> {
    let d = lie.dim();
    let need = (nx + ny) as i64;
    if a.prec() < need || abar.prec() < need {
        return Err(Error::window("homogeneous formula", [need - a.prec(), need - abar.prec(), 0]));
    }
    let gamma = lie.casimir();
    let f = |i: i64, j: i64| -> Tensor2 {
        let mut t = gamma.apply(a.at(i), abar.at(j));
        if i == 0 && j == 0 {
            t.sub_assign(&gamma);
        }
        t
    };
    let r0 = Grid::from_fn(d, nx, ny, |m, k| {
        let mut t = Tensor2::zeros(d);
        for j in 0..=k as i64 {
            t.add_assign(&f(m as i64 + 1 + j, k as i64 - j));
        }
        t
    });
    RMatrixSeries::new(lie, Series::one(need), r0)
}

/// `δ(r_{k,i})(x, y) = [a(x) ⊗ 1 + 1 ⊗ a(y), r(x, y)]`.
pub fn cobracket(r: &RMatrixSeries, w: &ComplementSubalgebra, k: usize, i: usize) -> Expansion {
    r.expansion().act(r.lie(), &w.element(k, i))
}

fn second_leg(t: &Tensor2, j: usize) -> Vector {
    Vector { data: (0..t.dim).map(|p| t.get(p, j).clone()).collect() }
}

/// Whether `x ∈ W ⊗ W`: strip `u_{m,j}(x) ⊗ r_{m,j}(y)` read off from the principal part in `y`,
/// require each `u_{m,j} ∈ W` and a vanishing remainder.
fn in_tensor_square(w: &ComplementSubalgebra, x: &Expansion) -> Result<Option<String>> {
    let d = w.lie.dim();
    let mut rest = x.clone();
    for beta in x.ylo..0 {
        let m = (-beta - 1) as usize;
        let row = x.row(beta).unwrap();
        for j in 0..d {
            let u: VecSeries = row.map(d, |t| second_leg(t, j));
            if u.is_zero() {
                continue;
            }
            let rep = w.membership(&u)?;
            if !rep.member {
                return Ok(Some(format!("u_({m},{j}) not in W at x^{}", rep.first_residual.unwrap())));
            }
            let rmj = w.element(m, j);
            let term_rows: Vec<_> = (x.ylo..rest.yprec())
                .map(|b| {
                    let c = rmj.coeff(b).cloned().unwrap_or_else(|| Vector::zeros(d));
                    u.map(d, |v| Tensor2::outer(v, &c))
                })
                .collect();
            let yprec = rest.yprec().min(rmj.prec());
            let term = Expansion::new(x.ylo, term_rows.into_iter().take((yprec - x.ylo) as usize).collect());
            rest = rest.sub(&term);
        }
    }
    if let Some((m, b)) = rest.first_nonzero() {
        return Ok(Some(format!("remainder at x^{m} y^{b}")));
    }
    Ok(None)
}

/// Membership of `δ(W)` in `W ⊗ W`, the 1-cocycle identity and the dual-bracket identity,
/// for basis elements of depth below `depth`.
pub fn cobracket_check(r: &RMatrixSeries, depth: usize) -> Result<CobracketReport> {
    if !r.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if !r.is_skew().skew {
        return Err(Error::NotSkew);
    }
    let order = r.max_ybe_order();
    if order == 0 || !crate::ybe::is_rmatrix(r, order, 1)?.holds {
        return Err(Error::NotSkew);
    }
    let lie = r.lie().clone();
    let d = lie.dim();
    let w = ComplementSubalgebra::extract(r)?;
    if depth == 0 || depth > w.depth {
        return Err(Error::window("cobracket depth", [depth as i64 - w.depth as i64, 0, 0]));
    }
    let mut report = CobracketReport { membership: true, cocycle: true, dual_bracket: true, depth, first_failure: None };
    let deltas: Vec<Expansion> = (0..depth).flat_map(|k| (0..d).map(move |i| (k, i))).map(|(k, i)| cobracket(r, &w, k, i)).collect();
    let fail = |rep: &mut CobracketReport, msg: String| {
        if rep.first_failure.is_none() {
            rep.first_failure = Some(msg);
        }
    };
    for k in 0..depth {
        for i in 0..d {
            let delta = &deltas[k * d + i];
            if let Some(msg) = in_tensor_square(&w, delta)? {
                report.membership = false;
                fail(&mut report, format!("δ(r_({k},{i})): {msg}"));
            }
            // Coefficient of x^{-a-1} y^{-b-1} paired with b_p ⊗ b_q against κ0(r_{k,i}, [b_p z^a, b_q z^b]).
            for a in 0..=k + 1 {
                for b in 0..=k + 1 - a {
                    let (xa, yb) = (-(a as i64) - 1, -(b as i64) - 1);
                    let x = if yb < delta.ylo {
                        Tensor2::zeros(d)
                    } else if let Some(x) = delta.coeff(xa, yb) {
                        x.clone()
                    } else {
                        report.dual_bracket = false;
                        fail(&mut report, format!("δ(r_({k},{i})) window misses x^{xa} y^{yb}"));
                        continue;
                    };
                    let kx = lie.killing();
                    for p in 0..d {
                        for q in 0..d {
                            let mut lhs = Q::zero();
                            for (s, t, c) in x.nonzeros() {
                                lhs += c * kx.get(s, p) * kx.get(t, q);
                            }
                            let rhs = if a + b == k {
                                let bpq = lie.bracket(&lie.basis_vector(p), &lie.basis_vector(q));
                                lie.killing_form(&lie.basis_vector(i), &bpq)
                            } else {
                                Q::zero()
                            };
                            if lhs != rhs {
                                report.dual_bracket = false;
                                fail(&mut report, format!("dual bracket at r_({k},{i}), (b_{p} z^{a}, b_{q} z^{b})"));
                            }
                        }
                    }
                }
            }
        }
    }
    // δ([a, b]) = a.δ(b) - b.δ(a) with the diagonal action.
    for i in 0..d {
        for j in 0..d {
            let (a, b) = (w.element(0, i), w.element(0, j));
            let lhs = r.expansion().act(&lie, &w.bracket(&a, &b));
            let rhs = deltas[j].act(&lie, &a).sub(&deltas[i].act(&lie, &b));
            if let Some((m, k)) = lhs.first_difference(&rhs) {
                report.cocycle = false;
                fail(&mut report, format!("cocycle at ({i},{j}), x^{m} y^{k}"));
            }
        }
    }
    Ok(report)
}

/// Skewness read off the subalgebra side: `W` equals the subalgebra of `r̄`.
pub fn skew_via_subalgebras(r: &RMatrixSeries) -> Result<bool> {
    let w = ComplementSubalgebra::extract(r)?;
    let wbar = ComplementSubalgebra::extract(&r.bar())?;
    Ok(w.first_difference(&wbar).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::q;
    use crate::ybe::is_generalized_rmatrix;

    fn sl2() -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::sl(2).unwrap())
    }

    #[test]
    fn yang_subalgebra_has_zero_tails() {
        let lie = sl2();
        let w = ComplementSubalgebra::extract(&RMatrixSeries::yang(lie.clone(), 6, 5)).unwrap();
        assert_eq!(w, ComplementSubalgebra::yang(lie.clone(), 5, 6));
        let rescaled = RMatrixSeries::rescaled_yang(lie, &[q(1), q(1)], 6, 5).unwrap();
        assert_eq!(ComplementSubalgebra::extract(&rescaled).unwrap(), w);
        assert_eq!(w.reconstruct(), RMatrixSeries::yang(w.lie().clone(), 6, 5));
    }

    #[test]
    fn membership_of_constants_fails() {
        let lie = sl2();
        let w = ComplementSubalgebra::yang(lie, 3, 4);
        let v = VecSeries::new(3, 0, 4, alloc::vec![Vector::unit(3, 0)]);
        let rep = w.membership(&v).unwrap();
        assert!(!rep.member);
        assert_eq!(rep.first_residual, Some(0));
        assert!(w.membership(&w.element(2, 1).scale(&q(3))).unwrap().member);
    }

    #[test]
    fn residue_pairing_is_dual() {
        let lie = sl2();
        let bi = VecSeries::monomial(Vector::unit(3, 0), -1, 3);
        let dual = lie.dual_change();
        let bj = VecSeries::new(3, 0, 3, alloc::vec![dual.row(0)]);
        assert_eq!(residue_pairing(&lie, &bi, &bj).unwrap(), q(1));
        let short = VecSeries::new(3, 0, 0, alloc::vec![]);
        assert!(matches!(residue_pairing(&lie, &bi, &short), Err(Error::WindowTooNarrow { .. })));
    }

    #[test]
    fn twisted_yang_round_trip_and_closure() {
        let lie = sl2();
        let r = fixtures::gauge_twisted_yang(&lie, &lie.basis_vector(0), &[q(0), q(1)], 8, 6).unwrap();
        let w = ComplementSubalgebra::extract(&r).unwrap();
        assert!(w.reconstruct().agrees_with(&r));
        assert_eq!((r.nx(), r.ny()), (8, 6));
        assert!(w.closure_check(4).unwrap().closed);
        assert!(w.generators_check(3, 4).unwrap().generated);
        let o = orthogonality_check(&r).unwrap();
        assert!(o.orthogonal && o.self_orthogonal && o.tails_coincide);
    }

    #[test]
    fn perturbed_tail_breaks_closure() {
        let lie = sl2();
        let w = ComplementSubalgebra::yang(lie.clone(), 6, 8);
        let mut tails = w.tails.clone();
        tails[1] = VecSeries::new(3, 0, 8, alloc::vec![Vector::unit(3, 0)]);
        let bad = ComplementSubalgebra::new(lie, 6, 8, tails).unwrap();
        let rep = bad.closure_check(4).unwrap();
        assert!(!rep.closed);
        assert!(!is_generalized_rmatrix(&bad.reconstruct(), 3, 1).unwrap().holds);
        assert!(!bad.generators_check(3, 4).unwrap().generated);
    }

    #[test]
    fn skrypnyk_homogeneous_paths_agree() {
        let c = [q(1), q(2), q(3)];
        let sk = fixtures::skrypnyk(&c, 8, 8).unwrap();
        assert!(sk.subalgebra.reconstruct().agrees_with(&sk.r));
        assert!(sk.subalgebra.closure_check(4).unwrap().closed);
        assert!(is_generalized_rmatrix(&sk.r, 4, 2).unwrap().holds);
        assert_ne!(sk.a, sk.abar);
        assert!(!sk.r.is_skew().skew);
        let o = orthogonality_check(&sk.r).unwrap();
        assert!(o.orthogonal && !o.self_orthogonal && !o.tails_coincide);
    }

    #[test]
    fn homogeneous_identity_is_yang() {
        let lie = sl2();
        let id = MatSeries::constant(Matrix::identity(3), 12);
        let (w, abar) = homogeneous_from_a(lie.clone(), &id, 4).unwrap();
        assert_eq!(w, ComplementSubalgebra::yang(lie.clone(), 4, 8));
        assert_eq!(abar, id);
        let phi = lie.exp_ad(&lie.basis_vector(2), 12).unwrap();
        let (w, abar) = homogeneous_from_a(lie.clone(), &phi, 4).unwrap();
        assert_eq!(abar, phi);
        assert!(w.closure_check(3).unwrap().closed);
    }

    #[test]
    fn cobracket_of_yang() {
        let lie = sl2();
        let r = RMatrixSeries::yang(lie, 8, 8);
        let rep = cobracket_check(&r, 2).unwrap();
        assert!(rep.passes(), "{rep:?}");
        let bad = RMatrixSeries::rescaled_yang(r.lie().clone(), &[q(1), q(1)], 8, 8).unwrap();
        assert!(matches!(cobracket_check(&bad, 2), Err(Error::NotNormalized) | Err(Error::NotSkew)));
    }
}
