//! Finite-dimensional Lie algebras given by structure constants, their Killing form and
//! Casimir element.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Coeff, Matrix, Tensor2, Vector, Q};
use crate::series::MatSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    /// `structure[(i * d + j) * d + k]` is the coefficient of `b_k` in `[b_i, b_j]`.
    structure: Vec<Q>,
    /// Sparse view: for each pair `(i, j)`, the nonzero `(k, c)`.
    table: Vec<Vec<(usize, Q)>>,
    killing: Matrix,
    dual_change: Matrix,
    centroid_dim: usize,
}

impl LieAlgebra {
    /// Validate antisymmetry, Jacobi, a nondegenerate Killing form and a one-dimensional
    /// centroid.
    pub fn from_structure_constants(dim: usize, structure: Vec<Q>, names: Vec<String>) -> Result<Self> {
        if structure.len() != dim * dim * dim || names.len() != dim {
            return Err(Error::DimensionMismatch(format!("structure constants for dimension {dim}")));
        }
        let at = |i: usize, j: usize, k: usize| &structure[(i * dim + j) * dim + k];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if *at(i, j, k) != -at(j, i, k).clone() {
                        return Err(Error::NotAntisymmetric(i, j));
                    }
                }
            }
        }
        let table: Vec<Vec<(usize, Q)>> = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let c = &structure[ij * dim + k];
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        let mut lie = LieAlgebra {
            dim,
            names,
            structure,
            table,
            killing: Matrix::zeros((dim, dim)),
            dual_change: Matrix::zeros((dim, dim)),
            centroid_dim: 0,
        };
        lie.check_jacobi()?;
        let ads: Vec<Matrix> = (0..dim).map(|i| lie.ad(&Vector::unit(dim, i))).collect();
        for i in 0..dim {
            for j in 0..dim {
                lie.killing.set(i, j, ads[i].mul(&ads[j]).trace());
            }
        }
        lie.dual_change = lie
            .killing
            .inverse()
            .map_err(|_| Error::NotSimple("degenerate Killing form".into()))?;
        lie.centroid_dim = lie.centroid().len();
        if lie.centroid_dim != 1 {
            return Err(Error::NotSimple(format!("centroid has dimension {}", lie.centroid_dim)));
        }
        Ok(lie)
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (a, b, c) = (Vector::unit(d, i), Vector::unit(d, j), Vector::unit(d, k));
                    let mut s = self.bracket(&a, &self.bracket(&b, &c));
                    s.add_assign(&self.bracket(&b, &self.bracket(&c, &a)));
                    s.add_assign(&self.bracket(&c, &self.bracket(&a, &b)));
                    if !s.vanishes() {
                        return Err(Error::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix Lie algebra spanned by `basis`, with `coords` expressing a matrix of the span
    /// in that basis.
    fn from_matrices(basis: &[Matrix], names: Vec<String>, coords: impl Fn(&Matrix) -> Vector) -> Result<Self> {
        let d = basis.len();
        let mut structure = vec![Q::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                let mut c = basis[i].mul(&basis[j]);
                c.sub_assign(&basis[j].mul(&basis[i]));
                let v = coords(&c);
                for k in 0..d {
                    structure[(i * d + j) * d + k] = v.data[k].clone();
                }
            }
        }
        Self::from_structure_constants(d, structure, names)
    }

    /// `sl(n)`: raising root vectors `E_ij` (i < j), Cartan elements `E_ii - E_{i+1,i+1}`,
    /// then lowering root vectors. For `n = 2` this is `(e, h, f)`.
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("sl(n) needs n >= 2".into()));
        }
        let unit = |i: usize, j: usize| {
            let mut m = Matrix::zeros((n, n));
            m.set(i, j, Q::one());
            m
        };
        let mut basis = Vec::new();
        let mut names = Vec::new();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                upper.push((i, j));
                lower.push((j, i));
            }
        }
        let named = |(i, j): (usize, usize)| {
            if n == 2 {
                String::from(if i < j { "e" } else { "f" })
            } else {
                format!("E{}{}", i + 1, j + 1)
            }
        };
        for &p in &upper {
            basis.push(unit(p.0, p.1));
            names.push(named(p));
        }
        for k in 0..n - 1 {
            let mut h = unit(k, k);
            h.set(k + 1, k + 1, -Q::one());
            basis.push(h);
            names.push(if n == 2 { String::from("h") } else { format!("H{}", k + 1) });
        }
        for &p in &lower {
            basis.push(unit(p.0, p.1));
            names.push(named(p));
        }
        let npairs = upper.len();
        Self::from_matrices(&basis, names, |m| {
            let mut v = Vector::zeros(n * n - 1);
            for (idx, &(i, j)) in upper.iter().enumerate() {
                v.data[idx] = m.get(i, j).clone();
            }
            let mut acc = Q::zero();
            for k in 0..n - 1 {
                acc += m.get(k, k);
                v.data[npairs + k] = acc.clone();
            }
            for (idx, &(i, j)) in lower.iter().enumerate() {
                v.data[npairs + n - 1 + idx] = m.get(i, j).clone();
            }
            v
        })
    }

    /// `so(n)` with basis `X_ij = E_ij - E_ji`, `i < j`, in lexicographic order.
    pub fn so(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput("so(n) needs n >= 3".into()));
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let basis: Vec<Matrix> = pairs
            .iter()
            .map(|&(i, j)| {
                let mut m = Matrix::zeros((n, n));
                m.set(i, j, Q::one());
                m.set(j, i, -Q::one());
                m
            })
            .collect();
        let names = pairs.iter().map(|&(i, j)| format!("X{}{}", i + 1, j + 1)).collect();
        Self::from_matrices(&basis, names, |m| Vector { data: pairs.iter().map(|&(i, j)| m.get(i, j).clone()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }
    /// Nonzero `(k, c_ij^k)`.
    pub fn bracket_terms(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i * self.dim + j]
    }
    pub fn killing(&self) -> &Matrix {
        &self.killing
    }
    /// Inverse Killing matrix; row `i` holds the coordinates of the dual basis vector `b^i`.
    pub fn dual_change(&self) -> &Matrix {
        &self.dual_change
    }
    pub fn centroid_dim(&self) -> usize {
        self.centroid_dim
    }

    pub fn bracket(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        self.bracket_acc(a, b, &Q::one(), &mut out);
        out
    }

    /// `out += s [a, b]`
    pub fn bracket_acc(&self, a: &Vector, b: &Vector, s: &Q, out: &mut Vector) {
        let d = self.dim;
        for (i, x) in a.data.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let sx = s * x;
            for (j, y) in b.data.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = &sx * y;
                for (k, c) in &self.table[i * d + j] {
                    out.data[*k] += c * &xy;
                }
            }
        }
    }

    pub fn ad(&self, a: &Vector) -> Matrix {
        let d = self.dim;
        let mut m = Matrix::zeros((d, d));
        for j in 0..d {
            let col = self.bracket(a, &Vector::unit(d, j));
            for i in 0..d {
                m.set(i, j, col.data[i].clone());
            }
        }
        m
    }

    pub fn killing_form(&self, a: &Vector, b: &Vector) -> Q {
        self.killing.mul_vec(b).dot(a)
    }

    /// `Σ b_i ⊗ b^i`; as a tensor its entries are the inverse Killing matrix.
    pub fn casimir(&self) -> Tensor2 {
        Tensor2::from_matrix(&self.dual_change)
    }

    /// `Σ_{ij} t_ij [b_i, b_j]`
    pub fn bracket_image(&self, t: &Tensor2) -> Vector {
        let d = self.dim;
        let mut out = Vector::zeros(d);
        for (i, j, c) in t.nonzeros() {
            for (k, s) in &self.table[i * d + j] {
                out.data[*k] += s * c;
            }
        }
        out
    }

    /// `Σ_{ij} t_ij κ(b_i, b_j)`
    pub fn killing_contract(&self, t: &Tensor2) -> Q {
        t.nonzeros().into_iter().fold(Q::zero(), |acc, (i, j, c)| acc + c * self.killing.get(i, j))
    }

    /// `Σ_{ij} t_ij ad(b_i) ad(b_j)`
    pub fn multiplication_image(&self, t: &Tensor2) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zeros((d, d));
        for (i, j, c) in t.nonzeros() {
            let ai = self.ad(&Vector::unit(d, i));
            let aj = self.ad(&Vector::unit(d, j));
            ai.mul_acc(&aj, c, &mut out);
        }
        out
    }

    /// `[a ⊗ 1 + 1 ⊗ a, t]`
    pub fn adjoint_tensor(&self, a: &Vector, t: &Tensor2) -> Tensor2 {
        let ad = self.ad(a);
        let tm = t.as_matrix();
        let mut out = ad.mul(&tm);
        out.add_assign(&tm.mul(&ad.transpose()));
        Tensor2::from_matrix(&out)
    }

    /// Basis of `{T : T[a, b] = [a, T b]}`.
    pub fn centroid(&self) -> Vec<Matrix> {
        let d = self.dim;
        // unknown T_{pq} at column p * d + q; equation per (a, b, component r)
        let mut eqs = Matrix::zeros((d * d * d, d * d));
        for a in 0..d {
            for b in 0..d {
                for r in 0..d {
                    let row = (a * d + b) * d + r;
                    // (T[b_a, b_b])_r = Σ_k c_ab^k T_rk
                    for (k, c) in &self.table[a * d + b] {
                        *eqs.get_mut(row, r * d + k) += c;
                    }
                    // [b_a, T b_b]_r = Σ_p T_pb c_ap^r
                    for p in 0..d {
                        let c = self.structure_constant(a, p, r);
                        if !c.is_zero() {
                            *eqs.get_mut(row, p * d + b) -= c;
                        }
                    }
                }
            }
        }
        eqs.nullspace()
            .into_iter()
            .map(|v| Matrix { rows: d, cols: d, data: v.data })
            .collect()
    }

    /// Same algebra written in the basis `b'_i = Σ_j p_ij b_j` (rows of `p`).
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra> {
        let d = self.dim;
        let pinv = p.inverse()?;
        let mut structure = vec![Q::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                let c = self.bracket(&p.row(i), &p.row(j));
                // c = Σ_k y_k b'_k = Σ_k y_k p_k. ⇒ y = c^t p^{-1}
                let y = pinv.transpose().mul_vec(&c);
                for k in 0..d {
                    structure[(i * d + j) * d + k] = y.data[k].clone();
                }
            }
        }
        let names = (0..d).map(|i| format!("b{i}")).collect();
        LieAlgebra::from_structure_constants(d, structure, names)
    }

    /// Check that `φ` is a Lie algebra automorphism of `g[[z]]` modulo `z^n`.
    pub fn is_automorphism_series(&self, phi: &MatSeries, n: i64) -> Result<AutomorphismReport> {
        let d = self.dim;
        if phi.shape() != (d, d) {
            return Err(Error::DimensionMismatch("automorphism series shape".into()));
        }
        if phi.lo() < 0 {
            return Err(Error::NotAnAutomorphism("series has poles".into()));
        }
        if n > phi.prec() {
            return Err(Error::window("automorphism check", [n - phi.prec(), 0, 0]));
        }
        let phi0 = phi.coeff(0).ok_or(Error::window("automorphism check", [1, 0, 0]))?;
        if phi0.inverse().is_err() {
            return Ok(AutomorphismReport { holds: false, order: n, first_failure: Some(0) });
        }
        for k in 0..n {
            for i in 0..d {
                for j in i + 1..d {
                    let bij = self.bracket(&Vector::unit(d, i), &Vector::unit(d, j));
                    let mut lhs = phi.at(k).mul_vec(&bij);
                    for a in 0..=k {
                        let x = phi.at(a).column(i);
                        let y = phi.at(k - a).column(j);
                        self.bracket_acc(&x, &y, &-Q::one(), &mut lhs);
                    }
                    if !lhs.vanishes() {
                        return Ok(AutomorphismReport { holds: false, order: n, first_failure: Some(k) });
                    }
                }
            }
        }
        Ok(AutomorphismReport { holds: true, order: n, first_failure: None })
    }

    /// `exp(z · ad x)` known to `prec`.
    pub fn exp_ad(&self, x: &Vector, prec: i64) -> Result<MatSeries> {
        MatSeries::monomial(self.ad(x), 1, prec).exp()
    }

    /// `exp(p(z) ad x)` for a polynomial `p` without constant term.
    pub fn exp_ad_poly(&self, x: &Vector, p: &[Q], prec: i64) -> Result<MatSeries> {
        let ad = self.ad(x);
        let coeffs: Vec<Matrix> = p.iter().map(|c| ad.scale(c)).collect();
        let n = (coeffs.len() as i64).min(prec);
        MatSeries::new((self.dim, self.dim), 0, prec, coeffs[..n as usize].to_vec()).exp()
    }

    /// κ-adjoint: `κ(A a, b) = κ(a, A^† b)`.
    pub fn killing_adjoint(&self, a: &Matrix) -> Matrix {
        self.dual_change.mul(&a.transpose()).mul(&self.killing)
    }

    pub fn element(&self, coords: &[i64]) -> Vector {
        assert_eq!(coords.len(), self.dim);
        Vector::from_ints(coords)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.dim, i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismReport {
    pub holds: bool,
    pub order: i64,
    pub first_failure: Option<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn sl2_killing_values() {
        let g = LieAlgebra::sl(2).unwrap();
        let (e, h, f) = (g.basis_vector(0), g.basis_vector(1), g.basis_vector(2));
        assert_eq!(g.killing_form(&h, &h), q(8));
        assert_eq!(g.killing_form(&e, &f), q(4));
        assert_eq!(g.killing_form(&e, &e), q(0));
        assert_eq!(g.killing_form(&f, &f), q(0));
        assert_eq!(g.bracket(&e, &f), h);
        assert_eq!(g.bracket(&h, &e), e.scale(&q(2)));
    }

    #[test]
    fn sl2_casimir() {
        let g = LieAlgebra::sl(2).unwrap();
        let c = g.casimir();
        let mut expected = Tensor2::zeros(3);
        *expected.get_mut(0, 2) = qf(1, 4);
        *expected.get_mut(2, 0) = qf(1, 4);
        *expected.get_mut(1, 1) = qf(1, 8);
        assert_eq!(c, expected);
        assert_eq!(c.flip(), c);
        assert_eq!(g.multiplication_image(&c), Matrix::identity(3));
        for i in 0..3 {
            assert!(g.adjoint_tensor(&g.basis_vector(i), &c).vanishes());
        }
    }

    #[test]
    fn so3_killing_is_minus_two() {
        let g = LieAlgebra::so(3).unwrap();
        assert_eq!(*g.killing(), Matrix::identity(3).scale(&q(-2)));
        assert_eq!(g.centroid_dim(), 1);
    }

    #[test]
    fn rejects_abelian_and_bad_jacobi() {
        let abelian = LieAlgebra::from_structure_constants(1, vec![q(0)], vec!["x".into()]);
        assert!(matches!(abelian, Err(Error::NotSimple(_))));
        let mut c = vec![q(0); 27];
        c[1 * 3 + 2] = q(1); // [b0, b1] = b2
        c[3 * 3 + 2] = q(-1);
        c[(0 * 3 + 2) * 3 + 1] = q(1); // [b0, b2] = b1
        c[(2 * 3 + 0) * 3 + 1] = q(-1);
        c[(1 * 3 + 2) * 3 + 1] = q(1); // [b1, b2] = b1
        c[(2 * 3 + 1) * 3 + 1] = q(-1);
        let r = LieAlgebra::from_structure_constants(3, c, vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(r, Err(Error::JacobiViolation(0, 1, 2)));
    }

    #[test]
    fn automorphism_checks() {
        let g = LieAlgebra::sl(2).unwrap();
        let phi = g.exp_ad(&g.basis_vector(0), 8).unwrap();
        assert!(g.is_automorphism_series(&phi, 8).unwrap().holds);
        // id + z·(e ↔ f)
        let mut swap = Matrix::zeros((3, 3));
        swap.set(0, 2, q(1));
        swap.set(2, 0, q(1));
        let bad = MatSeries::new((3, 3), 0, 8, vec![Matrix::identity(3), swap]);
        let rep = g.is_automorphism_series(&bad, 8).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.first_failure, Some(1));
    }
}
