//! Dense exact vectors, matrices and tensors over the rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Coefficient ring elements of truncated series: a finite-dimensional Q-vector space.
pub trait Coeff: Clone + PartialEq + Debug {
    type Shape: Copy + PartialEq + Debug;
    fn zeros(shape: Self::Shape) -> Self;
    fn shape(&self) -> Self::Shape;
    fn vanishes(&self) -> bool;
    fn add_scaled(&mut self, s: &Q, other: &Self);
    fn scale(&self, s: &Q) -> Self;

    fn add_assign(&mut self, other: &Self) {
        self.add_scaled(&Q::one(), other);
    }
    fn sub_assign(&mut self, other: &Self) {
        self.add_scaled(&-Q::one(), other);
    }
    fn negated(&self) -> Self {
        self.scale(&-Q::one())
    }
}

impl Coeff for Q {
    type Shape = ();
    fn zeros(_: ()) -> Self {
        Q::zero()
    }
    fn shape(&self) {}
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, s: &Q, other: &Self) {
        if !Zero::is_zero(other) {
            *self += s * other;
        }
    }
    fn scale(&self, s: &Q) -> Self {
        s * self
    }
}

macro_rules! dense_coeff {
    ($ty:ident, $shape:ty, $get:expr) => {
        impl Coeff for $ty {
            type Shape = $shape;
            fn zeros(shape: $shape) -> Self {
                $ty::zeros(shape)
            }
            fn shape(&self) -> $shape {
                $get(self)
            }
            fn vanishes(&self) -> bool {
                self.data.iter().all(Zero::is_zero)
            }
            fn add_scaled(&mut self, s: &Q, other: &Self) {
                debug_assert_eq!(self.data.len(), other.data.len());
                for (a, b) in self.data.iter_mut().zip(&other.data) {
                    if !Zero::is_zero(b) {
                        *a += s * b;
                    }
                }
            }
            fn scale(&self, s: &Q) -> Self {
                let mut out = self.clone();
                for a in out.data.iter_mut() {
                    if !Zero::is_zero(a) {
                        *a *= s;
                    }
                }
                out
            }
        }
    };
}

/// Element of a finite-dimensional vector space in coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vector {
    pub data: Vec<Q>,
}

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector { data: vec![Q::zero(); n] }
    }
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[i] = Q::one();
        v
    }
    pub fn from_ints(xs: &[i64]) -> Self {
        Vector { data: xs.iter().map(|&x| q(x)).collect() }
    }
    pub fn len(&self) -> usize {
        self.data.len()
    }
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
    pub fn dot(&self, other: &Vector) -> Q {
        let mut s = Q::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s
    }
}

dense_coeff!(Vector, usize, |v: &Vector| v.data.len());

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl Matrix {
    pub fn zeros((rows, cols): (usize, usize)) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros((n, n));
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }
    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros((r, c));
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            m.data[i * c..(i + 1) * c].clone_from_slice(row);
        }
        m
    }
    pub fn diagonal(entries: &[Q]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros((n, n));
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn column(&self, j: usize) -> Vector {
        Vector { data: (0..self.rows).map(|i| self.get(i, j).clone()).collect() }
    }
    pub fn row(&self, i: usize) -> Vector {
        Vector { data: self.data[i * self.cols..(i + 1) * self.cols].to_vec() }
    }
    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros((self.cols, self.rows));
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros((self.rows, other.cols));
        self.mul_acc(other, &Q::one(), &mut out);
        out
    }

    /// `out += s * self * other`, skipping zero entries.
    pub fn mul_acc(&self, other: &Matrix, s: &Q, out: &mut Matrix) {
        let n = other.cols;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let sa = s * a;
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += &sa * b;
                    }
                }
            }
        }
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len());
        let mut out = Vector::zeros(self.rows);
        self.mul_vec_acc(v, &Q::one(), &mut out);
        out
    }

    pub fn mul_vec_acc(&self, v: &Vector, s: &Q, out: &mut Vector) {
        for (k, x) in v.data.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let sx = s * x;
            for i in 0..self.rows {
                let a = self.get(i, k);
                if !a.is_zero() {
                    out.data[i] += a * &sx;
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros((n, 2 * n));
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let ech = Echelon::reduce(aug);
        if ech.pivots.len() < n || ech.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, ech.matrix.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        Echelon::reduce(self.clone()).pivots.len()
    }

    /// Basis of `{x : self x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let ech = Echelon::reduce(self.clone());
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = Vector::zeros(self.cols);
            v.data[free] = Q::one();
            for (r, &p) in ech.pivots.iter().enumerate() {
                v.data[p] = -ech.matrix.get(r, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// One solution of `self x = b`, with free variables set to zero, plus the number of
    /// free variables. `None` when the system is inconsistent.
    pub fn solve(&self, b: &Vector) -> Option<(Vector, usize)> {
        assert_eq!(self.rows, b.len());
        let mut aug = Matrix::zeros((self.rows, self.cols + 1));
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b.data[i].clone());
        }
        let ech = Echelon::reduce(aug);
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = Vector::zeros(self.cols);
        for (r, &p) in ech.pivots.iter().enumerate() {
            x.data[p] = ech.matrix.get(r, self.cols).clone();
        }
        Some((x, self.cols - ech.pivots.len()))
    }
}

dense_coeff!(Matrix, (usize, usize), |m: &Matrix| (m.rows, m.cols));

/// Reduced row echelon form.
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn reduce(mut m: Matrix) -> Echelon {
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..cols {
                    let rv = m.get(r, j);
                    if !rv.is_zero() {
                        let v = rv * &f;
                        *m.get_mut(i, j) -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }
}

/// Element of `g ⊗ g`, entry `(i, j)` is the coefficient of `b_i ⊗ b_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor2 {
    pub dim: usize,
    pub data: Vec<Q>,
}

impl Tensor2 {
    pub fn zeros(dim: usize) -> Self {
        Tensor2 { dim, data: vec![Q::zero(); dim * dim] }
    }
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.dim + j]
    }
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Q {
        &mut self.data[i * self.dim + j]
    }
    pub fn outer(a: &Vector, b: &Vector) -> Self {
        let d = a.len();
        let mut t = Tensor2::zeros(d);
        t.add_outer(&Q::one(), a, b);
        t
    }
    /// `self += s * a ⊗ b`
    pub fn add_outer(&mut self, s: &Q, a: &Vector, b: &Vector) {
        let d = self.dim;
        for (i, x) in a.data.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let sx = s * x;
            for (j, y) in b.data.iter().enumerate() {
                if !y.is_zero() {
                    self.data[i * d + j] += &sx * y;
                }
            }
        }
    }
    /// Leg swap.
    pub fn flip(&self) -> Self {
        let d = self.dim;
        let mut t = Tensor2::zeros(d);
        for i in 0..d {
            for j in 0..d {
                t.data[j * d + i] = self.data[i * d + j].clone();
            }
        }
        t
    }
    pub fn as_matrix(&self) -> Matrix {
        Matrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }
    pub fn from_matrix(m: &Matrix) -> Self {
        assert!(m.is_square());
        Tensor2 { dim: m.rows, data: m.data.clone() }
    }
    /// `(a ⊗ b)(self)` for linear maps `a`, `b`, i.e. `a T b^t` in matrix form.
    pub fn apply(&self, a: &Matrix, b: &Matrix) -> Self {
        let t = self.as_matrix();
        Tensor2::from_matrix(&a.mul(&t).mul(&b.transpose()))
    }
    /// Nonzero entries `(i, j, value)`.
    pub fn nonzeros(&self) -> Vec<(usize, usize, &Q)> {
        let d = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(n, v)| (n / d, n % d, v))
            .collect()
    }
}

dense_coeff!(Tensor2, usize, |t: &Tensor2| t.dim);

/// Element of `g ⊗ g ⊗ g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor3 {
    pub dim: usize,
    pub data: Vec<Q>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 { dim, data: vec![Q::zero(); dim * dim * dim] }
    }
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.data[self.index(i, j, k)]
    }
    pub fn nonzeros(&self) -> Vec<(usize, usize, usize, Q)> {
        let d = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(n, v)| (n / (d * d), (n / d) % d, n % d, v.clone()))
            .collect()
    }
}

dense_coeff!(Tensor3, usize, |t: &Tensor3| t.dim);
