//! Power series in two variables truncated by independent caps: `x^m y^k` is known for
//! `m < nx` and `k < ny`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Coeff;

#[derive(Clone, Debug, PartialEq)]
pub struct Grid<C: Coeff> {
    nx: usize,
    ny: usize,
    shape: C::Shape,
    data: Vec<C>,
}

impl<C: Coeff> Grid<C> {
    pub fn zeros(shape: C::Shape, nx: usize, ny: usize) -> Self {
        Grid { nx, ny, shape, data: vec![C::zeros(shape); nx * ny] }
    }

    pub fn from_fn(shape: C::Shape, nx: usize, ny: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(nx * ny);
        for m in 0..nx {
            for k in 0..ny {
                data.push(f(m, k));
            }
        }
        Grid { nx, ny, shape, data }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn shape(&self) -> C::Shape {
        self.shape
    }

    pub fn get(&self, m: usize, k: usize) -> Option<&C> {
        (m < self.nx && k < self.ny).then(|| &self.data[m * self.ny + k])
    }

    pub fn at(&self, m: usize, k: usize) -> &C {
        self.get(m, k).expect("grid coefficient outside caps")
    }

    pub fn at_mut(&mut self, m: usize, k: usize) -> &mut C {
        assert!(m < self.nx && k < self.ny, "grid coefficient outside caps");
        &mut self.data[m * self.ny + k]
    }

    pub fn truncate(&self, nx: usize, ny: usize) -> Self {
        let (nx, ny) = (nx.min(self.nx), ny.min(self.ny));
        Grid::from_fn(self.shape, nx, ny, |m, k| self.at(m, k).clone())
    }

    pub fn map<D: Coeff>(&self, shape: D::Shape, f: impl Fn(&C) -> D) -> Grid<D> {
        Grid { nx: self.nx, ny: self.ny, shape, data: self.data.iter().map(f).collect() }
    }

    /// Coefficients of `x^m y^k` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &C)> {
        let ny = self.ny;
        self.data.iter().enumerate().map(move |(n, c)| (n / ny.max(1), n % ny.max(1), c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::vanishes)
    }

    /// First `(m, k)` where the grids differ on their common caps.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        let (nx, ny) = (self.nx.min(other.nx), self.ny.min(other.ny));
        for s in 0..nx + ny {
            for m in 0..=s.min(nx.saturating_sub(1)) {
                let k = s - m;
                if k < ny && self.at(m, k) != other.at(m, k) {
                    return Some((m, k));
                }
            }
        }
        None
    }
}
