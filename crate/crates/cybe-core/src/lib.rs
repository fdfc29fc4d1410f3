#![no_std]
extern crate alloc;

pub mod curve;
pub mod equivalence;
pub mod error;
pub mod expansion;
pub mod fixtures;
pub mod grid;
pub mod lie;
pub mod linalg;
pub mod rmatrix;
pub mod series;
pub mod subalgebra;
pub mod ybe;

pub use error::{Error, Result};
pub use lie::LieAlgebra;
pub use linalg::{q, qf, Coeff, Matrix, Tensor2, Tensor3, Vector, Q};
pub use series::{solve_flow, solve_linear_ode, Laurent, MatSeries, Series, VecSeries};
pub use expansion::Expansion;
pub use grid::Grid;
pub use rmatrix::RMatrixSeries;
