//! Exact verification of higher Koszul brackets, L∞ relations and BV∞
//! structures on free graded-commutative algebras over ℚ.
//!
//! Elements live in [`Element`], operators in the normal form of [`Operator`].
//! The higher brackets are in [`brackets`], the coalgebra side in [`linfty`],
//! structure checkers and cohomology in [`structures`], and concrete algebras
//! in [`models`].

pub mod algebra;
pub mod brackets;
pub mod diffop;
pub mod error;
pub mod graded;
pub mod linfty;
pub mod models;
pub mod sampling;
pub mod structures;
pub mod text;

pub use algebra::{Element, Generator, GeneratorTable, Monomial};
pub use diffop::{OpTerm, Operator};
pub use error::{Error, Result};
pub use graded::{Degree, Parity, Scalar, Sign, Unshuffle};
pub use sampling::Budget;
