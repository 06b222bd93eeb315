//! Twin cotorsion pairs and their hearts over linear Nakayama algebras.
//!
//! The engine is generic over a [`FiniteField`]; the aliases below fix the
//! small characteristics used most often.

pub mod error;
pub mod field;
pub mod heartcat;
pub mod matrix;
pub mod pairs;
pub mod repcore;
pub mod serialcat;
pub mod subcat;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{FiniteField, Fp};
pub use matrix::Matrix;

pub type Gf2 = Fp<2>;
pub type Gf3 = Fp<3>;
pub type Gf5 = Fp<5>;
pub type Gf7 = Fp<7>;
