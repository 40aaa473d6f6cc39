//! Exact-arithmetic verification of the algebraic structures attached to a
//! small finite-dimensional Lie algebra over ℚ: the Chevalley–Eilenberg
//! complex as a dg bimodule, Koszul complexes of quadratic algebras, the
//! Duflo/PBW star product, A∞ bar machinery, and the strict quasi-isomorphism
//! identity suite, all checked with literal-zero tolerances.

pub mod error;
pub mod rat;
pub mod word;
pub mod sparse;
pub mod lie;
pub mod poly;
pub mod linalg;
pub mod uea;
pub mod ce;
pub mod quadratic;
pub mod series;
pub mod duflo;
pub mod ainfty;
pub mod graphs;
pub mod bar;
pub mod expr;

pub use error::{Error, Result};
pub use lie::{catalog, LieAlgebra, CATALOG_NAMES};
pub use rat::Rat;
pub use sparse::{koszul_sign, SparseElement};
pub use word::{BasisWord, OddKind};
