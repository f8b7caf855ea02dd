//! Exact-arithmetic symbolic kernel.
//!
//! Multivariate polynomials and rational functions over the rationals,
//! lexicographic Groebner bases, division-free characteristic polynomials,
//! block factorization of symbolic matrices, and Sturm-sequence real-root
//! isolation. Coefficients are exact rationals end-to-end; floating point
//! appears only in root refinement.

mod factor;
mod groebner;
mod matrix;
mod poly;
mod ratfunc;
mod unipoly;

pub use factor::{factor_blocks, factor_blocks_rf, UniRf};
pub use groebner::{gb_lex, gb_lex_budget, reduce_mod_basis, s_polynomial, DEFAULT_PAIR_BUDGET};
pub use matrix::{charpoly, charpoly_coeffs_rf, SymMatrix};
pub use poly::{Mono, Poly, Ring};
pub use ratfunc::{poly_gcd, RationalFunction};
pub use unipoly::{real_roots, IsolatedRoot, UniPoly};

use num_rational::BigRational;

/// Errors raised by the symbolic kernel.
#[derive(Debug, Clone, thiserror::Error)]
pub enum SymError {
    #[error("unknown symbol `{0}` in this ring")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("rings differ: `{0}` vs `{1}`")]
    RingMismatch(String, String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix entry has a nonconstant denominator; clear denominators first")]
    NonConstantDenominator,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not univariate in `{0}`")]
    NotUnivariate(String),
    #[error("pair budget exhausted after {reductions} reductions; partial basis has {} elements", partial.len())]
    BudgetExhausted {
        reductions: usize,
        partial: Vec<Poly>,
    },
}

pub type SymResult<T> = Result<T, SymError>;

/// Exact conversion of an `f64` to a rational (fails on NaN/inf).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
