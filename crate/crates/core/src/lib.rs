//! Exact computation of q-factorial ratios
//! `D(a, b; q) = [a_1]!...[a_r]! / [b_1]!...[b_s]!` as integer polynomials,
//! Landau's integrality criterion for the tuples `(a, b)`, and machine checks
//! of the q-series identities around the q-super Catalan numbers.
//!
//! With the default `parallel` feature, sweeps and identity checks fan out
//! over rayon; without it the same entry points run sequentially.

pub mod cyclotomic;
pub mod error;
pub mod identities;
pub mod landau;
pub mod par;
pub mod poly;
pub mod qfactor;
pub mod report;

pub use cyclotomic::cyclotomic;
pub use error::{QError, Result};
pub use landau::{canonicalize, enumerate_tuples, landau_check, Canonical, EnumerateOptions, LandauVerdict};
pub use poly::IntPoly;
pub use qfactor::{
    classical_ratio, d_n_sweep, d_polynomial, d_polynomial_naive, q_binomial, q_factorial, q_integer,
    ratio_exponents, CycloExponents, TupleSpec,
};
pub use report::{positivity_report, PositivityReport};
