//! Exact generation and cross-verification of triangular arrays
//! `T(n,k) = (a2 n + a1 k + a0) T(n-1,k) + (b2 n + b1 k + b0) T(n-1,k-1)`.
//!
//! Triangles are produced three ways that are checked against each other:
//! the recurrence itself ([`triangles`]), coefficient extraction from the
//! iterated derivation operator of a two-letter grammar ([`grammar`]), and
//! closed forms ([`closedforms`]) or formal power series solutions of the
//! associated ODE system ([`fps`]). Brute-force enumeration of the underlying
//! combinatorial structures lives in [`enumerate`].

pub mod closedforms;
pub mod enumerate;
pub mod error;
pub mod export;
pub mod fps;
pub mod grammar;
pub mod parse;
pub mod polyring;
pub mod suites;
pub mod triangles;

pub use error::{Error, ParseError, Result};
pub use grammar::{extract_triangle, hao_grammar, Grammar, TriangleParams};
pub use polyring::{BigRational, LaurentPoly, Monomial, VariableId};
pub use triangles::{FamilyTag, Triangle};
