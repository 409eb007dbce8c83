//! Exact sparse polynomial algebra over the rationals.

pub mod flow;
mod map;
mod monomial;
mod poly;
mod rational;
mod series;

pub use map::{vf_basis, HomPolyMap, PolyMap, VfBasis};
pub use monomial::{monomial_basis, monomial_count, MultiIndex};
pub use poly::{evaluate, multiply, partial_derivative, HomPoly, Poly};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use series::{compose_maps, compose_truncated, scalar_term, PolySeries};
