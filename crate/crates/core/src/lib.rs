//! Inner-product normal forms of polynomial ODEs and control systems near an
//! equilibrium, computed degree by degree in exact rational arithmetic.
//!
//! The crate is organised bottom-up:
//!
//! * [`polyalg`]: sparse polynomials, graded polynomial maps, truncated series
//!   and time-one flows.
//! * [`linalg`]: dense rational matrices with exact elimination.
//! * [`innerprod`]: the factorial-weighted monomial inner product.
//! * [`homological`]: homological operators, their adjoints, kernels and the
//!   range/complement splitting.
//! * [`ode`]: degree-by-degree normalization of `x' = Ax + f(x)`.
//! * [`control`]: the control-system analogue with skew-product
//!   transformations and feedback.
//! * [`io`]: JSON documents, reports and pretty rendering for the CLI.

pub mod control;
pub mod error;
pub mod homological;
pub mod innerprod;
pub mod io;
pub mod linalg;
pub mod ode;
pub mod polyalg;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use polyalg::{HomPoly, HomPolyMap, MultiIndex, Poly, PolySeries, Rational};
