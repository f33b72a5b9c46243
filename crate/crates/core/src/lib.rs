//! Symbolic heat-trace coefficients of the Dirichlet-to-Neumann map of the
//! Witten-Laplacian with potential, plus a numeric Steklov validator.
//!
//! The symbolic pipeline works entirely over exact rationals: gauge-
//! constrained jets of the metric, drifting function and potential feed a
//! graded symbol algebra in which the factorization and parametrix
//! recursions are solved; a residue-and-moment integrator then turns the
//! parametrix into the normalized heat-trace densities, which are compared
//! against independently transcribed closed forms. A separate floating-point
//! module computes Steklov spectra of the disk and ball by ODE shooting and
//! recovers the same coefficients from the heat trace asymptotically.

pub mod atom;
pub mod factorization;
pub mod gauge;
pub mod geometry;
pub mod jet;
pub mod numeric;
pub mod parametrix;
pub mod poly;
pub mod rational;
pub mod reference;
pub mod symbol;
pub mod trace;
pub mod verify;

pub use atom::{Atom, AtomKind, MAX_DIM};
pub use gauge::{GaugeJets, Scenario};
pub use jet::{Jet, Mi};
pub use poly::{AtomPoly, Monomial};
pub use rational::Rational;
