//! Analysis toolkit for polynomial kinetic ODE models of epidemic type.
//!
//! The crate is organized around an exact-arithmetic symbolic kernel
//! ([`symalg`]) and a small model language ([`modeldsl`]). On top of those
//! sit the analyses: equilibria and rational univariate reductions
//! ([`equilibria`]), next-generation-matrix and Jacobian-factorization
//! reproduction thresholds ([`threshold`]), bifurcation loci and branch
//! scans ([`bifurcation`]), chemical-reaction-network conversion with
//! deficiency bookkeeping ([`crn`]), phase-type kernel objects ([`sirph`]),
//! and Lagrange-Hamilton geometric objects ([`geometry`]).
//!
//! All symbolic values are immutable and safe to share across threads;
//! every operation is a pure function of its inputs.

pub mod bifurcation;
pub mod crn;
pub mod equilibria;
pub mod geometry;
pub mod modeldsl;
pub mod numeric;
pub mod sirph;
pub mod symalg;
pub mod threshold;

pub use modeldsl::Model;
pub use symalg::{Poly, RationalFunction, Ring, SymMatrix};
