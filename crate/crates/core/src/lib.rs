//! Exact tools for tensor product multiplicities of simple Lie algebras, their
//! Berenstein–Zelevinsky polytopes and stretching quasi-polynomials, and the
//! Horn volume function for `B2`.
//!
//! Weights are given by Dynkin labels unless a function says otherwise. The
//! `B2` volume functions take orthonormal coordinates, where the fundamental
//! weights are `omega_1 = (1, 0)` and `omega_2 = (1/2, 1/2)`.

pub mod bzpolytope;
pub mod covolume;
pub mod ehrhart;
pub mod error;
pub mod multiplicity;
pub mod rational;
pub mod rootsys;
pub mod sampler;
pub mod volume;

pub use error::{Error, Result};
pub use rational::Rational;
pub use rootsys::{Basis, Family, RootSystem, Weight};
