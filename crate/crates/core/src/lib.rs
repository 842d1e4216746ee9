//! Coordinate-free calculus of fully symmetric tensors over R³.
//!
//! Symmetric tensors are stored as homogeneous polynomials. On top of that
//! representation the crate provides the canonical (harmonic) decomposition,
//! Maxwell-Sylvester multipole vectors, spin coherent states with their
//! Husimi and Majorana pictures, and expectation values of symmetrized spin
//! operators computed geometrically. The [`oracle`] module holds plain
//! matrix mechanics used to cross-check every geometric result.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use multipole_core::harmonic::harmonic_components;
//! use multipole_core::multipole::sylvester_decompose;
//! use multipole_core::operator::{classical_from_polynomial, expectation_skeleton, expectation_tensor};
//! use multipole_core::spinstate::{coherent_state, majorana_stars};
//! use multipole_core::vec3::Z;
//! use multipole_core::SymTensor;
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let zz = SymTensor::from_vectors(&[Z, Z]); // the polynomial z²
//! let parts = harmonic_components(&zz)?; // orders 2 and 0
//! let skeleton = sylvester_decompose(&parts[0])?;
//! assert_eq!(skeleton.axes(), &[Z, Z]);
//! assert!((skeleton.scale() - 1.0).abs() < 1e-12); // z² - r²/3
//!
//! let psi = coherent_state(3, &Z)?; // spin 3/2 pointing up
//! assert_eq!(majorana_stars(&psi)?.stars().len(), 3);
//! let obs = classical_from_polynomial(&zz)?;
//! let geometric = expectation_skeleton(&psi, &obs)?;
//! assert!((geometric - expectation_tensor(&psi, &obs)?).abs() < 1e-12);
//! # Ok(())
//! # }
//! ```
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod harmonic;
pub mod legendre;
pub mod multipole;
pub mod operator;
pub mod oracle;
pub mod quadrature;
pub mod roots;
pub mod spinstate;
pub mod symtensor;
pub mod vec3;

pub use harmonic::HarmonicTensor;
pub use legendre::Rational;
pub use multipole::Skeleton;
pub use operator::{ClassicalObservable, SymbolKind};
pub use oracle::SpinMatrix;
pub use spinstate::{Constellation, SpinState};
pub use symtensor::{MultiIndex, ScalarKind, SymTensor};

pub use num_complex::Complex64;

/// Largest tensor rank, Legendre order or polynomial degree accepted.
///
/// Every factorial and double factorial needed below this bound fits in the
/// 128-bit rationals with a wide margin.
pub const MAX_ORDER: usize = 16;
