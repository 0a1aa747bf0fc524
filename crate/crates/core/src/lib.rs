//! Superspecial genus-2 curves over F_{p^2}.
//!
//! The crate provides exact F_{p^2} arithmetic, hyperelliptic curve models
//! with a Cartier-Manin superspeciality test and point counting, Rosenhain
//! normal forms with canonical isomorphism keys, Richelot (2,2)-isogenies,
//! enumeration of all superspecial genus-2 curves for a prime (a Richelot walk
//! seeded from glued supersingular Legendre pairs, plus a brute-force oracle),
//! and executable checkers for the structural theorems about such curves.

pub mod curves;
pub mod enumerate;
pub mod error;
pub mod ff;
pub mod poly;
pub mod richelot;
pub mod rosenhain;
pub mod verify;

pub use error::{Error, Result};
pub use ff::{Fp2Context, Fp2Element, PrimeField};
pub use poly::Polynomial;
