//! Exact symbolic computation of Shalika, Steinberg and Dyck germs, orbital
//! integrals and affine-Springer-fiber weight polynomials, compactified
//! Jacobian point counts, and torus-knot superpolynomials, all driven by
//! Newton-Puiseux data of a tamely ramified regular semisimple element of
//! GL_n over a local field.
//!
//! Everything is exact: arbitrary-precision rationals, sparse polynomials in
//! q, reduced rational functions, and a bivariate q,t layer. There is no
//! floating-point mode.
//!
//! The polynomial core ([`poly::Poly`]) is generic over the scalar type via
//! `num_traits` bounds; the concrete aliases used throughout the crate are
//! fixed here at the root.

pub mod bivar;
pub mod combinat;
pub mod eha;
mod error;
pub mod germs;
pub mod orbital;
pub mod poly;
pub mod qtdeform;
pub mod ratfun;
pub mod scalar;
pub mod symfunc;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use error::{Error, Result};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
/// Small exact rational for Puiseux exponents and contact valuations.
pub type Exponent = num_rational::Rational64;

/// Sparse polynomial in q over the rationals.
pub type QPoly = poly::Poly<Rat>;
pub use bivar::{Poly2, QtRatFun};
pub use ratfun::RatFun;

static DEGREE_CAP: AtomicUsize = AtomicUsize::new(12);
static QT_DEGREE_CAP: AtomicUsize = AtomicUsize::new(6);

/// Maximum homogeneous degree the symmetric-function layer will process.
pub fn degree_cap() -> usize {
    DEGREE_CAP.load(Ordering::Relaxed)
}

/// Override the symmetric-function degree cap (minimum 1).
pub fn set_degree_cap(cap: usize) {
    DEGREE_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Maximum torus-knot size for the q,t-deformed computations.
pub fn qt_degree_cap() -> usize {
    QT_DEGREE_CAP.load(Ordering::Relaxed)
}

pub fn set_qt_degree_cap(cap: usize) {
    QT_DEGREE_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub(crate) fn check_degree_cap(degree: usize) -> Result<()> {
    let cap = degree_cap();
    if degree > cap {
        Err(Error::DegreeCap { degree, cap })
    } else {
        Ok(())
    }
}
