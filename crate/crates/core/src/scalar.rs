//! Coefficient trait for the sparse polynomial layer.
//!
//! The polynomial core is generic over the scalar type through the standard
//! `num_traits` bounds plus exact division. It is instantiated twice in this
//! crate: with [`crate::Rat`] (arbitrary-precision rationals, giving `QPoly`)
//! and with [`crate::RatFun`] (the field of rational functions in q, which is
//! what makes the bivariate content/primitive-part gcd a one-variable
//! Euclidean computation).

use std::fmt;
use std::ops::{Div, Neg, Sub};

use num_traits::{One, Zero};

/// A field scalar usable as a polynomial coefficient. `Div` must be exact;
/// all arithmetic is exact by construction.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Div<Output = T>
{
}
