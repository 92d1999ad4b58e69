//! Scalar coefficients for the symbolic engine.
//!
//! Everything downstream (polynomials, matrices, brackets) is generic over an
//! exact field scalar. The canonical instantiation is [`crate::Rat`]
//! (arbitrary-precision rationals); floating-point types are ruled out on
//! purpose because canonical-form equality is the correctness criterion
//! everywhere.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{FromPrimitive, Num, Signed};

/// An exact field scalar: closed under `+ - * /`, with decidable equality.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    /// Lift a machine integer into the field.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer lifts into the scalar field")
    }

    /// n! as a field element.
    fn factorial(n: u32) -> Self {
        let mut acc = Self::one();
        for k in 2..=n as i64 {
            acc = acc * Self::int(k);
        }
        acc
    }

    /// Binomial coefficient C(n, k) as a field element.
    fn binomial(n: u64, k: u64) -> Self {
        if k > n {
            return Self::zero();
        }
        let mut acc = Self::one();
        for i in 0..k {
            acc = acc * Self::int((n - i) as i64) / Self::int((i + 1) as i64);
        }
        acc
    }
}

impl<T> Scalar for T where
    T: Num + Signed + FromPrimitive + Clone + Eq + Hash + Debug + Display + Send + Sync + 'static
{
}
