//! Coefficient rings.
//!
//! Everything above the morphism calculus is linear over a commutative ground
//! ring. The ring is a type parameter throughout; [`Ring`] is the minimal
//! interface the chain-level code needs, layered on `num-traits`.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A commutative ring usable as chain coefficients.
pub trait Ring:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Image of an integer under the unique ring map from ℤ.
    fn from_i64(v: i64) -> Self;

    /// Characteristic of the ring (0 for ℤ).
    fn characteristic() -> u64;

    /// Short name used in reports, e.g. `"Z"` or `"F2"`.
    fn name() -> String;

    /// `(-1)^e` as a ring element.
    fn sign(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }
}

impl Ring for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn characteristic() -> u64 {
        0
    }
    fn name() -> String {
        "Z".into()
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn characteristic() -> u64 {
        0
    }
    fn name() -> String {
        "Z".into()
    }
}

/// The prime field 𝔽_P. `P` must be prime; this is not checked beyond `P >= 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        assert!(P >= 2, "field size must be at least 2");
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(P-2)
        let mut base = self.0 as u128;
        let mut exp = P - 2;
        let mut acc: u128 = 1;
        let m = P as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(Fp(acc as u64))
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Ring for Fp<P> {
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn characteristic() -> u64 {
        P
    }
    fn name() -> String {
        format!("F{P}")
    }
}

/// Rings over which ranks can be computed by Gaussian elimination.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;
}

impl<const P: u64> Field for Fp<P> {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}
