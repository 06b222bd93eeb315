//! Prime fields and the scalar trait the whole engine is generic over.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Inv, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest characteristic accepted anywhere in the crate.
pub const MAX_CHARACTERISTIC: u32 = 97;

/// A finite prime field `F_p`.
///
/// All enumeration in the crate (submodules, extension classes, coset
/// representatives) relies on the element set being finite and listable.
pub trait FiniteField:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const CHARACTERISTIC: u32;

    fn from_u64(v: u64) -> Self;

    /// Canonical representative in `0..p`.
    fn value(self) -> u32;

    fn try_inv(self) -> Option<Self>;

    /// Every element, in increasing representative order.
    fn elements() -> FieldElements<Self> {
        FieldElements {
            next: 0,
            _marker: std::marker::PhantomData,
        }
    }

    fn order() -> u64 {
        Self::CHARACTERISTIC as u64
    }
}

pub struct FieldElements<F> {
    next: u32,
    _marker: std::marker::PhantomData<F>,
}

impl<F: FiniteField> Iterator for FieldElements<F> {
    type Item = F;

    fn next(&mut self) -> Option<F> {
        if self.next >= F::CHARACTERISTIC {
            return None;
        }
        let v = F::from_u64(self.next as u64);
        self.next += 1;
        Some(v)
    }
}

pub const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of `Z/pZ` for a prime `P`, stored as its canonical representative.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const VALID: () = assert!(
        is_prime(P) && P <= MAX_CHARACTERISTIC,
        "Fp<P> needs a prime P <= 97"
    );

    pub fn new(v: u32) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        Fp(v % P)
    }

    fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp((self.0 * rhs.0) % P)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.try_inv().expect("division by zero in prime field")
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Inv for Fp<P> {
    type Output = Self;
    fn inv(self) -> Self {
        self.try_inv().expect("inverse of zero in prime field")
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    const CHARACTERISTIC: u32 = P;

    fn from_u64(v: u64) -> Self {
        Fp::new((v % P as u64) as u32)
    }

    fn value(self) -> u32 {
        self.0
    }

    fn try_inv(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat: a^(p-2) = a^-1
            Some(self.pow(P - 2))
        }
    }
}

impl<const P: u32> Serialize for Fp<P> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl<'de, const P: u32> Deserialize<'de> for Fp<P> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u32::deserialize(d)?;
        if v >= P {
            return Err(serde::de::Error::custom(format!(
                "field element {v} out of range for characteristic {P}"
            )));
        }
        Ok(Fp::new(v))
    }
}
