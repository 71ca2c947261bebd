use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::is_prime;

/// The prime field F_p for an odd prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Largest modulus accepted (primality is decided by trial division).
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if !(3..=Self::MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not an odd prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn zero(self) -> FpElem {
        FpElem { value: 0, field: self }
    }

    #[inline]
    pub fn one(self) -> FpElem {
        FpElem { value: 1, field: self }
    }

    /// Reduces a signed machine integer into the field.
    pub fn elem(self, x: i64) -> FpElem {
        let v = x.rem_euclid(self.p as i64) as u64;
        FpElem { value: v, field: self }
    }

    /// Builds an element from an already reduced residue.
    pub fn from_residue(self, v: u64) -> FpElem {
        FpElem {
            value: v % self.p,
            field: self,
        }
    }

    pub fn from_bigint(self, x: &BigInt) -> FpElem {
        let r = x.mod_floor(&BigInt::from(self.p));
        FpElem {
            value: r.to_u64().expect("residue below modulus"),
            field: self,
        }
    }

    /// Iterates 0, 1, ..., p-1.
    pub fn elements(self) -> impl Iterator<Item = FpElem> {
        (0..self.p).map(move |v| FpElem { value: v, field: self })
    }

    /// Legendre symbol of `x` as -1, 0 or 1, via Euler's criterion.
    pub fn legendre(self, x: FpElem) -> i8 {
        self.check(x);
        if x.is_zero() {
            return 0;
        }
        if x.pow((self.p - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root by Tonelli-Shanks. Returns the smaller of the two roots
    /// so results do not depend on search order.
    pub fn sqrt(self, x: FpElem) -> Option<FpElem> {
        self.check(x);
        if x.is_zero() {
            return Some(x);
        }
        if self.legendre(x) != 1 {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(2)
            .find(|&z| self.legendre(z) == -1)
            .expect("odd prime has a non-residue");
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = x.pow(q);
        let mut r = x.pow(q.div_ceil(2));
        while t.value != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2.value != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1u64 << (m - i - 1));
            m = i;
            c = b * b;
            t *= c;
            r *= b;
        }
        let other = -r;
        Some(if other.value < r.value { other } else { r })
    }

    #[inline]
    fn check(self, x: FpElem) {
        assert_eq!(self, x.field, "element from F_{} used in F_{}", x.field.p, self.p);
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue in [0, p) tagged with its field.
///
/// Mixing elements of different fields through the operators is a
/// programming error and panics; the polynomial layer reports it as
/// [`Error::FieldMismatch`] instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    field: PrimeField,
}

impl FpElem {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn signed(self) -> i64 {
        let p = self.field.p;
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    pub fn pow(self, mut e: u64) -> FpElem {
        let p = self.field.p as u128;
        let mut base = self.value as u128;
        let mut acc = 1u128 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FpElem {
            value: acc as u64,
            field: self.field,
        }
    }

    /// Signed exponent; negative powers go through the inverse.
    pub fn powi(self, e: i64) -> Result<FpElem> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<FpElem> {
        if self.value == 0 {
            return Err(Error::DivisionByZero { p: self.field.p });
        }
        let (mut r0, mut r1) = (self.field.p as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FpElem {
            value: t0.rem_euclid(self.field.p as i128) as u64,
            field: self.field,
        })
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpElem {
    type Output = FpElem;
    #[inline]
    fn add(self, rhs: FpElem) -> FpElem {
        self.field.check(rhs);
        let s = self.value + rhs.value;
        let p = self.field.p;
        FpElem {
            value: if s >= p { s - p } else { s },
            field: self.field,
        }
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    #[inline]
    fn sub(self, rhs: FpElem) -> FpElem {
        self.field.check(rhs);
        let p = self.field.p;
        FpElem {
            value: if self.value >= rhs.value {
                self.value - rhs.value
            } else {
                self.value + p - rhs.value
            },
            field: self.field,
        }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    #[inline]
    fn mul(self, rhs: FpElem) -> FpElem {
        self.field.check(rhs);
        FpElem {
            value: ((self.value as u128 * rhs.value as u128) % self.field.p as u128) as u64,
            field: self.field,
        }
    }
}

/// Panics on a zero divisor; use [`FpElem::inverse`] to handle it.
impl Div for FpElem {
    type Output = FpElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: FpElem) -> FpElem {
        self * rhs.inverse().expect("division by zero in F_p")
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    #[inline]
    fn neg(self) -> FpElem {
        FpElem {
            value: if self.value == 0 {
                0
            } else {
                self.field.p - self.value
            },
            field: self.field,
        }
    }
}

impl AddAssign for FpElem {
    fn add_assign(&mut self, rhs: FpElem) {
        *self = *self + rhs;
    }
}

impl SubAssign for FpElem {
    fn sub_assign(&mut self, rhs: FpElem) {
        *self = *self - rhs;
    }
}

impl MulAssign for FpElem {
    fn mul_assign(&mut self, rhs: FpElem) {
        *self = *self * rhs;
    }
}

/// Inverse of a field element, reporting zero as [`Error::DivisionByZero`].
pub fn fp_inverse(x: FpElem) -> Result<FpElem> {
    x.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(fp_inverse(f(5).elem(2)).unwrap().value(), 3);
        assert_eq!(fp_inverse(f(7).elem(6)).unwrap().value(), 6);
        for p in [3, 5, 7, 199] {
            assert_eq!(fp_inverse(f(p).one()).unwrap(), f(p).one());
        }
        assert_eq!(
            fp_inverse(f(7).zero()),
            Err(Error::DivisionByZero { p: 7 })
        );
    }

    #[test]
    fn rejects_non_primes() {
        for n in [0, 1, 2, 4, 9, 15, 91] {
            assert!(PrimeField::new(n).is_err(), "{n}");
        }
    }

    #[test]
    fn every_unit_inverts() {
        for p in [3, 5, 7, 11, 13, 101] {
            let k = f(p);
            for x in k.elements().skip(1) {
                assert_eq!((x * x.inverse().unwrap()).value(), 1);
            }
        }
    }

    #[test]
    fn sqrt_and_legendre() {
        let k = f(13);
        for x in k.elements() {
            match k.sqrt(x) {
                Some(r) => assert_eq!(r * r, x),
                None => assert_eq!(k.legendre(x), -1),
            }
        }
        // -1 is a square exactly when p = 1 mod 4
        assert!(f(5).sqrt(f(5).elem(-1)).is_some());
        assert!(f(7).sqrt(f(7).elem(-1)).is_none());
        assert_eq!(f(5).sqrt(f(5).elem(-1)).unwrap().value(), 2);
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = f(5).one() + f(7).one();
    }

    #[test]
    fn signed_representative() {
        let k = f(7);
        assert_eq!(k.elem(6).signed(), -1);
        assert_eq!(k.elem(3).signed(), 3);
        assert_eq!(k.elem(-10).value(), 4);
    }
}
