use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fp::field::{FpElem, PrimeField};

/// F_p[t]/(t^2 - d) with `d` the smallest quadratic non-residue >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticExtension {
    field: PrimeField,
    d: FpElem,
}

/// Finds the smallest non-residue by Euler's criterion.
pub fn build_quadratic_extension(field: PrimeField) -> QuadraticExtension {
    let d = field
        .elements()
        .skip(2)
        .find(|&x| field.legendre(x) == -1)
        .expect("odd prime has a non-residue");
    QuadraticExtension { field, d }
}

impl QuadraticExtension {
    pub fn base(self) -> PrimeField {
        self.field
    }

    pub fn nonresidue(self) -> FpElem {
        self.d
    }

    pub fn new_elem(self, a: FpElem, b: FpElem) -> Fp2Elem {
        assert!(a.field() == self.field && b.field() == self.field);
        Fp2Elem { a, b, ext: self }
    }

    pub fn embed(self, a: FpElem) -> Fp2Elem {
        self.new_elem(a, self.field.zero())
    }

    pub fn zero(self) -> Fp2Elem {
        self.embed(self.field.zero())
    }

    pub fn one(self) -> Fp2Elem {
        self.embed(self.field.one())
    }

    /// The adjoined square root of `d`.
    pub fn t(self) -> Fp2Elem {
        self.new_elem(self.field.zero(), self.field.one())
    }

    /// Square root of a base-field element, landing in F_p when possible.
    pub fn sqrt_of_base(self, x: FpElem) -> Fp2Elem {
        match self.field.sqrt(x) {
            Some(r) => self.embed(r),
            None => {
                // x = d * (x/d) with x/d a square
                let r = self
                    .field
                    .sqrt(x / self.d)
                    .expect("quotient of non-residues is a residue");
                self.new_elem(self.field.zero(), r)
            }
        }
    }
}

/// An element a + b*t of F_{p^2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2Elem {
    a: FpElem,
    b: FpElem,
    ext: QuadraticExtension,
}

impl Fp2Elem {
    pub fn re(self) -> FpElem {
        self.a
    }

    pub fn im(self) -> FpElem {
        self.b
    }

    pub fn ext(self) -> QuadraticExtension {
        self.ext
    }

    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The element as a base-field value, if its t-component vanishes.
    pub fn to_base(self) -> Option<FpElem> {
        self.b.is_zero().then_some(self.a)
    }

    pub fn conjugate(self) -> Fp2Elem {
        Fp2Elem { b: -self.b, ..self }
    }

    pub fn norm(self) -> FpElem {
        self.a * self.a - self.ext.d * self.b * self.b
    }

    pub fn scale(self, c: FpElem) -> Fp2Elem {
        Fp2Elem {
            a: self.a * c,
            b: self.b * c,
            ext: self.ext,
        }
    }

    pub fn pow(self, mut e: u64) -> Fp2Elem {
        let mut base = self;
        let mut acc = self.ext.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Result<Fp2Elem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero {
                p: self.ext.field.modulus(),
            });
        }
        let inv = n.inverse()?;
        Ok(self.conjugate().scale(inv))
    }

    fn check(self, other: Fp2Elem) {
        assert_eq!(self.ext, other.ext, "elements from different extensions");
    }
}

impl fmt::Display for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*t", self.a, self.b)
        }
    }
}

impl Add for Fp2Elem {
    type Output = Fp2Elem;
    fn add(self, rhs: Fp2Elem) -> Fp2Elem {
        self.check(rhs);
        Fp2Elem {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            ext: self.ext,
        }
    }
}

impl Sub for Fp2Elem {
    type Output = Fp2Elem;
    fn sub(self, rhs: Fp2Elem) -> Fp2Elem {
        self.check(rhs);
        Fp2Elem {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            ext: self.ext,
        }
    }
}

impl Mul for Fp2Elem {
    type Output = Fp2Elem;
    fn mul(self, rhs: Fp2Elem) -> Fp2Elem {
        self.check(rhs);
        Fp2Elem {
            a: self.a * rhs.a + self.ext.d * self.b * rhs.b,
            b: self.a * rhs.b + self.b * rhs.a,
            ext: self.ext,
        }
    }
}

impl Neg for Fp2Elem {
    type Output = Fp2Elem;
    fn neg(self) -> Fp2Elem {
        Fp2Elem {
            a: -self.a,
            b: -self.b,
            ext: self.ext,
        }
    }
}

/// Which distinguished root of unity to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// z^2 = -1
    SqrtMinusOne,
    /// z^2 - z + 1 = 0, i.e. -omega with omega a primitive cube root of unity
    PrimitiveSixthRoot,
}

/// A point of F_p or of F_{p^2}, whichever is smallest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPoint {
    Base(FpElem),
    Extension(Fp2Elem),
}

impl FieldPoint {
    pub fn lift(self, ext: QuadraticExtension) -> Fp2Elem {
        match self {
            FieldPoint::Base(x) => ext.embed(x),
            FieldPoint::Extension(z) => {
                assert_eq!(z.ext(), ext);
                z
            }
        }
    }

    pub fn in_base_field(self) -> bool {
        matches!(self, FieldPoint::Base(_))
    }
}

/// Constructs `i` or a primitive sixth root of unity.
///
/// Lands in F_p when the defining polynomial splits there (p = 1 mod 4,
/// resp. p = 1 mod 3), and in `F_p[t]/(t^2-d)` otherwise.
pub fn construct_root(field: PrimeField, which: RootKind) -> Result<FieldPoint> {
    let ext = build_quadratic_extension(field);
    let z = match which {
        RootKind::SqrtMinusOne => ext.sqrt_of_base(field.elem(-1)),
        RootKind::PrimitiveSixthRoot => {
            if field.modulus() <= 3 {
                return Err(Error::Range {
                    value: field.modulus() as i64,
                    reason: "sixth roots of unity need p > 3".into(),
                });
            }
            // z = (1 + sqrt(-3)) / 2
            let s = ext.sqrt_of_base(field.elem(-3));
            let half = field.elem(2).inverse()?;
            (ext.one() + s).scale(half)
        }
    };
    Ok(match z.to_base() {
        Some(x) => FieldPoint::Base(x),
        None => FieldPoint::Extension(z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn smallest_nonresidue() {
        assert_eq!(build_quadratic_extension(f(3)).nonresidue().value(), 2);
        assert_eq!(build_quadratic_extension(f(5)).nonresidue().value(), 2);
        assert_eq!(build_quadratic_extension(f(7)).nonresidue().value(), 3);
        assert_eq!(build_quadratic_extension(f(17)).nonresidue().value(), 3);
    }

    #[test]
    fn sqrt_minus_one_examples() {
        let r = construct_root(f(5), RootKind::SqrtMinusOne).unwrap();
        match r {
            FieldPoint::Base(x) => assert!(x.value() == 2 || x.value() == 3),
            _ => panic!("p=5 should give a root in F_5"),
        }
        let r = construct_root(f(7), RootKind::SqrtMinusOne).unwrap();
        let ext = build_quadratic_extension(f(7));
        assert!(!r.in_base_field());
        let z = r.lift(ext);
        assert_eq!(z * z, -ext.one());
    }

    #[test]
    fn sixth_root_examples() {
        let r = construct_root(f(7), RootKind::PrimitiveSixthRoot).unwrap();
        match r {
            FieldPoint::Base(x) => assert!(x.value() == 3 || x.value() == 5),
            _ => panic!("p=7 should give a root in F_7"),
        }
        assert!(construct_root(f(3), RootKind::PrimitiveSixthRoot).is_err());
    }

    #[test]
    fn roots_satisfy_definitions_and_frobenius() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 101, 103, 197, 199] {
            let k = f(p);
            let ext = build_quadratic_extension(k);
            let i = construct_root(k, RootKind::SqrtMinusOne).unwrap();
            assert_eq!(i.in_base_field(), p % 4 == 1, "p={p}");
            let zi = i.lift(ext);
            assert_eq!(zi * zi + ext.one(), ext.zero());
            let frob = zi.pow(p);
            if i.in_base_field() {
                assert_eq!(frob, zi);
            } else {
                // conjugate root of X^2 + 1 is -i
                assert_eq!(frob, -zi);
                assert_eq!(frob, zi.conjugate());
            }

            let s = construct_root(k, RootKind::PrimitiveSixthRoot).unwrap();
            assert_eq!(s.in_base_field(), p % 3 == 1, "p={p}");
            let zs = s.lift(ext);
            assert_eq!(zs * zs - zs + ext.one(), ext.zero());
            assert_eq!(zs.pow(6), ext.one());
            assert_ne!(zs.pow(2), ext.one());
            assert_ne!(zs.pow(3), ext.one());
            let frob = zs.pow(p);
            if s.in_base_field() {
                assert_eq!(frob, zs);
            } else {
                // other root of X^2 - X + 1
                assert_eq!(frob, ext.one() - zs);
                assert_eq!(frob, zs.conjugate());
            }
        }
    }

    #[test]
    fn inverse_in_extension() {
        let ext = build_quadratic_extension(f(11));
        let k = ext.base();
        for a in 0..11 {
            for b in 0..11 {
                let z = ext.new_elem(k.elem(a), k.elem(b));
                if z.is_zero() {
                    assert!(z.inverse().is_err());
                } else {
                    assert_eq!(z * z.inverse().unwrap(), ext.one());
                }
            }
        }
    }
}
