//! Dense polynomials and truncated power series over F_p.
//!
//! Every series operation takes its truncation order explicitly. A polynomial
//! built from coefficients is exact (`order() == None`); anything that went
//! through a truncated product only knows its coefficients below `order()`,
//! and sums take the smaller of the two orders.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::fp::ext::Fp2Elem;
use crate::fp::field::{FpElem, PrimeField};

/// Values a polynomial over F_p can be evaluated at.
pub trait EvalPoint: Copy + Add<Output = Self> + Mul<Output = Self> {
    fn base_field(self) -> PrimeField;
    /// Embeds a coefficient into the ring `self` lives in.
    fn lift_coeff(self, c: FpElem) -> Self;
}

impl EvalPoint for FpElem {
    fn base_field(self) -> PrimeField {
        self.field()
    }
    fn lift_coeff(self, c: FpElem) -> Self {
        c
    }
}

impl EvalPoint for Fp2Elem {
    fn base_field(self) -> PrimeField {
        self.ext().base()
    }
    fn lift_coeff(self, c: FpElem) -> Self {
        self.ext().embed(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    field: PrimeField,
    /// residues in [0, p), index = degree, no trailing zeros
    coeffs: Vec<u64>,
    /// `Some(n)`: only known modulo X^n
    order: Option<usize>,
}

impl FpPoly {
    pub fn zero(field: PrimeField) -> Self {
        FpPoly {
            field,
            coeffs: Vec::new(),
            order: None,
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FpElem) -> Self {
        Self::monomial(c, 0)
    }

    /// The polynomial X.
    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: FpElem, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c.value();
        Self::from_raw(c.field(), coeffs, None)
    }

    pub fn from_coeffs(field: PrimeField, coeffs: impl IntoIterator<Item = FpElem>) -> Self {
        let raw = coeffs
            .into_iter()
            .map(|c| {
                assert_eq!(c.field(), field);
                c.value()
            })
            .collect();
        Self::from_raw(field, raw, None)
    }

    /// Coefficients given as signed integers, lowest degree first.
    pub fn from_ints(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.elem(c)))
    }

    fn from_raw(field: PrimeField, mut coeffs: Vec<u64>, order: Option<usize>) -> Self {
        if let Some(n) = order {
            coeffs.truncate(n);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly {
            field,
            coeffs,
            order,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Truncation order, `None` for an exact polynomial.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the stored part; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (degree + 1).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FpElem {
        self.field
            .from_residue(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = FpElem> + ExactSizeIterator + '_ {
        self.coeffs.iter().map(|&c| self.field.from_residue(c))
    }

    /// Residues lowest degree first.
    pub fn residues(&self) -> &[u64] {
        &self.coeffs
    }

    /// Drops all terms of degree >= `order`.
    pub fn truncated(&self, order: usize) -> FpPoly {
        Self::from_raw(
            self.field,
            self.coeffs.clone(),
            Some(self.order.map_or(order, |o| o.min(order))),
        )
    }

    /// Forgets the truncation marker, treating the stored part as exact.
    pub fn into_exact(mut self) -> FpPoly {
        self.order = None;
        self
    }

    /// First degree below `order` where `self` and `other` differ.
    pub fn first_difference_below(&self, other: &FpPoly, order: usize) -> Option<usize> {
        (0..order).find(|&i| self.coeff(i) != other.coeff(i))
    }

    fn same_field(&self, other: &FpPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            });
        }
        Ok(())
    }

    fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_field(other)?;
        let p = self.field.modulus();
        let n = self.coeffs.len().max(other.coeffs.len());
        let raw = (0..n)
            .map(|i| {
                let s = self.coeffs.get(i).copied().unwrap_or(0)
                    + other.coeffs.get(i).copied().unwrap_or(0);
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Ok(Self::from_raw(
            self.field,
            raw,
            Self::min_order(self.order, other.order),
        ))
    }

    pub fn neg(&self) -> FpPoly {
        self.scale(-self.field.one())
    }

    pub fn sub(&self, other: &FpPoly) -> Result<FpPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FpElem) -> FpPoly {
        assert_eq!(c.field(), self.field);
        let raw = self.coeffs().map(|x| (x * c).value()).collect();
        Self::from_raw(self.field, raw, self.order)
    }

    /// Multiplies by X^k.
    pub fn shift_up(&self, k: usize) -> FpPoly {
        let mut raw = vec![0; k];
        raw.extend_from_slice(&self.coeffs);
        Self::from_raw(self.field, raw, self.order.map(|o| o + k))
    }

    fn mul_raw(&self, other: &FpPoly, limit: usize) -> Vec<u64> {
        let p = self.field.modulus() as u128;
        let n = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1).min(limit);
        let mut out = vec![0u128; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                let slot = &mut out[i + j];
                *slot += a as u128 * b as u128;
                if *slot >= p << 64 {
                    *slot %= p;
                }
            }
        }
        out.into_iter().map(|x| (x % p) as u64).collect()
    }

    /// Exact product; the order is limited by the operands' orders.
    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_field(other)?;
        let order = Self::min_order(self.order, other.order);
        let raw = self.mul_raw(other, order.unwrap_or(usize::MAX));
        Ok(Self::from_raw(self.field, raw, order))
    }

    /// `self^e mod X^order`.
    pub fn pow_trunc(&self, mut e: u64, order: usize) -> FpPoly {
        let mut acc = FpPoly::one(self.field).truncated(order);
        let mut base = self.truncated(order);
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_trunc(&acc, &base, order).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = poly_mul_trunc(&base, &base, order).expect("same field");
            }
        }
        acc
    }

    /// f(cX).
    pub fn scale_var(&self, c: FpElem) -> FpPoly {
        let mut pw = self.field.one();
        let raw = self
            .coeffs()
            .map(|a| {
                let v = (a * pw).value();
                pw *= c;
                v
            })
            .collect();
        Self::from_raw(self.field, raw, self.order)
    }

    /// X^n f(1/X) for an exact polynomial of degree <= n.
    pub fn reversed(&self, n: usize) -> Result<FpPoly> {
        if self.order.is_some() {
            return Err(Error::InvalidArgument(
                "cannot reverse a truncated series".into(),
            ));
        }
        if self.degree().is_some_and(|d| d > n) {
            return Err(Error::InvalidArgument(format!(
                "degree {} exceeds reversal length {n}",
                self.degree().unwrap()
            )));
        }
        let mut raw = vec![0; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            raw[n - i] = c;
        }
        Ok(Self::from_raw(self.field, raw, None))
    }

    /// Horner evaluation at a point of F_p or F_{p^2}.
    pub fn eval<T: EvalPoint>(&self, x: T) -> Result<T> {
        if x.base_field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: x.base_field().modulus(),
            });
        }
        let zero = x.lift_coeff(self.field.zero());
        Ok(self
            .coeffs()
            .rev()
            .fold(zero, |acc, c| acc * x + x.lift_coeff(c)))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}X")?,
                _ => write!(f, "{c}X^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order {
            write!(f, " + O(X^{n})")?;
        }
        Ok(())
    }
}

/// f*g with all terms of degree >= `order` dropped.
pub fn poly_mul_trunc(f: &FpPoly, g: &FpPoly, order: usize) -> Result<FpPoly> {
    f.same_field(g)?;
    let order = FpPoly::min_order(Some(order), FpPoly::min_order(f.order, g.order)).unwrap();
    let raw = f.mul_raw(g, order);
    Ok(FpPoly::from_raw(f.field, raw, Some(order)))
}

/// The series h with f*h = 1 mod X^order, by the usual coefficient recursion.
pub fn series_inverse_trunc(f: &FpPoly, order: usize) -> Result<FpPoly> {
    let field = f.field;
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Err(Error::NotInvertible {
            p: field.modulus(),
        });
    }
    let order = f.order.map_or(order, |o| o.min(order));
    let inv0 = c0.inverse()?;
    let p = field.modulus() as u128;
    let mut out: Vec<u64> = Vec::with_capacity(order);
    for n in 0..order {
        if n == 0 {
            out.push(inv0.value());
            continue;
        }
        let mut acc = 0u128;
        for k in 1..=n.min(f.coeffs.len().saturating_sub(1)) {
            acc += f.coeffs[k] as u128 * out[n - k] as u128;
            if acc >= p << 64 {
                acc %= p;
            }
        }
        let s = field.from_residue((acc % p) as u64);
        out.push((-(s * inv0)).value());
    }
    Ok(FpPoly::from_raw(field, out, Some(order)))
}

/// Formal derivative; terms whose degree is a multiple of p vanish.
pub fn poly_derivative(f: &FpPoly) -> FpPoly {
    let field = f.field;
    let raw = f
        .coeffs()
        .enumerate()
        .skip(1)
        .map(|(i, c)| (c * field.elem((i as u64 % field.modulus()) as i64)).value())
        .collect();
    FpPoly::from_raw(field, raw, f.order.map(|o| o.saturating_sub(1)))
}

/// f(g(X)) mod X^order by Horner's rule with truncated products.
pub fn poly_compose_trunc(f: &FpPoly, g: &FpPoly, order: usize) -> Result<FpPoly> {
    f.same_field(g)?;
    if f.order.is_some() && !g.coeff(0).is_zero() {
        return Err(Error::InvalidArgument(
            "composing a truncated series with a series of nonzero constant term".into(),
        ));
    }
    let mut acc = FpPoly::zero(f.field).truncated(order);
    for c in f.coeffs().rev() {
        acc = poly_mul_trunc(&acc, g, order)?.add(&FpPoly::constant(c))?;
    }
    Ok(acc)
}

/// f(X + c), expanded with binomial coefficients reduced mod p.
pub fn poly_shift(f: &FpPoly, c: FpElem) -> FpPoly {
    let field = f.field;
    assert_eq!(c.field(), field);
    let n = f.coeffs.len();
    let mut out = vec![field.zero(); n];
    // row holds C(m, k) mod p for the current m
    let mut row: Vec<FpElem> = Vec::with_capacity(n);
    let mut cpow: Vec<FpElem> = Vec::with_capacity(n);
    let mut pw = field.one();
    for _ in 0..n {
        cpow.push(pw);
        pw *= c;
    }
    for (m, a) in f.coeffs().enumerate() {
        row.push(field.one());
        for k in (1..m).rev() {
            row[k] = row[k] + row[k - 1];
        }
        if a.is_zero() {
            continue;
        }
        for k in 0..=m {
            out[k] += a * row[k] * cpow[m - k];
        }
    }
    let raw = out.into_iter().map(|x| x.value()).collect();
    FpPoly::from_raw(field, raw, f.order)
}

/// The finite polylogarithm sum_{k=1}^{p-1} X^k / k^r, for any integer r.
pub fn finite_polylog(field: PrimeField, r: i64) -> FpPoly {
    let p = field.modulus() as usize;
    let raw = std::iter::once(0)
        .chain((1..p).map(|k| {
            field
                .elem(k as i64)
                .powi(-r)
                .expect("k is a unit")
                .value()
        }))
        .collect();
    FpPoly::from_raw(field, raw, None)
}

/// The unique polynomial of degree < n through n points with distinct abscissae.
pub fn lagrange_interpolate(field: PrimeField, points: &[(FpElem, FpElem)]) -> Result<FpPoly> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::InvalidArgument(format!(
                "repeated interpolation node {x}"
            )));
        }
    }
    // master = prod (X - x_j)
    let mut master = FpPoly::one(field);
    for &(x, _) in points {
        master = master.mul(&FpPoly::from_coeffs(field, [-x, field.one()]))?;
    }
    let mut acc = FpPoly::zero(field);
    for &(x, y) in points {
        if y.is_zero() {
            continue;
        }
        // synthetic division of master by (X - x)
        let n = master.coeffs.len() - 1;
        let mut quot = vec![field.zero(); n];
        let mut carry = field.zero();
        for k in (0..n).rev() {
            carry = master.coeff(k + 1) + carry * x;
            quot[k] = carry;
        }
        let basis = FpPoly::from_coeffs(field, quot);
        let denom = basis.eval(x)?;
        acc = acc.add(&basis.scale(y * denom.inverse()?))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn truncated_product_examples() {
        let k = f(5);
        let a = FpPoly::from_ints(k, &[1, 1]);
        let b = FpPoly::from_ints(k, &[1, -1]);
        let prod = poly_mul_trunc(&a, &b, 2).unwrap();
        assert_eq!(prod.residues(), &[1]);
        assert_eq!(prod.order(), Some(2));
        assert!(poly_mul_trunc(&a, &FpPoly::zero(k), 10).unwrap().is_zero());
        assert_eq!(
            poly_mul_trunc(&a, &FpPoly::one(f(7)), 3),
            Err(Error::FieldMismatch { left: 5, right: 7 })
        );
    }

    #[test]
    fn inverse_examples() {
        let k = f(5);
        // 1 + X^4 inverts to the alternating geometric series in X^4
        let g = FpPoly::from_ints(k, &[1, 0, 0, 0, 1]);
        let inv = series_inverse_trunc(&g, 25).unwrap();
        for i in 0..25 {
            let want = if i % 4 == 0 {
                if (i / 4) % 2 == 0 {
                    1
                } else {
                    4
                }
            } else {
                0
            };
            assert_eq!(inv.coeff(i).value(), want, "degree {i}");
        }
        let c = series_inverse_trunc(&FpPoly::from_ints(k, &[2]), 4).unwrap();
        assert_eq!(c.residues(), &[3]);
        let geo = series_inverse_trunc(&FpPoly::from_ints(k, &[1, 1]), 3).unwrap();
        assert_eq!(geo.residues(), &[1, 4, 1]);
        assert_eq!(
            series_inverse_trunc(&FpPoly::from_ints(k, &[0, 1]), 3),
            Err(Error::NotInvertible { p: 5 })
        );
    }

    #[test]
    fn derivative_examples() {
        let k = f(5);
        assert!(poly_derivative(&FpPoly::monomial(k.one(), 5)).is_zero());
        let g = FpPoly::from_ints(k, &[0, 0, 0, 3, 2]);
        assert_eq!(poly_derivative(&g).residues(), &[0, 0, 4, 3]);
        assert!(poly_derivative(&FpPoly::from_ints(k, &[4])).is_zero());
    }

    #[test]
    fn compose_examples() {
        let k = f(7);
        let sq = FpPoly::from_ints(k, &[0, 0, 1]);
        let xp1 = FpPoly::from_ints(k, &[1, 1]);
        assert_eq!(
            poly_compose_trunc(&sq, &xp1, 3).unwrap().residues(),
            &[1, 2, 1]
        );
        let any = FpPoly::from_ints(k, &[3, 1, 4, 1, 5]);
        assert_eq!(
            poly_compose_trunc(&any, &FpPoly::x(k), 3).unwrap(),
            any.truncated(3)
        );
        // L_0(g) = X^{p-1} - 1 mod X^p when g'(0) != 0
        let l0 = finite_polylog(k, 0);
        let g = FpPoly::from_ints(k, &[1, 3, 2, 6]);
        let got = poly_compose_trunc(&l0, &g, 7).unwrap();
        assert_eq!(got, FpPoly::from_ints(k, &[-1, 0, 0, 0, 0, 0, 1]).truncated(7));
    }

    #[test]
    fn shift_examples() {
        let k = f(5);
        let sq = FpPoly::from_ints(k, &[0, 0, 1]);
        assert_eq!(poly_shift(&sq, k.elem(-1)).residues(), &[1, 3, 1]);
        let g = FpPoly::from_ints(k, &[0, 0, 0, 3, 2]);
        assert_eq!(poly_shift(&g, k.zero()), g);
        let shifted = poly_shift(&g, k.elem(-1));
        assert!(shifted.eval(k.one()).unwrap().is_zero());
    }

    #[test]
    fn polylog_examples() {
        let k = f(5);
        assert_eq!(finite_polylog(k, 1).residues(), &[0, 1, 3, 2, 4]);
        assert_eq!(finite_polylog(k, 0).residues(), &[0, 1, 1, 1, 1]);
        assert!(finite_polylog(k, 1).eval(k.one()).unwrap().is_zero());
        // r = -1: sum k X^k
        assert_eq!(finite_polylog(k, -1).residues(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn eval_examples() {
        let k = f(5);
        let gamma = FpPoly::from_ints(k, &[0, 0, 0, 3, 2]);
        assert_eq!(gamma.eval(k.one()).unwrap().value(), 0);
        assert_eq!(gamma.eval(k.elem(-1)).unwrap().value(), 4);
        assert!(FpPoly::zero(k).eval(k.elem(3)).unwrap().is_zero());
        assert_eq!(
            gamma.eval(f(7).one()),
            Err(Error::FieldMismatch { left: 5, right: 7 })
        );
    }

    #[test]
    fn polylog_identities() {
        for p in [3u64, 5, 7, 11, 13, 31] {
            let k = f(p);
            let x = FpPoly::x(k);
            let l0 = finite_polylog(k, 0);
            // (X-1)(L_0 + 1) = X^p - 1
            let lhs = x
                .sub(&FpPoly::one(k))
                .unwrap()
                .mul(&l0.add(&FpPoly::one(k)).unwrap())
                .unwrap();
            let rhs = FpPoly::monomial(k.one(), p as usize)
                .sub(&FpPoly::one(k))
                .unwrap();
            assert_eq!(lhs, rhs);
            for r in [1i64, 2] {
                let d = x.mul(&poly_derivative(&finite_polylog(k, r))).unwrap();
                assert_eq!(d, finite_polylog(k, r - 1));
            }
            let l1 = finite_polylog(k, 1);
            let one_minus_x = FpPoly::from_ints(k, &[1, -1]);
            assert_eq!(poly_compose_trunc(&l1, &one_minus_x, p as usize).unwrap().into_exact(), l1);
            for x in k.elements().skip(1) {
                let lhs = x.pow(p) * l1.eval(x.inverse().unwrap()).unwrap();
                assert_eq!(lhs, -l1.eval(x).unwrap());
            }
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let k = f(11);
        let g = FpPoly::from_ints(k, &[0, 5, 0, 7, 1, 0, 0, 2]);
        let pts: Vec<_> = k.elements().take(8).map(|x| (x, g.eval(x).unwrap())).collect();
        assert_eq!(lagrange_interpolate(k, &pts).unwrap(), g);
        let dup = [(k.one(), k.one()), (k.one(), k.zero())];
        assert!(lagrange_interpolate(k, &dup).is_err());
    }

    fn arb_poly(p: u64, max_len: usize) -> impl Strategy<Value = FpPoly> {
        prop::collection::vec(0..p as i64, 0..max_len)
            .prop_map(move |c| FpPoly::from_ints(PrimeField::new(p).unwrap(), &c))
    }

    proptest! {
        #[test]
        fn inverse_times_self_is_one(
            p in prop::sample::select(vec![5u64, 7]),
            seed in prop::collection::vec(0i64..1000, 1..20),
            which in 0usize..3,
        ) {
            let k = f(p);
            let mut c: Vec<i64> = seed;
            if c[0] % p as i64 == 0 {
                c[0] = 1;
            }
            let g = FpPoly::from_ints(k, &c);
            let m = [8usize, p as usize, (p * p) as usize][which];
            let inv = series_inverse_trunc(&g, m).unwrap();
            let prod = poly_mul_trunc(&g, &inv, m).unwrap();
            prop_assert_eq!(prod, FpPoly::one(k).truncated(m));
        }

        #[test]
        fn shift_round_trips(g in arb_poly(13, 15), c in 0i64..13) {
            let k = g.field();
            let there = poly_shift(&g, k.elem(c));
            prop_assert_eq!(poly_shift(&there, k.elem(-c)), g);
        }

        #[test]
        fn shift_matches_composition(g in arb_poly(7, 12), c in 0i64..7) {
            let k = g.field();
            let lin = FpPoly::from_coeffs(k, [k.elem(c), k.one()]);
            let composed = poly_compose_trunc(&g, &lin, 64).unwrap().into_exact();
            prop_assert_eq!(poly_shift(&g, k.elem(c)), composed);
        }

        #[test]
        fn mul_commutes_and_evaluates(a in arb_poly(11, 10), b in arb_poly(11, 10), x in 0i64..11) {
            let k = a.field();
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(&ab, &b.mul(&a).unwrap());
            let pt = k.elem(x);
            prop_assert_eq!(ab.eval(pt).unwrap(), a.eval(pt).unwrap() * b.eval(pt).unwrap());
        }
    }
}
