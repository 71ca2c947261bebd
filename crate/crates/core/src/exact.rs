//! Exact integer and rational arithmetic: factorials, binomials, Bernoulli
//! numbers, Wilson and Fermat quotients, and the identities that hold over Q.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fp::{FpElem, PrimeField};
use crate::verifier::report::{CheckName, CheckResult, Witness};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// C(n, k) by the multiplicative formula; every intermediate division is exact.
pub fn binomial(n: u64, k: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "binomial({n}, {k}) needs k <= n"
        )));
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

fn bernoulli_cache() -> &'static RwLock<Vec<BigRational>> {
    static CACHE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

fn extend_bernoulli(table: &mut Vec<BigRational>, n: usize) {
    while table.len() <= n {
        let m = table.len();
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut c = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(c.clone()) * b;
            }
            c = c * (m + 1 - j) / (j + 1);
        }
        table.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
}

/// B_n with B_1 = -1/2, from the memoized recurrence.
pub fn bernoulli_exact(n: usize) -> BigRational {
    if let Some(b) = bernoulli_cache().read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = bernoulli_cache().write().unwrap();
    extend_bernoulli(&mut table, n);
    table[n].clone()
}

/// B_0..=B_n.
pub fn bernoulli_upto(n: usize) -> Vec<BigRational> {
    {
        let table = bernoulli_cache().read().unwrap();
        if table.len() > n {
            return table[..=n].to_vec();
        }
    }
    let mut table = bernoulli_cache().write().unwrap();
    extend_bernoulli(&mut table, n);
    table[..=n].to_vec()
}

/// ((p-1)! + 1) / p.
pub fn wilson_quotient(p: u64) -> Result<BigInt> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "Wilson quotient needs a prime, got {p}"
        )));
    }
    let (q, r) = (factorial(p - 1) + BigInt::one()).div_rem(&BigInt::from(p));
    debug_assert!(r.is_zero());
    Ok(q)
}

/// (x^p - x) / p = x * q_p(x), an integer for every integer x.
pub fn x_times_fermat_quotient(p: u64, x: &BigInt) -> BigInt {
    let num: BigInt = x.pow(p as u32) - x;
    let (q, r) = num.div_rem(&BigInt::from(p));
    assert!(r.is_zero(), "Fermat's little theorem failed for p={p}, x={x}");
    q
}

/// q_p(x) = (x^{p-1} - 1)/p for p not dividing x.
pub fn fermat_quotient(p: u64, x: &BigInt) -> Result<BigInt> {
    if (x % BigInt::from(p)).is_zero() {
        return Err(Error::InvalidArgument(format!("{p} divides {x}")));
    }
    let num: BigInt = x.pow((p - 1) as u32) - BigInt::one();
    let (q, r) = num.div_rem(&BigInt::from(p));
    assert!(r.is_zero());
    Ok(q)
}

/// Reduces a p-integral rational into F_p.
pub fn reduce_mod_p(r: &BigRational, field: PrimeField) -> Result<FpElem> {
    let den = field.from_bigint(r.denom());
    if den.is_zero() {
        return Err(Error::NotPIntegral {
            p: field.modulus(),
            value: r.to_string(),
        });
    }
    Ok(field.from_bigint(r.numer()) / den)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Checks sum_{n=1}^{k-1} C(k-1, n-1) B_n / n = -1/k for 2 <= k <= kmax.
pub fn verify_zagier_identity(kmax: u64) -> Result<CheckResult> {
    if kmax < 2 {
        return Err(Error::Range {
            value: kmax as i64,
            reason: "kmax must be at least 2".into(),
        });
    }
    let mut res = CheckResult::new(CheckName::ZagierIdentity, 0).param("kmax", kmax);
    let b = bernoulli_upto(kmax as usize);
    for k in 2..=kmax {
        let mut c = BigInt::one(); // C(k-1, n-1)
        let mut lhs = BigRational::zero();
        for n in 1..k {
            if !b[n as usize].is_zero() {
                lhs += BigRational::from_integer(c.clone()) * &b[n as usize] / rat(n as i64);
            }
            c = c * (k - n) / n;
        }
        let rhs = -rat(1) / rat(k as i64);
        if lhs != rhs {
            res.fail(Witness::new(lhs.to_string(), rhs.to_string()).at("k", k as i64));
            break;
        }
    }
    Ok(res)
}

/// C(2p-1, p-1) = 1 mod p^3, for p > 3.
pub fn verify_wolstenholme(p: u64) -> Result<CheckResult> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::Range {
            value: p as i64,
            reason: "Wolstenholme's congruence needs a prime p > 3".into(),
        });
    }
    let mut res = CheckResult::new(CheckName::Wolstenholme, p);
    let p3 = BigInt::from(p).pow(3u32);
    let c = binomial(2 * p - 1, p - 1)?.mod_floor(&p3);
    res.expect_eq(c, BigInt::one(), |l, r| {
        Witness::new(l.to_string(), r.to_string()).what("C(2p-1,p-1) mod p^3")
    });
    Ok(res)
}

/// (1 + p B_{p-1}) / p = w_p + 1 mod p, in exact rationals then reduced.
pub fn verify_lehmer(p: u64) -> Result<CheckResult> {
    let field = PrimeField::new(p)?;
    let mut res = CheckResult::new(CheckName::Lehmer, p);
    let b = bernoulli_exact((p - 1) as usize);
    let lhs_q = (rat(1) + rat(p as i64) * b) / rat(p as i64);
    let lhs = reduce_mod_p(&lhs_q, field)?;
    let rhs = field.from_bigint(&(wilson_quotient(p)? + 1));
    res.expect_eq(lhs, rhs, Witness::new);
    Ok(res)
}

/// Numerator and denominator as decimal strings.
pub fn rational_parts(r: &BigRational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

/// Floor division toward negative infinity.
pub fn floor_div(x: i64, p: i64) -> i64 {
    x.div_euclid(p)
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(4), BigInt::from(24));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(9, 4).unwrap(), BigInt::from(126));
        assert_eq!(binomial(17, 0).unwrap(), BigInt::from(1));
        assert_eq!(binomial(9, 4).unwrap() % 125, BigInt::from(1));
        assert!(binomial(3, 4).is_err());
        // Pascal's rule against the product formula
        for n in 1..40u64 {
            for k in 1..n {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_exact(0), r(1, 1));
        assert_eq!(bernoulli_exact(1), r(-1, 2));
        assert_eq!(bernoulli_exact(2), r(1, 6));
        assert_eq!(bernoulli_exact(4), r(-1, 30));
        assert_eq!(bernoulli_exact(3), r(0, 1));
        assert_eq!(bernoulli_exact(12), r(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        let b = bernoulli_upto(201);
        for m in 1..=100 {
            assert!(b[2 * m + 1].is_zero(), "B_{}", 2 * m + 1);
        }
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        let b = bernoulli_upto(200);
        for n in (2..=200).step_by(2) {
            let den = b[n].denom().clone();
            // squarefree, and prime divisors are exactly the q with (q-1) | n
            let mut expected = BigInt::one();
            for q in primes_between(2, n as u64 + 1) {
                if (n as u64).is_multiple_of(q - 1) {
                    expected *= q;
                }
            }
            assert_eq!(den, expected, "B_{n}");
        }
    }

    #[test]
    fn small_bernoulli_are_p_integral() {
        for p in primes_between(3, 199) {
            let field = PrimeField::new(p).unwrap();
            for n in 1..=(p as usize - 2) {
                assert!(reduce_mod_p(&bernoulli_exact(n), field).is_ok(), "p={p} n={n}");
            }
            assert!(reduce_mod_p(&bernoulli_exact(p as usize - 1), field).is_err());
        }
    }

    #[test]
    fn wilson_examples() {
        assert_eq!(wilson_quotient(3).unwrap(), BigInt::from(1));
        assert_eq!(wilson_quotient(5).unwrap(), BigInt::from(5));
        assert_eq!(wilson_quotient(7).unwrap(), BigInt::from(103));
        assert!(wilson_quotient(9).is_err());
    }

    #[test]
    fn fermat_quotient_examples() {
        assert_eq!(x_times_fermat_quotient(5, &BigInt::from(2)), BigInt::from(6));
        assert_eq!(x_times_fermat_quotient(5, &BigInt::from(7)), BigInt::from(3360));
        assert_eq!(x_times_fermat_quotient(13, &BigInt::from(1)), BigInt::from(0));
        assert_eq!(x_times_fermat_quotient(5, &BigInt::from(10)), BigInt::from(19998));
        assert_eq!(fermat_quotient(5, &BigInt::from(2)).unwrap(), BigInt::from(3));
        assert!(fermat_quotient(5, &BigInt::from(10)).is_err());
    }

    #[test]
    fn fermat_quotient_shift_by_p() {
        for p in [3u64, 5, 7, 11, 13] {
            for x in -40i64..40 {
                let a = x_times_fermat_quotient(p, &BigInt::from(x + p as i64));
                let b = x_times_fermat_quotient(p, &BigInt::from(x)) - BigInt::one();
                assert!(((a - b) % BigInt::from(p)).is_zero(), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(reduce_mod_p(&r(5, 24), f5).unwrap().value(), 0);
        assert_eq!(reduce_mod_p(&r(-1, 2), f5).unwrap().value(), 2);
        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(
            reduce_mod_p(&r(1, 6), f3),
            Err(Error::NotPIntegral { p: 3, .. })
        ));
    }

    #[test]
    fn zagier_small_cases_by_hand() {
        // k=2: C(1,0) B_1 = -1/2; k=3: -1/2 + 2 (1/6)/2 = -1/3
        assert_eq!(r(-1, 2), -r(1, 2));
        assert_eq!(r(-1, 2) + r(2, 1) * r(1, 6) / r(2, 1), r(-1, 3));
        assert!(verify_zagier_identity(3).unwrap().passed());
        assert!(verify_zagier_identity(200).unwrap().passed());
        assert!(verify_zagier_identity(1).is_err());
    }

    #[test]
    fn wolstenholme_and_lehmer() {
        for p in [5, 7, 13] {
            assert!(verify_wolstenholme(p).unwrap().passed());
        }
        assert!(verify_wolstenholme(3).is_err());
        for p in [3, 5, 7] {
            assert!(verify_lehmer(p).unwrap().passed());
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&BigInt::from(250), 5), 3);
        assert_eq!(valuation(&BigInt::from(-7), 5), 0);
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || bernoulli_exact(40 + 10 * i)))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (i, b) in got.iter().enumerate() {
            assert_eq!(*b, bernoulli_upto(40 + 10 * i)[40 + 10 * i]);
        }
    }
}
