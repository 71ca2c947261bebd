//! The divided-Bernoulli polynomials gamma, gamma* and rho over F_p, and the
//! functional equations, congruences and evaluations built on them.
//!
//! gamma(X) = sum_{n=1}^{p-2} (B_n/n) X^{p-n}
//! gamma*(X) = X^p gamma(1/X) = sum_{n=1}^{p-2} (B_n/n) X^n
//! rho(X) = sum_{n=1}^{p-2} (B_n/n^2) X^{p-n}

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{
    bernoulli_exact, bernoulli_upto, binomial, fermat_quotient, floor_div, reduce_mod_p,
    wilson_quotient, x_times_fermat_quotient,
};
use crate::fp::{
    build_quadratic_extension, construct_root, finite_polylog, lagrange_interpolate,
    poly_compose_trunc, poly_shift, Fp2Elem, FpElem, FpPoly, PrimeField, QuadraticExtension,
    RootKind,
};
use crate::verifier::report::{CheckName, CheckResult, Witness, WitnessValue};

#[derive(Debug, Clone, PartialEq)]
pub struct GammaPolys {
    field: PrimeField,
    gamma: FpPoly,
    gamma_star: FpPoly,
    rho: FpPoly,
    /// w_p mod p
    wilson: FpElem,
}

impl GammaPolys {
    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn gamma(&self) -> &FpPoly {
        &self.gamma
    }

    pub fn gamma_star(&self) -> &FpPoly {
        &self.gamma_star
    }

    pub fn rho(&self) -> &FpPoly {
        &self.rho
    }

    pub fn wilson(&self) -> FpElem {
        self.wilson
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// B_n/n reduced mod p for n = 1..=p-2, index 0 unused.
fn divided_bernoulli(field: PrimeField) -> Result<Vec<FpElem>> {
    let p = field.modulus() as usize;
    let b = bernoulli_upto(p.saturating_sub(2));
    let mut out = vec![field.zero()];
    for (n, bn) in b.iter().enumerate().skip(1) {
        out.push(reduce_mod_p(&(bn / rat(n as i64)), field)?);
    }
    Ok(out)
}

pub fn build_gamma_polys(p: u64) -> Result<GammaPolys> {
    let field = PrimeField::new(p)?;
    let pu = p as usize;
    let db = divided_bernoulli(field)?;
    let mut g = vec![field.zero(); pu];
    let mut r = vec![field.zero(); pu];
    for n in 1..=pu - 2 {
        g[pu - n] = db[n];
        r[pu - n] = db[n] / field.elem(n as i64);
    }
    let gamma = FpPoly::from_coeffs(field, g);
    let gamma_star = gamma.reversed(pu)?;
    let rho = FpPoly::from_coeffs(field, r);
    let wilson = field.from_bigint(&wilson_quotient(p)?);
    Ok(GammaPolys {
        field,
        gamma,
        gamma_star,
        rho,
        wilson,
    })
}

/// Records the first coefficient where two polynomials differ.
fn compare_polys(res: &mut CheckResult, lhs: &FpPoly, rhs: &FpPoly, what: &str) -> bool {
    let len = lhs.len().max(rhs.len());
    match lhs.first_difference_below(rhs, len) {
        None => true,
        Some(d) => {
            res.fail(
                Witness::new(lhs.coeff(d), rhs.coeff(d))
                    .at("degree", d as i64)
                    .what(what),
            );
            false
        }
    }
}

fn poly(field: PrimeField, coeffs: &[i64]) -> FpPoly {
    FpPoly::from_ints(field, coeffs)
}

/// L_1(X) + X^{p-1} - w_p - 1.
fn feq_rhs(g: &GammaPolys) -> Result<FpPoly> {
    let f = g.field;
    finite_polylog(f, 1)
        .add(&FpPoly::monomial(f.one(), g.p() as usize - 1))?
        .sub(&FpPoly::constant(g.wilson + f.one()))
}

/// gamma(X-1) - gamma(X) = L_1(X) + X^{p-1} - w_p - 1 as polynomials.
pub fn verify_feq_gamma(p: u64) -> Result<CheckResult> {
    let g = build_gamma_polys(p)?;
    let mut res = CheckResult::new(CheckName::FeqGamma, p);
    let lhs = poly_shift(&g.gamma, g.field.elem(-1)).sub(&g.gamma)?;
    compare_polys(&mut res, &lhs, &feq_rhs(&g)?, "gamma(X-1)-gamma(X)");
    Ok(res)
}

/// gamma(X) + gamma(1-X) = -L_1(X) - X^{p-1} - (1-X)^{p-1} + w_p + 1.
pub fn verify_feq_gamma_sym(p: u64) -> Result<CheckResult> {
    let g = build_gamma_polys(p)?;
    let f = g.field;
    let pu = p as usize;
    let mut res = CheckResult::new(CheckName::FeqGammaSym, p);
    let one_minus_x = poly(f, &[1, -1]);
    let reflected = poly_compose_trunc(&g.gamma, &one_minus_x, pu + 1)?.into_exact();
    let lhs = g.gamma.add(&reflected)?;
    let rhs = finite_polylog(f, 1)
        .neg()
        .sub(&FpPoly::monomial(f.one(), pu - 1))?
        .sub(&one_minus_x.pow_trunc(p - 1, pu + 1).into_exact())?
        .add(&FpPoly::constant(g.wilson + f.one()))?;
    compare_polys(&mut res, &lhs, &rhs, "gamma(X)+gamma(1-X)");
    Ok(res)
}

/// gamma(X) + gamma(-X) = -X^{p-1}, and gamma(X) + X^{p-1}/2 is odd.
pub fn verify_gamma_parity(p: u64) -> Result<CheckResult> {
    let g = build_gamma_polys(p)?;
    let f = g.field;
    let pu = p as usize;
    let mut res = CheckResult::new(CheckName::GammaParity, p);
    let lhs = g.gamma.add(&g.gamma.scale_var(-f.one()))?;
    if !compare_polys(&mut res, &lhs, &FpPoly::monomial(-f.one(), pu - 1), "gamma(X)+gamma(-X)") {
        return Ok(res);
    }
    let shifted = g
        .gamma
        .add(&FpPoly::monomial(f.elem(2).inverse()?, pu - 1))?;
    for (d, c) in shifted.coeffs().enumerate().step_by(2) {
        if !c.is_zero() {
            res.fail(
                Witness::new(c, 0)
                    .at("degree", d as i64)
                    .what("even coefficient of gamma + X^{p-1}/2"),
            );
            break;
        }
    }
    Ok(res)
}

/// Rebuilds gamma from the functional equation alone: gamma(0) = 0 and
/// gamma(x-1) = gamma(x) + R(x) give its value at every residue, and the
/// unique interpolant of degree < p is returned.
pub fn reconstruct_gamma_from_feq(p: u64) -> Result<FpPoly> {
    let field = PrimeField::new(p)?;
    let w = field.from_bigint(&wilson_quotient(p)?);
    let l1 = finite_polylog(field, 1);
    let residual = |x: FpElem| -> Result<FpElem> {
        Ok(l1.eval(x)? + x.pow(p - 1) - w - field.one())
    };
    let mut points = Vec::with_capacity(p as usize);
    let mut x = field.zero();
    let mut value = field.zero();
    for _ in 0..p {
        points.push((x, value));
        value += residual(x)?;
        x -= field.one();
    }
    lagrange_interpolate(field, &points)
}

/// Dimension of the kernel of f(X) -> f(X-1) - f(X) on polynomials of degree
/// < p with zero constant term, by Gaussian elimination over F_p.
pub fn difference_operator_kernel_dim(field: PrimeField) -> usize {
    let n = field.modulus() as usize - 1;
    // column j is the image of X^{j+1}, rows are degrees 0..p-1
    let mut m: Vec<Vec<FpElem>> = vec![vec![field.zero(); n]; n + 1];
    for j in 0..n {
        let basis = FpPoly::monomial(field.one(), j + 1);
        let img = poly_shift(&basis, field.elem(-1))
            .sub(&basis)
            .expect("same field");
        for (row, c) in m.iter_mut().zip(img.coeffs().chain(std::iter::repeat(field.zero()))) {
            row[j] = c;
        }
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inverse().expect("pivot is nonzero");
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col] * inv;
                for (dst, &src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *dst -= factor * src;
                }
            }
        }
        rank += 1;
    }
    n - rank
}

/// Interpolated reconstruction equals the direct construction, and the
/// difference operator has trivial kernel (so the reconstruction is unique).
pub fn verify_gamma_reconstruction(p: u64) -> Result<CheckResult> {
    let g = build_gamma_polys(p)?;
    let mut res = CheckResult::new(CheckName::GammaReconstruction, p);
    let rebuilt = reconstruct_gamma_from_feq(p)?;
    if !compare_polys(&mut res, &rebuilt, &g.gamma, "interpolated vs direct") {
        return Ok(res);
    }
    let kernel = difference_operator_kernel_dim(g.field);
    res.expect_eq(kernel as u64, 0, |l, r| {
        Witness::new(l, r).what("kernel dimension of the difference operator")
    });
    Ok(res)
}

/// (1 - X^p - (1-X)^p)/p with exact binomials, reduced, equals L_1(X).
pub fn verify_granville_pol(p: u64) -> Result<CheckResult> {
    let field = PrimeField::new(p)?;
    let mut res = CheckResult::new(CheckName::GranvillePol, p);
    let bp = BigInt::from(p);
    let mut coeffs = Vec::with_capacity(p as usize + 1);
    for k in 0..=p {
        // coefficient of X^k in 1 - X^p - (1-X)^p
        let mut c = -binomial(p, k)?;
        if k % 2 == 1 {
            c = -c;
        }
        if k == 0 {
            c += 1;
        }
        if k == p {
            c -= 1;
        }
        let (q, r) = c.div_rem(&bp);
        if !r.is_zero() {
            return Err(Error::ArithmeticFault(format!(
                "coefficient {c} of X^{k} is not divisible by {p}"
            )));
        }
        coeffs.push(field.from_bigint(&q));
    }
    let lhs = FpPoly::from_coeffs(field, coeffs);
    compare_polys(&mut res, &lhs, &finite_polylog(field, 1), "(1-X^p-(1-X)^p)/p");
    Ok(res)
}

/// sum_{k=1}^{p-2} (B_k/k) x^{p-k} = x q_p(x) + w_p x + floor(x/p) mod p
/// for every integer x in [xmin, xmax].
pub fn verify_nielsen(p: u64, xmin: i64, xmax: i64) -> Result<CheckResult> {
    if xmin > xmax {
        return Err(Error::InvalidArgument(format!(
            "empty range [{xmin}, {xmax}]"
        )));
    }
    let field = PrimeField::new(p)?;
    let db = divided_bernoulli(field)?;
    let w = field.from_bigint(&wilson_quotient(p)?);
    let mut res = CheckResult::new(CheckName::Nielsen, p)
        .param("xmin", xmin)
        .param("xmax", xmax);
    for x in xmin..=xmax {
        let xr = field.elem(x);
        let lhs = (1..=p as usize - 2).fold(field.zero(), |acc, k| {
            acc + db[k] * xr.pow(p - k as u64)
        });
        let xq = field.from_bigint(&x_times_fermat_quotient(p, &BigInt::from(x)));
        let rhs = xq + w * xr + field.elem(floor_div(x, p as i64));
        if lhs != rhs {
            res.fail(Witness::new(lhs, rhs).at("x", x));
            break;
        }
    }
    Ok(res)
}

/// Checks the power-sum chain in the proof of Nielsen's congruence for
/// 0 <= x < p: Faulhaber's formula exactly over Q, then
/// sum_{k<=x} k^{p-1} = x = x q_p(x) + (w_p+1) x - sum_j (B_j/j) x^{p-j} mod p.
pub fn verify_faulhaber_check(p: u64) -> Result<CheckResult> {
    let field = PrimeField::new(p)?;
    let b = bernoulli_upto(p as usize - 1);
    let db = divided_bernoulli(field)?;
    let w = field.from_bigint(&wilson_quotient(p)?);
    let mut res = CheckResult::new(CheckName::Faulhaber, p);
    let mut power_sum = BigInt::zero();
    for x in 0..p {
        let bx = BigInt::from(x);
        if x > 0 {
            power_sum += bx.pow(p as u32 - 1);
        }
        let mut faulhaber = BigRational::zero();
        for j in 0..p {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            faulhaber += rat(sign)
                * BigRational::from_integer(binomial(p, j)?)
                * &b[j as usize]
                * BigRational::from_integer(bx.pow((p - j) as u32));
        }
        faulhaber /= rat(p as i64);
        if faulhaber != BigRational::from_integer(power_sum.clone()) {
            res.fail(
                Witness::new(faulhaber.to_string(), power_sum.to_string())
                    .at("x", x as i64)
                    .what("Faulhaber's formula"),
            );
            break;
        }
        let s = field.from_bigint(&power_sum);
        let xr = field.elem(x as i64);
        if s != xr {
            res.fail(Witness::new(s, xr).at("x", x as i64).what("power sum = x"));
            break;
        }
        let tail = (1..=p as usize - 2).fold(field.zero(), |acc, j| {
            acc + db[j] * xr.pow(p - j as u64)
        });
        let chain = field.from_bigint(&x_times_fermat_quotient(p, &bx))
            + (w + field.one()) * xr
            - tail;
        if s != chain {
            res.fail(Witness::new(s, chain).at("x", x as i64).what("reduced chain"));
            break;
        }
    }
    Ok(res)
}

fn point_value(z: Fp2Elem) -> WitnessValue {
    match z.to_base() {
        Some(x) => WitnessValue::Residue(x.value()),
        None => WitnessValue::Text(z.to_string()),
    }
}

fn expect_ext(res: &mut CheckResult, lhs: Fp2Elem, rhs: Fp2Elem, what: &str) -> bool {
    if lhs == rhs {
        true
    } else {
        res.fail(Witness::new(point_value(lhs), point_value(rhs)).what(what));
        false
    }
}

fn roots(field: PrimeField) -> Result<(QuadraticExtension, Fp2Elem, Fp2Elem)> {
    let ext = build_quadratic_extension(field);
    let i = construct_root(field, RootKind::SqrtMinusOne)?.lift(ext);
    let z = construct_root(field, RootKind::PrimitiveSixthRoot)?.lift(ext);
    Ok((ext, i, z))
}

fn require_p_at_least_5(name: &str, p: u64) -> Result<()> {
    if p < 5 {
        return Err(Error::Range {
            value: p as i64,
            reason: format!("{name} needs p >= 5"),
        });
    }
    Ok(())
}

/// L_1(1) = 0, L_1(1/2) = q_p(2), L_1(-omega) = 0, L_1(i) + L_1(-i) = -q_p(2)
/// and gamma(i) + gamma(-i) = (-1)^{(p+1)/2}, evaluated in F_p or F_{p^2}.
pub fn verify_polylog_special_values(p: u64) -> Result<CheckResult> {
    require_p_at_least_5("polylog special values", p)?;
    let g = build_gamma_polys(p)?;
    let f = g.field;
    let (ext, i, z) = roots(f)?;
    let l1 = finite_polylog(f, 1);
    let q2 = f.from_bigint(&fermat_quotient(p, &BigInt::from(2))?);
    let mut res = CheckResult::new(CheckName::PolylogSpecialValues, p);
    res.set_param("i_in_base_field", i.to_base().is_some());
    res.set_param("sixth_root_in_base_field", z.to_base().is_some());

    let at1 = l1.eval(f.one())?;
    if !expect_ext(&mut res, ext.embed(at1), ext.zero(), "L_1(1)") {
        return Ok(res);
    }
    let at_half = l1.eval(f.elem(2).inverse()?)?;
    if !expect_ext(&mut res, ext.embed(at_half), ext.embed(q2), "L_1(1/2)") {
        return Ok(res);
    }
    // -omega and -omega^{-1} are the two roots of X^2 - X + 1
    for (label, root) in [("L_1(-omega)", z), ("L_1(-omega^-1)", ext.one() - z)] {
        if !expect_ext(&mut res, l1.eval(root)?, ext.zero(), label) {
            return Ok(res);
        }
    }
    let pair = l1.eval(i)? + l1.eval(-i)?;
    if !expect_ext(&mut res, pair, ext.embed(-q2), "L_1(i)+L_1(-i)") {
        return Ok(res);
    }
    let gpair = g.gamma.eval(i)? + g.gamma.eval(-i)?;
    let sign = if p.div_ceil(2).is_multiple_of(2) { f.one() } else { -f.one() };
    expect_ext(&mut res, gpair, ext.embed(sign), "gamma(i)+gamma(-i)");
    Ok(res)
}

/// sum B_n/n = w_p and sum 2^n B_n/n = -q_p(2) + w_p - 1 mod p (n = 1..p-2),
/// summed exactly over Q first.
pub fn verify_numeric_sums(p: u64) -> Result<CheckResult> {
    require_p_at_least_5("numeric sums", p)?;
    let field = PrimeField::new(p)?;
    let b = bernoulli_upto(p as usize - 2);
    let w = field.from_bigint(&wilson_quotient(p)?);
    let q2 = field.from_bigint(&fermat_quotient(p, &BigInt::from(2))?);
    let mut res = CheckResult::new(CheckName::NumericSums, p);
    let mut plain = BigRational::zero();
    let mut weighted = BigRational::zero();
    let mut two_n = BigInt::one();
    for (n, bn) in b.iter().enumerate().skip(1) {
        two_n *= 2;
        let d = bn / rat(n as i64);
        weighted += BigRational::from_integer(two_n.clone()) * &d;
        plain += d;
    }
    res.observe("sum_divided_bernoulli", plain.to_string());
    let lhs = reduce_mod_p(&plain, field)?;
    if !res.expect_eq(lhs, w, |l, r| Witness::new(l, r).what("sum B_n/n = w_p")) {
        return Ok(res);
    }
    let lhs = reduce_mod_p(&weighted, field)?;
    let rhs = -q2 + w - field.one();
    res.expect_eq(lhs, rhs, |l, r| {
        Witness::new(l, r).what("sum 2^n B_n/n = -q_p(2)+w_p-1")
    });
    Ok(res)
}

fn require_p_above_3(name: &str, p: u64) -> Result<()> {
    if p <= 3 {
        return Err(Error::Range {
            value: p as i64,
            reason: format!("{name} needs p > 3"),
        });
    }
    Ok(())
}

/// sum_{m=0}^{floor((p-5)/6)} B_{p-6m-3}/(2m+1) = 1/4 - (3/4)(p/3) mod p.
///
/// Also checked: the value is 1 for p = 2 mod 3 and -1/2 for p = 1 mod 3,
/// and the sum equals -1/2 of the alternating combination of gamma over the
/// sixth roots of unity, evaluated in F_p or F_{p^2}.
pub fn verify_corollary_sixth(p: u64) -> Result<CheckResult> {
    require_p_above_3("sixth-root corollary", p)?;
    let g = build_gamma_polys(p)?;
    let f = g.field;
    let mut res = CheckResult::new(CheckName::CorollarySixth, p);
    let mut sum = BigRational::zero();
    for m in 0..=(p - 5) / 6 {
        let idx = p - 6 * m - 3;
        sum += bernoulli_exact(idx as usize) / rat(2 * m as i64 + 1);
    }
    let lhs = reduce_mod_p(&sum, f)?;
    res.observe("lhs", lhs.value());
    let legendre3: i64 = if p % 3 == 1 { 1 } else { -1 };
    let quarter = f.elem(4).inverse()?;
    let rhs = quarter - f.elem(3) * quarter * f.elem(legendre3);
    if !res.expect_eq(lhs, rhs, |l, r| Witness::new(l, r).what("1/4 - (3/4)(p/3)")) {
        return Ok(res);
    }
    let restated = if p % 3 == 2 { f.one() } else { -f.elem(2).inverse()? };
    if !res.expect_eq(lhs, restated, |l, r| {
        Witness::new(l, r).what("1 if p=2 mod 3, -1/2 if p=1 mod 3")
    }) {
        return Ok(res);
    }
    // z = -omega; omega = -z, omega^{-1} = z - 1, -omega^{-1} = 1 - z
    let (ext, _, z) = roots(f)?;
    let one = ext.one();
    let gm = |x: Fp2Elem| g.gamma.eval(x);
    let combo = gm(one)? - gm(z)? + gm(z - one)? - gm(-one)? + gm(-z)? - gm(one - z)?;
    expect_ext(
        &mut res,
        combo,
        ext.embed(-f.elem(2) * lhs),
        "alternating gamma sum over sixth roots = -2 lhs",
    );
    Ok(res)
}

/// -sum_{n odd, 3<=n<=p-2} (B_{p-n}/n) (-1)^{(n^2-1)/8} 2^{(n+1)/2}
///   = q_p(2) + 2 w_p + 3(1 - (-1)^{(p-1)/2})/2 mod p,
/// cross-checked against gamma(1-i) + gamma(1+i) + ((1-i)^{p-1} + (1+i)^{p-1})/2.
pub fn verify_corollary_eighth(p: u64) -> Result<CheckResult> {
    require_p_above_3("eighth-root corollary", p)?;
    let g = build_gamma_polys(p)?;
    let f = g.field;
    let mut res = CheckResult::new(CheckName::CorollaryEighth, p);
    let mut lhs = f.zero();
    for n in (3..=p - 2).step_by(2) {
        let bn = reduce_mod_p(&(bernoulli_exact((p - n) as usize) / rat(n as i64)), f)?;
        let sign = if ((n * n - 1) / 8) % 2 == 0 { f.one() } else { -f.one() };
        lhs -= bn * sign * f.elem(2).pow(n.div_ceil(2));
    }
    res.observe("lhs", lhs.value());
    let q2 = f.from_bigint(&fermat_quotient(p, &BigInt::from(2))?);
    let tail = if p % 4 == 1 { f.zero() } else { f.elem(3) };
    let rhs = q2 + f.elem(2) * g.wilson + tail;
    if !res.expect_eq(lhs, rhs, |l, r| Witness::new(l, r).what("corollary")) {
        return Ok(res);
    }
    let (ext, i, _) = roots(f)?;
    let one = ext.one();
    let half = f.elem(2).inverse()?;
    let via_gamma = g.gamma.eval(one - i)?
        + g.gamma.eval(one + i)?
        + ((one - i).pow(p - 1) + (one + i).pow(p - 1)).scale(half);
    expect_ext(&mut res, via_gamma, ext.embed(lhs), "gamma at 1 -+ i");
    Ok(res)
}

/// For seeded random g in 1 + X F_p[[X]] (order 2p): L_0(g) = X^{p-1} - 1
/// mod X^p when g'(0) != 0, and L_0(g) = -1 mod X^{2p-2} when g'(0) = 0.
/// Both L_0(g) and (g-1)^{p-1} - 1 are computed and must agree.
pub fn verify_lemma_pound0(p: u64, trials: usize, seed: u64) -> Result<CheckResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let field = PrimeField::new(p)?;
    let pu = p as usize;
    let order = 2 * pu;
    let mut res = CheckResult::new(CheckName::LemmaPound0, p)
        .param("trials", trials)
        .param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(32));
    let l0 = finite_polylog(field, 0);
    for t in 0..trials {
        let flat = t % 2 == 1;
        let mut c: Vec<FpElem> = (0..order).map(|_| field.from_residue(rng.gen_range(0..p))).collect();
        c[0] = field.one();
        c[1] = if flat {
            field.zero()
        } else {
            field.from_residue(rng.gen_range(1..p))
        };
        let g = FpPoly::from_coeffs(field, c);
        let composed = poly_compose_trunc(&l0, &g, order)?;
        let via_power = g
            .sub(&FpPoly::one(field))?
            .pow_trunc(p - 1, order)
            .sub(&FpPoly::one(field))?;
        if let Some(d) = composed.first_difference_below(&via_power, order) {
            res.fail(
                Witness::new(composed.coeff(d), via_power.coeff(d))
                    .at("trial", t as i64)
                    .at("degree", d as i64)
                    .what("L_0(g) vs (g-1)^{p-1} - 1"),
            );
            break;
        }
        let (expected, modulus) = if flat {
            (FpPoly::constant(-field.one()), 2 * pu - 2)
        } else {
            (poly(field, &[-1]).add(&FpPoly::monomial(field.one(), pu - 1))?, pu)
        };
        if let Some(d) = composed.first_difference_below(&expected, modulus) {
            res.fail(
                Witness::new(composed.coeff(d), expected.coeff(d))
                    .at("trial", t as i64)
                    .at("degree", d as i64)
                    .what(if flat { "g'(0) = 0 case" } else { "g'(0) != 0 case" }),
            );
            break;
        }
    }
    Ok(res)
}
