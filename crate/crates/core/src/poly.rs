//! Dense univariate polynomials over the scalar tower, and factorisation
//! into linear and irreducible quadratic pieces.
//!
//! Characteristic polynomials in this crate have degree at most six (four
//! for operators on the tangent space, six for the induced operators on
//! bivectors).  [`factor_over_field`] factors such polynomials completely
//! whenever every real root lies in `Q` or in a single quadratic extension
//! `Q(sqrt d)`; otherwise it reports the degree of the piece it cannot
//! break, and the caller falls back to refinement techniques that do not
//! need eigenvalues.

use crate::scalar::{rat_sqrt, Rat, Scalar};
use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    /// Factorisation ran into an irreducible piece of the given degree whose
    /// real roots do not lie in the supported field tower.
    #[error("irreducible piece of degree {0} has roots outside the field tower")]
    UnsupportedAlgebraicDegree(usize),
}

/// Polynomial with exact coefficients, `coeffs[i]` multiplying `x^i`.
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// The monic linear polynomial `x - r`.
    pub fn linear_root(r: &Scalar) -> Self {
        Poly::from_coeffs(vec![-r, Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Any radicand appearing among the coefficients.
    pub fn radicand(&self) -> Option<u64> {
        self.coeffs.iter().find_map(Scalar::radicand)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dlead = divisor.leading().unwrap().clone();
        let dd = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut q = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let t = rem.leading().unwrap() / &dlead;
            let shift = rd - dd;
            q[shift] = t.clone();
            let mut sub = vec![Scalar::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c * &t));
            rem = rem.sub(&Poly::from_coeffs(sub));
        }
        (Poly::from_coeffs(q), rem)
    }

    /// Splits off the leading coefficient, returning `(lc, self/lc)`.
    pub fn monic(&self) -> (Scalar, Poly) {
        let lc = self.leading().expect("monic of zero polynomial").clone();
        (lc.clone(), self.scale(&lc.try_inv().unwrap()))
    }

    /// The composition `p(x + t)`.
    pub fn shift(&self, t: &Scalar) -> Poly {
        let base = Poly::from_coeffs(vec![t.clone(), Scalar::one()]);
        let mut acc = Poly::zero();
        let mut power = Poly::constant(Scalar::one());
        for c in &self.coeffs {
            acc = acc.add(&power.scale(c));
            power = power.mul(&base);
        }
        acc
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !rest.contains('+') && !rest.contains('-') => {
                    (true, rest.to_string())
                }
                _ => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let needs_parens = mag.contains('+') || mag.contains('-');
            let coeff_part = if i > 0 && mag == "1" {
                String::new()
            } else if needs_parens {
                format!("({mag})")
            } else {
                mag
            };
            match (i, coeff_part.is_empty()) {
                (0, _) => write!(f, "{coeff_part}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coeff_part}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coeff_part}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// A complete factorisation over the tower: `constant * prod factors^mult`,
/// where every factor is monic and either linear or a quadratic with
/// negative discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub constant: Scalar,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Real roots with algebraic multiplicities, taken from the linear
    /// factors, in increasing order.
    pub fn roots(&self) -> Vec<(Scalar, usize)> {
        let mut out: Vec<(Scalar, usize)> = self
            .factors
            .iter()
            .filter(|(f, _)| f.degree() == Some(1))
            .map(|(f, m)| (-f.coeff(0), *m))
            .collect();
        out.sort_by(|a, b| a.0.cmp_real(&b.0).expect("roots share one field"));
        out
    }

    /// The irreducible quadratic factors as `(x^2 + s x + t, mult)` pairs.
    pub fn quadratics(&self) -> Vec<(Scalar, Scalar, usize)> {
        self.factors
            .iter()
            .filter(|(f, _)| f.degree() == Some(2))
            .map(|(f, m)| (f.coeff(1), f.coeff(0), *m))
            .collect()
    }

    /// Multiplies the factorisation back out.
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.constant.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Factors a nonzero polynomial of degree at most six over `Q` extended by
/// at most one square root.  The starting field is determined by the
/// radicand already present in the coefficients, if any.
pub fn factor_over_field(p: &Poly) -> Result<Factorization, PolyError> {
    factor_over_field_in(p, p.radicand()).map(|(f, _)| f)
}

/// Like [`factor_over_field`], but continues working inside an already
/// chosen extension: `ctx` is the active radicand (`None` while the
/// computation is still purely rational), and the returned context reflects
/// any radicand the factorisation had to open.
pub fn factor_over_field_in(
    p: &Poly,
    ctx: Option<u64>,
) -> Result<(Factorization, Option<u64>), PolyError> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let ctx = match (ctx, p.radicand()) {
        (Some(a), Some(b)) if a != b => {
            return Err(PolyError::UnsupportedAlgebraicDegree(
                p.degree().unwrap_or(0),
            ))
        }
        (Some(a), _) => Some(a),
        (None, b) => b,
    };
    let (constant, pm) = p.monic();
    let (mut factors, ctx) = factor_core(&pm, ctx)?;
    factors = merge(factors);
    factors.sort_by_key(|(f, _)| (f.degree(), f.to_string()));
    Ok((Factorization { constant, factors }, ctx))
}

fn merge(factors: Vec<(Poly, usize)>) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (f, m) in factors {
        if let Some(slot) = out.iter_mut().find(|(g, _)| *g == f) {
            slot.1 += m;
        } else {
            out.push((f, m));
        }
    }
    out
}

/// Square root usable inside the active extension.  Returns the root and the
/// possibly newly opened context, or `None` when the root falls outside.
fn sqrt_in_ctx(x: &Scalar, ctx: Option<u64>) -> Option<(Scalar, Option<u64>)> {
    match x.sqrt() {
        Ok(r) => match (r.radicand(), ctx) {
            (None, _) => Some((r, ctx)),
            (Some(d), None) => Some((r, Some(d))),
            (Some(d), Some(c)) if d == c => Some((r, ctx)),
            _ => None,
        },
        Err(_) => None,
    }
}

fn factor_core(
    p: &Poly,
    mut ctx: Option<u64>,
) -> Result<(Vec<(Poly, usize)>, Option<u64>), PolyError> {
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    let mut rem = p.clone();

    // Powers of x.
    let v = rem.coeffs.iter().take_while(|c| c.is_zero()).count();
    if v > 0 {
        factors.push((Poly::x(), v));
        rem = Poly::from_coeffs(rem.coeffs[v..].to_vec());
    }

    // Rational roots.
    if rem.degree().is_some_and(|d| d >= 1) {
        for r in rational_roots(&rem) {
            let lin = Poly::linear_root(&Scalar::Rational(r.clone()));
            let mut mult = 0;
            loop {
                let (q, rr) = rem.divmod(&lin);
                if rr.is_zero() {
                    rem = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                factors.push((lin, mult));
            }
        }
    }

    match rem.degree().unwrap_or(0) {
        0 => {}
        1 => {
            factors.push((Poly::linear_root(&(-rem.coeff(0))), 1));
        }
        2 => {
            let (fs, c) = split_quadratic(&rem, ctx)?;
            factors.extend(fs);
            ctx = c;
        }
        4 => {
            let (fs, c) = split_quartic(&rem, ctx)?;
            factors.extend(fs);
            ctx = c;
        }
        6 => {
            let (fs, c) = split_even_sextic(&rem, ctx)?;
            factors.extend(fs);
            ctx = c;
        }
        d => return Err(PolyError::UnsupportedAlgebraicDegree(d)),
    }
    Ok((factors, ctx))
}

/// Factors a monic quadratic `x^2 + s x + t` over the active extension.
fn split_quadratic(
    p: &Poly,
    ctx: Option<u64>,
) -> Result<(Vec<(Poly, usize)>, Option<u64>), PolyError> {
    let s = p.coeff(1);
    let t = p.coeff(0);
    let disc = &s * &s - Scalar::int(4) * &t;
    match disc.sign() {
        0 => {
            let r = -&s / Scalar::int(2);
            Ok((vec![(Poly::linear_root(&r), 2)], ctx))
        }
        x if x < 0 => Ok((vec![(p.clone(), 1)], ctx)),
        _ => {
            let (sq, ctx) =
                sqrt_in_ctx(&disc, ctx).ok_or(PolyError::UnsupportedAlgebraicDegree(2))?;
            let half = Scalar::rat(1, 2);
            let r1 = (-&s - &sq) * &half;
            let r2 = (-&s + &sq) * &half;
            Ok((
                vec![(Poly::linear_root(&r1), 1), (Poly::linear_root(&r2), 1)],
                ctx,
            ))
        }
    }
}

/// Factors a monic quartic with no rational roots.  Only rational
/// coefficient vectors are attempted; a quartic that already carries a
/// radicand is left unbroken.
fn split_quartic(
    p: &Poly,
    ctx: Option<u64>,
) -> Result<(Vec<(Poly, usize)>, Option<u64>), PolyError> {
    if !p.is_rational() {
        return Err(PolyError::UnsupportedAlgebraicDegree(4));
    }
    // Depress: substitute x = y + shift with shift = -c3/4.
    let shift = -(p.coeff(3)) / Scalar::int(4);
    let dep = p.shift(&shift);
    debug_assert!(dep.coeff(3).is_zero());
    let a = dep.coeff(2);
    let b = dep.coeff(1);
    let c = dep.coeff(0);

    let (fs, ctx) = if b.is_zero() {
        split_biquadratic(&a, &c, ctx)?
    } else {
        split_depressed_quartic(&a, &b, &c, ctx)?
    };
    // Undo the substitution on every factor.
    let back = -&shift;
    Ok((
        fs.into_iter().map(|(f, m)| (f.shift(&back), m)).collect(),
        ctx,
    ))
}

/// Factors `y^4 + a y^2 + c` via the substitution `z = y^2`.
fn split_biquadratic(
    a: &Scalar,
    c: &Scalar,
    ctx: Option<u64>,
) -> Result<(Vec<(Poly, usize)>, Option<u64>), PolyError> {
    let zpoly = Poly::from_coeffs(vec![c.clone(), a.clone(), Scalar::one()]);
    let (zfactors, mut ctx) = factor_core(&zpoly, ctx)?;
    let mut out = Vec::new();
    for (zf, mult) in zfactors {
        match zf.degree() {
            Some(1) => {
                // z - mu  ->  y^2 - mu
                let mu = -zf.coeff(0);
                let quad = Poly::from_coeffs(vec![-&mu, Scalar::zero(), Scalar::one()]);
                let (fs, c2) = split_quadratic(&quad, ctx)?;
                ctx = c2;
                out.extend(fs.into_iter().map(|(f, m)| (f, m * mult)));
            }
            Some(2) => {
                // Irreducible z-quadratic z^2 + s z + t with negative
                // discriminant: the quartic splits over R as
                // (y^2 + e y + f)(y^2 - e y + f) with f = sqrt(t) and
                // e^2 = 2 f - s, both strictly positive here.
                let s = zf.coeff(1);
                let t = zf.coeff(0);
                let (f, c2) = sqrt_in_ctx(&t, ctx)
                    .ok_or(PolyError::UnsupportedAlgebraicDegree(4))?;
                let e2 = Scalar::int(2) * &f - &s;
                let (e, c3) = sqrt_in_ctx(&e2, c2)
                    .ok_or(PolyError::UnsupportedAlgebraicDegree(4))?;
                ctx = c3;
                let q1 = Poly::from_coeffs(vec![f.clone(), e.clone(), Scalar::one()]);
                let q2 = Poly::from_coeffs(vec![f.clone(), -&e, Scalar::one()]);
                for q in [q1, q2] {
                    let (fs, c4) = split_quadratic(&q, ctx)?;
                    ctx = c4;
                    out.extend(fs.into_iter().map(|(ff, m)| (ff, m * mult)));
                }
            }
            _ => unreachable!("z-polynomial has degree 2"),
        }
    }
    Ok((out, ctx))
}

/// Factors a depressed quartic `y^4 + a y^2 + b y + c` with `b != 0` through
/// the resolvent cubic `T^3 + 2a T^2 + (a^2 - 4c) T - b^2`.
fn split_depressed_quartic(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    ctx: Option<u64>,
) -> Result<(Vec<(Poly, usize)>, Option<u64>), PolyError> {
    let resolvent = Poly::from_coeffs(vec![
        -(b * b),
        a * a - Scalar::int(4) * c,
        Scalar::int(2) * a,
        Scalar::one(),
    ]);
    let mut roots: Vec<Rat> = rational_roots(&resolvent)
        .into_iter()
        .filter(|t| t.is_positive() && resolvent.eval(&Scalar::Rational(t.clone())).is_zero())
        .collect();
    // A resolvent root that is itself a perfect square keeps the split
    // rational; try those first, then the rest in increasing order.
    roots.sort_by(|x, y| {
        let kx = rat_sqrt(x).is_none();
        let ky = rat_sqrt(y).is_none();
        kx.cmp(&ky).then(x.cmp(y))
    });
    for bigt in roots {
        let tt = Scalar::Rational(bigt);
        let Some((t, ctx2)) = sqrt_in_ctx(&tt, ctx) else {
            continue;
        };
        let half = Scalar::rat(1, 2);
        let u = (a + &tt - b / &t) * &half;
        let v = (a + &tt + b / &t) * &half;
        let q1 = Poly::from_coeffs(vec![u, t.clone(), Scalar::one()]);
        let q2 = Poly::from_coeffs(vec![v, -&t, Scalar::one()]);
        let attempt = (|| {
            let mut ctx3 = ctx2;
            let mut out = Vec::new();
            for q in [&q1, &q2] {
                let (fs, c2) = split_quadratic(q, ctx3)?;
                ctx3 = c2;
                out.extend(fs);
            }
            Ok::<_, PolyError>((out, ctx3))
        })();
        if let Ok(done) = attempt {
            return Ok(done);
        }
    }
    Err(PolyError::UnsupportedAlgebraicDegree(4))
}

/// Factors a monic sextic with no rational roots, provided it is even; the
/// substitution `z = y^2` reduces it to a cubic in `z`.
fn split_even_sextic(
    p: &Poly,
    ctx: Option<u64>,
) -> Result<(Vec<(Poly, usize)>, Option<u64>), PolyError> {
    if !p.is_rational() {
        return Err(PolyError::UnsupportedAlgebraicDegree(6));
    }
    if !(p.coeff(1).is_zero() && p.coeff(3).is_zero() && p.coeff(5).is_zero()) {
        return Err(PolyError::UnsupportedAlgebraicDegree(6));
    }
    let half = Poly::from_coeffs(vec![p.coeff(0), p.coeff(2), p.coeff(4), Scalar::one()]);
    let (zfactors, mut ctx) = factor_core(&half, ctx)?;
    let mut out = Vec::new();
    for (zf, mult) in zfactors {
        match zf.degree() {
            Some(1) => {
                let mu = -zf.coeff(0);
                let quad = Poly::from_coeffs(vec![-&mu, Scalar::zero(), Scalar::one()]);
                let (fs, c2) = split_quadratic(&quad, ctx)?;
                ctx = c2;
                out.extend(fs.into_iter().map(|(f, m)| (f, m * mult)));
            }
            Some(2) => {
                let (fs, c2) = split_biquadratic(&zf.coeff(1), &zf.coeff(0), ctx)?;
                ctx = c2;
                out.extend(fs.into_iter().map(|(f, m)| (f, m * mult)));
            }
            _ => unreachable!("z-polynomial factors have degree at most 2"),
        }
    }
    Ok((out, ctx))
}

/// Rational roots of a polynomial, found by testing divisor quotients of the
/// primitive integer form.  Coefficients carrying a radicand are reduced to
/// the common rational root condition on both components first.
fn rational_roots(p: &Poly) -> Vec<Rat> {
    if p.is_rational() {
        return rational_roots_rational(p);
    }
    // Split p = p1 + sqrt(d) p2; rational roots are common roots of p1, p2.
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for c in p.coeffs() {
        match c {
            Scalar::Rational(r) => {
                c1.push(Scalar::Rational(r.clone()));
                c2.push(Scalar::zero());
            }
            Scalar::Quadratic { a, b, .. } => {
                c1.push(Scalar::Rational(a.clone()));
                c2.push(Scalar::Rational(b.clone()));
            }
        }
    }
    let p1 = Poly::from_coeffs(c1);
    let p2 = Poly::from_coeffs(c2);
    let g = gcd_monic(&p1, &p2);
    if g.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    rational_roots_rational(&g)
        .into_iter()
        .filter(|r| p.eval(&Scalar::Rational(r.clone())).is_zero())
        .collect()
}

fn rational_roots_rational(p: &Poly) -> Vec<Rat> {
    debug_assert!(p.is_rational() && !p.is_zero());
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    // Clear denominators to a primitive integer coefficient vector.
    let rats: Vec<Rat> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect();
    let mut denom_lcm = BigInt::one();
    for r in &rats {
        denom_lcm = denom_lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * &denom_lcm).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
    // Skip trailing zeros: x | p contributes the root 0 separately.
    let low = ints.iter().take_while(|c| c.is_zero()).count();
    let mut cands: BTreeSet<Rat> = BTreeSet::new();
    if low > 0 {
        cands.insert(Rat::zero());
    }
    let a0 = ints[low].magnitude().clone();
    let an = ints.last().unwrap().magnitude().clone();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            let q = Rat::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
            cands.insert(q.clone());
            cands.insert(-q);
        }
    }
    cands
        .into_iter()
        .filter(|r| p.eval(&Scalar::Rational(r.clone())).is_zero())
        .collect()
}

/// Monic gcd of two rational-coefficient polynomials.
fn gcd_monic(a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = x.divmod(&y);
        x = y;
        y = r;
    }
    if x.is_zero() {
        x
    } else {
        x.monic().1
    }
}

/// All positive divisors of `n >= 1`, by trial division.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    let mut rem = n.clone();
    let mut f = BigUint::from(2u32);
    let two = BigUint::from(2u32);
    while &(&f * &f) <= &rem {
        let mut power = BigUint::one();
        let mut powers = vec![];
        while (&rem % &f).is_zero() {
            rem /= &f;
            power *= &f;
            powers.push(power.clone());
        }
        if !powers.is_empty() {
            let base = out.clone();
            for p in powers {
                out.extend(base.iter().map(|d| d * &p));
            }
        }
        f = if f == two { BigUint::from(3u32) } else { f + &two };
    }
    if !rem.is_one() {
        let base = out.clone();
        out.extend(base.iter().map(|d| d * &rem));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| Scalar::int(c)).collect())
    }

    fn check_product(p: &Poly, f: &Factorization) {
        assert_eq!(f.expand(), *p, "factors must multiply back to the input");
    }

    #[test]
    fn divmod_roundtrip() {
        let a = pl(&[1, 0, -3, 2, 5]);
        let b = pl(&[-2, 1, 1]);
        let (q, r) = a.divmod(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn shift_is_composition() {
        let p = pl(&[1, -2, 0, 1]); // x^3 - 2x + 1
        let t = Scalar::rat(3, 2);
        let shifted = p.shift(&t);
        for x in [-2i64, -1, 0, 1, 2, 5] {
            let xv = Scalar::int(x);
            assert_eq!(shifted.eval(&xv), p.eval(&(&xv + &t)));
        }
    }

    #[test]
    fn factor_simple_rational_quadratic() {
        let p = pl(&[6, -5, 1]); // (x-2)(x-3)
        let f = factor_over_field(&p).unwrap();
        check_product(&p, &f);
        let roots = f.roots();
        assert_eq!(
            roots,
            vec![(Scalar::int(2), 1), (Scalar::int(3), 1)]
        );
    }

    #[test]
    fn factor_quartic_minus_one() {
        let p = pl(&[-1, 0, 0, 0, 1]); // x^4 - 1
        let f = factor_over_field(&p).unwrap();
        check_product(&p, &f);
        assert_eq!(f.roots(), vec![(Scalar::int(-1), 1), (Scalar::int(1), 1)]);
        assert_eq!(f.quadratics().len(), 1);
        let (s, t, m) = f.quadratics()[0].clone();
        assert!(s.is_zero() && t.is_one() && m == 1);
    }

    #[test]
    fn factor_opens_radicand() {
        let p = pl(&[-2, 0, 1]); // x^2 - 2
        let (f, ctx) = factor_over_field_in(&p, None).unwrap();
        check_product(&p, &f);
        assert_eq!(ctx, Some(2));
        let roots = f.roots();
        assert_eq!(roots.len(), 2);
        let s2 = Scalar::int(2).sqrt().unwrap();
        assert_eq!(roots[0].0, -&s2);
        assert_eq!(roots[1].0, s2);
    }

    #[test]
    fn cubic_without_rational_root_is_unsupported() {
        let p = pl(&[-2, 0, 0, 1]); // x^3 - 2
        assert_eq!(
            factor_over_field(&p),
            Err(PolyError::UnsupportedAlgebraicDegree(3))
        );
    }

    #[test]
    fn two_distinct_radicands_are_unsupported() {
        let p = pl(&[6, 0, -5, 0, 1]); // (x^2-2)(x^2-3)
        assert!(matches!(
            factor_over_field(&p),
            Err(PolyError::UnsupportedAlgebraicDegree(_))
        ));
        // But inside a matching context one of them opens fine.
        let q = pl(&[-3, 0, 1]);
        assert!(factor_over_field_in(&q, Some(3)).is_ok());
        assert_eq!(
            factor_over_field_in(&q, Some(2)),
            Err(PolyError::UnsupportedAlgebraicDegree(2))
        );
    }

    #[test]
    fn biquadratic_complex_pair_split() {
        // y^4 + 1/4 = (y^2 - y + 1/2)(y^2 + y + 1/2)
        let p = Poly::from_coeffs(vec![
            Scalar::rat(1, 4),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::one(),
        ]);
        let f = factor_over_field(&p).unwrap();
        check_product(&p, &f);
        assert_eq!(f.roots().len(), 0);
        let quads = f.quadratics();
        assert_eq!(quads.len(), 2);
        for (_, t, m) in quads {
            assert_eq!(t, Scalar::rat(1, 2));
            assert_eq!(m, 1);
        }
    }

    #[test]
    fn resolvent_cubic_path() {
        // x^4 - x^2 - 2x - 1 = (x^2 + x + 1)(x^2 - x - 1)
        let p = pl(&[-1, -2, -1, 0, 1]);
        let (f, ctx) = factor_over_field_in(&p, None).unwrap();
        check_product(&p, &f);
        assert_eq!(ctx, Some(5));
        assert_eq!(f.roots().len(), 2);
        assert_eq!(f.quadratics().len(), 1);
    }

    #[test]
    fn quartic_outside_tower() {
        // 2y^4 - 17y^2 + 1 needs sqrt(281) and then a second radicand.
        let p = pl(&[1, 0, -17, 0, 2]);
        assert!(matches!(
            factor_over_field(&p),
            Err(PolyError::UnsupportedAlgebraicDegree(_))
        ));
    }

    #[test]
    fn even_sextic_split() {
        // (x^2+1)(x^2+2)(x^2-3) = x^6 - 7x^2 - 6
        let p = pl(&[-6, 0, -7, 0, 0, 0, 1]);
        let (f, ctx) = factor_over_field_in(&p, None).unwrap();
        check_product(&p, &f);
        assert_eq!(ctx, Some(3));
        assert_eq!(f.roots().len(), 2);
        assert_eq!(f.quadratics().len(), 2);
    }

    #[test]
    fn multiplicities_are_tracked() {
        // (x-1)^2 (x^2+1)
        let p = pl(&[1, -2, 2, -2, 1]);
        let f = factor_over_field(&p).unwrap();
        check_product(&p, &f);
        assert_eq!(f.roots(), vec![(Scalar::int(1), 2)]);
        assert_eq!(f.quadratics().len(), 1);
        // (x^2-2)^2
        let q = pl(&[4, 0, -4, 0, 1]);
        let (g, ctx) = factor_over_field_in(&q, None).unwrap();
        check_product(&q, &g);
        assert_eq!(ctx, Some(2));
        for (_, m) in g.roots() {
            assert_eq!(m, 2);
        }
    }

    #[test]
    fn nonmonic_constant_is_preserved() {
        let p = pl(&[-2, 0, 2]); // 2(x-1)(x+1)
        let f = factor_over_field(&p).unwrap();
        check_product(&p, &f);
        assert_eq!(f.constant, Scalar::int(2));
        assert_eq!(f.roots().len(), 2);
    }

    #[test]
    fn zero_roots_are_stripped() {
        let p = pl(&[0, 0, -4, 0, 1]); // x^2 (x-2)(x+2)
        let f = factor_over_field(&p).unwrap();
        check_product(&p, &f);
        assert_eq!(
            f.roots(),
            vec![
                (Scalar::int(-2), 1),
                (Scalar::int(0), 2),
                (Scalar::int(2), 1)
            ]
        );
    }

    #[test]
    fn display_reads_naturally() {
        let p = pl(&[6, 0, -5, 0, 1]);
        assert_eq!(p.to_string(), "x^4 - 5*x^2 + 6");
        let q = Poly::from_coeffs(vec![Scalar::rat(-1, 2), Scalar::one()]);
        assert_eq!(q.to_string(), "x - 1/2");
    }
}
