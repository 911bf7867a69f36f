//! Polynomials in `t` and the rational functions used as morphism coefficients.

use std::fmt;
use std::iter::Peekable;
use std::str::Chars;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact_linalg::{Field, FieldElement};

/// A polynomial in `t`, coefficients stored from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::monomial(c, 0)
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    /// `c·t^e`.
    pub fn monomial(c: FieldElement, e: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); e];
        coeffs.push(c);
        Poly::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Largest `a` with `t^a` dividing `self` (`None` for zero).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs(self.field, (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::from_coeffs(self.field, coeffs)
    }

    /// Division by `t^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.valuation().is_none_or(|v| v >= k));
        Poly::from_coeffs(self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Drops the terms of degree `< k` and divides by `t^k`.
    fn shift_down_lossy(&self, k: usize) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Keeps the terms of degree `< m`.
    pub fn truncate(&self, m: usize) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().take(m).cloned().collect())
    }

    pub fn div_rem(&self, rhs: &Poly) -> (Poly, Poly) {
        let lead_inv = rhs.leading().expect("division by zero polynomial").inv().unwrap();
        let d = rhs.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * b);
            }
            quot[i] = c;
        }
        rem.truncate(d);
        (Poly::from_coeffs(self.field, quot), Poly::from_coeffs(self.field, rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, if the two are coprime.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        // extended Euclid tracking the coefficient of self
        let (mut r0, mut r1) = (m.clone(), self.div_rem(m).1);
        let (mut s0, mut s1) = (Poly::zero(self.field), Poly::one(self.field));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = r0.leading().unwrap().inv().unwrap();
        Some(s0.scale(&inv).div_rem(m).1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        match (e, mag.as_str()) {
            (0, m) => write!(f, "{m}")?,
            (1, "1") => write!(f, "t")?,
            (1, m) => write!(f, "{m}*t")?,
            (e, "1") => write!(f, "t^{e}")?,
            (e, m) => write!(f, "{m}*t^{e}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

/// A rational function `num / den` in lowest terms with monic denominator.
///
/// Every nonzero denominator factors as `t^a · u` with `u(0) ≠ 0`, so every
/// value has a Laurent expansion at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalScalar {
    num: Poly,
    den: Poly,
}

impl RationalScalar {
    pub fn new(num: Poly, den: Poly) -> RationalScalar {
        assert!(!den.is_zero(), "zero denominator");
        let field = num.field();
        if num.is_zero() {
            return RationalScalar::zero(field);
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().inv().unwrap();
        RationalScalar {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero(field: Field) -> RationalScalar {
        RationalScalar {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: Field) -> RationalScalar {
        RationalScalar::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> RationalScalar {
        let field = c.field();
        RationalScalar {
            num: Poly::constant(c),
            den: Poly::one(field),
        }
    }

    pub fn from_i64(field: Field, c: i64) -> RationalScalar {
        RationalScalar::constant(field.from_i64(c))
    }

    /// `c·t^e` for any integer `e`.
    pub fn monomial(c: FieldElement, e: i64) -> RationalScalar {
        let field = c.field();
        if c.is_zero() {
            return RationalScalar::zero(field);
        }
        if e >= 0 {
            RationalScalar {
                num: Poly::monomial(c, e as usize),
                den: Poly::one(field),
            }
        } else {
            RationalScalar {
                num: Poly::constant(c),
                den: Poly::monomial(field.one(), (-e) as usize),
            }
        }
    }

    /// `t^e`.
    pub fn t_pow(field: Field, e: i64) -> RationalScalar {
        RationalScalar::monomial(field.one(), e)
    }

    pub fn from_poly(p: Poly) -> RationalScalar {
        let field = p.field();
        RationalScalar::new(p, Poly::one(field))
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num.degree() == Some(0) && self.num.coeff(0).is_one()
    }

    pub fn add(&self, rhs: &RationalScalar) -> RationalScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalScalar::new(self.num.add(&rhs.num), self.den.clone());
        }
        RationalScalar::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn neg(&self) -> RationalScalar {
        RationalScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &RationalScalar) -> RationalScalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RationalScalar) -> RationalScalar {
        if self.is_zero() || rhs.is_zero() {
            return RationalScalar::zero(self.field());
        }
        if let Some((c, e)) = rhs.as_monomial() {
            return self.times_monomial(&c, e);
        }
        if let Some((c, e)) = self.as_monomial() {
            return rhs.times_monomial(&c, e);
        }
        RationalScalar::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    /// `c·t^e·self` without a gcd: only powers of `t` can cancel.
    fn times_monomial(&self, c: &FieldElement, e: i64) -> RationalScalar {
        let num = self.num.scale(c);
        if e >= 0 {
            let s = (e as usize).min(self.den.valuation().unwrap_or(0));
            RationalScalar {
                num: num.shift_up(e as usize - s),
                den: self.den.shift_down(s),
            }
        } else {
            let s = ((-e) as usize).min(num.valuation().unwrap_or(0));
            RationalScalar {
                num: num.shift_down(s),
                den: self.den.shift_up((-e) as usize - s),
            }
        }
    }

    pub fn scale(&self, c: &FieldElement) -> RationalScalar {
        RationalScalar::new(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Option<RationalScalar> {
        (!self.is_zero()).then(|| RationalScalar::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RationalScalar) -> Option<RationalScalar> {
        rhs.inv().map(|i| self.mul(&i))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Denominator is a power of `t`.
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
    }

    /// No pole at `t = 0`.
    pub fn is_regular_at_zero(&self) -> bool {
        !self.den.coeff(0).is_zero()
    }

    /// Order of vanishing at `t = 0` (negative for a pole); `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let v = self.num.valuation()? as i64;
        Some(v - self.den.valuation().unwrap() as i64)
    }

    /// `Some((c, e))` when the value is exactly `c·t^e`.
    pub fn as_monomial(&self) -> Option<(FieldElement, i64)> {
        if !self.is_laurent_polynomial() {
            return None;
        }
        let nz: Vec<_> = self
            .num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if nz.len() != 1 {
            return None;
        }
        let e = nz[0].0 as i64 - self.den.valuation().unwrap() as i64;
        Some((nz[0].1.clone(), e))
    }

    /// Laurent coefficients at `t = 0` for exponents `lo..=hi`.
    pub fn expand(&self, lo: i64, hi: i64) -> Vec<FieldElement> {
        let field = self.field();
        if hi < lo {
            return Vec::new();
        }
        if self.is_zero() {
            return vec![field.zero(); (hi - lo + 1) as usize];
        }
        let a = self.den.valuation().unwrap();
        let u = self.den.shift_down(a);
        // num / u as a power series, up to exponent hi + a
        let top = hi + a as i64;
        let series = if top < 0 {
            Vec::new()
        } else {
            power_series_quotient(&self.num, &u, top as usize + 1)
        };
        (lo..=hi)
            .map(|e| {
                let i = e + a as i64;
                if i < 0 {
                    field.zero()
                } else {
                    series.get(i as usize).cloned().unwrap_or_else(|| field.zero())
                }
            })
            .collect()
    }

    /// Coefficient of `t^e` in the Laurent expansion.
    pub fn coeff(&self, e: i64) -> FieldElement {
        self.expand(e, e).pop().unwrap()
    }

    /// Reduction modulo `t^m` of a value regular at zero, as a polynomial.
    pub fn reduce_mod_t_power(&self, m: usize) -> Option<RationalScalar> {
        if !self.is_regular_at_zero() {
            return None;
        }
        if m == 0 {
            return Some(RationalScalar::zero(self.field()));
        }
        let coeffs = self.expand(0, m as i64 - 1);
        Some(RationalScalar::from_poly(Poly::from_coeffs(self.field(), coeffs)))
    }

    /// The class modulo Laurent polynomials: the unique `p / u` with
    /// `deg p < deg u` and `u(0) ≠ 0` congruent to `self`.
    pub fn modulo_laurent_polynomials(&self) -> RationalScalar {
        let field = self.field();
        let a = self.den.valuation().unwrap_or(0);
        let u = self.den.shift_down(a);
        if u.degree() == Some(0) {
            return RationalScalar::zero(field);
        }
        // t·v ≡ -u(0) mod u, so division by t is p ↦ p' - p(0)·v/u(0)
        let v = u.shift_down_lossy(1).scale(&u.coeff(0).inv().expect("u(0) is a unit"));
        let mut p = self.num.div_rem(&u).1;
        for _ in 0..a {
            let p0 = p.coeff(0);
            p = p.shift_down_lossy(1).sub(&v.scale(&p0));
        }
        if p.is_zero() {
            return RationalScalar::zero(field);
        }
        // t is a unit mod u, so p stays coprime to the monic u
        RationalScalar { num: p, den: u }
    }
}

/// First `n` coefficients of `num / u` with `u(0) ≠ 0`.
fn power_series_quotient(num: &Poly, u: &Poly, n: usize) -> Vec<FieldElement> {
    let field = num.field();
    let u0_inv = u.coeff(0).inv().expect("unit constant term");
    let mut out: Vec<FieldElement> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = num.coeff(i);
        for j in 1..=i.min(u.degree().unwrap_or(0)) {
            acc = &acc - &(&u.coeff(j) * &out[i - j]);
        }
        out.push(&acc * &u0_inv);
    }
    let _ = field;
    out
}

impl fmt::Display for RationalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            return fmt_poly(&self.num, f);
        }
        let wrap = |p: &Poly| {
            let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
            if nonzero > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Parses expressions such as `t^2`, `1/(1-t)`, `-3/2*t^-1 + 4`.
pub fn parse_rational(field: Field, s: &str) -> Result<RationalScalar> {
    let cleaned: String = s.replace('−', "-");
    let mut p = Parser {
        field,
        chars: cleaned.chars().peekable(),
    };
    let v = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.chars.peek() {
        return Err(Error::Parse(format!("unexpected `{c}` in `{s}`")));
    }
    Ok(v)
}

struct Parser<'a> {
    field: Field,
    chars: Peekable<Chars<'a>>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn expr(&mut self) -> Result<RationalScalar> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.chars.next();
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalScalar> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    self.chars.next();
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .ok_or_else(|| Error::Parse("division by zero".into()))?;
                }
                Some(c) if c == 't' || c == '(' => acc = acc.mul(&self.unary()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalScalar> {
        if self.peek() == Some('-') {
            self.chars.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalScalar> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.chars.next();
        let neg = if self.peek() == Some('-') {
            self.chars.next();
            true
        } else {
            false
        };
        let e = self.integer()?;
        let e: u32 = e
            .try_into()
            .map_err(|_| Error::Parse("exponent too large".into()))?;
        let mut out = RationalScalar::one(self.field);
        for _ in 0..e {
            out = out.mul(&base);
        }
        if neg {
            out = out
                .inv()
                .ok_or_else(|| Error::Parse("negative power of zero".into()))?;
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(c) = self.chars.peek().copied().filter(char::is_ascii_digit) {
            digits.push(c);
            self.chars.next();
        }
        digits
            .parse()
            .map_err(|_| Error::Parse("expected an integer".into()))
    }

    fn atom(&mut self) -> Result<RationalScalar> {
        match self.peek() {
            Some('t') => {
                self.chars.next();
                Ok(RationalScalar::t_pow(self.field, 1))
            }
            Some('(') => {
                self.chars.next();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.chars.next();
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalScalar::constant(self.field.from_bigint(&n)))
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn r(s: &str) -> RationalScalar {
        parse_rational(Q, s).unwrap()
    }

    #[test]
    fn geometric_series_expansion() {
        // 1/(1-t) = sum of t^i
        let g = r("1/(1-t)");
        let coeffs: Vec<String> = g.expand(-1, 3).iter().map(ToString::to_string).collect();
        assert_eq!(coeffs, ["0", "1", "1", "1", "1"]);
    }

    #[test]
    fn laurent_expansion_with_pole() {
        // t^-2/(1-t) = t^-2 + t^-1 + 1 + ...
        let g = r("t^-2/(1-t)");
        assert_eq!(g.valuation(), Some(-2));
        let coeffs: Vec<String> = g.expand(-3, 0).iter().map(ToString::to_string).collect();
        assert_eq!(coeffs, ["0", "1", "1", "1"]);
        assert!(!g.is_regular_at_zero());
    }

    #[test]
    fn canonical_form_and_rendering() {
        let a = r("(t^2 - 1)/(2*t - 2)");
        assert_eq!(a, r("1/2*t + 1/2"));
        assert_eq!(a.to_string(), "1/2*t + 1/2");
        assert_eq!(r("1/(1-t)").to_string(), "-1/(t - 1)");
        assert_eq!(r("t^-3").to_string(), "1/t^3");
        assert_eq!(r("−t").to_string(), "-t");
        assert_eq!(r("3t^2").as_monomial().unwrap().1, 2);
        assert!(parse_rational(Q, "1/0").is_err());
        assert!(parse_rational(Q, "t +").is_err());
    }

    #[test]
    fn classes_modulo_laurent_polynomials() {
        // t^-1/(1-t) = t^-1 + 1/(1-t)
        assert_eq!(r("t^-1/(1-t)").modulo_laurent_polynomials(), r("1/(1-t)"));
        assert_eq!(r("t/(1-t)").modulo_laurent_polynomials(), r("1/(1-t)"));
        assert!(r("t^3 + t^-2").modulo_laurent_polynomials().is_zero());
    }

    #[test]
    fn prime_field_parsing() {
        let f = Field::Prime(7);
        let x = parse_rational(f, "1/2").unwrap();
        assert_eq!(x.to_string(), "4");
    }

    fn small() -> impl Strategy<Value = RationalScalar> {
        (prop::collection::vec(-3i64..4, 1..4), prop::collection::vec(-3i64..4, 1..3), 0usize..3)
            .prop_filter_map("nonzero denominator", |(n, mut d, a)| {
                d.push(1);
                let den = Poly::from_i64(Q, &d).shift_up(a);
                (!den.is_zero()).then(|| RationalScalar::new(Poly::from_i64(Q, &n), den))
            })
    }

    proptest! {
        #[test]
        fn field_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            if let Some(i) = a.inv() { prop_assert!(a.mul(&i).is_one()); }
        }

        #[test]
        fn expansion_is_multiplicative(a in small(), b in small()) {
            // Cauchy product of truncated expansions matches the product's expansion
            let lo = -6;
            let hi = 4;
            let (ea, eb) = (a.expand(lo, hi), b.expand(lo, hi));
            let prod = a.mul(&b).expand(2 * lo, hi);
            for (k, e) in (2 * lo..=hi).enumerate() {
                let mut acc = Q.zero();
                for i in lo..=hi {
                    let j = e - i;
                    if j < lo || j > hi { continue; }
                    acc = acc + &ea[(i - lo) as usize] * &eb[(j - lo) as usize];
                }
                // exact for exponents where no truncated term could contribute
                if e <= hi + lo + 4 && a.valuation().is_none_or(|v| v >= lo + 4) && b.valuation().is_none_or(|v| v >= lo + 4) {
                    prop_assert_eq!(&acc, &prod[k]);
                }
            }
        }

        #[test]
        fn display_round_trips(a in small()) {
            prop_assert_eq!(parse_rational(Q, &a.to_string()).unwrap(), a);
        }
    }
}
