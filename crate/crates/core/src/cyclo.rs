//! Exact arithmetic in cyclotomic fields Q(ζₙ).
//!
//! An element is a polynomial in ζ of degree < φ(n), reduced modulo the n-th
//! cyclotomic polynomial Φₙ. Coefficients are kept as an integer vector over a
//! single positive common denominator, with the content of the numerators
//! coprime to the denominator, so the representation is canonical and
//! equality is structural.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lex::{Cursor, Tok};

/// Precomputed data for Q(ζₙ): Φₙ and the reductions of xʲ modulo Φₙ.
pub struct CycloField {
    n: u32,
    phi: usize,
    poly: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

impl CycloField {
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Coefficients of Φₙ from the constant term upwards.
    pub fn cyclotomic_polynomial(&self) -> &[BigInt] {
        &self.poly
    }

    fn power(&self, j: usize) -> &[BigInt] {
        &self.powers[j]
    }
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φₙ as integer coefficients (constant term first), by exact division of
/// xⁿ − 1 by the product of Φ_d over the proper divisors d of n.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_poly_div(&num, &div);
        }
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Division of integer polynomials by a monic divisor; panics on a remainder.
fn exact_poly_div(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = div.len() - 1;
    debug_assert!(div[dd].is_one());
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in div.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// The shared field data for conductor `n`.
pub fn field(n: u32) -> Arc<CycloField> {
    if let Some(f) = field_cache().lock().unwrap().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_polynomial(n).as_ref().clone();
    let phi = poly.len() - 1;
    let len = (n as usize).max(2 * phi).max(2);
    let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(len);
    for j in 0..len {
        if j < phi {
            let mut v = vec![BigInt::zero(); phi];
            v[j] = BigInt::one();
            powers.push(v);
        } else {
            // x^j = x * x^(j-1), folding the overflow coefficient back with Φₙ
            let prev = &powers[j - 1];
            let top = prev[phi - 1].clone();
            let mut v = vec![BigInt::zero(); phi];
            for i in (1..phi).rev() {
                v[i] = prev[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= &top * &poly[i];
                }
            }
            powers.push(v);
        }
    }
    let f = Arc::new(CycloField {
        n,
        phi,
        poly,
        powers,
    });
    field_cache().lock().unwrap().insert(n, f.clone());
    f
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    let mut m = n;
    let mut r = n as usize;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            r -= r / p as usize;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m as usize;
    }
    r
}

/// Element of Q(ζₙ).
#[derive(Clone)]
pub struct CycElt {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElt {
    fn from_parts(field: Arc<CycloField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = CycElt { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn zero(n: u32) -> Self {
        let f = field(n);
        let phi = f.phi;
        CycElt {
            field: f,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        let mut e = Self::zero(n);
        e.num[0] = BigInt::from(v);
        e
    }

    pub fn from_rational(n: u32, r: &BigRational) -> Self {
        let mut e = Self::zero(n);
        e.num[0] = r.numer().clone();
        e.den = r.denom().clone();
        e.normalize();
        e
    }

    /// ζₙᵏ (k taken modulo n).
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let f = field(n);
        let j = k.rem_euclid(n as i64) as usize;
        let num = f.power(j).to_vec();
        CycElt {
            field: f,
            num,
            den: BigInt::one(),
        }
    }

    /// Builds an element from coefficients of 1, ζ, ζ², … of any length;
    /// exponents are reduced modulo n and then modulo Φₙ.
    pub fn from_power_coeffs(n: u32, coeffs: &[BigRational]) -> Self {
        let f = field(n);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); f.phi];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            let j = k % n as usize;
            for (i, p) in f.power(j).iter().enumerate() {
                if !p.is_zero() {
                    num[i] += &scaled * p;
                }
            }
        }
        Self::from_parts(f, num, den)
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Rational coefficients in the power basis 1, ζ, …, ζ^(φ(n)−1).
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Re-expresses the element in Q(ζₘ); requires n | m.
    pub fn embed(&self, m: u32) -> Result<CycElt> {
        let n = self.field.n;
        if m == n {
            return Ok(self.clone());
        }
        if !m.is_multiple_of(n) {
            if self.is_rational() {
                let mut e = Self::zero(m);
                e.num[0] = self.num[0].clone();
                e.den = self.den.clone();
                return Ok(e);
            }
            return Err(Error::ConductorMismatch(n, m));
        }
        let f = field(m);
        let step = (m / n) as usize;
        let mut num = vec![BigInt::zero(); f.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, p) in f.power(i * step).iter().enumerate() {
                if !p.is_zero() {
                    num[k] += c * p;
                }
            }
        }
        Ok(Self::from_parts(f, num, self.den.clone()))
    }

    fn rational_in(&self, target: &Arc<CycloField>) -> CycElt {
        let mut num = vec![BigInt::zero(); target.phi];
        num[0] = self.num[0].clone();
        CycElt {
            field: target.clone(),
            num,
            den: self.den.clone(),
        }
    }

    /// Brings two operands into one field: equal conductors pass through and
    /// a rational operand is re-embedded; anything else is a mismatch.
    fn coerce<'a>(
        a: &'a CycElt,
        b: &'a CycElt,
    ) -> Result<(std::borrow::Cow<'a, CycElt>, std::borrow::Cow<'a, CycElt>)> {
        use std::borrow::Cow;
        if a.field.n == b.field.n {
            Ok((Cow::Borrowed(a), Cow::Borrowed(b)))
        } else if b.is_rational() {
            Ok((Cow::Borrowed(a), Cow::Owned(b.rational_in(&a.field))))
        } else if a.is_rational() {
            Ok((Cow::Owned(a.rational_in(&b.field)), Cow::Borrowed(b)))
        } else {
            Err(Error::ConductorMismatch(a.field.n, b.field.n))
        }
    }

    pub fn try_add(&self, other: &CycElt) -> Result<CycElt> {
        let (a, b) = Self::coerce(self, other)?;
        Ok(a.add_same(&b, false))
    }

    pub fn try_sub(&self, other: &CycElt) -> Result<CycElt> {
        let (a, b) = Self::coerce(self, other)?;
        Ok(a.add_same(&b, true))
    }

    pub fn try_mul(&self, other: &CycElt) -> Result<CycElt> {
        let (a, b) = Self::coerce(self, other)?;
        Ok(a.mul_same(&b))
    }

    pub fn try_div(&self, other: &CycElt) -> Result<CycElt> {
        let (a, b) = Self::coerce(self, other)?;
        Ok(a.mul_same(&b.inv()?))
    }

    fn add_same(&self, other: &CycElt, negate: bool) -> CycElt {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let num: Vec<BigInt> = if self.den == other.den {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| if negate { x - y } else { x + y })
                .collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| {
                    let l = x * &other.den;
                    let r = y * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        Self::from_parts(self.field.clone(), num, den)
    }

    fn mul_same(&self, other: &CycElt) -> CycElt {
        if self.is_zero() || other.is_zero() {
            return CycElt::zero(self.field.n);
        }
        if other.is_rational() {
            return self.scale_parts(&other.num[0], &other.den);
        }
        if self.is_rational() {
            return other.scale_parts(&self.num[0], &self.den);
        }
        let phi = self.field.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..phi].to_vec();
        for (j, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (k, p) in self.field.power(j).iter().enumerate() {
                if !p.is_zero() {
                    num[k] += c * p;
                }
            }
        }
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    fn scale_parts(&self, n: &BigInt, d: &BigInt) -> CycElt {
        let num = self.num.iter().map(|c| c * n).collect();
        Self::from_parts(self.field.clone(), num, &self.den * d)
    }

    /// Multiplication by a rational number.
    pub fn scale(&self, r: &BigRational) -> CycElt {
        self.scale_parts(r.numer(), r.denom())
    }

    /// Multiplicative inverse, by solving the linear system of
    /// multiplication-by-self over Q.
    pub fn inv(&self) -> Result<CycElt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let mut e = CycElt::zero(self.field.n);
            e.num[0] = self.den.clone();
            e.den = self.num[0].clone();
            e.normalize();
            return Ok(e);
        }
        let phi = self.field.phi;
        // columns: num * x^j reduced
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = CycElt {
                field: self.field.clone(),
                num: self.num.clone(),
                den: BigInt::one(),
            }
            .mul_same(&CycElt::zeta_pow(self.field.n, j as i64));
            for i in 0..phi {
                m[i][j] = BigRational::new(col.num[i].clone(), col.den.clone());
            }
        }
        m[0][phi] = BigRational::from_integer(self.den.clone());
        // Gauss-Jordan on the augmented system
        for c in 0..phi {
            let p = (c..phi)
                .find(|&r| !m[r][c].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(c, p);
            let piv = m[c][c].clone();
            for v in m[c].iter_mut() {
                *v /= &piv;
            }
            for r in 0..phi {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let pivot_row = m[c].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = m.into_iter().map(|row| row[phi].clone()).collect();
        let den = sol.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = sol.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_parts(self.field.clone(), num, den))
    }

    pub fn pow(&self, mut k: u64) -> CycElt {
        let mut base = self.clone();
        let mut acc = CycElt::one(self.field.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, k: i64) -> Result<CycElt> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.inv()?.pow(k.unsigned_abs()))
        }
    }

    /// The Galois automorphism ζ ↦ ζᵏ; k must be coprime to n.
    pub fn galois(&self, k: i64) -> Result<CycElt> {
        let n = self.field.n as i64;
        if n.gcd(&k) != 1 {
            return Err(Error::Precondition(format!("{k} is not coprime to {n}")));
        }
        let phi = self.field.phi;
        let mut num = vec![BigInt::zero(); phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = ((i as i64) * k).rem_euclid(n) as usize;
            for (t, p) in self.field.power(j).iter().enumerate() {
                if !p.is_zero() {
                    num[t] += c * p;
                }
            }
        }
        Ok(Self::from_parts(self.field.clone(), num, self.den.clone()))
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> CycElt {
        if self.is_rational() {
            return self.clone();
        }
        self.galois(-1).expect("-1 is a unit mod n")
    }

    /// True iff a^lcm(2, n) = 1, i.e. a lies in the group of roots of unity
    /// of Q(ζₙ).
    pub fn is_root_of_unity(&self) -> bool {
        if self.is_zero() || !self.den.is_one() {
            return false;
        }
        let order = (self.field.n as u64).lcm(&2);
        self.pow(order).is_one()
    }

    /// Floating-point value under ζ ↦ exp(2πi/n); for reports only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.n as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let a = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += c * a.cos();
            im += c * a.sin();
        }
        (re, im)
    }

    /// Parses the literal grammar
    /// `element := term (('+'|'-') term)*`,
    /// `term := rational ('*'? 'z' ('^' uint)?)? | 'z' ('^' uint)?`,
    /// `rational := int ('/' uint)?`, with an optional leading sign.
    pub fn parse(text: &str, n: u32) -> Result<CycElt> {
        let mut cur = Cursor::new(text)?;
        let e = parse_element(&mut cur, n)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

/// Parses one element from the cursor, stopping at the first token that cannot
/// continue it.
pub(crate) fn parse_element(cur: &mut Cursor, n: u32) -> Result<CycElt> {
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n as usize];
    let mut negative = if cur.eat(&Tok::Minus) {
        true
    } else {
        cur.eat(&Tok::Plus);
        false
    };
    loop {
        let (coeff, exp) = parse_term(cur)?;
        let k = (exp % n as u64) as usize;
        if negative {
            acc[k] -= coeff;
        } else {
            acc[k] += coeff;
        }
        match cur.peek() {
            Some(Tok::Plus) => {
                cur.bump();
                negative = false;
            }
            Some(Tok::Minus) => {
                cur.bump();
                negative = true;
            }
            _ => break,
        }
    }
    Ok(CycElt::from_power_coeffs(n, &acc))
}

fn is_z(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Ident(s)) if s == "z")
}

fn parse_term(cur: &mut Cursor) -> Result<(BigRational, u64)> {
    match cur.peek() {
        Some(Tok::Int(_)) => {
            let r = parse_rational(cur)?;
            let has_z = if cur.peek() == Some(&Tok::Star) && is_z(cur.peek_at(1)) {
                cur.bump();
                true
            } else {
                is_z(cur.peek())
            };
            if has_z {
                cur.bump();
                Ok((r, parse_exponent(cur)?))
            } else {
                Ok((r, 0))
            }
        }
        t if is_z(t) => {
            cur.bump();
            Ok((BigRational::one(), parse_exponent(cur)?))
        }
        _ => Err(cur.error("expected a rational or z")),
    }
}

pub(crate) fn parse_rational(cur: &mut Cursor) -> Result<BigRational> {
    let num = cur.expect_uint()?;
    if cur.eat(&Tok::Slash) {
        let pos = cur.pos();
        let den = cur.expect_uint()?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator { pos });
        }
        Ok(BigRational::new(num, den))
    } else {
        Ok(BigRational::from_integer(num))
    }
}

fn parse_exponent(cur: &mut Cursor) -> Result<u64> {
    if cur.eat(&Tok::Caret) {
        cur.expect_small_uint()
    } else {
        Ok(1)
    }
}

/// Parses a cyclotomic literal in Q(ζₙ).
pub fn parse_cyc(text: &str, n: u32) -> Result<CycElt> {
    CycElt::parse(text, n)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycElt {
    /// Canonical form: descending powers of `z`, coefficients as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let zpart = match k {
                0 => None,
                1 => Some("z".to_string()),
                _ => Some(format!("z^{k}")),
            };
            match zpart {
                None => write!(f, "{}", fmt_rational(&mag))?,
                Some(z) if mag.is_one() => write!(f, "{z}")?,
                Some(z) => write!(f, "{}*{z}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElt[{}]({})", self.field.n, self)
    }
}

impl PartialEq for CycElt {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycElt {}

impl Hash for CycElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.den.hash(state);
        self.num.hash(state);
    }
}

impl Ord for CycElt {
    /// Conductor first, then the rational coefficients lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.n.cmp(&other.field.n).then_with(|| {
            for (a, b) in self.num.iter().zip(&other.num) {
                let o = (a * &other.den).cmp(&(b * &self.den));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for CycElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        -&self
    }
}

// Operator forms panic on a conductor mismatch; use the `try_*` methods when
// the operands may come from different fields.
macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&CycElt> for &CycElt {
            type Output = CycElt;
            fn $m(self, rhs: &CycElt) -> CycElt {
                self.$try(rhs)
                    .expect("cyclotomic operands from different fields")
            }
        }
        impl $tr<CycElt> for CycElt {
            type Output = CycElt;
            fn $m(self, rhs: CycElt) -> CycElt {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycElt> for CycElt {
            type Output = CycElt;
            fn $m(self, rhs: &CycElt) -> CycElt {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

/// ζ_order^k inside Q(ζₙ), when the field contains the order-th roots of unity.
pub fn root_of_unity(n: u32, order: u32, k: i64) -> Result<CycElt> {
    let order_big = order as u64;
    let k = k.rem_euclid(order as i64);
    if (n as u64).is_multiple_of(order_big) {
        return Ok(CycElt::zeta_pow(n, k * (n / order) as i64));
    }
    if n % 2 == 1 && (2 * n as u64).is_multiple_of(order_big) {
        // ζ_{2n} = -ζₙ^((n+1)/2)
        let z2n = -CycElt::zeta_pow(n, n.div_ceil(2) as i64);
        let step = 2 * n / order;
        return Ok(z2n.pow(k as u64 * step as u64));
    }
    Err(Error::Precondition(format!(
        "Q(zeta_{n}) does not contain primitive {order}-th roots of unity"
    )))
}
