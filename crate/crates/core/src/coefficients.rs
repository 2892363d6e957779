//! Exact coefficient domains: prime fields, quadratic and cubic extensions of
//! small prime fields, and the rationals.
//!
//! Group arithmetic is generic over [`Scalars`], which finite fields implement
//! with table lookups on `u16` codes and the rationals implement with
//! [`BigRational`]. The dynamically typed [`Field`] / [`FieldElement`] pair is
//! the checked front door used for parsing and user-facing APIs.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime allowed as a characteristic.
pub const MAX_PRIME: u32 = 13;
/// Largest extension degree supported.
pub const MAX_DEGREE: u32 = 3;
/// Largest order of a cubic extension (keeps the tables small).
pub const MAX_CUBIC_ORDER: u64 = 343;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime <= {MAX_PRIME}")]
    BadCharacteristic(u32),
    #[error("degree {0} is not supported (1 to {MAX_DEGREE} only)")]
    BadDegree(u32),
    #[error("modulus must be supplied exactly when degree > 1")]
    ModulusMismatch,
    #[error("modulus {0:?} is not a monic irreducible polynomial of the stated degree")]
    ReducibleModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields ({0} vs {1})")]
    DescriptorMismatch(String, String),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("degenerate polynomial: leading and linear coefficients are both zero")]
    DegeneratePolynomial,
    #[error("no field of order {0} is available")]
    UnsupportedOrder(u64),
}

/// Operations every coefficient domain provides. Elements are plain values;
/// the implementor carries whatever tables are needed.
pub trait Scalars: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn descriptor(&self) -> FieldDescriptor;
    /// All elements in canonical order, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// A square root if one exists in the field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Integer power; negative exponents invert. Panics on `0^-n`.
    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let base = if e < 0 {
            self.inv(a).expect("negative power of zero")
        } else {
            a.clone()
        };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        acc
    }

    fn order(&self) -> Option<u64> {
        self.descriptor().order()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    PrimeField,
    ExtensionField,
    Rationals,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub characteristic: u32,
    pub degree: u32,
    /// Low-to-high coefficients of the monic modulus, leading 1 included.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldDescriptor {
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rationals => None,
            _ => Some((self.characteristic as u64).pow(self.degree)),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeField => write!(f, "GF({})", self.characteristic),
            FieldKind::ExtensionField => {
                write!(f, "GF({}^{})[", self.characteristic, self.degree)?;
                let m = self.modulus.as_deref().unwrap_or(&[]);
                write!(f, "{}]", render_poly(m))
            }
        }
    }
}

fn render_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "g".to_string(),
            _ => format!("g^{k}"),
        };
        terms.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, _) => var,
            _ => format!("{c}{var}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// GF(p^d) for d in {1,2,3}, elements encoded as `c0 + c1*p + c2*p^2`.
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    modulus: Vec<u32>,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(FieldError::BadCharacteristic(p));
        }
        Ok(Self::build(p, 1, vec![0, 1]))
    }

    /// Quadratic extension with modulus `X^2 + c1 X + c0` given as `[c0, c1, 1]`.
    pub fn quadratic(p: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        if modulus.len() != 3 {
            return Err(FieldError::ReducibleModulus(modulus.to_vec()));
        }
        Self::extension(p, modulus)
    }

    /// Extension of degree 2 or 3 by a monic modulus given low-to-high.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(FieldError::BadCharacteristic(p));
        }
        let degree = modulus.len().saturating_sub(1) as u32;
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::BadDegree(degree));
        }
        if degree == 3 && (p as u64).pow(3) > MAX_CUBIC_ORDER {
            return Err(FieldError::UnsupportedOrder((p as u64).pow(3)));
        }
        if modulus[degree as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::ReducibleModulus(modulus.to_vec()));
        }
        // In degree <= 3 a monic polynomial is irreducible iff it has no root.
        if (0..p).any(|x| eval_mod(modulus, x, p) == 0) {
            return Err(FieldError::ReducibleModulus(modulus.to_vec()));
        }
        Ok(Self::build(p, degree, modulus.to_vec()))
    }

    /// The field of order `q` with the default modulus: the first irreducible
    /// monic polynomial when coefficients are read high-to-low
    /// lexicographically (`X^2 + c1 X + c0`, `X^3 + c2 X^2 + c1 X + c0`).
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        for p in 2..=MAX_PRIME {
            if !is_prime(p) {
                continue;
            }
            if q == p as u64 {
                return Self::prime(p);
            }
            if q == (p as u64).pow(2) {
                return Self::extension(p, &default_modulus(p, 2));
            }
            if q == (p as u64).pow(3) && q <= MAX_CUBIC_ORDER {
                return Self::extension(p, &default_modulus(p, 3));
            }
        }
        Err(FieldError::UnsupportedOrder(q))
    }

    fn build(p: u32, degree: u32, modulus: Vec<u32>) -> Self {
        let d = degree as usize;
        let q = p.pow(degree) as usize;
        let digits = |x: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(d);
            let mut x = x as u32;
            for _ in 0..d {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let join = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c) as u16;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for x in 0..q {
            let xs = digits(x);
            for y in 0..q {
                let ys = digits(y);
                let sum: Vec<u32> = xs.iter().zip(&ys).map(|(a, b)| (a + b) % p).collect();
                add[x * q + y] = join(&sum);
                let mut prod = vec![0u32; 2 * d];
                for (i, a) in xs.iter().enumerate() {
                    for (j, b) in ys.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                // reduce with g^d = -(m_0 + m_1 g + ... + m_{d-1} g^{d-1})
                for k in (d..2 * d).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, m) in modulus.iter().take(d).enumerate() {
                        prod[k - d + i] = (prod[k - d + i] + c * (p - m)) % p;
                    }
                }
                mul[x * q + y] = join(&prod[..d]);
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for x in 0..q {
            neg[x] = (0..q).find(|&y| add[x * q + y] == 0).unwrap() as u16;
            if x != 0 {
                inv[x] = (0..q).find(|&y| mul[x * q + y] == 1).unwrap() as u16;
            }
        }
        FiniteField { p, degree, modulus, q, add, mul, neg, inv }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.q
    }

    /// The element `c0 + c1 g` (higher coefficients zero).
    pub fn from_coeffs(&self, c0: u32, c1: u32) -> u16 {
        self.from_digits(&[c0, c1])
    }

    /// The element `Σ c_k g^k`.
    pub fn from_digits(&self, c: &[u32]) -> u16 {
        let mut acc = 0u32;
        for k in (0..self.degree as usize).rev() {
            acc = acc * self.p + c.get(k).copied().unwrap_or(0) % self.p;
        }
        acc as u16
    }

    /// Coefficients of `g^0, …, g^{d-1}`.
    pub fn digits(&self, a: u16) -> Vec<u32> {
        let mut x = a as u32;
        (0..self.degree)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }
}

fn eval_mod(poly: &[u32], x: u32, p: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// First irreducible monic polynomial of degree `d`, coefficients read
/// high-to-low lexicographically, constant term nonzero.
fn default_modulus(p: u32, d: usize) -> Vec<u32> {
    let count = p.pow(d as u32);
    for n in 0..count {
        // digits of n, most significant first, become c_{d-1}, …, c_0
        let mut m = vec![0u32; d + 1];
        m[d] = 1;
        let mut x = n;
        for k in 0..d {
            m[k] = x % p;
            x /= p;
        }
        if m[0] != 0 && !(0..p).any(|x| eval_mod(&m, x, p) == 0) {
            return m;
        }
    }
    unreachable!("every prime field has irreducible polynomials of each degree")
}

impl Scalars for FiniteField {
    type Elem = u16;

    #[inline]
    fn zero(&self) -> u16 {
        0
    }
    #[inline]
    fn one(&self) -> u16 {
        1
    }
    fn from_i64(&self, n: i64) -> u16 {
        n.rem_euclid(self.p as i64) as u16
    }
    #[inline]
    fn add(&self, a: &u16, b: &u16) -> u16 {
        self.add[*a as usize * self.q + *b as usize]
    }
    #[inline]
    fn neg(&self, a: &u16) -> u16 {
        self.neg[*a as usize]
    }
    #[inline]
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        self.mul[*a as usize * self.q + *b as usize]
    }
    #[inline]
    fn inv(&self, a: &u16) -> Option<u16> {
        (*a != 0).then(|| self.inv[*a as usize])
    }
    #[inline]
    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }

    fn render(&self, a: &u16) -> String {
        let c = self.digits(*a);
        let mut terms = Vec::new();
        for k in (0..c.len()).rev() {
            let ck = c[k];
            if ck == 0 {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            };
            terms.push(match (ck, k) {
                (_, 0) => ck.to_string(),
                (1, _) => var,
                _ => format!("{ck}{var}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn parse(&self, s: &str) -> Result<u16, FieldError> {
        let bad = || FieldError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        // Split into signed terms: "2g+1", "-g", "g^2-1", "3".
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in t.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let p = self.p as i64;
        let mut c = vec![0i64; self.degree as usize];
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coef, k) = match body.find('g') {
                Some(pos) => {
                    let k = match &body[pos + 1..] {
                        "" => 1,
                        e => e.strip_prefix('^').and_then(|e| e.parse::<usize>().ok()).ok_or_else(bad)?,
                    };
                    let coef = &body[..pos];
                    (coef.strip_suffix('*').unwrap_or(coef), k)
                }
                None => (body, 0),
            };
            if k >= c.len() {
                return Err(bad());
            }
            let v = if coef.is_empty() { 1 } else { coef.parse::<i64>().map_err(|_| bad())? };
            c[k] += sign * v.rem_euclid(p);
        }
        let digits: Vec<u32> = c.iter().map(|x| x.rem_euclid(p) as u32).collect();
        Ok(self.from_digits(&digits))
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            kind: if self.degree == 1 { FieldKind::PrimeField } else { FieldKind::ExtensionField },
            characteristic: self.p,
            degree: self.degree,
            modulus: (self.degree > 1).then(|| self.modulus.clone()),
        }
    }

    fn elements(&self) -> Option<Vec<u16>> {
        Some((0..self.q as u16).collect())
    }

    fn sqrt(&self, a: &u16) -> Option<u16> {
        (0..self.q as u16).find(|x| self.mul(x, x) == *a)
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalars for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let bad = || FieldError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { kind: FieldKind::Rationals, characteristic: 0, degree: 1, modulus: None }
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        // BigRational is kept reduced, so numerator and denominator must both be squares.
        let n = bigint_sqrt_exact(a.numer())?;
        let d = bigint_sqrt_exact(a.denom())?;
        Some(BigRational::new(n, d))
    }
}

/// All roots of `a X^2 + b X + c` in the field, without multiplicity, in
/// canonical order for finite fields.
pub fn quadratic_roots<F: Scalars>(
    f: &F,
    a: &F::Elem,
    b: &F::Elem,
    c: &F::Elem,
) -> Result<Vec<F::Elem>, FieldError> {
    if f.is_zero(a) && f.is_zero(b) {
        return Err(FieldError::DegeneratePolynomial);
    }
    if let Some(all) = f.elements() {
        return Ok(all
            .into_iter()
            .filter(|x| {
                let v = f.add(&f.mul(&f.add(&f.mul(a, x), b), x), c);
                f.is_zero(&v)
            })
            .collect());
    }
    if f.is_zero(a) {
        return Ok(vec![f.neg(&f.div(c, b).expect("b is nonzero"))]);
    }
    // Characteristic zero: the quadratic formula is exact here.
    let four_ac = f.mul(&f.from_i64(4), &f.mul(a, c));
    let disc = f.sub(&f.mul(b, b), &four_ac);
    let Some(s) = f.sqrt(&disc) else {
        return Ok(Vec::new());
    };
    let two_a = f.mul(&f.from_i64(2), a);
    let r1 = f.div(&f.sub(&s, b), &two_a).unwrap();
    let r2 = f.div(&f.sub(&f.neg(&s), b), &two_a).unwrap();
    let mut roots = vec![r1];
    if r2 != roots[0] {
        roots.push(r2);
    }
    Ok(roots)
}

/// A runtime-selected coefficient field.
#[derive(Clone, Debug)]
pub enum Field {
    Finite(Arc<FiniteField>),
    Rationals,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.descriptor().hash(state)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.descriptor().fmt(f)
    }
}

/// Validates parameters and builds a field.
pub fn field_create(
    kind: FieldKind,
    characteristic: u32,
    degree: u32,
    modulus: Option<&[u32]>,
) -> Result<Field, FieldError> {
    match kind {
        FieldKind::Rationals => {
            if characteristic != 0 {
                return Err(FieldError::BadCharacteristic(characteristic));
            }
            if degree != 1 {
                return Err(FieldError::BadDegree(degree));
            }
            if modulus.is_some() {
                return Err(FieldError::ModulusMismatch);
            }
            Ok(Field::Rationals)
        }
        FieldKind::PrimeField => {
            if degree != 1 {
                return Err(FieldError::BadDegree(degree));
            }
            if modulus.is_some() {
                return Err(FieldError::ModulusMismatch);
            }
            Ok(Field::Finite(Arc::new(FiniteField::prime(characteristic)?)))
        }
        FieldKind::ExtensionField => {
            if !(2..=MAX_DEGREE).contains(&degree) {
                return Err(FieldError::BadDegree(degree));
            }
            let m = modulus.ok_or(FieldError::ModulusMismatch)?;
            if m.len() != degree as usize + 1 {
                return Err(FieldError::ModulusMismatch);
            }
            Ok(Field::Finite(Arc::new(FiniteField::extension(characteristic, m)?)))
        }
    }
}

impl Field {
    /// Parses `Q`, `GF(9)`, `9`, or `GF(3^2)[g^2+1]` style specifications.
    pub fn from_spec(spec: &str) -> Result<Field, FieldError> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || FieldError::Parse(spec.to_string());
        if s == "Q" || s.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let body = s
            .strip_prefix("GF(")
            .or_else(|| s.strip_prefix("gf("))
            .map(|r| r.to_string())
            .unwrap_or_else(|| format!("{s})"));
        let (order_part, rest) = body.split_once(')').ok_or_else(bad)?;
        let order: u64 = if let Some((p, d)) = order_part.split_once('^') {
            let p: u64 = p.parse().map_err(|_| bad())?;
            let d: u32 = d.parse().map_err(|_| bad())?;
            p.pow(d)
        } else {
            order_part.parse().map_err(|_| bad())?
        };
        if rest.is_empty() {
            return Ok(Field::Finite(Arc::new(FiniteField::of_order(order)?)));
        }
        let poly = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let base = FiniteField::of_order(order)?;
        let p = base.characteristic();
        let degree = base.descriptor().degree as usize;
        let mut coeffs = vec![0u32; degree + 1];
        for term in poly.split('+') {
            let (c, k) = match term.find('g') {
                Some(pos) => {
                    let k = match &term[pos + 1..] {
                        "" => 1,
                        e => e.strip_prefix('^').and_then(|e| e.parse::<usize>().ok()).ok_or_else(bad)?,
                    };
                    (&term[..pos], k)
                }
                None => (term, 0),
            };
            if k > degree {
                return Err(bad());
            }
            let c: u32 = if c.is_empty() { 1 } else { c.parse().map_err(|_| bad())? };
            coeffs[k] = (coeffs[k] + c) % p;
        }
        field_create(FieldKind::ExtensionField, p, degree as u32, Some(&coeffs))
    }

    pub fn of_order(q: u64) -> Result<Field, FieldError> {
        Ok(Field::Finite(Arc::new(FiniteField::of_order(q)?)))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            Field::Finite(f) => f.descriptor(),
            Field::Rationals => Rationals.descriptor(),
        }
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        let value = match self {
            Field::Finite(f) => Value::Finite(f.parse(s)?),
            Field::Rationals => Value::Rational(Rationals.parse(s)?),
        };
        Ok(FieldElement { field: self.clone(), value })
    }

    pub fn element_from_i64(&self, n: i64) -> FieldElement {
        let value = match self {
            Field::Finite(f) => Value::Finite(f.from_i64(n)),
            Field::Rationals => Value::Rational(Rationals.from_i64(n)),
        };
        FieldElement { field: self.clone(), value }
    }

    pub fn zero(&self) -> FieldElement {
        self.element_from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element_from_i64(1)
    }

    /// Every element, for finite fields.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        match self {
            Field::Finite(f) => Some(
                f.elements()?
                    .into_iter()
                    .map(|v| FieldElement { field: self.clone(), value: Value::Finite(v) })
                    .collect(),
            ),
            Field::Rationals => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Finite(u16),
    Rational(BigRational),
}

/// A field element tagged with its field; binary operations check that both
/// operands share a descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Value,
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (&self.field, &self.value) {
            (Field::Finite(ff), Value::Finite(v)) => ff.render(v),
            (_, Value::Rational(r)) => Rationals.render(r),
            _ => unreachable!(),
        };
        f.write_str(&s)
    }
}

macro_rules! binop {
    ($name:ident) => {
        pub fn $name(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
            self.same_field(other)?;
            let value = match (&self.field, &self.value, &other.value) {
                (Field::Finite(f), Value::Finite(a), Value::Finite(b)) => Value::Finite(f.$name(a, b)),
                (_, Value::Rational(a), Value::Rational(b)) => Value::Rational(Rationals.$name(a, b)),
                _ => unreachable!(),
            };
            Ok(FieldElement { field: self.field.clone(), value })
        }
    };
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::DescriptorMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    binop!(add);
    binop!(sub);
    binop!(mul);

    pub fn neg(&self) -> FieldElement {
        let value = match (&self.field, &self.value) {
            (Field::Finite(f), Value::Finite(a)) => Value::Finite(f.neg(a)),
            (_, Value::Rational(a)) => Value::Rational(-a),
            _ => unreachable!(),
        };
        FieldElement { field: self.field.clone(), value }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        let value = match (&self.field, &self.value) {
            (Field::Finite(f), Value::Finite(a)) => {
                Value::Finite(f.inv(a).ok_or(FieldError::DivisionByZero)?)
            }
            (_, Value::Rational(a)) => {
                Value::Rational(Rationals.inv(a).ok_or(FieldError::DivisionByZero)?)
            }
            _ => unreachable!(),
        };
        Ok(FieldElement { field: self.field.clone(), value })
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Finite(a) => *a == 0,
            Value::Rational(a) => a.is_zero(),
        }
    }

    /// The raw code of a finite-field element.
    pub fn finite_code(&self) -> Option<u16> {
        match self.value {
            Value::Finite(a) => Some(a),
            Value::Rational(_) => None,
        }
    }

    pub fn rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(a) => Some(a),
            Value::Finite(_) => None,
        }
    }
}

/// Checked front end for [`quadratic_roots`] on tagged elements.
pub fn quadratic_roots_checked(
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
) -> Result<Vec<FieldElement>, FieldError> {
    a.same_field(b)?;
    a.same_field(c)?;
    let field = a.field.clone();
    let wrap = |value| FieldElement { field: field.clone(), value };
    match (&a.field, &a.value, &b.value, &c.value) {
        (Field::Finite(f), Value::Finite(x), Value::Finite(y), Value::Finite(z)) => {
            Ok(quadratic_roots(f.as_ref(), x, y, z)?.into_iter().map(|v| wrap(Value::Finite(v))).collect())
        }
        (_, Value::Rational(x), Value::Rational(y), Value::Rational(z)) => Ok(quadratic_roots(&Rationals, x, y, z)?
            .into_iter()
            .map(|v| wrap(Value::Rational(v)))
            .collect()),
        _ => unreachable!(),
    }
}

/// Exact gcd-reduced rational `n/d`; a convenience for tests and parsers.
pub fn rat(n: i64, d: i64) -> BigRational {
    let g = n.gcd(&d).max(1);
    BigRational::new((n / g).into(), (d / g).into())
}
