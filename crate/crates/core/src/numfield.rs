//! Exact arithmetic in the multi-quadratic field ℚ(i, √2, √3, √5).
//!
//! An element is a sparse sum `Σ c_d·√d` over the square-free radicands
//! `d ∈ {1, 2, 3, 5, 6, 10, 15, 30}` with Gaussian-rational coefficients.
//! Radicands are indexed internally by a 3-bit mask over the primes
//! (2, 3, 5), so `√a·√b` reduces to `g·√(ab/g²)` with a xor and an and.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num::BigRational;

/// The admissible radicands in ascending order.
pub const RADICANDS: [u32; 8] = [1, 2, 3, 5, 6, 10, 15, 30];

const PRIMES: [u32; 3] = [2, 3, 5];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not real: {0}")]
    NonReal(String),
    #[error("radicand {0} is not in {{1,2,3,5,6,10,15,30}}")]
    BadRadicand(u64),
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

fn mask_value(mask: u8) -> u32 {
    (0..3).filter(|b| mask & (1 << b) != 0).map(|b| PRIMES[b]).product()
}

fn value_mask(d: u64) -> Option<u8> {
    RADICANDS
        .iter()
        .position(|&r| r as u64 == d)
        .map(|_| {
            let mut m = 0u8;
            for (b, p) in PRIMES.iter().enumerate() {
                if d.is_multiple_of(*p as u64) {
                    m |= 1 << b;
                }
            }
            m
        })
}

/// Sort key placing masks in ascending radicand order.
fn mask_rank(mask: u8) -> u32 {
    mask_value(mask)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn rat_text(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `a + b·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `|a|² = a·conj(a)`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, q: &Rational) -> Self {
        GaussianRational::new(&self.re * q, &self.im * q)
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let (a, b, c, d) = (&self.re, &self.im, &o.re, &o.im);
        match (b.is_zero(), d.is_zero()) {
            (true, true) => GaussianRational::real(a * c),
            (true, false) => GaussianRational::new(a * c, a * d),
            (false, true) => GaussianRational::new(a * c, b * c),
            (false, false) => GaussianRational::new(a * c - b * d, a * d + b * c),
        }
    }

    fn add_assign_ref(&mut self, o: &Self) {
        if !o.re.is_zero() {
            self.re += &o.re;
        }
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*i", rat_text(&self.re), rat_text(&self.im))
    }
}

/// Sign of a real field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        Sign::from_ordering((self.as_i32() * o.as_i32()).cmp(&0))
    }
}

/// Element of ℚ(i, √2, √3, √5).
///
/// Terms are kept sorted by radicand with no zero coefficients, so structural
/// equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    terms: Vec<(u8, GaussianRational)>,
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_gaussian(GaussianRational::real(q))
    }

    pub fn from_gaussian(g: GaussianRational) -> Self {
        Self::from_terms(vec![(0, g)])
    }

    /// `√d` for a radicand in [`RADICANDS`].
    pub fn sqrt_radicand(d: u32) -> Result<Self, FieldError> {
        let m = value_mask(d as u64).ok_or(FieldError::BadRadicand(d as u64))?;
        Ok(Self::from_terms(vec![(m, GaussianRational::real(Rational::one()))]))
    }

    /// `√q` for a rational whose square-free part is a product of 2, 3, 5.
    /// Negative inputs give `i·√|q|`.
    pub fn sqrt_rational(q: &Rational) -> Result<Self, FieldError> {
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let neg = q.is_negative();
        let q = q.abs();
        // √(p/r) = √(p·r)/r
        let pr = q.numer() * q.denom();
        let (sq, free) = split_square(&pr)?;
        let coeff = Rational::new(sq, q.denom().clone());
        let mut e = Self::sqrt_radicand(free)?.scale(&coeff);
        if neg {
            e = e * Self::i();
        }
        Ok(e)
    }

    fn from_terms(mut terms: Vec<(u8, GaussianRational)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|(m, _)| mask_rank(*m));
        FieldElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0 == 0
            && self.terms[0].1.re.is_one()
            && self.terms[0].1.im.is_zero()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.im.is_zero())
    }

    /// The rational value, if the element lies in ℚ.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }

    /// The Gaussian-rational value, if the element lies in ℚ(i).
    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::default()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// `(radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &GaussianRational)> {
        self.terms.iter().map(|(m, c)| (mask_value(*m), c))
    }

    pub fn coeff(&self, d: u32) -> GaussianRational {
        self.terms()
            .find(|(r, _)| *r == d)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    /// Complex conjugation: `i ↦ −i`, radicals fixed.
    pub fn conj(&self) -> Self {
        FieldElem { terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    pub fn real_part(&self) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(m, c)| (*m, GaussianRational::real(c.re.clone()))).collect(),
        )
    }

    pub fn imag_part(&self) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(m, c)| (*m, GaussianRational::real(c.im.clone()))).collect(),
        )
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        FieldElem { terms: self.terms.iter().map(|(m, c)| (*m, c.scale(q))).collect() }
    }

    pub fn scale_gaussian(&self, g: &GaussianRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c.mul_ref(g))).collect())
    }

    fn add_ref(&self, o: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ka = self.terms.get(i).map(|t| mask_rank(t.0));
            let kb = o.terms.get(j).map(|t| mask_rank(t.0));
            let take_b = |c: &GaussianRational| {
                if negate {
                    GaussianRational::new(-&c.re, -&c.im)
                } else {
                    c.clone()
                }
            };
            match (ka, kb) {
                (Some(a), Some(b)) if a == b => {
                    let mut c = self.terms[i].1.clone();
                    c.add_assign_ref(&take_b(&o.terms[j].1));
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                (Some(_), None) => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                _ => {
                    out.push((o.terms[j].0, take_b(&o.terms[j].1)));
                    j += 1;
                }
            }
        }
        FieldElem { terms: out }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 && o.terms.len() == 1 {
            let (ma, ca) = &self.terms[0];
            let (mb, cb) = &o.terms[0];
            let mut c = ca.mul_ref(cb);
            let g = mask_value(ma & mb);
            if g != 1 {
                c = c.scale(&int(g as i64));
            }
            return FieldElem { terms: vec![(ma ^ mb, c)] };
        }
        let mut acc: [Option<GaussianRational>; 8] = Default::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut c = ca.mul_ref(cb);
                let g = mask_value(ma & mb);
                if g != 1 {
                    c = c.scale(&int(g as i64));
                }
                let slot = &mut acc[(ma ^ mb) as usize];
                match slot {
                    Some(s) => s.add_assign_ref(&c),
                    None => *slot = Some(c),
                }
            }
        }
        Self::from_terms(
            acc.into_iter()
                .enumerate()
                .filter_map(|(m, c)| c.map(|c| (m as u8, c)))
                .collect(),
        )
    }

    /// Multiplicative inverse. Single-term elements are inverted in closed
    /// form; otherwise the 16×16 rational multiplication matrix is solved.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        match self.terms.as_slice() {
            [] => Err(FieldError::DivisionByZero),
            [(m, c)] => {
                // (c√d)⁻¹ = c⁻¹·√d/d
                let inv = c.inverse()?.scale(&Rational::new(BigInt::one(), BigInt::from(mask_value(*m))));
                Ok(FieldElem { terms: vec![(*m, inv)] })
            }
            _ => self.inverse_by_solve(),
        }
    }

    fn to_coords(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 16];
        for (m, c) in &self.terms {
            v[2 * *m as usize] = c.re.clone();
            v[2 * *m as usize + 1] = c.im.clone();
        }
        v
    }

    fn from_coords(v: &[Rational]) -> Self {
        Self::from_terms(
            (0..8u8)
                .map(|m| (m, GaussianRational::new(v[2 * m as usize].clone(), v[2 * m as usize + 1].clone())))
                .collect(),
        )
    }

    fn basis_unit(k: usize) -> Self {
        let m = (k / 2) as u8;
        let c = if k.is_multiple_of(2) { GaussianRational::real(Rational::one()) } else { GaussianRational::i() };
        FieldElem { terms: vec![(m, c)] }
    }

    fn inverse_by_solve(&self) -> Result<Self, FieldError> {
        // Column k of the matrix is self · (k-th basis unit).
        let cols: Vec<Vec<Rational>> = (0..16).map(|k| (self * &Self::basis_unit(k)).to_coords()).collect();
        let mut a: Vec<Vec<Rational>> = (0..16)
            .map(|r| {
                let mut row: Vec<Rational> = (0..16).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for col in 0..16 {
            let piv = (col..16).find(|&r| !a[r][col].is_zero()).ok_or(FieldError::DivisionByZero)?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x = &*x / &p;
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
        }
        let sol: Vec<Rational> = a.iter().map(|row| row[16].clone()).collect();
        Ok(Self::from_coords(&sol))
    }

    /// Exact sign of a real element.
    pub fn sign(&self) -> Result<Sign, FieldError> {
        if !self.is_real() {
            return Err(FieldError::NonReal(self.to_string()));
        }
        if self.is_zero() {
            return Ok(Sign::Zero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Sign::from_ordering(q.cmp(&Rational::zero())));
        }
        let real: Vec<(u32, Rational)> = self.terms().map(|(d, c)| (d, c.re.clone())).collect();
        // The √d are linearly independent over ℚ, so a nonzero element is
        // nonzero as a real number and refinement terminates.
        let mut bits = 32u64;
        loop {
            let (lo, hi) = enclose(&real, bits);
            if lo.is_positive() {
                return Ok(Sign::Positive);
            }
            if hi.is_negative() {
                return Ok(Sign::Negative);
            }
            bits *= 2;
        }
    }

    /// `|x|` for a real element.
    pub fn abs_real(&self) -> Result<Self, FieldError> {
        Ok(match self.sign()? {
            Sign::Negative => -self,
            _ => self.clone(),
        })
    }

    /// Complex approximation with relative error below `2^(1−precision)`.
    /// Precision is capped at 53 bits, the width of an `f64` mantissa.
    pub fn to_complex(&self, precision: u32) -> Complex64 {
        let p = precision.clamp(1, 53) as u64;
        let re: Vec<(u32, Rational)> = self.terms().map(|(d, c)| (d, c.re.clone())).collect();
        let im: Vec<(u32, Rational)> = self.terms().map(|(d, c)| (d, c.im.clone())).collect();
        Complex64::new(approx_real(&re, p), approx_real(&im, p))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_complex(53).re
    }

    /// Canonical serialization `(p/q + r/s*i)*sqrt(d) + …`.
    pub fn to_canonical(&self) -> String {
        if self.is_zero() {
            return "(0/1 + 0/1*i)*sqrt(1)".to_string();
        }
        self.terms()
            .map(|(d, c)| format!("({c})*sqrt({d})"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse_canonical(s: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let mut rest = s;
        let mut terms: Vec<(u8, GaussianRational)> = Vec::new();
        loop {
            rest = rest.strip_prefix('(').ok_or_else(err)?;
            let (re, r) = rest.split_once(" + ").ok_or_else(err)?;
            let (im, r) = r.split_once("*i)*sqrt(").ok_or_else(err)?;
            let (d, r) = r.split_once(')').ok_or_else(err)?;
            let d: u64 = d.parse().map_err(|_| err())?;
            let m = value_mask(d).ok_or(FieldError::BadRadicand(d))?;
            if terms.iter().any(|(t, _)| *t == m) {
                return Err(err());
            }
            terms.push((m, GaussianRational::new(parse_fraction(re).ok_or_else(err)?, parse_fraction(im).ok_or_else(err)?)));
            if r.is_empty() {
                break;
            }
            rest = r.strip_prefix(" + ").ok_or_else(err)?;
        }
        Ok(Self::from_terms(terms))
    }
}

fn parse_fraction(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Split `n = s²·f` with `f` square-free; fails unless `f ∈ RADICANDS`.
fn split_square(n: &BigInt) -> Result<(BigInt, u32), FieldError> {
    let mut n = n.clone();
    let mut sq = BigInt::one();
    let mut free = 1u32;
    for p in PRIMES {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        sq *= num::pow(bp, (e / 2) as usize);
        if e % 2 == 1 {
            free *= p;
        }
    }
    let r = n.sqrt();
    if &r * &r != n {
        return Err(FieldError::BadRadicand(n.to_u64().unwrap_or(u64::MAX)));
    }
    Ok((sq * r, free))
}

/// Rational bounds `lo ≤ √d ≤ hi` of width at most `2^-bits`.
fn sqrt_bounds(d: u32, bits: u64) -> (Rational, Rational) {
    if d == 1 {
        return (Rational::one(), Rational::one());
    }
    let scale = BigInt::one() << (2 * bits) as usize;
    let s = (BigInt::from(d) * &scale).sqrt();
    let den = BigInt::one() << bits as usize;
    (Rational::new(s.clone(), den.clone()), Rational::new(s + 1, den))
}

/// Interval enclosing `Σ c_d·√d`.
fn enclose(terms: &[(u32, Rational)], bits: u64) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (d, c) in terms {
        if c.is_zero() {
            continue;
        }
        let (l, h) = sqrt_bounds(*d, bits);
        if c.is_positive() {
            lo += c * &l;
            hi += c * &h;
        } else {
            lo += c * &h;
            hi += c * &l;
        }
    }
    (lo, hi)
}

fn approx_real(terms: &[(u32, Rational)], p: u64) -> f64 {
    if terms.iter().all(|(_, c)| c.is_zero()) {
        return 0.0;
    }
    if terms.iter().all(|(d, c)| *d == 1 || c.is_zero()) {
        let q: Rational = terms.iter().filter(|(d, _)| *d == 1).map(|(_, c)| c.clone()).sum();
        return q.to_f64().unwrap_or(f64::NAN);
    }
    let tol = Rational::new(BigInt::one(), BigInt::one() << p as usize);
    let mut bits = p + 16;
    loop {
        let (lo, hi) = enclose(terms, bits);
        let width = &hi - &lo;
        let mid = (&lo + &hi) / int(2);
        let one_sided = !lo.is_negative() || !hi.is_positive();
        if one_sided && width <= &mid.abs() * &tol {
            return mid.to_f64().unwrap_or(f64::NAN);
        }
        bits *= 2;
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl FromStr for FieldElem {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_canonical(s)
    }
}

/// Compact human-readable form, e.g. `√6`, `-2*i*√3`, `1/2 + 3/2*√2`.
///
/// This is the coefficient syntax of polynomial text and is parsed back by
/// [`FieldElem::parse_pretty`].
pub fn pretty(x: &FieldElem) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut atoms: Vec<(bool, String)> = Vec::new();
    for (d, c) in x.terms() {
        for (q, imag) in [(&c.re, false), (&c.im, true)] {
            if q.is_zero() {
                continue;
            }
            let mag = q.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (!imag && d == 1) {
                parts.push(if mag.denom().is_one() { mag.numer().to_string() } else { rat_text(&mag) });
            }
            if imag {
                parts.push("i".into());
            }
            if d != 1 {
                parts.push(format!("√{d}"));
            }
            atoms.push((q.is_negative(), parts.join("*")));
        }
    }
    let mut out = String::new();
    for (k, (neg, a)) in atoms.iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(a);
    }
    out
}

impl FieldElem {
    pub fn pretty(&self) -> String {
        pretty(self)
    }

    /// Inverse of [`pretty`].
    pub fn parse_pretty(s: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut acc = Self::zero();
        let mut rest = s;
        let mut neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            neg = true;
            rest = r;
        }
        loop {
            let next = [" + ", " - "].iter().filter_map(|sep| rest.find(sep).map(|p| (p, *sep))).min();
            let (atom, tail) = match next {
                Some((p, sep)) => (&rest[..p], Some((&rest[p + 3..], sep == " - "))),
                None => (rest, None),
            };
            let mut term = Self::one();
            if atom.is_empty() {
                return Err(err());
            }
            for part in atom.split('*') {
                let factor = if part == "i" {
                    Self::i()
                } else if let Some(d) = part.strip_prefix('√') {
                    Self::sqrt_radicand(d.parse().map_err(|_| err())?)?
                } else if part.contains('/') {
                    Self::from_rational(parse_fraction(part).ok_or_else(err)?)
                } else {
                    Self::from_rational(Rational::from_integer(part.parse().map_err(|_| err())?))
                };
                term = term * factor;
            }
            acc = if neg { acc - term } else { acc + term };
            match tail {
                Some((t, n)) => {
                    rest = t;
                    neg = n;
                }
                None => break,
            }
        }
        Ok(acc)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, o: &'a FieldElem) -> FieldElem {
                $body(self, o)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, o: FieldElem) -> FieldElem {
                $body(&self, &o)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, o: &'a FieldElem) -> FieldElem {
                $body(&self, o)
            }
        }
        impl<'a> $tr<FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, o: FieldElem) -> FieldElem {
                $body(self, &o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &FieldElem, b: &FieldElem| a.add_ref(b, false));
forward_binop!(Sub, sub, |a: &FieldElem, b: &FieldElem| a.add_ref(b, true));
forward_binop!(Mul, mul, |a: &FieldElem, b: &FieldElem| a.mul_ref(b));

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        *self = self.add_ref(o, false);
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        *self = self.add_ref(o, true);
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            terms: self.terms.iter().map(|(m, c)| (*m, GaussianRational::new(-&c.re, -&c.im))).collect(),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl std::iter::Sum for FieldElem {
    fn sum<I: Iterator<Item = FieldElem>>(iter: I) -> FieldElem {
        iter.fold(FieldElem::zero(), |a, b| a + b)
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<Rational> for FieldElem {
    fn from(q: Rational) -> Self {
        FieldElem::from_rational(q)
    }
}

pub fn field_mul(a: &FieldElem, b: &FieldElem) -> FieldElem {
    a * b
}

pub fn field_inverse(a: &FieldElem) -> Result<FieldElem, FieldError> {
    a.inverse()
}

pub fn field_sign(a: &FieldElem) -> Result<Sign, FieldError> {
    a.sign()
}

pub fn field_to_float(a: &FieldElem, precision: u32) -> Complex64 {
    a.to_complex(precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sq(d: u32) -> FieldElem {
        FieldElem::sqrt_radicand(d).unwrap()
    }

    fn q(n: i64, d: i64) -> FieldElem {
        FieldElem::from_rational(rat(n, d))
    }

    #[test]
    fn radicand_reduction() {
        assert_eq!(sq(2) * sq(3), sq(6));
        assert_eq!(sq(6) * sq(6), FieldElem::from_int(6));
        assert_eq!(sq(10) * sq(15), FieldElem::from_int(5) * sq(6));
        let a = FieldElem::one() + FieldElem::i();
        let b = FieldElem::one() - FieldElem::i();
        assert_eq!(a * b, FieldElem::from_int(2));
    }

    #[test]
    fn inverses() {
        let x = FieldElem::one() + sq(2);
        assert_eq!(x.inverse().unwrap(), sq(2) - FieldElem::one());
        assert_eq!(FieldElem::i().inverse().unwrap(), -FieldElem::i());
        assert_eq!(q(2, 3).inverse().unwrap(), q(3, 2));
        assert_eq!(FieldElem::zero().inverse(), Err(FieldError::DivisionByZero));
        let y = sq(2) + sq(3) * FieldElem::i() + q(1, 7) * sq(30) - sq(5);
        assert!((&y * &y.inverse().unwrap()).is_one());
    }

    #[test]
    fn signs() {
        let x = FieldElem::from_int(15) - FieldElem::from_int(4) * sq(15);
        assert_eq!(x.sign().unwrap(), Sign::Negative);
        assert_eq!(FieldElem::zero().sign().unwrap(), Sign::Zero);
        assert_eq!((sq(2) - FieldElem::one()).sign().unwrap(), Sign::Positive);
        assert!(matches!(FieldElem::i().sign(), Err(FieldError::NonReal(_))));
        // 99/70 is a convergent of √2 from above
        assert_eq!((sq(2) - q(99, 70)).sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn floats() {
        assert!((sq(2).to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let z = (FieldElem::one() + FieldElem::i()).to_complex(53);
        assert_eq!((z.re, z.im), (1.0, 1.0));
        let v = (sq(6) * q(1, 4)).to_f64();
        assert!((v - 6f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_rational_forms() {
        assert_eq!(FieldElem::sqrt_rational(&rat(3, 2)).unwrap(), sq(6) * q(1, 2));
        assert_eq!(FieldElem::sqrt_rational(&rat(1, 6)).unwrap(), sq(6) * q(1, 6));
        assert_eq!(FieldElem::sqrt_rational(&rat(15, 8)).unwrap(), sq(30) * q(1, 4));
        assert_eq!(FieldElem::sqrt_rational(&rat(-3, 8)).unwrap(), FieldElem::i() * sq(6) * q(1, 4));
        assert!(FieldElem::sqrt_rational(&rat(7, 1)).is_err());
    }

    #[test]
    fn canonical_text() {
        let x = q(1, 2) + FieldElem::i() * q(-3, 4) * sq(2) + sq(30);
        let s = x.to_canonical();
        assert_eq!(s, "(1/2 + 0/1*i)*sqrt(1) + (0/1 + -3/4*i)*sqrt(2) + (1/1 + 0/1*i)*sqrt(30)");
        assert_eq!(FieldElem::parse_canonical(&s).unwrap(), x);
        assert_eq!(FieldElem::parse_canonical(&s).unwrap().to_canonical(), s);
        let z = FieldElem::zero().to_canonical();
        assert_eq!(FieldElem::parse_canonical(&z).unwrap(), FieldElem::zero());
        assert!(FieldElem::parse_canonical("(1/1 + 0/1*i)*sqrt(7)").is_err());
        assert!(FieldElem::parse_canonical("1").is_err());
    }

    #[test]
    fn pretty_text() {
        assert_eq!(sq(6).pretty(), "√6");
        assert_eq!((FieldElem::from_int(-2) * FieldElem::i() * sq(3)).pretty(), "-2*i*√3");
        let x = q(1, 2) - q(3, 2) * sq(2);
        assert_eq!(x.pretty(), "1/2 - 3/2*√2");
        for e in [sq(6), x, FieldElem::i(), FieldElem::zero(), q(-7, 3) * FieldElem::i() * sq(15) + FieldElem::one()] {
            assert_eq!(FieldElem::parse_pretty(&e.pretty()).unwrap(), e);
        }
    }

    fn elem() -> impl Strategy<Value = FieldElem> {
        proptest::collection::vec((0usize..8, -6i64..7, 1i64..5, -6i64..7), 0..4).prop_map(|ts| {
            ts.into_iter()
                .map(|(r, a, d, b)| {
                    FieldElem::from_gaussian(GaussianRational::new(rat(a, d), rat(b, d)))
                        * FieldElem::sqrt_radicand(RADICANDS[r]).unwrap()
                })
                .sum()
        })
    }

    fn real_elem() -> impl Strategy<Value = FieldElem> {
        elem().prop_map(|x| x.real_part())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in elem(), b in elem(), c in elem()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!((&a + &b) - &b, a.clone());
        }

        #[test]
        fn inverse_involution(a in elem()) {
            prop_assume!(!a.is_zero());
            let inv = a.inverse().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!(inv.inverse().unwrap(), a);
        }

        #[test]
        fn sign_multiplicative(a in real_elem(), b in real_elem()) {
            prop_assert_eq!(a.sign().unwrap() * b.sign().unwrap(), (&a * &b).sign().unwrap());
        }

        #[test]
        fn sign_agrees_with_float(a in real_elem()) {
            let f = a.to_f64();
            let s = a.sign().unwrap();
            if f.abs() > 1e-9 {
                prop_assert_eq!(s.as_i32(), if f > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn conjugation_is_a_homomorphism(a in elem(), b in elem()) {
            prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
            prop_assert_eq!(a.real_part().conj(), a.real_part());
        }

        #[test]
        fn canonical_round_trip(a in elem()) {
            let s = a.to_canonical();
            let b = FieldElem::parse_canonical(&s).unwrap();
            prop_assert_eq!(b.to_canonical(), s);
            prop_assert_eq!(FieldElem::parse_pretty(&a.pretty()).unwrap(), a);
        }
    }
}
