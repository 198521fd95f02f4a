//! Polynomials in four commuting generators over [`FieldElem`].
//!
//! Two rings share the implementation: the sphere ring in `z, z̄, w, w̄`
//! and the Euclidean ring in `x1, y1, x2, y2`. The ring is a type parameter,
//! so mixing them is a compile error; text parsing reports a wrong ring.
//!
//! On the sphere ring the right-invariant derivations act on generators by
//!
//! | | z | z̄ | w | w̄ |
//! |---|---|---|---|---|
//! | ∂₁ | iz | −iz̄ | iw | −iw̄ |
//! | ∂₂ | −w̄ | −w | z̄ | z |
//! | ∂₃ | −iw̄ | iw | iz̄ | −iz |
//!
//! and extend by the Leibniz rule. No reduction modulo `zz̄ + ww̄ = 1` is done.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::numfield::{int, FieldElem, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("generator {found:?} does not belong to the {ring} ring")]
    WrongRing { ring: &'static str, found: String },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("tau must be positive")]
    NonPositiveTau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    Sphere,
    Euclidean4,
}

pub trait Ring: Copy + Clone + fmt::Debug + PartialEq + Eq + Hash + Default + Send + Sync + 'static {
    const TAG: RingTag;
    const NAME: &'static str;
    const GENERATORS: [&'static str; 4];
}

/// Generators `z, z̄, w, w̄` (text names `z, zb, w, wb`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Sphere;

/// Generators `x1, y1, x2, y2` of ℝ⁴.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Euclidean4;

impl Ring for Sphere {
    const TAG: RingTag = RingTag::Sphere;
    const NAME: &'static str = "sphere";
    const GENERATORS: [&'static str; 4] = ["z", "zb", "w", "wb"];
}

impl Ring for Euclidean4 {
    const TAG: RingTag = RingTag::Euclidean4;
    const NAME: &'static str = "euclidean4";
    const GENERATORS: [&'static str; 4] = ["x1", "y1", "x2", "y2"];
}

/// Exponent vector `(a, b, c, d)`, ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `a − b + c − d`, the ∂₁-weight on the sphere ring.
    pub fn weight(&self) -> i64 {
        let [a, b, c, d] = self.0.map(i64::from);
        a - b + c - d
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    /// All monomials of total degree `k`, ascending.
    pub fn of_degree(k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=k {
            for b in 0..=k - a {
                for c in 0..=k - a - b {
                    out.push(Monomial([a, b, c, k - a - b - c]));
                }
            }
        }
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R: Ring> {
    terms: BTreeMap<Monomial, FieldElem>,
    ring: PhantomData<R>,
}

pub type SpherePoly = Poly<Sphere>;
pub type EuclidPoly = Poly<Euclidean4>;

impl<R: Ring> Default for Poly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Ring> Poly<R> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new(), ring: PhantomData }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }

    pub fn term(m: Monomial, c: FieldElem) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The `k`-th generator.
    pub fn var(k: usize) -> Self {
        let mut e = [0; 4];
        e[k] = 1;
        Self::term(Monomial(e), FieldElem::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(), ring: PhantomData }
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        self.scale(&FieldElem::from_rational(q.clone()))
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Partial derivative in the `k`-th generator.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut n = *m;
            n.0[k] -= 1;
            out.add_term(n, &c.scale(&int(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[FieldElem; 4]) -> FieldElem {
        let mut pows: Vec<Vec<FieldElem>> = Vec::with_capacity(4);
        let maxdeg = self.terms.keys().map(|m| *m.0.iter().max().unwrap()).max().unwrap_or(0);
        for x in point {
            let mut v = vec![FieldElem::one()];
            for k in 1..=maxdeg as usize {
                let next = &v[k - 1] * x;
                v.push(next);
            }
            pows.push(v);
        }
        let mut acc = FieldElem::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..4 {
                if m.0[k] > 0 {
                    t = t * &pows[k][m.0[k] as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitute each generator by a polynomial in a possibly different ring.
    pub fn compose<S: Ring>(&self, images: &[Poly<S>; 4]) -> Poly<S> {
        let mut out = Poly::<S>::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::<S>::constant(c.clone());
            for k in 0..4 {
                if m.0[k] > 0 {
                    t = &t * &images[k].pow(m.0[k]);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Parse the text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for term in split_top_level(s, " + ") {
            let err = || PolyError::Parse(term.to_string());
            let rest = term.strip_prefix('(').ok_or_else(err)?;
            let close = matching_paren(rest).ok_or_else(err)?;
            let coeff = FieldElem::parse_pretty(&rest[..close]).map_err(|_| err())?;
            let mut exps = [0u32; 4];
            let factors = &rest[close + 1..];
            for f in factors.split('*').filter(|f| !f.is_empty()) {
                let (name, e) = f.split_once('^').ok_or_else(err)?;
                let k = R::GENERATORS.iter().position(|g| *g == name).ok_or_else(|| {
                    PolyError::WrongRing { ring: R::NAME, found: name.to_string() }
                })?;
                exps[k] = e.parse().map_err(|_| err())?;
            }
            out.add_term(Monomial(exps), &coeff);
        }
        Ok(out)
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_top_level<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < s.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(sep) {
            out.push(&s[start..i]);
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}

impl<R: Ring> fmt::Display for Poly<R> {
    /// Terms in descending monomial order, e.g. `(√6)*z^1*zb^0*w^0*wb^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = (0..4).map(|k| format!("{}^{}", R::GENERATORS[k], m.0[k])).collect();
                format!("({})*{}", c.pretty(), vars.join("*"))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly<{}>[{}]", R::NAME, self)
    }
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, o: &'a Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, o: &'a Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, o: &'a Poly<R>) -> Poly<R> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(), ring: PhantomData }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl<R: Ring> $tr<Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, o: Poly<R>) -> Poly<R> {
                (&self).$method(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// One of the derivations ∂₁, ∂₂, ∂₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Der {
    D1,
    D2,
    D3,
}

impl Der {
    pub const ALL: [Der; 3] = [Der::D1, Der::D2, Der::D3];

    pub fn index(self) -> usize {
        match self {
            Der::D1 => 1,
            Der::D2 => 2,
            Der::D3 => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Der> {
        Der::ALL.get(i.wrapping_sub(1)).copied()
    }

    /// `(coefficient, target generator)` for each generator z, z̄, w, w̄.
    pub fn table(self) -> [(FieldElem, usize); 4] {
        let one = FieldElem::one();
        let i = FieldElem::i();
        match self {
            Der::D1 => [(i.clone(), 0), (-&i, 1), (i.clone(), 2), (-&i, 3)],
            Der::D2 => [(-&one, 3), (-&one, 2), (one.clone(), 1), (one, 0)],
            Der::D3 => [(-&i, 3), (i.clone(), 2), (i.clone(), 1), (-&i, 0)],
        }
    }

    /// The generator images as polynomials.
    pub fn images(self) -> [SpherePoly; 4] {
        self.table().map(|(c, t)| SpherePoly::var(t).scale(&c))
    }
}

pub fn apply_derivation(d: Der, f: &SpherePoly) -> SpherePoly {
    let table = d.table();
    let mut out = SpherePoly::zero();
    for (m, c) in &f.terms {
        for (g, (coef, target)) in table.iter().enumerate() {
            let e = m.0[g];
            if e == 0 {
                continue;
            }
            let mut n = *m;
            n.0[g] -= 1;
            n.0[*target] += 1;
            out.add_term(n, &(c * coef).scale(&int(e as i64)));
        }
    }
    out
}

/// `[∂ᵢ,∂ⱼ]f − (−2 ε_ijk ∂ₖ f)`; zero whenever the bracket relations hold.
pub fn commutator_check(i: Der, j: Der, f: &SpherePoly) -> SpherePoly {
    let lhs = &apply_derivation(i, &apply_derivation(j, f)) - &apply_derivation(j, &apply_derivation(i, f));
    let expected = match (i.index(), j.index()) {
        (a, b) if a == b => SpherePoly::zero(),
        (a, b) => {
            let k = 6 - a - b;
            let eps: i64 = if (a, b) == (1, 2) || (a, b) == (2, 3) || (a, b) == (3, 1) { 1 } else { -1 };
            apply_derivation(Der::from_index(k).unwrap(), f).scale(&FieldElem::from_int(-2 * eps))
        }
    };
    &lhs - &expected
}

/// `∂₁² + ∂₂² + ∂₃²`.
pub fn laplacian_round(f: &SpherePoly) -> SpherePoly {
    Der::ALL.iter().fold(SpherePoly::zero(), |acc, d| &acc + &apply_derivation(*d, &apply_derivation(*d, f)))
}

/// `(1/τ)∂₁² + ∂₂² + ∂₃²`.
pub fn laplacian_berger(f: &SpherePoly, tau: &Rational) -> Result<SpherePoly, PolyError> {
    if *tau <= Rational::zero() {
        return Err(PolyError::NonPositiveTau);
    }
    let d11 = apply_derivation(Der::D1, &apply_derivation(Der::D1, f)).scale_q(&tau.recip());
    let d22 = apply_derivation(Der::D2, &apply_derivation(Der::D2, f));
    let d33 = apply_derivation(Der::D3, &apply_derivation(Der::D3, f));
    Ok(&(&d11 + &d22) + &d33)
}

/// The flat Laplacian of ℂ² in Wirtinger form, `4(∂_z∂_z̄ + ∂_w∂_w̄)`.
pub fn laplacian_c2(f: &SpherePoly) -> SpherePoly {
    let mut out = SpherePoly::zero();
    for (m, c) in &f.terms {
        let [a, b, cc, d] = m.0;
        if a > 0 && b > 0 {
            out.add_term(Monomial([a - 1, b - 1, cc, d]), &c.scale(&int(4 * (a * b) as i64)));
        }
        if cc > 0 && d > 0 {
            out.add_term(Monomial([a, b, cc - 1, d - 1]), &c.scale(&int(4 * (cc * d) as i64)));
        }
    }
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Average of `z^a z̄^b w^c w̄^d` over S³: `a!c!/(a+c+1)!` if `a=b, c=d`, else 0.
pub fn sphere_integral(m: &Monomial) -> Rational {
    let [a, b, c, d] = m.0;
    if a != b || c != d {
        return Rational::zero();
    }
    Rational::new(factorial(a) * factorial(c), factorial(a + c + 1))
}

impl SpherePoly {
    /// `f̄`: conjugate coefficients and swap z ↔ z̄, w ↔ w̄.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (Monomial([m.0[1], m.0[0], m.0[3], m.0[2]]), c.conj())))
    }

    pub fn integrate(&self) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (m, c) in &self.terms {
            let q = sphere_integral(m);
            if !q.is_zero() {
                acc += &c.scale(&q);
            }
        }
        acc
    }

    /// `⟨f, g⟩ = ⨍ f·ḡ` over the round S³.
    pub fn inner(&self, g: &SpherePoly) -> FieldElem {
        (self * &g.conj()).integrate()
    }

    /// `zz̄ + ww̄`.
    pub fn sphere_relation() -> Self {
        &(&Self::var(0) * &Self::var(1)) + &(&Self::var(2) * &Self::var(3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::rat;
    use proptest::prelude::*;

    fn z() -> SpherePoly {
        SpherePoly::var(0)
    }
    fn zb() -> SpherePoly {
        SpherePoly::var(1)
    }
    fn w() -> SpherePoly {
        SpherePoly::var(2)
    }
    fn wb() -> SpherePoly {
        SpherePoly::var(3)
    }
    fn c(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn generator_table() {
        assert_eq!(apply_derivation(Der::D2, &z()), -&wb());
        assert_eq!(apply_derivation(Der::D1, &z()), z().scale(&FieldElem::i()));
        assert!(apply_derivation(Der::D1, &SpherePoly::one()).is_zero());
        // ∂₃(zw) = (−iw̄)w + z(iz̄) = i(zz̄ − ww̄)
        let expected = (&(&z() * &zb()) - &(&w() * &wb())).scale(&FieldElem::i());
        assert_eq!(apply_derivation(Der::D3, &(&z() * &w())), expected);
    }

    #[test]
    fn derivations_kill_sphere_relation() {
        for d in Der::ALL {
            assert!(apply_derivation(d, &SpherePoly::sphere_relation()).is_zero());
        }
    }

    #[test]
    fn brackets_on_low_degree_monomials() {
        for k in 0..=4 {
            for m in Monomial::of_degree(k) {
                let f = SpherePoly::term(m, FieldElem::one());
                for (i, j) in [(Der::D2, Der::D3), (Der::D1, Der::D3), (Der::D1, Der::D2)] {
                    assert!(commutator_check(i, j, &f).is_zero(), "{i:?} {j:?} on {f}");
                }
            }
        }
        let f = &(&z() * &z()) * &wb();
        assert!(commutator_check(Der::D1, Der::D3, &f).is_zero());
    }

    #[test]
    fn laplacian_values() {
        assert_eq!(laplacian_round(&z()), z().scale(&c(-3)));
        assert!(laplacian_round(&SpherePoly::one()).is_zero());
        let h = &(&z() * &zb()) - &(&w() * &wb());
        assert_eq!(laplacian_round(&h), h.scale(&c(-8)));
        let sixth = rat(1, 6);
        assert_eq!(laplacian_berger(&z(), &sixth).unwrap(), z().scale(&c(-8)));
        assert_eq!(laplacian_berger(&(&z() * &z()), &sixth).unwrap(), (&z() * &z()).scale(&c(-28)));
        assert!(laplacian_berger(&SpherePoly::one(), &rat(3, 1)).unwrap().is_zero());
        assert_eq!(laplacian_berger(&z(), &rat(0, 1)), Err(PolyError::NonPositiveTau));
        assert_eq!(laplacian_berger(&z(), &rat(1, 1)).unwrap(), laplacian_round(&z()));
    }

    #[test]
    fn flat_laplacian() {
        assert!(laplacian_c2(&(&z() * &z())).is_zero());
        assert_eq!(laplacian_c2(&(&z() * &zb())), SpherePoly::constant(c(4)));
        assert!(laplacian_c2(&(&(&z() * &zb()) - &(&w() * &wb()))).is_zero());
    }

    #[test]
    fn integrals() {
        assert_eq!(sphere_integral(&Monomial::ONE), rat(1, 1));
        assert_eq!(sphere_integral(&Monomial([1, 1, 0, 0])), rat(1, 2));
        assert_eq!(sphere_integral(&Monomial([1, 1, 1, 1])), rat(1, 6));
        assert_eq!(sphere_integral(&Monomial([1, 0, 0, 1])), rat(0, 1));
        // ⨍ (|z|² + |w|²)² = 1 on the unit sphere
        let r = SpherePoly::sphere_relation();
        assert!((&r * &r).integrate().is_one());
    }

    #[test]
    fn text_round_trip() {
        let f = wb().scale(&FieldElem::sqrt_radicand(6).unwrap());
        let f = &(&z() * &f) + &SpherePoly::constant(FieldElem::from_rational(rat(-1, 2)));
        let s = f.to_string();
        assert_eq!(s, "(√6)*z^1*zb^0*w^0*wb^1 + (-1/2)*z^0*zb^0*w^0*wb^0");
        assert_eq!(SpherePoly::parse(&s).unwrap(), f);
        assert!(matches!(EuclidPoly::parse(&s), Err(PolyError::WrongRing { .. })));
        let g = EuclidPoly::var(1).scale(&(FieldElem::one() + FieldElem::i()));
        assert_eq!(EuclidPoly::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn ordering_is_graded() {
        let ms = Monomial::of_degree(2);
        assert_eq!(ms.len(), 10);
        assert!(Monomial([0, 0, 0, 1]) < Monomial([0, 0, 0, 2]));
        assert!(Monomial([0, 0, 0, 2]) < Monomial([2, 0, 0, 0]));
    }

    fn sphere_poly() -> impl Strategy<Value = SpherePoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -5i64..6, -5i64..6), 0..6).prop_map(|ts| {
            SpherePoly::from_terms(ts.into_iter().map(|((a, b, cc, d), re, im)| {
                let coef = FieldElem::from_int(re) + FieldElem::i() * FieldElem::from_int(im);
                (Monomial([a, b, cc, d]), coef)
            }))
        })
    }

    proptest! {
        #[test]
        fn brackets_on_random(f in sphere_poly()) {
            for (i, j) in [(Der::D2, Der::D3), (Der::D1, Der::D3), (Der::D1, Der::D2)] {
                prop_assert!(commutator_check(i, j, &f).is_zero());
            }
        }

        #[test]
        fn derivations_commute_with_conjugation(f in sphere_poly()) {
            for d in Der::ALL {
                prop_assert_eq!(apply_derivation(d, &f.conj()), apply_derivation(d, &f).conj());
            }
        }

        #[test]
        fn laplacian_commutes_with_derivations(f in sphere_poly()) {
            for d in Der::ALL {
                prop_assert_eq!(laplacian_round(&apply_derivation(d, &f)), apply_derivation(d, &laplacian_round(&f)));
            }
        }

        #[test]
        fn leibniz(f in sphere_poly(), g in sphere_poly()) {
            for d in Der::ALL {
                let lhs = apply_derivation(d, &(&f * &g));
                let rhs = &(&apply_derivation(d, &f) * &g) + &(&f * &apply_derivation(d, &g));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
