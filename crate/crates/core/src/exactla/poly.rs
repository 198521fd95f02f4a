//! Univariate polynomials in λ over the field and over ℚ.

use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use super::LaError;
use crate::numfield::{int, FieldElem, Rational};

/// Dense polynomial over [`FieldElem`], coefficients by ascending power.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FPoly {
    c: Vec<FieldElem>,
}

impl FPoly {
    pub fn new(mut c: Vec<FieldElem>) -> Self {
        while c.last().is_some_and(FieldElem::is_zero) {
            c.pop();
        }
        FPoly { c }
    }

    pub fn constant(a: FieldElem) -> Self {
        Self::new(vec![a])
    }

    pub fn x() -> Self {
        Self::new(vec![FieldElem::zero(), FieldElem::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn add(&self, o: &FPoly) -> FPoly {
        let n = self.c.len().max(o.c.len());
        let z = FieldElem::zero();
        Self::new((0..n).map(|k| self.c.get(k).unwrap_or(&z) + o.c.get(k).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &FPoly) -> FPoly {
        let n = self.c.len().max(o.c.len());
        let z = FieldElem::zero();
        Self::new((0..n).map(|k| self.c.get(k).unwrap_or(&z) - o.c.get(k).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &FPoly) -> FPoly {
        if self.is_zero() || o.is_zero() {
            return FPoly::default();
        }
        let mut out = vec![FieldElem::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self::new(out)
    }

    /// Division by a monic polynomial.
    pub fn divrem_monic(&self, d: &FPoly) -> (FPoly, FPoly) {
        let dn = d.c.len() - 1;
        assert!(d.c[dn].is_one(), "divisor must be monic");
        if self.c.len() <= dn {
            return (FPoly::default(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![FieldElem::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let t = r[k + dn].clone();
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &(&t * dj);
                }
            }
            q[k] = t;
        }
        r.truncate(dn);
        (Self::new(q), Self::new(r))
    }
}

/// Dense polynomial over ℚ, coefficients by ascending power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<Rational>,
}

/// An isolating interval `[lo, hi]` of a real root; `lo == hi` for exact roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn exact(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        QPoly { c }
    }

    /// `λ − r`.
    pub fn linear(r: &Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.c.last().expect("nonzero polynomial")
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        let z = Rational::zero();
        Self::new((0..n).map(|k| self.c.get(k).unwrap_or(&z) + o.c.get(k).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&int(-1)))
    }

    pub fn scale(&self, q: &Rational) -> QPoly {
        Self::new(self.c.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::default();
        }
        let mut out = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dn = d.c.len() - 1;
        if self.c.len() <= dn {
            return (QPoly::default(), self.clone());
        }
        let inv = d.lead().recip();
        let mut r = self.c.clone();
        let mut q = vec![Rational::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let t = &r[k + dn] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &t * dj;
                }
            }
            q[k] = t;
        }
        r.truncate(dn);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            let r = a.divrem(&b).1.monic();
            a = b;
            b = r;
        }
        a
    }

    pub fn derivative(&self) -> QPoly {
        Self::new(self.c.iter().enumerate().skip(1).map(|(k, x)| x * int(k as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Number of times `λ − r` divides the polynomial.
    pub fn root_multiplicity(&self, r: &Rational) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval(r).is_zero() {
            // synthetic division by (λ − r)
            let n = p.c.len();
            let mut q = vec![Rational::zero(); n - 1];
            let mut acc = Rational::zero();
            for k in (1..n).rev() {
                acc = &acc * r + &p.c[k];
                q[k - 1] = acc.clone();
            }
            p = QPoly::new(q);
            m += 1;
        }
        m
    }

    /// Yun's square-free decomposition: monic `(gᵢ, i)` with `p = lc·Π gᵢ^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let nb = b.divrem(&a).0;
            let nc = d.divrem(&a).0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            d = nc.sub(&nb.derivative());
            b = nb;
            i += 1;
        }
        out
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            // keep only the sign of the negated remainder
            let s = r.lead().abs().recip();
            seq.push(r.scale(&-s));
        }
        seq
    }

    fn sign_changes(seq: &[QPoly], x: &Rational) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Isolating intervals of width below `eps` for every real root of a
    /// square-free polynomial, ascending.
    pub fn real_roots(&self, eps: &Rational) -> Vec<RootInterval> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        if deg == 1 {
            let r = -&self.c[0] / &self.c[1];
            return vec![RootInterval { lo: r.clone(), hi: r }];
        }
        let seq = self.sturm_sequence();
        let count = |a: &Rational, b: &Rational| Self::sign_changes(&seq, a) - Self::sign_changes(&seq, b);
        let lead = self.lead().abs();
        let bound = self.c.iter().map(|x| x.abs() / &lead).fold(Rational::zero(), |m, x| if x > m { x } else { m })
            + Rational::one();
        // half-open intervals (lo, hi]
        let mut stack = vec![(-bound.clone(), bound)];
        let mut out = Vec::new();
        while let Some((lo, hi)) = stack.pop() {
            let n = count(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n > 1 {
                let mid = (&lo + &hi) / int(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
                continue;
            }
            let (mut lo, mut hi) = (lo, hi);
            let root = loop {
                if self.eval(&hi).is_zero() {
                    break RootInterval { lo: hi.clone(), hi };
                }
                if &hi - &lo < *eps {
                    break RootInterval { lo, hi };
                }
                let mid = (&lo + &hi) / int(2);
                if count(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            };
            out.push(root);
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// Text form such as `lambda^2 - 166*lambda + 6720`.
    pub fn to_pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag_s = if mag.denom().is_one() { mag.numer().to_string() } else { format!("{}/{}", mag.numer(), mag.denom()) };
            let var = match k {
                0 => String::new(),
                1 => "lambda".into(),
                _ => format!("lambda^{k}"),
            };
            match (mag.is_one(), k) {
                (_, 0) => out.push_str(&mag_s),
                (true, _) => out.push_str(&var),
                (false, _) => out.push_str(&format!("{mag_s}*{var}")),
            }
        }
        out
    }

    /// Parse the [`to_pretty`](Self::to_pretty) form.
    pub fn parse(s: &str) -> Result<QPoly, LaError> {
        let err = || LaError::Parse(s.to_string());
        let s = s.trim();
        let mut acc = QPoly::default();
        let mut rest = s;
        let mut neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            neg = true;
            rest = r.trim_start();
        }
        loop {
            let next = [" + ", " - "].iter().filter_map(|sep| rest.find(sep).map(|p| (p, *sep))).min();
            let (atom, tail) = match next {
                Some((p, sep)) => (&rest[..p], Some((&rest[p + 3..], sep == " - "))),
                None => (rest, None),
            };
            let (coef, var) = match atom.split_once('*') {
                Some((c, v)) => (parse_rational(c).ok_or_else(err)?, Some(v)),
                None if atom.starts_with("lambda") => (Rational::one(), Some(atom)),
                None => (parse_rational(atom).ok_or_else(err)?, None),
            };
            let k = match var {
                None => 0,
                Some("lambda") => 1,
                Some(v) => v.strip_prefix("lambda^").and_then(|e| e.parse().ok()).ok_or_else(err)?,
            };
            let term = QPoly::monomial(k).scale(&if neg { -coef } else { coef });
            acc = acc.add(&term);
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

    /// Parse a product such as `lambda^8*(lambda^2 - 3)^8*(lambda + 1)`.
    pub fn parse_factors(s: &str) -> Result<Vec<(QPoly, usize)>, LaError> {
        let err = || LaError::Parse(s.to_string());
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (body, after) = if let Some(r) = rest.strip_prefix('(') {
                let close = r.find(')').ok_or_else(err)?;
                (&r[..close], &r[close + 1..])
            } else {
                let end = rest.find('*').unwrap_or(rest.len());
                let (b, a) = rest.split_at(end);
                match b.split_once('^') {
                    Some(("lambda", e)) => {
                        out.push((QPoly::monomial(1), e.parse().map_err(|_| err())?));
                        rest = a.strip_prefix('*').unwrap_or(a);
                        continue;
                    }
                    _ => (b, a),
                }
            };
            let p = QPoly::parse(body)?;
            let (mult, after) = match after.strip_prefix('^') {
                Some(a) => {
                    let end = a.find('*').unwrap_or(a.len());
                    (a[..end].parse().map_err(|_| err())?, &a[end..])
                }
                None => (1, after),
            };
            out.push((p, mult));
            rest = after.strip_prefix('*').unwrap_or(after);
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pretty())
    }
}

/// Monic characteristic polynomial `det(λI − M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<FieldElem>,
}

impl CharPoly {
    pub fn new(coeffs: Vec<FieldElem>) -> Self {
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_real)
    }

    pub fn to_rational(&self) -> Option<QPoly> {
        self.coeffs.iter().map(FieldElem::to_rational).collect::<Option<Vec<_>>>().map(QPoly::new)
    }

    /// `lambda^n + [c]*lambda^k + …` with canonical coefficient text.
    pub fn to_text(&self) -> String {
        let n = self.degree();
        let mut parts = vec![format!("lambda^{n}")];
        for k in (0..n).rev() {
            let c = &self.coeffs[k];
            if !c.is_zero() {
                parts.push(format!("[{}]*lambda^{k}", c.to_canonical()));
            }
        }
        parts.join(" + ")
    }

    pub fn parse_text(s: &str) -> Result<CharPoly, LaError> {
        let err = || LaError::Parse(s.to_string());
        // split on " + " outside brackets
        let mut items = Vec::new();
        let (mut depth, mut start) = (0i32, 0usize);
        for (i, ch) in s.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
            if depth == 0 && s[i..].starts_with(" + ") {
                items.push(&s[start..i]);
                start = i + 3;
            }
        }
        items.push(&s[start..]);
        let n: usize = items[0].strip_prefix("lambda^").and_then(|e| e.parse().ok()).ok_or_else(err)?;
        let mut coeffs = vec![FieldElem::zero(); n + 1];
        coeffs[n] = FieldElem::one();
        for item in &items[1..] {
            let body = item.strip_prefix('[').ok_or_else(err)?;
            let (c, k) = body.rsplit_once("]*lambda^").ok_or_else(err)?;
            let k: usize = k.parse().map_err(|_| err())?;
            if k >= n {
                return Err(err());
            }
            coeffs[k] = FieldElem::parse_canonical(c).map_err(|_| err())?;
        }
        Ok(CharPoly::new(coeffs))
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(q) => f.write_str(&q.to_pretty()),
            None => f.write_str(&self.to_text()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::rat;

    #[test]
    fn qpoly_text() {
        let p = QPoly::from_ints(&[6720, -166, 1]);
        assert_eq!(p.to_pretty(), "lambda^2 - 166*lambda + 6720");
        assert_eq!(QPoly::parse(&p.to_pretty()).unwrap(), p);
        let q = QPoly::new(vec![rat(-1, 2), int(0), int(-3)]);
        assert_eq!(QPoly::parse(&q.to_pretty()).unwrap(), q);
        let fs = QPoly::parse_factors("lambda^8*(lambda^2 - 3)^8*(lambda + 1)").unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], (QPoly::monomial(1), 8));
        assert_eq!(fs[2], (QPoly::from_ints(&[1, 1]), 1));
    }

    #[test]
    fn charpoly_text_round_trip() {
        let c = CharPoly::new(vec![FieldElem::sqrt_radicand(2).unwrap(), FieldElem::zero(), FieldElem::i(), FieldElem::one()]);
        let s = c.to_text();
        assert_eq!(CharPoly::parse_text(&s).unwrap(), c);
        let d = CharPoly::new(vec![FieldElem::one()]);
        assert_eq!(CharPoly::parse_text(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn squarefree_and_roots() {
        // (λ−1)²(λ+2)³(λ²−2)
        let p = QPoly::from_ints(&[-1, 1])
            .pow(2)
            .mul(&QPoly::from_ints(&[2, 1]).pow(3))
            .mul(&QPoly::from_ints(&[-2, 0, 1]));
        let sf = p.squarefree_decomposition();
        assert_eq!(sf.len(), 3);
        assert_eq!(sf[0], (QPoly::from_ints(&[-2, 0, 1]), 1));
        assert_eq!(sf[1], (QPoly::from_ints(&[-1, 1]), 2));
        assert_eq!(sf[2], (QPoly::from_ints(&[2, 1]), 3));
        let roots = sf[0].0.real_roots(&rat(1, 1 << 30));
        assert_eq!(roots.len(), 2);
        assert!((roots[1].midpoint() - 2f64.sqrt()).abs() < 1e-8);
        let r = sf[2].0.real_roots(&rat(1, 1000));
        assert_eq!(r[0].exact(), Some(&int(-2)));
        assert_eq!(p.root_multiplicity(&int(-2)), 3);
    }
}
