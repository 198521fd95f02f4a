//! Indicial roots `λ± = −2 ± √(4+λ)` of the cone modes, the graph decay
//! dictionary `|Z(x)| ~ |x|^{1+λ±}`, and an RK4 demonstration on the mode
//! equation `ξ'' + 4ξ' − λξ = 0`.

use std::fmt;

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactla::QPoly;
use crate::harmonic::Provenance;
use crate::jacobiop::{self, JacobiError};
use crate::numfield::{int, rat, Rational};

#[derive(Debug, Error)]
pub enum DecayError {
    #[error("negative radicand 4 + lambda = {0}")]
    NegativeRadicand(String),
    #[error("solution vanishes on the fitting window at t = {0}")]
    Vanishing(f64),
    #[error("horizon must be positive, got {0}")]
    Horizon(f64),
    #[error("characteristic polynomial is not rational")]
    NonRational,
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// An exact real eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigen {
    Rational(Rational),
    /// `a + b√d`, `d` not a rational square.
    Surd { a: Rational, b: Rational, d: Rational },
    /// Root of an irreducible factor of degree ≥ 3.
    Numeric { approx: f64, minimal: String },
}

impl Eigen {
    pub fn approx(&self) -> f64 {
        match self {
            Eigen::Rational(q) => to_f64(q),
            Eigen::Surd { a, b, d } => to_f64(a) + to_f64(b) * to_f64(d).sqrt(),
            Eigen::Numeric { approx, .. } => *approx,
        }
    }

    /// `c·self + s`.
    pub fn affine(&self, c: &Rational, s: &Rational) -> Eigen {
        match self {
            Eigen::Rational(q) => Eigen::Rational(c * q + s),
            Eigen::Surd { a, b, d } => Eigen::Surd { a: c * a + s, b: c * b, d: d.clone() },
            Eigen::Numeric { approx, minimal } => {
                Eigen::Numeric { approx: to_f64(c) * approx + to_f64(s), minimal: format!("{c}*({minimal}) + {s}") }
            }
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Eigen::Rational(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Eigen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigen::Rational(q) => write!(f, "{q}"),
            Eigen::Surd { a, b, d } => {
                let sign = if b.is_negative() { "-" } else { "+" };
                let babs = b.abs();
                if babs == int(1) {
                    write!(f, "{a} {sign} sqrt({d})")
                } else {
                    write!(f, "{a} {sign} {babs}*sqrt({d})")
                }
            }
            Eigen::Numeric { minimal, .. } => write!(f, "{minimal}"),
        }
    }
}

/// One distinct eigenvalue with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEntry {
    pub value: Eigen,
    pub multiplicity: usize,
}

/// A rational root `p/q` near `x`, with `q` dividing the leading coefficient
/// of the integer-normalised polynomial.
fn rational_root_near(p: &QPoly, x: f64) -> Option<Rational> {
    let lcm = p.coeffs().iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let lead = (p.coeffs().last()? * Rational::from_integer(lcm)).to_integer().abs();
    let lead = lead.to_u64()?;
    (1..=lead.min(1 << 16)).filter(|q| lead % q == 0).find_map(|q| {
        let cand = Rational::new(BigInt::from((x * q as f64).round() as i64), BigInt::from(q));
        p.eval(&cand).is_zero().then_some(cand)
    })
}

/// Distinct real roots of a rational polynomial with multiplicity, ascending.
/// Quadratic leftovers are solved in radicals.
pub fn spectrum_of(p: &QPoly) -> Vec<SpectralEntry> {
    let eps = rat(1, 1 << 40);
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        let mut rest = factor.clone();
        let mut numeric = Vec::new();
        for r in factor.real_roots(&eps) {
            match r.exact().cloned().or_else(|| rational_root_near(&factor, r.midpoint())) {
                Some(x) => {
                    out.push(SpectralEntry { value: Eigen::Rational(x.clone()), multiplicity: mult });
                    rest = rest.divrem(&QPoly::linear(&x)).0;
                }
                None => numeric.push(r.midpoint()),
            }
        }
        if numeric.is_empty() {
            continue;
        }
        if rest.degree() == Some(2) {
            let m = rest.monic();
            let (c0, c1) = (&m.coeffs()[0], &m.coeffs()[1]);
            let a = -c1 / int(2);
            let d = &a * &a - c0;
            for b in [int(-1), int(1)] {
                out.push(SpectralEntry { value: Eigen::Surd { a: a.clone(), b, d: d.clone() }, multiplicity: mult });
            }
        } else {
            for x in numeric {
                out.push(SpectralEntry { value: Eigen::Numeric { approx: x, minimal: format!("root of {rest} near {x:.12}") }, multiplicity: mult });
            }
        }
    }
    out.sort_by(|a, b| a.value.approx().total_cmp(&b.value.approx()));
    out
}

/// Union of several spectra, equal values merged.
pub fn merge_spectra(parts: &[Vec<SpectralEntry>]) -> Vec<SpectralEntry> {
    let mut out: Vec<SpectralEntry> = Vec::new();
    for e in parts.iter().flatten() {
        match out.iter_mut().find(|o| o.value == e.value) {
            Some(o) => o.multiplicity += e.multiplicity,
            None => out.push(e.clone()),
        }
    }
    out.sort_by(|a, b| a.value.approx().total_cmp(&b.value.approx()));
    out
}

/// Exact spectra of `L_0 … L_max_k`, computed from the assembled matrices.
pub fn operator_spectra(max_k: u32) -> Result<Vec<Vec<SpectralEntry>>, DecayError> {
    (0..=max_k)
        .map(|k| {
            let m = jacobiop::operator_matrix(k, Provenance::Generated)?;
            let p = m.charpoly().map_err(JacobiError::from)?.to_rational().ok_or(DecayError::NonRational)?;
            Ok(spectrum_of(&p))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rational),
    /// `−2 ± √(radicand)` with a float value.
    Symbolic { text: String, approx: f64 },
}

impl Root {
    pub fn approx(&self) -> f64 {
        match self {
            Root::Exact(q) => to_f64(q),
            Root::Symbolic { approx, .. } => *approx,
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Exact(q) => write!(f, "{q}"),
            Root::Symbolic { text, .. } => write!(f, "{text}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicialRoot {
    /// Eigenvalue of `L`.
    pub mu: Eigen,
    pub multiplicity: usize,
    /// Jacobi eigenvalue `λ = (3/8)μ`.
    pub jacobi: Eigen,
    pub radicand: Eigen,
    pub plus: Root,
    pub minus: Root,
}

impl IndicialRoot {
    /// Roots of `r² + 4r − λ`: sum `−4`, product `−λ`.
    pub fn vieta_holds(&self) -> bool {
        match (&self.plus, &self.minus, &self.jacobi) {
            (Root::Exact(p), Root::Exact(m), Eigen::Rational(l)) => p + m == int(-4) && p * m == -l.clone(),
            _ => {
                let (p, m, l) = (self.plus.approx(), self.minus.approx(), self.jacobi.approx());
                (p + m + 4.0).abs() < 1e-12 && (p * m + l).abs() < 1e-9 * (1.0 + l.abs())
            }
        }
    }
}

/// Roots for a Jacobi eigenvalue `λ` given directly.
pub fn indicial_root_for_jacobi(lambda: &Rational) -> Result<IndicialRoot, DecayError> {
    let mu = Eigen::Rational(lambda * rat(8, 3));
    indicial_root(&SpectralEntry { value: mu, multiplicity: 1 })
}

fn indicial_root(e: &SpectralEntry) -> Result<IndicialRoot, DecayError> {
    let jacobi = e.value.affine(&rat(3, 8), &int(0));
    let radicand = jacobi.affine(&int(1), &int(4));
    let r = radicand.approx();
    if r < 0.0 || matches!(&radicand, Eigen::Rational(q) if q.is_negative()) {
        return Err(DecayError::NegativeRadicand(radicand.to_string()));
    }
    let (plus, minus) = match radicand.as_rational().and_then(rational_sqrt) {
        Some(s) => (Root::Exact(int(-2) + &s), Root::Exact(int(-2) - &s)),
        None => {
            let s = r.sqrt();
            (
                Root::Symbolic { text: format!("-2 + sqrt({radicand})"), approx: -2.0 + s },
                Root::Symbolic { text: format!("-2 - sqrt({radicand})"), approx: -2.0 - s },
            )
        }
    };
    Ok(IndicialRoot { mu: e.value.clone(), multiplicity: e.multiplicity, jacobi, radicand, plus, minus })
}

/// Indicial roots for each distinct `L`-eigenvalue, ordered by `λ` ascending.
pub fn indicial_roots(spectrum: &[SpectralEntry]) -> Result<Vec<IndicialRoot>, DecayError> {
    let mut out = spectrum.iter().map(indicial_root).collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.jacobi.approx().total_cmp(&b.jacobi.approx()));
    Ok(out)
}

/// `λ_{2,+}, λ_{1,+}, λ_{0,+}, λ_{0,−}, λ_{1,−}, λ_{2,−}` as listed.
pub fn listed_roots() -> [Rational; 6] {
    [int(0), int(-1), rat(-3, 2), rat(-5, 2), int(-3), int(-4)]
}

/// The six roots of the three lowest Jacobi eigenvalues, in listed order.
pub fn lowest_six(roots: &[IndicialRoot]) -> Option<[Root; 6]> {
    let r = |i: usize| roots.get(i);
    let (r0, r1, r2) = (r(0)?, r(1)?, r(2)?);
    Some([r2.plus.clone(), r1.plus.clone(), r0.plus.clone(), r0.minus.clone(), r1.minus.clone(), r2.minus.clone()])
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayEntry {
    pub label: &'static str,
    pub root: Rational,
    /// `1 + root`, from `|x| = e^t`, `Z = e^t X`.
    pub exponent: Rational,
    pub meaning: &'static str,
}

/// Graph decay orders from the roots.
pub fn decay_rate_table(roots: &[IndicialRoot]) -> Vec<DecayEntry> {
    let mut out = Vec::new();
    let picks: [(&'static str, usize, bool, &'static str); 3] = [
        ("lambda_{1,+}", 1, true, "constant translation E"),
        ("lambda_{0,+}", 0, true, "|Z(x) - E| = O(|x|^(-1/2))"),
        ("lambda_{0,-}", 0, false, "|Z(x) - E| = O(|x|^(-3/2))"),
    ];
    for (label, idx, plus, meaning) in picks {
        let Some(r) = roots.get(idx) else { continue };
        if let Root::Exact(q) = if plus { &r.plus } else { &r.minus } {
            out.push(DecayEntry { label, root: q.clone(), exponent: int(1) + q, meaning });
        }
    }
    out
}

/// Least-squares slope of `log|ξ|` over the second half of `[0, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeFit {
    pub lambda: f64,
    pub initial: (f64, f64),
    pub horizon: f64,
    pub exponent: f64,
    pub steps: usize,
}

pub const ODE_STEP: f64 = 1e-3;

/// RK4 on `ξ'' + 4ξ' − λξ = 0`.
pub fn ode_mode_demo(lambda: f64, xi0: f64, xi0p: f64, horizon: f64) -> Result<OdeFit, DecayError> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(DecayError::Horizon(horizon));
    }
    let steps = (horizon / ODE_STEP).round().max(2.0) as usize;
    let h = horizon / steps as f64;
    let f = |y: [f64; 2]| [y[1], lambda * y[0] - 4.0 * y[1]];
    let mut y = [xi0, xi0p];
    let start = steps / 2;
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..=steps {
        if i >= start {
            let t = i as f64 * h;
            let a = y[0].abs();
            if a == 0.0 || !a.is_finite() {
                return Err(DecayError::Vanishing(t));
            }
            let l = a.ln();
            sx += t;
            sy += l;
            sxx += t * t;
            sxy += t * l;
            n += 1.0;
        }
        if i == steps {
            break;
        }
        let k1 = f(y);
        let k2 = f([y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f([y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    let exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(OdeFit { lambda, initial: (xi0, xi0p), horizon, exponent, steps })
}

/// Generic data for the slow mode.
pub const GENERIC_DATA: (f64, f64) = (1.0, 0.37);
pub const GENERIC_HORIZON: f64 = 20.0;

/// Horizon for fast-mode data: long enough to fit, short enough that the
/// slow mode seeded by rounding stays negligible.
pub fn fast_horizon(plus: f64, minus: f64) -> f64 {
    (16.0 / (plus - minus)).min(8.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeCheck {
    pub target: f64,
    pub fit: OdeFit,
}

impl OdeCheck {
    pub fn error(&self) -> f64 {
        (self.fit.exponent - self.target).abs()
    }
}

/// ODE fits for both roots of each given Jacobi eigenvalue.
pub fn ode_checks(roots: &[IndicialRoot]) -> Result<Vec<OdeCheck>, DecayError> {
    let mut out = Vec::new();
    for r in roots {
        let (l, p, m) = (r.jacobi.approx(), r.plus.approx(), r.minus.approx());
        out.push(OdeCheck { target: p, fit: ode_mode_demo(l, GENERIC_DATA.0, GENERIC_DATA.1, GENERIC_HORIZON)? });
        out.push(OdeCheck { target: m, fit: ode_mode_demo(l, 1.0, m, fast_horizon(p, m))? });
    }
    Ok(out)
}

/// Tolerance on fitted exponents.
pub const ODE_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub roots: Vec<IndicialRoot>,
    pub six: Option<[Root; 6]>,
    pub table: Vec<DecayEntry>,
    pub ode: Vec<OdeCheck>,
    pub failures: Vec<String>,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Roots, dictionary and ODE fits from a merged spectrum of `L`.
pub fn decay_report(spectrum: &[SpectralEntry]) -> Result<DecayReport, DecayError> {
    let roots = indicial_roots(spectrum)?;
    let mut failures = Vec::new();
    for r in &roots {
        if !r.vieta_holds() {
            failures.push(format!("Vieta fails for lambda = {}", r.jacobi));
        }
    }
    let six = lowest_six(&roots);
    match &six {
        Some(six) => {
            for (got, want) in six.iter().zip(listed_roots()) {
                if *got != Root::Exact(want.clone()) {
                    failures.push(format!("indicial root {got} differs from {want}"));
                }
            }
        }
        None => failures.push("fewer than three distinct eigenvalues".into()),
    }
    let table = decay_rate_table(&roots);
    let expected = [int(0), rat(-1, 2), rat(-3, 2)];
    if table.len() != 3 || table.iter().zip(&expected).any(|(e, x)| e.exponent != *x) {
        failures.push(format!("decay exponents {:?}", table.iter().map(|e| e.exponent.to_string()).collect::<Vec<_>>()));
    }
    let lowest: Vec<IndicialRoot> = roots.iter().take(3).cloned().collect();
    let ode = ode_checks(&lowest)?;
    for c in &ode {
        if c.error() > ODE_TOLERANCE {
            failures.push(format!("ODE fit {} for lambda = {} misses {} by {:.2e}", c.fit.exponent, c.fit.lambda, c.target, c.error()));
        }
    }
    Ok(DecayReport { roots, six, table, ode, failures })
}

/// Parses `p/q`, integers or decimals into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (BigInt, BigInt) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (!d.is_zero()).then(|| Rational::new(n, d));
    }
    if let Some((w, f)) = s.split_once('.') {
        let neg = w.starts_with('-');
        let w: BigInt = if w.is_empty() || w == "-" { BigInt::zero() } else { w.parse().ok()? };
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = BigInt::from(10).pow(f.len() as u32);
        let frac = Rational::new(f.parse().ok()?, scale);
        let whole = Rational::from_integer(w);
        return Some(if neg { whole - frac } else { whole + frac });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_for_mu(mu: Rational) -> IndicialRoot {
        indicial_root(&SpectralEntry { value: Eigen::Rational(mu), multiplicity: 1 }).unwrap()
    }

    #[test]
    fn examples() {
        let r = roots_for_mu(int(-10));
        assert_eq!(r.jacobi, Eigen::Rational(rat(-15, 4)));
        assert_eq!((r.plus.clone(), r.minus.clone()), (Root::Exact(rat(-3, 2)), Root::Exact(rat(-5, 2))));
        let r = roots_for_mu(int(0));
        assert_eq!((r.plus.clone(), r.minus.clone()), (Root::Exact(int(0)), Root::Exact(int(-4))));
        let r = roots_for_mu(int(6));
        assert_eq!((r.plus.clone(), r.minus.clone()), (Root::Exact(rat(1, 2)), Root::Exact(rat(-9, 2))));
        assert!(r.vieta_holds());
        let r = roots_for_mu(int(12));
        assert!(matches!(r.plus, Root::Symbolic { .. }));
        assert!(r.vieta_holds());
        assert!((r.plus.approx() - (-2.0 + 8.5f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn negative_radicand() {
        let e = SpectralEntry { value: Eigen::Rational(int(-12)), multiplicity: 1 };
        assert!(matches!(indicial_root(&e), Err(DecayError::NegativeRadicand(_))));
    }

    #[test]
    fn surd_spectrum() {
        // (λ − 16)(λ² − 30λ + 80)
        let p = QPoly::from_ints(&[-1280, 560, -46, 1]);
        let s = spectrum_of(&p);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].value, Eigen::Surd { a: int(15), b: int(-1), d: int(145) });
        assert!((s[0].value.approx() - (15.0 - 145f64.sqrt())).abs() < 1e-12);
        assert_eq!(s[1].value, Eigen::Rational(int(16)));
        let merged = merge_spectra(&[s.clone(), s]);
        assert_eq!(merged.len(), 3);
        assert!(merged.iter().all(|e| e.multiplicity == 2));
    }

    #[test]
    fn ode_examples() {
        let fit = ode_mode_demo(-3.75, GENERIC_DATA.0, GENERIC_DATA.1, 20.0).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-3, "{}", fit.exponent);
        let fit = ode_mode_demo(0.0, 1.0, 0.0, 20.0).unwrap();
        assert!(fit.exponent.abs() < 1e-3);
        let fit = ode_mode_demo(-3.0, 1.0, -3.0, 8.0).unwrap();
        assert!((fit.exponent + 3.0).abs() < 1e-3, "{}", fit.exponent);
        assert!(matches!(ode_mode_demo(0.0, 0.0, 0.0, 5.0), Err(DecayError::Vanishing(_))));
        assert!(matches!(ode_mode_demo(0.0, 1.0, 0.0, -1.0), Err(DecayError::Horizon(_))));
    }

    #[test]
    fn low_spectrum_report() {
        let spec = vec![
            SpectralEntry { value: Eigen::Rational(int(-10)), multiplicity: 1 },
            SpectralEntry { value: Eigen::Rational(int(-8)), multiplicity: 7 },
            SpectralEntry { value: Eigen::Rational(int(0)), multiplicity: 17 },
            SpectralEntry { value: Eigen::Rational(int(6)), multiplicity: 9 },
        ];
        let rep = decay_report(&spec).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.table[1].exponent, rat(-1, 2));
        assert_eq!(rep.table[2].exponent, rat(-3, 2));
        assert!(rep.ode.iter().all(|c| c.error() < ODE_TOLERANCE));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-15/4"), Some(rat(-15, 4)));
        assert_eq!(parse_rational("-3.75"), Some(rat(-15, 4)));
        assert_eq!(parse_rational("0"), Some(int(0)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
