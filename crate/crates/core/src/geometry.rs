//! The link `M ⊂ S⁶ ⊂ ℝ⁷` as the graph of `h: S³(2/3) → S²(√5/3)`: frame
//! polynomials, connection coefficients at `p₀`, the second fundamental form,
//! the SU(2) actions Φ, Ψ and the Hopf map η, and the Killing map `T(A) = (xA)^N`.
//!
//! Points of ℝ⁷ are `(x₁, y₁, x₂, y₂, x₃, x₄, y₄)`; frames are polynomials in
//! `(x₁, y₁, x₂, y₂)` with coefficients in ℚ(√2, √3, √5).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exactla::{self, Matrix};
use crate::numfield::{rat, FieldElem, GaussianRational, Rational};
use crate::polyops::{EuclidPoly, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("point is off the sphere: squared norm {found}, expected {expected}")]
    OffSphere { found: String, expected: String },
    #[error("frame does not span R^7 at the point")]
    Degenerate,
}

pub type Vec7 = [FieldElem; 7];

/// Outcome of one family of exact checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.into(), total: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameLabel {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    Nu,
}

impl FrameLabel {
    pub const ALL: [FrameLabel; 7] =
        [FrameLabel::E1, FrameLabel::E2, FrameLabel::E3, FrameLabel::E4, FrameLabel::E5, FrameLabel::E6, FrameLabel::Nu];

    pub fn name(self) -> &'static str {
        ["e1", "e2", "e3", "e4", "e5", "e6", "nu"][self as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameField {
    pub label: FrameLabel,
    pub components: [EuclidPoly; 7],
}

impl FrameField {
    pub fn eval(&self, b: &[FieldElem; 4]) -> Vec7 {
        self.components.clone().map(|c| c.eval(b))
    }
}

fn q(n: i64, d: i64) -> FieldElem {
    FieldElem::from_rational(rat(n, d))
}

fn sqrt_q(n: i64, d: i64) -> FieldElem {
    FieldElem::sqrt_rational(&rat(n, d)).expect("radicand in field")
}

fn sqrt5() -> FieldElem {
    FieldElem::sqrt_radicand(5).expect("5 is a radicand")
}

fn x(k: usize) -> EuclidPoly {
    EuclidPoly::var(k)
}

/// The quadratic building blocks of the frames.
struct Quadrics {
    /// x₁² + y₁² − x₂² − y₂² = |z₁|² − |z₂|²
    a: EuclidPoly,
    /// x₁x₂ + y₁y₂ = Re z₁z̄₂
    r: EuclidPoly,
    /// x₂y₁ − x₁y₂ = Im z₁z̄₂
    s: EuclidPoly,
    /// x₁x₂ − y₁y₂ = Re z₁z₂
    u: EuclidPoly,
    /// x₁y₂ + x₂y₁ = Im z₁z₂
    v: EuclidPoly,
    /// x₁² − y₁² − x₂² + y₂² = Re(z₁² − z₂²)
    t: EuclidPoly,
    /// x₁y₁ + x₂y₂
    m: EuclidPoly,
    /// x₁y₁ − x₂y₂
    n: EuclidPoly,
    /// −x₁² − x₂² + y₁² + y₂²
    o: EuclidPoly,
}

fn quadrics() -> Quadrics {
    let (x1, y1, x2, y2) = (x(0), x(1), x(2), x(3));
    let sq = |p: &EuclidPoly| p * p;
    Quadrics {
        a: &(&sq(&x1) + &sq(&y1)) - &(&sq(&x2) + &sq(&y2)),
        r: &(&x1 * &x2) + &(&y1 * &y2),
        s: &(&x2 * &y1) - &(&x1 * &y2),
        u: &(&x1 * &x2) - &(&y1 * &y2),
        v: &(&x1 * &y2) + &(&x2 * &y1),
        t: &(&(&sq(&x1) - &sq(&y1)) - &sq(&x2)) + &sq(&y2),
        m: &(&x1 * &y1) + &(&x2 * &y2),
        n: &(&x1 * &y1) - &(&x2 * &y2),
        o: &(&(&sq(&y1) + &sq(&y2)) - &sq(&x1)) - &sq(&x2),
    }
}

/// Frame polynomials as vector fields on ℝ⁴ ⊃ S³(2/3), pushed to ℝ⁷.
pub fn frame(label: FrameLabel) -> FrameField {
    let (x1, y1, x2, y2) = (x(0), x(1), x(2), x(3));
    let qd = quadrics();
    let s5 = sqrt5();
    let zero = EuclidPoly::zero;
    let sc = |p: &EuclidPoly, c: &FieldElem| p.scale(c);
    let components = match label {
        FrameLabel::E1 => {
            let c = q(3, 2);
            [sc(&y1, &-&c), sc(&x1, &c), sc(&y2, &-&c), sc(&x2, &c), zero(), zero(), zero()]
        }
        FrameLabel::E2 => {
            let k = sqrt_q(3, 8);
            let k5 = &k * &s5;
            [
                sc(&x2, &-&k),
                sc(&y2, &k),
                sc(&x1, &k),
                sc(&y1, &-&k),
                sc(&qd.u, &(&k5 * &q(-3, 1))),
                sc(&qd.t, &(&k5 * &q(3, 2))),
                sc(&qd.m, &(&k5 * &q(3, 1))),
            ]
        }
        FrameLabel::E3 => {
            let k = sqrt_q(3, 8);
            let k5 = &k * &s5;
            [
                sc(&y2, &-&k),
                sc(&x2, &-&k),
                sc(&y1, &k),
                sc(&x1, &k),
                sc(&qd.v, &(&k5 * &q(-3, 1))),
                sc(&qd.n, &(&k5 * &q(3, 1))),
                sc(&qd.o, &(&k5 * &q(3, 2))),
            ]
        }
        FrameLabel::E4 => {
            let h = &s5 * &q(1, 2);
            [
                sc(&x1, &h),
                sc(&y1, &h),
                sc(&x2, &h),
                sc(&y2, &h),
                sc(&qd.a, &q(-3, 2)),
                sc(&qd.r, &q(-3, 1)),
                sc(&qd.s, &q(-3, 1)),
            ]
        }
        FrameLabel::E5 => {
            let k = sqrt_q(15, 8);
            let k5 = &k * &s5;
            [
                sc(&x2, &-&k),
                sc(&y2, &k),
                sc(&x1, &k),
                sc(&y1, &-&k),
                sc(&qd.u, &(&k5 * &q(3, 5))),
                sc(&qd.t, &(&k5 * &q(-3, 10))),
                sc(&qd.m, &(&k5 * &q(-3, 5))),
            ]
        }
        FrameLabel::E6 => {
            let k = sqrt_q(15, 8);
            let k5 = &k * &s5;
            [
                sc(&y2, &-&k),
                sc(&x2, &-&k),
                sc(&y1, &k),
                sc(&x1, &k),
                sc(&qd.v, &(&k5 * &q(3, 5))),
                sc(&qd.n, &(&k5 * &q(-3, 5))),
                sc(&qd.o, &(&k5 * &q(-3, 10))),
            ]
        }
        FrameLabel::Nu => [
            x1,
            y1,
            x2,
            y2,
            sc(&qd.a, &(&s5 * &q(3, 4))),
            sc(&qd.r, &(&s5 * &q(3, 2))),
            sc(&qd.s, &(&s5 * &q(3, 2))),
        ],
    };
    FrameField { label, components }
}

pub fn frames() -> [FrameField; 7] {
    FrameLabel::ALL.map(frame)
}

pub fn dot(a: &Vec7, b: &Vec7) -> FieldElem {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Radius of the S³ factor.
pub fn base_radius() -> Rational {
    rat(2, 3)
}

pub fn basepoint_b0() -> [FieldElem; 4] {
    [q(2, 3), FieldElem::zero(), FieldElem::zero(), FieldElem::zero()]
}

/// `p₀ = G(b₀) = (2/3, 0, 0, 0, √5/3, 0, 0)`.
pub fn basepoint() -> Vec7 {
    graph_map(&basepoint_b0())
}

/// `G(x) = (x, (3√5/4)(x₁²+y₁²−x₂²−y₂²), (3√5/2)(x₁x₂+y₁y₂), (3√5/2)(y₁x₂−y₂x₁))`.
pub fn graph_map(b: &[FieldElem; 4]) -> Vec7 {
    frame(FrameLabel::Nu).eval(b)
}

fn to_field(p: &[Rational; 4]) -> [FieldElem; 4] {
    p.clone().map(FieldElem::from_rational)
}

fn norm_sqr4(b: &[FieldElem; 4]) -> FieldElem {
    b.iter().map(|c| c * c).sum()
}

fn check_on_base(b: &[FieldElem; 4]) -> Result<(), GeometryError> {
    let r = base_radius();
    let expected = FieldElem::from_rational(&r * &r);
    let found = norm_sqr4(b);
    if found != expected {
        return Err(GeometryError::OffSphere { found: found.pretty(), expected: expected.pretty() });
    }
    Ok(())
}

/// `p = r·(2v, |v|²−1)/(1+|v|²)`.
pub fn inverse_stereographic(v: &[Rational; 3], radius: &Rational) -> [Rational; 4] {
    let n2: Rational = v.iter().map(|c| c * c).sum();
    let den = &n2 + Rational::from_integer(1.into());
    let s = radius / &den;
    let two = Rational::from_integer(2.into());
    [&v[0] * &two * &s, &v[1] * &two * &s, &v[2] * &two * &s, (&n2 - Rational::from_integer(1.into())) * &s]
}

/// `n` distinct exact points of S³(radius), from integer triples in order of max-norm.
pub fn rational_sphere_points(n: usize, radius: &Rational) -> Vec<[Rational; 4]> {
    let mut out = Vec::with_capacity(n);
    let mut shell = 0i64;
    while out.len() < n {
        for a in -shell..=shell {
            for b in -shell..=shell {
                for c in -shell..=shell {
                    if a.abs().max(b.abs()).max(c.abs()) != shell || out.len() >= n {
                        continue;
                    }
                    let v = [rat(a, 2), rat(b, 3), rat(c, 1)];
                    out.push(inverse_stereographic(&v, radius));
                }
            }
        }
        shell += 1;
    }
    out
}

/// Frames at a point `b ∈ S³(2/3)` must be orthonormal with `|ν| = 1`.
pub fn frame_orthonormality(points: &[[Rational; 4]]) -> Check {
    let mut check = Check::new("frame orthonormality");
    let fs = frames();
    for p in points {
        let b = to_field(p);
        let vals: Vec<Vec7> = fs.iter().map(|f| f.eval(&b)).collect();
        for i in 0..7 {
            for j in i..7 {
                let expected = if i == j { FieldElem::one() } else { FieldElem::zero() };
                let got = dot(&vals[i], &vals[j]);
                check.record(got == expected, || {
                    format!("<{}, {}> = {} at {:?}", fs[i].label.name(), fs[j].label.name(), got.pretty(), p)
                });
            }
        }
    }
    check
}

/// Complex frame expressions in `z₁ = x₁ + iy₁`, `z₂ = x₂ + iy₂`, with the
/// coefficients `√(−3/8)`, `√(−15/8)` read as `i√(3/8)`, `i√(15/8)`.
fn complex_frame(label: FrameLabel, b: &[FieldElem; 4]) -> [FieldElem; 4] {
    let i = FieldElem::i();
    let z1 = &b[0] + &(&i * &b[1]);
    let z2 = &b[2] + &(&i * &b[3]);
    let (z1b, z2b) = (z1.conj(), z2.conj());
    let s5 = sqrt5();
    let c = |n, d| &s5 * &q(n, d);
    let abs_diff = &(&z1 * &z1b) - &(&z2 * &z2b);
    let scale = |k: FieldElem, v: [FieldElem; 4]| v.map(|e| &k * &e);
    match label {
        FrameLabel::E1 => {
            let k = &i * &q(3, 2);
            [&k * &z1, &k * &z2, FieldElem::zero(), FieldElem::zero()]
        }
        FrameLabel::E2 => scale(
            sqrt_q(3, 8),
            [-&z2b, z1b.clone(), &c(-3, 2) * &(&(&z1b * &z2b) + &(&z1 * &z2)), &c(3, 2) * &(&(&z1 * &z1) - &(&z2b * &z2b))],
        ),
        FrameLabel::E3 => scale(
            sqrt_q(-3, 8),
            [-&z2b, z1b.clone(), &c(-3, 2) * &(&(&z1b * &z2b) - &(&z1 * &z2)), &c(-3, 2) * &(&(&z1 * &z1) + &(&z2b * &z2b))],
        ),
        FrameLabel::E4 => [&c(1, 2) * &z1, &c(1, 2) * &z2, &q(-3, 2) * &abs_diff, &q(-3, 1) * &(&z1 * &z2b)],
        FrameLabel::E5 => scale(
            sqrt_q(15, 8),
            [-&z2b, z1b.clone(), &c(3, 10) * &(&(&z1b * &z2b) + &(&z1 * &z2)), &c(-3, 10) * &(&(&z1 * &z1) - &(&z2b * &z2b))],
        ),
        FrameLabel::E6 => scale(
            sqrt_q(-15, 8),
            [-&z2b, z1b.clone(), &c(3, 10) * &(&(&z1b * &z2b) - &(&z1 * &z2)), &c(3, 10) * &(&(&z1 * &z1) + &(&z2b * &z2b))],
        ),
        FrameLabel::Nu => [z1.clone(), z2.clone(), &c(3, 4) * &abs_diff, &c(3, 2) * &(&z1 * &z2b)],
    }
}

/// The complex frame expressions agree with the real polynomial frames.
pub fn complex_frame_consistency(points: &[[Rational; 4]]) -> Check {
    let mut check = Check::new("complex frame forms");
    for p in points {
        let b = to_field(p);
        for f in frames() {
            let [c1, c2, c3, c4] = complex_frame(f.label, &b);
            let real = [c1.real_part(), c1.imag_part(), c2.real_part(), c2.imag_part(), c3.clone(), c4.real_part(), c4.imag_part()];
            let ok = c3.is_real() && real == f.eval(&b);
            check.record(ok, || format!("{} at {:?}", f.label.name(), p));
        }
    }
    check
}

/// `D_{e_i}e_j = Σ_l c_l e_l + c_ν ν` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub coeffs: [FieldElem; 6],
    pub nu: FieldElem,
}

impl Expansion {
    pub fn from_pairs(terms: &[(usize, FieldElem)], nu: FieldElem) -> Self {
        let mut coeffs: [FieldElem; 6] = Default::default();
        for (l, c) in terms {
            coeffs[l - 1] = c.clone();
        }
        Expansion { coeffs, nu }
    }

    pub fn pretty(&self) -> String {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| format!("({})*e{}", c.pretty(), l + 1))
            .collect();
        if !self.nu.is_zero() {
            parts.push(format!("({})*nu", self.nu.pretty()));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `entries[i][j]` is `D_{e_{i+1}} e_{j+1}` for `i < 3`, `j < 6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTable {
    pub entries: Vec<Vec<Expansion>>,
}

impl ConnectionTable {
    /// `D_{e_i}e_j`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Expansion {
        &self.entries[i - 1][j - 1]
    }

    /// `B(e_i, e_j)` in the basis `e₄, e₅, e₆`.
    pub fn second_fundamental_form(&self, i: usize, j: usize) -> [FieldElem; 3] {
        let c = &self.get(i, j).coeffs;
        [c[3].clone(), c[4].clone(), c[5].clone()]
    }

    pub fn differences(&self, other: &ConnectionTable) -> Vec<String> {
        let mut out = Vec::new();
        for i in 1..=3 {
            for j in 1..=6 {
                if self.get(i, j) != other.get(i, j) {
                    out.push(format!("D_e{i} e{j}: {} vs {}", self.get(i, j).pretty(), other.get(i, j).pretty()));
                }
            }
        }
        out
    }

    /// Metric compatibility and torsion-freeness read off the table.
    pub fn structure_checks(&self) -> Check {
        let mut check = Check::new("connection structure");
        for i in 1..=3 {
            for j in 1..=6 {
                for k in 1..=6 {
                    let a = &self.get(i, j).coeffs[k - 1];
                    let b = &self.get(i, k).coeffs[j - 1];
                    check.record(*a == -b, || format!("<D_e{i} e{j}, e{k}> != -<D_e{i} e{k}, e{j}>"));
                }
                let nu_expected = if i == j { -FieldElem::one() } else { FieldElem::zero() };
                check.record(self.get(i, j).nu == nu_expected, || format!("nu part of D_e{i} e{j}"));
            }
            for j in 1..=3 {
                let ok = self.second_fundamental_form(i, j) == self.second_fundamental_form(j, i);
                check.record(ok, || format!("B(e{i}, e{j}) != B(e{j}, e{i})"));
            }
        }
        check
    }
}

fn frame_partials() -> Vec<[[EuclidPoly; 7]; 4]> {
    frames().iter().map(|f| std::array::from_fn(|a| f.components.clone().map(|c| c.partial(a)))).collect()
}

/// Connection coefficients at `G(b)` by differentiating the frame polynomials.
pub fn connection_at(b: &[FieldElem; 4]) -> Result<ConnectionTable, GeometryError> {
    check_on_base(b)?;
    let fs = frames();
    let vals: Vec<Vec7> = fs.iter().map(|f| f.eval(b)).collect();
    let partials = frame_partials();
    let mut entries = Vec::new();
    for i in 0..3 {
        let mut row = Vec::new();
        for j in 0..6 {
            let d: Vec7 = std::array::from_fn(|c| (0..4).map(|a| &vals[i][a] * &partials[j][a][c].eval(b)).sum());
            let coeffs: [FieldElem; 6] = std::array::from_fn(|l| dot(&d, &vals[l]));
            let nu = dot(&d, &vals[6]);
            let rebuilt: Vec7 = std::array::from_fn(|c| {
                let t: FieldElem = (0..6).map(|l| &coeffs[l] * &vals[l][c]).sum();
                &t + &(&nu * &vals[6][c])
            });
            if rebuilt != d {
                return Err(GeometryError::Degenerate);
            }
            row.push(Expansion { coeffs, nu });
        }
        entries.push(row);
    }
    Ok(ConnectionTable { entries })
}

/// The table at `p₀`.
pub fn connection_coefficients() -> ConnectionTable {
    connection_at(&basepoint_b0()).expect("basepoint lies on the link")
}

/// The connection table as listed in closed form.
pub fn reference_connection_table() -> ConnectionTable {
    let s5 = sqrt5();
    let f = |n, d| q(n, d);
    let r5 = |n, d| &s5 * &q(n, d);
    let e = |terms: Vec<(usize, FieldElem)>| Expansion::from_pairs(&terms, FieldElem::zero());
    let en = |terms: Vec<(usize, FieldElem)>| Expansion::from_pairs(&terms, FieldElem::from_int(-1));
    ConnectionTable {
        entries: vec![
            vec![
                en(vec![(4, r5(-1, 2))]),
                e(vec![(3, f(-11, 4)), (6, r5(1, 4))]),
                e(vec![(2, f(11, 4)), (5, r5(-1, 4))]),
                e(vec![(1, r5(1, 2))]),
                e(vec![(3, r5(1, 4)), (6, f(-7, 4))]),
                e(vec![(2, r5(-1, 4)), (5, f(7, 4))]),
            ],
            vec![
                e(vec![(3, f(1, 4)), (6, r5(1, 4))]),
                en(vec![(4, r5(1, 4))]),
                e(vec![(1, f(-1, 4))]),
                e(vec![(2, r5(-1, 4)), (5, f(3, 4))]),
                e(vec![(4, f(-3, 4))]),
                e(vec![(1, r5(-1, 4))]),
            ],
            vec![
                e(vec![(2, f(-1, 4)), (5, r5(-1, 4))]),
                e(vec![(1, f(1, 4))]),
                en(vec![(4, r5(1, 4))]),
                e(vec![(3, r5(-1, 4)), (6, f(3, 4))]),
                e(vec![(1, r5(1, 4))]),
                e(vec![(4, f(-3, 4))]),
            ],
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    /// `B̃` on `(e₄, e₅, e₆)`: `B̃[a][b] = Σ_{ij} B_ij^a B_ij^b`.
    pub btilde: [[FieldElem; 3]; 3],
    /// `Σᵢ B(eᵢ, eᵢ)`.
    pub mean_curvature: [FieldElem; 3],
    pub failures: Vec<String>,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn shape_operator_checks(table: &ConnectionTable) -> ShapeReport {
    let mut btilde: [[FieldElem; 3]; 3] = Default::default();
    let mut mean: [FieldElem; 3] = Default::default();
    for i in 1..=3 {
        for j in 1..=3 {
            let b = table.second_fundamental_form(i, j);
            for a in 0..3 {
                for c in 0..3 {
                    btilde[a][c] += &(&b[a] * &b[c]);
                }
            }
            if i == j {
                for a in 0..3 {
                    mean[a] += &b[a];
                }
            }
        }
    }
    let expected = [q(15, 8), q(5, 8), q(5, 8)];
    let mut failures = Vec::new();
    for a in 0..3 {
        for c in 0..3 {
            let want = if a == c { expected[a].clone() } else { FieldElem::zero() };
            if btilde[a][c] != want {
                failures.push(format!("Btilde[e{}][e{}] = {}, expected {}", a + 4, c + 4, btilde[a][c].pretty(), want.pretty()));
            }
        }
        if !mean[a].is_zero() {
            failures.push(format!("mean curvature has e{} component {}", a + 4, mean[a].pretty()));
        }
    }
    ShapeReport { btilde, mean_curvature: mean, failures }
}

/// `z₁ + z₂j`, also the SU(2) matrix `[[z₁, z₂], [−z̄₂, z̄₁]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quaternion {
    pub z1: GaussianRational,
    pub z2: GaussianRational,
}

impl Quaternion {
    pub fn new(z1: GaussianRational, z2: GaussianRational) -> Self {
        Quaternion { z1, z2 }
    }

    pub fn one() -> Self {
        Quaternion::new(GaussianRational::real(rat(1, 1)), GaussianRational::real(rat(0, 1)))
    }

    /// From `(a, b, c, d) = a + bi + cj + dk`.
    pub fn from_coords(p: &[Rational; 4]) -> Self {
        Quaternion::new(GaussianRational::new(p[0].clone(), p[1].clone()), GaussianRational::new(p[2].clone(), p[3].clone()))
    }

    pub fn coords(&self) -> [Rational; 4] {
        [self.z1.re.clone(), self.z1.im.clone(), self.z2.re.clone(), self.z2.im.clone()]
    }

    /// `(a₁ + a₂j)(b₁ + b₂j) = (a₁b₁ − a₂b̄₂) + (a₁b₂ + a₂b̄₁)j`.
    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        Quaternion::new(
            self.z1.mul(&o.z1).sub(&self.z2.mul(&o.z2.conj())),
            self.z1.mul(&o.z2).add(&self.z2.mul(&o.z1.conj())),
        )
    }

    pub fn norm_sqr(&self) -> Rational {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    fn require_unit(&self) -> Result<(), GeometryError> {
        let n = self.norm_sqr();
        if n != rat(1, 1) {
            return Err(GeometryError::OffSphere { found: n.to_string(), expected: "1".into() });
        }
        Ok(())
    }

    /// Rows are `1·Q, i·Q, j·Q, k·Q`, so that `xQ = x·R(Q)` for row vectors.
    pub fn right_matrix(&self) -> [[Rational; 4]; 4] {
        let basis = |k: usize| {
            let mut c: [Rational; 4] = Default::default();
            c[k] = rat(1, 1);
            Quaternion::from_coords(&c)
        };
        std::array::from_fn(|k| basis(k).mul(self).coords())
    }
}

pub type Mat3 = [[Rational; 3]; 3];

/// Φ: SU(2) → SO(3).
pub fn phi_hom(p: &Quaternion) -> Result<Mat3, GeometryError> {
    p.require_unit()?;
    let (z1, z2) = (&p.z1, &p.z2);
    let two = rat(2, 1);
    let z1z2b = z1.mul(&z2.conj());
    let z1z2 = z1.mul(z2);
    let z1sq = z1.mul(z1);
    let z2sq = z2.mul(z2);
    let diff = z1sq.sub(&z2sq);
    let sum = z1sq.add(&z2sq);
    Ok([
        [z1.norm_sqr() - z2.norm_sqr(), &two * &z1z2b.re, &two * &z1z2b.im],
        [-(&two * &z1z2.re), diff.re.clone(), sum.im.clone()],
        [&two * &z1z2.im, -diff.im.clone(), sum.re.clone()],
    ])
}

/// Hopf map `η(z₁, z₂) = (|z₁|² − |z₂|², 2Re z₁z̄₂, 2Im z₁z̄₂)`.
pub fn eta(p: &Quaternion) -> [Rational; 3] {
    let z1z2b = p.z1.mul(&p.z2.conj());
    [p.z1.norm_sqr() - p.z2.norm_sqr(), rat(2, 1) * &z1z2b.re, rat(2, 1) * &z1z2b.im]
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

fn row_times<const N: usize, const M: usize>(v: &[FieldElem; N], m: &[[Rational; M]; N]) -> [FieldElem; M] {
    std::array::from_fn(|j| (0..N).map(|i| v[i].scale(&m[i][j])).sum())
}

/// Determinant by fraction-based elimination.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = rat(1, 1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != rat(0, 1)) else {
            return rat(0, 1);
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Ψ(Q) = R(Q) ⊕ Φ(Q) acting on row vectors of ℝ⁷.
pub fn psi_matrix(p: &Quaternion) -> Result<[[Rational; 7]; 7], GeometryError> {
    let phi = phi_hom(p)?;
    let r = p.right_matrix();
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| match (i < 4, j < 4) {
            (true, true) => r[i][j].clone(),
            (false, false) => phi[i - 4][j - 4].clone(),
            _ => rat(0, 1),
        })
    }))
}

/// `(x, y)Ψ(Q) = (xQ, yΦ(Q))`.
pub fn psi_action(xv: &[FieldElem; 4], y: &[FieldElem; 3], p: &Quaternion) -> Result<Vec7, GeometryError> {
    let phi = phi_hom(p)?;
    let xq = row_times(xv, &p.right_matrix());
    let yq = row_times(y, &phi);
    Ok(std::array::from_fn(|k| if k < 4 { xq[k].clone() } else { yq[k - 4].clone() }))
}

/// Membership in `M`: `|x|² = 4/9` and `y = h(x)`.
pub fn on_link(p: &Vec7) -> bool {
    let b: [FieldElem; 4] = std::array::from_fn(|k| p[k].clone());
    check_on_base(&b).is_ok() && graph_map(&b) == *p
}

fn is_orthogonal<const N: usize>(m: &[[Rational; N]; N]) -> bool {
    (0..N).all(|i| {
        (0..N).all(|j| {
            let s: Rational = (0..N).map(|k| &m[k][i] * &m[k][j]).sum();
            s == if i == j { rat(1, 1) } else { rat(0, 1) }
        })
    })
}

fn to_rows<const N: usize>(m: &[[Rational; N]; N]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.to_vec()).collect()
}

/// Φ/Ψ/η identities at `n` exact configurations each.
pub fn group_checks(n: usize) -> Vec<Check> {
    let units: Vec<Quaternion> = rational_sphere_points(n + 7, &rat(1, 1)).iter().map(Quaternion::from_coords).collect();
    let bases = rational_sphere_points(n, &base_radius());
    let pair = |i: usize| (&units[i], &units[(7 * i + 3) % units.len()]);
    let mut hom = Check::new("Phi homomorphism");
    let mut so3 = Check::new("Phi in SO(3)");
    let mut equiv = Check::new("eta equivariance");
    let mut inv = Check::new("M invariance under Psi");
    let mut so7 = Check::new("Psi in SO(7)");
    let mut frames_eq = Check::new("frame equivariance");
    let fs = frames();
    for i in 0..n {
        let (p, qq) = pair(i);
        let pq = p.mul(qq);
        let (fp, fq, fpq) = (phi_hom(p).unwrap(), phi_hom(qq).unwrap(), phi_hom(&pq).unwrap());
        hom.record(fpq == mat3_mul(&fp, &fq), || format!("P={:?} Q={:?}", p.coords(), qq.coords()));
        so3.record(is_orthogonal(&fq) && det(to_rows(&fq)) == rat(1, 1), || format!("Q={:?}", qq.coords()));
        let lhs = eta(&pq);
        let e = eta(p);
        let rhs: [Rational; 3] = std::array::from_fn(|j| (0..3).map(|k| &e[k] * &fq[k][j]).sum());
        equiv.record(lhs == rhs, || format!("P={:?} Q={:?}", p.coords(), qq.coords()));
        let psi = psi_matrix(qq).unwrap();
        so7.record(is_orthogonal(&psi) && det(to_rows(&psi)) == rat(1, 1), || format!("Q={:?}", qq.coords()));
        let b = to_field(&bases[i]);
        let pt = graph_map(&b);
        let xv: [FieldElem; 4] = std::array::from_fn(|k| pt[k].clone());
        let y: [FieldElem; 3] = std::array::from_fn(|k| pt[k + 4].clone());
        let moved = psi_action(&xv, &y, qq).unwrap();
        inv.record(on_link(&moved), || format!("b={:?} Q={:?}", bases[i], qq.coords()));
        let bq: [FieldElem; 4] = std::array::from_fn(|k| moved[k].clone());
        for f in &fs {
            let pushed = row_times(&f.eval(&b), &psi);
            frames_eq.record(pushed == f.eval(&bq), || format!("{} at b={:?} Q={:?}", f.label.name(), bases[i], qq.coords()));
        }
    }
    vec![hom, so3, equiv, so7, inv, frames_eq]
}

/// A basis element of so(7) acting on row vectors, `x ↦ xA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct So7Generator {
    pub name: String,
    pub matrix: Matrix,
}

fn elementary(i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(7, 7);
    m.set(i, j, FieldElem::one());
    m.set(j, i, -FieldElem::one());
    m
}

/// `J_ij` (i<j≤4), `K_ij` (i<j≤3) and `W_ab = E_{a,4+b} − E_{4+b,a}`, 21 in all.
pub fn so7_basis() -> Vec<So7Generator> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(So7Generator { name: format!("J{}{}", i + 1, j + 1), matrix: elementary(i, j) });
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            out.push(So7Generator { name: format!("K{}{}", i + 1, j + 1), matrix: elementary(4 + i, 4 + j) });
        }
    }
    for a in 0..4 {
        for b in 0..3 {
            out.push(So7Generator { name: format!("W{}{}", a + 1, b + 1), matrix: elementary(a, 4 + b) });
        }
    }
    out
}

/// Matrix of a named combination such as `[("J13", 1), ("K12", 2)]`.
pub fn so7_combination(terms: &[(&str, i64)]) -> Matrix {
    let basis = so7_basis();
    terms.iter().fold(Matrix::zeros(7, 7), |acc, (name, c)| {
        let g = basis.iter().find(|g| g.name == *name).expect("known generator");
        acc.add(&g.matrix.scale(&FieldElem::from_int(*c)))
    })
}

/// Normal form modulo `x₁² + y₁² + x₂² + y₂² = r²`: every `y₂²` is rewritten.
pub fn reduce_sphere(p: &EuclidPoly, r2: &Rational) -> EuclidPoly {
    let mut cur = p.clone();
    loop {
        let Some((m, _)) = cur.terms().find(|(m, _)| m.0[3] >= 2) else {
            return cur;
        };
        let m = *m;
        let c = cur.coeff(&m);
        let mut lower = m;
        lower.0[3] -= 2;
        let base = EuclidPoly::term(lower, c.clone());
        let replacement = &EuclidPoly::constant(FieldElem::from_rational(r2.clone()))
            - &(&(&x(0) * &x(0)) + &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))));
        cur.add_term(m, &-&c);
        cur = &cur + &(&base * &replacement);
    }
}

fn base_r2() -> Rational {
    let r = base_radius();
    &r * &r
}

/// `(⟨νA, e₄⟩, ⟨νA, e₅⟩, ⟨νA, e₆⟩)` reduced on S³(2/3).
pub fn killing_components(a: &Matrix) -> [EuclidPoly; 3] {
    let nu = frame(FrameLabel::Nu).components;
    let nu_a: Vec<EuclidPoly> = (0..7)
        .map(|col| (0..7).fold(EuclidPoly::zero(), |acc, row| &acc + &nu[row].scale(a.get(row, col))))
        .collect();
    [FrameLabel::E4, FrameLabel::E5, FrameLabel::E6].map(|l| {
        let e = frame(l).components;
        let p = (0..7).fold(EuclidPoly::zero(), |acc, k| &acc + &(&nu_a[k] * &e[k]));
        reduce_sphere(&p, &base_r2())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStatus {
    Match,
    SignFlipped,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub generator: String,
    /// 5 or 6.
    pub frame: usize,
    pub expected: EuclidPoly,
    pub computed: EuclidPoly,
    pub status: TableStatus,
}

/// `√(8/15)·⟨νJ_ij, e₅⟩` and `√(8/15)·⟨νJ_ij, e₆⟩` in closed form, as
/// `(generator, e₅ row, e₆ row)` with terms `(coefficient, exponents of x₁,y₁,x₂,y₂)`.
#[allow(clippy::type_complexity)]
pub const TABLE1: [(&str, &[(i64, [u32; 4])], &[(i64, [u32; 4])]); 6] = [
    ("J12", &[(1, [1, 0, 0, 1]), (1, [0, 1, 1, 0])], &[(-1, [1, 0, 1, 0]), (1, [0, 1, 0, 1])]),
    ("J13", &[(1, [2, 0, 0, 0]), (1, [0, 0, 2, 0])], &[(1, [1, 1, 0, 0]), (1, [0, 0, 1, 1])]),
    ("J14", &[(-1, [1, 1, 0, 0]), (1, [0, 0, 1, 1])], &[(1, [2, 0, 0, 0]), (1, [0, 0, 0, 2])]),
    ("J23", &[(1, [1, 1, 0, 0]), (-1, [0, 0, 1, 1])], &[(1, [0, 0, 2, 0]), (1, [0, 2, 0, 0])]),
    ("J24", &[(-1, [0, 2, 0, 0]), (-1, [0, 0, 0, 2])], &[(1, [1, 1, 0, 0]), (1, [0, 0, 1, 1])]),
    ("J34", &[(-1, [1, 0, 0, 1]), (-1, [0, 1, 1, 0])], &[(1, [1, 0, 1, 0]), (-1, [0, 1, 0, 1])]),
];

/// Elements listed as spanning `ker T`.
pub const KERNEL_ELEMENTS: [&[(&str, i64)]; 4] = [
    &[("J12", 1), ("J34", 1)],
    &[("J13", 1), ("J24", 1), ("K12", 2)],
    &[("J14", 1), ("J23", -1), ("K13", -2)],
    &[("J12", 1), ("K23", 1)],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingReport {
    pub rank: usize,
    /// Kernel basis as coefficient vectors over [`so7_basis`].
    pub kernel: Vec<Vec<FieldElem>>,
    pub kernel_names: Vec<String>,
    /// Whether each listed element lies in the kernel.
    pub listed_in_kernel: Vec<(String, bool)>,
    /// The listed elements span the whole kernel.
    pub listed_span_kernel: bool,
    /// No kernel element has a `W` component.
    pub kernel_in_so4_so3: bool,
    pub table1: Vec<TableEntry>,
}

impl KillingReport {
    pub fn passed(&self) -> bool {
        self.rank == 17
            && self.kernel.len() == 4
            && self.listed_in_kernel.iter().all(|(_, ok)| *ok)
            && self.listed_span_kernel
            && self.kernel_in_so4_so3
            && self.table1.iter().all(|t| t.status == TableStatus::Match)
    }
}

/// `J12 - 2*K13` style text from (coefficient, generator) pairs.
fn linear_text<'a>(terms: impl IntoIterator<Item = (String, &'a str)>) -> String {
    let mut out = String::new();
    for (c, n) in terms {
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c),
        };
        let sign = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let mag = if mag == "1" { String::new() } else if mag.contains(['+', ' ']) { format!("({mag})*") } else { format!("{mag}*") };
        out.push_str(&format!("{sign}{mag}{n}"));
    }
    out
}

fn combination_name(coeffs: &[FieldElem], names: &[String]) -> String {
    linear_text(coeffs.iter().zip(names).filter(|(c, _)| !c.is_zero()).map(|(c, n)| (c.pretty(), n.as_str())))
}

pub fn killing_map() -> KillingReport {
    let basis = so7_basis();
    let names: Vec<String> = basis.iter().map(|g| g.name.clone()).collect();
    let images: Vec<[EuclidPoly; 3]> = basis.iter().map(|g| killing_components(&g.matrix)).collect();
    let mut support: BTreeSet<(usize, Monomial)> = BTreeSet::new();
    for img in &images {
        for (k, p) in img.iter().enumerate() {
            for (m, _) in p.terms() {
                support.insert((k, *m));
            }
        }
    }
    let support: Vec<(usize, Monomial)> = support.into_iter().collect();
    // Columns are generators, so the kernel is the kernel of T directly.
    let t = Matrix::from_fn(support.len(), basis.len(), |r, c| images[c][support[r].0].coeff(&support[r].1));
    let rank = exactla::rank(&t);
    let kernel = exactla::kernel(&t).basis;
    let kernel_names = kernel.iter().map(|v| combination_name(v, &names)).collect();
    let kernel_in_so4_so3 = kernel.iter().all(|v| v.iter().zip(&names).all(|(c, n)| !n.starts_with('W') || c.is_zero()));
    let listed: Vec<Matrix> = KERNEL_ELEMENTS.iter().map(|terms| so7_combination(terms)).collect();
    let listed_in_kernel = KERNEL_ELEMENTS
        .iter()
        .zip(&listed)
        .map(|(terms, m)| {
            let label = linear_text(terms.iter().map(|(n, c)| (c.to_string(), *n)));
            (label, killing_components(m).iter().all(|p| p.is_zero()))
        })
        .collect();
    let coords = |m: &Matrix| -> Vec<FieldElem> {
        basis
            .iter()
            .map(|g| {
                let (i, j) = (0..7).flat_map(|i| (0..7).map(move |j| (i, j))).find(|&(i, j)| g.matrix.get(i, j).is_one()).unwrap();
                m.get(i, j).clone()
            })
            .collect()
    };
    let mut stacked: Vec<Vec<FieldElem>> = listed.iter().map(coords).collect();
    let listed_rank = exactla::rank(&Matrix::from_rows(stacked.clone()));
    stacked.extend(kernel.iter().cloned());
    let joint_rank = exactla::rank(&Matrix::from_rows(stacked));
    let listed_span_kernel = listed_rank == kernel.len() && joint_rank == kernel.len();
    let scale = sqrt_q(8, 15);
    let mut table1 = Vec::new();
    for (gname, row5, row6) in TABLE1 {
        let idx = names.iter().position(|n| n == gname).unwrap();
        for (frame, row) in [(5usize, row5), (6, row6)] {
            let expected = EuclidPoly::from_terms(row.iter().map(|(c, e)| (Monomial(*e), FieldElem::from_int(*c))));
            let expected = reduce_sphere(&expected, &base_r2());
            let computed = images[idx][frame - 4].scale(&scale);
            let status = if computed == expected {
                TableStatus::Match
            } else if computed == -&expected {
                TableStatus::SignFlipped
            } else {
                TableStatus::Mismatch
            };
            table1.push(TableEntry { generator: gname.into(), frame, expected, computed, status });
        }
    }
    KillingReport { rank, kernel, kernel_names, listed_in_kernel, listed_span_kernel, kernel_in_so4_so3, table1 }
}

/// `⟨νA, e₄⟩ = −(27/8)·x·W·(x₁²+y₁²−x₂²−y₂², 2(x₁x₂+y₁y₂), 2(x₂y₁−x₁y₂))ᵗ`
/// for `A = [[J, W], [−Wᵗ, K]]`, checked pointwise.
pub fn killing_e4_formula_check(a: &Matrix, points: &[[Rational; 4]]) -> Check {
    let mut check = Check::new("e4 Killing formula");
    let qd = quadrics();
    let lhs_poly = {
        let nu = frame(FrameLabel::Nu).components;
        let e4 = frame(FrameLabel::E4).components;
        (0..7).fold(EuclidPoly::zero(), |acc, col| {
            let na = (0..7).fold(EuclidPoly::zero(), |s, row| &s + &nu[row].scale(a.get(row, col)));
            &acc + &(&na * &e4[col])
        })
    };
    let two = FieldElem::from_int(2);
    let qv = [qd.a.clone(), qd.r.scale(&two), qd.s.scale(&two)];
    for p in points {
        let b = to_field(p);
        let qb: Vec<FieldElem> = qv.iter().map(|f| f.eval(&b)).collect();
        let mut rhs = FieldElem::zero();
        for (i, bi) in b.iter().enumerate() {
            for (j, qj) in qb.iter().enumerate() {
                rhs += &(&(bi * a.get(i, 4 + j)) * qj);
            }
        }
        let rhs = &rhs * &q(-27, 8);
        let lhs = lhs_poly.eval(&b);
        check.record(lhs == rhs, || format!("at {:?}: {} vs {}", p, lhs.pretty(), rhs.pretty()));
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gq(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn basepoint_frames() {
        let b = basepoint_b0();
        assert_eq!(basepoint(), [q(2, 3), q(0, 1), q(0, 1), q(0, 1), &sqrt5() * &q(1, 3), q(0, 1), q(0, 1)]);
        let e2 = frame(FrameLabel::E2).eval(&b);
        assert_eq!(e2[2], sqrt_q(1, 6));
        assert_eq!(e2[5], sqrt_q(5, 6));
        let e4 = frame(FrameLabel::E4).eval(&b);
        assert_eq!(e4[0], &sqrt5() * &q(1, 3));
        assert_eq!(e4[4], q(-2, 3));
    }

    #[test]
    fn stereographic() {
        let r = rat(2, 3);
        assert_eq!(inverse_stereographic(&[rat(0, 1), rat(0, 1), rat(0, 1)], &r), [rat(0, 1), rat(0, 1), rat(0, 1), rat(-2, 3)]);
        assert_eq!(inverse_stereographic(&[rat(1, 1), rat(0, 1), rat(0, 1)], &r), [rat(2, 3), rat(0, 1), rat(0, 1), rat(0, 1)]);
        let pts = rational_sphere_points(60, &r);
        assert_eq!(pts.len(), 60);
        let distinct: BTreeSet<_> = pts.iter().map(|p| format!("{p:?}")).collect();
        assert_eq!(distinct.len(), 60);
        assert!(pts.iter().all(|p| p.iter().map(|c| c * c).sum::<Rational>() == rat(4, 9)));
    }

    #[test]
    fn orthonormal_frames() {
        let c = frame_orthonormality(&rational_sphere_points(12, &base_radius()));
        assert!(c.passed(), "{:?}", c.failures);
        let c = complex_frame_consistency(&rational_sphere_points(8, &base_radius()));
        assert!(c.passed(), "{:?}", c.failures);
    }

    #[test]
    fn connection_examples() {
        let t = connection_coefficients();
        let s5 = sqrt5();
        assert_eq!(t.get(1, 1), &Expansion::from_pairs(&[(4, &s5 * &q(-1, 2))], FieldElem::from_int(-1)));
        assert!(t.get(2, 6).coeffs[3..].iter().all(|c| c.is_zero()));
        assert_eq!(t.get(1, 5).coeffs[5], q(-7, 4));
        assert!(t.differences(&reference_connection_table()).is_empty());
        assert!(t.structure_checks().passed());
    }

    #[test]
    fn shape_operator() {
        let r = shape_operator_checks(&connection_coefficients());
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.btilde[0][0], q(15, 8));
        assert_eq!(r.btilde[2][2], q(5, 8));
    }

    #[test]
    fn phi_examples() {
        let id = phi_hom(&Quaternion::one()).unwrap();
        assert!(is_orthogonal(&id) && id[0][0] == rat(1, 1) && id[0][1] == rat(0, 1));
        let p = Quaternion::new(gq((3, 5), (0, 1)), gq((4, 5), (0, 1)));
        assert_eq!(phi_hom(&p).unwrap()[0][0], rat(-7, 25));
        let qq = Quaternion::new(gq((5, 13), (0, 1)), gq((0, 1), (12, 13)));
        assert_eq!(phi_hom(&p.mul(&qq)).unwrap(), mat3_mul(&phi_hom(&p).unwrap(), &phi_hom(&qq).unwrap()));
        let off = Quaternion::new(gq((1, 1), (0, 1)), gq((1, 1), (0, 1)));
        assert!(matches!(phi_hom(&off), Err(GeometryError::OffSphere { .. })));
        let j = Quaternion::new(gq((0, 1), (0, 1)), gq((1, 1), (0, 1)));
        let lhs = eta(&p.mul(&j));
        let e = eta(&p);
        let f = phi_hom(&j).unwrap();
        let rhs: [Rational; 3] = std::array::from_fn(|c| (0..3).map(|k| &e[k] * &f[k][c]).sum());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_examples() {
        let p0 = basepoint();
        let xv: [FieldElem; 4] = std::array::from_fn(|k| p0[k].clone());
        let y: [FieldElem; 3] = std::array::from_fn(|k| p0[k + 4].clone());
        assert_eq!(psi_action(&xv, &y, &Quaternion::one()).unwrap(), p0);
        let qq = Quaternion::from_coords(&[rat(1, 2), rat(1, 2), rat(1, 2), rat(-1, 2)]);
        let moved = psi_action(&xv, &y, &qq).unwrap();
        let scaled: [FieldElem; 4] = qq.coords().map(|c| FieldElem::from_rational(c * rat(2, 3)));
        assert_eq!(moved, graph_map(&scaled));
    }

    #[test]
    fn groups_small() {
        for c in group_checks(10) {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }

    #[test]
    fn sphere_reduction() {
        let y2 = x(3);
        let p = &y2 * &y2;
        let r = reduce_sphere(&p, &rat(4, 9));
        assert!(r.terms().all(|(m, _)| m.0[3] < 2));
        assert_eq!(r.coeff(&Monomial([0, 0, 0, 0])), q(4, 9));
    }

    #[test]
    fn killing() {
        let r = killing_map();
        assert_eq!(r.rank, 17);
        assert!(r.passed(), "{r:?}");
        let j13 = r.table1.iter().find(|t| t.generator == "J13" && t.frame == 5).unwrap();
        assert_eq!(j13.status, TableStatus::Match);
    }

    #[test]
    fn e4_formula() {
        let pts = rational_sphere_points(20, &base_radius());
        let zero_w = so7_combination(&[("J12", 3), ("K13", -1)]);
        assert!(killing_e4_formula_check(&zero_w, &pts).passed());
        let mut w = Matrix::zeros(7, 7);
        w.set(0, 4, FieldElem::one());
        w.set(4, 0, -FieldElem::one());
        assert!(killing_e4_formula_check(&w, &pts).passed());
        let generic = so7_combination(&[("W11", 2), ("W23", -3), ("W42", 5), ("J14", 1), ("K23", 7)]);
        assert!(killing_e4_formula_check(&generic, &pts).passed());
        // The formula has no J or K dependence.
        let lhs = killing_components(&so7_combination(&[("J12", 3), ("K13", -1)]));
        assert!(lhs[0].is_zero());
    }
}
