//! The operator `L` on triples of functions on S³ and its matrices `L_k` on
//! `V_k = Q_{k,1} ⊕ Q_{k,2} ⊕ Q_{k,3}`.
//!
//! With `Δ = Δ_{1/6}` (Berger Laplacian),
//!
//! ```text
//!     | −(Δ+10)   √6∂₂   √6∂₃ |
//! L = | −√6∂₂     −Δ     −14∂₁ |
//!     | −√6∂₃     14∂₁   −Δ    |
//! ```
//!
//! Matrices follow `L𝔖̂ = 𝔖̂L_k`: column `j` of `L_k` holds the coordinates of
//! `L` applied to the `j`-th basis triple. Jacobi-operator eigenvalues are
//! `(3/8)` times eigenvalues of `L`.

use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{self, CharPoly, Inertia, LaError, Matrix};
use crate::floatoracle::{self, FloatMatrix, OracleError};
use crate::harmonic::{self, BasisFamily, HarmonicError, Provenance};
use crate::numfield::{rat, FieldElem, Rational};
use crate::polyops::{apply_derivation, laplacian_berger, laplacian_round, Der, SpherePoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JacobiError {
    #[error("L(column {column}) leaves V_k: {source}")]
    Expansion { column: usize, source: LaError },
    #[error("basis has degree {found}, expected {expected}")]
    Degree { expected: u32, found: u32 },
    #[error("k = {k} exceeds the configured limit {limit}")]
    ResourceLimit { k: u32, limit: u32 },
    #[error(transparent)]
    Basis(#[from] HarmonicError),
    #[error(transparent)]
    Linear(#[from] LaError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A section `(f₁, f₂, f₃)` of the trivialized normal bundle.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TripleField {
    pub components: [SpherePoly; 3],
}

impl TripleField {
    pub fn new(f1: SpherePoly, f2: SpherePoly, f3: SpherePoly) -> Self {
        TripleField { components: [f1, f2, f3] }
    }

    /// `f` placed in slot `s`, zero elsewhere.
    pub fn unit(slot: usize, f: SpherePoly) -> Self {
        let mut t = TripleField::default();
        t.components[slot] = f;
        t
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        TripleField { components: self.components.clone().map(|f| f.scale(c)) }
    }
}

fn tau() -> Rational {
    rat(1, 6)
}

pub fn apply_l(x: &TripleField) -> TripleField {
    let [f1, f2, f3] = &x.components;
    let s6 = FieldElem::sqrt_radicand(6).expect("6 is a radicand");
    let lap = |f: &SpherePoly| laplacian_berger(f, &tau()).expect("tau > 0");
    let d = |k: Der, f: &SpherePoly| apply_derivation(k, f);
    let c = |n: i64| FieldElem::from_int(n);
    let g1 = &(&(-&lap(f1)) - &f1.scale(&c(10))) + &(&d(Der::D2, f2).scale(&s6) + &d(Der::D3, f3).scale(&s6));
    let g2 = &(&d(Der::D2, f1).scale(&-&s6) - &lap(f2)) - &d(Der::D1, f3).scale(&c(14));
    let g3 = &(&d(Der::D3, f1).scale(&-&s6) + &d(Der::D1, f2).scale(&c(14))) - &lap(f3);
    TripleField::new(g1, g2, g3)
}

/// Componentwise `−Δ` for the round metric.
pub fn apply_ltilde(x: &TripleField) -> TripleField {
    TripleField { components: x.components.clone().map(|f| -&laplacian_round(&f)) }
}

/// `L_k` in a basis of `Q_k`, repeated over the three slots.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub k: u32,
    pub provenance: Provenance,
    pub entries: Matrix,
}

impl OperatorMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.rows()
    }

    /// `S⁻¹ L_k S` with `S = diag(√6·I, I, I)`; same characteristic polynomial,
    /// entries free of `√6` for bases with Gaussian-rational derivation matrices.
    pub fn balanced(&self) -> Matrix {
        let n = self.dimension() / 3;
        let s6 = FieldElem::sqrt_radicand(6).expect("6 is a radicand");
        let inv = s6.inverse().expect("nonzero");
        Matrix::from_fn(3 * n, 3 * n, |i, j| {
            let e = self.entries.get(i, j);
            match (i < n, j < n) {
                (true, false) => e * &inv,
                (false, true) => e * &s6,
                _ => e.clone(),
            }
        })
    }

    pub fn charpoly(&self) -> Result<CharPoly, LaError> {
        exactla::charpoly(&self.balanced())
    }
}

fn basis_columns(basis: &BasisFamily) -> Result<(Vec<crate::polyops::Monomial>, exactla::SpanSolver), LaError> {
    basis.span_solver()
}

/// Columns are expanded by an exact solve in monomial coordinates.
pub fn assemble_matrix(k: u32, basis: &BasisFamily) -> Result<OperatorMatrix, JacobiError> {
    if basis.k != k {
        return Err(JacobiError::Degree { expected: k, found: basis.k });
    }
    let (monos, solver) = basis_columns(basis)?;
    let vectors: Vec<&SpherePoly> = basis.vectors().collect();
    let n = vectors.len();
    let columns: Vec<Vec<FieldElem>> = (0..3 * n)
        .into_par_iter()
        .map(|col| {
            let image = apply_l(&TripleField::unit(col / n, vectors[col % n].clone()));
            let mut out = Vec::with_capacity(3 * n);
            for f in &image.components {
                let coords = harmonic::monomial_coords(f, &monos)
                    .and_then(|v| solver.coords(&v))
                    .map_err(|source| JacobiError::Expansion { column: col, source })?;
                out.extend(coords);
            }
            Ok(out)
        })
        .collect::<Result<_, JacobiError>>()?;
    let entries = Matrix::from_fn(3 * n, 3 * n, |i, j| columns[j][i].clone());
    Ok(OperatorMatrix { k, provenance: basis.provenance, entries })
}

pub fn operator_matrix(k: u32, provenance: Provenance) -> Result<OperatorMatrix, JacobiError> {
    assemble_matrix(k, &harmonic::basis(k, provenance)?)
}

pub fn check_hermitian(m: &OperatorMatrix) -> bool {
    m.entries.is_hermitian()
}

/// Eigenvalue of the Jacobi operator corresponding to an eigenvalue of `L`.
pub fn jacobi_eigenvalue(mu: &FieldElem) -> FieldElem {
    mu.scale(&rat(3, 8))
}

pub fn jacobi_eigenvalue_q(mu: &Rational) -> Rational {
    mu * rat(3, 8)
}

/// `[A₁, A₂, A₃]` with `∂ᵢ𝔖 = 𝔖Aᵢ`.
pub fn derivation_matrices(basis: &BasisFamily) -> Result<[Matrix; 3], JacobiError> {
    let (monos, solver) = basis_columns(basis)?;
    let vectors: Vec<&SpherePoly> = basis.vectors().collect();
    let n = vectors.len();
    let one = |d: Der| -> Result<Matrix, JacobiError> {
        let cols: Vec<Vec<FieldElem>> = vectors
            .par_iter()
            .enumerate()
            .map(|(j, f)| {
                harmonic::monomial_coords(&apply_derivation(d, f), &monos)
                    .and_then(|v| solver.coords(&v))
                    .map_err(|source| JacobiError::Expansion { column: j, source })
            })
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_fn(n, n, |i, j| cols[j][i].clone()))
    };
    Ok([one(Der::D1)?, one(Der::D2)?, one(Der::D3)?])
}

/// Block-diagonal Gram matrix on `V_k`: `G[i][j] = ⟨b_j, b_i⟩` in each slot.
pub fn triple_gram(basis: &BasisFamily) -> Matrix {
    let g = harmonic::gram(basis);
    let n = g.rows();
    let mut out = Matrix::zeros(3 * n, 3 * n);
    for s in 0..3 {
        out.set_block(s * n, s * n, &g);
    }
    out
}

/// The Hermitian form `(X, Y) ↦ ⟨LX, Y⟩` on `V_k` in the given basis: `Ĝ·L_k`.
pub fn hermitian_form(m: &OperatorMatrix, gram: &Matrix) -> Matrix {
    gram.mul(&m.entries)
}

/// Inertia of `L_k` in any basis, read off the congruent Hermitian form `S·Ĝ·L_k·S`.
pub fn operator_inertia(m: &OperatorMatrix, basis: &BasisFamily) -> Result<Inertia, JacobiError> {
    let hc = congruence(&hermitian_form(m, &triple_gram(basis)));
    if !hc.is_hermitian() {
        return Err(LaError::NotHermitian.into());
    }
    Ok(exactla::inertia(&hc)?)
}

/// `S·H·S` with `S = diag(√6·I, I, I)`.
fn congruence(h: &Matrix) -> Matrix {
    let n = h.rows() / 3;
    let s6 = FieldElem::sqrt_radicand(6).expect("6 is a radicand");
    let six = FieldElem::from_int(6);
    Matrix::from_fn(3 * n, 3 * n, |i, j| {
        let e = h.get(i, j);
        match (i < n, j < n) {
            (true, true) => e * &six,
            (true, false) | (false, true) => e * &s6,
            _ => e.clone(),
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositivityMethod {
    ExactInertia,
    FloatBound,
}

/// Lower bound on the spectrum used in the positivity argument for `k ≥ 5`.
pub fn positivity_bound() -> Rational {
    rat(3, 2)
}

pub const FLOAT_BOUND_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub k: u32,
    pub dimension: usize,
    pub method: PositivityMethod,
    pub inertia: Option<Inertia>,
    pub float_min: Option<f64>,
    pub residual_bound: Option<f64>,
    pub passed: bool,
}

/// Positivity of `L_k` on a generated basis, judged through the Hermitian form
/// `Ĝ·L_k` (exact inertia) or the generalized eigenproblem `L_k x = Ĝ⁻¹H x` (float).
pub fn positivity_check(k: u32, method: PositivityMethod, limit: u32) -> Result<PositivityReport, JacobiError> {
    if k > limit {
        return Err(JacobiError::ResourceLimit { k, limit });
    }
    let basis = harmonic::generated_basis(k);
    let m = assemble_matrix(k, &basis)?;
    let dimension = m.dimension();
    match method {
        PositivityMethod::ExactInertia => {
            let inertia = operator_inertia(&m, &basis)?;
            Ok(PositivityReport {
                k,
                dimension,
                method,
                passed: inertia.is_positive_definite(),
                inertia: Some(inertia),
                float_min: None,
                residual_bound: None,
            })
        }
        PositivityMethod::FloatBound => {
            let gram = triple_gram(&basis);
            let h = hermitian_form(&m, &gram);
            let spec = floatoracle::generalized_spectrum(&FloatMatrix::from_exact(&h)?, &FloatMatrix::from_exact(&gram)?)?;
            let min = spec.min();
            let bound = 1.5 - FLOAT_BOUND_TOLERANCE;
            Ok(PositivityReport {
                k,
                dimension,
                method,
                inertia: None,
                float_min: Some(min),
                residual_bound: Some(spec.residual_bound),
                passed: min >= bound,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;
    use crate::polyops::Monomial;

    fn poly(terms: &[([u32; 4], FieldElem)]) -> SpherePoly {
        SpherePoly::from_terms(terms.iter().map(|(m, c)| (Monomial(*m), c.clone())))
    }

    #[test]
    fn apply_l_examples() {
        let one = SpherePoly::one();
        let out = apply_l(&TripleField::unit(0, one.clone()));
        assert_eq!(out, TripleField::unit(0, one.scale(&FieldElem::from_int(-10))));
        assert_eq!(apply_l(&TripleField::unit(1, one.clone())), TripleField::default());
        let z = SpherePoly::var(0);
        let s6 = FieldElem::sqrt_radicand(6).unwrap();
        let wb = [0, 0, 0, 1];
        let expected = TripleField::new(
            z.scale(&FieldElem::from_int(-2)),
            poly(&[(wb, s6.clone())]),
            poly(&[(wb, &FieldElem::i() * &s6)]),
        );
        assert_eq!(apply_l(&TripleField::unit(0, z)), expected);
    }

    #[test]
    fn apply_ltilde_examples() {
        let z = SpherePoly::var(0);
        let three = FieldElem::from_int(3);
        assert_eq!(apply_ltilde(&TripleField::unit(0, z.clone())), TripleField::unit(0, z.scale(&three)));
        let ones = TripleField::new(SpherePoly::one(), SpherePoly::one(), SpherePoly::one());
        assert_eq!(apply_ltilde(&ones), TripleField::default());
        let f = &harmonic::reference_basis(2).unwrap().blocks[2].vectors[1];
        let x = TripleField::new(f.clone(), SpherePoly::zero(), f.clone());
        assert_eq!(apply_ltilde(&x), x.scale(&FieldElem::from_int(8)));
    }

    #[test]
    fn inertia_is_basis_independent() {
        for k in 0..=3 {
            for p in [Provenance::Paper, Provenance::Generated] {
                let b = harmonic::basis(k, p).unwrap();
                let m = assemble_matrix(k, &b).unwrap();
                assert_eq!(operator_inertia(&m, &b).unwrap(), golden::inertia(k).unwrap(), "k={k} {p}");
            }
        }
    }

    #[test]
    fn small_matrices_match_printed() {
        for k in 0..=2 {
            let m = operator_matrix(k, Provenance::Paper).unwrap();
            assert_eq!(m.entries, golden::printed_matrix(k).unwrap(), "k={k}");
            assert!(check_hermitian(&m));
        }
    }

    #[test]
    fn derivation_matrices_match_printed() {
        for k in 0..=2 {
            let a = derivation_matrices(&harmonic::reference_basis(k).unwrap()).unwrap();
            assert_eq!(a, golden::derivation_matrices(k).unwrap(), "k={k}");
        }
    }

    #[test]
    fn jacobi_scaling() {
        assert_eq!(jacobi_eigenvalue_q(&rat(-10, 1)), rat(-15, 4));
        assert_eq!(jacobi_eigenvalue(&FieldElem::from_int(-8)), FieldElem::from_int(-3));
        assert!(jacobi_eigenvalue(&FieldElem::zero()).is_zero());
    }

    #[test]
    fn generated_basis_is_not_hermitian_but_similar() {
        let g = operator_matrix(2, Provenance::Generated).unwrap();
        let p = operator_matrix(2, Provenance::Paper).unwrap();
        assert!(!check_hermitian(&g));
        assert_eq!(g.charpoly().unwrap(), p.charpoly().unwrap());
        assert_eq!(exactla::charpoly(&p.entries).unwrap(), p.charpoly().unwrap());
    }

    #[test]
    fn degree_mismatch() {
        let b = harmonic::generated_basis(1);
        assert!(matches!(assemble_matrix(2, &b), Err(JacobiError::Degree { .. })));
        assert!(matches!(
            positivity_check(9, PositivityMethod::ExactInertia, 6),
            Err(JacobiError::ResourceLimit { k: 9, limit: 6 })
        ));
    }

    #[test]
    fn positivity_route_agrees_on_small_k() {
        // L₁ has inertia (4, 4, 4); the Gram route must see the same signature.
        let r = positivity_check(1, PositivityMethod::ExactInertia, 6).unwrap();
        assert_eq!(r.inertia, Some(Inertia::new(4, 4, 4)));
        assert!(!r.passed);
        let f = positivity_check(1, PositivityMethod::FloatBound, 6).unwrap();
        assert!((f.float_min.unwrap() + 8.0).abs() < 1e-9);
    }
}
