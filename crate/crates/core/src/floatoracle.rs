//! Double-precision Hermitian eigensolver used to cross-check exact spectra.
//!
//! An `n×n` Hermitian `H = A + iB` is embedded as the real symmetric
//! `[[A, −B], [B, A]]`, which has every eigenvalue of `H` twice, and
//! diagonalized by cyclic Jacobi rotations.

use num::complex::Complex64;
use thiserror::Error;

use crate::exactla::{CharPoly, Inertia, Matrix};
use crate::numfield::{field_to_float, rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not square")]
    NotSquare,
    #[error("no convergence after {0} sweeps")]
    NoConvergence(usize),
    #[error("characteristic polynomial has non-rational coefficients")]
    NonRational,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl FloatMatrix {
    pub fn zeros(n: usize) -> Self {
        FloatMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_exact(m: &Matrix) -> Result<Self, OracleError> {
        if !m.is_square() {
            return Err(OracleError::NotSquare);
        }
        let n = m.rows();
        Ok(FloatMatrix { n, data: m.entries().iter().map(|x| field_to_float(x, 53)).collect() })
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }
}

/// Eigenvalues sorted ascending, with eigenvectors as columns in the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatSpectrum {
    pub eigenvalues: Vec<f64>,
    /// max ‖Hv − λv‖ over the computed unit eigenvectors.
    pub residual_bound: f64,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub sweeps: usize,
}

impl FloatSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    /// Counts below `−tol`, within `±tol`, above `tol`.
    pub fn sign_counts(&self, tol: f64) -> Inertia {
        let minus = self.eigenvalues.iter().filter(|&&x| x < -tol).count();
        let plus = self.eigenvalues.iter().filter(|&&x| x > tol).count();
        Inertia::new(plus, self.eigenvalues.len() - plus - minus, minus)
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi on a real symmetric matrix; returns (eigenvalues, eigenvector columns, sweeps).
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>, usize), OracleError> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-14 * norm.max(f64::MIN_POSITIVE);
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    for sweep in 0..=MAX_SWEEPS {
        if off(&a) < target {
            let evals = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((evals, v, sweep));
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(OracleError::NoConvergence(MAX_SWEEPS))
}

/// Spectrum of a float Hermitian matrix.
pub fn hermitian_spectrum(h: &FloatMatrix) -> Result<FloatSpectrum, OracleError> {
    let n = h.n;
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h.get(i, j);
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let (evals, v, sweeps) = jacobi_symmetric(a, m)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| evals[x].total_cmp(&evals[y]));
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residual_bound: f64 = 0.0;
    for pair in order.chunks(2) {
        let lambda = 0.5 * (evals[pair[0]] + evals[pair[1]]);
        let col = pair[0];
        let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(v[i * m + col], v[(i + n) * m + col])).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x.iter_mut().for_each(|z| *z /= norm);
        let hx = h.mul_vec(&x);
        let r = hx.iter().zip(&x).map(|(a, b)| (a - b * lambda).norm_sqr()).sum::<f64>().sqrt();
        residual_bound = residual_bound.max(r);
        eigenvalues.push(lambda);
        eigenvectors.push(x);
    }
    Ok(FloatSpectrum { eigenvalues, residual_bound, eigenvectors, sweeps })
}

/// Float spectrum of an exact Hermitian matrix.
pub fn float_spectrum(m: &Matrix) -> Result<FloatSpectrum, OracleError> {
    if !m.is_square() {
        return Err(OracleError::NotSquare);
    }
    if !m.is_hermitian() {
        return Err(OracleError::NotHermitian);
    }
    hermitian_spectrum(&FloatMatrix::from_exact(m)?)
}

/// Lower-triangular `C` with `G = C·C*`.
pub fn cholesky(g: &FloatMatrix) -> Result<FloatMatrix, OracleError> {
    let n = g.n;
    let mut c = FloatMatrix::zeros(n);
    for j in 0..n {
        let d = g.get(j, j).re - (0..j).map(|k| c.get(j, k).norm_sqr()).sum::<f64>();
        if d <= 0.0 {
            return Err(OracleError::NotPositiveDefinite);
        }
        let d = d.sqrt();
        c.set(j, j, Complex64::new(d, 0.0));
        for i in j + 1..n {
            let s: Complex64 = (0..j).map(|k| c.get(i, k) * c.get(j, k).conj()).sum();
            c.set(i, j, (g.get(i, j) - s) / d);
        }
    }
    Ok(c)
}

/// Eigenvalues of `G⁻¹H` for Hermitian `H` and positive definite `G`, via `C⁻¹ H C⁻*`.
pub fn generalized_spectrum(h: &FloatMatrix, g: &FloatMatrix) -> Result<FloatSpectrum, OracleError> {
    let n = h.n;
    let c = cholesky(g)?;
    // Y = C⁻¹ H by forward substitution on each column.
    let mut y = FloatMatrix::zeros(n);
    for col in 0..n {
        for i in 0..n {
            let s: Complex64 = (0..i).map(|k| c.get(i, k) * y.get(k, col)).sum();
            y.set(i, col, (h.get(i, col) - s) / c.get(i, i));
        }
    }
    // K = Y C⁻*, i.e. K* = C⁻¹ Y*; K is Hermitian so solve rows.
    let mut k = FloatMatrix::zeros(n);
    for row in 0..n {
        for j in 0..n {
            let s: Complex64 = (0..j).map(|l| k.get(row, l) * c.get(j, l).conj()).sum();
            k.set(row, j, (y.get(row, j) - s) / c.get(j, j));
        }
    }
    for i in 0..n {
        for j in i..n {
            let avg = 0.5 * (k.get(i, j) + k.get(j, i).conj());
            k.set(i, j, avg);
            k.set(j, i, avg.conj());
        }
    }
    hermitian_spectrum(&k)
}

/// One distinct exact root with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRoot {
    pub value: f64,
    pub exact: Option<String>,
    pub multiplicity: usize,
    pub matched: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumComparison {
    pub roots: Vec<ExactRoot>,
    pub offending: Vec<String>,
    pub float_inertia: Inertia,
    pub exact_inertia: Option<Inertia>,
}

impl SpectrumComparison {
    pub fn passed(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Exact real roots of a rational characteristic polynomial, with multiplicities.
pub fn exact_roots(p: &CharPoly) -> Result<Vec<ExactRoot>, OracleError> {
    let q = p.to_rational().ok_or(OracleError::NonRational)?;
    let eps = rat(1, 1 << 40);
    let mut roots = Vec::new();
    for (factor, mult) in q.squarefree_decomposition() {
        for r in factor.real_roots(&eps) {
            roots.push(ExactRoot { value: r.midpoint(), exact: r.exact().map(|x| x.to_string()), multiplicity: mult, matched: 0 });
        }
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(roots)
}

/// Greedy nearest matching of sorted float values onto expected slots; returns offending entries.
pub fn match_values(expected: &[f64], approx: &[f64], tol: f64) -> (Vec<usize>, Vec<String>) {
    let mut offending = Vec::new();
    if expected.len() != approx.len() {
        offending.push(format!("expected {} eigenvalues, found {}", expected.len(), approx.len()));
    }
    let mut sorted = approx.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut used = vec![false; expected.len()];
    let mut assignment = Vec::with_capacity(sorted.len());
    for &x in &sorted {
        let best = (0..expected.len()).filter(|&i| !used[i]).min_by(|&i, &j| {
            (expected[i] - x).abs().total_cmp(&(expected[j] - x).abs()).then(i.cmp(&j))
        });
        match best {
            Some(i) => {
                used[i] = true;
                assignment.push(i);
                if (expected[i] - x).abs() > tol {
                    offending.push(format!("{x} is {:.3e} from nearest root {}", (expected[i] - x).abs(), expected[i]));
                }
            }
            None => offending.push(format!("{x} has no root left to match")),
        }
    }
    (assignment, offending)
}

pub fn compare_spectra(
    exact: &CharPoly,
    inertia: Option<&Inertia>,
    approx: &FloatSpectrum,
    tol: f64,
) -> Result<SpectrumComparison, OracleError> {
    let mut roots = exact_roots(exact)?;
    let mut slots = Vec::new();
    let mut owner = Vec::new();
    for (ri, r) in roots.iter().enumerate() {
        for _ in 0..r.multiplicity {
            slots.push(r.value);
            owner.push(ri);
        }
    }
    let (assignment, mut offending) = match_values(&slots, &approx.eigenvalues, tol);
    for a in assignment {
        roots[owner[a]].matched += 1;
    }
    if slots.len() != exact.degree() {
        offending.push(format!("only {} of {} roots are real", slots.len(), exact.degree()));
    }
    for r in &roots {
        if r.matched != r.multiplicity {
            offending.push(format!("root {} has multiplicity {} but {} float matches", r.value, r.multiplicity, r.matched));
        }
    }
    let float_inertia = approx.sign_counts(tol);
    if let Some(i) = inertia {
        if *i != float_inertia {
            offending.push(format!("float sign counts {float_inertia} differ from exact inertia {i}"));
        }
    }
    Ok(SpectrumComparison { roots, offending, float_inertia, exact_inertia: inertia.copied() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{charpoly, inertia};
    use crate::numfield::FieldElem;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal() {
        let m = Matrix::diag(&[FieldElem::from_int(3), FieldElem::from_int(1), FieldElem::from_int(2)]);
        let s = float_spectrum(&m).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert!(s.residual_bound < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = Matrix::from_rows(vec![
            vec![FieldElem::from_int(2), FieldElem::i()],
            vec![-FieldElem::i(), FieldElem::from_int(2)],
        ]);
        let s = float_spectrum(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-13 && (s.eigenvalues[1] - 3.0).abs() < 1e-13);
        assert!(s.residual_bound < 1e-13);
        let p = charpoly(&m).unwrap();
        let cmp = compare_spectra(&p, Some(&inertia(&m).unwrap()), &s, 1e-9).unwrap();
        assert!(cmp.passed(), "{:?}", cmp.offending);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::from_rows(vec![vec![FieldElem::zero(), FieldElem::one()], vec![FieldElem::zero(), FieldElem::zero()]]);
        assert_eq!(float_spectrum(&m), Err(OracleError::NotHermitian));
    }

    #[test]
    fn generalized_matches_direct() {
        let g = FloatMatrix { n: 2, data: vec![c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)] };
        let h = FloatMatrix { n: 2, data: vec![c(2.0, 0.0), c(5.0, 0.0), c(5.0, 0.0), c(10.0, 0.0)] };
        let s = generalized_spectrum(&h, &g).unwrap();
        // det(H − λG) = (2−2λ)(10−2λ) − (5−λ)² = 3λ² − 14λ − 5, roots −1/3 and 5.
        assert!((s.eigenvalues[0] + 1.0 / 3.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_reported() {
        let m = Matrix::diag(&[FieldElem::from_int(1), FieldElem::from_int(1)]);
        let p = charpoly(&Matrix::diag(&[FieldElem::from_int(1), FieldElem::from_int(2)])).unwrap();
        let s = float_spectrum(&m).unwrap();
        let cmp = compare_spectra(&p, None, &s, 1e-9).unwrap();
        assert!(!cmp.passed());
    }

    #[test]
    fn trace_matches_eigenvalue_sum() {
        let mut rng = 12345u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let n = 12;
        let mut h = FloatMatrix::zeros(n);
        for i in 0..n {
            h.set(i, i, c(next(), 0.0));
            for j in i + 1..n {
                let z = c(next(), next());
                h.set(i, j, z);
                h.set(j, i, z.conj());
            }
        }
        let s = hermitian_spectrum(&h).unwrap();
        let sum: f64 = s.eigenvalues.iter().sum();
        assert!((sum - h.trace().re).abs() < 1e-9 * n as f64 * h.frobenius());
        assert!(s.residual_bound < 1e-12);
    }
}
