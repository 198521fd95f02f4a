//! Exact dense linear algebra over [`FieldElem`].
//!
//! Characteristic polynomials come from the Faddeev–LeVerrier trace
//! recursion, cross-checked by fraction-free elimination on `λI − M`.
//! Inertia uses an LDL* factorization with symmetric pivoting.

mod poly;

pub use poly::{CharPoly, FPoly, QPoly, RootInterval};

use rayon::prelude::*;
use thiserror::Error;

use crate::numfield::{FieldElem, Rational, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("vector is not in the span")]
    NotInSpan,
    #[error("polynomial has non-rational coefficients")]
    IrrationalCoefficients,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Dense row-major matrix over the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![FieldElem::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { FieldElem::one() } else { FieldElem::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> FieldElem) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diag(entries: &[FieldElem]) -> Self {
        Self::from_fn(entries.len(), entries.len(), |i, j| if i == j { entries[i].clone() } else { FieldElem::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    /// Copy `block` into the submatrix starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn conj_transpose(&self) -> Matrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &FieldElem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "inner dimensions");
        let rows: Vec<Vec<FieldElem>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                let mut acc = vec![FieldElem::zero(); o.cols];
                for (l, a) in self.row(i).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in o.row(l).iter().enumerate() {
                        if !b.is_zero() {
                            acc[j] += &(a * b);
                        }
                    }
                }
                acc
            })
            .collect();
        Matrix { rows: self.rows, cols: o.cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        (0..self.rows)
            .map(|i| {
                let mut acc = FieldElem::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> FieldElem {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Exact test `M[i][j] = conj(M[j][i])`.
    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    /// `(M, [(i, j, value)])` listing of nonzero entries in row-major order.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, FieldElem)>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect()
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination; the pivot is the first nonzero entry of the column.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow = a[r].clone();
        a.par_iter_mut().enumerate().for_each(|(i, row)| {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: Matrix::from_rows(if rows == 0 { vec![] } else { a }), pivots }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).pivots.len()
}

/// Kernel of a matrix with a deterministic basis.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub dimension: usize,
    /// Basis vectors, themselves in reduced echelon form.
    pub basis: Vec<Vec<FieldElem>>,
}

pub fn kernel(m: &Matrix) -> Kernel {
    let r = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !r.pivots.contains(c)).collect();
    let raw: Vec<Vec<FieldElem>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![FieldElem::zero(); m.cols];
            v[f] = FieldElem::one();
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix.get(row, f);
            }
            v
        })
        .collect();
    let basis = if raw.is_empty() {
        raw
    } else {
        let red = rref(&Matrix::from_rows(raw));
        red.matrix.to_rows().into_iter().take(red.pivots.len()).collect()
    };
    Kernel { dimension: basis.len(), basis }
}

pub fn inverse(m: &Matrix) -> Result<Matrix, LaError> {
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            FieldElem::one()
        } else {
            FieldElem::zero()
        }
    });
    let r = rref(&aug);
    if r.pivots.len() < n || r.pivots[n - 1] >= n {
        return Err(LaError::Singular);
    }
    Ok(r.matrix.block(0, n, n, n))
}

/// Coordinates of vectors with respect to a fixed linearly independent family.
///
/// The family is stored as columns of an `m × n` matrix `B`. A set of `n`
/// pivot rows making `B[P,:]` invertible is chosen once; every query is then
/// a small matrix-vector product followed by an exact residual check.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    columns: Matrix,
    pivot_rows: Vec<usize>,
    inv: Matrix,
}

impl SpanSolver {
    pub fn new(columns: Matrix) -> Result<Self, LaError> {
        let n = columns.cols;
        let r = rref(&columns.transpose());
        if r.pivots.len() < n {
            return Err(LaError::Dependent);
        }
        let pivot_rows = r.pivots;
        let sub = Matrix::from_fn(n, n, |i, j| columns.get(pivot_rows[i], j).clone());
        let inv = inverse(&sub)?;
        Ok(SpanSolver { columns, pivot_rows, inv })
    }

    pub fn dim(&self) -> usize {
        self.columns.cols
    }

    pub fn ambient(&self) -> usize {
        self.columns.rows
    }

    pub fn coords(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>, LaError> {
        if v.len() != self.columns.rows {
            return Err(LaError::Dimension(format!("expected {} entries, got {}", self.columns.rows, v.len())));
        }
        let picked: Vec<FieldElem> = self.pivot_rows.iter().map(|&p| v[p].clone()).collect();
        let c = self.inv.mul_vec(&picked);
        if self.columns.mul_vec(&c) != v {
            return Err(LaError::NotInSpan);
        }
        Ok(c)
    }
}

/// `(n₊, n₀, n₋)` eigenvalue sign counts of a Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Inertia {
    pub fn new(plus: usize, zero: usize, minus: usize) -> Self {
        Inertia { plus, zero, minus }
    }

    pub fn dimension(&self) -> usize {
        self.plus + self.zero + self.minus
    }

    pub fn is_positive_definite(&self) -> bool {
        self.zero == 0 && self.minus == 0
    }
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.plus, self.zero, self.minus)
    }
}

/// Inertia by symmetric-pivoted LDL*.
///
/// At each step the nonzero diagonal entry of largest magnitude is used as a
/// 1×1 pivot, its sign decided exactly. When the remaining diagonal vanishes
/// but an off-diagonal entry `b` does not, the 2×2 block `[[0, b], [b̄, 0]]`
/// contributes one positive and one negative eigenvalue.
pub fn inertia(m: &Matrix) -> Result<Inertia, LaError> {
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows, m.cols));
    }
    if !m.is_hermitian() {
        return Err(LaError::NotHermitian);
    }
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..m.rows).collect();
    let mut out = Inertia::new(0, 0, 0);
    while !active.is_empty() {
        let best = active
            .iter()
            .copied()
            .filter(|&i| !a[i][i].is_zero())
            .map(|i| (i, a[i][i].to_f64().abs()))
            .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
                Some((_, bv)) if bv >= v => acc,
                _ => Some((i, v)),
            });
        if let Some((p, _)) = best {
            let d = a[p][p].clone();
            match d.sign().map_err(|_| LaError::NotHermitian)? {
                Sign::Positive => out.plus += 1,
                Sign::Negative => out.minus += 1,
                Sign::Zero => unreachable!("pivot is nonzero"),
            }
            active.retain(|&i| i != p);
            let inv = d.inverse().expect("nonzero pivot");
            let col: Vec<FieldElem> = (0..m.rows).map(|i| a[i][p].clone()).collect();
            let rowp = a[p].clone();
            let act = active.clone();
            schur_rows(&mut a, &act, |i, j| {
                if col[i].is_zero() || rowp[j].is_zero() {
                    None
                } else {
                    Some(&(&col[i] * &inv) * &rowp[j])
                }
            });
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(k, &i)| active[k + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
        let Some((p, q)) = pair else {
            out.zero += active.len();
            break;
        };
        out.plus += 1;
        out.minus += 1;
        active.retain(|&i| i != p && i != q);
        let b = a[p][q].clone();
        let inv_b = b.inverse().expect("nonzero");
        let inv_bc = b.conj().inverse().expect("nonzero");
        let cp: Vec<FieldElem> = (0..m.rows).map(|i| a[i][p].clone()).collect();
        let cq: Vec<FieldElem> = (0..m.rows).map(|i| a[i][q].clone()).collect();
        let rp = a[p].clone();
        let rq = a[q].clone();
        let act = active.clone();
        // A_ij −= A_iq A_pj / b + A_ip A_qj / b̄
        schur_rows(&mut a, &act, |i, j| {
            let mut t = FieldElem::zero();
            if !cq[i].is_zero() && !rp[j].is_zero() {
                t += &(&(&cq[i] * &rp[j]) * &inv_b);
            }
            if !cp[i].is_zero() && !rq[j].is_zero() {
                t += &(&(&cp[i] * &rq[j]) * &inv_bc);
            }
            (!t.is_zero()).then_some(t)
        });
    }
    Ok(out)
}

/// Subtract `update(i, j)` from `a[i][j]` for all active `i, j`.
fn schur_rows<F>(a: &mut [Vec<FieldElem>], active: &[usize], update: F)
where
    F: Fn(usize, usize) -> Option<FieldElem> + Sync,
{
    let mut flags = vec![false; a.len()];
    for &i in active {
        flags[i] = true;
    }
    a.par_iter_mut().enumerate().filter(|(i, _)| flags[*i]).for_each(|(i, row)| {
        for &j in active {
            if let Some(u) = update(i, j) {
                row[j] -= &u;
            }
        }
    });
}

/// `det(λI − M)` by the Faddeev–LeVerrier recursion
/// `M_k = A·M_{k−1} + c_{n−k+1}·I`, `c_{n−k} = −tr(A·M_k)/k`.
pub fn charpoly(m: &Matrix) -> Result<CharPoly, LaError> {
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let mut c = vec![FieldElem::zero(); n + 1];
    c[n] = FieldElem::one();
    if n == 0 {
        return Ok(CharPoly::new(c));
    }
    let sparse = m.sparse_rows();
    let mut mk = Matrix::identity(n);
    for k in 1..=n {
        // c_{n−k} = −tr(A·M_k)/k, with M_1 = I
        let tr: FieldElem = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = FieldElem::zero();
                for (l, a) in &sparse[i] {
                    let v = mk.get(*l, i);
                    if !v.is_zero() {
                        acc += &(a * v);
                    }
                }
                acc
            })
            .reduce(FieldElem::zero, |a, b| a + b);
        c[n - k] = -tr.scale(&Rational::new(1.into(), (k as i64).into()));
        if k == n {
            break;
        }
        let am = sparse_mul(&sparse, &mk);
        mk = am;
        for i in 0..n {
            let v = mk.get(i, i) + &c[n - k];
            mk.set(i, i, v);
        }
    }
    Ok(CharPoly::new(c))
}

fn sparse_mul(sparse: &[Vec<(usize, FieldElem)>], b: &Matrix) -> Matrix {
    let rows: Vec<Vec<FieldElem>> = sparse
        .par_iter()
        .map(|row| {
            let mut acc = vec![FieldElem::zero(); b.cols];
            for (l, a) in row {
                for (j, x) in b.row(*l).iter().enumerate() {
                    if !x.is_zero() {
                        acc[j] += &(a * x);
                    }
                }
            }
            acc
        })
        .collect();
    Matrix { rows: sparse.len(), cols: b.cols, data: rows.into_iter().flatten().collect() }
}

/// `det(λI − M)` by Bareiss fraction-free elimination over `F[λ]`.
///
/// The leading principal minors of `λI − M` are monic, so no pivoting is
/// needed and every division is an exact division by a monic polynomial.
pub fn charpoly_bareiss(m: &Matrix) -> Result<CharPoly, LaError> {
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(CharPoly::new(vec![FieldElem::one()]));
    }
    let mut a: Vec<Vec<FPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = FPoly::constant(-m.get(i, j));
                    if i == j {
                        p = p.add(&FPoly::x());
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut prev = FPoly::constant(FieldElem::one());
    for k in 0..n - 1 {
        let akk = a[k][k].clone();
        let rowk = a[k].clone();
        let colk: Vec<FPoly> = (0..n).map(|i| a[i][k].clone()).collect();
        a.par_iter_mut().enumerate().skip(k + 1).for_each(|(i, row)| {
            for j in k + 1..n {
                let num = akk.mul(&row[j]).sub(&colk[i].mul(&rowk[j]));
                let (q, r) = num.divrem_monic(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
        });
        prev = akk;
    }
    Ok(CharPoly::new(a[n - 1][n - 1].coeffs().to_vec()))
}

/// Check `p = Π fᵢ^{mᵢ}` exactly.
pub fn verify_factorization(p: &CharPoly, factors: &[(QPoly, usize)]) -> bool {
    let Some(q) = p.to_rational() else {
        return false;
    };
    let prod = factors.iter().fold(QPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m)));
    prod == q
}

/// Multiplicity of `λ₀` as a root, by repeated synthetic division.
pub fn root_multiplicity(p: &CharPoly, lambda0: &Rational) -> Result<usize, LaError> {
    let q = p.to_rational().ok_or(LaError::IrrationalCoefficients)?;
    Ok(q.root_multiplicity(lambda0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{int, rat};
    use proptest::prelude::*;

    fn f(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    fn sq(d: u32) -> FieldElem {
        FieldElem::sqrt_radicand(d).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f(x)).collect()).collect())
    }

    #[test]
    fn charpoly_small() {
        let z = Matrix::zeros(2, 2);
        assert_eq!(charpoly(&z).unwrap().to_rational().unwrap(), QPoly::monomial(2));
        // [[1,2],[3,4]]: λ² − 5λ − 2
        let m = mat(&[&[1, 2], &[3, 4]]);
        let expected = QPoly::from_ints(&[-2, -5, 1]);
        assert_eq!(charpoly(&m).unwrap().to_rational().unwrap(), expected);
        assert_eq!(charpoly_bareiss(&m).unwrap().to_rational().unwrap(), expected);
    }

    #[test]
    fn charpoly_algorithms_agree_on_irrational_entries() {
        let m = Matrix::from_rows(vec![
            vec![sq(2), FieldElem::i(), f(0)],
            vec![f(1), sq(6), sq(3) * FieldElem::i()],
            vec![f(-2), f(0), sq(5)],
        ]);
        assert_eq!(charpoly(&m).unwrap(), charpoly_bareiss(&m).unwrap());
    }

    #[test]
    fn kernel_and_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel(&m);
        assert_eq!(k.dimension, 1);
        assert!(m.mul_vec(&k.basis[0]).iter().all(FieldElem::is_zero));
        assert_eq!(k.basis[0][0], f(1));
        assert_eq!(kernel(&Matrix::identity(4)).dimension, 0);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn kernel_basis_is_reduced() {
        let m = mat(&[&[0, 1, 1, 0], &[0, 0, 0, 0]]);
        let k = kernel(&m);
        assert_eq!(k.dimension, 3);
        assert_eq!(k.basis[0], vec![f(1), f(0), f(0), f(0)]);
        assert_eq!(k.basis[1], vec![f(0), f(1), f(-1), f(0)]);
    }

    #[test]
    fn inverse_and_span_solver() {
        let m = Matrix::from_rows(vec![vec![sq(2), f(1)], vec![FieldElem::i(), f(3)]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(inverse(&mat(&[&[1, 2], &[2, 4]])), Err(LaError::Singular));
        let cols = Matrix::from_rows(vec![vec![f(1), f(0)], vec![f(1), f(1)], vec![f(0), f(2)]]);
        let s = SpanSolver::new(cols).unwrap();
        assert_eq!(s.coords(&[f(2), f(5), f(6)]).unwrap(), vec![f(2), f(3)]);
        assert_eq!(s.coords(&[f(1), f(0), f(0)]), Err(LaError::NotInSpan));
    }

    #[test]
    fn inertia_basic() {
        assert_eq!(inertia(&Matrix::identity(3).scale(&f(-1))).unwrap(), Inertia::new(0, 0, 3));
        let h = mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]);
        assert_eq!(inertia(&h).unwrap(), Inertia::new(1, 1, 1));
        let nh = Matrix::from_rows(vec![vec![f(0), FieldElem::i()], vec![FieldElem::i(), f(0)]]);
        assert_eq!(inertia(&nh), Err(LaError::NotHermitian));
        // eigenvalues 2 ± √3·… : [[1, √3],[√3, 1]] has eigenvalues 1 ± √3
        let m = Matrix::from_rows(vec![vec![f(1), sq(3)], vec![sq(3), f(1)]]);
        assert_eq!(inertia(&m).unwrap(), Inertia::new(1, 0, 1));
    }

    #[test]
    fn factorization_and_multiplicity() {
        let m = Matrix::zeros(2, 2);
        let p = charpoly(&m).unwrap();
        assert!(verify_factorization(&p, &[(QPoly::from_ints(&[0, 1]), 2)]));
        assert!(!verify_factorization(&p, &[(QPoly::from_ints(&[0, 1]), 1)]));
        assert_eq!(root_multiplicity(&p, &int(0)).unwrap(), 2);
        assert_eq!(root_multiplicity(&p, &int(1)).unwrap(), 0);
        let irr = CharPoly::new(vec![sq(2), f(1)]);
        assert_eq!(root_multiplicity(&irr, &int(0)), Err(LaError::IrrationalCoefficients));
        assert_eq!(root_multiplicity(&CharPoly::new(vec![f(4), f(-4), f(1)]), &rat(2, 1)).unwrap(), 2);
    }

    fn hermitian() -> impl Strategy<Value = Matrix> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((-3i64..4, -3i64..4, 0usize..3), n * n).prop_map(move |v| {
                let e = |k: usize| {
                    let (a, b, r) = v[k];
                    let rad = [1, 2, 6][r];
                    (f(a) + FieldElem::i() * f(b)) * sq(rad)
                };
                Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => e(i * n + j),
                    std::cmp::Ordering::Greater => e(j * n + i).conj(),
                    std::cmp::Ordering::Equal => e(i * n + i).real_part(),
                })
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn sylvester_congruence(m in hermitian(), ds in proptest::collection::vec((1i64..4, -2i64..3), 6)) {
            let n = m.rows();
            let d = Matrix::diag(&(0..n).map(|i| f(ds[i].0) + FieldElem::i() * f(ds[i].1)).collect::<Vec<_>>());
            let c = d.conj_transpose().mul(&m).mul(&d);
            prop_assert_eq!(inertia(&m).unwrap(), inertia(&c).unwrap());
        }

        #[test]
        fn inertia_matches_charpoly_roots(m in hermitian()) {
            let p = charpoly(&m).unwrap();
            prop_assert_eq!(p.clone(), charpoly_bareiss(&m).unwrap());
            let q = p.to_rational();
            // Hermitian matrices over a real-closed extension have real charpolys;
            // over this field with √ entries the coefficients need not be rational.
            let inert = inertia(&m).unwrap();
            prop_assert_eq!(inert.dimension(), m.rows());
            if let Some(q) = q {
                prop_assert_eq!(q.root_multiplicity(&int(0)), inert.zero);
                prop_assert_eq!(kernel(&m).dimension, inert.zero);
            }
        }
    }
}
