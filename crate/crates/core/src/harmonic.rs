//! Harmonic polynomial bases of `Q_k = ⊕_m Q_k^m` on S³.
//!
//! `Q_k^m` is spanned by degree-`k` harmonic polynomials on ℂ² of ∂₁-weight
//! `m ∈ {k, k−2, …, −k}`. Each block has dimension `k+1`, and its members are
//! eigenfunctions of the round Laplacian (eigenvalue `−k(k+2)`) and of the
//! Berger Laplacian at τ = 1/6 (eigenvalue `−(k(k+2) + 5m²)`).

use std::fmt;

use thiserror::Error;

use crate::exactla::{self, LaError, Matrix, SpanSolver};
use crate::numfield::{rat, FieldElem, Rational};
use crate::polyops::{apply_derivation, laplacian_berger, laplacian_c2, laplacian_round, Der, Monomial, SpherePoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarmonicError {
    #[error("explicit bases are only listed for k ≤ 4, got k = {0}")]
    OutOfRange(u32),
    #[error("block structures differ: {0}")]
    Structure(String),
    #[error("spans differ in weight {m}: {source}")]
    SpanMismatch { m: i64, source: LaError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Paper,
    Generated,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Generated => "generated",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Provenance::Paper),
            "generated" => Ok(Provenance::Generated),
            _ => Err(format!("unknown basis source {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub m: i64,
    pub vectors: Vec<SpherePoly>,
}

/// Ordered basis of `Q_k`, grouped by weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFamily {
    pub k: u32,
    pub blocks: Vec<Block>,
    pub provenance: Provenance,
}

impl BasisFamily {
    pub fn vectors(&self) -> impl Iterator<Item = &SpherePoly> {
        self.blocks.iter().flat_map(|b| b.vectors.iter())
    }

    /// `(weight, vector)` in basis order.
    pub fn labelled(&self) -> impl Iterator<Item = (i64, &SpherePoly)> {
        self.blocks.iter().flat_map(|b| b.vectors.iter().map(move |v| (b.m, v)))
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.vectors.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.m).collect()
    }

    /// Solver for coordinates in this basis, in monomial coordinates of degree `k`.
    pub fn span_solver(&self) -> Result<(Vec<Monomial>, SpanSolver), LaError> {
        let monos = Monomial::of_degree(self.k);
        let cols: Vec<Vec<FieldElem>> = self.vectors().map(|v| monomial_coords(v, &monos)).collect::<Result<_, _>>()?;
        let m = Matrix::from_fn(monos.len(), cols.len(), |i, j| cols[j][i].clone());
        Ok((monos, SpanSolver::new(m)?))
    }
}

/// Coefficients of `f` on a list of monomials; fails if `f` has other terms.
pub fn monomial_coords(f: &SpherePoly, monos: &[Monomial]) -> Result<Vec<FieldElem>, LaError> {
    let mut v = vec![FieldElem::zero(); monos.len()];
    for (m, c) in f.terms() {
        let k = monos.binary_search(m).map_err(|_| LaError::NotInSpan)?;
        v[k] = c.clone();
    }
    Ok(v)
}

fn monomials_of_weight(k: u32, m: i64) -> Vec<Monomial> {
    Monomial::of_degree(k).into_iter().filter(|x| x.weight() == m).collect()
}

/// ℚ-basis of the degree-`k`, weight-`m` harmonic polynomials.
pub fn build_qkm(k: u32, m: i64) -> Vec<SpherePoly> {
    if m.unsigned_abs() > k as u64 || (k as i64 - m) % 2 != 0 {
        return Vec::new();
    }
    let src = monomials_of_weight(k, m);
    if k < 2 {
        return src.into_iter().map(|x| SpherePoly::term(x, FieldElem::one())).collect();
    }
    let dst = monomials_of_weight(k - 2, m);
    let images: Vec<Vec<FieldElem>> = src
        .iter()
        .map(|x| monomial_coords(&laplacian_c2(&SpherePoly::term(*x, FieldElem::one())), &dst).expect("weight preserved"))
        .collect();
    let lap = Matrix::from_fn(dst.len(), src.len(), |i, j| images[j][i].clone());
    exactla::kernel(&lap)
        .basis
        .into_iter()
        .map(|v| SpherePoly::from_terms(src.iter().copied().zip(v)))
        .collect()
}

/// Machine-generated basis with weights `k, k−2, …, −k`.
pub fn generated_basis(k: u32) -> BasisFamily {
    let blocks = (0..=k as i64)
        .map(|l| {
            let m = k as i64 - 2 * l;
            Block { m, vectors: build_qkm(k, m) }
        })
        .collect();
    BasisFamily { k, blocks, provenance: Provenance::Generated }
}

fn sqrt_q(n: i64, d: i64) -> FieldElem {
    FieldElem::sqrt_rational(&rat(n, d)).expect("radicand in field")
}

fn q(n: i64, d: i64) -> FieldElem {
    FieldElem::from_rational(rat(n, d))
}

/// The explicit bases listed for `k ≤ 4`, in their printed order.
pub fn reference_basis(k: u32) -> Result<BasisFamily, HarmonicError> {
    let z = SpherePoly::var(0);
    let zb = SpherePoly::var(1);
    let w = SpherePoly::var(2);
    let wb = SpherePoly::var(3);
    let mul = |fs: &[&SpherePoly]| fs.iter().fold(SpherePoly::one(), |acc, f| &acc * f);
    let lin = |terms: &[(FieldElem, &SpherePoly)]| {
        terms.iter().fold(SpherePoly::zero(), |acc, (c, f)| &acc + &f.scale(c))
    };
    let aa = &z * &zb; // |z|²
    let bb = &w * &wb; // |w|²
    let block = |m: i64, vectors: Vec<SpherePoly>| Block { m, vectors };
    let blocks = match k {
        0 => vec![block(0, vec![SpherePoly::one()])],
        1 => vec![block(1, vec![z.clone(), w.clone()]), block(-1, vec![zb.clone(), wb.clone()])],
        2 => vec![
            block(2, vec![mul(&[&z, &z]), mul(&[&z, &w]), mul(&[&w, &w])]),
            block(-2, vec![mul(&[&zb, &zb]), mul(&[&zb, &wb]), mul(&[&wb, &wb])]),
            block(
                0,
                vec![
                    lin(&[(sqrt_q(1, 2), &aa), (-sqrt_q(1, 2), &bb)]),
                    mul(&[&z, &wb]).scale(&sqrt_q(2, 1)),
                    mul(&[&zb, &w]).scale(&sqrt_q(2, 1)),
                ],
            ),
        ],
        3 => {
            let s3 = sqrt_q(3, 1);
            let r3 = sqrt_q(1, 3);
            let p1 = lin(&[(r3.clone(), &aa), (q(-2, 1) * &r3, &bb)]);
            let p2 = lin(&[(q(2, 1) * &r3, &aa), (-&r3, &bb)]);
            vec![
                block(3, vec![mul(&[&z, &z, &z]), mul(&[&z, &z, &w]), mul(&[&z, &w, &w]), mul(&[&w, &w, &w])]),
                block(-3, vec![mul(&[&zb, &zb, &zb]), mul(&[&zb, &zb, &wb]), mul(&[&wb, &wb, &zb]), mul(&[&wb, &wb, &wb])]),
                block(
                    1,
                    vec![
                        mul(&[&z, &z, &wb]).scale(&s3),
                        mul(&[&p1, &z]),
                        mul(&[&p2, &w]),
                        mul(&[&w, &w, &zb]).scale(&s3),
                    ],
                ),
                block(
                    -1,
                    vec![
                        mul(&[&zb, &zb, &w]).scale(&s3),
                        mul(&[&p1, &zb]),
                        mul(&[&p2, &wb]),
                        mul(&[&wb, &wb, &z]).scale(&s3),
                    ],
                ),
            ]
        }
        4 => {
            let h1 = lin(&[(q(1, 2), &aa), (q(-3, 2), &bb)]);
            let h2 = &aa - &bb;
            let h3 = lin(&[(q(3, 2), &aa), (q(-1, 2), &bb)]);
            let zwb = &z * &wb;
            let zbw = &zb * &w;
            let quartic = lin(&[(q(1, 1), &mul(&[&aa, &aa])), (q(1, 1), &mul(&[&bb, &bb])), (q(-4, 1), &mul(&[&aa, &bb]))]);
            vec![
                block(
                    4,
                    vec![
                        mul(&[&z, &z, &z, &z]),
                        mul(&[&z, &z, &z, &w]),
                        mul(&[&z, &z, &w, &w]),
                        mul(&[&z, &w, &w, &w]),
                        mul(&[&w, &w, &w, &w]),
                    ],
                ),
                block(
                    -4,
                    vec![
                        mul(&[&zb, &zb, &zb, &zb]),
                        mul(&[&zb, &zb, &zb, &wb]),
                        mul(&[&zb, &zb, &wb, &wb]),
                        mul(&[&zb, &wb, &wb, &wb]),
                        mul(&[&wb, &wb, &wb, &wb]),
                    ],
                ),
                block(
                    2,
                    vec![
                        mul(&[&z, &z, &z, &wb]).scale(&q(-2, 1)),
                        mul(&[&z, &z, &h1]),
                        mul(&[&z, &w, &h2]),
                        mul(&[&w, &w, &h3]),
                        mul(&[&w, &w, &w, &zb]).scale(&q(2, 1)),
                    ],
                ),
                block(
                    -2,
                    vec![
                        mul(&[&zb, &zb, &zb, &w]).scale(&q(-2, 1)),
                        mul(&[&zb, &zb, &h1]),
                        mul(&[&zb, &wb, &h2]),
                        mul(&[&wb, &wb, &h3]),
                        mul(&[&wb, &wb, &wb, &z]).scale(&q(2, 1)),
                    ],
                ),
                block(
                    0,
                    vec![
                        mul(&[&zwb, &zwb]).scale(&sqrt_q(6, 1)),
                        mul(&[&zwb, &(&bb - &aa)]).scale(&sqrt_q(3, 2)),
                        quartic.scale(&sqrt_q(1, 6)),
                        mul(&[&zbw, &h2]).scale(&sqrt_q(3, 2)),
                        mul(&[&zbw, &zbw]).scale(&sqrt_q(6, 1)),
                    ],
                ),
            ]
        }
        _ => return Err(HarmonicError::OutOfRange(k)),
    };
    Ok(BasisFamily { k, blocks, provenance: Provenance::Paper })
}

pub fn basis(k: u32, provenance: Provenance) -> Result<BasisFamily, HarmonicError> {
    match provenance {
        Provenance::Paper => reference_basis(k),
        Provenance::Generated => Ok(generated_basis(k)),
    }
}

/// Outcome of the eigenfunction identities for one polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenReport {
    pub k: u32,
    pub m: i64,
    /// `γ_k = k(k+2)`.
    pub gamma_round: i64,
    /// `k(k+2) + m²(1/τ − 1)` at τ = 1/6.
    pub gamma_berger: i64,
    pub failures: Vec<String>,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn berger_tau() -> Rational {
    rat(1, 6)
}

pub fn verify_eigen(f: &SpherePoly, k: u32, m: i64) -> EigenReport {
    let kk = k as i64;
    let gamma_round = kk * (kk + 2);
    let gamma_berger = gamma_round + 5 * m * m;
    let mut failures = Vec::new();
    if !f.is_zero() && f.homogeneous_degree() != Some(k) {
        failures.push(format!("not homogeneous of degree {k}"));
    }
    if !laplacian_c2(f).is_zero() {
        failures.push("not harmonic on C^2".into());
    }
    if laplacian_round(f) != f.scale(&FieldElem::from_int(-gamma_round)) {
        failures.push(format!("round Laplacian eigenvalue is not -{gamma_round}"));
    }
    if apply_derivation(Der::D1, f) != f.scale(&(FieldElem::i() * FieldElem::from_int(m))) {
        failures.push(format!("d1 eigenvalue is not {m}i"));
    }
    let berger = laplacian_berger(f, &berger_tau()).expect("tau > 0");
    if berger != f.scale(&FieldElem::from_int(-gamma_berger)) {
        failures.push(format!("Berger eigenvalue is not -{gamma_berger}"));
    }
    EigenReport { k, m, gamma_round, gamma_berger, failures }
}

/// `T` with `A = B·T`: column `j` holds the coordinates of `A_j` in `B`.
pub fn change_of_basis(a: &BasisFamily, b: &BasisFamily) -> Result<Matrix, HarmonicError> {
    if a.k != b.k {
        return Err(HarmonicError::Structure(format!("degrees {} and {}", a.k, b.k)));
    }
    let mut wa = a.weights();
    let mut wb = b.weights();
    wa.sort();
    wb.sort();
    if wa != wb {
        return Err(HarmonicError::Structure(format!("weights {wa:?} and {wb:?}")));
    }
    let n = b.len();
    if a.len() != n {
        return Err(HarmonicError::Structure(format!("sizes {} and {}", a.len(), n)));
    }
    let mut t = Matrix::zeros(n, n);
    let offsets = |f: &BasisFamily| {
        let mut off = Vec::new();
        let mut acc = 0;
        for blk in &f.blocks {
            off.push(acc);
            acc += blk.vectors.len();
        }
        off
    };
    let (oa, ob) = (offsets(a), offsets(b));
    for (ia, blk_a) in a.blocks.iter().enumerate() {
        let ib = b.blocks.iter().position(|x| x.m == blk_a.m).expect("weights matched");
        let blk_b = &b.blocks[ib];
        let monos = monomials_of_weight(a.k, blk_a.m);
        let span_err = |source| HarmonicError::SpanMismatch { m: blk_a.m, source };
        let cols: Vec<Vec<FieldElem>> =
            blk_b.vectors.iter().map(|v| monomial_coords(v, &monos)).collect::<Result<_, _>>().map_err(span_err)?;
        let solver = SpanSolver::new(Matrix::from_fn(monos.len(), cols.len(), |i, j| cols[j][i].clone())).map_err(span_err)?;
        for (j, v) in blk_a.vectors.iter().enumerate() {
            let c = solver.coords(&monomial_coords(v, &monos).map_err(span_err)?).map_err(span_err)?;
            for (i, x) in c.into_iter().enumerate() {
                t.set(ob[ib] + i, oa[ia] + j, x);
            }
        }
    }
    if exactla::rank(&t) < n {
        return Err(HarmonicError::Structure("change of basis is singular".into()));
    }
    Ok(t)
}

/// Gram matrix `G[i][j] = ⟨b_j, b_i⟩` under the normalized round measure.
pub fn gram(basis: &BasisFamily) -> Matrix {
    let v: Vec<&SpherePoly> = basis.vectors().collect();
    Matrix::from_fn(v.len(), v.len(), |i, j| v[j].inner(v[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_dimensions() {
        assert_eq!(build_qkm(1, 1).len(), 2);
        assert!(build_qkm(1, 0).is_empty());
        assert_eq!(build_qkm(5, 3).len(), 6);
        for k in 0..=6 {
            let b = generated_basis(k);
            assert_eq!(b.len(), ((k + 1) * (k + 1)) as usize);
            assert!(b.blocks.iter().all(|blk| blk.vectors.len() == k as usize + 1));
        }
    }

    #[test]
    fn reference_basis_shapes() {
        assert_eq!(reference_basis(0).unwrap().blocks[0].vectors, vec![SpherePoly::one()]);
        let b2 = reference_basis(2).unwrap();
        assert_eq!(b2.weights(), vec![2, -2, 0]);
        let first = &b2.blocks[2].vectors[0];
        let s = sqrt_q(1, 2);
        let expected = SpherePoly::from_terms([(Monomial([1, 1, 0, 0]), s.clone()), (Monomial([0, 0, 1, 1]), -s)]);
        assert_eq!(*first, expected);
        assert_eq!(reference_basis(5), Err(HarmonicError::OutOfRange(5)));
        for k in 0..=4 {
            assert_eq!(reference_basis(k).unwrap().len(), ((k + 1) * (k + 1)) as usize);
        }
    }

    #[test]
    fn eigen_identities() {
        let z3 = SpherePoly::var(0).pow(3);
        let r = verify_eigen(&z3, 3, 3);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!((r.gamma_round, r.gamma_berger), (15, 60));
        assert!(verify_eigen(&SpherePoly::one(), 0, 0).passed());
        let member = &reference_basis(3).unwrap().blocks[2].vectors[0];
        let r = verify_eigen(member, 3, 1);
        assert!(r.passed());
        assert_eq!(r.gamma_berger, 20);
        let bad = verify_eigen(&z3, 3, 1);
        assert_eq!(bad.failures.len(), 2);
    }

    #[test]
    fn reference_members_are_eigenfunctions() {
        for k in 0..=4 {
            let b = reference_basis(k).unwrap();
            for (m, f) in b.labelled() {
                assert!(verify_eigen(f, k, m).passed(), "k={k} m={m} {f}");
            }
        }
    }

    #[test]
    fn change_of_basis_identity_and_reference() {
        let g = generated_basis(2);
        assert_eq!(change_of_basis(&g, &g).unwrap(), Matrix::identity(9));
        let t = change_of_basis(&reference_basis(1).unwrap(), &generated_basis(1)).unwrap();
        assert_eq!(t.rows(), 4);
    }

    #[test]
    fn orthogonality_within_blocks() {
        for k in 0..=4 {
            let b = reference_basis(k).unwrap();
            let g = gram(&b);
            let labels: Vec<(usize, i64)> =
                b.blocks.iter().enumerate().flat_map(|(bi, blk)| blk.vectors.iter().map(move |_| (bi, blk.m))).collect();
            for i in 0..g.rows() {
                for j in 0..g.cols() {
                    let same_block = labels[i].0 == labels[j].0;
                    if i != j && (same_block || labels[i].1 != labels[j].1) {
                        assert!(g.get(i, j).is_zero(), "k={k} ({i},{j})");
                    }
                }
            }
        }
    }
}
