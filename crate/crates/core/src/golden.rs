//! Reference values for `L_0 … L_4`: the block matrices `T₂`, `A₁`,
//! `A₂`, `A₃`, the characteristic polynomial factorizations, the eigenvalue
//! listings and the inertia claims.

use crate::exactla::{Inertia, LaError, Matrix, QPoly};
use crate::numfield::FieldElem;

const CHARPOLYS: [&str; 5] = [
    "lambda^2*(lambda + 10)",
    "lambda^4*(lambda + 8)^4*(lambda - 22)^4",
    "(lambda + 8)^3*lambda^3*(lambda - 6)^9*(lambda - 20)^6*(lambda - 56)^6",
    "lambda^8*(lambda^5 - 220*lambda^4 + 16820*lambda^3 - 566720*lambda^2 + 8472000*lambda - 44808192)^8",
    "(lambda^2 - 166*lambda + 6720)^10*(lambda^3 - 46*lambda^2 + 560*lambda - 1280)^5*(lambda^4 - 266*lambda^3 + 20440*lambda^2 - 591360*lambda + 5529600)^10",
];

pub const MAX_K: u32 = 4;

/// Factored `det(λI − L_k)` as printed.
pub fn charpoly_text(k: u32) -> Option<&'static str> {
    CHARPOLYS.get(k as usize).copied()
}

pub fn charpoly_factors(k: u32) -> Option<Vec<(QPoly, usize)>> {
    charpoly_text(k).map(|s| QPoly::parse_factors(s).expect("reference factorization parses"))
}

/// Inertia of `L_k` as implied by the printed spectra; `L₃ ∼ [I₄₀, O₈]`, `L₄` positive definite.
pub fn inertia(k: u32) -> Option<Inertia> {
    match k {
        0 => Some(Inertia::new(0, 2, 1)),
        1 => Some(Inertia::new(4, 4, 4)),
        2 => Some(Inertia::new(21, 3, 3)),
        3 => Some(Inertia::new(40, 8, 0)),
        4 => Some(Inertia::new(75, 0, 0)),
        _ => None,
    }
}

/// Printed kernel dimensions `dim ker L_k`.
pub const KERNEL_DIMS: [usize; 5] = [2, 4, 3, 8, 0];

fn repeat(v: f64, n: usize) -> impl Iterator<Item = f64> {
    std::iter::repeat_n(v, n)
}

/// Printed eigenvalue listings, ascending.
pub fn eigenvalues(k: u32) -> Option<Vec<f64>> {
    let mut v: Vec<f64> = match k {
        0 => vec![-10.0, 0.0, 0.0],
        1 => repeat(-8.0, 4).chain(repeat(0.0, 4)).chain(repeat(22.0, 4)).collect(),
        2 => repeat(-8.0, 3)
            .chain(repeat(0.0, 3))
            .chain(repeat(6.0, 9))
            .chain(repeat(20.0, 6))
            .chain(repeat(56.0, 6))
            .collect(),
        3 => [0.0, 12.0, 22.0, 32.0, 52.0, 102.0].iter().flat_map(|&x| repeat(x, 8)).collect(),
        4 => {
            let (s145, s265) = (145f64.sqrt(), 265f64.sqrt());
            repeat(16.0, 5)
                .chain(repeat(36.0, 10))
                .chain(repeat(70.0, 10))
                .chain(repeat(96.0, 10))
                .chain(repeat(160.0, 10))
                .chain(repeat(15.0 - s145, 5))
                .chain(repeat(35.0 - s265, 10))
                .chain(repeat(15.0 + s145, 5))
                .chain(repeat(35.0 + s265, 10))
                .collect()
        }
        _ => return None,
    };
    v.sort_by(f64::total_cmp);
    Some(v)
}

fn int(n: i64) -> FieldElem {
    FieldElem::from_int(n)
}

fn sqrt(d: u32) -> FieldElem {
    FieldElem::sqrt_radicand(d).expect("radicand in field")
}

fn scaled_identity(n: usize, c: FieldElem) -> Matrix {
    Matrix::diag(&vec![c; n])
}

/// Block matrix from `(block row, block col, block)` entries on a uniform grid.
fn grid(n_blocks: usize, size: usize, entries: Vec<(usize, usize, Matrix)>) -> Matrix {
    let mut m = Matrix::zeros(n_blocks * size, n_blocks * size);
    for (r, c, b) in entries {
        m.set_block(r * size, c * size, &b);
    }
    m
}

/// Anti-diagonal matrix with the given entries, top row first.
fn antidiag(entries: &[i64], c: &FieldElem) -> Matrix {
    let n = entries.len();
    Matrix::from_fn(n, n, |i, j| if i + j == n - 1 { c * &int(entries[i]) } else { FieldElem::zero() })
}

fn diag_ints(entries: &[i64], c: &FieldElem) -> Matrix {
    Matrix::diag(&entries.iter().map(|&x| c * &int(x)).collect::<Vec<_>>())
}

fn from_int_rows(rows: &[&[i64]], c: &FieldElem) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| c * &int(x)).collect()).collect())
}

/// Weight blocks `diag(c₁ I_{n₁}, c₂ I_{n₂}, …)`.
fn weighted(parts: &[(i64, usize)], c: &FieldElem) -> Matrix {
    let mut d = Vec::new();
    for &(v, n) in parts {
        d.extend(std::iter::repeat_n(c * &int(v), n));
    }
    Matrix::diag(&d)
}

/// Printed `T₂` (Berger eigenvalues on the diagonal).
pub fn t2(k: u32) -> Option<Matrix> {
    let one = FieldElem::one();
    Some(match k {
        0 => weighted(&[(0, 1)], &one),
        1 => weighted(&[(8, 4)], &one),
        2 => weighted(&[(28, 6), (8, 3)], &one),
        3 => weighted(&[(60, 8), (20, 8)], &one),
        4 => weighted(&[(104, 10), (44, 10), (24, 5)], &one),
        _ => return None,
    })
}

/// Printed `[A₁, A₂, A₃]` with `∂ᵢ𝔖_k = 𝔖_k Aᵢ`.
pub fn derivation_matrices(k: u32) -> Option<[Matrix; 3]> {
    let i = FieldElem::i();
    let one = FieldElem::one();
    let zero = |n| Matrix::zeros(n, n);
    Some(match k {
        0 => [zero(1), zero(1), zero(1)],
        1 => [
            weighted(&[(1, 2), (-1, 2)], &i),
            antidiag(&[1, -1, 1, -1], &one),
            antidiag(&[-1, 1, 1, -1], &i),
        ],
        2 => {
            let beta: &[&[i64]] = &[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1], &[0, 0, -1], &[1, 0, 0], &[0, 1, 0]];
            let gamma: &[&[i64]] = &[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1], &[0, 0, 1], &[-1, 0, 0], &[0, -1, 0]];
            let off = |rows: &[&[i64]], upper_sign: i64, c: &FieldElem| {
                let b = from_int_rows(rows, c);
                let mut m = Matrix::zeros(9, 9);
                m.set_block(0, 6, &b.scale(&int(upper_sign)));
                m.set_block(6, 0, &b.transpose());
                m
            };
            [weighted(&[(2, 3), (-2, 3), (0, 3)], &i), off(beta, -1, &sqrt(2)), off(gamma, 1, &(&i * &sqrt(2)))]
        }
        3 => {
            let j1 = diag_ints(&[1, -1, -1, -1, 1, -1, -1, -1], &sqrt(3));
            let k1 = antidiag(&[1, 1, -1, -1, 1, 1, -1, -1], &int(2));
            let j2 = diag_ints(&[-1, 1, 1, 1, 1, -1, -1, -1], &(&i * &sqrt(3)));
            let k2 = antidiag(&[-1, -1, 1, 1, 1, 1, -1, -1], &(&i * &int(2)));
            [
                weighted(&[(3, 4), (-3, 4), (1, 4), (-1, 4)], &i),
                grid(2, 8, vec![(0, 1, j1.clone()), (1, 0, j1.scale(&int(-1))), (1, 1, k1)]),
                grid(2, 8, vec![(0, 1, j2.clone()), (1, 0, j2), (1, 1, k2)]),
            ]
        }
        4 => {
            let id = |c: i64| scaled_identity(5, int(c));
            let s6 = sqrt(6);
            let s6i = scaled_identity(5, s6.clone());
            let j1 = antidiag(&[1, -1, 1, -1, 1], &s6);
            let a2 = grid(
                5,
                5,
                vec![
                    (0, 2, id(-2)),
                    (1, 3, id(-2)),
                    (2, 0, id(2)),
                    (2, 4, s6i.scale(&int(-1))),
                    (3, 1, id(2)),
                    (3, 4, j1.scale(&int(-1))),
                    (4, 2, s6i.clone()),
                    (4, 3, j1.clone()),
                ],
            );
            let a3 = grid(
                5,
                5,
                vec![
                    (0, 2, id(2)),
                    (1, 3, id(-2)),
                    (2, 0, id(2)),
                    (2, 4, s6i.clone()),
                    (3, 1, id(-2)),
                    (3, 4, j1.scale(&int(-1))),
                    (4, 2, s6i),
                    (4, 3, j1.scale(&int(-1))),
                ],
            )
            .scale(&i);
            [weighted(&[(4, 5), (-4, 5), (2, 5), (-2, 5), (0, 5)], &i), a2, a3]
        }
        _ => return None,
    })
}

/// `[[T₂−10, √6A₂, √6A₃], [−√6A₂, T₂, −14A₁], [−√6A₃, 14A₁, T₂]]`.
pub fn assemble_printed(t2: &Matrix, a: &[Matrix; 3]) -> Result<Matrix, LaError> {
    let n = t2.rows();
    if a.iter().any(|x| x.rows() != n || x.cols() != n) {
        return Err(LaError::Dimension(format!("blocks must be {n}x{n}")));
    }
    let s6 = sqrt(6);
    let mut m = Matrix::zeros(3 * n, 3 * n);
    let blocks = [
        [t2.sub(&scaled_identity(n, int(10))), a[1].scale(&s6), a[2].scale(&s6)],
        [a[1].scale(&-&s6), t2.clone(), a[0].scale(&int(-14))],
        [a[2].scale(&-&s6), a[0].scale(&int(14)), t2.clone()],
    ];
    for (r, row) in blocks.iter().enumerate() {
        for (c, b) in row.iter().enumerate() {
            m.set_block(r * n, c * n, b);
        }
    }
    Ok(m)
}

/// The printed `L_k` for `k ≤ 4`.
pub fn printed_matrix(k: u32) -> Option<Matrix> {
    let t = t2(k)?;
    let a = derivation_matrices(k)?;
    Some(assemble_printed(&t, &a).expect("printed blocks are consistent"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_counts() {
        for k in 0..=MAX_K {
            let n = ((k + 1) * (k + 1)) as usize;
            let m = printed_matrix(k).unwrap();
            assert_eq!(m.rows(), 3 * n);
            assert!(m.is_hermitian(), "k={k}");
            assert_eq!(eigenvalues(k).unwrap().len(), 3 * n);
            let deg: usize = charpoly_factors(k).unwrap().iter().map(|(p, e)| p.degree().unwrap() * e).sum();
            assert_eq!(deg, 3 * n);
            assert_eq!(inertia(k).unwrap().dimension(), 3 * n);
        }
        assert!(printed_matrix(5).is_none());
        assert_eq!(KERNEL_DIMS.iter().sum::<usize>(), 17);
    }

    #[test]
    fn l0_is_diagonal() {
        assert_eq!(printed_matrix(0).unwrap(), Matrix::diag(&[int(-10), int(0), int(0)]));
    }
}
