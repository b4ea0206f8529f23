use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix, IntVector};
use crate::error::{Error, Result};

/// Row Hermite normal form with transform: returns `(h, t)` with `t * a = h`,
/// `t` unimodular. Pivots are positive and entries above a pivot lie in
/// `[0, pivot)`, so `h` depends only on the row lattice of `a`.
fn hnf_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut t = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| h[(i, c)].abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            t.swap_rows(r, b);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                t.add_row_multiple(i, r, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, t)
}

/// Nonzero rows of the Hermite normal form of the lattice spanned by `rows`.
pub fn hnf_rows(rows: &[IntVector], dim: usize) -> Vec<IntVector> {
    let (h, _) = hnf_with_transform(&IntMatrix::from_rows(rows, dim));
    h.row_vectors().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Canonical basis of the lattice spanned by `gens` (vectors in `Z^dim`).
pub fn lattice_basis(gens: &[IntVector], dim: usize) -> Vec<IntVector> {
    hnf_rows(gens, dim)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let (h, t) = hnf_with_transform(m);
    if h != IntMatrix::identity(m.rows()) {
        return Err(Error::InvalidArgument("matrix is not unimodular".into()));
    }
    Ok(t)
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Basis of `{x : m x = 0}` as the columns of the result, in canonical
/// (Hermite) form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let (h, t) = hnf_with_transform(&m.transpose());
    let kernel: Vec<IntVector> = (0..n)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| t.row(i))
        .collect();
    let basis = hnf_rows(&kernel, n);
    IntMatrix::from_cols(&basis, n)
}

/// Basis (columns) of the saturation of the column span of `m`.
pub fn saturate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let orth = kernel_basis(&m.transpose());
    if orth.cols() == 0 {
        return IntMatrix::identity(n);
    }
    kernel_basis(&orth.transpose())
}

/// Columns `c` such that `[saturate(m) | c]` is unimodular.
pub fn complement_basis(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let s = smith_normal_form(m);
    let uinv = unimodular_inverse(&s.u).expect("Smith transform is unimodular");
    let idx: Vec<usize> = (s.rank..n).collect();
    uinv.select_cols(&idx)
}

/// Some integer `x` with `m x = b`, or `None` when there is none.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            m.rows()
        )));
    }
    let s = smith_normal_form(m);
    let ub = s.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = c.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(s.v.mul_vec(&y)?))
}

/// Some rational `x` with `m x = b`, or `None` when inconsistent. Free
/// variables are set to zero.
pub fn solve_rational(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> =
                (0..cols).map(|j| BigRational::from_integer(m[(i, j)].clone())).collect();
            r.push(BigRational::from_integer(b[i].clone()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Ok(Some(x))
}

/// Divides a vector by the gcd of its entries. The zero vector is returned
/// unchanged.
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}
