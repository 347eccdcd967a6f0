//! Integer row echelon (Hermite) form, integer kernels and Smith invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Matrix;
use crate::scalar::Rational;

pub type IntMat = Vec<Vec<BigInt>>;

fn sub_mul(row: &mut [BigInt], other: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (a, b) in row.iter_mut().zip(other) {
        if !b.is_zero() {
            *a -= q * b;
        }
    }
}

/// Row Hermite normal form. Zero rows are dropped; pivots are positive and
/// entries above each pivot are reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMat {
    let mut m: IntMat = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below r
            let piv = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pr = m[r].clone();
                sub_mul(&mut m[i], &pr, &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= m.len() || m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pr = m[r].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&pr[c]);
            sub_mul(&mut m[i], &pr, &q);
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Basis of `{x ∈ Zⁿ : A x = 0}` for an `m×n` integer matrix `A`, as row
/// vectors in Hermite normal form. The result spans a saturated sublattice.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> IntMat {
    // rows of [Aᵀ | I]; rows whose left part vanishes after reduction carry
    // a unimodular basis of the kernel
    let m = a.len();
    let aug: IntMat = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = a.iter().map(|r| r[j].clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let red = hnf_full(&aug, m);
    let ker: IntMat = red.into_iter().filter(|r| r[..m].iter().all(|x| x.is_zero())).map(|r| r[m..].to_vec()).collect();
    hnf(&ker)
}

// Echelon on the first `lead` columns only, keeping all rows.
fn hnf_full(rows: &[Vec<BigInt>], lead: usize) -> IntMat {
    let mut m: IntMat = rows.to_vec();
    let mut r = 0;
    for c in 0..lead {
        if r == m.len() {
            break;
        }
        loop {
            let piv = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pr = m[r].clone();
                sub_mul(&mut m[i], &pr, &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            r += 1;
        }
    }
    m
}

/// Nonzero Smith invariant factors `d₁ | d₂ | …` of an integer matrix.
pub fn smith_invariants(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: IntMat = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            let pr = m[t].clone();
            sub_mul(&mut m[i], &pr, &q);
            if !m[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            for i in 0..rows {
                let v = &m[i][t] * &q;
                m[i][j] -= v;
            }
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold a non-divisible entry into row t and retry
        let p = m[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &p).is_zero()));
        if let Some(i) = bad {
            let ri = m[i].clone();
            for (a, b) in m[t].iter_mut().zip(&ri) {
                *a += b;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// True when the lattice spanned by the given vectors is saturated in Zⁿ.
pub fn is_saturated(basis: &[Vec<BigInt>]) -> bool {
    smith_invariants(basis).iter().all(|d| d.is_one())
}

pub fn to_int_rows(m: &Matrix<Rational>) -> Option<IntMat> {
    if !m.is_integral() {
        return None;
    }
    Some((0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_integer()).collect()).collect())
}

pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect())
}

pub fn bi(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_swap_minus_identity() {
        // swap - I on Z²
        let a = vec![bi(&[-1, 1]), bi(&[1, -1])];
        assert_eq!(integer_kernel(&a, 2), vec![bi(&[1, 1])]);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y - 6z = 0 has a saturated kernel of rank 2
        let a = vec![bi(&[2, 4, -6])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        assert!(is_saturated(&k));
        for v in &k {
            let s: BigInt = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_invariants(&[bi(&[2, 0]), bi(&[0, 3])]), bi(&[1, 6]));
        assert_eq!(smith_invariants(&[bi(&[2, 4, 4]), bi(&[-6, 6, 12]), bi(&[10, -4, -16])]), bi(&[2, 6, 12]));
        assert!(!is_saturated(&[bi(&[2, 0])]));
        assert!(is_saturated(&[bi(&[1, 1])]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&[bi(&[2, 3]), bi(&[4, 5])]);
        let b = hnf(&[bi(&[6, 8]), bi(&[2, 3])]);
        assert_eq!(a, b);
        assert_eq!(a, vec![bi(&[2, 0]), bi(&[0, 1])]);
    }
}
