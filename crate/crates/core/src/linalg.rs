//! Dense exact linear algebra: determinants, echelon forms, kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coeff::FieldCoeff;

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut prev = BigInt::one();
    let mut sign = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Reduced row echelon form over a field.
#[derive(Clone, Debug)]
pub struct Echelon<C> {
    pub rows: Vec<Vec<C>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<C: FieldCoeff> Echelon<C> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis: one vector per free column, free entry set to one.
    pub fn kernel_basis(&self, one: &C) -> Vec<Vec<C>> {
        let zero = one.zero_like();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![zero.clone(); self.ncols];
                v[f] = one.clone();
                for (i, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = self.rows[i][f].neg();
                }
                v
            })
            .collect()
    }
}

pub fn rref<C: FieldCoeff>(mut m: Vec<Vec<C>>, ncols: usize) -> Echelon<C> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..ncols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero_elem() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                let t = f.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        ncols,
    }
}

pub fn rank<C: FieldCoeff>(m: Vec<Vec<C>>, ncols: usize) -> usize {
    rref(m, ncols).rank()
}

/// Row echelon pivots over `F_p` with machine arithmetic (`p < 2^32`).
/// Returns the pivot columns in increasing order.
pub fn echelon_pivots_mod_p(mut m: Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c] % p, p);
        for j in c..ncols {
            m[r][j] = m[r][j] % p * inv % p;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let f = row[c] % p;
            if f == 0 {
                continue;
            }
            for j in c..ncols {
                row[j] = (row[j] % p + p * p - f * prow[j] % p) % p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank_mod_p(m: &[Vec<BigInt>], ncols: usize, p: u64) -> usize {
    let pb = BigInt::from(p);
    let rows: Vec<Vec<u64>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| u64::try_from(x.mod_floor(&pb)).unwrap())
                .collect()
        })
        .collect();
    echelon_pivots_mod_p(rows, ncols, p).len()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (_, x, _) = crate::coeff::ext_gcd(a as i64, p as i64);
    x.rem_euclid(p as i64) as u64
}

/// Fraction-free Gauss-Jordan over the integers. Every pivot entry ends
/// equal to the same nonzero integer; other entries in pivot columns are zero.
pub fn integer_rref(mut m: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let piv = m[r][c].clone();
        for i in 0..m.len() {
            if i == r {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let v = &piv * &m[i][j] - &f * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Primitive integer kernel basis, one vector per free column, each with
/// its first nonzero entry positive.
pub fn integer_kernel_basis(m: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let (rows, pivots) = integer_rref(m, ncols);
    let d = rows
        .first()
        .map(|r| r[pivots[0]].clone())
        .unwrap_or_else(BigInt::one);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![BigInt::zero(); ncols];
            v[f] = d.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[i][f];
            }
            make_primitive(v)
        })
        .collect()
}

/// The lexicographically least vector in the primitive kernel basis.
pub fn least_kernel_vector(m: Vec<Vec<BigInt>>, ncols: usize) -> Option<Vec<BigInt>> {
    integer_kernel_basis(m, ncols).into_iter().min()
}

pub fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    if g.is_zero() {
        return v;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if neg {
            *x = -&*x;
        }
    }
    v
}

pub fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
