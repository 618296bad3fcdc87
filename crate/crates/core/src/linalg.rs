//! Fraction-free elimination over the integers.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::Q;

/// Bareiss forward elimination without pivoting on the rows of `a`, which may
/// carry extra columns to the right of the leading `n × n` block. Returns the
/// pivots, which are the leading principal minors of that block; stops after
/// the first zero pivot.
fn bareiss(a: &mut [Vec<BigInt>], n: usize) -> Vec<BigInt> {
    let width = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let p = a[k][k].clone();
        pivots.push(p.clone());
        if p.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&p * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = p;
    }
    pivots
}

/// Leading principal minors `det M_1, ..., det M_n`, truncated after the
/// first vanishing one.
pub fn leading_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a = m.to_vec();
    bareiss(&mut a, m.len())
}

/// Exact inverse of a square integer matrix whose leading principal minors
/// are all nonzero; `None` otherwise.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| BigInt::from(u8::from(i == j))));
            r
        })
        .collect();
    let pivots = bareiss(&mut a, n);
    if pivots.len() < n || pivots.iter().any(Zero::is_zero) {
        return None;
    }
    let mut x = vec![vec![Q::zero(); n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut s = Q::from_integer(a[i][n + col].clone());
            for j in i + 1..n {
                s -= Q::from_integer(a[i][j].clone()) * &x[j][col];
            }
            x[i][col] = s / Q::from_integer(a[i][i].clone());
        }
    }
    Some(x)
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}
