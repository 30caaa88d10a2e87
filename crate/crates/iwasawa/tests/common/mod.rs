//! Shared oracles for the integration suites.
//!
//! The Smith-normal-form path here is deliberately independent of the
//! library's determinant-valuation route: it presents the same quotients
//! as integer matrices and reads orders off the diagonal.

// each test binary compiles this module and uses a different subset
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Diagonal of a Smith-style reduction of an integer matrix (gcd
/// elimination with row/column swaps). No divisibility normalization: the
/// product of entries already equals the cokernel order up to sign.
pub fn snf_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let n = rows.min(cols);
    for t in 0..n {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            if let Some(i) = (t + 1..rows).find(|&i| !a[i][t].is_zero()) {
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                }
                continue;
            }
            if let Some(j) = (t + 1..cols).find(|&j| !a[t][j].is_zero()) {
                let q = &a[t][j] / &a[t][t];
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                }
                continue;
            }
            break;
        }
    }
    (0..n).map(|i| a[i][i].clone()).collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Exponent of p in the order of the cokernel Z^cols / (row span), or
/// `None` when the cokernel is infinite.
pub fn cokernel_p_exponent(rows: Vec<Vec<BigInt>>, cols: usize, p: u64) -> Option<u64> {
    if cols == 0 {
        return Some(0);
    }
    let diag = snf_diagonal(rows);
    let nonzero: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
    if nonzero.len() < cols {
        return None;
    }
    let p = BigInt::from(p);
    let mut total = 0u64;
    for d in nonzero {
        let mut d = d.abs();
        while (&d % &p).is_zero() {
            d /= &p;
            total += 1;
        }
    }
    Some(total)
}

/// Integer coefficients of ν_n = ((1+T)^(p^n) − 1)/T, constant term first.
pub fn nu_integer_coeffs(p: u64, n: u32) -> Vec<BigInt> {
    let m = p.pow(n);
    // binomial row C(m, k) for k = 1..m
    let mut out = Vec::with_capacity(m as usize);
    let mut c = BigInt::from(1);
    for k in 1..=m {
        c = c * BigInt::from(m - k + 1) / BigInt::from(k);
        out.push(c.clone());
    }
    out
}

/// Relation matrix presenting Z[T]/(p^j, ν_n) on generators T^0..T^(2m−1)
/// with m = deg ν_n: p^j times each generator, plus the coefficient rows of
/// T^i·ν_n for i < m.
pub fn pj_nu_presentation(p: u64, j: u32, n: u32) -> (Vec<Vec<BigInt>>, usize) {
    let m = (p.pow(n) - 1) as usize;
    if m == 0 {
        return (Vec::new(), 0);
    }
    let gens = 2 * m;
    let nu = nu_integer_coeffs(p, n);
    debug_assert_eq!(nu.len(), m + 1);
    let mut rows = Vec::with_capacity(gens + m);
    let pj = BigInt::from(p).pow(j);
    for i in 0..gens {
        let mut row = vec![BigInt::zero(); gens];
        row[i] = pj.clone();
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); gens];
        for (k, c) in nu.iter().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    (rows, gens)
}

/// Matrix of multiplication by g on Z[T]/(f) for monic integer f, with
/// respect to the basis 1, T, …, T^(deg f − 1). Entry (i, j) is the T^i
/// coefficient of g·T^j mod f.
pub fn mult_matrix(f: &[BigInt], g: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = f.len() - 1;
    assert!(f[m] == BigInt::from(1), "f must be monic");
    let reduce = |mut v: Vec<BigInt>| -> Vec<BigInt> {
        while v.len() > m {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let deg = v.len();
            for (k, fk) in f.iter().take(m).enumerate() {
                let s = &top * fk;
                v[deg - m + k] -= s;
            }
        }
        v.resize(m, BigInt::zero());
        v
    };
    let mut cur = reduce(g.to_vec());
    let mut cols = Vec::with_capacity(m);
    for _ in 0..m {
        cols.push(cur.clone());
        let mut shifted = vec![BigInt::zero()];
        shifted.extend(cur.iter().cloned());
        cur = reduce(shifted);
    }
    (0..m)
        .map(|i| (0..m).map(|j| cols[j][i].clone()).collect())
        .collect()
}
