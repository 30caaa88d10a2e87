//! Dual-route check: the ideal-index exponent from the determinant
//! valuation must match the p-valuation of the cokernel order computed by
//! Smith normal form on the integer multiplication matrix.

mod common;

use num_bigint::BigInt;

use iwasawa::lambda::{ideal_index, nu, nu_mod, IdealIndex, LambdaPoly};
use iwasawa::padic::{PadicContext, DEFAULT_PRECISION};

fn ctx(p: u64) -> PadicContext {
    PadicContext::new(p, DEFAULT_PRECISION).unwrap()
}

fn big(coeffs: &[i64]) -> Vec<BigInt> {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

/// ν_n as signed integer coefficients, independent of the library.
fn nu_coeffs(p: u64, n: u32) -> Vec<i64> {
    let m = p.pow(n);
    let mut out = Vec::new();
    let mut c: i64 = 1;
    for k in 1..=m {
        c = c * (m - k + 1) as i64 / k as i64;
        out.push(c);
    }
    out
}

#[test]
fn ideal_index_matches_snf_cokernel() {
    // distinguished f with small coefficients, deg f <= 3
    let cases: &[(u64, &[i64])] = &[
        (2, &[2, 1]),
        (2, &[4, 1]),
        (2, &[6, 1]),
        (2, &[2, 2, 1]),
        (2, &[4, 2, 1]),
        (2, &[2, 4, 1]),
        (2, &[6, 4, 1]),
        (2, &[2, 2, 2, 1]),
        (2, &[4, 0, 2, 1]),
        (3, &[3, 3, 1]),
        (3, &[6, 3, 1]),
        (3, &[3, 6, 1]),
        (3, &[3, 0, 3, 1]),
        (3, &[9, 3, 3, 1]),
        (5, &[5, 1]),
        (5, &[10, 5, 1]),
        (5, &[5, 0, 5, 1]),
    ];
    for &(p, f_coeffs) in cases {
        for n in 1..=2u32 {
            let c = ctx(p);
            let f = LambdaPoly::from_int_coeffs(c, f_coeffs);
            assert!(f.is_distinguished().unwrap());
            let g = nu_mod(&f, n).unwrap();
            let got = ideal_index(&f, &g).unwrap();

            let matrix = common::mult_matrix(&big(f_coeffs), &big(&nu_coeffs(p, n)));
            let m = f_coeffs.len() - 1;
            // relations are the columns of the multiplication matrix
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|j| (0..m).map(|i| matrix[i][j].clone()).collect())
                .collect();
            let oracle = common::cokernel_p_exponent(rows, m, p);

            match (got, oracle) {
                (IdealIndex::Finite(v), Some(w)) => {
                    assert_eq!(v, w, "p={p} n={n} f={f_coeffs:?}")
                }
                (IdealIndex::IndeterminateAtPrecision(_), None) => {}
                (got, oracle) => {
                    panic!("p={p} n={n} f={f_coeffs:?}: routes disagree: {got:?} vs {oracle:?}")
                }
            }
        }
    }
}

#[test]
fn nu_mod_matches_direct_reduction() {
    for p in [2u64, 3] {
        let c = ctx(p);
        let f = LambdaPoly::from_int_coeffs(c, &[p as i64, 0, 1]);
        for n in 0..=3u32 {
            let direct = nu(c, n).weierstrass_divide(&f).unwrap().1;
            assert_eq!(nu_mod(&f, n).unwrap(), direct, "p={p} n={n}");
        }
    }
}
