//! Chevalley's ambiguous class number formula and the bounds it yields:
//! strongly ambiguous counts and μ ≥ s−1 for the towers built from s inert
//! ramified primes.
//!
//! Everything is exact integer arithmetic with explicit divisibility
//! checks: a non-integral formula value is a meaningful error (impossible
//! ramification or unit data), not rounding noise.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::lambda::checked_p_pow;
use crate::{Error, Result};

/// Inputs to Chevalley's formula for a cyclic extension L/K:
/// |C^G| = h · ∏ e_P / (n · [E : E ∩ N(L^×)]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChevalleyInput {
    h: u64,
    degree: u64,
    ram_indices: Vec<u64>,
    unit_index: u64,
}

impl ChevalleyInput {
    /// `degree` ≥ 2, each ramification index divides the degree, and the
    /// unit index is positive.
    pub fn new(h: u64, degree: u64, ram_indices: Vec<u64>, unit_index: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::Domain("class number must be positive".into()));
        }
        if degree < 2 {
            return Err(Error::Domain("extension degree must be at least 2".into()));
        }
        if unit_index == 0 {
            return Err(Error::Domain("unit index must be positive".into()));
        }
        for &e in &ram_indices {
            if e == 0 || !degree.is_multiple_of(e) {
                return Err(Error::Domain(format!(
                    "ramification index {e} does not divide the degree {degree}"
                )));
            }
        }
        Ok(ChevalleyInput {
            h,
            degree,
            ram_indices,
            unit_index,
        })
    }
}

/// Number of ambiguous ideal classes, h · ∏ e_P / (n · unit_index).
/// Errors with `InconsistentInput` when the formula value is not a
/// positive integer.
pub fn ambiguous_count(inp: &ChevalleyInput) -> Result<BigUint> {
    let mut num = BigUint::from(inp.h);
    for &e in &inp.ram_indices {
        num *= BigUint::from(e);
    }
    let den = BigUint::from(inp.degree) * BigUint::from(inp.unit_index);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || q.is_zero() {
        return Err(Error::InconsistentInput(format!(
            "Chevalley formula value {num}/{den} is not a positive integer"
        )));
    }
    Ok(q)
}

/// Exponent of p in the number of strongly ambiguous classes,
/// ∏ e_P / (p · unit_index), for a degree-p extension over a base whose
/// class number is prime to p. Errors when the quotient is not a power
/// of p.
pub fn strong_ambiguous_count(p: u64, ram_indices: &[u64], unit_index: u64) -> Result<u64> {
    if unit_index == 0 {
        return Err(Error::Domain("unit index must be positive".into()));
    }
    let mut num = BigUint::one();
    for &e in ram_indices {
        num *= BigUint::from(e);
    }
    let den = BigUint::from(p) * BigUint::from(unit_index);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || q.is_zero() {
        return Err(Error::InconsistentInput(format!(
            "strongly ambiguous count {num}/{den} is not a positive integer"
        )));
    }
    let big_p = BigUint::from(p);
    let mut rest = q;
    let mut exponent = 0u64;
    while (&rest % &big_p).is_zero() {
        rest /= &big_p;
        exponent += 1;
    }
    if !rest.is_one() {
        return Err(Error::InconsistentInput(format!(
            "strongly ambiguous count has a factor prime to p: {rest}"
        )));
    }
    Ok(exponent)
}

/// μ ≥ s − 1 (floored at zero) for a tower with s inert ramified primes.
pub fn mu_lower_from_s(s: u32) -> u32 {
    s.saturating_sub(1)
}

/// The class-number exponent bound e_n ≥ (s−1)p^n − 1, floored at zero.
pub fn en_lower_bound(s: u32, p: u64, n: u32) -> u64 {
    let pn = checked_p_pow(p, n);
    (u64::from(s.saturating_sub(1)) * pn).saturating_sub(1)
}

/// Bounds on the exponent of the strongly ambiguous count at layer n:
/// at least (s−1)p^n − 1 and at most s·p^n − 1.
pub fn strong_ambiguous_bounds(s: u32, p: u64, n: u32) -> (u64, u64) {
    let pn = checked_p_pow(p, n);
    let low = (u64::from(s.saturating_sub(1)) * pn).saturating_sub(1);
    let high = u64::from(s) * pn - 1;
    (low, high)
}
