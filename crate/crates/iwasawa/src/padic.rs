//! Exact arithmetic on p-adic integers truncated at precision p^N.
//!
//! A [`PadicScalar`] is a residue in Z/p^N standing in for an element of
//! Z_p. Precision is carried per value and checked on every binary
//! operation, since deduction runs mix several (p, N) contexts.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Default working precision. Far exceeds every valuation arising in the
/// shipped examples (the largest observed order exponent is about 31).
pub const DEFAULT_PRECISION: u32 = 64;

/// The pair (p, N) that fixes the ring Z/p^N a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicContext {
    p: u64,
    precision: u32,
}

impl PadicContext {
    /// A context for Z/p^N. `p` must be prime and `precision` positive.
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::Domain("precision must be positive".into()));
        }
        Ok(PadicContext { p, precision })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// p^N as a big integer.
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }

    /// Same prime, new precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        PadicContext {
            p: self.p,
            precision,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                p_left: self.p,
                n_left: self.precision,
                p_right: other.p,
                n_right: other.precision,
            });
        }
        Ok(())
    }
}

/// Result of a valuation query at finite precision.
///
/// A zero residue is reported as [`Valuation::AtLeastPrecision`] rather than
/// a number: the true valuation is indistinguishable from ≥ N, and
/// downstream determinant tests must tell "provably a unit times p^k" apart
/// from "unknown at this precision".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeastPrecision(u32),
}

impl Valuation {
    /// The valuation when it is known exactly.
    pub fn exact(&self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(*v),
            Valuation::AtLeastPrecision(_) => None,
        }
    }

    /// A lower bound that is always valid.
    pub fn lower_bound(&self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeastPrecision(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Valuation::Exact(0))
    }
}

/// An element of Z/p^N representing a p-adic integer at capped precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    ctx: PadicContext,
    residue: BigUint,
}

impl PadicScalar {
    /// Reduce `value` into [0, p^N).
    pub fn new(ctx: PadicContext, value: BigUint) -> Self {
        PadicScalar {
            ctx,
            residue: value % ctx.modulus(),
        }
    }

    /// Build from a signed integer, mapping negatives to their residues.
    pub fn from_int(ctx: PadicContext, value: i64) -> Self {
        let m = BigInt::from(ctx.modulus());
        let r = BigInt::from(value).mod_floor(&m);
        PadicScalar {
            ctx,
            residue: r.to_biguint().expect("mod_floor result is nonnegative"),
        }
    }

    pub fn zero(ctx: PadicContext) -> Self {
        PadicScalar {
            ctx,
            residue: BigUint::zero(),
        }
    }

    pub fn one(ctx: PadicContext) -> Self {
        PadicScalar::new(ctx, BigUint::one())
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn precision(&self) -> u32 {
        self.ctx.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.ctx.p).is_zero()
    }

    /// (x + y) mod p^N. Errors if p or N differ.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        Ok(PadicScalar::new(self.ctx, &self.residue + &other.residue))
    }

    /// (x − y) mod p^N. Errors if p or N differ.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        let m = self.ctx.modulus();
        Ok(PadicScalar::new(
            self.ctx,
            &self.residue + &m - &other.residue,
        ))
    }

    /// (x · y) mod p^N. Errors if p or N differ.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        Ok(PadicScalar::new(self.ctx, &self.residue * &other.residue))
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.modulus();
        PadicScalar::new(self.ctx, &m - (&self.residue % &m))
    }

    /// Largest k with p^k dividing the residue, or `AtLeastPrecision(N)` for
    /// the zero residue.
    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeastPrecision(self.ctx.precision);
        }
        let p = BigUint::from(self.ctx.p);
        let mut r = self.residue.clone();
        let mut v = 0u32;
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                return Valuation::Exact(v);
            }
            r = q;
            v += 1;
        }
    }

    /// Multiplicative inverse mod p^N. Errors unless the valuation is zero.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let m = BigInt::from(self.ctx.modulus());
        let a = BigInt::from(self.residue.clone());
        let ext = a.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let inv = ext.x.mod_floor(&m);
        Ok(PadicScalar {
            ctx: self.ctx,
            residue: inv.to_biguint().expect("mod_floor result is nonnegative"),
        })
    }

    /// The canonical lift to a higher precision (residue left unchanged),
    /// or reduction to a lower one.
    pub fn to_precision(&self, precision: u32) -> Result<Self> {
        let ctx = PadicContext::new(self.ctx.p, precision)?;
        Ok(PadicScalar::new(ctx, self.residue.clone()))
    }

    /// Signed representative in (−p^N/2, p^N/2], handy for display.
    pub fn signed_residue(&self) -> BigInt {
        let m = BigInt::from(self.ctx.modulus());
        let r = BigInt::from(self.residue.clone());
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }
}

impl std::fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.residue)
    }
}

/// Deterministic trial-division primality test; the primes in play are tiny.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of p in a positive integer.
pub(crate) fn int_valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0, "valuation of zero is undefined");
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub(crate) fn bigint_p_valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut r = n.abs();
    let mut v = 0;
    loop {
        let (q, rem) = r.div_rem(&p);
        if !rem.is_zero() {
            return Some(v);
        }
        r = q;
        v += 1;
    }
}
