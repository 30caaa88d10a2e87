//! Arithmetic in Λ = `Z_p[[T]]` at finite precision.
//!
//! Every element handled here is a polynomial: ω_n, ν_n, distinguished
//! polynomials, and the quotients and remainders of Weierstrass division
//! stay polynomial, so Λ is represented by [`LambdaPoly`] and nothing else.
//!
//! The ideal index #(Λ/(f, g)) for distinguished f is computed as p^v where
//! v is the p-valuation of the determinant of multiplication by g on
//! Λ/(f), taken with respect to the basis {1, T, …, T^(deg f − 1)}.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::padic::{bigint_p_valuation, PadicContext, PadicScalar};
use crate::{Error, Result};

/// A polynomial over Z/p^N; `coeffs[k]` is the T^k coefficient and trailing
/// zero coefficients are trimmed. All coefficients share one (p, N) context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaPoly {
    ctx: PadicContext,
    coeffs: Vec<BigUint>,
}

/// Index of the ideal (f, g) in Λ, as an exponent of p.
///
/// `Infinite` is never produced by [`ideal_index`] itself — a vanishing
/// determinant mod p^N only says the index is invisible at this precision.
/// The elementary-module layer decides infinitude (where divisibility of
/// ν_n is the actual question) and owns the precision-escalation loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealIndex {
    Finite(u64),
    Infinite,
    IndeterminateAtPrecision(u32),
}

impl LambdaPoly {
    pub fn zero(ctx: PadicContext) -> Self {
        LambdaPoly {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: PadicContext) -> Self {
        LambdaPoly::from_biguint_coeffs(ctx, vec![BigUint::one()])
    }

    /// The monomial T^k.
    pub fn monomial(ctx: PadicContext, k: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); k + 1];
        coeffs[k] = BigUint::one();
        LambdaPoly::from_biguint_coeffs(ctx, coeffs)
    }

    pub fn from_biguint_coeffs(ctx: PadicContext, coeffs: Vec<BigUint>) -> Self {
        let m = ctx.modulus();
        let mut coeffs: Vec<BigUint> = coeffs.into_iter().map(|c| c % &m).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LambdaPoly { ctx, coeffs }
    }

    /// Build from signed integer coefficients, constant term first.
    pub fn from_int_coeffs(ctx: PadicContext, coeffs: &[i64]) -> Self {
        let m = BigInt::from(ctx.modulus());
        let lifted = coeffs
            .iter()
            .map(|&c| {
                BigInt::from(c)
                    .mod_floor(&m)
                    .to_biguint()
                    .expect("mod_floor result is nonnegative")
            })
            .collect();
        LambdaPoly::from_biguint_coeffs(ctx, lifted)
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// The T^k coefficient as a scalar (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> PadicScalar {
        match self.coeffs.get(k) {
            Some(c) => PadicScalar::new(self.ctx, c.clone()),
            None => PadicScalar::zero(self.ctx),
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = PadicScalar> + '_ {
        self.coeffs
            .iter()
            .map(|c| PadicScalar::new(self.ctx, c.clone()))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            let (a, b) = (self.ctx, other.ctx);
            return Err(Error::ContextMismatch {
                p_left: a.p(),
                n_left: a.precision(),
                p_right: b.p(),
                n_right: b.precision(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus();
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigUint::zero(); len];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).cloned().unwrap_or_default();
            let b = other.coeffs.get(i).cloned().unwrap_or_default();
            *o = (a + b) % &m;
        }
        Ok(LambdaPoly::from_biguint_coeffs(self.ctx, out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus();
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigUint::zero(); len];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).cloned().unwrap_or_default();
            let b = other.coeffs.get(i).cloned().unwrap_or_default();
            *o = (a + &m - b) % &m;
        }
        Ok(LambdaPoly::from_biguint_coeffs(self.ctx, out))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(LambdaPoly::zero(self.ctx));
        }
        let m = self.ctx.modulus();
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        for c in &mut out {
            *c %= &m;
        }
        Ok(LambdaPoly::from_biguint_coeffs(self.ctx, out))
    }

    pub fn mul_scalar(&self, c: &PadicScalar) -> Result<Self> {
        self.mul(&LambdaPoly::from_biguint_coeffs(
            self.ctx,
            vec![c.residue().clone()],
        ))
    }

    /// Evaluate at a scalar by Horner's rule.
    pub fn eval(&self, x: &PadicScalar) -> Result<PadicScalar> {
        let mut acc = PadicScalar::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?;
            acc = acc.add(&PadicScalar::new(self.ctx, c.clone()))?;
        }
        Ok(acc)
    }

    /// Canonical lift (or reduction) of every coefficient to a new precision.
    pub fn to_precision(&self, precision: u32) -> Result<Self> {
        let ctx = PadicContext::new(self.ctx.p(), precision)?;
        Ok(LambdaPoly::from_biguint_coeffs(ctx, self.coeffs.clone()))
    }

    /// True iff the leading coefficient is 1 and every lower coefficient is
    /// divisible by p. The zero polynomial is rejected outright.
    pub fn is_distinguished(&self) -> Result<bool> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        if !self.coeffs[deg].is_one() {
            return Ok(false);
        }
        let p = BigUint::from(self.ctx.p());
        Ok(self.coeffs[..deg].iter().all(|c| (c % &p).is_zero()))
    }

    fn ensure_distinguished(&self) -> Result<()> {
        if self.is_distinguished().map_err(|e| match e {
            Error::ZeroPolynomial => Error::NotDistinguished,
            other => other,
        })? {
            Ok(())
        } else {
            Err(Error::NotDistinguished)
        }
    }

    /// Division with remainder by a distinguished polynomial: returns (q, r)
    /// with `self = d·q + r` and deg r < deg d, exact mod p^N.
    pub fn weierstrass_divide(&self, d: &Self) -> Result<(Self, Self)> {
        self.check(d)?;
        d.ensure_distinguished()?;
        let dd = d.degree().expect("distinguished implies nonzero");
        let m = self.ctx.modulus();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((LambdaPoly::zero(self.ctx), self.clone()));
        }
        let mut quot = vec![BigUint::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c.clone();
            // leading coefficient of d is 1, so no inversion is needed
            for (j, dj) in d.coeffs.iter().enumerate() {
                let sub = (&c * dj) % &m;
                let idx = i - dd + j;
                rem[idx] = (&rem[idx] + &m - sub) % &m;
            }
            debug_assert!(rem[i].is_zero());
        }
        rem.truncate(dd);
        Ok((
            LambdaPoly::from_biguint_coeffs(self.ctx, quot),
            LambdaPoly::from_biguint_coeffs(self.ctx, rem),
        ))
    }

    /// Remainder of division by a distinguished polynomial.
    pub fn rem_by(&self, d: &Self) -> Result<Self> {
        Ok(self.weierstrass_divide(d)?.1)
    }

    /// True iff `d` divides `self` exactly at the stored precision.
    pub fn is_divisible_by(&self, d: &Self) -> Result<bool> {
        Ok(self.rem_by(d)?.is_zero())
    }
}

impl std::fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{c}T")?,
                (_, true) => write!(f, "T^{k}")?,
                (_, false) => write!(f, "{c}T^{k}")?,
            }
        }
        Ok(())
    }
}

/// ω_n = (1+T)^(p^n) − 1, reduced mod p^N. Degree p^n.
pub fn omega(ctx: PadicContext, n: u32) -> LambdaPoly {
    let e = checked_p_pow(ctx.p(), n);
    let base = LambdaPoly::from_int_coeffs(ctx, &[1, 1]);
    let pow = poly_pow(&base, e);
    pow.sub(&LambdaPoly::one(ctx))
        .expect("contexts match by construction")
}

/// ν_n = ω_n/T = (1+T)^(p^n −1) + ⋯ + (1+T) + 1. Distinguished of degree
/// p^n − 1, with ν_0 = 1.
pub fn nu(ctx: PadicContext, n: u32) -> LambdaPoly {
    let w = omega(ctx, n);
    debug_assert!(w.coeff(0).is_zero(), "omega has zero constant term");
    let coeffs = w.coeffs[1..].to_vec();
    LambdaPoly::from_biguint_coeffs(ctx, coeffs)
}

/// The factor ω_k/ω_(k−1) of ν_n introduced at layer k ≥ 1. Irreducible
/// and distinguished of degree p^k − p^(k−1); ν_n is the product of these
/// for k = 1..n.
pub fn layer_factor(ctx: PadicContext, k: u32) -> LambdaPoly {
    assert!(k >= 1, "layer factors are indexed from 1");
    let wk = omega(ctx, k);
    if k == 1 {
        return nu(ctx, 1);
    }
    let (q, r) = wk
        .weierstrass_divide(&omega(ctx, k - 1))
        .expect("omega_(k-1) is monic, division is exact");
    debug_assert!(r.is_zero(), "omega_(k-1) divides omega_k");
    q
}

/// ν_n reduced modulo a distinguished polynomial `f`, computed as the
/// geometric sum Σ_{i<p^n} (1+T)^i mod f without materializing ν_n.
pub fn nu_mod(f: &LambdaPoly, n: u32) -> Result<LambdaPoly> {
    f.ensure_distinguished()?;
    let ctx = f.context();
    let e = checked_p_pow(ctx.p(), n);
    let x = LambdaPoly::from_int_coeffs(ctx, &[1, 1]).rem_by(f)?;
    let (sum, _) = geometric_sum_mod(&x, e, f)?;
    Ok(sum)
}

/// Returns (Σ_{i<m} x^i mod f, x^m mod f).
fn geometric_sum_mod(x: &LambdaPoly, m: u64, f: &LambdaPoly) -> Result<(LambdaPoly, LambdaPoly)> {
    let ctx = x.context();
    if m == 0 {
        return Ok((LambdaPoly::zero(ctx), LambdaPoly::one(ctx)));
    }
    let (s_half, x_half) = geometric_sum_mod(x, m / 2, f)?;
    // S_{2k} = S_k · (1 + x^k),  x^{2k} = (x^k)^2
    let s_even = s_half.mul(&LambdaPoly::one(ctx).add(&x_half)?)?.rem_by(f)?;
    let x_even = x_half.mul(&x_half)?.rem_by(f)?;
    if m.is_multiple_of(2) {
        Ok((s_even, x_even))
    } else {
        let s = s_even.add(&x_even)?.rem_by(f)?;
        let x_odd = x_even.mul(x)?.rem_by(f)?;
        Ok((s, x_odd))
    }
}

/// Index exponent of the ideal (f, g) in Λ for distinguished f: the
/// p-valuation of det(multiplication by g on Λ/(f)) when that determinant
/// is visible at precision N, and `IndeterminateAtPrecision` when it
/// vanishes mod p^N.
pub fn ideal_index(f: &LambdaPoly, g: &LambdaPoly) -> Result<IdealIndex> {
    f.check(g)?;
    f.ensure_distinguished()?;
    let ctx = f.context();
    let m = f.degree().expect("distinguished implies nonzero");
    if m == 0 {
        // f is a unit, the ideal is all of Λ
        return Ok(IdealIndex::Finite(0));
    }
    let g_red = g.rem_by(f)?;
    // columns: coefficients of g·T^j mod f on the basis {1, T, ..., T^(m-1)}
    let mut cols: Vec<Vec<BigUint>> = Vec::with_capacity(m);
    let mut cur = g_red;
    for _ in 0..m {
        let mut col = vec![BigUint::zero(); m];
        for (i, item) in col.iter_mut().enumerate() {
            *item = cur.coeff(i).residue().clone();
        }
        cols.push(col);
        cur = shift_mod(&cur, f)?;
    }
    let mat: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from(cols[j][i].clone())).collect())
        .collect();
    let det = bareiss_determinant(mat, ctx.p());
    let modulus = BigInt::from(ctx.modulus());
    let det_res = det.mod_floor(&modulus);
    match bigint_p_valuation(&det_res, ctx.p()) {
        None => Ok(IdealIndex::IndeterminateAtPrecision(ctx.precision())),
        Some(v) => Ok(IdealIndex::Finite(u64::from(v))),
    }
}

/// Binary exponentiation of a polynomial.
fn poly_pow(base: &LambdaPoly, mut e: u64) -> LambdaPoly {
    let mut result = LambdaPoly::one(base.context());
    let mut acc = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&acc).expect("contexts match");
        }
        e >>= 1;
        if e > 0 {
            acc = acc.mul(&acc).expect("contexts match");
        }
    }
    result
}

/// T·g mod f for distinguished f.
fn shift_mod(g: &LambdaPoly, f: &LambdaPoly) -> Result<LambdaPoly> {
    let ctx = g.context();
    if g.is_zero() {
        return Ok(LambdaPoly::zero(ctx));
    }
    let mut coeffs = vec![BigUint::zero()];
    coeffs.extend(g.coeffs.iter().cloned());
    LambdaPoly::from_biguint_coeffs(ctx, coeffs).rem_by(f)
}

/// Fraction-free (Bareiss) determinant of an exact integer lift, pivoting
/// on minimal p-valuation so true unit parts surface early.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>, p: u64) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !m[r][k].is_zero())
            .min_by_key(|&r| bigint_p_valuation(&m[r][k], p).expect("nonzero"));
        let Some(pr) = pivot else {
            return BigInt::zero();
        };
        if pr != k {
            m.swap(pr, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exponent of the contribution p^(j(p^n − 1)) of a summand Λ/(p^j) to the
/// order of E/ν_nE.
pub fn quotient_order_pj_nu(p: u64, j: u32, n: u32) -> u64 {
    u64::from(j) * (checked_p_pow(p, n) - 1)
}

pub(crate) fn checked_p_pow(p: u64, n: u32) -> u64 {
    p.checked_pow(n)
        .unwrap_or_else(|| panic!("p^n overflows u64: {p}^{n}"))
}

/// Parse a polynomial like `T^2+3T+3`, `T^3 + 4T^2 + 6T + 4` or `-2T+5`
/// into a [`LambdaPoly`]. Accepts `+`/`-` separated terms `cT^k`, `cT`,
/// `T^k`, `T`, and integer constants.
pub fn parse_poly(ctx: PadicContext, input: &str) -> Result<LambdaPoly> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse {
            path: "<poly>".into(),
            message: "empty polynomial".into(),
        });
    }
    let bad = |message: String| Error::Parse {
        path: "<poly>".into(),
        message,
    };
    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut rest = s.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        if term.is_empty() {
            return Err(bad(format!("empty term in {input:?}")));
        }
        let (coeff_str, power) = match term.find('T') {
            None => (term, 0usize),
            Some(t) => {
                let pow = match &term[t + 1..] {
                    "" => 1usize,
                    exp => exp
                        .strip_prefix('^')
                        .ok_or_else(|| bad(format!("expected ^ after T in {term:?}")))?
                        .parse()
                        .map_err(|_| bad(format!("bad exponent in {term:?}")))?,
                };
                (&term[..t], pow)
            }
        };
        let coeff: i64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| bad(format!("bad coefficient in {term:?}")))?
        };
        terms.push((sign * coeff, power));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
        rest = &rest[end + 1..];
    }
    let max_pow = terms.iter().map(|&(_, k)| k).max().unwrap_or(0);
    let mut coeffs = vec![0i64; max_pow + 1];
    for (c, k) in terms {
        coeffs[k] = coeffs[k]
            .checked_add(c)
            .ok_or_else(|| bad("coefficient overflow".into()))?;
    }
    Ok(LambdaPoly::from_int_coeffs(ctx, &coeffs))
}
