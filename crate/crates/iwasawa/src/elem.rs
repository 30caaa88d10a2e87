//! Elementary Λ-modules E = ⊕Λ/(p^μᵢ) ⊕ ⊕Λ/(fⱼ) with fⱼ distinguished.
//!
//! Orders of quotients are tracked as exponents of p, never as expanded
//! powers: the examples reach orders like 3^31, which overflow fixed-width
//! integers as values but not as exponents.

use crate::lambda::{self, layer_factor, nu_mod, quotient_order_pj_nu, IdealIndex, LambdaPoly};
use crate::padic::PadicContext;
use crate::{Error, Result};

/// Precision-escalation cap, in p-adic digits. A determinant that still
/// vanishes mod p^4096 is treated as unresolvable rather than retried.
pub const MAX_PRECISION: u32 = 4096;

/// Order of E/ν_nE as an exponent of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuQuotient {
    Finite(u64),
    Infinite,
    /// The determinant route stayed indeterminate even at [`MAX_PRECISION`]
    /// and no factor of ν_n divides any fⱼ; surfaced, never guessed.
    IndeterminateAtPrecision(u32),
}

impl NuQuotient {
    pub fn finite(&self) -> Option<u64> {
        match self {
            NuQuotient::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

/// The data (p; exponents μᵢ; distinguished polynomials fⱼ) of an
/// elementary Λ-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryModule {
    ctx: PadicContext,
    p_exponents: Vec<u32>,
    dist_polys: Vec<LambdaPoly>,
}

impl ElementaryModule {
    /// Every μᵢ must be positive and every fⱼ distinguished over `ctx`.
    pub fn new(
        ctx: PadicContext,
        p_exponents: Vec<u32>,
        dist_polys: Vec<LambdaPoly>,
    ) -> Result<Self> {
        if p_exponents.contains(&0) {
            return Err(Error::Domain("p-power exponents must be positive".into()));
        }
        for f in &dist_polys {
            if f.context() != ctx {
                return Err(Error::Domain(
                    "summand polynomial has a different (p, N) context".into(),
                ));
            }
            if !f.is_distinguished().map_err(|_| Error::NotDistinguished)? {
                return Err(Error::NotDistinguished);
            }
        }
        Ok(ElementaryModule {
            ctx,
            p_exponents,
            dist_polys,
        })
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn p_exponents(&self) -> &[u32] {
        &self.p_exponents
    }

    pub fn dist_polys(&self) -> &[LambdaPoly] {
        &self.dist_polys
    }

    /// (μ, λ) = (Σ μᵢ, Σ deg fⱼ).
    pub fn invariants(&self) -> (u64, u64) {
        let mu = self.p_exponents.iter().map(|&m| u64::from(m)).sum();
        let lambda = self
            .dist_polys
            .iter()
            .map(|f| f.degree().expect("distinguished implies nonzero") as u64)
            .sum();
        (mu, lambda)
    }

    /// Exponent of #(E/ν_nE): Σ μᵢ(p^n − 1) from the p-power part plus the
    /// ideal index of (fⱼ, ν_n) for each polynomial summand.
    ///
    /// A summand Λ/(fⱼ) makes the quotient infinite exactly when fⱼ shares
    /// a factor with ν_n; since the irreducible factors of ν_n are the
    /// layer factors ω_k/ω_(k−1), that is decided by exact divisibility at
    /// the stored precision. Otherwise the determinant is retried at
    /// doubled precision up to [`MAX_PRECISION`] and any remaining
    /// indeterminacy is surfaced.
    pub fn quotient_order_nu(&self, n: u32) -> NuQuotient {
        let p = self.ctx.p();
        let mut total: u64 = self
            .p_exponents
            .iter()
            .map(|&j| quotient_order_pj_nu(p, j, n))
            .sum();
        for f in &self.dist_polys {
            match summand_index(f, n) {
                IdealIndex::Finite(v) => total += v,
                IdealIndex::Infinite => return NuQuotient::Infinite,
                IdealIndex::IndeterminateAtPrecision(prec) => {
                    return NuQuotient::IndeterminateAtPrecision(prec)
                }
            }
        }
        NuQuotient::Finite(total)
    }

    /// Exponent of the p-torsion `#(E/ν_nE)[p]` = `#(E/(ν_n, p)E)`: each Λ/(p^μᵢ) contributes
    /// p^n − 1 and each Λ/(fⱼ) contributes deg fⱼ, valid once
    /// p^n − 1 ≥ deg fⱼ for every j.
    pub fn p_torsion_order_nu(&self, n: u32) -> Result<u64> {
        let p = self.ctx.p();
        let pn1 = lambda::checked_p_pow(p, n) - 1;
        for f in &self.dist_polys {
            let d = f.degree().expect("distinguished implies nonzero") as u64;
            if pn1 < d {
                return Err(Error::Domain(format!(
                    "p^n - 1 = {pn1} is smaller than deg f = {d} for summand {f}"
                )));
            }
        }
        let from_p_part = self.p_exponents.len() as u64 * pn1;
        let from_polys: u64 = self
            .dist_polys
            .iter()
            .map(|f| f.degree().unwrap() as u64)
            .sum();
        Ok(from_p_part + from_polys)
    }
}

/// Index of (f, ν_n) with infinitude decided by layer-factor divisibility
/// and finite values resolved by precision escalation.
fn summand_index(f: &LambdaPoly, n: u32) -> IdealIndex {
    let ctx = f.context();
    let p = ctx.p();
    let deg_f = f.degree().expect("distinguished implies nonzero") as u64;
    // Any common factor of f and nu_n is a product of layer factors, and a
    // layer factor of degree > deg f cannot divide f.
    for k in 1..=n {
        let deg_factor = lambda::checked_p_pow(p, k) - lambda::checked_p_pow(p, k - 1);
        if deg_factor > deg_f {
            break;
        }
        let xi = layer_factor(ctx, k);
        if f.is_divisible_by(&xi)
            .expect("layer factor is distinguished")
        {
            return IdealIndex::Infinite;
        }
    }
    let mut precision = ctx.precision();
    loop {
        let f_lift = f
            .to_precision(precision)
            .expect("canonical lift preserves validity");
        let g = nu_mod(&f_lift, n).expect("f is distinguished");
        match lambda::ideal_index(&f_lift, &g).expect("f is distinguished") {
            IdealIndex::Finite(v) => return IdealIndex::Finite(v),
            IdealIndex::IndeterminateAtPrecision(_) => {
                if precision >= MAX_PRECISION {
                    return IdealIndex::IndeterminateAtPrecision(precision);
                }
                precision = (precision * 2).min(MAX_PRECISION);
            }
            IdealIndex::Infinite => unreachable!("ideal_index never returns Infinite"),
        }
    }
}

/// Lower bound, as an exponent of p, for #(E/ν_nE) when E is elementary
/// with μ = 0 and the given λ.
///
/// For n = 1 the bound is min(λ, p−1). For p = 2 and n = 2 the bound is
/// 16 when λ = 2 and 8 when λ ≥ 3; the λ = 1 value of 2 is an
/// implementation-derived floor (the n = 1 bound applied through
/// ν_2 = ν_1 · (ν_2/ν_1)), not a quoted one — callers flag it as derived.
pub fn lambdathm_lower_bound(p: u64, lambda: u64, n: u32) -> Result<u64> {
    match n {
        1 => Ok(lambda.min(p - 1)),
        2 if p == 2 => Ok(match lambda {
            0 => 0,
            1 => 2,
            2 => 4,
            _ => 3,
        }),
        _ => Err(Error::Domain(format!(
            "no quotient lower bound is available for p={p}, n={n}"
        ))),
    }
}
