//! The rule engine: turns one [`ExampleRecord`] into exact values or
//! rigorous bounds for (μ, λ, ν), with an ordered trace naming the theorem
//! behind every step.
//!
//! Rules, applied in order:
//!
//! - R1: μ ≥ s − 1 from the ambiguous-class construction.
//! - R2: μ ≤ min over n of ⌊(e_n − e_0)/(p^n − 1)⌋ from the order identity.
//! - R3: λ is even when one prime ramifies in the tower.
//! - R4: (p − 1) | λ when p does not divide the base class number.
//! - R5: a candidate μ whose residual sequence R_n = e_n − e_0 − μ(p^n − 1)
//!   fails to be nonnegative and nondecreasing is eliminated.
//! - R6: R_1 = 0 forces the finite part and the λ-part to vanish, so λ = 0
//!   and ν = e_0 − μ.
//! - R7: λ candidates whose elementary-module quotient lower bound exceeds
//!   the observed residual are eliminated.
//! - R8: a stabilized residual (R_n = R_(n+1), n ≥ 1) in a totally ramified
//!   tower gives λ = 0 and ν = e_0 − μ + R_n.
//! - R9: if λ = 0 is forced and R_1 > 0, then ν ≥ e_0 − μ + R_1, reported
//!   as a lower bound only (the finite part may keep growing).
//!
//! μ candidates are enumerated exhaustively between the R1 and R2 bounds;
//! the interval never exceeds a handful of integers on real data. λ is
//! never guessed: when the rules do not pin it, the result carries a
//! constraint descriptor, not a value.

use crate::ambiguous::mu_lower_from_s;
use crate::class_data::ExampleRecord;
use crate::elem::lambdathm_lower_bound;
use crate::lambda::checked_p_pow;
use crate::{Error, Result};

/// Derived μ: exact or a closed integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuResult {
    Exact(u64),
    Range { min: u64, max: u64 },
}

impl MuResult {
    pub fn exact(&self) -> Option<u64> {
        match self {
            MuResult::Exact(v) => Some(*v),
            MuResult::Range { .. } => None,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        match *self {
            MuResult::Exact(e) => e == v,
            MuResult::Range { min, max } => min <= v && v <= max,
        }
    }

    pub fn bounds(&self) -> (u64, u64) {
        match *self {
            MuResult::Exact(e) => (e, e),
            MuResult::Range { min, max } => (min, max),
        }
    }
}

/// Derived λ: exact, or a divisibility constraint with an optional upper
/// bound (possibly fully open).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaResult {
    Exact(u64),
    Constrained { divisor: u64, max: Option<u64> },
}

impl LambdaResult {
    pub fn exact(&self) -> Option<u64> {
        match self {
            LambdaResult::Exact(v) => Some(*v),
            LambdaResult::Constrained { .. } => None,
        }
    }

    pub fn upper_bound(&self) -> Option<u64> {
        match *self {
            LambdaResult::Exact(v) => Some(v),
            LambdaResult::Constrained { max, .. } => max,
        }
    }
}

/// Derived ν: exact, a lower bound, or unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuResult {
    Exact(i64),
    AtLeast(i64),
    Unknown,
}

impl NuResult {
    pub fn exact(&self) -> Option<i64> {
        match self {
            NuResult::Exact(v) => Some(*v),
            _ => None,
        }
    }
}

/// Identifier of a deduction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
}

impl RuleId {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
        }
    }

    /// The theorem the rule mechanizes.
    pub fn citation(&self) -> &'static str {
        match self {
            RuleId::R1 => "ambiguous class number formula (Chevalley)",
            RuleId::R2 => "pseudo-isomorphism order identity",
            RuleId::R3 => "lambda parity theorem (one ramified prime)",
            RuleId::R4 => "lambda divisibility theorem (base class number prime to p)",
            RuleId::R5 => "nondecreasing quotient lemma",
            RuleId::R6 => "trivial first quotient lemma (Nakayama)",
            RuleId::R7 => "elementary module quotient lower bounds",
            RuleId::R8 => "stabilization lemma (Nakayama)",
            RuleId::R9 => "persistent finite residual bound",
        }
    }
}

/// One fired (or explicitly skipped) rule with its consequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub citation: &'static str,
    pub consequence: String,
}

/// Derived invariants plus the evidence that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeductionResult {
    pub mu: MuResult,
    pub lambda: LambdaResult,
    pub nu: NuResult,
    /// Residual sequences R_n, one per surviving μ candidate, ascending in μ.
    pub residuals: Vec<(u64, Vec<i64>)>,
    pub trace: Vec<TraceStep>,
    /// First level from which exact results predict e_n; `None` means every
    /// supplied level is matched (the asymptotic-only marker otherwise).
    pub asymptotic_from: Option<usize>,
}

/// Verdict of [`consistency_check`] at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelVerdict {
    pub level: usize,
    pub predicted: i64,
    pub observed: u64,
    pub matches: bool,
    /// Below the stabilization index of an asymptotic-only result.
    pub asymptotic_exempt: bool,
}

/// μ ≤ min over n ≥ 1 of ⌊(e_n − e_0)/(p^n − 1)⌋. The sequence must be
/// nondecreasing with at least two entries.
pub fn mu_upper(e: &[u64], p: u64) -> Result<u64> {
    if e.len() < 2 {
        return Err(Error::Validation(
            "mu upper bound needs at least two layers".into(),
        ));
    }
    if e.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Validation(
            "e-sequence decreases, which class field theory forbids".into(),
        ));
    }
    Ok((1..e.len())
        .map(|n| (e[n] - e[0]) / (checked_p_pow(p, n as u32) - 1))
        .min()
        .expect("at least one layer beyond the base"))
}

/// Residuals R_n = e_n − e_0 − μ(p^n − 1), with R_0 = 0.
pub fn residuals(e: &[u64], p: u64, mu: u64) -> Vec<i64> {
    (0..e.len())
        .map(|n| e[n] as i64 - e[0] as i64 - (mu as i64) * (checked_p_pow(p, n as u32) as i64 - 1))
        .collect()
}

/// e_n = μp^n + λn + ν.
pub fn predict_e(mu: u64, lambda: u64, nu: i64, p: u64, n: u32) -> i64 {
    mu as i64 * checked_p_pow(p, n) as i64 + lambda as i64 * i64::from(n) + nu
}

/// Run the rules R1–R9 on one record.
pub fn deduce(rec: &ExampleRecord) -> Result<DeductionResult> {
    let p = rec.p;
    let e = rec.e_sequence();
    if e.len() < 2 {
        return Err(Error::Validation(format!(
            "{}: deduction needs at least two layers",
            rec.label
        )));
    }
    let mut trace = Vec::new();
    let fire = |rule: RuleId, consequence: String, trace: &mut Vec<TraceStep>| {
        trace.push(TraceStep {
            rule,
            citation: rule.citation(),
            consequence,
        });
    };

    // R1: mu >= s - 1
    let mu_min = u64::from(mu_lower_from_s(rec.s));
    fire(
        RuleId::R1,
        format!("μ ≥ {mu_min} from s = {}", rec.s),
        &mut trace,
    );

    // R2: mu <= floor((e_n - e_0)/(p^n - 1))
    let mu_max = mu_upper(&e, p)?;
    fire(RuleId::R2, format!("μ ≤ {mu_max}"), &mut trace);
    if mu_max < mu_min {
        return Err(Error::InconsistentInput(format!(
            "{}: μ bounds cross ({mu_min} > {mu_max})",
            rec.label
        )));
    }

    // R3/R4: divisibility constraints on lambda
    let mut divisor = 1u64;
    if rec.flags.single_ramified_prime {
        divisor = lcm(divisor, 2);
        fire(RuleId::R3, "λ is even".into(), &mut trace);
    }
    if rec.flags.p_nmid_class_number_k0 && p > 2 {
        divisor = lcm(divisor, p - 1);
        fire(
            RuleId::R4,
            format!("λ is divisible by {}", p - 1),
            &mut trace,
        );
    }

    // R5: residual monotonicity filters the candidate interval
    let mut survivors: Vec<(u64, Vec<i64>)> = Vec::new();
    let mut eliminated: Vec<u64> = Vec::new();
    for mu in mu_min..=mu_max {
        let r = residuals(&e, p, mu);
        let ok = r.iter().all(|&x| x >= 0) && r.windows(2).all(|w| w[0] <= w[1]);
        if ok {
            survivors.push((mu, r));
        } else {
            eliminated.push(mu);
        }
    }
    if survivors.is_empty() {
        return Err(Error::InconsistentInput(format!(
            "{}: no μ candidate in [{mu_min}, {mu_max}] has monotone residuals",
            rec.label
        )));
    }
    let surviving: Vec<u64> = survivors.iter().map(|&(m, _)| m).collect();
    fire(
        RuleId::R5,
        if eliminated.is_empty() {
            format!("μ candidates {surviving:?} all have monotone residuals")
        } else {
            format!("eliminated μ ∈ {eliminated:?}; surviving μ ∈ {surviving:?}")
        },
        &mut trace,
    );

    if survivors.len() > 1 {
        let (min, max) = (surviving[0], *surviving.last().unwrap());
        return Ok(DeductionResult {
            mu: MuResult::Range { min, max },
            lambda: LambdaResult::Constrained { divisor, max: None },
            nu: NuResult::Unknown,
            residuals: survivors,
            trace,
            asymptotic_from: None,
        });
    }

    let (mu, r) = survivors[0].clone();
    let e0 = e[0] as i64;
    let mut lambda = LambdaResult::Constrained { divisor, max: None };
    let mut nu = NuResult::Unknown;
    let mut asymptotic_from = None;

    // R6: R_1 = 0 kills the finite part and the lambda part at once
    if r[1] == 0 {
        lambda = LambdaResult::Exact(0);
        nu = NuResult::Exact(e0 - mu as i64);
        fire(
            RuleId::R6,
            format!(
                "R_1 = 0 forces F_1 = E_2 = 0: λ = 0, ν = {}; e_n is exact from level 0",
                e0 - mu as i64
            ),
            &mut trace,
        );
        return Ok(DeductionResult {
            mu: MuResult::Exact(mu),
            lambda,
            nu,
            residuals: survivors,
            trace,
            asymptotic_from,
        });
    }

    // R7: quotient lower bounds eliminate lambda candidates
    let r7 = filter_lambda_candidates(p, divisor, &r);
    if !r7.eliminated.is_empty() {
        lambda = r7.result;
        let mut msg = format!(
            "eliminated λ ∈ {:?} (bound exceeds residual); {}",
            r7.eliminated,
            describe_lambda(&lambda)
        );
        if r7.used_derived_bound {
            msg.push_str("; the ν₂ bound for λ = 1 is derived, not quoted");
        }
        fire(RuleId::R7, msg, &mut trace);
    }

    // R8: stabilized residual in a totally ramified tower
    if let Some(n0) = (1..r.len().saturating_sub(1)).find(|&n| r[n] == r[n + 1]) {
        if rec.flags.totally_ramified {
            let value = e0 - mu as i64 + r[n0];
            lambda = LambdaResult::Exact(0);
            nu = NuResult::Exact(value);
            asymptotic_from = Some(n0);
            fire(
                RuleId::R8,
                format!(
                    "R_{n0} = R_{} stabilizes: λ = 0, ν = {value}; e_n is exact from level {n0}",
                    n0 + 1
                ),
                &mut trace,
            );
        } else {
            fire(
                RuleId::R8,
                format!(
                    "residuals stabilize at level {n0} but the tower is not flagged totally ramified; rule skipped"
                ),
                &mut trace,
            );
        }
    }

    // R9: lambda pinned at zero with a positive residual bounds nu from below
    if nu == NuResult::Unknown && lambda == LambdaResult::Exact(0) && r[1] > 0 {
        let bound = e0 - mu as i64 + r[1];
        nu = NuResult::AtLeast(bound);
        fire(
            RuleId::R9,
            format!("ν ≥ {bound}; the finite part may still grow, so this is a lower bound only"),
            &mut trace,
        );
    }

    Ok(DeductionResult {
        mu: MuResult::Exact(mu),
        lambda,
        nu,
        residuals: survivors,
        trace,
        asymptotic_from,
    })
}

struct LambdaFilter {
    result: LambdaResult,
    eliminated: Vec<u64>,
    used_derived_bound: bool,
}

/// Apply the quotient lower bounds at ν₁ (all p) and ν₂ (p = 2, when a
/// second residual is available) to the λ candidates compatible with the
/// divisibility constraint.
fn filter_lambda_candidates(p: u64, divisor: u64, r: &[i64]) -> LambdaFilter {
    let has_n2 = p == 2 && r.len() > 2;
    let killed = |lam: u64| -> bool {
        let b1 = lambdathm_lower_bound(p, lam, 1).expect("n = 1 is always available") as i64;
        if b1 > r[1] {
            return true;
        }
        if has_n2 {
            let b2 = lambdathm_lower_bound(2, lam, 2).expect("p = 2, n = 2") as i64;
            if b2 > r[2] {
                return true;
            }
        }
        false
    };
    // the bounds saturate: above this threshold every lambda behaves alike
    let threshold = if p > 2 {
        p - 1
    } else if has_n2 {
        3
    } else {
        1
    };
    let tail_rep = threshold.max(1).max(divisor) * divisor.max(1);
    let tail_alive = !killed(tail_rep.max(threshold));
    let mut eliminated = Vec::new();
    let mut survivors = vec![0u64];
    let mut lam = divisor.max(1);
    while lam <= threshold {
        if killed(lam) {
            eliminated.push(lam);
        } else {
            survivors.push(lam);
        }
        lam += divisor.max(1);
    }
    let used_derived_bound = has_n2
        && divisor == 1
        && eliminated.contains(&1)
        && lambdathm_lower_bound(2, 1, 1).unwrap() as i64 <= r[1];
    let result = if tail_alive {
        LambdaResult::Constrained { divisor, max: None }
    } else if survivors == [0] {
        LambdaResult::Exact(0)
    } else {
        LambdaResult::Constrained {
            divisor,
            max: Some(*survivors.last().unwrap()),
        }
    };
    LambdaFilter {
        result,
        eliminated,
        used_derived_bound,
    }
}

fn describe_lambda(l: &LambdaResult) -> String {
    match l {
        LambdaResult::Exact(v) => format!("λ = {v}"),
        LambdaResult::Constrained { divisor, max } => {
            let mut s = String::from("λ");
            if *divisor > 1 {
                s.push_str(&format!(" ≡ 0 mod {divisor}"));
            }
            match max {
                Some(m) => s.push_str(&format!(" ≤ {m}")),
                None => s.push_str(" unbounded"),
            }
            s
        }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Compare predictions of an exact result against every supplied level.
/// Levels below the stabilization index of an asymptotic-only result are
/// marked exempt rather than mismatched.
pub fn consistency_check(
    rec: &ExampleRecord,
    result: &DeductionResult,
) -> Result<Vec<LevelVerdict>> {
    let (Some(mu), Some(lambda), Some(nu)) =
        (result.mu.exact(), result.lambda.exact(), result.nu.exact())
    else {
        return Err(Error::Domain(
            "consistency check needs exact μ, λ, and ν".into(),
        ));
    };
    let e = rec.e_sequence();
    let from = result.asymptotic_from.unwrap_or(0);
    Ok(e.iter()
        .enumerate()
        .map(|(n, &observed)| {
            let predicted = predict_e(mu, lambda, nu, rec.p, n as u32);
            LevelVerdict {
                level: n,
                predicted,
                observed,
                matches: predicted == observed as i64,
                asymptotic_exempt: n < from,
            }
        })
        .collect())
}

/// Render "μ=.. λ=.. ν=.." for tables and summaries.
pub fn invariants_summary(result: &DeductionResult) -> String {
    let mu = match result.mu {
        MuResult::Exact(v) => format!("μ={v}"),
        MuResult::Range { min, max } => format!("μ∈[{min},{max}]"),
    };
    let lambda = match result.lambda {
        LambdaResult::Exact(v) => format!("λ={v}"),
        LambdaResult::Constrained {
            divisor: 1,
            max: None,
        } => "λ=?".to_string(),
        LambdaResult::Constrained {
            divisor: 1,
            max: Some(m),
        } => format!("λ≤{m}"),
        LambdaResult::Constrained {
            divisor: 2,
            max: None,
        } => "λ even".to_string(),
        LambdaResult::Constrained {
            divisor: 2,
            max: Some(m),
        } => format!("λ even ≤{m}"),
        LambdaResult::Constrained { divisor, max: None } => format!("λ≡0 mod {divisor}"),
        LambdaResult::Constrained {
            divisor,
            max: Some(m),
        } => {
            format!("λ≡0 mod {divisor} ≤{m}")
        }
    };
    let nu = match result.nu {
        NuResult::Exact(v) => format!("ν={v}"),
        NuResult::AtLeast(v) => format!("ν≥{v}"),
        NuResult::Unknown => "ν=?".to_string(),
    };
    format!("{mu} {lambda} {nu}")
}
