//! Abelian group structures, ramification classifiers, the h = (h')² ratio
//! check, and JSON fixture ingestion.
//!
//! Class groups are ingested, never computed: every record carries the
//! cyclic decompositions of the p-class groups layer by layer, exactly as
//! obtained from external number-field software.

use std::io::Read;

use serde::Deserialize;

use crate::padic::{int_valuation, is_prime};
use crate::{Error, Result};

/// A finite abelian group given by cyclic orders ≥ 2, kept sorted
/// descending; the empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupStructure {
    cyclic_orders: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn new(mut cyclic_orders: Vec<u64>) -> Result<Self> {
        if cyclic_orders.iter().any(|&o| o < 2) {
            return Err(Error::Validation("cyclic orders must be at least 2".into()));
        }
        cyclic_orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(AbelianGroupStructure { cyclic_orders })
    }

    pub fn trivial() -> Self {
        AbelianGroupStructure {
            cyclic_orders: Vec::new(),
        }
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic_orders.is_empty()
    }

    /// Exponent of p in the group order: Σ v_p(order).
    pub fn p_exponent(&self, p: u64) -> u64 {
        self.cyclic_orders
            .iter()
            .map(|&o| u64::from(int_valuation(o, p)))
            .sum()
    }

    /// 2-ranks of the higher ambiguous groups: entry k−1 counts the cyclic
    /// summands of 2-part order at least 2^k, for k = 1..max. Only stated
    /// for p = 2.
    pub fn higher_ambiguous_ranks(&self, p: u64) -> Result<Vec<usize>> {
        if p != 2 {
            return Err(Error::Domain(
                "higher ambiguous ranks are only available for p = 2".into(),
            ));
        }
        let vals: Vec<u32> = self
            .cyclic_orders
            .iter()
            .map(|&o| int_valuation(o, 2))
            .collect();
        let max = vals.iter().copied().max().unwrap_or(0);
        Ok((1..=max)
            .map(|k| vals.iter().filter(|&&v| v >= k).count())
            .collect())
    }
}

/// Whether the first-layer step of the tower is ramified above 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamificationStatus {
    TotallyRamified,
    Unramified,
}

/// Classification of K_1/K_0 above 3 for the fields built from a cubefree d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamificationP3 {
    pub status: RamificationStatus,
    /// 3-adic valuation of the discriminant of the first layer over Q: 33 or 37.
    pub v3_disc_k1: u32,
    /// 3-adic valuation of the discriminant of the base over Q: 3, 7, or 11.
    pub v3_disc_k0: u32,
}

/// Classification above 2 for the fields built from an odd squarefree d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamificationP2 {
    /// The first layer is always totally ramified at the primes above 2.
    pub totally_ramified: bool,
    /// Exactly one prime of the base divides 2 iff d ≢ ±1 (mod 8).
    pub single_prime_above_2: bool,
}

/// Classify the tower over Q(ζ₃, ∛d). Requires d cubefree, 9 ∤ d, d ∉ {1, 3}.
///
/// The extension is totally ramified above 3 except when d = 3d₁ with
/// d₁ ≡ ±1 (mod 9); the discriminant valuations follow the congruence
/// class of d (or d/3) mod 9.
pub fn classify_ramification_p3(d: u64) -> Result<RamificationP3> {
    if d == 1 || d == 3 {
        return Err(Error::Domain(format!("d = {d} is excluded")));
    }
    if d.is_multiple_of(9) {
        return Err(Error::Domain("9 must not divide d".into()));
    }
    if !is_cubefree(d) {
        return Err(Error::Domain(format!("d = {d} is not cubefree")));
    }
    let pm1 = |x: u64| x % 9 == 1 || x % 9 == 8;
    if d.is_multiple_of(3) {
        let d1 = d / 3;
        let near = pm1(d1);
        Ok(RamificationP3 {
            status: if near {
                RamificationStatus::Unramified
            } else {
                RamificationStatus::TotallyRamified
            },
            v3_disc_k1: if near { 33 } else { 37 },
            v3_disc_k0: 11,
        })
    } else {
        let near = pm1(d);
        Ok(RamificationP3 {
            status: RamificationStatus::TotallyRamified,
            v3_disc_k1: if near { 33 } else { 37 },
            v3_disc_k0: if near { 3 } else { 7 },
        })
    }
}

/// Classify the tower over Q(i, √d). Requires d odd, squarefree, |d| > 1.
pub fn classify_ramification_p2(d: i64) -> Result<RamificationP2> {
    if d.unsigned_abs() <= 1 {
        return Err(Error::Domain("|d| must exceed 1".into()));
    }
    if d % 2 == 0 {
        return Err(Error::Domain("d must be odd".into()));
    }
    if !is_squarefree(d.unsigned_abs()) {
        return Err(Error::Domain(format!("d = {d} is not squarefree")));
    }
    let r = d.rem_euclid(8);
    Ok(RamificationP2 {
        totally_ramified: true,
        single_prime_above_2: r != 1 && r != 7,
    })
}

/// c = e(h_n) − 2·e(h_n′) on p-parts: c = 0 is the h_n = (h_n′)² case and
/// c = −1 the h_n = (1/3)(h_n′)² case.
pub fn check_h_ratio(e_hn: u64, e_hn_prime: u64) -> i64 {
    e_hn as i64 - 2 * e_hn_prime as i64
}

/// Scope predicate for the h₂ = (h₂′)² heuristic: every prime factor of d
/// is ≡ 2 or 5 (mod 9) and d ≢ ±1 (mod 9). Data-driven use only; nothing
/// in the deduction engine relies on it.
pub fn h_ratio_conjecture_applies(d: u64) -> bool {
    if d < 2 || d % 9 == 1 || d % 9 == 8 {
        return false;
    }
    prime_factors(d)
        .iter()
        .all(|&q| q % 9 == 2 || q % 9 == 5)
}

/// Structural flags of one tower record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordFlags {
    pub single_ramified_prime: bool,
    pub totally_ramified: bool,
    pub p_nmid_class_number_k0: bool,
}

/// Auxiliary data: p-exponents of the half-degree subfield class numbers
/// h_n′ (entries may be null where unknown), whether the unit index
/// [E_k : N(E_K)] is maximal, and whether the record's printed conclusion
/// depends on a conjectural class-number estimate.
#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxData {
    #[serde(default)]
    pub h_primes: Option<Vec<Option<u64>>>,
    #[serde(default)]
    pub unit_index_maximal: Option<bool>,
    #[serde(default)]
    pub conditional: Option<bool>,
}

/// An expected value: exact, bounded, or explicitly unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedValue {
    Exact(i64),
    Min(i64),
    Max(i64),
    Range(i64, i64),
    Unknown,
}

impl ExpectedValue {
    /// Whether an exactly-derived value contradicts this expectation.
    pub fn contradicts_exact(&self, v: i64) -> bool {
        match *self {
            ExpectedValue::Exact(e) => e != v,
            ExpectedValue::Min(m) => v < m,
            ExpectedValue::Max(m) => v > m,
            ExpectedValue::Range(a, b) => v < a || v > b,
            ExpectedValue::Unknown => false,
        }
    }
}

/// Expected invariants recorded with a fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpectedInvariants {
    pub mu: Option<ExpectedValue>,
    pub lambda: Option<ExpectedValue>,
    pub nu: Option<ExpectedValue>,
}

/// One Z_p-extension instance: the prime, a label, the count s of inert
/// ramified primes, structural flags, the p-class groups per layer, and
/// optional auxiliary data and expectations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleRecord {
    pub p: u64,
    pub label: String,
    pub d: Option<i64>,
    pub s: u32,
    pub flags: RecordFlags,
    pub levels: Vec<AbelianGroupStructure>,
    pub aux: Option<AuxData>,
    pub expected: Option<ExpectedInvariants>,
}

impl ExampleRecord {
    /// e_n = v_p(#A_n) for each supplied layer.
    pub fn e_sequence(&self) -> Vec<u64> {
        self.levels.iter().map(|g| g.p_exponent(self.p)).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    p: u64,
    label: String,
    #[serde(default)]
    d: Option<i64>,
    s: u32,
    flags: RecordFlags,
    levels: Vec<Vec<u64>>,
    #[serde(default)]
    aux: Option<AuxData>,
    #[serde(default)]
    expected: Option<RawExpected>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    #[serde(default)]
    mu: Option<RawValue>,
    #[serde(default)]
    lambda: Option<RawValue>,
    #[serde(default)]
    nu: Option<RawValue>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Exact(i64),
    Bounds {
        #[serde(default)]
        min: Option<i64>,
        #[serde(default)]
        max: Option<i64>,
    },
    Word(String),
}

fn convert_value(raw: &RawValue, label: &str, field: &str) -> Result<ExpectedValue> {
    match raw {
        RawValue::Exact(v) => Ok(ExpectedValue::Exact(*v)),
        RawValue::Bounds { min, max } => match (min, max) {
            (Some(a), Some(b)) if a <= b => Ok(ExpectedValue::Range(*a, *b)),
            (Some(a), Some(b)) => Err(Error::Validation(format!(
                "{label}: {field} has min {a} > max {b}"
            ))),
            (Some(a), None) => Ok(ExpectedValue::Min(*a)),
            (None, Some(b)) => Ok(ExpectedValue::Max(*b)),
            (None, None) => Err(Error::Validation(format!(
                "{label}: {field} bound object is empty"
            ))),
        },
        RawValue::Word(w) if w == "unknown" => Ok(ExpectedValue::Unknown),
        RawValue::Word(w) => Err(Error::Validation(format!(
            "{label}: {field} has unrecognized value {w:?}"
        ))),
    }
}

/// Parse and validate a fixture document: a JSON array of records with
/// keys exactly p, label, d?, s, flags, levels, aux?, expected?. Unknown
/// keys are parse errors; invariant violations are validation errors.
pub fn load_fixtures(mut source: impl Read) -> Result<Vec<ExampleRecord>> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| Error::Parse {
        path: "<input>".into(),
        message: e.to_string(),
    })?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let raw: Vec<RawRecord> = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    raw.into_iter().map(validate_record).collect()
}

fn validate_record(raw: RawRecord) -> Result<ExampleRecord> {
    let label = raw.label.clone();
    if !is_prime(raw.p) {
        return Err(Error::Validation(format!(
            "{label}: p = {} is not prime",
            raw.p
        )));
    }
    if raw.levels.is_empty() {
        return Err(Error::Validation(format!(
            "{label}: levels must be nonempty"
        )));
    }
    let levels = raw
        .levels
        .into_iter()
        .map(AbelianGroupStructure::new)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Validation(format!("{label}: {e}")))?;
    if let Some(d) = raw.d {
        check_s_against_d(&label, raw.p, raw.s, d)?;
    }
    let expected = match raw.expected {
        None => None,
        Some(e) => Some(ExpectedInvariants {
            mu: e.mu.map(|v| convert_value(&v, &label, "mu")).transpose()?,
            lambda: e
                .lambda
                .map(|v| convert_value(&v, &label, "lambda"))
                .transpose()?,
            nu: e.nu.map(|v| convert_value(&v, &label, "nu")).transpose()?,
        }),
    };
    Ok(ExampleRecord {
        p: raw.p,
        label: raw.label,
        d: raw.d,
        s: raw.s,
        flags: raw.flags,
        levels,
        aux: raw.aux,
        expected,
    })
}

/// Cross-check the stored s against the prime factorization of d: for
/// p = 3 count the prime factors ≡ 2 (mod 3), for p = 2 those ≡ 3 (mod 4).
fn check_s_against_d(label: &str, p: u64, s: u32, d: i64) -> Result<()> {
    let primes = prime_factors(d.unsigned_abs());
    let count = match p {
        3 => primes.iter().filter(|&&q| q % 3 == 2).count(),
        2 => primes.iter().filter(|&&q| q % 4 == 3).count(),
        _ => return Ok(()),
    } as u32;
    if count != s {
        return Err(Error::Validation(format!(
            "{label}: stored s = {s} but d = {d} has {count} qualifying prime factors"
        )));
    }
    Ok(())
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_cubefree(n: u64) -> bool {
    let mut n = n;
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut count = 0;
            while n.is_multiple_of(d) {
                n /= d;
                count += 1;
            }
            if count >= 3 {
                return false;
            }
        }
        d += 1;
    }
    true
}

fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}
