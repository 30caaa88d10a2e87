//! Arithmetic in the Iwasawa algebra Λ = `Z_p[[T]]` at capped precision, and a
//! rule engine that derives the Iwasawa invariants (μ, λ, ν) of a
//! Z_p-extension from the p-parts of ideal class groups at finitely many
//! layers.
//!
//! The library is organized bottom-up:
//!
//! - [`padic`] — exact arithmetic on p-adic integers truncated at p^N.
//! - [`lambda`] — polynomials over Z/p^N representing elements of Λ: the
//!   special elements ω_n = (1+T)^(p^n) − 1 and ν_n = ω_n/T, distinguished
//!   polynomials, Weierstrass division, and ideal indices via
//!   multiplication-matrix determinants.
//! - [`elem`] — elementary Λ-modules E = ⊕Λ/(p^μᵢ) ⊕ ⊕Λ/(fⱼ): invariants,
//!   orders of E/ν_nE, p-torsion orders, and quotient lower bounds.
//! - [`ambiguous`] — Chevalley's ambiguous class number formula, strongly
//!   ambiguous counts, and the μ ≥ s−1 bound.
//! - [`class_data`] — abelian group structures, ramification classifiers,
//!   the h = (h')² ratio check, and JSON fixture ingestion.
//! - [`deduction`] — the deduction rules R1–R9 that turn one fixture record
//!   into exact values or rigorous bounds for (μ, λ, ν), with a trace that
//!   cites the theorem behind every step.
//! - [`cli`] — the `iwasawa` command-line front end.
//!
//! Class groups are always ingested as data; nothing here computes class
//! groups of number fields.

pub mod ambiguous;
pub mod class_data;
pub mod cli;
pub mod deduction;
pub mod elem;
mod error;
pub mod lambda;
pub mod padic;

pub use error::{Error, Result};
