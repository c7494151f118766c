//! Abelian and k-abelian power analysis for infinite words.
//!
//! `wordlab` generates prefixes of infinite words (morphism fixed points,
//! characteristic Sturmian words), measures the largest exponent of
//! (k-)abelian and ordinary powers per period, builds the marker
//! substitutions that rescale critical exponents by `1/N`, and checks their
//! transfer properties by brute force.
//!
//! ```
//! use wordlab::forge::{prefix_of, FIBONACCI};
//! use wordlab::scan::k_abexp;
//!
//! let f = prefix_of(FIBONACCI, 13)?;
//! assert_eq!(f.to_string(), "0100101001001");
//! let (exponent, hit) = k_abexp(&f, 1, 1)?;
//! assert_eq!(exponent, 2);
//! assert!(hit.verify(&f));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The guide under `book/` walks through each module.

pub mod abelian;
pub mod forge;
pub mod lemma;
pub mod report;
pub mod scan;
pub mod spectrum;
pub mod subst;
pub mod word;

pub use abelian::{k_abelian_equivalent, k_signature, parikh, KSignature, ParikhVector, PrefixTable};
pub use forge::{make_generator, standard_word, CfDirective, WordError, WordGenerator, WordSpec};
pub use scan::{exponent_table, find_hits, k_abexp, ordinary_exp, ExponentTable, PowerHit, ScanError, Scanner};
pub use spectrum::{ace_estimate, choose_scale, e_estimate, lagrange_constant, ScaleChoice, SpectrumCurve};
pub use subst::{align_power, Substitution};
pub use word::{word, Alphabet, Word};

/// Version of the word-spec grammar accepted by [`WordSpec::parse`].
pub const SPEC_GRAMMAR_VERSION: u32 = 1;
