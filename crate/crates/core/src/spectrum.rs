//! Critical-exponent estimates, Lagrange constants and scale selection.
//!
//! The abelian critical exponent of an infinite word is the limit superior
//! of `A(m) / m`. On a finite prefix we can only report the exact ratios for
//! a range of periods and their maximum; every figure carries the prefix
//! length it was computed on. Nothing here claims a limit.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::forge::{CfDirective, WordError, WordGenerator};
use crate::scan::{ScanError, Scanner, ORDINARY};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error("period range {lo}..={hi} is invalid for prefix length {n}: need 1 <= lo <= hi <= n/2")]
    Range { lo: usize, hi: usize, n: usize },
    #[error("continued fraction needs a nonempty period")]
    NotPeriodic,
    #[error("tail depth {depth} is below twice the period length {period_len}")]
    DepthTooSmall { depth: usize, period_len: usize },
    #[error("theta must be a positive finite number, got {0}")]
    BadTheta(f64),
    #[error("theta {0} is too small: the required block length overflows")]
    ScaleOverflow(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub m: usize,
    pub exponent: usize,
    pub ratio: f64,
}

/// `m -> A(m)/m` over a period range of one prefix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumCurve {
    /// Equivalence level; 0 for ordinary powers.
    pub k: usize,
    pub n: usize,
    pub m_lo: usize,
    pub m_hi: usize,
    pub rows: Vec<CurveRow>,
    pub running_max: Option<f64>,
    pub argmax_m: Option<usize>,
}

impl SpectrumCurve {
    pub fn from_rows(k: usize, n: usize, m_lo: usize, m_hi: usize, rows: Vec<CurveRow>) -> Self {
        let mut running_max = None;
        let mut argmax_m = None;
        for row in &rows {
            if running_max.map_or(true, |best| row.ratio > best) {
                running_max = Some(row.ratio);
                argmax_m = Some(row.m);
            }
        }
        SpectrumCurve {
            k,
            n,
            m_lo,
            m_hi,
            rows,
            running_max,
            argmax_m,
        }
    }
}

/// Ratio curve for an explicit word. `k = 0` scans ordinary powers.
pub fn curve_for_word(w: &Word, m_lo: usize, m_hi: usize, k: usize) -> Result<SpectrumCurve, SpectrumError> {
    let n = w.len();
    if m_lo == 0 || m_lo > m_hi || m_hi > n / 2 {
        return Err(SpectrumError::Range { lo: m_lo, hi: m_hi, n });
    }
    let table = Scanner::new(w, k).table(m_lo, m_hi)?;
    let rows = table
        .rows
        .iter()
        .map(|r| CurveRow {
            m: r.period,
            exponent: r.exponent,
            ratio: r.exponent as f64 / r.period as f64,
        })
        .collect();
    Ok(SpectrumCurve::from_rows(k, n, m_lo, m_hi, rows))
}

/// Estimate of the k-abelian critical exponent from the length-`n` prefix.
pub fn ace_estimate(
    gen: &mut WordGenerator,
    n: usize,
    m_lo: usize,
    m_hi: usize,
    k: usize,
) -> Result<SpectrumCurve, SpectrumError> {
    assert!(k >= 1, "use e_estimate for ordinary powers");
    if m_lo == 0 || m_lo > m_hi || m_hi > n / 2 {
        return Err(SpectrumError::Range { lo: m_lo, hi: m_hi, n });
    }
    curve_for_word(&gen.prefix(n)?, m_lo, m_hi, k)
}

/// Same as [`ace_estimate`] with ordinary integral powers.
pub fn e_estimate(gen: &mut WordGenerator, n: usize, m_lo: usize, m_hi: usize) -> Result<SpectrumCurve, SpectrumError> {
    if m_lo == 0 || m_lo > m_hi || m_hi > n / 2 {
        return Err(SpectrumError::Range { lo: m_lo, hi: m_hi, n });
    }
    curve_for_word(&gen.prefix(n)?, m_lo, m_hi, ORDINARY)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub running_max: f64,
    pub argmax_m: usize,
}

/// Running maxima over a sequence of prefix lengths for one fixed period range.
pub fn convergence_series(
    gen: &mut WordGenerator,
    lengths: &[usize],
    m_lo: usize,
    m_hi: usize,
    k: usize,
) -> Result<Vec<ConvergencePoint>, SpectrumError> {
    lengths
        .iter()
        .map(|&n| {
            let w = gen.prefix(n)?;
            let curve = curve_for_word(&w, m_lo, m_hi, k)?;
            Ok(ConvergencePoint {
                n,
                running_max: curve.running_max.expect("nonempty range"),
                argmax_m: curve.argmax_m.expect("nonempty range"),
            })
        })
        .collect()
}

/// Lagrange constant of the irrational with eventually periodic partial
/// quotients `cf` (the integer part is irrelevant).
///
/// Evaluates `[a_{p+1}; a_{p+2}, ...] + [0; a_p, a_{p-1}, ...]` at every
/// position `p` of one period, past the preperiod, with both continued
/// fractions truncated to `tail_depth` terms, and returns the maximum.
pub fn lagrange_constant(cf: &CfDirective, tail_depth: usize) -> Result<f64, SpectrumError> {
    let period_len = cf.period().len();
    if period_len == 0 {
        return Err(SpectrumError::NotPeriodic);
    }
    if tail_depth < 2 * period_len {
        return Err(SpectrumError::DepthTooSmall {
            depth: tail_depth,
            period_len,
        });
    }
    let a = |j: usize| cf.quotient(j).expect("periodic directive") as f64;
    let start = cf.preperiod().len() + tail_depth;
    let value_at = |p: usize| {
        let mut forward = a(p + tail_depth);
        for j in (p + 1..p + tail_depth).rev() {
            forward = a(j) + 1.0 / forward;
        }
        let mut backward = a(p + 1 - tail_depth);
        for j in p + 2 - tail_depth..=p {
            backward = a(j) + 1.0 / backward;
        }
        forward + 1.0 / backward
    };
    Ok((start..start + period_len).map(value_at).fold(f64::MIN, f64::max))
}

// Freiman's constant, the left end of the largest half-line in the Lagrange
// spectrum: (A + B sqrt(D)) / C.
const FREIMAN_A: u64 = 2_221_564_096;
const FREIMAN_B: u64 = 283_748;
const FREIMAN_C: u64 = 491_993_569;
const FREIMAN_D: u64 = 462;

/// Published decimal expansion, kept for cross-checking.
pub const FREIMAN_DECIMAL: &str = "4.5278295661";

/// Freiman's constant in double precision.
pub fn freiman_constant() -> f64 {
    (FREIMAN_A as f64 + FREIMAN_B as f64 * (FREIMAN_D as f64).sqrt()) / FREIMAN_C as f64
}

/// The first `digits` decimals of Freiman's constant, truncated, computed in
/// exact integer arithmetic.
pub fn freiman_digits(digits: u32) -> String {
    let scale = BigUint::from(10u32).pow(digits);
    let radicand = BigUint::from(FREIMAN_B).pow(2) * FREIMAN_D * &scale * &scale;
    let numerator = BigUint::from(FREIMAN_A) * &scale + radicand.sqrt();
    let q = (numerator / FREIMAN_C).to_string();
    let (int, frac) = q.split_at(q.len() - digits as usize);
    if digits == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

/// Exact test `x >= c_F`.
pub fn at_least_freiman(x: &BigRational) -> bool {
    // x >= (A + B sqrt D)/C  <=>  t = C x - A >= B sqrt D  <=>  t >= 0 and t^2 >= B^2 D
    let t = x * BigRational::from_integer(BigInt::from(FREIMAN_C)) - BigRational::from_integer(BigInt::from(FREIMAN_A));
    if t.is_negative() {
        return false;
    }
    let rhs = BigRational::from_integer(BigInt::from(FREIMAN_B).pow(2) * FREIMAN_D);
    &t * &t >= rhs
}

/// Block length chosen for a target exponent `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleChoice {
    pub theta: f64,
    /// Smallest even `N` with `N * theta >= c_F`.
    pub n: u64,
    pub product: f64,
}

/// Smallest even `N` with `N * theta >= c_F`, decided exactly on the binary
/// value of `theta`.
pub fn choose_scale(theta: f64) -> Result<ScaleChoice, SpectrumError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(SpectrumError::BadTheta(theta));
    }
    let estimate = freiman_constant() / theta;
    if estimate >= (1u64 << 52) as f64 {
        return Err(SpectrumError::ScaleOverflow(theta));
    }
    let exact_theta = BigRational::from_float(theta).expect("finite");
    let fits = |n: u64| at_least_freiman(&(&exact_theta * BigRational::from_integer(BigInt::from(n))));
    let mut n = ((estimate as u64).saturating_sub(4) & !1).max(2);
    while !fits(n) {
        n += 2;
    }
    Ok(ScaleChoice {
        theta,
        n,
        product: n as f64 * theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{prefix_of, WordSpec, THUE_MORSE};

    fn gen(spec: &str) -> WordGenerator {
        WordGenerator::new(WordSpec::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn freiman_constant_matches_published_digits() {
        assert_eq!(freiman_digits(10), FREIMAN_DECIMAL);
        assert!((freiman_constant() - 4.527_829_566_1).abs() < 1e-10);
        assert!(freiman_digits(40).starts_with("4.5278295661"));
    }

    #[test]
    fn exact_freiman_comparison() {
        let r = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
        assert!(at_least_freiman(&r(45_278_295_662, 10_000_000_000)));
        assert!(!at_least_freiman(&r(45_278_295_661, 10_000_000_000)));
        assert!(!at_least_freiman(&r(-5, 1)));
        assert!(at_least_freiman(&r(5, 1)));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(choose_scale(1.0).unwrap().n, 6);
        assert_eq!(choose_scale(5.0).unwrap().n, 2);
        assert_eq!(choose_scale(0.1).unwrap().n, 46);
        assert!(choose_scale(0.0).is_err());
        assert!(choose_scale(-1.0).is_err());
        assert!(choose_scale(f64::NAN).is_err());
        assert!(choose_scale(1e-300).is_err());
    }

    #[test]
    fn scale_invariants() {
        for &theta in &[0.013, 0.2, 0.5, 1.13, 2.26, 3.0, 4.5278295661, 100.0] {
            let c = choose_scale(theta).unwrap();
            assert_eq!(c.n % 2, 0);
            assert!(c.product >= freiman_constant() - 1e-12);
            assert!(c.n == 2 || ((c.n - 2) as f64) * theta < freiman_constant());
        }
    }

    #[test]
    fn lagrange_examples() {
        let golden = CfDirective::periodic(vec![1]).unwrap();
        assert!((lagrange_constant(&golden, 100).unwrap() - 5f64.sqrt()).abs() < 1e-9);
        let silver = CfDirective::periodic(vec![2]).unwrap();
        assert!((lagrange_constant(&silver, 100).unwrap() - 8f64.sqrt()).abs() < 1e-9);
        let shifted = CfDirective::new(vec![7, 3], vec![1]).unwrap();
        assert!((lagrange_constant(&shifted, 100).unwrap() - 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn lagrange_errors() {
        let finite = CfDirective::new(vec![1, 2], vec![]).unwrap();
        assert!(matches!(
            lagrange_constant(&finite, 10),
            Err(SpectrumError::NotPeriodic)
        ));
        let cf = CfDirective::periodic(vec![1, 2, 3]).unwrap();
        assert!(matches!(
            lagrange_constant(&cf, 5),
            Err(SpectrumError::DepthTooSmall { .. })
        ));
    }

    #[test]
    fn lagrange_is_stable_in_depth() {
        for period in [vec![1], vec![2], vec![1, 2], vec![3, 1, 4], vec![1, 1, 2]] {
            let cf = CfDirective::periodic(period).unwrap();
            for depth in [60, 80, 100] {
                let a = lagrange_constant(&cf, depth).unwrap();
                let b = lagrange_constant(&cf, 2 * depth).unwrap();
                assert!((a - b).abs() < 1e-9);
                assert!(a >= 5f64.sqrt() - 1e-12);
            }
        }
    }

    #[test]
    fn constant_word_curve() {
        let mut g = gen("lit:0");
        let curve = ace_estimate(&mut g, 100, 1, 50, 1).unwrap();
        for row in &curve.rows {
            assert_eq!(row.exponent, 100 / row.m);
            assert_eq!(row.ratio, (100 / row.m) as f64 / row.m as f64);
        }
        assert_eq!(curve.argmax_m, Some(1));
        assert_eq!(curve.running_max, Some(100.0));
    }

    #[test]
    fn periodic_word_has_growing_ordinary_exponent() {
        let mut g = gen("lit:01");
        let curve = e_estimate(&mut g, 10_000, 2, 2).unwrap();
        assert_eq!(curve.rows[0].exponent, 5_000);
    }

    #[test]
    fn range_errors() {
        let mut g = gen("lit:01");
        assert!(matches!(
            ace_estimate(&mut g, 10, 0, 3, 1),
            Err(SpectrumError::Range { .. })
        ));
        assert!(matches!(
            ace_estimate(&mut g, 10, 4, 3, 1),
            Err(SpectrumError::Range { .. })
        ));
        assert!(matches!(
            ace_estimate(&mut g, 10, 1, 6, 1),
            Err(SpectrumError::Range { .. })
        ));
    }

    #[test]
    fn thue_morse_ordinary_exponents_at_most_two() {
        let t = prefix_of(THUE_MORSE, 1 << 12).unwrap();
        let curve = curve_for_word(&t, 1, 200, ORDINARY).unwrap();
        assert!(curve.rows.iter().all(|r| r.exponent <= 2));
        assert_eq!(curve.argmax_m, Some(1));
    }
}
