//! Maximum exponents of (k-)abelian and ordinary powers in a finite word.
//!
//! For a period `m` the scanners walk each residue chain `i, i+m, i+2m, ...`
//! from the right, keeping `run[i] = run[i+m] + 1` when the blocks at `i` and
//! `i+m` are equivalent and `run[i] = 1` otherwise. The largest run is the
//! maximum exponent `A(m)`; each run that cannot be extended to the left is a
//! maximal hit. Exponents are integral block counts.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{equivalent_by_definition, PrefixTable};
use crate::word::Word;

/// Level value meaning "blocks must be equal", i.e. ordinary powers.
pub const ORDINARY: usize = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScanError {
    #[error("period {period} is outside 1..={len}")]
    BadPeriod { period: usize, len: usize },
    #[error("empty period range {lo}..{hi}")]
    EmptyRange { lo: usize, hi: usize },
    #[error("minimum exponent must be at least 2, got {0}")]
    BadMinExponent(usize),
}

/// A located repetition: `exponent` consecutive blocks of length `period`
/// starting at `position`, pairwise equivalent at `level`
/// (`level == 0` means equal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PowerHit {
    pub position: usize,
    pub period: usize,
    pub exponent: usize,
    pub level: usize,
}

impl PowerHit {
    pub fn end(&self) -> usize {
        self.position + self.period * self.exponent
    }

    /// The blocks of this hit inside `symbols`.
    pub fn blocks<'a>(&self, symbols: &'a [u8]) -> impl Iterator<Item = &'a [u8]> + 'a {
        symbols[self.position..self.end()].chunks(self.period)
    }

    /// Re-checks the hit against `word` with the definitional equivalence test.
    pub fn verify(&self, word: &Word) -> bool {
        self.verify_symbols(word.symbols())
    }

    pub fn verify_symbols(&self, symbols: &[u8]) -> bool {
        if self.period == 0 || self.exponent == 0 || self.end() > symbols.len() {
            return false;
        }
        let first = &symbols[self.position..self.position + self.period];
        self.blocks(symbols).all(|b| {
            if self.level == ORDINARY {
                b == first
            } else {
                equivalent_by_definition(first, b, self.level)
            }
        })
    }
}

/// `m -> A(m)` over a range of periods, with one witness per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentTable {
    pub prefix_len: usize,
    pub level: usize,
    pub rows: Vec<ExponentRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentRow {
    pub period: usize,
    pub exponent: usize,
    pub witness: PowerHit,
}

impl ExponentTable {
    pub fn get(&self, period: usize) -> Option<&ExponentRow> {
        let first = self.rows.first()?.period;
        self.rows.get(period.checked_sub(first)?)
    }
}

/// Block comparator for one period, fed positions in decreasing order.
trait BlockCmp {
    /// Are the blocks at `i` and `i + m` equivalent? Called with strictly decreasing `i`.
    fn next_equal(&mut self, i: usize) -> bool;
}

struct TableCmp<'a, 'w> {
    table: &'a PrefixTable<'w>,
    period: usize,
}

impl BlockCmp for TableCmp<'_, '_> {
    fn next_equal(&mut self, i: usize) -> bool {
        self.table.equivalent(i, i + self.period, self.period)
    }
}

/// Equality of blocks via the nearest mismatch `w[t] != w[t+m]` at or after `i`.
struct EqualityCmp<'a> {
    symbols: &'a [u8],
    period: usize,
    lowest: usize,
    next_mismatch: usize,
}

impl<'a> EqualityCmp<'a> {
    fn new(symbols: &'a [u8], period: usize) -> Self {
        EqualityCmp {
            symbols,
            period,
            lowest: symbols.len() - period,
            next_mismatch: usize::MAX,
        }
    }
}

impl BlockCmp for EqualityCmp<'_> {
    fn next_equal(&mut self, i: usize) -> bool {
        while self.lowest > i {
            self.lowest -= 1;
            let t = self.lowest;
            if self.symbols[t] != self.symbols[t + self.period] {
                self.next_mismatch = t;
            }
        }
        self.next_mismatch >= i + self.period
    }
}

/// Scans one word at one level. Build once, query many periods.
pub struct Scanner<'w> {
    symbols: &'w [u8],
    level: usize,
    table: Option<PrefixTable<'w>>,
}

impl<'w> Scanner<'w> {
    /// `level` 0 scans ordinary powers, `level >= 1` k-abelian powers.
    pub fn new(word: &'w Word, level: usize) -> Self {
        Self::from_symbols(word.symbols(), level)
    }

    pub fn from_symbols(symbols: &'w [u8], level: usize) -> Self {
        let table = (level != ORDINARY).then(|| PrefixTable::from_symbols(symbols, level));
        Scanner { symbols, level, table }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    fn check_period(&self, period: usize) -> Result<(), ScanError> {
        if period == 0 || period > self.symbols.len() {
            return Err(ScanError::BadPeriod {
                period,
                len: self.symbols.len(),
            });
        }
        Ok(())
    }

    fn with_cmp<R>(&self, period: usize, f: impl FnOnce(&mut dyn BlockCmp) -> R) -> R {
        match &self.table {
            Some(table) => f(&mut TableCmp { table, period }),
            None => f(&mut EqualityCmp::new(self.symbols, period)),
        }
    }

    fn hit(&self, position: usize, period: usize, exponent: usize) -> PowerHit {
        PowerHit {
            position,
            period,
            exponent,
            level: self.level,
        }
    }

    /// Maximum exponent at `period` and the leftmost occurrence achieving it.
    pub fn max_exponent(&self, period: usize) -> Result<(usize, PowerHit), ScanError> {
        self.check_period(period)?;
        let n = self.symbols.len();
        let m = period;
        let (best, at) = self.with_cmp(m, |cmp| {
            let mut ring = vec![0u32; m];
            let (mut best, mut at) = (0u32, 0usize);
            for i in (0..=n - m).rev() {
                let run = if i + 2 * m <= n && cmp.next_equal(i) {
                    ring[i % m] + 1
                } else {
                    1
                };
                ring[i % m] = run;
                if run >= best {
                    best = run;
                    at = i;
                }
            }
            (best as usize, at)
        });
        Ok((best, self.hit(at, m, best)))
    }

    /// Runs `run[i]` for every start position, plus whether each start is
    /// left-extendable.
    fn runs(&self, period: usize) -> (Vec<u32>, Vec<bool>) {
        let n = self.symbols.len();
        let m = period;
        let mut run = vec![1u32; n - m + 1];
        let mut extendable = vec![false; n - m + 1];
        self.with_cmp(m, |cmp| {
            if n >= 2 * m {
                for i in (0..=n - 2 * m).rev() {
                    if cmp.next_equal(i) {
                        run[i] = run[i + m] + 1;
                        extendable[i + m] = true;
                    }
                }
            }
        });
        (run, extendable)
    }

    /// All maximal hits at `period` with exponent at least `min_exponent`,
    /// sorted by position. A hit is maximal when it extends neither left nor
    /// right by a whole block at the same period and level.
    pub fn hits(&self, period: usize, min_exponent: usize) -> Result<Vec<PowerHit>, ScanError> {
        self.check_period(period)?;
        if min_exponent < 2 {
            return Err(ScanError::BadMinExponent(min_exponent));
        }
        if period * min_exponent > self.symbols.len() {
            return Ok(Vec::new());
        }
        let (run, extendable) = self.runs(period);
        Ok(run
            .iter()
            .zip(&extendable)
            .enumerate()
            .filter(|&(_, (&r, &ext))| !ext && r as usize >= min_exponent)
            .map(|(i, (&r, _))| self.hit(i, period, r as usize))
            .collect())
    }

    /// `A(m)` for every `m` in `lo..=hi`, computed in parallel.
    pub fn table(&self, lo: usize, hi: usize) -> Result<ExponentTable, ScanError> {
        if lo == 0 || lo > hi {
            return Err(ScanError::EmptyRange { lo, hi });
        }
        self.check_period(hi)?;
        let rows = (lo..=hi)
            .into_par_iter()
            .map(|m| {
                let (exponent, witness) = self.max_exponent(m)?;
                Ok(ExponentRow {
                    period: m,
                    exponent,
                    witness,
                })
            })
            .collect::<Result<Vec<_>, ScanError>>()?;
        Ok(ExponentTable {
            prefix_len: self.symbols.len(),
            level: self.level,
            rows,
        })
    }
}

/// Maximum exponent of a k-abelian power of period `m` in `w`, with a witness.
pub fn k_abexp(w: &Word, m: usize, k: usize) -> Result<(usize, PowerHit), ScanError> {
    assert!(k >= 1, "use ordinary_exp for equality");
    Scanner::new(w, k).max_exponent(m)
}

/// Maximum integral exponent of an ordinary power of period `m` in `w`.
pub fn ordinary_exp(w: &Word, m: usize) -> Result<(usize, PowerHit), ScanError> {
    Scanner::new(w, ORDINARY).max_exponent(m)
}

pub fn exponent_table(w: &Word, lo: usize, hi: usize, k: usize) -> Result<ExponentTable, ScanError> {
    Scanner::new(w, k).table(lo, hi)
}

pub fn find_hits(w: &Word, m: usize, k: usize, min_exponent: usize) -> Result<Vec<PowerHit>, ScanError> {
    Scanner::new(w, k).hits(m, min_exponent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{prefix_of, FIBONACCI, THUE_MORSE};
    use crate::word::word;

    #[test]
    fn abexp_examples() {
        let t = word("01101001");
        let (e, hit) = k_abexp(&t, 2, 1).unwrap();
        assert_eq!(e, 4);
        assert_eq!(hit.position, 0);

        let f = prefix_of(FIBONACCI, 13).unwrap();
        assert_eq!(k_abexp(&f, 1, 1).unwrap().0, 2);

        // abc bca cab with a, b, c -> 0, 1, 2
        assert_eq!(k_abexp(&word("012120201"), 3, 1).unwrap().0, 3);
    }

    #[test]
    fn ordinary_examples() {
        let w = Word::from_symbols(vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(ordinary_exp(&w, 2).unwrap().0, 3);
        assert_eq!(ordinary_exp(&word("0101"), 3).unwrap().0, 1);
        let t = prefix_of(THUE_MORSE, 1 << 12).unwrap();
        let scanner = Scanner::new(&t, ORDINARY);
        for m in 1..=100 {
            assert!(scanner.max_exponent(m).unwrap().0 <= 2, "m={m}");
        }
    }

    #[test]
    fn period_errors() {
        let w = word("0101");
        assert_eq!(k_abexp(&w, 0, 1), Err(ScanError::BadPeriod { period: 0, len: 4 }));
        assert_eq!(k_abexp(&w, 5, 1), Err(ScanError::BadPeriod { period: 5, len: 4 }));
        assert_eq!(exponent_table(&w, 3, 2, 1), Err(ScanError::EmptyRange { lo: 3, hi: 2 }));
        assert_eq!(find_hits(&w, 1, 1, 1), Err(ScanError::BadMinExponent(1)));
    }

    #[test]
    fn hits_examples() {
        let hits = find_hits(&word("01101001"), 2, 1, 2).unwrap();
        assert_eq!(
            hits,
            vec![PowerHit {
                position: 0,
                period: 2,
                exponent: 4,
                level: 1
            }]
        );
        assert!(find_hits(&word("01101001"), 2, 1, 5).unwrap().is_empty());
        // #0 and #1 have different Parikh vectors, so nothing repeats at period 2.
        assert!(find_hits(&word("#0#1#0#1"), 2, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn table_examples() {
        let f = prefix_of(FIBONACCI, 10_000).unwrap();
        let table = exponent_table(&f, 1, 50, 1).unwrap();
        assert_eq!(table.get(1).unwrap().exponent, 2);
        for row in &table.rows {
            assert_eq!(row.exponent, k_abexp(&f, row.period, 1).unwrap().0);
            assert!(row.witness.verify(&f));
        }
        let single = exponent_table(&f, 7, 7, 2).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.rows[0].exponent, k_abexp(&f, 7, 2).unwrap().0);

        let zeros = Word::from_symbols(vec![0; 32]);
        let table = exponent_table(&zeros, 1, 4, 1).unwrap();
        for row in &table.rows {
            assert_eq!(row.exponent, 32 / row.period);
        }
    }

    #[test]
    fn witness_is_leftmost() {
        let (e, hit) = ordinary_exp(&word("1000100"), 1).unwrap();
        assert_eq!((e, hit.position), (3, 1));
    }
}
