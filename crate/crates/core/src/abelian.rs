//! Parikh vectors, k-abelian signatures and window-equivalence tables.
//!
//! Two words are *k-abelian equivalent* when every nonempty word of length at
//! most `k` occurs equally often in both. For words of length at least
//! `k - 1` this is the same as sharing the `(k-1)`-prefix, the
//! `(k-1)`-suffix and the multiset of length-`k` factors; [`KSignature`]
//! captures that triple. Level 1 is plain abelian equivalence.
//!
//! [`PrefixTable`] answers "are the windows at `i` and `j` of length `m`
//! equivalent?" in time independent of `m`, which is what the power scanners
//! run on.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::{Add, Sub};

use crate::word::{Word, MAX_SYMBOLS};

/// Per-letter occurrence counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParikhVector {
    counts: [u32; MAX_SYMBOLS],
}

impl ParikhVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn of(symbols: &[u8]) -> Self {
        let mut counts = [0u32; MAX_SYMBOLS];
        for &s in symbols {
            counts[s as usize] += 1;
        }
        ParikhVector { counts }
    }

    pub fn counts(&self) -> &[u32; MAX_SYMBOLS] {
        &self.counts
    }

    pub fn get(&self, symbol: u8) -> u32 {
        self.counts[symbol as usize]
    }

    /// Sum of the counts, which is the length of the described word.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    fn unit(symbol: u8) -> Self {
        let mut counts = [0u32; MAX_SYMBOLS];
        counts[symbol as usize] = 1;
        ParikhVector { counts }
    }
}

impl Add for ParikhVector {
    type Output = ParikhVector;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a += b;
        }
        self
    }
}

/// Componentwise difference. Panics if a count would go negative.
impl Sub for ParikhVector {
    type Output = ParikhVector;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a = a.checked_sub(b).expect("Parikh vector difference went negative");
        }
        self
    }
}

pub fn parikh(u: &Word) -> ParikhVector {
    ParikhVector::of(u.symbols())
}

/// The `(prefix, suffix, k-gram multiset)` triple of a word at level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KSignature {
    pub k: usize,
    /// First `min(k - 1, |u|)` symbols.
    pub prefix: Vec<u8>,
    /// Last `min(k - 1, |u|)` symbols.
    pub suffix: Vec<u8>,
    /// Occurrence count of each length-`k` factor; empty when `|u| < k`.
    pub kgram_counts: BTreeMap<Vec<u8>, usize>,
}

pub fn k_signature(u: &Word, k: usize) -> KSignature {
    assert!(k >= 1, "level k must be at least 1");
    let s = u.symbols();
    let edge = (k - 1).min(s.len());
    KSignature {
        k,
        prefix: s[..edge].to_vec(),
        suffix: s[s.len() - edge..].to_vec(),
        kgram_counts: factor_counts(s, k),
    }
}

fn factor_counts(s: &[u8], len: usize) -> BTreeMap<Vec<u8>, usize> {
    let mut counts = BTreeMap::new();
    if len <= s.len() {
        for f in s.windows(len) {
            *counts.entry(f.to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// `u ~_k v` by the raw definition: equal counts of every factor of length `1..=k`.
pub fn equivalent_by_definition(u: &[u8], v: &[u8], k: usize) -> bool {
    assert!(k >= 1, "level k must be at least 1");
    if u.len() != v.len() {
        return false;
    }
    ParikhVector::of(u) == ParikhVector::of(v) && (2..=k).all(|len| factor_counts(u, len) == factor_counts(v, len))
}

/// `u ~_k v` by comparing [`KSignature`]s. Agrees with the definition
/// whenever both words have length at least `k - 1`.
pub fn equivalent_by_signature(u: &Word, v: &Word, k: usize) -> bool {
    k_signature(u, k) == k_signature(v, k)
}

/// k-abelian equivalence. Uses the signature characterization when both
/// words are long enough for it to apply and the raw definition otherwise.
pub fn k_abelian_equivalent(u: &Word, v: &Word, k: usize) -> bool {
    assert!(k >= 1, "level k must be at least 1");
    if u.len() + 1 >= k && v.len() + 1 >= k {
        equivalent_by_signature(u, v, k)
    } else {
        equivalent_by_definition(u.symbols(), v.symbols(), k)
    }
}

fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Heap bytes a [`PrefixTable`] over `symbols` at level `k` will allocate,
/// computed without building it.
pub fn estimate_table_bytes(symbols: &[u8], k: usize) -> u64 {
    let n = symbols.len() as u64;
    let parikh = (n + 1) * (std::mem::size_of::<ParikhVector>() as u64 + 8);
    if k <= 1 || symbols.len() < k {
        return parikh;
    }
    let distinct = symbols.windows(k).collect::<HashSet<_>>().len() as u64;
    let grams = n - k as u64 + 1;
    parikh + grams * 4 + (grams + 1) * (distinct * 4 + 8)
}

/// Cumulative counts over one word for O(1)-per-window equivalence queries at
/// a fixed level `k`.
///
/// `parikh[i]` is the Parikh vector of the length-`i` prefix. For `k > 1` each
/// position also gets the dense id of the length-`k` factor starting there
/// (ids assigned in first-occurrence order) and a cumulative count row per
/// position. A linear hash of every cumulative row lets windows be compared
/// by subtraction first; equal hashes are always confirmed by the full count
/// vectors.
#[derive(Clone, Debug)]
pub struct PrefixTable<'w> {
    symbols: &'w [u8],
    k: usize,
    parikh: Vec<ParikhVector>,
    parikh_hash: Vec<u64>,
    kgram_ids: Vec<u32>,
    kgram_distinct: usize,
    kgram_cumulative: Vec<u32>,
    kgram_hash: Vec<u64>,
}

impl<'w> PrefixTable<'w> {
    pub fn new(word: &'w Word, k: usize) -> Self {
        Self::from_symbols(word.symbols(), k)
    }

    pub fn from_symbols(symbols: &'w [u8], k: usize) -> Self {
        assert!(k >= 1, "level k must be at least 1");
        let n = symbols.len();
        let letter_weight: [u64; MAX_SYMBOLS] = std::array::from_fn(|i| mix(i as u64) | 1);

        let mut parikh = Vec::with_capacity(n + 1);
        let mut parikh_hash = Vec::with_capacity(n + 1);
        let mut acc = ParikhVector::zero();
        let mut h = 0u64;
        parikh.push(acc);
        parikh_hash.push(h);
        for &s in symbols {
            acc = acc + ParikhVector::unit(s);
            h = h.wrapping_add(letter_weight[s as usize]);
            parikh.push(acc);
            parikh_hash.push(h);
        }

        let mut table = PrefixTable {
            symbols,
            k,
            parikh,
            parikh_hash,
            kgram_ids: Vec::new(),
            kgram_distinct: 0,
            kgram_cumulative: Vec::new(),
            kgram_hash: Vec::new(),
        };
        if k > 1 && n >= k {
            table.build_kgrams();
        }
        table
    }

    fn build_kgrams(&mut self) {
        let k = self.k;
        let grams = self.symbols.len() - k + 1;
        let mut ids: HashMap<&[u8], u32> = HashMap::new();
        self.kgram_ids = self
            .symbols
            .windows(k)
            .map(|g| {
                let next = ids.len() as u32;
                *ids.entry(g).or_insert(next)
            })
            .collect();
        let d = ids.len();
        self.kgram_distinct = d;
        let weight: Vec<u64> = (0..d).map(|i| mix(0x1000 + i as u64) | 1).collect();
        let mut cumulative = vec![0u32; (grams + 1) * d];
        let mut hash = Vec::with_capacity(grams + 1);
        hash.push(0u64);
        let mut h = 0u64;
        for (p, &id) in self.kgram_ids.iter().enumerate() {
            let (done, rest) = cumulative.split_at_mut((p + 1) * d);
            rest[..d].copy_from_slice(&done[p * d..]);
            rest[id as usize] += 1;
            h = h.wrapping_add(weight[id as usize]);
            hash.push(h);
        }
        self.kgram_cumulative = cumulative;
        self.kgram_hash = hash;
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &'w [u8] {
        self.symbols
    }

    /// Number of distinct length-`k` factors seen (0 for `k = 1`).
    pub fn distinct_kgrams(&self) -> usize {
        self.kgram_distinct
    }

    /// Parikh vector of the window `[start, start + len)`.
    pub fn window_parikh(&self, start: usize, len: usize) -> ParikhVector {
        self.parikh[start + len] - self.parikh[start]
    }

    /// Counts indexed by k-gram id for the window `[start, start + len)`; needs `len >= k > 1`.
    pub fn window_kgram_counts(&self, start: usize, len: usize) -> Vec<u32> {
        assert!(self.k > 1 && len >= self.k);
        let d = self.kgram_distinct;
        let hi = start + len - self.k + 1;
        (0..d)
            .map(|id| self.kgram_cumulative[hi * d + id] - self.kgram_cumulative[start * d + id])
            .collect()
    }

    /// Whether the length-`len` windows at `i` and `j` are `~_k` equivalent.
    pub fn equivalent(&self, i: usize, j: usize, len: usize) -> bool {
        let n = self.symbols.len();
        assert!(i + len <= n && j + len <= n, "window out of range");
        if i == j {
            return true;
        }
        let k = self.k;
        if k == 1 {
            let hi = self.parikh_hash[i + len].wrapping_sub(self.parikh_hash[i]);
            let hj = self.parikh_hash[j + len].wrapping_sub(self.parikh_hash[j]);
            return hi == hj && self.window_parikh(i, len) == self.window_parikh(j, len);
        }
        if len <= k {
            // Words of length at most k are k-abelian equivalent only if equal.
            return self.symbols[i..i + len] == self.symbols[j..j + len];
        }
        let e = k - 1;
        if self.symbols[i..i + e] != self.symbols[j..j + e]
            || self.symbols[i + len - e..i + len] != self.symbols[j + len - e..j + len]
        {
            return false;
        }
        let grams = len - k + 1;
        let hi = self.kgram_hash[i + grams].wrapping_sub(self.kgram_hash[i]);
        let hj = self.kgram_hash[j + grams].wrapping_sub(self.kgram_hash[j]);
        if hi != hj {
            return false;
        }
        let d = self.kgram_distinct;
        let cum = &self.kgram_cumulative;
        (0..d).all(|id| cum[(i + grams) * d + id] - cum[i * d + id] == cum[(j + grams) * d + id] - cum[j * d + id])
    }
}
