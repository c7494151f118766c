//! Brute-force oracles shared by the integration tests.
//!
//! Nothing here touches the library's scanning or table code; the only
//! library types used are `Word` and `PowerHit` as plain data.
#![allow(dead_code)]

use std::collections::HashMap;

use wordlab::{PowerHit, Word};

/// Occurrence counts of every factor of length `1..=k`.
pub fn factor_counts(u: &[u8], k: usize) -> HashMap<Vec<u8>, usize> {
    let mut counts = HashMap::new();
    for len in 1..=k.min(u.len()) {
        for f in u.windows(len) {
            *counts.entry(f.to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// `u ~_k v` straight from the definition; level 0 is equality.
pub fn equiv(u: &[u8], v: &[u8], k: usize) -> bool {
    if k == 0 {
        return u == v;
    }
    if u.len() != v.len() {
        return false;
    }
    if k <= 3 {
        return dense_counts(u, k) == dense_counts(v, k);
    }
    factor_counts(u, k) == factor_counts(v, k)
}

/// Factor counts for `k <= 3` over at most four letters, one slot per
/// possible factor: `4 + 16 + 64` slots.
fn dense_counts(u: &[u8], k: usize) -> [u16; 84] {
    let mut counts = [0u16; 84];
    let mut base = 0;
    for len in 1..=k {
        for f in u.windows(len) {
            let code = f.iter().fold(0usize, |acc, &c| acc * 4 + c as usize);
            counts[base + code] += 1;
        }
        base += 1 << (2 * len);
    }
    counts
}

fn blocks_equiv(w: &[u8], pos: usize, m: usize, e: usize, k: usize) -> bool {
    let first = &w[pos..pos + m];
    (1..e).all(|j| equiv(first, &w[pos + j * m..pos + (j + 1) * m], k))
}

/// Largest `e` with some `(pos, e)` a level-`k` power of period `m`,
/// found by trying every start and every exponent.
pub fn max_exponent(w: &[u8], m: usize, k: usize) -> usize {
    let mut best = 0;
    for pos in 0..w.len() {
        for e in 1..=(w.len() - pos) / m {
            if blocks_equiv(w, pos, m, e, k) {
                best = best.max(e);
            }
        }
    }
    best
}

/// Every power that can be extended by a whole block neither left nor right.
pub fn maximal_hits(w: &[u8], m: usize, k: usize, min_e: usize) -> Vec<PowerHit> {
    let mut out = Vec::new();
    for pos in 0..w.len() {
        for e in min_e.max(1)..=(w.len().saturating_sub(pos)) / m {
            if !blocks_equiv(w, pos, m, e, k) {
                continue;
            }
            let left = pos >= m && blocks_equiv(w, pos - m, m, e + 1, k);
            let right = pos + (e + 1) * m <= w.len() && blocks_equiv(w, pos, m, e + 1, k);
            if !left && !right {
                out.push(PowerHit {
                    position: pos,
                    period: m,
                    exponent: e,
                    level: k,
                });
            }
        }
    }
    out
}

/// All binary words of length exactly `len`, in lexicographic order.
pub fn binary_words(len: usize) -> impl Iterator<Item = Word> {
    (0u64..1 << len)
        .map(move |bits| Word::from_symbols((0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect()))
}

/// Thue-Morse letter `i`: parity of the binary digit sum.
pub fn thue_morse(n: usize) -> Vec<u8> {
    (0..n).map(|i| (i.count_ones() % 2) as u8).collect()
}

/// Fibonacci word by iterating `0 -> 01, 1 -> 0` until long enough.
pub fn fibonacci(n: usize) -> Vec<u8> {
    let mut w = vec![0u8];
    while w.len() < n {
        w = w
            .iter()
            .flat_map(|&c| if c == 0 { vec![0, 1] } else { vec![0] })
            .collect();
    }
    w.truncate(n);
    w
}

/// `[a0; a1, a2, ...]` evaluated from the back.
pub fn continued_fraction(terms: &[u64]) -> f64 {
    terms
        .iter()
        .rev()
        .fold(None, |acc: Option<f64>, &a| {
            Some(a as f64 + acc.map_or(0.0, |t| 1.0 / t))
        })
        .unwrap_or(0.0)
}
