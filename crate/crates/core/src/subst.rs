//! Uniform binary substitutions with a marker letter `#`.
//!
//! * `sigma(N)`: `0 -> # 0^(N-1)`, `1 -> # 1^(N-1)`.
//! * `tau(k, N)`: `0 -> # 0^(k-2) 0^(N-2k+2) 0^(k-1)`,
//!   `1 -> # 0^(k-2) 1^(N-2k+2) 0^(k-1)`.
//! * `marked(u, v, u', v')`: `0 -> u # v`, `1 -> u' # v'` with `|u| = |u'|`
//!   and `|v| = |v'|`.
//!
//! In every image the marker sits at the same offset, so in an applied word
//! the markers are exactly the positions congruent to that offset modulo `N`.
//! Any (k-)abelian power with at least `N` blocks then has a period divisible
//! by `N`, and [`align_power`] slides such a power onto the marker grid so it
//! can be decoded back into a power of the source word.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::abelian::PrefixTable;
use crate::scan::PowerHit;
use crate::word::{Word, MARKER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("invalid parameters: {0}")]
    Constraint(String),
    #[error("image lengths differ: {0}")]
    LengthMismatch(String),
    #[error("images of 0 and 1 coincide, so the substitution is not injective")]
    NotInjective,
    #[error("symbol {glyph:?} at position {position} is not a source letter (0 or 1)")]
    OutOfAlphabet { glyph: char, position: usize },
    #[error("length {len} is not a multiple of the image length {uniform_len}")]
    LengthNotMultiple { len: usize, uniform_len: usize },
    #[error("block {block} is not the image of any letter")]
    NotInImage { block: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlignError {
    #[error("substitution has no marker")]
    NoMarker,
    #[error("hit exponent {exponent} is below the threshold {threshold}")]
    BelowThreshold { exponent: usize, threshold: usize },
    #[error("hit {0:?} is not a power at the requested level")]
    InvalidHit(PowerHit),
    #[error("no marker-aligned shift of {0:?} is a power")]
    Failed(PowerHit),
    #[error("shifting {0:?} onto the marker grid leaves the scanned word")]
    Truncated(PowerHit),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubstKind {
    Sigma,
    Tau,
    Marked,
    General,
}

/// Which of the transfer properties a substitution is known to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuaranteeFlags {
    /// Abelian powers map to powers at this level (1 = abelian).
    pub property_i_level: usize,
    /// Powers with at least `min_exponent` blocks in an image decode to abelian
    /// powers of the source.
    pub property_ii: bool,
    /// Powers with at least `min_exponent` blocks have period divisible by `N`.
    pub divisibility: bool,
    pub n_even: bool,
    /// `N >= 2k - 1`, recorded for `tau` only.
    pub n_at_least_2k_minus_1: Option<bool>,
    pub min_exponent: usize,
}

/// A uniform substitution on the binary source alphabet `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: [Word; 2],
    uniform_len: usize,
    marker_pos: Option<usize>,
    kind: SubstKind,
    level: usize,
    flags: GuaranteeFlags,
}

fn run(letter: u8, len: usize) -> Vec<u8> {
    vec![letter; len]
}

fn marker_offset(image: &Word) -> Option<usize> {
    let mut found = image.symbols().iter().enumerate().filter(|(_, &s)| s == MARKER);
    match (found.next(), found.next()) {
        (Some((i, _)), None) => Some(i),
        _ => None,
    }
}

impl Substitution {
    /// `0 -> # 0^(N-1)`, `1 -> # 1^(N-1)`. Odd `N` is allowed but loses the
    /// decoding guarantee.
    pub fn sigma(n: usize) -> Result<Self, SubstError> {
        if n < 2 {
            return Err(SubstError::Constraint(format!("N >= 2 violated (N = {n})")));
        }
        let image = |letter| {
            let mut v = vec![MARKER];
            v.extend(run(letter, n - 1));
            Word::from_symbols(v)
        };
        let even = n % 2 == 0;
        Ok(Substitution {
            images: [image(0), image(1)],
            uniform_len: n,
            marker_pos: Some(0),
            kind: SubstKind::Sigma,
            level: 1,
            flags: GuaranteeFlags {
                property_i_level: 1,
                property_ii: even,
                divisibility: true,
                n_even: even,
                n_at_least_2k_minus_1: None,
                min_exponent: n,
            },
        })
    }

    /// `0 -> # 0^(k-2) 0^(N-2k+2) 0^(k-1)`, `1 -> # 0^(k-2) 1^(N-2k+2) 0^(k-1)`.
    pub fn tau(k: usize, n: usize) -> Result<Self, SubstError> {
        if k < 2 {
            return Err(SubstError::Constraint(format!("k >= 2 violated (k = {k})")));
        }
        if n + 1 < 2 * k {
            return Err(SubstError::Constraint(format!(
                "N >= 2k - 1 violated (N = {n}, 2k - 1 = {})",
                2 * k - 1
            )));
        }
        let image = |letter| {
            let mut v = vec![MARKER];
            v.extend(run(0, k - 2));
            v.extend(run(letter, n + 2 - 2 * k));
            v.extend(run(0, k - 1));
            Word::from_symbols(v)
        };
        Ok(Substitution {
            images: [image(0), image(1)],
            uniform_len: n,
            marker_pos: Some(0),
            kind: SubstKind::Tau,
            level: k,
            flags: GuaranteeFlags {
                property_i_level: k,
                property_ii: true,
                divisibility: true,
                n_even: n % 2 == 0,
                n_at_least_2k_minus_1: Some(true),
                min_exponent: n,
            },
        })
    }

    /// `0 -> u # v`, `1 -> u2 # v2`.
    pub fn marked(u: &Word, v: &Word, u2: &Word, v2: &Word) -> Result<Self, SubstError> {
        if u.len() != u2.len() || v.len() != v2.len() {
            return Err(SubstError::LengthMismatch(format!(
                "|u| = {}, |u2| = {}, |v| = {}, |v2| = {}",
                u.len(),
                u2.len(),
                v.len(),
                v2.len()
            )));
        }
        for part in [u, v, u2, v2] {
            check_binary(part)?;
        }
        let marker = Word::from_symbols(vec![MARKER]);
        let images = [u.concat(&marker).concat(v), u2.concat(&marker).concat(v2)];
        if images[0] == images[1] {
            return Err(SubstError::NotInjective);
        }
        let n = images[0].len();
        Ok(Substitution {
            images,
            uniform_len: n,
            marker_pos: Some(u.len()),
            kind: SubstKind::Marked,
            level: 1,
            flags: GuaranteeFlags {
                property_i_level: 1,
                property_ii: false,
                divisibility: true,
                n_even: n % 2 == 0,
                n_at_least_2k_minus_1: None,
                min_exponent: n,
            },
        })
    }

    /// Any injective uniform substitution on `{0, 1}`. If both images carry a
    /// single `#` at the same offset, that offset is recorded as the marker.
    pub fn general(image0: Word, image1: Word) -> Result<Self, SubstError> {
        if image0.len() != image1.len() {
            return Err(SubstError::LengthMismatch(format!(
                "|h(0)| = {}, |h(1)| = {}",
                image0.len(),
                image1.len()
            )));
        }
        if image0.is_empty() {
            return Err(SubstError::Constraint("images must be nonempty".into()));
        }
        if image0 == image1 {
            return Err(SubstError::NotInjective);
        }
        let marker_pos = match (marker_offset(&image0), marker_offset(&image1)) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
        let n = image0.len();
        Ok(Substitution {
            images: [image0, image1],
            uniform_len: n,
            marker_pos,
            kind: SubstKind::General,
            level: 1,
            flags: GuaranteeFlags {
                property_i_level: 1,
                property_ii: false,
                divisibility: marker_pos.is_some(),
                n_even: n % 2 == 0,
                n_at_least_2k_minus_1: None,
                min_exponent: n,
            },
        })
    }

    pub fn image(&self, letter: u8) -> &Word {
        &self.images[letter as usize]
    }

    pub fn uniform_len(&self) -> usize {
        self.uniform_len
    }

    pub fn marker_pos(&self) -> Option<usize> {
        self.marker_pos
    }

    pub fn kind(&self) -> SubstKind {
        self.kind
    }

    /// Equivalence level the substitution is built for: `k` for `tau`, 1 otherwise.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn flags(&self) -> &GuaranteeFlags {
        &self.flags
    }

    /// Short human-readable name such as `sigma(N=4)`.
    pub fn name(&self) -> String {
        match self.kind {
            SubstKind::Sigma => format!("sigma(N={})", self.uniform_len),
            SubstKind::Tau => format!("tau(k={},N={})", self.level, self.uniform_len),
            SubstKind::Marked => format!("marked({},{})", self.images[0], self.images[1]),
            SubstKind::General => format!("general({},{})", self.images[0], self.images[1]),
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, SubstError> {
        check_binary(w)?;
        let mut out = Vec::with_capacity(w.len() * self.uniform_len);
        for &s in w.symbols() {
            out.extend_from_slice(self.images[s as usize].symbols());
        }
        Ok(Word::from_symbols(out))
    }

    /// The unique preimage of `x`, block by block.
    pub fn decode(&self, x: &Word) -> Result<Word, SubstError> {
        let n = self.uniform_len;
        if x.len() % n != 0 {
            return Err(SubstError::LengthNotMultiple {
                len: x.len(),
                uniform_len: n,
            });
        }
        x.symbols()
            .chunks(n)
            .enumerate()
            .map(|(block, chunk)| {
                self.images
                    .iter()
                    .position(|img| img.symbols() == chunk)
                    .map(|letter| letter as u8)
                    .ok_or(SubstError::NotInImage { block })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from_symbols)
    }
}

impl fmt::Display for Substitution {
    /// `letter=image` lines, letters in order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "0={}", self.images[0])?;
        writeln!(f, "1={}", self.images[1])
    }
}

fn check_binary(w: &Word) -> Result<(), SubstError> {
    match w.symbols().iter().position(|&s| s > 1) {
        Some(position) => Err(SubstError::OutOfAlphabet {
            glyph: w.alphabet().glyph(w.symbols()[position]),
            position,
        }),
        None => Ok(()),
    }
}

/// Distance from `position` back to the nearest marker at or before it,
/// given that image position 0 sits at offset `phase` within a letter image.
pub fn marker_offset_of(s: &Substitution, position: usize, phase: usize) -> Option<usize> {
    let n = s.uniform_len;
    let marker = s.marker_pos?;
    Some((position % n + phase % n + n - marker % n) % n)
}

fn align_with(
    symbols: &[u8],
    hit: &PowerHit,
    s: &Substitution,
    phase: usize,
    verify: impl Fn(&PowerHit) -> bool,
) -> Result<PowerHit, AlignError> {
    let n = s.uniform_len;
    let offset = marker_offset_of(s, hit.position, phase).ok_or(AlignError::NoMarker)?;
    if hit.exponent < n {
        return Err(AlignError::BelowThreshold {
            exponent: hit.exponent,
            threshold: n,
        });
    }
    if !verify(hit) {
        return Err(AlignError::InvalidHit(*hit));
    }
    let on_grid = |h: &PowerHit| h.blocks(symbols).all(|b| b[0] == MARKER);
    if offset == 0 && on_grid(hit) {
        return Ok(*hit);
    }
    let left = hit.position.checked_sub(offset);
    let right = Some(hit.position + n - offset);
    let mut truncated = false;
    for position in [left, right] {
        let Some(position) = position else {
            truncated = true;
            continue;
        };
        let candidate = PowerHit { position, ..*hit };
        if candidate.end() > symbols.len() {
            truncated = true;
            continue;
        }
        if on_grid(&candidate) && verify(&candidate) {
            return Ok(candidate);
        }
    }
    if truncated {
        Err(AlignError::Truncated(*hit))
    } else {
        Err(AlignError::Failed(*hit))
    }
}

/// Shifts a power found in `image` so every block starts with `#`.
///
/// `phase` is the offset of `image[0]` inside its letter image (0 when
/// `image` is a full `s.apply(w)`). The two candidates are the shift left to
/// the previous marker and the shift right to the next one; the left shift is
/// preferred when both verify. All checks use the definitional `~_k` test.
pub fn align_power(
    image: &Word,
    hit: &PowerHit,
    s: &Substitution,
    k: usize,
    phase: usize,
) -> Result<PowerHit, AlignError> {
    let hit = PowerHit { level: k, ..*hit };
    align_with(image.symbols(), &hit, s, phase, |h| h.verify(image))
}

/// Table-backed aligner for checking many hits in one image.
pub struct Aligner<'a> {
    table: PrefixTable<'a>,
    subst: &'a Substitution,
    phase: usize,
}

impl<'a> Aligner<'a> {
    pub fn new(image: &'a Word, subst: &'a Substitution, k: usize, phase: usize) -> Self {
        Aligner {
            table: PrefixTable::new(image, k),
            subst,
            phase,
        }
    }

    fn verify(&self, h: &PowerHit) -> bool {
        h.end() <= self.table.len()
            && (1..h.exponent).all(|j| self.table.equivalent(h.position, h.position + j * h.period, h.period))
    }

    pub fn align(&self, hit: &PowerHit) -> Result<PowerHit, AlignError> {
        let hit = PowerHit {
            level: self.table.level(),
            ..*hit
        };
        align_with(self.table.symbols(), &hit, self.subst, self.phase, |h| self.verify(h))
    }
}

/// Outcome of decoding a marker-aligned power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    /// Position of the decoded factor in the source word, when `phase` is 0.
    pub source_position: usize,
    pub factor: Word,
    /// The power inside `factor`: period `m / N`, same exponent, level 1.
    pub hit: PowerHit,
}

/// Where an aligned power of an image of length `image_len` comes from:
/// its start in the image and the corresponding level-1 power in source
/// coordinates (period `m / N`, same exponent).
pub fn aligned_source(
    image_len: usize,
    aligned: &PowerHit,
    s: &Substitution,
    phase: usize,
) -> Result<(usize, PowerHit), AlignError> {
    let n = s.uniform_len;
    let marker = s.marker_pos.ok_or(AlignError::NoMarker)?;
    if aligned.period % n != 0 || marker_offset_of(s, aligned.position, phase) != Some(0) {
        return Err(AlignError::Failed(*aligned));
    }
    let start = aligned
        .position
        .checked_sub(marker)
        .ok_or(AlignError::Truncated(*aligned))?;
    if start + aligned.period * aligned.exponent > image_len {
        return Err(AlignError::Truncated(*aligned));
    }
    let source = PowerHit {
        position: (start + phase) / n,
        period: aligned.period / n,
        exponent: aligned.exponent,
        level: 1,
    };
    Ok((start, source))
}

/// Decodes an aligned power of `image` into the source word.
pub fn decode_aligned(
    image: &Word,
    aligned: &PowerHit,
    s: &Substitution,
    phase: usize,
) -> Result<Preimage, AlignError> {
    let (start, source) = aligned_source(image.len(), aligned, s, phase)?;
    let end = start + aligned.period * aligned.exponent;
    let factor = s
        .decode(&image.factor(start..end))
        .map_err(|_| AlignError::Failed(*aligned))?;
    Ok(Preimage {
        source_position: source.position,
        factor,
        hit: PowerHit { position: 0, ..source },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word;

    #[test]
    fn sigma_images() {
        let s = Substitution::sigma(4).unwrap();
        assert_eq!(s.image(0), &word("#000"));
        assert_eq!(s.image(1), &word("#111"));
        assert!(s.flags().property_ii);
        let s = Substitution::sigma(2).unwrap();
        assert_eq!((s.image(0), s.image(1)), (&word("#0"), &word("#1")));
        let s = Substitution::sigma(3).unwrap();
        assert!(!s.flags().property_ii);
        assert!(Substitution::sigma(1).is_err());
    }

    #[test]
    fn tau_images() {
        let t = Substitution::tau(2, 4).unwrap();
        assert_eq!((t.image(0), t.image(1)), (&word("#000"), &word("#110")));
        let t = Substitution::tau(3, 8).unwrap();
        assert_eq!((t.image(0), t.image(1)), (&word("#0000000"), &word("#0111100")));
        let t = Substitution::tau(2, 3).unwrap();
        assert_eq!((t.image(0), t.image(1)), (&word("#00"), &word("#10")));
        for t in [Substitution::tau(2, 4).unwrap(), Substitution::tau(3, 8).unwrap()] {
            let k = t.level();
            assert_eq!(t.image(0).prefix(k - 1), t.image(1).prefix(k - 1));
            assert_eq!(t.image(0).suffix(k - 1), t.image(1).suffix(k - 1));
            assert_eq!(t.image(0).len(), t.uniform_len());
        }
    }

    #[test]
    fn tau_constraint_errors_name_the_inequality() {
        let e = Substitution::tau(3, 4).unwrap_err();
        assert!(e.to_string().contains("N >= 2k - 1"), "{e}");
        let e = Substitution::tau(1, 4).unwrap_err();
        assert!(e.to_string().contains("k >= 2"), "{e}");
    }

    #[test]
    fn marked_morphisms() {
        let m = Substitution::marked(&word("0"), &word("1"), &word("1"), &word("0")).unwrap();
        assert_eq!((m.image(0), m.image(1)), (&word("0#1"), &word("1#0")));
        assert_eq!(m.marker_pos(), Some(1));
        let e = Word::empty();
        let m = Substitution::marked(&e, &word("000"), &e, &word("111")).unwrap();
        let s = Substitution::sigma(4).unwrap();
        assert_eq!((m.image(0), m.image(1)), (s.image(0), s.image(1)));
        assert!(matches!(
            Substitution::marked(&word("0"), &e, &word("01"), &e),
            Err(SubstError::LengthMismatch(_))
        ));
        assert_eq!(
            Substitution::marked(&word("0"), &e, &word("0"), &e),
            Err(SubstError::NotInjective)
        );
    }

    #[test]
    fn general_detects_marker() {
        let g = Substitution::general(word("0#"), word("1#")).unwrap();
        assert_eq!(g.marker_pos(), Some(1));
        let g = Substitution::general(word("01"), word("10")).unwrap();
        assert_eq!(g.marker_pos(), None);
    }

    #[test]
    fn apply_and_decode() {
        let s = Substitution::sigma(4).unwrap();
        assert_eq!(s.apply(&word("01")).unwrap(), word("#000#111"));
        assert_eq!(s.apply(&Word::empty()).unwrap(), Word::empty());
        let t = Substitution::tau(2, 4).unwrap();
        assert_eq!(t.apply(&word("10")).unwrap(), word("#110#000"));
        assert!(matches!(
            s.apply(&word("0#")),
            Err(SubstError::OutOfAlphabet { position: 1, .. })
        ));

        assert_eq!(s.decode(&word("#000#111")).unwrap(), word("01"));
        assert_eq!(s.decode(&word("#001#111")), Err(SubstError::NotInImage { block: 0 }));
        assert_eq!(t.decode(&word("#110#110#000")).unwrap(), word("110"));
        assert!(matches!(
            s.decode(&word("#00")),
            Err(SubstError::LengthNotMultiple { .. })
        ));
    }

    #[test]
    fn display_is_letter_image_lines() {
        assert_eq!(Substitution::sigma(2).unwrap().to_string(), "0=#0\n1=#1\n");
    }

    #[test]
    fn align_left_shift() {
        let s = Substitution::sigma(2).unwrap();
        let image = s.apply(&word("0000")).unwrap();
        assert_eq!(image, word("#0#0#0#0"));
        let hit = PowerHit {
            position: 1,
            period: 2,
            exponent: 3,
            level: 1,
        };
        let aligned = align_power(&image, &hit, &s, 1, 0).unwrap();
        assert_eq!(aligned, PowerHit { position: 0, ..hit });
        let pre = decode_aligned(&image, &aligned, &s, 0).unwrap();
        assert_eq!(pre.factor, word("000"));
        assert_eq!(pre.hit.period, 1);
        assert!(pre.hit.verify(&pre.factor));
    }

    #[test]
    fn aligned_hit_is_returned_unchanged() {
        let s = Substitution::sigma(2).unwrap();
        let image = s.apply(&word("0110")).unwrap();
        let hit = PowerHit {
            position: 0,
            period: 4,
            exponent: 2,
            level: 1,
        };
        assert_eq!(align_power(&image, &hit, &s, 1, 0), Ok(hit));
    }

    #[test]
    fn align_rejects_bad_input() {
        let s = Substitution::sigma(4).unwrap();
        let image = s.apply(&word("0000")).unwrap();
        let short = PowerHit {
            position: 1,
            period: 1,
            exponent: 3,
            level: 1,
        };
        assert!(matches!(
            align_power(&image, &short, &s, 1, 0),
            Err(AlignError::BelowThreshold { .. })
        ));
        let bogus = PowerHit {
            position: 0,
            period: 1,
            exponent: 4,
            level: 1,
        };
        assert!(matches!(
            align_power(&image, &bogus, &s, 1, 0),
            Err(AlignError::InvalidHit(_))
        ));
    }

    #[test]
    fn align_reports_truncation() {
        // "0#0#" is a power of period 2 in the image, but with phase 1 the
        // previous marker lies before the start of the scanned window.
        let s = Substitution::sigma(2).unwrap();
        let image = word("0#0#");
        let hit = PowerHit {
            position: 0,
            period: 2,
            exponent: 2,
            level: 1,
        };
        assert_eq!(align_power(&image, &hit, &s, 1, 1), Err(AlignError::Truncated(hit)));
    }

    #[test]
    fn aligner_agrees_with_definitional_alignment() {
        let s = Substitution::sigma(4).unwrap();
        let image = s.apply(&word("0110100110010110")).unwrap();
        let aligner = Aligner::new(&image, &s, 1, 0);
        let scanner = crate::scan::Scanner::new(&image, 1);
        for m in 1..=image.len() / 4 {
            for hit in scanner.hits(m, 4).unwrap() {
                assert_eq!(aligner.align(&hit), align_power(&image, &hit, &s, 1, 0));
            }
        }
    }
}
