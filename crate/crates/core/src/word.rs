//! Finite words over a small indexed alphabet.
//!
//! Symbols are stored as indices into an [`Alphabet`], never as raw glyphs,
//! so Parikh vectors and k-gram tables can address them directly. The
//! standard alphabet is `0 1 # 2`; the marker `#` is always index
//! [`MARKER`], which keeps substitution images bit-exact when written out.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

/// Upper bound on alphabet size.
pub const MAX_SYMBOLS: usize = 4;

/// Index of the marker glyph `#` in the standard alphabet.
pub const MARKER: u8 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must have between 1 and {MAX_SYMBOLS} symbols, got {0}")]
    BadSize(usize),
    #[error("glyph {0:?} is not a visible ASCII character")]
    Invisible(char),
    #[error("glyph {0:?} appears twice")]
    Duplicate(char),
    #[error("glyph {glyph:?} at position {position} is not in the alphabet")]
    UnknownGlyph { glyph: char, position: usize },
    #[error("symbol index {0} is out of range for the alphabet")]
    BadIndex(u8),
}

/// An ordered list of distinct one-character glyphs.
///
/// The index of a glyph never changes once the alphabet is built.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    glyphs: [u8; MAX_SYMBOLS],
    size: u8,
}

impl Alphabet {
    /// `0`, `1`, `#`, `2`.
    pub const STANDARD: Alphabet = Alphabet {
        glyphs: *b"01#2",
        size: 4,
    };

    pub fn new(glyphs: &str) -> Result<Self, AlphabetError> {
        let chars: Vec<char> = glyphs.chars().collect();
        if chars.is_empty() || chars.len() > MAX_SYMBOLS {
            return Err(AlphabetError::BadSize(chars.len()));
        }
        let mut out = [0u8; MAX_SYMBOLS];
        for (i, &c) in chars.iter().enumerate() {
            if !c.is_ascii_graphic() {
                return Err(AlphabetError::Invisible(c));
            }
            if chars[..i].contains(&c) {
                return Err(AlphabetError::Duplicate(c));
            }
            out[i] = c as u8;
        }
        Ok(Alphabet {
            glyphs: out,
            size: chars.len() as u8,
        })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn glyph(&self, index: u8) -> char {
        self.glyphs[index as usize] as char
    }

    pub fn index_of(&self, glyph: char) -> Option<u8> {
        if !glyph.is_ascii() {
            return None;
        }
        self.glyphs[..self.size()]
            .iter()
            .position(|&g| g == glyph as u8)
            .map(|i| i as u8)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::STANDARD
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.size).map(|i| self.glyph(i)).collect();
        write!(f, "Alphabet({s:?})")
    }
}

/// A finite word: a sequence of symbol indices tied to an alphabet.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    alphabet: Alphabet,
    data: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Builds a word over `alphabet` from raw indices.
    pub fn from_indices(alphabet: Alphabet, data: Vec<u8>) -> Result<Self, AlphabetError> {
        if let Some(&bad) = data.iter().find(|&&s| s as usize >= alphabet.size()) {
            return Err(AlphabetError::BadIndex(bad));
        }
        Ok(Word { alphabet, data })
    }

    /// Builds a word over the standard alphabet. Indices must be `< 4`.
    pub fn from_symbols(data: Vec<u8>) -> Self {
        Word::from_indices(Alphabet::STANDARD, data).expect("index outside the standard alphabet")
    }

    /// Parses glyphs using `alphabet`.
    pub fn parse_with(alphabet: Alphabet, text: &str) -> Result<Self, AlphabetError> {
        let data = text
            .chars()
            .enumerate()
            .map(|(position, glyph)| {
                alphabet
                    .index_of(glyph)
                    .ok_or(AlphabetError::UnknownGlyph { glyph, position })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { alphabet, data })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.data
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.data
    }

    pub fn factor(&self, range: Range<usize>) -> Word {
        Word {
            alphabet: self.alphabet,
            data: self.data[range].to_vec(),
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.factor(0..len.min(self.len()))
    }

    pub fn suffix(&self, len: usize) -> Word {
        let len = len.min(self.len());
        self.factor(self.len() - len..self.len())
    }

    /// Concatenation. Both words must share an alphabet.
    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(
            self.alphabet, other.alphabet,
            "concatenating words over different alphabets"
        );
        let mut data = Vec::with_capacity(self.len() + other.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Word {
            alphabet: self.alphabet,
            data,
        }
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            data: self.data.repeat(times),
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.data.starts_with(&self.data)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.data {
            write!(f, "{}", self.alphabet.glyph(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = AlphabetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse_with(Alphabet::STANDARD, s)
    }
}

/// Shorthand for parsing a word over the standard alphabet; panics on bad glyphs.
pub fn word(text: &str) -> Word {
    text.parse().expect("invalid glyph in word literal")
}
