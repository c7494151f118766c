//! Word generators: morphism fixed points, characteristic Sturmian words,
//! periodic literals and file-backed words.
//!
//! A generator is described by a [`WordSpec`] string:
//!
//! ```text
//! fixed:<letter>=<word>(,<letter>=<word>)*@<seed-letter>
//! cf:<a1>(,<ai>)*(;<p1>(,<pj>)*)
//! lit:<word>
//! file:<path>
//! ```
//!
//! `fixed:0=01,1=0@0` is the Fibonacci word, `fixed:0=01,1=10@0` the
//! Thue-Morse word. In `cf:` the list before `;` is the preperiod of the
//! continued-fraction slope `[0; a1, a2, ...]` and the list after it is the
//! period.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::word::{Alphabet, AlphabetError, Word, MAX_SYMBOLS};

/// Default cap on generated prefix length.
pub const DEFAULT_PREFIX_CAP: usize = 1 << 28;

#[derive(Debug, Error)]
pub enum WordError {
    #[error("spec parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("morphism is not prolongable on {seed:?}: its image must start with the seed letter")]
    NotProlongable { seed: char },
    #[error("morphism image of seed {seed:?} has length 1, so the fixed point is finite")]
    NotGrowing { seed: char },
    #[error("letter {0:?} occurs in an image but has no image of its own")]
    UndefinedLetter(char),
    #[error("invalid continued-fraction directive: {0}")]
    Directive(String),
    #[error("prefix of length {requested} exceeds the resource cap of {cap}")]
    ResourceLimit { requested: usize, cap: usize },
    #[error("word has only {available} symbols, {requested} requested")]
    Exhausted { available: usize, requested: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

impl WordError {
    fn parse(position: usize, message: impl Into<String>) -> Self {
        WordError::Parse {
            position,
            message: message.into(),
        }
    }
}

/// Partial quotients of a slope `[0; a1, a2, ...]`: a preperiod followed by a
/// period repeated forever. An empty period makes the directive finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfDirective {
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl CfDirective {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self, WordError> {
        if preperiod.iter().chain(&period).any(|&a| a == 0) {
            return Err(WordError::Directive("partial quotients must be >= 1".into()));
        }
        Ok(CfDirective { preperiod, period })
    }

    pub fn periodic(period: Vec<u64>) -> Result<Self, WordError> {
        CfDirective::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_eventually_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Partial quotient `a_index`, 1-based. `None` past the end of a finite directive.
    pub fn quotient(&self, index: usize) -> Option<u64> {
        assert!(index >= 1, "partial quotients are 1-indexed");
        let i = index - 1;
        if i < self.preperiod.len() {
            Some(self.preperiod[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.preperiod.len()) % self.period.len()])
        }
    }

    /// Parses `p1,p2;q1,q2` (preperiod `;` period). With `allow_empty_preperiod`
    /// the preperiod list may be empty, as in `;1`.
    pub fn parse(text: &str, allow_empty_preperiod: bool) -> Result<Self, WordError> {
        Self::parse_at(text, 0, allow_empty_preperiod)
    }

    fn parse_at(text: &str, base: usize, allow_empty_preperiod: bool) -> Result<Self, WordError> {
        let (pre_text, period_text) = match text.find(';') {
            Some(i) => (&text[..i], Some((i + 1, &text[i + 1..]))),
            None => (text, None),
        };
        let preperiod = if pre_text.is_empty() && allow_empty_preperiod {
            Vec::new()
        } else {
            parse_quotients(pre_text, base)?
        };
        let period = match period_text {
            Some((offset, body)) => parse_quotients(body, base + offset)?,
            None => Vec::new(),
        };
        if preperiod.is_empty() && period.is_empty() {
            return Err(WordError::parse(base, "empty continued-fraction directive"));
        }
        CfDirective::new(preperiod, period)
    }
}

fn parse_quotients(text: &str, base: usize) -> Result<Vec<u64>, WordError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let value: u64 = item
            .parse()
            .map_err(|_| WordError::parse(base + offset, format!("expected a positive integer, found {item:?}")))?;
        if value == 0 {
            return Err(WordError::parse(base + offset, "partial quotients must be >= 1"));
        }
        out.push(value);
        offset += item.len() + 1;
    }
    Ok(out)
}

impl fmt::Display for CfDirective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}", join(&self.preperiod))?;
        if !self.period.is_empty() {
            write!(f, ";{}", join(&self.period))?;
        }
        Ok(())
    }
}

/// Parsed description of an infinite (or file-backed finite) word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordSpec {
    /// Fixed point of a morphism, iterated from a seed letter.
    Fixed { images: Vec<(u8, Word)>, seed: u8 },
    /// Characteristic Sturmian word of a continued-fraction slope.
    Cf(CfDirective),
    /// The literal repeated forever.
    Literal(Word),
    /// Raw glyphs read from a file.
    File(PathBuf),
}

impl WordSpec {
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let (scheme, body) = text
            .split_once(':')
            .ok_or_else(|| WordError::parse(0, "expected <scheme>:<body>"))?;
        let base = scheme.len() + 1;
        match scheme {
            "fixed" => parse_fixed(body, base),
            "cf" => Ok(WordSpec::Cf(CfDirective::parse_at(body, base, false)?)),
            "lit" => {
                if body.is_empty() {
                    return Err(WordError::parse(base, "literal must be nonempty"));
                }
                Ok(WordSpec::Literal(parse_word(body, base)?))
            }
            "file" => {
                if body.is_empty() {
                    return Err(WordError::parse(base, "empty path"));
                }
                Ok(WordSpec::File(PathBuf::from(body)))
            }
            _ => Err(WordError::parse(0, format!("unknown scheme {scheme:?}"))),
        }
    }
}

impl std::str::FromStr for WordSpec {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WordSpec::parse(s)
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Fixed { images, seed } => {
                let rules: Vec<String> = images
                    .iter()
                    .map(|(letter, image)| format!("{}={}", Alphabet::STANDARD.glyph(*letter), image))
                    .collect();
                write!(f, "fixed:{}@{}", rules.join(","), Alphabet::STANDARD.glyph(*seed))
            }
            WordSpec::Cf(cf) => write!(f, "cf:{cf}"),
            WordSpec::Literal(w) => write!(f, "lit:{w}"),
            WordSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn parse_word(text: &str, base: usize) -> Result<Word, WordError> {
    Word::parse_with(Alphabet::STANDARD, text).map_err(|e| match e {
        AlphabetError::UnknownGlyph { glyph, position } => {
            WordError::parse(base + position, format!("unknown glyph {glyph:?}"))
        }
        other => other.into(),
    })
}

fn parse_letter(text: &str, base: usize) -> Result<u8, WordError> {
    let mut chars = text.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Alphabet::STANDARD
            .index_of(c)
            .ok_or_else(|| WordError::parse(base, format!("unknown letter {c:?}"))),
        _ => Err(WordError::parse(
            base,
            format!("expected a single letter, found {text:?}"),
        )),
    }
}

fn parse_fixed(body: &str, base: usize) -> Result<WordSpec, WordError> {
    let at = body
        .rfind('@')
        .ok_or_else(|| WordError::parse(base + body.len(), "missing @<seed-letter>"))?;
    let seed = parse_letter(&body[at + 1..], base + at + 1)?;
    let mut images: Vec<(u8, Word)> = Vec::new();
    let mut offset = 0;
    for rule in body[..at].split(',') {
        let pos = base + offset;
        let (letter, image) = rule
            .split_once('=')
            .ok_or_else(|| WordError::parse(pos, "expected <letter>=<word>"))?;
        let letter = parse_letter(letter, pos)?;
        if image.is_empty() {
            return Err(WordError::parse(pos + 2, "image must be nonempty"));
        }
        if images.iter().any(|(l, _)| *l == letter) {
            return Err(WordError::parse(pos, "letter defined twice"));
        }
        images.push((letter, parse_word(image, pos + 2)?));
        offset += rule.len() + 1;
    }
    Ok(WordSpec::Fixed { images, seed })
}

#[derive(Clone, Debug)]
enum Source {
    Fixed {
        images: [Option<Vec<u8>>; MAX_SYMBOLS],
        cursor: usize,
    },
    Sturmian {
        cf: CfDirective,
        older: Vec<u8>,
        next_index: usize,
    },
    Periodic(Vec<u8>),
    Finite,
}

/// Restartable producer of prefixes of one infinite word.
///
/// Prefixes are cached, so `prefix(n)` followed by `prefix(n')` agree on
/// their overlap and only the missing tail is generated.
#[derive(Clone, Debug)]
pub struct WordGenerator {
    spec: WordSpec,
    source: Source,
    buffer: Vec<u8>,
    cap: usize,
}

/// Builds a generator for `spec`, validating the morphism or loading the file.
pub fn make_generator(spec: &WordSpec) -> Result<WordGenerator, WordError> {
    WordGenerator::new(spec.clone())
}

impl WordGenerator {
    pub fn new(spec: WordSpec) -> Result<Self, WordError> {
        let (source, buffer) = match &spec {
            WordSpec::Fixed { images, seed } => {
                let mut table: [Option<Vec<u8>>; MAX_SYMBOLS] = Default::default();
                for (letter, image) in images {
                    table[*letter as usize] = Some(image.symbols().to_vec());
                }
                for (_, image) in images {
                    for &s in image.symbols() {
                        if table[s as usize].is_none() {
                            return Err(WordError::UndefinedLetter(Alphabet::STANDARD.glyph(s)));
                        }
                    }
                }
                let seed_glyph = Alphabet::STANDARD.glyph(*seed);
                let seed_image = table[*seed as usize]
                    .clone()
                    .ok_or(WordError::UndefinedLetter(seed_glyph))?;
                if seed_image[0] != *seed {
                    return Err(WordError::NotProlongable { seed: seed_glyph });
                }
                if seed_image.len() < 2 {
                    return Err(WordError::NotGrowing { seed: seed_glyph });
                }
                (
                    Source::Fixed {
                        images: table,
                        cursor: 1,
                    },
                    seed_image,
                )
            }
            WordSpec::Cf(cf) => (
                Source::Sturmian {
                    cf: cf.clone(),
                    older: vec![1],
                    next_index: 1,
                },
                vec![0],
            ),
            WordSpec::Literal(w) => (Source::Periodic(w.symbols().to_vec()), Vec::new()),
            WordSpec::File(path) => {
                let bytes = std::fs::read(path).map_err(|source| WordError::Io {
                    path: path.clone(),
                    source,
                })?;
                let text = String::from_utf8_lossy(&bytes);
                let w = parse_word(text.trim_end(), 0)?;
                (Source::Finite, w.into_symbols())
            }
        };
        Ok(WordGenerator {
            spec,
            source,
            buffer,
            cap: DEFAULT_PREFIX_CAP,
        })
    }

    /// Replaces the resource cap on prefix length.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn spec(&self) -> &WordSpec {
        &self.spec
    }

    /// The length-`n` prefix.
    pub fn prefix(&mut self, n: usize) -> Result<Word, WordError> {
        if n > self.cap {
            return Err(WordError::ResourceLimit {
                requested: n,
                cap: self.cap,
            });
        }
        self.fill(n)?;
        Ok(Word::from_symbols(self.buffer[..n].to_vec()))
    }

    fn fill(&mut self, n: usize) -> Result<(), WordError> {
        if self.buffer.len() >= n {
            return Ok(());
        }
        match &mut self.source {
            Source::Fixed { images, cursor } => {
                // buffer = h(buffer[..cursor]); each step appends a whole image.
                while self.buffer.len() < n {
                    let letter = self.buffer[*cursor] as usize;
                    let image = images[letter].as_ref().expect("validated at construction");
                    self.buffer.extend_from_slice(image);
                    *cursor += 1;
                }
            }
            Source::Sturmian { cf, older, next_index } => {
                // t_k = t_{k-1}^{a_k} t_{k-2}; buffer holds t_{k-1}.
                while self.buffer.len() < n {
                    let Some(a) = cf.quotient(*next_index) else {
                        return Err(WordError::Exhausted {
                            available: self.buffer.len(),
                            requested: n,
                        });
                    };
                    let prev = self.buffer.clone();
                    let reps_needed = n.div_ceil(prev.len()) as u64;
                    let reps = a.min(reps_needed) as usize;
                    let mut next = prev.repeat(reps);
                    next.extend_from_slice(older);
                    *older = prev;
                    self.buffer = next;
                    *next_index += 1;
                }
            }
            Source::Periodic(lit) => {
                while self.buffer.len() < n {
                    self.buffer.extend_from_slice(lit);
                }
            }
            Source::Finite => {
                return Err(WordError::Exhausted {
                    available: self.buffer.len(),
                    requested: n,
                })
            }
        }
        Ok(())
    }
}

/// Convenience: prefix of length `n` of the word described by `spec`.
pub fn prefix_of(spec: &str, n: usize) -> Result<Word, WordError> {
    WordGenerator::new(WordSpec::parse(spec)?)?.prefix(n)
}

/// Length-`n` prefix of the characteristic Sturmian word of slope `[0; a1, a2, ...]`,
/// built by the standard-word recursion `t_{-1} = 1`, `t_0 = 0`,
/// `t_k = t_{k-1}^{a_k} t_{k-2}`.
pub fn standard_word(cf: &CfDirective, n: usize) -> Result<Word, WordError> {
    let mut gen = WordGenerator::new(WordSpec::Cf(cf.clone()))?.with_cap(usize::MAX);
    gen.prefix(n)
}

/// The Fibonacci word, fixed point of `0 -> 01, 1 -> 0`.
pub const FIBONACCI: &str = "fixed:0=01,1=0@0";
/// The Thue-Morse word, fixed point of `0 -> 01, 1 -> 10`.
pub const THUE_MORSE: &str = "fixed:0=01,1=10@0";
