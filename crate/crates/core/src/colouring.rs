//! Dense colourings of integer intervals, their canonical form and the text
//! file format.
//!
//! File format: a header line `lo hi r`, then a single line of `hi - lo + 1`
//! colour characters. Digits `1..9` are colour indices; letters map as
//! `R=1, B=2, G=3, P=4` followed by the remaining capitals in alphabetical
//! order. The serializer always writes digits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid colouring: {0}")]
    Invalid(String),
    #[error("{0} colours cannot be written in digit form")]
    TooManyColours(u8),
}

impl ColouringError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ColouringError::Parse { line, column, message: message.into() }
    }
}

/// Total map from `[lo, hi]` to colours `1..=r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscreteColouring {
    lo: u64,
    hi: u64,
    r: u8,
    colours: Vec<u8>,
}

const LETTER_ORDER: &str = "RBGPACDEFHIJKLMNOQSTUVWXYZ";

/// Decodes a colour line into indices; `Err((column, message))` on failure.
fn decode_line(line: &str) -> Result<Vec<u8>, (usize, String)> {
    let chars: Vec<char> = line.chars().collect();
    let Some(&first) = chars.first() else {
        return Ok(Vec::new());
    };
    if first.is_ascii_digit() {
        return chars
            .iter()
            .enumerate()
            .map(|(i, &ch)| match ch.to_digit(10) {
                Some(d) if d >= 1 => Ok(d as u8),
                _ => Err((i + 1, format!("expected a colour digit 1..9, found {ch:?}"))),
            })
            .collect();
    }
    let mut present = [false; 26];
    for (i, &ch) in chars.iter().enumerate() {
        match LETTER_ORDER.find(ch) {
            Some(pos) => present[pos] = true,
            None => return Err((i + 1, format!("expected a colour letter A..Z, found {ch:?}"))),
        }
    }
    let mut rank = [0u8; 26];
    let mut next = 0u8;
    for (pos, &p) in present.iter().enumerate() {
        if p {
            next += 1;
            rank[pos] = next;
        }
    }
    Ok(chars.iter().map(|&ch| rank[LETTER_ORDER.find(ch).unwrap()]).collect())
}

/// Letter used for colour `c` when printing colourings as words.
pub fn letter_of_colour(c: u8) -> char {
    LETTER_ORDER.as_bytes().get(usize::from(c).wrapping_sub(1)).map_or('?', |&b| b as char)
}

impl DiscreteColouring {
    pub fn new(lo: u64, r: u8, colours: Vec<u8>) -> Result<Self, ColouringError> {
        if lo < 1 {
            return Err(ColouringError::Invalid("lower end must be at least 1".into()));
        }
        if colours.is_empty() {
            return Err(ColouringError::Invalid("empty colouring".into()));
        }
        if r < 1 {
            return Err(ColouringError::Invalid("need at least one colour".into()));
        }
        if let Some((i, &c)) = colours.iter().enumerate().find(|(_, &c)| c < 1 || c > r) {
            return Err(ColouringError::Invalid(format!(
                "colour {c} of element {} outside 1..={r}",
                lo + i as u64
            )));
        }
        let hi = lo + colours.len() as u64 - 1;
        Ok(Self { lo, hi, r, colours })
    }

    /// Builds a colouring from consecutive runs `(from, to, colour)` that tile
    /// `[lo, hi]`.
    pub fn from_runs(lo: u64, hi: u64, r: u8, runs: &[(u64, u64, u8)]) -> Result<Self, ColouringError> {
        let mut colours = Vec::with_capacity((hi + 1 - lo) as usize);
        let mut next = lo;
        for &(a, b, c) in runs {
            if a != next || b < a {
                return Err(ColouringError::Invalid(format!("run [{a}, {b}] does not continue at {next}")));
            }
            colours.extend(std::iter::repeat_n(c, (b - a + 1) as usize));
            next = b + 1;
        }
        if next != hi + 1 {
            return Err(ColouringError::Invalid(format!("runs end at {} instead of {hi}", next - 1)));
        }
        Self::new(lo, r, colours)
    }

    /// Parses a word such as `RBBR` as a colouring of `[lo, lo + len - 1]`.
    pub fn from_word(lo: u64, r: u8, word: &str) -> Result<Self, ColouringError> {
        let colours = decode_line(word).map_err(|(col, msg)| ColouringError::at(1, col, msg))?;
        Self::new(lo, r, colours)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colours(&self) -> &[u8] {
        &self.colours
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && n <= self.hi
    }

    /// Colour of `n`. Panics outside `[lo, hi]`.
    #[inline]
    pub fn colour(&self, n: u64) -> u8 {
        self.colours[(n - self.lo) as usize]
    }

    pub fn get(&self, n: u64) -> Option<u8> {
        self.contains(n).then(|| self.colour(n))
    }

    /// Number of distinct colours actually used.
    pub fn used_colours(&self) -> u8 {
        let mut seen = [false; 256];
        self.colours.iter().for_each(|&c| seen[c as usize] = true);
        seen.iter().filter(|&&s| s).count() as u8
    }

    /// Maximal constant runs `(from, to, colour)` in increasing order.
    pub fn runs(&self) -> Vec<(u64, u64, u8)> {
        let mut out: Vec<(u64, u64, u8)> = Vec::new();
        for (i, &c) in self.colours.iter().enumerate() {
            let n = self.lo + i as u64;
            match out.last_mut() {
                Some(last) if last.2 == c => last.1 = n,
                _ => out.push((n, n, c)),
            }
        }
        out
    }

    /// Restriction to `[lo, hi]`, which must lie inside the domain.
    pub fn restrict(&self, lo: u64, hi: u64) -> Result<Self, ColouringError> {
        if lo < self.lo || hi > self.hi || hi < lo {
            return Err(ColouringError::Invalid(format!(
                "[{lo}, {hi}] is not inside [{}, {}]",
                self.lo, self.hi
            )));
        }
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Self::new(lo, self.r, self.colours[a..=b].to_vec())
    }

    /// Recolours by `perm[c - 1]`.
    pub fn permuted(&self, perm: &[u8]) -> Result<Self, ColouringError> {
        let colours = self.colours.iter().map(|&c| perm[c as usize - 1]).collect();
        Self::new(self.lo, self.r, colours)
    }

    /// Letters `R, B, G, P, ...` for each element.
    pub fn to_word(&self) -> String {
        self.colours.iter().map(|&c| letter_of_colour(c)).collect()
    }

    /// Text form in digit notation, terminated by a newline.
    pub fn to_text(&self) -> Result<String, ColouringError> {
        if self.r > 9 {
            return Err(ColouringError::TooManyColours(self.r));
        }
        let body: String = self.colours.iter().map(|&c| char::from(b'0' + c)).collect();
        Ok(format!("{} {} {}\n{}\n", self.lo, self.hi, self.r, body))
    }
}

impl fmt::Display for DiscreteColouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] {}", self.lo, self.hi, self.to_word())
    }
}

/// Renames colours so that their first occurrences read `1, 2, 3, ...`.
pub fn canonicalize(c: &DiscreteColouring) -> DiscreteColouring {
    let mut map = [0u8; 256];
    let mut next = 0u8;
    let colours = c
        .colours
        .iter()
        .map(|&x| {
            if map[x as usize] == 0 {
                next += 1;
                map[x as usize] = next;
            }
            map[x as usize]
        })
        .collect();
    DiscreteColouring { lo: c.lo, hi: c.hi, r: c.r, colours }
}

/// Parses the text format described in the module docs.
pub fn parse_colouring(text: &str) -> Result<DiscreteColouring, ColouringError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ColouringError::at(1, 1, "missing header"))?;
    let mut fields = Vec::new();
    let mut col = 1;
    for tok in header.split(' ') {
        if !tok.is_empty() {
            let v = tok
                .parse::<u64>()
                .map_err(|_| ColouringError::at(1, col, format!("expected a decimal integer, found {tok:?}")))?;
            fields.push((v, col));
        }
        col += tok.chars().count() + 1;
    }
    if fields.len() != 3 {
        return Err(ColouringError::at(1, 1, format!("header needs `lo hi r`, found {} fields", fields.len())));
    }
    let (lo, hi, r) = (fields[0].0, fields[1].0, fields[2].0);
    if lo < 1 {
        return Err(ColouringError::at(1, fields[0].1, "lo must be at least 1"));
    }
    if hi < lo {
        return Err(ColouringError::at(1, fields[1].1, "hi must be at least lo"));
    }
    if r < 1 || r > LETTER_ORDER.len() as u64 {
        return Err(ColouringError::at(1, fields[2].1, format!("number of colours {r} out of range")));
    }
    let r = r as u8;
    let body = lines.next().ok_or_else(|| ColouringError::at(2, 1, "missing colour line"))?;
    let colours = decode_line(body).map_err(|(col, msg)| ColouringError::at(2, col, msg))?;
    if let Some(i) = colours.iter().position(|&c| c > r) {
        return Err(ColouringError::at(2, i + 1, format!("colour {} exceeds r = {r}", colours[i])));
    }
    let expected = hi - lo + 1;
    if colours.len() as u64 != expected {
        return Err(ColouringError::at(
            2,
            colours.len() + 1,
            format!("length mismatch: expected {expected} colours, found {}", colours.len()),
        ));
    }
    if let Some((n, extra)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
        return Err(ColouringError::at(n + 3, 1, format!("unexpected trailing content {extra:?}")));
    }
    DiscreteColouring::new(lo, r, colours)
}

impl FromStr for DiscreteColouring {
    type Err = ColouringError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_colouring(s)
    }
}
