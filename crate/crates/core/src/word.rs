//! Alphabets and eventually periodic infinite words `u·v^∞`.
//!
//! Words are always stored in canonical form: the period is primitive and the
//! preperiod is as short as possible, so two words denote the same sequence
//! exactly when they are structurally equal.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a symbol inside its [`Alphabet`].
pub type Symbol = u8;

/// Largest supported alphabet.
pub const MAX_SYMBOLS: usize = 256;

/// Ordered list of distinct symbol tokens.
///
/// Tokens are strings rather than characters so block alphabets such as
/// `{"00", "11"}` can be expressed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Arc<[String]>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if symbols.len() > MAX_SYMBOLS {
            return Err(Error::InvalidAlphabet(format!("{} symbols, at most {MAX_SYMBOLS} supported", symbols.len())));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
                return Err(Error::InvalidAlphabet(format!("bad symbol token {s:?}")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols: symbols.into() })
    }

    /// One symbol per character, e.g. `Alphabet::from_chars("01")`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(String::from))
    }

    /// The alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet::from_chars("01").expect("valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn token(&self, sym: Symbol) -> &str {
        &self.symbols[sym as usize]
    }

    pub fn index_of(&self, token: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == token).map(|i| i as Symbol)
    }

    pub fn all(&self) -> impl Iterator<Item = Symbol> {
        (0..self.len()).map(|i| i as Symbol)
    }

    /// True when every token is a single character, in which case words are
    /// written without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch { left: self.symbols.to_vec(), right: other.symbols.to_vec() })
        }
    }

    /// Parse a finite word. Compact alphabets read one character per symbol;
    /// otherwise tokens are separated by whitespace or commas.
    pub fn parse_finite(&self, text: &str) -> Result<Vec<Symbol>> {
        let lookup = |tok: &str| self.index_of(tok).ok_or_else(|| Error::UnknownSymbol(tok.to_string()));
        if self.is_compact() {
            text.chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| lookup(c.encode_utf8(&mut [0u8; 4])))
                .collect()
        } else {
            text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(lookup).collect()
        }
    }

    pub fn format_finite(&self, word: &[Symbol]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        word.iter().map(|&s| self.token(s)).collect::<Vec<_>>().join(sep)
    }

    pub(crate) fn check_symbols(&self, word: &[Symbol]) -> Result<()> {
        match word.iter().find(|&&s| s as usize >= self.len()) {
            Some(&s) => Err(Error::UnknownSymbol(format!("#{s}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.symbols.iter()).finish()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.symbols.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let symbols = Vec::<String>::deserialize(d)?;
        Alphabet::new(symbols).map_err(serde::de::Error::custom)
    }
}

/// An infinite word `u·v^∞` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicWord {
    alphabet: Alphabet,
    preperiod: Vec<Symbol>,
    period: Vec<Symbol>,
}

impl EventuallyPeriodicWord {
    pub fn new(alphabet: Alphabet, preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be nonempty".into()));
        }
        alphabet.check_symbols(&preperiod)?;
        alphabet.check_symbols(&period)?;
        Ok(Self::canonical(alphabet, preperiod, period))
    }

    /// Parse the literal grammar `u(v)`, e.g. `01(10)` for `01·(10)^∞`.
    pub fn parse(alphabet: &Alphabet, literal: &str) -> Result<Self> {
        let syntax = |reason: &str| Error::WordSyntax { literal: literal.to_string(), reason: reason.into() };
        let trimmed = literal.trim();
        let open = trimmed.find('(').ok_or_else(|| syntax("missing '(' before the period"))?;
        let body = trimmed[open + 1..].strip_suffix(')').ok_or_else(|| syntax("period must end with ')'"))?;
        if body.contains('(') || body.contains(')') {
            return Err(syntax("nested parentheses"));
        }
        let preperiod = alphabet.parse_finite(&trimmed[..open])?;
        let period = alphabet.parse_finite(body)?;
        if period.is_empty() {
            return Err(syntax("empty period"));
        }
        Ok(Self::canonical(alphabet.clone(), preperiod, period))
    }

    fn canonical(alphabet: Alphabet, mut preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Self {
        let root = primitive_root_len(&period);
        let mut period = period[..root].to_vec();
        while let (Some(&u), Some(&v)) = (preperiod.last(), period.last()) {
            if u != v {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        EventuallyPeriodicWord { alphabet, preperiod, period }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn symbol_at(&self, k: usize) -> Symbol {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `len` symbols.
    pub fn prefix(&self, len: usize) -> Vec<Symbol> {
        (0..len).map(|k| self.symbol_at(k)).collect()
    }

    /// `ψ_{i,n}`: the symbols at positions `i, i+n, i+2n, …`.
    pub fn decimate(&self, offset: usize, modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be at least 1".into()));
        }
        let u = self.preperiod.len();
        let head = if offset >= u { 0 } else { (u - offset).div_ceil(modulus) };
        let cycle = self.period.len() / gcd(self.period.len(), modulus);
        let at = |j: usize| self.symbol_at(offset + j * modulus);
        let preperiod = (0..head).map(at).collect();
        let period = (head..head + cycle).map(at).collect();
        Ok(Self::canonical(self.alphabet.clone(), preperiod, period))
    }

    /// Cyclic interleaving: output position `i + jn` carries symbol `j` of `words[i]`.
    pub fn interleave(words: &[EventuallyPeriodicWord]) -> Result<Self> {
        let first = words.first().ok_or_else(|| Error::InvalidArgument("interleave needs at least one word".into()))?;
        for w in &words[1..] {
            first.alphabet.ensure_same(&w.alphabet)?;
        }
        let n = words.len();
        let head = words.iter().map(|w| w.preperiod.len()).max().unwrap_or(0);
        let cycle = words.iter().fold(1, |acc, w| lcm(acc, w.period.len()));
        let at = |k: usize| words[k % n].symbol_at(k / n);
        let preperiod = (0..n * head).map(at).collect();
        let period = (n * head..n * (head + cycle)).map(at).collect();
        Ok(Self::canonical(first.alphabet.clone(), preperiod, period))
    }

    /// Drop the first `steps` symbols.
    pub fn shift(&self, steps: usize) -> Self {
        let u = self.preperiod.len();
        if steps <= u {
            return Self::canonical(self.alphabet.clone(), self.preperiod[steps..].to_vec(), self.period.clone());
        }
        let mut period = self.period.clone();
        let turn = (steps - u) % period.len();
        period.rotate_left(turn);
        Self::canonical(self.alphabet.clone(), Vec::new(), period)
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = self.alphabet.format_finite(&self.preperiod);
        let per = self.alphabet.format_finite(&self.period);
        if self.alphabet.is_compact() || pre.is_empty() {
            write!(f, "{pre}({per})")
        } else {
            write!(f, "{pre} ({per})")
        }
    }
}

impl fmt::Debug for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn primitive_root_len(v: &[Symbol]) -> usize {
    let n = v.len();
    (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|k| v[k] == v[k - d])).unwrap_or(n)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
