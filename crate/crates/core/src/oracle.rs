//! Finite-depth ground truth.
//!
//! A [`PrefixTable`] lists every length-`K` prefix of a set. The operators
//! are transcribed directly from their word-level definitions, with no
//! automaton involved, so they can arbitrate any disagreement with the
//! presentation-level constructions. Every operation returns the largest
//! depth its inputs fully determine.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::presentation::{AsCanonical, Limits};
use crate::word::{Alphabet, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTable {
    alphabet: Alphabet,
    depth: usize,
    words: BTreeSet<Vec<Symbol>>,
}

impl PrefixTable {
    pub fn new(alphabet: Alphabet, depth: usize, words: BTreeSet<Vec<Symbol>>) -> Result<Self> {
        if let Some(w) = words.iter().find(|w| w.len() != depth) {
            return Err(Error::DepthMismatch(format!("word of length {} in a depth-{depth} table", w.len())));
        }
        for w in &words {
            alphabet.check_symbols(w)?;
        }
        Ok(PrefixTable { alphabet, depth, words })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &BTreeSet<Vec<Symbol>> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.words.contains(word)
    }

    /// Sorted, newline-delimited words.
    pub fn to_text(&self) -> String {
        self.words.iter().map(|w| self.alphabet.format_finite(w) + "\n").collect()
    }

    pub fn truncate(&self, depth: usize) -> Result<PrefixTable> {
        if depth > self.depth {
            return Err(Error::DepthMismatch(format!("cannot extend depth {} to {depth}", self.depth)));
        }
        let words = self.words.iter().map(|w| w[..depth].to_vec()).collect();
        Ok(PrefixTable { alphabet: self.alphabet.clone(), depth, words })
    }

    fn same_shape(&self, other: &PrefixTable) -> Result<()> {
        self.alphabet.ensure_same(&other.alphabet)?;
        if self.depth != other.depth {
            return Err(Error::DepthMismatch(format!("depths {} and {}", self.depth, other.depth)));
        }
        Ok(())
    }

    pub fn union(&self, other: &PrefixTable) -> Result<PrefixTable> {
        self.same_shape(other)?;
        let words = self.words.union(&other.words).cloned().collect();
        Ok(PrefixTable { alphabet: self.alphabet.clone(), depth: self.depth, words })
    }

    /// Intersection of tables. The prefixes of `X ∩ Y` are in general only a
    /// subset of this; the two agree when the depth-`K` words of the
    /// intersection are all extendable.
    pub fn intersect(&self, other: &PrefixTable) -> Result<PrefixTable> {
        self.same_shape(other)?;
        let words = self.words.intersection(&other.words).cloned().collect();
        Ok(PrefixTable { alphabet: self.alphabet.clone(), depth: self.depth, words })
    }

    pub fn is_subset(&self, other: &PrefixTable) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.words.is_subset(&other.words))
    }

    /// Depth of `ψ_{i,n}` applied to a depth-`K` table.
    pub fn decimated_depth(depth: usize, offset: usize, modulus: usize) -> usize {
        if depth > offset {
            (depth - offset - 1) / modulus + 1
        } else {
            0
        }
    }

    pub fn decimate(&self, offset: usize, modulus: usize) -> Result<PrefixTable> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be at least 1".into()));
        }
        let depth = Self::decimated_depth(self.depth, offset, modulus);
        let words = self.words.iter().map(|w| (0..depth).map(|j| w[offset + j * modulus]).collect()).collect();
        Ok(PrefixTable { alphabet: self.alphabet.clone(), depth, words })
    }

    /// All cyclic interleavings of one word from each table (equal depths);
    /// output depth is `n·K`.
    pub fn interleave(tables: &[PrefixTable]) -> Result<PrefixTable> {
        let first = tables.first().ok_or_else(|| Error::InvalidArgument("interleave needs a table".into()))?;
        for t in &tables[1..] {
            first.same_shape(t)?;
        }
        let n = tables.len();
        let depth = first.depth;
        let mut out: BTreeSet<Vec<Symbol>> = BTreeSet::new();
        let lists: Vec<Vec<&Vec<Symbol>>> = tables.iter().map(|t| t.words.iter().collect()).collect();
        if lists.iter().any(|l| l.is_empty()) {
            return Ok(PrefixTable { alphabet: first.alphabet.clone(), depth: n * depth, words: out });
        }
        let mut choice = vec![0usize; n];
        loop {
            let word = (0..n * depth).map(|p| lists[p % n][choice[p % n]][p / n]).collect();
            out.insert(word);
            // odometer over choices
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(PrefixTable { alphabet: first.alphabet.clone(), depth: n * depth, words: out });
                }
                choice[i] += 1;
                if choice[i] < lists[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Depth-`n⌊K/n⌋` words whose residue-class subsequences each occur
    /// among the decimated prefixes of this table.
    pub fn closure(&self, modulus: usize) -> Result<PrefixTable> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be at least 1".into()));
        }
        let m = self.depth / modulus;
        let parts = (0..modulus).map(|i| self.decimate(i, modulus)?.truncate(m)).collect::<Result<Vec<_>>>()?;
        PrefixTable::interleave(&parts)
    }

    pub fn shift(&self, steps: usize) -> Result<PrefixTable> {
        if steps > self.depth {
            return Err(Error::DepthMismatch(format!("cannot shift a depth-{} table by {steps}", self.depth)));
        }
        let words = self.words.iter().map(|w| w[steps..].to_vec()).collect();
        Ok(PrefixTable { alphabet: self.alphabet.clone(), depth: self.depth - steps, words })
    }

    /// Letters occurring at each position.
    pub fn position_alphabets(&self) -> Vec<BTreeSet<Symbol>> {
        (0..self.depth).map(|k| self.words.iter().map(|w| w[k]).collect()).collect()
    }

    /// Product of the position alphabets, the depth-`K` shadow of the product hull.
    pub fn hull(&self) -> PrefixTable {
        let positions = self.position_alphabets().into_iter().map(|s| s.into_iter().collect()).collect();
        let g = ProductGenerator { alphabet: self.alphabet.clone(), positions };
        g.table(usize::MAX).expect("hull within budget")
    }
}

/// All length-`depth` prefixes of a presented set.
pub fn table_of(p: impl AsCanonical, depth: usize) -> Result<PrefixTable> {
    table_of_within(p, depth, &Limits::default())
}

pub fn table_of_within(p: impl AsCanonical, depth: usize, limits: &Limits) -> Result<PrefixTable> {
    let p = p.canonical_within(limits)?;
    let alphabet = p.alphabet().clone();
    let mut words = BTreeSet::new();
    if !p.is_empty() {
        let mut stack: Vec<(u32, Vec<Symbol>)> = vec![(0, Vec::new())];
        while let Some((state, word)) = stack.pop() {
            if word.len() == depth {
                if words.len() >= limits.max_prefixes {
                    return Err(Error::SizeExceeded { limit: limits.max_prefixes });
                }
                words.insert(word);
                continue;
            }
            for a in alphabet.all() {
                if let Some(t) = p.next(state, a) {
                    let mut w = word.clone();
                    w.push(a);
                    stack.push((t, w));
                }
            }
        }
    }
    Ok(PrefixTable { alphabet, depth, words })
}

/// Position-indexed product set `∏ A_k`, listed for positions `0..K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductGenerator {
    alphabet: Alphabet,
    positions: Vec<Vec<Symbol>>,
}

impl ProductGenerator {
    pub fn new(alphabet: Alphabet, positions: Vec<Vec<Symbol>>) -> Result<Self> {
        for (k, letters) in positions.iter().enumerate() {
            if letters.is_empty() {
                return Err(Error::InvalidArgument(format!("position {k} has no letters")));
            }
            alphabet.check_symbols(letters)?;
        }
        Ok(ProductGenerator { alphabet, positions })
    }

    /// Binary product frozen to `{0}` on positions `0..4` and on every
    /// `[4^m, 2·4^m)`, free on every `[2·4^m, 4^{m+1})`.
    pub fn dyadic_oscillating(depth: usize) -> Self {
        let positions = (0..depth).map(|j| if Self::odd_octave(j) { vec![0, 1] } else { vec![0] }).collect();
        ProductGenerator { alphabet: Alphabet::binary(), positions }
    }

    /// Pointwise complement of [`ProductGenerator::dyadic_oscillating`]:
    /// free exactly where the former is frozen.
    pub fn dyadic_oscillating_complement(depth: usize) -> Self {
        let positions = (0..depth).map(|j| if Self::odd_octave(j) { vec![0] } else { vec![0, 1] }).collect();
        ProductGenerator { alphabet: Alphabet::binary(), positions }
    }

    fn odd_octave(j: usize) -> bool {
        j >= 4 && (usize::BITS - 1 - j.leading_zeros()) % 2 == 1
    }

    pub fn depth(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Vec<Symbol>] {
        &self.positions
    }

    /// Cyclic interleaving of product sets is the product of interleaved
    /// position alphabets.
    pub fn interleave(gens: &[ProductGenerator]) -> Result<ProductGenerator> {
        let first = gens.first().ok_or_else(|| Error::InvalidArgument("interleave needs a generator".into()))?;
        for g in &gens[1..] {
            first.alphabet.ensure_same(&g.alphabet)?;
        }
        let n = gens.len();
        let depth = gens.iter().map(|g| g.depth()).min().unwrap_or(0);
        let positions = (0..n * depth).map(|p| gens[p % n].positions[p / n].clone()).collect();
        Ok(ProductGenerator { alphabet: first.alphabet.clone(), positions })
    }

    /// `N_k^I` of the product, without enumeration.
    pub fn prefix_count(&self, k: usize) -> BigUint {
        self.positions[..k].iter().fold(BigUint::from(1u8), |acc, l| acc * BigUint::from(l.len()))
    }

    /// `log2 N_k^I`.
    pub fn log2_prefix_count(&self, k: usize) -> f64 {
        self.positions[..k].iter().map(|l| (l.len() as f64).log2()).sum()
    }

    pub fn table(&self, budget: usize) -> Result<PrefixTable> {
        let mut words: Vec<Vec<Symbol>> = vec![Vec::new()];
        for letters in &self.positions {
            if words.len().saturating_mul(letters.len()) > budget {
                return Err(Error::SizeExceeded { limit: budget });
            }
            words = words
                .into_iter()
                .flat_map(|w| {
                    letters.iter().map(move |&a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        Ok(PrefixTable { alphabet: self.alphabet.clone(), depth: self.depth(), words: words.into_iter().collect() })
    }
}
