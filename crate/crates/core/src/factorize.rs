//! Interleaving-closure spectra `N(X)` and `N_self(X)`, product hulls,
//! spectrum construction and iterated factorization trees.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presentation::{self, chain_into_cycle, from_words, AsCanonical, CanonicalForm, Limits};
use crate::transform::{self, principal_decimations};
use crate::word::{gcd, lcm, Alphabet, EventuallyPeriodicWord, Symbol};

pub const DEFAULT_CAP: usize = 64;
pub const DEFAULT_TREE_DEPTH: usize = 8;

/// Moduli re-checked directly when a set equals its product hull.
const HULL_RECHECK: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spectrum {
    /// Every positive integer.
    All,
    /// The divisors of the maximum element.
    Finite(BTreeSet<usize>),
}

impl Spectrum {
    pub fn contains(&self, n: usize) -> bool {
        match self {
            Spectrum::All => n >= 1,
            Spectrum::Finite(set) => set.contains(&n),
        }
    }

    /// Largest element, `None` for [`Spectrum::All`].
    pub fn max(&self) -> Option<usize> {
        match self {
            Spectrum::All => None,
            Spectrum::Finite(set) => set.iter().next_back().copied(),
        }
    }

    pub fn to_json_value(&self) -> Value {
        match self {
            Spectrum::All => json!("all"),
            Spectrum::Finite(set) => json!(set.iter().collect::<Vec<_>>()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `X` equals its product hull, hence is infinitely factorizable.
    ProductHullEquality,
    /// `witness` is letterwise allowed by the hull but is not a prefix of `X`,
    /// so no modulus above `bound = |witness| − 1` factors `X`.
    MissingConfiguration { witness: Vec<Symbol>, bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub spectrum: Spectrum,
    pub certificate: Certificate,
    /// Directly decided moduli.
    pub per_n: BTreeMap<usize, bool>,
}

impl SpectrumReport {
    pub fn to_json_value(&self, alphabet: &Alphabet) -> Value {
        let certificate = match &self.certificate {
            Certificate::ProductHullEquality => json!({ "kind": "ProductHullEquality" }),
            Certificate::MissingConfiguration { witness, bound } => json!({
                "kind": "MissingConfiguration",
                "witness": witness.iter().map(|&s| alphabet.token(s)).collect::<Vec<_>>(),
                "bound": bound,
            }),
        };
        let per_n: serde_json::Map<String, Value> =
            self.per_n.iter().map(|(n, ok)| (n.to_string(), Value::Bool(*ok))).collect();
        json!({
            "spectrum": self.spectrum.to_json_value(),
            "certificate": certificate,
            "per_n": per_n,
        })
    }
}

pub fn divisors(n: usize) -> BTreeSet<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Position alphabets `A_k` as a finite chain followed by a repeating cycle.
fn position_alphabets(p: &CanonicalForm) -> (Vec<Vec<Symbol>>, Vec<Vec<Symbol>>) {
    let dfa = p.dfa();
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut letters: Vec<Vec<Symbol>> = Vec::new();
    let mut layer = vec![0u32];
    loop {
        if let Some(&first) = seen.get(&layer) {
            let cycle = letters.split_off(first);
            return (letters, cycle);
        }
        seen.insert(layer.clone(), letters.len());
        let allowed: Vec<Symbol> =
            p.alphabet().all().filter(|&a| layer.iter().any(|&s| dfa.next(s, a).is_some())).collect();
        letters.push(allowed);
        layer = dfa.successors(&layer);
    }
}

/// `∏ A_k` where `A_k` is the set of symbols occurring at position `k`.
pub fn product_hull(p: impl AsCanonical) -> Result<CanonicalForm> {
    let p = p.canonical()?;
    if p.is_empty() {
        return Ok(p.into_owned());
    }
    let (chain, cycle) = position_alphabets(&p);
    Ok(chain_into_cycle(p.alphabet(), &chain, &cycle))
}

/// For closed sets this is equivalent to `N(X)` being every positive integer.
pub fn is_infinitely_factorizable(p: impl AsCanonical) -> Result<bool> {
    let p = p.canonical()?;
    Ok(*p == product_hull(&*p)?)
}

pub fn spectrum(p: impl AsCanonical, cap: usize) -> Result<SpectrumReport> {
    spectrum_within(p, cap, &Limits::default())
}

pub fn spectrum_within(p: impl AsCanonical, cap: usize, limits: &Limits) -> Result<SpectrumReport> {
    let p = p.canonical_within(limits)?;
    if p.is_empty() {
        return Err(Error::EmptySet);
    }
    let hull = product_hull(&*p)?;
    let Some(witness) = presentation::difference_witness_within(&hull, &*p, limits)? else {
        let mut per_n = BTreeMap::new();
        for n in 1..=cap.min(HULL_RECHECK) {
            let closed = transform::is_closed_under(&*p, n, limits)?;
            if !closed {
                return Err(Error::Inconsistent(format!("hull-equal set is not closed under n = {n}")));
            }
            per_n.insert(n, closed);
        }
        return Ok(SpectrumReport { spectrum: Spectrum::All, certificate: Certificate::ProductHullEquality, per_n });
    };
    let bound = witness.len().saturating_sub(1);
    let mut per_n = BTreeMap::new();
    for n in 1..=bound.min(cap) {
        per_n.insert(n, transform::is_closed_under(&*p, n, limits)?);
    }
    if bound > cap {
        return Err(Error::BoundExceeded { bound, cap, partial: per_n });
    }
    let members: BTreeSet<usize> = per_n.iter().filter(|(_, &ok)| ok).map(|(&n, _)| n).collect();
    check_divisor_structure(&members)?;
    Ok(SpectrumReport {
        spectrum: Spectrum::Finite(members),
        certificate: Certificate::MissingConfiguration { witness, bound },
        per_n,
    })
}

/// A finite spectrum must be exactly the divisor set of its maximum.
fn check_divisor_structure(members: &BTreeSet<usize>) -> Result<()> {
    let n0 = *members.iter().next_back().ok_or_else(|| Error::Inconsistent("spectrum lacks 1".into()))?;
    if *members != divisors(n0) {
        return Err(Error::Inconsistent(format!("spectrum {members:?} is not the divisor set of {n0}")));
    }
    for &m in members {
        for &n in members {
            if !members.contains(&lcm(m, n)) {
                return Err(Error::Inconsistent(format!("spectrum {members:?} not closed under lcm({m}, {n})")));
            }
        }
    }
    Ok(())
}

fn decimations_all_equal(p: &CanonicalForm, n: usize, limits: &Limits) -> Result<bool> {
    let parts = principal_decimations(p, n, limits)?;
    Ok(parts.windows(2).all(|w| w[0] == w[1]))
}

pub fn self_spectrum(p: impl AsCanonical, cap: usize) -> Result<SpectrumReport> {
    self_spectrum_within(p, cap, &Limits::default())
}

/// `N_self(X)`: moduli `n ∈ N(X)` whose principal decimations coincide.
pub fn self_spectrum_within(p: impl AsCanonical, cap: usize, limits: &Limits) -> Result<SpectrumReport> {
    let p = p.canonical_within(limits)?;
    let full = spectrum_within(&*p, cap, limits)?;
    match &full.spectrum {
        Spectrum::Finite(members) => {
            let mut per_n = BTreeMap::new();
            for &n in full.per_n.keys() {
                let ok = members.contains(&n) && decimations_all_equal(&p, n, limits)?;
                per_n.insert(n, ok);
            }
            let selfs: BTreeSet<usize> = per_n.iter().filter(|(_, &ok)| ok).map(|(&n, _)| n).collect();
            check_divisor_structure(&selfs)?;
            Ok(SpectrumReport { spectrum: Spectrum::Finite(selfs), certificate: full.certificate, per_n })
        }
        Spectrum::All => {
            // X = ∏ A_k; all decimations at n agree iff A_k is constant on
            // every aligned block of length n, i.e. n divides every index
            // where the position alphabet changes.
            let (chain, cycle) = position_alphabets(&p);
            let at = |k: usize| {
                if k < chain.len() {
                    &chain[k]
                } else {
                    &cycle[(k - chain.len()) % cycle.len()]
                }
            };
            let horizon = chain.len() + 2 * cycle.len();
            let g = (1..=horizon).filter(|&k| at(k) != at(k - 1)).fold(0, gcd);
            let spectrum = if g == 0 { Spectrum::All } else { Spectrum::Finite(divisors(g)) };
            let mut per_n = BTreeMap::new();
            let checked = if g == 0 { cap.min(HULL_RECHECK) } else { cap.min(g + 2) };
            for n in 1..=checked {
                let ok = decimations_all_equal(&p, n, limits)?;
                if ok != spectrum.contains(n) {
                    return Err(Error::Inconsistent(format!("self-spectrum formula disagrees at n = {n}")));
                }
                per_n.insert(n, ok);
            }
            Ok(SpectrumReport { spectrum, certificate: full.certificate, per_n })
        }
    }
}

/// The set of all words whose period divides `n0`; its spectrum is
/// exactly the divisors of `n0`.
pub fn construct_with_spectrum(alphabet: &Alphabet, n0: usize) -> Result<CanonicalForm> {
    construct_with_spectrum_within(alphabet, n0, &Limits::default())
}

pub fn construct_with_spectrum_within(alphabet: &Alphabet, n0: usize, limits: &Limits) -> Result<CanonicalForm> {
    if alphabet.len() < 2 {
        return Err(Error::AlphabetTooSmall { needed: 2, actual: alphabet.len() });
    }
    if n0 == 0 {
        return Err(Error::InvalidArgument("n0 must be at least 1".into()));
    }
    let constants = alphabet
        .all()
        .map(|a| EventuallyPeriodicWord::new(alphabet.clone(), vec![], vec![a]))
        .collect::<Result<Vec<_>>>()?;
    let base = from_words(&constants)?;
    let copies: Vec<&CanonicalForm> = std::iter::repeat_n(&base, n0).collect();
    transform::interleave_within(&copies, limits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeStatus {
    /// Factored at `modulus` into its principal decimations.
    Internal,
    /// Infinitely factorizable; not expanded further.
    Frozen,
    /// Only the trivial factorization.
    Prime,
    DepthCapped,
}

impl NodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::Internal => "Internal",
            NodeStatus::Frozen => "Frozen",
            NodeStatus::Prime => "Prime",
            NodeStatus::DepthCapped => "DepthCapped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorTree {
    pub set: CanonicalForm,
    pub status: NodeStatus,
    /// Maximal modulus `n0` for internal nodes.
    pub modulus: Option<usize>,
    pub children: Vec<FactorTree>,
}

impl FactorTree {
    pub fn leaves(&self) -> Vec<&FactorTree> {
        if self.children.is_empty() {
            vec![self]
        } else {
            self.children.iter().flat_map(|c| c.leaves()).collect()
        }
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "modulus": self.modulus,
            "set": self.set.to_json_value(),
            "children": self.children.iter().map(FactorTree::to_json_value).collect::<Vec<_>>(),
        })
    }
}

pub fn factor_tree(p: impl AsCanonical, depth_cap: usize) -> Result<FactorTree> {
    factor_tree_within(p, depth_cap, DEFAULT_CAP, &Limits::default())
}

/// Iterated factorization: split at the maximal modulus, freeze infinitely
/// factorizable factors, recurse on the rest.
pub fn factor_tree_within(p: impl AsCanonical, depth_cap: usize, cap: usize, limits: &Limits) -> Result<FactorTree> {
    let p = p.canonical_within(limits)?.into_owned();
    if p.is_empty() {
        return Err(Error::EmptySet);
    }
    build_node(p, 0, depth_cap, cap, limits)
}

fn build_node(set: CanonicalForm, depth: usize, depth_cap: usize, cap: usize, limits: &Limits) -> Result<FactorTree> {
    let leaf = |set, status| FactorTree { set, status, modulus: None, children: Vec::new() };
    if is_infinitely_factorizable(&set)? {
        return Ok(leaf(set, NodeStatus::Frozen));
    }
    let n0 = spectrum_within(&set, cap, limits)?.spectrum.max().unwrap_or(1);
    if n0 == 1 {
        return Ok(leaf(set, NodeStatus::Prime));
    }
    if depth >= depth_cap {
        return Ok(leaf(set, NodeStatus::DepthCapped));
    }
    let parts = principal_decimations(&set, n0, limits)?;
    if transform::interleave_within(&parts, limits)? != set {
        return Err(Error::Inconsistent(format!("factors at n = {n0} do not reproduce their parent")));
    }
    let children =
        parts.into_iter().map(|c| build_node(c, depth + 1, depth_cap, cap, limits)).collect::<Result<Vec<_>>>()?;
    Ok(FactorTree { set, status: NodeStatus::Internal, modulus: Some(n0), children })
}
