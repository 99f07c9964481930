//! Finite labeled-graph presentations of closed subsets of `A^ℕ`.
//!
//! A [`Presentation`] is any labeled graph with a set of initial states; it
//! denotes the set of infinite label sequences along paths from an initial
//! state. [`CanonicalForm`] is the trim, deterministic, minimal machine with
//! breadth-first numbering, so two canonical forms are equal exactly when
//! they denote the same closed set.

use std::borrow::Cow;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::automaton::{self, Dfa, Nfa, Product, StrideSubsets, NONE};
use crate::error::{Error, Result};
use crate::word::{Alphabet, EventuallyPeriodicWord, Symbol};

/// Resource caps for the exponential constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of states explored by any single construction or search.
    pub max_states: usize,
    /// Maximum number of words in a prefix table.
    pub max_prefixes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 200_000, max_prefixes: 1 << 20 }
    }
}

/// A raw labeled graph. State ids are `0..states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    states: usize,
    edges: Vec<(u32, Symbol, u32)>,
    initials: Vec<u32>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, states: usize, edges: Vec<(u32, Symbol, u32)>, initials: Vec<u32>) -> Result<Self> {
        for &(from, sym, to) in &edges {
            if from as usize >= states || to as usize >= states {
                return Err(Error::MalformedPresentation(format!("edge ({from}, {sym}, {to}) names an unknown state")));
            }
            if sym as usize >= alphabet.len() {
                return Err(Error::MalformedPresentation(format!("edge symbol #{sym} outside the alphabet")));
            }
        }
        if let Some(s) = initials.iter().find(|&&s| s as usize >= states) {
            return Err(Error::MalformedPresentation(format!("initial state {s} is unknown")));
        }
        Ok(Presentation { alphabet, states, edges, initials })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn edges(&self) -> &[(u32, Symbol, u32)] {
        &self.edges
    }

    pub fn initials(&self) -> &[u32] {
        &self.initials
    }

    pub(crate) fn to_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet.len(), self.states);
        for &(from, sym, to) in &self.edges {
            nfa.add_edge(from, sym, to);
        }
        nfa.initials = self.initials.clone();
        nfa
    }

    pub fn normalize(&self) -> Result<CanonicalForm> {
        self.normalize_within(&Limits::default())
    }

    /// Trim, determinize from the initial set, minimize, renumber.
    pub fn normalize_within(&self, limits: &Limits) -> Result<CanonicalForm> {
        let dfa = self.to_nfa().determinize(limits.max_states)?;
        Ok(CanonicalForm { alphabet: self.alphabet.clone(), dfa })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PresentationJson =
            serde_json::from_str(text).map_err(|e| Error::MalformedPresentation(e.to_string()))?;
        raw.into_presentation()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PresentationJson::from(self)).expect("serializable")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PresentationJson::from(self)).expect("serializable")
    }
}

/// State identifiers in JSON files may be integers or strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
enum StateId {
    Int(u64),
    Name(String),
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    alphabet: Alphabet,
    states: Vec<StateId>,
    initials: Vec<StateId>,
    edges: Vec<(StateId, String, StateId)>,
}

impl PresentationJson {
    fn into_presentation(self) -> Result<Presentation> {
        let mut index: HashMap<StateId, u32> = HashMap::new();
        for (i, id) in self.states.iter().enumerate() {
            if index.insert(id.clone(), i as u32).is_some() {
                return Err(Error::MalformedPresentation(format!("duplicate state id {id:?}")));
            }
        }
        let lookup = |id: &StateId| {
            index.get(id).copied().ok_or_else(|| Error::MalformedPresentation(format!("unknown state id {id:?}")))
        };
        let edges = self
            .edges
            .iter()
            .map(|(f, s, t)| {
                let sym = self.alphabet.index_of(s).ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                Ok((lookup(f)?, sym, lookup(t)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let initials = self.initials.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        Presentation::new(self.alphabet, self.states.len(), edges, initials)
    }
}

impl From<&Presentation> for PresentationJson {
    fn from(p: &Presentation) -> Self {
        let mut edges = p.edges.clone();
        edges.sort_unstable();
        edges.dedup();
        let mut initials = p.initials.clone();
        initials.sort_unstable();
        initials.dedup();
        PresentationJson {
            alphabet: p.alphabet.clone(),
            states: (0..p.states as u64).map(StateId::Int).collect(),
            initials: initials.into_iter().map(|s| StateId::Int(s as u64)).collect(),
            edges: edges
                .into_iter()
                .map(|(f, s, t)| (StateId::Int(f as u64), p.alphabet.token(s).to_string(), StateId::Int(t as u64)))
                .collect(),
        }
    }
}

/// Trim, deterministic, minimal presentation with canonical numbering.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    alphabet: Alphabet,
    dfa: Dfa,
}

impl CanonicalForm {
    pub(crate) fn from_dfa(alphabet: Alphabet, dfa: &Dfa) -> Self {
        CanonicalForm { alphabet, dfa: dfa.canonical() }
    }

    pub(crate) fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.dfa.states()
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    /// Successor of `state` on `sym`; state 0 is the start.
    pub fn next(&self, state: u32, sym: Symbol) -> Option<u32> {
        self.dfa.next(state, sym)
    }

    /// True when `word` is a prefix of some element of the set.
    pub fn accepts_prefix(&self, word: &[Symbol]) -> bool {
        !self.is_empty() && self.dfa.run(0, word).is_some()
    }

    pub fn to_presentation(&self) -> Presentation {
        let initials = if self.is_empty() { vec![] } else { vec![0] };
        Presentation {
            alphabet: self.alphabet.clone(),
            states: self.dfa.states(),
            edges: self.dfa.edges().collect(),
            initials,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_presentation().to_json()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        self.to_presentation().to_json_value()
    }

    /// Transition table with `None` for missing edges, one row per state.
    pub fn table(&self) -> Vec<Vec<Option<u32>>> {
        (0..self.state_count() as u32).map(|s| self.alphabet.all().map(|a| self.next(s, a)).collect()).collect()
    }
}

/// Anything that can be brought to canonical form.
pub trait AsCanonical {
    fn canonical_within(&self, limits: &Limits) -> Result<Cow<'_, CanonicalForm>>;

    fn canonical(&self) -> Result<Cow<'_, CanonicalForm>> {
        self.canonical_within(&Limits::default())
    }
}

impl AsCanonical for CanonicalForm {
    fn canonical_within(&self, _: &Limits) -> Result<Cow<'_, CanonicalForm>> {
        Ok(Cow::Borrowed(self))
    }
}

impl AsCanonical for Presentation {
    fn canonical_within(&self, limits: &Limits) -> Result<Cow<'_, CanonicalForm>> {
        self.normalize_within(limits).map(Cow::Owned)
    }
}

impl AsCanonical for Cow<'_, CanonicalForm> {
    fn canonical_within(&self, _: &Limits) -> Result<Cow<'_, CanonicalForm>> {
        Ok(Cow::Borrowed(&**self))
    }
}

impl<T: AsCanonical + ?Sized> AsCanonical for &T {
    fn canonical_within(&self, limits: &Limits) -> Result<Cow<'_, CanonicalForm>> {
        (**self).canonical_within(limits)
    }
}

pub fn empty(alphabet: &Alphabet) -> CanonicalForm {
    CanonicalForm { alphabet: alphabet.clone(), dfa: Dfa::empty(alphabet.len()) }
}

/// The full shift `A^ℕ`: one state with a loop per symbol.
pub fn full_shift(alphabet: &Alphabet) -> CanonicalForm {
    CanonicalForm { alphabet: alphabet.clone(), dfa: Dfa::from_table(alphabet.len(), vec![0; alphabet.len()]) }
}

/// The finite set of the listed words.
pub fn from_words(words: &[EventuallyPeriodicWord]) -> Result<CanonicalForm> {
    let first = words.first().ok_or_else(|| Error::InvalidArgument("from_words needs at least one word".into()))?;
    let alphabet = first.alphabet().clone();
    let mut nfa = Nfa::new(alphabet.len(), 0);
    for w in words {
        alphabet.ensure_same(w.alphabet())?;
        let start = nfa.add_state();
        nfa.initials.push(start);
        let mut at = start;
        for &a in w.preperiod() {
            let next = nfa.add_state();
            nfa.add_edge(at, a, next);
            at = next;
        }
        let loop_start = at;
        let period = w.period();
        for (i, &a) in period.iter().enumerate() {
            let next = if i + 1 == period.len() { loop_start } else { nfa.add_state() };
            nfa.add_edge(at, a, next);
            at = next;
        }
    }
    let dfa = nfa.determinize(Limits::default().max_states)?;
    Ok(CanonicalForm { alphabet, dfa })
}

pub fn is_subset(p: impl AsCanonical, q: impl AsCanonical) -> Result<bool> {
    Ok(difference_witness(p, q)?.is_none())
}

pub fn is_equal(p: impl AsCanonical, q: impl AsCanonical) -> Result<bool> {
    let (p, q) = (p.canonical()?, q.canonical()?);
    p.alphabet.ensure_same(&q.alphabet)?;
    Ok(p == q)
}

/// Shortest prefix of `p` that is not a prefix of `q`, or `None` when `p ⊆ q`.
pub fn difference_witness(p: impl AsCanonical, q: impl AsCanonical) -> Result<Option<Vec<Symbol>>> {
    difference_witness_within(p, q, &Limits::default())
}

pub fn difference_witness_within(
    p: impl AsCanonical,
    q: impl AsCanonical,
    limits: &Limits,
) -> Result<Option<Vec<Symbol>>> {
    let (p, q) = (p.canonical_within(limits)?, q.canonical_within(limits)?);
    p.alphabet.ensure_same(&q.alphabet)?;
    automaton::find_difference(&p.dfa, &q.dfa, limits.max_states)
}

pub fn union(p: impl AsCanonical, q: impl AsCanonical) -> Result<CanonicalForm> {
    let (p, q) = (p.canonical()?, q.canonical()?);
    p.alphabet.ensure_same(&q.alphabet)?;
    let k = p.alphabet.len();
    let offset = p.dfa.states() as u32;
    let mut nfa = Nfa::new(k, p.dfa.states() + q.dfa.states());
    for (s, a, t) in p.dfa.edges() {
        nfa.add_edge(s, a, t);
    }
    for (s, a, t) in q.dfa.edges() {
        nfa.add_edge(s + offset, a, t + offset);
    }
    if !p.is_empty() {
        nfa.initials.push(0);
    }
    if !q.is_empty() {
        nfa.initials.push(offset);
    }
    let dfa = nfa.determinize(Limits::default().max_states)?;
    Ok(CanonicalForm { alphabet: p.alphabet.clone(), dfa })
}

pub fn intersect(p: impl AsCanonical, q: impl AsCanonical) -> Result<CanonicalForm> {
    let (p, q) = (p.canonical()?, q.canonical()?);
    p.alphabet.ensure_same(&q.alphabet)?;
    let raw = automaton::materialize(&Product(&p.dfa, &q.dfa), Limits::default().max_states)?;
    Ok(CanonicalForm::from_dfa(p.alphabet.clone(), &raw))
}

/// Membership of an eventually periodic word.
pub fn member(p: impl AsCanonical, w: &EventuallyPeriodicWord) -> Result<bool> {
    let p = p.canonical()?;
    p.alphabet.ensure_same(w.alphabet())?;
    if p.is_empty() {
        return Ok(false);
    }
    let Some(mut state) = p.dfa.run(0, w.preperiod()) else {
        return Ok(false);
    };
    let mut seen = vec![false; p.dfa.states()];
    while !seen[state as usize] {
        seen[state as usize] = true;
        match p.dfa.run(state, w.period()) {
            Some(next) => state = next,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// `S^k X`.
pub fn shift_set(p: impl AsCanonical, steps: usize) -> Result<CanonicalForm> {
    shift_set_within(p, steps, &Limits::default())
}

pub fn shift_set_within(p: impl AsCanonical, steps: usize, limits: &Limits) -> Result<CanonicalForm> {
    let p = p.canonical_within(limits)?;
    if steps == 0 {
        return Ok(p.into_owned());
    }
    from_start_set(&p, p.dfa.layer(steps), limits)
}

/// Determinize `p` restarted from an arbitrary set of its states.
pub(crate) fn from_start_set(p: &CanonicalForm, start: Vec<u32>, limits: &Limits) -> Result<CanonicalForm> {
    let machine = StrideSubsets { dfa: &p.dfa, start, stride: 1 };
    let raw = automaton::materialize(&machine, limits.max_states)?;
    Ok(CanonicalForm::from_dfa(p.alphabet.clone(), &raw))
}

/// The machine reading blocks at any position: determinized from all states.
pub(crate) fn block_machine(p: &CanonicalForm, limits: &Limits) -> Result<CanonicalForm> {
    from_start_set(p, (0..p.dfa.states() as u32).collect(), limits)
}

/// A product set `∏ A_k` given by a finite chain of position alphabets
/// followed by a cycle repeated forever.
pub(crate) fn chain_into_cycle(alphabet: &Alphabet, chain: &[Vec<Symbol>], cycle: &[Vec<Symbol>]) -> CanonicalForm {
    let k = alphabet.len();
    let total = chain.len() + cycle.len();
    let mut table = vec![NONE; total * k];
    for (pos, letters) in chain.iter().chain(cycle).enumerate() {
        let next = if pos + 1 == total { chain.len() } else { pos + 1 };
        for &a in letters {
            table[pos * k + a as usize] = next as u32;
        }
    }
    CanonicalForm::from_dfa(alphabet.clone(), &Dfa::from_table(k, table))
}
