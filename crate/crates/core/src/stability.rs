//! Shift-invariance, shift-stability and weak shift-stability, plus
//! forbidden-block descriptions.

use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use crate::automaton::{Dfa, NONE};
use crate::error::{Error, Result};
use crate::presentation::{self, block_machine, from_start_set, AsCanonical, CanonicalForm, Limits};
use crate::word::{Alphabet, Symbol};

pub const MAX_DEFAULT_BOUND: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakStability {
    /// `S^k X ⊆ S^j X` with `j < k`.
    Witness {
        j: usize,
        k: usize,
    },
    NotFoundWithinBound(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub shift_invariant: bool,
    pub shift_stable: bool,
    pub weakly_shift_stable: WeakStability,
    pub eventual_period: Option<usize>,
}

impl StabilityReport {
    pub fn is_weakly_shift_stable(&self) -> bool {
        matches!(self.weakly_shift_stable, WeakStability::Witness { .. })
    }

    pub fn to_json_value(&self) -> Value {
        let weak = match self.weakly_shift_stable {
            WeakStability::Witness { j, k } => json!({ "j": j, "k": k }),
            WeakStability::NotFoundWithinBound(b) => json!({ "not_found_within_bound": b }),
        };
        json!({
            "shift_invariant": self.shift_invariant,
            "shift_stable": self.shift_stable,
            "weakly_shift_stable": weak,
            "eventual_period": self.eventual_period,
        })
    }
}

/// Default search bound: `min(2^states, 4096)`.
pub fn default_bound(p: &CanonicalForm) -> usize {
    if p.state_count() >= 12 {
        MAX_DEFAULT_BOUND
    } else {
        (1usize << p.state_count()).min(MAX_DEFAULT_BOUND)
    }
}

pub fn stability_report(p: impl AsCanonical, bound: Option<usize>) -> Result<StabilityReport> {
    stability_report_within(p, bound, &Limits::default())
}

/// `S^j X` is the set read from the states reachable in exactly `j` steps,
/// so the sequence of shifts is indexed by subsets of states and must cycle.
pub fn stability_report_within(p: impl AsCanonical, bound: Option<usize>, limits: &Limits) -> Result<StabilityReport> {
    let p = p.canonical_within(limits)?;
    let bound = bound.unwrap_or_else(|| default_bound(&p));
    if p.is_empty() {
        return Ok(StabilityReport {
            shift_invariant: true,
            shift_stable: true,
            weakly_shift_stable: WeakStability::Witness { j: 0, k: 1 },
            eventual_period: Some(1),
        });
    }
    let dfa = p.dfa();
    let mut layers: Vec<Vec<u32>> = vec![vec![0]];
    let mut shifts: Vec<CanonicalForm> = vec![p.clone().into_owned()];
    let mut first_seen: HashMap<Vec<u32>, usize> = HashMap::from([(vec![0], 0)]);

    let shifted_once = from_start_set(&p, dfa.successors(&[0]), limits)?;
    let shift_invariant = shifted_once == *p;
    let shift_stable = presentation::is_subset(&shifted_once, &*p)?;

    let mut weak = WeakStability::NotFoundWithinBound(bound);
    'search: for k in 1..=bound {
        let layer = dfa.successors(&layers[k - 1]);
        let repeat = first_seen.get(&layer).copied();
        let shifted = match repeat {
            Some(j) => shifts[j].clone(),
            None => from_start_set(&p, layer.clone(), limits)?,
        };
        for j in 0..k {
            if contains_states(&layers[j], &layer) || presentation::is_subset(&shifted, &shifts[j])? {
                weak = WeakStability::Witness { j, k };
                break 'search;
            }
        }
        if repeat.is_some() {
            return Err(Error::Inconsistent("repeated shift layer without an inclusion witness".into()));
        }
        first_seen.insert(layer.clone(), k);
        layers.push(layer);
        shifts.push(shifted);
    }
    let eventual_period = match weak {
        WeakStability::Witness { j, k } => Some(k - j),
        WeakStability::NotFoundWithinBound(_) => None,
    };
    Ok(StabilityReport { shift_invariant, shift_stable, weakly_shift_stable: weak, eventual_period })
}

/// Both slices sorted; true when `inner ⊆ outer`.
fn contains_states(outer: &[u32], inner: &[u32]) -> bool {
    inner.iter().all(|s| outer.binary_search(s).is_ok())
}

/// All infinite words in which no listed block occurs at any position.
pub fn from_forbidden_blocks(alphabet: &Alphabet, blocks: &[Vec<Symbol>]) -> Result<CanonicalForm> {
    for b in blocks {
        if b.is_empty() {
            return Err(Error::InvalidArgument("forbidden blocks must be nonempty".into()));
        }
        alphabet.check_symbols(b)?;
    }
    let k = alphabet.len();
    // Trie with completed goto function (Aho-Corasick).
    let mut goto: Vec<Vec<u32>> = vec![vec![NONE; k]];
    let mut bad = vec![false];
    for b in blocks {
        let mut node = 0usize;
        for &a in b {
            if goto[node][a as usize] == NONE {
                goto[node][a as usize] = goto.len() as u32;
                goto.push(vec![NONE; k]);
                bad.push(false);
            }
            node = goto[node][a as usize] as usize;
        }
        bad[node] = true;
    }
    let mut fail = vec![0u32; goto.len()];
    let mut queue = VecDeque::new();
    for next in goto[0].iter_mut() {
        match *next {
            NONE => *next = 0,
            child => queue.push_back(child),
        }
    }
    while let Some(node) = queue.pop_front() {
        let node = node as usize;
        bad[node] |= bad[fail[node] as usize];
        let fallback = goto[fail[node] as usize].clone();
        for (child, via_fail) in goto[node].iter_mut().zip(fallback) {
            if *child == NONE {
                *child = via_fail;
            } else {
                fail[*child as usize] = via_fail;
                queue.push_back(*child);
            }
        }
    }
    let mut table = vec![NONE; goto.len() * k];
    for (s, row) in goto.iter().enumerate() {
        if bad[s] {
            continue;
        }
        for a in 0..k {
            if !bad[row[a] as usize] {
                table[s * k + a] = row[a];
            }
        }
    }
    Ok(CanonicalForm::from_dfa(alphabet.clone(), &Dfa::from_table(k, table)))
}

/// Words of length at most `max_len` that occur in no element of `X` while
/// every proper sub-block does, in length-then-lexicographic order.
pub fn minimal_forbidden_blocks(p: impl AsCanonical, max_len: usize) -> Result<Vec<Vec<Symbol>>> {
    let p = p.canonical()?;
    let blocks = block_machine(&p, &Limits::default())?;
    let occurs = |w: &[Symbol]| blocks.accepts_prefix(w) || (w.is_empty() && !blocks.is_empty());
    let mut out = Vec::new();
    if max_len == 0 {
        return Ok(out);
    }
    if blocks.is_empty() {
        return Ok(p.alphabet().all().map(|a| vec![a]).collect());
    }
    // Breadth-first over occurring blocks gives length-then-lex order.
    let mut frontier: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in p.alphabet().all() {
                let mut wa = w.clone();
                wa.push(a);
                if occurs(&wa) {
                    next.push(wa);
                } else if occurs(&wa[1..]) {
                    out.push(wa);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}
