//! Finite-automaton machinery shared by every set-level operation.
//!
//! Every machine here reads prefixes of a closed set: a word is accepted
//! exactly when it can be read from the start, and trim machines have no
//! dead ends, so the readable words are precisely the prefix language.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::word::Symbol;

pub(crate) const NONE: u32 = u32::MAX;

/// Dense deterministic machine. State 0 is the start; zero states is the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Dfa {
    symbols: usize,
    table: Vec<u32>,
}

impl Dfa {
    pub fn empty(symbols: usize) -> Self {
        Dfa { symbols, table: Vec::new() }
    }

    pub fn from_table(symbols: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len() % symbols.max(1), 0);
        Dfa { symbols, table }
    }

    pub fn states(&self) -> usize {
        self.table.len().checked_div(self.symbols).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    #[inline]
    pub fn next(&self, state: u32, sym: Symbol) -> Option<u32> {
        let t = self.table[state as usize * self.symbols + sym as usize];
        (t != NONE).then_some(t)
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, Symbol, u32)> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(move |(i, &t)| ((i / self.symbols) as u32, (i % self.symbols) as Symbol, t))
    }

    /// Run from `state` over `word`.
    pub fn run(&self, mut state: u32, word: &[Symbol]) -> Option<u32> {
        for &a in word {
            state = self.next(state, a)?;
        }
        Some(state)
    }

    /// Remove every state from which no infinite path starts, then every
    /// state unreachable from the start. Renumbers in discovery order.
    pub fn canonical(&self) -> Dfa {
        let live = self.live_states();
        if self.is_empty() || !live[0] {
            return Dfa::empty(self.symbols);
        }
        let mut table = self.table.clone();
        for (i, t) in table.iter_mut().enumerate() {
            if *t != NONE && (!live[*t as usize] || !live[i / self.symbols]) {
                *t = NONE;
            }
        }
        let trimmed = Dfa { symbols: self.symbols, table };
        trimmed.minimized().renumbered()
    }

    fn live_states(&self) -> Vec<bool> {
        let n = self.states();
        let mut out_degree = vec![0usize; n];
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (s, _, t) in self.edges() {
            out_degree[s as usize] += 1;
            preds[t as usize].push(s);
        }
        let mut live = vec![true; n];
        let mut queue: Vec<u32> = (0..n as u32).filter(|&s| out_degree[s as usize] == 0).collect();
        while let Some(s) = queue.pop() {
            if !live[s as usize] {
                continue;
            }
            live[s as usize] = false;
            for &p in &preds[s as usize] {
                out_degree[p as usize] -= 1;
                if out_degree[p as usize] == 0 && live[p as usize] {
                    queue.push(p);
                }
            }
        }
        live
    }

    /// Moore partition refinement; every state accepts, missing edges distinguish.
    fn minimized(&self) -> Dfa {
        let n = self.states();
        let k = self.symbols;
        let mut class = vec![0u32; n];
        let mut count = 1usize;
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
            let mut next_class = vec![0u32; n];
            let mut sig = Vec::with_capacity(k + 1);
            for s in 0..n {
                sig.clear();
                sig.push(class[s]);
                for a in 0..k {
                    let t = self.table[s * k + a];
                    sig.push(if t == NONE { NONE } else { class[t as usize] });
                }
                let fresh = ids.len() as u32;
                next_class[s] = *ids.entry(sig.clone()).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut table = vec![NONE; count * k];
        for s in 0..n {
            let c = class[s] as usize;
            for a in 0..k {
                let t = self.table[s * k + a];
                table[c * k + a] = if t == NONE { NONE } else { class[t as usize] };
            }
        }
        // Class of the start state must become state 0.
        let start_class = class[0];
        let dfa = Dfa { symbols: k, table };
        dfa.renumbered_from(start_class)
    }

    fn renumbered(&self) -> Dfa {
        self.renumbered_from(0)
    }

    /// Breadth-first renumbering from `start`, exploring symbols in alphabet order.
    fn renumbered_from(&self, start: u32) -> Dfa {
        if self.is_empty() {
            return self.clone();
        }
        let k = self.symbols;
        let mut new_id = vec![NONE; self.states()];
        let mut order = vec![start];
        new_id[start as usize] = 0;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for a in 0..k {
                let t = self.table[s as usize * k + a];
                if t != NONE && new_id[t as usize] == NONE {
                    new_id[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
        }
        let mut table = vec![NONE; order.len() * k];
        for (i, &s) in order.iter().enumerate() {
            for a in 0..k {
                let t = self.table[s as usize * k + a];
                if t != NONE {
                    table[i * k + a] = new_id[t as usize];
                }
            }
        }
        Dfa { symbols: k, table }
    }

    /// States reachable from the start in exactly `steps` steps, sorted.
    pub fn layer(&self, steps: usize) -> Vec<u32> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut layers: Vec<Vec<u32>> = Vec::new();
        let mut current = vec![0u32];
        for j in 0..=steps {
            if j == steps {
                return current;
            }
            if let Some(&first) = seen.get(&current) {
                let period = j - first;
                return layers[first + (steps - first) % period].clone();
            }
            seen.insert(current.clone(), j);
            let next = self.successors(&current);
            layers.push(std::mem::replace(&mut current, next));
        }
        current
    }

    /// All one-step successors of a set of states.
    pub fn successors(&self, states: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = states
            .iter()
            .flat_map(|&s| self.table[s as usize * self.symbols..(s as usize + 1) * self.symbols].iter().copied())
            .filter(|&t| t != NONE)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of length-k paths from `start` for k = 1..=max_len.
    pub fn path_counts(&self, start: &[u32], max_len: usize) -> Vec<BigUint> {
        let n = self.states();
        let mut current = vec![BigUint::zero(); n];
        for &s in start {
            current[s as usize] = BigUint::from(1u8);
        }
        let mut out = Vec::with_capacity(max_len);
        for _ in 0..max_len {
            let mut next = vec![BigUint::zero(); n];
            for (s, _, t) in self.edges() {
                if !current[s as usize].is_zero() {
                    let c = current[s as usize].clone();
                    next[t as usize] += c;
                }
            }
            out.push(next.iter().sum());
            current = next;
        }
        out
    }
}

/// Nondeterministic presentation: `succ[state * symbols + sym]` lists targets.
#[derive(Clone, Debug)]
pub(crate) struct Nfa {
    pub symbols: usize,
    pub succ: Vec<Vec<u32>>,
    pub initials: Vec<u32>,
}

impl Nfa {
    pub fn new(symbols: usize, states: usize) -> Self {
        Nfa { symbols, succ: vec![Vec::new(); states * symbols], initials: Vec::new() }
    }

    pub fn states(&self) -> usize {
        self.succ.len().checked_div(self.symbols).unwrap_or(0)
    }

    pub fn add_state(&mut self) -> u32 {
        let id = self.states() as u32;
        self.succ.extend(std::iter::repeat_with(Vec::new).take(self.symbols));
        id
    }

    pub fn add_edge(&mut self, from: u32, sym: Symbol, to: u32) {
        let slot = &mut self.succ[from as usize * self.symbols + sym as usize];
        if !slot.contains(&to) {
            slot.push(to);
        }
    }

    /// Drop edges into and out of states with no infinite continuation.
    pub fn trimmed(&self) -> Nfa {
        let n = self.states();
        let k = self.symbols;
        let mut out_degree = vec![0usize; n];
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (s, degree) in out_degree.iter_mut().enumerate() {
            for &t in self.succ[s * k..(s + 1) * k].iter().flatten() {
                *degree += 1;
                preds[t as usize].push(s as u32);
            }
        }
        let mut live = vec![true; n];
        let mut stack: Vec<usize> = (0..n).filter(|&s| out_degree[s] == 0).collect();
        while let Some(s) = stack.pop() {
            if !live[s] {
                continue;
            }
            live[s] = false;
            for &p in &preds[s] {
                out_degree[p as usize] -= 1;
                if out_degree[p as usize] == 0 {
                    stack.push(p as usize);
                }
            }
        }
        let mut succ = self.succ.clone();
        for (i, targets) in succ.iter_mut().enumerate() {
            if !live[i / k] {
                targets.clear();
            } else {
                targets.retain(|&t| live[t as usize]);
            }
        }
        let initials = self.initials.iter().copied().filter(|&s| live[s as usize]).collect();
        Nfa { symbols: k, succ, initials }
    }

    /// Subset construction from the initial set into a canonical DFA.
    pub fn determinize(&self, budget: usize) -> Result<Dfa> {
        let trimmed = self.trimmed();
        let machine = NfaSubsets { nfa: &trimmed };
        Ok(materialize(&machine, budget)?.canonical())
    }
}

/// A deterministic machine explored on demand.
pub(crate) trait Machine {
    type State: Clone + Eq + Hash;
    fn symbols(&self) -> usize;
    fn start(&self) -> Option<Self::State>;
    fn step(&self, state: &Self::State, sym: Symbol) -> Option<Self::State>;
}

impl Machine for Dfa {
    type State = u32;

    fn symbols(&self) -> usize {
        self.symbols
    }

    fn start(&self) -> Option<u32> {
        (!self.is_empty()).then_some(0)
    }

    fn step(&self, state: &u32, sym: Symbol) -> Option<u32> {
        self.next(*state, sym)
    }
}

impl<M: Machine + ?Sized> Machine for &M {
    type State = M::State;

    fn symbols(&self) -> usize {
        (**self).symbols()
    }

    fn start(&self) -> Option<Self::State> {
        (**self).start()
    }

    fn step(&self, state: &Self::State, sym: Symbol) -> Option<Self::State> {
        (**self).step(state, sym)
    }
}

struct NfaSubsets<'a> {
    nfa: &'a Nfa,
}

impl Machine for NfaSubsets<'_> {
    type State = Vec<u32>;

    fn symbols(&self) -> usize {
        self.nfa.symbols
    }

    fn start(&self) -> Option<Vec<u32>> {
        let mut s = self.nfa.initials.clone();
        s.sort_unstable();
        s.dedup();
        (!s.is_empty()).then_some(s)
    }

    fn step(&self, state: &Vec<u32>, sym: Symbol) -> Option<Vec<u32>> {
        let k = self.nfa.symbols;
        let mut out: Vec<u32> =
            state.iter().flat_map(|&s| self.nfa.succ[s as usize * k + sym as usize].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        (!out.is_empty()).then_some(out)
    }
}

/// Subset construction over a DFA where one symbol of the new machine reads
/// `stride` symbols of the old one and reports only the first. With stride 1
/// this is plain determinization from a set of start states.
pub(crate) struct StrideSubsets<'a> {
    pub dfa: &'a Dfa,
    pub start: Vec<u32>,
    pub stride: usize,
}

impl Machine for StrideSubsets<'_> {
    type State = Vec<u32>;

    fn symbols(&self) -> usize {
        self.dfa.symbols
    }

    fn start(&self) -> Option<Vec<u32>> {
        (!self.start.is_empty()).then(|| self.start.clone())
    }

    fn step(&self, state: &Vec<u32>, sym: Symbol) -> Option<Vec<u32>> {
        let mut current: Vec<u32> = state.iter().filter_map(|&s| self.dfa.next(s, sym)).collect();
        current.sort_unstable();
        current.dedup();
        for _ in 1..self.stride {
            if current.is_empty() {
                break;
            }
            current = self.dfa.successors(&current);
        }
        (!current.is_empty()).then_some(current)
    }
}

/// Cyclic product: symbol at position `r` is read by component `r mod n`.
/// The state is the tuple of component states followed by the phase.
pub(crate) struct Interleaving<'a> {
    pub parts: Vec<&'a Dfa>,
}

impl Machine for Interleaving<'_> {
    type State = Box<[u32]>;

    fn symbols(&self) -> usize {
        self.parts[0].symbols
    }

    fn start(&self) -> Option<Box<[u32]>> {
        if self.parts.iter().any(|p| p.is_empty()) {
            return None;
        }
        Some(vec![0u32; self.parts.len() + 1].into_boxed_slice())
    }

    fn step(&self, state: &Box<[u32]>, sym: Symbol) -> Option<Box<[u32]>> {
        let n = self.parts.len();
        let phase = state[n] as usize;
        let t = self.parts[phase].next(state[phase], sym)?;
        let mut next = state.clone();
        next[phase] = t;
        next[n] = ((phase + 1) % n) as u32;
        Some(next)
    }
}

/// Synchronous product of two DFAs (intersection of prefix languages).
pub(crate) struct Product<'a>(pub &'a Dfa, pub &'a Dfa);

impl Machine for Product<'_> {
    type State = (u32, u32);

    fn symbols(&self) -> usize {
        self.0.symbols
    }

    fn start(&self) -> Option<(u32, u32)> {
        Some((self.0.start()?, self.1.start()?))
    }

    fn step(&self, &(l, r): &(u32, u32), sym: Symbol) -> Option<(u32, u32)> {
        Some((self.0.next(l, sym)?, self.1.next(r, sym)?))
    }
}

/// Breadth-first exploration of a lazy machine into a dense DFA (not yet trimmed).
pub(crate) fn materialize<M: Machine>(machine: &M, budget: usize) -> Result<Dfa> {
    let k = machine.symbols();
    let Some(start) = machine.start() else {
        return Ok(Dfa::empty(k));
    };
    let mut ids: HashMap<M::State, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    ids.insert(start.clone(), 0);
    queue.push_back(start);
    let mut table: Vec<u32> = Vec::new();
    while let Some(state) = queue.pop_front() {
        for a in 0..k {
            let entry = match machine.step(&state, a as Symbol) {
                None => NONE,
                Some(next) => {
                    let fresh = ids.len() as u32;
                    match ids.entry(next) {
                        Entry::Occupied(e) => *e.get(),
                        Entry::Vacant(e) => {
                            if fresh as usize >= budget {
                                return Err(Error::BudgetExceeded { limit: budget });
                            }
                            queue.push_back(e.key().clone());
                            e.insert(fresh);
                            fresh
                        }
                    }
                }
            };
            table.push(entry);
        }
    }
    Ok(Dfa::from_table(k, table))
}

/// Shortest word readable in `a` but not in `b`, if any.
///
/// Both machines must be trim. When `a` is nonempty and `b` is empty the
/// witness is the empty word.
pub(crate) fn find_difference<A: Machine, B: Machine>(a: &A, b: &B, budget: usize) -> Result<Option<Vec<Symbol>>> {
    let Some(sa) = a.start() else {
        return Ok(None);
    };
    let Some(sb) = b.start() else {
        return Ok(Some(Vec::new()));
    };
    let k = a.symbols();
    let mut seen: HashMap<(A::State, B::State), ()> = HashMap::new();
    // (state pair, parent node, symbol that led here)
    let mut nodes: Vec<(A::State, B::State, usize, Symbol)> = Vec::new();
    seen.insert((sa.clone(), sb.clone()), ());
    nodes.push((sa, sb, usize::MAX, 0));
    let mut head = 0;
    while head < nodes.len() {
        let (xa, xb) = (nodes[head].0.clone(), nodes[head].1.clone());
        for sym in 0..k as Symbol {
            let Some(ta) = a.step(&xa, sym) else { continue };
            match b.step(&xb, sym) {
                None => {
                    let mut word = vec![sym];
                    let mut at = head;
                    while nodes[at].2 != usize::MAX {
                        word.push(nodes[at].3);
                        at = nodes[at].2;
                    }
                    word.reverse();
                    return Ok(Some(word));
                }
                Some(tb) => {
                    if let Entry::Vacant(e) = seen.entry((ta.clone(), tb.clone())) {
                        if nodes.len() >= budget {
                            return Err(Error::BudgetExceeded { limit: budget });
                        }
                        e.insert(());
                        nodes.push((ta, tb, head, sym));
                    }
                }
            }
        }
        head += 1;
    }
    Ok(None)
}
