//! Block and prefix counting, topological and prefix entropy.
//!
//! Counts are exact big integers. Entropies are logarithms of Perron roots
//! of strongly connected components of a deterministic presentation; the
//! count ratio `N_{k+1}/N_k` serves as an independent cross-check.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presentation::{block_machine, AsCanonical, CanonicalForm, Limits};
use crate::transform;
use crate::word::gcd;

pub const PERRON_TOLERANCE: f64 = 1e-9;
pub const PERRON_MAX_ITERATIONS: usize = 10_000;
pub const RATIO_CHECK_K: usize = 40;
pub const RATIO_TOLERANCE: f64 = 1e-6;
pub const LAW_TOLERANCE: f64 = 1e-6;

/// Result of power iteration on one strongly connected component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerronRoot {
    pub root: f64,
    /// Collatz–Wielandt bracket of the root.
    pub lower: f64,
    pub upper: f64,
    pub period: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Strongly connected components (Tarjan, iterative). Returns component id per state.
fn strongly_connected(n: usize, adj: &[Vec<u32>]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut counter = 0;
    let mut comps = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next] as usize;
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = comps;
                        if w == v {
                            break;
                        }
                    }
                    comps += 1;
                }
            }
        }
    }
    (comp, comps)
}

/// Perron root of an irreducible nonnegative integer matrix given as a
/// multigraph edge list on `n` vertices. Periodic components are handled by
/// iterating the `p`-th power, `p` the gcd of cycle lengths.
pub fn perron_root(n: usize, edges: &[(usize, usize)]) -> PerronRoot {
    if edges.is_empty() {
        return PerronRoot { root: 0.0, lower: 0.0, upper: 0.0, period: 0, iterations: 0, converged: true };
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    // Period from breadth-first levels.
    let mut level = vec![usize::MAX; n];
    level[edges[0].0] = 0;
    let mut queue = std::collections::VecDeque::from([edges[0].0]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let period = edges
        .iter()
        .filter(|(u, v)| level[*u] != usize::MAX && level[*v] != usize::MAX)
        .fold(0usize, |g, &(u, v)| gcd(g, (level[u] + 1).abs_diff(level[v])))
        .max(1);

    let mut vec = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    let (mut lower, mut upper) = (0.0f64, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < PERRON_MAX_ITERATIONS {
        iterations += 1;
        let mut current = vec.clone();
        for _ in 0..period {
            next.iter_mut().for_each(|x| *x = 0.0);
            // (M v)_u = Σ_{u→w} v_w
            for &(u, w) in edges {
                next[u] += current[w];
            }
            std::mem::swap(&mut current, &mut next);
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = current[i] / vec[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        lower = lo.powf(1.0 / period as f64);
        upper = hi.powf(1.0 / period as f64);
        let scale = current.iter().cloned().fold(0.0, f64::max);
        vec = current.into_iter().map(|x| x / scale).collect();
        if upper - lower < PERRON_TOLERANCE {
            converged = true;
            break;
        }
    }
    PerronRoot { root: 0.5 * (lower + upper), lower, upper, period, iterations, converged }
}

/// Perron roots of every nontrivial component of a canonical machine.
fn component_roots(p: &CanonicalForm) -> Vec<PerronRoot> {
    let dfa = p.dfa();
    let n = dfa.states();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (s, _, t) in dfa.edges() {
        adj[s as usize].push(t);
    }
    let (comp, count) = strongly_connected(n, &adj);
    let mut local = vec![0usize; n];
    let mut sizes = vec![0usize; count];
    for s in 0..n {
        local[s] = sizes[comp[s]];
        sizes[comp[s]] += 1;
    }
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    for (s, _, t) in dfa.edges() {
        let (s, t) = (s as usize, t as usize);
        if comp[s] == comp[t] {
            edges[comp[s]].push((local[s], local[t]));
        }
    }
    (0..count).filter(|&c| !edges[c].is_empty()).map(|c| perron_root(sizes[c], &edges[c])).collect()
}

/// Maximal Perron root over components; the machine must be nonempty.
fn dominant_root(p: &CanonicalForm) -> PerronRoot {
    component_roots(p).into_iter().max_by(|a, b| a.root.total_cmp(&b.root)).unwrap_or(PerronRoot {
        root: 0.0,
        lower: 0.0,
        upper: 0.0,
        period: 0,
        iterations: 0,
        converged: true,
    })
}

/// `N_k(X)` for k = 1..=max_len: distinct blocks at any position.
pub fn block_counts(p: impl AsCanonical, max_len: usize) -> Result<Vec<BigUint>> {
    let p = p.canonical()?;
    let blocks = block_machine(&p, &Limits::default())?;
    Ok(prefix_counts_of(&blocks, max_len))
}

/// `N_k^I(X)` for k = 1..=max_len: distinct prefixes.
pub fn prefix_counts(p: impl AsCanonical, max_len: usize) -> Result<Vec<BigUint>> {
    let p = p.canonical()?;
    Ok(prefix_counts_of(&p, max_len))
}

fn prefix_counts_of(p: &CanonicalForm, max_len: usize) -> Vec<BigUint> {
    if p.is_empty() {
        return vec![BigUint::default(); max_len];
    }
    p.dfa().path_counts(&[0], max_len)
}

/// Topological entropy in natural-log units.
///
/// Read off the block machine when it fits in the default state budget.
/// Otherwise the canonical machine itself is used: it is deterministic, so
/// each block labels at most `states` of its paths and both have the same
/// growth rate.
pub fn h_top(p: impl AsCanonical) -> Result<f64> {
    let p = p.canonical()?;
    if p.is_empty() {
        return Err(Error::EmptySet);
    }
    match block_machine(&p, &Limits::default()) {
        Ok(blocks) => Ok(dominant_root(&blocks).root.ln()),
        Err(Error::BudgetExceeded { .. }) => Ok(dominant_root(&p).root.ln()),
        Err(e) => Err(e),
    }
}

/// Prefix entropy in natural-log units.
pub fn h_prefix(p: impl AsCanonical) -> Result<f64> {
    let p = p.canonical()?;
    if p.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(dominant_root(&p).root.ln())
}

/// `a / b` for big integers without overflowing `f64`.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().saturating_sub(60);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Perron,
    /// Power iteration did not converge; values come from count ratios.
    SequenceFit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub block_counts: Vec<BigUint>,
    pub prefix_counts: Vec<BigUint>,
    pub h_top: f64,
    pub h_prefix: f64,
    pub method: Method,
    pub k_used: usize,
    /// `N_{41}/N_{40}` for the block counts.
    pub count_ratio: f64,
    /// Whether `exp(h_top)` agrees with `count_ratio` to within 1e−6.
    pub ratio_consistent: bool,
}

impl EntropyReport {
    pub fn to_json_value(&self, log2: bool) -> Value {
        let unit = if log2 { std::f64::consts::LN_2 } else { 1.0 };
        let strings = |v: &[BigUint]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "block_counts": strings(&self.block_counts),
            "prefix_counts": strings(&self.prefix_counts),
            "h_top": self.h_top / unit,
            "h_prefix": self.h_prefix / unit,
            "units": if log2 { "bits" } else { "nats" },
            "method": match self.method { Method::Perron => "perron", Method::SequenceFit => "sequence-fit" },
            "k_used": self.k_used,
            "count_ratio": self.count_ratio,
            "ratio_consistent": self.ratio_consistent,
        })
    }
}

pub fn entropy_report(p: impl AsCanonical, k: usize) -> Result<EntropyReport> {
    let p = p.canonical()?;
    if p.is_empty() {
        return Err(Error::EmptySet);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let blocks = block_machine(&p, &Limits::default())?;
    let horizon = k.max(RATIO_CHECK_K + 1);
    let all_blocks = prefix_counts_of(&blocks, horizon);
    let prefix = prefix_counts_of(&p, k);
    let count_ratio = big_ratio(&all_blocks[RATIO_CHECK_K], &all_blocks[RATIO_CHECK_K - 1]);
    let top = dominant_root(&blocks);
    let pre = dominant_root(&p);
    let (method, h_top, h_prefix) = if top.converged && pre.converged {
        (Method::Perron, top.root.ln(), pre.root.ln())
    } else {
        let prefix_far = prefix_counts_of(&p, horizon);
        let fit = big_ratio(&prefix_far[RATIO_CHECK_K], &prefix_far[RATIO_CHECK_K - 1]);
        (Method::SequenceFit, count_ratio.ln(), fit.ln())
    };
    Ok(EntropyReport {
        block_counts: all_blocks[..k].to_vec(),
        prefix_counts: prefix,
        h_top,
        h_prefix,
        method,
        k_used: k,
        count_ratio,
        ratio_consistent: (h_top.exp() - count_ratio).abs() <= RATIO_TOLERANCE,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecimationBound {
    /// Index of the input set, or `None` for the interleaving itself.
    pub source: Option<usize>,
    pub offset: usize,
    pub modulus: usize,
    pub entropy: f64,
    pub upper: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyLawReport {
    pub factors: Vec<f64>,
    pub interleaved: f64,
    pub mean: f64,
    pub mean_law_holds: bool,
    pub decimations: Vec<DecimationBound>,
}

impl EntropyLawReport {
    pub fn holds(&self) -> bool {
        self.mean_law_holds && self.decimations.iter().all(|d| d.holds)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "factors": self.factors,
            "interleaved": self.interleaved,
            "mean": self.mean,
            "mean_law_holds": self.mean_law_holds,
            "decimations": self.decimations.iter().map(|d| json!({
                "source": d.source,
                "offset": d.offset,
                "modulus": d.modulus,
                "entropy": d.entropy,
                "upper": d.upper,
                "holds": d.holds,
            })).collect::<Vec<_>>(),
            "holds": self.holds(),
        })
    }
}

/// Checks `h(X_0 ⊛ ⋯ ⊛ X_{m−1}) = mean h(X_i)` and the decimation bounds
/// `0 ≤ h(ψ_{i,n}(Y)) ≤ min(n·h(Y), log|A|)` for every input `Y` and for the
/// interleaving, at level `n`.
pub fn check_entropy_laws<P: AsCanonical>(ps: &[P], n: usize) -> Result<EntropyLawReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    let canon = ps.iter().map(|p| p.canonical()).collect::<Result<Vec<_>>>()?;
    let interleaved = transform::interleave(&canon)?;
    let factors = canon.iter().map(|c| h_top(&**c)).collect::<Result<Vec<_>>>()?;
    let whole = h_top(&interleaved)?;
    let mean = factors.iter().sum::<f64>() / factors.len() as f64;
    let log_a = (interleaved.alphabet().len() as f64).ln();
    let mut decimations = Vec::new();
    let sources = canon.iter().map(|c| &**c).enumerate().map(|(i, c)| (Some(i), c));
    for (source, set) in sources.chain(std::iter::once((None, &interleaved))) {
        let h = h_top(set)?;
        for offset in 0..n {
            let dec = transform::decimate(set, offset, n)?;
            let entropy = h_top(&dec)?;
            let upper = (n as f64 * h).min(log_a);
            let holds = entropy >= -LAW_TOLERANCE && entropy <= upper + LAW_TOLERANCE;
            decimations.push(DecimationBound { source, offset, modulus: n, entropy, upper, holds });
        }
    }
    Ok(EntropyLawReport {
        mean_law_holds: (whole - mean).abs() <= LAW_TOLERANCE,
        factors,
        interleaved: whole,
        mean,
        decimations,
    })
}
