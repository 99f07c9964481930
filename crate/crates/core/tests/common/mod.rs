//! Random inputs, an independent path-enumeration oracle, and the algebraic
//! law checks shared by the property suites and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use shiftlab::entropy;
use shiftlab::factorize::{self, divisors, Spectrum};
use shiftlab::oracle::{table_of, PrefixTable};
use shiftlab::presentation::{self, is_equal, is_subset};
use shiftlab::stability;
use shiftlab::transform::{decimate, interleave, interleave_closure, self_interleave};
use shiftlab::{Alphabet, CanonicalForm, Error, Presentation, Symbol};

pub type Check = Result<(), String>;

pub fn alphabet(k: usize) -> Alphabet {
    Alphabet::from_chars(&"012"[..k]).unwrap()
}

/// Random partial DFA on up to 8 states, start state 0, kept when its
/// canonical form has at most `max_states` states. Sets with fewer than two
/// canonical states are kept only a fifth of the time.
pub fn random_set(rng: &mut impl Rng, k: usize, max_states: usize) -> CanonicalForm {
    loop {
        let n = rng.gen_range(1..=8);
        let mut edges = Vec::new();
        for s in 0..n as u32 {
            for a in 0..k as Symbol {
                if rng.gen_bool(0.75) {
                    edges.push((s, a, rng.gen_range(0..n as u32)));
                }
            }
        }
        let c = Presentation::new(alphabet(k), n, edges, vec![0]).unwrap().normalize().unwrap();
        if c.state_count() <= max_states && (c.state_count() >= 2 || rng.gen_bool(0.2)) {
            return c;
        }
    }
}

/// Alphabet size for random inputs; unary alphabets carry only two closed sets.
pub fn random_alphabet_size(rng: &mut impl Rng) -> usize {
    [1, 2, 2, 3, 3][rng.gen_range(0..5)]
}

/// Random graph presentation: nondeterministic, several initial states.
pub fn random_presentation(rng: &mut impl Rng, k: usize, max_states: usize) -> Presentation {
    let n = rng.gen_range(1..=max_states);
    let mut edges = Vec::new();
    for _ in 0..rng.gen_range(1..=2 * n * k) {
        edges.push((rng.gen_range(0..n as u32), rng.gen_range(0..k as Symbol), rng.gen_range(0..n as u32)));
    }
    let initials = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..n as u32)).collect();
    Presentation::new(alphabet(k), n, edges, initials).unwrap()
}

/// Strategy for sets over a fixed alphabet size.
pub fn arb_set(k: usize) -> impl Strategy<Value = CanonicalForm> {
    arb_set_upto(k, 6)
}

pub fn arb_set_upto(k: usize, max_states: usize) -> impl Strategy<Value = CanonicalForm> {
    (1usize..=8)
        .prop_flat_map(move |n| proptest::collection::vec(proptest::option::weighted(0.75, 0..n as u32), n * k))
        .prop_map(move |cells| {
            let n = cells.len() / k;
            let edges = cells
                .iter()
                .enumerate()
                .filter_map(|(i, t)| t.map(|t| ((i / k) as u32, (i % k) as Symbol, t)))
                .collect();
            Presentation::new(alphabet(k), n, edges, vec![0]).unwrap().normalize().unwrap()
        })
        .prop_filter("canonical form within the state cap", move |c| c.state_count() <= max_states)
}

pub fn arb_sets(count: usize) -> impl Strategy<Value = Vec<CanonicalForm>> {
    arb_sets_upto(count, 6)
}

/// Sets sharing one alphabet, small enough for products of several copies.
pub fn arb_sets_upto(count: usize, max_states: usize) -> impl Strategy<Value = Vec<CanonicalForm>> {
    prop::sample::select(vec![1usize, 2, 2, 3, 3])
        .prop_flat_map(move |k| proptest::collection::vec(arb_set_upto(k, max_states), count))
}

pub fn arb_presentation() -> impl Strategy<Value = Presentation> {
    (1usize..=3, 1usize..=6).prop_flat_map(|(k, n)| {
        (
            proptest::collection::vec((0..n as u32, 0..k as Symbol, 0..n as u32), 1..=2 * n * k),
            proptest::collection::vec(0..n as u32, 1..=2),
        )
            .prop_map(move |(edges, initials)| Presentation::new(alphabet(k), n, edges, initials).unwrap())
    })
}

/// Prefix table computed straight from the graph: `w` is a prefix exactly
/// when some path labeled `w` from an initial state ends in a state that
/// can still walk `|states|` more steps, which forces an infinite
/// continuation.
pub fn graph_table(p: &Presentation, depth: usize) -> PrefixTable {
    let n = p.state_count();
    let mut alive: Vec<bool> = vec![true; n];
    for _ in 0..n {
        alive = (0..n).map(|s| p.edges().iter().any(|&(f, _, t)| f as usize == s && alive[t as usize])).collect();
    }
    let start: BTreeSet<u32> = p.initials().iter().copied().filter(|&s| alive[s as usize]).collect();
    let mut words = BTreeSet::new();
    let mut stack = vec![(start, Vec::new())];
    while let Some((here, w)) = stack.pop() {
        if here.is_empty() {
            continue;
        }
        if w.len() == depth {
            words.insert(w);
            continue;
        }
        for a in 0..p.alphabet().len() as Symbol {
            let next: BTreeSet<u32> = p
                .edges()
                .iter()
                .filter(|&&(f, b, t)| b == a && here.contains(&f) && alive[t as usize])
                .map(|&(_, _, t)| t)
                .collect();
            let mut v = w.clone();
            v.push(a);
            stack.push((next, v));
        }
    }
    PrefixTable::new(p.alphabet().clone(), depth, words).unwrap()
}

fn show(c: &CanonicalForm, depth: usize) -> String {
    match table_of(c, depth) {
        Ok(t) => t.words().iter().take(6).map(|w| c.alphabet().format_finite(w)).collect::<Vec<_>>().join(","),
        Err(e) => e.to_string(),
    }
}

pub fn same(what: &str, a: &CanonicalForm, b: &CanonicalForm) -> Check {
    match is_equal(a, b) {
        Ok(true) => Ok(()),
        Ok(false) => {
            let w = presentation::difference_witness(a, b)
                .unwrap()
                .or_else(|| presentation::difference_witness(b, a).unwrap())
                .unwrap_or_default();
            Err(format!(
                "{what}: sets differ at prefix {:?} (left {} / right {})",
                a.alphabet().format_finite(&w),
                show(a, 4),
                show(b, 4)
            ))
        }
        Err(e) => Err(format!("{what}: {e}")),
    }
}

pub fn within(what: &str, a: &CanonicalForm, b: &CanonicalForm) -> Check {
    match is_subset(a, b) {
        Ok(true) => Ok(()),
        Ok(false) => {
            let w = presentation::difference_witness(a, b).unwrap().unwrap_or_default();
            Err(format!("{what}: {:?} escapes", a.alphabet().format_finite(&w)))
        }
        Err(e) => Err(format!("{what}: {e}")),
    }
}

pub fn ensure(what: &str, ok: bool) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn op<T>(what: &str, r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

// ---------------------------------------------------------------- transform

/// `ψ_{j,m}(ψ_{i,n}(X)) = ψ_{i+jn,mn}(X)`.
pub fn decimation_composition(x: &CanonicalForm, i: usize, n: usize, j: usize, m: usize) -> Check {
    let lhs = op("decimate", decimate(decimate(x, i, n).unwrap(), j, m))?;
    let rhs = op("decimate", decimate(x, i + j * n, m * n))?;
    same("decimation composition", &lhs, &rhs)
}

/// `ψ_{i,n}(SX) = ψ_{i+1,n}(X)`.
pub fn decimation_shift(x: &CanonicalForm, i: usize, n: usize) -> Check {
    let sx = presentation::shift_set(x, 1).unwrap();
    same("decimation of shift", &decimate(&sx, i, n).unwrap(), &decimate(x, i + 1, n).unwrap())
}

/// `ψ_{i,n}(X_0 ⊛ … ⊛ X_{n−1}) = X_i` when every factor is nonempty, and
/// `X^[n]` is the interleaving of the principal decimations.
pub fn reconstruction(parts: &[CanonicalForm], x: &CanonicalForm) -> Check {
    let n = parts.len();
    let woven = op("interleave", interleave(parts))?;
    if parts.iter().any(|p| p.is_empty()) {
        return ensure("interleaving with an empty factor is empty", woven.is_empty());
    }
    for (i, p) in parts.iter().enumerate() {
        same(&format!("factor {i} recovered"), &decimate(&woven, i, n).unwrap(), p)?;
    }
    let decs: Vec<_> = (0..n).map(|i| decimate(x, i, n).unwrap()).collect();
    same("closure is interleaved decimations", &interleave_closure(x, n).unwrap(), &interleave(&decs).unwrap())?;
    // a set is a closure fixpoint exactly when it is an n-fold interleaving
    same("interleavings are closed", &interleave_closure(&woven, n).unwrap(), &woven)
}

/// Extension, idempotence, isotonicity, and union inclusion.
pub fn moore_axioms(x: &CanonicalForm, y: &CanonicalForm, n: usize) -> Check {
    let cx = interleave_closure(x, n).unwrap();
    within("extension X ⊆ X^[n]", x, &cx)?;
    same("idempotence", &interleave_closure(&cx, n).unwrap(), &cx)?;
    let xy = presentation::union(x, y).unwrap();
    let cxy = interleave_closure(&xy, n).unwrap();
    within("isotone X ⊆ X∪Y ⇒ X^[n] ⊆ (X∪Y)^[n]", &cx, &cxy)?;
    let cy = interleave_closure(y, n).unwrap();
    within("union inclusion", &presentation::union(&cx, &cy).unwrap(), &cxy)
}

/// `⊛_n (⊛_m X_{i+jn}) = ⊛_{mn} X_k`; `xs` has `m·n` entries.
pub fn shuffle(xs: &[CanonicalForm], m: usize, n: usize) -> Check {
    assert_eq!(xs.len(), m * n);
    let inner: Vec<_> =
        (0..n).map(|i| interleave(&(0..m).map(|j| &xs[i + j * n]).collect::<Vec<_>>()).unwrap()).collect();
    let lhs = op("interleave", interleave(&inner))?;
    let rhs = op("interleave", interleave(xs))?;
    same("shuffle identity", &lhs, &rhs)
}

/// Modulus pairs up to 4 whose lcm stays at most 6; `X^[12]` of a six-state
/// set overruns the default state budget.
pub const LCM_PAIRS: [(usize, usize); 14] =
    [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 4)];

/// `(X^[m])^[n] = (X^[n])^[m] = X^[lcm(m,n)]` and `X^[m] ⊆ X^[l]` for the
/// multiple `l = lcm(m,n)`.
pub fn lcm_law(x: &CanonicalForm, m: usize, n: usize) -> Check {
    let l = m * n / gcd(m, n);
    let cm = interleave_closure(x, m).unwrap();
    let cn = interleave_closure(x, n).unwrap();
    let cl = interleave_closure(x, l).unwrap();
    same("(X^[m])^[n] = X^[lcm]", &interleave_closure(&cm, n).unwrap(), &cl)?;
    same("(X^[n])^[m] = X^[lcm]", &interleave_closure(&cn, m).unwrap(), &cl)?;
    within("X^[m] ⊆ X^[lcm]", &cm, &cl)?;
    within("X^[n] ⊆ X^[lcm]", &cn, &cl)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(⊛ X_i) ∩ (⊛ X_{n+i}) = ⊛ (X_i ∩ X_{n+i})`; `xs` has `2n` entries.
pub fn intersection_law(xs: &[CanonicalForm], n: usize) -> Check {
    let lhs = presentation::intersect(interleave(&xs[..n]).unwrap(), interleave(&xs[n..]).unwrap()).unwrap();
    let meets: Vec<_> = (0..n).map(|i| presentation::intersect(&xs[i], &xs[n + i]).unwrap()).collect();
    same("interleaving commutes with intersection", &lhs, &interleave(&meets).unwrap())
}

/// `X^[n] ∩ Y^[n] = Z^[n]` with `Z = ⊛ (ψ_{i,n}X ∩ ψ_{i,n}Y)`.
pub fn closure_intersection(x: &CanonicalForm, y: &CanonicalForm, n: usize) -> Check {
    let lhs = presentation::intersect(interleave_closure(x, n).unwrap(), interleave_closure(y, n).unwrap()).unwrap();
    let meets: Vec<_> = (0..n)
        .map(|i| presentation::intersect(decimate(x, i, n).unwrap(), decimate(y, i, n).unwrap()).unwrap())
        .collect();
    let z = interleave(&meets).unwrap();
    same("closure intersection", &lhs, &interleave_closure(&z, n).unwrap())
}

/// `S(X_0 ⊛ … ⊛ X_{n−1}) = X_1 ⊛ … ⊛ X_{n−1} ⊛ S(X_0)` and `S(X^[n]) = (SX)^[n]`.
pub fn shift_laws(xs: &[CanonicalForm]) -> Check {
    let n = xs.len();
    let lhs = presentation::shift_set(interleave(xs).unwrap(), 1).unwrap();
    let mut rotated: Vec<CanonicalForm> = xs[1..].to_vec();
    rotated.push(presentation::shift_set(&xs[0], 1).unwrap());
    same("shift of interleaving", &lhs, &interleave(&rotated).unwrap())?;
    let x = &xs[0];
    let a = presentation::shift_set(interleave_closure(x, n).unwrap(), 1).unwrap();
    let b = interleave_closure(presentation::shift_set(x, 1).unwrap(), n).unwrap();
    same("shift of closure", &a, &b)?;
    let sj = presentation::shift_set(presentation::shift_set(x, 2).unwrap(), 1).unwrap();
    same("shift composition", &sj, &presentation::shift_set(x, 3).unwrap())
}

/// `(X^(⊛n))^(⊛m) = X^(⊛mn)`.
pub fn self_interleave_exponents(x: &CanonicalForm, m: usize, n: usize) -> Check {
    let lhs = self_interleave(self_interleave(x, n).unwrap(), m).unwrap();
    same("self-interleaving exponents", &lhs, &self_interleave(x, m * n).unwrap())
}

// ---------------------------------------------------------------- factorize

/// Spectrum structure: contains 1, divisor- and lcm-closed, per-n results
/// agree with direct tests, and the self-spectrum is a subset.
pub fn spectrum_structure(x: &CanonicalForm) -> Check {
    if x.is_empty() {
        return ensure("spectrum of ∅ is EmptySet", matches!(factorize::spectrum(x, 4), Err(Error::EmptySet)));
    }
    let report = match factorize::spectrum(x, factorize::DEFAULT_CAP) {
        Ok(r) => r,
        Err(Error::BoundExceeded { .. }) => return Ok(()),
        Err(e) => return Err(format!("spectrum: {e}")),
    };
    for (&n, &ok) in &report.per_n {
        let direct = same("", &interleave_closure(x, n).unwrap(), x).is_ok();
        ensure(&format!("per_n[{n}] = {ok} but direct test says {direct}"), ok == direct)?;
        ensure(&format!("spectrum membership of {n}"), report.spectrum.contains(n) == ok)?;
    }
    ensure("1 in spectrum", report.spectrum.contains(1))?;
    if let Spectrum::Finite(set) = &report.spectrum {
        let n0 = *set.iter().next_back().unwrap();
        ensure(&format!("spectrum {set:?} is the divisor set of its maximum"), *set == divisors(n0))?;
        for &a in set {
            for &b in set {
                ensure("lcm-closed", set.contains(&(a * b / gcd(a, b))))?;
            }
        }
    }
    let own = op("self_spectrum", factorize::self_spectrum(x, factorize::DEFAULT_CAP))?;
    match (&own.spectrum, &report.spectrum) {
        (_, Spectrum::All) => Ok(()),
        (Spectrum::Finite(s), Spectrum::Finite(t)) => ensure("self-spectrum ⊆ spectrum", s.is_subset(t)),
        (Spectrum::All, Spectrum::Finite(_)) => Err("self-spectrum is everything but spectrum is finite".into()),
    }
}

/// Shift-invariant sets factor only into equal decimations.
pub fn shift_invariant_self_interleaving(x: &CanonicalForm) -> Check {
    if presentation::shift_set(x, 1).unwrap() != *x {
        return Ok(());
    }
    for n in 2..=4 {
        if interleave_closure(x, n).unwrap() != *x {
            continue;
        }
        let d0 = decimate(x, 0, n).unwrap();
        for i in 1..n {
            same(&format!("ψ_({i},{n}) = ψ_(0,{n}) of a shift-invariant set"), &decimate(x, i, n).unwrap(), &d0)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- stability

/// Decimations, interleavings and closures of weakly stable sets have a
/// witness within the default bound.
pub fn weak_stability_preserved(xs: &[CanonicalForm], n: usize) -> Check {
    let stable = |what: &str, c: &CanonicalForm| -> Check {
        let report = op(what, stability::stability_report(c, None))?;
        ensure(&format!("{what}: no weak-stability witness"), report.is_weakly_shift_stable())
    };
    stable("input", &xs[0])?;
    for i in 0..n {
        stable("decimation", &decimate(&xs[0], i, n).unwrap())?;
    }
    stable("closure", &interleave_closure(&xs[0], n).unwrap())?;
    stable("interleaving", &interleave(xs).unwrap())
}

/// Stability of shifts and decimations follows from the input's.
pub fn stability_inheritance(x: &CanonicalForm, n: usize) -> Check {
    let r = stability::stability_report(x, None).unwrap();
    for i in 0..n {
        let d = stability::stability_report(decimate(x, i, n).unwrap(), None).unwrap();
        if r.shift_stable {
            ensure("decimation of a shift-stable set is shift-stable", d.shift_stable)?;
        }
        if r.shift_invariant {
            ensure("decimation of a shift-invariant set is shift-invariant", d.shift_invariant)?;
        }
    }
    Ok(())
}

/// Minimal forbidden blocks regenerate a shift of finite type.
pub fn forbidden_roundtrip(k: usize, blocks: &[Vec<Symbol>]) -> Check {
    let a = alphabet(k);
    let x = stability::from_forbidden_blocks(&a, blocks).unwrap();
    let longest = blocks.iter().map(Vec::len).max().unwrap_or(1);
    let minimal = stability::minimal_forbidden_blocks(&x, longest).unwrap();
    let back = stability::from_forbidden_blocks(&a, &minimal).unwrap();
    same("forbidden-block roundtrip", &back, &x)?;
    // any presentable set sits inside the set defined by its forbidden blocks
    let report = stability::stability_report(&x, None).unwrap();
    ensure("sets of finite type are shift-stable", report.shift_stable)
}

// ---------------------------------------------------------------- entropy

pub fn count_inequalities(x: &CanonicalForm) -> Check {
    const K: usize = 12;
    let q = x.alphabet().len() as u64;
    let blocks = entropy::block_counts(x, K).unwrap();
    let prefixes = entropy::prefix_counts(x, K).unwrap();
    let shifted = entropy::prefix_counts(presentation::shift_set(x, 1).unwrap(), K).unwrap();
    let n = |v: &[num_bigint::BigUint], k: usize| -> u64 {
        if k == 0 {
            1
        } else {
            u64::try_from(&v[k - 1]).unwrap()
        }
    };
    for k in 1..=K {
        ensure("N^I ≤ N ≤ |A|^k", n(&prefixes, k) <= n(&blocks, k) && n(&blocks, k) <= q.pow(k as u32))?;
        for k2 in 1..=K - k {
            ensure("submultiplicativity", n(&blocks, k + k2) <= n(&blocks, k) * n(&blocks, k2))?;
        }
        if k < K {
            let (next, sx) = (n(&prefixes, k + 1), n(&shifted, k));
            ensure(&format!("sandwich at k={k}: {next} ≥ {sx} ≥ {next}/{q}"), next >= sx && sx * q >= next)?;
        }
    }
    Ok(())
}

pub fn entropy_agreement(x: &CanonicalForm) -> Check {
    if x.is_empty() {
        return Ok(());
    }
    let top = entropy::h_top(x).unwrap();
    let pre = entropy::h_prefix(x).unwrap();
    let log_a = (x.alphabet().len() as f64).ln();
    ensure(
        &format!("0 ≤ h_prefix {pre} ≤ h_top {top} ≤ log|A|"),
        pre >= -1e-12 && pre <= top + 1e-9 && top <= log_a + 1e-9,
    )?;
    ensure(&format!("h_prefix {pre} = h_top {top}"), (pre - top).abs() <= 1e-9)?;
    let shifted = entropy::h_top(presentation::shift_set(x, 1).unwrap()).unwrap();
    ensure(&format!("h(SX) {shifted} = h(X) {top}"), (shifted - top).abs() <= 1e-9)
}

pub fn mean_law(xs: &[CanonicalForm], n: usize) -> Check {
    if xs.iter().any(|x| x.is_empty()) {
        return Ok(());
    }
    let report = op("entropy laws", entropy::check_entropy_laws(xs, n))?;
    ensure(&format!("|h(⊛) − mean| = |{} − {}| > 1e−6", report.interleaved, report.mean), report.mean_law_holds)?;
    for d in &report.decimations {
        ensure(&format!("decimation bound {d:?}"), d.holds)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- oracle

fn tables_agree(what: &str, actual: &PrefixTable, expected: &PrefixTable) -> Check {
    if actual == expected {
        return Ok(());
    }
    let a = actual.alphabet();
    let extra: Vec<_> = actual.words().difference(expected.words()).take(3).map(|w| a.format_finite(w)).collect();
    let missing: Vec<_> = expected.words().difference(actual.words()).take(3).map(|w| a.format_finite(w)).collect();
    Err(format!("{what} at depth {}: automaton-only {extra:?}, oracle-only {missing:?}", expected.depth()))
}

/// Every operation against its table transcription; input tables at `depth`
/// unless the output would need more depth than its inputs.
pub fn oracle_agreement(xs: &[CanonicalForm], n: usize, i: usize, depth: usize) -> Check {
    let x = &xs[0];
    let t = table_of(x, depth).unwrap();
    let cmp = |what: &str, c: &CanonicalForm, expected: PrefixTable| {
        tables_agree(what, &table_of(c, expected.depth()).unwrap(), &expected)
    };
    cmp("decimate", &decimate(x, i, n).unwrap(), t.decimate(i, n).unwrap())?;
    cmp("closure", &interleave_closure(x, n).unwrap(), t.closure(n).unwrap())?;
    cmp("shift", &presentation::shift_set(x, i).unwrap(), t.shift(i).unwrap())?;
    cmp("product hull", &factorize::product_hull(x).unwrap(), t.hull())?;
    let parts = &xs[..n];
    let small: Vec<_> = parts.iter().map(|p| table_of(p, depth / n).unwrap()).collect();
    cmp("interleave", &interleave(parts).unwrap(), PrefixTable::interleave(&small).unwrap())?;
    let y = &xs[1];
    let ty = table_of(y, depth).unwrap();
    cmp("union", &presentation::union(x, y).unwrap(), t.union(&ty).unwrap())?;
    let meet = table_of(presentation::intersect(x, y).unwrap(), depth).unwrap();
    ensure("intersection table within both tables", meet.is_subset(&t.intersect(&ty).unwrap()).unwrap())
}

/// Normalization preserves the denotation of an arbitrary graph.
pub fn normalization_agreement(p: &Presentation, depth: usize) -> Check {
    let c = p.normalize().unwrap();
    tables_agree("normalize", &table_of(&c, depth).unwrap(), &graph_table(p, depth))?;
    let round = Presentation::from_json(&c.to_json()).unwrap().normalize().unwrap();
    ensure("JSON roundtrip", round == c)?;
    let back = c.to_presentation().normalize().unwrap();
    ensure("canonical form is a fixpoint", back == c)?;
    let shorter = depth.saturating_sub(1);
    ensure(
        "prefix extension",
        table_of(&c, depth).unwrap().truncate(shorter).unwrap() == table_of(&c, shorter).unwrap(),
    )
}
