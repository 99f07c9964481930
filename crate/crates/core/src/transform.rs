//! Set-level decimation `ψ_{i,n}`, n-fold interleaving and the n-fold
//! interleaving closure `X^[n]`.

use crate::automaton::{self, Interleaving, StrideSubsets};
use crate::error::{Error, Result};
use crate::presentation::{AsCanonical, CanonicalForm, Limits};
use crate::word::Symbol;

fn check_modulus(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("modulus must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub fn decimate(p: impl AsCanonical, offset: usize, modulus: usize) -> Result<CanonicalForm> {
    decimate_within(p, offset, modulus, &Limits::default())
}

/// `ψ_{i,n}(X) = ψ_{0,n}(S^i X)`: start from the states reachable in exactly
/// `i` steps, then let each output symbol consume a length-`n` path.
pub fn decimate_within(p: impl AsCanonical, offset: usize, modulus: usize, limits: &Limits) -> Result<CanonicalForm> {
    check_modulus(modulus)?;
    let p = p.canonical_within(limits)?;
    if modulus == 1 && offset == 0 {
        return Ok(p.into_owned());
    }
    let machine = StrideSubsets { dfa: p.dfa(), start: p.dfa().layer(offset), stride: modulus };
    let raw = automaton::materialize(&machine, limits.max_states)?;
    Ok(CanonicalForm::from_dfa(p.alphabet().clone(), &raw))
}

/// The principal decimations `ψ_{0,n}(X), …, ψ_{n−1,n}(X)`.
pub fn principal_decimations(p: impl AsCanonical, modulus: usize, limits: &Limits) -> Result<Vec<CanonicalForm>> {
    check_modulus(modulus)?;
    let p = p.canonical_within(limits)?;
    (0..modulus).map(|i| decimate_within(&*p, i, modulus, limits)).collect()
}

pub fn interleave<P: AsCanonical>(parts: &[P]) -> Result<CanonicalForm> {
    interleave_within(parts, &Limits::default())
}

/// `X_0 ⊛ X_1 ⊛ ⋯ ⊛ X_{n−1}`.
pub fn interleave_within<P: AsCanonical>(parts: &[P], limits: &Limits) -> Result<CanonicalForm> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("interleave needs at least one factor".into()));
    }
    let canon = parts.iter().map(|p| p.canonical_within(limits)).collect::<Result<Vec<_>>>()?;
    let alphabet = canon[0].alphabet().clone();
    for c in &canon[1..] {
        alphabet.ensure_same(c.alphabet())?;
    }
    if canon.len() == 1 {
        return Ok(canon.into_iter().next().expect("one factor").into_owned());
    }
    let machine = Interleaving { parts: canon.iter().map(|c| c.dfa()).collect() };
    let raw = automaton::materialize(&machine, limits.max_states)?;
    Ok(CanonicalForm::from_dfa(alphabet, &raw))
}

/// `X^(⊛n)`: the interleaving of `n` copies of `X`.
pub fn self_interleave(p: impl AsCanonical, n: usize) -> Result<CanonicalForm> {
    check_modulus(n)?;
    let p = p.canonical()?;
    let copies: Vec<&CanonicalForm> = std::iter::repeat_n(&*p, n).collect();
    interleave(&copies)
}

pub fn interleave_closure(p: impl AsCanonical, modulus: usize) -> Result<CanonicalForm> {
    interleave_closure_within(p, modulus, &Limits::default())
}

/// `X^[n] = ψ_{0,n}(X) ⊛ ⋯ ⊛ ψ_{n−1,n}(X)`.
pub fn interleave_closure_within(p: impl AsCanonical, modulus: usize, limits: &Limits) -> Result<CanonicalForm> {
    let parts = principal_decimations(p, modulus, limits)?;
    interleave_within(&parts, limits)
}

/// Shortest prefix of `X^[n]` missing from `X`, or `None` when `X = X^[n]`.
///
/// The closure is explored lazily against `X`, so a failing modulus is
/// usually refuted long before the closure would be fully built.
pub fn closure_excess(p: impl AsCanonical, modulus: usize, limits: &Limits) -> Result<Option<Vec<Symbol>>> {
    let p = p.canonical_within(limits)?;
    let parts = principal_decimations(&*p, modulus, limits)?;
    let machine = Interleaving { parts: parts.iter().map(|c| c.dfa()).collect() };
    automaton::find_difference(&machine, p.dfa(), limits.max_states)
}

/// `X = X^[n]`, decided without materializing the closure.
pub fn is_closed_under(p: impl AsCanonical, modulus: usize, limits: &Limits) -> Result<bool> {
    Ok(closure_excess(p, modulus, limits)?.is_none())
}
