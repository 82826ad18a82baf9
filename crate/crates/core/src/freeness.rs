//! Prefix-, suffix- and bifix-freeness of regular languages.
//!
//! A language is prefix-free iff its minimal DFA has an empty state
//! (non-final, fixed by every letter), at most one final state, and every
//! letter sends that final state to the empty state. It is suffix-free iff no
//! word `u` sends both the initial state and a state reached by a nonempty
//! word to final states; this is checked on the graph of state pairs. The
//! empty language and `{ε}` are both.
//!
//! Bifix-free minimal DFAs with `n` states are usually handled in the
//! *conventional* numbering: initial state `0`, final state `n-2`, empty
//! state `n-1`, and the middle states `1..=n-3`. See [`to_conventional`].

use crate::automata::{minimize, Dfa, State};
use crate::error::{input, Result};

/// Lowest-numbered non-final state fixed by every letter.
pub fn find_empty_state(d: &Dfa) -> Option<State> {
    (0..d.state_count()).find(|&q| !d.is_final(q) && d.row(q).iter().all(|&t| t == q))
}

fn prefix_free_minimal(m: &Dfa) -> bool {
    let finals = m.finals();
    if finals.is_empty() {
        return true;
    }
    let Some(empty) = find_empty_state(m) else {
        return false;
    };
    finals.len() == 1 && m.row(finals[0]).iter().all(|&t| t == empty)
}

fn suffix_free_minimal(m: &Dfa) -> bool {
    let n = m.state_count();
    let k = m.symbol_count();
    let init = m.initial();
    let mut after_nonempty = vec![false; n];
    let mut stack: Vec<State> = m.row(init).to_vec();
    while let Some(q) = stack.pop() {
        if !std::mem::replace(&mut after_nonempty[q], true) {
            stack.extend_from_slice(m.row(q));
        }
    }
    let mut seen = vec![false; n * n];
    let mut pairs: Vec<(State, State)> = (0..n).filter(|&q| after_nonempty[q]).map(|q| (init, q)).collect();
    for &(p, q) in &pairs {
        seen[p * n + q] = true;
    }
    while let Some((p, q)) = pairs.pop() {
        if m.is_final(p) && m.is_final(q) {
            return false;
        }
        for a in 0..k {
            let (s, t) = (m.next(p, a), m.next(q, a));
            if !std::mem::replace(&mut seen[s * n + t], true) {
                pairs.push((s, t));
            }
        }
    }
    true
}

pub fn is_prefix_free(d: &Dfa) -> bool {
    prefix_free_minimal(&minimize(d))
}

pub fn is_suffix_free(d: &Dfa) -> bool {
    suffix_free_minimal(&minimize(d))
}

pub fn is_bifix_free(d: &Dfa) -> bool {
    let m = minimize(d);
    prefix_free_minimal(&m) && suffix_free_minimal(&m)
}

/// No nonempty word leads back to the initial state of the minimal DFA.
pub fn is_non_returning(d: &Dfa) -> bool {
    let m = minimize(d);
    let init = m.initial();
    (0..m.state_count()).all(|q| m.row(q).iter().all(|&t| t != init))
}

/// Minimizes `d` and renumbers it into the conventional layout (initial `0`,
/// middle states `1..=n-3` in canonical order, final `n-2`, empty `n-1`).
/// Fails unless `d` recognizes a nonempty bifix-free language other than `{ε}`.
pub fn to_conventional(d: &Dfa) -> Result<Dfa> {
    let m = minimize(d);
    if !(prefix_free_minimal(&m) && suffix_free_minimal(&m)) {
        return input("language is not bifix-free");
    }
    let n = m.state_count();
    if n < 3 {
        return input("the empty language and {ε} have no conventional form");
    }
    let fin = m.finals()[0];
    let empty = find_empty_state(&m).expect("bifix-free DFA has an empty state");
    let init = m.initial();
    let mut relabel = vec![usize::MAX; n];
    relabel[init] = 0;
    relabel[fin] = n - 2;
    relabel[empty] = n - 1;
    for (r, next) in relabel.iter_mut().filter(|r| **r == usize::MAX).zip(1..) {
        *r = next;
    }
    let mut rows = vec![Vec::new(); n];
    for q in 0..n {
        rows[relabel[q]] = m.row(q).iter().map(|&t| relabel[t]).collect();
    }
    Dfa::new(m.alphabet().to_vec(), rows, 0, [n - 2])
}

/// Checks that `d` is a minimal bifix-free DFA already in conventional numbering.
pub fn check_conventional(d: &Dfa) -> Result<()> {
    let n = d.state_count();
    if n < 3 {
        return input(format!("expected at least 3 states, found {n}"));
    }
    if d.initial() != 0 || d.finals() != [n - 2] {
        return input("expected initial state 0 and the single final state n-2");
    }
    if find_empty_state(d) != Some(n - 1) {
        return input("expected the empty state to be n-1");
    }
    if minimize(d).state_count() != n {
        return input("DFA is not minimal");
    }
    if !is_bifix_free(d) {
        return input("language is not bifix-free");
    }
    Ok(())
}
