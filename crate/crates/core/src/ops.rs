//! Boolean operations, product (concatenation), star and reversal. Every
//! operation returns the minimal DFA of its result.
//!
//! Also holds the closed-form upper bounds for bifix-free operands and the
//! star dichotomy predictor.

use std::collections::VecDeque;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::Serialize;

use crate::automata::{determinize_with, minimize, Dfa, Limits, Nfa};
use crate::error::{input, Error, Result};
use crate::freeness::check_conventional;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BooleanKind {
    Union,
    Intersection,
    Difference,
    SymmetricDifference,
}

impl BooleanKind {
    pub const ALL: [BooleanKind; 4] = [
        BooleanKind::Union,
        BooleanKind::Intersection,
        BooleanKind::Difference,
        BooleanKind::SymmetricDifference,
    ];

    pub fn combine(self, left: bool, right: bool) -> bool {
        match self {
            BooleanKind::Union => left || right,
            BooleanKind::Intersection => left && right,
            BooleanKind::Difference => left && !right,
            BooleanKind::SymmetricDifference => left != right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BooleanKind::Union => "union",
            BooleanKind::Intersection => "intersection",
            BooleanKind::Difference => "difference",
            BooleanKind::SymmetricDifference => "symdiff",
        }
    }
}

impl fmt::Display for BooleanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BooleanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(BooleanKind::Union),
            "inter" | "intersection" => Ok(BooleanKind::Intersection),
            "diff" | "difference" => Ok(BooleanKind::Difference),
            "symdiff" | "symmetric_difference" => Ok(BooleanKind::SymmetricDifference),
            other => input(format!("unknown Boolean operation {other:?}")),
        }
    }
}

/// Reachable direct product of `d1` and `d2` with finals chosen by `kind`,
/// not minimized.
pub(crate) fn product_automaton(d1: &Dfa, d2: &Dfa, kind: BooleanKind, limits: &Limits) -> Result<Dfa> {
    let d2 = d2.realign(d1.alphabet())?;
    let n2 = d2.state_count();
    let k = d1.symbol_count();
    let mut index = vec![usize::MAX; d1.state_count() * n2];
    let mut pairs = vec![(d1.initial(), d2.initial())];
    index[d1.initial() * n2 + d2.initial()] = 0;
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (p, q) = pairs[i];
        for a in 0..k {
            let key = d1.next(p, a) * n2 + d2.next(q, a);
            if index[key] == usize::MAX {
                if pairs.len() >= limits.max_states {
                    return Err(Error::Resource(format!(
                        "product automaton exceeded {} states",
                        limits.max_states
                    )));
                }
                index[key] = pairs.len();
                pairs.push((d1.next(p, a), d2.next(q, a)));
                queue.push_back(index[key]);
            }
            delta.push(index[key]);
        }
    }
    let finals = pairs
        .iter()
        .map(|&(p, q)| kind.combine(d1.is_final(p), d2.is_final(q)))
        .collect();
    Ok(Dfa::from_parts(d1.alphabet().to_vec(), delta, 0, finals))
}

pub fn boolean(d1: &Dfa, d2: &Dfa, kind: BooleanKind) -> Result<Dfa> {
    boolean_with(d1, d2, kind, &Limits::default())
}

pub fn boolean_with(d1: &Dfa, d2: &Dfa, kind: BooleanKind, limits: &Limits) -> Result<Dfa> {
    Ok(minimize(&product_automaton(d1, d2, kind, limits)?))
}

/// NFA for `L(d1)·L(d2)`: the disjoint union of both DFAs with epsilon
/// moves from the finals of `d1` to the initial state of `d2`.
pub(crate) fn concat_nfa(d1: &Dfa, d2: &Dfa) -> Result<Nfa> {
    let d2 = d2.realign(d1.alphabet())?;
    let off = d1.state_count();
    let mut nfa = Nfa::new(d1.alphabet().to_vec(), off + d2.state_count())?;
    for (d, shift) in [(d1, 0), (&d2, off)] {
        for q in 0..d.state_count() {
            for (a, &t) in d.row(q).iter().enumerate() {
                nfa.add_transition(q + shift, a, t + shift)?;
            }
        }
    }
    for f in d1.finals() {
        nfa.add_epsilon(f, d2.initial() + off)?;
    }
    for f in d2.finals() {
        nfa.set_final(f + off, true)?;
    }
    nfa.add_initial(d1.initial())?;
    Ok(nfa)
}

pub fn concat(d1: &Dfa, d2: &Dfa) -> Result<Dfa> {
    concat_with(d1, d2, &Limits::default())
}

pub fn concat_with(d1: &Dfa, d2: &Dfa, limits: &Limits) -> Result<Dfa> {
    Ok(minimize(&determinize_with(&concat_nfa(d1, d2)?, limits)?))
}

/// NFA for `L*`: epsilon moves from every final state back to the initial
/// state, plus a fresh accepting initial state for the empty word. On a
/// non-returning DFA this accepts exactly what the plain construction (the
/// initial state made accepting) does.
pub(crate) fn star_nfa(d: &Dfa) -> Result<Nfa> {
    let n = d.state_count();
    let mut nfa = Nfa::new(d.alphabet().to_vec(), n + 1)?;
    for q in 0..n {
        for (a, &t) in d.row(q).iter().enumerate() {
            nfa.add_transition(q, a, t)?;
        }
    }
    for f in d.finals() {
        nfa.set_final(f, true)?;
        nfa.add_epsilon(f, d.initial())?;
    }
    nfa.add_initial(n)?;
    nfa.set_final(n, true)?;
    nfa.add_epsilon(n, d.initial())?;
    Ok(nfa)
}

pub fn star(d: &Dfa) -> Result<Dfa> {
    star_with(d, &Limits::default())
}

pub fn star_with(d: &Dfa, limits: &Limits) -> Result<Dfa> {
    Ok(minimize(&determinize_with(&star_nfa(d)?, limits)?))
}

/// Predicted state complexity of `L*` for a minimal bifix-free DFA in
/// conventional numbering: `n-1` if some letter sends a state of
/// `0..=n-3` to the empty state `n-1`, otherwise `n-2`.
pub fn star_complexity_predicted(d: &Dfa) -> Result<usize> {
    check_conventional(d)?;
    let n = d.state_count();
    let hits_empty = (0..=n - 3).any(|q| d.row(q).iter().any(|&t| t == n - 1));
    Ok(if hits_empty { n - 1 } else { n - 2 })
}

/// Reversed-edge NFA: initial states are the finals of `d`, the only final
/// state is the initial state of `d`.
pub(crate) fn reverse_nfa(d: &Dfa) -> Result<Nfa> {
    let mut nfa = Nfa::new(d.alphabet().to_vec(), d.state_count())?;
    for q in 0..d.state_count() {
        for (a, &t) in d.row(q).iter().enumerate() {
            nfa.add_transition(t, a, q)?;
        }
    }
    for f in d.finals() {
        nfa.add_initial(f)?;
    }
    nfa.set_final(d.initial(), true)?;
    Ok(nfa)
}

pub fn reverse(d: &Dfa) -> Result<Dfa> {
    reverse_with(d, &Limits::default())
}

pub fn reverse_with(d: &Dfa, limits: &Limits) -> Result<Dfa> {
    Ok(minimize(&determinize_with(&reverse_nfa(d)?, limits)?))
}

/// Tight upper bounds on the state complexity of operations on bifix-free
/// languages with `m` and `n` states. Boolean entries need `m, n >= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub union: Option<u64>,
    pub symdiff: Option<u64>,
    pub intersection: Option<u64>,
    pub difference: Option<u64>,
    pub concat: u64,
    pub star: u64,
    pub reverse: u64,
}

impl Bounds {
    pub fn boolean(&self, kind: BooleanKind) -> Option<u64> {
        match kind {
            BooleanKind::Union => self.union,
            BooleanKind::Intersection => self.intersection,
            BooleanKind::Difference => self.difference,
            BooleanKind::SymmetricDifference => self.symdiff,
        }
    }
}

fn reverse_bound(n: usize) -> Result<u64> {
    if n - 3 >= 63 {
        return input(format!("reversal bound overflows at n = {n}"));
    }
    Ok((1u64 << (n - 3)) + 2)
}

pub fn bounds(m: usize, n: usize) -> Result<Bounds> {
    if m < 3 || n < 3 {
        return input(format!("bounds need m, n >= 3, got ({m}, {n})"));
    }
    let boolean = m >= 4 && n >= 4;
    let (mu, nu) = (m as u64, n as u64);
    let when = |v: u64| boolean.then_some(v);
    Ok(Bounds {
        union: when(mu * nu - (mu + nu)),
        symdiff: when(mu * nu - (mu + nu)),
        intersection: when(mu * nu - 3 * (mu + nu - 4)),
        difference: when(mu * nu - (2 * mu + 3 * nu - 9)),
        concat: mu + nu - 2,
        star: nu - 1,
        reverse: reverse_bound(n)?,
    })
}

/// Attainable state complexities of the reversal of an `n`-state bifix-free
/// language: `⌈3 + log2(n-2)⌉ ..= 2 + 2^(n-3)`.
pub fn reverse_range(n: usize) -> Result<RangeInclusive<u64>> {
    if n < 3 {
        return input(format!("reverse range needs n >= 3, got {n}"));
    }
    let ceil_log2 = (n as u64 - 2).next_power_of_two().trailing_zeros() as u64;
    Ok(3 + ceil_log2..=reverse_bound(n)?)
}
