//! Atoms of a regular language and their quotient complexities.
//!
//! For a DFA with quotients `K_q` and a state set `S`, the atom `A_S` is the
//! intersection of the `K_q` for `q ∈ S` with the complements of the others.
//! It is recognized by a DFA over pairs `(X, Y)` of disjoint state sets
//! started at `(S, Q∖S)`: a letter maps `(X, Y)` to `(Xa, Ya)` when the images
//! stay disjoint and to the dead state otherwise. `(X, Y)` accepts when every
//! state of `X` is final and no state of `Y` is.

use std::collections::{BTreeSet, HashMap};

use crate::automata::{minimize, Dfa, State};
use crate::error::{input, Error, Result};

pub type StateSet = BTreeSet<State>;

/// Largest state count handled by the pair construction (bitmask width).
pub const MAX_ATOM_STATES: usize = 64;
/// Largest state count for which [`atoms`] enumerates all subsets.
pub const MAX_ENUMERATED_STATES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomAutomatonState {
    Pair { x: u64, y: u64 },
    Dead,
}

impl AtomAutomatonState {
    pub fn sets(&self) -> Option<(StateSet, StateSet)> {
        match *self {
            AtomAutomatonState::Pair { x, y } => Some((mask_to_set(x), mask_to_set(y))),
            AtomAutomatonState::Dead => None,
        }
    }
}

fn mask_to_set(mut m: u64) -> StateSet {
    let mut s = StateSet::new();
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

fn set_to_mask(n: usize, s: &StateSet) -> Result<u64> {
    s.iter().try_fold(0u64, |m, &q| {
        if q >= n {
            input(format!("state {q} is not a state of the automaton"))
        } else {
            Ok(m | 1 << q)
        }
    })
}

struct PairStepper {
    /// `image[a][q]` as a one-bit mask.
    image: Vec<Vec<u64>>,
    finals: u64,
}

impl PairStepper {
    fn new(d: &Dfa) -> Result<Self> {
        let n = d.state_count();
        if n > MAX_ATOM_STATES {
            return Err(Error::Resource(format!(
                "atom automata support at most {MAX_ATOM_STATES} states, got {n}"
            )));
        }
        let image = (0..d.symbol_count())
            .map(|a| (0..n).map(|q| 1u64 << d.next(q, a)).collect())
            .collect();
        let finals = d.finals().iter().fold(0u64, |m, &q| m | 1 << q);
        Ok(PairStepper { image, finals })
    }

    fn apply(&self, a: usize, mut set: u64) -> u64 {
        let row = &self.image[a];
        let mut out = 0;
        while set != 0 {
            out |= row[set.trailing_zeros() as usize];
            set &= set - 1;
        }
        out
    }

    fn step(&self, a: usize, state: AtomAutomatonState) -> AtomAutomatonState {
        match state {
            AtomAutomatonState::Pair { x, y } => {
                let (x, y) = (self.apply(a, x), self.apply(a, y));
                if x & y == 0 {
                    AtomAutomatonState::Pair { x, y }
                } else {
                    AtomAutomatonState::Dead
                }
            }
            AtomAutomatonState::Dead => AtomAutomatonState::Dead,
        }
    }

    fn accepting(&self, state: AtomAutomatonState) -> bool {
        match state {
            AtomAutomatonState::Pair { x, y } => x & !self.finals == 0 && y & self.finals == 0,
            AtomAutomatonState::Dead => false,
        }
    }
}

/// The reachable part of the pair automaton of `A_S`, with the dead state
/// materialized as a sink when reached, together with the label of each state.
pub fn atom_automaton_states(d: &Dfa, s: &StateSet) -> Result<(Dfa, Vec<AtomAutomatonState>)> {
    let stepper = PairStepper::new(d)?;
    let n = d.state_count();
    let x = set_to_mask(n, s)?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let start = AtomAutomatonState::Pair { x, y: all & !x };
    let k = d.symbol_count();

    let mut index = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for a in 0..k {
            let next = stepper.step(a, states[i]);
            let id = *index.entry(next).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            delta.push(id);
        }
        i += 1;
    }
    let finals = states.iter().map(|&st| stepper.accepting(st)).collect();
    Ok((Dfa::from_parts(d.alphabet().to_vec(), delta, 0, finals), states))
}

pub fn atom_automaton(d: &Dfa, s: &StateSet) -> Result<Dfa> {
    atom_automaton_states(d, s).map(|(dfa, _)| dfa)
}

/// Emptiness of `A_S` by a search that stops at the first accepting pair.
fn atom_is_nonempty(stepper: &PairStepper, k: usize, start: AtomAutomatonState) -> bool {
    let mut seen = std::collections::HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(st) = stack.pop() {
        if stepper.accepting(st) {
            return true;
        }
        for a in 0..k {
            let next = stepper.step(a, st);
            if next != AtomAutomatonState::Dead && seen.insert(next) {
                stack.push(next);
            }
        }
    }
    false
}

/// Every `S` with nonempty `A_S`, ordered by size and then lexicographically.
pub fn atoms(d: &Dfa) -> Result<Vec<StateSet>> {
    let n = d.state_count();
    if n > MAX_ENUMERATED_STATES {
        return Err(Error::Resource(format!(
            "atom enumeration supports at most {MAX_ENUMERATED_STATES} states, got {n}"
        )));
    }
    let stepper = PairStepper::new(d)?;
    let all = (1u64 << n) - 1;
    let mut found: Vec<StateSet> = (0..=all)
        .filter(|&x| atom_is_nonempty(&stepper, d.symbol_count(), AtomAutomatonState::Pair { x, y: all & !x }))
        .map(mask_to_set)
        .collect();
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found)
}

/// State complexity of a nonempty atom `A_S`.
pub fn atom_complexity(d: &Dfa, s: &StateSet) -> Result<usize> {
    let m = minimize(&atom_automaton(d, s)?);
    if m.finals().is_empty() {
        return Err(Error::Domain(format!("A_S is empty for S = {s:?}")));
    }
    Ok(m.state_count())
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Upper bound on the complexity of atom `A_S` of an `n`-state bifix-free
/// language (conventional numbering). Only the sets that can carry an atom
/// are accepted: `∅`, `{0}`, `{n-2}`, and nonempty sets of middle states.
///
/// For nonempty `S ⊆ {1..n-3}` the value `3 + Σ` is never reached: since `K_0`
/// is disjoint from every other quotient, the initial quotient of `A_S` equals
/// the quotient of the pair `(S, (Q_M∖S) ∪ {n-1})`, which the sum already
/// counts. The attainable maximum is one less.
pub fn atom_bound(n: usize, s: &StateSet) -> Result<u64> {
    if n < 3 {
        return input(format!("atom bounds need n >= 3, got {n}"));
    }
    if n - 2 > 62 {
        return input(format!("atom bounds overflow at n = {n}"));
    }
    let m = (n - 3) as u64;
    if s.is_empty() {
        return Ok((1u64 << (n - 2)) + 1);
    }
    if s.len() == 1 && s.contains(&0) {
        return Ok(n as u64);
    }
    if s.len() == 1 && s.contains(&(n - 2)) {
        return Ok(2);
    }
    if s.iter().all(|&q| (1..=n - 3).contains(&q)) {
        let size = s.len() as u64;
        let mut sum = 3;
        for x in 1..=size {
            for y in 0..=(m - size) {
                sum += binomial(m, x) * binomial(m - x, y);
            }
        }
        return Ok(sum);
    }
    input(format!("A_S is always empty for S = {s:?} with n = {n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::names;
    use crate::automata::{equivalent, state_complexity};

    fn set(v: &[usize]) -> StateSet {
        v.iter().copied().collect()
    }

    fn chain(n: usize) -> Dfa {
        Dfa::from_fn(names("a"), n, 0, [n - 2], |q, _| (q + 1).min(n - 1)).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(atom_bound(6, &set(&[1, 2])).unwrap(), 18);
        assert_eq!(atom_bound(6, &set(&[1])).unwrap(), 15);
        assert_eq!(atom_bound(6, &set(&[1, 2, 3])).unwrap(), 10);
        assert_eq!(atom_bound(7, &set(&[])).unwrap(), 33);
        assert_eq!(atom_bound(6, &set(&[0])).unwrap(), 6);
        assert_eq!(atom_bound(6, &set(&[4])).unwrap(), 2);
        assert!(atom_bound(6, &set(&[5])).is_err());
        assert!(atom_bound(6, &set(&[0, 1])).is_err());
        assert!(atom_bound(2, &set(&[])).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn special_atoms_of_unary_chain() {
        let d = chain(5);
        let a0 = atom_automaton(&d, &set(&[0])).unwrap();
        assert!(equivalent(&a0, &d).unwrap());
        assert_eq!(state_complexity(&a0), 5);
        let eps = atom_automaton(&d, &set(&[3])).unwrap();
        assert_eq!(state_complexity(&eps), 2);
        assert!(eps.accepts(&[]).unwrap());
        let dead = atom_automaton(&d, &set(&[4])).unwrap();
        assert!(minimize(&dead).finals().is_empty());
        assert!(matches!(atom_complexity(&d, &set(&[4])), Err(Error::Domain(_))));
        assert!(atom_automaton(&d, &set(&[9])).is_err());
    }

    #[test]
    fn unary_chain_atoms() {
        // Words ε, a, aa give S = {2}, {1}, {0}; longer words give ∅.
        let atoms = atoms(&chain(4)).unwrap();
        assert_eq!(atoms, vec![set(&[]), set(&[0]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn witness_complexities_at_six() {
        let d = crate::witnesses::atom_witness(6).unwrap();
        let got: Vec<(Vec<usize>, usize)> = atoms(&d)
            .unwrap()
            .iter()
            .map(|s| (s.iter().copied().collect(), atom_complexity(&d, s).unwrap()))
            .collect();
        let expected = [
            (vec![], 16),
            (vec![0], 6),
            (vec![1], 14),
            (vec![2], 14),
            (vec![3], 14),
            (vec![4], 2),
            (vec![1, 2], 17),
            (vec![1, 3], 17),
            (vec![2, 3], 17),
            (vec![1, 2, 3], 9),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn pair_labels() {
        let (dfa, labels) = atom_automaton_states(&chain(4), &set(&[1])).unwrap();
        assert_eq!(dfa.state_count(), labels.len());
        assert_eq!(labels[0].sets(), Some((set(&[1]), set(&[0, 2, 3]))));
    }
}
