//! Complete DFAs, epsilon-NFAs, the subset construction, and minimization.
//!
//! States are dense indices `0..n`. Symbols are positional within one
//! automaton; operations that combine two automata match symbols by name
//! (see [`Dfa::realign`]).

use std::collections::{HashMap, VecDeque};

use crate::error::{input, Error, Result};

pub type State = usize;

/// A word is a sequence of symbol indices of the automaton it is applied to.
pub type Word = [usize];

/// Caps on the intermediate objects built by the powerset construction and
/// the semigroup closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
    pub max_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1 << 20,
            max_elements: 5_000_000,
        }
    }
}

pub(crate) fn validate_alphabet(alphabet: &[String]) -> Result<()> {
    if alphabet.is_empty() {
        return input("alphabet must contain at least one symbol");
    }
    let mut seen = HashMap::with_capacity(alphabet.len());
    for (i, name) in alphabet.iter().enumerate() {
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '#') {
            return input(format!("invalid symbol name {name:?}"));
        }
        if let Some(j) = seen.insert(name.as_str(), i) {
            return input(format!("duplicate symbol {name:?} at positions {j} and {i}"));
        }
    }
    Ok(())
}

/// A complete deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Vec<String>,
    /// Row-major transition table: `delta[q * k + a]`.
    delta: Vec<State>,
    initial: State,
    finals: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from one transition row per state.
    pub fn new<F>(alphabet: Vec<String>, rows: Vec<Vec<State>>, initial: State, finals: F) -> Result<Self>
    where
        F: IntoIterator<Item = State>,
    {
        validate_alphabet(&alphabet)?;
        let n = rows.len();
        let k = alphabet.len();
        if n == 0 {
            return input("a DFA needs at least one state");
        }
        let mut delta = Vec::with_capacity(n * k);
        for (q, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return input(format!("state {q} has {} transitions, expected {k}", row.len()));
            }
            for (a, &t) in row.iter().enumerate() {
                if t >= n {
                    return input(format!("transition ({q}, {}) targets {t}, out of range", alphabet[a]));
                }
            }
            delta.extend(row);
        }
        if initial >= n {
            return input(format!("initial state {initial} out of range"));
        }
        let mut fin = vec![false; n];
        for f in finals {
            if f >= n {
                return input(format!("final state {f} out of range"));
            }
            fin[f] = true;
        }
        Ok(Dfa {
            alphabet,
            delta,
            initial,
            finals: fin,
        })
    }

    /// Builds an `n`-state DFA whose transitions are given by `f(state, symbol)`.
    pub fn from_fn<F, I>(alphabet: Vec<String>, n: usize, initial: State, finals: I, mut f: F) -> Result<Self>
    where
        F: FnMut(State, usize) -> State,
        I: IntoIterator<Item = State>,
    {
        let k = alphabet.len();
        let rows = (0..n).map(|q| (0..k).map(|a| f(q, a)).collect()).collect();
        Dfa::new(alphabet, rows, initial, finals)
    }

    /// Trusted constructor for internal builders whose output is valid by construction.
    pub(crate) fn from_parts(alphabet: Vec<String>, delta: Vec<State>, initial: State, finals: Vec<bool>) -> Self {
        debug_assert!(!finals.is_empty());
        debug_assert_eq!(delta.len(), finals.len() * alphabet.len());
        debug_assert!(delta.iter().all(|&t| t < finals.len()));
        debug_assert!(initial < finals.len());
        Dfa {
            alphabet,
            delta,
            initial,
            finals,
        }
    }

    /// The one-state DFA of the empty language.
    pub fn empty_language(alphabet: Vec<String>) -> Result<Self> {
        let k = alphabet.len();
        Dfa::new(alphabet, vec![vec![0; k]], 0, [])
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    /// Final states in increasing order.
    pub fn finals(&self) -> Vec<State> {
        (0..self.state_count()).filter(|&q| self.finals[q]).collect()
    }

    #[inline]
    pub fn next(&self, q: State, a: usize) -> State {
        self.delta[q * self.alphabet.len() + a]
    }

    /// Transition row of state `q`, indexed by symbol.
    pub fn row(&self, q: State) -> &[State] {
        let k = self.alphabet.len();
        &self.delta[q * k..(q + 1) * k]
    }

    /// The transformation of the state set induced by symbol `a`.
    pub fn letter_map(&self, a: usize) -> Vec<State> {
        (0..self.state_count()).map(|q| self.next(q, a)).collect()
    }

    /// Translates symbol names into a word of symbol indices.
    pub fn word(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|name| {
                self.symbol_index(name)
                    .ok_or_else(|| Error::Input(format!("unknown symbol {name:?}")))
            })
            .collect()
    }

    /// `q` followed through the letters of `w`; `q` itself for the empty word.
    pub fn apply_word(&self, q: State, w: &Word) -> Result<State> {
        if q >= self.state_count() {
            return input(format!("state {q} out of range"));
        }
        let k = self.symbol_count();
        w.iter().try_fold(q, |p, &a| {
            if a >= k {
                input(format!("symbol index {a} out of range"))
            } else {
                Ok(self.next(p, a))
            }
        })
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.finals[self.apply_word(self.initial, w)?])
    }

    /// The same automaton started from `q`.
    pub fn with_initial(&self, q: State) -> Result<Dfa> {
        if q >= self.state_count() {
            return input(format!("state {q} out of range"));
        }
        let mut d = self.clone();
        d.initial = q;
        Ok(d)
    }

    pub fn with_finals<I: IntoIterator<Item = State>>(&self, finals: I) -> Result<Dfa> {
        let mut fin = vec![false; self.state_count()];
        for f in finals {
            if f >= fin.len() {
                return input(format!("final state {f} out of range"));
            }
            fin[f] = true;
        }
        let mut d = self.clone();
        d.finals = fin;
        Ok(d)
    }

    /// Reorders the symbols to follow `names`, which must be a permutation of
    /// this automaton's alphabet.
    pub fn realign(&self, names: &[String]) -> Result<Dfa> {
        if names.len() != self.alphabet.len() {
            return input(format!(
                "alphabet mismatch: {} symbols vs {}",
                names.len(),
                self.alphabet.len()
            ));
        }
        let perm = names
            .iter()
            .map(|name| {
                self.symbol_index(name)
                    .ok_or_else(|| Error::Input(format!("alphabet mismatch: symbol {name:?} missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(self.clone());
        }
        let k = names.len();
        let mut delta = Vec::with_capacity(self.delta.len());
        for q in 0..self.state_count() {
            delta.extend((0..k).map(|a| self.next(q, perm[a])));
        }
        Ok(Dfa::from_parts(
            names.to_vec(),
            delta,
            self.initial,
            self.finals.clone(),
        ))
    }
}

/// States reachable from the initial state, in BFS order (symbols in declared order).
pub fn reachable(d: &Dfa) -> Vec<State> {
    let mut seen = vec![false; d.state_count()];
    let mut order = vec![d.initial()];
    seen[d.initial()] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        for &t in d.row(q) {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
    }
    order
}

/// Renumbers the reachable part of `d` in BFS order from the initial state.
/// Two minimal DFAs over the same symbol sequence are isomorphic iff their
/// canonical forms are equal.
pub fn canonical(d: &Dfa) -> Dfa {
    let order = reachable(d);
    let mut index = vec![usize::MAX; d.state_count()];
    for (i, &q) in order.iter().enumerate() {
        index[q] = i;
    }
    let k = d.symbol_count();
    let mut delta = Vec::with_capacity(order.len() * k);
    for &q in &order {
        delta.extend(d.row(q).iter().map(|&t| index[t]));
    }
    let finals = order.iter().map(|&q| d.is_final(q)).collect();
    Dfa::from_parts(d.alphabet.clone(), delta, 0, finals)
}

/// Language-equivalent minimal DFA in canonical numbering.
///
/// Moore-style partition refinement on the reachable part: blocks are split by
/// the signature (block, blocks of successors) until the block count is stable.
pub fn minimize(d: &Dfa) -> Dfa {
    let d = canonical(d);
    let n = d.state_count();
    let k = d.symbol_count();

    let mut block: Vec<usize> = Vec::with_capacity(n);
    let mut count = {
        let mut ids = [usize::MAX; 2];
        let mut next = 0;
        for q in 0..n {
            let f = d.is_final(q) as usize;
            if ids[f] == usize::MAX {
                ids[f] = next;
                next += 1;
            }
            block.push(ids[f]);
        }
        next
    };

    let mut sig: HashMap<Vec<usize>, usize> = HashMap::with_capacity(n);
    loop {
        sig.clear();
        let mut refined = Vec::with_capacity(n);
        for q in 0..n {
            let mut key = Vec::with_capacity(k + 1);
            key.push(block[q]);
            key.extend(d.row(q).iter().map(|&t| block[t]));
            let fresh = sig.len();
            refined.push(*sig.entry(key).or_insert(fresh));
        }
        let refined_count = sig.len();
        block = refined;
        if refined_count == count {
            break;
        }
        count = refined_count;
    }

    // Representative of each block is its lowest state, which keeps blocks
    // ordered by first appearance in the canonical numbering.
    let mut rep = vec![usize::MAX; count];
    for q in 0..n {
        if rep[block[q]] == usize::MAX {
            rep[block[q]] = q;
        }
    }
    let mut delta = Vec::with_capacity(count * k);
    for &q in &rep {
        delta.extend(d.row(q).iter().map(|&t| block[t]));
    }
    let finals = rep.iter().map(|&q| d.is_final(q)).collect();
    canonical(&Dfa::from_parts(d.alphabet.clone(), delta, block[d.initial()], finals))
}

/// True iff the two DFAs have equal canonical forms. Callers minimize first.
pub fn is_isomorphic(d1: &Dfa, d2: &Dfa) -> bool {
    canonical(d1) == canonical(d2)
}

/// Language equality, decided on the reachable part of the pair product.
pub fn equivalent(d1: &Dfa, d2: &Dfa) -> Result<bool> {
    let d2 = d2.realign(d1.alphabet())?;
    let n2 = d2.state_count();
    let mut seen = vec![false; d1.state_count() * n2];
    let mut queue = VecDeque::from([(d1.initial(), d2.initial())]);
    seen[d1.initial() * n2 + d2.initial()] = true;
    while let Some((p, q)) = queue.pop_front() {
        if d1.is_final(p) != d2.is_final(q) {
            return Ok(false);
        }
        for a in 0..d1.symbol_count() {
            let (s, t) = (d1.next(p, a), d2.next(q, a));
            if !std::mem::replace(&mut seen[s * n2 + t], true) {
                queue.push_back((s, t));
            }
        }
    }
    Ok(true)
}

pub fn state_complexity(d: &Dfa) -> usize {
    minimize(d).state_count()
}

/// For each state of `minimize(d)` (canonical numbering), the state
/// complexity of the language accepted from that state.
pub fn quotient_complexities(d: &Dfa) -> Vec<usize> {
    let m = minimize(d);
    (0..m.state_count())
        .map(|q| state_complexity(&m.with_initial(q).expect("state in range")))
        .collect()
}

/// A nondeterministic automaton with epsilon transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<String>,
    state_count: usize,
    delta: Vec<Vec<State>>,
    epsilon: Vec<Vec<State>>,
    initials: Vec<State>,
    finals: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: Vec<String>, state_count: usize) -> Result<Self> {
        validate_alphabet(&alphabet)?;
        let k = alphabet.len();
        Ok(Nfa {
            alphabet,
            state_count,
            delta: vec![Vec::new(); state_count * k],
            epsilon: vec![Vec::new(); state_count],
            initials: Vec::new(),
            finals: vec![false; state_count],
        })
    }

    /// The NFA with the same states and transitions as `d`.
    pub fn from_dfa(d: &Dfa) -> Self {
        let k = d.symbol_count();
        let n = d.state_count();
        Nfa {
            alphabet: d.alphabet().to_vec(),
            state_count: n,
            delta: (0..n * k).map(|i| vec![d.delta[i]]).collect(),
            epsilon: vec![Vec::new(); n],
            initials: vec![d.initial()],
            finals: d.finals.clone(),
        }
    }

    fn check(&self, q: State) -> Result<()> {
        if q >= self.state_count {
            input(format!("NFA state {q} out of range"))
        } else {
            Ok(())
        }
    }

    pub fn add_transition(&mut self, p: State, a: usize, q: State) -> Result<()> {
        self.check(p)?;
        self.check(q)?;
        if a >= self.alphabet.len() {
            return input(format!("symbol index {a} out of range"));
        }
        let cell = &mut self.delta[p * self.alphabet.len() + a];
        if !cell.contains(&q) {
            cell.push(q);
        }
        Ok(())
    }

    pub fn add_epsilon(&mut self, p: State, q: State) -> Result<()> {
        self.check(p)?;
        self.check(q)?;
        if !self.epsilon[p].contains(&q) {
            self.epsilon[p].push(q);
        }
        Ok(())
    }

    pub fn add_initial(&mut self, q: State) -> Result<()> {
        self.check(q)?;
        if !self.initials.contains(&q) {
            self.initials.push(q);
        }
        Ok(())
    }

    pub fn set_final(&mut self, q: State, accepting: bool) -> Result<()> {
        self.check(q)?;
        self.finals[q] = accepting;
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn targets(&self, p: State, a: usize) -> &[State] {
        &self.delta[p * self.alphabet.len() + a]
    }

    pub fn epsilon_targets(&self, p: State) -> &[State] {
        &self.epsilon[p]
    }

    pub fn initials(&self) -> &[State] {
        &self.initials
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }
}

/// Fixed-width bitset over NFA states, used as the key of a subset state.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Subset(Box<[u64]>);

impl Subset {
    fn empty(words: usize) -> Self {
        Subset(vec![0; words].into_boxed_slice())
    }

    fn insert(&mut self, q: State) -> bool {
        let (w, b) = (q / 64, 1u64 << (q % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    fn union_with(&mut self, other: &Subset) {
        for (x, y) in self.0.iter_mut().zip(other.0.iter()) {
            *x |= *y;
        }
    }

    fn intersects(&self, other: &Subset) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(x, y)| x & y != 0)
    }

    fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }
}

pub fn determinize(nfa: &Nfa) -> Result<Dfa> {
    determinize_with(nfa, &Limits::default())
}

/// Accessible subset construction with epsilon closure. Subsets are numbered
/// in order of first discovery (BFS, symbols in declared order).
pub fn determinize_with(nfa: &Nfa, limits: &Limits) -> Result<Dfa> {
    let n = nfa.state_count;
    let k = nfa.alphabet.len();
    let words = n.div_ceil(64).max(1);

    // Epsilon closure of each single state.
    let mut eclose = Vec::with_capacity(n);
    for q in 0..n {
        let mut set = Subset::empty(words);
        set.insert(q);
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            for &r in &nfa.epsilon[p] {
                if set.insert(r) {
                    stack.push(r);
                }
            }
        }
        eclose.push(set);
    }
    // Closed successor set of each (state, symbol).
    let mut step = Vec::with_capacity(n * k);
    for q in 0..n {
        for a in 0..k {
            let mut set = Subset::empty(words);
            for &t in nfa.targets(q, a) {
                set.union_with(&eclose[t]);
            }
            step.push(set);
        }
    }
    let mut finals_set = Subset::empty(words);
    for q in (0..n).filter(|&q| nfa.finals[q]) {
        finals_set.insert(q);
    }

    let mut start = Subset::empty(words);
    for &q in &nfa.initials {
        start.union_with(&eclose[q]);
    }
    let mut index: HashMap<Subset, State> = HashMap::new();
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        for a in 0..k {
            let mut target = Subset::empty(words);
            for q in subsets[i].iter() {
                target.union_with(&step[q * k + a]);
            }
            let id = match index.get(&target) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    if id >= limits.max_states {
                        return Err(Error::Resource(format!(
                            "subset construction exceeded {} states",
                            limits.max_states
                        )));
                    }
                    subsets.push(target.clone());
                    index.insert(target, id);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let finals = subsets.iter().map(|s| s.intersects(&finals_set)).collect();
    Ok(Dfa::from_parts(nfa.alphabet.clone(), delta, 0, finals))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn names(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    /// The unary chain accepting only `a^(n-2)`.
    fn chain(n: usize) -> Dfa {
        Dfa::from_fn(names("a"), n, 0, [n - 2], |q, _| (q + 1).min(n - 1)).unwrap()
    }

    #[test]
    fn apply_word_steps_and_identity() {
        let d = chain(3);
        assert_eq!(d.apply_word(0, &[0]).unwrap(), 1);
        assert_eq!(d.apply_word(2, &[]).unwrap(), 2);
        assert!(matches!(d.apply_word(0, &[1]), Err(Error::Input(_))));
        assert!(matches!(d.apply_word(7, &[]), Err(Error::Input(_))));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(Dfa::new(names("a a"), vec![vec![0, 0]], 0, []).is_err());
        assert!(Dfa::new(names("a"), vec![vec![1]], 0, []).is_err());
        assert!(Dfa::new(names("a b"), vec![vec![0]], 0, []).is_err());
        assert!(Dfa::new(names("a"), vec![vec![0]], 1, []).is_err());
        assert!(Dfa::new(names("a"), vec![vec![0]], 0, [3]).is_err());
        assert!(Dfa::new(vec!["a#".into()], vec![vec![0]], 0, []).is_err());
        assert!(Dfa::new(vec![], vec![vec![]], 0, []).is_err());
    }

    #[test]
    fn reachable_skips_isolated_state() {
        let d = chain(4);
        assert_eq!(reachable(&d), vec![0, 1, 2, 3]);
        let iso = Dfa::new(names("a"), vec![vec![1], vec![1], vec![0]], 0, [1]).unwrap();
        assert_eq!(reachable(&iso), vec![0, 1]);
    }

    #[test]
    fn minimize_merges_duplicated_state() {
        // chain(5) with state 2 duplicated as state 5: 1 goes to the copy.
        let rows = vec![vec![1], vec![5], vec![3], vec![4], vec![4], vec![3]];
        let d = Dfa::new(names("a"), rows, 0, [3]).unwrap();
        let m = minimize(&d);
        assert_eq!(m.state_count(), 5);
        assert!(is_isomorphic(&m, &chain(5)));
        assert!(equivalent(&m, &d).unwrap());
    }

    #[test]
    fn empty_language_has_one_state() {
        let d = Dfa::new(names("a b"), vec![vec![1, 2], vec![2, 1], vec![0, 0]], 0, []).unwrap();
        assert_eq!(state_complexity(&d), 1);
    }

    #[test]
    fn isomorphism_and_equivalence() {
        assert!(is_isomorphic(&chain(4), &chain(4)));
        assert!(!is_isomorphic(&chain(4), &chain(5)));
        assert!(!equivalent(&chain(4), &chain(5)).unwrap());
        let other = Dfa::new(names("b"), vec![vec![0]], 0, []).unwrap();
        assert!(matches!(equivalent(&chain(4), &other), Err(Error::Input(_))));
    }

    #[test]
    fn realign_permutes_symbols() {
        let d = Dfa::new(names("a b"), vec![vec![1, 0], vec![1, 1]], 0, [1]).unwrap();
        let r = d.realign(&names("b a")).unwrap();
        assert_eq!(r.row(0), &[0, 1]);
        assert!(equivalent(&d, &r).unwrap());
        assert!(d.realign(&names("a c")).is_err());
    }

    #[test]
    fn unary_quotient_complexities() {
        assert_eq!(quotient_complexities(&chain(5)), vec![5, 4, 3, 2, 1]);
    }

    #[test]
    fn determinize_follows_epsilon() {
        // a* b with an epsilon shortcut 0 -> 1.
        let mut nfa = Nfa::new(names("a b"), 3).unwrap();
        nfa.add_initial(0).unwrap();
        nfa.add_transition(0, 0, 0).unwrap();
        nfa.add_epsilon(0, 1).unwrap();
        nfa.add_transition(1, 1, 2).unwrap();
        nfa.set_final(2, true).unwrap();
        let d = determinize(&nfa).unwrap();
        let w = |s: &str| {
            d.word(&s.chars().map(|c| if c == 'a' { "a" } else { "b" }).collect::<Vec<_>>())
                .unwrap()
        };
        assert!(d.accepts(&w("b")).unwrap());
        assert!(d.accepts(&w("aab")).unwrap());
        assert!(!d.accepts(&w("ba")).unwrap());
        assert!(!d.accepts(&w("")).unwrap());
    }

    #[test]
    fn determinize_respects_state_cap() {
        let nfa = Nfa::from_dfa(&chain(6));
        let limits = Limits {
            max_states: 3,
            ..Limits::default()
        };
        assert!(matches!(determinize_with(&nfa, &limits), Err(Error::Resource(_))));
        assert!(is_isomorphic(&determinize(&nfa).unwrap(), &chain(6)));
    }
}
