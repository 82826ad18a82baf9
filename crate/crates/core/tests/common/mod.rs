//! Brute-force oracles shared by the integration and acceptance tests. They
//! only use the transition function of a DFA, never the library algorithms.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use bifixlab::Dfa;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run(d: &Dfa, mut q: usize, w: &[usize]) -> usize {
    for &a in w {
        q = d.row(q)[a];
    }
    q
}

pub fn member(d: &Dfa, w: &[usize]) -> bool {
    d.is_final(run(d, d.initial(), w))
}

/// All words over `k` letters of length at most `max_len`, shortest first.
pub fn words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of Myhill-Nerode classes of the language of `d`, computed from
/// membership of `uv` for all words `u`, `v` of length at most `len`. The
/// count grows with `len` until it reaches the true value; this returns the
/// first count that stays the same for two consecutive lengths, never
/// stopping before `min_len`.
pub fn nerode_classes(d: &Dfa, min_len: usize) -> usize {
    let k = d.symbol_count();
    let mut prev = 0;
    let mut len = 0;
    loop {
        let suffixes = words(k, len);
        // Row of a state: membership of every suffix from it.
        let row = |q: usize| -> Vec<bool> { suffixes.iter().map(|v| d.is_final(run(d, q, v))).collect() };
        let mut rows: HashSet<Vec<bool>> = HashSet::new();
        for u in words(k, len) {
            rows.insert(row(run(d, d.initial(), &u)));
        }
        let count = rows.len();
        if len >= min_len && count == prev {
            return count;
        }
        prev = count;
        len += 1;
    }
}

/// Calls `f` on every word of length at most `max_len` together with the
/// state of each DFA after reading it.
pub fn for_each_word(dfas: &[&Dfa], max_len: usize, mut f: impl FnMut(&[usize], &[usize])) {
    let k = dfas[0].symbol_count();
    let mut word = Vec::new();
    let start: Vec<usize> = dfas.iter().map(|d| d.initial()).collect();
    fn go(
        dfas: &[&Dfa],
        k: usize,
        max_len: usize,
        word: &mut Vec<usize>,
        states: &[usize],
        f: &mut dyn FnMut(&[usize], &[usize]),
    ) {
        f(word, states);
        if word.len() == max_len {
            return;
        }
        for a in 0..k {
            let next: Vec<usize> = dfas.iter().zip(states).map(|(d, &q)| d.row(q)[a]).collect();
            word.push(a);
            go(dfas, k, max_len, word, &next, f);
            word.pop();
        }
    }
    go(dfas, k, max_len, &mut word, &start, &mut f);
}

/// Accepted words of length at most `max_len`, by depth-first search through
/// states from which a final state is reachable.
pub fn accepted_words(d: &Dfa, max_len: usize) -> Vec<Vec<usize>> {
    let n = d.state_count();
    let mut live: Vec<bool> = (0..n).map(|q| d.is_final(q)).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            if !live[q] && d.row(q).iter().any(|&t| live[t]) {
                live[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![(d.initial(), Vec::new())];
    while let Some((q, w)) = stack.pop() {
        if !live[q] {
            continue;
        }
        if d.is_final(q) {
            out.push(w.clone());
        }
        if w.len() < max_len {
            for a in 0..d.symbol_count() {
                let mut v = w.clone();
                v.push(a);
                stack.push((d.row(q)[a], v));
            }
        }
    }
    out.sort();
    out
}

/// First accepted word (length at most `max_len`) with an accepted proper
/// prefix or proper suffix, the empty word counting as both.
pub fn bifix_violation(d: &Dfa, max_len: usize) -> Option<Vec<usize>> {
    accepted_words(d, max_len)
        .into_iter()
        .find(|w| (0..w.len()).any(|i| member(d, &w[..i]) || member(d, &w[w.len() - i..])))
}

/// Complexity of the atom `A_S` by brute force: `A_S` is the set of words
/// `w` with `{q : q·w final} = S`. Every quotient `A_S.u` is determined by
/// the transformation of `u`, so quotients are compared through their
/// membership of all suffixes up to `suffix_len`.
pub fn atom_quotients(d: &Dfa, s: &BTreeSet<usize>, suffix_len: usize) -> usize {
    let n = d.state_count();
    let k = d.symbol_count();
    let identity: Vec<usize> = (0..n).collect();
    let mut transformations = vec![identity.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity]);
    let mut i = 0;
    while i < transformations.len() {
        for a in 0..k {
            let t: Vec<usize> = transformations[i].iter().map(|&q| d.row(q)[a]).collect();
            if seen.insert(t.clone()) {
                transformations.push(t);
            }
        }
        i += 1;
    }
    let suffixes = words(k, suffix_len);
    // finals_after[v][q]: whether q·v is final.
    let finals_after: Vec<Vec<bool>> = suffixes
        .iter()
        .map(|v| (0..n).map(|q| d.is_final(run(d, q, v))).collect())
        .collect();
    let mut signatures: HashSet<Vec<bool>> = HashSet::new();
    for t in &transformations {
        let sig = finals_after
            .iter()
            .map(|after| (0..n).filter(|&q| after[t[q]]).collect::<BTreeSet<_>>() == *s)
            .collect();
        signatures.insert(sig);
    }
    signatures.len()
}

/// Distinct sets `{q : q·w final}` over words `w` up to `max_len`.
pub fn atom_sets_by_words(d: &Dfa, max_len: usize) -> BTreeSet<BTreeSet<usize>> {
    let n = d.state_count();
    let k = d.symbol_count();
    let mut out = BTreeSet::new();
    let mut layer: HashMap<Vec<usize>, ()> = HashMap::from([((0..n).collect(), ())]);
    for _ in 0..=max_len {
        let mut next = HashMap::new();
        for t in layer.keys() {
            out.insert((0..n).filter(|&q| d.is_final(t[q])).collect());
            for a in 0..k {
                next.insert(t.iter().map(|&q| d.row(q)[a]).collect::<Vec<_>>(), ());
            }
        }
        layer = next;
    }
    out
}

pub fn letters(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Arbitrary complete DFA with `1..=max_n` states over `1..=max_k` letters.
pub fn random_dfa(rng: &mut ChaCha8Rng, max_n: usize, max_k: usize) -> Dfa {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    let rows = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect();
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Dfa::new(letters(k), rows, rng.gen_range(0..n), finals).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Map `state -> word reaching it`, by breadth-first search.
pub fn access_words(d: &Dfa) -> BTreeMap<usize, Vec<usize>> {
    let mut out = BTreeMap::from([(d.initial(), vec![])]);
    let mut queue = std::collections::VecDeque::from([d.initial()]);
    while let Some(q) = queue.pop_front() {
        let w = out[&q].clone();
        for a in 0..d.symbol_count() {
            let t = d.row(q)[a];
            if let std::collections::btree_map::Entry::Vacant(e) = out.entry(t) {
                let mut v = w.clone();
                v.push(a);
                e.insert(v);
                queue.push_back(t);
            }
        }
    }
    out
}
