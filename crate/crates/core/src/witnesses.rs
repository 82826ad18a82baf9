//! Generators for the extremal bifix-free witness families, permutational
//! dialects, and seeded random bifix-free DFAs.
//!
//! Every generator returns a minimal DFA in conventional numbering
//! (initial `0`, final `n-2`, empty `n-1`).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::{minimize, Dfa};
use crate::error::{input, Error, Result};
use crate::freeness::to_conventional;
use crate::ops::{reverse, reverse_range};
use crate::semigroup::{Transformation, WbfType};

/// Default cap on the alphabet of the most complex stream. Admits `n <= 8`.
pub const WSTREAM_MAX_LETTERS: u64 = 100_000;

/// Consecutive rejected samples after which random generation gives up.
pub const RANDOM_MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Unary,
    Ternary,
    TernaryDialect,
    Wstream,
    AtomWitness,
    Revmagic,
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Unary => "unary",
            Family::Ternary => "ternary",
            Family::TernaryDialect => "ternary-dialect",
            Family::Wstream => "wstream",
            Family::AtomWitness => "atoms",
            Family::Revmagic => "revmagic",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "unary" => Family::Unary,
            "ternary" => Family::Ternary,
            "ternary-dialect" => Family::TernaryDialect,
            "wstream" => Family::Wstream,
            "atoms" | "atom-witness" => Family::AtomWitness,
            "revmagic" => Family::Revmagic,
            "random" => Family::Random,
            other => return input(format!("unknown witness family {other:?}")),
        })
    }
}

/// Parameters of one witness DFA.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSpec {
    pub family: Family,
    pub n: usize,
    /// Target reversal complexity (revmagic only).
    pub alpha: Option<u64>,
    /// Alphabet size (random only).
    pub letters: Option<usize>,
    pub seed: Option<u64>,
}

impl WitnessSpec {
    pub fn new(family: Family, n: usize) -> Self {
        WitnessSpec {
            family,
            n,
            alpha: None,
            letters: None,
            seed: None,
        }
    }

    pub fn build(&self) -> Result<Dfa> {
        let n = self.n;
        match self.family {
            Family::Unary => unary_free(n),
            Family::Ternary => ternary_witness(n),
            Family::TernaryDialect => ternary_dialect(n),
            Family::Wstream => wstream_witness(n),
            Family::AtomWitness => atom_witness(n),
            Family::Revmagic => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Input("revmagic needs a target reversal complexity".into()))?;
                revmagic(n, alpha)
            }
            Family::Random => random_bifix_free(n, self.letters.unwrap_or(3), self.seed.unwrap_or(0)),
        }
    }
}

fn letters(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn from_maps(alphabet: Vec<String>, maps: &[Vec<usize>]) -> Result<Dfa> {
    let n = maps[0].len();
    Dfa::from_fn(alphabet, n, 0, [n - 2], |q, a| maps[a][q])
}

/// Transformation that sends `0`, `n-2` and `n-1` to `n-1` and acts on the
/// middle states by `middle(q)`.
fn sink_ends(n: usize, middle: impl Fn(usize) -> usize) -> Vec<usize> {
    (0..n)
        .map(|q| if q == 0 || q >= n - 2 { n - 1 } else { middle(q) })
        .collect()
}

/// The unique unary bifix-free language with `n` states, `{a^(n-2)}`.
pub fn unary_free(n: usize) -> Result<Dfa> {
    if n < 3 {
        return input(format!("unary_free needs n >= 3, got {n}"));
    }
    Dfa::from_fn(letters(&["a"]), n, 0, [n - 2], |q, _| (q + 1).min(n - 1))
}

/// The ternary stream meeting every bound for basic operations.
pub fn ternary_witness(n: usize) -> Result<Dfa> {
    if n < 7 {
        return input(format!("ternary_witness needs n >= 7, got {n}"));
    }
    let h = (n - 1) / 2;
    let a: Vec<usize> = (0..n)
        .map(|q| match q {
            0 => 1,
            q if q <= n - 3 => n - 2,
            _ => n - 1,
        })
        .collect();
    let b = sink_ends(n, |q| if q == n - 3 { 1 } else { q + 1 });
    // Cycle n-3 -> n-4 -> ... -> h+1 -> h-1 -> ... -> 2 -> n-3.
    let cycle: Vec<usize> = (2..=n - 3).rev().filter(|&q| q != h).collect();
    let c = sink_ends(n, |q| {
        if q == 1 {
            h
        } else if q == h {
            n - 2
        } else {
            let i = cycle.iter().position(|&p| p == q).expect("cycle covers the rest");
            cycle[(i + 1) % cycle.len()]
        }
    });
    from_maps(letters(&["a", "b", "c"]), &[a, b, c])
}

/// `ternary_witness(n)` with the transformations of `b` and `c` swapped.
pub fn ternary_dialect(n: usize) -> Result<Dfa> {
    let mapping = BTreeMap::from([
        ("a".to_string(), "a".to_string()),
        ("b".to_string(), "c".to_string()),
        ("c".to_string(), "b".to_string()),
    ]);
    dialect(&ternary_witness(n)?, &mapping)
}

/// Alphabet size of the most complex stream,
/// `(n-3) + ((n-2)^(n-3) - 1) + (n-3)(2^(n-3) - 1)`.
pub fn wstream_alphabet_size(n: usize) -> Option<u64> {
    if n < 6 {
        return None;
    }
    let e = u32::try_from(n - 3).ok()?;
    let m = n as u64 - 3;
    let c = (n as u64 - 2).checked_pow(e)?.checked_sub(1)?;
    let d = m.checked_mul(2u64.checked_pow(e)?.checked_sub(1)?)?;
    m.checked_add(c)?.checked_add(d)
}

pub fn wstream_witness(n: usize) -> Result<Dfa> {
    wstream_witness_with_cap(n, WSTREAM_MAX_LETTERS)
}

/// The DFA whose transition semigroup is the whole largest bifix-free
/// semigroup: letters `b1..`, then one `c` letter per type-2 transformation
/// and one `d` letter per type-3 transformation, skipping those that send
/// every middle state to `n-1`. `c`/`d` letters follow the lexicographic
/// order of their target vectors.
pub fn wstream_witness_with_cap(n: usize, max_letters: u64) -> Result<Dfa> {
    if n < 6 {
        return input(format!("wstream_witness needs n >= 6, got {n}"));
    }
    let size = wstream_alphabet_size(n).filter(|&s| s <= max_letters).ok_or_else(|| {
        Error::Input(format!(
            "wstream alphabet for n = {n} exceeds the cap of {max_letters} letters"
        ))
    })?;
    let (fin, empty) = (n - 2, n - 1);
    let collapses = |t: &Transformation| (1..fin).all(|q| t.image(q) == empty);

    let mut names = Vec::with_capacity(size as usize);
    let mut maps = Vec::with_capacity(size as usize);
    for i in 1..fin {
        names.push(format!("b{i}"));
        maps.push(
            (0..n)
                .map(|q| match q {
                    0 => empty,
                    q if q == i => fin,
                    q if q == fin => empty,
                    q => q,
                })
                .collect::<Vec<_>>(),
        );
    }
    let cs: Vec<_> = WbfType::Type2
        .enumerate(n)
        .into_iter()
        .filter(|t| !collapses(t))
        .collect();
    let ds: Vec<_> = WbfType::Type3
        .enumerate(n)
        .into_iter()
        .filter(|t| !collapses(t))
        .collect();
    let width = cs.len().max(ds.len()).to_string().len().max(6);
    for (prefix, ts) in [("c", &cs), ("d", &ds)] {
        for (i, t) in ts.iter().enumerate() {
            names.push(format!("{prefix}{:0width$}", i + 1));
            maps.push(t.targets());
        }
    }
    debug_assert_eq!(names.len() as u64, size);
    from_maps(names, &maps)
}

/// Witness meeting the bounds on the number and complexities of atoms,
/// over `a, b, c, d, e1..e(n-3)`.
pub fn atom_witness(n: usize) -> Result<Dfa> {
    if n < 6 {
        return input(format!("atom_witness needs n >= 6, got {n}"));
    }
    let (fin, empty) = (n - 2, n - 1);
    // ({0, n-2} -> n-1) combined with an action on the middle states.
    let on_middle = |f: &dyn Fn(usize) -> usize| -> Vec<usize> {
        (0..n).map(|q| if q == 0 || q >= fin { empty } else { f(q) }).collect()
    };
    let mut names = letters(&["a", "b", "c", "d"]);
    let mut maps = vec![
        (0..n).map(|q| if q == 0 { 1 } else { empty }).collect(),
        on_middle(&|q| match q {
            1 => 2,
            2 => 1,
            q => q,
        }),
        on_middle(&|q| if q == n - 3 { 1 } else { q + 1 }),
        on_middle(&|q| if q == 2 { 1 } else { q }),
    ];
    for p in 1..fin {
        names.push(format!("e{p}"));
        maps.push(on_middle(&|q| if q == p { fin } else { q }));
    }
    from_maps(names, &maps)
}

/// An `n`-state bifix-free DFA whose reversal has exactly `alpha` states, for
/// every `alpha` in `reverse_range(n)`.
pub fn revmagic(n: usize, alpha: u64) -> Result<Dfa> {
    let range = reverse_range(n)?;
    if !range.contains(&alpha) {
        return input(format!(
            "alpha = {alpha} outside [{}, {}] for n = {n}",
            range.start(),
            range.end()
        ));
    }
    if n == 3 {
        return unary_free(3);
    }
    if alpha < n as u64 {
        // The reverse of an alpha-state language whose reversal has n states.
        let smaller = revmagic(alpha as usize, n as u64)?;
        return to_conventional(&reverse(&smaller)?);
    }
    let (fin, empty) = (n - 2, n - 1);
    let middle = n - 3;
    let mut names = Vec::new();
    let mut maps = Vec::new();
    for q in 1..=middle {
        names.push(format!("a{q}"));
        maps.push((0..n).map(|p| if p == 0 { q } else { empty }).collect::<Vec<_>>());
    }
    // Subsets of the middle states as bitmasks over 1..=n-3: the empty set,
    // the singletons, then the rest in increasing mask order.
    let mut chosen: Vec<u64> = vec![0];
    chosen.extend((0..middle).map(|i| 1u64 << i));
    chosen.extend((1u64..1 << middle).filter(|m| m.count_ones() > 1));
    chosen.truncate(alpha as usize - 2);
    for mask in chosen {
        let members: Vec<usize> = (1..=middle).filter(|q| mask >> (q - 1) & 1 == 1).collect();
        let label = members.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("_");
        names.push(format!("b_{label}"));
        maps.push((0..n).map(|p| if members.contains(&p) { fin } else { empty }).collect());
    }
    from_maps(names, &maps)
}

/// Permutational dialect: letter `x` in the domain of `mapping` takes the
/// transformation that `mapping[x]` had in `d`; letters outside the domain
/// are deleted. Names and relative order of the kept letters are unchanged.
/// The result is not minimized.
pub fn dialect(d: &Dfa, mapping: &BTreeMap<String, String>) -> Result<Dfa> {
    let mut used = HashSet::new();
    for (from, to) in mapping {
        if d.symbol_index(from).is_none() {
            return input(format!("dialect maps unknown letter {from:?}"));
        }
        if d.symbol_index(to).is_none() {
            return input(format!("dialect targets unknown letter {to:?}"));
        }
        if !used.insert(to.as_str()) {
            return input(format!("dialect mapping is not injective: {to:?} used twice"));
        }
    }
    let kept: Vec<(usize, usize)> = d
        .alphabet()
        .iter()
        .filter_map(|name| {
            mapping
                .get(name)
                .map(|to| (d.symbol_index(name).unwrap(), d.symbol_index(to).unwrap()))
        })
        .collect();
    if kept.is_empty() {
        return input("dialect deletes every letter");
    }
    let alphabet = kept.iter().map(|&(from, _)| d.alphabet()[from].clone()).collect();
    Dfa::from_fn(alphabet, d.state_count(), d.initial(), d.finals(), |q, a| {
        d.next(q, kept[a].1)
    })
}

fn random_letter_name(i: usize, k: usize) -> String {
    if k <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("s{i}")
    }
}

/// A seeded random minimal bifix-free DFA with `n` states and `k` letters.
///
/// Each letter gets a transformation of one of the three bifix-free types:
/// the type is drawn uniformly among the types that exist for `n`, then the
/// transformation uniformly within the type. Samples that are not minimal
/// with `n` states are redrawn. Over one letter the only such language is
/// `{a^(n-2)}`, which is returned directly.
pub fn random_bifix_free(n: usize, k: usize, seed: u64) -> Result<Dfa> {
    if n < 3 || k == 0 {
        return input(format!("random_bifix_free needs n >= 3 and k >= 1, got ({n}, {k})"));
    }
    if k == 1 {
        return unary_free(n);
    }
    let types: Vec<Vec<Vec<usize>>> = WbfType::ALL
        .iter()
        .map(|ty| ty.choices(n))
        .filter(|c| c.iter().all(|opts| !opts.is_empty()))
        .collect();
    let names: Vec<String> = (0..k).map(|i| random_letter_name(i, k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_MAX_ATTEMPTS {
        let maps: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let choices = &types[rng.gen_range(0..types.len())];
                choices.iter().map(|opts| opts[rng.gen_range(0..opts.len())]).collect()
            })
            .collect();
        let d = from_maps(names.clone(), &maps)?;
        if minimize(&d).state_count() == n {
            return Ok(d);
        }
    }
    Err(Error::Generation(format!(
        "no minimal {n}-state sample with {k} letters after {RANDOM_MAX_ATTEMPTS} attempts (seed {seed})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeness::{check_conventional, is_bifix_free};

    #[test]
    fn ternary_letters_at_nine() {
        let d = ternary_witness(9).unwrap();
        let c = d.letter_map(2);
        // (1 -> 4)(4 -> 7)(6, 5, 3, 2), {0, 7, 8} -> 8
        assert_eq!(c, vec![8, 4, 6, 2, 7, 3, 5, 8, 8]);
        assert_eq!(d.letter_map(0), vec![1, 7, 7, 7, 7, 7, 7, 8, 8]);
        assert_eq!(d.letter_map(1), vec![8, 2, 3, 4, 5, 6, 1, 8, 8]);
        assert_eq!(d.apply_word(0, &[0, 1, 1, 1, 1]).unwrap(), 5);
        assert!(ternary_witness(6).is_err());
    }

    #[test]
    fn dialect_swaps_and_deletes() {
        let d = ternary_witness(9).unwrap();
        let t = ternary_dialect(9).unwrap();
        assert_eq!(t.alphabet(), d.alphabet());
        assert_eq!(t.letter_map(1), d.letter_map(2));
        assert_eq!(t.letter_map(2), d.letter_map(1));
        let id: BTreeMap<_, _> = d.alphabet().iter().map(|s| (s.clone(), s.clone())).collect();
        assert_eq!(dialect(&d, &id).unwrap(), d);
        let bad = BTreeMap::from([("a".to_string(), "b".to_string()), ("b".to_string(), "b".to_string())]);
        assert!(dialect(&d, &bad).is_err());
        assert!(dialect(&d, &BTreeMap::new()).is_err());
    }

    #[test]
    fn generators_reject_small_n() {
        assert!(unary_free(2).is_err());
        assert!(wstream_witness(5).is_err());
        assert!(atom_witness(5).is_err());
        assert!(random_bifix_free(2, 2, 0).is_err());
        assert!(random_bifix_free(5, 0, 0).is_err());
    }

    #[test]
    fn wstream_alphabet_sizes() {
        assert_eq!(wstream_alphabet_size(6), Some(87));
        assert_eq!(wstream_alphabet_size(7), Some(688));
        assert_eq!(wstream_alphabet_size(8), Some(7935));
        let w = wstream_witness(6).unwrap();
        assert_eq!(w.symbol_count(), 87);
        assert_eq!(&w.alphabet()[..4], &["b1", "b2", "b3", "c000001"]);
        assert!(wstream_witness(9).is_err());
        assert!(wstream_witness_with_cap(7, 100).is_err());
    }

    #[test]
    fn atom_witness_letters() {
        let d = atom_witness(6).unwrap();
        assert_eq!(d.alphabet(), &["a", "b", "c", "d", "e1", "e2", "e3"]);
        assert_eq!(d.letter_map(1), vec![5, 2, 1, 3, 5, 5]);
        assert_eq!(d.letter_map(2), vec![5, 2, 3, 1, 5, 5]);
        assert_eq!(d.letter_map(3), vec![5, 1, 1, 3, 5, 5]);
        assert_eq!(d.letter_map(5), vec![5, 1, 4, 3, 5, 5]);
    }

    #[test]
    fn revmagic_shape() {
        let d = revmagic(6, 10).unwrap();
        assert_eq!(d.symbol_count(), 3 + 8);
        let d = revmagic(6, 6).unwrap();
        assert_eq!(d.alphabet(), &["a1", "a2", "a3", "b_", "b_1", "b_2", "b_3"]);
        assert!(revmagic(6, 4).is_err());
        assert!(revmagic(6, 11).is_err());
        assert!(revmagic(6, 5).is_ok());
    }

    #[test]
    fn random_is_deterministic_and_conventional() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 6);
            let d = random_bifix_free(n, 3, seed).unwrap();
            assert_eq!(d, random_bifix_free(n, 3, seed).unwrap());
            assert!(is_bifix_free(&d));
            check_conventional(&d).unwrap();
        }
    }
}
