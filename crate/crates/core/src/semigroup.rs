//! Transformations of a finite state set, transition-semigroup closure, and
//! the three transformation types of the largest bifix-free semigroup.
//!
//! Composition is left to right: `q(t1 t2) = (q t1) t2`, so the
//! transformation of a word `uv` is `compose(δ_u, δ_v)`.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use serde::Serialize;

use crate::automata::{minimize, Dfa, Limits};
use crate::error::{input, Error, Result};

/// A total map on `0..n`, `n <= 256`; entry `q` is the image of `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation(Box<[u8]>);

impl Transformation {
    pub const MAX_DEGREE: usize = 256;

    pub fn new(targets: &[usize]) -> Result<Self> {
        let n = targets.len();
        if n == 0 || n > Self::MAX_DEGREE {
            return input(format!("transformation degree {n} outside 1..=256"));
        }
        if let Some((q, &t)) = targets.iter().enumerate().find(|&(_, &t)| t >= n) {
            return input(format!("image {t} of state {q} out of range"));
        }
        Ok(Transformation(targets.iter().map(|&t| t as u8).collect()))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Transformation::new(&(0..n).collect::<Vec<_>>())
    }

    /// Number of states acted on.
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, q: usize) -> usize {
        self.0[q] as usize
    }

    pub fn targets(&self) -> Vec<usize> {
        self.0.iter().map(|&t| t as usize).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl Borrow<[u8]> for Transformation {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// `t1` followed by `t2`.
pub fn compose(t1: &Transformation, t2: &Transformation) -> Result<Transformation> {
    if t1.degree() != t2.degree() {
        return input(format!("degree mismatch: {} vs {}", t1.degree(), t2.degree()));
    }
    Ok(Transformation(t1.0.iter().map(|&q| t2.0[q as usize]).collect()))
}

/// The transformations induced by each letter of `d`, in symbol order.
pub fn letter_transformations(d: &Dfa) -> Result<Vec<Transformation>> {
    (0..d.symbol_count())
        .map(|a| Transformation::new(&d.letter_map(a)))
        .collect()
}

/// The semigroup generated by a list of transformations. Elements are kept
/// in discovery order: distinct generators first, then BFS by right
/// multiplication with the generators.
#[derive(Debug, Clone)]
pub struct SemigroupClosure {
    elements: IndexSet<Transformation, FxBuildHasher>,
    generator_count: usize,
}

impl SemigroupClosure {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn degree(&self) -> usize {
        self.elements[0].degree()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Transformation> {
        self.elements.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Transformation> {
        self.elements.get_index(i)
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.elements.contains(t)
    }
}

pub fn closure(generators: &[Transformation]) -> Result<SemigroupClosure> {
    closure_with(generators, &Limits::default())
}

pub fn closure_with(generators: &[Transformation], limits: &Limits) -> Result<SemigroupClosure> {
    let Some(first) = generators.first() else {
        return input("closure needs at least one generator");
    };
    let n = first.degree();
    if let Some(g) = generators.iter().find(|g| g.degree() != n) {
        return input(format!("generator degrees differ: {n} vs {}", g.degree()));
    }
    let cap = limits.max_elements;
    let over = || Error::Resource(format!("semigroup closure exceeded {cap} elements"));

    let mut elements: IndexSet<Transformation, FxBuildHasher> = IndexSet::default();
    for g in generators {
        if elements.len() >= cap && !elements.contains(g) {
            return Err(over());
        }
        elements.insert(g.clone());
    }
    let gens: Vec<&[u8]> = generators.iter().map(|g| g.as_bytes()).collect();
    let mut current = vec![0u8; n];
    let mut product = vec![0u8; n];
    let mut i = 0;
    while i < elements.len() {
        current.copy_from_slice(elements[i].as_bytes());
        for g in &gens {
            for (p, &q) in product.iter_mut().zip(current.iter()) {
                *p = g[q as usize];
            }
            if !elements.contains(product.as_slice()) {
                if elements.len() >= cap {
                    return Err(over());
                }
                elements.insert(Transformation(product.as_slice().into()));
            }
        }
        i += 1;
    }
    Ok(SemigroupClosure {
        elements,
        generator_count: generators.len(),
    })
}

/// Size of the transition semigroup of the minimal DFA of `d`.
pub fn syntactic_complexity(d: &Dfa) -> Result<usize> {
    syntactic_complexity_with(d, &Limits::default())
}

pub fn syntactic_complexity_with(d: &Dfa, limits: &Limits) -> Result<usize> {
    let m = minimize(d);
    Ok(closure_with(&letter_transformations(&m)?, limits)?.size())
}

/// The three transformation types making up the largest transition semigroup
/// of a minimal bifix-free DFA (states in conventional numbering).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WbfType {
    /// `{0, n-2, n-1} → n-1`, middle states map anywhere but `0`.
    Type1,
    /// `0 → n-2`, `{n-2, n-1} → n-1`, middle states into middle ∪ `{n-1}`.
    Type2,
    /// `0 →` a middle state, `{n-2, n-1} → n-1`, middle states into `{n-2, n-1}`.
    Type3,
}

impl WbfType {
    pub const ALL: [WbfType; 3] = [WbfType::Type1, WbfType::Type2, WbfType::Type3];

    /// Per-state sets of allowed images, in increasing order. The
    /// transformations of this type are exactly the products of these choices.
    pub fn choices(self, n: usize) -> Vec<Vec<usize>> {
        let (fin, empty) = (n - 2, n - 1);
        let middle: Vec<usize> = (1..fin).collect();
        (0..n)
            .map(|q| match (self, q) {
                (_, q) if q == fin || q == empty => vec![empty],
                (WbfType::Type1, 0) => vec![empty],
                (WbfType::Type1, _) => (1..n).collect(),
                (WbfType::Type2, 0) => vec![fin],
                (WbfType::Type2, _) => middle.iter().copied().chain([empty]).collect(),
                (WbfType::Type3, 0) => middle.clone(),
                (WbfType::Type3, _) => vec![fin, empty],
            })
            .collect()
    }

    /// All transformations of this type in lexicographic order of target vectors.
    pub fn enumerate(self, n: usize) -> Vec<Transformation> {
        if n < 3 {
            return Vec::new();
        }
        let choices = self.choices(n);
        if choices.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            let targets: Vec<usize> = digits.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            out.push(Transformation::new(&targets).expect("targets in range"));
            // Odometer with state 0 as the most significant position.
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < choices[pos].len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

impl fmt::Display for WbfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            WbfType::Type1 => 1,
            WbfType::Type2 => 2,
            WbfType::Type3 => 3,
        };
        write!(f, "type{i}")
    }
}

pub fn classify_wbf(t: &Transformation) -> Option<WbfType> {
    let n = t.degree();
    if n < 3 {
        return None;
    }
    let (fin, empty) = (n - 2, n - 1);
    let middle = 1..fin;
    let is_middle = |q: usize| (1..fin).contains(&q);
    if t.image(fin) != empty || t.image(empty) != empty {
        return None;
    }
    let zero = t.image(0);
    if zero == empty {
        // Middle states may go anywhere except 0.
        middle.clone().all(|q| t.image(q) != 0).then_some(WbfType::Type1)
    } else if zero == fin {
        middle
            .clone()
            .all(|q| is_middle(t.image(q)) || t.image(q) == empty)
            .then_some(WbfType::Type2)
    } else if is_middle(zero) {
        middle
            .clone()
            .all(|q| t.image(q) == fin || t.image(q) == empty)
            .then_some(WbfType::Type3)
    } else {
        None
    }
}

pub fn is_sub_wbf(c: &SemigroupClosure) -> bool {
    c.elements().all(|t| classify_wbf(t).is_some())
}

/// `(n-1)^(n-3) + (n-2)^(n-3) + (n-3)·2^(n-3)`, the size of the largest
/// bifix-free transition semigroup, for `n >= 6`.
pub fn wbf_size_formula(n: usize) -> Result<u64> {
    if n < 6 {
        return input(format!("the size formula holds for n >= 6, got {n}"));
    }
    let e = u32::try_from(n - 3).map_err(|_| Error::Input("n too large".into()))?;
    let n = n as u64;
    let overflow = || Error::Input(format!("size formula overflows at n = {n}"));
    let a = (n - 1).checked_pow(e).ok_or_else(overflow)?;
    let b = (n - 2).checked_pow(e).ok_or_else(overflow)?;
    let c = (n - 3)
        .checked_mul(2u64.checked_pow(e).ok_or_else(overflow)?)
        .ok_or_else(overflow)?;
    a.checked_add(b).and_then(|s| s.checked_add(c)).ok_or_else(overflow)
}

/// All transformations of the three types, type 1 first, each type in
/// lexicographic order.
pub fn wbf_elements(n: usize) -> Vec<Transformation> {
    WbfType::ALL.iter().flat_map(|ty| ty.enumerate(n)).collect()
}

fn middle_states(n: usize) -> std::ops::Range<usize> {
    1..n.saturating_sub(2).max(1)
}

/// Pairs `{p, q}` of distinct middle states such that some element maps `0`
/// to `p` and some middle state to `q`.
pub fn colliding_pairs(c: &SemigroupClosure) -> BTreeSet<(usize, usize)> {
    let n = c.degree();
    let middle = middle_states(n);
    let mut pairs = BTreeSet::new();
    for t in c.elements() {
        let p = t.image(0);
        if !middle.contains(&p) {
            continue;
        }
        for r in middle.clone() {
            let q = t.image(r);
            if q != p && middle.contains(&q) {
                pairs.insert((p.min(q), p.max(q)));
            }
        }
    }
    pairs
}

/// Pairs of distinct middle states sent by some element to one state among
/// the middle states and `n-2`.
pub fn focused_pairs(c: &SemigroupClosure) -> BTreeSet<(usize, usize)> {
    let n = c.degree();
    let middle = middle_states(n);
    let mut pairs = BTreeSet::new();
    let mut by_image: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in c.elements() {
        by_image.iter_mut().for_each(Vec::clear);
        for q in middle.clone() {
            let r = t.image(q);
            if middle.contains(&r) || r + 2 == n {
                by_image[r].push(q);
            }
        }
        for group in by_image.iter().filter(|g| g.len() > 1) {
            for (i, &p) in group.iter().enumerate() {
                for &q in &group[i + 1..] {
                    pairs.insert((p, q));
                }
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v).unwrap()
    }

    /// Straightforward reference: apply `first`, then `second`.
    fn compose_reference(first: &[usize], second: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for q in 0..first.len() {
            out.push(second[first[q]]);
        }
        out
    }

    #[test]
    fn compose_left_to_right() {
        let a = [5, 1, 2, 3, 5, 5];
        let b = [5, 2, 3, 1, 5, 5];
        let ab = compose(&t(&a), &t(&b)).unwrap();
        assert_eq!(ab.targets(), compose_reference(&a, &b));
        assert_eq!(ab.image(1), 2);
        assert_eq!(ab.targets(), vec![5, 2, 3, 1, 5, 5]);
        let ba = compose(&t(&b), &t(&a)).unwrap();
        assert_eq!(ba.targets(), compose_reference(&b, &a));
        assert_eq!(ba.targets(), vec![5, 2, 3, 1, 5, 5]);
        assert_eq!(compose(&t(&a), &Transformation::identity(6).unwrap()).unwrap(), t(&a));
        assert!(compose(&t(&a), &t(&[0, 1])).is_err());
    }

    #[test]
    fn transformation_validation() {
        assert!(Transformation::new(&[]).is_err());
        assert!(Transformation::new(&[0, 2]).is_err());
        assert_eq!(t(&[1, 0]).to_string(), "[1,0]");
    }

    #[test]
    fn unary_chain_closure() {
        let c = closure(&[t(&[1, 2, 3, 4, 4])]).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(c.generator_count(), 1);
        assert!(closure(&[]).is_err());
        assert!(closure(&[t(&[0]), t(&[0, 1])]).is_err());
    }

    #[test]
    fn closure_element_cap() {
        let limits = Limits {
            max_elements: 3,
            ..Limits::default()
        };
        let gens = [t(&[1, 2, 3, 4, 4])];
        assert!(matches!(closure_with(&gens, &limits), Err(Error::Resource(_))));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_wbf(&t(&[5, 1, 2, 3, 5, 5])), Some(WbfType::Type1));
        assert_eq!(classify_wbf(&t(&[4, 5, 5, 5, 5, 5])), Some(WbfType::Type2));
        assert_eq!(classify_wbf(&t(&[2, 4, 5, 4, 5, 5])), Some(WbfType::Type3));
        assert_eq!(classify_wbf(&Transformation::identity(6).unwrap()), None);
        // Type 2 must not send a middle state to n-2.
        assert_eq!(classify_wbf(&t(&[4, 4, 5, 5, 5, 5])), None);
    }

    #[test]
    fn identity_breaks_sub_wbf() {
        let c = closure(&[Transformation::identity(6).unwrap()]).unwrap();
        assert!(!is_sub_wbf(&c));
    }

    #[test]
    fn size_formula() {
        assert_eq!(wbf_size_formula(6).unwrap(), 213);
        assert_eq!(wbf_size_formula(7).unwrap(), 1985);
        assert_eq!(wbf_size_formula(8).unwrap(), 24743);
        assert_eq!(wbf_size_formula(9).unwrap(), 380177);
        assert!(wbf_size_formula(5).is_err());
    }

    #[test]
    fn type_enumeration_sizes() {
        for n in 6..9 {
            let sizes: Vec<usize> = WbfType::ALL.iter().map(|ty| ty.enumerate(n).len()).collect();
            let e = n as u32 - 3;
            assert_eq!(sizes, vec![(n - 1).pow(e), (n - 2).pow(e), (n - 3) * 2usize.pow(e)]);
            assert_eq!(wbf_elements(n).len() as u64, wbf_size_formula(n).unwrap());
        }
        let t2 = WbfType::Type2.enumerate(6);
        assert!(t2.windows(2).all(|w| w[0] < w[1]));
        assert!(t2.iter().all(|x| classify_wbf(x) == Some(WbfType::Type2)));
        assert!(WbfType::Type3.enumerate(3).is_empty());
    }

    #[test]
    fn collision_and_focus_examples() {
        let c = closure(&[t(&[1, 2, 5, 5, 5, 5])]).unwrap();
        assert!(colliding_pairs(&c).contains(&(1, 2)));
        let c = closure(&[t(&[5, 3, 3, 5, 5, 5])]).unwrap();
        assert!(focused_pairs(&c).contains(&(1, 2)));
        let c = closure(&[t(&[5, 2, 3, 1, 5, 5]), t(&[5, 4, 1, 3, 5, 5])]).unwrap();
        assert!(colliding_pairs(&c).is_empty());
        // Unary chain of 6 states: injective on the middle states until the sink.
        let c = closure(&[t(&[1, 2, 3, 4, 5, 5])]).unwrap();
        assert!(focused_pairs(&c).is_empty());
    }
}
