//! Witness values worked out by hand or by independent counting.

mod common;

use std::collections::BTreeSet;

use bifixlab::atoms::atoms;
use bifixlab::automata::state_complexity;
use bifixlab::freeness::{check_conventional, is_bifix_free};
use bifixlab::ops::{boolean, concat, reverse, reverse_range, star, BooleanKind};
use bifixlab::semigroup::{
    closure, colliding_pairs, focused_pairs, is_sub_wbf, letter_transformations, syntactic_complexity, wbf_elements,
    wbf_size_formula,
};
use bifixlab::witnesses::{
    atom_witness, revmagic, ternary_dialect, ternary_witness, wstream_alphabet_size, wstream_witness,
};

/// `(n-1)^(n-3) + (n-2)^(n-3) + (n-3) 2^(n-3)`, by plain arithmetic.
fn wbf_count(n: u64) -> u64 {
    (n - 1).pow(n as u32 - 3) + (n - 2).pow(n as u32 - 3) + (n - 3) * 2u64.pow(n as u32 - 3)
}

#[test]
fn wbf_sizes() {
    for (n, v) in [(6, 213), (7, 1985), (8, 24743), (9, 380177)] {
        assert_eq!(wbf_count(n), v);
        assert_eq!(wbf_size_formula(n as usize).unwrap(), v);
    }
    for n in 6..=8 {
        assert_eq!(wbf_elements(n).len() as u64, wbf_count(n as u64));
    }
}

#[test]
fn wstream_semigroup_at_six_and_seven() {
    let d = wstream_witness(6).unwrap();
    let c = closure(&letter_transformations(&d).unwrap()).unwrap();
    let direct: BTreeSet<_> = wbf_elements(6).into_iter().collect();
    let closed: BTreeSet<_> = c.elements().cloned().collect();
    assert_eq!(closed, direct);
    assert!(is_sub_wbf(&c));
    assert!(colliding_pairs(&c).is_empty());
    let middle = 1..=3usize;
    let all: BTreeSet<(usize, usize)> = middle
        .clone()
        .flat_map(|p| middle.clone().filter(move |&q| p < q).map(move |q| (p, q)))
        .collect();
    assert_eq!(focused_pairs(&c), all);
    assert_eq!(syntactic_complexity(&wstream_witness(7).unwrap()).unwrap(), 1985);
}

#[test]
fn alphabet_sizes() {
    for n in 7..=10 {
        assert_eq!(ternary_witness(n).unwrap().symbol_count(), 3);
    }
    for n in 6..=10 {
        assert_eq!(atom_witness(n).unwrap().symbol_count(), n + 1);
    }
    assert_eq!(wstream_alphabet_size(6), Some(87));
    assert_eq!(wstream_alphabet_size(7), Some(688));
    assert_eq!(wstream_alphabet_size(8), Some(7935));
    assert_eq!(wstream_witness(7).unwrap().symbol_count(), 688);
}

#[test]
fn ternary_operations() {
    for (m, n) in [(9, 9), (9, 10), (10, 10)] {
        let (l, r) = (ternary_witness(m).unwrap(), ternary_dialect(n).unwrap());
        let sc = |kind| state_complexity(&boolean(&l, &r, kind).unwrap());
        assert_eq!(sc(BooleanKind::Union), m * n - (m + n));
        assert_eq!(sc(BooleanKind::SymmetricDifference), m * n - (m + n));
        assert_eq!(sc(BooleanKind::Intersection), m * n - 3 * (m + n - 4));
        assert_eq!(sc(BooleanKind::Difference), m * n - (2 * m + 3 * n - 9));
        assert_eq!(state_complexity(&concat(&l, &r).unwrap()), m + n - 2);
    }
    for n in 7..=10 {
        assert_eq!(state_complexity(&star(&ternary_witness(n).unwrap()).unwrap()), n - 1);
    }
}

#[test]
fn ternary_reversal() {
    for n in 9..=12 {
        let r = reverse(&ternary_witness(n).unwrap()).unwrap();
        assert_eq!(state_complexity(&r), (1 << (n - 3)) + 2);
        assert!(is_bifix_free(&r));
    }
}

#[test]
fn revmagic_covers_range() {
    assert_eq!(reverse_range(6).unwrap(), 5..=10);
    assert_eq!(reverse_range(7).unwrap(), 6..=18);
    for n in [6, 7] {
        for alpha in reverse_range(n).unwrap() {
            let d = revmagic(n, alpha).unwrap();
            check_conventional(&d).unwrap();
            assert_eq!(
                state_complexity(&reverse(&d).unwrap()) as u64,
                alpha,
                "n={n} alpha={alpha}"
            );
        }
    }
}

#[test]
fn atom_witness_has_all_atoms() {
    for n in [6, 7] {
        let found = atoms(&atom_witness(n).unwrap()).unwrap();
        assert_eq!(found.len(), (1 << (n - 3)) + 2);
        let by_words = common::atom_sets_by_words(&atom_witness(n).unwrap(), 2 * n);
        assert_eq!(by_words.len(), found.len());
    }
}
