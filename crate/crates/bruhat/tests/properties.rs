//! Randomized structural laws over all three kinds.

use bruhat::{
    contains, count_occurrences, first_reduced_word, generators, occurrences, BruhatContext,
    GroupElement, Kind, PatternSpec, Side, Word,
};
use proptest::prelude::*;

fn kinds() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::A), Just(Kind::B), Just(Kind::D)]
}

/// A random group element, reached from the identity by a random word.
fn elements() -> impl Strategy<Value = GroupElement> {
    (kinds(), 2u8..=5, prop::collection::vec(0usize..64, 0..14)).prop_map(walk)
}

fn unsigned_elements(n: u8, steps: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0usize..64, 0..=steps).prop_map(move |picks| walk((Kind::A, n, picks)))
}

/// Two random elements drawn from one shared group.
fn element_pairs() -> impl Strategy<Value = (GroupElement, GroupElement)> {
    (kinds(), 2u8..=5).prop_flat_map(|(kind, n)| {
        let picks = || prop::collection::vec(0usize..64, 0..14);
        (picks(), picks()).prop_map(move |(a, b)| (walk((kind, n, a)), walk((kind, n, b))))
    })
}

fn walk((kind, n, picks): (Kind, u8, Vec<usize>)) -> GroupElement {
    let gens = generators(kind, n);
    let mut w = GroupElement::identity(kind, n);
    for p in picks {
        w = w.apply_generator(gens[p % gens.len()], Side::Right).unwrap();
    }
    w
}

proptest! {
    #[test]
    fn window_text_round_trips(w in elements()) {
        let text = w.to_string();
        prop_assert_eq!(GroupElement::parse(w.kind(), &text).unwrap(), w);
    }

    #[test]
    fn generator_actions_are_involutions(
        w in elements(),
        pick in 0usize..64,
        left in any::<bool>(),
    ) {
        let side = if left { Side::Left } else { Side::Right };
        let gens = generators(w.kind(), w.n());
        let letter = gens[pick % gens.len()];
        let v = w.apply_generator(letter, side).unwrap();
        prop_assert_eq!(v.apply_generator(letter, side).unwrap(), w.clone());
        let (lv, lw) = (v.length(), w.length());
        prop_assert_eq!(lv.max(lw) - lv.min(lw), 1);
    }

    #[test]
    fn first_word_recovers_its_element(w in elements()) {
        let word = first_reduced_word(&w);
        prop_assert!(word.is_reduced());
        prop_assert_eq!(word.len() as u32, w.length());
        prop_assert_eq!(word.evaluate(), w.clone());
        let reparsed = if word.is_empty() {
            word.clone()
        } else {
            Word::parse(w.kind(), Some(w.n()), &word.to_string()).unwrap()
        };
        prop_assert_eq!(reparsed, word);
    }

    #[test]
    fn comparison_is_a_partial_order(
        u in unsigned_elements(4, 6),
        v in unsigned_elements(4, 6),
        w in unsigned_elements(4, 6),
    ) {
        let ctx = BruhatContext::new(Kind::A, 4);
        prop_assert!(ctx.leq(&u, &u).unwrap());
        if ctx.leq(&u, &v).unwrap() && ctx.leq(&v, &u).unwrap() {
            prop_assert_eq!(&u, &v);
        }
        if ctx.leq(&u, &v).unwrap() && ctx.leq(&v, &w).unwrap() {
            prop_assert!(ctx.leq(&u, &w).unwrap());
        }
    }

    #[test]
    fn inversion_preserves_comparison((w, v) in element_pairs()) {
        let ctx = BruhatContext::new(w.kind(), w.n());
        prop_assert_eq!(
            ctx.leq(&w, &v).unwrap(),
            ctx.leq(&w.inverse(), &v.inverse()).unwrap()
        );
    }

    #[test]
    fn occurrence_listing_is_consistent(
        w in unsigned_elements(5, 8),
        p in prop::sample::select(vec![
            vec![2i8, 1],
            vec![3, 2, 1],
            vec![2, 3, 1],
            vec![3, 1, 2],
            vec![3, 4, 1, 2],
            vec![4, 2, 3, 1],
        ]),
    ) {
        let pattern = PatternSpec::new(p).unwrap();
        let found = occurrences(&w, &pattern).unwrap();
        prop_assert_eq!(found.len() as u64, count_occurrences(&w, &pattern).unwrap());
        prop_assert_eq!(!found.is_empty(), contains(&w, &pattern).unwrap());
        for occ in &found {
            prop_assert!(occ.positions.windows(2).all(|p| p[0] < p[1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideal_products_commute_up_to_isomorphism(
        u in unsigned_elements(3, 3),
        v in unsigned_elements(4, 4),
    ) {
        let p = BruhatContext::new(Kind::A, 3).principal_ideal(&u).unwrap();
        let q = BruhatContext::new(Kind::A, 4).principal_ideal(&v).unwrap();
        let forward = p.product(&q).unwrap();
        let backward = q.product(&p).unwrap();
        prop_assert!(forward.is_isomorphic(&backward).is_some());
    }
}
