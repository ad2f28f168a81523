use proptest::prelude::*;

use propchoose::acceptance::oracle;
use propchoose::list::{canonical_form, class_size_bounds, sample_assignment};
use propchoose::solver::{find_proportional, verify_proportional};
use propchoose::{Coloring, Graph, ListAssignment};

fn instance() -> impl Strategy<Value = (Vec<usize>, usize, usize, u64)> {
    (prop::collection::vec(1usize..=3, 1..=3), 1usize..=3, 0usize..=3, any::<u64>())
        .prop_filter("at most five vertices", |(parts, ..)| parts.iter().sum::<usize>() <= 5)
        .prop_map(|(parts, k, extra, seed)| (parts, k, k + extra.min(k), seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_matches_naive_oracle((parts, k, palette, seed) in instance()) {
        let g = Graph::complete_multipartite(&parts).unwrap();
        let l = sample_assignment(&g, k, palette, seed).unwrap();
        let found = find_proportional(&g, &l).unwrap();
        if let Some(f) = &found {
            prop_assert!(verify_proportional(&g, &l, f).is_empty());
        }
        prop_assert_eq!(found.is_some(), oracle::proportional_exists(&g, &l));
    }

    #[test]
    fn proportional_colorings_are_equitable((parts, k, palette, seed) in instance()) {
        let g = Graph::complete_multipartite(&parts).unwrap();
        let l = sample_assignment(&g, k, palette, seed).unwrap();
        if let Some(f) = find_proportional(&g, &l).unwrap() {
            let cap = g.vertex_count().div_ceil(k);
            prop_assert!(f.class_sizes().values().all(|&s| s <= cap));
        }
    }

    #[test]
    fn class_bounds_bracket_vertex_count((parts, k, palette, seed) in instance()) {
        let g = Graph::complete_multipartite(&parts).unwrap();
        let l = sample_assignment(&g, k, palette, seed).unwrap();
        let (mut lo, mut hi) = (0, 0);
        for s in l.supports().values() {
            let (a, b) = class_size_bounds(s.len(), k);
            prop_assert!(a <= b && b <= a + 1);
            lo += a;
            hi += b;
        }
        prop_assert!(lo <= g.vertex_count() && g.vertex_count() <= hi);
    }

    #[test]
    fn canonical_form_ignores_renaming_and_part_swaps((parts, k, palette, seed) in instance(), shift in 1u32..50) {
        let g = Graph::complete_multipartite(&parts).unwrap();
        let l = sample_assignment(&g, k, palette, seed).unwrap();
        let base = canonical_form(&g, &l).unwrap();
        let renamed = l.recolored(|c| (palette as u32 + 1 - c) * shift).unwrap();
        prop_assert_eq!(&canonical_form(&g, &renamed).unwrap(), &base);
        let first = g.part_sets().unwrap()[0];
        if first.len() >= 2 {
            let mut lists = l.lists().to_vec();
            lists.swap(0, 1);
            let swapped = ListAssignment::new(lists).unwrap();
            prop_assert_eq!(&canonical_form(&g, &swapped).unwrap(), &base);
        }
    }

    #[test]
    fn file_formats_round_trip((parts, k, palette, seed) in instance()) {
        let g = Graph::complete_multipartite(&parts).unwrap();
        let l = sample_assignment(&g, k, palette, seed).unwrap();
        prop_assert_eq!(&ListAssignment::parse_file(&l.to_file_string()).unwrap(), &l);
        let f = Coloring::new(l.lists().iter().map(|x| x[0]).collect());
        prop_assert_eq!(Coloring::parse_file(&f.to_file_string()).unwrap(), f);
    }
}
