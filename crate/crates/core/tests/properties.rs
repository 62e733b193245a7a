use hitomezashi_core::linklike::{swap_first_strands, LinkLikeGraph};
use hitomezashi_core::oracle::{brute_oracle, decomposition_as_brute};
use hitomezashi_core::pattern::{gcd, Symmetry};
use hitomezashi_core::{decompose, SignString, ToroidalPattern};
use proptest::prelude::*;

fn sign_string(min: usize, max: usize) -> impl Strategy<Value = SignString> {
    (min..=max).prop_flat_map(|n| any::<u64>().prop_map(move |b| SignString::from_bits(b, n)))
}

fn pattern(max: usize) -> impl Strategy<Value = ToroidalPattern> {
    (sign_string(3, max), sign_string(3, max))
        .prop_map(|(x, y)| ToroidalPattern::from_strings(x, y).unwrap())
}

fn counts(p: &ToroidalPattern) -> (usize, usize, Vec<(i64, i64)>) {
    let s = decompose(p).summary();
    let mut classes: Vec<_> = s.nontrivial_classes().map(|(c, _)| c).collect();
    classes.sort();
    (s.total, s.trivial, classes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn loops_partition_every_edge(p in pattern(12)) {
        let d = decompose(&p);
        let mut seen = vec![false; p.num_edges()];
        for l in &d.loops {
            for e in &l.edges {
                let k = p.edge_index(e);
                prop_assert!(!seen[k]);
                seen[k] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(d.homology_sum(), (p.kx(), p.ky()));
    }

    #[test]
    fn cyclic_shifts_only_translate(p in pattern(10), r in 0usize..10, s in 0usize..10) {
        let q = p.rotate_rows(r % p.n()).rotate_columns(s % p.m());
        prop_assert_eq!(counts(&p), counts(&q));
    }

    #[test]
    fn grid_symmetries_preserve_counts(p in pattern(9)) {
        let base = decompose(&p).summary();
        for sym in Symmetry::ALL {
            let s = decompose(&sym.apply(&p)).summary();
            prop_assert_eq!(base.total, s.total);
            prop_assert_eq!(base.trivial, s.trivial);
            let mut mapped: Vec<_> = base.nontrivial_classes()
                .flat_map(|(c, k)| std::iter::repeat_n(sym.map_class(c), k))
                .collect();
            let mut got: Vec<_> = s.nontrivial_classes()
                .flat_map(|(c, k)| std::iter::repeat_n(c, k))
                .collect();
            mapped.sort();
            got.sort();
            prop_assert_eq!(mapped, got);
        }
    }

    #[test]
    fn brute_tracer_agrees(p in pattern(10)) {
        let d = decompose(&p);
        let (summary, loops) = brute_oracle(&p);
        prop_assert_eq!(summary, d.summary());
        prop_assert_eq!(loops, decomposition_as_brute(&d));
    }

    #[test]
    fn nontrivial_count_is_gcd(p in pattern(12)) {
        prop_assume!(p.kx() != 0 && p.ky() != 0);
        let s = decompose(&p).summary();
        prop_assert_eq!(s.nontrivial as i64, gcd(p.kx(), p.ky()));
        prop_assert_eq!(s.cw_trivial, s.ccw_trivial);
    }

    #[test]
    fn symmetric_totals_mod_4(x in sign_string(3, 16)) {
        let n = x.len();
        let total = decompose(&ToroidalPattern::symmetric(x).unwrap()).loops.len();
        prop_assert_eq!(total % 4, n % 4);
        prop_assert!(total >= n);
    }

    #[test]
    fn annulus_map_round_trips(x in sign_string(3, 9)) {
        let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
        let h = LinkLikeGraph::parse(&g.dump()).unwrap();
        prop_assert_eq!(&g, &h);
        prop_assert_eq!(g.euler_characteristic(), 2);
        let loops = decompose(&ToroidalPattern::symmetric(x).unwrap()).loops.len();
        prop_assert_eq!(g.seifert_count().unwrap(), loops);
    }

    #[test]
    fn swapping_strands_matches_transposed_string(x in sign_string(3, 8)) {
        let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
        let out = swap_first_strands(&g).unwrap();
        let want = decompose(&ToroidalPattern::symmetric(x.swapped(0, 1)).unwrap()).loops.len();
        prop_assert_eq!(out.graph.seifert_count().unwrap(), want);
        for m in &out.moves {
            prop_assert!([-2, 0, 2].contains(&m.delta()));
        }
    }
}
