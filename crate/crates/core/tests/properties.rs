use proptest::prelude::*;

use halftree::forests::{pfaffian_via_half_forests, trim};
use halftree::graphmodel::{enumerate_perfect_matchings, pfaffian_via_matchings, RootedGraph};
use halftree::hypergraph::{matrix_from_hyperweights, HyperWeights};
use halftree::linebundle::{canonical_orientation, crsf_weight, det_via_crsf, enumerate_crsf, twist, Connection};
use halftree::opening::{enumerate_rcrsf, matchings_from_rcrsf, partial_reverse, run_complete};
use halftree::rational::{self, Rational};
use halftree::skewmatrix::{determinant, random_closed_instance, random_instance, SkewMatrix};

fn skew(size: usize) -> impl Strategy<Value = SkewMatrix> {
    prop::collection::vec((-9i64..=9, 1i64..=4), size * (size - 1) / 2).prop_map(move |vals| {
        let mut rows = vec![vec![rational::zero(); size]; size];
        let mut it = vals.into_iter();
        for i in 0..size {
            for j in i + 1..size {
                let (p, q) = it.next().unwrap();
                rows[i][j] = rational::rat(p, q);
                rows[j][i] = -rational::rat(p, q);
            }
        }
        SkewMatrix::from_rows(rows).unwrap()
    })
}

fn instance() -> impl Strategy<Value = SkewMatrix> {
    (prop::sample::select(vec![2usize, 4]), 1usize..=2, any::<u64>())
        .prop_map(|(n, r, seed)| random_instance(n, r, None, seed, 6).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pfaffian_oracles_agree(a in (2usize..=7).prop_flat_map(skew)) {
        let p = a.pfaffian_by_pairings();
        prop_assert_eq!(&p, &a.pfaffian_by_elimination());
        prop_assert_eq!(a.determinant(), &p * &p);
    }

    #[test]
    fn generated_instances_are_zero_sum_and_round_trip(a in instance()) {
        prop_assert!(a.validate(true).passed());
        prop_assert_eq!(SkewMatrix::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn every_reference_gives_the_pfaffian(a in instance()) {
        let g = RootedGraph::from_matrix(&a);
        let pf = a.core_block().pfaffian_by_elimination();
        for m0 in enumerate_perfect_matchings(&g) {
            prop_assert_eq!(&pfaffian_via_matchings(&g, &m0), &pf);
            prop_assert_eq!(&pfaffian_via_half_forests(&g, &m0), &pf);
        }
    }

    #[test]
    fn complete_opening_preserves_each_matching(a in instance()) {
        let g = RootedGraph::from_matrix(&a);
        let ms = enumerate_perfect_matchings(&g);
        let pf = a.core_block().pfaffian_by_elimination();
        for m0 in &ms {
            let total: Rational = ms.iter().map(|m| run_complete(&g, m0, m).unwrap().total()).sum();
            prop_assert_eq!(&total, &pf);
        }
    }

    #[test]
    fn rcrsf_matchings_are_perfect_matchings_of_the_graph(a in instance()) {
        let g = RootedGraph::from_matrix(&a);
        for m0 in enumerate_perfect_matchings(&g) {
            for f in enumerate_rcrsf(&g, &m0) {
                let ms = matchings_from_rcrsf(&f, &m0);
                prop_assert_eq!(ms.len(), 1 << f.cycles().len());
                prop_assert!(ms.iter().all(|m| m.is_in(&g)));
                if f.is_forest() {
                    prop_assert_eq!(partial_reverse(&f, Some(&m0)).unwrap(), trim(&f, Some(&m0)));
                }
            }
        }
    }

    #[test]
    fn twisted_determinant_is_the_crsf_sum(seed in any::<u64>(), cseed in any::<u64>()) {
        let a = random_closed_instance(4, None, seed, 6).unwrap();
        let g = RootedGraph::from_matrix(&a);
        let c = Connection::random(&g, cseed, 4);
        let det = determinant(&twist(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(det_via_crsf(&a, &c).unwrap(), det);
        prop_assert_eq!(det_via_crsf(&a, &Connection::trivial(&g)).unwrap(), rational::zero());
    }

    #[test]
    fn crsf_weights_ignore_cycle_orientation(seed in any::<u64>(), cseed in any::<u64>()) {
        let a = random_closed_instance(4, None, seed, 6).unwrap();
        let g = RootedGraph::from_matrix(&a);
        let c = Connection::random(&g, cseed, 4);
        for f in enumerate_crsf(&g) {
            prop_assert_eq!(crsf_weight(&a, &c, &f).unwrap(), crsf_weight(&a, &c, &canonical_orientation(&f)).unwrap());
        }
    }

    #[test]
    fn hyperweight_matrices_are_zero_sum(seed in any::<u64>(), v in prop::sample::select(vec![3usize, 5, 7])) {
        let a = matrix_from_hyperweights(&HyperWeights::random(v, seed, 5));
        prop_assert!(a.validate(true).passed());
    }
}
