use super::*;
use crate::skewmatrix::random_instance;

const RUNNING_SUPPORT: [(usize, usize); 8] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)];

fn running_example(seed: u64) -> RootedGraph {
    RootedGraph::from_matrix(&random_instance(4, 1, Some(&RUNNING_SUPPORT), seed, 9).unwrap())
}

fn m0() -> PerfectMatching {
    PerfectMatching::parse(4, "1-4,2-3").unwrap()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

#[test]
fn first_round_on_the_running_example() {
    let g = running_example(11);
    let s = superimpose_and_orient(&m0(), &m0());
    let set = open_step1(&g, &s).unwrap();
    assert_eq!(sorted(set.labels()), vec!["1,2,1", "1,2,5", "1,3,1", "1,5"]);
    assert_eq!(set.cancelled.len(), 1);
    let (a, b) = &set.cancelled[0];
    let mut pair = vec![a.clone(), b.clone()];
    pair.sort();
    assert_eq!(pair, vec![vec![1, 4, 2, 3, 4], vec![1, 4, 3, 2, 4]]);
    assert_eq!(set.total(), matching_weight(&s, &g));
}

#[test]
fn no_doubled_edges_returns_the_superimposition() {
    let g = running_example(11);
    let m = PerfectMatching::parse(4, "1-2,3-4").unwrap();
    let s = superimpose_and_orient(&m0(), &m);
    let set = open_step1(&g, &s).unwrap();
    assert_eq!(set.items.len(), 1);
    assert_eq!(set.items[0].label(), "");
    assert_eq!(set.total(), matching_weight(&s, &g));
    let complete = run_complete(&g, &m0(), &m).unwrap();
    assert_eq!(complete.items.len(), 1);
    assert!(complete.items[0].config.is_cycles_only());
}

#[test]
fn complete_run_on_the_running_example() {
    let g = running_example(11);
    let t = run_complete(&g, &m0(), &m0()).unwrap();
    assert_eq!(
        sorted(t.labels()),
        vec!["1,2,1", "1,2,5", "1,3,1", "1,5;2,1", "1,5;2,4", "1,5;2,5"]
    );
    assert!(t.items.iter().all(|i| i.remaining_doubled == 0));
    let forests = t.items.iter().filter(|i| i.config.is_forest()).count();
    assert_eq!(forests, 4);
}

#[test]
fn unicycles_of_m0_cancel_against_other_matchings() {
    let g = running_example(11);
    let t = run_complete(&g, &m0(), &m0()).unwrap();
    let others: Vec<OutputItem> = enumerate_perfect_matchings(&g)
        .iter()
        .filter(|m| **m != m0())
        .flat_map(|m| run_complete(&g, &m0(), m).unwrap().items)
        .collect();
    let unicycles: Vec<&OutputItem> = t.items.iter().filter(|i| !i.config.is_forest()).collect();
    assert_eq!(unicycles.len(), 2);
    for u in unicycles {
        let shape = canonical_shape(&u.config, &m0());
        let partner = others
            .iter()
            .find(|o| canonical_shape(&o.config, &m0()) == shape)
            .expect("unicycle has a partner");
        assert_eq!(partner.weight, -u.weight.clone());
    }
}

#[test]
fn correspondence_on_the_running_example() {
    for seed in 0..5 {
        let g = running_example(seed);
        let report = verify_correspondence(&g, &m0());
        assert!(report.passed(), "{:?}", report.problems);
        assert_eq!(report.forests, 4);
        assert_eq!(report.unicycle_residue, "0");
    }
}

#[test]
fn totals_add_up_to_the_pfaffian() {
    for seed in 0..4 {
        let a = random_instance(6, 1, None, seed, 7).unwrap();
        let g = RootedGraph::from_matrix(&a);
        let m0 = PerfectMatching::parse(6, "1-2,3-4,5-6").unwrap();
        let total: Rational = enumerate_perfect_matchings(&g)
            .iter()
            .map(|m| run_complete(&g, &m0, m).unwrap().total())
            .sum();
        assert_eq!(total, a.core_block().pfaffian_by_elimination());
    }
}

#[test]
fn correspondence_on_random_six_vertex_instances() {
    for seed in 0..3 {
        let g = RootedGraph::from_matrix(&random_instance(6, 1, None, 100 + seed, 5).unwrap());
        for m0 in enumerate_perfect_matchings(&g).into_iter().step_by(4) {
            let report = verify_correspondence(&g, &m0);
            assert!(report.passed(), "{m0}: {:?}", report.problems);
        }
    }
}
