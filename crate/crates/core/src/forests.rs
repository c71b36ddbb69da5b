//! Spanning forests of `G^R`, the trimming decomposition, Condition (C), and
//! the half-forest expansions of the Pfaffian and determinant.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::config::{peel, Config};
use crate::error::{Error, Result};
use crate::graphmodel::{enumerate_perfect_matchings, PerfectMatching, RootedGraph};
use crate::perm;
use crate::rational::{self, signed, Rational};

/// Paths stripped off a configuration, in the order they were removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathDecomposition {
    pub paths: Vec<Vec<usize>>,
    /// Whether each path starts with a reference-matching edge, when a
    /// reference matching was supplied.
    pub starts_with_m0: Option<Vec<bool>>,
}

impl PathDecomposition {
    pub fn new(paths: Vec<Vec<usize>>, m0: Option<&PerfectMatching>) -> Self {
        let starts_with_m0 =
            m0.map(|m0| paths.iter().map(|p| m0.contains(p[0], p[1])).collect::<Vec<_>>());
        PathDecomposition { paths, starts_with_m0 }
    }

    pub fn all_even(&self) -> bool {
        self.paths.iter().all(|p| (p.len() - 1) % 2 == 0)
    }

    /// All paths even and, when a reference matching is attached, all
    /// starting with one of its edges.
    pub fn condition_c(&self) -> bool {
        self.all_even() && self.starts_with_m0.as_ref().map_or(true, |s| s.iter().all(|&b| b))
    }
}

/// Every assignment of one outgoing edge per vertex of `V` without a cycle.
pub fn enumerate_spanning_forests(g: &RootedGraph) -> Vec<Config> {
    let n = g.n();
    let choices: Vec<Vec<usize>> = (1..=n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut out = Vec::new();
    if g.r() == 0 {
        return out;
    }
    search_acyclic(n, &choices, &mut vec![0; n], 0, &mut out);
    out
}

/// Spanning forests containing every pair of `m0`.
pub fn enumerate_compatible_forests(g: &RootedGraph, m0: &PerfectMatching) -> Vec<Config> {
    compatible_assignments(g, m0)
        .into_iter()
        .filter(Config::is_forest)
        .collect()
}

/// Every configuration holding all edges of `m0` plus one further edge out of
/// the head of each `m0` edge, in a fixed order. Cycles are not filtered.
pub(crate) fn compatible_assignments(g: &RootedGraph, m0: &PerfectMatching) -> Vec<Config> {
    fn recurse(
        g: &RootedGraph,
        pairs: &[(usize, usize)],
        out: &mut Vec<usize>,
        acc: &mut Vec<Config>,
    ) {
        let Some((&(a, b), rest)) = pairs.split_first() else {
            acc.push(Config::new(out.len(), out.clone()));
            return;
        };
        for (tail, head) in [(a, b), (b, a)] {
            out[tail - 1] = head;
            for &w in g.neighbors(head) {
                if w != tail {
                    out[head - 1] = w;
                    recurse(g, rest, out, acc);
                }
            }
        }
        out[a - 1] = 0;
        out[b - 1] = 0;
    }
    let mut acc = Vec::new();
    if m0.is_in(g) {
        recurse(g, m0.pairs(), &mut vec![0; g.n()], &mut acc);
    }
    acc
}

fn search_acyclic(
    n: usize,
    choices: &[Vec<usize>],
    out: &mut Vec<usize>,
    v: usize,
    acc: &mut Vec<Config>,
) {
    if v == n {
        acc.push(Config::new(n, out.clone()));
        return;
    }
    for &w in &choices[v] {
        // Follow w through the vertices assigned so far; reaching v+1 closes a cycle.
        let mut u = w;
        while u <= v {
            u = out[u - 1];
        }
        if u != v + 1 {
            out[v] = w;
            search_acyclic(n, choices, out, v + 1, acc);
        }
    }
    out[v] = 0;
}

/// Every pair of `m0` appears, unoriented, among the edges of `f`.
pub fn is_compatible(f: &Config, m0: &PerfectMatching) -> bool {
    m0.pairs().iter().all(|&(a, b)| f.target(a) == b || f.target(b) == a)
}

/// The trimming decomposition.
///
/// When `m0` is given and `f` is compatible with it, each path that follows
/// only even paths starting with an `m0` edge is checked to alternate
/// between `m0` and other edges. (After an odd path the `m0` edge into a
/// vertex may already be gone, and alternation can break.)
pub fn trim(f: &Config, m0: Option<&PerfectMatching>) -> PathDecomposition {
    let decomposition = PathDecomposition::new(peel(f), m0);
    if let Some(m0) = m0 {
        if is_compatible(f, m0) {
            check_alternation(&decomposition.paths, m0);
        }
    }
    decomposition
}

pub(crate) fn check_alternation(paths: &[Vec<usize>], m0: &PerfectMatching) {
    for path in paths {
        assert!(alternates(path, m0), "trim path {path:?} does not alternate");
        if (path.len() - 1) % 2 == 1 || !m0.contains(path[0], path[1]) {
            break;
        }
    }
}

pub(crate) fn alternates(path: &[usize], m0: &PerfectMatching) -> bool {
    path.windows(3).all(|w| m0.contains(w[0], w[1]) != m0.contains(w[1], w[2]))
}

/// With `m0`: every trimming path is even and starts with an `m0` edge.
/// Without: every trimming path is even.
pub fn satisfies_condition_c(f: &Config, m0: Option<&PerfectMatching>) -> bool {
    trim(f, m0).condition_c()
}

/// For a forest whose trimming paths are all even, the first, third, ...
/// edge of each path. These form a perfect matching that the forest is
/// compatible with and satisfies Condition (C) for.
pub fn matching_from_even_paths(f: &Config) -> Option<PerfectMatching> {
    let d = trim(f, None);
    if !d.all_even() {
        return None;
    }
    let pairs: Vec<(usize, usize)> =
        d.paths.iter().flat_map(|p| p.windows(2).step_by(2).map(|e| (e[0], e[1]))).collect();
    PerfectMatching::new(f.n(), &pairs).ok()
}

/// Sign of the flattened description of `m0` with each pair oriented as in `f`.
pub fn forest_sign(f: &Config, m0: &PerfectMatching) -> i8 {
    let oriented: Vec<(usize, usize)> = m0
        .pairs()
        .iter()
        .map(|&(a, b)| if f.target(a) == b { (a, b) } else { (b, a) })
        .collect();
    perm::pairs_sign(&oriented)
}

/// Out-edges of `f` that are not `m0` edges, i.e. the edge leaving the head
/// of each oriented `m0` pair.
pub fn half_edges(f: &Config, m0: &PerfectMatching) -> Vec<(usize, usize)> {
    m0.pairs()
        .iter()
        .map(|&(a, b)| if f.target(a) == b { (b, f.target(b)) } else { (a, f.target(a)) })
        .collect()
}

/// `sgn · Π a_e` over the half-edges of `f`.
pub fn half_forest_weight(g: &RootedGraph, f: &Config, m0: &PerfectMatching) -> Rational {
    signed(forest_sign(f, m0), g.product(&half_edges(f, m0)))
}

/// The Condition-(C) forests compatible with `m0`, each with its signed
/// half-forest weight.
pub fn half_forests(g: &RootedGraph, m0: &PerfectMatching) -> Vec<(Config, Rational)> {
    enumerate_compatible_forests(g, m0)
        .into_iter()
        .filter(|f| satisfies_condition_c(f, Some(m0)))
        .map(|f| {
            let w = half_forest_weight(g, &f, m0);
            (f, w)
        })
        .collect()
}

pub fn pfaffian_via_half_forests(g: &RootedGraph, m0: &PerfectMatching) -> Rational {
    half_forests(g, m0).into_iter().map(|(_, w)| w).sum()
}

/// Both forest expansions of the determinant of the non-root block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminantExpansion {
    /// Sum over reference matchings of their Condition-(C) forests.
    #[serde(serialize_with = "ser_rational")]
    pub by_matchings: Rational,
    /// Sum over forests whose trimming paths are all even.
    #[serde(serialize_with = "ser_rational")]
    pub intrinsic: Rational,
    /// Number of forests in the intrinsic family.
    pub forests: usize,
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(v))
}

fn full_product(g: &RootedGraph, f: &Config) -> Rational {
    g.product(&f.edges())
}

/// Computes the determinant as a sum over forests in two ways and checks
/// that the per-matching families are disjoint, that their union is the
/// intrinsic family, and that each even forest's own reconstructed matching
/// claims it.
pub fn determinant_via_forests(g: &RootedGraph) -> Result<DeterminantExpansion> {
    if g.r() == 0 {
        return Err(Error::InvalidParameters("forest expansion needs at least one root".into()));
    }
    let mut owner: BTreeMap<Config, PerfectMatching> = BTreeMap::new();
    let mut by_matchings = Rational::zero();
    for m0 in enumerate_perfect_matchings(g) {
        for (f, _) in half_forests(g, &m0) {
            by_matchings += full_product(g, &f);
            if let Some(other) = owner.insert(f.clone(), m0.clone()) {
                return Err(Error::Invariant(format!(
                    "forest {f} lies in the families of both {other} and {m0}"
                )));
            }
        }
    }

    let mut intrinsic = Rational::zero();
    let mut family = BTreeSet::new();
    for f in enumerate_spanning_forests(g) {
        if !satisfies_condition_c(&f, None) {
            continue;
        }
        let m0 = matching_from_even_paths(&f).ok_or_else(|| {
            Error::Invariant(format!("even forest {f} yields no perfect matching"))
        })?;
        if !is_compatible(&f, &m0) || !satisfies_condition_c(&f, Some(&m0)) {
            return Err(Error::Invariant(format!("forest {f} rejected by its own matching {m0}")));
        }
        intrinsic += full_product(g, &f);
        family.insert(f);
    }
    if owner.len() != family.len() || !owner.keys().all(|f| family.contains(f)) {
        return Err(Error::Invariant(format!(
            "per-matching union has {} forests, intrinsic family has {}",
            owner.len(),
            family.len()
        )));
    }
    if by_matchings != intrinsic {
        return Err(Error::Invariant("the two forest sums differ".into()));
    }
    Ok(DeterminantExpansion { by_matchings, intrinsic, forests: family.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::skewmatrix::{random_instance, SkewMatrix};

    fn running_example(seed: u64) -> RootedGraph {
        let edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)];
        RootedGraph::from_matrix(&random_instance(4, 1, Some(&edges), seed, 9).unwrap())
    }

    fn cfg(n: usize, edges: &[(usize, usize)]) -> Config {
        Config::from_edges(n, edges).unwrap()
    }

    fn m0() -> PerfectMatching {
        PerfectMatching::parse(4, "1-4,2-3").unwrap()
    }

    #[test]
    fn triangle_with_one_root_has_three_forests() {
        let m = SkewMatrix::from_i64(2, 1, &[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap();
        let g = RootedGraph::from_matrix(&m);
        let listed: Vec<String> = enumerate_spanning_forests(&g).iter().map(ToString::to_string).collect();
        assert_eq!(listed, vec!["1->2 2->3", "1->3 2->1", "1->3 2->3"]);
    }

    #[test]
    fn edgeless_graph_has_no_forest() {
        let g = RootedGraph::from_matrix(&SkewMatrix::zeros(2, 1));
        assert!(enumerate_spanning_forests(&g).is_empty());
    }

    #[test]
    fn running_example_forests() {
        let g = running_example(1);
        let all = enumerate_spanning_forests(&g);
        let f1 = cfg(4, &[(2, 3), (3, 1), (1, 4), (4, 5)]);
        let f2 = cfg(4, &[(2, 3), (3, 5), (1, 4), (4, 5)]);
        let f3 = cfg(4, &[(4, 1), (1, 2), (2, 3), (3, 5)]);
        for f in [&f1, &f2, &f3] {
            assert!(all.contains(f));
            assert!(is_compatible(f, &m0()));
        }
        assert_eq!(trim(&f1, Some(&m0())).paths, vec![vec![2, 3, 1], vec![1, 4, 5]]);
        assert_eq!(trim(&f3, Some(&m0())).paths, vec![vec![4, 1], vec![1, 2, 3, 5]]);
        assert!(satisfies_condition_c(&f1, Some(&m0())));
        assert!(satisfies_condition_c(&f2, Some(&m0())));
        assert!(!satisfies_condition_c(&f3, Some(&m0())));
        assert!(!is_compatible(&cfg(4, &[(1, 2), (2, 3), (3, 4), (4, 5)]), &m0()));
    }

    #[test]
    fn running_example_has_four_half_trees() {
        let g = running_example(3);
        let survivors = half_forests(&g, &m0());
        assert_eq!(survivors.len(), 4);
        let pf = SkewMatrix::from_rows(
            (1..=4).map(|i| (1..=4).map(|j| g.weight(i, j).clone()).collect()).collect(),
        )
        .unwrap()
        .pfaffian_by_pairings();
        assert_eq!(pfaffian_via_half_forests(&g, &m0()), pf);
    }

    #[test]
    fn forest_sign_follows_orientation() {
        let m0 = PerfectMatching::parse(2, "1-2").unwrap();
        assert_eq!(forest_sign(&cfg(2, &[(1, 2), (2, 3)]), &m0), 1);
        assert_eq!(forest_sign(&cfg(2, &[(2, 1), (1, 3)]), &m0), -1);
    }

    #[test]
    fn even_forest_reconstructs_its_matching() {
        let f1 = cfg(4, &[(2, 3), (3, 1), (1, 4), (4, 5)]);
        assert_eq!(matching_from_even_paths(&f1), Some(m0()));
        let f3 = cfg(4, &[(4, 1), (1, 2), (2, 3), (3, 5)]);
        assert_eq!(matching_from_even_paths(&f3), None);
    }

    #[test]
    fn two_vertex_determinant_has_a_single_even_forest() {
        // Rows sum to zero, so a13 = -a12 and a23 = a12.
        let m = SkewMatrix::from_i64(2, 1, &[vec![0, 3, -3], vec![-3, 0, 3], vec![3, -3, 0]]).unwrap();
        let g = RootedGraph::from_matrix(&m);
        let even: Vec<String> = enumerate_spanning_forests(&g)
            .iter()
            .filter(|f| satisfies_condition_c(f, None))
            .map(ToString::to_string)
            .collect();
        assert_eq!(even, vec!["1->2 2->3"]);
        let d = determinant_via_forests(&g).unwrap();
        assert_eq!(d.intrinsic, int(9));
        assert_eq!(d.by_matchings, int(9));
    }

    #[test]
    fn running_example_determinant() {
        let g = running_example(5);
        let m = random_instance(4, 1, Some(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)]), 5, 9)
            .unwrap();
        let a = m.core_block();
        let d = determinant_via_forests(&g).unwrap();
        assert_eq!(d.intrinsic, a.determinant());
        assert_eq!(d.intrinsic, a.pfaffian_by_pairings() * a.pfaffian_by_pairings());
    }
}
