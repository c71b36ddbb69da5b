//! Weighted graphs read off a skew matrix, perfect matchings, and the signed
//! weight of an oriented superimposition of two matchings.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm;
use crate::rational::{parity_sign, signed, Rational};
use crate::skewmatrix::SkewMatrix;

/// The support graph of a skew matrix on `V ∪ R`, with the oriented edge
/// weights `weight(i, j) = a_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    n: usize,
    r: usize,
    weights: Vec<Vec<Rational>>,
    adjacency: Vec<Vec<usize>>,
}

impl RootedGraph {
    pub fn from_matrix(m: &SkewMatrix) -> Self {
        let size = m.size();
        let mut adjacency = vec![Vec::new(); size + 1];
        for i in 1..=size {
            for j in 1..=size {
                if i != j && !m.get(i, j).is_zero() {
                    adjacency[i].push(j);
                }
            }
        }
        RootedGraph { n: m.n(), r: m.r(), weights: m.rows().to_vec(), adjacency }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.n + self.r
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[i - 1][j - 1]
    }

    /// Sorted neighbours of `v` in the full graph, roots included.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && !self.weight(i, j).is_zero()
    }

    /// Unordered edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for i in 1..=self.size() {
            edges.extend(self.adjacency[i].iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        edges
    }

    /// Product of the weights of the given oriented edges.
    pub fn product<'a>(&self, edges: impl IntoIterator<Item = &'a (usize, usize)>) -> Rational {
        let mut p = Rational::one();
        for &(i, j) in edges {
            p *= self.weight(i, j);
        }
        p
    }
}

/// A perfect matching of the non-root vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
    partner: Vec<usize>,
}

impl PerfectMatching {
    /// Pairs may be given in any order and orientation.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![0; n];
        let mut normalized = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == b || a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidMatching(format!("{a}-{b} is not a pair of 1..={n}")));
            }
            if partner[a - 1] != 0 || partner[b - 1] != 0 {
                return Err(Error::InvalidMatching(format!("pair {a}-{b} overlaps another pair")));
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
            normalized.push((a.min(b), a.max(b)));
        }
        if let Some(v) = partner.iter().position(|&p| p == 0) {
            return Err(Error::InvalidMatching(format!("vertex {} is unmatched", v + 1)));
        }
        normalized.sort_unstable();
        Ok(PerfectMatching { pairs: normalized, partner })
    }

    /// Parses `"1-4,2-3"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| Error::InvalidMatching(format!("expected i-j, got {item:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidMatching(format!("bad vertex {s:?}")))
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        PerfectMatching::new(n, &pairs)
    }

    pub fn n(&self) -> usize {
        self.partner.len()
    }

    /// Pairs `(i, j)` with `i < j`, sorted.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v - 1]
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a != 0 && a <= self.n() && self.partner(a) == b
    }

    /// Every pair is an edge of `g`.
    pub fn is_in(&self, g: &RootedGraph) -> bool {
        self.pairs.iter().all(|&(a, b)| g.has_edge(a, b))
    }
}

impl fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// All perfect matchings of the graph induced on `1..=n`, found by always
/// matching the smallest unmatched vertex first.
pub fn enumerate_perfect_matchings(g: &RootedGraph) -> Vec<PerfectMatching> {
    fn recurse(
        g: &RootedGraph,
        used: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<PerfectMatching>,
    ) {
        let n = g.n();
        let Some(v) = (1..=n).find(|&v| !used[v]) else {
            out.push(PerfectMatching::new(n, pairs).expect("disjoint cover"));
            return;
        };
        used[v] = true;
        for &w in g.neighbors(v) {
            if w <= n && !used[w] {
                used[w] = true;
                pairs.push((v, w));
                recurse(g, used, pairs, out);
                pairs.pop();
                used[w] = false;
            }
        }
        used[v] = false;
    }
    let mut out = Vec::new();
    if g.n() % 2 == 0 {
        recurse(g, &mut vec![false; g.n() + 1], &mut Vec::new(), &mut out);
    }
    out
}

/// The superimposition of two matchings with the orientation used in the
/// graphical Pfaffian expansion.
///
/// A doubled edge `{i, j}` with `i < j` is oriented `(i, j)` in the
/// reference matching and `(j, i)` in the other one. Each alternating cycle
/// is listed from its smallest vertex, followed by that vertex's partner in
/// the reference matching; both matchings follow this direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedSuperimposition {
    pub n: usize,
    pub doubled: Vec<(usize, usize)>,
    pub cycles: Vec<Vec<usize>>,
    pub oriented_m0: Vec<(usize, usize)>,
    pub oriented_m: Vec<(usize, usize)>,
}

impl OrientedSuperimposition {
    /// The permutation sending the tail of each oriented edge to its head,
    /// as a 0-based image list.
    pub fn permutation(&self) -> Vec<usize> {
        let mut image = vec![0; self.n];
        for &(a, b) in self.oriented_m0.iter().chain(&self.oriented_m) {
            image[a - 1] = b - 1;
        }
        image
    }
}

pub fn superimpose_and_orient(m0: &PerfectMatching, m: &PerfectMatching) -> OrientedSuperimposition {
    let n = m0.n();
    assert_eq!(n, m.n(), "matchings of the same vertex set");
    let mut doubled = Vec::new();
    let mut oriented_m0 = Vec::new();
    let mut oriented_m = Vec::new();
    let mut seen = vec![false; n + 1];
    for &(i, j) in m0.pairs() {
        if m.contains(i, j) {
            doubled.push((i, j));
            oriented_m0.push((i, j));
            oriented_m.push((j, i));
            seen[i] = true;
            seen[j] = true;
        }
    }
    let mut cycles = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            let w = m0.partner(v);
            cycle.push(v);
            cycle.push(w);
            seen[v] = true;
            seen[w] = true;
            oriented_m0.push((v, w));
            let next = m.partner(w);
            oriented_m.push((w, next));
            if next == start {
                break;
            }
            v = next;
        }
        cycles.push(cycle);
    }
    OrientedSuperimposition { n, doubled, cycles, oriented_m0, oriented_m }
}

/// `sgn(σ) · (-1)^{|doubled|} · (-1)^{|cycles|} · Π a_e` over the oriented
/// edges of the second matching, where `σ` flattens the oriented reference
/// matching.
pub fn matching_weight(s: &OrientedSuperimposition, g: &RootedGraph) -> Rational {
    let sign = perm::pairs_sign(&s.oriented_m0) * parity_sign(s.doubled.len() + s.cycles.len());
    signed(sign, g.product(&s.oriented_m))
}

/// Sum of the matching weights over every perfect matching of `G`.
pub fn pfaffian_via_matchings(g: &RootedGraph, m0: &PerfectMatching) -> Rational {
    enumerate_perfect_matchings(g)
        .iter()
        .map(|m| matching_weight(&superimpose_and_orient(m0, m), g))
        .fold(Rational::zero(), |acc, w| acc + w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn k4() -> RootedGraph {
        let rows = vec![
            vec![0, 2, 3, 5],
            vec![-2, 0, 7, 11],
            vec![-3, -7, 0, 13],
            vec![-5, -11, -13, 0],
        ];
        RootedGraph::from_matrix(&SkewMatrix::from_i64(4, 0, &rows).unwrap())
    }

    fn pm(n: usize, text: &str) -> PerfectMatching {
        PerfectMatching::parse(n, text).unwrap()
    }

    #[test]
    fn graph_support_and_weights() {
        let g = RootedGraph::from_matrix(&SkewMatrix::zeros(3, 0));
        assert!(g.edges().is_empty());
        let g = k4();
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.weight(2, 1), &int(-2));
        assert_eq!(g.neighbors(3), &[1, 2, 4]);
    }

    #[test]
    fn k4_has_three_matchings() {
        let all = enumerate_perfect_matchings(&k4());
        let listed: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(listed, vec!["1-2,3-4", "1-3,2-4", "1-4,2-3"]);
    }

    #[test]
    fn path_graph_has_one_matching() {
        let rows = vec![vec![0, 1, 0, 0], vec![-1, 0, 1, 0], vec![0, -1, 0, 1], vec![0, 0, -1, 0]];
        let g = RootedGraph::from_matrix(&SkewMatrix::from_i64(4, 0, &rows).unwrap());
        let all = enumerate_perfect_matchings(&g);
        assert_eq!(all, vec![pm(4, "1-2,3-4")]);
    }

    #[test]
    fn matching_parse_rejects_bad_input() {
        assert!(PerfectMatching::parse(4, "1-2").is_err());
        assert!(PerfectMatching::parse(4, "1-2,2-3").is_err());
        assert!(PerfectMatching::parse(4, "1-2,3").is_err());
        assert_eq!(pm(4, "4-1, 3-2").pairs(), &[(1, 4), (2, 3)]);
    }

    #[test]
    fn self_superimposition_is_all_doubled() {
        let m0 = pm(4, "1-4,2-3");
        let s = superimpose_and_orient(&m0, &m0);
        assert_eq!(s.doubled, vec![(1, 4), (2, 3)]);
        assert!(s.cycles.is_empty());
        assert_eq!(s.oriented_m, vec![(4, 1), (3, 2)]);
    }

    #[test]
    fn four_cycle_follows_the_reference_edge_at_its_minimum() {
        let m0 = pm(4, "1-4,2-3");
        let s = superimpose_and_orient(&m0, &pm(4, "1-2,3-4"));
        assert_eq!(s.cycles, vec![vec![1, 4, 3, 2]]);
        assert_eq!(s.oriented_m0, vec![(1, 4), (3, 2)]);
        assert_eq!(s.oriented_m, vec![(4, 3), (2, 1)]);
        let s = superimpose_and_orient(&m0, &pm(4, "1-3,2-4"));
        assert_eq!((s.doubled.len(), s.cycles.len()), (0, 1));
        assert_eq!(s.cycles, vec![vec![1, 4, 2, 3]]);
    }

    #[test]
    fn weight_of_the_reference_matching() {
        let g = k4();
        let m0 = pm(4, "1-4,2-3");
        let w = matching_weight(&superimpose_and_orient(&m0, &m0), &g);
        // sgn(1,4,2,3) = +1, two doubled edges, product a41 * a32.
        assert_eq!(w, int(-5) * int(-7));
    }

    #[test]
    fn superimposition_permutation_sign() {
        let g = k4();
        for m0 in enumerate_perfect_matchings(&g) {
            for m in enumerate_perfect_matchings(&g) {
                let s = superimpose_and_orient(&m0, &m);
                let expected = parity_sign(s.doubled.len() + s.cycles.len());
                assert_eq!(perm::sign_of(&s.permutation()), expected);
            }
        }
    }

    #[test]
    fn k4_expansion_matches_pairings_for_every_reference() {
        let g = k4();
        let pf = int(2 * 13 - 3 * 11 + 5 * 7);
        for m0 in enumerate_perfect_matchings(&g) {
            assert_eq!(pfaffian_via_matchings(&g, &m0), pf);
        }
    }
}
