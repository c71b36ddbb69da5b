//! Spanning trees of the complete 3-uniform hypergraph on `1..=v`, the
//! symbolic Pfaffian of the matrix built from antisymmetric hyperedge
//! weights, and the half-trees obtained from hypertrees compatible with a
//! perfect matching of `K_{v-1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::forests::satisfies_condition_c;
use crate::graphmodel::PerfectMatching;
use crate::perm;
use crate::poly::{Monomial, Poly};
use crate::rational::{self, Rational};
use crate::skewmatrix::SkewMatrix;

pub type Triple = [usize; 3];

/// Sorts `(i, j, k)` and returns the sign of the sorting permutation, or
/// `None` when an index repeats.
pub fn normalize(i: usize, j: usize, k: usize) -> Option<(Triple, i8)> {
    if i == j || j == k || i == k {
        return None;
    }
    let mut t = [i, j, k];
    t.sort_unstable();
    Some((t, perm::sign_of(&[i, j, k])))
}

/// Sorted triples of `1..=v` in lexicographic order; a triple's position is
/// its variable index in symbolic mode.
pub fn triples(v: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 1..=v {
        for j in i + 1..=v {
            for k in j + 1..=v {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn check_v(v_count: usize) -> Result<()> {
    if v_count < 3 || v_count % 2 == 0 {
        return Err(Error::InvalidParameters(format!("vertex count must be odd and >= 3, got {v_count}")));
    }
    Ok(())
}

/// Antisymmetric weights `y_{ijk}` stored on sorted triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperWeights {
    v_count: usize,
    values: BTreeMap<Triple, Rational>,
}

impl HyperWeights {
    pub fn new(v_count: usize) -> Self {
        HyperWeights { v_count, values: BTreeMap::new() }
    }

    /// Nonzero integer weights in `[-value_range, value_range]` on every triple.
    pub fn random(v_count: usize, seed: u64, value_range: i64) -> Self {
        let bound = value_range.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut y = Self::new(v_count);
        for t in triples(v_count) {
            let mut x = 0;
            while x == 0 {
                x = rng.gen_range(-bound..=bound);
            }
            y.values.insert(t, rational::int(x));
        }
        y
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    /// `y_{ijk}` in any index order; zero on repeated indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        match normalize(i, j, k) {
            None => Rational::zero(),
            Some((t, s)) => rational::signed(s, self.values.get(&t).cloned().unwrap_or_else(Rational::zero)),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) -> Result<()> {
        let (t, s) = normalize(i, j, k)
            .ok_or_else(|| Error::InvalidParameters(format!("repeated index in ({i}, {j}, {k})")))?;
        self.values.insert(t, rational::signed(s, value));
        Ok(())
    }
}

/// `a_{ij} = Σ_k y_{ijk}` on `1..=v`, with `v` as the single root.
pub fn matrix_from_hyperweights(y: &HyperWeights) -> SkewMatrix {
    let v = y.v_count();
    let mut rows = vec![vec![Rational::zero(); v]; v];
    for i in 1..=v {
        for j in 1..=v {
            if i != j {
                rows[i - 1][j - 1] = (1..=v).map(|k| y.get(i, j, k)).sum();
            }
        }
    }
    SkewMatrix::with_roots(v - 1, 1, rows).expect("square by construction")
}

/// A spanning tree of `K^{(3)}_v`, hyperedges sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThreeGraphTree {
    v_count: usize,
    hyperedges: Vec<Triple>,
}

impl ThreeGraphTree {
    /// Checks that the bipartite picture (one node per vertex and per
    /// hyperedge) is a spanning tree.
    pub fn new(v_count: usize, hyperedges: &[Triple]) -> Result<Self> {
        check_v(v_count)?;
        let mut edges = Vec::new();
        for &[i, j, k] in hyperedges {
            let (t, _) = normalize(i, j, k)
                .ok_or_else(|| Error::InvalidParameters(format!("repeated index in {i}{j}{k}")))?;
            if t[2] > v_count {
                return Err(Error::InvalidParameters(format!("vertex {} out of range", t[2])));
            }
            edges.push(t);
        }
        edges.sort_unstable();
        if edges.len() != (v_count - 1) / 2 {
            return Err(Error::InvalidParameters(format!("a spanning tree needs {} hyperedges", (v_count - 1) / 2)));
        }
        let mut dsu = Dsu::new(v_count);
        for t in &edges {
            if !dsu.join_triple(t) {
                return Err(Error::InvalidParameters("hyperedges contain a cycle".into()));
            }
        }
        Ok(ThreeGraphTree { v_count, hyperedges: edges })
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn hyperedges(&self) -> &[Triple] {
        &self.hyperedges
    }

    /// The monomial `Π y_T` over sorted-triple variable indices.
    pub fn monomial(&self) -> Monomial {
        let index = triple_index(self.v_count);
        let mut m: Monomial = self.hyperedges.iter().map(|t| index[t]).collect();
        m.sort_unstable();
        m
    }

    /// `Π y_{ijk}` over the (sorted) hyperedges.
    pub fn weight(&self, y: &HyperWeights) -> Rational {
        self.hyperedges.iter().map(|&[i, j, k]| y.get(i, j, k)).product()
    }
}

impl fmt::Display for ThreeGraphTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.v_count < 10 { "" } else { "." };
        let parts: Vec<String> = self
            .hyperedges
            .iter()
            .map(|t| t.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn triple_index(v: usize) -> BTreeMap<Triple, usize> {
    triples(v).into_iter().enumerate().map(|(i, t)| (t, i)).collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(v: usize) -> Self {
        Dsu((0..=v).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    /// Merges the three vertices; `false` if two were already connected.
    fn join_triple(&mut self, t: &Triple) -> bool {
        let roots = [self.find(t[0]), self.find(t[1]), self.find(t[2])];
        if roots[0] == roots[1] || roots[1] == roots[2] || roots[0] == roots[2] {
            return false;
        }
        self.0[roots[1]] = roots[0];
        self.0[roots[2]] = roots[0];
        true
    }

    fn join(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[rb] = ra;
        true
    }
}

/// Every spanning tree of `K^{(3)}_v`.
pub fn enumerate_3graph_trees(v_count: usize) -> Result<Vec<ThreeGraphTree>> {
    check_v(v_count)?;
    let all = triples(v_count);
    let mut found = Vec::new();
    let mut chosen = Vec::new();
    grow(&all, 0, (v_count - 1) / 2, &mut chosen, &Dsu::new(v_count), v_count, &mut found);
    Ok(found)
}

fn grow(
    all: &[Triple],
    from: usize,
    needed: usize,
    chosen: &mut Vec<Triple>,
    dsu: &Dsu,
    v_count: usize,
    found: &mut Vec<ThreeGraphTree>,
) {
    if chosen.len() == needed {
        found.push(ThreeGraphTree { v_count, hyperedges: chosen.clone() });
        return;
    }
    for idx in from..all.len() {
        let mut next = Dsu(dsu.0.clone());
        if !next.join_triple(&all[idx]) {
            continue;
        }
        chosen.push(all[idx]);
        grow(all, idx + 1, needed, chosen, &next, v_count, found);
        chosen.pop();
    }
}

/// `v^{(v-3)/2} · (v-2)!!`, the number of spanning trees of `K^{(3)}_v`.
pub fn tree_count_formula(v_count: usize) -> u64 {
    let n = (v_count - 1) as u64;
    let half = n / 2;
    let double_factorial: u64 = (1..n).step_by(2).product();
    (v_count as u64).pow(half as u32 - 1) * double_factorial
}

/// `Pf` of the matrix `a_{ij} = Σ_k y_{ijk}` restricted to `1..=v-1`, as a
/// polynomial in one variable per sorted triple.
pub fn symbolic_pfaffian(v_count: usize) -> Result<Poly> {
    check_v(v_count)?;
    let n = v_count - 1;
    let index = triple_index(v_count);
    let entry = |i: usize, j: usize| {
        let mut p = Poly::zero();
        for k in 1..=v_count {
            if let Some((t, s)) = normalize(i, j, k) {
                p.add_term(vec![index[&t]], s as i64);
            }
        }
        p
    };
    let mut total = Poly::zero();
    for pairing in perm::pairings(n) {
        let described: Vec<(usize, usize)> = pairing.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        let mut term = Poly::constant(perm::pairs_sign(&described) as i64);
        for &(a, b) in &described {
            term = &term * &entry(a, b);
        }
        total += &term;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSign {
    pub tree: String,
    pub sign: i8,
}

/// Comparison of the symbolic Pfaffian with the spanning-tree sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MvReport {
    pub v_count: usize,
    pub trees: usize,
    pub monomials: usize,
    /// Trees whose monomial does not appear.
    pub missing: Vec<String>,
    /// Monomials that are not trees, as lists of triples.
    pub extra: Vec<String>,
    /// Coefficients other than `±1`.
    pub non_unit: Vec<String>,
    /// The coefficient of each tree's monomial, which is its sign.
    pub signs: Vec<TreeSign>,
}

impl MvReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.non_unit.is_empty()
    }

    pub fn sign_of(&self, tree: &ThreeGraphTree) -> Option<i8> {
        let key = tree.to_string();
        self.signs.iter().find(|s| s.tree == key).map(|s| s.sign)
    }
}

/// Expands the Pfaffian symbolically and checks that its monomials are
/// exactly the spanning trees, each with coefficient `±1`.
pub fn verify_mv_identity(v_count: usize) -> Result<MvReport> {
    let pf = symbolic_pfaffian(v_count)?;
    let trees = enumerate_3graph_trees(v_count)?;
    let all = triples(v_count);
    let describe = |m: &Monomial| {
        m.iter()
            .map(|&i| all[i].iter().map(ToString::to_string).collect::<String>())
            .collect::<Vec<_>>()
            .join("·")
    };
    let by_monomial: BTreeMap<Monomial, &ThreeGraphTree> = trees.iter().map(|t| (t.monomial(), t)).collect();
    let mut report = MvReport {
        v_count,
        trees: trees.len(),
        monomials: pf.terms().len(),
        missing: Vec::new(),
        extra: Vec::new(),
        non_unit: Vec::new(),
        signs: Vec::new(),
    };
    for t in &trees {
        let c = pf.coefficient(&t.monomial());
        if c == 0 {
            report.missing.push(t.to_string());
        } else {
            report.signs.push(TreeSign { tree: t.to_string(), sign: c.signum() as i8 });
        }
    }
    for (m, &c) in pf.terms() {
        if !by_monomial.contains_key(m) {
            report.extra.push(describe(m));
        }
        if c.abs() != 1 {
            report.non_unit.push(format!("{} has coefficient {c}", describe(m)));
        }
    }
    Ok(report)
}

/// Perfect matchings of `K_n`, in canonical pairing order.
pub fn complete_graph_matchings(n: usize) -> Vec<PerfectMatching> {
    perm::pairings(n)
        .into_iter()
        .map(|p| {
            let pairs: Vec<(usize, usize)> = p.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
            PerfectMatching::new(n, &pairs).expect("pairing is a perfect matching")
        })
        .collect()
}

/// Every hyperedge of `t` contains exactly one pair of `m`.
pub fn is_compatible(t: &ThreeGraphTree, m: &PerfectMatching) -> bool {
    t.hyperedges().iter().all(|&[i, j, k]| matched_pair(m, i, j, k).is_some())
}

fn matched_pair(m: &PerfectMatching, i: usize, j: usize, k: usize) -> Option<(usize, usize, usize)> {
    let n = m.n();
    let has = |a: usize, b: usize| a <= n && b <= n && m.contains(a, b);
    let found: Vec<(usize, usize, usize)> = [(i, j, k), (i, k, j), (j, k, i)]
        .into_iter()
        .filter(|&(a, b, _)| has(a, b))
        .collect();
    match found.as_slice() {
        [one] => Some(*one),
        _ => None,
    }
}

/// Hypertrees grouped by the matching they are compatible with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub v_count: usize,
    pub classes: Vec<(PerfectMatching, Vec<ThreeGraphTree>)>,
    pub expected_class_size: usize,
    pub problems: Vec<String>,
}

impl Partition {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn class_of(&self, m: &PerfectMatching) -> Option<&[ThreeGraphTree]> {
        self.classes.iter().find(|(k, _)| k == m).map(|(_, t)| t.as_slice())
    }
}

/// Assigns each spanning tree of `K^{(3)}_v` to the matchings of `K_{v-1}`
/// it is compatible with. Every tree should land in exactly one class and
/// every class should hold `v^{(v-3)/2}` trees.
pub fn compatible_matching_partition(v_count: usize) -> Result<Partition> {
    let trees = enumerate_3graph_trees(v_count)?;
    let matchings = complete_graph_matchings(v_count - 1);
    let expected = (v_count as u64).pow(((v_count - 1) / 2 - 1) as u32) as usize;
    let mut classes: Vec<(PerfectMatching, Vec<ThreeGraphTree>)> =
        matchings.iter().map(|m| (m.clone(), Vec::new())).collect();
    let mut problems = Vec::new();
    for t in trees {
        let hits: Vec<usize> = (0..matchings.len()).filter(|&i| is_compatible(&t, &matchings[i])).collect();
        if hits.len() != 1 {
            problems.push(format!("tree {t} is compatible with {} matchings", hits.len()));
        }
        for i in hits {
            classes[i].1.push(t.clone());
        }
    }
    for (m, ts) in &classes {
        if ts.len() != expected {
            problems.push(format!("class of {m} has {} trees, expected {expected}", ts.len()));
        }
    }
    Ok(Partition { v_count, classes, expected_class_size: expected, problems })
}

/// For each hyperedge `ijk` whose `m`-pair is `ij` with `i < j`, the edges
/// `ij` and `jk`; the result, oriented toward the root `v`, is a half-tree
/// of `K_v` compatible with `m`.
pub fn halftree_from_3tree(t: &ThreeGraphTree, m: &PerfectMatching) -> Result<Config> {
    let v = t.v_count();
    let n = v - 1;
    if m.n() != n {
        return Err(Error::InvalidMatching(format!("matching is on {} vertices, tree needs {n}", m.n())));
    }
    let mut edges = Vec::new();
    for &[a, b, c] in t.hyperedges() {
        let (i, j, k) = matched_pair(m, a, b, c)
            .ok_or_else(|| Error::InvalidMatching(format!("hyperedge {a}{b}{c} does not hold exactly one pair of {m}")))?;
        let (i, j) = (i.min(j), i.max(j));
        edges.push((i, j));
        edges.push((j, k));
    }
    let mut dsu = Dsu::new(v);
    let mut adj = vec![Vec::new(); v + 1];
    for &(a, b) in &edges {
        if !dsu.join(a, b) {
            return Err(Error::Invariant(format!("edges built from {t} contain a cycle")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut out = vec![0; n];
    let mut seen = vec![false; v + 1];
    let mut queue = std::collections::VecDeque::from([v]);
    seen[v] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                out[w - 1] = u;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().skip(1).any(|&s| !s) {
        return Err(Error::Invariant(format!("edges built from {t} do not span")));
    }
    Ok(Config::new(n, out))
}

/// Half-trees of one compatibility class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalftreeClass {
    pub matching: String,
    pub trees: Vec<String>,
    pub halftrees: Vec<String>,
    pub condition_c: Vec<bool>,
    /// Whether distinct trees gave distinct half-trees. Observed, not assumed.
    pub injective: bool,
}

pub fn appendix_halftrees(v_count: usize) -> Result<Vec<HalftreeClass>> {
    let partition = compatible_matching_partition(v_count)?;
    let mut out = Vec::new();
    for (m, trees) in &partition.classes {
        let mut halftrees = Vec::new();
        for t in trees {
            halftrees.push(halftree_from_3tree(t, m)?);
        }
        let mut distinct = halftrees.clone();
        distinct.sort();
        distinct.dedup();
        out.push(HalftreeClass {
            matching: m.to_string(),
            trees: trees.iter().map(ToString::to_string).collect(),
            condition_c: halftrees.iter().map(|h| satisfies_condition_c(h, Some(m))).collect(),
            injective: distinct.len() == halftrees.len(),
            halftrees: halftrees.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(v: usize, edges: &[Triple]) -> ThreeGraphTree {
        ThreeGraphTree::new(v, edges).unwrap()
    }

    #[test]
    fn antisymmetric_access() {
        let mut y = HyperWeights::new(3);
        y.set(1, 2, 3, rational::int(5)).unwrap();
        assert_eq!(y.get(2, 1, 3), rational::int(-5));
        assert_eq!(y.get(2, 3, 1), rational::int(5));
        assert_eq!(y.get(1, 1, 3), rational::int(0));
    }

    #[test]
    fn single_weight_matrix() {
        let mut y = HyperWeights::new(3);
        y.set(1, 2, 3, rational::int(7)).unwrap();
        let a = matrix_from_hyperweights(&y);
        assert_eq!(a.get(1, 2), &rational::int(7));
        assert_eq!(a.get(1, 3), &rational::int(-7));
        assert_eq!(a.get(2, 3), &rational::int(7));
        assert!(a.validate(true).passed());
        assert!(matrix_from_hyperweights(&HyperWeights::new(5)).rows().iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_3graph_trees(3).unwrap(), vec![tree(3, &[[1, 2, 3]])]);
        assert_eq!(enumerate_3graph_trees(5).unwrap().len(), 15);
        for v in [3, 5, 7] {
            assert_eq!(enumerate_3graph_trees(v).unwrap().len() as u64, tree_count_formula(v));
        }
        assert!(enumerate_3graph_trees(4).is_err());
    }

    #[test]
    fn rejects_cycles() {
        assert!(ThreeGraphTree::new(5, &[[1, 2, 3], [1, 2, 4]]).is_err());
    }

    #[test]
    fn symbolic_identity_small() {
        let r3 = verify_mv_identity(3).unwrap();
        assert!(r3.passed());
        assert_eq!(r3.monomials, 1);
        let r5 = verify_mv_identity(5).unwrap();
        assert!(r5.passed(), "{r5:?}");
        assert_eq!(r5.monomials, 15);
    }

    #[test]
    fn signs_respecialize() {
        let report = verify_mv_identity(5).unwrap();
        let trees = enumerate_3graph_trees(5).unwrap();
        for seed in 0..5 {
            let y = HyperWeights::random(5, seed, 6);
            let minor = matrix_from_hyperweights(&y).core_block();
            let expected: Rational = trees
                .iter()
                .map(|t| rational::signed(report.sign_of(t).unwrap(), t.weight(&y)))
                .sum();
            assert_eq!(minor.pfaffian_by_elimination(), expected);
        }
    }

    #[test]
    fn partition_at_five() {
        let p = compatible_matching_partition(5).unwrap();
        assert!(p.passed(), "{:?}", p.problems);
        assert_eq!(p.classes.len(), 3);
        assert!(p.classes.iter().all(|(_, t)| t.len() == 5));
        let m = PerfectMatching::parse(4, "1-4,2-3").unwrap();
        let class: Vec<String> = p.class_of(&m).unwrap().iter().map(ToString::to_string).collect();
        let mut listed: Vec<String> = [
            tree(5, &[[1, 2, 3], [1, 4, 5]]),
            tree(5, &[[1, 2, 4], [2, 3, 5]]),
            tree(5, &[[1, 3, 4], [2, 3, 5]]),
            tree(5, &[[2, 3, 4], [1, 4, 5]]),
            tree(5, &[[1, 4, 5], [2, 3, 5]]),
        ]
        .iter()
        .map(ToString::to_string)
        .collect();
        listed.sort();
        let mut class_sorted = class.clone();
        class_sorted.sort();
        assert_eq!(class_sorted, listed);
    }

    #[test]
    fn seven_vertices() {
        let r7 = verify_mv_identity(7).unwrap();
        assert!(r7.passed());
        assert_eq!(r7.monomials, 735);
        let p = compatible_matching_partition(7).unwrap();
        assert!(p.passed(), "{:?}", p.problems);
        assert_eq!(p.classes.len(), 15);
        assert_eq!(p.expected_class_size, 49);
    }

    #[test]
    fn halftree_of_the_first_listed_tree() {
        let m = PerfectMatching::parse(4, "1-4,2-3").unwrap();
        let h = halftree_from_3tree(&tree(5, &[[1, 2, 3], [1, 4, 5]]), &m).unwrap();
        assert_eq!(h, Config::from_edges(4, &[(2, 3), (3, 1), (1, 4), (4, 5)]).unwrap());
        let m2 = PerfectMatching::parse(2, "1-2").unwrap();
        let h2 = halftree_from_3tree(&tree(3, &[[1, 2, 3]]), &m2).unwrap();
        assert_eq!(h2, Config::from_edges(2, &[(1, 2), (2, 3)]).unwrap());
    }

    #[test]
    fn incompatible_pair_is_rejected() {
        let m = PerfectMatching::parse(4, "1-2,3-4").unwrap();
        assert!(halftree_from_3tree(&tree(5, &[[1, 2, 3], [1, 4, 5]]), &m).is_err());
    }

    #[test]
    fn some_appendix_halftree_fails_condition_c() {
        let classes = appendix_halftrees(5).unwrap();
        let class = classes.iter().find(|c| c.matching == "1-4,2-3").unwrap();
        assert!(class.condition_c.iter().any(|&c| !c));
        let third = class.trees.iter().position(|t| t == "{134,235}").unwrap();
        assert!(!class.condition_c[third]);
    }
}
