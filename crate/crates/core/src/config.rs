//! Oriented edge configurations where every non-root vertex has exactly one
//! outgoing edge (spanning forests, RC-rooted forests, cycle-rooted forests).
//!
//! Such a configuration is a functional graph on `1..=n` whose values may
//! leave `V` (a target above `n` is a root). Components are trees hanging off
//! a root or off a single directed cycle.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    n: usize,
    out: Vec<usize>,
}

impl Config {
    /// `out[v - 1]` is the head of the edge leaving `v`.
    pub fn new(n: usize, out: Vec<usize>) -> Self {
        assert_eq!(out.len(), n, "one outgoing edge per vertex");
        assert!(
            out.iter().enumerate().all(|(i, &w)| w != 0 && w != i + 1),
            "targets are 1-based and never the vertex itself"
        );
        Config { n, out }
    }

    /// Builds a configuration from oriented edges `(v, w)`, one per `v` in `1..=n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![0; n];
        for &(v, w) in edges {
            if v == 0 || v > n || w == 0 || w == v {
                return Err(Error::InvalidParameters(format!("bad oriented edge {v}->{w}")));
            }
            if out[v - 1] != 0 {
                return Err(Error::InvalidParameters(format!("vertex {v} has two outgoing edges")));
            }
            out[v - 1] = w;
        }
        if let Some(v) = out.iter().position(|&w| w == 0) {
            return Err(Error::InvalidParameters(format!("vertex {} has no outgoing edge", v + 1)));
        }
        Ok(Config { n, out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self, v: usize) -> usize {
        self.out[v - 1]
    }

    pub fn targets(&self) -> &[usize] {
        &self.out
    }

    pub fn set_target(&mut self, v: usize, w: usize) {
        assert!(w != 0 && w != v);
        self.out[v - 1] = w;
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.out.iter().enumerate().map(|(i, &w)| (i + 1, w)).collect()
    }

    /// In-degree of each vertex of `V`, indexed by label (entry 0 unused).
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n + 1];
        for &w in &self.out {
            if w <= self.n {
                deg[w] += 1;
            }
        }
        deg
    }

    /// Vertices of `V` nobody points to.
    pub fn leaves(&self) -> Vec<usize> {
        let deg = self.in_degrees();
        (1..=self.n).filter(|&v| deg[v] == 0).collect()
    }

    /// Directed cycles, each listed from its smallest vertex along the
    /// edge direction, ordered by smallest vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        // 0 = unseen, 1 = on the current walk, 2 = done
        let mut state = vec![0u8; self.n + 1];
        let mut cycles = Vec::new();
        for start in 1..=self.n {
            if state[start] != 0 {
                continue;
            }
            let mut walk = Vec::new();
            let mut v = start;
            while v <= self.n && state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = self.out[v - 1];
            }
            if v <= self.n && state[v] == 1 {
                let pos = walk.iter().position(|&u| u == v).unwrap();
                let mut cycle = walk[pos..].to_vec();
                let min_pos = cycle.iter().enumerate().min_by_key(|&(_, &u)| u).unwrap().0;
                cycle.rotate_left(min_pos);
                cycles.push(cycle);
            }
            for u in walk {
                state[u] = 2;
            }
        }
        cycles.sort();
        cycles
    }

    pub fn is_forest(&self) -> bool {
        self.cycles().is_empty()
    }

    /// `true` when every vertex lies on a cycle.
    pub fn is_cycles_only(&self) -> bool {
        self.cycles().iter().map(Vec::len).sum::<usize>() == self.n
    }

    /// Flags (indexed by label) for vertices lying on a cycle.
    pub fn cycle_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.n + 1];
        for c in self.cycles() {
            for v in c {
                flags[v] = true;
            }
        }
        flags
    }

    /// Reverses the direction of the cycle through `cycle[0]`.
    pub fn reverse_cycle(&mut self, cycle: &[usize]) {
        let len = cycle.len();
        for i in 0..len {
            self.out[cycle[(i + 1) % len] - 1] = cycle[i];
        }
    }

    /// The vertex each walk from `v` ends in: a root label, or the first
    /// cycle vertex reached.
    pub fn anchor(&self, v: usize, on_cycle: &[bool]) -> usize {
        let mut u = v;
        while u <= self.n && !on_cycle[u] {
            u = self.out[u - 1];
        }
        u
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges().iter().map(|(v, w)| format!("{v}->{w}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Strips paths off a configuration, largest leaf first.
///
/// Each path starts at the largest current leaf, walks at least one edge,
/// and stops at the first vertex that is a root, lies on a cycle, has
/// in-degree at least two in what is left, or is smaller than the leaf.
/// Its edges are then removed. Stops when no leaf remains, leaving only
/// cycles behind. On a spanning forest this is the trimming decomposition.
pub fn peel(cfg: &Config) -> Vec<Vec<usize>> {
    let n = cfg.n();
    let on_cycle = cfg.cycle_flags();
    let mut active = vec![true; n + 1];
    let mut indeg = cfg.in_degrees();
    let mut paths = Vec::new();
    loop {
        let Some(leaf) = (1..=n).rev().find(|&v| active[v] && indeg[v] == 0 && !on_cycle[v]) else {
            break;
        };
        let mut path = vec![leaf];
        let mut v = leaf;
        loop {
            let w = cfg.target(v);
            path.push(w);
            if w > n || on_cycle[w] || indeg[w] >= 2 || w < leaf {
                break;
            }
            v = w;
        }
        for pair in path.windows(2) {
            let (v, w) = (pair[0], pair[1]);
            active[v] = false;
            if w <= n {
                indeg[w] -= 1;
            }
        }
        paths.push(path);
    }
    paths
}
