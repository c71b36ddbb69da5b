//! Connections on a zero-sum skew-symmetric matrix, the twisted matrix
//! `A^ψ`, cycle-rooted spanning forests (CRSFs) and the expansion of
//! `det(A^ψ)` over CRSFs satisfying Condition (C).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{peel, Config};
use crate::error::{Error, Result};
use crate::graphmodel::RootedGraph;
use crate::rational::{self, Rational};
use crate::skewmatrix::SkewMatrix;

/// Parallel transports `ψ(i, j)` on oriented edges, with
/// `ψ(j, i) = ψ(i, j)^{-1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Connection {
    psi: BTreeMap<(usize, usize), Rational>,
}

impl Connection {
    pub fn new() -> Self {
        Self::default()
    }

    /// `ψ ≡ 1` on every edge of `g`.
    pub fn trivial(g: &RootedGraph) -> Self {
        let mut c = Self::new();
        for (i, j) in g.edges() {
            c.psi.insert((i, j), Rational::one());
            c.psi.insert((j, i), Rational::one());
        }
        c
    }

    /// Random nonzero transports `±p/q` with `1 <= p, q <= value_range` on
    /// every edge of `g`.
    pub fn random(g: &RootedGraph, seed: u64, value_range: i64) -> Self {
        let bound = value_range.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Self::new();
        for (i, j) in g.edges() {
            let p = rng.gen_range(1..=bound);
            let q = rng.gen_range(1..=bound);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            c.set(i, j, rational::rat(sign * p, q)).expect("nonzero transport");
        }
        c
    }

    /// Sets `ψ(i, j)` and its reciprocal on `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) -> Result<()> {
        if value.is_zero() {
            return Err(Error::InvalidParameters(format!("transport on ({i}, {j}) must be nonzero")));
        }
        self.psi.insert((j, i), value.recip());
        self.psi.insert((i, j), value);
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        self.psi.get(&(i, j))
    }

    /// Product of the transports along the oriented cycle.
    pub fn monodromy(&self, cycle: &[usize]) -> Result<Rational> {
        let len = cycle.len();
        let mut w = Rational::one();
        for k in 0..len {
            let (i, j) = (cycle[k], cycle[(k + 1) % len]);
            w *= self.get(i, j).ok_or(Error::MissingTransport(i, j))?;
        }
        Ok(w)
    }

    /// One line `i j p/q` per edge with `i < j`.
    pub fn to_text(&self) -> String {
        self.psi
            .iter()
            .filter(|((i, j), _)| i < j)
            .map(|((i, j), v)| format!("{i} {j} {}\n", rational::format(v)))
            .collect()
    }

    /// Reads lines `i j p/q`. Missing reverse entries are filled in with the
    /// reciprocal; reverse entries that are given must agree with it.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut given: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse { line, message: "expected `i j value`".into() });
            }
            let index = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse { line, message: format!("bad vertex `{s}`") })
            };
            let (i, j) = (index(fields[0])?, index(fields[1])?);
            let value = rational::parse_at(fields[2], line)?;
            if value.is_zero() {
                return Err(Error::Parse { line, message: "transport must be nonzero".into() });
            }
            given.insert((i, j), value);
        }
        let mut c = Self::new();
        for (&(i, j), v) in &given {
            if let Some(back) = given.get(&(j, i)) {
                if (v * back) != Rational::one() {
                    return Err(Error::InconsistentTransport { i, j });
                }
            }
            c.set(i, j, v.clone())?;
        }
        Ok(c)
    }
}

/// `(A^ψ)_{ij} = a_{ij} ψ(i, j)`. Not skew-symmetric in general.
pub fn twist(a: &SkewMatrix, c: &Connection) -> Result<Vec<Vec<Rational>>> {
    let size = a.size();
    let mut rows = vec![vec![Rational::zero(); size]; size];
    for i in 1..=size {
        for j in 1..=size {
            let aij = a.get(i, j);
            if aij.is_zero() {
                continue;
            }
            let psi = c.get(i, j).ok_or(Error::MissingTransport(i, j))?;
            rows[i - 1][j - 1] = aij * psi;
        }
    }
    Ok(rows)
}

/// Every CRSF of the graph restricted to `V`: one outgoing edge per vertex,
/// every component rooted on a cycle of length at least 3, both
/// orientations of each cycle.
pub fn enumerate_crsf(g: &RootedGraph) -> Vec<Config> {
    let n = g.n();
    let choices: Vec<Vec<usize>> = (1..=n)
        .map(|v| g.neighbors(v).iter().copied().filter(|&w| w <= n).collect())
        .collect();
    let mut out = vec![0; n];
    let mut found = Vec::new();
    assign(&choices, 0, &mut out, &mut found);
    found
}

fn assign(choices: &[Vec<usize>], v: usize, out: &mut Vec<usize>, found: &mut Vec<Config>) {
    if v == choices.len() {
        let cfg = Config::new(out.len(), out.clone());
        if cfg.cycles().iter().all(|c| c.len() >= 3) {
            found.push(cfg);
        }
        return;
    }
    for &w in &choices[v] {
        // a 2-cycle closes as soon as both ends are assigned
        if w < v + 1 && out[w - 1] == v + 1 {
            continue;
        }
        out[v] = w;
        assign(choices, v + 1, out, found);
    }
}

/// Every path stripped off the branches has even length. Configurations
/// made of cycles only satisfy it trivially.
pub fn crsf_condition_c(f: &Config) -> bool {
    peel(f).iter().all(|p| (p.len() - 1) % 2 == 0)
}

/// Turns each cycle so that its smallest vertex points to the smaller of
/// its two cycle neighbours.
pub fn canonical_orientation(f: &Config) -> Config {
    let mut g = f.clone();
    for c in f.cycles() {
        let (next, prev) = (c[1], c[c.len() - 1]);
        if next > prev {
            g.reverse_cycle(&c);
        }
    }
    g
}

/// Weight of a CRSF: the branch-edge product times, per cycle, the edge
/// product along its orientation and `ω - ω^{-1}` (odd length) or
/// `2 - ω - ω^{-1}` (even length).
pub fn crsf_weight(a: &SkewMatrix, c: &Connection, f: &Config) -> Result<Rational> {
    let on_cycle = f.cycle_flags();
    let mut w = Rational::one();
    for v in 1..=f.n() {
        if !on_cycle[v] {
            w *= a.get(v, f.target(v));
        }
    }
    for cycle in f.cycles() {
        let len = cycle.len();
        for k in 0..len {
            w *= a.get(cycle[k], cycle[(k + 1) % len]);
        }
        let omega = c.monodromy(&cycle)?;
        let inv = omega.recip();
        w *= if len % 2 == 1 { omega - inv } else { rational::int(2) - omega - inv };
    }
    Ok(w)
}

/// `Σ` over Condition-(C) CRSFs, one orientation per cycle, of
/// [`crsf_weight`]. Equals `det(A^ψ)` for a zero-sum `A`.
pub fn det_via_crsf(a: &SkewMatrix, c: &Connection) -> Result<Rational> {
    if a.r() != 0 {
        return Err(Error::InvalidParameters("line-bundle expansion needs a matrix without roots".into()));
    }
    let g = RootedGraph::from_matrix(a);
    let mut total = Rational::zero();
    for f in enumerate_crsf(&g) {
        if canonical_orientation(&f) != f || !crsf_condition_c(&f) {
            continue;
        }
        let odd = f.cycles().iter().filter(|c| c.len() % 2 == 1).count();
        if odd % 2 == 1 && a.size() % 2 == 0 {
            return Err(Error::Invariant(format!("Condition-(C) CRSF {f} has an odd number of odd cycles")));
        }
        total += crsf_weight(a, c, &f)?;
    }
    Ok(total)
}

/// `det(A)` for a skew-symmetric `A` as a sum over coverings by even
/// cycles: `a_e^2` per 2-cycle, `-2 Π a_e` (one orientation) per longer
/// cycle.
pub fn cycle_cover_expansion(a: &SkewMatrix) -> Rational {
    let size = a.size();
    if size % 2 == 1 {
        return Rational::zero();
    }
    let mut covered = vec![false; size + 1];
    covers(a, &mut covered)
}

fn covers(a: &SkewMatrix, covered: &mut Vec<bool>) -> Rational {
    let size = a.size();
    let Some(v) = (1..=size).find(|&v| !covered[v]) else {
        return Rational::one();
    };
    covered[v] = true;
    let mut total = Rational::zero();
    for u in v + 1..=size {
        if covered[u] || a.get(v, u).is_zero() {
            continue;
        }
        covered[u] = true;
        let sq = a.get(v, u) * a.get(v, u);
        let rest = covers(a, covered);
        total += sq * rest;
        let mut path = vec![v, u];
        total += long_cycles(a, covered, &mut path);
        covered[u] = false;
    }
    covered[v] = false;
    total
}

/// Extends `path` (from its smallest vertex `path[0]`) into cycles of even
/// length at least 4, counting each cycle once by requiring the second
/// vertex to be smaller than the last.
fn long_cycles(a: &SkewMatrix, covered: &mut Vec<bool>, path: &mut Vec<usize>) -> Rational {
    let size = a.size();
    let (first, last) = (path[0], *path.last().unwrap());
    let mut total = Rational::zero();
    for w in first + 1..=size {
        if covered[w] || a.get(last, w).is_zero() {
            continue;
        }
        covered[w] = true;
        path.push(w);
        if path.len() % 2 == 0 && path.len() >= 4 && w > path[1] && !a.get(w, first).is_zero() {
            let len = path.len();
            let mut prod = rational::int(-2);
            for k in 0..len {
                prod *= a.get(path[k], path[(k + 1) % len]);
            }
            total += prod * covers(a, covered);
        }
        total += long_cycles(a, covered, path);
        path.pop();
        covered[w] = false;
    }
    total
}
