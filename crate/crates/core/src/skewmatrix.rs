//! Skew-symmetric matrices with exact rational entries.
//!
//! A [`SkewMatrix`] of size `n + r` carries the split between the `n`
//! non-root vertices `1..=n` and the `r` roots `n+1..=n+r`. Vertex labels are
//! 1-based everywhere in this crate; the entry for the oriented edge `(i, j)`
//! is [`SkewMatrix::get`]`(i, j)`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    n: usize,
    r: usize,
    entries: Vec<Vec<Rational>>,
    zero_sum: bool,
}

/// Every violated cell and every nonzero row sum found by [`SkewMatrix::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Cells `(i, j)` (1-based, `i <= j`) with `a_ij != -a_ji`.
    pub antisymmetry: Vec<(usize, usize)>,
    /// Rows `i` (1-based) whose entries do not sum to zero, with the sum.
    #[serde(serialize_with = "serialize_row_sums")]
    pub row_sums: Vec<(usize, Rational)>,
    /// Set when the non-root block size is odd.
    pub odd_block: bool,
}

fn serialize_row_sums<S: serde::Serializer>(
    sums: &[(usize, Rational)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(sums.len()))?;
    for (row, sum) in sums {
        seq.serialize_element(&(row, rational::format(sum)))?;
    }
    seq.end()
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry.is_empty() && self.row_sums.is_empty() && !self.odd_block
    }
}

impl SkewMatrix {
    /// A plain square matrix: every vertex is a non-root (`n = size`, `r = 0`).
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let size = rows.len();
        Self::with_roots(size, 0, rows)
    }

    pub fn with_roots(n: usize, r: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let size = n + r;
        if rows.len() != size {
            return Err(Error::InvalidParameters(format!(
                "expected {size} rows for n={n}, r={r}, got {}",
                rows.len()
            )));
        }
        check_square(&rows)?;
        let mut m = SkewMatrix { n, r, entries: rows, zero_sum: false };
        m.zero_sum = m.is_antisymmetric() && m.row_sum_violations().is_empty();
        Ok(m)
    }

    pub fn from_i64(n: usize, r: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&x| rational::int(x)).collect())
            .collect();
        Self::with_roots(n, r, rows)
    }

    pub fn zeros(n: usize, r: usize) -> Self {
        let size = n + r;
        SkewMatrix {
            n,
            r,
            entries: vec![vec![Rational::zero(); size]; size],
            zero_sum: true,
        }
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

    /// Whether the matrix was confirmed antisymmetric with zero row sums.
    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    /// Entry for the oriented edge `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// Sets `a_ij = value` and `a_ji = -value`, then re-checks the zero-sum flag.
    pub fn set_pair(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[j - 1][i - 1] = -value.clone();
        self.entries[i - 1][j - 1] = value;
        self.zero_sum = self.is_antisymmetric() && self.row_sum_violations().is_empty();
    }

    /// Sets one cell only; used to build corrupted inputs.
    pub fn set_cell(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i - 1][j - 1] = value;
        self.zero_sum = self.is_antisymmetric() && self.row_sum_violations().is_empty();
    }

    fn is_antisymmetric(&self) -> bool {
        let s = self.size();
        (0..s).all(|i| (i..s).all(|j| self.entries[i][j] == -self.entries[j][i].clone()))
    }

    fn row_sum_violations(&self) -> Vec<(usize, Rational)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, row)| {
                let sum: Rational = row.iter().sum();
                (!sum.is_zero()).then_some((i + 1, sum))
            })
            .collect()
    }

    pub fn validate(&self, require_zero_sum: bool) -> ValidationReport {
        let s = self.size();
        let mut report = ValidationReport::default();
        for i in 0..s {
            for j in i..s {
                if self.entries[i][j] != -self.entries[j][i].clone() {
                    report.antisymmetry.push((i + 1, j + 1));
                }
            }
        }
        if require_zero_sum {
            report.row_sums = self.row_sum_violations();
        }
        report.odd_block = self.n % 2 == 1 && self.r > 0;
        report
    }

    /// Pfaffian as a signed sum over all pairings of the index set.
    pub fn pfaffian_by_pairings(&self) -> Rational {
        let size = self.size();
        if size % 2 == 1 {
            return Rational::zero();
        }
        let mut total = Rational::zero();
        for pairing in perm::pairings(size) {
            let mut term = Rational::one();
            for &(a, b) in &pairing {
                let e = &self.entries[a][b];
                if e.is_zero() {
                    term = Rational::zero();
                    break;
                }
                term *= e;
            }
            if term.is_zero() {
                continue;
            }
            let described: Vec<(usize, usize)> =
                pairing.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
            if perm::pairs_sign(&described) < 0 {
                total -= term;
            } else {
                total += term;
            }
        }
        total
    }

    /// Pfaffian by skew-symmetric Gaussian elimination, two rows and columns
    /// at a time.
    pub fn pfaffian_by_elimination(&self) -> Rational {
        let size = self.size();
        if size % 2 == 1 {
            return Rational::zero();
        }
        let mut m = self.entries.clone();
        let mut pf = Rational::one();
        for k in (0..size).step_by(2) {
            let Some(pivot_col) = (k + 1..size).find(|&j| !m[k][j].is_zero()) else {
                return Rational::zero();
            };
            if pivot_col != k + 1 {
                m.swap(k + 1, pivot_col);
                for row in m.iter_mut() {
                    row.swap(k + 1, pivot_col);
                }
                pf = -pf;
            }
            let pivot = m[k][k + 1].clone();
            pf *= &pivot;
            for i in k + 2..size {
                for j in k + 2..size {
                    let update = (&m[i][k] * &m[k + 1][j] - &m[i][k + 1] * &m[k][j]) / &pivot;
                    if !update.is_zero() {
                        m[i][j] += update;
                    }
                }
            }
        }
        pf
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.entries).expect("skew matrix is square")
    }

    /// The leading `(size - drop_last)` principal submatrix. Dropped indices
    /// come out of the root block first, then the non-root block.
    pub fn principal_submatrix(&self, drop_last: usize) -> Result<SkewMatrix> {
        let size = self.size();
        if drop_last > size {
            return Err(Error::InvalidParameters(format!(
                "cannot drop {drop_last} rows from a {size}x{size} matrix"
            )));
        }
        let keep = size - drop_last;
        let entries: Vec<Vec<Rational>> =
            self.entries[..keep].iter().map(|row| row[..keep].to_vec()).collect();
        let r = self.r.saturating_sub(drop_last);
        let n = keep - r;
        Ok(SkewMatrix { n, r, entries, zero_sum: false })
    }

    /// The non-root block `A` (roots removed).
    pub fn core_block(&self) -> SkewMatrix {
        self.principal_submatrix(self.r).expect("r <= size")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.r).unwrap();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(rational::format).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        out
    }

    /// Parses the text format written by [`SkewMatrix::to_text`]. Only the
    /// shape is checked here; antisymmetry and row sums are left to
    /// [`SkewMatrix::validate`].
    pub fn from_text(text: &str) -> Result<SkewMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::Parse { line: hline, message: "header must be `n r`".into() });
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: hline, message: format!("bad dimension {s:?}") })
        };
        let (n, r) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let size = n + r;
        let mut rows = Vec::with_capacity(size);
        for (line, text) in lines {
            let row: Vec<Rational> = text
                .split_whitespace()
                .map(|t| rational::parse_at(t, line))
                .collect::<Result<_>>()?;
            if row.len() != size {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {size} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != size {
            return Err(Error::Parse {
                line: hline,
                message: format!("expected {size} rows, found {}", rows.len()),
            });
        }
        SkewMatrix::with_roots(n, r, rows)
    }
}

fn check_square(rows: &[Vec<Rational>]) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != rows.len() {
            return Err(Error::NotSquare { row: i + 1, len: row.len(), expected: rows.len() });
        }
    }
    Ok(())
}

/// Exact determinant of any square rational matrix by Gaussian elimination.
pub fn determinant(rows: &[Vec<Rational>]) -> Result<Rational> {
    check_square(rows)?;
    let size = rows.len();
    let mut m = rows.to_vec();
    let mut det = Rational::one();
    for k in 0..size {
        let Some(pivot_row) = (k..size).find(|&i| !m[i][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..size {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k..size {
                let delta = &factor * &m[k][j];
                m[i][j] -= delta;
            }
        }
    }
    Ok(det)
}

/// Parameters shared by the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange(pub i64);

impl ValueRange {
    fn draw(self, rng: &mut ChaCha8Rng) -> Rational {
        let bound = self.0.max(1);
        let mut numer = 0;
        while numer == 0 {
            numer = rng.gen_range(-bound..=bound);
        }
        let denom = rng.gen_range(1..=bound);
        rational::rat(numer, denom)
    }
}

/// Random zero-sum instance with `n` non-roots and `r >= 1` roots.
///
/// Without an edge set every pair not touching vertex `n+1` gets a random
/// nonzero weight and column `n+1` balances each row. With an edge set the
/// weights form a random circulation supported exactly on those edges: a
/// spanning tree grown from `n+1` carries the balancing values and the
/// remaining edges are drawn freely (for a complete edge set this is the
/// same star construction). Same seed, same matrix.
pub fn random_instance(
    n: usize,
    r: usize,
    edge_set: Option<&[(usize, usize)]>,
    seed: u64,
    value_range: i64,
) -> Result<SkewMatrix> {
    check_instance_params(n, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match edge_set {
        None => {
            let edges = balanced_pairs(n + r, n + 1, |_, _| true);
            circulation(n, r, &edges, n + 1, &mut rng, ValueRange(value_range))
        }
        Some(edges) => exact_support(n, r, edges, n + 1, &mut rng, ValueRange(value_range)),
    }
}

/// Like [`random_instance`] without an edge set, but each pair not touching
/// vertex `n+1` is kept independently with probability `density`.
pub fn random_instance_with_density(
    n: usize,
    r: usize,
    density: f64,
    seed: u64,
    value_range: i64,
) -> Result<SkewMatrix> {
    check_instance_params(n, r)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameters(format!("density {density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::new();
    for i in 1..=n + r {
        for j in i + 1..=n + r {
            if i != n + 1 && j != n + 1 {
                keep.push(((i, j), rng.gen_bool(density)));
            }
        }
    }
    let edges = balanced_pairs(n + r, n + 1, |i, j| {
        keep.iter().any(|&(pair, kept)| pair == (i, j) && kept)
    });
    circulation(n, r, &edges, n + 1, &mut rng, ValueRange(value_range))
}

/// Random zero-sum matrix without roots (`r = 0`), for the line-bundle
/// identity. `size` must be even; the last vertex balances the rows.
pub fn random_closed_instance(
    size: usize,
    edge_set: Option<&[(usize, usize)]>,
    seed: u64,
    value_range: i64,
) -> Result<SkewMatrix> {
    if size % 2 == 1 || size < 2 {
        return Err(Error::InvalidParameters(format!("size must be even and >= 2, got {size}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match edge_set {
        None => {
            let edges = balanced_pairs(size, size, |_, _| true);
            circulation(size, 0, &edges, size, &mut rng, ValueRange(value_range))
        }
        Some(edges) => exact_support(size, 0, edges, size, &mut rng, ValueRange(value_range)),
    }
}

fn check_instance_params(n: usize, r: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameters(format!("n must be even, got {n}")));
    }
    if r == 0 {
        return Err(Error::InvalidParameters("r must be at least 1".into()));
    }
    Ok(())
}

/// All pairs touching `balancer`, plus the other pairs accepted by `keep`.
fn balanced_pairs(
    size: usize,
    balancer: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 1..=size {
        for j in i + 1..=size {
            if i == balancer || j == balancer || keep(i, j) {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn exact_support(
    n: usize,
    r: usize,
    edges: &[(usize, usize)],
    balancer: usize,
    rng: &mut ChaCha8Rng,
    range: ValueRange,
) -> Result<SkewMatrix> {
    let size = n + r;
    let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        if a == b || a == 0 || b == 0 || a > size || b > size {
            return Err(Error::InvalidParameters(format!("edge {a}-{b} is not a pair of 1..={size}")));
        }
        let e = (a.min(b), a.max(b));
        if !normalized.contains(&e) {
            normalized.push(e);
        }
    }
    normalized.sort_unstable();
    if let Some(&(a, b)) = normalized.iter().find(|&&e| is_bridge(size, &normalized, e)) {
        return Err(Error::InvalidParameters(format!(
            "edge {a}-{b} is a bridge; every zero-sum matrix vanishes on it"
        )));
    }
    const ATTEMPTS: usize = 64;
    for _ in 0..ATTEMPTS {
        let m = circulation(n, r, &normalized, balancer, rng, range)?;
        if normalized.iter().all(|&(a, b)| !m.get(a, b).is_zero()) {
            return Ok(m);
        }
    }
    Err(Error::InvalidParameters(format!(
        "no generic circulation found after {ATTEMPTS} draws; widen the value range"
    )))
}

fn is_bridge(size: usize, edges: &[(usize, usize)], removed: (usize, usize)) -> bool {
    let mut adj = vec![Vec::new(); size + 1];
    for &(a, b) in edges.iter().filter(|&&e| e != removed) {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; size + 1];
    let mut stack = vec![removed.0];
    seen[removed.0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    !seen[removed.1]
}

/// Random circulation on `edges`: free values on non-tree edges of a BFS
/// spanning forest grown from `balancer`, tree edges solved leaves-first so
/// that every row sums to zero.
fn circulation(
    n: usize,
    r: usize,
    edges: &[(usize, usize)],
    balancer: usize,
    rng: &mut ChaCha8Rng,
    range: ValueRange,
) -> Result<SkewMatrix> {
    let size = n + r;
    let mut adj = vec![Vec::new(); size + 1];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }

    let mut parent = vec![0usize; size + 1];
    let mut seen = vec![false; size + 1];
    let mut order = Vec::with_capacity(size);
    let starts = std::iter::once(balancer).chain((1..=size).filter(|&v| v != balancer));
    for start in starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut m = SkewMatrix::zeros(n, r);
    for &(a, b) in edges {
        if parent[a] != b && parent[b] != a {
            let value = range.draw(rng);
            m.entries[a - 1][b - 1] = value.clone();
            m.entries[b - 1][a - 1] = -value;
        }
    }
    for &v in order.iter().rev() {
        let p = parent[v];
        if p == 0 {
            continue;
        }
        let rest: Rational = m.entries[v - 1].iter().sum();
        m.entries[v - 1][p - 1] = -rest.clone();
        m.entries[p - 1][v - 1] = rest;
    }
    m.zero_sum = m.is_antisymmetric() && m.row_sum_violations().is_empty();
    debug_assert!(m.zero_sum);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn two_by_two(a: Rational) -> SkewMatrix {
        SkewMatrix::from_rows(vec![vec![int(0), a.clone()], vec![-a, int(0)]]).unwrap()
    }

    #[test]
    fn validate_reports_row_sums_and_passes_on_zero() {
        let m = two_by_two(int(1));
        let report = m.validate(true);
        assert!(!report.passed());
        assert_eq!(report.row_sums, vec![(1, int(1)), (2, int(-1))]);
        assert!(report.antisymmetry.is_empty());
        assert!(SkewMatrix::zeros(2, 0).validate(true).passed());
    }

    #[test]
    fn validate_lists_every_broken_cell() {
        let mut m = SkewMatrix::zeros(4, 0);
        m.set_cell(1, 2, int(3));
        m.set_cell(3, 3, int(1));
        let report = m.validate(false);
        assert_eq!(report.antisymmetry, vec![(1, 2), (3, 3)]);
        assert!(report.row_sums.is_empty());
    }

    #[test]
    fn two_by_two_pfaffian_and_determinant() {
        let a = rat(-7, 3);
        let m = two_by_two(a.clone());
        assert_eq!(m.pfaffian_by_pairings(), a);
        assert_eq!(m.pfaffian_by_elimination(), a);
        assert_eq!(m.determinant(), &a * &a);
    }

    #[test]
    fn four_by_four_pairing_expansion() {
        let (a12, a13, a14, a23, a24, a34) = (int(2), int(3), int(5), int(7), int(11), int(13));
        let rows = vec![
            vec![int(0), a12.clone(), a13.clone(), a14.clone()],
            vec![-a12.clone(), int(0), a23.clone(), a24.clone()],
            vec![-a13.clone(), -a23.clone(), int(0), a34.clone()],
            vec![-a14.clone(), -a24.clone(), -a34.clone(), int(0)],
        ];
        let m = SkewMatrix::from_rows(rows).unwrap();
        let expected = &a12 * &a34 - &a13 * &a24 + &a14 * &a23;
        assert_eq!(m.pfaffian_by_pairings(), expected);
        assert_eq!(m.pfaffian_by_elimination(), expected);
    }

    #[test]
    fn odd_and_empty_conventions() {
        let m = SkewMatrix::zeros(3, 0);
        assert_eq!(m.pfaffian_by_pairings(), int(0));
        assert_eq!(m.pfaffian_by_elimination(), int(0));
        let empty = SkewMatrix::zeros(0, 0);
        assert_eq!(empty.pfaffian_by_pairings(), int(1));
        assert_eq!(empty.pfaffian_by_elimination(), int(1));
        assert_eq!(empty.determinant(), int(1));
    }

    #[test]
    fn elimination_handles_zero_pivots() {
        // a12 = 0 forces a row/column swap.
        let rows = vec![
            vec![0, 0, 2, 1],
            vec![0, 0, 3, -4],
            vec![-2, -3, 0, 0],
            vec![-1, 4, 0, 0],
        ];
        let m = SkewMatrix::from_i64(4, 0, &rows).unwrap();
        assert_eq!(m.pfaffian_by_elimination(), m.pfaffian_by_pairings());
        assert_eq!(m.pfaffian_by_pairings(), int(11));
    }

    #[test]
    fn full_zero_sum_matrix_is_singular() {
        let m = random_instance(4, 1, None, 3, 5).unwrap();
        assert_eq!(m.determinant(), int(0));
        let m = random_instance(4, 2, None, 3, 5).unwrap();
        assert_eq!(m.determinant(), int(0));
    }

    #[test]
    fn principal_submatrix_bounds() {
        let m = random_instance(4, 1, None, 9, 4).unwrap();
        assert_eq!(m.principal_submatrix(0).unwrap().rows(), m.rows());
        let empty = m.principal_submatrix(5).unwrap();
        assert_eq!(empty.size(), 0);
        assert_eq!(empty.pfaffian_by_pairings(), int(1));
        assert!(m.principal_submatrix(6).is_err());
        let a = m.principal_submatrix(1).unwrap();
        assert_eq!((a.n(), a.r(), a.is_zero_sum()), (4, 0, false));
    }

    #[test]
    fn generator_rejects_bad_parameters() {
        assert!(random_instance(3, 1, None, 0, 5).is_err());
        assert!(random_instance(4, 0, None, 0, 5).is_err());
        // 1-2 as the only edge at vertex 1 is a bridge.
        assert!(random_instance(2, 1, Some(&[(1, 2), (2, 3)]), 0, 5).is_err());
    }

    #[test]
    fn small_generated_instance_balances() {
        let m = random_instance(2, 1, None, 11, 5).unwrap();
        assert_eq!(m.size(), 3);
        assert!(m.validate(true).passed());
        assert!(m.is_zero_sum());
    }

    #[test]
    fn generator_is_deterministic() {
        let a = random_instance(6, 2, None, 42, 6).unwrap();
        let b = random_instance(6, 2, None, 42, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_instance(6, 2, None, 43, 6).unwrap());
    }

    #[test]
    fn running_example_support_is_realized_exactly() {
        let edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)];
        let m = random_instance(4, 1, Some(&edges), 1, 7).unwrap();
        assert!(m.validate(true).passed());
        for i in 1..=5 {
            for j in i + 1..=5 {
                assert_eq!(!m.get(i, j).is_zero(), edges.contains(&(i, j)), "pair {i}-{j}");
            }
        }
    }

    #[test]
    fn closed_instances_balance_without_roots() {
        let m = random_closed_instance(6, None, 5, 5).unwrap();
        assert_eq!((m.n(), m.r()), (6, 0));
        assert!(m.validate(true).passed());
        assert_eq!(m.determinant(), int(0));
    }

    #[test]
    fn text_format_reads_back() {
        let m = random_instance(4, 2, None, 8, 9).unwrap();
        let text = m.to_text();
        assert!(text.starts_with("4 2\n"));
        assert_eq!(SkewMatrix::from_text(&text).unwrap(), m);
        assert!(SkewMatrix::from_text("2 1\n0 1\n").is_err());
        assert!(SkewMatrix::from_text("2 0\n0 1\n-1 q\n").is_err());
    }
}
