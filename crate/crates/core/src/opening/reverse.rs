//! RC-rooted spanning forests compatible with a reference matching, the
//! partial and complete reverse algorithms, and the matchings `M^(ε)`.

use crate::config::{peel, Config};
use crate::error::{Error, Result};
use crate::forests::{check_alternation, compatible_assignments, is_compatible, PathDecomposition};
use crate::graphmodel::{PerfectMatching, RootedGraph};

/// Strips branches off an RC-rooted forest, largest leaf first, stopping
/// at roots, cycles, forks and smaller vertices. Rejects configurations
/// made of cycles only.
pub fn partial_reverse(f: &Config, m0: Option<&PerfectMatching>) -> Result<PathDecomposition> {
    if f.is_cycles_only() {
        return Err(Error::InvalidParameters(
            "configuration consists of cycles only; nothing to strip".into(),
        ));
    }
    let d = PathDecomposition::new(peel(f), m0);
    if let Some(m0) = m0 {
        if is_compatible(f, m0) {
            check_alternation(&d.paths, m0);
        }
    }
    Ok(d)
}

/// Cycles only, or every stripped path is even and starts with an `m0` edge.
pub fn rcrsf_condition_c(f: &Config, m0: &PerfectMatching) -> bool {
    match partial_reverse(f, Some(m0)) {
        Ok(d) => d.condition_c(),
        Err(_) => true,
    }
}

/// Whether `f`, compatible with `m0`, only has cycles of even length at
/// least 4 that alternate between `m0` and other edges.
pub fn is_rcrsf(f: &Config, m0: &PerfectMatching) -> bool {
    is_compatible(f, m0)
        && f.cycles().iter().all(|c| {
            let len = c.len();
            len >= 4
                && (0..len).all(|i| {
                    m0.contains(c[i], c[(i + 1) % len]) != m0.contains(c[(i + 1) % len], c[(i + 2) % len])
                })
        })
}

/// Every RC-rooted spanning forest compatible with `m0`, in both
/// orientations of every cycle.
pub fn enumerate_rcrsf(g: &RootedGraph, m0: &PerfectMatching) -> Vec<Config> {
    compatible_assignments(g, m0).into_iter().filter(|f| is_rcrsf(f, m0)).collect()
}

/// `M^(ε)`: `m0` on branches and on cycles with `ε_j = 0`, the other cycle
/// edges where `ε_j = 1`. `eps` follows the order of `f.cycles()`.
pub fn matching_for(f: &Config, m0: &PerfectMatching, eps: &[bool]) -> PerfectMatching {
    let cycles = f.cycles();
    assert_eq!(cycles.len(), eps.len());
    let mut pairs: Vec<(usize, usize)> = m0.pairs().to_vec();
    for (c, &flip) in cycles.iter().zip(eps) {
        if !flip {
            continue;
        }
        pairs.retain(|&(a, b)| !c.contains(&a) && !c.contains(&b));
        let len = c.len();
        for i in 0..len {
            let (a, b) = (c[i], c[(i + 1) % len]);
            if !m0.contains(a, b) {
                pairs.push((a, b));
            }
        }
    }
    PerfectMatching::new(m0.n(), &pairs).expect("alternating cycles give a perfect matching")
}

/// All `2^k` matchings `M^(ε)`, with `ε` read off the bits of the index
/// (bit `j` for the `j`-th cycle).
pub fn matchings_from_rcrsf(f: &Config, m0: &PerfectMatching) -> Vec<PerfectMatching> {
    let k = f.cycles().len();
    (0..1usize << k).map(|mask| matching_for(f, m0, &eps_of(mask, k))).collect()
}

pub(crate) fn eps_of(mask: usize, k: usize) -> Vec<bool> {
    (0..k).map(|j| mask >> j & 1 == 1).collect()
}

/// `f` with every cycle turned so that its smallest vertex points to its
/// `m0` partner. Used as the orientation-free identity of an RC-rooted forest.
pub fn canonical_shape(f: &Config, m0: &PerfectMatching) -> Config {
    let mut shape = f.clone();
    for c in f.cycles() {
        if shape.target(c[0]) != m0.partner(c[0]) {
            shape.reverse_cycle(&c);
        }
    }
    shape
}

/// Recovers the opening paths `(γ¹, …, γʲ)` that produce `f` from the
/// matching `M^(ε)`: cycles with `ε_j = 1` are kept, everything else is
/// taken apart from the last round back to the first.
pub fn complete_reverse(f: &Config, eps: &[bool]) -> Result<Vec<Vec<usize>>> {
    let n = f.n();
    let cycles = f.cycles();
    if cycles.len() != eps.len() {
        return Err(Error::InvalidParameters("one ε entry per cycle required".into()));
    }
    let mut cycle_of = vec![None; n + 1];
    for (j, c) in cycles.iter().enumerate() {
        for &v in c {
            cycle_of[v] = Some(j);
        }
    }
    let mut active = vec![true; n + 1];
    let mut indeg = f.in_degrees();
    let mut rounds = Vec::new();

    loop {
        let is_leaf = |v: usize, active: &[bool], indeg: &[usize]| {
            active[v] && indeg[v] == 0 && cycle_of[v].is_none()
        };
        let largest_leaf = (1..=n).rev().find(|&v| is_leaf(v, &active, &indeg));
        let bare_cycle = cycles
            .iter()
            .enumerate()
            .filter(|&(j, c)| !eps[j] && c.iter().all(|&v| active[v] && indeg[v] == 1))
            .map(|(j, c)| (c[0], j))
            .max();
        let start = largest_leaf.max(bare_cycle.map(|(v, _)| v));
        let Some(start) = start else {
            break;
        };

        let path = if bare_cycle.map(|(v, _)| v) == Some(start) {
            let j = bare_cycle.unwrap().1;
            let mut p = cycles[j].clone();
            p.push(start);
            p
        } else {
            let anchor = f.anchor(start, &cycle_flags(&cycle_of));
            let single_branch = anchor <= n
                && cycle_of[anchor].is_some_and(|j| !eps[j])
                && (1..=n)
                    .filter(|&v| is_leaf(v, &active, &indeg))
                    .filter(|&v| {
                        let a = f.anchor(v, &cycle_flags(&cycle_of));
                        a <= n && cycle_of[a] == cycle_of[anchor]
                    })
                    .count()
                    == 1;
            if single_branch {
                let cycle = &cycles[cycle_of[anchor].unwrap()];
                let mut p = vec![start];
                let mut v = start;
                while v != anchor {
                    v = f.target(v);
                    p.push(v);
                }
                if start < cycle[0] {
                    loop {
                        v = f.target(v);
                        p.push(v);
                        if v == anchor {
                            break;
                        }
                    }
                }
                p
            } else {
                let mut p = vec![start];
                let mut v = start;
                loop {
                    let w = f.target(v);
                    p.push(w);
                    if w > n || cycle_of[w].is_some() || indeg[w] >= 2 || w < start {
                        break;
                    }
                    v = w;
                }
                p
            }
        };
        for e in path.windows(2) {
            if !active[e[0]] {
                return Err(Error::Invariant(format!("reverse path {path:?} reuses an edge")));
            }
            active[e[0]] = false;
            if e[1] <= n {
                indeg[e[1]] -= 1;
            }
        }
        rounds.push(path);
    }

    for v in 1..=n {
        if active[v] && !cycle_of[v].is_some_and(|j| eps[j]) {
            return Err(Error::Invariant(format!(
                "reverse algorithm stalls with vertex {v} of {f} still attached"
            )));
        }
    }
    rounds.reverse();
    Ok(rounds)
}

fn cycle_flags(cycle_of: &[Option<usize>]) -> Vec<bool> {
    cycle_of.iter().map(Option::is_some).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, edges: &[(usize, usize)]) -> Config {
        Config::from_edges(n, edges).unwrap()
    }

    pub(super) fn m0() -> PerfectMatching {
        PerfectMatching::parse(4, "1-4,2-3").unwrap()
    }

    #[test]
    fn cycles_only_is_rejected_and_satisfies_condition() {
        let c = cfg(4, &[(1, 4), (4, 3), (3, 2), (2, 1)]);
        assert!(partial_reverse(&c, Some(&m0())).is_err());
        assert!(rcrsf_condition_c(&c, &m0()));
        assert!(is_rcrsf(&c, &m0()));
    }

    #[test]
    fn forest_partial_reverse_is_trimming() {
        let f1 = cfg(4, &[(2, 3), (3, 1), (1, 4), (4, 5)]);
        let d = partial_reverse(&f1, Some(&m0())).unwrap();
        assert_eq!(d.paths, vec![vec![2, 3, 1], vec![1, 4, 5]]);
        assert!(d.condition_c());
    }

    #[test]
    fn single_branch_unicycle_stops_at_the_cycle() {
        // 4-cycle 1,4,3,2 on m0 = {14, 23} plus a tail 5 -> 6 -> 1 on {56}.
        let m0 = PerfectMatching::parse(6, "1-4,2-3,5-6").unwrap();
        let f = cfg(6, &[(1, 4), (4, 3), (3, 2), (2, 1), (5, 6), (6, 1)]);
        assert!(is_rcrsf(&f, &m0));
        let d = partial_reverse(&f, Some(&m0)).unwrap();
        assert_eq!(d.paths, vec![vec![5, 6, 1]]);
        assert!(d.condition_c());
    }

    #[test]
    fn eps_matchings_differ_on_the_cycle_only() {
        let m0 = PerfectMatching::parse(6, "1-4,2-3,5-6").unwrap();
        let f = cfg(6, &[(1, 4), (4, 3), (3, 2), (2, 1), (5, 6), (6, 1)]);
        let ms = matchings_from_rcrsf(&f, &m0);
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0], m0);
        assert_eq!(ms[1], PerfectMatching::parse(6, "1-2,3-4,5-6").unwrap());
        let forest = cfg(4, &[(2, 3), (3, 1), (1, 4), (4, 5)]);
        assert_eq!(matchings_from_rcrsf(&forest, &super::tests::m0()), vec![super::tests::m0()]);
    }

    #[test]
    fn canonical_shape_turns_cycles_toward_the_partner() {
        let c = cfg(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let m0 = PerfectMatching::parse(4, "1-4,2-3").unwrap();
        assert_eq!(canonical_shape(&c, &m0).cycles(), vec![vec![1, 4, 3, 2]]);
    }

    #[test]
    fn complete_reverse_of_a_forest() {
        // F2 of the running example: rounds (1,4,5) then (2,3,5).
        let f2 = cfg(4, &[(2, 3), (3, 5), (1, 4), (4, 5)]);
        assert_eq!(complete_reverse(&f2, &[]).unwrap(), vec![vec![1, 4, 5], vec![2, 3, 5]]);
    }
}
