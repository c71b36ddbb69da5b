//! One round of opening doubled edges, starting from the smallest vertex on
//! a remaining doubled edge.

use num_traits::Zero;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::graphmodel::{OrientedSuperimposition, PerfectMatching, RootedGraph};
use crate::perm;
use crate::rational::{parity_sign, signed, Rational};

/// An intermediate configuration `M0 ∪ M_{γ…}`.
///
/// Every vertex of `V` has one outgoing edge. `tail[v]` marks vertices whose
/// outgoing edge is their reference-matching edge; the others carry the
/// edges of the current matching-like configuration, whose weights make up
/// the product. A remaining doubled edge has both endpoints pointing at each
/// other.
#[derive(Debug, Clone)]
pub(crate) struct State {
    pub out: Vec<usize>,
    pub tail: Vec<bool>,
    pub doubled: Vec<bool>,
    pub n_doubled: usize,
    pub n_cycles: usize,
    pub on_initial_cycle: Vec<bool>,
    pub sign: i8,
    pub provenance: Vec<Vec<usize>>,
}

impl State {
    pub fn initial(s: &OrientedSuperimposition) -> State {
        let n = s.n;
        let mut out = vec![0; n];
        let mut tail = vec![false; n];
        for &(a, b) in &s.oriented_m0 {
            out[a - 1] = b;
            tail[a - 1] = true;
        }
        for &(a, b) in &s.oriented_m {
            out[a - 1] = b;
        }
        let mut doubled = vec![false; n];
        for &(a, b) in &s.doubled {
            doubled[a - 1] = true;
            doubled[b - 1] = true;
        }
        let mut on_initial_cycle = vec![false; n];
        for c in &s.cycles {
            for &v in c {
                on_initial_cycle[v - 1] = true;
            }
        }
        State {
            out,
            tail,
            doubled,
            n_doubled: s.doubled.len(),
            n_cycles: s.cycles.len(),
            on_initial_cycle,
            sign: perm::pairs_sign(&s.oriented_m0),
            provenance: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// `sgn · (-1)^{doubled left} · (-1)^{initial cycles} · Π a_e` over the
    /// non-reference edges.
    pub fn weight(&self, g: &RootedGraph) -> Rational {
        let mut product = Rational::from_integer(1.into());
        for (i, &w) in self.out.iter().enumerate() {
            if !self.tail[i] {
                let a = g.weight(i + 1, w);
                if a.is_zero() {
                    return Rational::zero();
                }
                product *= a;
            }
        }
        signed(self.sign * parity_sign(self.n_doubled + self.n_cycles), product)
    }

    /// The reference-matching sign recomputed from the tail flags.
    pub fn fresh_sign(&self, m0: &PerfectMatching) -> i8 {
        let oriented: Vec<(usize, usize)> = m0
            .pairs()
            .iter()
            .map(|&(a, b)| if self.tail[a - 1] { (a, b) } else { (b, a) })
            .collect();
        perm::pairs_sign(&oriented)
    }

    pub fn config(&self) -> Config {
        Config::new(self.n(), self.out.clone())
    }

    pub fn first_doubled(&self) -> Option<usize> {
        self.doubled.iter().position(|&d| d).map(|i| i + 1)
    }
}

/// The survivors of one round plus the odd-loop pairs dropped because their
/// weights cancel.
pub(crate) struct StepOutcome {
    pub start: usize,
    pub emitted: Vec<State>,
    pub cancelled: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Opens the doubled edge at the smallest doubled vertex and keeps opening
/// through doubled vertices until every branch leaves the doubled set.
pub(crate) fn step(g: &RootedGraph, m0: &PerfectMatching, state: &State) -> Result<StepOutcome> {
    let start = state
        .first_doubled()
        .ok_or_else(|| Error::Invariant("no doubled edge left to open".into()))?;
    if !state.tail[start - 1] {
        return Err(Error::Invariant(format!(
            "smallest doubled vertex {start} does not carry its reference edge"
        )));
    }
    let mut raw = Vec::new();
    expand(g, m0, state.clone(), vec![start], 1, &mut raw)?;

    for (child, path) in &raw {
        check_emission(m0, child, path)?;
    }

    let mut dropped = vec![false; raw.len()];
    let mut cancelled = Vec::new();
    for i in 0..raw.len() {
        let Some(partner_path) = odd_loop_reversal(&raw[i].1) else {
            continue;
        };
        let j = raw
            .iter()
            .position(|(_, p)| *p == partner_path)
            .ok_or_else(|| Error::Invariant(format!("odd loop {:?} has no reversal", raw[i].1)))?;
        if odd_loop_reversal(&raw[j].1).as_ref() != Some(&raw[i].1) {
            return Err(Error::Invariant(format!("odd-loop pairing of {:?} is not mutual", raw[i].1)));
        }
        let total = raw[i].0.weight(g) + raw[j].0.weight(g);
        if !total.is_zero() {
            return Err(Error::Invariant(format!(
                "odd loops {:?} and {:?} do not cancel",
                raw[i].1, raw[j].1
            )));
        }
        dropped[i] = true;
        if i < j {
            cancelled.push((raw[i].1.clone(), raw[j].1.clone()));
        }
    }

    let emitted = raw
        .into_iter()
        .zip(dropped)
        .filter(|(_, d)| !d)
        .map(|((mut child, path), _)| {
            child.provenance.push(path);
            child
        })
        .collect();
    Ok(StepOutcome { start, emitted, cancelled })
}

/// Iteration `k` at the doubled vertex `path.last()`: flip its reference
/// edge if needed, remove the doubled edge, and redirect the partner's edge
/// to every other neighbour. The children's weights must add up to the
/// parent's (the partner's row sums to zero).
fn expand(
    g: &RootedGraph,
    m0: &PerfectMatching,
    mut st: State,
    mut path: Vec<usize>,
    k: usize,
    raw: &mut Vec<(State, Vec<usize>)>,
) -> Result<()> {
    let n = st.n();
    let lk = *path.last().unwrap();
    let lk_partner = m0.partner(lk);
    if k >= 2 && lk > lk_partner {
        st.tail[lk - 1] = true;
        st.tail[lk_partner - 1] = false;
        st.sign = -st.sign;
    }
    let parent_weight = st.weight(g);
    st.doubled[lk - 1] = false;
    st.doubled[lk_partner - 1] = false;
    st.n_doubled -= 1;
    path.push(lk_partner);

    let mut children_total = Rational::zero();
    for &next in g.neighbors(lk_partner) {
        if next == lk {
            continue;
        }
        let mut child = st.clone();
        child.out[lk_partner - 1] = next;
        children_total += child.weight(g);
        let mut child_path = path.clone();
        child_path.push(next);
        if next <= n && child.doubled[next - 1] {
            expand(g, m0, child, child_path, k + 1, raw)?;
        } else {
            raw.push((child, child_path));
        }
    }
    if children_total != parent_weight {
        return Err(Error::Invariant(format!(
            "opening at vertex {lk_partner} along {path:?} changes the weight (row {lk_partner} does not sum to zero)"
        )));
    }
    Ok(())
}

/// For a path closing on an odd position (`ℓ_{k+1} = ℓ_i'`), the path that
/// runs the same loop the other way round.
pub(crate) fn odd_loop_reversal(path: &[usize]) -> Option<Vec<usize>> {
    let last = *path.last()?;
    let body = &path[..path.len() - 1];
    let idx = body.iter().position(|&v| v == last)?;
    if idx % 2 == 0 {
        return None;
    }
    let mut reversed = body[..=idx].to_vec();
    reversed.extend(body[idx + 1..].iter().rev());
    reversed.push(last);
    Some(reversed)
}

/// Geometric properties of an emitted configuration and its path: even
/// length, alternation starting with a reference edge, distinct vertices,
/// the start is the smallest of them, and the running sign matches a
/// recomputation from scratch.
fn check_emission(m0: &PerfectMatching, child: &State, path: &[usize]) -> Result<()> {
    let fail = |what: &str| Err(Error::Invariant(format!("emitted path {path:?}: {what}")));
    let edges = path.len() - 1;
    if edges % 2 != 0 {
        return fail("odd length");
    }
    for t in 0..edges / 2 {
        let (a, b, c) = (path[2 * t], path[2 * t + 1], path[2 * t + 2]);
        if !m0.contains(a, b) || !child.tail[a - 1] || child.out[a - 1] != b {
            return fail("edge is not the oriented reference edge");
        }
        if child.tail[b - 1] || child.out[b - 1] != c {
            return fail("edge is not a non-reference edge of the configuration");
        }
    }
    let body = &path[..edges];
    let mut sorted = body.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != body.len() {
        return fail("repeated vertex before the last one");
    }
    if sorted[0] != path[0] {
        return fail("start is not the smallest vertex");
    }
    if child.fresh_sign(m0) != child.sign {
        return fail("running sign differs from the recomputed sign");
    }
    Ok(())
}

/// The start of the round that produced `st` must be the larger of its
/// largest leaf and the largest minimum vertex of a cycle component created
/// by the algorithm.
pub(crate) fn check_initial_vertex(st: &State, start: usize) -> Result<()> {
    let cfg = st.config();
    let n = cfg.n();
    let indeg = cfg.in_degrees();
    let largest_leaf = (1..=n).rev().find(|&v| indeg[v] == 0);
    let largest_cycle_min = cfg
        .cycles()
        .into_iter()
        .filter(|c| c.len() >= 3 && !st.on_initial_cycle[c[0] - 1])
        .filter(|c| c.iter().all(|&v| indeg[v] == 1))
        .map(|c| c[0])
        .max();
    let expected = largest_leaf.max(largest_cycle_min);
    if expected != Some(start) {
        return Err(Error::Invariant(format!(
            "round started at {start} but its output {cfg} points to {expected:?}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_loop_reversal_runs_the_loop_backwards() {
        assert_eq!(odd_loop_reversal(&[1, 4, 2, 3, 4]), Some(vec![1, 4, 3, 2, 4]));
        assert_eq!(odd_loop_reversal(&[1, 4, 3, 2, 4]), Some(vec![1, 4, 2, 3, 4]));
        assert_eq!(odd_loop_reversal(&[1, 4, 2, 3, 1]), None);
        assert_eq!(odd_loop_reversal(&[1, 4, 5]), None);
    }
}
