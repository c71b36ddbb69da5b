//! Opening of doubled edges: turning the superimposition `M0 ∪ M` of two
//! perfect matchings into RC-rooted half-forests of the same total weight,
//! and checking that the union over all `M` is the family selected by
//! Condition (C), with the unicycle terms cancelling.

mod reverse;
mod step;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::forests::{half_forest_weight, half_forests};
use crate::graphmodel::{
    enumerate_perfect_matchings, matching_weight, superimpose_and_orient, OrientedSuperimposition,
    PerfectMatching, RootedGraph,
};
use crate::rational::{self, parity_sign, signed, Rational};

pub use reverse::{
    canonical_shape, complete_reverse, enumerate_rcrsf, is_rcrsf, matching_for, matchings_from_rcrsf,
    partial_reverse, rcrsf_condition_c,
};
use step::{check_initial_vertex, step, State};

/// One configuration produced by the opening procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputItem {
    pub config: Config,
    pub weight: Rational,
    /// The opening paths `γ` of each round, in order.
    pub provenance: Vec<Vec<usize>>,
    /// Doubled edges still present (zero for outputs of the complete run).
    pub remaining_doubled: usize,
}

impl OutputItem {
    /// The `ℓ` vertices of each round, e.g. `1,5;2,1`. Empty when nothing
    /// was opened.
    pub fn label(&self) -> String {
        self.provenance
            .iter()
            .map(|p| p.iter().step_by(2).map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// A multiset of weighted configurations, plus the odd-loop pairs that were
/// dropped because they cancel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedOutputSet {
    pub items: Vec<OutputItem>,
    pub cancelled: Vec<(Vec<usize>, Vec<usize>)>,
}

impl WeightedOutputSet {
    pub fn total(&self) -> Rational {
        self.items.iter().map(|i| &i.weight).sum()
    }

    pub fn labels(&self) -> Vec<String> {
        self.items.iter().map(OutputItem::label).collect()
    }
}

fn item(g: &RootedGraph, st: &State) -> OutputItem {
    OutputItem {
        config: st.config(),
        weight: st.weight(g),
        provenance: st.provenance.clone(),
        remaining_doubled: st.n_doubled,
    }
}

fn reference_of(s: &OrientedSuperimposition) -> Result<PerfectMatching> {
    PerfectMatching::new(s.n, &s.oriented_m0)
}

/// One round of opening: every doubled edge reachable from the smallest
/// doubled vertex is opened, odd loops are cancelled in pairs. Without
/// doubled edges the superimposition itself is returned.
pub fn open_step1(g: &RootedGraph, s: &OrientedSuperimposition) -> Result<WeightedOutputSet> {
    let m0 = reference_of(s)?;
    let init = State::initial(s);
    if init.n_doubled == 0 {
        return Ok(WeightedOutputSet { items: vec![item(g, &init)], cancelled: Vec::new() });
    }
    let outcome = step(g, &m0, &init)?;
    let set = WeightedOutputSet {
        items: outcome.emitted.iter().map(|st| item(g, st)).collect(),
        cancelled: outcome.cancelled,
    };
    if set.total() != matching_weight(s, g) {
        return Err(Error::Invariant("the first round of opening changes the total weight".into()));
    }
    Ok(set)
}

/// Repeats the opening rounds until no doubled edge is left. Every output
/// is an RC-rooted forest compatible with `m0` weighted by
/// `sgn · (-1)^{|C|} · Π a_e`, and the total equals the weight of `M`.
pub fn run_complete(g: &RootedGraph, m0: &PerfectMatching, m: &PerfectMatching) -> Result<WeightedOutputSet> {
    let s = superimpose_and_orient(m0, m);
    let init = State::initial(&s);
    let target = matching_weight(&s, g);
    if init.weight(g) != target {
        return Err(Error::Invariant("initial configuration weight disagrees with the matching weight".into()));
    }
    let mut set = WeightedOutputSet::default();
    if init.n_doubled == 0 {
        set.items.push(item(g, &init));
        return Ok(set);
    }
    let mut finished = Vec::new();
    run_rounds(g, m0, init, &mut finished, &mut set.cancelled)?;
    for st in &finished {
        if st.n_doubled != 0 {
            return Err(Error::Invariant("output still holds a doubled edge".into()));
        }
        if st.fresh_sign(m0) != st.sign {
            return Err(Error::Invariant("output weight is not sgn · (-1)^|C| · product".into()));
        }
        let cfg = st.config();
        if !is_rcrsf(&cfg, m0) {
            return Err(Error::Invariant(format!("output {cfg} is not an RC-rooted forest compatible with {m0}")));
        }
        set.items.push(item(g, st));
    }
    if set.total() != target {
        return Err(Error::Invariant(format!("complete opening of {m} does not preserve the weight")));
    }
    Ok(set)
}

fn run_rounds(
    g: &RootedGraph,
    m0: &PerfectMatching,
    st: State,
    finished: &mut Vec<State>,
    cancelled: &mut Vec<(Vec<usize>, Vec<usize>)>,
) -> Result<()> {
    let parent = st.weight(g);
    let outcome = step(g, m0, &st)?;
    let total: Rational = outcome.emitted.iter().map(|c| c.weight(g)).sum();
    if total != parent {
        return Err(Error::Invariant(format!("round starting at {} changes the weight", outcome.start)));
    }
    cancelled.extend(outcome.cancelled);
    for child in outcome.emitted {
        check_initial_vertex(&child, outcome.start)?;
        if child.n_doubled == 0 {
            finished.push(child);
        } else {
            run_rounds(g, m0, child, finished, cancelled)?;
        }
    }
    Ok(())
}

/// Outcome of comparing the union of all opening outputs with the
/// Condition-(C) family of RC-rooted forests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub m0: String,
    pub matchings: usize,
    pub outputs: usize,
    /// Distinct Condition-(C) RC-rooted forests, cycle orientation ignored.
    pub shapes: usize,
    /// How many of those are spanning forests.
    pub forests: usize,
    pub unicycle_residue: String,
    pub forest_sum: String,
    pub half_forest_sum: String,
    pub problems: Vec<String>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

struct Occurrence {
    eps: Vec<bool>,
    weight: Rational,
}

const MAX_PROBLEMS: usize = 20;

/// Runs the complete opening for every perfect matching `M` and checks, for
/// the reference `m0`:
/// each Condition-(C) RC-rooted forest with `k` cycles occurs exactly `2^k`
/// times, once from each `M^(ε)`; outputs carry `sgn · (-1)^{Σε} · Π a_e`;
/// the reverse algorithm recovers each output's opening paths; the unicycle
/// weights of each shape cancel; and the forest outputs are exactly the
/// half-forests of `m0` with their weights.
pub fn verify_correspondence(g: &RootedGraph, m0: &PerfectMatching) -> CorrespondenceReport {
    let mut problems = Vec::new();
    let note = |problems: &mut Vec<String>, msg: String| {
        if problems.len() < MAX_PROBLEMS {
            problems.push(msg);
        }
    };
    let matchings = enumerate_perfect_matchings(g);
    let mut by_shape: BTreeMap<Config, Vec<Occurrence>> = BTreeMap::new();
    let mut outputs = 0;

    for m in &matchings {
        let set = match run_complete(g, m0, m) {
            Ok(set) => set,
            Err(e) => {
                note(&mut problems, format!("opening {m}: {e}"));
                continue;
            }
        };
        let initial_cycles = superimpose_and_orient(m0, m).cycles;
        for it in set.items {
            outputs += 1;
            let f = &it.config;
            let cycles = f.cycles();
            let eps: Vec<bool> = cycles
                .iter()
                .map(|c| initial_cycles.iter().any(|ic| same_vertices(ic, c)))
                .collect();
            if matching_for(f, m0, &eps) != *m {
                note(&mut problems, format!("output {f} of {m} is not produced from its M^(ε)"));
            }
            for (c, &e) in cycles.iter().zip(&eps) {
                if e && f.target(c[0]) != m0.partner(c[0]) {
                    note(&mut problems, format!("kept cycle {c:?} of {f} is not canonically oriented"));
                }
            }
            let flips = eps.iter().filter(|&&e| e).count();
            let expected = signed(parity_sign(flips), half_forest_weight(g, f, m0));
            if it.weight != expected {
                note(&mut problems, format!("output {f} of {m} has weight {} instead of {}",
                    rational::format(&it.weight), rational::format(&expected)));
            }
            if !rcrsf_condition_c(f, m0) {
                note(&mut problems, format!("output {f} of {m} fails Condition (C)"));
            }
            match complete_reverse(f, &eps) {
                Ok(paths) if paths == it.provenance => {}
                Ok(paths) => note(&mut problems, format!(
                    "reverse of {f} gives {paths:?}, opening used {:?}", it.provenance)),
                Err(e) => note(&mut problems, format!("reverse of {f}: {e}")),
            }
            by_shape
                .entry(canonical_shape(f, m0))
                .or_default()
                .push(Occurrence { eps, weight: it.weight });
        }
    }

    let mut family: Vec<Config> = enumerate_rcrsf(g, m0)
        .into_iter()
        .filter(|f| rcrsf_condition_c(f, m0))
        .map(|f| canonical_shape(&f, m0))
        .collect();
    family.sort();
    family.dedup();
    let seen: Vec<&Config> = by_shape.keys().collect();
    if seen != family.iter().collect::<Vec<_>>() {
        note(&mut problems, format!(
            "opening outputs cover {} shapes, Condition (C) selects {}", seen.len(), family.len()));
    }

    let mut residue = Rational::zero();
    let mut forest_sum = Rational::zero();
    let mut forest_outputs = Vec::new();
    for (shape, occ) in &by_shape {
        let k = shape.cycles().len();
        let mut eps_seen: Vec<&Vec<bool>> = occ.iter().map(|o| &o.eps).collect();
        eps_seen.sort();
        eps_seen.dedup();
        if occ.len() != 1 << k || eps_seen.len() != occ.len() {
            note(&mut problems, format!("shape {shape} occurs {} times, expected {}", occ.len(), 1 << k));
        }
        let sum: Rational = occ.iter().map(|o| &o.weight).sum();
        if k == 0 {
            forest_sum += &sum;
            forest_outputs.push((shape.clone(), sum));
        } else {
            if !sum.is_zero() {
                note(&mut problems, format!("unicycle shape {shape} leaves {}", rational::format(&sum)));
            }
            residue += sum;
        }
    }

    let mut expected_forests = half_forests(g, m0);
    expected_forests.sort_by(|a, b| a.0.cmp(&b.0));
    let half_forest_sum: Rational = expected_forests.iter().map(|(_, w)| w).sum();
    if forest_outputs != expected_forests {
        note(&mut problems, "forest outputs differ from the half-forests of the reference matching".into());
    }
    if forest_sum != half_forest_sum {
        note(&mut problems, "forest output sum differs from the half-forest sum".into());
    }

    CorrespondenceReport {
        m0: m0.to_string(),
        matchings: matchings.len(),
        outputs,
        shapes: family.len(),
        forests: expected_forests.len(),
        unicycle_residue: rational::format(&residue),
        forest_sum: rational::format(&forest_sum),
        half_forest_sum: rational::format(&half_forest_sum),
        problems,
    }
}

fn same_vertices(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

#[cfg(test)]
mod tests;
