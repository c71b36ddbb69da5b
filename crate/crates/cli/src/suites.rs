use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use halftree::forests::{determinant_via_forests, half_forests};
use halftree::graphmodel::{
    enumerate_perfect_matchings, matching_weight, pfaffian_via_matchings, superimpose_and_orient, PerfectMatching,
    RootedGraph,
};
use halftree::linebundle::{cycle_cover_expansion, det_via_crsf, twist, Connection};
use halftree::opening::{open_step1, run_complete, verify_correspondence};
use halftree::rational::{self, Rational};
use halftree::skewmatrix::{determinant, SkewMatrix};

use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pfaffian,
    Halftree,
    DetForest,
    Opening,
    Linebundle,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Pfaffian => "pfaffian",
            Suite::Halftree => "halftree",
            Suite::DetForest => "det-forest",
            Suite::Opening => "opening",
            Suite::Linebundle => "linebundle",
            Suite::All => "all",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// What the suites run on.
pub struct Instance {
    pub matrix: SkewMatrix,
    pub graph: RootedGraph,
    pub references: Vec<PerfectMatching>,
    pub connection: Option<Connection>,
    pub connection_seed: u64,
}

pub fn run(suite: Suite, inst: &Instance) -> Vec<Check> {
    let mut checks = vec![zero_sum_check(&inst.matrix)];
    if suite.includes(Suite::Pfaffian) {
        checks.extend(pfaffian(inst));
    }
    if suite.includes(Suite::Halftree) {
        checks.extend(halftree(inst));
    }
    if suite.includes(Suite::DetForest) {
        checks.extend(det_forest(inst));
    }
    if suite.includes(Suite::Opening) {
        checks.extend(opening(inst));
    }
    if suite.includes(Suite::Linebundle) {
        checks.extend(linebundle(inst));
    }
    checks
}

fn zero_sum_check(a: &SkewMatrix) -> Check {
    let report = a.validate(true);
    Check::outcome(
        "instance.zero_sum",
        report.row_sums.is_empty(),
        json!({ "nonzero_row_sums": report.row_sums.iter()
            .map(|(i, s)| json!({ "row": i, "sum": rational::format(s) }))
            .collect::<Vec<_>>() }),
    )
}

fn pf(inst: &Instance) -> Rational {
    inst.matrix.core_block().pfaffian_by_elimination()
}

fn pfaffian(inst: &Instance) -> Vec<Check> {
    let core = inst.matrix.core_block();
    let by_elim = core.pfaffian_by_elimination();
    let mut checks = vec![
        Check::compare("pfaffian.oracles", &core.pfaffian_by_pairings(), &by_elim, Value::Null),
        Check::compare("pfaffian.det_is_square", &core.determinant(), &(&by_elim * &by_elim), Value::Null),
    ];
    let per_reference: Vec<Check> = inst
        .references
        .par_iter()
        .map(|m0| {
            Check::compare(
                "pfaffian.matching_sum",
                &pfaffian_via_matchings(&inst.graph, m0),
                &by_elim,
                json!({ "m0": m0.to_string() }),
            )
        })
        .collect();
    checks.extend(per_reference);
    checks
}

fn halftree(inst: &Instance) -> Vec<Check> {
    let target = pf(inst);
    let sums: Vec<(Rational, usize)> = inst
        .references
        .par_iter()
        .map(|m0| {
            let hf = half_forests(&inst.graph, m0);
            (hf.iter().map(|(_, w)| w).sum(), hf.len())
        })
        .collect();
    let mut checks: Vec<Check> = inst
        .references
        .iter()
        .zip(&sums)
        .map(|(m0, (sum, count))| {
            Check::compare(
                "halftree.half_forest_sum",
                sum,
                &target,
                json!({ "m0": m0.to_string(), "surviving": count }),
            )
        })
        .collect();
    let mut values: Vec<&Rational> = sums.iter().map(|(s, _)| s).collect();
    values.sort();
    values.dedup();
    checks.push(Check::outcome(
        "halftree.reference_independence",
        values.len() <= 1,
        json!({ "distinct_values": values.iter().map(|v| rational::format(v)).collect::<Vec<_>>() }),
    ));
    checks
}

fn det_forest(inst: &Instance) -> Vec<Check> {
    let det = inst.matrix.core_block().determinant();
    let mut checks = vec![Check::compare(
        "det_forest.cycle_covers",
        &cycle_cover_expansion(&inst.matrix.core_block()),
        &det,
        Value::Null,
    )];
    match determinant_via_forests(&inst.graph) {
        Ok(e) => {
            checks.push(Check::compare(
                "det_forest.by_matchings",
                &e.by_matchings,
                &det,
                json!({ "forests": e.forests }),
            ));
            checks.push(Check::compare("det_forest.intrinsic", &e.intrinsic, &det, json!({ "forests": e.forests })));
        }
        Err(err) => checks.push(Check::failure("det_forest.families", json!({ "error": err.to_string() }))),
    }
    checks
}

fn opening(inst: &Instance) -> Vec<Check> {
    let g = &inst.graph;
    let matchings = enumerate_perfect_matchings(g);
    let per_reference: Vec<Vec<Check>> = inst
        .references
        .par_iter()
        .map(|m0| {
            let mut failures = Vec::new();
            for m in &matchings {
                let s = superimpose_and_orient(m0, m);
                let w = matching_weight(&s, g);
                let first = open_step1(g, &s).map(|set| set.total());
                let complete = run_complete(g, m0, m).map(|set| set.total());
                for (stage, got) in [("first_round", first), ("complete", complete)] {
                    match got {
                        Ok(total) if total == w => {}
                        Ok(total) => failures.push(json!({
                            "m": m.to_string(), "stage": stage,
                            "total": rational::format(&total), "matching_weight": rational::format(&w),
                        })),
                        Err(e) => failures.push(json!({ "m": m.to_string(), "stage": stage, "error": e.to_string() })),
                    }
                }
            }
            let preservation = Check::outcome(
                "opening.weight_preservation",
                failures.is_empty(),
                if failures.is_empty() {
                    json!({ "m0": m0.to_string(), "matchings": matchings.len() })
                } else {
                    json!({ "m0": m0.to_string(), "failures": failures })
                },
            );
            let report = verify_correspondence(g, m0);
            let correspondence = Check::outcome(
                "opening.correspondence",
                report.passed(),
                serde_json::to_value(&report).expect("report serializes"),
            );
            vec![preservation, correspondence]
        })
        .collect();
    per_reference.into_iter().flatten().collect()
}

fn linebundle(inst: &Instance) -> Vec<Check> {
    let a = &inst.matrix;
    if a.size() % 2 == 1 {
        return vec![Check::skipped(
            "linebundle",
            "the identity needs an even number of vertices; n + r is odd",
        )];
    }
    let closed = SkewMatrix::from_rows(a.rows().to_vec()).expect("square");
    let g = RootedGraph::from_matrix(&closed);
    let c = inst.connection.clone().unwrap_or_else(|| Connection::random(&g, inst.connection_seed, 5));
    let context = json!({ "connection": c.to_text() });
    let twisted = match twist(&closed, &c).and_then(|rows| determinant(&rows)) {
        Ok(d) => d,
        Err(e) => return vec![Check::failure("linebundle.twisted_determinant", json!({ "error": e.to_string() }))],
    };
    let mut checks = vec![match det_via_crsf(&closed, &c) {
        Ok(sum) => Check::compare("linebundle.twisted_determinant", &twisted, &sum, context),
        Err(e) => Check::failure("linebundle.twisted_determinant", json!({ "error": e.to_string() })),
    }];
    let trivial = Connection::trivial(&g);
    checks.push(match det_via_crsf(&closed, &trivial) {
        Ok(sum) => Check::compare("linebundle.trivial_connection", &sum, &Rational::from_integer(0.into()), Value::Null),
        Err(e) => Check::failure("linebundle.trivial_connection", json!({ "error": e.to_string() })),
    });
    checks
}
