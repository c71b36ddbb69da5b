use clap::ValueEnum;
use serde_json::{json, Value};

use halftree::forests::{enumerate_spanning_forests, half_forest_weight, half_forests, satisfies_condition_c};
use halftree::graphmodel::{enumerate_perfect_matchings, matching_weight, superimpose_and_orient, PerfectMatching, RootedGraph};
use halftree::hypergraph::{enumerate_3graph_trees, verify_mv_identity};
use halftree::linebundle::{crsf_condition_c, enumerate_crsf};
use halftree::opening::{enumerate_rcrsf, rcrsf_condition_c};
use halftree::rational;
use halftree::skewmatrix::SkewMatrix;
use halftree::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Matchings,
    Forests,
    #[value(name = "forests-C")]
    ForestsC,
    Rcrsf,
    Crsf,
    #[value(name = "3trees")]
    ThreeTrees,
}

impl Kind {
    pub fn needs_matrix(self) -> bool {
        self != Kind::ThreeTrees
    }

    pub fn needs_m0(self) -> bool {
        self == Kind::Rcrsf
    }
}

/// One JSON object per listed configuration.
pub fn lines(kind: Kind, a: Option<&SkewMatrix>, m0: Option<&PerfectMatching>, v: usize) -> Result<Vec<Value>> {
    let graph = a.map(RootedGraph::from_matrix);
    let fmt = rational::format;
    Ok(match kind {
        Kind::Matchings => {
            let g = graph.as_ref().expect("matrix checked by caller");
            enumerate_perfect_matchings(g)
                .into_iter()
                .map(|m| match m0 {
                    Some(m0) => json!({ "matching": m.to_string(),
                        "weight": fmt(&matching_weight(&superimpose_and_orient(m0, &m), g)) }),
                    None => json!({ "matching": m.to_string() }),
                })
                .collect()
        }
        Kind::Forests => {
            let g = graph.as_ref().expect("matrix checked by caller");
            enumerate_spanning_forests(g)
                .into_iter()
                .map(|f| json!({ "forest": f.to_string(), "condition_c": satisfies_condition_c(&f, None),
                    "weight": fmt(&g.product(&f.edges())) }))
                .collect()
        }
        Kind::ForestsC => {
            let g = graph.as_ref().expect("matrix checked by caller");
            match m0 {
                Some(m0) => half_forests(g, m0)
                    .into_iter()
                    .map(|(f, w)| json!({ "forest": f.to_string(), "weight": fmt(&w) }))
                    .collect(),
                None => enumerate_spanning_forests(g)
                    .into_iter()
                    .filter(|f| satisfies_condition_c(f, None))
                    .map(|f| json!({ "forest": f.to_string(), "weight": fmt(&g.product(&f.edges())) }))
                    .collect(),
            }
        }
        Kind::Rcrsf => {
            let g = graph.as_ref().expect("matrix checked by caller");
            let m0 = m0.expect("m0 checked by caller");
            enumerate_rcrsf(g, m0)
                .into_iter()
                .map(|f| json!({ "config": f.to_string(), "cycles": f.cycles().len(),
                    "condition_c": rcrsf_condition_c(&f, m0), "weight": fmt(&half_forest_weight(g, &f, m0)) }))
                .collect()
        }
        Kind::Crsf => {
            let a = a.expect("matrix checked by caller");
            let closed = SkewMatrix::from_rows(a.rows().to_vec())?;
            let g = RootedGraph::from_matrix(&closed);
            enumerate_crsf(&g)
                .into_iter()
                .map(|f| json!({ "config": f.to_string(), "cycles": f.cycles().len(),
                    "condition_c": crsf_condition_c(&f) }))
                .collect()
        }
        Kind::ThreeTrees => {
            let report = verify_mv_identity(v)?;
            enumerate_3graph_trees(v)?
                .into_iter()
                .map(|t| json!({ "tree": t.to_string(), "sign": report.sign_of(&t) }))
                .collect()
        }
    })
}
