//! JSON input and output formats. Rationals travel as `"p/q"` strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::mumford::{Component, ResolutionGraph};
use crate::puiseux::{MonomialBranch, PuiseuxBranch};
use crate::rational::{fmt_q, parse_q, Q};
use crate::ultrametric::{FiniteMetric, Law};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricJson {
    pub law: Law,
    pub points: Vec<String>,
    pub values: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub a: String,
    pub b: String,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: String,
    pub self_intersection: Option<i64>,
    #[serde(default)]
    pub genus: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub attached_to: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionJson {
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub arrows: Vec<ArrowJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub n: u64,
    pub m: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchJson {
    pub id: String,
    pub terms: Option<Vec<TermJson>>,
    pub monomial: Option<MonomialJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchesJson {
    pub branches: Vec<BranchJson>,
}

/// The kind of object a JSON document describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    Metric,
    Graph,
    Resolution,
    Branches,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Guesses the document kind from its top-level keys.
pub fn detect(text: &str) -> Result<DocKind> {
    let v: Value = parse_json(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    if obj.contains_key("law") {
        Ok(DocKind::Metric)
    } else if obj.contains_key("branches") {
        Ok(DocKind::Branches)
    } else if obj.contains_key("arrows") || obj.get("vertices").and_then(|x| x.get(0)).is_some_and(Value::is_object) {
        Ok(DocKind::Resolution)
    } else if obj.contains_key("vertices") {
        Ok(DocKind::Graph)
    } else {
        Err(Error::Parse("unrecognized document".into()))
    }
}

pub fn parse_metric(text: &str) -> Result<FiniteMetric> {
    let j: MetricJson = parse_json(text)?;
    let values = j
        .values
        .iter()
        .map(|row| row.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    FiniteMetric::new(j.law, j.points, values)
}

pub fn metric_to_json(m: &FiniteMetric) -> Value {
    json!({
        "law": m.law(),
        "points": m.points(),
        "values": matrix_to_json(m.values()),
    })
}

pub fn matrix_to_json(rows: &[Vec<Q>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_q(x))).collect()))
            .collect(),
    )
}

fn edges(list: Vec<EdgeJson>) -> Vec<(String, String, u32)> {
    list.into_iter().map(|e| (e.a, e.b, e.multiplicity)).collect()
}

/// A plain graph, or the dual graph of a resolution document.
pub fn parse_graph(text: &str) -> Result<Multigraph> {
    if detect(text)? == DocKind::Resolution {
        let j: ResolutionJson = parse_json(text)?;
        return Multigraph::new(j.vertices.into_iter().map(|v| v.id).collect(), edges(j.edges));
    }
    let j: GraphJson = parse_json(text)?;
    Multigraph::new(j.vertices, edges(j.edges))
}

pub fn parse_resolution(text: &str) -> Result<ResolutionGraph> {
    let j: ResolutionJson = parse_json(text)?;
    let components = j
        .vertices
        .into_iter()
        .map(|v| {
            let e2 = v
                .self_intersection
                .ok_or_else(|| Error::MissingSelfIntersection(v.id.clone()))?;
            Ok(Component {
                id: v.id,
                self_intersection: e2,
                genus: v.genus,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows = j.arrows.into_iter().map(|a| (a.id, a.attached_to)).collect();
    ResolutionGraph::new(components, edges(j.edges), arrows)
}

pub fn parse_branches(text: &str) -> Result<Vec<PuiseuxBranch>> {
    let j: BranchesJson = parse_json(text)?;
    j.branches
        .into_iter()
        .map(|b| match (b.terms, b.monomial) {
            (Some(terms), None) => {
                let terms = terms
                    .iter()
                    .map(|t| Ok((parse_q(&t.exp)?, parse_q(&t.coeff)?)))
                    .collect::<Result<Vec<_>>>()?;
                PuiseuxBranch::new(&b.id, terms)
            }
            (None, Some(m)) => Ok(MonomialBranch::new(m.n, m.m)?.to_puiseux(&b.id)),
            _ => Err(Error::Parse(format!(
                "branch {:?} needs exactly one of \"terms\" and \"monomial\"",
                b.id
            ))),
        })
        .collect()
}
