//! Mumford's rational intersection theory on a resolution dual graph.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::linalg;
use crate::rational::Q;
use crate::ultrametric::{FiniteMetric, Law};

/// An arrow: the strict transform of a branch meeting one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub component: usize,
}

/// Dual graph of a resolution, decorated with self-intersections, genera and
/// arrows. Component indices follow the sorted order of [`Multigraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    graph: Multigraph,
    self_intersection: Vec<i64>,
    genus: Vec<u32>,
    arrows: Vec<Arrow>,
}

/// A component as given to [`ResolutionGraph::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub self_intersection: i64,
    pub genus: u32,
}

impl Component {
    pub fn new(id: &str, self_intersection: i64) -> Self {
        Component {
            id: id.into(),
            self_intersection,
            genus: 0,
        }
    }
}

impl ResolutionGraph {
    /// Validates ids, edges, arrows and connectedness. The sign of the
    /// self-intersections is left to [`is_negative_definite`].
    pub fn new(
        components: Vec<Component>,
        edges: Vec<(String, String, u32)>,
        arrows: Vec<(String, String)>,
    ) -> Result<Self> {
        let graph = Multigraph::new(components.iter().map(|c| c.id.clone()).collect(), edges)?;
        graph.check_connected()?;
        let mut self_intersection = vec![0; graph.len()];
        let mut genus = vec![0; graph.len()];
        for c in &components {
            let i = graph.require(&c.id)?;
            self_intersection[i] = c.self_intersection;
            genus[i] = c.genus;
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (id, comp) in arrows {
            if out.iter().any(|a: &Arrow| a.id == id) || graph.index_of(&id).is_some() {
                return Err(Error::DuplicateId(id));
            }
            let component = graph.require(&comp)?;
            out.push(Arrow { id, component });
        }
        Ok(ResolutionGraph {
            graph,
            self_intersection,
            genus,
            arrows: out,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn components(&self) -> &[String] {
        self.graph.vertices()
    }

    pub fn self_intersection(&self, u: usize) -> i64 {
        self.self_intersection[u]
    }

    pub fn genus(&self, u: usize) -> u32 {
        self.genus[u]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &str) -> Result<&Arrow> {
        self.arrows
            .iter()
            .find(|a| a.id == id)
            .ok_or_else(|| Error::UnknownBranch(id.into()))
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        intersection_matrix(self)
    }

    /// Brackets of all pairs of components; fails if the intersection form is
    /// not negative definite.
    pub fn brackets(&self) -> Result<BracketMatrix> {
        bracket_matrix(&self.intersection_matrix())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub ids: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    fn big(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn as_rational(&self) -> Vec<Vec<Q>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
            .collect()
    }
}

/// `M_uu = E_u²` and `M_uv` = number of intersection points of `E_u`, `E_v`.
pub fn intersection_matrix(rg: &ResolutionGraph) -> IntersectionMatrix {
    let n = rg.graph.len();
    let mut entries = vec![vec![0i64; n]; n];
    for (u, row) in entries.iter_mut().enumerate() {
        row[u] = rg.self_intersection[u];
    }
    for &(a, b, m) in rg.graph.edges() {
        entries[a][b] = i64::from(m);
        entries[b][a] = i64::from(m);
    }
    IntersectionMatrix {
        ids: rg.components().to_vec(),
        entries,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definiteness {
    /// All leading principal minors, each of sign `(-1)^k`.
    Negative(Vec<BigInt>),
    /// First `k` (1-based) whose minor has the wrong sign.
    FailsAt(usize),
}

pub fn is_negative_definite(m: &IntersectionMatrix) -> Definiteness {
    let minors = linalg::leading_minors(&m.big());
    for (i, d) in minors.iter().enumerate() {
        let want_negative = i % 2 == 0;
        let ok = if want_negative {
            d.is_negative()
        } else {
            d.is_positive()
        };
        if !ok {
            return Definiteness::FailsAt(i + 1);
        }
    }
    Definiteness::Negative(minors)
}

/// The symmetric matrix `⟨u,v⟩ = -(M⁻¹)_uv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketMatrix {
    pub ids: Vec<String>,
    pub values: Vec<Vec<Q>>,
}

impl BracketMatrix {
    pub fn get(&self, u: usize, v: usize) -> &Q {
        &self.values[u][v]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

pub fn bracket_matrix(m: &IntersectionMatrix) -> Result<BracketMatrix> {
    if let Definiteness::FailsAt(k) = is_negative_definite(m) {
        return Err(Error::NotNegativeDefinite(k));
    }
    let inv = linalg::inverse(&m.big()).ok_or_else(|| Error::Internal("zero pivot after definiteness check".into()))?;
    let values: Vec<Vec<Q>> = inv.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
    let check = linalg::mat_mul(&values, &m.as_rational());
    for (i, row) in check.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { -Q::one() } else { Q::zero() };
            if *x != want {
                return Err(Error::Internal("bracket matrix fails C·M = -I".into()));
            }
        }
    }
    Ok(BracketMatrix {
        ids: m.ids.clone(),
        values,
    })
}

/// `π*D` for a divisor `D = Σ c_A A` supported on arrows: the strict part
/// plus the exceptional part, with `(π*D)·E_u = 0` for every component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalTransform {
    pub exceptional: Vec<Q>,
    pub strict: Vec<(String, Q)>,
}

pub fn total_transform(rg: &ResolutionGraph, divisor: &[(String, Q)]) -> Result<TotalTransform> {
    let br = rg.brackets()?;
    total_transform_with(rg, &br, divisor)
}

fn total_transform_with(rg: &ResolutionGraph, br: &BracketMatrix, divisor: &[(String, Q)]) -> Result<TotalTransform> {
    let n = rg.graph.len();
    let mut s = vec![Q::zero(); n];
    for (id, c) in divisor {
        if !c.is_positive() {
            return Err(Error::Parse(format!("multiplicity of {id} must be positive")));
        }
        s[rg.arrow(id)?.component] += c;
    }
    let x: Vec<Q> = (0..n)
        .map(|u| (0..n).fold(Q::zero(), |acc, v| acc + br.get(u, v) * &s[v]))
        .collect();
    let m = rg.intersection_matrix().as_rational();
    for u in 0..n {
        let dot = (0..n).fold(s[u].clone(), |acc, v| acc + &m[u][v] * &x[v]);
        if !dot.is_zero() {
            return Err(Error::Internal(format!("(π*D)·E_{} = {dot}", rg.components()[u])));
        }
    }
    Ok(TotalTransform {
        exceptional: x,
        strict: divisor.to_vec(),
    })
}

/// Mumford's intersection number `A·B = ⟨a,b⟩` of two distinct branches.
pub fn mumford_intersection(rg: &ResolutionGraph, a: &str, b: &str) -> Result<Q> {
    let br = rg.brackets()?;
    intersection_with(rg, &br, a, b)
}

pub(crate) fn intersection_with(rg: &ResolutionGraph, br: &BracketMatrix, a: &str, b: &str) -> Result<Q> {
    if a == b {
        return Err(Error::SameBranch(a.into(), b.into()));
    }
    let (ca, cb) = (rg.arrow(a)?.component, rg.arrow(b)?.component);
    Ok(br.get(ca, cb).clone())
}

/// `π*A · π*B` expanded from the total transforms:
/// `A·(π*B)_ex + (π*A)_ex·B + (π*A)_ex·(π*B)_ex`, the strict parts being disjoint.
pub fn intersection_via_transforms(rg: &ResolutionGraph, a: &str, b: &str) -> Result<Q> {
    let br = rg.brackets()?;
    via_transforms_with(rg, &br, &rg.intersection_matrix().as_rational(), a, b)
}

pub(crate) fn via_transforms_with(
    rg: &ResolutionGraph,
    br: &BracketMatrix,
    m: &[Vec<Q>],
    a: &str,
    b: &str,
) -> Result<Q> {
    if a == b {
        return Err(Error::SameBranch(a.into(), b.into()));
    }
    let ta = total_transform_with(rg, br, &[(a.to_string(), Q::one())])?;
    let tb = total_transform_with(rg, br, &[(b.to_string(), Q::one())])?;
    let (ca, cb) = (rg.arrow(a)?.component, rg.arrow(b)?.component);
    let ex = m.iter().zip(&ta.exceptional).fold(Q::zero(), |acc, (row, xu)| {
        row.iter()
            .zip(&tb.exceptional)
            .fold(acc, |acc, (muv, yv)| acc + xu * muv * yv)
    });
    Ok(&tb.exceptional[ca] + &ta.exceptional[cb] + ex)
}

/// `q(u,v) = ⟨u,v⟩² / (⟨u,u⟩⟨v,v⟩)`, so that `ρ(u,v) = -log q(u,v)`.
pub fn angular_ratio(br: &BracketMatrix, u: usize, v: usize) -> Q {
    let uv = br.get(u, v);
    uv * uv / (br.get(u, u) * br.get(v, v))
}

/// Display value of the angular distance.
pub fn rho(q: &Q) -> f64 {
    Law::Multiplicative.value_as_distance(q)
}

/// Angular distance on all components, stored multiplicatively.
pub fn angular_metric(rg: &ResolutionGraph) -> Result<FiniteMetric> {
    let br = rg.brackets()?;
    FiniteMetric::from_fn(Law::Multiplicative, rg.components().to_vec(), |u, v| {
        angular_ratio(&br, u, v)
    })
}

/// Angular distance between the components carrying the given arrows,
/// indexed by arrow id. The arrows must sit on pairwise distinct components.
pub fn arrow_angular_metric(rg: &ResolutionGraph, arrows: &[&str]) -> Result<FiniteMetric> {
    let comps = arrows
        .iter()
        .map(|a| rg.arrow(a).map(|x| x.component))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if comps[i] == comps[j] {
                return Err(Error::NonInjectiveArrows(
                    arrows[i].into(),
                    arrows[j].into(),
                    rg.components()[comps[i]].clone(),
                ));
            }
        }
    }
    let br = rg.brackets()?;
    FiniteMetric::from_fn(
        Law::Multiplicative,
        arrows.iter().map(|s| s.to_string()).collect(),
        |i, j| angular_ratio(&br, comps[i], comps[j]),
    )
}
