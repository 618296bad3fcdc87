//! Tree hulls of metrics satisfying the four-point condition.
//!
//! Edge lengths are kept *doubled* in the length group of the law (see
//! [`Law::to_length`]): twice the length for the additive law, and
//! `exp(2·length)` for the multiplicative one. Gromov products then stay
//! rational in both cases.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::tree::UTree;

use super::metric::{check_four_point, FiniteMetric, Law, Verdict};
use super::rooted::RootedTree;

/// An unrooted tree whose marked vertices carry point labels, with doubled
/// exact edge lengths.
#[derive(Debug, Clone)]
pub struct XTree {
    law: Law,
    tree: UTree,
    lengths: BTreeMap<(usize, usize), Q>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl XTree {
    pub fn law(&self) -> Law {
        self.law
    }

    pub fn tree(&self) -> &UTree {
        &self.tree
    }

    /// Doubled length of the edge `{a, b}`.
    pub fn doubled_length(&self, a: usize, b: usize) -> &Q {
        &self.lengths[&key(a, b)]
    }

    /// Length of the edge `{a, b}` as a real number.
    pub fn display_length(&self, a: usize, b: usize) -> f64 {
        self.law.length_as_f64(self.doubled_length(a, b)) / 2.0
    }

    /// Edges `(a, b, doubled length)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, Q)> {
        self.lengths.iter().map(|(&(a, b), l)| (a, b, l.clone())).collect()
    }

    pub fn marked(&self) -> Vec<usize> {
        (0..self.tree.len()).filter(|&v| self.tree.label(v).is_some()).collect()
    }

    /// Doubled length of the path between two vertices.
    pub fn path_length(&self, a: usize, b: usize) -> Q {
        let path = self.tree.path(a, b);
        path.windows(2).fold(self.law.identity(), |acc, w| {
            self.law.add_len(&acc, self.doubled_length(w[0], w[1]))
        })
    }

    /// Vertex name: its label, or the sorted set of marked points separated
    /// from the first marked point by this vertex.
    pub fn node_name(&self, v: usize) -> String {
        if let Some(l) = self.tree.label(v) {
            return l.to_string();
        }
        let first = self.marked()[0];
        let mut names: Vec<&str> = self
            .marked()
            .into_iter()
            .filter(|&m| m != first && self.tree.path(first, m).contains(&v))
            .filter_map(|m| self.tree.label(m))
            .collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    /// Sorted multiset of `(marked, valency)` over all vertices. Two X-trees
    /// on four points have the same shape iff their signatures agree.
    pub fn shape_signature(&self) -> Vec<(bool, usize)> {
        let mut sig: Vec<(bool, usize)> = (0..self.tree.len())
            .map(|v| (self.tree.label(v).is_some(), self.tree.valency(v)))
            .collect();
        sig.sort_unstable();
        sig
    }

    /// True iff every vertex of valency at most 2 is marked.
    pub fn is_x_tree(&self) -> bool {
        self.tree.is_tree() && (0..self.tree.len()).all(|v| self.tree.valency(v) > 2 || self.tree.label(v).is_some())
    }

    /// Exact check that the path metric on marked vertices is `m`.
    pub fn reproduces(&self, m: &FiniteMetric) -> bool {
        if m.law() != self.law || m.len() != self.marked().len() {
            return false;
        }
        let nodes: Vec<Option<usize>> = m.points().iter().map(|p| self.tree.find(p)).collect();
        if nodes.iter().any(Option::is_none) {
            return false;
        }
        (0..m.len()).all(|i| {
            (i + 1..m.len()).all(|j| {
                let d = m.length(i, j);
                self.path_length(nodes[i].unwrap(), nodes[j].unwrap()) == self.law.add_len(&d, &d)
            })
        })
    }

    pub fn rooted_at(&self, label: &str) -> Result<RootedTree> {
        Ok(self.tree.rooted_at(self.tree.require(label)?))
    }
}

/// Builds the tree hull of `m` by inserting the points one at a time.
///
/// With base point `z`, a new point `a` leaves the current tree at doubled
/// distance `max_b (d(a,z) + d(z,b) - d(a,b))` from `z` along `[z, b]`.
pub fn tree_hull(m: &FiniteMetric) -> Result<XTree> {
    if let Verdict::Witness((a, b, c, d)) = check_four_point(m)? {
        return Err(Error::FourPointViolation(a, b, c, d));
    }
    let law = m.law();
    let mut x = XTree {
        law,
        tree: UTree::new(),
        lengths: BTreeMap::new(),
    };
    if m.is_empty() {
        return Ok(x);
    }
    let s = |i: usize, j: usize| m.length(i, j);
    let dbl = |q: &Q| law.add_len(q, q);
    let mut node_of = vec![x.tree.add_node(Some(m.points()[0].clone()))];
    let z = 0;
    for a in 1..m.len() {
        let mut best: Option<(Q, usize)> = None;
        for b in 0..a {
            let h = law.sub_len(&law.add_len(&s(a, z), &s(z, b)), &s(a, b));
            if best.as_ref().is_none_or(|(p, _)| h > *p) {
                best = Some((h, b));
            }
        }
        let (pos, b) = best.unwrap();
        let pendant = law.sub_len(&dbl(&s(a, z)), &pos);
        let identity = law.identity();
        if pendant < identity || pos < identity {
            return Err(Error::Internal(format!(
                "negative Gromov product inserting {}",
                m.points()[a]
            )));
        }
        let attach = locate(&mut x, node_of[z], node_of[b], &pos)?;
        let label = Some(m.points()[a].clone());
        if pendant == identity {
            if x.tree.label(attach).is_some() {
                return Err(Error::Internal(format!(
                    "{} coincides with a marked vertex",
                    m.points()[a]
                )));
            }
            x.tree.set_label(attach, label);
            node_of.push(attach);
        } else {
            let v = x.tree.add_node(label);
            x.tree.add_edge(attach, v);
            x.lengths.insert(key(attach, v), pendant);
            node_of.push(v);
        }
    }
    if !x.reproduces(m) || !x.is_x_tree() {
        return Err(Error::Internal("tree hull does not reproduce its metric".into()));
    }
    Ok(x)
}

/// Finds or creates the vertex at doubled distance `pos` from `from` along
/// the segment `[from, to]`.
fn locate(x: &mut XTree, from: usize, to: usize, pos: &Q) -> Result<usize> {
    let law = x.law;
    let path = x.tree.path(from, to);
    let mut cum = law.identity();
    if *pos == cum {
        return Ok(from);
    }
    for w in path.windows(2) {
        let (u, v) = (w[0], w[1]);
        let len = x.doubled_length(u, v).clone();
        let next = law.add_len(&cum, &len);
        if *pos == next {
            return Ok(v);
        }
        if *pos < next {
            let mid = x.tree.add_node(None);
            x.tree.remove_edge(u, v);
            x.lengths.remove(&key(u, v));
            x.tree.add_edge(u, mid);
            x.tree.add_edge(mid, v);
            x.lengths.insert(key(u, mid), law.sub_len(pos, &cum));
            x.lengths.insert(key(mid, v), law.sub_len(&next, pos));
            return Ok(mid);
        }
        cum = next;
    }
    Err(Error::Internal("attachment point beyond the end of its segment".into()))
}

/// Names of the distinct 4-point shapes among the given hulls.
pub fn distinct_shapes<'a>(hulls: impl IntoIterator<Item = &'a XTree>) -> BTreeSet<Vec<(bool, usize)>> {
    hulls.into_iter().map(XTree::shape_signature).collect()
}
