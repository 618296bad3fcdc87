//! Rooted leaf-labeled trees, depth functions and their correspondence with
//! hierarchies and ultrametrics.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::hierarchy::{balls_hierarchy, Depth, Hierarchy, OMEGA};
use super::metric::{FiniteMetric, Law};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedNode {
    pub label: Option<String>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: Option<Depth>,
}

/// A rooted tree; node `0` is the root. Leaves are the non-root nodes
/// without children. Depth decorations are optional and interpreted under
/// the tree's [`Law`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    nodes: Vec<RootedNode>,
    law: Law,
}

impl RootedTree {
    pub fn new(root_label: Option<String>) -> Self {
        Self::with_law(root_label, Law::Additive)
    }

    pub fn with_law(root_label: Option<String>, law: Law) -> Self {
        RootedTree {
            nodes: vec![RootedNode {
                label: root_label,
                parent: None,
                children: vec![],
                depth: None,
            }],
            law,
        }
    }

    pub fn add_child(&mut self, parent: usize, label: Option<String>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(RootedNode {
            label,
            parent: Some(parent),
            children: vec![],
            depth: None,
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn set_depth(&mut self, node: usize, depth: Depth) {
        self.nodes[node].depth = Some(depth);
    }

    pub fn law(&self) -> Law {
        self.law
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &RootedNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[RootedNode] {
        &self.nodes
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.nodes[i].label.as_deref()
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.nodes[i].children
    }

    pub fn valency(&self, i: usize) -> usize {
        self.nodes[i].children.len() + usize::from(self.nodes[i].parent.is_some())
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        i != 0 && self.nodes[i].children.is_empty()
    }

    /// Leaves in node order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    pub fn leaf_labels(&self) -> Vec<String> {
        self.leaves()
            .into_iter()
            .map(|i| self.label(i).unwrap_or("").to_string())
            .collect()
    }

    /// Leaf nodes `a` with `p ≼ a`.
    pub fn leaves_below(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![p];
        while let Some(v) = stack.pop() {
            if self.is_leaf(v) {
                out.push(v);
            }
            stack.extend(self.nodes[v].children.iter().rev());
        }
        out.sort_unstable();
        out
    }

    fn ancestors(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = self.nodes[v].parent {
            out.push(p);
            v = p;
        }
        out
    }

    /// Infimum of two nodes for the root order: `[r,a] ∩ [r,b] = [r, a∧b]`.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let up: BTreeSet<usize> = self.ancestors(a).into_iter().collect();
        self.ancestors(b).into_iter().find(|v| up.contains(v)).unwrap_or(0)
    }

    /// Human-readable node name: its label, or the sorted set of leaves below it.
    pub fn node_name(&self, i: usize) -> String {
        if let Some(l) = self.label(i) {
            return l.to_string();
        }
        let mut names: Vec<&str> = self.leaves_below(i).into_iter().filter_map(|l| self.label(l)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    /// Checks that the root has valency 1, that no vertex has valency 2 and
    /// that leaves carry distinct labels.
    pub fn validate_hierarchical(&self) -> Result<()> {
        if self.nodes[0].children.len() != 1 {
            return Err(Error::InvalidTree(format!(
                "root must have valency 1, found {}",
                self.nodes[0].children.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for i in 1..self.len() {
            if self.valency(i) == 2 {
                return Err(Error::InvalidTree(format!(
                    "vertex {} has valency 2",
                    self.node_name(i)
                )));
            }
            if self.is_leaf(i) {
                let l = self
                    .label(i)
                    .ok_or_else(|| Error::InvalidTree(format!("leaf #{i} is unlabeled")))?;
                if !seen.insert(l) {
                    return Err(Error::DuplicateId(l.to_string()));
                }
            }
        }
        Ok(())
    }

    /// Checks the depth-function axioms: `∞` at the root, the law's identity
    /// on leaves and strictly decreasing from the root towards the leaves.
    pub fn validate_depth(&self) -> Result<()> {
        let law = self.law;
        let depth = |i: usize| {
            self.nodes[i]
                .depth
                .as_ref()
                .ok_or_else(|| Error::InvalidTree(format!("vertex {} has no depth", self.node_name(i))))
        };
        if *depth(0)? != Depth::Infinite {
            return Err(Error::InvalidTree("root depth must be infinite".into()));
        }
        for i in 1..self.len() {
            let d = depth(i)?;
            match d {
                Depth::Infinite => {
                    return Err(Error::InvalidTree(format!(
                        "vertex {} has infinite depth",
                        self.node_name(i)
                    )))
                }
                Depth::Finite(q) if self.is_leaf(i) && *q != law.identity() => {
                    return Err(Error::InvalidTree(format!(
                        "leaf {} must have depth {}",
                        self.node_name(i),
                        law.identity()
                    )))
                }
                _ => {}
            }
            let p = self.nodes[i].parent.unwrap();
            if d.cmp_dist(depth(p)?, law) != Ordering::Less {
                return Err(Error::DepthNotDecreasing {
                    parent: self.node_name(p),
                    child: self.node_name(i),
                });
            }
        }
        Ok(())
    }

    /// Depth as a finite value; panics on a missing or infinite depth, which
    /// validated trees exclude for non-root nodes.
    fn finite_depth(&self, i: usize) -> &crate::rational::Q {
        self.nodes[i]
            .depth
            .as_ref()
            .and_then(Depth::finite)
            .expect("finite depth")
    }
}

/// Tree of a hierarchy: its Hasse diagram for reverse inclusion, completed
/// with a root `M ∪ {ω}`. Diameters, when present, become depths.
pub fn hierarchy_to_tree(h: &Hierarchy) -> RootedTree {
    let mut t = RootedTree::with_law(Some(OMEGA.to_string()), h.law());
    let members = h.members();
    // Members are sorted by size, so the smallest strict superset is the first
    // later member containing this one.
    let parent_of: Vec<Option<usize>> = (0..members.len())
        .map(|i| (i + 1..members.len()).find(|&j| members[i].is_subset(&members[j]) && members[i] != members[j]))
        .collect();
    let mut node_of = vec![usize::MAX; members.len()];
    // Create nodes from the top down so that parents exist first; leaves end
    // up in ground order among themselves.
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(members[i].len()));
    for &i in &order {
        let parent = parent_of[i].map_or(0, |p| node_of[p]);
        let label = if members[i].len() == 1 {
            members[i].iter().next().map(|&x| h.ground()[x].clone())
        } else {
            None
        };
        node_of[i] = t.add_child(parent, label);
    }
    if let Some(ds) = h.diameters() {
        t.set_depth(0, Depth::Infinite);
        for (i, d) in ds.iter().enumerate() {
            t.set_depth(node_of[i], Depth::Finite(d.clone()));
        }
    }
    t
}

/// Hierarchy of a hierarchical tree: for every non-root vertex, the set of
/// leaves below it. Ground order is leaf order by label.
pub fn tree_to_hierarchy(t: &RootedTree) -> Result<Hierarchy> {
    t.validate_hierarchical()?;
    let mut ground: Vec<String> = t.leaf_labels();
    ground.sort();
    let index_of = |label: &str| ground.iter().position(|g| g == label).unwrap();
    let mut members = Vec::new();
    for p in 1..t.len() {
        let set: BTreeSet<usize> = t
            .leaves_below(p)
            .into_iter()
            .map(|l| index_of(t.label(l).unwrap()))
            .collect();
        members.push((set, t.node(p).depth.clone()));
    }
    let all_finite = members.iter().all(|(_, d)| matches!(d, Some(Depth::Finite(_))));
    if all_finite {
        let with = members
            .into_iter()
            .map(|(s, d)| (s, d.and_then(|d| d.finite().cloned()).unwrap()))
            .collect();
        Hierarchy::with_diameters(ground, with, t.law())
    } else {
        Hierarchy::new(ground, members.into_iter().map(|(s, _)| s).collect())
    }
}

/// The hierarchical tree of closed balls, decorated by diameters.
pub fn ultrametric_to_depth_tree(m: &FiniteMetric) -> Result<RootedTree> {
    Ok(hierarchy_to_tree(&balls_hierarchy(m)?))
}

/// The ultrametric `d(a,b) = λ(a ∧ b)` of a depth function, on the leaves
/// sorted by label.
pub fn depth_tree_to_ultrametric(t: &RootedTree) -> Result<FiniteMetric> {
    t.validate_hierarchical()?;
    t.validate_depth()?;
    let mut leaves = t.leaves();
    leaves.sort_by(|&a, &b| t.label(a).cmp(&t.label(b)));
    let points = leaves.iter().map(|&l| t.label(l).unwrap().to_string()).collect();
    FiniteMetric::from_fn(t.law(), points, |i, j| {
        t.finite_depth(t.meet(leaves[i], leaves[j])).clone()
    })
}

/// Copy of `t` without its unlabeled non-root vertices of valency 2. Depths
/// are dropped.
pub fn suppress_valency_two(t: &RootedTree) -> RootedTree {
    let mut out = RootedTree::with_law(t.label(0).map(str::to_string), t.law());
    let mut stack: Vec<(usize, usize)> = t.children(0).iter().rev().map(|&c| (c, 0)).collect();
    while let Some((mut v, parent)) = stack.pop() {
        while t.label(v).is_none() && t.children(v).len() == 1 {
            v = t.children(v)[0];
        }
        let id = out.add_child(parent, t.label(v).map(str::to_string));
        stack.extend(t.children(v).iter().rev().map(|&c| (c, id)));
    }
    out
}

/// Structural canonical form used for isomorphism tests.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Canon {
    Leaf(String),
    Node {
        label: Option<String>,
        deco: Option<String>,
        kids: Vec<Canon>,
    },
}

fn canon(t: &RootedTree, mut v: usize, suppress: bool, with_depth: bool) -> Canon {
    if suppress {
        while v != 0 && t.label(v).is_none() && t.children(v).len() == 1 {
            v = t.children(v)[0];
        }
    }
    if v != 0 && t.children(v).is_empty() {
        return Canon::Leaf(t.label(v).unwrap_or("").to_string());
    }
    let mut kids: Vec<Canon> = t
        .children(v)
        .iter()
        .map(|&c| canon(t, c, suppress, with_depth))
        .collect();
    kids.sort();
    Canon::Node {
        // the root label is not compared: roots are matched to each other
        label: if v == 0 { None } else { t.label(v).map(str::to_string) },
        deco: if with_depth {
            t.node(v).depth.as_ref().map(|d| d.to_string())
        } else {
            None
        },
        kids,
    }
}

fn check_same_leaves(t1: &RootedTree, t2: &RootedTree) -> Result<()> {
    let mut l1 = t1.leaf_labels();
    let mut l2 = t2.leaf_labels();
    l1.sort();
    l2.sort();
    if l1 != l2 {
        return Err(Error::LabelMismatch(format!(
            "{{{}}} vs {{{}}}",
            l1.join(","),
            l2.join(",")
        )));
    }
    Ok(())
}

/// Isomorphism of rooted trees with labeled leaves, after suppressing every
/// unlabeled valency-2 vertex. Children are compared as unordered multisets.
pub fn rooted_leaf_iso(t1: &RootedTree, t2: &RootedTree) -> Result<bool> {
    check_same_leaves(t1, t2)?;
    Ok(canon(t1, 0, true, false) == canon(t2, 0, true, false))
}

/// Same as [`rooted_leaf_iso`] but without suppressing valency-2 vertices.
pub fn rooted_leaf_iso_unreduced(t1: &RootedTree, t2: &RootedTree) -> Result<bool> {
    check_same_leaves(t1, t2)?;
    Ok(canon(t1, 0, false, false) == canon(t2, 0, false, false))
}

/// Isomorphism that also compares depth decorations vertex by vertex.
pub fn depth_tree_eq(t1: &RootedTree, t2: &RootedTree) -> Result<bool> {
    check_same_leaves(t1, t2)?;
    Ok(t1.law() == t2.law() && canon(t1, 0, false, true) == canon(t2, 0, false, true))
}
