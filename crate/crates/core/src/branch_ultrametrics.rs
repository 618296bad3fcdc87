//! The functions `u_L(A,B) = (L·A)(L·B)/(A·B)` on the branches of a
//! resolution graph, and the comparison of their trees with convex hulls in
//! the brick-vertex tree.

use crate::error::{Error, Result};
use crate::graph::{brick_vertex_tree, check_valency_hypothesis, Multigraph};
use crate::mumford::{angular_ratio, via_transforms_with, BracketMatrix, ResolutionGraph};
use crate::rational::Q;
use crate::tree::UTree;
use crate::ultrametric::{
    check_ultrametric, rooted_leaf_iso, rooted_leaf_iso_unreduced, suppress_valency_two, ultrametric_to_depth_tree,
    FiniteMetric, Law, RootedTree, Verdict,
};

fn u_on(rg: &ResolutionGraph, br: &BracketMatrix, root: &str, others: &[&str]) -> Result<FiniteMetric> {
    let l = rg.arrow(root)?.component;
    let comps = others
        .iter()
        .map(|a| rg.arrow(a).map(|x| x.component))
        .collect::<Result<Vec<_>>>()?;
    if let Some(a) = others.iter().find(|&&a| a == root) {
        return Err(Error::SameBranch(root.into(), a.to_string()));
    }
    FiniteMetric::from_fn(Law::Additive, others.iter().map(|s| s.to_string()).collect(), |i, j| {
        if i == j {
            Q::from_integer(0.into())
        } else {
            br.get(l, comps[i]) * br.get(l, comps[j]) / br.get(comps[i], comps[j])
        }
    })
}

/// `u_L` on all arrows other than `root`, in arrow order.
pub fn u_matrix(rg: &ResolutionGraph, root: &str) -> Result<FiniteMetric> {
    rg.arrow(root)?;
    let others: Vec<&str> = rg
        .arrows()
        .iter()
        .map(|a| a.id.as_str())
        .filter(|&a| a != root)
        .collect();
    if others.is_empty() {
        return Err(Error::TooFewBranches { needed: 2, got: 1 });
    }
    u_on(rg, &rg.brackets()?, root, &others)
}

/// The dual graph is a tree.
pub fn is_arborescent(rg: &ResolutionGraph) -> bool {
    rg.graph().is_tree()
}

/// The dual graph with one extra vertex per arrow, joined to its component.
pub fn graph_with_arrows(rg: &ResolutionGraph) -> Result<Multigraph> {
    let g = rg.graph();
    let mut vertices = g.vertices().to_vec();
    let mut edges: Vec<(String, String, u32)> = g
        .edges()
        .iter()
        .map(|&(a, b, m)| (g.vertices()[a].clone(), g.vertices()[b].clone(), m))
        .collect();
    for a in rg.arrows() {
        vertices.push(a.id.clone());
        edges.push((a.id.clone(), g.vertices()[a.component].clone(), 1));
    }
    Multigraph::new(vertices, edges)
}

#[derive(Debug, Clone)]
pub struct ULReport {
    pub root: String,
    pub metric: FiniteMetric,
    pub ultrametric: Verdict<(String, String, String)>,
    pub hypothesis: Verdict<String>,
    /// Brick-vertices of the convex hull of the arrows, with hull valency.
    pub hull_brick_valencies: Vec<(String, usize)>,
    pub iso_ok: bool,
    /// The rooted hull already had no unlabeled valency-2 vertices to suppress
    /// before matching.
    pub unreduced_coincide: bool,
    pub ultrametric_tree: Option<RootedTree>,
    /// Convex hull of the arrows rooted at the root arrow, with only arrow
    /// labels kept and unlabeled valency-2 vertices suppressed.
    pub hull_tree: RootedTree,
}

impl ULReport {
    pub fn ultrametric_ok(&self) -> bool {
        self.ultrametric.is_ok()
    }

    pub fn hypothesis_ok(&self) -> bool {
        self.hypothesis.is_ok()
    }
}

/// Computes `u_L`, checks the valency hypothesis on the convex hull of the
/// arrows in the brick-vertex tree, and, when both hold, compares the tree
/// of `u_L` with that hull rooted at `L`.
pub fn verify_theorem_d(rg: &ResolutionGraph, root: &str) -> Result<ULReport> {
    let metric = u_matrix(rg, root)?;
    let ultrametric = check_ultrametric(&metric);
    let bv = brick_vertex_tree(&graph_with_arrows(rg)?)?;
    let arrows: Vec<&str> = rg.arrows().iter().map(|a| a.id.as_str()).collect();
    let hypothesis = check_valency_hypothesis(&bv, &arrows)?;
    let hull_brick_valencies = bv.hull_brick_valencies(&arrows)?;

    let (hull, _) = bv.convex_hull(&arrows)?;
    let mut relabeled = UTree::new();
    for v in 0..hull.len() {
        relabeled.add_node(hull.label(v).filter(|l| arrows.contains(l)).map(str::to_string));
    }
    for (a, b) in hull.edges() {
        relabeled.add_edge(a, b);
    }
    let rooted = relabeled.rooted_at(relabeled.require(root)?);

    let mut iso_ok = false;
    let mut unreduced_coincide = false;
    let mut ultrametric_tree = None;
    if ultrametric.is_ok() && hypothesis.is_ok() {
        let t = ultrametric_to_depth_tree(&metric)?;
        iso_ok = rooted_leaf_iso(&t, &rooted)?;
        unreduced_coincide = rooted_leaf_iso_unreduced(&t, &rooted)?;
        ultrametric_tree = Some(t);
    }
    Ok(ULReport {
        root: root.into(),
        metric,
        ultrametric,
        hypothesis,
        hull_brick_valencies,
        iso_ok,
        unreduced_coincide,
        ultrametric_tree,
        hull_tree: suppress_valency_two(&rooted),
    })
}

/// True iff `u_L` restricted to `set ∖ {L}` is an ultrametric for every
/// `L ∈ set`.
pub fn all_roots_ultrametric(rg: &ResolutionGraph, set: &[&str]) -> Result<bool> {
    Ok(ultrametric_roots(rg, set)?.iter().all(|&ok| ok))
}

/// For each `L ∈ set`, whether `u_L` is an ultrametric on the others.
pub fn ultrametric_roots(rg: &ResolutionGraph, set: &[&str]) -> Result<Vec<bool>> {
    if set.len() < 3 {
        return Err(Error::TooFewBranches {
            needed: 3,
            got: set.len(),
        });
    }
    let br = rg.brackets()?;
    set.iter()
        .map(|&l| {
            let others: Vec<&str> = set.iter().copied().filter(|&x| x != l).collect();
            Ok(check_ultrametric(&u_on(rg, &br, l, &others)?).is_ok())
        })
        .collect()
}

fn min<'a>(x: &'a Q, y: &'a Q) -> &'a Q {
    if x < y {
        x
    } else {
        y
    }
}

/// The four equivalent forms of the ultrametric inequality
/// `u_L(A,B) ≤ max(u_L(A,C), u_L(B,C))`, each evaluated separately:
/// on `u_L`, on products of intersection numbers of total transforms, on
/// brackets, and on angular ratios.
pub fn four_forms(rg: &ResolutionGraph, a: &str, b: &str, c: &str, l: &str) -> Result<[bool; 4]> {
    let br = rg.brackets()?;
    let u = u_on(rg, &br, l, &[a, b, c])?;
    let form_u = u.value(0, 1) <= u.value(0, 2).max(u.value(1, 2));

    let m = rg.intersection_matrix().as_rational();
    let x = |p: &str, q: &str| via_transforms_with(rg, &br, &m, p, q);
    let (ab, ac, bc, la, lb, lc) = (x(a, b)?, x(a, c)?, x(b, c)?, x(l, a)?, x(l, b)?, x(l, c)?);
    let form_products = &ab * &lc >= *min(&(&ac * &lb), &(&bc * &la));

    let comp = |id: &str| rg.arrow(id).map(|x| x.component);
    let (ca, cb, cc, cl) = (comp(a)?, comp(b)?, comp(c)?, comp(l)?);
    let k = |p: usize, q: usize| br.get(p, q);
    let form_brackets = k(ca, cb) * k(cl, cc) >= *min(&(k(ca, cc) * k(cl, cb)), &(k(cb, cc) * k(cl, ca)));

    let q = |p: usize, r: usize| angular_ratio(&br, p, r);
    let form_angles = q(ca, cb) * q(cl, cc) >= *min(&(q(ca, cc) * q(cl, cb)), &(q(cb, cc) * q(cl, ca)));

    Ok([form_u, form_products, form_brackets, form_angles])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mumford::Component;
    use crate::rational::{frac, int};

    fn a1(arrows: &[&str]) -> ResolutionGraph {
        ResolutionGraph::new(
            vec![Component::new("E", -2)],
            vec![],
            arrows.iter().map(|a| (a.to_string(), "E".to_string())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn a1_values() {
        let rg = a1(&["L", "A", "B"]);
        let u = u_matrix(&rg, "L").unwrap();
        assert_eq!(u.get("A", "B").unwrap(), &frac(1, 2));
        assert!(all_roots_ultrametric(&a1(&["L", "A", "B", "C"]), &["L", "A", "B", "C"]).unwrap());
        assert_eq!(u_matrix(&a1(&["L"]), "L").unwrap_err().kind(), "too_few_branches");
        assert_eq!(u_matrix(&rg, "Z").unwrap_err().kind(), "unknown_branch");
    }

    #[test]
    fn arborescence() {
        let chain = ResolutionGraph::new(
            vec![Component::new("a", -2), Component::new("b", -2)],
            vec![("a".into(), "b".into(), 1)],
            vec![],
        )
        .unwrap();
        assert!(is_arborescent(&chain));
        let double = ResolutionGraph::new(
            vec![Component::new("a", -3), Component::new("b", -3)],
            vec![("a".into(), "b".into(), 2)],
            vec![],
        )
        .unwrap();
        assert!(!is_arborescent(&double));
        let tri = ResolutionGraph::new(
            vec![
                Component::new("a", -3),
                Component::new("b", -3),
                Component::new("c", -3),
            ],
            vec![
                ("a".into(), "b".into(), 1),
                ("b".into(), "c".into(), 1),
                ("c".into(), "a".into(), 1),
            ],
            vec![],
        )
        .unwrap();
        assert!(!is_arborescent(&tri));
    }

    #[test]
    fn tree_graph_satisfies_everything() {
        // star with center c and three legs, arrows on the legs and the center
        let rg = ResolutionGraph::new(
            vec![
                Component::new("c", -4),
                Component::new("x", -2),
                Component::new("y", -2),
                Component::new("z", -2),
            ],
            vec![
                ("c".into(), "x".into(), 1),
                ("c".into(), "y".into(), 1),
                ("c".into(), "z".into(), 1),
            ],
            vec![
                ("L".into(), "x".into()),
                ("A".into(), "y".into()),
                ("B".into(), "z".into()),
                ("C".into(), "c".into()),
            ],
        )
        .unwrap();
        let r = verify_theorem_d(&rg, "L").unwrap();
        assert!(r.ultrametric_ok() && r.hypothesis_ok() && r.iso_ok);
        assert!(r.hull_brick_valencies.is_empty());
        assert!(all_roots_ultrametric(&rg, &["L", "A", "B", "C"]).unwrap());
        assert_eq!(four_forms(&rg, "A", "B", "C", "L").unwrap(), [true; 4]);
    }

    #[test]
    fn four_arrows_around_a_brick() {
        let comps = ["u1", "u2", "u3", "u4"];
        let rg = ResolutionGraph::new(
            comps.iter().map(|c| Component::new(c, -3)).collect(),
            vec![
                ("u1".into(), "u2".into(), 1),
                ("u2".into(), "u3".into(), 1),
                ("u3".into(), "u4".into(), 1),
                ("u4".into(), "u1".into(), 1),
            ],
            vec![
                ("L".into(), "u1".into()),
                ("A".into(), "u2".into()),
                ("B".into(), "u3".into()),
                ("C".into(), "u4".into()),
            ],
        )
        .unwrap();
        let r = verify_theorem_d(&rg, "L").unwrap();
        assert_eq!(r.hypothesis, Verdict::Witness("[u1,u2,u3,u4]".into()));
        assert!(!r.iso_ok);
        // -M⁻¹ of the 4-cycle with E² = -3 has rows (7/15, 1/5, 2/15, 1/5)
        let br = rg.brackets().unwrap();
        assert_eq!(br.get(0, 0), &frac(7, 15));
        assert_eq!(br.get(0, 2), &frac(2, 15));
        assert_eq!(r.metric.get("A", "C").unwrap(), &frac(3, 10));
        assert_eq!(r.metric.get("A", "B").unwrap(), &frac(2, 15));
        assert_eq!(r.metric.value(0, 0), &int(0));
        assert!(!r.ultrametric_ok());
    }
}
