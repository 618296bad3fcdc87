//! Finite metrics, ultrametrics, hierarchies and the trees that encode them.

mod hierarchy;
mod hull;
mod metric;
mod rooted;

pub use hierarchy::{balls_hierarchy, Depth, Hierarchy, OMEGA};
pub use hull::{distinct_shapes, tree_hull, XTree};
pub use metric::{check_four_point, check_ultrametric, FiniteMetric, Law, Verdict};
pub use rooted::{
    depth_tree_eq, depth_tree_to_ultrametric, hierarchy_to_tree, rooted_leaf_iso, rooted_leaf_iso_unreduced,
    suppress_valency_two, tree_to_hierarchy, ultrametric_to_depth_tree, RootedNode, RootedTree,
};
