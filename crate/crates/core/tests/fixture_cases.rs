mod common;

use common::{branches, graph, resolution};
use singtree::branch_ultrametrics::{u_matrix, verify_theorem_d};
use singtree::graph::{brick_vertex_tree, decompose, separates};
use singtree::mumford::{arrow_angular_metric, intersection_via_transforms, mumford_intersection};
use singtree::puiseux::{intersection_number, parametrization_intersection};
use singtree::rational::{frac, int};
use singtree::ultrametric::{check_ultrametric, tree_hull};

fn names(g: &singtree::graph::Multigraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.vertices()[v].clone()).collect()
}

#[test]
fn cut_vertices_bridges_and_bricks_of_the_bricks_graph() {
    let g = graph("bricks.json");
    let d = decompose(&g).unwrap();
    assert_eq!(
        names(&g, &d.cut_vertices),
        ["(0,0)", "(12,0)", "(2,0)", "(4,-2)", "(6,0)", "(9,-1)", "(9,0)"]
    );
    assert_eq!(d.bridges.len(), 9);
    let mut bricks: Vec<Vec<String>> = d.bricks.iter().map(|&k| names(&g, &d.blocks[k].vertices)).collect();
    bricks.sort();
    assert_eq!(
        bricks,
        [
            vec!["(12,0)", "(14,-2)", "(14,2)"],
            vec!["(2,-4)", "(4,-2)", "(6,-4)"],
            vec!["(2,0)", "(4,-2)", "(4,2)", "(6,0)"],
        ]
    );
    assert_eq!(d.blocks.len(), 12);
}

#[test]
fn brick_vertex_tree_of_the_bricks_graph() {
    let bv = brick_vertex_tree(&graph("bricks.json")).unwrap();
    let mut v = bv.brick_valencies();
    v.sort_unstable();
    assert_eq!(v, [3, 3, 4]);
    assert!(bv.tree().is_tree());
    assert_eq!(bv.tree().len(), 20);
}

#[test]
fn the_cut_vertex_between_the_bricks_separates() {
    let g = graph("bricks.json");
    assert!(separates(&g, "(2,0)", "(-1,-1)", "(6,0)").unwrap());
    assert!(separates(&g, "(2,0)", "(-1,-1)", "(14,2)").unwrap());
    assert!(!separates(&g, "(4,2)", "(2,0)", "(6,0)").unwrap());
}

#[test]
fn hull_of_four_vertices_is_f_shaped() {
    let bv = brick_vertex_tree(&graph("bricks.json")).unwrap();
    let set = ["(-1,-1)", "(0,0)", "(4,-2)", "(6,0)"];
    let (hull, map) = bv.convex_hull(&set).unwrap();
    assert_eq!(hull.len(), 6);
    let val = |name: &str| hull.valency(map.iter().position(|&m| m == bv.node_of(name).unwrap()).unwrap());
    assert_eq!(val("(0,0)"), 2);
    assert_eq!(val("(2,0)"), 2);
    assert_eq!(val("[(2,0),(4,-2),(4,2),(6,0)]"), 3);
    assert_eq!(
        bv.hull_brick_valencies(&set).unwrap(),
        [("[(2,0),(4,-2),(4,2),(6,0)]".to_string(), 3)]
    );

    let x =
        tree_hull(&arrow_angular_metric(&resolution("bricks_fshape.json"), &["a", "b", "c", "d"]).unwrap()).unwrap();
    assert_eq!(
        x.shape_signature(),
        [(false, 3), (true, 1), (true, 1), (true, 1), (true, 2)]
    );
}

#[test]
fn arrows_on_the_bricks_graph() {
    let r = verify_theorem_d(&resolution("bricks_arrows.json"), "L").unwrap();
    assert!(r.hypothesis_ok() && r.ultrametric_ok() && r.iso_ok);
    let mut v: Vec<usize> = r.hull_brick_valencies.iter().map(|(_, k)| *k).collect();
    v.sort_unstable();
    assert_eq!(v, [2, 3]);
    assert!(!r.unreduced_coincide);
}

#[test]
fn generic_reference_line_on_a_toric_chain() {
    let rg = resolution("plane_chain.json");
    let pairs = [
        ("L", "A", 2),
        ("L", "B", 3),
        ("L", "C", 5),
        ("A", "B", 9),
        ("A", "C", 10),
        ("B", "C", 15),
    ];
    for (a, b, v) in pairs {
        assert_eq!(mumford_intersection(&rg, a, b).unwrap(), int(v), "{a}{b}");
        assert_eq!(intersection_via_transforms(&rg, a, b).unwrap(), int(v), "{a}{b}");
    }
    let u = u_matrix(&rg, "L").unwrap();
    assert_eq!(u.get("A", "B").unwrap(), &frac(2, 3));
    assert_eq!(u.get("B", "C").unwrap(), &int(1));
    assert_eq!(u.get("A", "C").unwrap(), &int(1));
    assert!(check_ultrametric(&u).is_ok());
}

#[test]
fn resolution_and_puiseux_intersections_agree() {
    let rg = resolution("plane_chain.json");
    let bs = branches("branches.json");
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (&bs[i], &bs[j]);
            let p = intersection_number(a, b).unwrap();
            assert_eq!(p, parametrization_intersection(a, b).unwrap());
            assert_eq!(p, mumford_intersection(&rg, a.id(), b.id()).unwrap());
        }
    }
}
