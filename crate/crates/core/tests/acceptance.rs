//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{random_graph, random_resolution, random_tree_metric, random_ultrametric, rng};
use rand::Rng;
use singtree::branch_ultrametrics::verify_theorem_d;
use singtree::graph::{brick_vertex_tree, decompose, separates};
use singtree::mumford::{angular_metric, arrow_angular_metric, mumford_intersection, total_transform};
use singtree::puiseux::{
    contact_order, eggers_wall_tree, intersection_number, oracle_intersection, ploski_quotients, two_smallest_equal,
    u_metric, MonomialBranch, PuiseuxBranch,
};
use singtree::rational::{fmt_q, frac, int, Q};
use singtree::ultrametric::{
    balls_hierarchy, depth_tree_eq, depth_tree_to_ultrametric, hierarchy_to_tree, tree_hull, tree_to_hierarchy,
    ultrametric_to_depth_tree, Depth, Law, RootedTree, OMEGA,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn plane_example() -> Check {
    let bs = common::branches("branches.json");
    let m: Vec<u64> = bs.iter().map(PuiseuxBranch::multiplicity).collect();
    ensure!(m == [2, 3, 5], "multiplicities {m:?}");
    let x = |i: usize, j: usize| intersection_number(&bs[i], &bs[j]).unwrap();
    let (bc, ca, ab) = (x(1, 2), x(2, 0), x(0, 1));
    ensure!(
        (bc.clone(), ca.clone(), ab.clone()) == (int(15), int(10), int(9)),
        "B·C={bc} C·A={ca} A·B={ab}"
    );
    let q = ploski_quotients(&bs[0], &bs[1], &bs[2]).unwrap();
    ensure!(
        q == [int(1), int(1), frac(3, 2)],
        "quotients {}",
        q.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
    );
    ensure!(two_smallest_equal(&q) && q[2] > q[0], "pattern");
    Ok(())
}

fn eggers_wall_example() -> Check {
    let bs = common::branches("branches.json");
    let k = contact_order(&bs[0], &bs[1]).unwrap();
    ensure!(k == frac(3, 2), "contact {k}");
    let integral = intersection_number(&bs[0], &bs[1]).unwrap() / int(2 * 3);
    ensure!(integral == frac(3, 2), "integral {integral}");
    let u = u_metric(&bs).unwrap();
    let inv = int(1) / u.get("A", "B").unwrap();
    ensure!(inv == integral, "1/u_L(A,B) = {inv}");
    let ew = eggers_wall_tree(&bs).unwrap();
    ensure!(
        ew.node_exponents() == [frac(5, 6), frac(3, 2), frac(5, 3)],
        "exponents {:?}",
        ew.node_exponents()
    );
    let idx: Vec<u64> = ew.leaf_indices().into_iter().map(|(_, i)| i).collect();
    ensure!(idx == [2, 3, 6], "leaf indices {idx:?}");
    Ok(())
}

fn quadratic_cone() -> Check {
    let rg = common::resolution("a1.json");
    ensure!(rg.intersection_matrix().entries == [[-2]], "matrix");
    let t = total_transform(&rg, &[("A".into(), int(1))]).unwrap();
    ensure!(
        t.exceptional == [frac(1, 2)],
        "coefficient {}",
        fmt_q(&t.exceptional[0])
    );
    let ab = mumford_intersection(&rg, "A", "B").unwrap();
    ensure!(ab == frac(1, 2), "A·B = {ab}");
    Ok(())
}

fn four_point_ultrametric() -> Check {
    let m = common::metric("levels.json");
    let listing = balls_hierarchy(&m).unwrap().listing();
    let want: Vec<(Vec<&str>, Depth)> = vec![
        (vec!["A"], Depth::Finite(int(0))),
        (vec!["B"], Depth::Finite(int(0))),
        (vec!["C"], Depth::Finite(int(0))),
        (vec!["D"], Depth::Finite(int(0))),
        (vec!["B", "C"], Depth::Finite(int(1))),
        (vec!["A", "B", "C"], Depth::Finite(int(2))),
        (vec!["A", "B", "C", "D"], Depth::Finite(int(5))),
        (vec!["A", "B", "C", "D", OMEGA], Depth::Infinite),
    ];
    let got: Vec<(Vec<&str>, Depth)> = listing
        .iter()
        .map(|(s, d)| (s.iter().map(String::as_str).collect(), d.clone().unwrap()))
        .collect();
    ensure!(got == want, "balls {got:?}");

    let mut fig = RootedTree::new(Some(OMEGA.into()));
    fig.set_depth(0, Depth::Infinite);
    let top = fig.add_child(0, None);
    fig.set_depth(top, Depth::Finite(int(5)));
    let d = fig.add_child(top, Some("D".into()));
    let abc = fig.add_child(top, None);
    fig.set_depth(abc, Depth::Finite(int(2)));
    let a = fig.add_child(abc, Some("A".into()));
    let bc = fig.add_child(abc, None);
    fig.set_depth(bc, Depth::Finite(int(1)));
    let b = fig.add_child(bc, Some("B".into()));
    let c = fig.add_child(bc, Some("C".into()));
    for v in [d, a, b, c] {
        fig.set_depth(v, Depth::Finite(int(0)));
    }
    ensure!(
        depth_tree_eq(&ultrametric_to_depth_tree(&m).unwrap(), &fig).unwrap(),
        "tree differs"
    );
    Ok(())
}

fn bricks_graph() -> Check {
    let g = common::graph("bricks.json");
    let d = decompose(&g).unwrap();
    let mut v = brick_vertex_tree(&g).unwrap().brick_valencies();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let got = (d.bricks.len(), d.cut_vertices.len(), d.bridges.len(), v);
    ensure!(
        got == (3, 7, 8, vec![4, 3, 3]),
        "bricks, cut-vertices, bridges, valencies = {got:?}"
    );
    Ok(())
}

fn arrows_on_bricks_graph() -> Check {
    let r = verify_theorem_d(&common::resolution("bricks_arrows.json"), "L").unwrap();
    let mut v: Vec<usize> = r.hull_brick_valencies.iter().map(|(_, k)| *k).collect();
    v.sort_unstable();
    ensure!(r.hypothesis_ok() && v == [2, 3], "hull brick valencies {v:?}");
    ensure!(r.ultrametric_ok(), "u_L not ultrametric: {:?}", r.ultrametric);
    ensure!(r.iso_ok, "ultrametric tree is not the rooted hull");
    Ok(())
}

fn f_shape() -> Check {
    let m = arrow_angular_metric(&common::resolution("bricks_fshape.json"), &["a", "b", "c", "d"]).unwrap();
    let q = |x: &str, y: &str| m.get(x, y).unwrap().clone();
    let (ad_bc, ac_bd, ab_cd) = (
        q("a", "d") * q("b", "c"),
        q("a", "c") * q("b", "d"),
        q("a", "b") * q("c", "d"),
    );
    ensure!(ad_bc == ac_bd, "q(a,d)q(b,c) = {ad_bc}, q(a,c)q(b,d) = {ac_bd}");
    ensure!(ad_bc < ab_cd, "q(a,b)q(c,d) = {ab_cd}");
    Ok(())
}

fn separation_law() -> Check {
    for seed in 0..200 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=10);
        let extra = r.gen_range(0..=n);
        let rg = random_resolution(&mut r, n, extra, 0);
        let br = rg.brackets().unwrap();
        let rho = angular_metric(&rg).unwrap();
        let ids = rg.components();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (lhs, rhs) = (br.get(a, b) * br.get(b, c), br.get(b, b) * br.get(a, c));
                    let sep = separates(rg.graph(), &ids[b], &ids[a], &ids[c]).unwrap();
                    let additive = rho.value(a, c) == &(rho.value(a, b) * rho.value(b, c));
                    ensure!(
                        lhs <= rhs && (lhs == rhs) == sep && additive == sep,
                        "seed {seed}: ({a},{b},{c})"
                    );
                }
            }
        }
    }
    Ok(())
}

fn coprime_pairs(max: u64) -> Vec<(u64, u64)> {
    (1..=max)
        .flat_map(|n| (1..=max).map(move |m| (n, m)))
        .filter(|&(n, m)| num_integer::gcd(n, m) == 1)
        .collect()
}

fn monomial_oracles() -> Check {
    let pairs = coprime_pairs(12);
    for (i, &(n, m)) in pairs.iter().enumerate() {
        for &(n2, m2) in &pairs[i + 1..] {
            let (a, b) = (MonomialBranch::new(n, m).unwrap(), MonomialBranch::new(n2, m2).unwrap());
            let got = intersection_number(&a.to_puiseux("a"), &b.to_puiseux("b")).unwrap();
            let want = oracle_intersection(a, b).unwrap();
            ensure!(
                got == Q::from_integer(want.into()),
                "({n},{m}) ({n2},{m2}): {got} vs {want}"
            );
        }
    }
    let pairs = coprime_pairs(8);
    let bs: Vec<PuiseuxBranch> = pairs
        .iter()
        .map(|&(n, m)| MonomialBranch::new(n, m).unwrap().to_puiseux(&format!("{n}/{m}")))
        .collect();
    let k = bs.len();
    let x: Vec<Vec<Q>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        int(0)
                    } else {
                        intersection_number(&bs[i], &bs[j]).unwrap()
                            / int((bs[i].multiplicity() * bs[j].multiplicity()) as i64)
                    }
                })
                .collect()
        })
        .collect();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let q = [x[j][l].clone(), x[l][i].clone(), x[i][j].clone()];
                ensure!(two_smallest_equal(&q), "{} {} {}", bs[i].id(), bs[j].id(), bs[l].id());
            }
        }
    }
    Ok(())
}

fn round_trips() -> Check {
    for seed in 0..200 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=9);
        let law = if r.gen_bool(0.5) {
            Law::Additive
        } else {
            Law::Multiplicative
        };
        let m = random_ultrametric(&mut r, n, law);
        let t = ultrametric_to_depth_tree(&m).unwrap();
        ensure!(
            depth_tree_to_ultrametric(&t).unwrap() == m,
            "seed {seed}: ultrametric round trip"
        );
        let h = balls_hierarchy(&m).unwrap();
        let t2 = hierarchy_to_tree(&h);
        ensure!(depth_tree_eq(&t, &t2).unwrap(), "seed {seed}: hierarchy tree");
        ensure!(
            tree_to_hierarchy(&t2).unwrap() == h,
            "seed {seed}: hierarchy round trip"
        );

        let tm = random_tree_metric(&mut r, n + 1);
        let x = tree_hull(&tm).unwrap();
        ensure!(x.is_x_tree() && x.reproduces(&tm), "seed {seed}: tree hull");

        let g = random_graph(&mut r, n, 0);
        let bv = brick_vertex_tree(&g).unwrap();
        let same = bv.tree().len() == g.len()
            && bv.tree().edges() == g.edges().iter().map(|&(a, b, _)| (a, b)).collect::<Vec<_>>();
        ensure!(same, "seed {seed}: BV(tree) differs from tree");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "plane branches: multiplicities, intersections, quotients",
            plane_example,
        ),
        (
            "Eggers-Wall tree: contact integral, exponents, indices",
            eggers_wall_example,
        ),
        ("quadratic cone: matrix, transform, A·B", quadratic_cone),
        ("four-point ultrametric: balls and tree", four_point_ultrametric),
        (
            "bricks graph: bricks, cut-vertices, bridges, BV valencies",
            bricks_graph,
        ),
        (
            "arrows on the bricks graph: hypothesis, ultrametric, hull",
            arrows_on_bricks_graph,
        ),
        ("F-shape relations for rho", f_shape),
        ("separation law on 200 random graphs", separation_law),
        ("monomial intersection oracle and two-smallest-equal", monomial_oracles),
        ("round trips, tree hulls, BV of trees", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
