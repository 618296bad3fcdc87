#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use singtree::graph::Multigraph;
use singtree::mumford::{Component, ResolutionGraph};
use singtree::rational::{frac, Q};
use singtree::schema::{parse_branches, parse_graph, parse_metric, parse_resolution};
use singtree::ultrametric::{FiniteMetric, Law};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn resolution(name: &str) -> ResolutionGraph {
    parse_resolution(&fixture(name)).unwrap()
}

pub fn graph(name: &str) -> Multigraph {
    parse_graph(&fixture(name)).unwrap()
}

pub fn metric(name: &str) -> FiniteMetric {
    parse_metric(&fixture(name)).unwrap()
}

pub fn branches(name: &str) -> Vec<singtree::puiseux::PuiseuxBranch> {
    parse_branches(&fixture(name)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random connected multigraph on `n` vertices: a random spanning tree plus
/// `extra` random edges (possibly parallel to existing ones).
pub fn random_edges(r: &mut ChaCha8Rng, n: usize, extra: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((r.gen_range(0..v), v));
    }
    if n >= 2 {
        for _ in 0..extra {
            let a = r.gen_range(0..n);
            let mut b = r.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a, b));
        }
    }
    edges
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize, extra: usize) -> Multigraph {
    let vs = names("v", n);
    let es = random_edges(r, n, extra)
        .into_iter()
        .map(|(a, b)| (vs[a].clone(), vs[b].clone(), 1))
        .collect();
    Multigraph::new(vs, es).unwrap()
}

/// Random connected resolution graph with `-E_u^2 = deg(u) + slack`, slack in
/// `0..=2` and positive somewhere, so the matrix is negative definite.
pub fn random_resolution(r: &mut ChaCha8Rng, n: usize, extra: usize, arrows: usize) -> ResolutionGraph {
    let vs = names("v", n);
    let es = random_edges(r, n, extra);
    let mut deg = vec![0i64; n];
    for &(a, b) in &es {
        deg[a] += 1;
        deg[b] += 1;
    }
    let strict = r.gen_range(0..n);
    let comps = (0..n)
        .map(|u| {
            let slack = if u == strict {
                r.gen_range(1..=2)
            } else {
                r.gen_range(0..=2)
            };
            Component::new(&vs[u], -(deg[u] + slack))
        })
        .collect();
    let arrows = (0..arrows)
        .map(|i| (format!("A{i}"), vs[r.gen_range(0..n)].clone()))
        .collect();
    let es = es.into_iter().map(|(a, b)| (vs[a].clone(), vs[b].clone(), 1)).collect();
    ResolutionGraph::new(comps, es, arrows).unwrap()
}

/// Random ultrametric by agglomeration: clusters merge in groups of two or
/// more at strictly increasing heights.
pub fn random_ultrametric(r: &mut ChaCha8Rng, n: usize, law: Law) -> FiniteMetric {
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut d = vec![vec![Q::zero(); n]; n];
    let mut h = Q::zero();
    while clusters.len() > 1 {
        h += frac(r.gen_range(1..=6), r.gen_range(1..=4));
        clusters.shuffle(r);
        let k = r.gen_range(2..=clusters.len().min(3));
        let merged: Vec<usize> = clusters.drain(..k).flatten().collect();
        for &a in &merged {
            for &b in &merged {
                if a != b && d[a][b].is_zero() {
                    d[a][b] = h.clone();
                }
            }
        }
        clusters.push(merged);
    }
    let value = |x: &Q| match law {
        Law::Additive => x.clone(),
        Law::Multiplicative => Q::one() / (Q::one() + x),
    };
    FiniteMetric::from_fn(law, names("p", n), |i, j| value(&d[i][j])).unwrap()
}

/// Path metric of a random tree with positive rational edge lengths, marked
/// at every leaf and at some interior vertices.
pub fn random_tree_metric(r: &mut ChaCha8Rng, n: usize) -> FiniteMetric {
    let mut parent = vec![usize::MAX; n];
    let mut len = vec![Q::zero(); n];
    for v in 1..n {
        parent[v] = r.gen_range(0..v);
        len[v] = frac(r.gen_range(1..=5), r.gen_range(1..=3));
    }
    let mut is_leaf = vec![true; n];
    for v in 1..n {
        is_leaf[parent[v]] = false;
    }
    let marked: Vec<usize> = (0..n).filter(|&v| is_leaf[v] || v == 0 || r.gen_bool(0.3)).collect();
    let depth = |mut v: usize| {
        let mut out = vec![(v, Q::zero())];
        let mut acc = Q::zero();
        while v != 0 {
            acc += &len[v];
            v = parent[v];
            out.push((v, acc.clone()));
        }
        out
    };
    let dist = |a: usize, b: usize| {
        let pa = depth(a);
        let pb = depth(b);
        pa.iter()
            .find_map(|(x, da)| pb.iter().find(|(y, _)| y == x).map(|(_, db)| da + db))
            .unwrap()
    };
    let points = marked.iter().map(|v| format!("t{v}")).collect();
    FiniteMetric::from_fn(Law::Additive, points, |i, j| dist(marked[i], marked[j])).unwrap()
}
