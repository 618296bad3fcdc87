//! Connected multigraphs: cut-vertices, bridges, blocks, bricks and the
//! brick-vertex tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tree::UTree;
use crate::ultrametric::Verdict;

/// An undirected multigraph without loops. Vertices are kept sorted by id;
/// parallel edges are merged into one edge with a multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize, u32)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Multigraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, u32)>) -> Result<Self> {
        let mut vertices = vertices;
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateId(w[0].clone()));
        }
        let index = |id: &str| {
            vertices
                .binary_search_by(|v| v.as_str().cmp(id))
                .map_err(|_| Error::UnknownVertex(id.into()))
        };
        let mut merged: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (a, b, m) in &edges {
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                return Err(Error::LoopEdge(a.clone()));
            }
            if *m == 0 {
                return Err(Error::InvalidGraph(format!("edge {a}-{b} has multiplicity 0")));
            }
            *merged.entry((i.min(j), i.max(j))).or_default() += m;
        }
        let edges: Vec<(usize, usize, u32)> = merged.into_iter().map(|((a, b), m)| (a, b, m)).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (e, &(a, b, _)) in edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        Ok(Multigraph { vertices, edges, adj })
    }

    /// Convenience constructor from string slices with multiplicity 1 edges.
    pub fn simple(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        Multigraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|(a, b)| (a.to_string(), b.to_string(), 1)).collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(a, b, multiplicity)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownVertex(id.into()))
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.adj[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map_or(0, |&(_, e)| self.edges[e].2)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    /// Number of edge ends at `v`, counted with multiplicity.
    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].iter().map(|&(_, e)| self.edges[e].2).sum()
    }

    fn reach(&self, from: usize, removed: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if Some(from) == removed {
            return seen;
        }
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] && Some(w) != removed {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for v in 0..self.len() {
            if !seen[v] {
                count += 1;
                for (w, r) in self.reach(v, None).into_iter().enumerate() {
                    seen[w] |= r;
                }
            }
        }
        count
    }

    pub fn check_connected(&self) -> Result<()> {
        match self.component_count() {
            1 => Ok(()),
            0 => Err(Error::InvalidGraph("graph has no vertices".into())),
            k => Err(Error::Disconnected(k)),
        }
    }

    /// Connected, acyclic and without multiple edges.
    pub fn is_tree(&self) -> bool {
        self.component_count() == 1 && self.edges.len() + 1 == self.len() && self.edges.iter().all(|&(_, _, m)| m == 1)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {};", quote(v));
        }
        for &(a, b, m) in &self.edges {
            let _ = write!(out, "  {} -- {}", quote(&self.vertices[a]), quote(&self.vertices[b]));
            if m > 1 {
                let _ = write!(out, " [label=\"{m}\"]");
            }
            out.push_str(";\n");
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A block: its sorted vertex set and its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Result of [`decompose`]. Indices refer to the graph's vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub cut_vertices: Vec<usize>,
    /// Edge indices.
    pub bridges: Vec<usize>,
    pub blocks: Vec<Block>,
    /// Indices into `blocks`.
    pub bricks: Vec<usize>,
}

struct Tarjan<'g> {
    g: &'g Multigraph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<usize>,
    blocks: Vec<Block>,
}

impl Tarjan<'_> {
    fn visit(&mut self, u: usize, via: Option<usize>) {
        self.time += 1;
        self.disc[u] = self.time;
        self.low[u] = self.time;
        for &(w, e) in &self.g.adj[u] {
            if Some(e) == via {
                // a parallel copy of the tree edge closes a cycle
                if self.g.edges[e].2 > 1 {
                    self.low[u] = self.low[u].min(self.disc[w]);
                }
                continue;
            }
            if self.disc[w] == 0 {
                self.stack.push(e);
                self.visit(w, Some(e));
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    let mut edges = Vec::new();
                    while let Some(f) = self.stack.pop() {
                        edges.push(f);
                        if f == e {
                            break;
                        }
                    }
                    self.push_block(edges);
                }
            } else if self.disc[w] < self.disc[u] {
                self.stack.push(e);
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
    }

    fn push_block(&mut self, mut edges: Vec<usize>) {
        edges.sort_unstable();
        let vertices: BTreeSet<usize> = edges
            .iter()
            .flat_map(|&e| [self.g.edges[e].0, self.g.edges[e].1])
            .collect();
        self.blocks.push(Block {
            vertices: vertices.into_iter().collect(),
            edges,
        });
    }
}

/// Cut-vertices, bridges, blocks and bricks of a connected multigraph.
///
/// An edge of multiplicity at least 2 is a cycle, so it is never a bridge and
/// always lies in a brick. A graph with a single vertex has one block with
/// no edges, which is neither a bridge nor a brick.
pub fn decompose(g: &Multigraph) -> Result<Decomposition> {
    g.check_connected()?;
    let n = g.len();
    let mut t = Tarjan {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    t.visit(0, None);
    let mut blocks = t.blocks;
    if n == 1 {
        blocks.push(Block {
            vertices: vec![0],
            edges: vec![],
        });
    }
    blocks.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let is_bridge = |b: &Block| b.edges.len() == 1 && g.edges[b.edges[0]].2 == 1;
    let mut bridges: Vec<usize> = blocks.iter().filter(|b| is_bridge(b)).map(|b| b.edges[0]).collect();
    bridges.sort_unstable();
    let bricks = (0..blocks.len())
        .filter(|&i| !is_bridge(&blocks[i]) && !blocks[i].edges.is_empty())
        .collect();
    let mut count = vec![0usize; n];
    for b in &blocks {
        for &v in &b.vertices {
            count[v] += 1;
        }
    }
    let cut_vertices = (0..n).filter(|&v| count[v] >= 2).collect();
    Ok(Decomposition {
        cut_vertices,
        bridges,
        blocks,
        bricks,
    })
}

/// `b` separates `a` and `c`: `b ∈ {a, c}`, or `a` and `c` lie in different
/// components of the graph with `b` removed.
pub fn separates(g: &Multigraph, b: &str, a: &str, c: &str) -> Result<bool> {
    let (b, a, c) = (g.require(b)?, g.require(a)?, g.require(c)?);
    Ok(separates_idx(g, b, a, c))
}

pub(crate) fn separates_idx(g: &Multigraph, b: usize, a: usize, c: usize) -> bool {
    b == a || b == c || !g.reach(a, Some(b))[c]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Bridge,
    BrickStar,
}

/// The brick-vertex tree. Node `v < n` is graph vertex `v`; node `n + k` is
/// the brick-vertex of brick `k`. Brick-vertices are unlabeled in the
/// underlying [`UTree`] and named by their sorted vertex list.
#[derive(Debug, Clone)]
pub struct BrickVertexTree {
    n: usize,
    names: Vec<String>,
    tree: UTree,
    edge_kinds: Vec<(usize, usize, EdgeKind)>,
    bricks: Vec<Vec<usize>>,
}

pub fn brick_vertex_tree(g: &Multigraph) -> Result<BrickVertexTree> {
    let d = decompose(g)?;
    let n = g.len();
    let mut tree = UTree::new();
    let mut names = g.vertices().to_vec();
    for v in g.vertices() {
        tree.add_node(Some(v.clone()));
    }
    let mut edge_kinds = Vec::new();
    for &e in &d.bridges {
        let (a, b, _) = g.edges()[e];
        tree.add_edge(a, b);
        edge_kinds.push((a, b, EdgeKind::Bridge));
    }
    let mut bricks = Vec::new();
    for &k in &d.bricks {
        let vs = d.blocks[k].vertices.clone();
        let node = tree.add_node(None);
        let ids: Vec<&str> = vs.iter().map(|&v| g.vertices()[v].as_str()).collect();
        names.push(format!("[{}]", ids.join(",")));
        for &v in &vs {
            tree.add_edge(v, node);
            edge_kinds.push((v, node, EdgeKind::BrickStar));
        }
        bricks.push(vs);
    }
    debug_assert!(tree.is_tree());
    Ok(BrickVertexTree {
        n,
        names,
        tree,
        edge_kinds,
        bricks,
    })
}

impl BrickVertexTree {
    pub fn tree(&self) -> &UTree {
        &self.tree
    }

    /// Number of graph vertices; brick-vertices follow them.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn bricks(&self) -> &[Vec<usize>] {
        &self.bricks
    }

    pub fn brick_node(&self, k: usize) -> usize {
        self.n + k
    }

    pub fn is_brick_node(&self, node: usize) -> bool {
        node >= self.n
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn node_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn edge_kinds(&self) -> &[(usize, usize, EdgeKind)] {
        &self.edge_kinds
    }

    /// Valency of each brick-vertex, in brick order.
    pub fn brick_valencies(&self) -> Vec<usize> {
        (0..self.bricks.len())
            .map(|k| self.tree.valency(self.brick_node(k)))
            .collect()
    }

    pub fn convex_hull(&self, set: &[&str]) -> Result<(UTree, Vec<usize>)> {
        let nodes = set.iter().map(|s| self.node_of(s)).collect::<Result<Vec<_>>>()?;
        Ok(self.tree.convex_hull(&nodes))
    }

    /// Brick-vertices of the hull of `set` with their valency in the hull.
    pub fn hull_brick_valencies(&self, set: &[&str]) -> Result<Vec<(String, usize)>> {
        let (hull, map) = self.convex_hull(set)?;
        Ok((0..hull.len())
            .filter(|&v| self.is_brick_node(map[v]))
            .map(|v| (self.names[map[v]].clone(), hull.valency(v)))
            .collect())
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph BV {\n");
        for (i, name) in self.names.iter().enumerate() {
            if self.is_brick_node(i) {
                let _ = writeln!(
                    out,
                    "  {} [shape=square, style=filled, fillcolor=black, label=\"\"];",
                    quote(name)
                );
            } else {
                let _ = writeln!(out, "  {};", quote(name));
            }
        }
        for &(a, b, kind) in &self.edge_kinds {
            let style = match kind {
                EdgeKind::Bridge => "",
                EdgeKind::BrickStar => " [style=dashed]",
            };
            let _ = writeln!(
                out,
                "  {} -- {}{};",
                quote(&self.names[a]),
                quote(&self.names[b]),
                style
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Checks that no brick-vertex has valency at least 4 in the convex hull of
/// `set`; the offender is the first such brick-vertex.
pub fn check_valency_hypothesis(bv: &BrickVertexTree, set: &[&str]) -> Result<Verdict<String>> {
    Ok(
        match bv.hull_brick_valencies(set)?.into_iter().find(|(_, val)| *val >= 4) {
            Some((name, _)) => Verdict::Witness(name),
            None => Verdict::Ok,
        },
    )
}
