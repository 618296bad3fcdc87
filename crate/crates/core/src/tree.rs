//! Small unrooted trees with optionally labeled vertices.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::ultrametric::RootedTree;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UTree {
    labels: Vec<Option<String>>,
    adj: Vec<Vec<usize>>,
}

impl UTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: Option<String>) -> usize {
        self.labels.push(label);
        self.adj.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|&x| x != b);
        self.adj[b].retain(|&x| x != a);
    }

    pub fn set_label(&mut self, v: usize, label: Option<String>) {
        self.labels[v] = label;
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(min, max)` pairs in sorted order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.find(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    fn parents_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    pub fn is_tree(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let parent = self.parents_from(0);
        let reached = 1 + parent.iter().filter(|p| p.is_some()).count();
        reached == self.len() && self.edge_count() == self.len() - 1
    }

    /// Vertices of the segment `[a, b]`, starting at `a`.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let parent = self.parents_from(b);
        let mut out = vec![a];
        let mut v = a;
        while let Some(p) = parent[v] {
            out.push(p);
            v = p;
        }
        out
    }

    /// `b` separates `a` from `c`: `b` lies on the segment `[a, c]`.
    pub fn separates(&self, b: usize, a: usize, c: usize) -> bool {
        self.path(a, c).contains(&b)
    }

    /// The minimal subtree containing `set`, with the map from its vertices
    /// to the vertices of `self`.
    pub fn convex_hull(&self, set: &[usize]) -> (UTree, Vec<usize>) {
        let keep_set: BTreeSet<usize> = set.iter().copied().collect();
        let mut alive = vec![!keep_set.is_empty(); self.len()];
        let mut deg: Vec<usize> = (0..self.len()).map(|v| self.valency(v)).collect();
        let mut stack: Vec<usize> = (0..self.len())
            .filter(|&v| deg[v] <= 1 && !keep_set.contains(&v))
            .collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &self.adj[v] {
                if alive[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 && !keep_set.contains(&w) {
                        stack.push(w);
                    }
                }
            }
        }
        let map: Vec<usize> = (0..self.len()).filter(|&v| alive[v]).collect();
        let mut hull = UTree::new();
        let mut new_id = vec![usize::MAX; self.len()];
        for &v in &map {
            new_id[v] = hull.add_node(self.labels[v].clone());
        }
        for (a, b) in self.edges() {
            if alive[a] && alive[b] {
                hull.add_edge(new_id[a], new_id[b]);
            }
        }
        (hull, map)
    }

    /// The tree rooted at `root`, keeping all labels. Children are listed in
    /// vertex order.
    pub fn rooted_at(&self, root: usize) -> RootedTree {
        let mut t = RootedTree::new(self.labels[root].clone());
        let mut queue = VecDeque::from([(root, usize::MAX, 0)]);
        while let Some((v, from, id)) = queue.pop_front() {
            let mut kids: Vec<usize> = self.adj[v].iter().copied().filter(|&w| w != from).collect();
            kids.sort_unstable();
            for w in kids {
                let c = t.add_child(id, self.labels[w].clone());
                queue.push_back((w, v, c));
            }
        }
        t
    }
}
