//! Hierarchies (laminar set families) and the closed balls of an ultrametric.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

use super::metric::{check_ultrametric, FiniteMetric, Law, Verdict};

/// Name of the formal point added to the ground set to complete the root.
pub const OMEGA: &str = "ω";

/// A decoration value on a hierarchy member or tree vertex; `Infinite` only
/// ever sits on the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Depth {
    Finite(Q),
    Infinite,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(q) => f.write_str(&fmt_q(q)),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

impl Depth {
    /// Distance order under `law`, with `Infinite` above everything.
    pub fn cmp_dist(&self, other: &Depth, law: Law) -> Ordering {
        match (self, other) {
            (Depth::Infinite, Depth::Infinite) => Ordering::Equal,
            (Depth::Infinite, _) => Ordering::Greater,
            (_, Depth::Infinite) => Ordering::Less,
            (Depth::Finite(a), Depth::Finite(b)) => law.cmp_dist(a, b),
        }
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Depth::Finite(q) => Some(q),
            Depth::Infinite => None,
        }
    }
}

/// A hierarchy on an ordered ground set. Members are stored as sets of
/// ground indices, sorted by size and then lexicographically; the completed
/// root `M ∪ {ω}` is implicit and listed by [`Hierarchy::listing`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    ground: Vec<String>,
    members: Vec<BTreeSet<usize>>,
    diameters: Option<Vec<Q>>,
    law: Law,
}

fn member_order(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

impl Hierarchy {
    /// Validates the hierarchy axioms: no empty member, all singletons and the
    /// full ground set present, and any two members disjoint or nested.
    pub fn new(ground: Vec<String>, members: Vec<BTreeSet<usize>>) -> Result<Self> {
        Self::build(ground, members.into_iter().map(|m| (m, None)).collect(), Law::Additive)
    }

    /// Like [`Hierarchy::new`], with a diameter on every member.
    pub fn with_diameters(ground: Vec<String>, members: Vec<(BTreeSet<usize>, Q)>, law: Law) -> Result<Self> {
        Self::build(ground, members.into_iter().map(|(m, d)| (m, Some(d))).collect(), law)
    }

    /// Builds a hierarchy from members given as lists of point names.
    pub fn from_named(ground: &[&str], members: &[&[&str]]) -> Result<Self> {
        let ground: Vec<String> = ground.iter().map(|s| s.to_string()).collect();
        let sets = members
            .iter()
            .map(|m| {
                m.iter()
                    .map(|p| {
                        ground
                            .iter()
                            .position(|g| g == p)
                            .ok_or_else(|| Error::UnknownVertex(p.to_string()))
                    })
                    .collect::<Result<BTreeSet<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Hierarchy::new(ground, sets)
    }

    fn build(ground: Vec<String>, mut members: Vec<(BTreeSet<usize>, Option<Q>)>, law: Law) -> Result<Self> {
        let n = ground.len();
        if n == 0 {
            return Err(Error::InvalidHierarchy("empty ground set".into()));
        }
        for (i, g) in ground.iter().enumerate() {
            if ground[..i].contains(g) {
                return Err(Error::DuplicateId(g.clone()));
            }
        }
        members.sort_by(|a, b| member_order(&a.0, &b.0));
        members.dedup_by(|a, b| a.0 == b.0);
        for (m, _) in &members {
            if m.is_empty() {
                return Err(Error::InvalidHierarchy("contains the empty set".into()));
            }
            if let Some(&x) = m.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidHierarchy(format!("member refers to point #{x}")));
            }
        }
        for (i, name) in ground.iter().enumerate() {
            if !members.iter().any(|(m, _)| m.len() == 1 && m.contains(&i)) {
                return Err(Error::InvalidHierarchy(format!("missing singleton {{{name}}}")));
            }
        }
        if !members.iter().any(|(m, _)| m.len() == n) {
            return Err(Error::InvalidHierarchy("missing the full ground set".into()));
        }
        for (i, (a, _)) in members.iter().enumerate() {
            for (b, _) in &members[i + 1..] {
                let nested = a.is_subset(b) || b.is_subset(a);
                if !nested && !a.is_disjoint(b) {
                    let show =
                        |s: &BTreeSet<usize>| s.iter().map(|&x| ground[x].as_str()).collect::<Vec<_>>().join(",");
                    return Err(Error::InvalidHierarchy(format!(
                        "members {{{}}} and {{{}}} overlap without nesting",
                        show(a),
                        show(b)
                    )));
                }
            }
        }
        let diameters = if members.iter().all(|(_, d)| d.is_some()) {
            Some(members.iter().map(|(_, d)| d.clone().unwrap()).collect())
        } else {
            None
        };
        let members = members.into_iter().map(|(m, _)| m).collect();
        Ok(Hierarchy {
            ground,
            members,
            diameters,
            law,
        })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn members(&self) -> &[BTreeSet<usize>] {
        &self.members
    }

    pub fn diameters(&self) -> Option<&[Q]> {
        self.diameters.as_deref()
    }

    pub fn law(&self) -> Law {
        self.law
    }

    /// Members as sorted name lists, followed by the completed root
    /// (`ω` appended), each paired with its diameter when known.
    pub fn listing(&self) -> Vec<(Vec<String>, Option<Depth>)> {
        let mut out: Vec<(Vec<String>, Option<Depth>)> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let names = m.iter().map(|&x| self.ground[x].clone()).collect();
                let d = self.diameters.as_ref().map(|ds| Depth::Finite(ds[i].clone()));
                (names, d)
            })
            .collect();
        let mut root: Vec<String> = self.ground.clone();
        root.push(OMEGA.to_string());
        out.push((root, self.diameters.as_ref().map(|_| Depth::Infinite)));
        out
    }
}

/// The closed balls of an ultrametric, each with its diameter.
pub fn balls_hierarchy(m: &FiniteMetric) -> Result<Hierarchy> {
    if let Verdict::Witness((a, b, c)) = check_ultrametric(m) {
        return Err(Error::NotUltrametric(a, b, c));
    }
    let n = m.len();
    let law = m.law();
    let mut balls: Vec<(BTreeSet<usize>, Q)> = Vec::new();
    for center in 0..n {
        for r in 0..n {
            let radius = m.value(center, r);
            let ball: BTreeSet<usize> = (0..n)
                .filter(|&p| law.cmp_dist(m.value(center, p), radius) != Ordering::Greater)
                .collect();
            if balls.iter().any(|(b, _)| *b == ball) {
                continue;
            }
            let mut diam = law.identity();
            for &p in &ball {
                for &q in &ball {
                    if law.cmp_dist(m.value(p, q), &diam) == Ordering::Greater {
                        diam = m.value(p, q).clone();
                    }
                }
            }
            balls.push((ball, diam));
        }
    }
    Hierarchy::with_diameters(m.points().to_vec(), balls, law)
}
