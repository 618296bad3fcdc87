//! Finite metric spaces with exact rational values.
//!
//! Two composition laws share one type. Under [`Law::Additive`] a value is
//! the distance itself. Under [`Law::Multiplicative`] a value `q` in `(0, 1]`
//! stands for the distance `-log q`, so sums of distances become products of
//! values and the order is reversed. Every comparison is done on the stored
//! rationals; logarithms only appear in display helpers.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, to_f64, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Additive,
    Multiplicative,
}

impl Law {
    /// Value of a point's distance to itself.
    pub fn identity(self) -> Q {
        match self {
            Law::Additive => Q::zero(),
            Law::Multiplicative => Q::one(),
        }
    }

    /// Orders two values as distances: `Less` means `x` is the shorter one.
    pub fn cmp_dist(self, x: &Q, y: &Q) -> Ordering {
        match self {
            Law::Additive => x.cmp(y),
            Law::Multiplicative => y.cmp(x),
        }
    }

    /// Value of the sum of the two distances.
    pub fn combine(self, x: &Q, y: &Q) -> Q {
        match self {
            Law::Additive => x + y,
            Law::Multiplicative => x * y,
        }
    }

    /// The longer of two distances.
    pub fn max_dist<'a>(self, x: &'a Q, y: &'a Q) -> &'a Q {
        if self.cmp_dist(x, y) == Ordering::Less {
            y
        } else {
            x
        }
    }

    /// Maps a value into the group in which tree lengths are accumulated:
    /// the distance itself (additive) or `exp(distance) = 1/q` (multiplicative).
    /// In that group the natural order of rationals is the order of lengths.
    pub fn to_length(self, value: &Q) -> Q {
        match self {
            Law::Additive => value.clone(),
            Law::Multiplicative => value.recip(),
        }
    }

    /// Group operation on lengths (`+` or `*`).
    pub fn add_len(self, x: &Q, y: &Q) -> Q {
        self.combine(x, y)
    }

    /// Inverse group operation on lengths (`-` or `/`).
    pub fn sub_len(self, x: &Q, y: &Q) -> Q {
        match self {
            Law::Additive => x - y,
            Law::Multiplicative => x / y,
        }
    }

    /// Converts a length-group element to a real length for display.
    pub fn length_as_f64(self, len: &Q) -> f64 {
        match self {
            Law::Additive => to_f64(len),
            Law::Multiplicative => to_f64(len).ln(),
        }
    }

    /// Converts a metric value to the distance it stands for, for display.
    pub fn value_as_distance(self, value: &Q) -> f64 {
        match self {
            Law::Additive => to_f64(value),
            Law::Multiplicative => -to_f64(value).ln(),
        }
    }
}

/// A symmetric matrix of exact values indexed by named points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    law: Law,
    points: Vec<String>,
    values: Vec<Vec<Q>>,
}

/// Outcome of a condition check: either it holds or a witness is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Ok,
    Witness(W),
}

impl<W> Verdict<W> {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Ok => None,
            Verdict::Witness(w) => Some(w),
        }
    }
}

impl FiniteMetric {
    /// Builds a metric, checking symmetry, the diagonal and the range of the
    /// off-diagonal values. The triangle inequality is checked separately by
    /// [`FiniteMetric::check_triangle`].
    pub fn new(law: Law, points: Vec<String>, values: Vec<Vec<Q>>) -> Result<Self> {
        let n = points.len();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::DuplicateId(p.clone()));
            }
        }
        let bad = |i: usize, j: usize, reason: &str| Error::InvalidMetric {
            row: points.get(i).cloned().unwrap_or_else(|| format!("#{i}")),
            col: points.get(j).cloned().unwrap_or_else(|| format!("#{j}")),
            reason: reason.to_string(),
        };
        if values.len() != n {
            return Err(Error::InvalidMetric {
                row: "*".into(),
                col: "*".into(),
                reason: format!("expected {n} rows, got {}", values.len()),
            });
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(bad(i, i, &format!("row has {} entries, expected {n}", row.len())));
            }
        }
        let id = law.identity();
        for (i, row) in values.iter().enumerate() {
            if row[i] != id {
                return Err(bad(i, i, &format!("diagonal must be {}", fmt_q(&id))));
            }
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if *v != values[j][i] {
                    return Err(bad(i, j, "matrix is not symmetric"));
                }
                let in_range = match law {
                    Law::Additive => *v > Q::zero(),
                    Law::Multiplicative => *v > Q::zero() && *v < Q::one(),
                };
                if !in_range {
                    let reason = match law {
                        Law::Additive => "distance between distinct points must be positive",
                        Law::Multiplicative => "value between distinct points must lie in (0, 1)",
                    };
                    return Err(bad(i, j, reason));
                }
            }
        }
        Ok(FiniteMetric { law, points, values })
    }

    /// Builds a metric from a function on point indices (diagonal ignored).
    pub fn from_fn(law: Law, points: Vec<String>, f: impl Fn(usize, usize) -> Q) -> Result<Self> {
        let n = points.len();
        let values = (0..n)
            .map(|i| (0..n).map(|j| if i == j { law.identity() } else { f(i, j) }).collect())
            .collect();
        FiniteMetric::new(law, points, values)
    }

    pub fn law(&self) -> Law {
        self.law
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn values(&self) -> &[Vec<Q>] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> &Q {
        &self.values[i][j]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    /// Value between two named points.
    pub fn get(&self, a: &str, b: &str) -> Result<&Q> {
        let i = self.index_of(a).ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
        let j = self.index_of(b).ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
        Ok(self.value(i, j))
    }

    /// Restriction to a subset of points, in the given order.
    pub fn restrict(&self, ids: &[&str]) -> Result<FiniteMetric> {
        let idx = ids
            .iter()
            .map(|id| self.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let points = ids.iter().map(|s| s.to_string()).collect();
        FiniteMetric::from_fn(self.law, points, |i, j| self.values[idx[i]][idx[j]].clone())
    }

    /// Distance between two points in the length group of the law (see
    /// [`Law::to_length`]).
    pub fn length(&self, i: usize, j: usize) -> Q {
        self.law.to_length(&self.values[i][j])
    }

    /// Display value of the distance (`-log q` under the multiplicative law).
    pub fn distance_f64(&self, i: usize, j: usize) -> f64 {
        self.law.value_as_distance(&self.values[i][j])
    }

    fn triple(&self, i: usize, j: usize, k: usize) -> (String, String, String) {
        (self.points[i].clone(), self.points[j].clone(), self.points[k].clone())
    }

    /// Checks `d(a,c) <= d(a,b) + d(b,c)` for all triples; the error names the
    /// lexicographically first offending (sorted) triple.
    pub fn check_triangle(&self) -> Result<()> {
        let n = self.len();
        let law = self.law;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (dij, dik, djk) = (self.value(i, j), self.value(i, k), self.value(j, k));
                    let ok = [(dij, dik, djk), (dik, dij, djk), (djk, dij, dik)]
                        .iter()
                        .all(|(x, y, z)| law.cmp_dist(x, &law.combine(y, z)) != Ordering::Greater);
                    if !ok {
                        let (a, b, c) = self.triple(i, j, k);
                        return Err(Error::TriangleViolation(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Checks the strong triangle inequality `d(a,b) <= max(d(a,c), d(b,c))`.
///
/// Returns the lexicographically first (in point order) triple for which one
/// of its three instances fails.
pub fn check_ultrametric(m: &FiniteMetric) -> Verdict<(String, String, String)> {
    let n = m.len();
    let law = m.law;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (dij, dik, djk) = (m.value(i, j), m.value(i, k), m.value(j, k));
                let ok = [(dij, dik, djk), (dik, dij, djk), (djk, dij, dik)]
                    .iter()
                    .all(|(x, y, z)| law.cmp_dist(x, law.max_dist(y, z)) != Ordering::Greater);
                if !ok {
                    return Verdict::Witness(m.triple(i, j, k));
                }
            }
        }
    }
    Verdict::Ok
}

/// Checks Buneman's four-point condition on every quadruple of distinct
/// points: `d(a,b)+d(c,d) <= max(d(a,c)+d(b,d), d(a,d)+d(b,c))` and its
/// permutations, i.e. the two largest of the three pair sums coincide.
///
/// The triangle inequality is a precondition and is validated first.
pub fn check_four_point(m: &FiniteMetric) -> Result<Verdict<(String, String, String, String)>> {
    m.check_triangle()?;
    let n = m.len();
    let law = m.law;
    let sum = |a: usize, b: usize, c: usize, d: usize| law.combine(m.value(a, b), m.value(c, d));
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let sums = [sum(a, b, c, d), sum(a, c, b, d), sum(a, d, b, c)];
                    let ok = (0..3).all(|i| {
                        let (x, y) = (&sums[(i + 1) % 3], &sums[(i + 2) % 3]);
                        law.cmp_dist(&sums[i], law.max_dist(x, y)) != Ordering::Greater
                    });
                    if !ok {
                        return Ok(Verdict::Witness((
                            m.points[a].clone(),
                            m.points[b].clone(),
                            m.points[c].clone(),
                            m.points[d].clone(),
                        )));
                    }
                }
            }
        }
    }
    Ok(Verdict::Ok)
}
