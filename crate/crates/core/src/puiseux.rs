//! Plane branches given by Puiseux data relative to `L = Z(x)`.
//!
//! A branch is a root `y = η(x) = Σ c_e x^e` with rational exponents and
//! rational coefficients. Its conjugates multiply the coefficient of `x^e`
//! by `ζ^{j·n·e}`, where `ζ` is a primitive `n`-th root of unity; since the
//! coefficients are rational, comparing a coefficient with a conjugated one
//! only needs to know whether `ζ^{j·n·e}` is `1`, `-1` or not real.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};
use crate::ultrametric::{
    check_ultrametric, rooted_leaf_iso, ultrametric_to_depth_tree, FiniteMetric, Law, RootedTree, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxBranch {
    id: String,
    terms: Vec<(Q, Q)>,
    n: u64,
}

fn den(e: &Q) -> u64 {
    e.denom().to_u64().expect("exponent denominator fits in u64")
}

impl PuiseuxBranch {
    /// Terms are `(exponent, coefficient)` pairs.
    pub fn new(id: &str, terms: Vec<(Q, Q)>) -> Result<Self> {
        let bad = |reason: String| Error::InvalidBranch { id: id.into(), reason };
        for (i, (e, c)) in terms.iter().enumerate() {
            if !e.is_positive() {
                return Err(bad(format!("exponent {} is not positive", fmt_q(e))));
            }
            if c.is_zero() {
                return Err(bad(format!("coefficient of x^{} is zero", fmt_q(e))));
            }
            if i > 0 && terms[i - 1].0 >= *e {
                return Err(bad("exponents must be strictly increasing".into()));
            }
        }
        let n = terms.iter().fold(1u64, |acc, (e, _)| acc.lcm(&den(e)));
        Ok(PuiseuxBranch {
            id: id.into(),
            terms,
            n,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }

    /// Ramification index: the lcm of the exponent denominators.
    pub fn ramification(&self) -> u64 {
        self.n
    }

    /// Multiplicity `min(n, n·e₁)`.
    pub fn multiplicity(&self) -> u64 {
        match self.terms.first() {
            Some((e, _)) if *e < Q::one() => (Q::from_integer(BigInt::from(self.n)) * e)
                .to_integer()
                .to_u64()
                .unwrap(),
            _ => self.n,
        }
    }

    /// Intersection number with `L = Z(x)`.
    pub fn l_intersection(&self) -> u64 {
        self.n
    }

    fn coeff(&self, e: &Q) -> Option<&Q> {
        self.terms.iter().find(|(x, _)| x == e).map(|(_, c)| c)
    }

    /// Index at exponent `t`: lcm of the denominators of exponents `< t`.
    pub fn index_below(&self, t: &Q) -> u64 {
        self.terms
            .iter()
            .take_while(|(e, _)| e < t)
            .fold(1, |acc, (e, _)| acc.lcm(&den(e)))
    }

    /// Exponents at which the index jumps.
    pub fn characteristic_exponents(&self) -> Vec<Q> {
        let mut out = Vec::new();
        let mut l = 1u64;
        for (e, _) in &self.terms {
            let next = l.lcm(&den(e));
            if next != l {
                out.push(e.clone());
            }
            l = next;
        }
        out
    }
}

/// `Z(yⁿ - xᵐ)` with `gcd(n, m) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialBranch {
    pub n: u64,
    pub m: u64,
}

impl MonomialBranch {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if n == 0 || m == 0 || n.gcd(&m) != 1 {
            return Err(Error::InvalidBranch {
                id: format!("({n},{m})"),
                reason: "need coprime positive n, m".into(),
            });
        }
        Ok(MonomialBranch { n, m })
    }

    /// The root `y = x^{m/n}`.
    pub fn to_puiseux(&self, id: &str) -> PuiseuxBranch {
        let e = Q::new(BigInt::from(self.m), BigInt::from(self.n));
        PuiseuxBranch::new(id, vec![(e, Q::one())]).unwrap()
    }
}

/// `ord_x(η_a - τ_j η_b)`, or `None` when the difference vanishes.
fn conjugate_difference_order(a: &PuiseuxBranch, b: &PuiseuxBranch, j: u64) -> Option<Q> {
    let mut exps: Vec<&Q> = a.terms.iter().chain(b.terms.iter()).map(|(e, _)| e).collect();
    exps.sort();
    exps.dedup();
    let nb = b.n;
    for e in exps {
        let zero = Q::zero();
        let ca = a.coeff(e).unwrap_or(&zero);
        let cb = b.coeff(e).unwrap_or(&zero);
        // ζ^k with k = j·n_b·e, an integer because den(e) divides n_b
        let k = (Q::from_integer(BigInt::from(j * nb)) * e)
            .to_integer()
            .to_u64()
            .unwrap()
            % nb;
        let differs = if k == 0 {
            ca != cb
        } else if 2 * k == nb {
            *ca != -cb
        } else {
            !ca.is_zero() || !cb.is_zero()
        };
        if differs {
            return Some(e.clone());
        }
    }
    None
}

/// Contact order: the largest order of `η_a - τ(η_b)` over the conjugates
/// `τ(η_b)`. `None` stands for `∞`, which happens iff both data describe the
/// same branch.
pub fn contact_order(a: &PuiseuxBranch, b: &PuiseuxBranch) -> Option<Q> {
    let mut best = Q::zero();
    for j in 0..b.n {
        let o = conjugate_difference_order(a, b, j)?;
        if o > best {
            best = o;
        }
    }
    Some(best)
}

fn finite_contact(a: &PuiseuxBranch, b: &PuiseuxBranch) -> Result<Q> {
    contact_order(a, b).ok_or_else(|| Error::SameBranch(a.id.clone(), b.id.clone()))
}

/// `∫₀^k de / i(e)` with the index function of `a`.
fn index_integral(a: &PuiseuxBranch, k: &Q) -> Q {
    let mut total = Q::zero();
    let mut pos = Q::zero();
    let mut l = 1u64;
    for (e, _) in &a.terms {
        if e >= k {
            break;
        }
        total += (e - &pos) / Q::from_integer(BigInt::from(l));
        pos = e.clone();
        l = l.lcm(&den(e));
    }
    total + (k - pos) / Q::from_integer(BigInt::from(l))
}

/// `A·B = n_a · n_b · ∫₀^{k(A,B)} de / i(e)`.
pub fn intersection_number(a: &PuiseuxBranch, b: &PuiseuxBranch) -> Result<Q> {
    let k = finite_contact(a, b)?;
    let v = Q::from_integer(BigInt::from(a.n * b.n)) * index_integral(a, &k);
    if !v.is_integer() {
        return Err(Error::Internal(format!(
            "intersection of {} and {} is not an integer: {}",
            a.id,
            b.id,
            fmt_q(&v)
        )));
    }
    Ok(v)
}

/// `ord_t f_b(t^{n_a}, η_a(t^{n_a})) = n_a · Σ_j ord_x(η_a - τ_j η_b)`.
pub fn parametrization_intersection(a: &PuiseuxBranch, b: &PuiseuxBranch) -> Result<Q> {
    let mut sum = Q::zero();
    for j in 0..b.n {
        sum += conjugate_difference_order(a, b, j).ok_or_else(|| Error::SameBranch(a.id.clone(), b.id.clone()))?;
    }
    Ok(Q::from_integer(BigInt::from(a.n)) * sum)
}

/// `ord_t (t^{n·m'} - t^{m·n'})` for `(tⁿ, tᵐ)` substituted into `y^{n'} - x^{m'}`.
pub fn oracle_intersection(a: MonomialBranch, b: MonomialBranch) -> Result<u64> {
    if a == b {
        return Err(Error::SameBranch(
            format!("({},{})", a.n, a.m),
            format!("({},{})", b.n, b.m),
        ));
    }
    Ok((a.n * b.m).min(a.m * b.n))
}

/// Eggers-Wall tree: rooted at `L`, with leaves the branches. Every vertex
/// carries its exponent (`None` for `∞` at leaves) and the index of the
/// segment joining it to its parent.
#[derive(Debug, Clone)]
pub struct EWTree {
    tree: RootedTree,
    exponent: Vec<Option<Q>>,
    index: Vec<u64>,
}

impl EWTree {
    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn exponent(&self, v: usize) -> Option<&Q> {
        self.exponent[v].as_ref()
    }

    /// Index on the segment from the parent of `v` to `v`; `1` at the root.
    pub fn index(&self, v: usize) -> u64 {
        self.index[v]
    }

    /// Finite exponents of the non-root vertices, sorted and deduplicated.
    pub fn node_exponents(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self.exponent.iter().skip(1).flatten().cloned().collect();
        out.sort();
        out.dedup();
        out
    }

    /// Index on each leaf segment, by branch id.
    pub fn leaf_indices(&self) -> Vec<(String, u64)> {
        let mut out: Vec<(String, u64)> = self
            .tree
            .leaves()
            .into_iter()
            .map(|l| (self.tree.label(l).unwrap().to_string(), self.index[l]))
            .collect();
        out.sort();
        out
    }

    fn add(&mut self, parent: usize, label: Option<String>, exponent: Option<Q>, index: u64) -> usize {
        let v = self.tree.add_child(parent, label);
        self.exponent.push(exponent);
        self.index.push(index);
        v
    }

    /// Adds the segment of `rep` from `parent` (at exponent `base`) up to
    /// `top`, with a marked point at each index jump in between.
    fn segment(
        &mut self,
        mut parent: usize,
        base: &Q,
        top: Option<&Q>,
        rep: &PuiseuxBranch,
        end: Option<String>,
    ) -> usize {
        for e in rep.characteristic_exponents() {
            if e > *base && top.is_none_or(|t| e < *t) {
                let idx = rep.index_below(&e);
                parent = self.add(parent, None, Some(e.clone()), idx);
            }
        }
        let below_top = match top {
            Some(t) => rep.index_below(t),
            None => rep.ramification(),
        };
        self.add(parent, end, top.cloned(), below_top)
    }

    fn grow(&mut self, parent: usize, base: &Q, set: &[&PuiseuxBranch], contact: &dyn Fn(&str, &str) -> Q) {
        if let [single] = set {
            self.segment(parent, base, None, single, Some(single.id.clone()));
            return;
        }
        let mut kappa: Option<Q> = None;
        for (i, a) in set.iter().enumerate() {
            for b in &set[i + 1..] {
                let k = contact(&a.id, &b.id);
                if kappa.as_ref().is_none_or(|x| k < *x) {
                    kappa = Some(k);
                }
            }
        }
        let kappa = kappa.unwrap();
        let node = self.segment(parent, base, Some(&kappa), set[0], None);
        let mut classes: Vec<Vec<&PuiseuxBranch>> = Vec::new();
        for &b in set {
            match classes.iter_mut().find(|c| contact(&c[0].id, &b.id) > kappa) {
                Some(c) => c.push(b),
                None => classes.push(vec![b]),
            }
        }
        for c in classes {
            self.grow(node, &kappa, &c, contact);
        }
    }
}

/// Glues the segments `[0, ∞]` of the branches along their contact orders.
pub fn eggers_wall_tree(branches: &[PuiseuxBranch]) -> Result<EWTree> {
    if branches.is_empty() {
        return Err(Error::TooFewBranches { needed: 1, got: 0 });
    }
    let mut contacts = std::collections::BTreeMap::new();
    for (i, a) in branches.iter().enumerate() {
        for b in &branches[..i] {
            if a.id == b.id {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            let k = finite_contact(a, b)?;
            contacts.insert((a.id.clone(), b.id.clone()), k.clone());
            contacts.insert((b.id.clone(), a.id.clone()), k);
        }
    }
    let contact = |a: &str, b: &str| contacts[&(a.to_string(), b.to_string())].clone();
    let mut ew = EWTree {
        tree: RootedTree::new(Some("L".into())),
        exponent: vec![Some(Q::zero())],
        index: vec![1],
    };
    let refs: Vec<&PuiseuxBranch> = branches.iter().collect();
    ew.grow(0, &Q::zero(), &refs, &contact);
    Ok(ew)
}

/// `u_L(A,B) = (L·A)(L·B)/(A·B)` on the given branches.
pub fn u_metric(branches: &[PuiseuxBranch]) -> Result<FiniteMetric> {
    let n = branches.len();
    let mut values = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&branches[i], &branches[j]);
            let ab = intersection_number(a, b)?;
            let v = Q::from_integer(BigInt::from(a.l_intersection() * b.l_intersection())) / ab;
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    FiniteMetric::new(Law::Additive, branches.iter().map(|b| b.id.clone()).collect(), values)
}

#[derive(Debug, Clone)]
pub struct PloskiReport {
    pub metric: FiniteMetric,
    pub ultrametric: Verdict<(String, String, String)>,
    pub iso_ok: bool,
    pub ew: EWTree,
    pub ultrametric_tree: Option<RootedTree>,
}

impl PloskiReport {
    pub fn ok(&self) -> bool {
        self.ultrametric.is_ok() && self.iso_ok
    }
}

/// Checks that `u_L` is an ultrametric whose tree is the Eggers-Wall tree
/// with its index-jump points suppressed.
pub fn ploski_check(branches: &[PuiseuxBranch]) -> Result<PloskiReport> {
    if branches.len() < 2 {
        return Err(Error::TooFewBranches {
            needed: 2,
            got: branches.len(),
        });
    }
    let ew = eggers_wall_tree(branches)?;
    let metric = u_metric(branches)?;
    let ultrametric = check_ultrametric(&metric);
    let (iso_ok, ultrametric_tree) = if ultrametric.is_ok() {
        let t = ultrametric_to_depth_tree(&metric)?;
        (rooted_leaf_iso(&t, &ew.tree)?, Some(t))
    } else {
        (false, None)
    };
    Ok(PloskiReport {
        metric,
        ultrametric,
        iso_ok,
        ew,
        ultrametric_tree,
    })
}

/// Płoski's quotients `(A·B)/(m(A)m(B))` on a triple, in the order
/// `(B,C)`, `(C,A)`, `(A,B)`.
pub fn ploski_quotients(a: &PuiseuxBranch, b: &PuiseuxBranch, c: &PuiseuxBranch) -> Result<[Q; 3]> {
    let q = |x: &PuiseuxBranch, y: &PuiseuxBranch| -> Result<Q> {
        Ok(intersection_number(x, y)? / Q::from_integer(BigInt::from(x.multiplicity() * y.multiplicity())))
    };
    Ok([q(b, c)?, q(c, a)?, q(a, b)?])
}

/// True iff the two smallest of three values are equal.
pub fn two_smallest_equal(q: &[Q; 3]) -> bool {
    let mut s = q.clone();
    s.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    s[0] == s[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn br(id: &str, terms: &[(i64, i64, i64)]) -> PuiseuxBranch {
        PuiseuxBranch::new(id, terms.iter().map(|&(p, q, c)| (frac(p, q), int(c))).collect()).unwrap()
    }

    fn abc() -> [PuiseuxBranch; 3] {
        [br("A", &[(3, 2, 1)]), br("B", &[(5, 3, 1)]), br("C", &[(5, 6, 1)])]
    }

    #[test]
    fn multiplicities() {
        let [a, b, c] = abc();
        assert_eq!((a.multiplicity(), b.multiplicity(), c.multiplicity()), (2, 3, 5));
        assert_eq!(br("y0", &[]).multiplicity(), 1);
        assert_eq!(br("s", &[(2, 1, 1)]).multiplicity(), 1);
    }

    #[test]
    fn contacts_and_intersections() {
        let [a, b, c] = abc();
        assert_eq!(contact_order(&a, &b), Some(frac(3, 2)));
        assert_eq!(contact_order(&a, &c), Some(frac(5, 6)));
        assert_eq!(contact_order(&b, &c), Some(frac(5, 6)));
        assert_eq!(intersection_number(&a, &b).unwrap(), int(9));
        assert_eq!(intersection_number(&a, &c).unwrap(), int(10));
        assert_eq!(intersection_number(&b, &c).unwrap(), int(15));
        assert_eq!(index_integral(&a, &frac(3, 2)), frac(3, 2));
    }

    #[test]
    fn conjugate_representatives_are_the_same_branch() {
        let a = br("A", &[(3, 2, 1)]);
        let a2 = br("A'", &[(3, 2, -1)]);
        assert_eq!(contact_order(&a, &a2), None);
        assert_eq!(
            intersection_number(&a, &a2).unwrap_err(),
            Error::SameBranch("A".into(), "A'".into())
        );
        // x^{2/3} and -x^{2/3}: -1 is not a cube root of unity times 1
        let b = br("B", &[(2, 3, 1)]);
        let b2 = br("B'", &[(2, 3, -1)]);
        assert_eq!(contact_order(&b, &b2), Some(frac(2, 3)));
    }

    #[test]
    fn contact_through_a_non_identity_conjugate() {
        let a = PuiseuxBranch::new("A", vec![(frac(3, 2), int(1)), (int(2), int(1))]).unwrap();
        let b = PuiseuxBranch::new("B", vec![(frac(3, 2), int(-1)), (frac(5, 2), int(1))]).unwrap();
        assert_eq!(contact_order(&a, &b), Some(int(2)));
        // f_B = y^2 - x^3 + 2x^4 - x^5 at (t^2, t^3 + t^4) is 2t^7 + ...
        assert_eq!(intersection_number(&a, &b).unwrap(), int(7));
        assert_eq!(parametrization_intersection(&a, &b).unwrap(), int(7));
        let ew = eggers_wall_tree(&[a, b]).unwrap();
        assert_eq!(ew.node_exponents(), [frac(3, 2), int(2)]);
        assert_eq!(ew.leaf_indices(), [("A".to_string(), 2), ("B".to_string(), 2)]);
    }

    #[test]
    fn smooth_against_monomial() {
        for m in 1..6 {
            let y0 = br("y0", &[]);
            let xm = br("xm", &[(m, 1, 1)]);
            assert_eq!(intersection_number(&y0, &xm).unwrap(), int(m));
            assert_eq!(parametrization_intersection(&y0, &xm).unwrap(), int(m));
        }
    }

    #[test]
    fn monomial_oracle() {
        let mb = |n, m| MonomialBranch::new(n, m).unwrap();
        assert_eq!(oracle_intersection(mb(2, 3), mb(3, 5)).unwrap(), 9);
        assert_eq!(oracle_intersection(mb(2, 3), mb(6, 5)).unwrap(), 10);
        assert_eq!(oracle_intersection(mb(1, 1), mb(1, 2)).unwrap(), 1);
        assert!(oracle_intersection(mb(2, 3), mb(2, 3)).is_err());
        assert!(MonomialBranch::new(2, 4).is_err());
    }

    #[test]
    fn ew_tree_of_three_branches() {
        let ew = eggers_wall_tree(&abc()).unwrap();
        assert_eq!(ew.node_exponents(), vec![frac(5, 6), frac(3, 2), frac(5, 3)]);
        assert_eq!(
            ew.leaf_indices(),
            vec![("A".into(), 2), ("B".into(), 3), ("C".into(), 6)]
        );
        // every segment below the node at 5/6 has index 1
        let t = ew.tree();
        let first = t.children(0)[0];
        assert_eq!(ew.exponent(first), Some(&frac(5, 6)));
        assert_eq!(ew.index(first), 1);
    }

    #[test]
    fn ew_tree_of_one_branch() {
        let ew = eggers_wall_tree(&[br("A", &[(3, 2, 1)])]).unwrap();
        let t = ew.tree();
        assert_eq!(t.len(), 3);
        let mid = t.children(0)[0];
        assert_eq!((ew.exponent(mid), ew.index(mid)), (Some(&frac(3, 2)), 1));
        let leaf = t.children(mid)[0];
        assert_eq!((ew.exponent(leaf), ew.index(leaf)), (None, 2));
    }

    #[test]
    fn cherry_of_smooth_branches() {
        let ew = eggers_wall_tree(&[br("P", &[]), br("Q", &[(1, 1, 1)])]).unwrap();
        assert_eq!(ew.node_exponents(), vec![int(1)]);
        assert_eq!(ew.tree().len(), 4);
    }

    #[test]
    fn ploski_on_the_three_branches() {
        let [a, b, c] = abc();
        let q = ploski_quotients(&a, &b, &c).unwrap();
        assert_eq!(q, [int(1), int(1), frac(3, 2)]);
        assert!(two_smallest_equal(&q));
        let r = ploski_check(&abc()).unwrap();
        assert!(r.ok());
        assert_eq!(r.metric.get("A", "B").unwrap(), &frac(2, 3));
        // L = Z(x) is tangent to C, so L·C = 6 rather than m(C) = 5
        assert_eq!(r.metric.get("B", "C").unwrap(), &frac(6, 5));
        let two = ploski_check(&[br("A", &[(3, 2, 1)]), br("B", &[(5, 3, 1)])]).unwrap();
        assert!(two.ok());
    }

    #[test]
    fn invalid_branches() {
        assert!(PuiseuxBranch::new("x", vec![(frac(3, 2), int(1)), (frac(1, 2), int(1))]).is_err());
        assert!(PuiseuxBranch::new("x", vec![(frac(3, 2), int(0))]).is_err());
        assert!(PuiseuxBranch::new("x", vec![(frac(-1, 2), int(1))]).is_err());
    }
}
