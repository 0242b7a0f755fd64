//! Star-shaped plumbing trees whose boundary is +-(n-surgery on the (p,q)
//! torus knot), their Gram matrices, and the associated Seifert invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cfrac::{self, Rational, WeightString};
use crate::{Error, Result};

/// Parameters (p, q; n): n-surgery on the positive (p, q) torus knot,
/// with 2 <= p < q coprime and n >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurgeryTriple {
    p: BigInt,
    q: BigInt,
    n: BigInt,
}

/// Which construction applies at a given n, split by the position of n
/// relative to pq.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurgeryClass {
    /// 1 <= n <= pq - 2: positive-definite star plumbing, boundary +S3_n
    Gamma1,
    /// n = pq - 1: lens space
    LensMinus,
    /// n = pq: connected sum of two lens spaces
    Reducible,
    /// n = pq + 1: lens space
    LensPlus,
    /// n >= pq + 2: positive-definite star plumbing, boundary -S3_n
    Gamma2,
}

impl SurgeryTriple {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, q, n) = (p.into(), q.into(), n.into());
        if p < BigInt::from(2) {
            return Err(Error::BadTriple(format!("p = {p} must be at least 2")));
        }
        if q <= p {
            return Err(Error::BadTriple(format!("need q > p, got ({p}, {q})")));
        }
        if !p.gcd(&q).is_one() {
            return Err(Error::BadTriple(format!("({p}, {q}) are not coprime")));
        }
        if n < BigInt::one() {
            return Err(Error::BadTriple(format!("n = {n} must be positive")));
        }
        Ok(Self { p, q, n })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn pq(&self) -> BigInt {
        &self.p * &self.q
    }

    pub fn class(&self) -> SurgeryClass {
        let pq = self.pq();
        if self.n == &pq - 1 {
            SurgeryClass::LensMinus
        } else if self.n == pq {
            SurgeryClass::Reducible
        } else if self.n == &pq + 1 {
            SurgeryClass::LensPlus
        } else if self.n < pq {
            SurgeryClass::Gamma1
        } else {
            SurgeryClass::Gamma2
        }
    }
}

impl std::fmt::Display for SurgeryTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}; {})", self.p, self.q, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// boundary is the surgered manifold itself (n < pq)
    Gamma1,
    /// boundary is the surgered manifold with reversed orientation (n > pq)
    Gamma2,
}

/// Construction data for a plumbing tree. Both leg strings are stored
/// center-out (innermost vertex first); `a_leg` expands p/r and `b_leg`
/// expands p/(p-r) where q = kp + r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMeta {
    pub k: i64,
    pub r: i64,
    /// length of the chain of 2s: |pq - n| - 1
    pub two_leg_len: i64,
    pub a_leg: WeightString,
    pub b_leg: WeightString,
}

/// A star-shaped tree with three legs: central vertex 0, then the a-leg,
/// b-leg and 2-chain, each listed center-out with consecutive ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingTree {
    kind: TreeKind,
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    legs: [Vec<usize>; 3],
    meta: TreeMeta,
}

impl PlumbingTree {
    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex ids of the a-leg, b-leg and 2-chain, center-out.
    pub fn legs(&self) -> &[Vec<usize>; 3] {
        &self.legs
    }

    pub fn two_leg_ids(&self) -> &[usize] {
        &self.legs[2]
    }

    pub fn meta(&self) -> &TreeMeta {
        &self.meta
    }

    /// True when the tree's boundary carries the reversed orientation of the
    /// surgered manifold.
    pub fn boundary_reversed(&self) -> bool {
        self.kind == TreeKind::Gamma2
    }

    /// Sum of (weight - 3) over all vertices.
    pub fn i_value(&self) -> i64 {
        self.weights.iter().map(|w| w - 3).sum()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph plumbing {\n");
        for (v, w) in self.weights.iter().enumerate() {
            out.push_str(&format!("  v{v} [label=\"{w}\"];\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn to_i64(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::BadParameter(format!("{what} = {v} too large to realize")))
}

/// Builds the plumbing tree bounding n-surgery on the (p,q) torus knot
/// (up to orientation; see [`PlumbingTree::boundary_reversed`]).
/// n within 1 of pq is rejected: those surgeries are lens spaces or a
/// connected sum and have no such star plumbing.
pub fn surgery_plumbing(t: &SurgeryTriple) -> Result<PlumbingTree> {
    let kind = match t.class() {
        SurgeryClass::Gamma1 => TreeKind::Gamma1,
        SurgeryClass::Gamma2 => TreeKind::Gamma2,
        SurgeryClass::LensMinus => return Err(Error::LensSpace(-1)),
        SurgeryClass::LensPlus => return Err(Error::LensSpace(1)),
        SurgeryClass::Reducible => return Err(Error::Reducible),
    };
    let pq = t.pq();
    let k = to_i64(&t.q().div_floor(t.p()), "k")?;
    let r_big = t.q().mod_floor(t.p());
    let r = to_i64(&r_big, "r")?;
    let two_leg_len = to_i64(&((&pq - t.n()).abs() - 1), "two-chain length")?;
    debug_assert!(two_leg_len >= 1);

    let a_leg = cfrac::expand_frac(t.p(), &r_big)?.reversed();
    let b_leg = cfrac::expand_frac(t.p(), &(t.p() - &r_big))?.reversed();

    let mut weights = vec![2i64];
    let mut edges = Vec::new();
    fn push_leg(
        weights: &mut Vec<i64>,
        edges: &mut Vec<(usize, usize)>,
        leg: &[i64],
    ) -> Vec<usize> {
        let mut ids = Vec::with_capacity(leg.len());
        let mut prev = 0usize;
        for &w in leg {
            let id = weights.len();
            weights.push(w);
            edges.push((prev, id));
            ids.push(id);
            prev = id;
        }
        ids
    }

    let (leg_a_weights, leg_b_weights): (Vec<i64>, Vec<i64>) = match kind {
        TreeKind::Gamma1 => {
            let mut b = b_leg.entries().to_vec();
            b.push(k + 1);
            (a_leg.entries().to_vec(), b)
        }
        TreeKind::Gamma2 => {
            let mut a = a_leg.entries().to_vec();
            *a.last_mut().unwrap() += 1;
            a.extend(std::iter::repeat(2).take((k - 1) as usize));
            (a, b_leg.entries().to_vec())
        }
    };
    let leg_a = push_leg(&mut weights, &mut edges, &leg_a_weights);
    let leg_b = push_leg(&mut weights, &mut edges, &leg_b_weights);
    let leg_two = push_leg(&mut weights, &mut edges, &vec![2; two_leg_len as usize]);

    Ok(PlumbingTree {
        kind,
        weights,
        edges,
        legs: [leg_a, leg_b, leg_two],
        meta: TreeMeta {
            k,
            r,
            two_leg_len,
            a_leg,
            b_leg,
        },
    })
}

/// Symmetric integer matrix: diagonal = vertex weights, 1 where two vertices
/// are joined by an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    order: usize,
    entries: Vec<i64>,
}

impl GramMatrix {
    pub fn from_parts(order: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::BadParameter(format!(
                "{} entries cannot fill a {order} x {order} matrix",
                entries.len()
            )));
        }
        let g = Self { order, entries };
        for i in 0..order {
            for j in 0..i {
                if g.entry(i, j) != g.entry(j, i) {
                    return Err(Error::BadParameter("matrix is not symmetric".into()));
                }
            }
        }
        Ok(g)
    }

    /// Gram matrix of a linear chain with the given diagonal.
    pub fn path(diagonal: &[i64]) -> Self {
        let order = diagonal.len();
        let mut entries = vec![0; order * order];
        for (i, &w) in diagonal.iter().enumerate() {
            entries[i * order + i] = w;
            if i + 1 < order {
                entries[i * order + i + 1] = 1;
                entries[(i + 1) * order + i] = 1;
            }
        }
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.order;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<BigInt> = self.entries.iter().map(|&v| BigInt::from(v)).collect();
        let at = |m: &[BigInt], i: usize, j: usize| m[i * n + j].clone();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(s) = ((k + 1)..n).find(|&i| !m[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, s * n + j);
                }
                sign = -sign;
            }
            let pivot = at(&m, k, k);
            for i in (k + 1)..n {
                let lead = at(&m, i, k);
                for j in (k + 1)..n {
                    let v = (&pivot * &m[i * n + j] - &lead * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let d = at(&m, n - 1, n - 1);
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// All leading principal minors positive (checked fraction-free).
    pub fn is_positive_definite(&self) -> bool {
        let n = self.order;
        let mut m: Vec<BigInt> = self.entries.iter().map(|&v| BigInt::from(v)).collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            if !m[k * n + k].is_positive() {
                return false;
            }
            if k + 1 == n {
                break;
            }
            let pivot = m[k * n + k].clone();
            for i in (k + 1)..n {
                let lead = m[i * n + k].clone();
                for j in (k + 1)..n {
                    let v = (&pivot * &m[i * n + j] - &lead * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
            }
            prev = pivot;
        }
        true
    }
}

pub fn gram(tree: &PlumbingTree) -> GramMatrix {
    let n = tree.rank();
    let mut entries = vec![0i64; n * n];
    for (v, &w) in tree.weights.iter().enumerate() {
        entries[v * n + v] = w;
    }
    for &(a, b) in &tree.edges {
        entries[a * n + b] = 1;
        entries[b * n + a] = 1;
    }
    GramMatrix { order: n, entries }
}

pub fn determinant(g: &GramMatrix) -> BigInt {
    g.determinant()
}

/// Determinant of a star tree in O(rank): expand along the center using the
/// chain continuants of each leg.
pub fn tree_determinant(tree: &PlumbingTree) -> BigInt {
    let mut full = Vec::with_capacity(3);
    let mut clipped = Vec::with_capacity(3);
    for leg in &tree.legs {
        let (mut d1, mut d2) = (BigInt::one(), BigInt::zero());
        for &v in leg.iter().rev() {
            let d0 = BigInt::from(tree.weights[v]) * &d1 - &d2;
            d2 = d1;
            d1 = d0;
        }
        full.push(d1);
        clipped.push(d2);
    }
    let mut det = BigInt::from(tree.weights[0]) * &full[0] * &full[1] * &full[2];
    for l in 0..3 {
        let mut term = clipped[l].clone();
        for (j, a) in full.iter().enumerate() {
            if j != l {
                term *= a;
            }
        }
        det -= term;
    }
    det
}

/// Seifert data of the surgered manifold: base orbifold S2 with e0 = 2 and
/// three exceptional fibers. For n > pq this describes the orientation
/// carried by the plumbing (the reverse of the surgery orientation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub e0: i64,
    pub fractions: [Rational; 3],
}

impl SeifertData {
    pub fn euler_number(&self) -> Rational {
        let sum: Rational = self.fractions.iter().map(|f| f.recip()).sum();
        Rational::from_integer(BigInt::from(self.e0)) - sum
    }

    pub fn det_is_zero(&self) -> bool {
        self.euler_number().is_zero()
    }
}

/// Seifert invariants Y(e0; p/q*, q/p*, (pq-n)/(pq-n-1)) where q* inverts q
/// mod p and p* inverts p mod q. Rejects n within 1 of pq like
/// [`surgery_plumbing`].
pub fn seifert_invariants(t: &SurgeryTriple) -> Result<SeifertData> {
    match t.class() {
        SurgeryClass::Gamma1 | SurgeryClass::Gamma2 => {}
        SurgeryClass::LensMinus => return Err(Error::LensSpace(-1)),
        SurgeryClass::LensPlus => return Err(Error::LensSpace(1)),
        SurgeryClass::Reducible => return Err(Error::Reducible),
    }
    let q_star = cfrac::mod_inverse(t.q(), t.p())?;
    let p_star = cfrac::mod_inverse(t.p(), t.q())?;
    let pq = t.pq();
    Ok(SeifertData {
        e0: 2,
        fractions: [
            Rational::new(t.p().clone(), q_star),
            Rational::new(t.q().clone(), p_star),
            Rational::new(&pq - t.n(), &pq - t.n() - 1),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, ToPrimitive};

    fn triple(p: i64, q: i64, n: i64) -> SurgeryTriple {
        SurgeryTriple::new(p, q, n).unwrap()
    }

    fn sorted_weights(t: &PlumbingTree) -> Vec<i64> {
        let mut w = t.weights().to_vec();
        w.sort();
        w
    }

    #[test]
    fn triple_validation() {
        assert!(SurgeryTriple::new(1, 3, 4).is_err());
        assert!(SurgeryTriple::new(3, 2, 4).is_err());
        assert!(SurgeryTriple::new(2, 4, 4).is_err());
        assert!(SurgeryTriple::new(2, 3, 0).is_err());
        assert!(SurgeryTriple::new(2, 3, 4).is_ok());
    }

    #[test]
    fn class_splits_at_pq() {
        assert_eq!(triple(2, 3, 4).class(), SurgeryClass::Gamma1);
        assert_eq!(triple(2, 3, 5).class(), SurgeryClass::LensMinus);
        assert_eq!(triple(2, 3, 6).class(), SurgeryClass::Reducible);
        assert_eq!(triple(2, 3, 7).class(), SurgeryClass::LensPlus);
        assert_eq!(triple(2, 3, 8).class(), SurgeryClass::Gamma2);
    }

    #[test]
    fn gamma1_fixture() {
        let t = surgery_plumbing(&triple(3, 17, 49)).unwrap();
        assert_eq!(t.kind(), TreeKind::Gamma1);
        assert_eq!(t.meta().k, 5);
        assert_eq!(t.meta().r, 2);
        assert_eq!(t.meta().two_leg_len, 1);
        assert_eq!(t.meta().a_leg.entries(), [2, 2]);
        assert_eq!(t.meta().b_leg.entries(), [3]);
        assert_eq!(t.rank(), 6);
        assert_eq!(sorted_weights(&t), vec![2, 2, 2, 2, 3, 6]);
        assert_eq!(t.legs()[0], vec![1, 2]);
        assert_eq!(t.legs()[1], vec![3, 4]);
        assert_eq!(t.legs()[2], vec![5]);
        assert_eq!(t.weights()[4], 6, "outer b vertex carries k + 1");
    }

    #[test]
    fn gamma2_fixture() {
        let t = surgery_plumbing(&triple(5, 7, 37)).unwrap();
        assert_eq!(t.kind(), TreeKind::Gamma2);
        assert!(t.boundary_reversed());
        assert_eq!(t.meta().k, 1);
        assert_eq!(t.meta().r, 2);
        assert_eq!(t.meta().two_leg_len, 1);
        assert_eq!(t.meta().a_leg.entries(), [2, 3]);
        assert_eq!(t.meta().b_leg.entries(), [3, 2]);
        assert_eq!(t.rank(), 6);
        assert_eq!(sorted_weights(&t), vec![2, 2, 2, 2, 3, 4]);
        // a-leg outermost entry bumped by one, no extra 2s since k = 1
        assert_eq!(t.legs()[0].iter().map(|&v| t.weights()[v]).collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn excluded_surgeries() {
        assert_eq!(surgery_plumbing(&triple(2, 3, 6)), Err(Error::Reducible));
        assert_eq!(surgery_plumbing(&triple(2, 3, 5)), Err(Error::LensSpace(-1)));
        assert_eq!(surgery_plumbing(&triple(2, 3, 7)), Err(Error::LensSpace(1)));
        assert_eq!(seifert_invariants(&triple(2, 3, 6)), Err(Error::Reducible));
    }

    #[test]
    fn path_gram_and_determinant() {
        let g = GramMatrix::path(&[2, 2]);
        assert_eq!(g.row(0), [2, 1]);
        assert_eq!(g.row(1), [1, 2]);
        assert_eq!(g.determinant(), BigInt::from(3));
        assert!(g.is_positive_definite());

        let neg = GramMatrix::path(&[2, -2]);
        assert!(!neg.is_positive_definite());

        let singular = GramMatrix::path(&[2, 1, 2]);
        assert_eq!(singular.determinant().to_i64().unwrap(), 0);
        assert!(!singular.is_positive_definite());
    }

    #[test]
    fn determinant_matches_surgery_coefficient() {
        for (p, q, n) in [(3i64, 17, 49), (5, 7, 37), (2, 3, 4), (2, 3, 9), (4, 7, 26)] {
            let t = surgery_plumbing(&triple(p, q, n)).unwrap();
            let g = gram(&t);
            assert_eq!(g.determinant(), BigInt::from(n), "det at ({p},{q};{n})");
            assert_eq!(tree_determinant(&t), BigInt::from(n));
            assert!(g.is_positive_definite());
        }
    }

    #[test]
    fn determinant_law_small_sweep() {
        for p in 2i64..=7 {
            for q in (p + 1)..=11 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let pq = p * q;
                for n in 1..=(pq + 6) {
                    if (n - pq).abs() <= 1 {
                        continue;
                    }
                    let t = surgery_plumbing(&triple(p, q, n)).unwrap();
                    assert_eq!(tree_determinant(&t), BigInt::from(n), "({p},{q};{n})");
                    if t.rank() <= 14 {
                        assert_eq!(gram(&t).determinant(), BigInt::from(n));
                    }
                }
            }
        }
    }

    #[test]
    fn tree_shape_and_leg_duality() {
        for (p, q, n) in [(3i64, 17, 49), (5, 7, 37), (5, 8, 42), (7, 10, 31), (4, 9, 36 - 2)] {
            let t = surgery_plumbing(&triple(p, q, n)).unwrap();
            let mut degree = vec![0usize; t.rank()];
            for &(a, b) in t.edges() {
                degree[a] += 1;
                degree[b] += 1;
            }
            assert_eq!(degree[0], 3, "center has all three legs");
            assert_eq!(degree.iter().filter(|&&d| d >= 3).count(), 1);
            assert_eq!(t.edges().len(), t.rank() - 1);

            let m = t.meta();
            assert_eq!(cfrac::dual(&m.a_leg), m.b_leg, "legs are dual strings");
            let sa = cfrac::stats(&m.a_leg);
            let sb = cfrac::stats(&m.b_leg);
            assert_eq!(sa.i_value + sb.i_value, -2);

            let expected_i = match t.kind() {
                TreeKind::Gamma1 => m.k - m.two_leg_len - 5,
                TreeKind::Gamma2 => -m.two_leg_len - m.k - 1,
            };
            assert_eq!(t.i_value(), expected_i, "I at ({p},{q};{n})");
        }
    }

    #[test]
    fn legs_realize_seifert_fractions() {
        // center-out leg strings expand p/q* and (with the k+1 cap) q/p*
        for (p, q) in [(3i64, 17), (5, 7), (7, 10), (4, 9), (5, 13)] {
            let n = p * q - 2;
            let t = surgery_plumbing(&triple(p, q, n)).unwrap();
            let s = seifert_invariants(&triple(p, q, n)).unwrap();
            let m = t.meta();
            assert_eq!(cfrac::evaluate(&m.a_leg), s.fractions[0]);
            let mut b_capped = m.b_leg.entries().to_vec();
            b_capped.push(m.k + 1);
            let b_string = cfrac::WeightString::new(b_capped).unwrap();
            assert_eq!(cfrac::evaluate(&b_string), s.fractions[1]);
        }
    }

    #[test]
    fn seifert_fixtures() {
        let rat = |a: i64, b: i64| Rational::new(BigInt::from(a), BigInt::from(b));
        let s = seifert_invariants(&triple(2, 3, 4)).unwrap();
        assert_eq!(s.e0, 2);
        assert_eq!(s.fractions, [rat(2, 1), rat(3, 2), rat(2, 1)]);
        assert_eq!(s.euler_number(), rat(1, 3));

        let s = seifert_invariants(&triple(3, 17, 49)).unwrap();
        assert_eq!(s.fractions, [rat(3, 2), rat(17, 6), rat(2, 1)]);
    }

    #[test]
    fn euler_number_never_vanishes() {
        for p in 2i64..=6 {
            for q in (p + 1)..=9 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let pq = p * q;
                for n in 1..=(pq + 5) {
                    if (n - pq).abs() <= 1 {
                        continue;
                    }
                    let s = seifert_invariants(&triple(p, q, n)).unwrap();
                    let e = s.euler_number();
                    assert!(!s.det_is_zero());
                    // |e| = n / (pq |pq - n|)
                    let expected = Rational::new(BigInt::from(n), BigInt::from(pq * (pq - n).abs()));
                    assert_eq!(e.abs(), expected);
                }
            }
        }
    }

    #[test]
    fn dot_output_mentions_every_vertex() {
        let t = surgery_plumbing(&triple(3, 17, 49)).unwrap();
        let dot = t.to_dot();
        for v in 0..t.rank() {
            assert!(dot.contains(&format!("v{v} ")));
        }
        assert_eq!(dot.matches(" -- ").count(), t.rank() - 1);
    }
}
