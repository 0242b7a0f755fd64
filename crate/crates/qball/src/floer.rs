//! Correction-term obstruction: V-sequences of torus knots and their cables,
//! d-invariants of integral surgeries, and the resulting vanishing test for
//! square surgery coefficients.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cfrac::Rational;
use crate::{Error, Result};

/// Non-increasing sequence V_0 >= V_1 >= ... with steps 0 or 1, stored
/// densely up to its first zero; every later value is zero. The first zero
/// index is nu+.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VSequence {
    values: Vec<u64>,
}

impl VSequence {
    pub fn unknot() -> Self {
        Self { values: Vec::new() }
    }

    pub fn from_values(mut values: Vec<u64>) -> Result<Self> {
        while values.last() == Some(&0) {
            values.pop();
        }
        for w in values.windows(2) {
            if w[1] > w[0] || w[0] - w[1] > 1 {
                return Err(Error::BadParameter(format!(
                    "step {} -> {} is not a 0/1 decrease",
                    w[0], w[1]
                )));
            }
        }
        if values.contains(&0) {
            return Err(Error::BadParameter(
                "zero before the end of the sequence".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn get(&self, i: u64) -> u64 {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.values.get(i).copied())
            .unwrap_or(0)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Smallest index where the sequence vanishes.
    pub fn nu_plus(&self) -> u64 {
        self.values.len() as u64
    }
}

/// Number of elements of the numerical semigroup generated by p and q that
/// are smaller than `bound`.
pub fn semigroup_count(p: u64, q: u64, bound: u64) -> Result<u64> {
    if p == 0 || q == 0 {
        return Err(Error::BadParameter("generators must be positive".into()));
    }
    let bound = usize::try_from(bound)
        .map_err(|_| Error::BadParameter("bound too large to sieve".into()))?;
    Ok(semigroup_sieve(p as usize, q as usize, bound)
        .iter()
        .filter(|&&b| b)
        .count() as u64)
}

fn semigroup_sieve(p: usize, q: usize, bound: usize) -> Vec<bool> {
    let mut hit = vec![false; bound];
    if bound > 0 {
        hit[0] = true;
        for i in 1..bound {
            hit[i] = (i >= p && hit[i - p]) || (i >= q && hit[i - q]);
        }
    }
    hit
}

/// V-sequence of the positive (p,q) torus knot: V_i counts semigroup
/// elements below g + i and subtracts i, where g = (p-1)(q-1)/2. The
/// sequence is dense: it vanishes first exactly at the genus g.
pub fn torus_v(p: u64, q: u64) -> Result<VSequence> {
    if p == 0 || q == 0 {
        return Err(Error::BadParameter("need positive p, q".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::BadParameter(format!("({p}, {q}) not coprime")));
    }
    if p == 1 || q == 1 {
        return Ok(VSequence::unknot());
    }
    let g = ((p - 1) * (q - 1) / 2) as usize;
    let hit = semigroup_sieve(p as usize, q as usize, 2 * g);
    let mut values = Vec::with_capacity(g);
    let mut count = 0u64; // semigroup elements below g + i
    for x in 0..g {
        count += hit[x] as u64;
    }
    for i in 0..g {
        values.push(count - i as u64);
        count += hit[g + i] as u64;
    }
    let v = VSequence::from_values(values)?;
    debug_assert_eq!(v.nu_plus(), g as u64);
    Ok(v)
}

/// V-sequence of the (p, q)-cable of a knot with V-sequence `base`.
/// The cabling recursion gives values on the window 0..=pq/2, and the first
/// zero sits at nu+ = p * nu+(base) + (p-1)(q-1)/2. When nu+ lies past the
/// window the tail is forced (unit steps) only if the window boundary value
/// equals the remaining distance to nu+; otherwise the recursion does not
/// determine the sequence and an error is returned. Slopes q/p above
/// 2 nu+(base) always stay in the determined regime.
pub fn cable_v(base: &VSequence, p: u64, q: u64, upto: Option<u64>) -> Result<VSequence> {
    if p < 2 {
        return Err(Error::BadParameter("cabling needs p >= 2".into()));
    }
    if q == 0 || p.gcd(&q) != 1 {
        return Err(Error::BadParameter(format!(
            "cabling parameters ({p}, {q}) invalid"
        )));
    }
    let torus = torus_v(p, q)?;
    let g = (p - 1) * (q - 1) / 2;
    let window = p * q / 2;
    let nu = if base.nu_plus() == 0 {
        torus.nu_plus()
    } else {
        p * base.nu_plus() + g
    };
    let _ = upto; // all nonzero values are computed regardless
    let mut values = Vec::with_capacity((window + 1).max(nu) as usize);
    for i in 0..=window {
        let phi = (i as i128 - g as i128).rem_euclid(q as i128) as u64;
        let lift = base.get(phi / p).max(base.get((p + q - 1 - phi) / p));
        values.push(torus.get(i) + lift);
    }
    if nu > window {
        if values[window as usize] != nu - window {
            return Err(Error::BadParameter(format!(
                "({p}, {q})-cable values past index {window} are not determined \
                 by the cabling recursion"
            )));
        }
        for j in (0..nu - window).rev() {
            values.push(j);
        }
    }
    let v = VSequence::from_values(values)?;
    if v.nu_plus() != nu {
        return Err(Error::BadParameter(format!(
            "({p}, {q})-cable window disagrees with nu+ = {nu}"
        )));
    }
    Ok(v)
}

/// d-invariant of the lens space p-surgery data d(p, q, i), computed by the
/// standard Euclidean recursion with d(1, 0, 0) = 0.
pub fn d_lens(p: u64, q: u64, i: u64) -> Result<Rational> {
    if p == 0 || i >= p {
        return Err(Error::BadParameter(format!(
            "d({p}, {q}, {i}) is out of range"
        )));
    }
    if p == 1 {
        return Ok(Rational::from_integer(BigInt::from(0)));
    }
    if q == 0 || q >= p || p.gcd(&q) != 1 {
        return Err(Error::BadParameter(format!(
            "d({p}, {q}, {i}) needs 0 < q < p coprime"
        )));
    }
    fn rec(p: i128, q: i128, i: i128) -> Rational {
        if p == 1 {
            return Rational::from_integer(BigInt::from(0));
        }
        let t = 2 * i + 1 - p - q;
        let num = t * t - p * q;
        let term = Rational::new(BigInt::from(num), BigInt::from(4 * p * q));
        term - rec(q, p.rem_euclid(q), i.rem_euclid(q))
    }
    Ok(rec(p as i128, q as i128, i as i128))
}

/// d-invariant of n-surgery on a knot with V-sequence `v`, in the spin-c
/// label 0 <= i < n.
pub fn d_surgery(v: &VSequence, n: u64, i: u64) -> Result<Rational> {
    if n == 0 || i >= n {
        return Err(Error::BadParameter(format!("label {i} out of range for n = {n}")));
    }
    let correction = v.get(i).max(v.get(n - i));
    Ok(d_lens(n, 1, i)? - Rational::from_integer(BigInt::from(2 * correction)))
}

/// One failed vanishing condition: at label index k the sequence value
/// should be k(k+1)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VFailure {
    pub k: u64,
    pub expected: u64,
    pub actual: u64,
}

/// Result of the correction-term test at a square surgery coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DInvVerdict {
    /// n is not a perfect square, so the order of first homology already
    /// rules out a rational ball
    NotSquare { n: u64 },
    Square {
        m: u64,
        /// the m spin-c labels that must carry vanishing d-invariants
        labels: Vec<u64>,
        failures: Vec<VFailure>,
    },
}

impl DInvVerdict {
    pub fn pass(&self) -> bool {
        matches!(self, DInvVerdict::Square { failures, .. } if failures.is_empty())
    }
}

/// Tests whether all d-invariants that must vanish for m^2-surgery to bound
/// a rational ball actually vanish. Equivalent formulations: the label
/// m(m-1)/2 - km (mod m^2) has d = 0 for every 0 <= k < m, or
/// V_{m(m-2k-1)/2} = k(k+1)/2 for every 0 <= k < ceil(m/2); both are
/// computed and compared in debug builds.
pub fn square_surgery_test(v: &VSequence, n: u64) -> DInvVerdict {
    let m = n.isqrt();
    if m * m != n {
        return DInvVerdict::NotSquare { n };
    }
    let labels: Vec<u64> = (0..m)
        .map(|k| (m * (m - 1) / 2 + n - k * m) % n)
        .collect();
    let mut failures = Vec::new();
    for k in 0..m.div_ceil(2) {
        let index = m * (m - 2 * k - 1) / 2;
        let expected = k * (k + 1) / 2;
        let actual = v.get(index);
        if actual != expected {
            failures.push(VFailure {
                k,
                expected,
                actual,
            });
        }
    }
    let verdict = DInvVerdict::Square {
        m,
        labels,
        failures,
    };
    #[cfg(debug_assertions)]
    if let DInvVerdict::Square { labels, failures, .. } = &verdict {
        use num_traits::Zero;
        let by_d = labels
            .iter()
            .all(|&l| d_surgery(v, n, l).unwrap().is_zero());
        assert_eq!(by_d, failures.is_empty(), "the two test routes disagree");
    }
    verdict
}

/// Surgery coefficients m^2 compatible with nu+ = nu: the smallest m has
/// (2m-1)^2 >= 1 + 8 nu and the largest has 2m - 3 < 0 or
/// (2m-3)^2 < 9 + 8 nu.
pub fn m_range(nu: u64) -> std::ops::RangeInclusive<u64> {
    let fits_low = |m: u64| (2 * m as u128 - 1).pow(2) >= 1 + 8 * nu as u128;
    let fits_high = |m: u64| 2 * m < 3 || (2 * m as u128 - 3).pow(2) < 9 + 8 * nu as u128;
    let mut lo = ((1 + (1 + 8 * nu as u128).isqrt()) / 2) as u64;
    lo = lo.max(1);
    while lo > 1 && fits_low(lo - 1) {
        lo -= 1;
    }
    while !fits_low(lo) {
        lo += 1;
    }
    let mut hi = lo.max((((9 + 8 * nu as u128).isqrt() + 3) / 2) as u64);
    while !fits_high(hi) {
        hi -= 1;
    }
    while fits_high(hi + 1) {
        hi += 1;
    }
    lo..=hi
}

/// Window of slopes q/p a bounding cable slope must satisfy, from nu+ and
/// V_0 of the companion knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeBounds {
    pub lower: Rational,
    /// the bound is a strict inequality
    pub lower_is_strict: bool,
    /// false when an irrational bound had to be rounded down (still sound)
    pub lower_is_exact: bool,
    /// always strict
    pub upper: Rational,
}

/// For q > 1 the slope satisfies q/p > 1/(9 V_0); for q = 1 it satisfies
/// q/p >= 1/(2 + sqrt(1 + 8 V_0)). In both regimes q/p < 20 nu+.
pub fn slope_bounds(nu: u64, v0: u64, q_is_one: bool) -> Result<SlopeBounds> {
    if v0 < 1 || nu < v0 {
        return Err(Error::BadParameter(format!(
            "need nu >= v0 >= 1, got nu = {nu}, v0 = {v0}"
        )));
    }
    let upper = Rational::from_integer(BigInt::from(20 * nu as u128));
    if !q_is_one {
        return Ok(SlopeBounds {
            lower: Rational::new(BigInt::from(1), BigInt::from(9 * v0 as u128)),
            lower_is_strict: true,
            lower_is_exact: true,
            upper,
        });
    }
    let radicand = 1 + 8 * v0 as u128;
    let root = radicand.isqrt();
    let exact = root * root == radicand;
    let denom = 2 + if exact { root } else { root + 1 };
    Ok(SlopeBounds {
        lower: Rational::new(BigInt::from(1), BigInt::from(denom)),
        lower_is_strict: false,
        lower_is_exact: exact,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn semigroup_fixtures() {
        assert_eq!(semigroup_count(2, 3, 1).unwrap(), 1);
        assert_eq!(semigroup_count(2, 3, 0).unwrap(), 0);
        assert_eq!(semigroup_count(3, 5, 8).unwrap(), 4); // {0, 3, 5, 6}
    }

    #[test]
    fn torus_v_fixtures() {
        assert_eq!(torus_v(2, 3).unwrap().values(), [1]);
        assert_eq!(torus_v(3, 5).unwrap().values(), [2, 1, 1, 1]);
        assert_eq!(torus_v(2, 1).unwrap().values(), &[] as &[u64]);
        assert!(torus_v(2, 4).is_err());
    }

    #[test]
    fn torus_v_shape() {
        for (p, q) in [(2u64, 5u64), (2, 7), (3, 4), (3, 7), (4, 5), (5, 6), (5, 7), (7, 9)] {
            let v = torus_v(p, q).unwrap();
            assert_eq!(v.nu_plus(), (p - 1) * (q - 1) / 2, "nu+ is the genus");
            for i in 0..v.nu_plus() {
                assert!(v.get(i) >= 1);
            }
        }
    }

    #[test]
    fn cable_fixtures() {
        let trefoil = torus_v(2, 3).unwrap();
        assert_eq!(
            cable_v(&VSequence::unknot(), 2, 3, None).unwrap().values(),
            [1]
        );
        let c = cable_v(&trefoil, 2, 3, None).unwrap();
        assert_eq!(c.nu_plus(), 3);
        assert_eq!(c.values(), [1, 1, 1]);
        assert_eq!(cable_v(&trefoil, 3, 13, None).unwrap().nu_plus(), 15);
        // window shorter than nu+: forced unit-step completion
        let c = cable_v(&trefoil, 2, 1, None).unwrap();
        assert_eq!(c.values(), [1, 1]);
        assert!(cable_v(&trefoil, 1, 2, None).is_err());
        assert!(cable_v(&trefoil, 2, 4, None).is_err());
        // the slope is too small for the recursion to pin down the tail
        let wide = torus_v(3, 5).unwrap();
        assert!(cable_v(&wide, 2, 1, None).is_err());
    }

    #[test]
    fn cable_of_unknot_is_the_torus_knot() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 4), (3, 5), (4, 7)] {
            assert_eq!(
                cable_v(&VSequence::unknot(), p, q, None).unwrap(),
                torus_v(p, q).unwrap()
            );
        }
    }

    #[test]
    fn d_lens_fixtures() {
        assert_eq!(d_lens(9, 1, 3).unwrap(), rat(0, 1));
        assert_eq!(d_lens(9, 1, 0).unwrap(), rat(2, 1));
        assert_eq!(d_lens(2, 1, 0).unwrap(), rat(1, 4));
        assert!(d_lens(9, 1, 9).is_err());
        assert!(d_lens(9, 3, 0).is_err());
    }

    #[test]
    fn d_lens_closed_form_when_q_is_one() {
        for n in 1u64..60 {
            for i in 0..n {
                let got = d_lens(n, 1, i).unwrap();
                let t = 2 * i as i64 - n as i64;
                assert_eq!(got, rat(t * t - n as i64, 4 * n as i64));
            }
        }
    }

    #[test]
    fn d_lens_conjugation_symmetry() {
        // spin-c conjugation: labels i and (p + q - 1 - i) mod p agree
        for (p, q) in [(5u64, 2u64), (7, 3), (11, 4), (9, 2), (13, 5)] {
            for i in 0..p {
                let j = (p + q - 1 - i) % p;
                assert_eq!(d_lens(p, q, i).unwrap(), d_lens(p, q, j).unwrap());
            }
        }
    }

    #[test]
    fn d_surgery_fixtures() {
        let trefoil = torus_v(2, 3).unwrap();
        assert_eq!(d_surgery(&trefoil, 9, 0).unwrap(), rat(0, 1));
        assert_eq!(d_surgery(&trefoil, 4, 1).unwrap(), rat(0, 1));
        let unknot = VSequence::unknot();
        for n in [4u64, 9, 12] {
            for i in 0..n {
                assert_eq!(d_surgery(&unknot, n, i).unwrap(), d_lens(n, 1, i).unwrap());
            }
        }
    }

    #[test]
    fn square_test_fixtures() {
        let trefoil = torus_v(2, 3).unwrap();
        assert!(square_surgery_test(&trefoil, 4).pass());
        assert!(square_surgery_test(&trefoil, 9).pass());
        let v16 = square_surgery_test(&trefoil, 16);
        assert!(!v16.pass());
        let DInvVerdict::Square { failures, .. } = &v16 else {
            panic!()
        };
        assert_eq!(
            failures,
            &[VFailure {
                k: 1,
                expected: 1,
                actual: 0
            }]
        );
        assert!(!square_surgery_test(&trefoil, 10).pass());
        assert!(matches!(
            square_surgery_test(&trefoil, 10),
            DInvVerdict::NotSquare { n: 10 }
        ));
    }

    #[test]
    fn square_test_labels_are_self_conjugate() {
        let v = torus_v(3, 5).unwrap();
        for n in [4u64, 9, 16, 25, 36] {
            let DInvVerdict::Square { m, labels, .. } = square_surgery_test(&v, n) else {
                panic!()
            };
            assert_eq!(labels.len() as u64, m);
            for &l in &labels {
                assert!(labels.contains(&((n - l) % n)), "label set closed under i -> n-i");
            }
        }
    }

    #[test]
    fn m_range_fixtures() {
        assert_eq!(m_range(1), 2..=3);
        assert_eq!(m_range(0), 1..=2);
        assert_eq!(m_range(3), 3..=4);
    }

    #[test]
    fn m_range_is_exactly_the_set_of_valid_m() {
        for nu in 0u64..200 {
            let r = m_range(nu);
            for m in 1..=40u64 {
                let low_ok = (2 * m - 1).pow(2) >= 1 + 8 * nu;
                let high_ok = 2 * m < 3 || (2 * m - 3).pow(2) < 9 + 8 * nu;
                assert_eq!(
                    r.contains(&m),
                    low_ok && high_ok,
                    "nu = {nu}, m = {m}, range {r:?}"
                );
            }
        }
    }

    #[test]
    fn slope_bound_fixtures() {
        let b = slope_bounds(1, 1, false).unwrap();
        assert_eq!(b.lower, rat(1, 9));
        assert!(b.lower_is_strict);
        assert_eq!(b.upper, rat(20, 1));

        let b = slope_bounds(1, 1, true).unwrap();
        assert_eq!(b.lower, rat(1, 5));
        assert!(!b.lower_is_strict);
        assert!(b.lower_is_exact);

        // rounded case: 1 + 8*2 = 17 is not a square; sound rounding down
        let b = slope_bounds(2, 2, true).unwrap();
        assert_eq!(b.lower, rat(1, 7));
        assert!(!b.lower_is_exact);

        assert!(slope_bounds(0, 1, false).is_err());
        assert!(slope_bounds(1, 2, false).is_err());
    }

    #[test]
    fn generic_slope_window_contains_the_sharp_trefoil_window() {
        // for the trefoil the sharp window is (1/7, 10); the generic bounds
        // at nu = V0 = 1 must be at least as wide
        let b = slope_bounds(1, 1, false).unwrap();
        assert!(b.lower <= rat(1, 7));
        assert!(b.upper >= rat(10, 1));
    }

    proptest! {
        #[test]
        fn torus_v_matches_semigroup_definition(pi in 0usize..5, q in 2u64..14) {
            let p = [2u64, 3, 5, 7, 11][pi];
            prop_assume!(p < q && num_integer::gcd(p, q) == 1);
            let v = torus_v(p, q).unwrap();
            let g = (p - 1) * (q - 1) / 2;
            for i in 0..(2 * g) {
                let expected = semigroup_count(p, q, g + i).unwrap() - i;
                prop_assert_eq!(v.get(i), expected);
            }
        }

        #[test]
        fn d_surgery_conjugation(n in 2u64..40, i in 0u64..40) {
            prop_assume!(i < n);
            let v = torus_v(2, 7).unwrap();
            let j = (n - i) % n;
            prop_assert_eq!(d_surgery(&v, n, i).unwrap(), d_surgery(&v, n, j).unwrap());
        }

        #[test]
        fn cable_v_is_a_valid_sequence(q in 1u64..22, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            prop_assume!(num_integer::gcd(p, q) == 1);
            let base = torus_v(2, 5).unwrap();
            let nu = p * base.nu_plus() + (p - 1) * (q - 1) / 2;
            match cable_v(&base, p, q, None) {
                Ok(c) => prop_assert_eq!(c.nu_plus(), nu),
                // only the underdetermined small-slope regime may refuse
                Err(_) => prop_assert!(nu > p * q / 2),
            }
        }
    }
}
