//! The eleven families of linear plumbing strings whose lens spaces bound
//! rational homology balls, organized in five groups by their I-value.
//! Four families are generated by a seed string 𝐛 together with its
//! complementary string; the other seven are two-parameter templates.
//!
//! Besides recognizing a string or a lens space, this module decides the two
//! boundary surgery cases that do not produce a Seifert tree over three
//! singular fibers: n = pq (a connected sum of two lens spaces) and
//! n = pq ± 1 (a single lens space).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::cfrac::{self, WeightString};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B1,
    B2,
    B3,
    C1,
    C2,
    C3,
    D1,
    D2,
    D3,
    E,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::A,
        Family::B1,
        Family::B2,
        Family::B3,
        Family::C1,
        Family::C2,
        Family::C3,
        Family::D1,
        Family::D2,
        Family::D3,
        Family::E,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B1 => "B1",
            Family::B2 => "B2",
            Family::B3 => "B3",
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::C3 => "C3",
            Family::D1 => "D1",
            Family::D2 => "D2",
            Family::D3 => "D3",
            Family::E => "E",
        }
    }

    /// I-value shared by every member of the family's group.
    pub fn group_i_value(self) -> i64 {
        match self {
            Family::A => -3,
            Family::B1 | Family::B2 | Family::B3 => -2,
            Family::C1 | Family::C2 | Family::C3 => -1,
            Family::D1 | Family::D2 | Family::D3 => 0,
            Family::E => 1,
        }
    }

    /// Whether members are generated by a seed string rather than an (s,t)
    /// parameter pair.
    pub fn takes_seed(self) -> bool {
        matches!(self, Family::A | Family::B3 | Family::D3 | Family::E)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Free parameters of a family member: either the (s,t) pair of a template
/// family or the seed string 𝐛 of a complementary-pair family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Params {
    St { s: usize, t: usize },
    Seed(WeightString),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiscaTag {
    family: Family,
    params: Params,
}

impl LiscaTag {
    pub fn new(family: Family, params: Params) -> Result<Self> {
        match (&params, family.takes_seed()) {
            (Params::Seed(_), true) => {}
            (Params::St { s, t }, false) => {
                let (s, t) = (*s, *t);
                let ok = match family {
                    Family::B1 => s >= t && t >= 1,
                    Family::B2 => t >= 1,
                    Family::C1 => s >= 1,
                    Family::C2 | Family::C3 | Family::D2 => true,
                    Family::D1 => s >= t,
                    _ => unreachable!(),
                };
                if !ok {
                    return Err(Error::BadParameter(format!(
                        "(s, t) = ({s}, {t}) is outside the range of family {family}"
                    )));
                }
            }
            _ => {
                return Err(Error::BadParameter(format!(
                    "family {family} takes {} parameters",
                    if family.takes_seed() { "a seed string" } else { "an (s, t) pair" }
                )));
            }
        }
        Ok(LiscaTag { family, params })
    }

    pub fn seeded(family: Family, seed: &[i64]) -> Result<Self> {
        Self::new(family, Params::Seed(WeightString::new(seed.to_vec())?))
    }

    pub fn templated(family: Family, s: usize, t: usize) -> Result<Self> {
        Self::new(family, Params::St { s, t })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn i_value(&self) -> i64 {
        self.family.group_i_value()
    }

    /// The weight string of this member.
    pub fn realize(&self) -> WeightString {
        let entries = match (&self.params, self.family) {
            (Params::Seed(b), f) => {
                let c = cfrac::dual(b);
                let rev: Vec<i64> = b.entries().iter().rev().copied().collect();
                match f {
                    // [b_h .. b_1, 2, c_1 .. c_l]
                    Family::A => {
                        let mut e = rev;
                        e.push(2);
                        e.extend_from_slice(c.entries());
                        e
                    }
                    // [b_h .. b_2, b_1 + 1, 2, 2, c_1 + 1, c_2 .. c_l]
                    Family::B3 => {
                        let mut e = rev;
                        *e.last_mut().unwrap() += 1;
                        e.push(2);
                        e.push(2);
                        e.extend_from_slice(c.entries());
                        e[b.len() + 2] += 1;
                        e
                    }
                    // [b_h .. b_1, 5, c_1 .. c_l]
                    Family::D3 => {
                        let mut e = rev;
                        e.push(5);
                        e.extend_from_slice(c.entries());
                        e
                    }
                    // [b_h .. b_2, b_1 + c_1, c_2 .. c_l]
                    Family::E => {
                        let mut e = rev;
                        let merged = e.pop().unwrap() + c.entries()[0];
                        e.push(merged);
                        e.extend_from_slice(&c.entries()[1..]);
                        e
                    }
                    _ => unreachable!(),
                }
            }
            (&Params::St { s, t }, f) => {
                let (s, t) = (s as i64, t as i64);
                let (twos_s, twos_t) = (s as usize, t as usize);
                match f {
                    // [2^t, 3, s+2, t+2, 3, 2^s]
                    Family::B1 => chain(&[
                        &vec![2; twos_t],
                        &[3, s + 2, t + 2, 3],
                        &vec![2; twos_s],
                    ]),
                    // [2^t, s+3, 2, t+2, 3, 2^s]
                    Family::B2 => chain(&[
                        &vec![2; twos_t],
                        &[s + 3, 2, t + 2, 3],
                        &vec![2; twos_s],
                    ]),
                    // [t+2, s+2, 3, 2^t, 4, 2^s]
                    Family::C1 => chain(&[
                        &[t + 2, s + 2, 3],
                        &vec![2; twos_t],
                        &[4],
                        &vec![2; twos_s],
                    ]),
                    // [t+2, 2, s+3, 2^t, 4, 2^s]
                    Family::C2 => chain(&[
                        &[t + 2, 2, s + 3],
                        &vec![2; twos_t],
                        &[4],
                        &vec![2; twos_s],
                    ]),
                    // [t+3, 2, s+3, 3, 2^t, 3, 2^s]
                    Family::C3 => chain(&[
                        &[t + 3, 2, s + 3, 3],
                        &vec![2; twos_t],
                        &[3],
                        &vec![2; twos_s],
                    ]),
                    // [t+3, 3, 2^s, 3, 2^t, 3, s+3]
                    Family::D1 => chain(&[
                        &[t + 3, 3],
                        &vec![2; twos_s],
                        &[3],
                        &vec![2; twos_t],
                        &[3, s + 3],
                    ]),
                    // [t+3, 2^s, 4, 2^t, 3, s+2]
                    Family::D2 => chain(&[
                        &[t + 3],
                        &vec![2; twos_s],
                        &[4],
                        &vec![2; twos_t],
                        &[3, s + 2],
                    ]),
                    _ => unreachable!(),
                }
            }
        };
        WeightString::new(entries).unwrap()
    }

    /// The lens space bounded by the plumbing on this string.
    pub fn lens(&self) -> LensSpace {
        let v = cfrac::evaluate(&self.realize());
        LensSpace::new(v.numer().clone(), v.denom().clone()).unwrap()
    }
}

impl std::fmt::Display for LiscaTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.params {
            Params::St { s, t } => write!(f, "{}(s = {s}, t = {t})", self.family),
            Params::Seed(b) => write!(f, "{}(b = {b})", self.family),
        }
    }
}

fn chain(parts: &[&[i64]]) -> Vec<i64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// L(p, q) with 0 < q < p coprime; equivalences L(p, q') for q' ≡ q⁻¹ or
/// q' = p − q are applied by the recognizer, not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LensSpace {
    p: BigInt,
    q: BigInt,
}

impl LensSpace {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p < BigInt::from(2) {
            return Err(Error::BadLensSpace(format!("p = {p} must be at least 2")));
        }
        if q <= BigInt::from(0) || q >= p {
            return Err(Error::BadLensSpace(format!(
                "q = {q} must lie strictly between 0 and p = {p}"
            )));
        }
        if !p.gcd(&q).is_one() {
            return Err(Error::BadLensSpace(format!("p = {p} and q = {q} share a factor")));
        }
        Ok(LensSpace { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// The weight string of p/q.
    pub fn string(&self) -> WeightString {
        cfrac::expand_frac(&self.p, &self.q).unwrap()
    }
}

impl std::fmt::Display for LensSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L({}, {})", self.p, self.q)
    }
}

/// Match a string against the eleven templates, in family order. The
/// returned tag realizes exactly the given string; strings equivalent to a
/// member only after reversal or complement are the caller's business (see
/// `lens_bounds`). When several families match, the first in `Family::ALL`
/// order wins.
pub fn recognize_string(ws: &WeightString) -> Option<LiscaTag> {
    Family::ALL.iter().find_map(|&f| match_family(f, ws))
}

fn match_family(family: Family, ws: &WeightString) -> Option<LiscaTag> {
    let e = ws.entries();
    let n = e.len();
    match family {
        // split [b_h .. b_1, 2, c_1 .. c_l] at an interior 2
        Family::A => {
            for i in 1..n.saturating_sub(1) {
                if e[i] != 2 {
                    continue;
                }
                let b = rev_string(&e[..i]);
                if cfrac::dual(&b).entries() == &e[i + 1..] {
                    return Some(LiscaTag::new(family, Params::Seed(b)).unwrap());
                }
            }
            None
        }
        // split [b_h .. b_2, b_1+1, 2, 2, c_1+1, c_2 .. c_l] at an interior
        // 2,2 pair flanked by entries > 2
        Family::B3 => {
            for i in 1..n.saturating_sub(2) {
                if e[i] != 2 || e[i + 1] != 2 || e[i - 1] < 3 || e[i + 2] < 3 {
                    continue;
                }
                let mut b = vec![e[i - 1] - 1];
                b.extend(e[..i - 1].iter().rev());
                let b = WeightString::new(b).unwrap();
                let mut c = vec![e[i + 2] - 1];
                c.extend_from_slice(&e[i + 3..]);
                if cfrac::dual(&b).entries() == c {
                    return Some(LiscaTag::new(family, Params::Seed(b)).unwrap());
                }
            }
            None
        }
        // split [b_h .. b_1, 5, c_1 .. c_l] at an interior 5
        Family::D3 => {
            for i in 1..n.saturating_sub(1) {
                if e[i] != 5 {
                    continue;
                }
                let b = rev_string(&e[..i]);
                if cfrac::dual(&b).entries() == &e[i + 1..] {
                    return Some(LiscaTag::new(family, Params::Seed(b)).unwrap());
                }
            }
            None
        }
        // split [b_h .. b_2, b_1 + c_1, c_2 .. c_l] at any entry >= 4
        Family::E => {
            for i in 0..n {
                if e[i] < 4 {
                    continue;
                }
                for u in 2..=e[i] - 2 {
                    let mut b = vec![u];
                    b.extend(e[..i].iter().rev());
                    let b = WeightString::new(b).unwrap();
                    let mut c = vec![e[i] - u];
                    c.extend_from_slice(&e[i + 1..]);
                    if cfrac::dual(&b).entries() == c {
                        return Some(LiscaTag::new(family, Params::Seed(b)).unwrap());
                    }
                }
            }
            None
        }
        // (s,t) templates: read the candidate parameters off the string's
        // fixed positions, then demand an exact re-render
        Family::B1 => st_match(family, ws, run2(e, true), run2(e, false)),
        Family::B2 => st_match(family, ws, run2(e, true), run2(e, false)),
        Family::C1 => st_match(family, ws, e[0] - 2, *e.get(1)? - 2),
        Family::C2 => st_match(family, ws, e[0] - 2, *e.get(2)? - 3),
        Family::C3 => st_match(family, ws, e[0] - 3, *e.get(2)? - 3),
        Family::D1 => st_match(family, ws, e[0] - 3, e[n - 1] - 3),
        Family::D2 => st_match(family, ws, e[0] - 3, e[n - 1] - 2),
    }
}

/// Length of the run of 2s at the front or back of the string.
fn run2(e: &[i64], front: bool) -> i64 {
    let hits = |it: &mut dyn Iterator<Item = &i64>| it.take_while(|&&w| w == 2).count() as i64;
    if front {
        hits(&mut e.iter())
    } else {
        hits(&mut e.iter().rev())
    }
}

fn rev_string(e: &[i64]) -> WeightString {
    WeightString::new(e.iter().rev().copied().collect()).unwrap()
}

fn st_match(family: Family, ws: &WeightString, t: i64, s: i64) -> Option<LiscaTag> {
    let tag = LiscaTag::new(
        family,
        Params::St {
            s: usize::try_from(s).ok()?,
            t: usize::try_from(t).ok()?,
        },
    )
    .ok()?;
    (tag.realize() == *ws).then_some(tag)
}

/// Decide whether L(p, q) bounds, testing the strings of p/q and p/(p−q)
/// and their reversals against the eleven families; the first match wins.
pub fn lens_bounds(l: &LensSpace) -> Option<LiscaTag> {
    let direct = cfrac::expand_frac(&l.p, &l.q).unwrap();
    let complement = cfrac::expand_frac(&l.p, &(&l.p - &l.q)).unwrap();
    let reversed = [direct.reversed(), complement.reversed()];
    [direct, complement]
        .iter()
        .chain(reversed.iter())
        .find_map(recognize_string)
}

/// Whether pq-surgery, a connected sum of two lens spaces, bounds: both
/// summands must bound individually, since there is no cancellation among
/// lens-space summands.
pub fn reducible_bounds(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<bool> {
    let (p, q) = (p.into(), q.into());
    if p < BigInt::from(2) || q <= p {
        return Err(Error::BadParameter(format!(
            "need 2 <= p < q, got p = {p}, q = {q}"
        )));
    }
    if !p.gcd(&q).is_one() {
        return Err(Error::BadParameter(format!("p = {p} and q = {q} share a factor")));
    }
    let l1 = LensSpace::new(p.clone(), &p - q.mod_floor(&p))?;
    let l2 = LensSpace::new(q.clone(), &q - &p)?;
    Ok(lens_bounds(&l1).is_some() && lens_bounds(&l2).is_some())
}

/// The weight string of (pq + sign)/p², the lens space produced by
/// (pq ± 1)-surgery.
pub fn lens_surgery_string(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    sign: i64,
) -> Result<WeightString> {
    let (p, q) = (p.into(), q.into());
    if sign != 1 && sign != -1 {
        return Err(Error::BadParameter(format!("sign must be +1 or -1, got {sign}")));
    }
    if p < BigInt::from(2) {
        return Err(Error::BadParameter(format!("p = {p} must be at least 2")));
    }
    if !p.gcd(&q).is_one() {
        return Err(Error::BadParameter(format!("p = {p} and q = {q} share a factor")));
    }
    let n = &p * &q + sign;
    if n < BigInt::from(2) {
        return Err(Error::BadParameter(format!(
            "surgery coefficient {n} is degenerate"
        )));
    }
    cfrac::expand_frac(&n, &(&p * &p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::{evaluate, mod_inverse, stats, Rational};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn ws(entries: &[i64]) -> WeightString {
        WeightString::new(entries.to_vec()).unwrap()
    }

    fn seed(family: Family, b: &[i64]) -> LiscaTag {
        LiscaTag::seeded(family, b).unwrap()
    }

    fn st(family: Family, s: usize, t: usize) -> LiscaTag {
        LiscaTag::templated(family, s, t).unwrap()
    }

    #[test]
    fn template_fixtures() {
        assert_eq!(seed(Family::A, &[2]).realize(), ws(&[2, 2, 2]));
        assert_eq!(seed(Family::A, &[5]).realize(), ws(&[5, 2, 2, 2, 2, 2]));
        assert_eq!(seed(Family::A, &[2, 3]).realize(), ws(&[3, 2, 2, 3, 2]));
        assert_eq!(seed(Family::B3, &[2]).realize(), ws(&[3, 2, 2, 3]));
        assert_eq!(seed(Family::D3, &[2]).realize(), ws(&[2, 5, 2]));
        assert_eq!(seed(Family::E, &[2]).realize(), ws(&[4]));
        assert_eq!(seed(Family::E, &[2, 2]).realize(), ws(&[2, 5]));
        assert_eq!(st(Family::B1, 1, 1).realize(), ws(&[2, 3, 3, 3, 3, 2]));
        assert_eq!(st(Family::B2, 0, 1).realize(), ws(&[2, 3, 2, 3, 3]));
        assert_eq!(st(Family::C1, 1, 0).realize(), ws(&[2, 3, 3, 4, 2]));
        assert_eq!(st(Family::C2, 0, 0).realize(), ws(&[2, 2, 3, 4]));
        assert_eq!(st(Family::C3, 0, 0).realize(), ws(&[3, 2, 3, 3, 3]));
        assert_eq!(st(Family::D1, 0, 0).realize(), ws(&[3, 3, 3, 3, 3]));
        assert_eq!(st(Family::D2, 0, 0).realize(), ws(&[3, 4, 3, 2]));
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(LiscaTag::templated(Family::B1, 0, 1).is_err()); // s >= t
        assert!(LiscaTag::templated(Family::B1, 1, 0).is_err()); // t >= 1
        assert!(LiscaTag::templated(Family::B2, 3, 0).is_err()); // t >= 1
        assert!(LiscaTag::templated(Family::C1, 0, 2).is_err()); // s >= 1
        assert!(LiscaTag::templated(Family::D1, 1, 2).is_err()); // s >= t
        assert!(LiscaTag::templated(Family::A, 1, 1).is_err()); // seed family
        assert!(LiscaTag::seeded(Family::C2, &[2]).is_err()); // template family
        assert!(LiscaTag::templated(Family::C2, 0, 0).is_ok());
        assert!(LiscaTag::templated(Family::D2, 5, 0).is_ok());
    }

    fn lens_pair(tag: &LiscaTag) -> (BigInt, BigInt) {
        let l = tag.lens();
        (l.p().clone(), l.q().clone())
    }

    #[test]
    fn lens_value_fixtures() {
        let big = |v: i64| BigInt::from(v);
        assert_eq!(lens_pair(&seed(Family::A, &[2])), (big(4), big(3)));
        assert_eq!(lens_pair(&seed(Family::A, &[2, 3])), (big(25), big(11)));
        assert_eq!(lens_pair(&seed(Family::B3, &[2])), (big(16), big(7)));
        assert_eq!(
            lens_pair(&seed(Family::B3, &[2, 2, 2, 2, 2])),
            (big(144), big(119))
        );
        assert_eq!(lens_pair(&seed(Family::D3, &[2])), (big(16), big(9)));
        assert_eq!(lens_pair(&seed(Family::D3, &[6])), (big(144), big(25)));
        assert_eq!(lens_pair(&seed(Family::E, &[2])), (big(4), big(1)));
        assert_eq!(lens_pair(&seed(Family::E, &[2, 2])), (big(9), big(5)));
    }

    /// All seed strings over the given entry alphabet, up to the given length.
    fn all_seeds(max_entry: i64, max_len: usize) -> Vec<WeightString> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<i64>> = (2..=max_entry).map(|a| vec![a]).collect();
        while let Some(b) = stack.pop() {
            if b.len() < max_len {
                for a in 2..=max_entry {
                    let mut next = b.clone();
                    next.push(a);
                    stack.push(next);
                }
            }
            out.push(b);
        }
        out.into_iter().map(|e| ws(&e)).collect()
    }

    #[test]
    fn seed_families_hit_their_closed_form_lens_values() {
        for b in all_seeds(6, 4) {
            let v = evaluate(&b);
            let (x, y) = (v.numer().clone(), v.denom().clone());
            let ystar = mod_inverse(&y, &x).unwrap();
            let four = BigInt::from(4);
            let cases = [
                (Family::A, &x * &x, &x * &ystar + 1),
                (Family::B3, &four * &x * &x, &four * &x * &ystar - 1),
                (Family::D3, &four * &x * &x, &four * &x * &ystar + 1),
                (Family::E, &x * &x, &x * &ystar - 1),
            ];
            for (family, p, q) in cases {
                let tag = LiscaTag::new(family, Params::Seed(b.clone())).unwrap();
                assert_eq!(
                    evaluate(&tag.realize()),
                    Rational::new(p, q),
                    "family {family} at seed {b}"
                );
            }
        }
    }

    #[test]
    fn i_value_is_constant_on_each_group() {
        for tag in small_tag_corpus() {
            assert_eq!(
                stats(&tag.realize()).i_value,
                tag.i_value(),
                "I-value of {tag}"
            );
        }
    }

    /// A corpus of members across all eleven families with modest parameters.
    fn small_tag_corpus() -> Vec<LiscaTag> {
        let mut out = Vec::new();
        for b in all_seeds(5, 3) {
            for f in [Family::A, Family::B3, Family::D3, Family::E] {
                out.push(LiscaTag::new(f, Params::Seed(b.clone())).unwrap());
            }
        }
        for s in 0..=5usize {
            for t in 0..=5usize {
                for f in [
                    Family::B1,
                    Family::B2,
                    Family::C1,
                    Family::C2,
                    Family::C3,
                    Family::D1,
                    Family::D2,
                ] {
                    if let Ok(tag) = LiscaTag::templated(f, s, t) {
                        out.push(tag);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn recognize_spec_fixtures() {
        let t = recognize_string(&ws(&[2, 2, 2])).unwrap();
        assert_eq!(t, seed(Family::A, &[2]));
        let t = recognize_string(&ws(&[3, 2, 2, 3])).unwrap();
        assert_eq!(t, seed(Family::B3, &[2]));
        let t = recognize_string(&ws(&[5, 2, 2, 2, 2, 2])).unwrap();
        assert_eq!(t, seed(Family::A, &[5]));
        for bad in [
            vec![2],
            vec![3],
            vec![2, 3],
            vec![3, 3],
            vec![2, 2, 2, 2],
            vec![2, 2, 3, 2, 2],
        ] {
            assert_eq!(recognize_string(&ws(&bad)), None, "{bad:?}");
        }
    }

    #[test]
    fn recognized_tags_realize_the_input() {
        for tag in small_tag_corpus() {
            let w = tag.realize();
            let found = recognize_string(&w).unwrap_or_else(|| panic!("{tag} unrecognized"));
            assert_eq!(found.realize(), w, "{tag} vs {found}");
        }
    }

    #[test]
    fn recognizer_matches_exhaustive_enumeration() {
        // every realized string over this box, from a superset enumeration
        let (max_entry, max_len) = (6i64, 6usize);
        let mut realized: BTreeMap<Vec<i64>, Family> = BTreeMap::new();
        let mut insert = |tag: &LiscaTag| {
            let w = tag.realize();
            let e = w.entries();
            if e.len() <= max_len && e.iter().all(|&a| a <= max_entry) {
                realized.entry(e.to_vec()).or_insert(tag.family());
            }
        };
        for b in all_seeds(max_entry + 1, max_len) {
            for f in [Family::A, Family::B3, Family::D3, Family::E] {
                insert(&LiscaTag::new(f, Params::Seed(b.clone())).unwrap());
            }
        }
        for s in 0..=max_len {
            for t in 0..=max_len {
                for f in [
                    Family::B1,
                    Family::B2,
                    Family::C1,
                    Family::C2,
                    Family::C3,
                    Family::D1,
                    Family::D2,
                ] {
                    if let Ok(tag) = LiscaTag::templated(f, s, t) {
                        insert(&tag);
                    }
                }
            }
        }
        assert!(realized.len() > 40, "enumeration too small: {}", realized.len());

        // exhaustive sweep of the box, level by level
        let mut level: Vec<Vec<i64>> = vec![vec![]];
        let mut sweep: Vec<Vec<i64>> = Vec::new();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for e in &level {
                for a in 2..=max_entry {
                    let mut grown = e.clone();
                    grown.push(a);
                    next.push(grown);
                }
            }
            sweep.extend(next.iter().cloned());
            level = next;
        }
        let mut hits = 0usize;
        for e in sweep {
            let got = recognize_string(&ws(&e));
            match realized.get(&e) {
                Some(&family) => {
                    let tag = got.unwrap_or_else(|| panic!("{e:?} should be recognized"));
                    assert_eq!(tag.family(), family, "{e:?}");
                    assert_eq!(tag.realize().entries(), e);
                    hits += 1;
                }
                None => assert_eq!(got, None, "{e:?} wrongly recognized"),
            }
        }
        assert_eq!(hits, realized.len());
    }

    #[test]
    fn complementary_string_swaps_groups() {
        // the complement of a realized member is again a realized member, in
        // the group with opposite I-value; checked in its exact or reversed
        // orientation, pinned per pair
        let pairs: Vec<(LiscaTag, LiscaTag, bool)> = {
            let mut v = Vec::new();
            for b in all_seeds(5, 3) {
                v.push((
                    LiscaTag::new(Family::A, Params::Seed(b.clone())).unwrap(),
                    LiscaTag::new(Family::E, Params::Seed(b.clone())).unwrap(),
                    true,
                ));
                v.push((
                    LiscaTag::new(Family::B3, Params::Seed(b.clone())).unwrap(),
                    LiscaTag::new(Family::D3, Params::Seed(b.clone())).unwrap(),
                    true,
                ));
            }
            for s in 0..=4usize {
                for t in 0..=4usize {
                    if s >= t {
                        v.push((
                            st(Family::B1, s + 1, t + 1),
                            st(Family::D1, s, t),
                            false,
                        ));
                    }
                    v.push((st(Family::B2, s, t + 1), st(Family::D2, s, t), false));
                    v.push((st(Family::C1, s + 1, t), st(Family::C3, t, s), true));
                    v.push((st(Family::C2, s, t), st(Family::C2, t, s), true));
                }
            }
            v
        };
        for (one, other, flips) in pairs {
            let d = cfrac::dual(&one.realize());
            let expected = if flips {
                other.realize().reversed()
            } else {
                other.realize()
            };
            assert_eq!(d, expected, "complement of {one} vs {other}");
        }
    }

    #[test]
    fn boundary_parameter_coincidences() {
        // the template of C1 at the excluded s = 0 is exactly C2 at s = 0
        for t in 0..=4i64 {
            let c1_formal = chain(&[&[t + 2, 2, 3], &vec![2; t as usize], &[4]]);
            assert_eq!(st(Family::C2, 0, t as usize).realize().entries(), c1_formal);
        }
        // the template of B2 at the excluded t = 0 is the B3 member with a
        // one-entry seed
        for s in 0..=4i64 {
            let b2_formal = chain(&[&[s + 3, 2, 2, 3], &vec![2; s as usize]]);
            assert_eq!(
                seed(Family::B3, &[s + 2]).realize().entries(),
                b2_formal
            );
        }
        // swapping s and t in B1 reverses the string
        for s in 1..=4usize {
            for t in 1..=s {
                let fwd = st(Family::B1, s, t).realize();
                let swapped = chain(&[
                    &vec![2; s],
                    &[3, t as i64 + 2, s as i64 + 2, 3],
                    &vec![2; t],
                ]);
                assert_eq!(fwd.reversed().entries(), swapped);
            }
        }
    }

    #[test]
    fn lens_bounds_fixtures() {
        let l = |p: i64, q: i64| LensSpace::new(p, q).unwrap();
        assert_eq!(lens_bounds(&l(4, 3)).unwrap().family(), Family::A);
        assert_eq!(lens_bounds(&l(3, 1)), None);
        assert_eq!(lens_bounds(&l(2, 1)), None);
        let t = lens_bounds(&l(25, 6)).unwrap();
        assert_eq!(t, seed(Family::A, &[5]));
        assert_eq!(lens_bounds(&l(9, 5)).unwrap().family(), Family::E);
        // q = 4: 25/4 = [7,2,2,2] is the reversal of a family-A string
        assert!(lens_bounds(&l(25, 4)).is_some());
    }

    #[test]
    fn lens_bounds_only_square_orders() {
        for p in 2i64..=400 {
            let root = (p as f64).sqrt().round() as i64;
            let square = root * root == p;
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let hit = lens_bounds(&LensSpace::new(p, q).unwrap());
                if let Some(tag) = hit {
                    assert!(square, "L({p}, {q}) matched {tag} but {p} is not a square");
                }
            }
        }
    }

    #[test]
    fn reducible_fixtures() {
        assert!(reducible_bounds(4, 9).unwrap());
        assert!(!reducible_bounds(2, 3).unwrap());
        assert!(reducible_bounds(4, 25).unwrap());
        assert!(reducible_bounds(9, 16).unwrap());
        assert!(!reducible_bounds(4, 11).unwrap());
        assert!(reducible_bounds(1, 5).is_err());
        assert!(reducible_bounds(3, 6).is_err());
        assert!(reducible_bounds(9, 4).is_err());
    }

    #[test]
    fn surgery_string_fixtures() {
        assert_eq!(lens_surgery_string(2, 5, -1).unwrap(), ws(&[3, 2, 2, 2]));
        assert_eq!(lens_surgery_string(2, 3, 1).unwrap(), ws(&[2, 4]));
        // 16/9 expands to [2,5,2], the one-seed member of D3
        assert_eq!(lens_surgery_string(3, 5, 1).unwrap(), ws(&[2, 5, 2]));
        assert_eq!(
            evaluate(&lens_surgery_string(3, 5, 1).unwrap()),
            Rational::new(BigInt::from(16), BigInt::from(9))
        );
        assert!(lens_surgery_string(2, 1, -1).is_err());
        assert!(lens_surgery_string(2, 5, 2).is_err());
        assert!(lens_surgery_string(2, 4, 1).is_err());
    }

    #[test]
    fn surgery_strings_expand_the_right_fraction() {
        for (p, q) in [(2i64, 3i64), (2, 5), (3, 4), (3, 5), (4, 5), (5, 6), (5, 7)] {
            for sign in [-1, 1] {
                let w = lens_surgery_string(p, q, sign).unwrap();
                assert_eq!(
                    evaluate(&w),
                    Rational::new(BigInt::from(p * q + sign), BigInt::from(p * p))
                );
                assert_eq!(w.first(), q / p + 1, "leading entry at ({p},{q},{sign:+})");
            }
        }
    }

    proptest! {
        #[test]
        fn lens_bounds_is_invariant_under_the_moves(p in 2i64..200, q in 1i64..200) {
            let q = q % p;
            prop_assume!(q > 0 && num_integer::gcd(p, q) == 1);
            let base = lens_bounds(&LensSpace::new(p, q).unwrap()).is_some();
            let comp = lens_bounds(&LensSpace::new(p, p - q).unwrap()).is_some();
            let inv = mod_inverse(&BigInt::from(q), &BigInt::from(p)).unwrap();
            let dual = lens_bounds(&LensSpace::new(BigInt::from(p), inv).unwrap()).is_some();
            prop_assert_eq!(base, comp);
            prop_assert_eq!(base, dual);
        }

        #[test]
        fn recognized_strings_round_trip(entries in proptest::collection::vec(2i64..8, 1..9)) {
            let w = ws(&entries);
            if let Some(tag) = recognize_string(&w) {
                prop_assert_eq!(tag.realize(), w);
            }
        }
    }
}
