//! The eighteen families of bounding surgeries: enumeration, membership,
//! and the harness that pits the family answer against the correction-term
//! and lattice obstructions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cfrac::Rational;
use crate::floer::{self, DInvVerdict};
use crate::lattice::{self, SearchStatus};
use crate::plumbing::{self, SurgeryClass, SurgeryTriple};
use crate::seq::{self, SeqKind};
use crate::{Error, Result};

pub const FAMILY_COUNT: u8 = 18;

/// Hard ceiling on Fibonacci/Pell indices. Members this deep have thousands
/// of digits; the cap also keeps the memoized sequence tables small.
/// Membership queries respect it too: a triple whose parameters sit beyond
/// the cap is reported as a non-member.
pub const SEQ_INDEX_CAP: u64 = 10_000;

/// Sign choice inside families 3, 7 and 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Branch::Plus => '+',
            Branch::Minus => '-',
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One member of one family: the family id (1..=18), the value of its free
/// parameter, and the sign branch for the three two-sided families.
///
/// Parameter conventions: families 1-3 are indexed by p, families 6-8 and 14
/// by r, the sporadic families 5 and 13 by a member number (0 or 1), and the
/// rest by a sequence index k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyTag {
    id: u8,
    index: BigInt,
    branch: Option<Branch>,
}

fn branch_required(id: u8) -> bool {
    matches!(id, 3 | 7 | 8)
}

fn is_sporadic_id(id: u8) -> bool {
    matches!(id, 5 | 13)
}

fn uses_sequence_index(id: u8) -> bool {
    matches!(id, 4 | 9..=12 | 15..=18)
}

fn parameter_name(id: u8) -> &'static str {
    match id {
        1..=3 => "p",
        5 | 13 => "member",
        6..=8 | 14 => "r",
        _ => "k",
    }
}

fn minimum_index(id: u8) -> u64 {
    match id {
        5 | 13 => 0,
        4 | 14 | 16..=18 => 1,
        1..=3 | 6 | 7 => 2,
        10..=12 | 15 => 2,
        9 => 3,
        8 => 5,
        _ => unreachable!("id {id} validated before lookup"),
    }
}

fn residue(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

impl FamilyTag {
    pub fn new(id: u8, index: impl Into<BigInt>, branch: Option<Branch>) -> Result<Self> {
        let index = index.into();
        if !(1..=FAMILY_COUNT).contains(&id) {
            return Err(Error::BadParameter(format!(
                "family id {id} is not in 1..={FAMILY_COUNT}"
            )));
        }
        match (branch_required(id), branch.is_some()) {
            (true, false) => {
                return Err(Error::BadParameter(format!(
                    "family {id} needs a +/- branch"
                )))
            }
            (false, true) => {
                return Err(Error::BadParameter(format!(
                    "family {id} has no +/- branches"
                )))
            }
            _ => {}
        }
        let name = parameter_name(id);
        let min = minimum_index(id);
        if index < BigInt::from(min) {
            return Err(Error::BadParameter(format!(
                "family {id}: {name} must be at least {min}, got {index}"
            )));
        }
        if is_sporadic_id(id) && index > BigInt::one() {
            return Err(Error::BadParameter(format!(
                "family {id} has exactly two members, numbered 0 and 1"
            )));
        }
        match (id, branch) {
            (7, _) if residue(&index, 4) != 2 => {
                return Err(Error::BadParameter(format!(
                    "family 7: r must be 2 mod 4, got {index}"
                )));
            }
            (8, Some(Branch::Plus)) if residue(&index, 8) != 5 => {
                return Err(Error::BadParameter(format!(
                    "family 8+: r must be 5 mod 8, got {index}"
                )));
            }
            (8, Some(Branch::Minus)) if residue(&index, 8) != 3 => {
                return Err(Error::BadParameter(format!(
                    "family 8-: r must be 3 mod 8, got {index}"
                )));
            }
            _ => {}
        }
        if uses_sequence_index(id) && index > BigInt::from(SEQ_INDEX_CAP) {
            return Err(Error::BadParameter(format!(
                "sequence index {index} is above the cap {SEQ_INDEX_CAP}"
            )));
        }
        Ok(Self { id, index, branch })
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn branch(&self) -> Option<Branch> {
        self.branch
    }

    pub fn is_sporadic(&self) -> bool {
        is_sporadic_id(self.id)
    }

    pub fn triple(&self) -> SurgeryTriple {
        family_enumerate(self)
    }
}

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.id)?;
        if let Some(b) = self.branch {
            write!(f, "{b}")?;
        }
        write!(f, "({} = {})", parameter_name(self.id), self.index)
    }
}

fn fib_u(k: u64) -> BigInt {
    seq::fibonacci(k as i64).expect("index below cap")
}

fn pell_u(kind: SeqKind, k: u64) -> BigInt {
    seq::pell(kind, k).expect("index below cap")
}

fn sqrt_exact(x: &BigInt) -> Option<BigInt> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// Index k with F_k = x, or None; returns the smallest such k, so x = 1
/// reports k = 1.
fn fib_index(x: &BigInt) -> Option<u64> {
    if !x.is_positive() {
        return None;
    }
    let mut k = 1u64;
    loop {
        let f = fib_u(k);
        if f == *x {
            return Some(k);
        }
        if f > *x || k == SEQ_INDEX_CAP {
            return None;
        }
        k += 1;
    }
}

fn pell_index(kind: SeqKind, x: &BigInt) -> Option<u64> {
    if !x.is_positive() {
        return None;
    }
    let mut k = 0u64;
    loop {
        let v = pell_u(kind, k);
        if v == *x {
            return Some(k);
        }
        if v > *x || k == SEQ_INDEX_CAP {
            return None;
        }
        k += 1;
    }
}

const G_SPORADIC: [(u64, u64, u64); 2] = [(3, 22, 64), (6, 43, 256)];
const R_SPORADIC: [(u64, u64, u64); 2] = [(81, 196, 15876), (121, 196, 23716)];

/// The surgery triple of a family member. Total on valid tags.
pub fn family_enumerate(tag: &FamilyTag) -> SurgeryTriple {
    let mk = |p: BigInt, q: BigInt, n: BigInt| {
        SurgeryTriple::new(p, q, n).expect("family members are valid surgery triples")
    };
    let i = &tag.index;
    let small = || i.to_u64().expect("sequence index below cap");
    let sq = |x: &BigInt| x * x;
    match tag.id {
        1 => mk(i.clone(), i + 1u32, sq(i)),
        2 => {
            let q = i + 1u32;
            let n = sq(&q);
            mk(i.clone(), q, n)
        }
        3 => {
            let four_p = i * 4u32;
            let q = match tag.branch.unwrap() {
                Branch::Plus => &four_p + 1u32,
                Branch::Minus => &four_p - 1u32,
            };
            mk(i.clone(), q, sq(i) * 4u32)
        }
        4 => {
            let k = small();
            let p = pell_u(SeqKind::R, k);
            let q = pell_u(SeqKind::R, k + 1);
            let n = &p * &q - 2u32;
            mk(p, q, n)
        }
        5 | 13 => {
            let list = if tag.id == 5 { G_SPORADIC } else { R_SPORADIC };
            let (p, q, n) = list[i.to_usize().unwrap()];
            mk(p.into(), q.into(), n.into())
        }
        6 => {
            let p = sq(i);
            let q = sq(&(i + 1u32));
            let n = &p * &q;
            mk(p, q, n)
        }
        7 | 8 => {
            let off = if tag.id == 7 { 1u32 } else { 2 };
            let root = match tag.branch.unwrap() {
                Branch::Plus => i * 2u32 + off,
                Branch::Minus => i * 2u32 - off,
            };
            let p = sq(i);
            let q = sq(&root);
            let n = &p * &q;
            mk(p, q, n)
        }
        9 => {
            let k = small();
            let p = sq(&fib_u(k));
            let q = sq(&fib_u(k + 1));
            let n = &p * &q;
            mk(p, q, n)
        }
        10 => {
            let k = small();
            let p = sq(&fib_u(2 * k - 1));
            let q = sq(&fib_u(2 * k + 1));
            let n = &p * &q;
            mk(p, q, n)
        }
        11 => {
            let k = small();
            let p = sq(&pell_u(SeqKind::S, k));
            let q = sq(&pell_u(SeqKind::T, k)) * 4u32;
            let n = &p * &q;
            mk(p, q, n)
        }
        12 => {
            let k = small();
            let p = sq(&pell_u(SeqKind::T, k)) * 4u32;
            let q = sq(&pell_u(SeqKind::S, k + 1));
            let n = &p * &q;
            mk(p, q, n)
        }
        14 => {
            let p = i * 2u32 + 1u32;
            let q = &p + 2u32;
            let n = sq(&(i + 1u32)) * 4u32;
            mk(p, q, n)
        }
        15 => {
            let k = small();
            let p = fib_u(2 * k);
            let q = fib_u(2 * k + 2);
            let n = &p * &q + 1u32;
            mk(p, q, n)
        }
        16 | 17 => {
            let k = small();
            let p = fib_u(2 * k + 1);
            let q = fib_u(2 * k + if tag.id == 16 { 3 } else { 5 });
            let n = &p * &q - 1u32;
            mk(p, q, n)
        }
        18 => {
            let k = small();
            let p = pell_u(SeqKind::S, k + 1);
            let q = pell_u(SeqKind::S, k + 2);
            let n = &p * &q - 1u32;
            mk(p, q, n)
        }
        _ => unreachable!("tag ids are validated on construction"),
    }
}

fn match_id(id: u8, t: &SurgeryTriple) -> Option<FamilyTag> {
    let (p, q, n) = (t.p(), t.q(), t.n());
    let pq = t.pq();
    let tag = |index: BigInt, branch: Option<Branch>| FamilyTag::new(id, index, branch).ok();
    match id {
        1 => (*q == p + 1u32 && *n == p * p).then(|| tag(p.clone(), None))?,
        2 => (*q == p + 1u32 && *n == q * q).then(|| tag(p.clone(), None))?,
        3 => {
            if *n != p * p * 4u32 {
                return None;
            }
            let four_p = p * 4u32;
            if *q == &four_p + 1u32 {
                tag(p.clone(), Some(Branch::Plus))
            } else if *q == &four_p - 1u32 {
                tag(p.clone(), Some(Branch::Minus))
            } else {
                None
            }
        }
        4 => {
            if *n != &pq - 2u32 {
                return None;
            }
            let k = pell_index(SeqKind::R, p)?;
            (k >= 1 && *q == pell_u(SeqKind::R, k + 1)).then(|| tag(k.into(), None))?
        }
        5 | 13 => {
            let list = if id == 5 { G_SPORADIC } else { R_SPORADIC };
            let pos = list
                .iter()
                .position(|&(sp, sq_, sn)| *p == sp.into() && *q == sq_.into() && *n == sn.into())?;
            tag(pos.into(), None)
        }
        6 => {
            if *n != pq {
                return None;
            }
            let r = sqrt_exact(p)?;
            let next = &r + 1u32;
            (*q == &next * &next).then(|| tag(r, None))?
        }
        7 | 8 => {
            if *n != pq {
                return None;
            }
            let r = sqrt_exact(p)?;
            let off = if id == 7 { 1u32 } else { 2 };
            let two_r = &r * 2u32;
            for branch in [Branch::Plus, Branch::Minus] {
                let root = match branch {
                    Branch::Plus => &two_r + off,
                    Branch::Minus => &two_r - off,
                };
                if root.is_positive() && *q == &root * &root {
                    if let Some(found) = tag(r.clone(), Some(branch)) {
                        return Some(found);
                    }
                }
            }
            None
        }
        9 => {
            if *n != pq {
                return None;
            }
            let a = sqrt_exact(p)?;
            let b = sqrt_exact(q)?;
            let k = fib_index(&a)?;
            (k >= 3 && b == fib_u(k + 1)).then(|| tag(k.into(), None))?
        }
        10 => {
            if *n != pq {
                return None;
            }
            let a = sqrt_exact(p)?;
            let b = sqrt_exact(q)?;
            let idx = fib_index(&a)?;
            (idx >= 3 && idx.is_odd() && b == fib_u(idx + 2))
                .then(|| tag(((idx + 1) / 2).into(), None))?
        }
        11 => {
            if *n != pq {
                return None;
            }
            let s = sqrt_exact(p)?;
            let k = pell_index(SeqKind::S, &s)?;
            let t_sq = pell_u(SeqKind::T, k);
            (k >= 2 && *q == &t_sq * &t_sq * 4u32).then(|| tag(k.into(), None))?
        }
        12 => {
            if *n != pq {
                return None;
            }
            let s = sqrt_exact(q)?;
            let k1 = pell_index(SeqKind::S, &s)?;
            if k1 < 3 {
                return None;
            }
            let t_val = pell_u(SeqKind::T, k1 - 1);
            (*p == &t_val * &t_val * 4u32).then(|| tag((k1 - 1).into(), None))?
        }
        14 => {
            if !(p.is_odd() && *q == p + 2u32) {
                return None;
            }
            let half = p + 1u32;
            (*n == &half * &half).then(|| tag((p - 1u32) / 2u32, None))?
        }
        15 => {
            if *n != &pq + 1u32 {
                return None;
            }
            let idx = fib_index(p)?;
            (idx >= 4 && idx.is_even() && *q == fib_u(idx + 2))
                .then(|| tag((idx / 2).into(), None))?
        }
        16 | 17 => {
            if *n != &pq - 1u32 {
                return None;
            }
            let idx = fib_index(p)?;
            let gap = if id == 16 { 2 } else { 4 };
            (idx >= 3 && idx.is_odd() && *q == fib_u(idx + gap))
                .then(|| tag(((idx - 1) / 2).into(), None))?
        }
        18 => {
            if *n != &pq - 1u32 {
                return None;
            }
            let k1 = pell_index(SeqKind::S, p)?;
            (k1 >= 2 && *q == pell_u(SeqKind::S, k1 + 1)).then(|| tag((k1 - 1).into(), None))?
        }
        _ => None,
    }
}

/// The lowest-id family containing the triple, if any.
pub fn family_member(t: &SurgeryTriple) -> Option<FamilyTag> {
    (1..=FAMILY_COUNT).find_map(|id| match_id(id, t))
}

/// Every family containing the triple; a few members belong to two or three.
pub fn family_member_all(t: &SurgeryTriple) -> Vec<FamilyTag> {
    (1..=FAMILY_COUNT).filter_map(|id| match_id(id, t)).collect()
}

/// The classification answer for one triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub bounds: bool,
    pub witness: Option<FamilyTag>,
    pub obstruction_note: Option<&'static str>,
}

pub fn classify(t: &SurgeryTriple) -> Verdict {
    let witness = family_member(t);
    let bounds = witness.is_some();
    let obstruction_note =
        (!bounds && sqrt_exact(t.n()).is_none()).then_some("order of H₁ not a square");
    Verdict {
        bounds,
        witness,
        obstruction_note,
    }
}

/// Default plumbing-rank ceiling for the lattice route in cross-checks.
pub const DEFAULT_RANK_CAP: usize = 14;

/// Genus ceiling for the correction-term route; the V-sequence sieve
/// allocates a table of this length.
const GENUS_CAP: u64 = 5_000_000;

/// What the lattice route had to say, or why it was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeOutcome {
    /// n = pq -+ 1: the surgery is a lens space, no definite plumbing to test
    LensSurgery,
    /// n = pq: the surgery is a connected sum, no definite plumbing to test
    ReducibleSurgery,
    /// plumbing rank exceeds the configured cap, search skipped
    RankCapped(usize),
    Obstructed,
    Unobstructed,
    Inconclusive,
}

impl LatticeOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            LatticeOutcome::LensSurgery => "lens",
            LatticeOutcome::ReducibleSurgery => "reducible",
            LatticeOutcome::RankCapped(_) => "skipped",
            LatticeOutcome::Obstructed => "obstructed",
            LatticeOutcome::Unobstructed => "unobstructed",
            LatticeOutcome::Inconclusive => "inconclusive",
        }
    }
}

/// One row of a cross-checked scan: the family verdict next to both
/// obstructions, plus the mutual-consistency flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub triple: SurgeryTriple,
    pub family: Option<FamilyTag>,
    /// None when p, q or the knot genus are too large for the sieve
    pub dtest: Option<DInvVerdict>,
    pub lattice: LatticeOutcome,
    pub consistent: bool,
}

impl Report {
    pub fn dtest_pass(&self) -> Option<bool> {
        self.dtest.as_ref().map(DInvVerdict::pass)
    }
}

/// Number of weights in the continued-fraction string of x/y, or None once
/// it exceeds cap. Runs at most cap + 1 division steps, so a huge string
/// costs nothing to reject.
fn hj_len_capped(x: &BigInt, y: &BigInt, cap: usize) -> Option<usize> {
    let (mut x, mut y) = (x.clone(), y.clone());
    let mut len = 0usize;
    while y.is_positive() {
        len += 1;
        if len > cap {
            return None;
        }
        let a = Integer::div_ceil(&x, &y);
        let rem = a * &y - &x;
        x = std::mem::replace(&mut y, rem);
    }
    Some(len)
}

/// Exact plumbing rank when it is at most cap, without building the tree.
fn rank_if_small(t: &SurgeryTriple, cap: usize) -> Option<usize> {
    let dist = (t.pq() - t.n()).abs();
    let k = t.q().div_floor(t.p());
    let r = t.q().mod_floor(t.p());
    // center vertex, the 2-chain of length dist - 1, and either the extra
    // leg vertex (n < pq) or the 2-run of length k - 1 (n > pq)
    let mut fixed = &dist - 1u32 + 1u32;
    if t.n() > &t.pq() {
        fixed += &k - 1u32;
    } else {
        fixed += 1u32;
    }
    if fixed > BigInt::from(cap as u64) {
        return None;
    }
    let left = cap - fixed.to_usize().unwrap();
    let a = hj_len_capped(t.p(), &r, left)?;
    let b = hj_len_capped(t.p(), &(t.p() - &r), left - a)?;
    Some(fixed.to_usize().unwrap() + a + b)
}

fn dtest_route(t: &SurgeryTriple) -> Option<DInvVerdict> {
    let p = t.p().to_u64()?;
    let q = t.q().to_u64()?;
    let n = t.n().to_u64()?;
    if (p as u128 - 1) * (q as u128 - 1) / 2 > GENUS_CAP as u128 {
        return None;
    }
    let v = floer::torus_v(p, q).ok()?;
    Some(floer::square_surgery_test(&v, n))
}

fn lattice_route(t: &SurgeryTriple, budget: u64, rank_cap: usize) -> LatticeOutcome {
    match t.class() {
        SurgeryClass::LensMinus | SurgeryClass::LensPlus => return LatticeOutcome::LensSurgery,
        SurgeryClass::Reducible => return LatticeOutcome::ReducibleSurgery,
        SurgeryClass::Gamma1 | SurgeryClass::Gamma2 => {}
    }
    let Some(rank) = rank_if_small(t, rank_cap) else {
        return LatticeOutcome::RankCapped(rank_cap);
    };
    let tree = plumbing::surgery_plumbing(t).expect("non-lens, non-reducible surgeries plumb");
    debug_assert_eq!(tree.rank(), rank);
    let result = lattice::find_embedding(&plumbing::gram(&tree), budget)
        .expect("plumbing grams are positive definite");
    match result.status {
        SearchStatus::Found(_) => LatticeOutcome::Unobstructed,
        SearchStatus::None => LatticeOutcome::Obstructed,
        SearchStatus::Inconclusive => LatticeOutcome::Inconclusive,
    }
}

/// Runs the family decision and both obstructions on one triple.
///
/// Consistency demands: a family member passes the correction-term test,
/// and an obstructed lattice means no family.  The converse directions are
/// not logical requirements (an embedding proves nothing by itself).
pub fn cross_check(t: &SurgeryTriple, lattice_budget: u64, rank_cap: usize) -> Report {
    let family = family_member(t);
    let dtest = dtest_route(t);
    let lattice = lattice_route(t, lattice_budget, rank_cap);
    let dtest_ok = dtest.as_ref().map(DInvVerdict::pass);
    let consistent = !(family.is_some() && dtest_ok == Some(false))
        && !(family.is_some() && lattice == LatticeOutcome::Obstructed);
    Report {
        triple: t.clone(),
        family,
        dtest,
        lattice,
        consistent,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub squares_only: bool,
    pub lattice_budget: u64,
    pub rank_cap: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            squares_only: true,
            lattice_budget: lattice::DEFAULT_BUDGET,
            rank_cap: DEFAULT_RANK_CAP,
        }
    }
}

fn surgery_coefficients(pq: u64, squares_only: bool) -> Box<dyn Iterator<Item = u64>> {
    if squares_only {
        Box::new((1u64..).map(|m| m * m).take_while(move |n| *n <= pq + 1))
    } else {
        Box::new(1..=pq + 1)
    }
}

/// Cross-checks every coprime pair 2 <= p < q <= p_max at every coefficient
/// 1 <= n <= pq + 1 (or just the perfect squares among them), lazily.
pub fn scan(p_max: u64, opts: ScanOptions) -> Result<impl Iterator<Item = Report>> {
    if p_max < 3 {
        return Err(Error::BadParameter(format!(
            "p_max = {p_max} leaves no coprime pairs 2 <= p < q <= p_max"
        )));
    }
    Ok((3..=p_max)
        .flat_map(move |q| {
            (2..q)
                .filter(move |p| p.gcd(&q) == 1)
                .flat_map(move |p| surgery_coefficients(p * q, opts.squares_only).map(move |n| (p, q, n)))
        })
        .map(move |(p, q, n)| {
            let t = SurgeryTriple::new(p, q, n).expect("scan generates valid triples");
            cross_check(&t, opts.lattice_budget, opts.rank_cap)
        }))
}

/// Where the ratios q/p of an infinite family accumulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitPoint {
    One,
    PhiSquared,
    Four,
    Psi,
    PhiFourth,
}

impl LimitPoint {
    pub const ALL: [LimitPoint; 5] = [
        LimitPoint::One,
        LimitPoint::PhiSquared,
        LimitPoint::Four,
        LimitPoint::Psi,
        LimitPoint::PhiFourth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitPoint::One => "1",
            LimitPoint::PhiSquared => "phi^2",
            LimitPoint::Four => "4",
            LimitPoint::Psi => "3+2*sqrt(2)",
            LimitPoint::PhiFourth => "phi^4",
        }
    }

    /// A rational approximant together with a certified bound on its
    /// distance from the exact algebraic value (here 2 * 10^-12).
    pub fn approximant(self) -> (Rational, Rational) {
        let scale = BigInt::from(1_000_000_000_000u64);
        let root = |m: u32| (BigInt::from(m) * &scale * &scale).sqrt();
        let exact = |v: u32| (Rational::from_integer(v.into()), Rational::zero());
        match self {
            LimitPoint::One => exact(1),
            LimitPoint::Four => exact(4),
            LimitPoint::PhiSquared => {
                let value = Rational::new(BigInt::from(3u32) * &scale + root(5), 2u32 * &scale);
                (value, Rational::new(BigInt::one(), scale))
            }
            LimitPoint::Psi => {
                let value = Rational::new(BigInt::from(3u32) * &scale + 2u32 * root(2), scale.clone());
                (value, Rational::new(BigInt::from(2u32), scale))
            }
            LimitPoint::PhiFourth => {
                let value = Rational::new(BigInt::from(7u32) * &scale + 3u32 * root(5), 2u32 * &scale);
                (value, Rational::new(BigInt::from(2u32), scale))
            }
        }
    }

    /// Upper bound on |x - exact value|.
    pub fn distance_to(self, x: &Rational) -> Rational {
        let (value, slack) = self.approximant();
        (x - value).abs() + slack
    }
}

/// The accumulation point of q/p for an infinite family.
pub fn limit_of(id: u8) -> Option<LimitPoint> {
    match id {
        1 | 2 | 6 | 14 => Some(LimitPoint::One),
        3 | 7 | 8 => Some(LimitPoint::Four),
        9 | 15 | 16 => Some(LimitPoint::PhiSquared),
        10 | 17 => Some(LimitPoint::PhiFourth),
        4 | 11 | 12 | 18 => Some(LimitPoint::Psi),
        _ => None,
    }
}

/// The ratio q/p of one family member, for comparison against the family's
/// limit point. Sporadic families are rejected.
pub fn accumulation_check(tag: &FamilyTag) -> Result<Rational> {
    if tag.is_sporadic() {
        return Err(Error::BadParameter(format!(
            "family {} is sporadic and has no accumulation behavior",
            tag.id()
        )));
    }
    let t = family_enumerate(tag);
    Ok(Rational::new(t.q().clone(), t.p().clone()))
}

/// The largest q/p over the whole classification, attained by (3, 22; 64).
pub fn max_slope_ratio() -> Rational {
    Rational::new(BigInt::from(22u32), BigInt::from(3u32))
}

fn parameter_grid(id: u8, branch: Option<Branch>) -> (u64, u64) {
    match id {
        7 => (2, 4),
        8 if branch == Some(Branch::Plus) => (5, 8),
        8 => (11, 8),
        _ => (minimum_index(id), 1),
    }
}

/// The first `count` members of a family, per branch for the two-sided ones,
/// both members for the sporadic ones.
pub fn first_members(id: u8, count: usize) -> Result<Vec<FamilyTag>> {
    if !(1..=FAMILY_COUNT).contains(&id) {
        return Err(Error::BadParameter(format!(
            "family id {id} is not in 1..={FAMILY_COUNT}"
        )));
    }
    let branches: &[Option<Branch>] = if branch_required(id) {
        &[Some(Branch::Plus), Some(Branch::Minus)]
    } else {
        &[None]
    };
    let mut out = Vec::new();
    for &branch in branches {
        let (start, step) = parameter_grid(id, branch);
        let cap = if is_sporadic_id(id) { count.min(2) } else { count };
        for i in 0..cap as u64 {
            out.push(FamilyTag::new(id, start + i * step, branch).expect("grid indices are valid"));
        }
    }
    Ok(out)
}
