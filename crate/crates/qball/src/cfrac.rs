//! Negative continued fractions: strings of coefficients >= 2, stored
//! outermost first, so [a1, a2, ..., an] stands for a1 - 1/(a2 - 1/(...)).
//!
//! Arithmetic runs in i128 when it fits and falls back to big integers, so
//! every public function is exact on all inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Coefficient string of a negative continued fraction, outermost first.
/// Nonempty, every entry >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightString {
    entries: Vec<i64>,
}

impl WeightString {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyString);
        }
        if let Some(&bad) = entries.iter().find(|&&e| e < 2) {
            return Err(Error::BadWeight(bad));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> i64 {
        self.entries[0]
    }

    pub fn last(&self) -> i64 {
        *self.entries.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Self { entries }
    }
}

impl std::fmt::Display for WeightString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

fn eval_i128(entries: &[i64]) -> Option<(i128, i128)> {
    let (mut p, mut q): (i128, i128) = (1, 0);
    for &a in entries.iter().rev() {
        let np = (a as i128).checked_mul(p)?.checked_sub(q)?;
        q = p;
        p = np;
    }
    Some((p, q))
}

fn eval_big(entries: &[i64]) -> (BigInt, BigInt) {
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    for &a in entries.iter().rev() {
        let np = BigInt::from(a) * &p - &q;
        q = p;
        p = np;
    }
    (p, q)
}

/// Value of the string as an exact rational. Always > 1 except for [2] -> 2
/// style integer outputs; consecutive continuants are coprime, so the result
/// is already in lowest terms.
pub fn evaluate(ws: &WeightString) -> Rational {
    let (p, q) = match eval_i128(&ws.entries) {
        Some((p, q)) => (BigInt::from(p), BigInt::from(q)),
        None => eval_big(&ws.entries),
    };
    Rational::new_raw(p, q)
}

fn expand_i128(mut n: i128, mut d: i128) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    loop {
        let a = Integer::div_ceil(&n, &d);
        out.push(i64::try_from(a).ok()?);
        let r = a.checked_mul(d)? - n;
        if r == 0 {
            return Some(out);
        }
        n = d;
        d = r;
    }
}

fn expand_big(mut n: BigInt, mut d: BigInt) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    loop {
        let a = n.div_ceil(&d);
        out.push(
            a.to_i64()
                .ok_or_else(|| Error::WeightOverflow(a.clone()))?,
        );
        let r = &a * &d - n;
        if r.is_zero() {
            return Ok(out);
        }
        n = d;
        d = r;
    }
}

/// Expands a rational > 1 into its (unique) coefficient string.
pub fn expand(value: &Rational) -> Result<WeightString> {
    if value <= &Rational::one() {
        return Err(Error::NotExpandable(value.to_string()));
    }
    expand_reduced(value.numer(), value.denom())
}

/// Same as [`expand`] on num/den directly; requires num > den >= 1 coprime.
pub fn expand_frac(num: &BigInt, den: &BigInt) -> Result<WeightString> {
    if den < &BigInt::one() || num <= den {
        return Err(Error::NotExpandable(format!("{num}/{den}")));
    }
    if !num.gcd(den).is_one() {
        return Err(Error::NotExpandable(format!("{num}/{den} is not reduced")));
    }
    expand_reduced(num, den)
}

// Callers guarantee num > den >= 1 in lowest terms, so the gcd check in
// `expand_frac` can be skipped.
fn expand_reduced(num: &BigInt, den: &BigInt) -> Result<WeightString> {
    let entries = match (num.to_i128(), den.to_i128()) {
        (Some(n), Some(d)) if n <= i128::MAX / 2 => match expand_i128(n, d) {
            Some(v) => v,
            None => expand_big(num.clone(), den.clone())?,
        },
        _ => expand_big(num.clone(), den.clone())?,
    };
    Ok(WeightString { entries })
}

/// Complementary string: if [ws] = x/y then [dual(ws)] = x/(x-y), so the
/// reciprocals of the two values sum to 1.
pub fn dual(ws: &WeightString) -> WeightString {
    if let Some((p, q)) = eval_i128(&ws.entries) {
        if let Some(entries) = expand_i128(p, p - q) {
            return WeightString { entries };
        }
    }
    let (p, q) = eval_big(&ws.entries);
    let d = &p - &q;
    expand_frac(&p, &d).expect("complement of a valid string is expandable")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringStats {
    /// sum of (entry - 3)
    pub i_value: i64,
    /// sum of (entry - 1)
    pub j_value: i64,
}

pub fn stats(ws: &WeightString) -> StringStats {
    let mut i_value = 0i64;
    let mut j_value = 0i64;
    for &a in &ws.entries {
        i_value += a - 3;
        j_value += a - 1;
    }
    StringStats { i_value, j_value }
}

/// Inverse of `a` modulo `m`, normalized into (0, m). Requires m >= 2.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if m < &BigInt::from(2) {
        return Err(Error::BadParameter(format!("modulus {m} below 2")));
    }
    let a_red = a.mod_floor(m);
    let ext = a_red.extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::NotCoprime(a.clone(), m.clone()));
    }
    Ok(ext.x.mod_floor(m))
}

/// Row of a staircase point diagram: `points` dots starting at column `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub offset: i64,
    pub points: i64,
}

/// Staircase point diagram of a string: row j carries a_j - 1 points and each
/// row starts under the last point of the previous one. Reflecting the
/// diagram across its anti-diagonal produces the diagram of the dual string,
/// which makes it an independent cross-check for [`dual`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RDiagram {
    rows: Vec<Row>,
}

impl RDiagram {
    pub fn of(ws: &WeightString) -> Self {
        let mut rows = Vec::with_capacity(ws.len());
        let mut offset = 0i64;
        for &a in &ws.entries {
            rows.push(Row {
                offset,
                points: a - 1,
            });
            offset += a - 2;
        }
        RDiagram { rows }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn total_points(&self) -> i64 {
        self.rows.iter().map(|r| r.points).sum()
    }

    pub fn width(&self) -> i64 {
        self.rows.last().map_or(0, |r| r.offset + r.points)
    }

    /// Transpose across the anti-diagonal: point (row, col) -> (col, row).
    /// The rows covering a column form a contiguous block, so a single sweep
    /// suffices.
    pub fn reflected(&self) -> Self {
        let width = self.width();
        let mut rows = Vec::with_capacity(width as usize);
        let mut lo = 0usize;
        for col in 0..width {
            while lo < self.rows.len() && self.rows[lo].offset + self.rows[lo].points <= col {
                lo += 1;
            }
            let mut hi = lo;
            while hi < self.rows.len() && self.rows[hi].offset <= col {
                hi += 1;
            }
            debug_assert!(hi > lo, "every column holds a point");
            rows.push(Row {
                offset: lo as i64,
                points: (hi - lo) as i64,
            });
        }
        RDiagram { rows }
    }

    /// Reads the diagram back as a string (entry = points + 1), checking the
    /// staircase layout.
    pub fn as_weight_string(&self) -> Result<WeightString> {
        let mut expected_offset = 0i64;
        for r in &self.rows {
            if r.offset != expected_offset {
                return Err(Error::BadParameter(format!(
                    "row offset {} breaks the staircase (expected {})",
                    r.offset, expected_offset
                )));
            }
            expected_offset += r.points - 1;
        }
        WeightString::new(self.rows.iter().map(|r| r.points + 1).collect())
    }
}

/// Dual computed by diagram reflection alone; used to cross-check [`dual`].
pub fn dual_by_reflection(ws: &WeightString) -> Result<WeightString> {
    RDiagram::of(ws).reflected().as_weight_string()
}
