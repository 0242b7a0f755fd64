//! Integer sequences indexing the surgery families: Fibonacci numbers and
//! three companions of the Pell recursion x_{k+1} = 6 x_k - x_{k-1}.

use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqKind {
    Fib,
    R,
    S,
    T,
}

impl std::fmt::Display for SeqKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeqKind::Fib => "F",
            SeqKind::R => "R",
            SeqKind::S => "S",
            SeqKind::T => "T",
        })
    }
}

static FIB: LazyLock<Mutex<Vec<BigInt>>> = LazyLock::new(|| seed(&[0, 1]));
static PELL_R: LazyLock<Mutex<Vec<BigInt>>> = LazyLock::new(|| seed(&[1, 3]));
static PELL_S: LazyLock<Mutex<Vec<BigInt>>> = LazyLock::new(|| seed(&[1, 1]));
static PELL_T: LazyLock<Mutex<Vec<BigInt>>> = LazyLock::new(|| seed(&[0, 1]));

fn seed(init: &[i64]) -> Mutex<Vec<BigInt>> {
    Mutex::new(init.iter().map(|&v| BigInt::from(v)).collect())
}

fn nth(table: &Mutex<Vec<BigInt>>, n: usize, step: fn(&BigInt, &BigInt) -> BigInt) -> BigInt {
    let mut t = table.lock().unwrap();
    while t.len() <= n {
        let next = step(&t[t.len() - 1], &t[t.len() - 2]);
        t.push(next);
    }
    t[n].clone()
}

/// F_n with F_0 = 0, F_1 = 1. Also accepts n = -1, where F_{-1} = 1.
pub fn fibonacci(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::IndexOutOfRange(n));
    }
    if n == -1 {
        return Ok(BigInt::from(1));
    }
    Ok(nth(&FIB, n as usize, |a, b| a + b))
}

/// n-th term of the R, S, or T sequence; all three satisfy
/// x_{k+1} = 6 x_k - x_{k-1} with seeds (1,3), (1,1), (0,1).
pub fn pell(kind: SeqKind, n: u64) -> Result<BigInt> {
    let table = match kind {
        SeqKind::Fib => return Err(Error::NotPellKind),
        SeqKind::R => &PELL_R,
        SeqKind::S => &PELL_S,
        SeqKind::T => &PELL_T,
    };
    Ok(nth(table, n as usize, |a, b| BigInt::from(6) * a - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    fn fib(n: i64) -> BigInt {
        fibonacci(n).unwrap()
    }

    fn p(kind: SeqKind, n: u64) -> BigInt {
        pell(kind, n).unwrap()
    }

    #[test]
    fn fibonacci_fixtures() {
        let first: Vec<i64> = (0..11).map(|n| fib(n).to_i64().unwrap()).collect();
        assert_eq!(first, [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        assert_eq!(fib(-1), BigInt::one());
        assert!(fibonacci(-2).is_err());
    }

    #[test]
    fn pell_fixtures() {
        let r: Vec<i64> = (0..5).map(|n| p(SeqKind::R, n).to_i64().unwrap()).collect();
        let s: Vec<i64> = (0..6).map(|n| p(SeqKind::S, n).to_i64().unwrap()).collect();
        let t: Vec<i64> = (0..6).map(|n| p(SeqKind::T, n).to_i64().unwrap()).collect();
        assert_eq!(r, [1, 3, 17, 99, 577]);
        assert_eq!(s, [1, 1, 5, 29, 169, 985]);
        assert_eq!(t, [0, 1, 6, 35, 204, 1189]);
        assert_eq!(pell(SeqKind::Fib, 3), Err(Error::NotPellKind));
    }

    #[test]
    fn agrees_with_direct_recursion() {
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        for n in 0..80 {
            assert_eq!(fib(n), a);
            let c = &a + &b;
            a = b;
            b = c;
        }
        for (kind, s0, s1) in [
            (SeqKind::R, 1, 3),
            (SeqKind::S, 1, 1),
            (SeqKind::T, 0, 1),
        ] {
            let (mut a, mut b) = (BigInt::from(s0), BigInt::from(s1));
            for n in 0..80 {
                assert_eq!(p(kind, n), a);
                let c = BigInt::from(6) * &b - &a;
                a = b;
                b = c;
            }
        }
    }

    #[test]
    fn pell_cross_identities() {
        for n in 0..=50u64 {
            let (s, s1) = (p(SeqKind::S, n), p(SeqKind::S, n + 1));
            let (t, t1) = (p(SeqKind::T, n), p(SeqKind::T, n + 1));
            assert_eq!(BigInt::from(4) * &t * &t1 + 1, &s1 * &s1);
            assert_eq!(&s * &s1 - 1, BigInt::from(4) * &t * &t);
        }
    }

    #[test]
    fn fibonacci_quadratic_identities() {
        for n in 1..=50i64 {
            let sign = if n % 2 == 0 { -1 } else { 1 };
            assert_eq!(
                &fib(n) * &fib(n) - &fib(n + 1) * &fib(n - 1),
                BigInt::from(sign)
            );
        }
        // odd-index form used by the lens-space families
        for n in 1..=25i64 {
            let f = fib(2 * n + 1);
            assert_eq!(&f * &f, fib(2 * n - 1) * fib(2 * n + 3) - 1);
        }
    }

    #[test]
    fn ratio_converges_to_silver_limit() {
        let psi = 3.0 + 2.0 * std::f64::consts::SQRT_2;
        for n in 10..=30u64 {
            let ratio = p(SeqKind::S, n + 1).to_f64().unwrap() / p(SeqKind::S, n).to_f64().unwrap();
            assert!((ratio - psi).abs() < 1e-6, "n = {n}: {ratio}");
        }
    }

    #[test]
    fn strictly_increasing() {
        for n in 2..60 {
            assert!(fib(n + 1) > fib(n));
        }
        for kind in [SeqKind::R, SeqKind::S, SeqKind::T] {
            for n in 2..60 {
                assert!(p(kind, n + 1) > p(kind, n), "{kind} at {n}");
            }
        }
        for kind in [SeqKind::R, SeqKind::S, SeqKind::T] {
            for n in 0..60 {
                assert!(p(kind, n).is_positive() || p(kind, n).is_zero());
            }
        }
    }
}
