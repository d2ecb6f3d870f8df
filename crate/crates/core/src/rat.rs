//! Arbitrary-precision rational helpers shared by the certified number types.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Exact rational value of a finite float (the dyadic it denotes).
pub fn f64_to_rat(v: f64) -> Rat {
    Rat::from_float(v).unwrap_or_else(|| rat_int(0))
}

/// Floor of the integer square root.
pub fn isqrt(n: &BigUint) -> BigUint {
    num_integer::Roots::sqrt(n)
}

pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    let r = isqrt(n);
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Largest radicand tracked exactly. Factoring is done by trial division up
/// to 10^6, so anything below this bound with no small prime factor is
/// guaranteed squarefree after square extraction.
const RADICAND_LIMIT: u64 = 1_000_000_000_000;
const TRIAL_LIMIT: u64 = 1_000_000;

/// Decompose `n = f^2 * s` with `s` squarefree. Returns `(f, s)`, or `None`
/// when `n` is too large to factor reliably.
pub fn squarefree_decompose(n: &BigUint) -> Option<(BigUint, u64)> {
    if n.is_zero() {
        return Some((BigUint::zero(), 0));
    }
    let mut f = BigUint::one();
    let mut rem = n.clone();
    // pull out square factors of small primes
    let mut p: u64 = 2;
    let mut s: u64 = 1;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > rem {
            break;
        }
        let mut count = 0u32;
        while (&rem % &bp).is_zero() {
            rem /= &bp;
            count += 1;
        }
        if count > 0 {
            if count >= 2 {
                f *= bp.pow(count / 2);
            }
            if count % 2 == 1 {
                s = s.checked_mul(p)?;
                if s > RADICAND_LIMIT {
                    return None;
                }
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    // rem now has no prime factor <= 10^6
    if !rem.is_one() {
        if let Some(r) = is_perfect_square(&rem) {
            f *= r;
        } else {
            let rem64 = rem.to_u64()?;
            if rem64 > RADICAND_LIMIT {
                return None;
            }
            // all factors exceed 10^6, rem <= 10^12, not a square => squarefree
            s = s.checked_mul(rem64)?;
            if s > RADICAND_LIMIT {
                return None;
            }
        }
    }
    Some((f, s))
}

/// Exact square root of a nonnegative rational as `(coeff, radicand)` with
/// `sqrt(q) = coeff * sqrt(radicand)` and `radicand` squarefree.
pub fn sqrt_rational(q: &Rat) -> Option<(Rat, u64)> {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return Some((Rat::zero(), 1));
    }
    let n = q.numer().magnitude().clone();
    let d = q.denom().magnitude().clone();
    // sqrt(n/d) = sqrt(n*d)/d
    let (f, s) = squarefree_decompose(&(&n * &d))?;
    let coeff = Rat::new(BigInt::from(f), BigInt::from(d));
    Some((coeff, s))
}

/// Outward rational bounds on `sqrt(q)` with `2^-bits` resolution; `q >= 0`.
pub fn sqrt_bounds(q: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!q.is_negative());
    if q.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    let n = q.numer().magnitude().clone();
    let d = q.denom().magnitude().clone();
    // sqrt(n/d) = sqrt(n*d)/d; scale by 2^bits
    let scaled = (&n * &d) << (2 * bits as usize);
    let lo = isqrt(&scaled);
    let hi = &lo + BigUint::one();
    let denom = BigInt::from(d) << (bits as usize);
    (
        Rat::new(BigInt::from(lo), denom.clone()),
        Rat::new(BigInt::from(hi), denom),
    )
}

/// Simplest rational strictly inside the open interval (lo, hi): the unique
/// one minimizing the denominator (ties broken toward smaller magnitude),
/// found by walking the Stern-Brocot tree.
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rat::zero();
    }
    if !hi.is_positive() {
        return -simplest_in(&-hi.clone(), &-lo.clone());
    }
    // now 0 <= lo < hi
    let next_int = if lo.is_integer() {
        lo + Rat::one()
    } else {
        lo.ceil()
    };
    if next_int < *hi {
        return next_int;
    }
    let fl = lo.floor();
    if lo.is_integer() {
        // (n, n + x] shape with hi <= n + 1: answer n + 1/m for the
        // smallest m with n + 1/m < hi
        let frac = hi - &fl;
        let m = (Rat::one() / frac).floor() + Rat::one();
        return fl + Rat::one() / m;
    }
    &fl + (Rat::one() / simplest_in(&(Rat::one() / (hi - &fl)), &(Rat::one() / (lo - &fl))))
}

/// Render a rational as a decimal string with the given number of fractional
/// digits (round toward zero), e.g. for report output.
pub fn decimal_string(q: &Rat, digits: u32) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let s = scaled.to_string();
    let s = if s.len() as u32 <= digits {
        format!("0.{:0>width$}", s, width = digits as usize)
    } else {
        let split = s.len() - digits as usize;
        format!("{}.{}", &s[..split], &s[split..])
    };
    if neg {
        format!("-{}", s)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_in_intervals() {
        assert_eq!(simplest_in(&rat(-1, 2), &rat(1, 3)), rat_int(0));
        assert_eq!(simplest_in(&rat(1, 2), &rat(5, 2)), rat_int(1));
        assert_eq!(simplest_in(&rat(3, 1), &rat(4, 1)), rat(7, 2));
        assert_eq!(simplest_in(&rat(5, 4), &rat(11, 8)), rat(4, 3));
        assert_eq!(simplest_in(&rat(0, 1), &rat(1, 3)), rat(1, 4));
        assert_eq!(simplest_in(&rat(-5, 2), &rat(-9, 4)), rat(-7, 3));
        // the returned value is always strictly inside
        for (lo, hi) in [(rat(17, 12), rat(18, 12)), (rat(99, 100), rat(100, 99))] {
            let m = simplest_in(&lo, &hi);
            assert!(lo < m && m < hi);
        }
    }

    #[test]
    fn squarefree_small() {
        let (f, s) = squarefree_decompose(&BigUint::from(12u32)).unwrap();
        assert_eq!((f, s), (BigUint::from(2u32), 3));
        let (f, s) = squarefree_decompose(&BigUint::from(49u32)).unwrap();
        assert_eq!((f, s), (BigUint::from(7u32), 1));
        let (f, s) = squarefree_decompose(&BigUint::from(33u32)).unwrap();
        assert_eq!((f, s), (BigUint::from(1u32), 33));
    }

    #[test]
    fn sqrt_rational_exact() {
        let (c, s) = sqrt_rational(&rat(1, 4)).unwrap();
        assert_eq!((c, s), (rat(1, 2), 1));
        let (c, s) = sqrt_rational(&rat(3, 4)).unwrap();
        assert_eq!((c, s), (rat(1, 2), 3));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let (lo, hi) = sqrt_bounds(&rat_int(2), 64);
        assert!(&lo * &lo < rat_int(2));
        assert!(&hi * &hi > rat_int(2));
        assert!(&hi - &lo <= rat(2, 1) / Rat::from(BigInt::from(2u8).pow(64)));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_string(&rat(1, 4), 3), "0.250");
        assert_eq!(decimal_string(&rat(-7, 2), 2), "-3.50");
    }
}
