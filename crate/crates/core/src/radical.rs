//! Exact elements of real quadratic towers, kept in a canonical normal form.
//!
//! A `Radical` is a finite sum `sum_i c_i * sqrt(m_i)` with rational
//! coefficients and pairwise distinct squarefree positive integer radicands
//! (`m = 1` holds the rational part). This is the subfield of the reals
//! generated by square roots of rationals; every two-circle intersection of
//! circles with such centers and radii either lands back in it (after
//! denesting) or is flagged as inexact by the caller.
//!
//! The representation is canonical: two values are equal iff their maps are
//! identical, so equality is a syntactic check and the sign of a nonzero
//! element is decidable by interval refinement.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rat::{self, Rat};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Radical {
    /// squarefree radicand -> coefficient; zero coefficients are never stored.
    terms: BTreeMap<u64, Rat>,
}

impl Radical {
    pub fn zero() -> Self {
        Radical::default()
    }

    pub fn one() -> Self {
        Radical::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Radical { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Radical::from_rat(rat::rat_int(n))
    }

    /// `c * sqrt(m)` for squarefree `m` (not checked beyond decomposition).
    pub fn root_term(c: Rat, m: u64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Radical { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&1))
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&1) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    fn insert_term(terms: &mut BTreeMap<u64, Rat>, m: u64, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Outward rational interval containing the exact value, resolution `2^-bits`.
    pub fn bounds(&self, bits: u32) -> (Rat, Rat) {
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (&m, c) in &self.terms {
            if m == 1 {
                lo += c;
                hi += c;
            } else {
                let (rlo, rhi) = rat::sqrt_bounds(&Rat::from(BigInt::from(m)), bits);
                if c.is_negative() {
                    lo += c * &rhi;
                    hi += c * &rlo;
                } else {
                    lo += c * &rlo;
                    hi += c * &rhi;
                }
            }
        }
        (lo, hi)
    }

    /// Exact sign: -1, 0, +1. Always terminates (nonzero canonical forms are
    /// bounded away from zero, so interval refinement must separate).
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_negative() { -1 } else { 1 };
        }
        let mut bits = 16;
        loop {
            let (lo, hi) = self.bounds(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    pub fn cmp_exact(&self, other: &Radical) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self.clone() - other.clone()).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> Radical {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(80);
        let mid = (lo + hi) / rat::rat_int(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inverse(&self) -> Option<Radical> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Radical::from_rat(q.recip()));
        }
        // pick a prime radicand p present in some term; conjugating by p and
        // multiplying kills it: x * sigma_p(x) lives in a smaller tower
        let p = self
            .terms
            .keys()
            .find(|&&m| m != 1)
            .map(|&m| smallest_prime_factor(m))
            .expect("non-rational radical has a root term");
        let conj = self.conjugate(p);
        let norm = self.clone() * conj.clone();
        debug_assert!(norm.terms.keys().all(|&m| m % p != 0));
        Some(conj * norm.inverse()?)
    }

    /// Flip the sign of every term whose radicand is divisible by `p`.
    fn conjugate(&self, p: u64) -> Radical {
        let terms = self
            .terms
            .iter()
            .map(|(&m, c)| (m, if m % p == 0 { -c.clone() } else { c.clone() }))
            .collect();
        Radical { terms }
    }

    /// Exact square root when it stays inside the quadratic tower:
    /// rationals, and one-radical values `a + b*sqrt(d)` that denest.
    /// Returns `None` when no normal form is found (the value may still have
    /// a real square root; the caller falls back to intervals).
    pub fn sqrt(&self) -> Option<Radical> {
        match self.sign() {
            0 => return Some(Radical::zero()),
            -1 => return None,
            _ => {}
        }
        if let Some(q) = self.as_rational() {
            let (c, m) = rat::sqrt_rational(&q)?;
            return Some(Radical::root_term(c, m));
        }
        if self.terms.len() <= 2 {
            let a = self.terms.get(&1).cloned().unwrap_or_else(Rat::zero);
            let mut root = self.terms.iter().filter(|(m, _)| **m != 1);
            let (&d, b) = root.next()?;
            if root.next().is_some() {
                return None;
            }
            // sqrt(a + b*sqrt(d)) = sqrt((a+R)/2) + sign(b)*sqrt((a-R)/2)
            // when R = sqrt(a^2 - b^2 d) is rational.
            let disc = &a * &a - b * b * Rat::from(BigInt::from(d));
            if disc.is_negative() {
                return None;
            }
            let (rc, rm) = rat::sqrt_rational(&disc)?;
            if rm != 1 {
                return None;
            }
            let half = rat::rat(1, 2);
            let u = (&a + &rc) * &half;
            let v = (&a - &rc) * &half;
            let (uc, um) = rat::sqrt_rational(&u)?;
            let (vc, vm) = rat::sqrt_rational(&v)?;
            let su = Radical::root_term(uc, um);
            let sv = Radical::root_term(vc, vm);
            let res = if b.is_negative() { su - sv } else { su + sv };
            debug_assert_eq!(res.clone() * res.clone(), *self);
            return Some(res);
        }
        None
    }
}

fn smallest_prime_factor(mut m: u64) -> u64 {
    if m % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= m {
        if m % p == 0 {
            return p;
        }
        p += 2;
    }
    m = m.max(2);
    m
}

impl Add for Radical {
    type Output = Radical;
    fn add(self, rhs: Radical) -> Radical {
        let mut terms = self.terms;
        for (m, c) in rhs.terms {
            Radical::insert_term(&mut terms, m, c);
        }
        Radical { terms }
    }
}

impl Sub for Radical {
    type Output = Radical;
    fn sub(self, rhs: Radical) -> Radical {
        self + (-rhs)
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        Radical { terms }
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, rhs: Radical) -> Radical {
        let mut terms = BTreeMap::new();
        for (&m1, c1) in &self.terms {
            for (&m2, c2) in &rhs.terms {
                let g = num_integer::gcd(m1, m2);
                let m = (m1 / g) * (m2 / g);
                let c = c1 * c2 * Rat::from(BigInt::from(g));
                Radical::insert_term(&mut terms, m, c);
            }
        }
        Radical { terms }
    }
}

impl Div for Radical {
    type Output = Radical;
    fn div(self, rhs: Radical) -> Radical {
        self * rhs.inverse().expect("division by zero radical")
    }
}

impl Mul<Rat> for Radical {
    type Output = Radical;
    fn mul(self, rhs: Rat) -> Radical {
        if rhs.is_zero() {
            return Radical::zero();
        }
        let terms = self.terms.into_iter().map(|(m, c)| (m, c * &rhs)).collect();
        Radical { terms }
    }
}

impl PartialOrd for Radical {
    fn partial_cmp(&self, other: &Radical) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if m == 1 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "sqrt({})", m)?;
            } else {
                write!(f, "{}*sqrt({})", a, m)?;
            }
        }
        Ok(())
    }
}

/// Sum of a rational interval and an exact radical, used for mixed bounds.
pub fn interval_of(x: &Radical, bits: u32) -> (Rat, Rat) {
    x.bounds(bits)
}

/// Convenience: `sqrt(n)` for a nonnegative integer.
pub fn sqrt_int(n: u64) -> Radical {
    Radical::from_rat(Rat::from(BigInt::from(BigUint::from(n))))
        .sqrt()
        .expect("integer square roots always normalize")
}
