//! Certified real numbers: a refinable rational interval plus, when the
//! value lives in a quadratic tower, its exact canonical normal form.
//!
//! All comparisons are three-valued. `Less`/`Greater` come from interval
//! separation (or exact signs), `Equal` only ever comes from coinciding
//! normal forms, and anything that exceeds the precision budget is
//! `Undecided` rather than a guess.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::radical::Radical;
use crate::rat::{self, Rat};

pub const DEFAULT_PRECISION: u32 = 256;

/// Three-valued comparison outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl Cmp {
    pub fn decided(self) -> bool {
        self != Cmp::Undecided
    }
    pub fn reverse(self) -> Cmp {
        match self {
            Cmp::Less => Cmp::Greater,
            Cmp::Greater => Cmp::Less,
            other => other,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CReal {
    expr: Arc<Expr>,
    /// Canonical normal form, when the value is representable in the tower.
    exact: Option<Radical>,
    /// Set when the value was built as `sqrt(x)` with exact `x`: the value is
    /// the nonnegative root of `sqrt_of` even if the root itself does not
    /// denest, which lets comparisons fall back to comparing squares.
    sqrt_of: Option<Radical>,
    /// Best interval known so far; refinement only ever shrinks it.
    interval: Option<(Rat, Rat)>,
    /// Maximum refinement resolution in bits.
    budget: u32,
}

impl CReal {
    fn new(expr: Expr, budget: u32) -> CReal {
        let exact = expr.to_radical();
        let sqrt_of = match (&exact, &expr) {
            (Some(e), _) => Some(e.clone() * e.clone()),
            (None, Expr::Sqrt(inner)) => inner.to_radical().filter(|r| r.sign() >= 0),
            _ => None,
        };
        let interval = expr.bounds(32);
        CReal {
            expr: Arc::new(expr),
            exact,
            sqrt_of,
            interval,
            budget,
        }
    }

    pub fn from_expr(expr: Expr) -> CReal {
        CReal::new(expr, DEFAULT_PRECISION)
    }

    pub fn parse(s: &str) -> Result<CReal, crate::expr::ParseError> {
        Ok(CReal::from_expr(Expr::parse(s)?))
    }

    pub fn from_rat(q: Rat) -> CReal {
        CReal::from_expr(Expr::Rat(q))
    }

    pub fn from_int(n: i64) -> CReal {
        CReal::from_rat(rat::rat_int(n))
    }

    pub fn from_radical(r: &Radical) -> CReal {
        CReal::from_expr(radical_to_expr(r))
    }

    pub fn zero() -> CReal {
        CReal::from_int(0)
    }

    pub fn one() -> CReal {
        CReal::from_int(1)
    }

    pub fn with_budget(mut self, bits: u32) -> CReal {
        self.budget = bits;
        self
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn exact(&self) -> Option<&Radical> {
        self.exact.as_ref()
    }

    /// Normal form of the square, available for values built as square roots
    /// even when the root itself does not denest.
    pub fn exact_square(&self) -> Option<&Radical> {
        self.sqrt_of.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Refine to at least `bits` of resolution (capped by the budget);
    /// the result interval is intersected with the current one, so it never
    /// widens.
    pub fn refine(&self, bits: u32) -> CReal {
        let bits = bits.min(self.budget);
        let mut out = self.clone();
        if let Some(better) = self.interval_at(bits) {
            out.interval = Some(match &self.interval {
                Some((lo, hi)) => (better.0.max(lo.clone()), better.1.min(hi.clone())),
                None => better,
            });
        }
        out
    }

    fn interval_at(&self, bits: u32) -> Option<(Rat, Rat)> {
        if let Some(e) = &self.exact {
            return Some(e.bounds(bits));
        }
        self.expr.bounds(bits)
    }

    /// Current enclosing interval (refining on demand at 32 bits if the
    /// construction-time evaluation failed).
    pub fn interval(&self) -> Option<(Rat, Rat)> {
        self.interval.clone()
    }

    pub fn width(&self) -> Option<Rat> {
        self.interval.as_ref().map(|(lo, hi)| hi - lo)
    }

    pub fn to_f64(&self) -> f64 {
        for bits in [64, 128, 256] {
            if let Some((lo, hi)) = self.interval_at(bits.min(self.budget)) {
                let mid = (lo + hi) / rat::rat_int(2);
                if let Some(v) = mid.to_f64() {
                    return v;
                }
            }
        }
        f64::NAN
    }

    /// Decimal rendering with `digits` fractional digits, refined as far as
    /// the budget allows. Falls back to interval notation when the value is
    /// not pinned down to that resolution.
    pub fn decimal(&self, digits: u32) -> String {
        let target = Rat::new(1.into(), num_bigint::BigInt::from(10u32).pow(digits));
        let mut bits = 64u32;
        let mut best = self.interval.clone();
        loop {
            if let Some(iv) = self.interval_at(bits) {
                best = Some(match best {
                    Some((lo, hi)) => (iv.0.max(lo), iv.1.min(hi)),
                    None => iv,
                });
            }
            if let Some((lo, hi)) = &best {
                if hi - lo < target {
                    let mid = (lo + hi) / rat::rat_int(2);
                    return rat::decimal_string(&mid, digits);
                }
            }
            if bits >= self.budget {
                break;
            }
            bits = (bits * 2).min(self.budget);
        }
        match &best {
            Some((lo, hi)) => format!(
                "[{}, {}]",
                rat::decimal_string(lo, digits),
                rat::decimal_string(hi, digits)
            ),
            None => "<unresolved>".to_string(),
        }
    }

    pub fn sign(&self) -> Cmp {
        self.compare(&CReal::zero())
    }

    /// Three-valued comparison. Exact normal forms decide everything; a pair
    /// of known squares of nonnegative values decides through the squares;
    /// otherwise interval refinement decides strict order up to the budget.
    pub fn compare(&self, other: &CReal) -> Cmp {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return match a.cmp_exact(b) {
                std::cmp::Ordering::Less => Cmp::Less,
                std::cmp::Ordering::Equal => Cmp::Equal,
                std::cmp::Ordering::Greater => Cmp::Greater,
            };
        }
        // both are nonnegative roots of exact values: compare the squares
        if self.exact.is_none() && other.exact.is_none() {
            if let (Some(a2), Some(b2)) = (&self.sqrt_of, &other.sqrt_of) {
                return match a2.cmp_exact(b2) {
                    std::cmp::Ordering::Less => Cmp::Less,
                    std::cmp::Ordering::Equal => Cmp::Equal,
                    std::cmp::Ordering::Greater => Cmp::Greater,
                };
            }
        }
        // one exact, one a known nonnegative root
        if let (Some(a), Some(b2)) = (&self.exact, &other.sqrt_of) {
            if other.exact.is_none() {
                if a.sign() < 0 {
                    return Cmp::Less;
                }
                return match (a.clone() * a.clone()).cmp_exact(b2) {
                    std::cmp::Ordering::Less => Cmp::Less,
                    std::cmp::Ordering::Equal => Cmp::Equal,
                    std::cmp::Ordering::Greater => Cmp::Greater,
                };
            }
        }
        if let (Some(a2), Some(b)) = (&self.sqrt_of, &other.exact) {
            if self.exact.is_none() {
                if b.sign() < 0 {
                    return Cmp::Greater;
                }
                return match a2.cmp_exact(&(b.clone() * b.clone())) {
                    std::cmp::Ordering::Less => Cmp::Less,
                    std::cmp::Ordering::Equal => Cmp::Equal,
                    std::cmp::Ordering::Greater => Cmp::Greater,
                };
            }
        }
        // interval separation, never Equal. An exact side refines for free,
        // so only the inexact side's budget limits the effort.
        let budget = match (self.exact.is_some(), other.exact.is_some()) {
            (true, false) => other.budget,
            (false, true) => self.budget,
            _ => self.budget.max(other.budget),
        };
        let mut bits = 32u32;
        loop {
            let (a, b) = (self.interval_at(bits), other.interval_at(bits));
            if let (Some((al, ah)), Some((bl, bh))) = (a, b) {
                if ah < bl {
                    return Cmp::Less;
                }
                if al > bh {
                    return Cmp::Greater;
                }
            }
            if bits >= budget {
                return Cmp::Undecided;
            }
            bits = (bits * 2).min(budget);
        }
    }

    pub fn compare_rat(&self, q: &Rat) -> Cmp {
        self.compare(&CReal::from_rat(q.clone()))
    }

    fn binop(
        &self,
        other: &CReal,
        f: fn(Arc<Expr>, Arc<Expr>) -> Expr,
    ) -> CReal {
        let budget = self.budget.max(other.budget);
        CReal::new(f(self.expr.clone(), other.expr.clone()), budget)
    }

    pub fn add(&self, other: &CReal) -> CReal {
        self.binop(other, Expr::Add)
    }

    pub fn sub(&self, other: &CReal) -> CReal {
        self.binop(other, Expr::Sub)
    }

    pub fn mul(&self, other: &CReal) -> CReal {
        self.binop(other, Expr::Mul)
    }

    pub fn div(&self, other: &CReal) -> CReal {
        self.binop(other, Expr::Div)
    }

    pub fn neg(&self) -> CReal {
        CReal::new(Expr::Neg(self.expr.clone()), self.budget)
    }

    pub fn sqrt(&self) -> CReal {
        CReal::new(Expr::Sqrt(self.expr.clone()), self.budget)
    }

    pub fn half(&self) -> CReal {
        self.mul(&CReal::from_rat(rat::rat(1, 2)))
    }

    /// Structural identity of the construction expression (the round-trip
    /// equality of the file format).
    pub fn same_expr(&self, other: &CReal) -> bool {
        self.expr == other.expr
    }

    /// Certified equality: both normal forms present and identical, or both
    /// known as nonnegative roots of the same exact value.
    pub fn eq_certified(&self, other: &CReal) -> bool {
        self.compare(other) == Cmp::Equal
    }
}

impl fmt::Display for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

/// Rebuild an expression from a normal form (`c1*sqrt(m1) + ...`).
pub fn radical_to_expr(r: &Radical) -> Expr {
    let mut acc: Option<Expr> = None;
    for (m, c) in r.terms() {
        let term = if m == 1 {
            Expr::Rat(c.clone())
        } else {
            let root = Expr::Sqrt(Arc::new(Expr::Rat(rat::rat_int(m as i64))));
            if c.is_one() {
                root
            } else {
                Expr::Mul(Arc::new(Expr::Rat(c.clone())), Arc::new(root))
            }
        };
        acc = Some(match acc {
            None => term,
            Some(prev) => Expr::Add(Arc::new(prev), Arc::new(term)),
        });
    }
    acc.unwrap_or(Expr::Rat(Rat::zero()))
}
