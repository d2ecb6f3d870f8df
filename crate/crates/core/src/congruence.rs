//! Finite truncations of the infinitary segment-congruence definition:
//! level n asks for a positive rational r and points x, y with x at
//! distance r from `a` and 1/n from `b`, and y at distance r from `c` and
//! 1/n from `d`. Such an x exists in the plane iff r lies in
//! [ |d(a,b) - 1/n|, d(a,b) + 1/n ], so each level reduces to a rational-
//! membership test on an exact interval intersection; the search mode also
//! exhibits r and the witness points explicitly.

use num_traits::Signed;
use serde::Serialize;

use crate::config::{GeometryError, Point};
use crate::creal::{CReal, Cmp};
use crate::frame::RPoint;
use crate::radical::Radical;
use crate::rat::{rat, simplest_in, Rat};

#[derive(Clone, Debug)]
pub struct TruncationQuery {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    /// Evaluate levels n = 1..=n_max.
    pub n_max: u32,
    /// Search mode only considers rationals with denominator up to this.
    pub denominator_bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict3 {
    Holds,
    Fails,
    Undecided,
}

#[derive(Debug)]
pub struct ClosedForm {
    pub levels: Vec<(u32, Verdict3)>,
    pub overall: Verdict3,
}

#[derive(Clone, Debug)]
pub struct SearchWitness {
    pub r: Rat,
    pub x: RPoint,
    pub y: RPoint,
}

#[derive(Debug)]
pub struct SearchLevel {
    pub n: u32,
    pub holds: bool,
    /// Set when the level failed only because the denominator bound (or
    /// precision) blocked the witness, not because the closed form fails.
    pub false_by_search: bool,
    pub witness: Option<SearchWitness>,
}

fn distance(p: &Point, q: &Point) -> Result<CReal, GeometryError> {
    Ok(crate::config::sq_distance(p, q)?.sqrt())
}

/// Feasible r-interval endpoints for one conjunct pair at level n:
/// L = |d - 1/n| and U = d + 1/n, as certified reals. None when the sign
/// of d - 1/n is undecidable.
fn pair_interval(d: &CReal, rn: &Rat) -> Option<(CReal, CReal)> {
    let rn_real = CReal::from_rat(rn.clone());
    let low = match d.compare_rat(rn) {
        Cmp::Greater => d.sub(&rn_real),
        Cmp::Less => rn_real.sub(d),
        Cmp::Equal => CReal::zero(),
        Cmp::Undecided => return None,
    };
    Some((low, d.add(&rn_real)))
}

fn level_interval(d1: &CReal, d2: &CReal, n: u32) -> Option<(CReal, CReal)> {
    let rn = rat(1, n as i64);
    let (l1, u1) = pair_interval(d1, &rn)?;
    let (l2, u2) = pair_interval(d2, &rn)?;
    let low = match l1.compare(&l2) {
        Cmp::Less | Cmp::Equal => l2,
        Cmp::Greater => l1,
        Cmp::Undecided => return None,
    };
    let high = match u1.compare(&u2) {
        Cmp::Less | Cmp::Equal => u1,
        Cmp::Greater => u2,
        Cmp::Undecided => return None,
    };
    Some((low, high))
}

fn level_verdict(d1: &CReal, d2: &CReal, n: u32) -> Verdict3 {
    let (low, high) = match level_interval(d1, d2, n) {
        Some(iv) => iv,
        None => return Verdict3::Undecided,
    };
    match low.compare(&high) {
        Cmp::Less => Verdict3::Holds, // open interior contains a rational
        Cmp::Greater => Verdict3::Fails,
        Cmp::Equal => {
            // single-point interval: holds iff the point is a positive
            // rational (the upper end d + 1/n is always > 0)
            match low.exact() {
                Some(v) if v.is_rational() => Verdict3::Holds,
                Some(_) => Verdict3::Fails,
                None => Verdict3::Undecided,
            }
        }
        Cmp::Undecided => Verdict3::Undecided,
    }
}

pub fn truncated_equiv_closed_form(q: &TruncationQuery) -> Result<ClosedForm, GeometryError> {
    let d1 = distance(&q.a, &q.b)?;
    let d2 = distance(&q.c, &q.d)?;
    let mut levels = Vec::new();
    let mut overall = Verdict3::Holds;
    for n in 1..=q.n_max.max(1) {
        let v = level_verdict(&d1, &d2, n);
        if v == Verdict3::Fails
            || (v == Verdict3::Undecided && overall == Verdict3::Holds)
        {
            overall = v;
        }
        levels.push((n, v));
    }
    Ok(ClosedForm { levels, overall })
}

/// Intersection of circles centered at exact points `pa` (radius^2 =
/// `r_sq`) and `pb` (radius^2 = `s_sq`), as an exact point when one exists
/// and denests.
fn circle_point(pa: &RPoint, pb: &RPoint, r_sq: &Rat, s_sq: &Rat) -> Option<RPoint> {
    let dx = pb[0].clone() - pa[0].clone();
    let dy = pb[1].clone() - pa[1].clone();
    let d_sq = dx.clone() * dx.clone() + dy.clone() * dy.clone();
    if d_sq.is_zero() {
        // concentric: feasible iff radii match; any direction works
        if r_sq != s_sq {
            return None;
        }
        let r = Radical::from_rat(r_sq.clone()).sqrt()?;
        return Some([pa[0].clone() + r, pa[1].clone()]);
    }
    let inv = d_sq.clone().inverse()?;
    let alpha = (d_sq.clone() + Radical::from_rat(r_sq - s_sq)) * inv.clone() * rat(1, 2);
    let beta_sq = Radical::from_rat(r_sq.clone()) * inv - alpha.clone() * alpha.clone();
    if beta_sq.sign() < 0 {
        return None;
    }
    let beta = beta_sq.sqrt()?;
    Some([
        pa[0].clone() + alpha.clone() * dx.clone() - beta.clone() * dy.clone(),
        pa[1].clone() + alpha * dy + beta * dx,
    ])
}

fn exact_coords(p: &Point) -> Option<RPoint> {
    Some([
        p.coords.first()?.exact()?.clone(),
        p.coords.get(1)?.exact()?.clone(),
    ])
}

pub fn truncated_equiv_search(q: &TruncationQuery) -> Result<Vec<SearchLevel>, GeometryError> {
    let d1 = distance(&q.a, &q.b)?;
    let d2 = distance(&q.c, &q.d)?;
    let bound = q.denominator_bound.max(1);
    let mut out = Vec::new();
    for n in 1..=q.n_max.max(1) {
        let closed = level_verdict(&d1, &d2, n);
        if closed == Verdict3::Fails {
            out.push(SearchLevel {
                n,
                holds: false,
                false_by_search: false,
                witness: None,
            });
            continue;
        }
        let candidate = find_rational(&d1, &d2, n);
        let attempt = candidate.and_then(|r| {
            if r.denom().magnitude() > &num_bigint::BigUint::from(bound) {
                return None;
            }
            let rn = rat(1, n as i64);
            let r_sq = &r * &r;
            let s_sq = &rn * &rn;
            let pa = exact_coords(&q.a)?;
            let pb = exact_coords(&q.b)?;
            let pc = exact_coords(&q.c)?;
            let pd = exact_coords(&q.d)?;
            let x = circle_point(&pa, &pb, &r_sq, &s_sq)?;
            let y = circle_point(&pc, &pd, &r_sq, &s_sq)?;
            Some(SearchWitness { r, x, y })
        });
        match attempt {
            Some(w) => out.push(SearchLevel {
                n,
                holds: true,
                false_by_search: false,
                witness: Some(w),
            }),
            None => out.push(SearchLevel {
                n,
                holds: false,
                false_by_search: true,
                witness: None,
            }),
        }
    }
    Ok(out)
}

/// A positive rational in the feasible interval at level n, preferring the
/// smallest denominator: the exact boundary point when the interval is a
/// single rational, otherwise the simplest rational in a certified open
/// subinterval.
fn find_rational(d1: &CReal, d2: &CReal, n: u32) -> Option<Rat> {
    let (low, high) = level_interval(d1, d2, n)?;
    match low.compare(&high) {
        Cmp::Equal => match low.exact() {
            Some(v) => v.as_rational().filter(|r| r.is_positive()),
            None => None,
        },
        Cmp::Less => {
            for bits in [64u32, 128, 256, 512] {
                let (_, lhi) = low.refine(bits).interval()?;
                let (ulo, _) = high.refine(bits).interval()?;
                if lhi < ulo {
                    return Some(simplest_in(&lhi, &ulo));
                }
            }
            None
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(label: &str, x: &str, y: &str) -> Point {
        Point::parse(label, &[x, y]).unwrap()
    }

    fn query(b: (&str, &str), d: (&str, &str), n_max: u32, bound: u64) -> TruncationQuery {
        TruncationQuery {
            a: pt("a", "0", "0"),
            b: pt("b", b.0, b.1),
            c: pt("c", "0", "0"),
            d: pt("d", d.0, d.1),
            n_max,
            denominator_bound: bound,
        }
    }

    #[test]
    fn congruent_segments_hold_everywhere() {
        let q = query(("1", "0"), ("0", "1"), 8, 10);
        let cf = truncated_equiv_closed_form(&q).unwrap();
        assert_eq!(cf.overall, Verdict3::Holds);
        assert!(cf.levels.iter().all(|(_, v)| *v == Verdict3::Holds));
        let search = truncated_equiv_search(&q).unwrap();
        for level in &search {
            assert!(level.holds);
            let w = level.witness.as_ref().unwrap();
            assert!(w.r.is_positive());
        }
    }

    #[test]
    fn one_vs_three_halves_boundary() {
        let q = query(("1", "0"), ("3/2", "0"), 6, 64);
        let cf = truncated_equiv_closed_form(&q).unwrap();
        for (n, v) in &cf.levels {
            let expect = if *n <= 4 { Verdict3::Holds } else { Verdict3::Fails };
            assert_eq!(*v, expect, "level {n}");
        }
        assert_eq!(cf.overall, Verdict3::Fails);
        let search = truncated_equiv_search(&q).unwrap();
        // boundary level n = 4 has the single-point witness r = 5/4
        let l4 = &search[3];
        assert!(l4.holds);
        assert_eq!(l4.witness.as_ref().unwrap().r, rat(5, 4));
        assert!(!search[4].holds);
        assert!(!search[4].false_by_search);
    }

    #[test]
    fn witnesses_satisfy_predicates_exactly() {
        let q = query(("1", "0"), ("3/2", "0"), 4, 64);
        let search = truncated_equiv_search(&q).unwrap();
        for level in &search {
            let w = level.witness.as_ref().unwrap();
            let rn = rat(1, level.n as i64);
            let pa = exact_coords(&q.a).unwrap();
            let pb = exact_coords(&q.b).unwrap();
            let pc = exact_coords(&q.c).unwrap();
            let pd = exact_coords(&q.d).unwrap();
            let sq = |u: &RPoint, v: &RPoint| crate::frame::sq_dist(u, v);
            assert_eq!(sq(&w.x, &pa), Radical::from_rat(&w.r * &w.r));
            assert_eq!(sq(&w.x, &pb), Radical::from_rat(&rn * &rn));
            assert_eq!(sq(&w.y, &pc), Radical::from_rat(&w.r * &w.r));
            assert_eq!(sq(&w.y, &pd), Radical::from_rat(&rn * &rn));
        }
    }

    #[test]
    fn denominator_bound_blocks_witness() {
        let q = query(("1", "0"), ("3/2", "0"), 4, 1);
        let search = truncated_equiv_search(&q).unwrap();
        assert!(search[0].holds); // r = 1 fits denominator 1
        let l4 = &search[3];
        assert!(!l4.holds);
        assert!(l4.false_by_search);
    }

    #[test]
    fn irrational_single_point_fails() {
        // d1 = sqrt(2) - 1/2, d2 = sqrt(2) + 1/2: gap exactly 1 = 2/n at
        // n = 2, midpoint sqrt(2) irrational
        let q = query(("sqrt(2) - 1/2", "0"), ("sqrt(2) + 1/2", "0"), 3, 64);
        let cf = truncated_equiv_closed_form(&q).unwrap();
        assert_eq!(cf.levels[0].1, Verdict3::Holds);
        assert_eq!(cf.levels[1].1, Verdict3::Fails);
        assert_eq!(cf.levels[2].1, Verdict3::Fails);
    }

    #[test]
    fn monotone_in_n() {
        let q = query(("1", "0"), ("7/4", "1/3"), 12, 64);
        let cf = truncated_equiv_closed_form(&q).unwrap();
        let mut failed = false;
        for (_, v) in &cf.levels {
            if failed {
                assert_eq!(*v, Verdict3::Fails);
            }
            if *v == Verdict3::Fails {
                failed = true;
            }
        }
        assert!(failed, "incongruent pair must eventually fail");
    }
}
