//! Claims over configurations and their three-valued verification.
//!
//! A claim asserts that every unit-distance-preserving placement of a
//! configuration preserves some derived quantity: a designated pair's
//! distance, a segment congruence, or an epsilon-approximation of a
//! distance. Strong-mode claims quantify over all placements; weak-mode
//! claims first discard placements that are non-injective or that move a
//! certified non-unit pair onto distance exactly one.

use serde::Serialize;

use crate::config::{pair_key, Configuration, GeometryError, PairClass};
use crate::creal::{CReal, Cmp};
use crate::enumerate::{enumerate_config, spectrum_of, EnumError, Enumeration, Spectrum};
use crate::frame::PlacementSolution;
use crate::radical::Radical;
use crate::refute::{linkage_bound, search_objective, Objective, RefuterParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strong,
    Weak,
}

#[derive(Clone, Debug)]
pub enum Claim {
    /// Every placement preserves d(x, y).
    Distance { x: String, y: String, mode: Mode },
    /// Every placement satisfies d(f(k), f(l)) = d(f(m), f(n)).
    Congruence {
        k: String,
        l: String,
        m: String,
        n: String,
        mode: Mode,
    },
    /// Every placement satisfies |d(f(x), f(y)) - d(x, y)| <= eps.
    Epsilon { x: String, y: String, eps: CReal },
}

impl Claim {
    pub fn labels(&self) -> Vec<&str> {
        match self {
            Claim::Distance { x, y, .. } => vec![x, y],
            Claim::Congruence { k, l, m, n, .. } => vec![k, l, m, n],
            Claim::Epsilon { x, y, .. } => vec![x, y],
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Claim::Distance { mode, .. } | Claim::Congruence { mode, .. } => *mode,
            Claim::Epsilon { .. } => Mode::Strong,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Claim::Distance { x, y, mode } => {
                format!("distance({x}, {y}) preserved [{mode:?} mode]")
            }
            Claim::Congruence { k, l, m, n, mode } => {
                format!("d(f({k}), f({l})) = d(f({m}), f({n})) [{mode:?} mode]")
            }
            Claim::Epsilon { x, y, eps } => {
                format!("|d(f({x}), f({y})) - d({x}, {y})| <= {eps}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Proven,
    Refuted,
    Undecided,
}

#[derive(Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<PlacementSolution>,
    pub reason: Option<String>,
    pub spectrum: Option<Spectrum>,
}

impl Verdict {
    fn proven() -> Verdict {
        Verdict {
            outcome: Outcome::Proven,
            witness: None,
            reason: None,
            spectrum: None,
        }
    }

    fn refuted(witness: PlacementSolution, reason: impl Into<String>) -> Verdict {
        Verdict {
            outcome: Outcome::Refuted,
            witness: Some(witness),
            reason: Some(reason.into()),
            spectrum: None,
        }
    }

    fn undecided(reason: impl Into<String>) -> Verdict {
        Verdict {
            outcome: Outcome::Undecided,
            witness: None,
            reason: Some(reason.into()),
            spectrum: None,
        }
    }

    fn with_spectrum(mut self, s: Spectrum) -> Verdict {
        self.spectrum = Some(s);
        self
    }
}

/// Drop solutions a weak-mode claim does not quantify over: non-injective
/// placements and placements that move a certified non-unit pair onto
/// distance exactly one. Only certified violations filter; an undecidable
/// check keeps the solution (conservative for Proven, which then fails on
/// the undecided comparison instead).
fn weak_filter<'a>(
    c: &Configuration,
    solutions: Vec<&'a PlacementSolution>,
) -> Vec<&'a PlacementSolution> {
    let labels: Vec<&str> = c.points.iter().map(|p| p.label.as_str()).collect();
    solutions
        .into_iter()
        .filter(|s| {
            for (i, a) in labels.iter().enumerate() {
                for b in &labels[i + 1..] {
                    let sq = match s.sq_image_distance_exact(a, b) {
                        Some(sq) => sq,
                        None => continue,
                    };
                    if sq.is_zero() {
                        return false; // collapse: not injective
                    }
                    let class = c.pair_table.get(&pair_key(a, b));
                    if class == Some(&PairClass::NonUnit) && sq == Radical::one() {
                        return false; // breaks the unit biconditional
                    }
                }
            }
            true
        })
        .collect()
}

pub fn verify(c: &Configuration, claim: &Claim) -> Result<Verdict, GeometryError> {
    for label in claim.labels() {
        c.point(label)?;
    }
    let c = if c.pair_table.is_empty() {
        c.classify_pairs()
    } else {
        c.clone()
    };
    let enumeration = match enumerate_config(&c) {
        Ok(e) => Some(e),
        Err(EnumError::Order(_)) | Err(EnumError::NoEdges) => None,
        Err(EnumError::Invalid(s)) => return Err(GeometryError::Invalid(s)),
        Err(EnumError::BadDimension(d)) => {
            return Err(GeometryError::Invalid(format!(
                "exact verification requires dimension 2, got {d}"
            )))
        }
        Err(EnumError::Geometry(g)) => return Err(g),
    };
    match claim {
        Claim::Distance { x, y, mode } => {
            verify_distance(&c, x, y, *mode, enumeration.as_ref())
        }
        Claim::Congruence { k, l, m, n, mode } => {
            verify_congruence(&c, k, l, m, n, *mode, enumeration.as_ref())
        }
        Claim::Epsilon { x, y, eps } => verify_epsilon(&c, x, y, eps, enumeration.as_ref()),
    }
}

fn quantified<'a>(
    c: &Configuration,
    e: &'a Enumeration,
    mode: Mode,
) -> Vec<&'a PlacementSolution> {
    let all: Vec<&PlacementSolution> = e.solutions.iter().collect();
    match mode {
        Mode::Strong => all,
        Mode::Weak => weak_filter(c, all),
    }
}

fn verify_distance(
    c: &Configuration,
    x: &str,
    y: &str,
    mode: Mode,
    e: Option<&Enumeration>,
) -> Result<Verdict, GeometryError> {
    let e = match e {
        Some(e) => e,
        None => return Ok(Verdict::undecided("no trilateration order")),
    };
    let source_sq = crate::config::sq_distance(c.point(x)?, c.point(y)?)?;
    let mut all_equal = true;
    let solutions = quantified(c, e, mode);
    for s in &solutions {
        let image = match s.sq_image_distance_exact(x, y) {
            Some(sq) => CReal::from_radical(&sq),
            None => {
                all_equal = false;
                continue;
            }
        };
        match image.compare(&source_sq) {
            Cmp::Equal => {}
            Cmp::Less | Cmp::Greater => {
                let sp = solutions_spectrum(e, &solutions, x, y);
                return Ok(Verdict::refuted(
                    (*s).clone(),
                    format!("placement moves d({x}, {y}) off its source value"),
                )
                .with_spectrum(sp));
            }
            Cmp::Undecided => all_equal = false,
        }
    }
    let sp = solutions_spectrum(e, &solutions, x, y);
    if e.complete && all_equal {
        Ok(Verdict::proven().with_spectrum(sp))
    } else if !e.complete {
        Ok(Verdict::undecided("enumeration incomplete").with_spectrum(sp))
    } else {
        Ok(Verdict::undecided("distance comparison undecided at current precision")
            .with_spectrum(sp))
    }
}

fn verify_congruence(
    c: &Configuration,
    k: &str,
    l: &str,
    m: &str,
    n: &str,
    mode: Mode,
    e: Option<&Enumeration>,
) -> Result<Verdict, GeometryError> {
    let e = match e {
        Some(e) => e,
        None => return Ok(Verdict::undecided("no trilateration order")),
    };
    let mut all_equal = true;
    let solutions = quantified(c, e, mode);
    for s in &solutions {
        match (
            s.sq_image_distance_exact(k, l),
            s.sq_image_distance_exact(m, n),
        ) {
            (Some(a), Some(b)) => {
                if a != b {
                    return Ok(Verdict::refuted(
                        (*s).clone(),
                        format!("placement has d(f({k}), f({l})) != d(f({m}), f({n}))"),
                    ));
                }
            }
            _ => all_equal = false,
        }
    }
    if e.complete && all_equal {
        Ok(Verdict::proven())
    } else {
        Ok(Verdict::undecided("enumeration incomplete"))
    }
}

fn verify_epsilon(
    c: &Configuration,
    x: &str,
    y: &str,
    eps: &CReal,
    e: Option<&Enumeration>,
) -> Result<Verdict, GeometryError> {
    let source = crate::config::distance(c.point(x)?, c.point(y)?)?;
    let lo = source.sub(eps);
    let hi = source.add(eps);
    if let Some(e) = e {
        let solutions: Vec<&PlacementSolution> = e.solutions.iter().collect();
        let mut all_within = true;
        for s in &solutions {
            let v = match s.sq_image_distance_exact(x, y) {
                Some(sq) => CReal::from_radical(&sq).sqrt(),
                None => {
                    all_within = false;
                    continue;
                }
            };
            let below = v.compare(&hi);
            let above = v.compare(&lo);
            if below == Cmp::Greater || above == Cmp::Less {
                let sp = solutions_spectrum(e, &solutions, x, y);
                return Ok(Verdict::refuted(
                    (*s).clone(),
                    format!("placement moves d({x}, {y}) more than epsilon from its source value"),
                )
                .with_spectrum(sp));
            }
            if !(matches!(below, Cmp::Less | Cmp::Equal)
                && matches!(above, Cmp::Greater | Cmp::Equal))
            {
                all_within = false;
            }
        }
        let sp = solutions_spectrum(e, &solutions, x, y);
        if e.complete && all_within {
            return Ok(Verdict::proven().with_spectrum(sp));
        }
        if let Some(v) = linkage_verdict(c, x, y, &source, eps) {
            return Ok(v.with_spectrum(sp));
        }
        if !e.complete {
            return Ok(Verdict::undecided("enumeration incomplete").with_spectrum(sp));
        }
        return Ok(
            Verdict::undecided("epsilon comparison undecided at current precision")
                .with_spectrum(sp),
        );
    }
    // no enumeration: the unit-graph distance still bounds every image
    // distance, which can be enough for a one-sided proof
    match linkage_verdict(c, x, y, &source, eps) {
        Some(v) => Ok(v),
        None => Ok(Verdict::undecided("no trilateration order")),
    }
}

/// One-sided proving path: any unit-preserving placement keeps d(f(x), f(y))
/// within [0, g] where g is the unit-graph distance between x and y. If the
/// whole interval sits within eps of the source distance, the claim holds
/// without enumeration.
fn linkage_verdict(
    c: &Configuration,
    x: &str,
    y: &str,
    source: &CReal,
    eps: &CReal,
) -> Option<Verdict> {
    let g = linkage_bound(c, x, y)?;
    let upper = CReal::from_int(g as i64);
    // need source - 0 <= eps and g - source <= eps, certified
    let low_ok = matches!(source.compare(eps), Cmp::Less | Cmp::Equal);
    let high_ok = matches!(
        upper.sub(source).compare(eps),
        Cmp::Less | Cmp::Equal
    );
    if low_ok && high_ok {
        Some(Verdict::proven())
    } else {
        None
    }
}

fn solutions_spectrum(
    e: &Enumeration,
    solutions: &[&PlacementSolution],
    x: &str,
    y: &str,
) -> Spectrum {
    if solutions.len() == e.solutions.len() {
        spectrum_of(e, x, y)
    } else {
        // weak mode: spectrum over the filtered placements only
        let filtered = Enumeration {
            solutions: solutions.iter().map(|s| (*s).clone()).collect(),
            complete: e.complete,
            stats: e.stats,
        };
        spectrum_of(&filtered, x, y)
    }
}

/// Numeric counterexample search followed by exact certification. Never
/// returns Proven: a refuter that finds nothing says so.
pub fn refute(
    c: &Configuration,
    claim: &Claim,
    params: &RefuterParams,
) -> Result<Verdict, GeometryError> {
    for label in claim.labels() {
        c.point(label)?;
    }
    let c = if c.pair_table.is_empty() {
        c.classify_pairs()
    } else {
        c.clone()
    };
    let (objective, threshold) = match claim {
        Claim::Distance { x, y, .. } => {
            let d = crate::config::distance(c.point(x)?, c.point(y)?)?;
            (
                Objective::PairDistance {
                    x: x.clone(),
                    y: y.clone(),
                    target: d.to_f64(),
                },
                params.deviation_tol,
            )
        }
        Claim::Congruence { k, l, m, n, .. } => (
            Objective::PairDifference {
                k: k.clone(),
                l: l.clone(),
                m: m.clone(),
                n: n.clone(),
            },
            params.deviation_tol,
        ),
        Claim::Epsilon { x, y, eps } => {
            let d = crate::config::distance(c.point(x)?, c.point(y)?)?;
            (
                Objective::PairDistance {
                    x: x.clone(),
                    y: y.clone(),
                    target: d.to_f64(),
                },
                eps.to_f64() + params.deviation_tol,
            )
        }
    };
    let candidate = search_objective(&c, &objective, params)
        .filter(|w| w.deviation > threshold);
    // certification: rerun the exact machinery; a certified refutation or
    // proof always outranks the numeric suggestion
    let exact = verify(&c, claim)?;
    match exact.outcome {
        Outcome::Refuted => Ok(exact),
        Outcome::Proven => Ok(Verdict::undecided("no counterexample found")),
        Outcome::Undecided => match candidate {
            Some(w) => Ok(Verdict {
                outcome: Outcome::Undecided,
                witness: Some(w.to_solution()),
                reason: Some("numeric-only counterexample".to_string()),
                spectrum: exact.spectrum,
            }),
            None => Ok(Verdict::undecided("no counterexample found")),
        },
    }
}
