//! Union constructions that upgrade weak witnesses to strong candidates:
//! for every point pair of the input, adjoin an epsilon-witness set for the
//! pair's distance (distinctness kit) and, for certified non-unit pairs,
//! one for the gap to the unit distance (non-unit kit), then merge
//! everything by exact point identity.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::config::{Configuration, GeometryError, Point};
use crate::creal::CReal;
use crate::frame::{sq_dist, RPoint};
use crate::gadgets::{build_epsilon_witness, GadgetError};
use crate::radical::Radical;

#[derive(Debug, Error)]
pub enum CombineError {
    #[error("pair ({0}, {1}) has undecided distance classification")]
    UndecidedPair(String, String),
    #[error("kit construction failed for pair ({p}, {q}): {message}")]
    Builder {
        p: String,
        q: String,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Contract: produce a configuration containing `p` and `q` at their exact
/// coordinates from `host` whose epsilon claim for the pair is Proven.
pub trait TBuilder {
    fn build(
        &mut self,
        host: &Configuration,
        p: &str,
        q: &str,
        eps: &CReal,
    ) -> Result<Configuration, String>;
}

/// Real builder: delegates to the epsilon-witness cascade on the bare pair.
pub struct EpsilonBuilder;

impl TBuilder for EpsilonBuilder {
    fn build(
        &mut self,
        host: &Configuration,
        p: &str,
        q: &str,
        eps: &CReal,
    ) -> Result<Configuration, String> {
        let pair = pair_config(host, p, q).map_err(|e| e.to_string())?;
        match build_epsilon_witness(&pair, p, q, eps) {
            Ok(cfg) => Ok(cfg),
            Err(GadgetError::NoVerifiedConstruction) => {
                Err("no verified construction".to_string())
            }
            Err(e) => Err(e.to_string()),
        }
    }
}

/// Test/audit builder: records every requested kit and returns the bare
/// pair (which only verifies for generous epsilons; census tests don't
/// re-verify).
#[derive(Default)]
pub struct RecordingStub {
    pub calls: Vec<(String, String, CReal)>,
}

impl TBuilder for RecordingStub {
    fn build(
        &mut self,
        host: &Configuration,
        p: &str,
        q: &str,
        eps: &CReal,
    ) -> Result<Configuration, String> {
        self.calls.push((p.to_string(), q.to_string(), eps.clone()));
        pair_config(host, p, q).map_err(|e| e.to_string())
    }
}

fn pair_config(host: &Configuration, p: &str, q: &str) -> Result<Configuration, CombineError> {
    let pp = host.point(p)?.clone();
    let pq = host.point(q)?.clone();
    let edges = if host.has_edge(p, q) {
        vec![(p.to_string(), q.to_string())]
    } else {
        Vec::new()
    };
    Ok(Configuration::new(host.dimension, vec![pp, pq], edges)?.with_declared_units())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KitKind {
    Distinctness,
    NonUnit,
}

/// Manifest entry for one adjoined kit, surfaced for auditability.
#[derive(Clone, Debug, serde::Serialize)]
pub struct KitRecord {
    pub pair: (String, String),
    pub kind: KitKind,
    pub eps: String,
    pub points_added: usize,
}

#[derive(Debug)]
pub struct Strengthened {
    pub config: Configuration,
    pub kits: Vec<KitRecord>,
}

/// The distance-claim union: adjoin a distinctness kit for every distinct
/// pair and a non-unit kit for every certified non-unit pair.
pub fn strengthen_star(
    s: &Configuration,
    x: &str,
    y: &str,
    t: &mut dyn TBuilder,
) -> Result<Strengthened, CombineError> {
    s.point(x)?;
    s.point(y)?;
    strengthen(s, t)
}

/// The congruence-claim union: identical structure over the pair census of
/// the input.
pub fn strengthen_diamond(
    c: &Configuration,
    k: &str,
    l: &str,
    m: &str,
    n: &str,
    t: &mut dyn TBuilder,
) -> Result<Strengthened, CombineError> {
    for label in [k, l, m, n] {
        c.point(label)?;
    }
    strengthen(c, t)
}

/// A single distinctness kit: the epsilon witness at eps = d(P, Q) / 2,
/// whose claim implies f(P) != f(Q).
pub fn distinctness_kit(
    host: &Configuration,
    p: &str,
    q: &str,
    t: &mut dyn TBuilder,
) -> Result<Configuration, CombineError> {
    let (_, sq) = pair_geometry(host, p, q)?;
    if sq.is_zero() {
        return Err(CombineError::Invalid(format!(
            "{p} and {q} coincide; no distinctness kit"
        )));
    }
    let eps = CReal::from_radical(&sq).sqrt().half();
    t.build(host, p, q, &eps).map_err(|message| CombineError::Builder {
        p: p.to_string(),
        q: q.to_string(),
        message,
    })
}

/// A single non-unit kit: the epsilon witness at eps = |d(P, Q) - 1| / 2,
/// whose claim implies d(f(P), f(Q)) != 1.
pub fn non_unit_kit(
    host: &Configuration,
    p: &str,
    q: &str,
    t: &mut dyn TBuilder,
) -> Result<Configuration, CombineError> {
    let (_, sq) = pair_geometry(host, p, q)?;
    let eps = match non_unit_eps(&sq) {
        Some(e) => e,
        None => {
            return Err(CombineError::Invalid(format!(
                "({p}, {q}) is not a certified non-unit pair"
            )))
        }
    };
    t.build(host, p, q, &eps).map_err(|message| CombineError::Builder {
        p: p.to_string(),
        q: q.to_string(),
        message,
    })
}

fn pair_geometry(
    c: &Configuration,
    p: &str,
    q: &str,
) -> Result<(RPoint, Radical), CombineError> {
    let exact = |label: &str| -> Result<RPoint, CombineError> {
        let pt = c.point(label)?;
        match (
            pt.coords.first().and_then(|v| v.exact()),
            pt.coords.get(1).and_then(|v| v.exact()),
        ) {
            (Some(a), Some(b)) => Ok([a.clone(), b.clone()]),
            _ => Err(CombineError::UndecidedPair(p.to_string(), q.to_string())),
        }
    };
    let pp = exact(p)?;
    let pq = exact(q)?;
    let sq = sq_dist(&pp, &pq);
    Ok((pp, sq))
}

/// eps = |d - 1| / 2 for a certified non-unit squared distance, None when
/// the pair is unit.
fn non_unit_eps(sq: &Radical) -> Option<CReal> {
    let d = CReal::from_radical(sq).sqrt();
    match sq.cmp_exact(&Radical::one()) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(d.sub(&CReal::one()).half()),
        std::cmp::Ordering::Less => Some(CReal::one().sub(&d).half()),
    }
}

fn strengthen(s: &Configuration, t: &mut dyn TBuilder) -> Result<Strengthened, CombineError> {
    let labels: Vec<String> = s.points.iter().map(|p| p.label.clone()).collect();
    let mut merged = s.clone();
    let mut kits = Vec::new();
    for (i, p) in labels.iter().enumerate() {
        for q in &labels[i + 1..] {
            let (_, sq) = pair_geometry(s, p, q)?;
            if sq.is_zero() {
                // coincident points: both unions are vacuous for P = Q
                continue;
            }
            let eps_list: Vec<(KitKind, CReal)> = {
                let mut v = vec![(
                    KitKind::Distinctness,
                    CReal::from_radical(&sq).sqrt().half(),
                )];
                if let Some(eps) = non_unit_eps(&sq) {
                    v.push((KitKind::NonUnit, eps));
                }
                v
            };
            for (kind, eps) in eps_list {
                let kit = t.build(s, p, q, &eps).map_err(|message| CombineError::Builder {
                    p: p.clone(),
                    q: q.clone(),
                    message,
                })?;
                let before = merged.points.len();
                merged = merge(&merged, &kit)?;
                kits.push(KitRecord {
                    pair: (p.clone(), q.clone()),
                    kind,
                    eps: eps.to_string(),
                    points_added: merged.points.len() - before,
                });
            }
        }
    }
    let merged = merged.with_declared_units();
    let report = merged.validate();
    if !report.is_valid() {
        return Err(CombineError::Invalid(report.summary()));
    }
    Ok(Strengthened {
        config: merged,
        kits,
    })
}

/// Merge a kit into the accumulator: points equal by exact coordinates are
/// unified (the accumulator's label wins), remaining kit points get fresh
/// labels, and kit edges follow the relabelling.
fn merge(acc: &Configuration, kit: &Configuration) -> Result<Configuration, CombineError> {
    let exact_of = |p: &Point| -> Option<RPoint> {
        Some([
            p.coords.first()?.exact()?.clone(),
            p.coords.get(1)?.exact()?.clone(),
        ])
    };
    let mut points = acc.points.clone();
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    for kp in &kit.points {
        let kcoords = exact_of(kp).ok_or_else(|| {
            CombineError::UndecidedPair(kp.label.clone(), "merge".to_string())
        })?;
        let existing = points.iter().find_map(|ap| {
            let ac = exact_of(ap)?;
            (ac == kcoords).then(|| ap.label.clone())
        });
        match existing {
            Some(label) => {
                rename.insert(kp.label.clone(), label);
            }
            None => {
                let mut label = kp.label.clone();
                if points.iter().any(|ap| ap.label == label) {
                    let mut i = 1;
                    label = loop {
                        let cand = format!("{}_{}", kp.label, i);
                        if !points.iter().any(|ap| ap.label == cand) {
                            break cand;
                        }
                        i += 1;
                    };
                }
                rename.insert(kp.label.clone(), label.clone());
                points.push(Point::new(label, kp.coords.clone()));
            }
        }
    }
    let mut edges: Vec<(String, String)> = acc.unit_edges.iter().cloned().collect();
    for (a, b) in &kit.unit_edges {
        let ra = rename.get(a).cloned().unwrap_or_else(|| a.clone());
        let rb = rename.get(b).cloned().unwrap_or_else(|| b.clone());
        if ra != rb {
            edges.push((ra, rb));
        }
    }
    Ok(Configuration::new(acc.dimension, points, edges)?)
}
