//! Constructive configuration builders: triangles, rhombi, chains, the
//! spindle, the constructible-point closure, and a bounded best-first
//! search for witness sets with prescribed spectra.
//!
//! Every builder is exact (new coordinates carry quadratic-tower normal
//! forms) and deterministic, and every successful construction re-validates
//! before it is returned. Searches may fail; failure is a value.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::config::{Configuration, GeometryError, Point};
use crate::creal::CReal;
use crate::enumerate::{enumerate_config, spectrum_of, unit_circle_intersections, Intersections, Spectrum};
use crate::claims::{verify, Claim, Mode, Outcome};
use crate::frame::{sq_dist, RPoint};
use crate::radical::Radical;
use crate::rat::{rat, rat_int, sqrt_bounds, Rat};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("certified distance between {0} and {1} is too large for the construction")]
    TooFar(String, String),
    #[error("{0} and {1} must be a declared unit edge")]
    NotUnit(String, String),
    #[error("construction undecidable: {0}")]
    Undecided(String),
    #[error("candidate budget exceeded (cap {0})")]
    BudgetExceeded(usize),
    #[error("no verified construction within budget")]
    NoVerifiedConstruction,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GadgetKind {
    Triangle,
    Rhombus,
    Chain,
    Spindle,
    Custom,
}

/// Catalog entry describing how a configuration was produced.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GadgetRecipe {
    pub kind: GadgetKind,
    pub parameters: BTreeMap<String, String>,
    pub provenance: String,
}

fn exact_point(c: &Configuration, label: &str) -> Result<RPoint, GadgetError> {
    let p = c.point(label)?;
    let get = |i: usize| -> Option<Radical> { p.coords.get(i)?.exact().cloned() };
    match (get(0), get(1)) {
        (Some(x), Some(y)) => Ok([x, y]),
        _ => Err(GadgetError::Undecided(format!(
            "coordinates of {label} have no exact normal form"
        ))),
    }
}

fn fresh_label(c: &Configuration, prefix: &str) -> String {
    let mut i = 1;
    loop {
        let cand = format!("{prefix}{i}");
        if c.point_index(&cand).is_none() {
            return cand;
        }
        i += 1;
    }
}

/// If a point with exactly these coordinates exists, return its label.
fn existing_label(c: &Configuration, p: &RPoint) -> Option<String> {
    c.points.iter().find_map(|q| {
        let qx = q.coords.first()?.exact()?;
        let qy = q.coords.get(1)?.exact()?;
        (qx == &p[0] && qy == &p[1]).then(|| q.label.clone())
    })
}

/// Add a point (reusing an exact duplicate if present) and declared unit
/// edges to the given neighbors; purely structural, revalidated by callers.
fn with_point(
    c: &Configuration,
    p: &RPoint,
    prefix: &str,
    neighbors: &[&str],
) -> Result<(Configuration, String), GadgetError> {
    let label = match existing_label(c, p) {
        Some(l) => l,
        None => fresh_label(c, prefix),
    };
    let mut points = c.points.clone();
    if c.point_index(&label).is_none() {
        points.push(Point::new(
            label.clone(),
            vec![CReal::from_radical(&p[0]), CReal::from_radical(&p[1])],
        ));
    }
    let mut edges: Vec<(String, String)> = c
        .unit_edges
        .iter()
        .cloned()
        .collect();
    for n in neighbors {
        edges.push((label.clone(), n.to_string()));
    }
    let cfg = Configuration::new(c.dimension, points, edges)?;
    Ok((cfg, label))
}

fn finished(c: Configuration) -> Result<Configuration, GadgetError> {
    let c = c.with_declared_units();
    let report = c.validate();
    if report.is_valid() {
        Ok(c)
    } else {
        Err(GadgetError::Undecided(report.summary()))
    }
}

/// Attach an apex at unit distance from both `p` and `q`, on the chosen
/// side of the directed line p -> q (`Up` is the counterclockwise side).
pub fn attach_triangle(
    c: &Configuration,
    p: &str,
    q: &str,
    side: Side,
) -> Result<(Configuration, String), GadgetError> {
    let pp = exact_point(c, p)?;
    let pq = exact_point(c, q)?;
    if pp == pq {
        return Err(GadgetError::Undecided(format!(
            "{p} and {q} coincide; the apex is a full circle"
        )));
    }
    let apex = match unit_circle_intersections(&pp, &pq) {
        Intersections::None => return Err(GadgetError::TooFar(p.to_string(), q.to_string())),
        Intersections::Continuum => unreachable!("coincidence handled above"),
        Intersections::Inexact => {
            return Err(GadgetError::Undecided(
                "apex coordinates do not denest to a normal form".to_string(),
            ))
        }
        Intersections::Points(pts) => match side {
            Side::Up => pts[0].clone(),
            Side::Down => pts.last().unwrap().clone(),
        },
    };
    let (cfg, label) = with_point(c, &apex, "t", &[p, q])?;
    Ok((finished(cfg)?, label))
}

/// Attach the {0, sqrt(3)} dichotomy gadget on a declared unit edge: tips
/// above and below, each joined to both endpoints. Idempotent: repeating on
/// the same edge reuses the identical points.
pub fn attach_rhombus(
    c: &Configuration,
    b: &str,
    d: &str,
) -> Result<(Configuration, String, String), GadgetError> {
    if !c.has_edge(b, d) {
        return Err(GadgetError::NotUnit(b.to_string(), d.to_string()));
    }
    let (c1, a) = attach_triangle(c, b, d, Side::Up)?;
    let (c2, cc) = attach_triangle(&c1, b, d, Side::Down)?;
    Ok((c2, a, cc))
}

/// Join `x` to `y` by `k` consecutive unit links (adding k - 1 points),
/// realizing the triangle-inequality bound d(f(x), f(y)) <= k.
pub fn build_chain(
    c: &Configuration,
    x: &str,
    y: &str,
    k: u32,
) -> Result<(Configuration, Vec<String>), GadgetError> {
    if k == 0 {
        return Err(GadgetError::Undecided("chain needs k >= 1".to_string()));
    }
    let px = exact_point(c, x)?;
    let py = exact_point(c, y)?;
    let d_sq = sq_dist(&px, &py);
    let k_sq = Radical::from_rat(rat_int((k as i64) * (k as i64)));
    if d_sq.is_zero() {
        return Err(GadgetError::Undecided(
            "chain endpoints coincide".to_string(),
        ));
    }
    match d_sq.cmp_exact(&k_sq) {
        std::cmp::Ordering::Greater => {
            return Err(GadgetError::TooFar(x.to_string(), y.to_string()))
        }
        std::cmp::Ordering::Equal => {
            // collinear chain: equally spaced points on the segment
            let mut cfg = c.clone();
            let mut labels = Vec::new();
            let mut prev = x.to_string();
            for i in 1..k {
                let t = rat(i as i64, k as i64);
                let p = [
                    px[0].clone() + (py[0].clone() - px[0].clone()) * t.clone(),
                    px[1].clone() + (py[1].clone() - px[1].clone()) * t,
                ];
                let (next, label) = with_point(&cfg, &p, "c", &[&prev])?;
                cfg = next;
                prev = label.clone();
                labels.push(label);
            }
            cfg = add_edge(&cfg, &prev, y)?;
            return Ok((finished(cfg)?, labels));
        }
        std::cmp::Ordering::Less => {}
    }
    if k == 1 {
        // d < 1 certain: a single link cannot span it... unless d = 1,
        // which the Equal arm above already handled
        return Err(GadgetError::Undecided(format!(
            "d({x}, {y}) != 1, no single-link chain"
        )));
    }
    if k % 2 == 0 {
        let (cfg, labels) = zigzag(c, x, y, &px, &py, k)?;
        Ok((finished(cfg)?, labels))
    } else {
        // odd k: one explicit first link to a point at a rational distance
        // rho from y with rho < k - 1, then an even zig-zag for the rest
        let rho_sq = pick_rho_sq(&d_sq, k)?;
        let inv_dsq = d_sq.inverse().expect("d > 0");
        let a = (d_sq.clone() + Radical::one() - Radical::from_rat(rho_sq.clone()))
            * inv_dsq.clone()
            * rat(1, 2);
        let b_sq = (Radical::one() - a.clone() * a.clone() * d_sq.clone()) * inv_dsq;
        let b = b_sq.sqrt().ok_or_else(|| {
            GadgetError::Undecided("first chain link does not denest".to_string())
        })?;
        let dx = py[0].clone() - px[0].clone();
        let dy = py[1].clone() - px[1].clone();
        let p1 = [
            px[0].clone() + a.clone() * dx.clone() - b.clone() * dy.clone(),
            px[1].clone() + a * dy + b * dx,
        ];
        let (cfg, first) = with_point(c, &p1, "c", &[x])?;
        let (cfg, mut labels) = zigzag(&cfg, &first, y, &p1, &py, k - 1)?;
        labels.insert(0, first);
        Ok((finished(cfg)?, labels))
    }
}

/// Even-k zig-zag between placed endpoints: points advance uniformly along
/// the segment, alternating across it at the height that makes every link
/// exactly unit.
fn zigzag(
    c: &Configuration,
    x: &str,
    y: &str,
    px: &RPoint,
    py: &RPoint,
    k: u32,
) -> Result<(Configuration, Vec<String>), GadgetError> {
    debug_assert!(k % 2 == 0 && k >= 2);
    let d_sq = sq_dist(px, py);
    let k_sq = Radical::from_rat(rat_int((k as i64) * (k as i64)));
    let s_sq = (k_sq.clone() - d_sq.clone())
        * (k_sq * d_sq.clone()).inverse().expect("d > 0");
    let s = s_sq.sqrt().ok_or_else(|| {
        GadgetError::Undecided("zig-zag height does not denest".to_string())
    })?;
    let dx = py[0].clone() - px[0].clone();
    let dy = py[1].clone() - px[1].clone();
    let mut cfg = c.clone();
    let mut labels = Vec::new();
    let mut prev = x.to_string();
    for i in 1..k {
        let t = rat(i as i64, k as i64);
        let mut p = [
            px[0].clone() + dx.clone() * t.clone(),
            px[1].clone() + dy.clone() * t,
        ];
        if i % 2 == 1 {
            p[0] = p[0].clone() - s.clone() * dy.clone();
            p[1] = p[1].clone() + s.clone() * dx.clone();
        }
        let (next, label) = with_point(&cfg, &p, "c", &[&prev])?;
        cfg = next;
        prev = label.clone();
        labels.push(label);
    }
    cfg = add_edge(&cfg, &prev, y)?;
    Ok((cfg, labels))
}

fn add_edge(c: &Configuration, a: &str, b: &str) -> Result<Configuration, GadgetError> {
    let mut edges: Vec<(String, String)> = c.unit_edges.iter().cloned().collect();
    edges.push((a.to_string(), b.to_string()));
    Ok(Configuration::new(
        c.dimension,
        c.points.clone(),
        edges,
    )?)
}

/// A rational rho with |d - 1| < rho < min(d + 1, k - 1), certified from
/// interval bounds on d; returns rho^2.
fn pick_rho_sq(d_sq: &Radical, k: u32) -> Result<Rat, GadgetError> {
    for bits in [64u32, 128, 256, 512] {
        let (lo_sq, hi_sq) = d_sq.bounds(bits);
        let zero = rat_int(0);
        let lo_sq = if lo_sq < zero { zero.clone() } else { lo_sq };
        let (dlo, _) = sqrt_bounds(&lo_sq, bits);
        let (_, dhi) = sqrt_bounds(&hi_sq, bits);
        let mut lb = &dhi - rat_int(1);
        let one_minus = rat_int(1) - &dlo;
        if one_minus > lb {
            lb = one_minus;
        }
        if zero > lb {
            lb = zero;
        }
        let mut ub = &dlo + rat_int(1);
        let cap = rat_int(k as i64 - 1);
        if cap < ub {
            ub = cap;
        }
        if lb < ub {
            let rho = crate::rat::simplest_in(&lb, &ub);
            return Ok(&rho * &rho);
        }
    }
    Err(GadgetError::Undecided(
        "no rational first-link radius separable at current precision".to_string(),
    ))
}

/// Intersection points of unit circles around all current exact points, up
/// to `depth` rounds, deduplicated exactly. Returns only the new candidate
/// points, not a configuration.
pub fn constructible_closure(
    c: &Configuration,
    depth: u32,
    cap: usize,
) -> Result<Vec<Point>, GadgetError> {
    let mut known: Vec<RPoint> = Vec::new();
    for p in &c.points {
        if let (Some(x), Some(y)) = (
            p.coords.first().and_then(|v| v.exact()),
            p.coords.get(1).and_then(|v| v.exact()),
        ) {
            known.push([x.clone(), y.clone()]);
        }
    }
    let base = known.len();
    let mut frontier: Vec<RPoint> = known.clone();
    for _ in 0..depth {
        let mut new_points: Vec<RPoint> = Vec::new();
        for (i, p) in known.iter().enumerate() {
            for q in known.iter().skip(i + 1) {
                // at least one endpoint from the current frontier, else the
                // pair was expanded in an earlier round
                if !frontier.contains(p) && !frontier.contains(q) {
                    continue;
                }
                if let Intersections::Points(pts) = unit_circle_intersections(p, q) {
                    for cand in pts {
                        if !known.contains(&cand)
                            && !new_points.contains(&cand)
                        {
                            if known.len() + new_points.len() - base >= cap {
                                return Err(GadgetError::BudgetExceeded(cap));
                            }
                            new_points.push(cand);
                        }
                    }
                }
            }
        }
        if new_points.is_empty() {
            break;
        }
        known.extend(new_points.iter().cloned());
        frontier = new_points;
    }
    let mut out = Vec::new();
    let mut scratch = c.clone();
    for p in known.into_iter().skip(base) {
        let label = fresh_label(&scratch, "g");
        let point = Point::new(
            label,
            vec![CReal::from_radical(&p[0]), CReal::from_radical(&p[1])],
        );
        scratch.points.push(point.clone());
        out.push(point);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Max candidate points adjoined to any explored configuration.
    pub max_points: usize,
    /// Max configurations evaluated before giving up.
    pub max_configs: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_points: 4,
            max_configs: 64,
        }
    }
}

#[derive(Debug)]
pub enum SearchOutcome {
    Found(Configuration),
    Exhausted { best: Option<Spectrum> },
}

/// Best-first search for an augmentation of `c` whose (x, y) distance claim
/// verifies as Proven. Candidates come from the constructible closure; each
/// is adjoined with its generating unit edges. Deterministic: ties break by
/// insertion order.
pub fn search_witness(
    c: &Configuration,
    x: &str,
    y: &str,
    budget: &SearchBudget,
) -> Result<SearchOutcome, GadgetError> {
    let claim = Claim::Distance {
        x: x.to_string(),
        y: y.to_string(),
        mode: Mode::Strong,
    };
    search_internal(c, x, y, &claim, budget)
}

fn search_internal(
    c: &Configuration,
    x: &str,
    y: &str,
    claim: &Claim,
    budget: &SearchBudget,
) -> Result<SearchOutcome, GadgetError> {
    c.point(x)?;
    c.point(y)?;
    struct State {
        cfg: Configuration,
        added: usize,
        score: (usize, f64),
        index: usize,
    }
    let evaluate = |cfg: &Configuration| -> Option<(usize, f64)> {
        let e = enumerate_config(cfg).ok()?;
        if !e.complete {
            return None;
        }
        let sp = spectrum_of(&e, x, y);
        let d = crate::config::distance(cfg.point(x).ok()?, cfg.point(y).ok()?)
            .ok()?
            .to_f64();
        let dev = sp
            .values
            .iter()
            .map(|v| (v.to_f64() - d).abs())
            .fold(0.0, f64::max);
        Some((sp.values.len(), dev))
    };
    let mut frontier: Vec<State> = Vec::new();
    let mut evaluated = 0usize;
    let mut next_index = 0usize;
    let mut best: Option<(usize, Spectrum)> = None;
    let root_score = evaluate(c);
    frontier.push(State {
        cfg: c.clone(),
        added: 0,
        score: root_score.unwrap_or((usize::MAX, f64::INFINITY)),
        index: 0,
    });
    next_index += 1;
    while let Some(pos) = frontier
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.score
                .0
                .cmp(&b.score.0)
                .then(a.score.1.partial_cmp(&b.score.1).unwrap_or(std::cmp::Ordering::Equal))
                .then(a.index.cmp(&b.index))
        })
        .map(|(i, _)| i)
    {
        let state = frontier.remove(pos);
        if evaluated >= budget.max_configs {
            break;
        }
        evaluated += 1;
        let verdict = verify(&state.cfg, claim)?;
        if verdict.outcome == Outcome::Proven {
            return Ok(SearchOutcome::Found(state.cfg));
        }
        if let Some(sp) = verdict.spectrum {
            if best
                .as_ref()
                .map_or(true, |(n, _)| sp.values.len() < *n)
            {
                best = Some((sp.values.len(), sp));
            }
        }
        if state.added >= budget.max_points {
            continue;
        }
        let candidates = match constructible_closure(&state.cfg, 1, 64) {
            Ok(cands) => cands,
            Err(GadgetError::BudgetExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        for cand in candidates {
            let cp = [
                cand.coords[0].exact().unwrap().clone(),
                cand.coords[1].exact().unwrap().clone(),
            ];
            // generating edges: every existing exact point at certified
            // unit distance
            let neighbors: Vec<String> = state
                .cfg
                .points
                .iter()
                .filter(|p| {
                    match (
                        p.coords.first().and_then(|v| v.exact()),
                        p.coords.get(1).and_then(|v| v.exact()),
                    ) {
                        (Some(px), Some(py)) => {
                            sq_dist(&cp, &[px.clone(), py.clone()]) == Radical::one()
                        }
                        _ => false,
                    }
                })
                .map(|p| p.label.clone())
                .collect();
            if neighbors.len() < 2 {
                continue;
            }
            let refs: Vec<&str> = neighbors.iter().map(|s| s.as_str()).collect();
            let cfg = match with_point(&state.cfg, &cp, "g", &refs)
                .and_then(|(cfg, _)| finished(cfg))
            {
                Ok(cfg) => cfg,
                Err(_) => continue,
            };
            let score = match evaluate(&cfg) {
                Some(s) => s,
                None => continue,
            };
            frontier.push(State {
                cfg,
                added: state.added + 1,
                score,
                index: next_index,
            });
            next_index += 1;
        }
    }
    Ok(SearchOutcome::Exhausted {
        best: best.map(|(_, sp)| sp),
    })
}

/// Construct a configuration on which |d(f(x), f(y)) - d(x, y)| <= eps is
/// machine-verified. Cascade: the configuration as-is, then a k-link chain
/// (one-sided bound), then the augmentation search with the epsilon
/// objective. Never returns an unverified construction.
pub fn build_epsilon_witness(
    c: &Configuration,
    x: &str,
    y: &str,
    eps: &CReal,
) -> Result<Configuration, GadgetError> {
    if eps.sign() != crate::creal::Cmp::Greater {
        return Err(GadgetError::Undecided("eps must be certified > 0".to_string()));
    }
    let claim = Claim::Epsilon {
        x: x.to_string(),
        y: y.to_string(),
        eps: eps.clone(),
    };
    // (1) the configuration may already verify
    if verify(c, &claim)?.outcome == Outcome::Proven {
        return Ok(c.clone());
    }
    // (2) chain with k = ceil(d): proves d(f(x), f(y)) in [0, k]
    if let (Ok(px), Ok(py)) = (exact_point(c, x), exact_point(c, y)) {
        let d_sq = sq_dist(&px, &py);
        let k = (1..=64u32).find(|k| {
            d_sq.cmp_exact(&Radical::from_rat(rat_int((*k as i64) * (*k as i64))))
                != std::cmp::Ordering::Greater
        });
        if let Some(k) = k {
            if let Ok((chained, _)) = build_chain(c, x, y, k) {
                if verify(&chained, &claim)?.outcome == Outcome::Proven {
                    return Ok(chained);
                }
            }
        }
    }
    // (3) augmentation search against the epsilon claim
    if let SearchOutcome::Found(cfg) =
        search_internal(c, x, y, &claim, &SearchBudget::default())?
    {
        if verify(&cfg, &claim)?.outcome == Outcome::Proven {
            return Ok(cfg);
        }
    }
    Err(GadgetError::NoVerifiedConstruction)
}

/// The seven-point spindle: two rhombus gadgets sharing the tip at the
/// origin, far tips at unit distance, eleven declared unit edges.
pub fn build_spindle() -> Configuration {
    let half = || rat(1, 2);
    let r11 = || Radical::root_term(rat(1, 2), 11); // sqrt(11)/2
    let p = |x: Radical, y: Radical| (x, y);
    let origin = p(Radical::zero(), Radical::zero());
    let a1 = p(Radical::from_rat(-half()), r11());
    let a2 = p(Radical::from_rat(half()), r11());
    // mid points of each rhombus: tip/2 +- perp(tip) * sqrt(3)/6
    let s = Radical::root_term(rat(1, 6), 3);
    let mids = |a: &(Radical, Radical)| {
        let perp = (-a.1.clone(), a.0.clone());
        let hx = a.0.clone() * rat(1, 2);
        let hy = a.1.clone() * rat(1, 2);
        (
            (
                hx.clone() + s.clone() * perp.0.clone(),
                hy.clone() + s.clone() * perp.1.clone(),
            ),
            (hx - s.clone() * perp.0, hy - s.clone() * perp.1),
        )
    };
    let (b1, d1) = mids(&a1);
    let (b2, d2) = mids(&a2);
    let mk = |label: &str, pt: &(Radical, Radical)| {
        Point::new(
            label,
            vec![CReal::from_radical(&pt.0), CReal::from_radical(&pt.1)],
        )
    };
    let points = vec![
        mk("P", &origin),
        mk("A1", &a1),
        mk("B1", &b1),
        mk("D1", &d1),
        mk("A2", &a2),
        mk("B2", &b2),
        mk("D2", &d2),
    ];
    let e = |a: &str, b: &str| (a.to_string(), b.to_string());
    let edges = vec![
        e("P", "B1"),
        e("P", "D1"),
        e("A1", "B1"),
        e("A1", "D1"),
        e("B1", "D1"),
        e("P", "B2"),
        e("P", "D2"),
        e("A2", "B2"),
        e("A2", "D2"),
        e("B2", "D2"),
        e("A1", "A2"),
    ];
    Configuration::new(2, points, edges)
        .expect("spindle construction is fixed")
        .with_declared_units()
}

// ---- gadget catalog -------------------------------------------------------

/// Expected enumeration outcome for a catalog entry's distinguished pair,
/// stored adjacent to the configuration file.
#[derive(Clone, Debug, serde::Deserialize)]
pub struct ExpectedSpectrum {
    pub pair: (String, String),
    pub complete: bool,
    /// expression strings, sorted ascending
    pub values: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub config_json: &'static str,
    pub spectrum_json: &'static str,
}

impl CatalogEntry {
    pub fn config(&self) -> Configuration {
        Configuration::from_json(self.config_json).expect("catalog entry parses")
    }

    pub fn expected(&self) -> ExpectedSpectrum {
        serde_json::from_str(self.spectrum_json).expect("catalog spectrum parses")
    }
}

/// Built-in gadget catalog; regenerate the data files with the
/// `gen_catalog` example.
pub fn catalog() -> Vec<CatalogEntry> {
    macro_rules! entry {
        ($name:literal) => {
            CatalogEntry {
                name: $name,
                config_json: include_str!(concat!("../data/", $name, ".json")),
                spectrum_json: include_str!(concat!("../data/", $name, ".spectrum.json")),
            }
        };
    }
    vec![
        entry!("edge"),
        entry!("triangle"),
        entry!("rhombus"),
        entry!("chain2"),
        entry!("spindle"),
    ]
}
