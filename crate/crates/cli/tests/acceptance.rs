//! Acceptance suite: one test per criterion, each printing a single PASS
//! line (run with `--nocapture` to see them). Tolerances are pinned here
//! and nowhere else.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udwit::claims::{refute, verify, Claim, Mode, Outcome};
use udwit::combine::{strengthen_star, EpsilonBuilder, KitKind, RecordingStub};
use udwit::config::sq_distance;
use udwit::congruence::{
    truncated_equiv_closed_form, truncated_equiv_search, TruncationQuery, Verdict3,
};
use udwit::enumerate::{enumerate_config, spectrum, Enumeration};
use udwit::gadgets::{attach_rhombus, attach_triangle, catalog, Side};
use udwit::rat::{rat, rat_int, Rat};
use udwit::refute::{linkage_bound, search_deviation, RefuterParams};
use udwit::{CReal, Cmp, Configuration, Point, Radical};

fn pass(n: u32, what: &str) {
    println!("criterion {n}: PASS - {what}");
}

fn unit_pair(a: &str, b: &str) -> Configuration {
    Configuration::new(
        2,
        vec![
            Point::parse(a, &["0", "0"]).unwrap(),
            Point::parse(b, &["1", "0"]).unwrap(),
        ],
        vec![(a.to_string(), b.to_string())],
    )
    .unwrap()
}

/// The rhombus gadget: base {B, D} plus both triangle tips.
fn rhombus() -> (Configuration, String, String) {
    let (cfg, a, c) = attach_rhombus(&unit_pair("B", "D"), "B", "D").unwrap();
    (cfg, a, c)
}

fn pow2_neg(bits: u32) -> Rat {
    let mut t = rat(1, 1);
    for _ in 0..bits {
        t = t * rat(1, 2);
    }
    t
}

// -- criterion 1: rhombus dichotomy -----------------------------------------

#[test]
fn criterion_01_rhombus_dichotomy() {
    let (cfg, a, c) = rhombus();
    let e = enumerate_config(&cfg).unwrap();
    assert!(e.complete, "rhombus enumeration must close");
    assert_eq!(e.solutions.len(), 2, "rhombus has exactly 2 placements");
    let sp = spectrum(&cfg, &a, &c).unwrap();
    assert!(sp.complete);
    assert_eq!(sp.values.len(), 2);
    assert_eq!(sp.values[0].exact(), Some(&Radical::zero()));
    assert_eq!(sp.values[1].exact(), Some(&Radical::root_term(rat(1, 1), 3)));
    let width_cap = pow2_neg(100);
    for v in &sp.values {
        let (lo, hi) = v.refine(256).interval().unwrap();
        assert!(hi - lo < width_cap, "interval width must be below 2^-100");
    }
    pass(1, "rhombus: 2 solutions, spectrum {0, sqrt(3)} certified");
}

// -- criterion 2: strong vs weak semantics ----------------------------------

#[test]
fn criterion_02_strong_vs_weak() {
    let (cfg, a, c) = rhombus();
    let strong = verify(
        &cfg,
        &Claim::Distance { x: a.clone(), y: c.clone(), mode: Mode::Strong },
    )
    .unwrap();
    assert_eq!(strong.outcome, Outcome::Refuted);
    let w = strong.witness.expect("collapse witness");
    assert!(w.sq_image_distance_exact(&a, &c).unwrap().is_zero());
    let weak = verify(
        &cfg,
        &Claim::Distance { x: a.clone(), y: c.clone(), mode: Mode::Weak },
    )
    .unwrap();
    assert_eq!(weak.outcome, Outcome::Proven);
    let wsp = weak.spectrum.unwrap();
    assert_eq!(wsp.values.len(), 1);
    assert_eq!(wsp.values[0].exact(), Some(&Radical::root_term(rat(1, 1), 3)));
    pass(2, "strong claim refuted by collapse, weak claim proven on {sqrt(3)}");
}

// -- criterion 3: epsilon contract and corollaries --------------------------

#[test]
fn criterion_03_epsilon_contract() {
    let (cfg, a, c) = rhombus();
    let eps_claim = |e: &str| Claim::Epsilon {
        x: a.clone(),
        y: c.clone(),
        eps: CReal::parse(e).unwrap(),
    };
    assert_eq!(verify(&cfg, &eps_claim("sqrt(3)")).unwrap().outcome, Outcome::Proven);
    assert_eq!(verify(&cfg, &eps_claim("1")).unwrap().outcome, Outcome::Refuted);

    // corollaries across the catalog: a proven epsilon below d forces
    // distinct images; below |d - 1| it forces non-unit images
    for entry in catalog() {
        let cfg = entry.config();
        let expected = entry.expected();
        let (x, y) = (&expected.pair.0, &expected.pair.1);
        let d = sq_distance(cfg.point(x).unwrap(), cfg.point(y).unwrap())
            .unwrap()
            .sqrt();
        if d.sign() != Cmp::Greater {
            continue;
        }
        let enumeration = match enumerate_config(&cfg) {
            Ok(e) if e.complete => e,
            _ => continue,
        };
        let distinct_eps = d.half();
        let v = verify(
            &cfg,
            &Claim::Epsilon { x: x.clone(), y: y.clone(), eps: distinct_eps },
        )
        .unwrap();
        if v.outcome == Outcome::Proven {
            for s in &enumeration.solutions {
                assert!(
                    !s.sq_image_distance_exact(x, y).unwrap().is_zero(),
                    "{}: distinctness corollary violated",
                    entry.name
                );
            }
        }
        let one = CReal::from_int(1);
        let gap = match d.compare(&one) {
            Cmp::Greater => d.sub(&one),
            Cmp::Less => one.sub(&d),
            _ => continue,
        };
        let v = verify(
            &cfg,
            &Claim::Epsilon { x: x.clone(), y: y.clone(), eps: gap.half() },
        )
        .unwrap();
        if v.outcome == Outcome::Proven {
            for s in &enumeration.solutions {
                assert_ne!(
                    s.sq_image_distance_exact(x, y).unwrap(),
                    Radical::one(),
                    "{}: non-unit corollary violated",
                    entry.name
                );
            }
        }
    }
    pass(3, "epsilon contract on the rhombus plus catalog corollaries");
}

// -- criterion 4: Theorem 2 term census -------------------------------------

#[test]
fn criterion_04_term_census() {
    let edge = unit_pair("X", "Y");
    let mut stub = RecordingStub::default();
    let out = strengthen_star(&edge, "X", "Y", &mut stub).unwrap();
    assert_eq!(out.kits.len(), 1);
    assert_eq!(out.kits[0].pair, ("X".to_string(), "Y".to_string()));
    let half = CReal::parse("1/2").unwrap();
    assert_eq!(stub.calls[0].2.compare(&half), Cmp::Equal);

    let (triangle, _) = attach_triangle(&edge, "X", "Y", Side::Up).unwrap();
    let mut stub = RecordingStub::default();
    let out = strengthen_star(&triangle, "X", "Y", &mut stub).unwrap();
    assert_eq!(out.kits.len(), 3);
    assert!(out.kits.iter().all(|k| k.kind == KitKind::Distinctness));

    let (rh, a, c) = rhombus();
    let mut stub = RecordingStub::default();
    let out = strengthen_star(&rh, &a, &c, &mut stub).unwrap();
    assert_eq!(out.kits.len(), 7);
    let non_unit: Vec<_> = out.kits.iter().filter(|k| k.kind == KitKind::NonUnit).collect();
    assert_eq!(non_unit.len(), 1);
    assert_eq!(non_unit[0].pair, (a.clone(), c.clone()));
    let expected_eps = CReal::parse("(sqrt(3) - 1)/2").unwrap();
    let recorded = stub
        .calls
        .iter()
        .filter(|(p, q, _)| (p.as_str(), q.as_str()) == (a.as_str(), c.as_str()))
        .map(|(_, _, e)| e.clone())
        .collect::<Vec<_>>();
    assert!(
        recorded.iter().any(|e| e.compare(&expected_eps) == Cmp::Equal),
        "non-unit kit must use eps = (sqrt(3) - 1)/2"
    );
    pass(4, "kit census: edge 1, triangle 3, rhombus 7 with exact non-unit eps");
}

// -- criterion 5: conditional soundness end-to-end --------------------------

#[test]
fn criterion_05_conditional_soundness() {
    let edge = unit_pair("X", "Y");
    let (triangle, _) = attach_triangle(&edge, "X", "Y", Side::Up).unwrap();
    let claim_weak = Claim::Distance { x: "X".into(), y: "Y".into(), mode: Mode::Weak };
    assert_eq!(verify(&triangle, &claim_weak).unwrap().outcome, Outcome::Proven);
    let mut builder = EpsilonBuilder;
    let strengthened = strengthen_star(&triangle, "X", "Y", &mut builder).unwrap();
    let claim_strong = Claim::Distance { x: "X".into(), y: "Y".into(), mode: Mode::Strong };
    let v = verify(&strengthened.config, &claim_strong).unwrap();
    assert_eq!(v.outcome, Outcome::Proven, "strengthened output must verify strongly");
    for p in &triangle.points {
        assert!(strengthened.config.point(&p.label).is_ok(), "originals preserved");
    }
    pass(5, "weakly verified input strengthens to a strongly verified output");
}

// -- criterion 6: enumerator vs sampling oracle -----------------------------

/// Independent realization sampler: random starts, Levenberg-Marquardt on
/// the squared-edge residuals with a translation/rotation gauge, then the
/// same canonical framing convention applied numerically.
mod sampler {


    pub struct Problem {
        pub n: usize,
        pub edges: Vec<(usize, usize)>,
    }

    fn unpack(v: &[f64], n: usize) -> Vec<[f64; 2]> {
        let mut pts = vec![[0.0, 0.0]; n];
        if n > 1 {
            pts[1] = [v[0], 0.0];
        }
        for i in 2..n {
            pts[i] = [v[2 * i - 3], v[2 * i - 2]];
        }
        pts
    }

    fn residuals(p: &Problem, pts: &[[f64; 2]]) -> Vec<f64> {
        p.edges
            .iter()
            .map(|&(i, j)| {
                let dx = pts[i][0] - pts[j][0];
                let dy = pts[i][1] - pts[j][1];
                dx * dx + dy * dy - 1.0
            })
            .collect()
    }

    /// dr/dv for the gauge-reduced variable vector.
    fn jacobian(p: &Problem, pts: &[[f64; 2]], nv: usize) -> nalgebra::DMatrix<f64> {
        let mut j = nalgebra::DMatrix::zeros(p.edges.len(), nv);
        let var_ix = |point: usize, axis: usize| -> Option<usize> {
            match (point, axis) {
                (0, _) => None,
                (1, 0) => Some(0),
                (1, 1) => None,
                (i, a) => Some(2 * i - 3 + a),
            }
        };
        for (row, &(a, b)) in p.edges.iter().enumerate() {
            let dx = pts[a][0] - pts[b][0];
            let dy = pts[a][1] - pts[b][1];
            let grads = [(a, 2.0 * dx, 2.0 * dy), (b, -2.0 * dx, -2.0 * dy)];
            for (pt, gx, gy) in grads {
                if let Some(ix) = var_ix(pt, 0) {
                    j[(row, ix)] += gx;
                }
                if let Some(ix) = var_ix(pt, 1) {
                    j[(row, ix)] += gy;
                }
            }
        }
        j
    }

    pub fn solve(p: &Problem, init: &[f64]) -> Option<Vec<[f64; 2]>> {
        let nv = init.len();
        let mut v = nalgebra::DVector::from_column_slice(init);
        let mut lambda = 1e-3;
        for _ in 0..120 {
            let pts = unpack(v.as_slice(), p.n);
            let r = nalgebra::DVector::from_vec(residuals(p, &pts));
            if r.amax() < 1e-13 {
                return Some(pts);
            }
            let j = jacobian(p, &pts, nv);
            let jtj = j.transpose() * &j;
            let jtr = j.transpose() * &r;
            let damped = &jtj + nalgebra::DMatrix::identity(nv, nv) * lambda;
            let step = damped.cholesky()?.solve(&jtr);
            let trial = &v - &step;
            let trial_r = residuals(p, &unpack(trial.as_slice(), p.n));
            let cost = r.norm_squared();
            let trial_cost: f64 = trial_r.iter().map(|x| x * x).sum();
            if trial_cost < cost {
                v = trial;
                lambda = (lambda / 3.0).max(1e-14);
            } else {
                lambda *= 4.0;
                if lambda > 1e12 {
                    return None;
                }
            }
        }
        None
    }

    /// Canonical frame, numerically: base.0 to the origin, base.1 to the
    /// positive x-axis, first point (in order) off the axis reflected up.
    pub fn frame(pts: &mut [[f64; 2]], b0: usize, b1: usize) {
        let o = pts[b0];
        for p in pts.iter_mut() {
            p[0] -= o[0];
            p[1] -= o[1];
        }
        let (bx, by) = (pts[b1][0], pts[b1][1]);
        let r = (bx * bx + by * by).sqrt();
        let (cos, sin) = (bx / r, by / r);
        for p in pts.iter_mut() {
            let (x, y) = (p[0], p[1]);
            p[0] = cos * x + sin * y;
            p[1] = cos * y - sin * x;
        }
        for i in 0..pts.len() {
            if pts[i][1].abs() > 1e-6 {
                if pts[i][1] < 0.0 {
                    for p in pts.iter_mut() {
                        p[1] = -p[1];
                    }
                }
                break;
            }
        }
    }
}

/// The base pair the enumerator framed against, recovered from the output:
/// the unit-edge pair lying at the origin and on the positive x-axis in
/// every solution.
fn detect_base(cfg: &Configuration, e: &Enumeration) -> (usize, usize) {
    let labels: Vec<&str> = cfg.points.iter().map(|p| p.label.as_str()).collect();
    let all =
        |f: &dyn Fn(&udwit::frame::PlacementSolution) -> bool| e.solutions.iter().all(|s| f(s));
    let origin = (0..labels.len())
        .find(|&i| {
            all(&|s| {
                let c = s.coords(labels[i]).unwrap();
                c[0].sign() == Cmp::Equal && c[1].sign() == Cmp::Equal
            })
        })
        .expect("an origin point");
    let axis = (0..labels.len())
        .find(|&i| {
            i != origin
                && cfg.has_edge(labels[origin], labels[i])
                && all(&|s| {
                    let c = s.coords(labels[i]).unwrap();
                    c[0].sign() == Cmp::Greater && c[1].sign() == Cmp::Equal
                })
        })
        .expect("an axis point");
    (origin, axis)
}

#[test]
fn criterion_06_sampling_oracle() {
    const RESTARTS: u64 = 100_000;
    const CLUSTER_TOL: f64 = 1e-7;
    const MATCH_TOL: f64 = 1e-9;
    for entry in catalog() {
        let cfg = entry.config();
        let e = match enumerate_config(&cfg) {
            Ok(e) if e.complete => e,
            _ => continue, // sampling a continuum is meaningless
        };
        let (b0, b1) = detect_base(&cfg, &e);
        let index: BTreeMap<&str, usize> = cfg
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.label.as_str(), i))
            .collect();
        let problem = sampler::Problem {
            n: cfg.points.len(),
            edges: cfg
                .unit_edges
                .iter()
                .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
                .collect(),
        };
        let nv = 2 * problem.n - 3;
        let threads = std::thread::available_parallelism().map_or(4, |t| t.get().min(8)) as u64;
        let mut clusters: Vec<Vec<[f64; 2]>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let problem = &problem;
                    scope.spawn(move || {
                        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_5500 + t);
                        let mut local: Vec<Vec<[f64; 2]>> = Vec::new();
                        for _ in 0..RESTARTS / threads {
                            let init: Vec<f64> =
                                (0..nv).map(|_| rng.gen_range(-3.0..3.0)).collect();
                            if let Some(mut pts) = sampler::solve(problem, &init) {
                                sampler::frame(&mut pts, b0, b1);
                                if !local.iter().any(|c| close(c, &pts, CLUSTER_TOL)) {
                                    local.push(pts);
                                }
                            }
                        }
                        local
                    })
                })
                .collect();
            for h in handles {
                for pts in h.join().unwrap() {
                    if !clusters.iter().any(|c| close(c, &pts, CLUSTER_TOL)) {
                        clusters.push(pts);
                    }
                }
            }
        });
        assert_eq!(
            clusters.len(),
            e.solutions.len(),
            "{}: sampler cluster count must match the enumerator",
            entry.name
        );
        for s in &e.solutions {
            let exact: Vec<[f64; 2]> = cfg
                .points
                .iter()
                .map(|p| {
                    let c = s.coords(&p.label).unwrap();
                    [c[0].to_f64(), c[1].to_f64()]
                })
                .collect();
            let hits = clusters.iter().filter(|c| close(c, &exact, MATCH_TOL)).count();
            assert_eq!(hits, 1, "{}: each exact solution matches one cluster", entry.name);
        }
    }
    pass(6, "10^5-restart sampler reproduces every complete catalog solution set");
}

fn close(a: &[[f64; 2]], b: &[[f64; 2]], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(p, q)| (p[0] - q[0]).abs() < tol && (p[1] - q[1]).abs() < tol)
}

// -- criterion 7: refuter consistency ---------------------------------------

#[test]
fn criterion_07_refuter_consistency() {
    let params = RefuterParams { restarts: 24, seed: 11, ..RefuterParams::default() };
    for entry in catalog() {
        let cfg = entry.config();
        let expected = entry.expected();
        let claim = Claim::Distance {
            x: expected.pair.0.clone(),
            y: expected.pair.1.clone(),
            mode: Mode::Strong,
        };
        let proven = verify(&cfg, &claim).unwrap().outcome;
        let refuted = refute(&cfg, &claim, &params).unwrap().outcome;
        assert!(
            !(proven == Outcome::Proven && refuted == Outcome::Refuted),
            "{}: certified refutation contradicts enumerator proof",
            entry.name
        );
    }
    let chain2 = catalog().into_iter().find(|e| e.name == "chain2").unwrap().config();
    let w = search_deviation(&chain2, "X", "Y", 1.5, &RefuterParams::default())
        .expect("fold witness on the 2-chain");
    assert!(
        w.deviation > 0.2,
        "2-chain fold deviation {} must exceed 0.2",
        w.deviation
    );
    pass(7, "no refuted-and-proven conflicts; 2-chain folds by more than 0.2");
}

// -- criterion 8: monotonicity and bounds -----------------------------------

#[test]
fn criterion_08_monotonicity_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 20 {
        // random trilaterable configuration from random triangle stacking
        let mut cfg = unit_pair("P0", "P1");
        for _ in 0..rng.gen_range(1..=3u32) {
            let i = rng.gen_range(0..cfg.points.len());
            let j = rng.gen_range(0..cfg.points.len());
            if i == j {
                continue;
            }
            let (p, q) = (cfg.points[i].label.clone(), cfg.points[j].label.clone());
            let side = if rng.gen_bool(0.5) { Side::Up } else { Side::Down };
            if let Ok((next, _)) = attach_triangle(&cfg, &p, &q, side) {
                cfg = next;
            }
        }
        let e = match enumerate_config(&cfg) {
            Ok(e) if e.complete => e,
            _ => continue,
        };
        let x = cfg.points[rng.gen_range(0..cfg.points.len())].label.clone();
        let y = cfg.points[rng.gen_range(0..cfg.points.len())].label.clone();
        if x == y {
            continue;
        }
        let sp = spectrum(&cfg, &x, &y).unwrap();
        assert!(sp.complete);
        if let Some(bound) = linkage_bound(&cfg, &x, &y) {
            for v in &sp.values {
                assert_ne!(
                    v.compare_rat(&rat_int(bound as i64)),
                    Cmp::Greater,
                    "spectrum value exceeds linkage bound {bound}"
                );
            }
        }
        // extending never enlarges a complete spectrum
        let side = if rng.gen_bool(0.5) { Side::Up } else { Side::Down };
        if let Ok((bigger, _)) = attach_triangle(&cfg, &x, &y, side) {
            if let Ok(e2) = enumerate_config(&bigger) {
                if e2.complete {
                    let sp2 = spectrum(&bigger, &x, &y).unwrap();
                    for v in &sp2.values {
                        assert!(
                            sp.values.iter().any(|u| u.compare(v) == Cmp::Equal),
                            "extension enlarged the spectrum of ({x}, {y})"
                        );
                    }
                }
            }
        }
        let _ = &e;
        checked += 1;
    }
    pass(8, "20 random configurations respect linkage bounds and shrink under extension");
}

// -- criterion 9: congruence truncation -------------------------------------

#[test]
fn criterion_09_congruence_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let coord = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(-6i64..=6);
        let d = rng.gen_range(1i64..=4);
        format!("{n}/{d}")
    };
    for _ in 0..100 {
        let pt = |label: &str, rng: &mut ChaCha8Rng| {
            Point::parse(label, &[&coord(rng), &coord(rng)]).unwrap()
        };
        let q = TruncationQuery {
            a: pt("a", &mut rng),
            b: pt("b", &mut rng),
            c: pt("c", &mut rng),
            d: pt("d", &mut rng),
            n_max: 5,
            denominator_bound: 64,
        };
        let closed = truncated_equiv_closed_form(&q).unwrap();
        let search = truncated_equiv_search(&q).unwrap();
        assert_eq!(closed.levels.len(), search.len());
        for ((_, cv), sl) in closed.levels.iter().zip(&search) {
            assert_ne!(*cv, Verdict3::Undecided, "rational queries decide exactly");
            if sl.holds {
                assert_eq!(*cv, Verdict3::Holds, "search witness implies closed form");
            }
            if !sl.holds && !sl.false_by_search {
                assert_eq!(*cv, Verdict3::Fails, "definite search failure implies closed form");
            }
        }
    }

    // frozen pair: 1 vs 3/2 holds through n = 4 and fails at n = 5
    let fixed = TruncationQuery {
        a: Point::parse("a", &["0", "0"]).unwrap(),
        b: Point::parse("b", &["1", "0"]).unwrap(),
        c: Point::parse("c", &["0", "0"]).unwrap(),
        d: Point::parse("d", &["3/2", "0"]).unwrap(),
        n_max: 5,
        denominator_bound: 64,
    };
    let closed = truncated_equiv_closed_form(&fixed).unwrap();
    for (n, v) in &closed.levels {
        let expect = if *n <= 4 { Verdict3::Holds } else { Verdict3::Fails };
        assert_eq!(*v, expect, "1 vs 3/2 at level {n}");
    }

    // congruent pairs hold through N = 50
    let congruent = TruncationQuery {
        a: Point::parse("a", &["0", "0"]).unwrap(),
        b: Point::parse("b", &["5/3", "1/2"]).unwrap(),
        c: Point::parse("c", &["1", "1"]).unwrap(),
        d: Point::parse("d", &["8/3", "3/2"]).unwrap(),
        n_max: 50,
        denominator_bound: 64,
    };
    let closed = truncated_equiv_closed_form(&congruent).unwrap();
    assert_eq!(closed.overall, Verdict3::Holds);
    assert!(closed.levels.iter().all(|(_, v)| *v == Verdict3::Holds));

    pass(9, "closed form and search agree on 100 random queries plus frozen pairs");
}

// -- criterion 10: CLI determinism ------------------------------------------

fn data(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

struct CliCase {
    args: Vec<String>,
    expect_code: i32,
}

fn cli_cases(pairs_file: &str) -> Vec<CliCase> {
    let case = |args: &[&str], expect_code: i32| CliCase {
        args: args.iter().map(|s| s.to_string()).collect(),
        expect_code,
    };
    vec![
        case(&["validate", &data("spindle.json")], 0),
        case(&["enumerate", &data("rhombus.json")], 0),
        case(&["spectrum", "--pair", "t1,t2", &data("rhombus.json")], 0),
        case(&["verify", "--claim", "star:t1,t2", &data("rhombus.json")], 1),
        case(&["verify", "--claim", "star:X,Y", &data("edge.json")], 0),
        case(&["verify", "--claim", "wstar:t1,t2", &data("rhombus.json")], 0),
        case(&["verify", "--claim", "eps:t1,t2,sqrt(3)", &data("rhombus.json")], 0),
        case(&["verify", "--claim", "eps:t1,t2,1", &data("rhombus.json")], 1),
        case(&["refute", "--claim", "star:t1,t2", "--seed", "5", &data("rhombus.json")], 1),
        case(&["refute", "--claim", "eps:X,Y,1/4", "--seed", "5", &data("chain2.json")], 2),
        case(&["build", "spindle"], 0),
        case(&["build", "triangle", "--pair", "X,Y", &data("edge.json")], 0),
        case(&["build", "chain", "--pair", "X,Y", "--N", "2", &data("edge.json")], 0),
        case(&["strengthen", "--claim", "star:X,Y", &data("triangle.json")], 0),
        case(&["closure", "--N", "1", "--budget", "64", &data("edge.json")], 0),
        case(&["search", "--pair", "X,Y", &data("edge.json")], 0),
        case(&["congruence", "--N", "5", pairs_file], 1),
    ]
}

fn run_suite(tag: &str, pairs_file: &str) -> Vec<(i32, Vec<u8>, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("acceptance-{tag}"));
    fs::create_dir_all(&dir).unwrap();
    cli_cases(pairs_file)
        .iter()
        .enumerate()
        .map(|(i, case)| {
            let report = dir.join(format!("{i:02}.json"));
            let output = Command::new(env!("CARGO_BIN_EXE_udwit"))
                .args(&case.args)
                .arg("--out")
                .arg(&report)
                .output()
                .unwrap();
            assert_eq!(
                output.status.code(),
                Some(case.expect_code),
                "case {i} {:?}: stderr = {}",
                case.args,
                String::from_utf8_lossy(&output.stderr)
            );
            (
                output.status.code().unwrap(),
                output.stdout,
                fs::read(&report).unwrap(),
            )
        })
        .collect()
}

#[test]
fn criterion_10_cli_determinism() {
    let pairs_file = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pairs.json");
    let pairs = Configuration::new(
        2,
        vec![
            Point::parse("a", &["0", "0"]).unwrap(),
            Point::parse("b", &["1", "0"]).unwrap(),
            Point::parse("c", &["3", "0"]).unwrap(),
            Point::parse("d", &["9/2", "0"]).unwrap(),
        ],
        vec![],
    )
    .unwrap();
    fs::write(&pairs_file, pairs.to_json()).unwrap();
    let pairs_file = pairs_file.to_str().unwrap().to_string();

    let first = run_suite("run1", &pairs_file);
    let second = run_suite("run2", &pairs_file);
    assert_eq!(first.len(), second.len());
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        assert_eq!(a.0, b.0, "case {i}: exit codes differ between runs");
        assert_eq!(a.1, b.1, "case {i}: stdout differs between runs");
        assert_eq!(a.2, b.2, "case {i}: report bytes differ between runs");
    }

    // every configuration the CLI emits is re-readable
    let built: serde_json::Value = serde_json::from_slice(&first[10].2).unwrap();
    let embedded = built.get("configuration").expect("build embeds its configuration");
    let round = Configuration::from_json(&serde_json::to_string(embedded).unwrap()).unwrap();
    assert_eq!(round.points.len(), 7);
    pass(10, "full CLI battery is byte-identical across runs");
}
