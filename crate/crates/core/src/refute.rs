//! Numeric search for unit-distance-preserving placements that move a
//! designated pair away from its source distance.
//!
//! The search is floating point and therefore only ever *suggests* a
//! counterexample; callers certify suggestions through the exact enumerator
//! before reporting a refutation. Everything is deterministic for a fixed
//! seed: restart `i` derives its generator from `seed` and `i` alone.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Configuration;
use crate::creal::CReal;
use crate::frame::{PlacementSolution, Provenance};

#[derive(Clone, Copy, Debug)]
pub struct RefuterParams {
    pub restarts: u32,
    pub seed: u64,
    /// Max edge residual (on squared lengths) for a placement to count as
    /// satisfying the constraints.
    pub residual_tol: f64,
    /// Min certified-pair deviation for a placement to count as a candidate
    /// counterexample.
    pub deviation_tol: f64,
    pub max_iterations: u32,
}

impl Default for RefuterParams {
    fn default() -> RefuterParams {
        RefuterParams {
            restarts: 32,
            seed: 0,
            residual_tol: 1e-12,
            deviation_tol: 1e-6,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NumericWitness {
    pub coords: BTreeMap<String, [f64; 2]>,
    /// Max absolute edge residual on squared lengths.
    pub residual: f64,
    /// |d(f(x), f(y)) - target|.
    pub deviation: f64,
    pub restart: u32,
}

impl NumericWitness {
    pub fn to_solution(&self) -> PlacementSolution {
        let assignment = self
            .coords
            .iter()
            .map(|(label, p)| {
                let cs = p
                    .iter()
                    .map(|&v| {
                        // f64 -> exact decimal rational, faithful to the float
                        let r = crate::rat::f64_to_rat(v);
                        CReal::from_rat(r)
                    })
                    .collect();
                (label.clone(), cs)
            })
            .collect();
        PlacementSolution {
            assignment,
            provenance: Provenance::Numeric {
                residual: self.residual,
            },
        }
    }
}

/// Unit-graph distance between two labelled points, if connected.
pub fn linkage_bound(c: &Configuration, x: &str, y: &str) -> Option<usize> {
    let xi = c.point_index(x)?;
    let yi = c.point_index(y)?;
    let adj = c.adjacency();
    let mut dist = vec![usize::MAX; adj.len()];
    dist[xi] = 0;
    let mut queue = VecDeque::from([xi]);
    while let Some(i) = queue.pop_front() {
        if i == yi {
            return Some(dist[i]);
        }
        for &j in &adj[i] {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    None
}

/// Diameter of the unit graph (max finite pairwise graph distance).
fn graph_diameter(adj: &[Vec<usize>]) -> usize {
    let mut best = 1;
    for start in 0..adj.len() {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    best = best.max(dist[j]);
                    queue.push_back(j);
                }
            }
        }
    }
    best
}

struct Problem {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Gauge anchors: coordinates pinned to zero as extra residuals
    /// (first base point fully, second base point's y), quotienting out
    /// translations and rotations but not reflection.
    anchors: [usize; 3],
}

impl Problem {
    fn residuals(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut r = DVector::zeros(self.edges.len() + 3);
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            let dx = v[2 * i] - v[2 * j];
            let dy = v[2 * i + 1] - v[2 * j + 1];
            r[k] = dx * dx + dy * dy - 1.0;
        }
        for (k, &a) in self.anchors.iter().enumerate() {
            r[self.edges.len() + k] = v[a];
        }
        r
    }

    fn jacobian(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.edges.len() + 3, 2 * self.n);
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            let dx = v[2 * i] - v[2 * j];
            let dy = v[2 * i + 1] - v[2 * j + 1];
            jac[(k, 2 * i)] = 2.0 * dx;
            jac[(k, 2 * i + 1)] = 2.0 * dy;
            jac[(k, 2 * j)] = -2.0 * dx;
            jac[(k, 2 * j + 1)] = -2.0 * dy;
        }
        for (k, &a) in self.anchors.iter().enumerate() {
            jac[(self.edges.len() + k, a)] = 1.0;
        }
        jac
    }

    fn max_residual(&self, v: &DVector<f64>) -> f64 {
        self.residuals(v).amax()
    }

    /// Damped Gauss-Newton (Levenberg-Marquardt) polish to the constraint
    /// manifold.
    fn polish(&self, v: &mut DVector<f64>, iterations: u32, tol: f64) {
        let mut lambda = 1e-3;
        for _ in 0..iterations {
            let r = self.residuals(v);
            if r.amax() < tol {
                return;
            }
            let jac = self.jacobian(v);
            let jt = jac.transpose();
            let mut normal = &jt * &jac;
            for d in 0..normal.nrows() {
                normal[(d, d)] += lambda;
            }
            let rhs = &jt * &r;
            let step = match normal.clone().cholesky() {
                Some(ch) => ch.solve(&rhs),
                None => return,
            };
            let cand = &*v - &step;
            if self.residuals(&cand).norm() < r.norm() {
                *v = cand;
                lambda = (lambda * 0.25).max(1e-12);
            } else {
                lambda *= 4.0;
                if lambda > 1e8 {
                    return;
                }
            }
        }
    }

    /// Unit step direction that changes the objective quantity while
    /// staying (to first order) on the constraint manifold: the objective
    /// gradient projected onto the nullspace of the constraint Jacobian.
    fn tangent_toward(&self, v: &DVector<f64>, objective: &ResolvedObjective) -> Option<DVector<f64>> {
        let grad = objective.gradient(self.n, v);
        let jac = self.jacobian(v);
        let svd = jac.svd(false, true);
        let vt = svd.v_t?;
        let smax = svd.singular_values.amax();
        let cutoff = smax * 1e-9 + 1e-12;
        let mut proj = grad.clone();
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff {
                let row = vt.row(k).transpose();
                let coeff = row.dot(&grad);
                proj -= row * coeff;
            }
        }
        let norm = proj.norm();
        if norm < 1e-9 {
            None
        } else {
            Some(proj / norm)
        }
    }
}

/// What quantity the refuter tries to drive away from zero deviation.
#[derive(Clone, Debug)]
pub enum Objective {
    /// |d(f(x), f(y)) - target|
    PairDistance { x: String, y: String, target: f64 },
    /// |d(f(k), f(l)) - d(f(m), f(n))|
    PairDifference {
        k: String,
        l: String,
        m: String,
        n: String,
    },
}

enum ResolvedObjective {
    PairDistance { xi: usize, yi: usize, target: f64 },
    PairDifference { ki: usize, li: usize, mi: usize, ni: usize },
}

fn pair_dist(v: &DVector<f64>, i: usize, j: usize) -> f64 {
    let dx = v[2 * i] - v[2 * j];
    let dy = v[2 * i + 1] - v[2 * j + 1];
    (dx * dx + dy * dy).sqrt()
}

/// Add the gradient of d(p_i, p_j) (scaled) into `grad`; at coincidence the
/// distance is not differentiable, so nudge along x.
fn add_dist_grad(grad: &mut DVector<f64>, v: &DVector<f64>, i: usize, j: usize, scale: f64) {
    let dx = v[2 * i] - v[2 * j];
    let dy = v[2 * i + 1] - v[2 * j + 1];
    let d = (dx * dx + dy * dy).sqrt();
    if d < 1e-9 {
        grad[2 * i] += scale;
        grad[2 * j] -= scale;
    } else {
        grad[2 * i] += scale * dx / d;
        grad[2 * i + 1] += scale * dy / d;
        grad[2 * j] -= scale * dx / d;
        grad[2 * j + 1] -= scale * dy / d;
    }
}

impl ResolvedObjective {
    /// Absolute deviation of the tracked quantity from its target.
    fn deviation(&self, v: &DVector<f64>) -> f64 {
        match *self {
            ResolvedObjective::PairDistance { xi, yi, target } => {
                (pair_dist(v, xi, yi) - target).abs()
            }
            ResolvedObjective::PairDifference { ki, li, mi, ni } => {
                (pair_dist(v, ki, li) - pair_dist(v, mi, ni)).abs()
            }
        }
    }

    /// Gradient of the signed quantity (before taking absolute value).
    fn gradient(&self, n: usize, v: &DVector<f64>) -> DVector<f64> {
        let mut grad = DVector::zeros(2 * n);
        match *self {
            ResolvedObjective::PairDistance { xi, yi, .. } => {
                add_dist_grad(&mut grad, v, xi, yi, 1.0);
            }
            ResolvedObjective::PairDifference { ki, li, mi, ni } => {
                add_dist_grad(&mut grad, v, ki, li, 1.0);
                add_dist_grad(&mut grad, v, mi, ni, -1.0);
            }
        }
        grad
    }
}

/// Search for a constraint-satisfying placement whose (x, y) image distance
/// deviates from `target`. Returns the best feasible deviation found, even
/// when under `deviation_tol` (callers decide what counts).
pub fn search_deviation(
    c: &Configuration,
    x: &str,
    y: &str,
    target: f64,
    params: &RefuterParams,
) -> Option<NumericWitness> {
    search_objective(
        c,
        &Objective::PairDistance {
            x: x.to_string(),
            y: y.to_string(),
            target,
        },
        params,
    )
}

/// Search for a constraint-satisfying placement maximizing the objective's
/// deviation.
pub fn search_objective(
    c: &Configuration,
    objective: &Objective,
    params: &RefuterParams,
) -> Option<NumericWitness> {
    let n = c.points.len();
    let objective = match objective {
        Objective::PairDistance { x, y, target } => ResolvedObjective::PairDistance {
            xi: c.point_index(x)?,
            yi: c.point_index(y)?,
            target: *target,
        },
        Objective::PairDifference { k, l, m, n } => ResolvedObjective::PairDifference {
            ki: c.point_index(k)?,
            li: c.point_index(l)?,
            mi: c.point_index(m)?,
            ni: c.point_index(n)?,
        },
    };
    let edges: Vec<(usize, usize)> = c
        .unit_edges
        .iter()
        .map(|(a, b)| (c.point_index(a).unwrap(), c.point_index(b).unwrap()))
        .collect();
    if edges.is_empty() {
        return None;
    }
    let (b0, b1) = edges[0];
    let problem = Problem {
        n,
        edges,
        anchors: [2 * b0, 2 * b0 + 1, 2 * b1 + 1],
    };
    let adj = c.adjacency();
    let radius = graph_diameter(&adj) as f64 + 1.0;

    let mut best: Option<NumericWitness> = None;
    for restart in 0..params.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(
            params
                .seed
                .wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut v = DVector::zeros(2 * n);
        for i in 0..n {
            // uniform in a disk of the linkage radius
            let (px, py) = loop {
                let px: f64 = rng.gen_range(-1.0..1.0);
                let py: f64 = rng.gen_range(-1.0..1.0);
                if px * px + py * py <= 1.0 {
                    break (px * radius, py * radius);
                }
            };
            v[2 * i] = px;
            v[2 * i + 1] = py;
        }
        v[2 * b0] = 0.0;
        v[2 * b0 + 1] = 0.0;
        v[2 * b1] = 1.0;
        v[2 * b1 + 1] = 0.0;
        problem.polish(&mut v, params.max_iterations, params.residual_tol);
        if problem.max_residual(&v) > params.residual_tol {
            continue;
        }
        let record = |v: &DVector<f64>, best: &mut Option<NumericWitness>| {
            let residual = problem.max_residual(v);
            if residual > params.residual_tol {
                return;
            }
            let deviation = objective.deviation(v);
            if best.as_ref().map_or(true, |b| deviation > b.deviation) {
                let coords = c
                    .points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.label.clone(), [v[2 * i], v[2 * i + 1]]))
                    .collect();
                *best = Some(NumericWitness {
                    coords,
                    residual,
                    deviation,
                    restart,
                });
            }
        };
        record(&v, &mut best);
        // deviation ascent: walk the constraint tangent away from the
        // target distance, re-polishing after each step
        for sign in [1.0f64, -1.0] {
            let mut w = v.clone();
            let mut step = 0.25;
            for _ in 0..params.max_iterations {
                let dir = match problem.tangent_toward(&w, &objective) {
                    Some(d) => d,
                    None => break,
                };
                let before = objective.deviation(&w);
                let mut cand = &w + &dir * (sign * step);
                problem.polish(&mut cand, params.max_iterations, params.residual_tol);
                let after = objective.deviation(&cand);
                if problem.max_residual(&cand) <= params.residual_tol && after > before + 1e-15 {
                    w = cand;
                    record(&w, &mut best);
                    step = (step * 1.5).min(0.5);
                } else {
                    step *= 0.5;
                    if step < 1e-12 {
                        break;
                    }
                }
            }
        }
    }
    best
}
