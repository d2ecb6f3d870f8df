//! Exact enumeration of all unit-distance-preserving placements of a planar
//! configuration modulo isometry.
//!
//! Placement is trilateration-ordered branching on two-circle intersections.
//! When the greedy order stalls but the whole remainder forms a rigid
//! cluster sharing exactly one placed anchor point, the cluster is
//! enumerated in its own frame and its rotation about the anchor is solved
//! from a cross unit edge (the constraint is linear in the rotation's
//! cosine/sine), which closes hinged gadgets like the Moser spindle.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::config::{Configuration, GeometryError};
use crate::creal::CReal;
use crate::frame::{canonical_frame_exact, sq_dist, PlacementSolution, RPoint};
use crate::order::{OrderError, TrilaterationOrder};
use crate::radical::Radical;
use crate::rat::rat;

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("configuration is not valid: {0}")]
    Invalid(String),
    #[error("exact enumeration requires dimension 2, got {0}")]
    BadDimension(usize),
    #[error("configuration has no declared unit edges")]
    NoEdges,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct BranchStats {
    pub explored: u64,
    pub dead: u64,
    pub hinge_merges: u64,
    pub continuum: bool,
    pub precision_exhausted: bool,
}

#[derive(Debug)]
pub struct Enumeration {
    pub solutions: Vec<PlacementSolution>,
    /// False when a continuum branch or an undecidable branch test was hit:
    /// verdicts drawn from an incomplete enumeration are never Proven.
    pub complete: bool,
    pub stats: BranchStats,
}

/// Distance spectrum of a pair over all enumerated placements.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<CReal>,
    pub complete: bool,
}

impl Spectrum {
    pub fn render(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_string()).collect()
    }
}

struct Search<'a> {
    c: &'a Configuration,
    adj: Vec<Vec<usize>>,
    base: (usize, usize),
    stats: BranchStats,
    incomplete: bool,
    found: Vec<(Vec<RPoint>, Vec<u8>)>,
}

pub fn enumerate_config(c: &Configuration) -> Result<Enumeration, EnumError> {
    let classified = prepare(c)?;
    let mut last_err: Option<EnumError> = None;
    for edge in classified.unit_edges.clone() {
        match enumerate_base(&classified, (&edge.0, &edge.1)) {
            Ok(e) => return Ok(e),
            Err(e @ EnumError::Order(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(EnumError::NoEdges))
}

/// Enumerate along an explicit trilateration order (the order fixes the base;
/// the branch exploration rederives the same greedy sequence).
pub fn enumerate(c: &Configuration, order: &TrilaterationOrder) -> Result<Enumeration, EnumError> {
    let classified = prepare(c)?;
    enumerate_base(&classified, (&order.base.0, &order.base.1))
}

fn prepare(c: &Configuration) -> Result<Configuration, EnumError> {
    if c.dimension != 2 {
        return Err(EnumError::BadDimension(c.dimension));
    }
    let classified = if c.pair_table.is_empty() {
        c.classify_pairs()
    } else {
        c.clone()
    };
    let report = classified.validate();
    if !report.is_valid() {
        return Err(EnumError::Invalid(report.summary()));
    }
    if classified.unit_edges.is_empty() {
        return Err(EnumError::NoEdges);
    }
    Ok(classified)
}

fn enumerate_base(c: &Configuration, base: (&str, &str)) -> Result<Enumeration, EnumError> {
    if !c.has_edge(base.0, base.1) {
        return Err(EnumError::Order(OrderError::BadBase(
            base.0.to_string(),
            base.1.to_string(),
        )));
    }
    let bi = c.point_index(base.0).unwrap();
    let bj = c.point_index(base.1).unwrap();
    let mut search = Search {
        c,
        adj: c.adjacency(),
        base: (bi, bj),
        stats: BranchStats::default(),
        incomplete: false,
        found: Vec::new(),
    };
    // structural feasibility first, so a hopeless base reports NoOrder
    structural_check(&search)?;
    let mut positions: Vec<Option<RPoint>> = vec![None; c.points.len()];
    positions[bi] = Some([Radical::zero(), Radical::zero()]);
    positions[bj] = Some([Radical::one(), Radical::zero()]);
    let mut path = Vec::new();
    search.dfs(&mut positions, &mut path);

    // canonical framing, dedup, deterministic order
    let labels: Vec<String> = c.points.iter().map(|p| p.label.clone()).collect();
    let mut framed: Vec<(Vec<RPoint>, Vec<u8>)> = Vec::new();
    for (pts, branch) in search.found.drain(..) {
        let named: Vec<(String, RPoint)> = labels.iter().cloned().zip(pts).collect();
        let canon = canonical_frame_exact(&named, (base.0, base.1))?;
        let coords: Vec<RPoint> = canon.into_iter().map(|(_, p)| p).collect();
        if !framed.iter().any(|(existing, _)| existing == &coords) {
            framed.push((coords, branch));
        }
    }
    framed.sort_by(|(a, _), (b, _)| {
        for (pa, pb) in a.iter().zip(b) {
            for k in 0..2 {
                let ord = pa[k].cmp_exact(&pb[k]);
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
        }
        std::cmp::Ordering::Equal
    });
    let solutions = framed
        .into_iter()
        .map(|(coords, branch)| {
            PlacementSolution::from_exact(labels.iter().cloned().zip(coords), branch)
        })
        .collect();
    Ok(Enumeration {
        solutions,
        complete: !search.incomplete,
        stats: search.stats,
    })
}

/// Check that greedy placement (with hinge closure) can structurally reach
/// every point, without doing any geometry.
fn structural_check(s: &Search) -> Result<(), EnumError> {
    fn closure(adj: &[Vec<usize>], mut placed: Vec<bool>) -> Vec<bool> {
        loop {
            let next = (0..adj.len()).find(|&i| {
                !placed[i] && adj[i].iter().filter(|&&j| placed[j]).count() >= 2
            });
            match next {
                Some(i) => placed[i] = true,
                None => return placed,
            }
        }
    }
    fn reachable(adj: &[Vec<usize>], placed: Vec<bool>, edges: &[(usize, usize)]) -> bool {
        let placed = closure(adj, placed);
        if placed.iter().all(|&p| p) {
            return true;
        }
        let unplaced: Vec<usize> = (0..adj.len()).filter(|&i| !placed[i]).collect();
        // hinge: all unplaced must attach to the placed set through exactly
        // one anchor plus at least one cross edge, and the cluster plus
        // anchor must itself be closable from one of its own unit edges
        for anchor in (0..adj.len()).filter(|&i| placed[i]) {
            let cross: Vec<(usize, usize)> = edges
                .iter()
                .copied()
                .filter(|&(u, v)| {
                    (placed[u] && u != anchor && !placed[v])
                        || (placed[v] && v != anchor && !placed[u])
                })
                .collect();
            if cross.is_empty() {
                continue;
            }
            // sub-adjacency over cluster + anchor
            let sub_nodes: Vec<usize> = std::iter::once(anchor)
                .chain(unplaced.iter().copied())
                .collect();
            let index_of = |g: usize| sub_nodes.iter().position(|&x| x == g);
            let mut sub_adj = vec![Vec::new(); sub_nodes.len()];
            for &(u, v) in edges {
                if let (Some(a), Some(b)) = (index_of(u), index_of(v)) {
                    sub_adj[a].push(b);
                    sub_adj[b].push(a);
                }
            }
            let sub_edges: Vec<(usize, usize)> = edges
                .iter()
                .filter_map(|&(u, v)| Some((index_of(u)?, index_of(v)?)))
                .collect();
            for &(a, b) in &sub_edges {
                let mut sub_placed = vec![false; sub_nodes.len()];
                sub_placed[a] = true;
                sub_placed[b] = true;
                if reachable(&sub_adj, sub_placed, &sub_edges) {
                    return true;
                }
            }
        }
        false
    }
    let edges: Vec<(usize, usize)> = s
        .c
        .unit_edges
        .iter()
        .map(|(a, b)| {
            (
                s.c.point_index(a).unwrap(),
                s.c.point_index(b).unwrap(),
            )
        })
        .collect();
    let mut placed = vec![false; s.c.points.len()];
    placed[s.base.0] = true;
    placed[s.base.1] = true;
    if reachable(&s.adj, placed, &edges) {
        Ok(())
    } else {
        let mut p = vec![false; s.c.points.len()];
        p[s.base.0] = true;
        p[s.base.1] = true;
        let p = {
            let mut placed = p;
            loop {
                let next = (0..s.adj.len()).find(|&i| {
                    !placed[i] && s.adj[i].iter().filter(|&&j| placed[j]).count() >= 2
                });
                match next {
                    Some(i) => placed[i] = true,
                    None => break placed,
                }
            }
        };
        let stuck: Vec<String> = (0..s.c.points.len())
            .filter(|&i| !p[i])
            .map(|i| s.c.points[i].label.clone())
            .collect();
        Err(EnumError::Order(OrderError::NoTrilaterationOrder(stuck)))
    }
}

impl<'a> Search<'a> {
    fn dfs(&mut self, positions: &mut Vec<Option<RPoint>>, path: &mut Vec<u8>) {
        let next = (0..positions.len()).find(|&i| {
            positions[i].is_none()
                && self.adj[i]
                    .iter()
                    .filter(|&&j| positions[j].is_some())
                    .count()
                    >= 2
        });
        let i = match next {
            Some(i) => i,
            None => {
                if positions.iter().all(|p| p.is_some()) {
                    let pts = positions.iter().map(|p| p.clone().unwrap()).collect();
                    self.found.push((pts, path.clone()));
                } else {
                    self.hinge(positions, path);
                }
                return;
            }
        };
        let mut anchors = self.adj[i].iter().filter(|&&j| positions[j].is_some());
        let s1 = *anchors.next().unwrap();
        let s2 = *anchors.next().unwrap();
        let p1 = positions[s1].clone().unwrap();
        let p2 = positions[s2].clone().unwrap();
        let candidates = match unit_circle_intersections(&p1, &p2) {
            Intersections::Continuum => {
                self.stats.continuum = true;
                self.incomplete = true;
                return;
            }
            Intersections::None => {
                self.stats.dead += 1;
                return;
            }
            Intersections::Inexact => {
                self.stats.precision_exhausted = true;
                self.incomplete = true;
                return;
            }
            Intersections::Points(pts) => pts,
        };
        for (branch, cand) in candidates.into_iter().enumerate() {
            self.stats.explored += 1;
            if !self.edges_hold(positions, i, &cand, &[s1, s2]) {
                self.stats.dead += 1;
                continue;
            }
            positions[i] = Some(cand);
            path.push(branch as u8);
            self.dfs(positions, path);
            path.pop();
            positions[i] = None;
        }
    }

    /// All declared unit edges from `i` to already-placed points (beyond the
    /// supports) must hold exactly.
    fn edges_hold(
        &self,
        positions: &[Option<RPoint>],
        i: usize,
        cand: &RPoint,
        skip: &[usize],
    ) -> bool {
        for &j in &self.adj[i] {
            if skip.contains(&j) {
                continue;
            }
            if let Some(pj) = &positions[j] {
                if sq_dist(cand, pj) != Radical::one() {
                    return false;
                }
            }
        }
        true
    }

    /// Rigid-cluster closure: enumerate the unplaced remainder around a
    /// single shared anchor and solve its rotation from a cross unit edge.
    fn hinge(&mut self, positions: &mut Vec<Option<RPoint>>, path: &mut Vec<u8>) {
        let unplaced: Vec<usize> = (0..positions.len())
            .filter(|&i| positions[i].is_none())
            .collect();
        let placed: Vec<usize> = (0..positions.len())
            .filter(|&i| positions[i].is_some())
            .collect();
        for &anchor in &placed {
            // every unit edge between the cluster and the placed set either
            // touches the anchor or becomes a cross constraint
            let mut cross: Vec<(usize, usize)> = Vec::new(); // (cluster pt, placed pt)
            for &u in &unplaced {
                for &j in &self.adj[u] {
                    if positions[j].is_some() && j != anchor {
                        cross.push((u, j));
                    }
                }
            }
            if cross.is_empty() {
                continue;
            }
            let sub = match self.subconfig(anchor, &unplaced) {
                Some(sub) => sub,
                None => continue,
            };
            let sub_enum = match enumerate_config(&sub) {
                Ok(e) => e,
                Err(EnumError::Order(_)) | Err(EnumError::NoEdges) => continue,
                Err(_) => {
                    self.incomplete = true;
                    self.stats.precision_exhausted = true;
                    return;
                }
            };
            if !sub_enum.complete {
                self.incomplete = true;
            }
            self.stats.hinge_merges += 1;
            let anchor_label = self.c.points[anchor].label.clone();
            let p_anchor = positions[anchor].clone().unwrap();
            for (si, sol) in sub_enum.solutions.iter().enumerate() {
                let local_anchor = match sol.exact_point(&anchor_label) {
                    Some(p) => p,
                    None => {
                        self.incomplete = true;
                        continue;
                    }
                };
                for sigma in [false, true] {
                    // local offsets from the anchor, optionally reflected
                    let offset = |u: usize| -> Option<RPoint> {
                        let p = sol.exact_point(&self.c.points[u].label)?;
                        let x = p[0].clone() - local_anchor[0].clone();
                        let mut y = p[1].clone() - local_anchor[1].clone();
                        if sigma {
                            y = -y;
                        }
                        Some([x, y])
                    };
                    let (u0, j0) = cross[0];
                    let w = match offset(u0) {
                        Some(w) => w,
                        None => {
                            self.incomplete = true;
                            continue;
                        }
                    };
                    let pj = positions[j0].clone().unwrap();
                    let q = [
                        pj[0].clone() - p_anchor[0].clone(),
                        pj[1].clone() - p_anchor[1].clone(),
                    ];
                    let dot = q[0].clone() * w[0].clone() + q[1].clone() * w[1].clone();
                    let crs = q[1].clone() * w[0].clone() - q[0].clone() * w[1].clone();
                    let two = Radical::from_int(2);
                    let alpha = two.clone() * dot;
                    let beta = two * crs;
                    let gamma = sq_dist(&w, &[Radical::zero(), Radical::zero()])
                        + sq_dist(&q, &[Radical::zero(), Radical::zero()])
                        - Radical::one();
                    let rotations = match rotation_solutions(&alpha, &beta, &gamma) {
                        RotationSolutions::Continuum => {
                            self.stats.continuum = true;
                            self.incomplete = true;
                            continue;
                        }
                        RotationSolutions::None => {
                            self.stats.dead += 1;
                            continue;
                        }
                        RotationSolutions::Inexact => {
                            self.stats.precision_exhausted = true;
                            self.incomplete = true;
                            continue;
                        }
                        RotationSolutions::Some(r) => r,
                    };
                    for (ri, (cos, sin)) in rotations.into_iter().enumerate() {
                        self.stats.explored += 1;
                        let mut ok = true;
                        let mut placedpts: Vec<(usize, RPoint)> = Vec::new();
                        for &u in &unplaced {
                            let w = match offset(u) {
                                Some(w) => w,
                                None => {
                                    ok = false;
                                    break;
                                }
                            };
                            let gx = p_anchor[0].clone() + cos.clone() * w[0].clone()
                                - sin.clone() * w[1].clone();
                            let gy = p_anchor[1].clone()
                                + sin.clone() * w[0].clone()
                                + cos.clone() * w[1].clone();
                            placedpts.push((u, [gx, gy]));
                        }
                        if !ok {
                            self.incomplete = true;
                            continue;
                        }
                        for &(u, j) in &cross {
                            let pu = &placedpts.iter().find(|(x, _)| *x == u).unwrap().1;
                            let pj = positions[j].clone().unwrap();
                            if sq_dist(pu, &pj) != Radical::one() {
                                ok = false;
                                break;
                            }
                        }
                        if !ok {
                            self.stats.dead += 1;
                            continue;
                        }
                        for (u, p) in &placedpts {
                            positions[*u] = Some(p.clone());
                        }
                        path.push(si as u8);
                        path.push(sigma as u8);
                        path.push(ri as u8);
                        let pts = positions.iter().map(|p| p.clone().unwrap()).collect();
                        self.found.push((pts, path.clone()));
                        path.truncate(path.len() - 3);
                        for (u, _) in &placedpts {
                            positions[*u] = None;
                        }
                    }
                }
            }
            return; // one viable anchor decomposition is exhaustive
        }
        // no hinge decomposition: structurally unreachable remainder
        self.incomplete = true;
    }

    /// Induced configuration over the anchor plus the unplaced cluster.
    fn subconfig(&self, anchor: usize, cluster: &[usize]) -> Option<Configuration> {
        let mut nodes: Vec<usize> = std::iter::once(anchor)
            .chain(cluster.iter().copied())
            .collect();
        nodes.sort_unstable();
        let labels: BTreeSet<&str> = nodes
            .iter()
            .map(|&i| self.c.points[i].label.as_str())
            .collect();
        let points = nodes
            .iter()
            .map(|&i| self.c.points[i].clone())
            .collect::<Vec<_>>();
        let edges = self
            .c
            .unit_edges
            .iter()
            .filter(|(a, b)| labels.contains(a.as_str()) && labels.contains(b.as_str()))
            .cloned()
            .collect::<Vec<_>>();
        if edges.is_empty() {
            return None;
        }
        Configuration::new(2, points, edges).ok()
    }
}

pub(crate) enum Intersections {
    Points(Vec<RPoint>),
    None,
    Continuum,
    Inexact,
}

/// Intersection of the two unit circles centered at `p1`, `p2`.
pub(crate) fn unit_circle_intersections(p1: &RPoint, p2: &RPoint) -> Intersections {
    let d_sq = sq_dist(p1, p2);
    if d_sq.is_zero() {
        return Intersections::Continuum;
    }
    let four = Radical::from_int(4);
    let half = rat(1, 2);
    let mx = (p1[0].clone() + p2[0].clone()) * half.clone();
    let my = (p1[1].clone() + p2[1].clone()) * half;
    match d_sq.cmp_exact(&four) {
        std::cmp::Ordering::Greater => Intersections::None,
        std::cmp::Ordering::Equal => Intersections::Points(vec![[mx, my]]),
        std::cmp::Ordering::Less => {
            // offset along the perpendicular of p1->p2 scaled by
            // tau = sqrt((4 - d^2) / (4 d^2)); |perp| = d gives height
            // sqrt(1 - d^2/4) as required
            let tau_sq = (four - d_sq.clone()) * (Radical::from_int(4) * d_sq).inverse().unwrap();
            let tau = match tau_sq.sqrt() {
                Some(t) => t,
                None => return Intersections::Inexact,
            };
            let ux = p2[0].clone() - p1[0].clone();
            let uy = p2[1].clone() - p1[1].clone();
            let ox = -uy * tau.clone();
            let oy = ux * tau;
            Intersections::Points(vec![
                [mx.clone() + ox.clone(), my.clone() + oy.clone()],
                [mx - ox, my - oy],
            ])
        }
    }
}

enum RotationSolutions {
    Some(Vec<(Radical, Radical)>),
    None,
    Continuum,
    Inexact,
}

/// Solve `alpha cos + beta sin = gamma` on the unit circle.
fn rotation_solutions(alpha: &Radical, beta: &Radical, gamma: &Radical) -> RotationSolutions {
    let n_sq = alpha.clone() * alpha.clone() + beta.clone() * beta.clone();
    if n_sq.is_zero() {
        return if gamma.is_zero() {
            RotationSolutions::Continuum
        } else {
            RotationSolutions::None
        };
    }
    let disc = n_sq.clone() - gamma.clone() * gamma.clone();
    match disc.sign() {
        -1 => RotationSolutions::None,
        0 => {
            let inv = n_sq.inverse().unwrap();
            RotationSolutions::Some(vec![(
                alpha.clone() * gamma.clone() * inv.clone(),
                beta.clone() * gamma.clone() * inv,
            )])
        }
        _ => {
            let root = match disc.sqrt() {
                Some(r) => r,
                None => return RotationSolutions::Inexact,
            };
            let inv = n_sq.inverse().unwrap();
            let c1 = (alpha.clone() * gamma.clone() - beta.clone() * root.clone()) * inv.clone();
            let s1 = (beta.clone() * gamma.clone() + alpha.clone() * root.clone()) * inv.clone();
            let c2 = (alpha.clone() * gamma.clone() + beta.clone() * root.clone()) * inv.clone();
            let s2 = (beta.clone() * gamma.clone() - alpha.clone() * root) * inv;
            RotationSolutions::Some(vec![(c1, s1), (c2, s2)])
        }
    }
}

/// Image-distance spectrum of `(x, y)` over all enumerated placements.
pub fn spectrum(c: &Configuration, x: &str, y: &str) -> Result<Spectrum, EnumError> {
    c.point(x)?;
    c.point(y)?;
    let e = match enumerate_config(c) {
        Ok(e) => e,
        Err(EnumError::Order(_)) | Err(EnumError::NoEdges) => {
            return Ok(Spectrum {
                values: Vec::new(),
                complete: false,
            })
        }
        Err(other) => return Err(other),
    };
    Ok(spectrum_of(&e, x, y))
}

pub fn spectrum_of(e: &Enumeration, x: &str, y: &str) -> Spectrum {
    let mut sqs: Vec<Radical> = Vec::new();
    let mut complete = e.complete;
    for s in &e.solutions {
        match s.sq_image_distance_exact(x, y) {
            Some(sq) => {
                if !sqs.iter().any(|v| v == &sq) {
                    sqs.push(sq);
                }
            }
            None => complete = false,
        }
    }
    sqs.sort_by(|a, b| a.cmp_exact(b));
    let values = sqs
        .iter()
        .map(|sq| CReal::from_radical(sq).sqrt())
        .collect();
    Spectrum { values, complete }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::config::Point;
    use crate::creal::Cmp;
    use crate::order::find_order;

    fn pt(label: &str, x: &str, y: &str) -> Point {
        Point::parse(label, &[x, y]).unwrap()
    }

    fn edges(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    pub(crate) fn rhombus() -> Configuration {
        Configuration::new(
            2,
            vec![
                pt("A", "1/2", "sqrt(3)/2"),
                pt("B", "0", "0"),
                pt("C", "1/2", "-(sqrt(3)/2)"),
                pt("D", "1", "0"),
            ],
            edges(&[("A", "B"), ("A", "D"), ("C", "B"), ("C", "D"), ("B", "D")]),
        )
        .unwrap()
    }

    #[test]
    fn triangle_has_one_solution() {
        let c = Configuration::new(
            2,
            vec![pt("A", "0", "0"), pt("B", "1", "0"), pt("C", "1/2", "sqrt(3)/2")],
            edges(&[("A", "B"), ("A", "C"), ("B", "C")]),
        )
        .unwrap();
        let e = enumerate_config(&c).unwrap();
        assert!(e.complete);
        assert_eq!(e.solutions.len(), 1);
        // apex in the upper half-plane
        let apex = e.solutions[0].exact_point("C").unwrap();
        assert_eq!(apex[1].sign(), 1);
    }

    #[test]
    fn rhombus_has_two_solutions() {
        let c = rhombus();
        let order = find_order(&c, ("B", "D")).unwrap();
        let e = enumerate(&c, &order).unwrap();
        assert!(e.complete);
        assert_eq!(e.solutions.len(), 2);
        let s = spectrum_of(&e, "A", "C");
        assert!(s.complete);
        assert_eq!(s.values.len(), 2);
        assert_eq!(s.values[0].compare(&CReal::zero()), Cmp::Equal);
        assert_eq!(
            s.values[1].compare(&CReal::parse("sqrt(3)").unwrap()),
            Cmp::Equal
        );
    }

    #[test]
    fn declared_edge_spectrum_is_one() {
        let c = rhombus();
        let s = spectrum(&c, "B", "D").unwrap();
        assert!(s.complete);
        assert_eq!(s.values.len(), 1);
        assert_eq!(s.values[0].compare(&CReal::one()), Cmp::Equal);
    }

    #[test]
    fn chain_is_incomplete() {
        let c = Configuration::new(
            2,
            vec![pt("X", "0", "0"), pt("Z", "3/4", "sqrt(7)/4"), pt("Y", "3/2", "0")],
            edges(&[("X", "Z"), ("Z", "Y")]),
        )
        .unwrap();
        let s = spectrum(&c, "X", "Y").unwrap();
        assert!(!s.complete);
    }

    #[test]
    fn isometry_invariance_of_solution_set() {
        // the same rhombus graph, rotated by the rational rotation (3/5, 4/5)
        // and translated: identical canonical solution set
        let c1 = rhombus();
        let e1 = enumerate_config(&c1).unwrap();
        let rot = |x: &str, y: &str| -> (String, String) {
            let xr = CReal::parse(x).unwrap();
            let yr = CReal::parse(y).unwrap();
            let c = CReal::parse("3/5").unwrap();
            let s = CReal::parse("4/5").unwrap();
            let nx = c.mul(&xr).sub(&s.mul(&yr)).add(&CReal::from_int(7));
            let ny = s.mul(&xr).add(&c.mul(&yr)).sub(&CReal::from_int(3));
            (nx.to_string(), ny.to_string())
        };
        let mk = |label: &str, x: &str, y: &str| {
            let (nx, ny) = rot(x, y);
            Point::parse(label, &[&nx, &ny]).unwrap()
        };
        let c2 = Configuration::new(
            2,
            vec![
                mk("A", "1/2", "sqrt(3)/2"),
                mk("B", "0", "0"),
                mk("C", "1/2", "-(sqrt(3)/2)"),
                mk("D", "1", "0"),
            ],
            edges(&[("A", "B"), ("A", "D"), ("C", "B"), ("C", "D"), ("B", "D")]),
        )
        .unwrap();
        let e2 = enumerate_config(&c2).unwrap();
        assert_eq!(e1.solutions.len(), e2.solutions.len());
        for (s1, s2) in e1.solutions.iter().zip(&e2.solutions) {
            for label in ["A", "B", "C", "D"] {
                assert_eq!(
                    s1.exact_point(label).unwrap(),
                    s2.exact_point(label).unwrap()
                );
            }
        }
    }
}
