//! Trilateration orders: placement schedules in which every point after the
//! base edge is pinned by two previously placed unit-neighbors.

use thiserror::Error;

use crate::config::Configuration;

#[derive(Debug, Error)]
pub enum OrderError {
    #[error("base pair {0:?}-{1:?} is not a declared unit edge")]
    BadBase(String, String),
    #[error("no trilateration order: {0:?} never acquires two placed unit-neighbors")]
    NoTrilaterationOrder(Vec<String>),
    #[error(transparent)]
    Geometry(#[from] crate::config::GeometryError),
}

#[derive(Clone, Debug)]
pub struct TrilaterationOrder {
    pub base: (String, String),
    pub sequence: Vec<String>,
    /// For each sequenced label, the two placed unit-neighbors that pin it.
    pub supports: Vec<(String, String)>,
}

/// Greedy construction: repeatedly append any unplaced point with at least
/// two placed unit-neighbors, ties broken by configuration point order.
pub fn find_order(
    c: &Configuration,
    base: (&str, &str),
) -> Result<TrilaterationOrder, OrderError> {
    if !c.has_edge(base.0, base.1) {
        return Err(OrderError::BadBase(base.0.to_string(), base.1.to_string()));
    }
    let n = c.points.len();
    let adj = c.adjacency();
    let bi = c.point_index(base.0).unwrap();
    let bj = c.point_index(base.1).unwrap();
    let mut placed = vec![false; n];
    placed[bi] = true;
    placed[bj] = true;
    let mut sequence = Vec::new();
    let mut supports = Vec::new();
    loop {
        let next = (0..n).find(|&i| {
            !placed[i] && adj[i].iter().filter(|&&j| placed[j]).count() >= 2
        });
        match next {
            Some(i) => {
                let mut anchors = adj[i].iter().filter(|&&j| placed[j]);
                let s1 = *anchors.next().unwrap();
                let s2 = *anchors.next().unwrap();
                supports.push((
                    c.points[s1].label.clone(),
                    c.points[s2].label.clone(),
                ));
                sequence.push(c.points[i].label.clone());
                placed[i] = true;
            }
            None => break,
        }
    }
    if placed.iter().all(|&p| p) {
        Ok(TrilaterationOrder {
            base: (base.0.to_string(), base.1.to_string()),
            sequence,
            supports,
        })
    } else {
        let stuck = (0..n)
            .filter(|&i| !placed[i])
            .map(|i| c.points[i].label.clone())
            .collect();
        Err(OrderError::NoTrilaterationOrder(stuck))
    }
}
