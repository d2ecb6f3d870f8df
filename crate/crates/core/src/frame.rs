//! Placement solutions (images of unit-distance-preserving maps) and the
//! canonical frame that quotients out plane isometries.

use std::collections::BTreeMap;

use crate::config::{Configuration, GeometryError};
use crate::creal::CReal;
use crate::radical::Radical;

/// Exact planar position.
pub type RPoint = [Radical; 2];

#[derive(Clone, Debug)]
pub enum Provenance {
    /// Derived by exact branch choices; unit residuals are exactly zero.
    Exact { branch_path: Vec<u8> },
    /// Found numerically; residual is the final unit-constraint norm.
    Numeric { residual: f64 },
}

#[derive(Clone, Debug)]
pub struct PlacementSolution {
    pub assignment: BTreeMap<String, Vec<CReal>>,
    pub provenance: Provenance,
}

impl PlacementSolution {
    pub fn from_exact(
        points: impl IntoIterator<Item = (String, RPoint)>,
        branch_path: Vec<u8>,
    ) -> PlacementSolution {
        let assignment = points
            .into_iter()
            .map(|(label, p)| {
                (
                    label,
                    vec![CReal::from_radical(&p[0]), CReal::from_radical(&p[1])],
                )
            })
            .collect();
        PlacementSolution {
            assignment,
            provenance: Provenance::Exact { branch_path },
        }
    }

    pub fn coords(&self, label: &str) -> Result<&Vec<CReal>, GeometryError> {
        self.assignment
            .get(label)
            .ok_or_else(|| GeometryError::UnknownLabel(label.to_string()))
    }

    /// Exact planar coordinates, when every component has a normal form.
    pub fn exact_point(&self, label: &str) -> Option<RPoint> {
        let c = self.assignment.get(label)?;
        if c.len() != 2 {
            return None;
        }
        Some([c[0].exact()?.clone(), c[1].exact()?.clone()])
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.provenance, Provenance::Exact { .. })
    }

    /// Image distance between two labels.
    pub fn image_distance(&self, a: &str, b: &str) -> Result<CReal, GeometryError> {
        let pa = self.coords(a)?;
        let pb = self.coords(b)?;
        let mut acc: Option<CReal> = None;
        for (x, y) in pa.iter().zip(pb) {
            let d = x.sub(y);
            let sq = d.mul(&d);
            acc = Some(match acc {
                None => sq,
                Some(prev) => prev.add(&sq),
            });
        }
        Ok(acc.expect("points are at least 1-dimensional").sqrt())
    }

    /// Exact squared image distance, when coordinates are exact.
    pub fn sq_image_distance_exact(&self, a: &str, b: &str) -> Option<Radical> {
        let pa = self.exact_point(a)?;
        let pb = self.exact_point(b)?;
        Some(sq_dist(&pa, &pb))
    }
}

pub fn sq_dist(a: &RPoint, b: &RPoint) -> Radical {
    let dx = a[0].clone() - b[0].clone();
    let dy = a[1].clone() - b[1].clone();
    dx.clone() * dx + dy.clone() * dy
}

/// Place `base.0` at the origin, `base.1` on the positive first axis, and
/// reflect so the first label in configuration order with a nonzero second
/// coordinate lands in the upper half-plane. Exact coordinates are required;
/// a rotation whose scale does not normalize in the tower is reported as
/// undecidable framing.
pub fn canonical_frame(
    solution: &PlacementSolution,
    base: (&str, &str),
    config: &Configuration,
) -> Result<PlacementSolution, GeometryError> {
    let mut pts: Vec<(String, RPoint)> = Vec::new();
    for p in &config.points {
        let rp = solution
            .exact_point(&p.label)
            .ok_or(GeometryError::FrameUndecided)?;
        pts.push((p.label.clone(), rp));
    }
    let framed = canonical_frame_exact(&pts, base)?;
    let branch_path = match &solution.provenance {
        Provenance::Exact { branch_path } => branch_path.clone(),
        Provenance::Numeric { .. } => Vec::new(),
    };
    Ok(PlacementSolution::from_exact(framed, branch_path))
}

/// Exact canonical framing over labeled radical points. Order of `pts`
/// is the configuration order used for the reflection tie-break.
pub fn canonical_frame_exact(
    pts: &[(String, RPoint)],
    base: (&str, &str),
) -> Result<Vec<(String, RPoint)>, GeometryError> {
    let find = |label: &str| -> Result<RPoint, GeometryError> {
        pts.iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| GeometryError::UnknownLabel(label.to_string()))
    };
    let origin = find(base.0)?;
    let axis = find(base.1)?;
    let bx = axis[0].clone() - origin[0].clone();
    let by = axis[1].clone() - origin[1].clone();
    let r_sq = bx.clone() * bx.clone() + by.clone() * by.clone();
    if r_sq.is_zero() {
        return Err(GeometryError::CoincidentBase);
    }
    let r = r_sq.sqrt().ok_or(GeometryError::FrameUndecided)?;
    let cos = bx / r.clone();
    let sin = by / r;
    let mut framed: Vec<(String, RPoint)> = pts
        .iter()
        .map(|(label, p)| {
            let x = p[0].clone() - origin[0].clone();
            let y = p[1].clone() - origin[1].clone();
            let nx = cos.clone() * x.clone() + sin.clone() * y.clone();
            let ny = cos.clone() * y - sin.clone() * x;
            (label.clone(), [nx, ny])
        })
        .collect();
    // reflection tie-break
    for (_, p) in framed.iter() {
        match p[1].sign() {
            0 => continue,
            1 => break,
            _ => {
                for (_, q) in framed.iter_mut() {
                    q[1] = -q[1].clone();
                }
                break;
            }
        }
    }
    Ok(framed)
}

/// Apply an exact isometry (rotation by a rational point on the unit circle,
/// translation, optional reflection) to every point. Test scaffolding for
/// the frame-absorption property.
pub fn apply_isometry(
    pts: &[(String, RPoint)],
    cos: &Radical,
    sin: &Radical,
    tx: &Radical,
    ty: &Radical,
    reflect: bool,
) -> Vec<(String, RPoint)> {
    pts.iter()
        .map(|(label, p)| {
            let mut x = p[0].clone();
            let mut y = p[1].clone();
            if reflect {
                y = -y;
            }
            let nx = cos.clone() * x.clone() - sin.clone() * y.clone() + tx.clone();
            let ny = sin.clone() * x + cos.clone() * y.clone() + ty.clone();
            x = nx;
            (label.clone(), [x, ny])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Point;
    use crate::rat::rat;
    use crate::radical::{sqrt_int, Radical};

    fn triangle_config() -> Configuration {
        Configuration::new(
            2,
            vec![
                Point::parse("A", &["0", "0"]).unwrap(),
                Point::parse("B", &["1", "0"]).unwrap(),
                Point::parse("C", &["1/2", "sqrt(3)/2"]).unwrap(),
            ],
            [
                ("A".into(), "B".into()),
                ("A".into(), "C".into()),
                ("B".into(), "C".into()),
            ],
        )
        .unwrap()
    }

    fn triangle_placement(flip: bool) -> PlacementSolution {
        let apex_y = sqrt_int(3) * rat(1, 2);
        let apex_y = if flip { -apex_y } else { apex_y };
        PlacementSolution::from_exact(
            [
                ("A".to_string(), [Radical::zero(), Radical::zero()]),
                ("B".to_string(), [Radical::one(), Radical::zero()]),
                (
                    "C".to_string(),
                    [Radical::from_rat(rat(1, 2)), apex_y],
                ),
            ],
            vec![],
        )
    }

    #[test]
    fn identity_on_canonical() {
        let c = triangle_config();
        let s = triangle_placement(false);
        let framed = canonical_frame(&s, ("A", "B"), &c).unwrap();
        for label in ["A", "B", "C"] {
            let orig = s.exact_point(label).unwrap();
            let got = framed.exact_point(label).unwrap();
            assert_eq!(orig, got);
        }
    }

    #[test]
    fn reflection_brings_apex_up() {
        let c = triangle_config();
        let s = triangle_placement(true);
        let framed = canonical_frame(&s, ("A", "B"), &c).unwrap();
        assert_eq!(framed.exact_point("C").unwrap()[1].sign(), 1);
    }

    #[test]
    fn absorbs_exact_isometries() {
        let s = triangle_placement(false);
        let pts: Vec<(String, RPoint)> = ["A", "B", "C"]
            .iter()
            .map(|l| (l.to_string(), s.exact_point(l).unwrap()))
            .collect();
        let reference = canonical_frame_exact(&pts, ("A", "B")).unwrap();
        // rational rotation (3/5, 4/5), translation, reflection
        let cos = Radical::from_rat(rat(3, 5));
        let sin = Radical::from_rat(rat(4, 5));
        let moved = apply_isometry(
            &pts,
            &cos,
            &sin,
            &Radical::from_int(7),
            &Radical::from_rat(rat(-2, 3)),
            true,
        );
        let reframed = canonical_frame_exact(&moved, ("A", "B")).unwrap();
        for ((l1, p1), (l2, p2)) in reference.iter().zip(&reframed) {
            assert_eq!(l1, l2);
            assert_eq!(p1, p2);
        }
    }

    #[test]
    fn coincident_base_rejected() {
        let c = triangle_config();
        let s = PlacementSolution::from_exact(
            [
                ("A".to_string(), [Radical::zero(), Radical::zero()]),
                ("B".to_string(), [Radical::zero(), Radical::zero()]),
                ("C".to_string(), [Radical::one(), Radical::zero()]),
            ],
            vec![],
        );
        assert!(matches!(
            canonical_frame(&s, ("A", "B"), &c),
            Err(GeometryError::CoincidentBase)
        ));
    }
}
