//! Labeled point configurations with declared unit edges and a certified
//! classification of every point pair, plus the JSON file format.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::creal::{CReal, Cmp};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("edge endpoints must be distinct: {0:?}")]
    SelfEdge(String),
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("coordinate expression: {0}")]
    BadCoordinate(#[from] crate::expr::ParseError),
    #[error("configuration failed validation: {0}")]
    Invalid(String),
    #[error("cannot frame: base points have coincident images")]
    CoincidentBase,
    #[error("cannot frame: orientation test undecided")]
    FrameUndecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    Unit,
    NonUnit,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct Point {
    pub label: String,
    pub coords: Vec<CReal>,
}

impl Point {
    pub fn new(label: impl Into<String>, coords: Vec<CReal>) -> Point {
        Point {
            label: label.into(),
            coords,
        }
    }

    pub fn parse(label: &str, coords: &[&str]) -> Result<Point, GeometryError> {
        let coords = coords
            .iter()
            .map(|s| CReal::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Point::new(label, coords))
    }
}

/// Unordered label pair in canonical (sorted) order.
pub fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Configuration {
    pub dimension: usize,
    pub points: Vec<Point>,
    pub unit_edges: BTreeSet<(String, String)>,
    pub pair_table: BTreeMap<(String, String), PairClass>,
}

impl Configuration {
    pub fn new(
        dimension: usize,
        points: Vec<Point>,
        unit_edges: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Configuration, GeometryError> {
        if dimension < 2 {
            return Err(GeometryError::BadDimension(dimension));
        }
        let mut labels = BTreeSet::new();
        for p in &points {
            if p.coords.len() != dimension {
                return Err(GeometryError::DimensionMismatch(p.coords.len(), dimension));
            }
            if !labels.insert(p.label.clone()) {
                return Err(GeometryError::DuplicateLabel(p.label.clone()));
            }
        }
        let mut edges = BTreeSet::new();
        for (a, b) in unit_edges {
            if a == b {
                return Err(GeometryError::SelfEdge(a));
            }
            for l in [&a, &b] {
                if !labels.contains(l.as_str()) {
                    return Err(GeometryError::UnknownLabel(l.clone()));
                }
            }
            edges.insert(pair_key(&a, &b));
        }
        Ok(Configuration {
            dimension,
            points,
            unit_edges: edges,
            pair_table: BTreeMap::new(),
        })
    }

    pub fn point(&self, label: &str) -> Result<&Point, GeometryError> {
        self.points
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| GeometryError::UnknownLabel(label.to_string()))
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|p| p.label.as_str())
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.unit_edges.contains(&pair_key(a, b))
    }

    /// All unordered pairs of distinct points, in point order.
    pub fn pairs(&self) -> Vec<(&Point, &Point)> {
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                out.push((&self.points[i], &self.points[j]));
            }
        }
        out
    }

    /// Unit-edge adjacency lists by point index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.points.len()];
        for (a, b) in &self.unit_edges {
            let (i, j) = (
                self.point_index(a).unwrap(),
                self.point_index(b).unwrap(),
            );
            adj[i].push(j);
            adj[j].push(i);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// Fill the pair table by comparing each squared distance against 1.
    /// Idempotent; `Undecided` is a value, not an error.
    pub fn classify_pairs(&self) -> Configuration {
        let mut out = self.clone();
        out.pair_table.clear();
        for (p, q) in self.pairs() {
            let class = match sq_distance(p, q).expect("pairs share dimension").compare(&CReal::one()) {
                Cmp::Equal => PairClass::Unit,
                Cmp::Less | Cmp::Greater => PairClass::NonUnit,
                Cmp::Undecided => PairClass::Undecided,
            };
            out.pair_table.insert(pair_key(&p.label, &q.label), class);
        }
        out
    }

    /// Classify and declare every certified-unit pair as an edge.
    pub fn with_declared_units(&self) -> Configuration {
        let mut out = self.classify_pairs();
        let units: Vec<_> = out
            .pair_table
            .iter()
            .filter(|(_, c)| **c == PairClass::Unit)
            .map(|(k, _)| k.clone())
            .collect();
        out.unit_edges.extend(units);
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let classified = if self.pair_table.is_empty() {
            self.classify_pairs()
        } else {
            self.clone()
        };
        let mut report = ValidationReport::default();
        for (key, class) in &classified.pair_table {
            let declared = classified.unit_edges.contains(key);
            match class {
                PairClass::Unit if !declared => report.undeclared_unit.push(key.clone()),
                PairClass::NonUnit if declared => report.declared_non_unit.push(key.clone()),
                PairClass::Undecided => {
                    report.undecided.push(key.clone());
                    if declared {
                        report.declared_non_unit.push(key.clone());
                    }
                }
                _ => {}
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn require_valid(&self) -> Result<(), GeometryError> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(GeometryError::Invalid(r.summary()))
        }
    }

    /// Override the precision budget of every coordinate.
    pub fn with_budget(&self, bits: u32) -> Configuration {
        let mut out = self.clone();
        for p in &mut out.points {
            for c in &mut p.coords {
                *c = c.clone().with_budget(bits);
            }
        }
        if !self.pair_table.is_empty() {
            out = out.classify_pairs();
        }
        out
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    /// pairs certified Unit but not declared as edges
    pub undeclared_unit: Vec<(String, String)>,
    /// declared edges not certified Unit
    pub declared_non_unit: Vec<(String, String)>,
    /// pairs whose classification exceeded the precision budget
    pub undecided: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.undeclared_unit.is_empty()
            && self.declared_non_unit.is_empty()
            && self.undecided.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "undeclared unit pairs: {:?}; declared non-unit edges: {:?}; undecided pairs: {:?}",
            self.undeclared_unit, self.declared_non_unit, self.undecided
        )
    }
}

/// Euclidean distance as a certified real; exact when both points are.
pub fn distance(p: &Point, q: &Point) -> Result<CReal, GeometryError> {
    Ok(sq_distance(p, q)?.sqrt())
}

pub fn sq_distance(p: &Point, q: &Point) -> Result<CReal, GeometryError> {
    if p.coords.len() != q.coords.len() {
        return Err(GeometryError::DimensionMismatch(
            p.coords.len(),
            q.coords.len(),
        ));
    }
    let mut acc: Option<CReal> = None;
    for (a, b) in p.coords.iter().zip(&q.coords) {
        let d = a.sub(b);
        let sq = d.mul(&d);
        acc = Some(match acc {
            None => sq,
            Some(prev) => prev.add(&sq),
        });
    }
    Ok(acc.unwrap_or_else(CReal::zero))
}

// ---- file format ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PointFile {
    label: String,
    coords: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    dimension: usize,
    points: Vec<PointFile>,
    unit_edges: Vec<(String, String)>,
}

impl Configuration {
    pub fn to_json(&self) -> String {
        let file = ConfigFile {
            dimension: self.dimension,
            points: self
                .points
                .iter()
                .map(|p| PointFile {
                    label: p.label.clone(),
                    coords: p.coords.iter().map(|c| c.to_string()).collect(),
                })
                .collect(),
            unit_edges: self.unit_edges.iter().cloned().collect(),
        };
        serde_json::to_string_pretty(&file).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Configuration, GeometryError> {
        let file: ConfigFile = serde_json::from_str(s)
            .map_err(|e| GeometryError::Invalid(format!("malformed configuration JSON: {e}")))?;
        let points = file
            .points
            .into_iter()
            .map(|p| {
                let coords = p
                    .coords
                    .iter()
                    .map(|c| CReal::parse(c))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Point::new(p.label, coords))
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;
        Configuration::new(file.dimension, points, file.unit_edges)
    }
}

/// Structural equality used by the round-trip contract: same dimension,
/// same points with identical construction expressions, same edges.
impl PartialEq for Configuration {
    fn eq(&self, other: &Configuration) -> bool {
        self.dimension == other.dimension
            && self.unit_edges == other.unit_edges
            && self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(p, q)| p.label == q.label && p.coords.len() == q.coords.len()
                    && p.coords.iter().zip(&q.coords).all(|(a, b)| a.same_expr(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(label: &str, x: &str, y: &str) -> Point {
        Point::parse(label, &[x, y]).unwrap()
    }

    fn unit_triangle() -> Configuration {
        Configuration::new(
            2,
            vec![
                pt("A", "0", "0"),
                pt("B", "1", "0"),
                pt("C", "1/2", "sqrt(3)/2"),
            ],
            [
                ("A".into(), "B".into()),
                ("A".into(), "C".into()),
                ("B".into(), "C".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn distance_values() {
        let p = pt("P", "0", "0");
        let q = pt("Q", "1", "0");
        assert_eq!(distance(&p, &q).unwrap().compare(&CReal::one()), Cmp::Equal);

        let a = pt("A", "1/2", "sqrt(3)/2");
        let c = pt("C", "1/2", "-(sqrt(3)/2)");
        let d = distance(&a, &c).unwrap();
        assert_eq!(d.compare(&CReal::parse("sqrt(3)").unwrap()), Cmp::Equal);

        let o = pt("O", "0", "0");
        let z = pt("Z", "3/4", "sqrt(7)/4");
        assert_eq!(distance(&o, &z).unwrap().compare(&CReal::one()), Cmp::Equal);
    }

    #[test]
    fn distance_symmetry_and_identity() {
        let p = pt("P", "1/3", "sqrt(5)");
        let q = pt("Q", "-2", "1/7");
        let d1 = distance(&p, &q).unwrap();
        let d2 = distance(&q, &p).unwrap();
        assert_eq!(d1.compare(&d2), Cmp::Equal);
        let dd = distance(&p, &p).unwrap();
        assert_eq!(dd.compare(&CReal::zero()), Cmp::Equal);
    }

    #[test]
    fn dimension_mismatch() {
        let p = Point::parse("P", &["0", "0"]).unwrap();
        let q = Point::parse("Q", &["0", "0", "0"]).unwrap();
        assert!(distance(&p, &q).is_err());
    }

    #[test]
    fn classify_triangle() {
        let c = unit_triangle().classify_pairs();
        assert!(c.pair_table.values().all(|&v| v == PairClass::Unit));
        // idempotent
        assert_eq!(c.classify_pairs().pair_table, c.pair_table);
    }

    #[test]
    fn classify_disguised_unit() {
        let c = Configuration::new(
            2,
            vec![pt("P", "0", "0"), pt("Q", "sqrt(1/4) + 1/2", "0")],
            [("P".into(), "Q".into())],
        )
        .unwrap()
        .classify_pairs();
        assert_eq!(
            c.pair_table[&pair_key("P", "Q")],
            PairClass::Unit
        );
    }

    #[test]
    fn validate_undeclared_unit() {
        let c = Configuration::new(
            2,
            vec![pt("P", "0", "0"), pt("Q", "1", "0"), pt("R", "2", "0")],
            [("P".into(), "Q".into())],
        )
        .unwrap();
        let report = c.validate();
        assert_eq!(report.undeclared_unit, vec![pair_key("Q", "R")]);
        assert!(!report.is_valid());
    }

    #[test]
    fn validate_undecided_adversarial() {
        // a pair at distance 1 + 2^-200 whose coordinates have no normal
        // form: with a 128-bit budget the pair stays Undecided
        let t = {
            let bump = crate::rat::Rat::new(
                1.into(),
                num_bigint::BigInt::from(2u8).pow(200),
            ) + crate::rat::rat_int(1);
            &bump * &bump
        };
        let x = CReal::parse("sqrt(sqrt(2)/2)").unwrap().with_budget(128);
        let y = CReal::from_rat(t)
            .sub(&CReal::parse("sqrt(2)/2").unwrap())
            .sqrt()
            .with_budget(128);
        assert!(x.exact().is_none() && y.exact().is_none());
        let q = Point::new("Q", vec![x, y]);
        let p = Point::new(
            "P",
            vec![
                CReal::zero().with_budget(128),
                CReal::zero().with_budget(128),
            ],
        );
        let c = Configuration::new(2, vec![p, q], []).unwrap();
        let report = c.validate();
        assert_eq!(report.undecided.len(), 1);
        assert!(!report.is_valid());
    }

    #[test]
    fn json_roundtrip() {
        let c = unit_triangle();
        let parsed = Configuration::from_json(&c.to_json()).unwrap();
        assert_eq!(parsed, c);
    }
}
