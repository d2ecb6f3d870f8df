//! Shared JSON report schema for the CLI. Every report embeds a run
//! manifest (command, input digests, parameters, tool version) so that
//! identical manifests imply byte-identical reports; wall-clock time is
//! deliberately not recorded.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::claims::Outcome;
use crate::combine::KitRecord;
use crate::config::ValidationReport;
use crate::congruence::Verdict3;
use crate::creal::CReal;
use crate::enumerate::BranchStats;
use crate::frame::{PlacementSolution, Provenance};
use crate::rat::decimal_string;

pub const DECIMAL_DIGITS: u32 = 30;

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// input path -> sha256 hex digest of the file bytes
    pub inputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            parameters: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn record_input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.insert(path.to_string(), sha256_hex(bytes));
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One certified value: exact expression string plus decimal renderings.
#[derive(Clone, Debug, Serialize)]
pub struct ValueOut {
    pub expr: String,
    pub decimal: String,
    pub interval: Option<[String; 2]>,
}

impl ValueOut {
    pub fn of(v: &CReal) -> ValueOut {
        let interval = v.interval().map(|(lo, hi)| {
            [
                decimal_string(&lo, DECIMAL_DIGITS),
                decimal_string(&hi, DECIMAL_DIGITS),
            ]
        });
        ValueOut {
            expr: v.expr().to_string(),
            decimal: v.decimal(DECIMAL_DIGITS),
            interval,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionOut {
    pub points: BTreeMap<String, Vec<ValueOut>>,
    pub provenance: String,
}

impl SolutionOut {
    pub fn of(s: &PlacementSolution) -> SolutionOut {
        let points = s
            .assignment
            .iter()
            .map(|(label, coords)| (label.clone(), coords.iter().map(ValueOut::of).collect()))
            .collect();
        let provenance = match &s.provenance {
            Provenance::Exact { branch_path } => format!("exact branch {branch_path:?}"),
            Provenance::Numeric { residual } => format!("numeric residual {residual:.3e}"),
        };
        SolutionOut { points, provenance }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceRow {
    pub n: u32,
    pub closed_form: Verdict3,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub false_by_search: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_r: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub manifest: RunManifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<ValueOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<BranchStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolutionOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kits: Option<Vec<KitRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<Vec<CongruenceRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configuration: Option<serde_json::Value>,
}

impl Report {
    pub fn new(manifest: RunManifest) -> Report {
        Report {
            manifest,
            claim: None,
            verdict: None,
            reason: None,
            validation: None,
            spectrum: None,
            spectrum_complete: None,
            solution_count: None,
            stats: None,
            solutions: None,
            residual: None,
            deviation: None,
            kits: None,
            congruence: None,
            configuration: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_rendering() {
        let v = CReal::parse("sqrt(3)").unwrap();
        let out = ValueOut::of(&v);
        assert_eq!(out.expr, "sqrt(3)");
        assert!(out.decimal.starts_with("1.7320508075688772"));
        let [lo, hi] = out.interval.unwrap();
        assert!(lo <= out.decimal && out.decimal <= hi);
    }

    #[test]
    fn identical_manifests_yield_identical_reports() {
        let build = || {
            let mut m = RunManifest::new("spectrum");
            m.record_input("rhombus.json", b"{}");
            m.set("precision", 256u32);
            let mut r = Report::new(m);
            r.spectrum = Some(vec![ValueOut::of(&CReal::parse("sqrt(3)").unwrap())]);
            r.spectrum_complete = Some(true);
            r.to_json()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
