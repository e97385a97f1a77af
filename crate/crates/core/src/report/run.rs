// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Batch classification of a dataset and per-model aggregates.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ingest::{Dataset, Normalization};
use super::ReportError;
use crate::classifier::{classify, Classification, MinorBudget};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    pub classification: Classification,
    pub log: Vec<Normalization>,
    pub wall_ms: f64,
}

/// Flat per-topology record used for CSV export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub planar: bool,
    pub outerplanar: bool,
    pub touring: String,
    pub destination: String,
    pub source_destination: String,
    pub sometimes_fraction: f64,
    pub witness: String,
    pub notes: String,
    /// Left empty when timings are excluded.
    pub wall_ms: Option<f64>,
}

impl ReportRow {
    pub fn csv(&self, timings: bool) -> CsvRow {
        let c = &self.classification;
        let witness = [("touring", &c.touring), ("destination", &c.destination), ("source-destination", &c.source_destination)]
            .iter()
            .map(|(model, v)| format!("{model}: {}", v.evidence.summary()))
            .collect::<Vec<_>>()
            .join("; ");
        CsvRow {
            name: self.name.clone(),
            n: c.n,
            m: c.m,
            planar: c.planar,
            outerplanar: c.outerplanar,
            touring: c.touring.feasibility.label().into(),
            destination: c.destination.feasibility.label().into(),
            source_destination: c.source_destination.feasibility.label().into(),
            sometimes_fraction: c.sometimes_fraction,
            witness,
            notes: self.log.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("; "),
            wall_ms: timings.then_some(self.wall_ms),
        }
    }
}

/// Verdict counts and shares (in percent) for one routing model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelAggregate {
    pub possible: usize,
    pub impossible: usize,
    pub sometimes: usize,
    pub unknown: usize,
    pub possible_pct: f64,
    pub impossible_pct: f64,
    pub sometimes_pct: f64,
    pub unknown_pct: f64,
}

impl ModelAggregate {
    fn from_labels<'a>(labels: impl Iterator<Item = &'a str>) -> ModelAggregate {
        let mut a = ModelAggregate::default();
        for l in labels {
            match l {
                "Possible" => a.possible += 1,
                "Impossible" => a.impossible += 1,
                "Sometimes" => a.sometimes += 1,
                _ => a.unknown += 1,
            }
        }
        let total = (a.possible + a.impossible + a.sometimes + a.unknown).max(1) as f64;
        a.possible_pct = 100.0 * a.possible as f64 / total;
        a.impossible_pct = 100.0 * a.impossible as f64 / total;
        a.sometimes_pct = 100.0 * a.sometimes as f64 / total;
        a.unknown_pct = 100.0 * a.unknown as f64 / total;
        a
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.possible, self.impossible, self.sometimes, self.unknown]
    }

    pub fn shares(&self) -> [f64; 4] {
        [self.possible_pct, self.impossible_pct, self.sometimes_pct, self.unknown_pct]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub total: usize,
    pub touring: ModelAggregate,
    pub destination: ModelAggregate,
    pub source_destination: ModelAggregate,
    pub planar_pct: f64,
    pub outerplanar_pct: f64,
    pub planar_not_outerplanar_pct: f64,
    /// Mean share of good destinations over entries marked Sometimes in
    /// either destination model.
    pub mean_sometimes_fraction: Option<f64>,
}

impl Aggregates {
    pub fn from_rows(rows: &[CsvRow]) -> Aggregates {
        let total = rows.len();
        let pct = |k: usize| if total == 0 { 0.0 } else { 100.0 * k as f64 / total as f64 };
        let some: Vec<f64> = rows
            .iter()
            .filter(|r| r.destination == "Sometimes" || r.source_destination == "Sometimes")
            .map(|r| r.sometimes_fraction)
            .collect();
        Aggregates {
            total,
            touring: ModelAggregate::from_labels(rows.iter().map(|r| r.touring.as_str())),
            destination: ModelAggregate::from_labels(rows.iter().map(|r| r.destination.as_str())),
            source_destination: ModelAggregate::from_labels(rows.iter().map(|r| r.source_destination.as_str())),
            planar_pct: pct(rows.iter().filter(|r| r.planar).count()),
            outerplanar_pct: pct(rows.iter().filter(|r| r.outerplanar).count()),
            planar_not_outerplanar_pct: pct(rows.iter().filter(|r| r.planar && !r.outerplanar).count()),
            mean_sometimes_fraction: (!some.is_empty()).then(|| some.iter().sum::<f64>() / some.len() as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub budget: MinorBudget,
    /// SHA-256 over entry names and edge lists.
    pub dataset_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub aggregates: Aggregates,
    pub metadata: Metadata,
}

impl Report {
    pub fn csv_rows(&self, timings: bool) -> Vec<CsvRow> {
        self.rows.iter().map(|r| r.csv(timings)).collect()
    }
}

fn dataset_hash(d: &Dataset) -> String {
    let mut entries: Vec<_> = d.entries.iter().collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let mut h = Sha256::new();
    for e in entries {
        h.update(e.name.as_bytes());
        h.update(b"\n");
        h.update(e.graph.to_edge_list().as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Classifies every entry and aggregates the verdicts. Rows are ordered by
/// name; the result does not depend on `exec` apart from `wall_ms`.
pub fn run_report(d: &Dataset, budget: &MinorBudget, exec: Execution) -> Result<Report, ReportError> {
    if d.is_empty() {
        return Err(ReportError::EmptyDataset);
    }
    let mut rows = exec.map(&d.entries, |e| {
        let start = Instant::now();
        let classification = classify(&e.graph, budget);
        ReportRow {
            name: e.name.clone(),
            classification,
            log: e.log.clone(),
            wall_ms: start.elapsed().as_secs_f64() * 1000.0,
        }
    });
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let flat: Vec<CsvRow> = rows.iter().map(|r| r.csv(false)).collect();
    Ok(Report {
        aggregates: Aggregates::from_rows(&flat),
        rows,
        metadata: Metadata {
            tool: "frrlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            budget: *budget,
            dataset_hash: dataset_hash(d),
        },
    })
}
