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

//! CSV, JSON, SVG and DOT renderings of reports and gadgets.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::run::{Aggregates, CsvRow, Report};
use super::ReportError;
use crate::adversary::{gadget, Gadget, GadgetName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
    SvgBars,
    DotGadgets,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            "svg" | "svg-bars" => Ok(ExportFormat::SvgBars),
            "dot" | "dot-gadgets" => Ok(ExportFormat::DotGadgets),
            other => Err(format!("unknown format {other:?} (csv, json, svg-bars, dot-gadgets)")),
        }
    }
}

fn csv_err(e: impl std::fmt::Display) -> ReportError {
    ReportError::Csv(e.to_string())
}

pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| ReportError::Io(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>, ReportError> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(csv_err)).collect()
}

/// Aggregates as `model,verdict,count,percent` lines plus summary shares.
fn write_aggregates_csv<W: Write>(a: &Aggregates, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["model", "verdict", "count", "percent"]).map_err(csv_err)?;
    let models = [("touring", &a.touring), ("destination", &a.destination), ("source-destination", &a.source_destination)];
    for (model, m) in models {
        for ((label, count), pct) in VERDICTS.iter().zip(m.counts()).zip(m.shares()) {
            w.write_record([model, label, &count.to_string(), &format!("{pct:.2}")]).map_err(csv_err)?;
        }
    }
    let total = a.total.to_string();
    w.write_record(["all", "total", &total, "100.00"]).map_err(csv_err)?;
    w.write_record(["all", "planar-not-outerplanar", "", &format!("{:.2}", a.planar_not_outerplanar_pct)])
        .map_err(csv_err)?;
    let mean = a.mean_sometimes_fraction.map_or(String::new(), |f| format!("{:.2}", 100.0 * f));
    w.write_record(["all", "mean-sometimes-fraction", "", &mean]).map_err(csv_err)?;
    w.flush().map_err(|e| ReportError::Io(e.to_string()))
}

const VERDICTS: [&str; 4] = ["Possible", "Impossible", "Sometimes", "Unknown"];
const COLORS: [&str; 4] = ["#4daf4a", "#e41a1c", "#87cefa", "#ccaa00"];

/// Stacked horizontal bars of verdict shares, one bar per routing model.
pub fn svg_bars(a: &Aggregates) -> String {
    let (left, width, bar, gap) = (150.0, 500.0, 28.0, 14.0);
    let models = [("touring", &a.touring), ("destination", &a.destination), ("source-destination", &a.source_destination)];
    let height = 40.0 + models.len() as f64 * (bar + gap) + 30.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{height}\" font-family=\"sans-serif\" font-size=\"12\">",
        left + width + 20.0
    );
    let _ = writeln!(s, "  <text x=\"{left}\" y=\"20\">verdict shares over {} topologies</text>", a.total);
    for (i, (model, m)) in models.iter().enumerate() {
        let y = 35.0 + i as f64 * (bar + gap);
        let _ = writeln!(s, "  <text x=\"10\" y=\"{:.1}\">{model}</text>", y + bar * 0.65);
        let mut x = left;
        for ((label, pct), color) in VERDICTS.iter().zip(m.shares()).zip(COLORS) {
            let w = width * pct / 100.0;
            if w > 0.0 {
                let _ = writeln!(
                    s,
                    "  <rect x=\"{x:.2}\" y=\"{y:.1}\" width=\"{w:.2}\" height=\"{bar}\" fill=\"{color}\"><title>{model} {label} {pct:.1}%</title></rect>"
                );
            }
            x += w;
        }
    }
    let ly = 35.0 + models.len() as f64 * (bar + gap) + 10.0;
    for (i, (label, color)) in VERDICTS.iter().zip(COLORS).enumerate() {
        let x = left + i as f64 * 120.0;
        let _ = writeln!(s, "  <rect x=\"{x}\" y=\"{ly}\" width=\"12\" height=\"12\" fill=\"{color}\"/>");
        let _ = writeln!(s, "  <text x=\"{}\" y=\"{}\">{label}</text>", x + 16.0, ly + 11.0);
    }
    s.push_str("</svg>\n");
    s
}

/// DOT rendering of a gadget under its first failure set: failed links are
/// dashed, nodes carry their role names.
pub fn dot_gadget(g: &Gadget) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph \"{}\" {{", g.name);
    for v in g.graph.nodes() {
        let roles: Vec<&str> = g.roles.iter().filter(|(_, &x)| x == v).map(|(k, _)| k.as_str()).collect();
        let label = if roles.is_empty() { v.to_string() } else { format!("{v} ({})", roles.join(",")) };
        let _ = writeln!(s, "  {v} [label=\"{label}\"];");
    }
    let f = g.primary_failures();
    for (e, &(u, v)) in g.graph.edges().iter().enumerate() {
        if f.is_some_and(|f| f.contains(e)) {
            let _ = writeln!(s, "  {u} -- {v} [style=dashed];");
        } else {
            let _ = writeln!(s, "  {u} -- {v};");
        }
    }
    s.push_str("}\n");
    s
}

fn write_file(path: &Path, body: &[u8]) -> Result<PathBuf, ReportError> {
    std::fs::write(path, body).map_err(|e| ReportError::Io(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

/// Writes `report` into the directory `out` and returns the files written.
/// CSV output omits wall times unless `timings` is set.
pub fn write_report(report: &Report, format: ExportFormat, out: &Path, timings: bool) -> Result<Vec<PathBuf>, ReportError> {
    std::fs::create_dir_all(out).map_err(|e| ReportError::Io(format!("{}: {e}", out.display())))?;
    match format {
        ExportFormat::Csv => {
            let mut rows = Vec::new();
            write_csv(&report.csv_rows(timings), &mut rows)?;
            let mut agg = Vec::new();
            write_aggregates_csv(&report.aggregates, &mut agg)?;
            Ok(vec![
                write_file(&out.join("classification.csv"), &rows)?,
                write_file(&out.join("aggregates.csv"), &agg)?,
            ])
        }
        ExportFormat::Json => {
            let body = serde_json::to_vec_pretty(report).map_err(|e| ReportError::Io(e.to_string()))?;
            Ok(vec![write_file(&out.join("report.json"), &body)?])
        }
        ExportFormat::SvgBars => Ok(vec![write_file(&out.join("verdicts.svg"), svg_bars(&report.aggregates).as_bytes())?]),
        ExportFormat::DotGadgets => GadgetName::FIXED
            .iter()
            .map(|&name| {
                let g = gadget(name)?;
                write_file(&out.join(format!("{}.dot", g.name)), dot_gadget(&g).as_bytes())
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{netrail, MinorBudget};
    use crate::graph::Graph;
    use crate::par::Execution;
    use crate::report::{run_report, Dataset};

    fn report() -> Report {
        let d = Dataset::from_graphs([
            ("tree".to_string(), Graph::path(4).unwrap()),
            ("k7".to_string(), Graph::complete(7).unwrap()),
            ("netrail".to_string(), netrail()),
        ]);
        run_report(&d, &MinorBudget::default(), Execution::Sequential).unwrap()
    }

    #[test]
    fn csv_round_trip_keeps_aggregates() {
        let r = report();
        let mut buf = Vec::new();
        write_csv(&r.csv_rows(true), &mut buf).unwrap();
        let rows = read_csv(buf.as_slice()).unwrap();
        assert_eq!(Aggregates::from_rows(&rows), r.aggregates);
    }

    #[test]
    fn svg_has_three_full_bars() {
        let svg = svg_bars(&report().aggregates);
        assert_eq!(svg.matches("<rect").count() - 4, svg.matches("<title>").count());
        for model in ["touring", "destination", "source-destination"] {
            let total: f64 = svg
                .lines()
                .filter(|l| l.contains(&format!("<title>{model} ")))
                .map(|l| l.split("width=\"").nth(1).unwrap().split('"').next().unwrap().parse::<f64>().unwrap())
                .sum();
            assert!((total - 500.0).abs() < 0.05, "{model}: {total}");
        }
    }

    #[test]
    fn k7_dot_has_seven_solid_links() {
        let dot = dot_gadget(&gadget(GadgetName::K7SourceDest).unwrap());
        assert_eq!(dot.lines().filter(|l| l.contains(" -- ") && !l.contains("dashed")).count(), 7);
        assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 7);
    }
}
