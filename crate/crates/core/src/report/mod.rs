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

//! Dataset ingestion, batch classification and report export.

pub mod export;
pub mod ingest;
pub mod run;

pub use export::{dot_gadget, read_csv, svg_bars, write_csv, write_report, ExportFormat};
pub use ingest::{ingest_file, parse_edge_list, parse_graphml, to_graphml, Dataset, Entry, Ingested, Normalization};
pub use run::{run_report, Aggregates, CsvRow, Metadata, ModelAggregate, Report, ReportRow};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o: {0}")]
    Io(String),
    #[error("malformed GraphML: {0}")]
    Xml(String),
    #[error("empty graph: {0}")]
    Empty(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
