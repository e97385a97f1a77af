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

//! Topology ingestion from GraphML and edge-list files with normalization.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::graph::{components, FailureSet, Graph, GraphError, NodeId};

/// One normalization step applied while reading a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// The file declared directed edges; directions were dropped.
    DirectionDropped,
    SelfLoopRemoved { node: String },
    ParallelMerged { u: String, v: String, copies: usize },
    /// Edge endpoints that were never declared as nodes were added.
    ImplicitNode { node: String },
    /// The graph has several components and is classified as a whole.
    Disconnected { components: usize },
    IsolatedKept { count: usize },
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Normalization::DirectionDropped => write!(f, "edge directions dropped"),
            Normalization::SelfLoopRemoved { node } => write!(f, "self-loop at {node} removed"),
            Normalization::ParallelMerged { u, v, copies } => write!(f, "{copies} parallel edges {u}-{v} merged"),
            Normalization::ImplicitNode { node } => write!(f, "undeclared node {node} added"),
            Normalization::Disconnected { components } => write!(f, "{components} components, classified as a whole"),
            Normalization::IsolatedKept { count } => write!(f, "{count} isolated nodes kept"),
        }
    }
}

/// A normalized topology and the steps taken to obtain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ingested {
    pub name: String,
    pub graph: Graph,
    /// Original node ids (GraphML `id` attributes), indexed by node.
    pub labels: Vec<String>,
    pub log: Vec<Normalization>,
}

/// Builds a simple undirected graph from labeled endpoints.
fn normalize(name: &str, nodes: Vec<String>, edges: Vec<(String, String)>, directed: bool) -> Result<Ingested, ReportError> {
    let mut log = Vec::new();
    if directed {
        log.push(Normalization::DirectionDropped);
    }
    let mut labels = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();
    for id in nodes {
        if !index.contains_key(&id) {
            index.insert(id.clone(), labels.len());
            labels.push(id);
        }
    }
    let mut pairs: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
    for (a, b) in edges {
        let mut id = |x: String, log: &mut Vec<Normalization>| {
            *index.entry(x.clone()).or_insert_with(|| {
                log.push(Normalization::ImplicitNode { node: x.clone() });
                labels.push(x);
                labels.len() - 1
            })
        };
        let (u, v) = (id(a, &mut log), id(b, &mut log));
        if u == v {
            log.push(Normalization::SelfLoopRemoved { node: labels[u].clone() });
            continue;
        }
        *pairs.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    for (&(u, v), &copies) in &pairs {
        if copies > 1 {
            log.push(Normalization::ParallelMerged { u: labels[u].clone(), v: labels[v].clone(), copies });
        }
    }
    if labels.is_empty() {
        return Err(ReportError::Empty(name.to_string()));
    }
    let keys: Vec<_> = pairs.into_keys().collect();
    let graph = Graph::new(labels.len(), &keys)?.with_name(name);
    let isolated = graph.nodes().filter(|&v| graph.degree(v) == 0).count();
    if isolated > 0 {
        log.push(Normalization::IsolatedKept { count: isolated });
    }
    let comps = components(&graph, &FailureSet::none_for(&graph)).len();
    if comps > 1 {
        log.push(Normalization::Disconnected { components: comps });
    }
    Ok(Ingested { name: name.to_string(), graph, labels, log })
}

/// Parses GraphML text. Hyperedges and nested graphs are not supported.
pub fn parse_graphml(name: &str, text: &str) -> Result<Ingested, ReportError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| ReportError::Xml(format!("{name}: {e}")))?;
    let graph = doc
        .descendants()
        .find(|n| n.has_tag_name("graph"))
        .ok_or_else(|| ReportError::Xml(format!("{name}: no <graph> element")))?;
    let default_directed = graph.attribute("edgedefault") == Some("directed");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut directed = false;
    for child in graph.children().filter(|c| c.is_element()) {
        if child.has_tag_name("node") {
            let id = child.attribute("id").ok_or_else(|| ReportError::Xml(format!("{name}: node without id")))?;
            nodes.push(id.to_string());
        } else if child.has_tag_name("edge") {
            let get = |attr| {
                child
                    .attribute(attr)
                    .map(str::to_string)
                    .ok_or_else(|| ReportError::Xml(format!("{name}: edge without {attr}")))
            };
            directed |= child.attribute("directed").map_or(default_directed, |d| d == "true");
            edges.push((get("source")?, get("target")?));
        }
    }
    normalize(name, nodes, edges, directed)
}

/// Parses the `u v` edge-list format, with node labels equal to the ids.
/// Self-loops and repeated pairs are normalized away rather than rejected.
pub fn parse_edge_list(name: &str, text: &str) -> Result<Ingested, ReportError> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("nodes:") {
                n = n.max(rest.trim().parse::<usize>().map_err(|e| parse_error(i, e.to_string()))?);
            }
            continue;
        }
        let ids: Vec<NodeId> = line
            .split_whitespace()
            .take(2)
            .map(|tok| tok.parse().map_err(|_| parse_error(i, format!("bad node id {tok:?}"))))
            .collect::<Result<_, _>>()?;
        match ids[..] {
            [] => continue,
            [u, v] => {
                n = n.max(u.max(v) + 1);
                edges.push((u.to_string(), v.to_string()));
            }
            _ => return Err(parse_error(i, "expected two node ids".into())),
        }
    }
    normalize(name, (0..n).map(|v| v.to_string()).collect(), edges, false)
}

fn parse_error(line: usize, msg: String) -> ReportError {
    ReportError::Graph(GraphError::Parse { line: line + 1, msg })
}

/// Reads a `.graphml` file or, for any other extension, an edge list.
/// The name is the file stem.
pub fn ingest_file(path: &Path) -> Result<Ingested, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReportError::Io(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("graphml") => parse_graphml(&name, &text),
        _ => parse_edge_list(&name, &text),
    }
}

/// Serializes a graph as undirected GraphML; nodes are `n0, n1, ...`.
pub fn to_graphml(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    let _ = writeln!(out, "  <graph id=\"{}\" edgedefault=\"undirected\">", xml_escape(g.name().unwrap_or("G")));
    for v in g.nodes() {
        let _ = writeln!(out, "    <node id=\"n{v}\"/>");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "    <edge source=\"n{u}\" target=\"n{v}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A named collection of topologies.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub graph: Graph,
    pub source: Option<PathBuf>,
    pub log: Vec<Normalization>,
}

impl Dataset {
    /// Loads every `.graphml`, `.txt` and `.edges` file in `dir`, sorted by
    /// file name. Duplicate stems get a numeric suffix.
    pub fn load_dir(dir: &Path) -> Result<Dataset, ReportError> {
        let read = std::fs::read_dir(dir).map_err(|e| ReportError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<PathBuf> = read
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.is_file()
                    && p.extension().and_then(|e| e.to_str()).is_some_and(|e| {
                        ["graphml", "txt", "edges"].iter().any(|x| e.eq_ignore_ascii_case(x))
                    })
            })
            .collect();
        paths.sort();
        let mut d = Dataset::default();
        for p in paths {
            let ing = ingest_file(&p)?;
            d.push(ing.name, ing.graph, Some(p), ing.log);
        }
        Ok(d)
    }

    /// Adds an entry, renaming it if the name is taken.
    pub fn push(&mut self, name: String, graph: Graph, source: Option<PathBuf>, log: Vec<Normalization>) {
        let taken: BTreeSet<&str> = self.entries.iter().map(|e| e.name.as_str()).collect();
        let mut unique = name.clone();
        let mut k = 2;
        while taken.contains(unique.as_str()) {
            unique = format!("{name}_{k}");
            k += 1;
        }
        let graph = graph.with_name(unique.clone());
        self.entries.push(Entry { name: unique, graph, source, log });
    }

    pub fn from_graphs(graphs: impl IntoIterator<Item = (String, Graph)>) -> Dataset {
        let mut d = Dataset::default();
        for (name, g) in graphs {
            d.push(name, g, None, Vec::new());
        }
        d
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NETRAIL: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key attr.name="label" attr.type="string" for="node" id="d0"/>
  <graph edgedefault="undirected">
    <node id="1"><data key="d0">v1</data></node>
    <node id="2"/><node id="3"/><node id="4"/><node id="5"/><node id="6"/><node id="7"/>
    <edge source="1" target="2"/><edge source="2" target="3"/><edge source="3" target="4"/>
    <edge source="4" target="5"/><edge source="4" target="1"/><edge source="5" target="1"/>
    <edge source="1" target="6"/><edge source="2" target="6"/><edge source="1" target="7"/>
    <edge source="2" target="7"/>
  </graph>
</graphml>"#;

    #[test]
    fn netrail_file() {
        let ing = parse_graphml("Netrail", NETRAIL).unwrap();
        assert_eq!(ing.graph.edges(), crate::classifier::netrail().edges());
        assert!(ing.log.is_empty());
    }

    #[test]
    fn normalization_is_logged() {
        let text = r#"<graphml><graph edgedefault="directed">
            <node id="a"/><node id="b"/><node id="c"/>
            <edge source="a" target="b"/><edge source="b" target="a"/>
            <edge source="c" target="c"/><edge source="a" target="z"/>
        </graph></graphml>"#;
        let ing = parse_graphml("x", text).unwrap();
        assert_eq!(ing.graph.n(), 4);
        assert_eq!(ing.graph.edges(), &[(0, 1), (0, 3)]);
        assert!(ing.log.contains(&Normalization::DirectionDropped));
        assert!(ing.log.contains(&Normalization::SelfLoopRemoved { node: "c".into() }));
        assert!(ing.log.contains(&Normalization::ParallelMerged { u: "a".into(), v: "b".into(), copies: 2 }));
        assert!(ing.log.contains(&Normalization::ImplicitNode { node: "z".into() }));
        assert!(ing.log.contains(&Normalization::Disconnected { components: 2 }));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graphml("x", "<graphml><graph>"), Err(ReportError::Xml(_))));
        assert!(matches!(parse_graphml("x", "<graphml><graph/></graphml>"), Err(ReportError::Empty(_))));
    }

    #[test]
    fn export_round_trip() {
        let g = crate::classifier::netrail();
        let again = parse_graphml("Netrail", &to_graphml(&g)).unwrap();
        assert_eq!(again.graph, g);
        let d = Dataset::from_graphs([("a".to_string(), g.clone()), ("a".to_string(), g)]);
        assert_eq!(d.entries[1].name, "a_2");
    }
}
