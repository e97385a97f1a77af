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

//! Concrete impossibility constructions as graph plus failure-set fixtures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::AdversaryError;
use crate::graph::{FailureSet, Graph, GraphError, MinorOp, NodeId};

/// Names accepted by [`gadget`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetName {
    K7SourceDest,
    K44F12,
    K44F13,
    K44F33,
    K44F32,
    K4Tour,
    K23Tour,
    RMinorCounterexample(usize),
}

impl GadgetName {
    /// The fixed-size gadgets, in a stable order.
    pub const FIXED: [GadgetName; 7] = [
        GadgetName::K7SourceDest,
        GadgetName::K44F12,
        GadgetName::K44F13,
        GadgetName::K44F33,
        GadgetName::K44F32,
        GadgetName::K4Tour,
        GadgetName::K23Tour,
    ];
}

impl fmt::Display for GadgetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetName::K7SourceDest => f.write_str("k7_source_dest"),
            GadgetName::K44F12 => f.write_str("k44_F12"),
            GadgetName::K44F13 => f.write_str("k44_F13"),
            GadgetName::K44F33 => f.write_str("k44_F33"),
            GadgetName::K44F32 => f.write_str("k44_F32"),
            GadgetName::K4Tour => f.write_str("k4_tour"),
            GadgetName::K23Tour => f.write_str("k23_tour"),
            GadgetName::RMinorCounterexample(r) => write!(f, "r_minor_counterexample({r})"),
        }
    }
}

impl FromStr for GadgetName {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fixed = GadgetName::FIXED.iter().find(|g| g.to_string().eq_ignore_ascii_case(s));
        if let Some(&g) = fixed {
            return Ok(g);
        }
        let r = s
            .strip_prefix("r_minor_counterexample")
            .map(|rest| rest.trim_start_matches(['(', ':', '=']).trim_end_matches(')'))
            .and_then(|r| r.parse::<usize>().ok());
        match r {
            Some(r) if r >= 2 => Ok(GadgetName::RMinorCounterexample(r)),
            _ => Err(AdversaryError::UnknownGadget(s.to_string())),
        }
    }
}

/// A graph with named failure sets and labeled roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub graph: Graph,
    pub failures: Vec<(String, FailureSet)>,
    pub roles: BTreeMap<String, NodeId>,
    /// Operations turning `graph` into the smaller construction it extends.
    pub minor_ops: Vec<MinorOp>,
}

impl Gadget {
    pub fn role(&self, name: &str) -> Option<NodeId> {
        self.roles.get(name).copied()
    }

    /// The first failure set.
    pub fn primary_failures(&self) -> Option<&FailureSet> {
        self.failures.first().map(|(_, f)| f)
    }

    /// Links alive under the first failure set, as node pairs.
    pub fn survivors(&self) -> Vec<(NodeId, NodeId)> {
        let f = self.primary_failures();
        (0..self.graph.m()).filter(|&e| f.is_none_or(|f| !f.contains(e))).map(|e| self.graph.edge(e)).collect()
    }
}

fn roles(pairs: &[(&str, NodeId)]) -> BTreeMap<String, NodeId> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn named_edges(roles: &BTreeMap<String, NodeId>, pairs: &[(&str, &str)]) -> Vec<(NodeId, NodeId)> {
    pairs.iter().map(|(a, b)| (roles[*a], roles[*b])).collect()
}

fn k7_source_dest() -> Result<Gadget, GraphError> {
    let graph = Graph::complete(7)?;
    let roles = roles(&[("s", 0), ("v1", 1), ("v2", 2), ("v3", 3), ("v4", 4), ("v5", 5), ("t", 6)]);
    let alive =
        named_edges(&roles, &[("s", "v1"), ("v1", "v2"), ("v5", "v2"), ("v3", "v2"), ("v4", "v2"), ("t", "v4"), ("v5", "v3")]);
    let f = FailureSet::all_except(&graph, &alive)?;
    Ok(Gadget { name: GadgetName::K7SourceDest.to_string(), graph, failures: vec![("F".into(), f)], roles, minor_ops: vec![] })
}

const K44_SETS: [(&str, &[(&str, &str)]); 4] = [
    (
        "F12",
        &[
            ("v0", "a"),
            ("v0", "c"),
            ("v1", "c"),
            ("v2", "b"),
            ("v3", "b"),
            ("v3", "c"),
            ("v0", "d"),
            ("v1", "d"),
            ("v2", "d"),
            ("v3", "d"),
        ],
    ),
    (
        "F13",
        &[
            ("v0", "a"),
            ("v0", "c"),
            ("v1", "c"),
            ("v2", "b"),
            ("v3", "b"),
            ("v2", "c"),
            ("v0", "d"),
            ("v1", "d"),
            ("v2", "d"),
            ("v3", "d"),
        ],
    ),
    (
        "F33",
        &[("v0", "a"), ("v0", "c"), ("v1", "b"), ("v2", "b"), ("v3", "c"), ("v0", "d"), ("v1", "d"), ("v2", "d"), ("v3", "d")],
    ),
    (
        "F32",
        &[
            ("v0", "a"),
            ("v0", "c"),
            ("v1", "b"),
            ("v2", "b"),
            ("v2", "c"),
            ("v3", "c"),
            ("v0", "d"),
            ("v1", "d"),
            ("v2", "d"),
            ("v3", "d"),
        ],
    ),
];

fn k44(which: &str, name: GadgetName) -> Result<Gadget, GraphError> {
    let graph = Graph::complete_bipartite(4, 4)?;
    let roles = roles(&[
        ("a", 0),
        ("b", 1),
        ("c", 2),
        ("d", 3),
        ("v0", 4),
        ("v1", 5),
        ("v2", 6),
        ("v3", 7),
        ("s", 4),
        ("t", 2),
    ]);
    let (_, pairs) = K44_SETS.iter().find(|(n, _)| *n == which).expect("known set");
    let f = FailureSet::from_edges(&graph, &named_edges(&roles, pairs))?;
    Ok(Gadget { name: name.to_string(), graph, failures: vec![(which.into(), f)], roles, minor_ops: vec![] })
}

fn k4_tour() -> Result<Gadget, GraphError> {
    let graph = Graph::complete(4)?;
    let roles = roles(&[("v1", 0), ("v2", 1), ("v3", 2), ("v4", 3)]);
    let f = FailureSet::from_edges(&graph, &named_edges(&roles, &[("v2", "v3"), ("v2", "v4")]))?;
    Ok(Gadget { name: GadgetName::K4Tour.to_string(), graph, failures: vec![("F".into(), f)], roles, minor_ops: vec![] })
}

fn k23_tour() -> Result<Gadget, GraphError> {
    let graph = Graph::complete_bipartite(2, 3)?;
    let roles = roles(&[("v1", 0), ("v2", 1), ("v3", 2), ("v4", 3), ("v5", 4)]);
    let f = FailureSet::from_edges(&graph, &named_edges(&roles, &[("v2", "v5")]))?;
    Ok(Gadget { name: GadgetName::K23Tour.to_string(), graph, failures: vec![("F".into(), f)], roles, minor_ops: vec![] })
}

/// `K_{3+5r}` with source `0` and destination `2+5r`, extended by a new
/// source `s'` joined to `s` by `r - 1` paths of length two and directly to `t`.
fn r_minor(r: usize) -> Result<Gadget, GraphError> {
    if r < 2 {
        return Err(GraphError::InvalidMinor("the minor counterexample needs r >= 2".into()));
    }
    let k = 3 + 5 * r;
    let (s, t, s2) = (0, k - 1, k);
    let mut pairs: Vec<(NodeId, NodeId)> = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
    pairs.push((t, s2));
    let mut roles = roles(&[("s", s), ("t", t), ("s'", s2)]);
    let mut ops = Vec::new();
    for i in 0..r - 1 {
        let mid = k + 1 + i;
        pairs.push((s, mid));
        pairs.push((s2, mid));
        roles.insert(format!("p{}", i + 1), mid);
    }
    ops.push(MinorOp::DeleteEdge(t, s2));
    for _ in 0..r - 1 {
        ops.push(MinorOp::Contract(s, k + 1));
    }
    ops.push(MinorOp::Contract(s, k));
    let graph = Graph::new(k + r, &pairs)?;
    Ok(Gadget { name: GadgetName::RMinorCounterexample(r).to_string(), graph, failures: vec![], roles, minor_ops: ops })
}

/// Builds the named gadget.
pub fn gadget(name: GadgetName) -> Result<Gadget, GraphError> {
    match name {
        GadgetName::K7SourceDest => k7_source_dest(),
        GadgetName::K44F12 => k44("F12", name),
        GadgetName::K44F13 => k44("F13", name),
        GadgetName::K44F33 => k44("F33", name),
        GadgetName::K44F32 => k44("F32", name),
        GadgetName::K4Tour => k4_tour(),
        GadgetName::K23Tour => k23_tour(),
        GadgetName::RMinorCounterexample(r) => r_minor(r),
    }
}

/// Builds a gadget from its textual name.
pub fn gadget_by_name(name: &str) -> Result<Gadget, AdversaryError> {
    Ok(gadget(name.parse()?)?)
}
