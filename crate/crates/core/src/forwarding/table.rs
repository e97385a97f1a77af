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

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ForwardingError, ForwardingPattern, LocalView, Provenance, RoutingModel, Rule, Scope, ViewKey};
use crate::graph::{Graph, NodeId};

/// Views are enumerated over all alive subsets, so tables are limited to
/// nodes of at most this degree.
pub const MAX_TABLE_DEGREE: usize = 16;

/// One rule of a materialized pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub node: NodeId,
    pub alive: Vec<NodeId>,
    #[serde(serialize_with = "ser_inport", deserialize_with = "de_inport")]
    pub inport: Option<NodeId>,
    pub out: NodeId,
}

fn ser_inport<S: Serializer>(inport: &Option<NodeId>, s: S) -> Result<S::Ok, S::Error> {
    match inport {
        Some(u) => s.serialize_u64(*u as u64),
        None => s.serialize_str("bot"),
    }
}

fn de_inport<'de, D: Deserializer<'de>>(d: D) -> Result<Option<NodeId>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Id(NodeId),
        Tag(String),
    }
    match Raw::deserialize(d)? {
        Raw::Id(u) => Ok(Some(u)),
        Raw::Tag(t) if t == "bot" => Ok(None),
        Raw::Tag(t) => Err(serde::de::Error::custom(format!("inport must be a node id or \"bot\", got {t:?}"))),
    }
}

/// Serialization form of a pattern: every admissible view with its outport,
/// in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternTable {
    pub model: RoutingModel,
    pub scope: Scope,
    #[serde(default)]
    pub provenance: Provenance,
    pub rows: Vec<TableRow>,
}

type Index = HashMap<(NodeId, Option<NodeId>), HashMap<Vec<NodeId>, NodeId>>;

struct TableRule(Index);

impl Rule for TableRule {
    fn decide(&self, view: &LocalView<'_>) -> Option<NodeId> {
        self.0.get(&(view.node, view.inport))?.get(view.alive).copied()
    }
}

impl PatternTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables always serialize")
    }

    pub fn from_json(text: &str) -> Result<PatternTable, ForwardingError> {
        serde_json::from_str(text).map_err(|e| ForwardingError::Malformed(e.to_string()))
    }

    /// Checks row well-formedness and builds a table-backed pattern.
    pub fn into_pattern(self) -> Result<ForwardingPattern, ForwardingError> {
        let bad = |msg: String| Err(ForwardingError::Malformed(msg));
        if self.model.uses_destination() && self.scope.t.is_none() {
            return bad("scope.t is required for routing models".into());
        }
        if self.model.uses_source() && self.scope.s.is_none() {
            return bad("scope.s is required for source-destination routing".into());
        }
        let mut index: Index = HashMap::new();
        for row in self.rows {
            if !row.alive.windows(2).all(|w| w[0] < w[1]) {
                return bad(format!("row at node {} has an unsorted alive set", row.node));
            }
            if row.alive.binary_search(&row.out).is_err() {
                return bad(format!("row at node {} forwards to dead neighbor {}", row.node, row.out));
            }
            if row.inport.is_some_and(|u| row.alive.binary_search(&u).is_err()) {
                return bad(format!("row at node {} has a dead inport", row.node));
            }
            if index.entry((row.node, row.inport)).or_default().insert(row.alive, row.out).is_some() {
                return bad(format!("duplicate row at node {}", row.node));
            }
        }
        Ok(ForwardingPattern::new(self.model, self.scope, self.provenance, TableRule(index)))
    }
}

/// Every view a pattern of `model` with `scope` may be asked about on `g`,
/// in canonical order.
pub fn admissible_views(g: &Graph, model: RoutingModel, scope: Scope) -> Result<Vec<ViewKey>, ForwardingError> {
    let src = if model.uses_source() { scope.s } else { None };
    let dst = if model.uses_destination() { scope.t } else { None };
    let mut out = Vec::new();
    for v in g.nodes() {
        if model.uses_destination() && Some(v) == scope.t {
            continue;
        }
        let nbrs = g.neighbors(v);
        if nbrs.len() > MAX_TABLE_DEGREE {
            return Err(ForwardingError::TooLarge { node: v, degree: nbrs.len() });
        }
        let bot = model != RoutingModel::SourceDestination || Some(v) == scope.s;
        let mut subsets: Vec<Vec<NodeId>> = (1u32..1 << nbrs.len())
            .map(|mask| nbrs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &w)| w).collect())
            .collect();
        subsets.sort();
        for alive in subsets {
            let inports = bot.then_some(None).into_iter().chain(alive.iter().map(|&u| Some(u)));
            let keys: Vec<ViewKey> =
                inports.map(|inport| ViewKey { node: v, alive: alive.clone(), inport, src, dst }).collect();
            out.extend(keys);
        }
    }
    Ok(out)
}

/// Admissible views on which `p` has no legal answer; empty iff `p` is total.
pub fn check_totality(g: &Graph, p: &ForwardingPattern) -> Result<Vec<ViewKey>, ForwardingError> {
    Ok(admissible_views(g, p.model, p.scope)?.into_iter().filter(|k| p.decide(&k.view()).is_err()).collect())
}

/// The table form of `p` on `g`. Fails on the first view `p` cannot answer.
pub fn materialize(g: &Graph, p: &ForwardingPattern) -> Result<PatternTable, ForwardingError> {
    let rows = admissible_views(g, p.model, p.scope)?
        .into_iter()
        .map(|k| {
            let out = p.decide(&k.view())?;
            Ok(TableRow { node: k.node, alive: k.alive, inport: k.inport, out })
        })
        .collect::<Result<Vec<_>, ForwardingError>>()?;
    Ok(PatternTable { model: p.model, scope: p.scope, provenance: p.provenance.clone(), rows })
}
