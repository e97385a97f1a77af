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

//! Forwarding patterns and the deterministic packet walk.

mod sim;
mod table;

pub use sim::{simulate_route, simulate_tour, Survivors, TourOutcome, TourStatus, WalkOutcome, WalkStatus, Walker};
pub use table::{admissible_views, check_totality, materialize, PatternTable, TableRow, MAX_TABLE_DEGREE};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingModel {
    SourceDestination,
    DestinationOnly,
    Touring,
}

impl RoutingModel {
    pub const ALL: [RoutingModel; 3] =
        [RoutingModel::SourceDestination, RoutingModel::DestinationOnly, RoutingModel::Touring];

    pub fn uses_source(self) -> bool {
        self == RoutingModel::SourceDestination
    }

    pub fn uses_destination(self) -> bool {
        self != RoutingModel::Touring
    }

    pub fn name(self) -> &'static str {
        match self {
            RoutingModel::SourceDestination => "source_destination",
            RoutingModel::DestinationOnly => "destination_only",
            RoutingModel::Touring => "touring",
        }
    }
}

impl fmt::Display for RoutingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RoutingModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "source_destination" | "sd" => Ok(RoutingModel::SourceDestination),
            "destination_only" | "dest" => Ok(RoutingModel::DestinationOnly),
            "touring" | "tour" => Ok(RoutingModel::Touring),
            other => Err(format!("unknown routing model {other:?}")),
        }
    }
}

/// Source and destination a pattern is built for, as its model requires.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<NodeId>,
}

/// What a node sees when a packet arrives. `inport` is `None` for ⊥.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalView<'a> {
    pub node: NodeId,
    pub alive: &'a [NodeId],
    pub inport: Option<NodeId>,
    pub src: Option<NodeId>,
    pub dst: Option<NodeId>,
}

impl LocalView<'_> {
    pub fn key(&self) -> ViewKey {
        ViewKey {
            node: self.node,
            alive: self.alive.to_vec(),
            inport: self.inport,
            src: self.src,
            dst: self.dst,
        }
    }

    pub fn is_alive(&self, w: NodeId) -> bool {
        self.alive.binary_search(&w).is_ok()
    }
}

/// Owned copy of a [`LocalView`], used in reports and errors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewKey {
    pub node: NodeId,
    pub alive: Vec<NodeId>,
    pub inport: Option<NodeId>,
    pub src: Option<NodeId>,
    pub dst: Option<NodeId>,
}

impl ViewKey {
    pub fn view(&self) -> LocalView<'_> {
        LocalView { node: self.node, alive: &self.alive, inport: self.inport, src: self.src, dst: self.dst }
    }
}

impl fmt::Display for ViewKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{} alive={:?} in=", self.node, self.alive)?;
        match self.inport {
            Some(u) => write!(f, "{u}"),
            None => write!(f, "⊥"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForwardingError {
    #[error("no rule for view {0}")]
    Undefined(ViewKey),
    #[error("rule for view {view} forwards to {out}, which is not an alive neighbor")]
    IllegalOutput { view: ViewKey, out: NodeId },
    #[error("view {0} does not match the pattern model or scope")]
    Inconsistent(ViewKey),
    #[error("{0}")]
    Scope(String),
    #[error("node {node} has degree {degree}, above the table limit")]
    TooLarge { node: NodeId, degree: usize },
    #[error("malformed pattern: {0}")]
    Malformed(String),
}

/// The local rule of a pattern. `None` means the rule is undefined for the view.
pub trait Rule: Send + Sync {
    fn decide(&self, view: &LocalView<'_>) -> Option<NodeId>;
}

impl<F> Rule for F
where
    F: Fn(&LocalView<'_>) -> Option<NodeId> + Send + Sync,
{
    fn decide(&self, view: &LocalView<'_>) -> Option<NodeId> {
        self(view)
    }
}

/// Generator name and parameters of a pattern.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(generator: impl Into<String>) -> Provenance {
        Provenance { generator: generator.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Provenance {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// A forwarding pattern π: a total deterministic map from local views to
/// outports, fixed to one routing model and scope.
#[derive(Clone)]
pub struct ForwardingPattern {
    pub model: RoutingModel,
    pub scope: Scope,
    pub provenance: Provenance,
    rule: Arc<dyn Rule>,
}

impl fmt::Debug for ForwardingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ForwardingPattern")
            .field("model", &self.model)
            .field("scope", &self.scope)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl ForwardingPattern {
    pub fn new(model: RoutingModel, scope: Scope, provenance: Provenance, rule: impl Rule + 'static) -> Self {
        ForwardingPattern { model, scope, provenance, rule: Arc::new(rule) }
    }

    /// Outport for `view`. Errors when the view does not fit the model or
    /// scope, when no rule applies, or when the rule picks a dead link.
    pub fn decide(&self, view: &LocalView<'_>) -> Result<NodeId, ForwardingError> {
        let fits = view.src.is_some() == self.model.uses_source()
            && view.dst.is_some() == self.model.uses_destination()
            && (self.scope.s.is_none() || view.src.is_none() || self.scope.s == view.src)
            && (self.scope.t.is_none() || view.dst.is_none() || self.scope.t == view.dst)
            && view.inport.is_none_or(|u| view.is_alive(u));
        if !fits {
            return Err(ForwardingError::Inconsistent(view.key()));
        }
        match self.rule.decide(view) {
            None => Err(ForwardingError::Undefined(view.key())),
            Some(out) if view.is_alive(out) => Ok(out),
            Some(out) => Err(ForwardingError::IllegalOutput { view: view.key(), out }),
        }
    }

    /// The view this pattern sees at `node`, filling in source and
    /// destination from the scope.
    pub fn view<'a>(&self, node: NodeId, alive: &'a [NodeId], inport: Option<NodeId>) -> LocalView<'a> {
        LocalView {
            node,
            alive,
            inport,
            src: if self.model.uses_source() { self.scope.s } else { None },
            dst: if self.model.uses_destination() { self.scope.t } else { None },
        }
    }

    /// Reads a pattern from its JSON table form.
    pub fn from_json(text: &str) -> Result<ForwardingPattern, ForwardingError> {
        PatternTable::from_json(text)?.into_pattern()
    }
}
