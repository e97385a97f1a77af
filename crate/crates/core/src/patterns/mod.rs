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

//! Generators for every concrete forwarding pattern.

mod dest;
mod project;
mod source;
mod tour;

pub use crate::classifier::outerplanar::{outerplanar_embedding as compute_outerplanar_embedding, OuterplanarEmbedding};
pub use dest::{gen_k33m2_dest, gen_k5m2_dest, gen_k5m2_dest_with, gen_outerplanar_plus_dest};
pub use project::project_to_minor;
pub use source::{gen_alg1_k5, gen_distance2, gen_distance3_bipartite, gen_k33_source, gen_k33_source_with, round_robin};
pub use tour::{all_cyclic_tours, cyclic_tour, gen_ham_route, gen_ham_tour, gen_outerplanar_tour, ham_decompose, HamDecomposition};

use thiserror::Error;

use crate::forwarding::LocalView;
use crate::graph::{Graph, GraphError, NodeId};

/// Which version of a published preference table to build.
///
/// `Verbatim` copies every row as printed. `Amended` reorders the two last
/// entries of a single ⊥ row, which exhaustive verification shows is needed
/// for the table to deliver under every failure set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum TableReading {
    Verbatim,
    #[default]
    Amended,
}

impl TableReading {
    pub fn name(self) -> &'static str {
        match self {
            TableReading::Verbatim => "verbatim",
            TableReading::Amended => "amended",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("node {0} is not in the graph")]
    MissingNode(NodeId),
    #[error("source and destination must differ")]
    SameEndpoints,
    #[error("graph is not outerplanar")]
    NotOuterplanar,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("unsupported graph shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn check_nodes(g: &Graph, nodes: &[NodeId]) -> Result<(), PatternError> {
    match nodes.iter().find(|&&v| v >= g.n()) {
        Some(&v) => Err(PatternError::MissingNode(v)),
        None => Ok(()),
    }
}

pub(crate) fn check_pair(g: &Graph, s: NodeId, t: NodeId) -> Result<(), PatternError> {
    check_nodes(g, &[s, t])?;
    if s == t {
        return Err(PatternError::SameEndpoints);
    }
    Ok(())
}

/// First alive entry of `list`; otherwise bounce to the inport, otherwise
/// the first alive neighbor.
pub(crate) fn prefer(view: &LocalView<'_>, list: &[NodeId]) -> Option<NodeId> {
    list.iter().copied().find(|&x| view.is_alive(x)).or_else(|| fallback(view))
}

pub(crate) fn fallback(view: &LocalView<'_>) -> Option<NodeId> {
    view.inport.or_else(|| view.alive.first().copied())
}

/// Next alive neighbor after the inport in ascending cyclic order; the
/// smallest alive neighbor for ⊥.
pub(crate) fn cyclic_next(view: &LocalView<'_>) -> Option<NodeId> {
    match view.inport {
        None => view.alive.first().copied(),
        Some(u) => {
            let i = view.alive.binary_search(&u).ok()?;
            Some(view.alive[(i + 1) % view.alive.len()])
        }
    }
}
