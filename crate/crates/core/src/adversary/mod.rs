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

//! Resilience verification by failure-set search, local orbit checks, and
//! the constructive attacks and gadgets of the impossibility results.

mod attack;
mod gadget;
mod local;
mod verify;

pub use attack::{attack_complete_r, lift_attack, LiftShape, LiftedAttack};
pub use gadget::{gadget, gadget_by_name, Gadget, GadgetName};
pub use local::{orbit_check, relevant_neighbors, OrbitReport};
pub use verify::{
    replay, starts, verify, Budget, Counterexample, FailingRun, Verdict, VerificationMode, VerifyError,
};

use thiserror::Error;

use crate::forwarding::ForwardingError;
use crate::graph::{GraphError, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("unknown gadget {0:?}")]
    UnknownGadget(String),
    #[error("{0}")]
    Precondition(String),
    #[error("no breaking failure set found in block {block:?}")]
    CaseAnalysis { block: Vec<NodeId> },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Forwarding(#[from] ForwardingError),
}
