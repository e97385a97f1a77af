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

//! Planarity, outerplanarity, minor search and topology classification.

pub mod classify;
pub mod minor;
pub mod outerplanar;
pub mod planarity;
pub mod small;

pub use classify::{classify, netrail, outerplanar_destinations, sometimes_fraction, Classification, Evidence, Feasibility, ModelVerdict};
pub use minor::{contains_minor, MinorBudget, MinorQueryResult};
pub use outerplanar::{is_outerplanar, is_outerplanar_graph, outerplanar_embedding, OuterplanarEmbedding, Outerplanarity};
pub use planarity::{is_planar, planar_embedding, Embedding};
pub use small::{is_minor_of_small, small_isomorphic, Named, SmallHost};
