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

//! Per-topology feasibility verdicts for the three routing models.

use serde::{Deserialize, Serialize};

use super::minor::{contains_minor, MinorBudget, MinorQueryResult};
use super::outerplanar::{is_outerplanar, is_outerplanar_graph, Outerplanarity};
use super::planarity::is_planar;
use super::small::{is_minor_of_small, Named, SmallHost};
use crate::graph::{components, FailureSet, Graph, MinorMapping, NodeId};

/// Verdict for one routing model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Feasibility {
    Possible,
    Impossible,
    /// Some destinations admit a pattern; carries the share of such nodes.
    Sometimes(f64),
    Unknown,
}

impl Feasibility {
    /// Short label without the fraction.
    pub fn label(&self) -> &'static str {
        match self {
            Feasibility::Possible => "Possible",
            Feasibility::Impossible => "Impossible",
            Feasibility::Sometimes(_) => "Sometimes",
            Feasibility::Unknown => "Unknown",
        }
    }
}

/// Why a verdict was reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Evidence {
    Outerplanar,
    /// Isomorphic to a minor of a host with a known pattern.
    MinorOf(SmallHost),
    /// A forbidden graph found as a minor.
    ForbiddenMinor { minor: Named, mapping: MinorMapping },
    /// Destinations whose removal leaves an outerplanar graph.
    Destinations(Vec<NodeId>),
    /// Searches for the listed forbidden minors ran out of budget.
    Inconclusive(Vec<Named>),
    /// Every forbidden minor was excluded but no positive result applies.
    Undecided,
}

impl Evidence {
    pub fn summary(&self) -> String {
        match self {
            Evidence::Outerplanar => "outerplanar".into(),
            Evidence::MinorOf(h) => format!("minor of {h}"),
            Evidence::ForbiddenMinor { minor, mapping } => {
                let sets: Vec<String> = mapping
                    .branch_sets
                    .iter()
                    .map(|b| b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("+"))
                    .collect();
                format!("{minor} minor [{}]", sets.join(" "))
            }
            Evidence::Destinations(ts) => {
                format!("destinations {}", ts.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("+"))
            }
            Evidence::Inconclusive(hs) => {
                format!("search budget exhausted for {}", hs.iter().map(|h| h.to_string()).collect::<Vec<_>>().join("+"))
            }
            Evidence::Undecided => "no forbidden minor, no positive result".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelVerdict {
    pub feasibility: Feasibility,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub planar: bool,
    pub outerplanar: bool,
    pub touring: ModelVerdict,
    pub destination: ModelVerdict,
    pub source_destination: ModelVerdict,
    pub sometimes_fraction: f64,
}

/// Nodes `t` with `G \ t` outerplanar.
pub fn outerplanar_destinations(g: &Graph) -> Vec<NodeId> {
    g.nodes().filter(|&t| is_outerplanar_graph(&g.remove_nodes(&[t]).0)).collect()
}

/// Share of nodes `t` with `G \ t` outerplanar.
pub fn sometimes_fraction(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    outerplanar_destinations(g).len() as f64 / g.n() as f64
}

fn verdict(
    g: &Graph,
    outerplanar: bool,
    small: &[SmallHost],
    forbidden: &[Named],
    destinations: &[NodeId],
    budget: &MinorBudget,
) -> ModelVerdict {
    let done = |feasibility, evidence| ModelVerdict { feasibility, evidence };
    if outerplanar {
        return done(Feasibility::Possible, Evidence::Outerplanar);
    }
    if let Some(&h) = small.iter().find(|&&h| is_minor_of_small(g, h)) {
        return done(Feasibility::Possible, Evidence::MinorOf(h));
    }
    let mut inconclusive = Vec::new();
    for &h in forbidden {
        match contains_minor(g, &h.graph(), budget) {
            MinorQueryResult::Found(mapping) => {
                return done(Feasibility::Impossible, Evidence::ForbiddenMinor { minor: h, mapping })
            }
            MinorQueryResult::Unknown => inconclusive.push(h),
            MinorQueryResult::Absent => {}
        }
    }
    if !destinations.is_empty() {
        let f = destinations.len() as f64 / g.n() as f64;
        return done(Feasibility::Sometimes(f), Evidence::Destinations(destinations.to_vec()));
    }
    if inconclusive.is_empty() {
        done(Feasibility::Unknown, Evidence::Undecided)
    } else {
        done(Feasibility::Unknown, Evidence::Inconclusive(inconclusive))
    }
}

/// Classifies `g` for touring, destination-only and source-destination
/// routing.
pub fn classify(g: &Graph, budget: &MinorBudget) -> Classification {
    let outer = is_outerplanar(g);
    let outerplanar = outer.holds();
    let touring = match outer {
        Outerplanarity::Outerplanar(_) => {
            ModelVerdict { feasibility: Feasibility::Possible, evidence: Evidence::Outerplanar }
        }
        Outerplanarity::Obstructed { obstruction, mapping } => ModelVerdict {
            feasibility: Feasibility::Impossible,
            evidence: Evidence::ForbiddenMinor { minor: obstruction, mapping },
        },
    };
    let destinations = if outerplanar { g.nodes().collect() } else { outerplanar_destinations(g) };
    let destination = verdict(
        g,
        outerplanar,
        &[SmallHost::K5Minus2, SmallHost::K33Minus2],
        &[Named::K5Minus1, Named::K33Minus1],
        &destinations,
        budget,
    );
    let source_destination = verdict(
        g,
        outerplanar,
        &[SmallHost::K5, SmallHost::K33],
        &[Named::K7Minus1, Named::K44Minus1],
        &destinations,
        budget,
    );
    Classification {
        n: g.n(),
        m: g.m(),
        connected: components(g, &FailureSet::none_for(g)).len() <= 1,
        planar: is_planar(g),
        outerplanar,
        touring,
        destination,
        source_destination,
        sometimes_fraction: if g.n() == 0 { 0.0 } else { destinations.len() as f64 / g.n() as f64 },
    }
}

/// The seven-node Netrail topology with `v1..v7` as nodes `0..6`.
pub fn netrail() -> Graph {
    let pairs = [(1, 2), (2, 3), (3, 4), (4, 5), (4, 1), (5, 1), (1, 6), (2, 6), (1, 7), (2, 7)];
    let pairs: Vec<_> = pairs.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    Graph::new(7, &pairs).expect("fixed topology").with_name("Netrail")
}
