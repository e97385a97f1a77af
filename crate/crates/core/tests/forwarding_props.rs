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

//! Properties of the forwarding model and the walk simulator.

mod common;

use frrlab::forwarding::{
    admissible_views, materialize, simulate_route, simulate_tour, ForwardingPattern, LocalView, Provenance, RoutingModel,
    Scope, TourStatus, WalkStatus,
};
use frrlab::graph::{FailureSet, Graph, NodeId};
use proptest::prelude::*;

/// Arbitrary but fixed choice among the alive links, driven by `seed`.
fn scrambled(model: RoutingModel, scope: Scope, seed: u64) -> ForwardingPattern {
    ForwardingPattern::new(model, scope, Provenance::new("scrambled").with("seed", seed), move |v: &LocalView<'_>| {
        let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
        for x in [v.node, v.inport.map_or(usize::MAX, |u| u), v.alive.len()].into_iter().chain(v.alive.iter().copied()) {
            h = (h ^ x as u64).wrapping_mul(0x100_0000_01b3);
        }
        Some(v.alive[(h >> 17) as usize % v.alive.len()])
    })
}

fn state_bound(g: &Graph) -> usize {
    g.nodes().map(|v| g.degree(v) + 1).sum::<usize>() + 1
}

fn no_teleport(g: &Graph, f: &FailureSet, trace: &[(NodeId, Option<NodeId>)]) -> bool {
    trace.windows(2).all(|w| w[1].1 == Some(w[0].0) && f.alive(g, w[0].0, w[1].0))
}

proptest! {
    #[test]
    fn routing_walks_are_deterministic_bounded_and_local(
        (g, f) in common::graph_with_failures(2, 8),
        seed in any::<u64>(),
        start in 0usize..8,
    ) {
        let t = g.n() - 1;
        let start = start % g.n();
        let p = scrambled(RoutingModel::DestinationOnly, Scope { s: None, t: Some(t) }, seed);
        let a = simulate_route(&g, &f, &p, start, start, t).unwrap();
        let b = simulate_route(&g, &f, &p, start, start, t).unwrap();
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        prop_assert!(a.trace.len() <= state_bound(&g));
        prop_assert!(no_teleport(&g, &f, &a.trace));
        if start == t {
            prop_assert_eq!(a.status, WalkStatus::Reached { hops: 0 });
        }
        if let WalkStatus::Looped { prefix_len, cycle_len } = a.status {
            prop_assert_eq!(prefix_len + cycle_len, a.trace.len());
            let last = *a.trace.last().unwrap();
            let out = p.decide(&p.view(last.0, &g.neighbors(last.0).iter().copied().filter(|&w| f.alive(&g, last.0, w)).collect::<Vec<_>>(), last.1)).unwrap();
            prop_assert_eq!(a.trace[prefix_len], (out, Some(last.0)));
        }
    }

    #[test]
    fn tour_outcome_matches_its_definition((g, f) in common::graph_with_failures(2, 7), seed in any::<u64>(), start in 0usize..7) {
        let start = start % g.n();
        let p = scrambled(RoutingModel::Touring, Scope::default(), seed);
        let out = simulate_tour(&g, &f, &p, start).unwrap();
        prop_assert!(out.trace.len() <= state_bound(&g));
        prop_assert!(no_teleport(&g, &f, &out.trace));
        let comp = frrlab::graph::components(&g, &f).into_iter().find(|c| c.contains(&start)).unwrap();
        let mut firsts = Vec::new();
        for (i, &(v, _)) in out.trace.iter().enumerate() {
            if !out.trace[..i].iter().any(|s| s.0 == v) {
                firsts.push(i);
            }
        }
        let all_seen = comp.iter().all(|v| out.trace.iter().any(|s| s.0 == *v));
        // unroll one more period; the walk is periodic from here on
        let mut unrolled = out.trace.clone();
        if comp.len() > 1 {
            let (last, inport) = *out.trace.last().unwrap();
            let alive: Vec<NodeId> = g.neighbors(last).iter().copied().filter(|&w| f.alive(&g, last, w)).collect();
            let next = (p.decide(&p.view(last, &alive, inport)).unwrap(), Some(last));
            let period_start = out.trace.iter().position(|s| *s == next).unwrap();
            unrolled.extend_from_slice(&out.trace[period_start..]);
        }
        let last_first = *firsts.last().unwrap();
        let returns = comp.len() == 1 || unrolled[last_first + 1..].iter().any(|s| s.0 == start);
        prop_assert_eq!(out.status == TourStatus::TourComplete, all_seen && returns);
    }

    #[test]
    fn table_json_round_trip_decides_identically(g in common::connected_graph(2, 6), seed in any::<u64>(), which in 0usize..3) {
        let t = g.n() - 1;
        let (model, scope) = match which {
            0 => (RoutingModel::SourceDestination, Scope { s: Some(0), t: Some(t) }),
            1 => (RoutingModel::DestinationOnly, Scope { s: None, t: Some(t) }),
            _ => (RoutingModel::Touring, Scope::default()),
        };
        let p = scrambled(model, scope, seed);
        let json = materialize(&g, &p).unwrap().to_json();
        let q = ForwardingPattern::from_json(&json).unwrap();
        prop_assert_eq!(q.model, p.model);
        prop_assert_eq!(q.scope, p.scope);
        for key in admissible_views(&g, model, scope).unwrap() {
            prop_assert_eq!(q.decide(&key.view()).ok(), p.decide(&key.view()).ok(), "view {}", key);
        }
        prop_assert_eq!(materialize(&g, &q).unwrap().to_json(), json);
    }
}
