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

//! Properties of planarity, outerplanarity, minor search and classification.

mod common;

use frrlab::adversary::{verify, Budget, VerificationMode};
use frrlab::classifier::{
    classify, contains_minor, is_outerplanar, is_outerplanar_graph, is_planar, planar_embedding, sometimes_fraction,
    Evidence, Feasibility, MinorBudget, MinorQueryResult, Named, SmallHost,
};
use frrlab::graph::{Graph, NodeId};
use frrlab::patterns as pat;
use proptest::prelude::*;

/// Whether `h` is a minor of `g`, by trying every assignment of the nodes of
/// `g` to branch sets (or deletion).
fn brute_minor(g: &Graph, h: &Graph) -> bool {
    let (n, k) = (g.n(), h.n());
    if k > n || h.m() > g.m() {
        return false;
    }
    let mut label = vec![0usize; n];
    loop {
        if check_assignment(g, h, &label) {
            return true;
        }
        // odometer over {0..=k}^n, k meaning deleted
        let mut i = 0;
        while i < n && label[i] == k {
            label[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        label[i] += 1;
    }
}

fn check_assignment(g: &Graph, h: &Graph, label: &[usize]) -> bool {
    let k = h.n();
    let mut size = vec![0usize; k];
    for &l in label {
        if l < k {
            size[l] += 1;
        }
    }
    if size.contains(&0) {
        return false;
    }
    let joined = |a: usize, b: usize| g.edges().iter().any(|&(u, v)| (label[u], label[v]) == (a, b) || (label[u], label[v]) == (b, a));
    if !h.edges().iter().all(|&(a, b)| joined(a, b)) {
        return false;
    }
    (0..k).all(|x| {
        let members: Vec<NodeId> = g.nodes().filter(|&v| label[v] == x).collect();
        let mut seen = vec![members[0]];
        let mut i = 0;
        while i < seen.len() {
            for &w in g.neighbors(seen[i]) {
                if label[w] == x && !seen.contains(&w) {
                    seen.push(w);
                }
            }
            i += 1;
        }
        seen.len() == members.len()
    })
}

fn exact() -> MinorBudget {
    MinorBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn planarity_agrees_with_kuratowski_minors(g in common::graph(1, 7)) {
        let planar = is_planar(&g);
        let outer = is_outerplanar_graph(&g);
        prop_assert!(!outer || planar);
        let forbidden_planar = brute_minor(&g, &Graph::complete(5).unwrap()) || brute_minor(&g, &Graph::complete_bipartite(3, 3).unwrap());
        prop_assert_eq!(planar, !forbidden_planar);
        let forbidden_outer = brute_minor(&g, &Named::K4.graph()) || brute_minor(&g, &Named::K23.graph());
        prop_assert_eq!(outer, !forbidden_outer);
        if let Some(emb) = planar_embedding(&g) {
            prop_assert!(emb.is_planar_embedding_of(&g));
        }
        prop_assert_eq!(is_outerplanar(&g).holds(), outer);
    }

    #[test]
    fn found_minor_models_are_valid(g in common::connected_graph(4, 14), which in 0usize..6) {
        let h = [Named::K4, Named::K23, Named::K5Minus1, Named::K33Minus1, Named::K5, Named::K33][which].graph();
        if let MinorQueryResult::Found(m) = contains_minor(&g, &h, &exact()) {
            prop_assert!(m.validate(&g, &h).is_ok());
            let mut all: Vec<NodeId> = m.branch_sets.concat();
            let len = all.len();
            all.sort();
            all.dedup();
            prop_assert_eq!(all.len(), len);
        }
    }

    #[test]
    fn classification_is_consistent(g in common::connected_graph(3, 10)) {
        let c = classify(&g, &exact());
        for (h, verdict) in [(Named::K5Minus1, &c.destination), (Named::K33Minus1, &c.destination), (Named::K7Minus1, &c.source_destination), (Named::K44Minus1, &c.source_destination)] {
            if contains_minor(&g, &h.graph(), &exact()).is_found() {
                prop_assert_ne!(&verdict.feasibility, &Feasibility::Possible);
            }
        }
        let outer = is_outerplanar_graph(&g);
        prop_assert_eq!(c.outerplanar, outer);
        prop_assert_eq!(c.touring.feasibility == Feasibility::Possible, outer);
        let good = g.nodes().filter(|&t| is_outerplanar_graph(&g.remove_nodes(&[t]).0)).count();
        prop_assert!((sometimes_fraction(&g) - good as f64 / g.n() as f64).abs() < 1e-12);
        if let Feasibility::Sometimes(x) = c.destination.feasibility {
            prop_assert!((x - sometimes_fraction(&g)).abs() < 1e-12 && x > 0.0 && x < 1.0);
        }
    }
}

/// A destination pattern for every `t` of a graph classified Possible in the
/// destination model, built from the classifier's evidence.
fn destination_patterns(g: &Graph, evidence: &Evidence) -> Vec<frrlab::forwarding::ForwardingPattern> {
    match evidence {
        Evidence::Outerplanar => g.nodes().map(|t| pat::gen_outerplanar_plus_dest(g, t).unwrap()).collect(),
        Evidence::MinorOf(host) => {
            let (named, m) = host
                .variants()
                .iter()
                .find_map(|h| match contains_minor(&h.graph(), g, &exact()) {
                    MinorQueryResult::Found(m) => Some((*h, m)),
                    _ => None,
                })
                .expect("evidence names a host containing the graph");
            let hg = named.graph();
            g.nodes()
                .map(|t| {
                    let ht = m.branch_sets[t][0];
                    let p = match host {
                        SmallHost::K5Minus2 => pat::gen_k5m2_dest(&hg, ht).unwrap(),
                        SmallHost::K33Minus2 => pat::gen_k33m2_dest(&hg, ht).unwrap(),
                        other => panic!("{other} is not a destination host"),
                    };
                    pat::project_to_minor(&hg, &p, g, &m).unwrap()
                })
                .collect()
        }
        other => panic!("unexpected evidence {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn possible_destination_graphs_admit_resilient_patterns(g in common::connected_graph(2, 6)) {
        let c = classify(&g, &exact());
        prop_assume!(c.destination.feasibility == Feasibility::Possible);
        for p in destination_patterns(&g, &c.destination.evidence) {
            let v = verify(&g, &p, VerificationMode::PerfectResilience, &Budget::default()).unwrap();
            prop_assert!(v.holds(), "{:?}: {v:?}", p.provenance);
        }
    }
}

#[test]
fn minor_hosted_graphs_admit_resilient_patterns() {
    let k5 = Graph::complete(5).unwrap();
    let graphs = [
        Named::K4.graph(),
        Named::K5Minus2Adjacent.graph(),
        Named::K5Minus2Disjoint.graph(),
        Named::K33Minus2Disjoint.graph(),
        k5.minus_edges(&[(0, 1), (0, 2), (0, 3)]).unwrap(),
    ];
    for g in &graphs {
        let c = classify(g, &exact());
        assert!(matches!(c.destination.evidence, Evidence::MinorOf(_)) || c.outerplanar, "{:?}", c.destination);
        for p in destination_patterns(g, &c.destination.evidence) {
            assert!(verify(g, &p, VerificationMode::PerfectResilience, &Budget::default()).unwrap().holds(), "{:?}", p.provenance);
        }
    }
}
