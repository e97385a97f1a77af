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

//! Shared generators for property tests.

#![allow(dead_code)]

use frrlab::graph::{FailureSet, Graph, NodeId};
use proptest::prelude::*;

/// Simple graph on `n` nodes with each pair present independently.
pub fn graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(NodeId, NodeId)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .zip(bits)
                .filter_map(|(e, b)| b.then_some(e))
                .collect();
            Graph::new(n, &pairs).unwrap()
        })
    })
}

/// Connected graph: a random spanning tree plus random extra pairs.
pub fn connected_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
        (parents, proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)).prop_map(move |(parents, bits)| {
            let mut pairs: Vec<(NodeId, NodeId)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            pairs.extend(
                (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .zip(bits)
                    .filter_map(|(e, b)| b.then_some(e)),
            );
            pairs.sort();
            pairs.dedup();
            Graph::new(n, &pairs).unwrap()
        })
    })
}

/// A graph together with a failure set over its links.
pub fn graph_with_failures(min_n: usize, max_n: usize) -> impl Strategy<Value = (Graph, FailureSet)> {
    connected_graph(min_n, max_n).prop_flat_map(|g| {
        let m = g.m();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
            let f = FailureSet::from_ids(m, bits.iter().enumerate().filter_map(|(e, &b)| b.then_some(e)));
            (g.clone(), f)
        })
    })
}

/// Random outerplanar graph on `3..=max_n` nodes: a maximal one grown by
/// stacking triangles on outer edges, thinned and relabeled.
pub fn outerplanar_from_seed(seed: u64, max_n: usize) -> Graph {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_n);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut outer = vec![0, 1, 2];
    for v in 3..n {
        let i = rng.gen_range(0..outer.len());
        let (a, b) = (outer[i], outer[(i + 1) % outer.len()]);
        edges.extend([(a, v), (b, v)]);
        outer.insert(i + 1, v);
    }
    edges.retain(|_| rng.gen_bool(0.8));
    let mut label: Vec<NodeId> = (0..n).collect();
    label.shuffle(&mut rng);
    let pairs: Vec<_> = edges.iter().map(|&(u, v)| (label[u], label[v])).collect();
    Graph::new(n, &pairs).unwrap()
}

pub fn outerplanar_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    any::<u64>().prop_map(move |seed| outerplanar_from_seed(seed, max_n))
}
