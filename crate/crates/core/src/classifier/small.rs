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

//! Named small graphs and membership in the minor-closed families of the
//! positive results.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// The fixed graphs the classifier searches for or compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Named {
    K4,
    K23,
    K5,
    K33,
    K5Minus1,
    K33Minus1,
    K7Minus1,
    K44Minus1,
    /// `K5` without two links sharing a node.
    K5Minus2Adjacent,
    /// `K5` without two disjoint links.
    K5Minus2Disjoint,
    K33Minus2Adjacent,
    K33Minus2Disjoint,
}

impl Named {
    pub fn graph(self) -> Graph {
        let k = |n| Graph::complete(n).expect("n > 0");
        let kb = |a, b| Graph::complete_bipartite(a, b).expect("a + b > 0");
        let minus = |g: Graph, e: &[(usize, usize)]| g.minus_edges(e).expect("edges exist");
        let g = match self {
            Named::K4 => k(4),
            Named::K23 => kb(2, 3),
            Named::K5 => k(5),
            Named::K33 => kb(3, 3),
            Named::K5Minus1 => minus(k(5), &[(0, 1)]),
            Named::K33Minus1 => minus(kb(3, 3), &[(0, 3)]),
            Named::K7Minus1 => minus(k(7), &[(0, 1)]),
            Named::K44Minus1 => minus(kb(4, 4), &[(0, 4)]),
            Named::K5Minus2Adjacent => minus(k(5), &[(0, 1), (0, 2)]),
            Named::K5Minus2Disjoint => minus(k(5), &[(0, 1), (2, 3)]),
            Named::K33Minus2Adjacent => minus(kb(3, 3), &[(0, 3), (0, 4)]),
            Named::K33Minus2Disjoint => minus(kb(3, 3), &[(0, 3), (1, 4)]),
        };
        g.with_name(self.to_string())
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Named::K4 => "K4",
            Named::K23 => "K2,3",
            Named::K5 => "K5",
            Named::K33 => "K3,3",
            Named::K5Minus1 => "K5-1",
            Named::K33Minus1 => "K3,3-1",
            Named::K7Minus1 => "K7-1",
            Named::K44Minus1 => "K4,4-1",
            Named::K5Minus2Adjacent => "K5-2(adjacent)",
            Named::K5Minus2Disjoint => "K5-2(disjoint)",
            Named::K33Minus2Adjacent => "K3,3-2(adjacent)",
            Named::K33Minus2Disjoint => "K3,3-2(disjoint)",
        })
    }
}

/// Hosts of the positive results whose minors all admit a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SmallHost {
    K5,
    K33,
    /// Either graph obtained from `K5` by removing two links.
    K5Minus2,
    /// Either graph obtained from `K_{3,3}` by removing two links.
    K33Minus2,
}

impl SmallHost {
    pub fn variants(self) -> &'static [Named] {
        match self {
            SmallHost::K5 => &[Named::K5],
            SmallHost::K33 => &[Named::K33],
            SmallHost::K5Minus2 => &[Named::K5Minus2Adjacent, Named::K5Minus2Disjoint],
            SmallHost::K33Minus2 => &[Named::K33Minus2Adjacent, Named::K33Minus2Disjoint],
        }
    }

    fn index(self) -> usize {
        match self {
            SmallHost::K5 => 0,
            SmallHost::K33 => 1,
            SmallHost::K5Minus2 => 2,
            SmallHost::K33Minus2 => 3,
        }
    }
}

impl fmt::Display for SmallHost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SmallHost::K5 => "K5",
            SmallHost::K33 => "K3,3",
            SmallHost::K5Minus2 => "K5-2",
            SmallHost::K33Minus2 => "K3,3-2",
        })
    }
}

/// A graph on at most 8 nodes as `(n, upper-triangle adjacency bits)`.
type Small = (usize, u32);

fn bit(n: usize, u: usize, v: usize) -> u32 {
    let (u, v) = (u.min(v), u.max(v));
    // index of (u, v) in row-major upper triangle
    1 << (u * (2 * n - u - 1) / 2 + (v - u - 1))
}

fn encode(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Small {
    (n, pairs.into_iter().fold(0, |acc, (u, v)| acc | bit(n, u, v)))
}

fn pairs_of((n, bits): Small) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| bits & bit(n, u, v) != 0).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Canonical form: the smallest encoding over all relabelings.
fn canonical(g: Small) -> Small {
    let pairs = pairs_of(g);
    let n = g.0;
    permutations(n)
        .iter()
        .map(|p| encode(n, pairs.iter().map(|&(u, v)| (p[u], p[v]))))
        .min()
        .unwrap_or((n, 0))
}

fn one_step_minors(g: Small) -> Vec<Small> {
    let (n, _) = g;
    let pairs = pairs_of(g);
    let mut out = Vec::new();
    for (i, _) in pairs.iter().enumerate() {
        out.push(encode(n, pairs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e)));
    }
    if n > 1 {
        for x in 0..n {
            let shift = |v: usize| if v > x { v - 1 } else { v };
            out.push(encode(n - 1, pairs.iter().filter(|&&(u, v)| u != x && v != x).map(|&(u, v)| (shift(u), shift(v)))));
        }
        for &(a, b) in &pairs {
            // merge b into a
            let shift = |v: usize| {
                let v = if v == b { a } else { v };
                if v > b {
                    v - 1
                } else {
                    v
                }
            };
            let merged: HashSet<(usize, usize)> = pairs
                .iter()
                .map(|&(u, v)| (shift(u), shift(v)))
                .filter(|&(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            out.push(encode(n - 1, merged));
        }
    }
    out
}

fn minor_closure(hosts: &[Named]) -> HashSet<Small> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for h in hosts {
        let g = h.graph();
        let c = canonical(encode(g.n(), g.edges().iter().copied()));
        if seen.insert(c) {
            queue.push_back(c);
        }
    }
    while let Some(g) = queue.pop_front() {
        for m in one_step_minors(g) {
            let c = canonical(m);
            if seen.insert(c) {
                queue.push_back(c);
            }
        }
    }
    seen
}

fn closure(host: SmallHost) -> &'static HashSet<Small> {
    static CACHE: [OnceLock<HashSet<Small>>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[host.index()].get_or_init(|| minor_closure(host.variants()))
}

/// Whether `g` is isomorphic to a minor of `host` (any of its variants).
/// Decided by comparing canonical forms against the precomputed set of all
/// minors of the host.
pub fn is_minor_of_small(g: &Graph, host: SmallHost) -> bool {
    let max_n = host.variants().iter().map(|h| h.graph().n()).max().unwrap_or(0);
    if g.n() > max_n {
        return false;
    }
    closure(host).contains(&canonical(encode(g.n(), g.edges().iter().copied())))
}

/// Whether two graphs on at most 8 nodes are isomorphic.
pub fn small_isomorphic(a: &Graph, b: &Graph) -> bool {
    assert!(a.n() <= 8 && b.n() <= 8, "small graphs only");
    a.n() == b.n()
        && a.m() == b.m()
        && canonical(encode(a.n(), a.edges().iter().copied())) == canonical(encode(b.n(), b.edges().iter().copied()))
}
