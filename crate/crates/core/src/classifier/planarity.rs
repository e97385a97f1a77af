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

//! Left-right planarity test with embedding construction.

use crate::graph::{Graph, NodeId};

/// A combinatorial embedding: the clockwise neighbor order around each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub rotation: Vec<Vec<NodeId>>,
}

impl Embedding {
    /// Successor of `w` in the rotation of `v`.
    pub fn next(&self, v: NodeId, w: NodeId) -> NodeId {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&x| x == w).expect("w is a neighbor of v");
        rot[(i + 1) % rot.len()]
    }

    /// Faces traced by following `(u, v) -> (v, next(v, u))`.
    pub fn faces(&self) -> Vec<Vec<(NodeId, NodeId)>> {
        let mut done = std::collections::HashSet::new();
        let mut faces = Vec::new();
        for (u, rot) in self.rotation.iter().enumerate() {
            for &v in rot {
                if done.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while done.insert((a, b)) {
                    face.push((a, b));
                    let c = self.next(b, a);
                    (a, b) = (b, c);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Whether this is a planar rotation system of `g`: every rotation is a
    /// permutation of the neighbors and Euler's formula holds per component.
    pub fn is_planar_embedding_of(&self, g: &Graph) -> bool {
        if self.rotation.len() != g.n() {
            return false;
        }
        for v in g.nodes() {
            let mut r = self.rotation[v].clone();
            r.sort_unstable();
            if r != g.neighbors(v) {
                return false;
            }
        }
        let comps = crate::graph::components(g, &crate::graph::FailureSet::none_for(g));
        let mut comp_of = vec![0; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut faces = vec![0usize; comps.len()];
        for face in self.faces() {
            faces[comp_of[face[0].0]] += 1;
        }
        let mut edges = vec![0usize; comps.len()];
        for &(u, _) in g.edges() {
            edges[comp_of[u]] += 1;
        }
        comps.iter().enumerate().all(|(i, c)| edges[i] == 0 || faces[i] + c.len() == edges[i] + 2)
    }
}

pub fn is_planar(g: &Graph) -> bool {
    planar_embedding(g).is_some()
}

/// A planar embedding of `g`, or `None` if `g` is not planar.
pub fn planar_embedding(g: &Graph) -> Option<Embedding> {
    let n = g.n();
    if n > 2 && g.m() > 3 * n - 6 {
        return None;
    }
    let mut lr = Lr::new(g);
    for v in g.nodes() {
        if lr.height[v] == NONE {
            lr.height[v] = 0;
            lr.roots.push(v);
            lr.orientation(v);
        }
    }
    for v in g.nodes() {
        let mut out = lr.out[v].clone();
        out.sort_by_key(|&d| lr.nesting[d]);
        lr.ordered[v] = out;
    }
    for i in 0..lr.roots.len() {
        if !lr.testing(lr.roots[i]) {
            return None;
        }
    }
    for d in 0..lr.dart_count() {
        if lr.oriented_dart[d] {
            let s = lr.sign(d) as i64;
            lr.nesting[d] *= s;
        }
    }
    let mut emb = HalfEdges::new(g);
    for v in g.nodes() {
        let mut out = lr.out[v].clone();
        out.sort_by_key(|&d| lr.nesting[d]);
        let mut prev = None;
        for &d in &out {
            let w = lr.head[d];
            emb.add_cw(v, w, prev);
            prev = Some(w);
        }
        lr.ordered[v] = out;
    }
    for i in 0..lr.roots.len() {
        lr.embedding(lr.roots[i], &mut emb);
    }
    Some(emb.into_embedding())
}

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

/// State of the left-right test. Edges are darts `offset[v] + i` for the
/// `i`-th neighbor of `v`; only darts in DFS orientation are used.
struct Lr<'g> {
    g: &'g Graph,
    offset: Vec<usize>,
    tail: Vec<NodeId>,
    head: Vec<NodeId>,
    oriented_edge: Vec<bool>,
    oriented_dart: Vec<bool>,
    roots: Vec<NodeId>,
    height: Vec<usize>,
    parent: Vec<Option<usize>>,
    out: Vec<Vec<usize>>,
    ordered: Vec<Vec<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    refs: Vec<Option<usize>>,
    side: Vec<i8>,
    stack: Vec<ConflictPair>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<Option<usize>>,
    left_ref: Vec<NodeId>,
    right_ref: Vec<NodeId>,
}

impl<'g> Lr<'g> {
    fn new(g: &'g Graph) -> Lr<'g> {
        let mut offset = Vec::with_capacity(g.n() + 1);
        let (mut tail, mut head) = (Vec::new(), Vec::new());
        for v in g.nodes() {
            offset.push(tail.len());
            for &w in g.neighbors(v) {
                tail.push(v);
                head.push(w);
            }
        }
        offset.push(tail.len());
        let d = tail.len();
        Lr {
            g,
            offset,
            tail,
            head,
            oriented_edge: vec![false; g.m()],
            oriented_dart: vec![false; d],
            roots: Vec::new(),
            height: vec![NONE; g.n()],
            parent: vec![None; g.n()],
            out: vec![Vec::new(); g.n()],
            ordered: vec![Vec::new(); g.n()],
            lowpt: vec![0; d],
            lowpt2: vec![0; d],
            nesting: vec![0; d],
            refs: vec![None; d],
            side: vec![1; d],
            stack: Vec::new(),
            stack_bottom: vec![0; d],
            lowpt_edge: vec![None; d],
            left_ref: vec![NONE; g.n()],
            right_ref: vec![NONE; g.n()],
        }
    }

    fn dart_count(&self) -> usize {
        self.tail.len()
    }

    fn orientation(&mut self, v: NodeId) {
        let e = self.parent[v];
        for i in 0..self.g.degree(v) {
            let eid = self.g.incident_edges(v)[i];
            if self.oriented_edge[eid] {
                continue;
            }
            self.oriented_edge[eid] = true;
            let vw = self.offset[v] + i;
            let w = self.head[vw];
            self.oriented_dart[vw] = true;
            self.out[v].push(vw);
            self.lowpt[vw] = self.height[v];
            self.lowpt2[vw] = self.height[v];
            if self.height[w] == NONE {
                self.parent[w] = Some(vw);
                self.height[w] = self.height[v] + 1;
                self.orientation(w);
            } else {
                self.lowpt[vw] = self.height[w];
            }
            self.nesting[vw] = 2 * self.lowpt[vw] as i64;
            if self.lowpt2[vw] < self.height[v] {
                self.nesting[vw] += 1;
            }
            if let Some(e) = e {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && self.lowpt[i.high.unwrap()] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            return self.lowpt[p.right.low.unwrap()];
        }
        if p.right.is_empty() {
            return self.lowpt[p.left.low.unwrap()];
        }
        self.lowpt[p.left.low.unwrap()].min(self.lowpt[p.right.low.unwrap()])
    }

    fn testing(&mut self, v: NodeId) -> bool {
        let e = self.parent[v];
        for k in 0..self.ordered[v].len() {
            let ei = self.ordered[v][k];
            let w = self.head[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent[w] == Some(ei) {
                if !self.testing(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = Some(ei);
                self.stack.push(ConflictPair { left: Interval::default(), right: Interval { low: Some(ei), high: Some(ei) } });
            }
            if self.lowpt[ei] < self.height[v] {
                let e = e.expect("only non-root nodes have return edges");
                if k == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = e {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        while let Some(mut q) = self.stack.pop() {
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            if self.lowpt[q.right.low.unwrap()] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.refs[p.right.low.unwrap()] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[q.right.low.unwrap()] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(l) = p.right.low {
                self.refs[l] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(l) = p.left.low {
                self.refs[l] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.tail[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high.filter(|&h| self.head[h] == u) {
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high.filter(|&h| self.head[h] == u) {
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(l) = p.right.low {
                    self.refs[l] = p.left.low;
                    self.side[l] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.refs[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }

    fn sign(&mut self, e: usize) -> i8 {
        let mut chain = vec![e];
        while let Some(r) = self.refs[*chain.last().unwrap()] {
            chain.push(r);
        }
        let mut s = self.side[*chain.last().unwrap()];
        for &d in chain.iter().rev().skip(1) {
            self.side[d] *= s;
            self.refs[d] = None;
            s = self.side[d];
        }
        self.side[e]
    }

    fn embedding(&mut self, v: NodeId, emb: &mut HalfEdges) {
        for k in 0..self.ordered[v].len() {
            let ei = self.ordered[v][k];
            let w = self.head[ei];
            if self.parent[w] == Some(ei) {
                emb.add_first(w, v);
                self.left_ref[v] = w;
                self.right_ref[v] = w;
                self.embedding(w, emb);
            } else if self.side[ei] == 1 {
                emb.add_cw(w, v, Some(self.right_ref[w]));
            } else {
                emb.add_ccw(w, v, Some(self.left_ref[w]));
                self.left_ref[w] = v;
            }
        }
    }
}

/// Doubly linked rotation lists under construction.
struct HalfEdges<'g> {
    g: &'g Graph,
    cw: Vec<Vec<NodeId>>,
    ccw: Vec<Vec<NodeId>>,
    first: Vec<Option<NodeId>>,
}

impl<'g> HalfEdges<'g> {
    fn new(g: &'g Graph) -> HalfEdges<'g> {
        let slots = |v: NodeId| vec![NONE; g.degree(v)];
        HalfEdges { g, cw: g.nodes().map(slots).collect(), ccw: g.nodes().map(slots).collect(), first: vec![None; g.n()] }
    }

    fn idx(&self, v: NodeId, w: NodeId) -> usize {
        self.g.neighbor_index(v, w).expect("half-edge along a graph edge")
    }

    fn add_cw(&mut self, v: NodeId, w: NodeId, reference: Option<NodeId>) {
        let iw = self.idx(v, w);
        let Some(r) = reference else {
            self.cw[v][iw] = w;
            self.ccw[v][iw] = w;
            self.first[v] = Some(w);
            return;
        };
        let ir = self.idx(v, r);
        let after = self.cw[v][ir];
        let ia = self.idx(v, after);
        self.cw[v][ir] = w;
        self.cw[v][iw] = after;
        self.ccw[v][ia] = w;
        self.ccw[v][iw] = r;
    }

    fn add_ccw(&mut self, v: NodeId, w: NodeId, reference: Option<NodeId>) {
        let Some(r) = reference else {
            self.add_cw(v, w, None);
            return;
        };
        let before = self.ccw[v][self.idx(v, r)];
        self.add_cw(v, w, Some(before));
        if self.first[v] == Some(r) {
            self.first[v] = Some(w);
        }
    }

    fn add_first(&mut self, v: NodeId, w: NodeId) {
        let r = self.first[v];
        self.add_ccw(v, w, r);
    }

    fn into_embedding(self) -> Embedding {
        let rotation = self
            .g
            .nodes()
            .map(|v| {
                let mut rot = Vec::with_capacity(self.g.degree(v));
                if let Some(start) = self.first[v] {
                    let mut cur = start;
                    loop {
                        rot.push(cur);
                        cur = self.cw[v][self.idx(v, cur)];
                        if cur == start || rot.len() > self.g.degree(v) {
                            break;
                        }
                    }
                }
                rot
            })
            .collect();
        Embedding { rotation }
    }
}


#[cfg(test)]
mod brute {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let x = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    /// Tries every rotation system, fixing the first neighbor of each node.
    fn planar_by_rotations(g: &Graph) -> bool {
        let choices: Vec<Vec<Vec<NodeId>>> = g
            .nodes()
            .map(|v| {
                let nb = g.neighbors(v);
                if nb.is_empty() {
                    return vec![Vec::new()];
                }
                permutations(&nb[1..]).into_iter().map(|mut p| {
                    p.insert(0, nb[0]);
                    p
                }).collect()
            })
            .collect();
        let mut idx = vec![0; g.n()];
        loop {
            let emb = Embedding { rotation: idx.iter().enumerate().map(|(v, &i)| choices[v][i].clone()).collect() };
            if emb.is_planar_embedding_of(g) {
                return true;
            }
            let mut v = 0;
            loop {
                if v == g.n() {
                    return false;
                }
                idx[v] += 1;
                if idx[v] < choices[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }

    #[test]
    fn agrees_with_rotation_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.gen_range(5..=6);
            let p = rng.gen_range(0.5..0.95);
            let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
            let g = Graph::new(n, &pairs).unwrap();
            let systems: usize = g.nodes().map(|v| (1..g.degree(v).max(1)).product::<usize>()).product();
            if systems > 50_000 {
                continue;
            }
            assert_eq!(is_planar(&g), planar_by_rotations(&g), "{g:?}");
        }
    }
}
