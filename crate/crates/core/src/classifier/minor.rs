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

//! Minor containment for small fixed `H`: reductions, exact
//! branch-and-bound on bitset graphs and a seeded contraction heuristic.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::planarity::is_planar;
use crate::graph::{biconnected_components, components, FailureSet, Graph, MinorMapping, NodeId};

/// Outcome of a minor query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorQueryResult {
    Found(MinorMapping),
    /// Only reported after an exhaustive search.
    Absent,
    /// Budget exhausted or heuristic search unsuccessful.
    Unknown,
}

impl MinorQueryResult {
    pub fn is_found(&self) -> bool {
        matches!(self, MinorQueryResult::Found(_))
    }
}

/// Limits of the minor search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorBudget {
    /// Largest reduced block that gets an exact search.
    pub exact_threshold: usize,
    /// Search-tree nodes per exact search.
    pub node_limit: u64,
    /// Randomized contraction rounds above the threshold.
    pub heuristic_rounds: usize,
    pub seed: u64,
}

impl Default for MinorBudget {
    fn default() -> Self {
        MinorBudget { exact_threshold: 30, node_limit: 200_000, heuristic_rounds: 64, seed: 0x5eed }
    }
}

impl MinorBudget {
    /// A budget that never searches and so answers `Unknown` unless a
    /// trivial test decides.
    pub fn empty() -> Self {
        MinorBudget { exact_threshold: 0, node_limit: 0, heuristic_rounds: 0, seed: 0 }
    }
}

struct Pattern {
    n: usize,
    m: usize,
    min_deg: usize,
    deg: Vec<usize>,
    adj: Vec<u64>,
    /// Visiting order for the final bijection search.
    order: Vec<usize>,
}

impl Pattern {
    fn new(h: &Graph) -> Pattern {
        let adj: Vec<u64> = h.nodes().map(|v| h.neighbors(v).iter().fold(0, |a, &w| a | 1 << w)).collect();
        let deg: Vec<usize> = h.nodes().map(|v| h.degree(v)).collect();
        let mut order = Vec::with_capacity(h.n());
        let mut seen = vec![false; h.n()];
        let start = (0..h.n()).max_by_key(|&v| (deg[v], std::cmp::Reverse(v))).unwrap_or(0);
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in h.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Pattern { n: h.n(), m: h.m(), min_deg: deg.iter().copied().min().unwrap_or(0), deg, adj, order }
    }

    fn cyclomatic(&self) -> usize {
        self.m + 1 - self.n
    }

    fn two_connected(h: &Graph) -> bool {
        h.n() >= 3 && biconnected_components(h).len() == 1 && h.nodes().all(|v| h.degree(v) > 0)
    }

    fn adjacent_degree_two(&self) -> bool {
        (0..self.n).any(|v| self.deg[v] == 2 && (0..self.n).any(|w| self.adj[v] >> w & 1 == 1 && self.deg[w] == 2))
    }
}

/// Working graph over local ids, each holding its lineage of host nodes.
#[derive(Clone)]
struct Reduced {
    adj: Vec<BTreeSet<usize>>,
    members: Vec<Vec<NodeId>>,
    alive: Vec<bool>,
}

impl Reduced {
    fn from_edges(nodes: &[NodeId], edges: &[(NodeId, NodeId)]) -> Reduced {
        let index = |v: NodeId| nodes.binary_search(&v).expect("edge endpoint in node list");
        let mut adj = vec![BTreeSet::new(); nodes.len()];
        for &(u, v) in edges {
            adj[index(u)].insert(index(v));
            adj[index(v)].insert(index(u));
        }
        Reduced { adj, members: nodes.iter().map(|&v| vec![v]).collect(), alive: vec![true; nodes.len()] }
    }

    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.alive[v])
    }

    fn n(&self) -> usize {
        self.live().count()
    }

    fn m(&self) -> usize {
        self.live().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    fn delete(&mut self, v: usize) {
        for w in std::mem::take(&mut self.adj[v]) {
            self.adj[w].remove(&v);
        }
        self.alive[v] = false;
    }

    /// Merges `v` into its neighbor `u`.
    fn contract(&mut self, u: usize, v: usize) {
        let nv = std::mem::take(&mut self.adj[v]);
        for w in nv {
            self.adj[w].remove(&v);
            if w != u {
                self.adj[w].insert(u);
                self.adj[u].insert(w);
            }
        }
        let mv = std::mem::take(&mut self.members[v]);
        self.members[u].extend(mv);
        self.alive[v] = false;
    }

    /// Applies the reductions that preserve containment of `h`.
    fn reduce(&mut self, h: &Pattern) {
        let chains = h.min_deg == 2 && !h.adjacent_degree_two();
        loop {
            let mut changed = false;
            for v in 0..self.adj.len() {
                if !self.alive[v] {
                    continue;
                }
                let d = self.adj[v].len();
                if h.min_deg >= 2 && d <= 1 {
                    self.delete(v);
                    changed = true;
                } else if d == 2 && h.min_deg >= 3 {
                    let u = *self.adj[v].iter().next().expect("degree two");
                    self.contract(u, v);
                    changed = true;
                } else if d == 2 && chains {
                    if let Some(&u) = self.adj[v].iter().find(|&&u| self.adj[u].len() == 2) {
                        self.contract(u, v);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn compact(&self) -> (Vec<usize>, Vec<u64>) {
        let ids: Vec<usize> = self.live().collect();
        let adj = ids
            .iter()
            .map(|&v| self.adj[v].iter().fold(0u64, |a, w| a | 1 << ids.binary_search(w).expect("alive neighbor")))
            .collect();
        (ids, adj)
    }
}

struct Exhausted;

/// Exact branch-and-bound over a bitset graph of at most 64 nodes.
struct Exact<'a> {
    h: &'a Pattern,
    budget: u64,
    nodes: u64,
    failed: HashSet<Vec<u64>>,
}

const MEMO_CAP: usize = 1 << 20;

impl<'a> Exact<'a> {
    fn new(h: &'a Pattern, budget: u64) -> Self {
        Exact { h, budget, nodes: 0, failed: HashSet::new() }
    }

    /// Returns, per local node, the `H` node its current class maps to.
    fn run(&mut self, adj: Vec<u64>) -> Result<Option<Vec<Option<usize>>>, Exhausted> {
        let n = adj.len();
        let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let rep: Vec<usize> = (0..n).collect();
        let found = self.search(adj, alive, 0, rep.clone())?;
        Ok(found.map(|(rep, image)| rep.iter().map(|&r| image[r]).collect()))
    }

    fn components(adj: &[u64], alive: u64) -> usize {
        let mut left = alive;
        let mut c = 0;
        while left != 0 {
            let mut frontier = left & left.wrapping_neg();
            let mut comp = frontier;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let next = adj[v] & alive & !comp;
                comp |= next;
                frontier |= next;
            }
            left &= !comp;
            c += 1;
        }
        c
    }

    #[allow(clippy::type_complexity)]
    fn search(
        &mut self,
        adj: Vec<u64>,
        alive: u64,
        marked: u64,
        rep: Vec<usize>,
    ) -> Result<Option<(Vec<usize>, Vec<Option<usize>>)>, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Exhausted);
        }
        let (mut adj, mut alive, mut rep) = (adj, alive, rep);
        self.simplify(&mut adj, &mut alive, marked, &mut rep);
        let h = self.h;
        let n = alive.count_ones() as usize;
        let m = bits(alive).map(|v| adj[v].count_ones() as usize).sum::<usize>() / 2;
        if n < h.n || m < h.m || (marked.count_ones() as usize) > h.n {
            return Ok(None);
        }
        if bits(marked).any(|v| (adj[v].count_ones() as usize) < h.min_deg) {
            return Ok(None);
        }
        if m + Self::components(&adj, alive) < h.cyclomatic() + n {
            return Ok(None);
        }
        let key: Vec<u64> = [alive, marked].into_iter().chain(bits(alive).map(|v| adj[v])).collect();
        if self.failed.contains(&key) {
            return Ok(None);
        }
        let out = self.branch(&adj, alive, marked, &rep, n)?;
        if out.is_none() && self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
        Ok(out)
    }

    /// Deletes unmarked nodes of degree at most one and, when `H` has
    /// minimum degree three, suppresses unmarked nodes of degree two.
    fn simplify(&self, adj: &mut [u64], alive: &mut u64, marked: u64, rep: &mut [usize]) {
        loop {
            let mut changed = false;
            for v in bits(*alive & !marked) {
                let d = adj[v].count_ones() as usize;
                let target = if d <= 1 && self.h.min_deg >= 2 {
                    None
                } else if d == 2 && self.h.min_deg >= 3 {
                    bits(adj[v] & !marked).next()
                } else {
                    continue;
                };
                match target {
                    Some(u) => contract_bits(adj, v, u, rep),
                    None => delete_bits(adj, v),
                }
                *alive &= !(1 << v);
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn branch(
        &mut self,
        adj: &[u64],
        alive: u64,
        marked: u64,
        rep: &[usize],
        n: usize,
    ) -> Result<Option<(Vec<usize>, Vec<Option<usize>>)>, Exhausted> {
        if n == self.h.n {
            return Ok(self.bijection(adj, alive).map(|image| (rep.to_vec(), image)));
        }
        let Some(v) = bits(alive & !marked).min_by_key(|&v| (adj[v].count_ones(), v)) else {
            return Ok(None);
        };
        if adj[v].count_ones() as usize >= self.h.min_deg {
            if let Some(x) = self.search(adj.to_vec(), alive, marked | 1 << v, rep.to_vec())? {
                return Ok(Some(x));
            }
        }
        for u in bits(adj[v] & !marked) {
            let mut a = adj.to_vec();
            let mut r = rep.to_vec();
            contract_bits(&mut a, v, u, &mut r);
            if let Some(x) = self.search(a, alive & !(1 << v), marked, r)? {
                return Ok(Some(x));
            }
        }
        let mut a = adj.to_vec();
        delete_bits(&mut a, v);
        self.search(a, alive & !(1 << v), marked, rep.to_vec())
    }

    /// An edge-preserving bijection from `H` onto the alive nodes.
    fn bijection(&self, adj: &[u64], alive: u64) -> Option<Vec<Option<usize>>> {
        let h = self.h;
        let mut phi = vec![usize::MAX; h.n];
        fn rec(h: &Pattern, adj: &[u64], alive: u64, k: usize, used: u64, phi: &mut Vec<usize>) -> bool {
            if k == h.n {
                return true;
            }
            let x = h.order[k];
            for g in bits(alive & !used) {
                if (adj[g].count_ones() as usize) < h.deg[x] {
                    continue;
                }
                let ok = (0..k).all(|i| {
                    let y = h.order[i];
                    h.adj[x] >> y & 1 == 0 || adj[g] >> phi[y] & 1 == 1
                });
                if ok {
                    phi[x] = g;
                    if rec(h, adj, alive, k + 1, used | 1 << g, phi) {
                        return true;
                    }
                }
            }
            false
        }
        if !rec(h, adj, alive, 0, 0, &mut phi) {
            return None;
        }
        let mut image = vec![None; adj.len()];
        for (x, &g) in phi.iter().enumerate() {
            image[g] = Some(x);
        }
        Some(image)
    }
}

/// Merges `v` into its neighbor `u`.
fn contract_bits(adj: &mut [u64], v: usize, u: usize, rep: &mut [usize]) {
    let nv = adj[v] & !(1 << u);
    adj[u] = (adj[u] | nv) & !(1 << v);
    for w in bits(nv) {
        adj[w] = (adj[w] & !(1 << v)) | 1 << u;
    }
    adj[v] = 0;
    for x in rep.iter_mut() {
        if *x == v {
            *x = u;
        }
    }
}

fn delete_bits(adj: &mut [u64], v: usize) {
    for w in bits(adj[v]) {
        adj[w] &= !(1 << v);
    }
    adj[v] = 0;
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let v = x.trailing_zeros() as usize;
            x &= x - 1;
            v
        })
    })
}

enum BlockOutcome {
    Found(Vec<Option<usize>>),
    Absent,
    Unknown,
}

fn lift(r: &Reduced, ids: &[usize], image: &[Option<usize>], n_host: usize) -> Vec<Option<usize>> {
    let mut map = vec![None; n_host];
    for (i, &local) in ids.iter().enumerate() {
        if let Some(x) = image[i] {
            for &v in &r.members[local] {
                map[v] = Some(x);
            }
        }
    }
    map
}

fn exact_on(r: &Reduced, h: &Pattern, limit: u64, n_host: usize) -> BlockOutcome {
    let (ids, adj) = r.compact();
    match Exact::new(h, limit).run(adj) {
        Ok(Some(image)) => BlockOutcome::Found(lift(r, &ids, &image, n_host)),
        Ok(None) => BlockOutcome::Absent,
        Err(Exhausted) => BlockOutcome::Unknown,
    }
}

fn heuristic_on(r: &Reduced, h: &Pattern, budget: &MinorBudget, n_host: usize) -> BlockOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let per_round = (budget.node_limit / budget.heuristic_rounds.max(1) as u64).max(1);
    for round in 0..budget.heuristic_rounds {
        // sweep target sizes from just above |H| up to the exact threshold
        let span = budget.exact_threshold.clamp(h.n, 64) - h.n;
        let target = h.n + (round * 3) % (span + 1);
        let mut w = r.clone();
        while w.n() > target {
            let mut live: Vec<usize> = w.live().collect();
            live.shuffle(&mut rng);
            let Some(&v) = live.iter().min_by_key(|&&v| w.members[v].len()) else { break };
            let mut nbrs: Vec<usize> = w.adj[v].iter().copied().collect();
            nbrs.shuffle(&mut rng);
            match nbrs.iter().min_by_key(|&&u| w.members[u].len()) {
                Some(&u) => w.contract(u, v),
                None => w.delete(v),
            }
            w.reduce(h);
        }
        if w.n() < h.n || w.m() < h.m {
            continue;
        }
        if let BlockOutcome::Found(map) = exact_on(&w, h, per_round, n_host) {
            return BlockOutcome::Found(map);
        }
    }
    BlockOutcome::Unknown
}

/// Tests whether `h` (connected, at most 8 nodes) is a minor of `g`.
/// When `h` is 2-connected the search runs per biconnected block of `g`.
pub fn contains_minor(g: &Graph, h: &Graph, budget: &MinorBudget) -> MinorQueryResult {
    assert!(h.n() <= 8, "pattern graphs have at most 8 nodes");
    if h.n() == 0 {
        return MinorQueryResult::Found(MinorMapping { branch_sets: vec![], edge_witness: vec![] });
    }
    if g.n() < h.n() || g.m() < h.m() || g.m() + components(g, &FailureSet::none_for(g)).len() < h.m() + 1 + g.n() - h.n() {
        return MinorQueryResult::Absent;
    }
    if is_planar(g) && !is_planar(h) {
        return MinorQueryResult::Absent;
    }
    let pat = Pattern::new(h);
    let blocks: Vec<Reduced> = if Pattern::two_connected(h) {
        biconnected_components(g)
            .into_iter()
            .filter(|b| b.len() >= h.m())
            .map(|b| {
                let edges: Vec<_> = b.iter().map(|&e| g.edge(e)).collect();
                let nodes: Vec<NodeId> =
                    edges.iter().flat_map(|&(u, v)| [u, v]).collect::<BTreeSet<_>>().into_iter().collect();
                Reduced::from_edges(&nodes, &edges)
            })
            .collect()
    } else {
        vec![Reduced::from_edges(&g.nodes().collect::<Vec<_>>(), g.edges())]
    };
    let mut unknown = false;
    for mut r in blocks {
        r.reduce(&pat);
        let (n, m) = (r.n(), r.m());
        if n < pat.n || m < pat.m || m + 1 < pat.cyclomatic() + n {
            continue;
        }
        let mut outcome = BlockOutcome::Unknown;
        if n <= budget.exact_threshold.min(64) {
            outcome = exact_on(&r, &pat, budget.node_limit, g.n());
        }
        if matches!(outcome, BlockOutcome::Unknown) {
            outcome = heuristic_on(&r, &pat, budget, g.n());
        }
        match outcome {
            BlockOutcome::Found(map) => {
                let m = MinorMapping::from_node_map(g, h, &map).expect("search yields a valid model");
                return MinorQueryResult::Found(m);
            }
            BlockOutcome::Absent => {}
            BlockOutcome::Unknown => unknown = true,
        }
    }
    if unknown {
        MinorQueryResult::Unknown
    } else {
        MinorQueryResult::Absent
    }
}
