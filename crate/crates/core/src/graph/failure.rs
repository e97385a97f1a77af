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

use std::fmt;

use super::{EdgeId, Graph, GraphError, NodeId};

/// A set of failed edges, stored as a bitset over edge ids.
///
/// Ordering is by the little-endian bitmask value, so for graphs with at
/// most 64 edges it coincides with ascending `u64` masks.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FailureSet {
    m: usize,
    words: Vec<u64>,
}

impl fmt::Debug for FailureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PartialOrd for FailureSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FailureSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.m
            .cmp(&other.m)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl FailureSet {
    pub fn empty(m: usize) -> FailureSet {
        FailureSet { m, words: vec![0; m.div_ceil(64)] }
    }

    pub fn none_for(g: &Graph) -> FailureSet {
        Self::empty(g.m())
    }

    /// Bit `i` of `mask` fails edge `i`. Bits at or above `m` are ignored.
    pub fn from_mask(m: usize, mask: u64) -> FailureSet {
        let mut f = Self::empty(m);
        if m > 0 {
            let keep = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
            f.words[0] = mask & keep;
        }
        f
    }

    pub fn from_ids(m: usize, ids: impl IntoIterator<Item = EdgeId>) -> FailureSet {
        let mut f = Self::empty(m);
        for e in ids {
            f.insert(e);
        }
        f
    }

    /// Fails the edges given by endpoints; each must exist in `g`.
    pub fn from_edges(g: &Graph, pairs: &[(NodeId, NodeId)]) -> Result<FailureSet, GraphError> {
        let mut f = Self::none_for(g);
        for &(u, v) in pairs {
            f.insert(g.edge_id(u, v).ok_or(GraphError::MissingEdge(u, v))?);
        }
        Ok(f)
    }

    /// Fails every edge of `g` except the listed survivors.
    pub fn all_except(g: &Graph, survivors: &[(NodeId, NodeId)]) -> Result<FailureSet, GraphError> {
        let mut f = Self::from_ids(g.m(), 0..g.m());
        for &(u, v) in survivors {
            f.remove(g.edge_id(u, v).ok_or(GraphError::MissingEdge(u, v))?);
        }
        Ok(f)
    }

    pub fn universe(&self) -> usize {
        self.m
    }

    pub fn insert(&mut self, e: EdgeId) {
        assert!(e < self.m, "edge id {e} out of range");
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn remove(&mut self, e: EdgeId) {
        if e < self.m {
            self.words[e / 64] &= !(1 << (e % 64));
        }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        e < self.m && self.words[e / 64] & (1 << (e % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.m).filter(move |&e| self.contains(e))
    }

    pub fn union(&self, other: &FailureSet) -> FailureSet {
        assert_eq!(self.m, other.m, "failure sets over different edge sets");
        FailureSet {
            m: self.m,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset(&self, other: &FailureSet) -> bool {
        self.m == other.m && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// The mask value when the universe fits in one word.
    pub fn mask(&self) -> Option<u64> {
        (self.m <= 64).then(|| self.words.first().copied().unwrap_or(0))
    }

    /// Failed edges as endpoint pairs of `g`.
    pub fn edges(&self, g: &Graph) -> Vec<(NodeId, NodeId)> {
        self.iter().map(|e| g.edge(e)).collect()
    }

    /// Whether the edge between `u` and `v` exists in `g` and is not failed.
    pub fn alive(&self, g: &Graph, u: NodeId, v: NodeId) -> bool {
        g.edge_id(u, v).is_some_and(|e| !self.contains(e))
    }
}
