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
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::forwarding::{
    simulate_route, simulate_tour, ForwardingError, ForwardingPattern, RoutingModel, TourOutcome, TourStatus, WalkOutcome,
    WalkStatus, Walker,
};
use crate::graph::{st_edge_connectivity, FailureSet, Graph, NodeId};
use crate::par::Execution;

/// Which failure sets and starts a pattern is promised to handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMode {
    /// Deliver whenever the start is connected to `t`.
    PerfectResilience,
    /// Deliver whenever the start and `t` stay `r`-edge-connected.
    RTolerance(usize),
    /// At most `k` failures; for touring patterns this is `k`-resilient touring.
    KFailures(usize),
    /// Tour the start's component under every failure set.
    Touring,
}

impl fmt::Display for VerificationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationMode::PerfectResilience => write!(f, "perfect"),
            VerificationMode::RTolerance(r) => write!(f, "tolerance:{r}"),
            VerificationMode::KFailures(k) => write!(f, "kfail:{k}"),
            VerificationMode::Touring => write!(f, "tour"),
        }
    }
}

impl std::str::FromStr for VerificationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| x.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
        match s.split_once(':') {
            None if s == "perfect" => Ok(VerificationMode::PerfectResilience),
            None if s == "tour" => Ok(VerificationMode::Touring),
            Some(("tolerance", r)) => match num(r)? {
                0 => Err("tolerance needs r >= 1".into()),
                r => Ok(VerificationMode::RTolerance(r)),
            },
            Some(("kfail", k)) => Ok(VerificationMode::KFailures(num(k)?)),
            _ => Err(format!("unknown mode {s:?}; expected perfect, tolerance:R, kfail:K or tour")),
        }
    }
}

/// Limits of the failure-set search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Enumerate all `2^m` failure sets when `m` is at most this.
    pub exhaustive_threshold: usize,
    /// Number of random failure sets drawn when enumeration is impossible.
    pub samples: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { exhaustive_threshold: 16, samples: 20_000, seed: 0x5eed, execution: Execution::default() }
    }
}

/// The failing run found by [`verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailingRun {
    Route(WalkOutcome),
    Tour(TourOutcome),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub failures: FailureSet,
    pub start: NodeId,
    pub run: FailingRun,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every promised case was checked and handled.
    Holds { failure_sets: usize, simulations: usize },
    Counterexample(Box<Counterexample>),
    /// Only a sample was checked and no failure was found.
    Inconclusive { failure_sets: usize, simulations: usize },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Counterexample(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("mode {mode} does not apply to {model} patterns")]
    ModeMismatch { mode: VerificationMode, model: RoutingModel },
    #[error("pattern scope lacks {0}")]
    Scope(&'static str),
    #[error("node {0} is not in the graph")]
    MissingNode(NodeId),
    #[error(transparent)]
    Forwarding(#[from] ForwardingError),
}

/// Starts a pattern is checked from: `s` for source-destination routing,
/// every node but `t` for destination-based routing, every node for touring.
pub fn starts(g: &Graph, p: &ForwardingPattern) -> Vec<NodeId> {
    match p.model {
        RoutingModel::SourceDestination => p.scope.s.into_iter().collect(),
        RoutingModel::DestinationOnly => g.nodes().filter(|&v| Some(v) != p.scope.t).collect(),
        RoutingModel::Touring => g.nodes().collect(),
    }
}

fn check_inputs(g: &Graph, p: &ForwardingPattern, mode: VerificationMode) -> Result<(), VerifyError> {
    let touring = p.model == RoutingModel::Touring;
    let fits = match mode {
        VerificationMode::Touring => touring,
        VerificationMode::KFailures(_) => true,
        _ => !touring,
    };
    if !fits {
        return Err(VerifyError::ModeMismatch { mode, model: p.model });
    }
    if p.model.uses_destination() {
        let t = p.scope.t.ok_or(VerifyError::Scope("a destination"))?;
        if t >= g.n() {
            return Err(VerifyError::MissingNode(t));
        }
    }
    if p.model.uses_source() {
        let s = p.scope.s.ok_or(VerifyError::Scope("a source"))?;
        if s >= g.n() {
            return Err(VerifyError::MissingNode(s));
        }
    }
    Ok(())
}

enum Space {
    Masks { m: usize, k: Option<usize> },
    Combinations { m: usize, k: usize },
    Sample { m: usize, count: usize, seed: u64 },
}

const CHUNK: usize = 512;

impl Space {
    fn new(m: usize, mode: VerificationMode, budget: &Budget) -> Space {
        let k = match mode {
            VerificationMode::KFailures(k) => Some(k),
            _ => None,
        };
        if m <= budget.exhaustive_threshold.min(40) {
            Space::Masks { m, k }
        } else if let Some(k) = k {
            Space::Combinations { m, k: k.min(m) }
        } else {
            Space::Sample { m, count: budget.samples, seed: budget.seed }
        }
    }

    fn complete(&self) -> bool {
        !matches!(self, Space::Sample { .. })
    }

    /// Failure sets in search order, produced in batches.
    fn batches(&self) -> Box<dyn Iterator<Item = Vec<FailureSet>> + '_> {
        const BATCH: usize = 1 << 14;
        match *self {
            Space::Masks { m, k } => {
                let total = 1u64 << m;
                Box::new((0..total).step_by(BATCH).map(move |lo| {
                    (lo..(lo + BATCH as u64).min(total))
                        .filter(|mask| k.is_none_or(|k| mask.count_ones() as usize <= k))
                        .map(|mask| FailureSet::from_mask(m, mask))
                        .collect()
                }))
            }
            Space::Combinations { m, k } => {
                let mut combos = (0..=k).flat_map(move |size| Combinations::new(m, size));
                Box::new(std::iter::from_fn(move || {
                    let batch: Vec<_> = combos.by_ref().take(BATCH).map(|ids| FailureSet::from_ids(m, ids)).collect();
                    (!batch.is_empty()).then_some(batch)
                }))
            }
            Space::Sample { m, count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut left = count;
                Box::new(std::iter::from_fn(move || {
                    let n = left.min(BATCH);
                    left -= n;
                    let batch: Vec<_> = (0..n)
                        .map(|_| FailureSet::from_ids(m, (0..m).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>()))
                        .collect();
                    (!batch.is_empty()).then_some(batch)
                }))
            }
        }
    }
}

/// Lexicographic `size`-subsets of `0..m`.
struct Combinations {
    m: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(m: usize, size: usize) -> Combinations {
        Combinations { m, idx: (0..size).collect(), done: size > m }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Whether `start` is promised delivery (or a tour) under `f`; `t_side` is
/// the sorted component of `t`.
fn promised(g: &Graph, f: &FailureSet, mode: VerificationMode, t: Option<NodeId>, start: NodeId, t_side: &[NodeId]) -> bool {
    match (mode, t) {
        (VerificationMode::Touring, _) | (VerificationMode::KFailures(_), None) => true,
        (VerificationMode::RTolerance(r), Some(t)) => start == t || st_edge_connectivity(g, f, start, t) >= r,
        (_, Some(_)) => t_side.binary_search(&start).is_ok(),
        (_, None) => true,
    }
}

/// Checks `p` against every promised (failure set, start) pair.
///
/// Failure sets are enumerated in ascending bitmask order when `m` is small,
/// by increasing size for `KFailures` otherwise, and sampled with a fixed
/// seed as a last resort (yielding `Inconclusive` rather than `Holds`).
/// The counterexample reported is always the first in search order.
pub fn verify(g: &Graph, p: &ForwardingPattern, mode: VerificationMode, budget: &Budget) -> Result<Verdict, VerifyError> {
    check_inputs(g, p, mode)?;
    let space = Space::new(g.m(), mode, budget);
    let starts = starts(g, p);
    let t = if p.model.uses_destination() { p.scope.t } else { None };
    let sims = AtomicUsize::new(0);
    let mut failure_sets = 0;
    for batch in space.batches() {
        failure_sets += batch.len();
        let chunks: Vec<&[FailureSet]> = batch.chunks(CHUNK).collect();
        let found = budget.execution.find_first(&chunks, |chunk| {
            let mut w = Walker::new(g);
            let mut local = 0;
            let mut hit = None;
            'sets: for f in chunk.iter() {
                w.set_failures(f);
                let t_side = t.map(|t| w.component_of(t)).unwrap_or_default();
                for &start in &starts {
                    if !promised(g, f, mode, t, start, &t_side) {
                        continue;
                    }
                    local += 1;
                    let ok = match p.model {
                        RoutingModel::Touring => w.tour(p, start).map(|s| s == TourStatus::TourComplete),
                        _ => w.delivers(p, start),
                    };
                    match ok {
                        Ok(true) => {}
                        Ok(false) => {
                            hit = Some(Ok((f.clone(), start)));
                            break 'sets;
                        }
                        Err(e) => {
                            hit = Some(Err(e));
                            break 'sets;
                        }
                    }
                }
            }
            sims.fetch_add(local, Ordering::Relaxed);
            hit
        });
        match found {
            None => {}
            Some(Err(e)) => return Err(e.into()),
            Some(Ok((failures, start))) => {
                let run = replay(g, &failures, p, start)?;
                return Ok(Verdict::Counterexample(Box::new(Counterexample { failures, start, run })));
            }
        }
    }
    let simulations = sims.into_inner();
    Ok(if space.complete() {
        Verdict::Holds { failure_sets, simulations }
    } else {
        Verdict::Inconclusive { failure_sets, simulations }
    })
}

/// Re-simulates a run with full trace.
pub fn replay(g: &Graph, f: &FailureSet, p: &ForwardingPattern, start: NodeId) -> Result<FailingRun, ForwardingError> {
    Ok(match p.model {
        RoutingModel::Touring => FailingRun::Tour(simulate_tour(g, f, p, start)?),
        _ => {
            let t = p.scope.t.expect("routing patterns carry t");
            let s = p.scope.s.unwrap_or(start);
            FailingRun::Route(simulate_route(g, f, p, start, s, t)?)
        }
    })
}

impl FailingRun {
    /// Whether this run actually fails (a loop, isolation or incomplete tour).
    pub fn is_failure(&self) -> bool {
        match self {
            FailingRun::Route(w) => !matches!(w.status, WalkStatus::Reached { .. }),
            FailingRun::Tour(t) => t.status != TourStatus::TourComplete,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_order() {
        let c: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(21, 2).count(), 210);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("tolerance:2".parse(), Ok(VerificationMode::RTolerance(2)));
        assert_eq!("kfail:0".parse(), Ok(VerificationMode::KFailures(0)));
        assert!("tolerance:0".parse::<VerificationMode>().is_err());
        assert!("nope".parse::<VerificationMode>().is_err());
    }
}
