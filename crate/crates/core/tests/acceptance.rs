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

//! One PASS/FAIL line per primary acceptance criterion. Criteria listed in
//! `KNOWN_FAILURES` are reported but do not fail the test; their outcome is
//! asserted so that a silent change is noticed.

use std::time::{Duration, Instant};

use frrlab::adversary::{
    attack_complete_r, gadget, lift_attack, replay, verify, Budget, GadgetName, LiftShape, Verdict, VerificationMode,
};
use frrlab::classifier::{classify, is_outerplanar_graph, netrail, Evidence, Feasibility, MinorBudget, Named};
use frrlab::forwarding::{simulate_route, ForwardingPattern, LocalView, Provenance, RoutingModel, Scope, WalkStatus};
use frrlab::graph::{st_edge_connectivity, FailureSet, Graph, NodeId};
use frrlab::par::Execution;
use frrlab::patterns::{self as pat, TableReading};
use frrlab::report::{run_report, Dataset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: [&str; 4] = ["k33-source-tables", "k5m2-fig4-table", "lift-size-complete", "lift-size-bipartite"];

struct Outcome {
    id: &'static str,
    pass: bool,
}

struct Sheet(Vec<Outcome>);

impl Sheet {
    fn record(&mut self, id: &'static str, pass: bool, elapsed: Duration, limit: Duration, detail: String) {
        let in_time = elapsed <= limit;
        let pass = pass && in_time;
        println!(
            "{} {id}: {detail} [{:.2}s, limit {:.0}s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        );
        self.0.push(Outcome { id, pass });
    }

    fn info(&self, id: &str, detail: String) {
        println!("INFO {id}: {detail}");
    }
}

fn budget() -> Budget {
    Budget::default()
}

fn holds(g: &Graph, p: &ForwardingPattern, mode: VerificationMode) -> bool {
    verify(g, p, mode, &budget()).expect("verification runs").holds()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn alg1(sheet: &mut Sheet) {
    let start = Instant::now();
    let g = Graph::complete(5).unwrap();
    let mut ok = 0;
    for s in 0..5 {
        for t in (0..5).filter(|&t| t != s) {
            let p = pat::gen_alg1_k5(&g, s, t).unwrap();
            ok += usize::from(holds(&g, &p, VerificationMode::PerfectResilience));
        }
    }
    sheet.record("alg1-k5", ok == 20, start.elapsed(), secs(1), format!("{ok}/20 (s,t) pairs hold over 1024 failure sets"));
}

fn k33_source(sheet: &mut Sheet) {
    let g = Graph::complete_bipartite(3, 3).unwrap();
    let count = |reading| {
        let mut ok = 0;
        for s in 0..6 {
            for t in (0..6).filter(|&t| t != s) {
                let p = pat::gen_k33_source_with(&g, s, t, reading).unwrap();
                ok += usize::from(holds(&g, &p, VerificationMode::PerfectResilience));
            }
        }
        ok
    };
    let start = Instant::now();
    let verbatim = count(TableReading::Verbatim);
    sheet.record(
        "k33-source-tables",
        verbatim == 30,
        start.elapsed(),
        secs(1),
        format!("printed tables hold for {verbatim}/30 placements over 512 failure sets"),
    );
    sheet.info("k33-source-tables", format!("amended same-part row holds for {}/30 placements", count(TableReading::Amended)));
}

fn k5m2_and_k33m2(sheet: &mut Sheet) {
    let k5 = Graph::complete(5).unwrap();
    let fig5_shapes = || {
        let mut out = Vec::new();
        for t in 0..5 {
            let others: Vec<NodeId> = (0..5).filter(|&v| v != t).collect();
            for i in 0..4 {
                for j in i + 1..4 {
                    out.push((k5.minus_edges(&[(t, others[i]), (t, others[j])]).unwrap(), t));
                }
            }
        }
        out
    };
    let count = |reading| {
        fig5_shapes()
            .iter()
            .filter(|(g, t)| holds(g, &pat::gen_k5m2_dest_with(g, *t, reading).unwrap(), VerificationMode::PerfectResilience))
            .count()
    };
    let start = Instant::now();
    let verbatim = count(TableReading::Verbatim);
    sheet.record(
        "k5m2-fig4-table",
        verbatim == 30,
        start.elapsed(),
        secs(1),
        format!("printed table holds for {verbatim}/30 shapes (t with two neighbors) over 256 failure sets"),
    );
    sheet.info("k5m2-fig4-table", format!("amended v2 row holds for {}/30 shapes", count(TableReading::Amended)));

    let start = Instant::now();
    let k33 = Graph::complete_bipartite(3, 3).unwrap();
    let variants = [k33.minus_edges(&[(0, 3), (0, 4)]).unwrap(), k33.minus_edges(&[(0, 3), (1, 4)]).unwrap()];
    let mut ok = 0;
    for g in &variants {
        for t in 0..6 {
            let p = pat::gen_k33m2_dest(g, t).unwrap();
            ok += usize::from(holds(g, &p, VerificationMode::PerfectResilience));
        }
    }
    sheet.record("k33m2-dest", ok == 12, start.elapsed(), secs(1), format!("{ok}/12 (variant, t) hold over 128 failure sets"));
}

/// Random outerplanar graph: grow a maximal one by stacking triangles on
/// outer edges, drop links at random, relabel.
fn random_outerplanar(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(3..=8);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut outer = vec![0, 1, 2];
    for v in 3..n {
        let i = rng.gen_range(0..outer.len());
        let (a, b) = (outer[i], outer[(i + 1) % outer.len()]);
        edges.extend([(a, v), (b, v)]);
        outer.insert(i + 1, v);
    }
    edges.retain(|_| rng.gen_bool(0.75));
    let mut label: Vec<NodeId> = (0..n).collect();
    label.shuffle(rng);
    let pairs: Vec<_> = edges.iter().map(|&(u, v)| (label[u], label[v])).collect();
    Graph::new(n, &pairs).unwrap()
}

fn touring_frontier(sheet: &mut Sheet) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = 0;
    for _ in 0..100 {
        let g = random_outerplanar(&mut rng);
        assert!(is_outerplanar_graph(&g));
        let emb = pat::compute_outerplanar_embedding(&g).unwrap();
        let p = pat::gen_outerplanar_tour(&g, &emb).unwrap();
        ok += usize::from(holds(&g, &p, VerificationMode::Touring));
    }
    let mut defeated = Vec::new();
    let mut gadget_hits = Vec::new();
    for (g, name) in [(Named::K4.graph(), GadgetName::K4Tour), (Named::K23.graph(), GadgetName::K23Tour)] {
        let tours = pat::all_cyclic_tours(&g);
        let lost = tours
            .iter()
            .filter(|p| matches!(verify(&g, p, VerificationMode::Touring, &budget()).unwrap(), Verdict::Counterexample(_)))
            .count();
        defeated.push((g.name().unwrap().to_string(), lost, tours.len()));
        let gd = gadget(name).unwrap();
        assert_eq!(gd.graph.edges(), g.edges());
        let f = gd.primary_failures().unwrap();
        let hit = tours.iter().any(|p| g.nodes().any(|s| replay(&g, f, p, s).unwrap().is_failure()));
        gadget_hits.push(hit);
    }
    let pass = ok == 100
        && defeated.iter().all(|(_, lost, total)| lost == total)
        && defeated.iter().map(|d| d.2).collect::<Vec<_>>() == [16, 4]
        && gadget_hits.iter().all(|&h| h);
    let detail = format!(
        "{ok}/100 outerplanar tours hold; cyclic tours defeated: {}; gadget sets defeat a tour: {gadget_hits:?}",
        defeated.iter().map(|(n, l, t)| format!("{n} {l}/{t}")).collect::<Vec<_>>().join(", ")
    );
    sheet.record("touring-frontier", pass, start.elapsed(), secs(30), detail);
}

fn r_tolerance_positive(sheet: &mut Sheet) {
    let start = Instant::now();
    let k5 = Graph::complete(5).unwrap();
    let k33 = Graph::complete_bipartite(3, 3).unwrap();
    let mut d2 = 0;
    for s in 0..5 {
        for t in (0..5).filter(|&t| t != s) {
            d2 += usize::from(holds(&k5, &pat::gen_distance2(&k5, s, t).unwrap(), VerificationMode::RTolerance(2)));
        }
    }
    let mut d3 = 0;
    for s in 0..6 {
        for t in (0..6).filter(|&t| t != s) {
            let p = pat::gen_distance3_bipartite(&k33, s, t).unwrap();
            d3 += usize::from(holds(&k33, &p, VerificationMode::RTolerance(2)));
        }
    }
    sheet.record(
        "r-tolerance-positive",
        d2 == 20 && d3 == 30,
        start.elapsed(),
        secs(5),
        format!("distance-2 on K5: {d2}/20 pairs, distance-3 on K3,3: {d3}/30 pairs hold 2-tolerance"),
    );
}

fn r_tolerance_negative(sheet: &mut Sheet) {
    let g = Graph::complete(8).unwrap();
    let (s, t) = (0, 7);
    let scope = Scope { s: Some(s), t: Some(t) };
    let ham = pat::ham_decompose(&g).unwrap();
    let candidates = [
        ("distance-2", pat::gen_distance2(&g, s, t).unwrap()),
        ("ham-route", pat::gen_ham_route(&ham, RoutingModel::SourceDestination, scope).unwrap()),
        ("round-robin", pat::round_robin(RoutingModel::SourceDestination, scope)),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    let mut slowest = Duration::ZERO;
    for (name, p) in &candidates {
        let start = Instant::now();
        let res = attack_complete_r(&g, p, 1);
        slowest = slowest.max(start.elapsed());
        let ok = match &res {
            Ok(f) => {
                let walk = simulate_route(&g, f, p, s, s, t).unwrap();
                !matches!(walk.status, WalkStatus::Reached { .. }) && st_edge_connectivity(&g, f, s, t) >= 1
            }
            Err(_) => false,
        };
        all &= ok;
        parts.push(match res {
            Ok(f) => format!("{name}: {} failed links, {}", f.len(), if ok { "defeated" } else { "not defeated" }),
            Err(e) => format!("{name}: {e}"),
        });
    }
    sheet.record("r-tolerance-negative", all, slowest, secs(10), parts.join("; "));
}

/// At each node, forward to the next alive neighbor after the inport in a
/// fixed cyclic order; ⊥ takes the first alive one.
fn rotation_pattern(orders: Vec<Vec<NodeId>>, scope: Scope) -> ForwardingPattern {
    let rule = move |v: &LocalView<'_>| {
        let order = &orders[v.node];
        let alive: Vec<NodeId> = order.iter().copied().filter(|&x| v.is_alive(x)).collect();
        match v.inport.and_then(|u| alive.iter().position(|&x| x == u)) {
            Some(i) => alive.get((i + 1) % alive.len()).copied(),
            None => alive.first().copied(),
        }
    };
    ForwardingPattern::new(RoutingModel::SourceDestination, scope, Provenance::new("rotation"), rule)
}

fn gadget_fidelity(sheet: &mut Sheet) {
    let start = Instant::now();
    // K7 survivors with s = 0, v_i = i, t = 6
    let mut fig3 = vec![(0, 1), (1, 2), (5, 2), (3, 2), (4, 2), (6, 4), (5, 3)];
    fig3.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
    fig3.sort();
    let k7 = gadget(GadgetName::K7SourceDest).unwrap();
    let survivors_ok = k7.survivors() == fig3;

    // parts {a,b,c,d} = 0..4 and {v0..v3} = 4..8
    let (a, b, c, d) = (0, 1, 2, 3);
    let v = |i: usize| 4 + i;
    let sets: [(GadgetName, Vec<(NodeId, NodeId)>); 4] = [
        (GadgetName::K44F12, vec![(v(0), a), (v(0), c), (v(1), c), (v(2), b), (v(3), b), (v(3), c), (v(0), d), (v(1), d), (v(2), d), (v(3), d)]),
        (GadgetName::K44F13, vec![(v(0), a), (v(0), c), (v(1), c), (v(2), b), (v(3), b), (v(2), c), (v(0), d), (v(1), d), (v(2), d), (v(3), d)]),
        (GadgetName::K44F33, vec![(v(0), a), (v(0), c), (v(1), b), (v(2), b), (v(3), c), (v(0), d), (v(1), d), (v(2), d), (v(3), d)]),
        (GadgetName::K44F32, vec![(v(0), a), (v(0), c), (v(1), b), (v(2), b), (v(2), c), (v(3), c), (v(0), d), (v(1), d), (v(2), d), (v(3), d)]),
    ];
    let k44 = Graph::complete_bipartite(4, 4).unwrap();
    let sets_ok = sets.iter().all(|(name, pairs)| {
        let gd = gadget(*name).unwrap();
        gd.graph == k44 && gd.primary_failures() == Some(&FailureSet::from_edges(&k44, pairs).unwrap())
    });

    // v2 rotates v1 -> v3 -> v4 -> v5 -> v1; v3 and v5 pass packets on
    let mut orders: Vec<Vec<NodeId>> = (0..7).map(|x| (0..7).filter(|&y| y != x).collect()).collect();
    orders[2] = vec![0, 1, 3, 4, 5, 6];
    let p = rotation_pattern(orders, Scope { s: Some(0), t: Some(6) });
    let walk = simulate_route(&k7.graph, k7.primary_failures().unwrap(), &p, 0, 0, 6).unwrap();
    let cyc = walk.cycle_nodes();
    let looped = matches!(walk.status, WalkStatus::Looped { .. });
    let through = (0..cyc.len()).any(|i| {
        (0..4).map(|k| cyc[(i + k) % cyc.len()]).collect::<Vec<_>>() == [2, 3, 5, 2]
    });
    let pass = survivors_ok && sets_ok && looped && through && !cyc.contains(&4) && !cyc.contains(&6);
    sheet.record(
        "gadget-fidelity",
        pass,
        start.elapsed(),
        secs(1),
        format!("K7 survivors match: {survivors_ok}; K4,4 sets verbatim: {sets_ok}; v2-cyclic walk loops through v2-v3-v5-v2: {} (cycle {cyc:?})", looped && through),
    );
}

fn lifting(sheet: &mut Sheet) {
    let start = Instant::now();
    let k7 = gadget(GadgetName::K7SourceDest).unwrap();
    let inner7 = k7.primary_failures().unwrap().clone();
    let mut leaks = 0;
    let mut sizes = Vec::new();
    for n in 8..=12 {
        let l = lift_attack(LiftShape::Complete(n), &inner7, 6).unwrap();
        leaks += l.leaks().len();
        sizes.push((n, l.failures.len(), 6 * n - 33));
    }
    let complete_ok = sizes.iter().all(|&(_, got, want)| got == want);
    let e1 = start.elapsed();
    let k44 = gadget(GadgetName::K44F12).unwrap();
    let inner44 = k44.primary_failures().unwrap().clone();
    let mut bip = Vec::new();
    for (a, b) in [(4, 4), (5, 4), (6, 5)] {
        let l = lift_attack(LiftShape::Bipartite(a, b), &inner44, 2).unwrap();
        leaks += l.leaks().len();
        bip.push(((a, b), l.failures.len(), 3 * a + 4 * b - 21));
    }
    let bip_ok = bip.iter().all(|&(_, got, bound)| got <= bound);
    sheet.record(
        "lift-size-complete",
        complete_ok,
        e1,
        secs(1),
        format!("|F| vs 6n-33: {}", sizes.iter().map(|(n, g, w)| format!("n={n} {g}/{w}")).collect::<Vec<_>>().join(", ")),
    );
    sheet.record(
        "lift-size-bipartite",
        bip_ok,
        start.elapsed(),
        secs(1),
        format!("|F| vs 3a+4b-21: {}", bip.iter().map(|((a, b), g, w)| format!("({a},{b}) {g}/{w}")).collect::<Vec<_>>().join(", ")),
    );
    sheet.record("lift-isolation", leaks == 0, start.elapsed(), secs(1), format!("{leaks} alive links from non-destination real nodes to virtual nodes"));
}

fn ham_touring(sheet: &mut Sheet) {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut all = true;
    for (n, k) in [(5, 2), (7, 3)] {
        let g = Graph::complete(n).unwrap();
        let d = pat::ham_decompose(&g).unwrap();
        let v = verify(&g, &pat::gen_ham_tour(&d), VerificationMode::KFailures(k - 1), &budget()).unwrap();
        all &= d.cycles.len() == k && v.holds();
        parts.push(format!("K{n} k={}: {v:?}", d.cycles.len()));
    }
    sheet.record("ham-touring", all, start.elapsed(), secs(10), parts.join("; "));
}

fn classifier_desk(sheet: &mut Sheet) {
    let start = Instant::now();
    let b = MinorBudget::default();
    let labels = |g: &Graph| {
        let c = classify(g, &b);
        [c.touring.feasibility, c.destination.feasibility, c.source_destination.feasibility].map(|f| f.label())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trees_ok = (0..20).all(|_| {
        let n = rng.gen_range(1..40);
        let pairs: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        labels(&Graph::new(n, &pairs).unwrap()) == ["Possible"; 3]
    });
    let dense_ok = [Graph::complete(7).unwrap(), Graph::complete_bipartite(4, 4).unwrap()]
        .iter()
        .all(|g| labels(g) == ["Impossible"; 3]);
    let k5m1 = classify(&Named::K5Minus1.graph(), &b);
    let k5m1_ok = k5m1.planar && k5m1.destination.feasibility == Feasibility::Impossible;
    let g = netrail();
    let c = classify(&g, &b);
    let witness_ok = matches!(&c.touring.evidence, Evidence::ForbiddenMinor { minor: Named::K23, mapping } if mapping.validate(&g, &Named::K23.graph()).is_ok());
    let netrail_ok = c.touring.feasibility == Feasibility::Impossible
        && witness_ok
        && c.destination.feasibility.label() == "Sometimes"
        && c.source_destination.feasibility.label() == "Sometimes";
    sheet.record(
        "classifier-desk",
        trees_ok && dense_ok && k5m1_ok && netrail_ok,
        start.elapsed(),
        secs(10),
        format!("trees all Possible: {trees_ok}; K7/K4,4 all Impossible: {dense_ok}; K5-1 planar and destination Impossible: {k5m1_ok}; Netrail Impossible(K2,3)/Sometimes/Sometimes: {netrail_ok}"),
    );
}

fn zoo(sheet: &mut Sheet) {
    let Ok(dir) = std::env::var("FRRLAB_ZOO_DIR") else {
        println!("SKIP zoo-full-scale: set FRRLAB_ZOO_DIR to a Topology Zoo GraphML directory");
        return;
    };
    let start = Instant::now();
    let d = Dataset::load_dir(std::path::Path::new(&dir)).expect("dataset loads");
    let r = run_report(&d, &MinorBudget::default(), Execution::default()).expect("report runs");
    let a = &r.aggregates;
    let near = |got: f64, want: f64| (got - want).abs() <= 3.0;
    let mean = 100.0 * a.mean_sometimes_fraction.unwrap_or(0.0);
    let checks = [
        ("destination impossible", a.destination.impossible_pct, 42.5),
        ("destination unknown", a.destination.unknown_pct, 1.1),
        ("source-destination impossible", a.source_destination.impossible_pct, 2.7),
        ("source-destination unknown", a.source_destination.unknown_pct, 31.8),
        ("mean sometimes fraction", mean, 21.3),
        ("planar not outerplanar", a.planar_not_outerplanar_pct, 55.8),
    ];
    let pass = checks.iter().all(|&(_, got, want)| near(got, want));
    let detail = checks.iter().map(|(n, g, w)| format!("{n} {g:.1}% (want {w}±3)")).collect::<Vec<_>>().join("; ");
    sheet.record("zoo-full-scale", pass, start.elapsed(), secs(1800), format!("{} topologies: {detail}", d.len()));
}

#[test]
fn acceptance() {
    let mut sheet = Sheet(Vec::new());
    alg1(&mut sheet);
    k33_source(&mut sheet);
    k5m2_and_k33m2(&mut sheet);
    touring_frontier(&mut sheet);
    r_tolerance_positive(&mut sheet);
    r_tolerance_negative(&mut sheet);
    gadget_fidelity(&mut sheet);
    lifting(&mut sheet);
    ham_touring(&mut sheet);
    classifier_desk(&mut sheet);
    zoo(&mut sheet);
    let unexpected: Vec<&str> =
        sheet.0.iter().filter(|o| o.pass == KNOWN_FAILURES.contains(&o.id)).map(|o| o.id).collect();
    println!(
        "{} PASS, {} FAIL ({} known)",
        sheet.0.iter().filter(|o| o.pass).count(),
        sheet.0.iter().filter(|o| !o.pass).count(),
        KNOWN_FAILURES.len()
    );
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
