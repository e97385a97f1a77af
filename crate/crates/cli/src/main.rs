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

//! Command-line front end of the fast-failover routing lab.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use frrlab::adversary::{attack_complete_r, gadget_by_name, replay, verify, Budget, Verdict, VerificationMode};
use frrlab::classifier::{classify, netrail, MinorBudget};
use frrlab::forwarding::{materialize, ForwardingPattern, RoutingModel, Scope, WalkStatus};
use frrlab::graph::{FailureSet, Graph, NodeId};
use frrlab::par::{with_workers, Execution};
use frrlab::patterns as pat;
use frrlab::report::{ingest_file, run_report, to_graphml, write_report, Dataset, ExportFormat};

/// Prints a line to stdout; a closed pipe ends the process quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                eprintln!("error: writing output: {e}");
                std::process::exit(2);
            }
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "frrlab", version, about = "Static local fast-failover routing lab")]
struct Cli {
    /// Worker threads for parallel search.
    #[arg(long, global = true, env = "FRRLAB_WORKERS")]
    workers: Option<usize>,
    /// Seed for sampling and heuristic minor search.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Read and normalize every topology file in a directory.
    Ingest {
        dir: PathBuf,
        /// Write the normalized graphs as GraphML into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify one topology for the three routing models.
    Classify {
        graph: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Print the full classification as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Check a pattern against every promised failure set.
    Verify {
        graph: String,
        /// Pattern table in JSON form.
        pattern: PathBuf,
        /// perfect, tolerance:R, kfail:K or tour.
        #[arg(long, default_value = "perfect")]
        mode: VerificationMode,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Pattern generators.
    Pattern {
        #[command(subcommand)]
        cmd: PatternCmd,
    },
    /// Reproduce an impossibility gadget or attack a pattern on K_{3+5r}.
    Attack(AttackArgs),
    /// Build a touring pattern and verify it.
    Tour {
        graph: String,
        /// Check resilience against at most k-1 failures instead of all.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Classify a directory of topologies and export the results.
    Report {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// csv, json, svg-bars or dot-gadgets; repeatable.
        #[arg(long = "format", default_values_t = vec!["csv".to_string()])]
        formats: Vec<String>,
        /// Include wall times in the CSV rows.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum PatternCmd {
    /// Generate a pattern and print it as a JSON table.
    Gen {
        /// alg1-k5, k33-source, distance2, distance3, round-robin,
        /// k5m2-dest, k33m2-dest, outerplanar-dest, ham-route,
        /// outerplanar-tour or ham-tour.
        generator: String,
        graph: String,
        #[arg(long)]
        s: Option<NodeId>,
        #[arg(long)]
        t: Option<NodeId>,
        /// Routing model for round-robin and ham-route.
        #[arg(long, default_value = "source_destination")]
        model: RoutingModel,
        /// Use the table exactly as printed instead of the amended row.
        #[arg(long)]
        verbatim: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("target").required(true).args(["gadget", "complete_r"])))]
struct AttackArgs {
    /// Gadget name, e.g. k7_source_dest or k44_F12.
    #[arg(long)]
    gadget: Option<String>,
    /// Attack a pattern on the complete graph with 3+5r nodes.
    #[arg(long)]
    complete_r: Option<usize>,
    /// Pattern table to replay on the gadget or to attack.
    #[arg(long, conflicts_with = "candidate")]
    pattern: Option<PathBuf>,
    /// Built-in candidate for the complete-graph attack: distance2,
    /// ham-route or round-robin.
    #[arg(long, requires = "complete_r")]
    candidate: Option<String>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = MinorBudget::default().exact_threshold)]
    exact_threshold: usize,
    #[arg(long, default_value_t = MinorBudget::default().node_limit)]
    node_limit: u64,
    #[arg(long, default_value_t = MinorBudget::default().heuristic_rounds)]
    heuristic_rounds: usize,
}

impl BudgetArgs {
    fn budget(&self, seed: u64) -> MinorBudget {
        MinorBudget {
            exact_threshold: self.exact_threshold,
            node_limit: self.node_limit,
            heuristic_rounds: self.heuristic_rounds,
            seed,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = Budget::default().exhaustive_threshold)]
    exhaustive_threshold: usize,
    #[arg(long, default_value_t = Budget::default().samples)]
    samples: usize,
    /// Run the failure-set search on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SearchArgs {
    fn budget(&self, seed: u64) -> Budget {
        Budget {
            exhaustive_threshold: self.exhaustive_threshold,
            samples: self.samples,
            seed,
            execution: if self.sequential { Execution::Sequential } else { Execution::default() },
        }
    }
}

/// Reads a graph from a file or a built-in name: `K5`, `K3,3`, `C6`, `P4`,
/// `K5-2` style removals of the first links, or `netrail`.
fn load_graph(arg: &str) -> Result<Graph> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(ingest_file(path)?.graph);
    }
    let lower = arg.to_ascii_lowercase();
    if lower == "netrail" {
        return Ok(netrail());
    }
    let (base, minus) = match lower.split_once('-') {
        Some((b, k)) => (b.to_string(), k.parse::<usize>().context("bad link count after '-'")?),
        None => (lower.clone(), 0),
    };
    let num = |s: &str| s.parse::<usize>().with_context(|| format!("not a graph file or built-in name: {arg}"));
    let g = if let Some(rest) = base.strip_prefix('k') {
        match rest.split_once(',') {
            Some((a, b)) => Graph::complete_bipartite(num(a)?, num(b)?)?,
            None => Graph::complete(num(rest)?)?,
        }
    } else if let Some(rest) = base.strip_prefix('c') {
        Graph::cycle(num(rest)?)?
    } else if let Some(rest) = base.strip_prefix('p') {
        Graph::path(num(rest)?)?
    } else {
        bail!("not a graph file or built-in name: {arg}");
    };
    if minus > g.m() {
        bail!("{arg}: cannot remove {minus} of {} links", g.m());
    }
    let drop: Vec<_> = g.edges()[..minus].to_vec();
    Ok(g.minus_edges(&drop)?.with_name(arg))
}

fn load_pattern(path: &Path) -> Result<ForwardingPattern> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ForwardingPattern::from_json(&text)?)
}

fn fmt_failures(g: &Graph, f: &FailureSet) -> String {
    let e: Vec<String> = f.edges(g).iter().map(|(u, v)| format!("({u},{v})")).collect();
    format!("{{{}}}", e.join(" "))
}

fn report_verdict(g: &Graph, v: &Verdict) -> u8 {
    match v {
        Verdict::Holds { failure_sets, simulations } => {
            out!("Holds ({failure_sets} failure sets, {simulations} simulations)");
            0
        }
        Verdict::Inconclusive { failure_sets, simulations } => {
            out!("Inconclusive: no counterexample in {failure_sets} sampled failure sets ({simulations} simulations)");
            0
        }
        Verdict::Counterexample(c) => {
            out!("Counterexample: start {} failures {}", c.start, fmt_failures(g, &c.failures));
            out!("  run: {:?}", c.run);
            1
        }
    }
}

fn generate(name: &str, g: &Graph, s: Option<NodeId>, t: Option<NodeId>, model: RoutingModel, verbatim: bool) -> Result<ForwardingPattern> {
    let need = |x: Option<NodeId>, what: &str| x.ok_or_else(|| anyhow!("--{what} is required for {name}"));
    let reading = if verbatim { pat::TableReading::Verbatim } else { pat::TableReading::Amended };
    Ok(match name {
        "alg1-k5" => pat::gen_alg1_k5(g, need(s, "s")?, need(t, "t")?)?,
        "k33-source" => pat::gen_k33_source_with(g, need(s, "s")?, need(t, "t")?, reading)?,
        "distance2" => pat::gen_distance2(g, need(s, "s")?, need(t, "t")?)?,
        "distance3" => pat::gen_distance3_bipartite(g, need(s, "s")?, need(t, "t")?)?,
        "round-robin" => pat::round_robin(model, Scope { s: if model.uses_source() { s } else { None }, t }),
        "k5m2-dest" => pat::gen_k5m2_dest_with(g, need(t, "t")?, reading)?,
        "k33m2-dest" => pat::gen_k33m2_dest(g, need(t, "t")?)?,
        "outerplanar-dest" => pat::gen_outerplanar_plus_dest(g, need(t, "t")?)?,
        "ham-route" => {
            let scope = Scope { s: if model.uses_source() { Some(need(s, "s")?) } else { None }, t: Some(need(t, "t")?) };
            pat::gen_ham_route(&pat::ham_decompose(g)?, model, scope)?
        }
        "outerplanar-tour" => {
            let emb = pat::compute_outerplanar_embedding(g).ok_or_else(|| anyhow!("graph is not outerplanar"))?;
            pat::gen_outerplanar_tour(g, &emb)?
        }
        "ham-tour" => pat::gen_ham_tour(&pat::ham_decompose(g)?),
        other => bail!("unknown generator {other}"),
    })
}

fn run(cli: Cli) -> Result<u8> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Ingest { dir, out } => {
            let d = Dataset::load_dir(&dir)?;
            if let Some(out) = &out {
                std::fs::create_dir_all(out)?;
            }
            for e in &d.entries {
                let notes: Vec<String> = e.log.iter().map(|l| l.to_string()).collect();
                out!("{}\tn={}\tm={}\t{}", e.name, e.graph.n(), e.graph.m(), notes.join("; "));
                if let Some(out) = &out {
                    std::fs::write(out.join(format!("{}.graphml", e.name)), to_graphml(&e.graph))?;
                }
            }
            out!("{} topologies", d.len());
            Ok(0)
        }
        Cmd::Classify { graph, budget, json } => {
            let g = load_graph(&graph)?;
            let c = classify(&g, &budget.budget(seed));
            if json {
                out!("{}", serde_json::to_string_pretty(&c)?);
            } else {
                out!("n={} m={} planar={} outerplanar={}", c.n, c.m, c.planar, c.outerplanar);
                for (model, v) in [("touring", &c.touring), ("destination", &c.destination), ("source-destination", &c.source_destination)] {
                    out!("{model}: {:?} ({})", v.feasibility, v.evidence.summary());
                }
                out!("sometimes_fraction: {:.4}", c.sometimes_fraction);
            }
            Ok(0)
        }
        Cmd::Verify { graph, pattern, mode, search } => {
            let g = load_graph(&graph)?;
            let p = load_pattern(&pattern)?;
            let v = verify(&g, &p, mode, &search.budget(seed))?;
            Ok(report_verdict(&g, &v))
        }
        Cmd::Pattern { cmd: PatternCmd::Gen { generator, graph, s, t, model, verbatim, out } } => {
            let g = load_graph(&graph)?;
            let p = generate(&generator, &g, s, t, model, verbatim)?;
            let json = materialize(&g, &p)?.to_json();
            match out {
                Some(path) => std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?,
                None => out!("{json}"),
            }
            Ok(0)
        }
        Cmd::Attack(a) => attack(a),
        Cmd::Tour { graph, k, search } => {
            let g = load_graph(&graph)?;
            let (p, mode) = match k {
                Some(k) => {
                    let d = pat::ham_decompose(&g)?;
                    if d.cycles.len() < k {
                        bail!("only {} Hamiltonian cycles available", d.cycles.len());
                    }
                    (pat::gen_ham_tour(&d), VerificationMode::KFailures(k.saturating_sub(1)))
                }
                None => {
                    let emb = pat::compute_outerplanar_embedding(&g)
                        .ok_or_else(|| anyhow!("graph is not outerplanar; use --k for Hamiltonian touring"))?;
                    (pat::gen_outerplanar_tour(&g, &emb)?, VerificationMode::Touring)
                }
            };
            out!("pattern {} checked with {mode}", p.provenance.generator);
            let v = verify(&g, &p, mode, &search.budget(seed))?;
            Ok(report_verdict(&g, &v))
        }
        Cmd::Report { dir, out, formats, timings, budget } => {
            let formats: Vec<ExportFormat> =
                formats.iter().map(|f| f.parse::<ExportFormat>().map_err(|e| anyhow!(e))).collect::<Result<_>>()?;
            let d = Dataset::load_dir(&dir)?;
            let r = run_report(&d, &budget.budget(seed), Execution::default())?;
            for f in formats {
                for path in write_report(&r, f, &out, timings)? {
                    out!("wrote {}", path.display());
                }
            }
            let a = &r.aggregates;
            for (model, m) in [("touring", &a.touring), ("destination", &a.destination), ("source-destination", &a.source_destination)] {
                out!(
                    "{model}: possible {:.1}% impossible {:.1}% sometimes {:.1}% unknown {:.1}%",
                    m.possible_pct, m.impossible_pct, m.sometimes_pct, m.unknown_pct
                );
            }
            out!("planar-not-outerplanar {:.1}%", a.planar_not_outerplanar_pct);
            if let Some(f) = a.mean_sometimes_fraction {
                out!("mean sometimes fraction {:.1}%", 100.0 * f);
            }
            out!("dataset hash {}", r.metadata.dataset_hash);
            Ok(0)
        }
    }
}

fn attack(a: AttackArgs) -> Result<u8> {
    if let Some(name) = a.gadget {
        let gd = gadget_by_name(&name)?;
        out!("{}: n={} m={}", gd.name, gd.graph.n(), gd.graph.m());
        for (role, v) in &gd.roles {
            out!("  role {role} = {v}");
        }
        for (label, f) in &gd.failures {
            out!("  {label}: {} failed {}", f.len(), fmt_failures(&gd.graph, f));
        }
        let Some(path) = a.pattern else { return Ok(0) };
        let p = load_pattern(&path)?;
        let start = match p.model {
            RoutingModel::SourceDestination => p.scope.s,
            _ => gd.role("s"),
        }
        .ok_or_else(|| anyhow!("no start node"))?;
        let mut defeated = false;
        for (label, f) in &gd.failures {
            let run = replay(&gd.graph, f, &p, start)?;
            out!("  {label}: {}", if run.is_failure() { "pattern fails" } else { "pattern succeeds" });
            defeated |= run.is_failure();
        }
        return Ok(u8::from(defeated));
    }
    let r = a.complete_r.expect("clap enforces one target");
    let g = Graph::complete(3 + 5 * r)?;
    let (s, t) = (0, 2 + 5 * r);
    let p = match (&a.pattern, a.candidate.as_deref()) {
        (Some(path), _) => load_pattern(path)?,
        (None, Some(c)) => generate(c, &g, Some(s), Some(t), RoutingModel::SourceDestination, false)?,
        (None, None) => bail!("--complete-r needs --pattern or --candidate"),
    };
    let f = attack_complete_r(&g, &p, r)?;
    let s = p.scope.s.unwrap_or(s);
    let out = frrlab::forwarding::simulate_route(&g, &f, &p, s, s, p.scope.t.unwrap_or(t))?;
    out!("K{}: {} failed {}", g.n(), f.len(), fmt_failures(&g, &f));
    match out.status {
        WalkStatus::Reached { .. } => bail!("attack did not defeat the pattern"),
        status => out!("packet from {s}: {status:?}, cycle {:?}", out.cycle_nodes()),
    }
    Ok(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers;
    match with_workers(workers, move || run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
