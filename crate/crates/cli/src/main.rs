use clap::{Args, Parser, Subcommand};
use lplab::bounds::{self, ratio_table, theorem_bound, SystemFacts};
use lplab::construct::{build_gt, DEFAULT_VERIFY_ORDER};
use lplab::graph6::{encode_graph6, parse_line};
use lplab::longest::{enumerate_longest_paths, LongestPathSet, DEFAULT_PATH_CAP};
use lplab::report::{CheckId, CheckReport, Status};
use lplab::scan::{
    check_conjecture, choose_subsets, scan_stream, ConjectureVerdict, ScanConfig, Source, DEFAULT_INSTANCE_CAP,
    DEFAULT_SEED, DEFAULT_SUBSET_CAP,
};
use lplab::surgery::surgery_trace;
use lplab::{Graph, PathSystem, REPORT_SCHEMA};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

/// Longest-path intersection toolkit.
#[derive(Parser)]
#[command(name = "lplab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ℓ(G), |𝓛(G)|, pairwise intersection and per-subset f summary.
    Analyze {
        /// graph6/sparse6 string, or a file holding one graph (graph6,
        /// sparse6, or an "n m" edge list).
        graph: String,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Runs the bound checkers on one system or on the k-subsets of 𝓛(G).
    Verify {
        graph: String,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated check names, or "all".
        #[arg(long, default_value = "all")]
        checks: String,
        /// Members: "all", "@i,j,..." (indices into 𝓛(G)) or
        /// "a-b-c,d-e-f" (vertex sequences).
        #[arg(long)]
        paths: Option<String>,
        /// Accept members that are not longest paths (surgery runs its
        /// structural steps only; bound checks refuse such systems).
        #[arg(long)]
        relaxed: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Scans a corpus for violations and extremal instances.
    Search {
        #[arg(long, conflicts_with_all = ["gen_n", "gen_max"])]
        file: Option<PathBuf>,
        /// All connected graphs on exactly N vertices.
        #[arg(long, conflicts_with = "gen_max")]
        gen_n: Option<usize>,
        /// All connected graphs on 1..=N vertices.
        #[arg(long)]
        gen_max: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "all")]
        checks: String,
        #[command(flatten)]
        caps: Caps,
        /// k-subsets per graph for the path-order checks.
        #[arg(long, default_value_t = DEFAULT_INSTANCE_CAP)]
        instance_cap: usize,
        #[arg(long, env = "LPLAB_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Stop at the first malformed input line.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pendant-and-subdivision blow-up of a path system.
    Construct {
        graph: String,
        #[arg(long)]
        paths: String,
        #[arg(long)]
        t: usize,
        /// Largest order at which ℓ(G_t) is recomputed.
        #[arg(long, default_value_t = DEFAULT_VERIFY_ORDER)]
        verify_order: usize,
        #[arg(long)]
        path_cap: Option<usize>,
    },
    /// Exact theorem bounds.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "table")]
        n: Option<usize>,
        /// Ratio table for 3..=KMAX.
        #[arg(long, value_name = "KMAX")]
        table: Option<usize>,
    },
}

#[derive(Args)]
struct Caps {
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    path_cap: usize,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    subset_cap: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Exit status 1: a violation or failing check; 2: bad input.
enum Failure {
    Found,
    Usage(String),
}

impl From<lplab::Error> for Failure {
    fn from(e: lplab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { graph, k, caps } => analyze(&graph, k, &caps),
        Command::Verify {
            graph,
            k,
            checks,
            paths,
            relaxed,
            caps,
        } => verify(&graph, k, &checks, paths.as_deref(), relaxed, &caps),
        Command::Search {
            file,
            gen_n,
            gen_max,
            k,
            checks,
            caps,
            instance_cap,
            jobs,
            strict,
            out,
        } => {
            let sources = (file.as_deref(), gen_n, gen_max);
            search(sources, k, &checks, &caps, instance_cap, jobs, strict, out.as_deref())
        }
        Command::Construct {
            graph,
            paths,
            t,
            verify_order,
            path_cap,
        } => construct(&graph, &paths, t, verify_order, path_cap),
        Command::Bounds { k, n, table } => bounds_cmd(k, n, table),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Found) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("lplab: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(arg: &str) -> Result<Graph, Failure> {
    let path = FsPath::new(arg);
    if !path.is_file() {
        return Ok(parse_line(arg.trim())?);
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Failure::Usage(format!("{arg} holds no graph")))?;
    let header: Vec<&str> = first.split_whitespace().collect();
    if header.len() == 2 && header.iter().all(|t| t.parse::<usize>().is_ok()) {
        Ok(Graph::parse_edge_list(&text)?)
    } else {
        Ok(parse_line(first)?)
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn require_connected(g: &Graph) -> Outcome {
    if g.is_connected() {
        Ok(())
    } else {
        Err(usage("graph is not connected"))
    }
}

fn parse_checks(spec: &str) -> Result<BTreeSet<CheckId>, Failure> {
    if spec == "all" {
        return Ok(CheckId::ALL.into_iter().collect());
    }
    spec.split(',').map(|s| s.trim().parse::<CheckId>().map_err(Failure::Usage)).collect()
}

fn verdict_json(v: &ConjectureVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn analyze(arg: &str, k: Option<usize>, caps: &Caps) -> Outcome {
    let g = load_graph(arg)?;
    require_connected(&g)?;
    let set = enumerate_longest_paths(&g, Some(caps.path_cap))?;
    let pairwise = check_conjecture(&g, 2, caps.path_cap, caps.subset_cap)?;
    let graph6 = encode_graph6(&g);
    let mut out = json!({
        "schema": REPORT_SCHEMA,
        "graph6": graph6,
        "order": g.order(),
        "size": g.size(),
        "longest_length": set.length,
        "longest_count": set.len(),
        "truncated": set.truncated,
        "paths": set.paths,
        "pairwise": verdict_json(&pairwise),
    });
    eprintln!("ℓ={}, |𝓛|={}{}", set.length, set.len(), if set.truncated { " (truncated)" } else { "" });
    eprintln!("pairwise: {}", verdict_json(&pairwise)["verdict"].as_str().unwrap_or("?"));
    let mut problem = matches!(pairwise, ConjectureVerdict::Violation { .. });
    if let Some(k) = k {
        if k < 2 {
            return Err(usage("k must be at least 2"));
        }
        let conjecture = check_conjecture(&g, k, caps.path_cap, caps.subset_cap)?;
        problem |= matches!(conjecture, ConjectureVerdict::Violation { .. });
        let (subsets, sampled) = if set.len() >= k {
            choose_subsets(set.len(), k, caps.subset_cap, caps.seed, &graph6)
        } else {
            (Vec::new(), false)
        };
        let mut rows = Vec::with_capacity(subsets.len());
        let mut max_f = 0;
        for members in &subsets {
            let system = PathSystem::from_longest(&g, &set, members)?;
            let f = system.path_distance_value()?.value;
            max_f = max_f.max(f);
            rows.push(json!({ "members": members, "common": system.common_vertices().to_vec(), "f": f }));
        }
        eprintln!(
            "k={k}: {} subsets{}, max f={max_f}, conjecture: {}",
            subsets.len(),
            if sampled { " (sampled)" } else { "" },
            verdict_json(&conjecture)["verdict"].as_str().unwrap_or("?")
        );
        for row in rows.iter().take(10) {
            eprintln!("  {} common {} f={}", row["members"], row["common"], row["f"]);
        }
        out["k"] = json!(k);
        out["conjecture"] = verdict_json(&conjecture);
        out["subsets"] = json!({ "count": subsets.len(), "sampled": sampled, "max_f": max_f, "rows": rows });
    }
    print_json(&out);
    if problem {
        Err(Failure::Found)
    } else {
        Ok(())
    }
}

/// Member spec: "all", "@i,j,..." or "a-b-c,d-e".
fn parse_members(spec: &str, set: &LongestPathSet) -> Result<Members, Failure> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(Members::Indices((0..set.len()).collect()));
    }
    if let Some(list) = spec.strip_prefix('@') {
        let idx = list
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad path index {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Members::Indices(idx));
    }
    let seqs = spec
        .split(',')
        .map(|p| {
            p.split('-')
                .map(|v| v.trim().parse::<usize>().map_err(|_| usage(format!("bad vertex {v:?} in {p:?}"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Members::Sequences(seqs))
}

enum Members {
    Indices(Vec<usize>),
    Sequences(Vec<Vec<usize>>),
}

fn build_system<'g>(
    g: &'g Graph,
    set: &'g LongestPathSet,
    members: &Members,
    relaxed: bool,
) -> Result<PathSystem<'g>, Failure> {
    Ok(match members {
        Members::Indices(idx) => {
            if set.truncated && idx.iter().any(|&i| i >= set.len()) {
                return Err(usage("path index beyond the enumeration cap"));
            }
            PathSystem::from_longest(g, set, idx)?
        }
        Members::Sequences(seqs) => PathSystem::new(g, seqs, !relaxed)?,
    })
}

fn run_checks(system: &PathSystem<'_>, checks: &BTreeSet<CheckId>) -> Result<(Vec<CheckReport>, Value), Failure> {
    let mut reports = Vec::new();
    let mut trace = Value::Null;
    let wants_bounds = checks.iter().any(|c| *c != CheckId::Surgery);
    if wants_bounds {
        let facts = SystemFacts::compute(system)?;
        let k = facts.k;
        let runs = |c| checks.contains(&c);
        if runs(CheckId::Lemma1) {
            reports.push(bounds::lemma1(&facts));
        }
        if runs(CheckId::Lemma2) {
            reports.push(bounds::lemma2(&facts));
        }
        if runs(CheckId::Lemma3i) {
            reports.push(bounds::lemma3_i(&facts));
        }
        if runs(CheckId::Lemma3ii) {
            reports.push(bounds::lemma3_ii(&facts));
        }
        if k == 4 {
            if runs(CheckId::Cor1i) {
                reports.push(bounds::cor1_i(&facts));
            }
            if runs(CheckId::Cor1ii) {
                reports.push(bounds::cor1_ii(&facts));
            }
        }
        if runs(if k == 4 { CheckId::Thm2 } else { CheckId::Thm3 }) {
            reports.push(bounds::theorem(&facts));
        }
    }
    if checks.contains(&CheckId::Surgery) {
        let outcome = surgery_trace(system)?;
        trace = serde_json::to_value(&outcome.trace).expect("traces serialize");
        reports.push(outcome.report);
    }
    Ok((reports, trace))
}

fn verify(arg: &str, k: Option<usize>, checks: &str, paths: Option<&str>, relaxed: bool, caps: &Caps) -> Outcome {
    let g = load_graph(arg)?;
    require_connected(&g)?;
    let mut checks = parse_checks(checks)?;
    let explicit = checks.len() < CheckId::ALL.len();
    let set = enumerate_longest_paths(&g, Some(caps.path_cap))?;
    let graph6 = encode_graph6(&g);

    let systems: Vec<Members> = match paths {
        Some(spec) => vec![parse_members(spec, &set)?],
        None => {
            let k = k.ok_or_else(|| usage("give --k or --paths"))?;
            if set.len() < k {
                Vec::new()
            } else {
                choose_subsets(set.len(), k, caps.subset_cap, caps.seed, &graph6)
                    .0
                    .into_iter()
                    .map(Members::Indices)
                    .collect()
            }
        }
    };
    let mut instances = Vec::with_capacity(systems.len());
    let mut failed = false;
    for members in &systems {
        let system = build_system(&g, &set, members, relaxed)?;
        let sk = system.k();
        if let Some(k) = k {
            if k != sk {
                return Err(usage(format!("--k {k} but {sk} paths were given")));
            }
        }
        if sk < 3 {
            return Err(usage("the bound checks need k >= 3"));
        }
        if sk != 4 && explicit && (checks.contains(&CheckId::Cor1i) || checks.contains(&CheckId::Cor1ii)) {
            return Err(usage("cor1i/cor1ii apply to k = 4 only"));
        }
        if relaxed && !system.longest_certified() {
            checks.retain(|c| *c == CheckId::Surgery);
        }
        let (reports, trace) = run_checks(&system, &checks)?;
        failed |= reports.iter().any(|r| r.status == Status::Fail);
        for r in &reports {
            eprintln!("{} {}: {:?}", r.check, r.instance, r.status);
        }
        let mut entry = json!({ "system": system.to_record(), "reports": reports });
        if !trace.is_null() {
            entry["surgery"] = trace;
        }
        instances.push(entry);
    }
    print_json(&json!({ "schema": REPORT_SCHEMA, "graph6": graph6, "instances": instances }));
    if failed {
        Err(Failure::Found)
    } else {
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    (file, gen_n, gen_max): (Option<&FsPath>, Option<usize>, Option<usize>),
    k: usize,
    checks: &str,
    caps: &Caps,
    instance_cap: usize,
    jobs: usize,
    strict: bool,
    out: Option<&FsPath>,
) -> Outcome {
    let config = ScanConfig {
        k,
        path_cap: caps.path_cap,
        subset_cap: caps.subset_cap,
        instance_cap,
        seed: caps.seed,
        checks: parse_checks(checks)?,
        jobs,
        strict,
    };
    let text;
    let source = match (file, gen_n, gen_max) {
        (Some(path), _, _) => {
            text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Source::Text(&text)
        }
        (None, Some(n), _) => Source::Generated { min_order: n, max_order: n },
        (None, None, Some(n)) => Source::Generated { min_order: 1, max_order: n },
        _ => return Err(usage("give one of --file, --gen-n, --gen-max")),
    };
    let report = scan_stream(source, &config)?;
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    match out {
        Some(path) => fs::write(path, json + "\n").map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    for e in &report.input_errors {
        eprintln!("line {}: {}", e.line, e.message);
    }
    eprintln!("{} in {:.2?}", report.summary(), report.wall_time);
    if report.halted {
        eprintln!("halted after a theorem check failed");
    }
    if report.found_problem() {
        Err(Failure::Found)
    } else {
        Ok(())
    }
}

fn construct(arg: &str, paths: &str, t: usize, verify_order: usize, path_cap: Option<usize>) -> Outcome {
    let g = load_graph(arg)?;
    require_connected(&g)?;
    let set = enumerate_longest_paths(&g, Some(path_cap.unwrap_or(DEFAULT_PATH_CAP)))?;
    let members = parse_members(paths, &set)?;
    if matches!(members, Members::Indices(_)) && paths.trim() == "all" && set.truncated {
        return Err(usage("\"all\" needs the complete set of longest paths; raise --path-cap"));
    }
    let system = build_system(&g, &set, &members, false)?;
    let result = build_gt(&system, t, verify_order)?;
    eprintln!(
        "|V(G_t)| = {} (stated bound {}, extended bound {}), member length {}, f = {}, longest preserved: {}",
        result.order,
        result.stated_bound,
        result.extended_bound,
        result.member_length,
        result.f,
        result.longest_preserved.map_or("not checked".to_string(), |b| b.to_string())
    );
    print_json(&result);
    if result.longest_preserved == Some(false) {
        Err(Failure::Found)
    } else {
        Ok(())
    }
}

fn bounds_cmd(k: usize, n: Option<usize>, table: Option<usize>) -> Outcome {
    if let Some(kmax) = table {
        for row in ratio_table(kmax)? {
            println!(
                "k={}  upper {} ({:.6})  general {} ({:.6})  lower {} ({:.6})",
                row.k,
                row.upper,
                row.upper.to_f64(),
                row.general,
                row.general.to_f64(),
                row.lower,
                row.lower.to_f64()
            );
        }
        return Ok(());
    }
    let n = n.ok_or_else(|| usage("give --n or --table"))?;
    let tb = theorem_bound(k, n)?;
    println!("f ≤ {} ({})", tb.bound, tb.bound.to_f64());
    if let Some(fp) = &tb.four_path {
        println!("four-path bound {} ({}), general bound {} ({})", fp, fp.to_f64(), tb.general, tb.general.to_f64());
    }
    Ok(())
}
