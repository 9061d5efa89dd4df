//! Corpus scanning: conjecture checks over k-subsets of longest paths,
//! instance-level bound checks, tallies and extremal tracking.
//!
//! Common vertices, f, the multiplicity counts n_i and hence Lemma 1 and
//! the theorem bound depend on the members only through their vertex sets.
//! Those checks run once per multiset of distinct vertex sets ("classes")
//! and are credited with the number of k-subsets of 𝓛(G) realizing it, so
//! they cover every k-subset whenever the multisets fit under the subset
//! cap. The checks that look at the order of vertices along the members
//! (good paths, surgery) run on a separate seeded sample of k-subsets.

use crate::bitset::VertexSet;
use crate::bounds::{self, theorem_bound, SystemFacts};
use crate::canon::{canonical_form, generate_connected_graphs};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::{encode_graph6, parse_line};
use crate::longest::{enumerate_longest_paths, LongestPathSet, DEFAULT_PATH_CAP};
use crate::path_system::PathSystem;
use crate::rational::Rational;
use crate::report::{CheckId, CheckReport, InstanceId, Status};
use crate::surgery::surgery_trace;
use crate::REPORT_SCHEMA;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

pub const DEFAULT_SUBSET_CAP: usize = 100_000;
pub const DEFAULT_INSTANCE_CAP: usize = 1_000;
pub const DEFAULT_SEED: u64 = 0;
/// Failing reports kept verbatim in a [`SearchReport`]; all are tallied.
pub const MAX_LISTED_FAILURES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub k: usize,
    pub path_cap: usize,
    /// Per graph: class multisets (or, past that, sampled k-subsets) for the
    /// vertex-set checks, and class subsets examined by the conjecture
    /// search.
    pub subset_cap: usize,
    /// Per graph: k-subsets for the path-order checks and the accounting
    /// identity.
    pub instance_cap: usize,
    pub seed: u64,
    pub checks: BTreeSet<CheckId>,
    /// Worker threads. Not serialized: it must not change the report.
    #[serde(skip)]
    pub jobs: usize,
    /// Abort on the first malformed input line.
    pub strict: bool,
}

impl ScanConfig {
    pub fn new(k: usize) -> Self {
        ScanConfig {
            k,
            path_cap: DEFAULT_PATH_CAP,
            subset_cap: DEFAULT_SUBSET_CAP,
            instance_cap: DEFAULT_INSTANCE_CAP,
            seed: DEFAULT_SEED,
            checks: CheckId::ALL.into_iter().collect(),
            jobs: 1,
            strict: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::usage(format!("k must be at least 2, got {}", self.k)));
        }
        if self.path_cap == 0 || self.subset_cap == 0 || self.instance_cap == 0 {
            return Err(Error::usage("caps must be at least 1"));
        }
        if self.jobs == 0 {
            return Err(Error::usage("jobs must be at least 1"));
        }
        Ok(())
    }

    fn runs(&self, id: CheckId) -> bool {
        self.checks.contains(&id)
    }

    fn runs_path_order_checks(&self) -> bool {
        const PATH_ORDER: [CheckId; 6] = [
            CheckId::Lemma2,
            CheckId::Lemma3i,
            CheckId::Lemma3ii,
            CheckId::Cor1i,
            CheckId::Cor1ii,
            CheckId::Surgery,
        ];
        PATH_ORDER.iter().any(|c| self.runs(*c))
    }
}

pub enum Source<'a> {
    /// Built-in generator, all connected graphs with min..=max vertices.
    Generated { min_order: usize, max_order: usize },
    /// graph6/sparse6 text, one graph per line.
    Text(&'a str),
    Graphs(&'a [Graph]),
}

impl Source<'_> {
    fn describe(&self) -> String {
        match self {
            Source::Generated { min_order, max_order } => format!("generated:{min_order}..={max_order}"),
            Source::Text(_) => "graph6".to_string(),
            Source::Graphs(_) => "graphs".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub instance: InstanceId,
    pub f: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ConjectureVerdict {
    NoViolation,
    Violation { witness: Witness },
    Incomplete { reason: String },
}

/// Longest paths grouped by vertex set, classes ordered by first member.
struct Classes<'s> {
    sets: Vec<&'s VertexSet>,
    members: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl<'s> Classes<'s> {
    fn new(set: &'s LongestPathSet) -> Self {
        let mut index: BTreeMap<&VertexSet, usize> = BTreeMap::new();
        let mut classes = Classes {
            sets: Vec::new(),
            members: Vec::new(),
            class_of: Vec::with_capacity(set.len()),
        };
        for (i, p) in set.paths.iter().enumerate() {
            let next = classes.sets.len();
            let c = *index.entry(p.vertex_set()).or_insert(next);
            if c == next {
                classes.sets.push(p.vertex_set());
                classes.members.push(Vec::new());
            }
            classes.members[c].push(i);
            classes.class_of.push(c);
        }
        classes
    }

    fn len(&self) -> usize {
        self.sets.len()
    }
}

/// Whether any `k` longest paths of `graph` miss a common vertex.
///
/// k paths without a common vertex exist iff |𝓛(G)| ≥ k and at most k
/// distinct vertex sets of longest paths have empty intersection. A
/// depth-first search adds only sets that shrink the running intersection,
/// which suffices for inclusion-minimal witnesses.
pub fn check_conjecture(graph: &Graph, k: usize, path_cap: usize, subset_cap: usize) -> Result<ConjectureVerdict> {
    let set = enumerate_longest_paths(graph, Some(path_cap))?;
    conjecture_on(graph, &set, &Classes::new(&set), k, subset_cap)
}

fn conjecture_on(
    graph: &Graph,
    set: &LongestPathSet,
    classes: &Classes<'_>,
    k: usize,
    subset_cap: usize,
) -> Result<ConjectureVerdict> {
    if k < 2 {
        return Err(Error::usage("k must be at least 2"));
    }
    let mut search = ClassSearch {
        sets: &classes.sets,
        k,
        budget: subset_cap,
        exhausted: false,
        chosen: Vec::new(),
    };
    let found = if set.len() >= k {
        search.descend(0, &graph.vertex_set())
    } else {
        None
    };
    if let Some(chosen) = found {
        // One path per chosen class, then any others up to k.
        let mut members: Vec<usize> = chosen.iter().map(|&c| classes.members[c][0]).collect();
        for i in 0..set.len() {
            if members.len() == k {
                break;
            }
            if !members.contains(&i) {
                members.push(i);
            }
        }
        members.sort_unstable();
        let system = PathSystem::from_longest(graph, set, &members)?;
        let f = system.path_distance_value()?.value;
        return Ok(ConjectureVerdict::Violation {
            witness: Witness {
                instance: system.instance_id(),
                f,
            },
        });
    }
    if set.truncated {
        return Ok(ConjectureVerdict::Incomplete {
            reason: format!("longest-path enumeration stopped at the cap of {}", set.len()),
        });
    }
    if search.exhausted {
        return Ok(ConjectureVerdict::Incomplete {
            reason: format!("subset search stopped at the cap of {subset_cap}"),
        });
    }
    Ok(ConjectureVerdict::NoViolation)
}

struct ClassSearch<'a> {
    sets: &'a [&'a VertexSet],
    k: usize,
    budget: usize,
    exhausted: bool,
    chosen: Vec<usize>,
}

impl ClassSearch<'_> {
    fn descend(&mut self, from: usize, common: &VertexSet) -> Option<Vec<usize>> {
        if self.chosen.len() == self.k {
            return None;
        }
        for c in from..self.sets.len() {
            let set = self.sets[c];
            if common.is_subset(set) {
                continue;
            }
            if self.budget == 0 {
                self.exhausted = true;
                return None;
            }
            self.budget -= 1;
            let next = common.intersection(set);
            self.chosen.push(c);
            if next.is_empty() {
                return Some(self.chosen.clone());
            }
            if let Some(found) = self.descend(c + 1, &next) {
                return Some(found);
            }
            self.chosen.pop();
            if self.exhausted {
                return None;
            }
        }
        None
    }
}

/// Counts of k-subsets by outcome. Vertex-set checks are credited with
/// every k-subset their class multiset stands for, hence the wide integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: u128,
    pub fail: u128,
    pub vacuous: u128,
}

impl Tally {
    fn record(&mut self, status: Status, weight: u128) {
        let slot = match status {
            Status::Pass => &mut self.pass,
            Status::Fail => &mut self.fail,
            Status::Vacuous => &mut self.vacuous,
        };
        *slot = slot.saturating_add(weight);
    }

    fn merge(&mut self, other: &Tally) {
        self.pass = self.pass.saturating_add(other.pass);
        self.fail = self.fail.saturating_add(other.fail);
        self.vacuous = self.vacuous.saturating_add(other.vacuous);
    }

    /// Subsets where the hypothesis held and the inequality was evaluated.
    pub fn exercised(&self) -> u128 {
        self.pass + self.fail
    }
}

/// Σ i·n_i = k(ℓ+1) on every certified system checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Accounting {
    pub checked: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extremal {
    pub max_f: u64,
    pub max_ratio: Rational,
    pub witness: Option<Witness>,
}

impl Default for Extremal {
    fn default() -> Self {
        Extremal {
            max_f: 0,
            max_ratio: Rational::zero(),
            witness: None,
        }
    }
}

impl Extremal {
    /// Keeps the first instance (in report order) attaining the maximum ratio.
    fn offer(&mut self, witness: Witness, n: usize) {
        self.max_f = self.max_f.max(witness.f);
        let ratio = Rational::integer(witness.f as i64) / Rational::from_usize(n);
        if self.witness.is_none() || ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.witness = Some(witness);
        }
    }

    fn merge(&mut self, other: &Extremal) {
        self.max_f = self.max_f.max(other.max_f);
        if let Some(w) = &other.witness {
            if self.witness.is_none() || other.max_ratio > self.max_ratio {
                self.max_ratio = other.max_ratio.clone();
                self.witness = Some(w.clone());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictSummary {
    pub verdict: &'static str,
    pub violations: u64,
    pub incomplete: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Witness>,
}

impl VerdictSummary {
    fn new() -> Self {
        VerdictSummary {
            verdict: "no-violation",
            violations: 0,
            incomplete: 0,
            first_violation: None,
        }
    }

    fn add(&mut self, verdict: &ConjectureVerdict) {
        match verdict {
            ConjectureVerdict::NoViolation => {}
            ConjectureVerdict::Violation { witness } => {
                self.violations += 1;
                self.first_violation.get_or_insert_with(|| witness.clone());
            }
            ConjectureVerdict::Incomplete { .. } => self.incomplete += 1,
        }
        self.verdict = if self.violations > 0 {
            "violation"
        } else if self.incomplete > 0 {
            "incomplete"
        } else {
            "no-violation"
        };
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub schema: &'static str,
    pub source: String,
    pub config: ScanConfig,
    pub graphs_scanned: u64,
    pub skipped_disconnected: u64,
    pub input_errors: Vec<InputError>,
    /// Every two longest paths meet (k = 2 regardless of the config).
    pub pairwise: VerdictSummary,
    /// Every k longest paths meet.
    pub conjecture: VerdictSummary,
    /// Graphs whose longest-path enumeration hit the path cap.
    pub truncated_graphs: u64,
    /// k-subsets of 𝓛(G) covered by the vertex-set checks, over all graphs.
    pub subsets_covered: u128,
    /// Class multisets or sampled subsets actually evaluated for them.
    pub class_evaluations: u64,
    /// Graphs where the vertex-set checks fell back to sampling.
    pub sampled_graphs: u64,
    /// k-subsets that went through the path-order checks.
    pub instances_checked: u64,
    /// Graphs where those k-subsets were a sample.
    pub instance_sampled_graphs: u64,
    pub tallies: BTreeMap<CheckId, Tally>,
    pub accounting: Accounting,
    pub extremal: Extremal,
    pub failures: Vec<CheckReport>,
    pub failures_omitted: u64,
    /// Set when a theorem check failed and the scan stopped early.
    pub halted: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchReport {
    pub fn total_failures(&self) -> u128 {
        self.tallies.values().map(|t| t.fail).sum()
    }

    /// Anything that makes the CLI exit with status 1.
    pub fn found_problem(&self) -> bool {
        self.pairwise.violations > 0
            || self.conjecture.violations > 0
            || self.total_failures() > 0
            || self.accounting.mismatches > 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} graphs, {} violations, {} incomplete, {} subsets covered, {} instances, {} check failures, max ratio {}",
            self.graphs_scanned,
            self.conjecture.violations,
            self.conjecture.incomplete,
            self.subsets_covered,
            self.instances_checked,
            self.total_failures(),
            self.extremal.max_ratio
        )
    }
}

/// Result of one graph, merged in canonical-id order.
struct GraphOutcome {
    id: String,
    pairwise: ConjectureVerdict,
    conjecture: ConjectureVerdict,
    truncated: bool,
    covered: u128,
    class_evaluations: u64,
    sampled: bool,
    instances: u64,
    instances_sampled: bool,
    tallies: BTreeMap<CheckId, Tally>,
    accounting: Accounting,
    extremal: Extremal,
    failures: Vec<CheckReport>,
}

impl GraphOutcome {
    fn record(&mut self, report: Option<CheckReport>, check: CheckId, status: Status, weight: u128) {
        self.tallies.entry(check).or_default().record(status, weight);
        if let Some(r) = report.filter(|r| r.status == Status::Fail) {
            self.failures.push(r);
        }
    }
}

pub fn scan_stream(source: Source<'_>, config: &ScanConfig) -> Result<SearchReport> {
    config.validate()?;
    let start = Instant::now();
    let mut input_errors = Vec::new();
    let mut graphs: Vec<Graph> = Vec::new();
    match &source {
        Source::Generated { min_order, max_order } => {
            for n in (*min_order).max(1)..=*max_order {
                graphs.extend(generate_connected_graphs(n)?);
            }
        }
        Source::Graphs(list) => graphs.extend(list.iter().cloned()),
        Source::Text(text) => {
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim();
                let line = line
                    .strip_prefix(">>graph6<<")
                    .or_else(|| line.strip_prefix(">>sparse6<<"))
                    .unwrap_or(line);
                if line.is_empty() {
                    continue;
                }
                match parse_line(line) {
                    Ok(g) => graphs.push(g),
                    Err(e) if config.strict => return Err(Error::line(idx + 1, e.to_string())),
                    Err(e) => input_errors.push(InputError {
                        line: idx + 1,
                        message: e.to_string(),
                    }),
                }
            }
        }
    }
    let before = graphs.len();
    graphs.retain(Graph::is_connected);
    let skipped_disconnected = (before - graphs.len()) as u64;

    let halt = AtomicBool::new(false);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<Option<GraphOutcome>>> = pool.install(|| {
        graphs
            .par_iter()
            .map(|g| {
                if halt.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                let outcome = scan_graph(&canonical_form(g), config)?;
                if outcome
                    .failures
                    .iter()
                    .any(|r| matches!(r.check, CheckId::Thm2 | CheckId::Thm3))
                {
                    halt.store(true, Ordering::Relaxed);
                }
                Ok(Some(outcome))
            })
            .collect()
    });
    let mut outcomes = Vec::with_capacity(results.len());
    for r in results {
        if let Some(o) = r? {
            outcomes.push(o);
        }
    }
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));

    let mut report = SearchReport {
        schema: REPORT_SCHEMA,
        source: source.describe(),
        config: config.clone(),
        graphs_scanned: 0,
        skipped_disconnected,
        input_errors,
        pairwise: VerdictSummary::new(),
        conjecture: VerdictSummary::new(),
        truncated_graphs: 0,
        subsets_covered: 0,
        class_evaluations: 0,
        sampled_graphs: 0,
        instances_checked: 0,
        instance_sampled_graphs: 0,
        tallies: BTreeMap::new(),
        accounting: Accounting::default(),
        extremal: Extremal::default(),
        failures: Vec::new(),
        failures_omitted: 0,
        halted: halt.load(Ordering::Relaxed),
        wall_time: Duration::ZERO,
    };
    for o in &outcomes {
        report.graphs_scanned += 1;
        report.pairwise.add(&o.pairwise);
        report.conjecture.add(&o.conjecture);
        report.truncated_graphs += u64::from(o.truncated);
        report.subsets_covered = report.subsets_covered.saturating_add(o.covered);
        report.class_evaluations += o.class_evaluations;
        report.sampled_graphs += u64::from(o.sampled);
        report.instances_checked += o.instances;
        report.instance_sampled_graphs += u64::from(o.instances_sampled);
        for (id, t) in &o.tallies {
            report.tallies.entry(*id).or_default().merge(t);
        }
        report.accounting.checked += o.accounting.checked;
        report.accounting.mismatches += o.accounting.mismatches;
        report.extremal.merge(&o.extremal);
        for f in &o.failures {
            if report.failures.len() < MAX_LISTED_FAILURES {
                report.failures.push(f.clone());
            } else {
                report.failures_omitted += 1;
            }
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

fn scan_graph(graph: &Graph, config: &ScanConfig) -> Result<GraphOutcome> {
    let id = encode_graph6(graph);
    let set = enumerate_longest_paths(graph, Some(config.path_cap))?;
    let classes = Classes::new(&set);
    let pairwise = conjecture_on(graph, &set, &classes, 2, config.subset_cap)?;
    let conjecture = if config.k == 2 {
        pairwise.clone()
    } else {
        conjecture_on(graph, &set, &classes, config.k, config.subset_cap)?
    };
    let mut out = GraphOutcome {
        id,
        pairwise,
        conjecture,
        truncated: set.truncated,
        covered: 0,
        class_evaluations: 0,
        sampled: false,
        instances: 0,
        instances_sampled: false,
        tallies: BTreeMap::new(),
        accounting: Accounting::default(),
        extremal: Extremal::default(),
        failures: Vec::new(),
    };
    if let ConjectureVerdict::Violation { witness } = &out.conjecture {
        out.extremal.offer(witness.clone(), graph.order());
    }
    let k = config.k;
    if set.len() < k {
        return Ok(out);
    }

    let mut tier = VertexSetTier {
        graph,
        set: &set,
        classes: &classes,
        config,
        bound: (k >= 3).then(|| theorem_bound(k, graph.order()).expect("k >= 3, n >= 1").bound),
        best: None,
    };
    if multiset_count(&classes, k) <= config.subset_cap as u128 {
        for (members, distinct, weight) in class_multisets(&classes, k) {
            tier.evaluate(&members, &distinct, weight, &mut out)?;
            out.class_evaluations += 1;
        }
    } else {
        out.sampled = true;
        let (subsets, _) = choose_subsets(set.len(), k, config.subset_cap, config.seed, &out.id);
        for members in subsets {
            let mut distinct: Vec<usize> = members.iter().map(|&i| classes.class_of[i]).collect();
            distinct.sort_unstable();
            distinct.dedup();
            tier.evaluate(&members, &distinct, 1, &mut out)?;
            out.class_evaluations += 1;
        }
    }
    if let Some((f, members)) = tier.best.take() {
        let instance = InstanceId {
            graph6: out.id.clone(),
            members,
        };
        out.extremal.offer(Witness { instance, f }, graph.order());
    }

    if k >= 3 && config.runs_path_order_checks() {
        let (subsets, sampled) = choose_subsets(set.len(), k, config.instance_cap, config.seed, &out.id);
        out.instances_sampled = sampled;
        for members in subsets {
            let system = PathSystem::from_longest(graph, &set, &members)?;
            path_order_checks(&system, config, &mut out)?;
            out.instances += 1;
        }
    }
    Ok(out)
}

struct VertexSetTier<'a, 'g> {
    graph: &'g Graph,
    set: &'g LongestPathSet,
    classes: &'a Classes<'g>,
    config: &'a ScanConfig,
    bound: Option<Rational>,
    /// First subset attaining the largest f.
    best: Option<(u64, Vec<usize>)>,
}

impl VertexSetTier<'_, '_> {
    /// `members` stands for `weight` k-subsets with the same vertex sets,
    /// those of the classes in `distinct`.
    fn evaluate(&mut self, members: &[usize], distinct: &[usize], weight: u128, out: &mut GraphOutcome) -> Result<()> {
        out.covered = out.covered.saturating_add(weight);
        let mut common = self.classes.sets[distinct[0]].clone();
        for &c in &distinct[1..] {
            common.intersect_with(self.classes.sets[c]);
        }
        let system = || PathSystem::from_longest(self.graph, self.set, members);
        let f = if common.is_empty() {
            system()?.path_distance_value()?.value
        } else {
            0
        };
        if self.best.as_ref().is_none_or(|(best, _)| f > *best) {
            self.best = Some((f, members.to_vec()));
        }
        let Some(bound) = &self.bound else {
            return Ok(());
        };
        let k = self.config.k;
        let theorem_id = if k == 4 { CheckId::Thm2 } else { CheckId::Thm3 };
        if self.config.runs(theorem_id) {
            if Rational::integer(f as i64) <= *bound {
                out.record(None, theorem_id, Status::Pass, weight);
            } else {
                let s = system()?;
                let report = bounds::theorem(&SystemFacts::compute(&s)?);
                let status = report.status;
                out.record(Some(report), theorem_id, status, weight);
            }
        }
        if self.config.runs(CheckId::Lemma1) {
            if f == 0 {
                out.record(None, CheckId::Lemma1, Status::Vacuous, weight);
            } else {
                let s = system()?;
                let report = bounds::lemma1(&SystemFacts::compute(&s)?);
                let status = report.status;
                out.record(Some(report), CheckId::Lemma1, status, weight);
            }
        }
        Ok(())
    }
}

fn path_order_checks(system: &PathSystem<'_>, config: &ScanConfig, out: &mut GraphOutcome) -> Result<()> {
    let facts = SystemFacts::compute(system)?;
    let k = facts.k;
    out.accounting.checked += 1;
    if facts.profile.weighted_count() != k * (facts.ell + 1) {
        out.accounting.mismatches += 1;
    }
    let mut reports = Vec::new();
    if config.runs(CheckId::Lemma2) {
        reports.push(bounds::lemma2(&facts));
    }
    if config.runs(CheckId::Lemma3i) {
        reports.push(bounds::lemma3_i(&facts));
    }
    if config.runs(CheckId::Lemma3ii) {
        reports.push(bounds::lemma3_ii(&facts));
    }
    if k == 4 && config.runs(CheckId::Cor1i) {
        reports.push(bounds::cor1_i(&facts));
    }
    if k == 4 && config.runs(CheckId::Cor1ii) {
        reports.push(bounds::cor1_ii(&facts));
    }
    if config.runs(CheckId::Surgery) {
        reports.push(surgery_trace(system)?.report);
    }
    for r in reports {
        let (check, status) = (r.check, r.status);
        out.record(Some(r), check, status, 1);
    }
    Ok(())
}

/// Number of multisets of k classes, no class used more often than it has
/// members; saturates.
fn multiset_count(classes: &Classes<'_>, k: usize) -> u128 {
    let mut ways = vec![0u128; k + 1];
    ways[0] = 1;
    for members in &classes.members {
        let limit = members.len().min(k);
        let mut next = vec![0u128; k + 1];
        for (r, slot) in next.iter_mut().enumerate() {
            for j in 0..=limit.min(r) {
                *slot = slot.saturating_add(ways[r - j]);
            }
        }
        ways = next;
    }
    ways[k]
}

/// Each feasible multiset as (representative members, distinct classes,
/// number of k-subsets it stands for). The representative takes the first
/// members of each class.
fn class_multisets(classes: &Classes<'_>, k: usize) -> Vec<(Vec<usize>, Vec<usize>, u128)> {
    let m = classes.len();
    let mut room = vec![0usize; m + 1];
    for c in (0..m).rev() {
        room[c] = room[c + 1] + classes.members[c].len().min(k);
    }
    let mut out = Vec::new();
    let mut picked: Vec<(usize, usize)> = Vec::new();
    collect_multisets(classes, &room, 0, k, &mut picked, &mut out);
    out
}

fn collect_multisets(
    classes: &Classes<'_>,
    room: &[usize],
    c: usize,
    remaining: usize,
    picked: &mut Vec<(usize, usize)>,
    out: &mut Vec<(Vec<usize>, Vec<usize>, u128)>,
) {
    if remaining == 0 {
        let mut members: Vec<usize> = picked
            .iter()
            .flat_map(|&(c, mult)| classes.members[c][..mult].iter().copied())
            .collect();
        members.sort_unstable();
        let distinct = picked.iter().map(|&(c, _)| c).collect();
        let weight = picked
            .iter()
            .fold(1u128, |w, &(c, mult)| w.saturating_mul(binomial(classes.members[c].len(), mult)));
        out.push((members, distinct, weight));
        return;
    }
    if room[c] < remaining {
        return;
    }
    for mult in (1..=classes.members[c].len().min(remaining)).rev() {
        picked.push((c, mult));
        collect_multisets(classes, room, c + 1, remaining - mult, picked, out);
        picked.pop();
    }
    collect_multisets(classes, room, c + 1, remaining, picked, out);
}

/// Saturating binomial coefficient.
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc · (n−i) is divisible by i+1 at every step.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i + 1) as u128,
            None => return u128::MAX,
        }
    }
    acc
}

/// k-subsets of `0..len` to check: all of them in lexicographic order when
/// there are at most `cap`, otherwise `cap` distinct subsets drawn from a
/// generator seeded by `seed` and the graph id, also in lexicographic order.
pub fn choose_subsets(len: usize, k: usize, cap: usize, seed: u64, graph_id: &str) -> (Vec<Vec<usize>>, bool) {
    if k > len {
        return (Vec::new(), false);
    }
    if binomial(len, k) <= cap as u128 {
        let all = itertools::Itertools::combinations(0..len, k).collect();
        return (all, false);
    }
    let mut rng = subset_rng(seed, graph_id);
    let mut picked = BTreeSet::new();
    while picked.len() < cap {
        picked.insert(random_subset(&mut rng, len, k));
    }
    (picked.into_iter().collect(), true)
}

fn subset_rng(seed: u64, graph_id: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(graph_id.as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Uniform k-subset by Floyd's algorithm, sorted.
fn random_subset(rng: &mut ChaCha8Rng, len: usize, k: usize) -> Vec<usize> {
    let mut chosen = BTreeSet::new();
    for j in len - k..len {
        let t = rng.gen_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::longest::Path;

    #[test]
    fn conjecture_examples() {
        let v = check_conjecture(&star(3), 3, DEFAULT_PATH_CAP, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(v, ConjectureVerdict::NoViolation);
        let v = check_conjecture(&cycle(5), 3, DEFAULT_PATH_CAP, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(v, ConjectureVerdict::NoViolation);
        assert!(check_conjecture(&Graph::empty(2), 3, 10, 10).is_err());
    }

    #[test]
    fn truncation_is_incomplete() {
        let v = check_conjecture(&complete(5), 3, 10, DEFAULT_SUBSET_CAP).unwrap();
        assert!(matches!(v, ConjectureVerdict::Incomplete { .. }));
    }

    // Enumeration never yields disjoint longest paths, so feed a handmade set.
    #[test]
    fn class_search_reports_empty_intersections() {
        let g = path(4);
        let set = LongestPathSet {
            length: 1,
            paths: vec![Path::new(&g, &[0, 1]).unwrap(), Path::new(&g, &[2, 3]).unwrap()],
            truncated: false,
        };
        let v = conjecture_on(&g, &set, &Classes::new(&set), 2, 10).unwrap();
        let ConjectureVerdict::Violation { witness } = v else {
            panic!("expected a violation");
        };
        assert_eq!(witness.instance.members, vec![0, 1]);
        assert_eq!(witness.f, 1);
    }

    #[test]
    fn multisets_cover_every_subset() {
        // K4: 12 Hamiltonian paths, one class.
        let g = complete(4);
        let set = enumerate_longest_paths(&g, None).unwrap();
        let classes = Classes::new(&set);
        assert_eq!(classes.len(), 1);
        assert_eq!(multiset_count(&classes, 3), 1);
        let ms = class_multisets(&classes, 3);
        assert_eq!(ms, vec![(vec![0, 1, 2], vec![0], 220)]);

        // K1,3: three classes of one path each.
        let g = star(3);
        let set = enumerate_longest_paths(&g, None).unwrap();
        let classes = Classes::new(&set);
        assert_eq!(multiset_count(&classes, 2), 3);
        let total: u128 = class_multisets(&classes, 2).iter().map(|m| m.2).sum();
        assert_eq!(total, 3);

        for g in generate_connected_graphs(6).unwrap() {
            let set = enumerate_longest_paths(&g, None).unwrap();
            let classes = Classes::new(&set);
            for k in 2..=4 {
                let ms = class_multisets(&classes, k);
                assert_eq!(ms.len() as u128, multiset_count(&classes, k));
                assert_eq!(ms.iter().map(|m| m.2).sum::<u128>(), binomial(set.len(), k));
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(20160, 4), 6_880_525_481_889_360);
        assert_eq!(binomial(1_000_000, 40), u128::MAX);
    }

    #[test]
    fn subset_choice() {
        let (all, sampled) = choose_subsets(5, 3, 10, 0, "x");
        assert!(!sampled);
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        let (some, sampled) = choose_subsets(50, 3, 100, 7, "x");
        assert!(sampled);
        assert_eq!(some.len(), 100);
        assert!(some.windows(2).all(|w| w[0] < w[1]));
        assert!(some.iter().all(|s| s.len() == 3 && s.windows(2).all(|w| w[0] < w[1]) && s[2] < 50));
        assert_eq!(some, choose_subsets(50, 3, 100, 7, "x").0);
        assert_ne!(some, choose_subsets(50, 3, 100, 8, "x").0);
        assert_ne!(some, choose_subsets(50, 3, 100, 7, "y").0);
    }

    #[test]
    fn scan_small_corpus() {
        let report = scan_stream(Source::Generated { min_order: 5, max_order: 5 }, &ScanConfig::new(3)).unwrap();
        assert_eq!(report.graphs_scanned, 21);
        assert_eq!(report.conjecture.violations, 0);
        assert_eq!(report.conjecture.verdict, "no-violation");
        assert_eq!(report.extremal.max_ratio, Rational::zero());
        assert_eq!(report.total_failures(), 0);
        assert_eq!(report.accounting.mismatches, 0);
        assert_eq!(report.sampled_graphs, 0);
        assert_eq!(report.tallies[&CheckId::Thm3].pass, report.subsets_covered);
        assert!(report.instances_checked > 0);
    }

    #[test]
    fn text_source_errors_and_disconnected() {
        let text = "Cs\n\nnot a graph\nC?\n:Cdv\n";
        let report = scan_stream(Source::Text(text), &ScanConfig::new(3)).unwrap();
        assert_eq!(report.graphs_scanned, 2);
        assert_eq!(report.skipped_disconnected, 1);
        assert_eq!(report.input_errors.len(), 1);
        assert_eq!(report.input_errors[0].line, 3);
        let mut strict = ScanConfig::new(3);
        strict.strict = true;
        assert!(matches!(scan_stream(Source::Text(text), &strict), Err(Error::Line { line: 3, .. })));
    }

    #[test]
    fn empty_input() {
        let report = scan_stream(Source::Text(""), &ScanConfig::new(3)).unwrap();
        assert_eq!(report.graphs_scanned, 0);
        assert!(report.tallies.is_empty());
        assert!(!report.found_problem());
    }

    #[test]
    fn invalid_config() {
        assert!(scan_stream(Source::Text(""), &ScanConfig::new(1)).is_err());
        let mut c = ScanConfig::new(3);
        c.subset_cap = 0;
        assert!(c.validate().is_err());
    }
}
