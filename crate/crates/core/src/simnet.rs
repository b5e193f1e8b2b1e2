//! In-process cluster simulation with a bandwidth ledger.
//!
//! Messages are function calls. Every transfer of field elements (and of
//! metadata such as node identities or modification lists) is recorded in a
//! [`BandwidthLedger`], so the communication counts of each algorithm can be
//! read back and checked.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assignment::{find_local_repair_set, Assignment};
use crate::codec::{
    self, encode_node, encode_store, helper_pair_share, min_bw_repair_assemble, plan_min_bw_repair,
    NodeState, SystemConfig,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::goodmatrix::{build_good_matrix, GoodMatrix};
use crate::linalg;
use crate::plucker::{pair_count, NodeVector};

pub const REPORT_FORMAT: &str = "plucker-dss-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Store,
    MinBandwidthRepair,
    LocalRepair,
    ParallelRepair,
    ReconstructFull,
    ReconstructMin,
    Modify,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EventKind::Store => "store",
            EventKind::MinBandwidthRepair => "min-bandwidth-repair",
            EventKind::LocalRepair => "local-repair",
            EventKind::ParallelRepair => "parallel-repair",
            EventKind::ReconstructFull => "reconstruct-full",
            EventKind::ReconstructMin => "reconstruct-min",
            EventKind::Modify => "modify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerRecord {
    pub kind: EventKind,
    /// Field elements carrying file data.
    pub elements: u64,
    /// Identity coordinates, (position, value) pairs and similar.
    pub metadata: u64,
    pub participants: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub events: u64,
    pub elements: u64,
    pub metadata: u64,
}

/// Append-only transfer log; safe to record into from several threads.
#[derive(Debug, Default)]
pub struct BandwidthLedger {
    records: Mutex<Vec<LedgerRecord>>,
}

impl BandwidthLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, record: LedgerRecord) {
        self.records.lock().expect("ledger lock").push(record);
    }

    pub fn records(&self) -> Vec<LedgerRecord> {
        self.records.lock().expect("ledger lock").clone()
    }

    pub fn len(&self) -> usize {
        self.records.lock().expect("ledger lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn totals(&self) -> Totals {
        self.records().iter().fold(Totals::default(), |t, r| Totals {
            events: t.events + 1,
            elements: t.elements + r.elements,
            metadata: t.metadata + r.metadata,
        })
    }

    pub fn totals_by_kind(&self) -> BTreeMap<String, Totals> {
        let mut out: BTreeMap<String, Totals> = BTreeMap::new();
        for r in self.records() {
            let t = out.entry(r.kind.to_string()).or_default();
            t.events += 1;
            t.elements += r.elements;
            t.metadata += r.metadata;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairChoice {
    Auto,
    MinBandwidth,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructChoice {
    Full,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Eq,
    Le,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    /// Every alive node holds the payload of the current file.
    Consistent,
    /// The most recent reconstruction returned the current file.
    Recovered,
    Alive(usize),
    /// Elements moved by the most recent non-assert step.
    Cost(Comparison, u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileSpec {
    Random,
    Values(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffSpec {
    Random(usize),
    Entries(Vec<(usize, u64)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureSpec {
    Ids(Vec<usize>),
    Random(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Store(FileSpec),
    Fail(FailureSpec),
    Repair(usize, RepairChoice),
    /// Materialize a node for a vector that was never stored.
    Add(Vec<u64>),
    ParallelRepair(Vec<usize>),
    Reconstruct(ReconstructChoice),
    Modify(DiffSpec),
    Assert(Check),
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).join(" ")
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Store(FileSpec::Random) => write!(f, "store random"),
            Step::Store(FileSpec::Values(v)) => write!(f, "store {}", join(v)),
            Step::Fail(FailureSpec::Ids(ids)) => write!(f, "fail {}", join(ids)),
            Step::Fail(FailureSpec::Random(k)) => write!(f, "fail random {k}"),
            Step::Repair(id, mode) => {
                let m = match mode {
                    RepairChoice::Auto => "auto",
                    RepairChoice::MinBandwidth => "min",
                    RepairChoice::Local => "local",
                };
                write!(f, "repair {id} {m}")
            }
            Step::Add(v) => write!(f, "add {}", join(v)),
            Step::ParallelRepair(ids) => write!(f, "parallel-repair {}", join(ids)),
            Step::Reconstruct(ReconstructChoice::Full) => write!(f, "reconstruct full"),
            Step::Reconstruct(ReconstructChoice::Min) => write!(f, "reconstruct min"),
            Step::Modify(DiffSpec::Random(d)) => write!(f, "modify random {d}"),
            Step::Modify(DiffSpec::Entries(e)) => {
                let parts: Vec<String> = e.iter().map(|(p, v)| format!("{p}:{v}")).collect();
                write!(f, "modify {}", parts.join(" "))
            }
            Step::Assert(Check::Consistent) => write!(f, "assert consistent"),
            Step::Assert(Check::Recovered) => write!(f, "assert recovered"),
            Step::Assert(Check::Alive(n)) => write!(f, "assert alive {n}"),
            Step::Assert(Check::Cost(c, n)) => {
                let op = match c {
                    Comparison::Eq => "==",
                    Comparison::Le => "<=",
                };
                write!(f, "assert cost {op} {n}")
            }
        }
    }
}

/// An ordered list of steps, one per line in text form:
///
/// ```text
/// store random | store <B symbols>
/// fail <id>... | fail random <k>
/// repair <id> [auto|min|local]
/// add <b symbols>
/// parallel-repair <id>...
/// reconstruct full|min
/// modify <pos>:<delta>... | modify random <d>
/// assert consistent | recovered | alive <n> | cost (==|<=) <n>
/// ```
///
/// Node ids and file positions are 0-based; `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scenario {
    pub steps: Vec<Step>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            steps.push(parse_step(line).map_err(|message| Error::Parse {
                line: n + 1,
                message,
            })?);
        }
        Ok(Self { steps })
    }

    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

fn parse_nums<T: std::str::FromStr>(toks: &[&str]) -> std::result::Result<Vec<T>, String> {
    toks.iter()
        .map(|t| t.parse().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

fn parse_step(line: &str) -> std::result::Result<Step, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let (cmd, args) = toks.split_first().expect("non-empty line");
    let one = |what: &str| -> std::result::Result<usize, String> {
        match args {
            [_, n] => n.parse().map_err(|_| format!("bad {what}: {n:?}")),
            _ => Err(format!("expected `{cmd} random <{what}>`")),
        }
    };
    match *cmd {
        "store" => match args {
            ["random"] => Ok(Step::Store(FileSpec::Random)),
            [] => Err("store needs `random` or the file symbols".into()),
            _ => Ok(Step::Store(FileSpec::Values(parse_nums(args)?))),
        },
        "fail" => match args.first() {
            Some(&"random") => Ok(Step::Fail(FailureSpec::Random(one("count")?))),
            Some(_) => Ok(Step::Fail(FailureSpec::Ids(parse_nums(args)?))),
            None => Err("fail needs node ids".into()),
        },
        "repair" => {
            let id = args
                .first()
                .ok_or("repair needs a node id")?
                .parse()
                .map_err(|_| "bad node id".to_string())?;
            let mode = match args.get(1).copied() {
                None | Some("auto") => RepairChoice::Auto,
                Some("min") => RepairChoice::MinBandwidth,
                Some("local") => RepairChoice::Local,
                Some(m) => return Err(format!("unknown repair mode {m:?}")),
            };
            if args.len() > 2 {
                return Err("too many arguments to repair".into());
            }
            Ok(Step::Repair(id, mode))
        }
        "add" if !args.is_empty() => Ok(Step::Add(parse_nums(args)?)),
        "parallel-repair" if !args.is_empty() => Ok(Step::ParallelRepair(parse_nums(args)?)),
        "reconstruct" => match args {
            ["full"] => Ok(Step::Reconstruct(ReconstructChoice::Full)),
            ["min"] => Ok(Step::Reconstruct(ReconstructChoice::Min)),
            _ => Err("expected `reconstruct full` or `reconstruct min`".into()),
        },
        "modify" => match args.first() {
            Some(&"random") => Ok(Step::Modify(DiffSpec::Random(one("weight")?))),
            _ => {
                let entries = args
                    .iter()
                    .map(|t| {
                        let (p, v) = t.split_once(':').ok_or(format!("expected pos:delta, got {t:?}"))?;
                        Ok((
                            p.parse().map_err(|_| format!("bad position {p:?}"))?,
                            v.parse().map_err(|_| format!("bad value {v:?}"))?,
                        ))
                    })
                    .collect::<std::result::Result<Vec<_>, String>>()?;
                Ok(Step::Modify(DiffSpec::Entries(entries)))
            }
        },
        "assert" => match args {
            ["consistent"] => Ok(Step::Assert(Check::Consistent)),
            ["recovered"] => Ok(Step::Assert(Check::Recovered)),
            ["alive", n] => Ok(Step::Assert(Check::Alive(
                n.parse().map_err(|_| format!("bad count {n:?}"))?,
            ))),
            ["cost", op, n] => {
                let c = match *op {
                    "==" => Comparison::Eq,
                    "<=" => Comparison::Le,
                    _ => return Err(format!("unknown comparison {op:?}")),
                };
                Ok(Step::Assert(Check::Cost(
                    c,
                    n.parse().map_err(|_| format!("bad cost {n:?}"))?,
                )))
            }
            _ => Err(format!("unknown assertion {:?}", args.join(" "))),
        },
        other => Err(format!("unknown step {other:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub step: String,
    pub status: Status,
    pub elements: u64,
    pub metadata: u64,
    pub participants: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub version: u32,
    pub field: String,
    pub b: usize,
    pub file_len: usize,
    pub nodes: usize,
    pub seed: u64,
    pub steps: Vec<StepReport>,
    pub totals: Totals,
    pub by_kind: BTreeMap<String, Totals>,
    pub status: Status,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "field {} b={} B={} n={} seed={}\n",
            self.field, self.b, self.file_len, self.nodes, self.seed
        );
        for s in &self.steps {
            let status = match s.status {
                Status::Ok => "ok",
                Status::Failed => "FAILED",
            };
            out.push_str(&format!(
                "[{:>3}] {:<6} {:<28} elements={:<5} metadata={:<5} {}\n",
                s.index, status, s.step, s.elements, s.metadata, s.detail
            ));
        }
        for (kind, t) in &self.by_kind {
            out.push_str(&format!(
                "total {kind}: events={} elements={} metadata={}\n",
                t.events, t.elements, t.metadata
            ));
        }
        out.push_str(&format!(
            "total: elements={} metadata={}\nstatus: {}\n",
            self.totals.elements,
            self.totals.metadata,
            if self.passed() { "PASS" } else { "FAILED" }
        ));
        out
    }
}

/// Outcome of one repair performed by the cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOutcome {
    pub kind: EventKind,
    pub helpers: Vec<usize>,
    pub elements: u64,
}

/// A registry of nodes sharing one file.
#[derive(Debug)]
pub struct Cluster<F: Field> {
    config: SystemConfig<F>,
    nodes: Vec<NodeState<F::Elem>>,
    ledger: BandwidthLedger,
    rng: ChaCha8Rng,
    locality_cap: usize,
    schedule: GoodMatrix,
    /// Reference copy of the stored file, read only by assertions.
    file: Option<Vec<F::Elem>>,
    last_reconstruction: Option<Vec<F::Elem>>,
}

impl<F: Field> Cluster<F> {
    /// Nodes start empty (all-zero file) and alive; the locality cap for
    /// automatic repair is the assignment's claimed locality, else b.
    pub fn new(field: F, assignment: &Assignment<F::Elem>, seed: u64) -> Result<Self> {
        let b = assignment
            .dim()
            .ok_or_else(|| Error::InvalidParameters("empty assignment".into()))?;
        let config = SystemConfig::new(field, b, assignment.len())?;
        let f = config.field().clone();
        let zero = vec![f.zero(); pair_count(b)];
        let nodes = encode_store(&f, &zero, &assignment.vectors)?;
        Ok(Self {
            locality_cap: assignment.claimed_locality.unwrap_or(b),
            schedule: build_good_matrix(b)?,
            config,
            nodes,
            ledger: BandwidthLedger::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            file: None,
            last_reconstruction: None,
        })
    }

    pub fn config(&self) -> &SystemConfig<F> {
        &self.config
    }

    pub fn nodes(&self) -> &[NodeState<F::Elem>] {
        &self.nodes
    }

    pub fn ledger(&self) -> &BandwidthLedger {
        &self.ledger
    }

    pub fn set_locality_cap(&mut self, cap: usize) {
        self.locality_cap = cap;
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    fn field(&self) -> F {
        self.config.field().clone()
    }

    pub fn store(&mut self, x: Vec<F::Elem>) -> Result<()> {
        let f = self.field();
        let ids: Vec<_> = self.nodes.iter().map(|n| n.id.clone()).collect();
        self.nodes = encode_store(&f, &x, &ids)?;
        self.ledger.record(LedgerRecord {
            kind: EventKind::Store,
            elements: (self.nodes.len() * self.config.alpha()) as u64,
            metadata: 0,
            participants: (0..self.nodes.len()).collect(),
        });
        self.file = Some(x);
        Ok(())
    }

    pub fn random_file(&mut self) -> Vec<F::Elem> {
        let f = self.field();
        (0..self.config.file_len()).map(|_| f.random(&mut self.rng)).collect()
    }

    /// Marks nodes dead, either the given ids or a seeded-uniform sample of
    /// alive nodes. Returns the ids that failed.
    pub fn inject_failures(&mut self, spec: &FailureSpec) -> Result<Vec<usize>> {
        let ids = match spec {
            FailureSpec::Ids(ids) => {
                for &id in ids {
                    let node = self.nodes.get(id).ok_or_else(|| {
                        Error::InvalidParameters(format!("no node {id}"))
                    })?;
                    if !node.alive {
                        return Err(Error::InvalidParameters(format!("node {id} is already dead")));
                    }
                }
                ids.clone()
            }
            FailureSpec::Random(count) => {
                let alive: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].alive).collect();
                if *count > alive.len() {
                    return Err(Error::InvalidParameters(format!(
                        "cannot fail {count} of {} alive nodes",
                        alive.len()
                    )));
                }
                let mut chosen: Vec<usize> = alive.choose_multiple(&mut self.rng, *count).copied().collect();
                chosen.sort_unstable();
                chosen
            }
        };
        for &id in &ids {
            self.nodes[id].alive = false;
        }
        Ok(ids)
    }

    fn alive_ids(&self, exclude: &[usize]) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].alive && !exclude.contains(&i))
            .collect()
    }

    /// Minimum-bandwidth repair of `target`, which need not be in the registry.
    fn min_bw_payload(&self, target: &NodeVector<F::Elem>) -> Result<(Vec<F::Elem>, RepairOutcome)> {
        let f = self.field();
        let plan = plan_min_bw_repair(&f, target, &self.nodes)?;
        let shares = plan
            .helper_indices
            .iter()
            .map(|&i| helper_pair_share(&f, &self.nodes[i], target))
            .collect::<Result<Vec<_>>>()?;
        let payload = min_bw_repair_assemble(&f, &plan, &shares)?;
        let b = self.config.b() as u64;
        let outcome = RepairOutcome {
            kind: EventKind::MinBandwidthRepair,
            elements: shares.len() as u64,
            helpers: plan.helper_indices,
        };
        self.ledger.record(LedgerRecord {
            kind: outcome.kind,
            elements: outcome.elements,
            // each helper learns the failed node's identity
            metadata: outcome.helpers.len() as u64 * b,
            participants: outcome.helpers.clone(),
        });
        Ok((payload, outcome))
    }

    fn local_payloads(
        &self,
        targets: &[NodeVector<F::Elem>],
        helpers: &[usize],
        kind: EventKind,
    ) -> Result<(Vec<Vec<F::Elem>>, RepairOutcome)> {
        let f = self.field();
        let states: Vec<_> = helpers.iter().map(|&i| self.nodes[i].clone()).collect();
        let r = codec::parallel_repair(&f, targets, &states)?;
        let outcome = RepairOutcome {
            kind,
            helpers: helpers.to_vec(),
            elements: r.downloaded as u64,
        };
        self.ledger.record(LedgerRecord {
            kind,
            elements: outcome.elements,
            metadata: 0,
            participants: helpers.to_vec(),
        });
        Ok((r.payloads, outcome))
    }

    fn find_local(&self, target: &NodeVector<F::Elem>, exclude: &[usize]) -> Option<Vec<usize>> {
        let f = self.field();
        let alive = self.alive_ids(exclude);
        let vectors: Vec<_> = alive.iter().map(|&i| self.nodes[i].id.clone()).collect();
        find_local_repair_set(&f, &vectors, target, self.locality_cap)
            .map(|subset| subset.into_iter().map(|k| alive[k]).collect())
    }

    /// Repairs dead node `id` in place and marks it alive.
    pub fn repair(&mut self, id: usize, choice: RepairChoice) -> Result<RepairOutcome> {
        let node = self
            .nodes
            .get(id)
            .ok_or_else(|| Error::InvalidParameters(format!("no node {id}")))?;
        if node.alive {
            return Err(Error::InvalidParameters(format!("node {id} is alive")));
        }
        let target = node.id.clone();
        let (payload, outcome) = match choice {
            RepairChoice::MinBandwidth => self.min_bw_payload(&target)?,
            RepairChoice::Local => {
                let helpers = self.find_local(&target, &[id]).ok_or_else(|| {
                    Error::Unrepairable(format!(
                        "no local repair set of size <= {}",
                        self.locality_cap
                    ))
                })?;
                let (mut p, o) = self.local_payloads(std::slice::from_ref(&target), &helpers, EventKind::LocalRepair)?;
                (p.remove(0), o)
            }
            RepairChoice::Auto => match self.find_local(&target, &[id]) {
                Some(helpers) => {
                    let (mut p, o) =
                        self.local_payloads(std::slice::from_ref(&target), &helpers, EventKind::LocalRepair)?;
                    (p.remove(0), o)
                }
                None => self.min_bw_payload(&target)?,
            },
        };
        let node = &mut self.nodes[id];
        node.payload = payload;
        node.alive = true;
        Ok(outcome)
    }

    /// Materializes a payload for a vector not in the registry, by
    /// minimum-bandwidth repair. The node is not added to the registry.
    pub fn generate_node(&self, raw: &[F::Elem]) -> Result<(NodeState<F::Elem>, RepairOutcome)> {
        let f = self.field();
        let v = NodeVector::normalize(&f, raw)?;
        let (payload, outcome) = self.min_bw_payload(&v)?;
        Ok((NodeState::new(v, payload), outcome))
    }

    /// Repairs several dead nodes from one independent helper set.
    pub fn parallel_repair(&mut self, ids: &[usize]) -> Result<RepairOutcome> {
        for &id in ids {
            match self.nodes.get(id) {
                None => return Err(Error::InvalidParameters(format!("no node {id}"))),
                Some(n) if n.alive => return Err(Error::InvalidParameters(format!("node {id} is alive"))),
                _ => {}
            }
        }
        let f = self.field();
        let b = self.config.b();
        let targets: Vec<_> = ids.iter().map(|&i| self.nodes[i].id.clone()).collect();
        let target_rows: Vec<_> = targets.iter().map(|v| v.coords().to_vec()).collect();
        let target_rank = linalg::rank_of(&f, b, &target_rows)?;
        // smallest independent alive set spanning all targets
        let alive = self.alive_ids(ids);
        let mut chosen = None;
        'search: for size in target_rank..=b.min(alive.len()) {
            for subset in alive.iter().copied().combinations(size) {
                let rows: Vec<_> = subset.iter().map(|&i| self.nodes[i].id.coords().to_vec()).collect();
                if linalg::rank_of(&f, b, &rows)? != size {
                    continue;
                }
                if target_rows.iter().all(|t| linalg::span_contains(&f, &rows, t)) {
                    chosen = Some(subset);
                    break 'search;
                }
            }
        }
        let helpers = chosen.ok_or_else(|| Error::Unrepairable("no helper set spans all failed nodes".into()))?;
        let (payloads, outcome) = self.local_payloads(&targets, &helpers, EventKind::ParallelRepair)?;
        for (&id, p) in ids.iter().zip(payloads) {
            self.nodes[id].payload = p;
            self.nodes[id].alive = true;
        }
        Ok(outcome)
    }

    /// First b independent alive nodes in registry order.
    pub fn reconstruction_set(&self) -> Result<Vec<usize>> {
        let f = self.field();
        let b = self.config.b();
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        let mut chosen = Vec::new();
        for i in self.alive_ids(&[]) {
            rows.push(self.nodes[i].id.coords().to_vec());
            if linalg::rank_of(&f, b, &rows)? == rows.len() {
                chosen.push(i);
                if chosen.len() == b {
                    return Ok(chosen);
                }
            } else {
                rows.pop();
            }
        }
        Err(Error::DependentNodes {
            rank: chosen.len(),
            needed: b,
        })
    }

    pub fn reconstruct(&mut self, choice: ReconstructChoice) -> Result<(Vec<F::Elem>, LedgerRecord)> {
        let f = self.field();
        let b = self.config.b() as u64;
        let ids = self.reconstruction_set()?;
        let states: Vec<_> = ids.iter().map(|&i| self.nodes[i].clone()).collect();
        let (r, kind, metadata) = match choice {
            ReconstructChoice::Full => (codec::reconstruct_full(&f, &states)?, EventKind::ReconstructFull, 0),
            ReconstructChoice::Min => (
                codec::reconstruct_min(&f, &states, &self.schedule)?,
                EventKind::ReconstructMin,
                // each contacted node learns the identities of its partners
                pair_count(b as usize) as u64 * b,
            ),
        };
        let record = LedgerRecord {
            kind,
            elements: r.total_downloaded() as u64,
            metadata,
            participants: ids,
        };
        self.ledger.record(record.clone());
        self.last_reconstruction = Some(r.file.clone());
        Ok((r.file, record))
    }

    pub fn modify(&mut self, diff: &[(usize, F::Elem)]) -> Result<LedgerRecord> {
        let f = self.field();
        let receipt = codec::apply_modification(&f, &mut self.nodes, diff)?;
        if let Some(file) = self.file.as_mut() {
            for &(p, d) in diff {
                file[p] = f.add(file[p], d);
            }
        } else {
            let mut file = vec![f.zero(); self.config.file_len()];
            for &(p, d) in diff {
                file[p] = d;
            }
            self.file = Some(file);
        }
        let record = LedgerRecord {
            kind: EventKind::Modify,
            elements: 0,
            metadata: receipt.total_pairs() as u64,
            participants: self.alive_ids(&[]),
        };
        self.ledger.record(record.clone());
        Ok(record)
    }

    fn random_diff(&mut self, weight: usize) -> Result<Vec<(usize, F::Elem)>> {
        let f = self.field();
        let len = self.config.file_len();
        if weight > len {
            return Err(Error::InvalidDiff(format!("weight {weight} exceeds B = {len}")));
        }
        let mut positions = rand::seq::index::sample(&mut self.rng, len, weight).into_vec();
        positions.sort_unstable();
        Ok(positions
            .into_iter()
            .map(|p| (p, f.random_nonzero(&mut self.rng)))
            .collect())
    }

    /// Ids of alive nodes whose payload differs from the stored file's encoding.
    pub fn inconsistent_nodes(&self) -> Result<Vec<usize>> {
        let f = self.field();
        let zero;
        let file = match &self.file {
            Some(x) => x,
            None => {
                zero = vec![f.zero(); self.config.file_len()];
                &zero
            }
        };
        let mut bad = Vec::new();
        for (i, n) in self.nodes.iter().enumerate().filter(|(_, n)| n.alive) {
            if encode_node(&f, &n.id, file)? != n.payload {
                bad.push(i);
            }
        }
        Ok(bad)
    }

    fn elements(&self, values: &[u64]) -> Result<Vec<F::Elem>> {
        let f = self.field();
        values.iter().map(|&v| f.element(v)).collect()
    }

    fn run_step(&mut self, step: &Step, last_cost: u64) -> Result<(Vec<usize>, String)> {
        match step {
            Step::Store(spec) => {
                let x = match spec {
                    FileSpec::Random => self.random_file(),
                    FileSpec::Values(v) => self.elements(v)?,
                };
                self.store(x)?;
                Ok(((0..self.nodes.len()).collect(), format!("{} nodes", self.nodes.len())))
            }
            Step::Fail(spec) => {
                let ids = self.inject_failures(spec)?;
                Ok((ids.clone(), format!("failed {ids:?}")))
            }
            Step::Repair(id, mode) => {
                let o = self.repair(*id, *mode)?;
                Ok((o.helpers.clone(), format!("{} via {:?}", o.kind, o.helpers)))
            }
            Step::Add(raw) => {
                let raw = self.elements(raw)?;
                let (node, o) = self.generate_node(&raw)?;
                let f = self.field();
                let expected = self.file.as_ref().map(|x| encode_node(&f, &node.id, x)).transpose()?;
                if expected.is_some_and(|e| e != node.payload) {
                    return Err(Error::Internal("generated payload does not match the file".into()));
                }
                Ok((o.helpers.clone(), format!("{} via {:?}", o.kind, o.helpers)))
            }
            Step::ParallelRepair(ids) => {
                let o = self.parallel_repair(ids)?;
                Ok((o.helpers.clone(), format!("{} via {:?}", o.kind, o.helpers)))
            }
            Step::Reconstruct(choice) => {
                let (_, r) = self.reconstruct(*choice)?;
                Ok((r.participants.clone(), format!("{} from {:?}", r.kind, r.participants)))
            }
            Step::Modify(spec) => {
                let diff = match spec {
                    DiffSpec::Random(d) => self.random_diff(*d)?,
                    DiffSpec::Entries(e) => {
                        let f = self.field();
                        e.iter()
                            .map(|&(p, v)| Ok((p, f.element(v)?)))
                            .collect::<Result<Vec<_>>>()?
                    }
                };
                let r = self.modify(&diff)?;
                Ok((r.participants, format!("{} changed positions", diff.len())))
            }
            Step::Assert(check) => {
                let (ok, detail) = match check {
                    Check::Consistent => {
                        let bad = self.inconsistent_nodes()?;
                        (bad.is_empty(), format!("inconsistent nodes {bad:?}"))
                    }
                    Check::Recovered => {
                        let ok = self.last_reconstruction.is_some() && self.last_reconstruction == self.file;
                        (ok, "last reconstruction vs stored file".to_string())
                    }
                    Check::Alive(n) => (self.alive_count() == *n, format!("alive = {}", self.alive_count())),
                    Check::Cost(cmp, n) => {
                        let ok = match cmp {
                            Comparison::Eq => last_cost == *n,
                            Comparison::Le => last_cost <= *n,
                        };
                        (ok, format!("last cost = {last_cost}"))
                    }
                };
                if ok {
                    Ok((Vec::new(), "holds".into()))
                } else {
                    Err(Error::Internal(format!("assertion failed: {detail}")))
                }
            }
        }
    }
}

/// Runs every step; a failing step is marked FAILED and the run continues.
pub fn run_scenario<F: Field>(
    field: F,
    assignment: &Assignment<F::Elem>,
    scenario: &Scenario,
    seed: u64,
) -> Result<Report> {
    let mut cluster = Cluster::new(field, assignment, seed)?;
    Ok(run_on_cluster(&mut cluster, scenario, seed))
}

pub fn run_on_cluster<F: Field>(cluster: &mut Cluster<F>, scenario: &Scenario, seed: u64) -> Report {
    let mut steps = Vec::with_capacity(scenario.steps.len());
    let mut last_cost = 0;
    for (index, step) in scenario.steps.iter().enumerate() {
        // per-step counts are read back from the ledger
        let before = cluster.ledger.totals();
        let (status, participants, detail) = match cluster.run_step(step, last_cost) {
            Ok((p, d)) => (Status::Ok, p, d),
            Err(e) => (Status::Failed, Vec::new(), e.to_string()),
        };
        let after = cluster.ledger.totals();
        let (elements, metadata) = (after.elements - before.elements, after.metadata - before.metadata);
        if !matches!(step, Step::Assert(_)) {
            last_cost = elements;
        }
        steps.push(StepReport {
            index,
            step: step.to_string(),
            status,
            elements,
            metadata,
            participants,
            detail,
        });
    }
    let status = if steps.iter().all(|s| s.status == Status::Ok) {
        Status::Ok
    } else {
        Status::Failed
    };
    Report {
        format: REPORT_FORMAT,
        version: REPORT_VERSION,
        field: cluster.config.field().name(),
        b: cluster.config.b(),
        file_len: cluster.config.file_len(),
        nodes: cluster.nodes.len(),
        seed,
        steps,
        totals: cluster.ledger.totals(),
        by_kind: cluster.ledger.totals_by_kind(),
        status,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepViolation {
    pub failed: Vec<usize>,
    pub node: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub format: &'static str,
    pub field: String,
    pub b: usize,
    pub nodes: usize,
    pub t: usize,
    pub locality_cap: usize,
    pub failure_sets: u64,
    pub repairs: u64,
    pub local_repairs: u64,
    pub min_bandwidth_repairs: u64,
    pub max_local_helpers: usize,
    pub max_repair_elements: u64,
    pub max_reconstruct_full_elements: u64,
    pub max_reconstruct_min_elements: u64,
    pub violation_count: u64,
    /// The first few violations.
    pub violations: Vec<SweepViolation>,
    pub passed: bool,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "field {} b={} n={} t={} locality cap={}\n\
             failure sets checked: {}\nrepairs: {} ({} local, {} minimum-bandwidth)\n\
             max local helpers: {}\nmax repair elements: {}\n\
             max reconstruction elements: full={} min={}\nviolations: {}\n",
            self.field,
            self.b,
            self.nodes,
            self.t,
            self.locality_cap,
            self.failure_sets,
            self.repairs,
            self.local_repairs,
            self.min_bandwidth_repairs,
            self.max_local_helpers,
            self.max_repair_elements,
            self.max_reconstruct_full_elements,
            self.max_reconstruct_min_elements,
            self.violation_count
        );
        for v in &self.violations {
            out.push_str(&format!("  failed {:?} node {:?}: {}\n", v.failed, v.node, v.reason));
        }
        out.push_str(if self.passed { "status: PASS\n" } else { "status: FAILED\n" });
        out
    }
}

const MAX_LISTED_VIOLATIONS: usize = 20;

/// For every failure set of size 1..=t: each failed node must be repairable
/// from the survivors and the file must be reconstructible from them.
pub fn resilience_sweep<F: Field>(
    field: F,
    assignment: &Assignment<F::Elem>,
    t: usize,
    seed: u64,
    budget: u128,
) -> Result<SweepReport> {
    let n = assignment.len();
    let needed: u128 = (1..=t.min(n))
        .map(|k| (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128))
        .sum();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut base = Cluster::new(field, assignment, seed)?;
    let x = base.random_file();
    base.store(x.clone())?;
    let f = base.field();
    let b = base.config.b();
    let cap = base.locality_cap;

    let mut report = SweepReport {
        format: "plucker-dss-sweep",
        field: f.name(),
        b,
        nodes: n,
        t,
        locality_cap: cap,
        failure_sets: 0,
        repairs: 0,
        local_repairs: 0,
        min_bandwidth_repairs: 0,
        max_local_helpers: 0,
        max_repair_elements: 0,
        max_reconstruct_full_elements: 0,
        max_reconstruct_min_elements: 0,
        violation_count: 0,
        violations: Vec::new(),
        passed: true,
    };
    let violate = |report: &mut SweepReport, failed: &[usize], node: Option<usize>, reason: String| {
        report.violation_count += 1;
        report.passed = false;
        if report.violations.len() < MAX_LISTED_VIOLATIONS {
            report.violations.push(SweepViolation {
                failed: failed.to_vec(),
                node,
                reason,
            });
        }
    };

    for k in 1..=t.min(n) {
        for failed in (0..n).combinations(k) {
            report.failure_sets += 1;
            let mut cluster = Cluster {
                config: base.config.clone(),
                nodes: base.nodes.clone(),
                ledger: BandwidthLedger::new(),
                rng: base.rng.clone(),
                locality_cap: cap,
                schedule: base.schedule.clone(),
                file: Some(x.clone()),
                last_reconstruction: None,
            };
            for &i in &failed {
                cluster.nodes[i].alive = false;
            }
            for choice in [ReconstructChoice::Full, ReconstructChoice::Min] {
                match cluster.reconstruct(choice) {
                    Ok((got, rec)) if got == x => {
                        let slot = match choice {
                            ReconstructChoice::Full => &mut report.max_reconstruct_full_elements,
                            ReconstructChoice::Min => &mut report.max_reconstruct_min_elements,
                        };
                        *slot = (*slot).max(rec.elements);
                    }
                    Ok(_) => violate(&mut report, &failed, None, format!("{choice:?} reconstruction returned a different file")),
                    Err(e) => violate(&mut report, &failed, None, format!("{choice:?} reconstruction: {e}")),
                }
            }
            for &id in &failed {
                report.repairs += 1;
                let target = cluster.nodes[id].id.clone();
                let expected = &base.nodes[id].payload;
                let result = match cluster.find_local(&target, &failed) {
                    Some(helpers) => cluster
                        .local_payloads(std::slice::from_ref(&target), &helpers, EventKind::LocalRepair)
                        .map(|(mut p, o)| (p.remove(0), o)),
                    None => cluster.min_bw_payload(&target),
                };
                match result {
                    Ok((payload, o)) if &payload == expected => {
                        report.max_repair_elements = report.max_repair_elements.max(o.elements);
                        if o.kind == EventKind::LocalRepair {
                            report.local_repairs += 1;
                            report.max_local_helpers = report.max_local_helpers.max(o.helpers.len());
                        } else {
                            report.min_bandwidth_repairs += 1;
                        }
                    }
                    Ok(_) => violate(&mut report, &failed, Some(id), "repaired payload differs".into()),
                    Err(e) => violate(&mut report, &failed, Some(id), e.to_string()),
                }
            }
        }
    }
    Ok(report)
}
